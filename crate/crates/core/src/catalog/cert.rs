//! Reduction certificates: a drawn neighborhood, which elements are
//! uncolored, forgotten or precolored, and the monomial to check.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;

use crate::error::{parse_err, Error, Result};
use crate::graph::strip_comment;
use crate::nss::ConstraintGraph;
use crate::poly::Monomial;
use crate::total::PALETTE;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Elem {
    Vertex(usize),
    Edge(usize),
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub id: String,
    pub lemma: String,
    vertices: Vec<(String, usize)>,
    /// `(name, a, b)`; unnamed edges are context and stay colored.
    edges: Vec<(Option<String>, usize, usize)>,
    uncolor: Vec<String>,
    forget: Vec<String>,
    /// Color classes assigned before the polynomial step.
    classes: Vec<Vec<String>>,
    adjust: Vec<(String, i64)>,
    /// Caps given outright, for standalone graphs with no surrounding coloring.
    fixed: Vec<(String, i64)>,
    checks: Vec<(String, usize)>,
    pub target: Monomial,
    pub coeff: BigInt,
}

impl Certificate {
    pub fn parse(id: &str, text: &str) -> Result<Certificate> {
        let mut c = Certificate {
            id: id.to_string(),
            lemma: String::new(),
            vertices: Vec::new(),
            edges: Vec::new(),
            uncolor: Vec::new(),
            forget: Vec::new(),
            classes: Vec::new(),
            adjust: Vec::new(),
            fixed: Vec::new(),
            checks: Vec::new(),
            target: Monomial::one(),
            coeff: BigInt::from(0),
        };
        let mut vindex: HashMap<String, usize> = HashMap::new();
        let mut names: HashSet<String> = HashSet::new();
        let mut have_target = false;
        let mut have_coeff = false;
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let words: Vec<&str> = strip_comment(raw).split_whitespace().collect();
            let Some((&kw, rest)) = words.split_first() else { continue };
            match (kw, rest) {
                ("lemma", [id]) => c.lemma = id.to_string(),
                ("vertex", [name, deg]) => {
                    let d: usize = deg.parse().map_err(|_| parse_err(ln, "bad degree"))?;
                    if !names.insert(name.to_string()) {
                        return Err(parse_err(ln, format!("`{name}` declared twice")));
                    }
                    vindex.insert(name.to_string(), c.vertices.len());
                    c.vertices.push((name.to_string(), d));
                }
                ("edge", [name, a, b]) => {
                    let look = |v: &str| {
                        vindex.get(v).copied().ok_or_else(|| parse_err(ln, format!("unknown vertex `{v}`")))
                    };
                    let (a, b) = (look(a)?, look(b)?);
                    if a == b {
                        return Err(parse_err(ln, "loop edge"));
                    }
                    if c.edges.iter().any(|&(_, x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
                        return Err(parse_err(ln, "edge drawn twice"));
                    }
                    let name = if *name == "_" {
                        None
                    } else {
                        if !names.insert(name.to_string()) {
                            return Err(parse_err(ln, format!("`{name}` declared twice")));
                        }
                        Some(name.to_string())
                    };
                    c.edges.push((name, a, b));
                }
                ("uncolor", xs) => c.uncolor.extend(xs.iter().map(|s| s.to_string())),
                ("forget", xs) => c.forget.extend(xs.iter().map(|s| s.to_string())),
                ("precolor", xs) => c.classes.extend(xs.iter().map(|s| vec![s.to_string()])),
                ("same", [x, y]) => c.classes.push(vec![x.to_string(), y.to_string()]),
                ("adjust", [x, k]) => {
                    let k: i64 = k.parse().map_err(|_| parse_err(ln, "bad adjustment"))?;
                    c.adjust.push((x.to_string(), k));
                }
                ("cap", [x, k]) => {
                    let k: i64 = k.parse().map_err(|_| parse_err(ln, "bad cap"))?;
                    c.fixed.push((x.to_string(), k));
                }
                ("check", [x, k]) => {
                    let k: usize = k.parse().map_err(|_| parse_err(ln, "bad cap"))?;
                    c.checks.push((x.to_string(), k));
                }
                ("target", m) => {
                    c.target = Monomial::parse(&m.join("")).map_err(|e| parse_err(ln, e))?;
                    have_target = true;
                }
                ("coeff", [z]) => {
                    c.coeff = z.parse().map_err(|_| parse_err(ln, "bad coefficient"))?;
                    have_coeff = true;
                }
                _ => return Err(parse_err(ln, format!("cannot parse `{}`", words.join(" ")))),
            }
        }
        if c.lemma.is_empty() || !have_target || !have_coeff {
            return Err(Error::Invalid(format!("{id}: lemma, target and coeff are required")));
        }
        let uncolored: HashSet<&String> = c.uncolor.iter().collect();
        let referenced = c
            .forget
            .iter()
            .chain(c.classes.iter().flatten())
            .chain(c.adjust.iter().map(|(x, _)| x))
            .chain(c.fixed.iter().map(|(x, _)| x))
            .chain(c.checks.iter().map(|(x, _)| x));
        for x in referenced.chain(c.uncolor.iter()) {
            if !names.contains(x) {
                return Err(Error::Invalid(format!("{id}: unknown element `{x}`")));
            }
        }
        for x in c.forget.iter().chain(c.classes.iter().flatten()) {
            if !uncolored.contains(x) {
                return Err(Error::Invalid(format!("{id}: `{x}` is not uncolored")));
            }
        }
        Ok(c)
    }

    fn element(&self, name: &str) -> Elem {
        if let Some(i) = self.vertices.iter().position(|(n, _)| n == name) {
            return Elem::Vertex(i);
        }
        let j = self
            .edges
            .iter()
            .position(|(n, _, _)| n.as_deref() == Some(name))
            .expect("names are validated at parse time");
        Elem::Edge(j)
    }

    fn drawn_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(_, a, b)| a == v || b == v).count()
    }

    fn edge_uncolored(&self, j: usize, unc: &HashSet<&str>) -> bool {
        self.edges[j].0.as_deref().is_some_and(|n| unc.contains(n))
    }

    fn adjacent(&self, x: &Elem, y: &Elem) -> bool {
        match (x, y) {
            (Elem::Vertex(u), Elem::Vertex(v)) => {
                self.edges.iter().any(|&(_, a, b)| (a, b) == (*u, *v) || (a, b) == (*v, *u))
            }
            (Elem::Vertex(v), Elem::Edge(j)) | (Elem::Edge(j), Elem::Vertex(v)) => {
                let (_, a, b) = self.edges[*j];
                a == *v || b == *v
            }
            (Elem::Edge(i), Elem::Edge(j)) => {
                let (_, a, b) = self.edges[*i];
                let (_, c, d) = self.edges[*j];
                i != j && (a == c || a == d || b == c || b == d)
            }
        }
    }

    /// Worst-case list sizes once everything outside the uncolored set is colored.
    pub fn baseline_caps(&self) -> BTreeMap<String, i64> {
        let unc: HashSet<&str> = self.uncolor.iter().map(String::as_str).collect();
        let mut out = BTreeMap::new();
        for x in &self.uncolor {
            let used = match self.element(x) {
                Elem::Vertex(v) => {
                    let mut k = 2 * (self.vertices[v].1 as i64 - self.drawn_degree(v) as i64);
                    for (j, &(_, a, b)) in self.edges.iter().enumerate() {
                        if a != v && b != v {
                            continue;
                        }
                        let w = if a == v { b } else { a };
                        k += !unc.contains(self.vertices[w].0.as_str()) as i64;
                        k += !self.edge_uncolored(j, &unc) as i64;
                    }
                    k
                }
                Elem::Edge(j) => {
                    let (_, a, b) = self.edges[j];
                    let mut k = 0;
                    for v in [a, b] {
                        k += !unc.contains(self.vertices[v].0.as_str()) as i64;
                        k += self.vertices[v].1 as i64 - self.drawn_degree(v) as i64;
                    }
                    for (i, &(_, c, d)) in self.edges.iter().enumerate() {
                        if i != j && (c == a || c == b || d == a || d == b) {
                            k += !self.edge_uncolored(i, &unc) as i64;
                        }
                    }
                    k
                }
            };
            out.insert(x.clone(), PALETTE as i64 - used);
        }
        for (x, k) in &self.fixed {
            out.insert(x.clone(), *k);
        }
        out
    }

    /// Stated caps that disagree with the computed baseline, as `(element, stated, computed)`.
    pub fn cap_mismatches(&self) -> Vec<(String, usize, i64)> {
        let base = self.baseline_caps();
        self.checks
            .iter()
            .filter(|(x, k)| base.get(x) != Some(&(*k as i64)))
            .map(|(x, k)| (x.clone(), *k, base.get(x).copied().unwrap_or(0)))
            .collect()
    }

    /// Elements left as polynomial variables.
    pub fn variables(&self) -> Vec<String> {
        let gone: HashSet<&String> = self.forget.iter().chain(self.classes.iter().flatten()).collect();
        self.uncolor.iter().filter(|x| !gone.contains(x)).cloned().collect()
    }

    /// The constraint graph on the remaining variables, with caps, target and expectation.
    pub fn constraint_graph(&self) -> Result<ConstraintGraph> {
        let vars = self.variables();
        let elems: Vec<Elem> = vars.iter().map(|x| self.element(x)).collect();
        let mut h = ConstraintGraph::new(vars.iter().map(|x| variable_name(x)));
        for i in 0..vars.len() {
            for j in i + 1..vars.len() {
                if self.adjacent(&elems[i], &elems[j]) {
                    h.add_edge(&variable_name(&vars[i]), &variable_name(&vars[j]))?;
                }
            }
        }
        let base = self.baseline_caps();
        let class_elems: Vec<Vec<Elem>> =
            self.classes.iter().map(|cl| cl.iter().map(|x| self.element(x)).collect()).collect();
        for (x, e) in vars.iter().zip(&elems) {
            let mut cap = base[x];
            cap -= class_elems.iter().filter(|cl| cl.iter().any(|y| self.adjacent(e, y))).count() as i64;
            cap += self.adjust.iter().filter(|(y, _)| y == x).map(|(_, k)| k).sum::<i64>();
            if cap < 0 {
                return Err(Error::Invalid(format!("{}: `{x}` has negative cap", self.id)));
            }
            h.caps.insert(variable_name(x), cap as usize);
        }
        h.target = Some(self.target.clone());
        h.expect = Some(self.coeff.clone());
        Ok(h)
    }
}

/// Polynomial variable for an element name: its uppercase form.
pub fn variable_name(element: &str) -> String {
    element.to_ascii_uppercase()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EDGE: &str = "lemma C1\nvertex u 4\nvertex v 6\nedge e u v\nuncolor u e\ncheck e 1\ncheck u 3\ntarget U\ncoeff -1\n";

    #[test]
    fn single_edge_certificate() {
        let c = Certificate::parse("C1", EDGE).unwrap();
        assert!(c.cap_mismatches().is_empty());
        let h = c.constraint_graph().unwrap();
        assert_eq!(h.vars(), ["U", "E"]);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.caps["U"], 3);
        assert_eq!(h.expect, Some(BigInt::from(-1)));
    }

    #[test]
    fn wrong_check_is_reported() {
        let c = Certificate::parse("C1", &EDGE.replace("check u 3", "check u 4")).unwrap();
        assert_eq!(c.cap_mismatches(), vec![("u".to_string(), 4, 3)]);
    }

    #[test]
    fn missing_target_is_an_error() {
        assert!(Certificate::parse("C1", &EDGE.replace("target U\n", "")).is_err());
    }
}
