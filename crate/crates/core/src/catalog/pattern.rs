//! Configuration patterns and their detection in embedded graphs.

use std::collections::{BTreeSet, HashMap};

use crate::classify::{classify_neighbor, SClass};
use crate::error::{parse_err, Error, Result};
use crate::graph::{strip_comment, EmbeddedGraph};

/// Inclusive degree range; `hi = None` is unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeRange {
    pub lo: usize,
    pub hi: Option<usize>,
}

impl DegreeRange {
    pub const FREE: DegreeRange = DegreeRange { lo: 0, hi: None };

    pub fn contains(&self, d: usize) -> bool {
        d >= self.lo && self.hi.is_none_or(|h| d <= h)
    }

    fn intersect(self, o: DegreeRange) -> DegreeRange {
        let hi = match (self.hi, o.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        DegreeRange { lo: self.lo.max(o.lo), hi }
    }

    /// Parses `7`, `7+` or `7-`.
    fn parse_flank(s: &str) -> Option<DegreeRange> {
        if let Some(k) = s.strip_suffix('+') {
            Some(DegreeRange { lo: k.parse().ok()?, hi: None })
        } else if let Some(k) = s.strip_suffix('-') {
            Some(DegreeRange { lo: 0, hi: Some(k.parse().ok()?) })
        } else {
            let k = s.parse().ok()?;
            Some(DegreeRange { lo: k, hi: Some(k) })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Ne,
    Le,
    Ge,
    Lt,
    Gt,
}

impl Cmp {
    /// Splits a leading operator off `s`.
    fn split(s: &str) -> Option<(Cmp, &str)> {
        for (tok, c) in [("<=", Cmp::Le), (">=", Cmp::Ge), ("!=", Cmp::Ne), ("=", Cmp::Eq), ("<", Cmp::Lt), (">", Cmp::Gt)]
        {
            if let Some(rest) = s.strip_prefix(tok) {
                return Some((c, rest));
            }
        }
        None
    }

    /// Compares `a` against `b`, where `None` stands for infinity.
    pub fn holds(self, a: Option<usize>, b: Option<usize>) -> bool {
        let ord = match (a, b) {
            (Some(x), Some(y)) => x.cmp(&y),
            (None, None) => std::cmp::Ordering::Equal,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (Some(_), None) => std::cmp::Ordering::Less,
        };
        match self {
            Cmp::Eq => ord.is_eq(),
            Cmp::Ne => ord.is_ne(),
            Cmp::Le => ord.is_le(),
            Cmp::Ge => ord.is_ge(),
            Cmp::Lt => ord.is_lt(),
            Cmp::Gt => ord.is_gt(),
        }
    }
}

/// Neighbor role of a pattern vertex relative to an anchor vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Weak(usize),
    SemiWeak(usize),
    /// Weak, with the two flanking triangle apexes matching the ranges in some order.
    Pq(usize, DegreeRange, DegreeRange),
    S3(usize),
    S5(usize),
    S6(usize),
    E3(usize),
    Triangulated,
}

#[derive(Clone, Debug)]
pub struct PatternVertex {
    pub label: String,
    pub degree: DegreeRange,
    pub roles: Vec<Role>,
}

#[derive(Clone, Debug)]
pub struct ConfigPattern {
    pub id: String,
    pub vertices: Vec<PatternVertex>,
    pub edges: Vec<(usize, usize)>,
    pub nonedges: Vec<(usize, usize)>,
    /// Triples that must (or must not) bound a triangular face.
    pub trifaces: Vec<([usize; 3], bool)>,
    /// `(u, a, b, op, k)` on the triangle-distance around `u`; `k = None` is infinity.
    pub tridists: Vec<(usize, usize, usize, Cmp, Option<usize>)>,
    pub degsums: Vec<(usize, usize, Cmp, usize)>,
    /// Declared automorphisms as vertex permutations.
    pub autos: Vec<Vec<usize>>,
    /// Certificate ids from the corpus, or `None` for case-analysis-only configurations.
    pub certificates: Option<Vec<String>>,
}

/// An injective map from pattern vertices (by index) to graph vertices.
pub type Match = Vec<usize>;

impl ConfigPattern {
    pub fn parse(text: &str) -> Result<ConfigPattern> {
        let mut p = ConfigPattern {
            id: String::new(),
            vertices: Vec::new(),
            edges: Vec::new(),
            nonedges: Vec::new(),
            trifaces: Vec::new(),
            tridists: Vec::new(),
            degsums: Vec::new(),
            autos: Vec::new(),
            certificates: None,
        };
        let lines: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l).split_whitespace().collect::<Vec<_>>()))
            .filter(|(_, w)| !w.is_empty())
            .collect();
        let mut index: HashMap<String, usize> = HashMap::new();
        for (ln, w) in &lines {
            if w[0] == "vertex" {
                let label = w.get(1).ok_or_else(|| parse_err(*ln, "vertex needs a label"))?;
                if index.insert(label.to_string(), index.len()).is_some() {
                    return Err(parse_err(*ln, format!("vertex `{label}` declared twice")));
                }
            }
        }
        let mut have_cert = false;
        for (ln, w) in &lines {
            let ln = *ln;
            let look = |s: &str| {
                index.get(s).copied().ok_or_else(|| parse_err(ln, format!("undeclared vertex `{s}`")))
            };
            match (w[0], &w[1..]) {
                ("config", [id]) => p.id = id.to_string(),
                ("vertex", [label, rest @ ..]) => {
                    let mut degree = DegreeRange::FREE;
                    let mut roles = Vec::new();
                    for tok in rest {
                        if *tok == "free" {
                            continue;
                        }
                        if let Some(cond) = tok.strip_prefix("deg") {
                            let (op, k) = Cmp::split(cond).ok_or_else(|| parse_err(ln, format!("bad degree `{tok}`")))?;
                            let k: usize = k.parse().map_err(|_| parse_err(ln, format!("bad degree `{tok}`")))?;
                            let r = match op {
                                Cmp::Eq => DegreeRange { lo: k, hi: Some(k) },
                                Cmp::Le => DegreeRange { lo: 0, hi: Some(k) },
                                Cmp::Ge => DegreeRange { lo: k, hi: None },
                                _ => return Err(parse_err(ln, format!("bad degree `{tok}`"))),
                            };
                            degree = degree.intersect(r);
                        } else {
                            roles.push(parse_role(tok, &look).map_err(|e| match e {
                                Error::Parse { .. } => e,
                                other => parse_err(ln, other),
                            })?);
                        }
                    }
                    p.vertices.push(PatternVertex { label: label.to_string(), degree, roles });
                }
                ("edge", [a, b]) => p.edges.push((look(a)?, look(b)?)),
                ("nonedge", [a, b]) => p.nonedges.push((look(a)?, look(b)?)),
                ("triface", [a, b, c, yn]) => {
                    let yes = match *yn {
                        "yes" => true,
                        "no" => false,
                        _ => return Err(parse_err(ln, "triface expects yes or no")),
                    };
                    p.trifaces.push(([look(a)?, look(b)?, look(c)?], yes));
                }
                ("tridist", [u, a, b, rel @ ..]) if matches!(rel.len(), 1 | 2) => {
                    let (op, k) = match rel {
                        [op, k] => (Cmp::split(op).filter(|(_, r)| r.is_empty()).map(|(c, _)| c), *k),
                        [both] => match Cmp::split(both) {
                            Some((c, k)) => (Some(c), k),
                            None => (None, ""),
                        },
                        _ => unreachable!(),
                    };
                    let op = op.ok_or_else(|| parse_err(ln, format!("bad relation `{}`", rel.join(" "))))?;
                    let k = if k == "inf" {
                        None
                    } else {
                        Some(k.parse().map_err(|_| parse_err(ln, format!("bad distance `{k}`")))?)
                    };
                    p.tridists.push((look(u)?, look(a)?, look(b)?, op, k));
                }
                ("degsum", [a, b, bound]) => {
                    let (op, k) = Cmp::split(bound).ok_or_else(|| parse_err(ln, format!("bad bound `{bound}`")))?;
                    let k = k.parse().map_err(|_| parse_err(ln, format!("bad bound `{bound}`")))?;
                    p.degsums.push((look(a)?, look(b)?, op, k));
                }
                ("auto", perm) => {
                    let perm: Vec<usize> = perm.iter().map(|s| look(s)).collect::<Result<_>>()?;
                    let distinct: BTreeSet<usize> = perm.iter().copied().collect();
                    if perm.len() != index.len() || distinct.len() != perm.len() {
                        return Err(parse_err(ln, "auto must list every vertex exactly once"));
                    }
                    p.autos.push(perm);
                }
                ("certificate", ["none"]) => {
                    have_cert = true;
                }
                ("certificate", ids) if !ids.is_empty() => {
                    have_cert = true;
                    p.certificates.get_or_insert_with(Vec::new).extend(ids.iter().map(|s| s.to_string()));
                }
                _ => return Err(parse_err(ln, format!("cannot parse `{}`", w.join(" ")))),
            }
        }
        if p.id.is_empty() || p.vertices.is_empty() {
            return Err(Error::Invalid("pattern needs a config id and at least one vertex".into()));
        }
        if !have_cert {
            return Err(Error::Invalid(format!("{}: missing certificate line", p.id)));
        }
        for &(u, a, b, _, _) in &p.tridists {
            if !p.has_edge(u, a) || !p.has_edge(u, b) {
                return Err(Error::Invalid(format!("{}: tridist needs both vertices adjacent to the center", p.id)));
            }
        }
        for v in &p.vertices {
            for r in &v.roles {
                if let Some(a) = role_anchor(r) {
                    let me = index[&v.label];
                    if !p.has_edge(me, a) {
                        return Err(Error::Invalid(format!("{}: role of `{}` needs an edge to its anchor", p.id, v.label)));
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }

    pub fn label(&self, i: usize) -> &str {
        &self.vertices[i].label
    }

    /// Pattern vertices in search order: each one after the first has a
    /// pattern edge to an earlier one whenever the pattern allows it.
    fn search_order(&self) -> Vec<usize> {
        let k = self.len();
        let mut order = Vec::with_capacity(k);
        let mut placed = vec![false; k];
        while order.len() < k {
            let next = (0..k)
                .filter(|&i| !placed[i])
                .find(|&i| order.iter().any(|&j| self.has_edge(i, j)))
                .or_else(|| (0..k).find(|&i| !placed[i]))
                .expect("unplaced vertex remains");
            placed[next] = true;
            order.push(next);
        }
        order
    }

    /// All vertex indices that a constraint mentions, with a checker.
    fn constraints(&self) -> Vec<(Vec<usize>, Constraint)> {
        let mut out = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            for r in &v.roles {
                let mut vs = vec![i];
                vs.extend(role_anchor(r));
                out.push((vs, Constraint::Role(i, *r)));
            }
        }
        for &(a, b) in &self.edges {
            out.push((vec![a, b], Constraint::Edge(a, b, true)));
        }
        for &(a, b) in &self.nonedges {
            out.push((vec![a, b], Constraint::Edge(a, b, false)));
        }
        for &(t, yes) in &self.trifaces {
            out.push((t.to_vec(), Constraint::Face(t, yes)));
        }
        for &(u, a, b, op, k) in &self.tridists {
            out.push((vec![u, a, b], Constraint::Dist(u, a, b, op, k)));
        }
        for &(a, b, op, k) in &self.degsums {
            out.push((vec![a, b], Constraint::DegSum(a, b, op, k)));
        }
        out
    }

    /// Closure of the declared automorphisms, identity included.
    pub fn automorphism_group(&self) -> Vec<Vec<usize>> {
        let id: Vec<usize> = (0..self.len()).collect();
        let mut group: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(g) = frontier.pop() {
            for s in &self.autos {
                let h: Vec<usize> = g.iter().map(|&x| s[x]).collect();
                if group.insert(h.clone()) {
                    frontier.push(h);
                }
            }
        }
        group.into_iter().collect()
    }

    /// Whether a full mapping satisfies every constraint.
    pub fn satisfied_by(&self, g: &EmbeddedGraph, m: &[usize]) -> bool {
        m.len() == self.len()
            && self.vertices.iter().zip(m).all(|(v, &x)| v.degree.contains(g.degree(x)))
            && self.constraints().iter().all(|(_, c)| c.check(g, m))
    }
}

fn role_anchor(r: &Role) -> Option<usize> {
    match *r {
        Role::Weak(a) | Role::SemiWeak(a) | Role::Pq(a, _, _) => Some(a),
        Role::S3(a) | Role::S5(a) | Role::S6(a) | Role::E3(a) => Some(a),
        Role::Triangulated => None,
    }
}

fn parse_role(tok: &str, look: &dyn Fn(&str) -> Result<usize>) -> Result<Role> {
    if tok == "triangulated" {
        return Ok(Role::Triangulated);
    }
    let (name, rest) = tok.split_once('@').ok_or_else(|| Error::Invalid(format!("unknown role `{tok}`")))?;
    let (anchor, arg) = match rest.split_once(':') {
        Some((a, x)) => (a, Some(x)),
        None => (rest, None),
    };
    let a = look(anchor)?;
    let role = match (name, arg) {
        ("weak", None) => Role::Weak(a),
        ("semiweak", None) => Role::SemiWeak(a),
        ("s3", None) => Role::S3(a),
        ("s5", None) => Role::S5(a),
        ("s6", None) => Role::S6(a),
        ("e3", None) => Role::E3(a),
        ("pq", Some(x)) => {
            let (p, q) = x.split_once(',').ok_or_else(|| Error::Invalid(format!("bad flank pair in `{tok}`")))?;
            match (DegreeRange::parse_flank(p), DegreeRange::parse_flank(q)) {
                (Some(p), Some(q)) => Role::Pq(a, p, q),
                _ => return Err(Error::Invalid(format!("bad flank pair in `{tok}`"))),
            }
        }
        _ => return Err(Error::Invalid(format!("unknown role `{tok}`"))),
    };
    Ok(role)
}

#[derive(Clone, Copy, Debug)]
enum Constraint {
    Role(usize, Role),
    Edge(usize, usize, bool),
    Face([usize; 3], bool),
    Dist(usize, usize, usize, Cmp, Option<usize>),
    DegSum(usize, usize, Cmp, usize),
}

impl Constraint {
    fn check(&self, g: &EmbeddedGraph, m: &[usize]) -> bool {
        match *self {
            Constraint::Role(i, r) => role_holds(g, m[i], r, m),
            Constraint::Edge(a, b, want) => g.has_edge(m[a], m[b]) == want,
            Constraint::Face([a, b, c], want) => g.is_triangular_face(m[a], m[b], m[c]) == want,
            Constraint::Dist(u, a, b, op, k) => match g.triangle_distance(m[u], m[a], m[b]) {
                Ok(d) => op.holds(d, k),
                Err(_) => false,
            },
            Constraint::DegSum(a, b, op, k) => op.holds(Some(g.degree(m[a]) + g.degree(m[b])), Some(k)),
        }
    }
}

fn role_holds(g: &EmbeddedGraph, v: usize, r: Role, m: &[usize]) -> bool {
    if r == Role::Triangulated {
        return g.is_triangulated(v).unwrap_or(false);
    }
    let anchor = m[role_anchor(&r).expect("non-triangulated roles have anchors")];
    let Ok(c) = classify_neighbor(g, anchor, v) else { return false };
    match r {
        Role::Weak(_) => c.is_weak(),
        Role::SemiWeak(_) => c.is_semi_weak(),
        Role::Pq(_, p, q) => match c.pq {
            Some((a, b)) => (p.contains(a) && q.contains(b)) || (p.contains(b) && q.contains(a)),
            None => false,
        },
        Role::S3(_) => c.s_class == Some(SClass::S3),
        Role::S5(_) => c.s_class == Some(SClass::S5),
        Role::S6(_) => c.s_class == Some(SClass::S6),
        Role::E3(_) => c.e3 == Some(true),
        Role::Triangulated => unreachable!(),
    }
}

/// All matches of `p` in `g`, one per orbit of the declared automorphisms.
pub fn detect(g: &EmbeddedGraph, p: &ConfigPattern) -> Vec<Match> {
    detect_where(g, p, |_| true)
}

/// Matches whose image meets `near`.
pub fn detect_near(g: &EmbeddedGraph, p: &ConfigPattern, near: &[usize]) -> Vec<Match> {
    detect_where(g, p, |m| m.iter().any(|x| near.contains(x)))
}

fn detect_where(g: &EmbeddedGraph, p: &ConfigPattern, keep: impl Fn(&[usize]) -> bool) -> Vec<Match> {
    let order = p.search_order();
    let pos: Vec<usize> = {
        let mut pos = vec![0; p.len()];
        for (k, &i) in order.iter().enumerate() {
            pos[i] = k;
        }
        pos
    };
    // Each constraint is checked at the step where its last vertex is placed.
    let mut due: Vec<Vec<Constraint>> = vec![Vec::new(); p.len()];
    for (vs, c) in p.constraints() {
        let step = vs.iter().map(|&i| pos[i]).max().expect("constraints mention vertices");
        due[step].push(c);
    }
    let group = p.automorphism_group();
    let mut seen: BTreeSet<Match> = BTreeSet::new();
    let mut m = vec![usize::MAX; p.len()];
    let mut used = vec![false; g.n()];
    let mut search = Search { g, p, order: &order, due: &due, m: &mut m, used: &mut used, out: Vec::new() };
    search.run(0);
    let found = std::mem::take(&mut search.out);
    for full in found {
        if !keep(&full) {
            continue;
        }
        let canon = group
            .iter()
            .map(|s| {
                let mut img = vec![0; full.len()];
                for (i, &x) in full.iter().enumerate() {
                    img[s[i]] = x;
                }
                img
            })
            .min()
            .expect("group contains the identity");
        seen.insert(canon);
    }
    seen.into_iter().collect()
}

struct Search<'a> {
    g: &'a EmbeddedGraph,
    p: &'a ConfigPattern,
    order: &'a [usize],
    due: &'a [Vec<Constraint>],
    m: &'a mut Vec<usize>,
    used: &'a mut Vec<bool>,
    out: Vec<Match>,
}

impl Search<'_> {
    fn run(&mut self, step: usize) {
        if step == self.order.len() {
            self.out.push(self.m.clone());
            return;
        }
        let i = self.order[step];
        let anchor = self.order[..step].iter().copied().find(|&j| self.p.has_edge(i, j));
        let candidates: Vec<usize> = match anchor {
            Some(j) => self.g.rotation(self.m[j]).to_vec(),
            None => (0..self.g.n()).collect(),
        };
        for x in candidates {
            if self.used[x] || !self.p.vertices[i].degree.contains(self.g.degree(x)) {
                continue;
            }
            self.m[i] = x;
            if self.due[step].iter().all(|c| c.check(self.g, self.m)) {
                self.used[x] = true;
                self.run(step + 1);
                self.used[x] = false;
            }
            self.m[i] = usize::MAX;
        }
    }
}

/// Whether `c` arises from `c_prime` by lowering degrees while keeping
/// adjacency, faces and triangle-distances; roles are not compared.
pub fn is_subconfiguration(c: &ConfigPattern, c_prime: &ConfigPattern) -> bool {
    if c.len() != c_prime.len() {
        return false;
    }
    let k = c.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut used = vec![false; k];
    sub_search(c, c_prime, 0, &mut perm, &mut used)
}

fn sub_search(c: &ConfigPattern, cp: &ConfigPattern, i: usize, phi: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
    if i == c.len() {
        return same_structure(c, cp, phi);
    }
    for y in 0..cp.len() {
        if used[y] || !upper_le(c.vertices[i].degree, cp.vertices[y].degree) {
            continue;
        }
        let consistent = (0..i).all(|j| c.has_edge(i, j) == cp.has_edge(y, phi[j]));
        if !consistent {
            continue;
        }
        phi[i] = y;
        used[y] = true;
        if sub_search(c, cp, i + 1, phi, used) {
            return true;
        }
        used[y] = false;
    }
    false
}

fn upper_le(a: DegreeRange, b: DegreeRange) -> bool {
    match (a.hi, b.hi) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

fn same_structure(c: &ConfigPattern, cp: &ConfigPattern, phi: &[usize]) -> bool {
    let norm_faces = |faces: &[([usize; 3], bool)], map: &dyn Fn(usize) -> usize| -> BTreeSet<([usize; 3], bool)> {
        faces
            .iter()
            .map(|&(t, y)| {
                let mut t = t.map(map);
                t.sort_unstable();
                (t, y)
            })
            .collect()
    };
    let norm_dists = |ds: &[(usize, usize, usize, Cmp, Option<usize>)], map: &dyn Fn(usize) -> usize| {
        ds.iter()
            .map(|&(u, a, b, op, k)| {
                let (a, b) = (map(a).min(map(b)), map(a).max(map(b)));
                (map(u), a, b, format!("{op:?}"), k)
            })
            .collect::<BTreeSet<_>>()
    };
    let norm_non = |ns: &[(usize, usize)], map: &dyn Fn(usize) -> usize| {
        ns.iter().map(|&(a, b)| (map(a).min(map(b)), map(a).max(map(b)))).collect::<BTreeSet<_>>()
    };
    let f = |x: usize| phi[x];
    let id = |x: usize| x;
    norm_faces(&c.trifaces, &f) == norm_faces(&cp.trifaces, &id)
        && norm_dists(&c.tridists, &f) == norm_dists(&cp.tridists, &id)
        && norm_non(&c.nonedges, &f) == norm_non(&cp.nonedges, &id)
}
