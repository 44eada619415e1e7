//! Constraint polynomials: coefficient extraction under degree caps,
//! suitable-monomial search, and certificate checks.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{parse_err, Error, Result};
use crate::graph::strip_comment;
use crate::poly::{Monomial, SparsePolynomial, VariableOrder};

/// Per-variable residual list sizes.
pub type CapVector = BTreeMap<String, usize>;

/// Conflict graph on the uncolored elements, with optional caps and target.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintGraph {
    vars: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    pub caps: CapVector,
    pub target: Option<Monomial>,
    /// Expected coefficient of the target, when the file records one.
    pub expect: Option<BigInt>,
}

impl ConstraintGraph {
    pub fn new<I: IntoIterator<Item = String>>(vars: I) -> ConstraintGraph {
        let mut g = ConstraintGraph::default();
        for v in vars {
            g.add_var(&v);
        }
        g
    }

    pub fn add_var(&mut self, v: &str) -> usize {
        if let Some(&i) = self.index.get(v) {
            return i;
        }
        self.vars.push(v.to_string());
        self.index.insert(v.to_string(), self.vars.len() - 1);
        self.vars.len() - 1
    }

    /// Adds the pair `{x, y}`; repeated pairs are ignored.
    pub fn add_edge(&mut self, x: &str, y: &str) -> Result<()> {
        if x == y {
            return Err(Error::Invalid(format!("self-loop on `{x}`")));
        }
        let a = self.var(x)?;
        let b = self.var(y)?;
        let e = (a.min(b), a.max(b));
        if !self.edges.contains(&e) {
            self.edges.push(e);
        }
        Ok(())
    }

    pub fn var(&self, v: &str) -> Result<usize> {
        self.index.get(v).copied().ok_or_else(|| Error::UnknownVariable(v.into()))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn parse(text: &str) -> Result<ConstraintGraph> {
        let mut g = ConstraintGraph::default();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = strip_comment(raw).trim();
            let mut words = line.split_whitespace();
            let Some(kw) = words.next() else { continue };
            let rest: Vec<&str> = words.collect();
            match kw {
                "vars" => {
                    for v in rest {
                        g.add_var(v);
                    }
                }
                "adj" => {
                    let [x, y] = rest[..] else {
                        return Err(parse_err(ln, "expected `adj <x> <y>`"));
                    };
                    g.add_edge(x, y).map_err(|e| parse_err(ln, e))?;
                }
                "cap" => {
                    let [x, k] = rest[..] else {
                        return Err(parse_err(ln, "expected `cap <x> <k>`"));
                    };
                    g.var(x).map_err(|e| parse_err(ln, e))?;
                    let k: usize = k.parse().map_err(|_| parse_err(ln, "bad cap"))?;
                    g.caps.insert(x.to_string(), k);
                }
                "target" => {
                    let m = Monomial::parse(&rest.join("")).map_err(|e| parse_err(ln, e))?;
                    g.target = Some(m);
                }
                "expect" => {
                    let [z] = rest[..] else {
                        return Err(parse_err(ln, "expected `expect <integer>`"));
                    };
                    g.expect = Some(z.parse().map_err(|_| parse_err(ln, "bad integer"))?);
                }
                other => return Err(parse_err(ln, format!("unknown keyword `{other}`"))),
            }
        }
        Ok(g)
    }

    pub fn to_text(&self, ord: &VariableOrder) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "vars {}", self.vars.join(" "));
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "adj {} {}", self.vars[a], self.vars[b]);
        }
        for v in &self.vars {
            if let Some(k) = self.caps.get(v) {
                let _ = writeln!(s, "cap {v} {k}");
            }
        }
        if let Some(m) = &self.target {
            let _ = writeln!(s, "target {}", m.display(ord));
        }
        if let Some(z) = &self.expect {
            let _ = writeln!(s, "expect {z}");
        }
        s
    }

    /// Factors as `(plus, minus)` index pairs: `X_plus - X_minus` with `plus < minus` in `ord`.
    fn factors(&self, ord: &VariableOrder) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .map(|&(a, b)| if ord.less(&self.vars[a], &self.vars[b]) { (a, b) } else { (b, a) })
            .collect()
    }

    fn exponents(&self, m: &Monomial) -> Result<Vec<u32>> {
        let mut e = vec![0; self.vars.len()];
        for (v, k) in m.iter() {
            e[self.var(v)?] = k;
        }
        Ok(e)
    }
}

/// Full product of `(X - Y)` over the edges; exponential, for small graphs.
pub fn constraint_polynomial(h: &ConstraintGraph, ord: &VariableOrder) -> SparsePolynomial {
    let mut p = SparsePolynomial::one(h.vars.clone());
    for (a, b) in h.factors(ord) {
        p = p.mul(&SparsePolynomial::difference(h.vars.clone(), a, b));
    }
    p
}

/// Ring operations for the DP: a fast checked machine type and an exact fallback.
trait Coef: Clone + Zero {
    /// `self += sign * other`; false on overflow.
    fn acc(&mut self, other: &Self, negate: bool) -> bool;
    fn unit() -> Self;
}

impl Coef for i128 {
    fn unit() -> Self {
        1
    }

    fn acc(&mut self, other: &Self, negate: bool) -> bool {
        let r = if negate { self.checked_sub(*other) } else { self.checked_add(*other) };
        match r {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
}

impl Coef for BigInt {
    fn unit() -> Self {
        BigInt::from(1)
    }

    fn acc(&mut self, other: &Self, negate: bool) -> bool {
        if negate {
            *self -= other;
        } else {
            *self += other;
        }
        true
    }
}

/// Greedy elimination order: repeatedly pick the variable whose remaining
/// factors open the fewest new variables, and emit all of its factors.
fn elimination_order(n: usize, factors: &[(usize, usize)]) -> Vec<usize> {
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(a, b)) in factors.iter().enumerate() {
        inc[a].push(i);
        inc[b].push(i);
    }
    let mut done = vec![false; factors.len()];
    let mut open = vec![false; n];
    let mut order = Vec::with_capacity(factors.len());
    while order.len() < factors.len() {
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for x in 0..n {
            let pending: Vec<usize> = inc[x].iter().copied().filter(|&f| !done[f]).collect();
            if pending.is_empty() {
                continue;
            }
            let mut fresh: HashSet<usize> = HashSet::new();
            if !open[x] {
                fresh.insert(x);
            }
            for &f in &pending {
                let (a, b) = factors[f];
                let y = if a == x { b } else { a };
                if !open[y] {
                    fresh.insert(y);
                }
            }
            let key = (fresh.len(), !open[x] as usize, pending.len(), x);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let x = best.expect("pending factors remain").3;
        let mut pending: Vec<usize> = inc[x].iter().copied().filter(|&f| !done[f]).collect();
        pending.sort_by_key(|&f| {
            let (a, b) = factors[f];
            if a == x {
                b
            } else {
                a
            }
        });
        for f in pending {
            done[f] = true;
            let (a, b) = factors[f];
            open[a] = true;
            open[b] = true;
            order.push(f);
        }
    }
    order
}

/// Coefficient of `target` in the product of `X_a - X_b` over `factors`,
/// by dynamic programming over exponent vectors of the open variables.
fn dp<C: Coef>(n: usize, factors: &[(usize, usize)], target: &[u32]) -> Option<C> {
    let order = elimination_order(n, factors);
    let mut remaining = vec![0u32; n];
    for &(a, b) in factors {
        remaining[a] += 1;
        remaining[b] += 1;
    }
    for x in 0..n {
        if remaining[x] < target[x] || (remaining[x] == 0 && target[x] > 0) {
            return Some(C::zero());
        }
    }
    // slot[x] is the position of x in the state key while x is open.
    let mut slot: Vec<Option<usize>> = vec![None; n];
    let mut open: Vec<usize> = Vec::new();
    let mut states: HashMap<Vec<u8>, C> = HashMap::new();
    states.insert(Vec::new(), C::unit());
    for f in order {
        let (a, b) = factors[f];
        for x in [a, b] {
            if slot[x].is_none() {
                slot[x] = Some(open.len());
                open.push(x);
                states = states
                    .into_iter()
                    .map(|(mut k, c)| {
                        k.push(0);
                        (k, c)
                    })
                    .collect();
            }
        }
        let (sa, sb) = (slot[a].unwrap(), slot[b].unwrap());
        remaining[a] -= 1;
        remaining[b] -= 1;
        let mut next: HashMap<Vec<u8>, C> = HashMap::with_capacity(states.len() * 2);
        for (k, c) in &states {
            for (up, other, neg) in [(sa, sb, false), (sb, sa, true)] {
                let (xu, xo) = (open[up], open[other]);
                let eu = k[up] as u32 + 1;
                let eo = k[other] as u32;
                if eu > target[xu] || eo + remaining[xo] < target[xo] || eu + remaining[xu] < target[xu] {
                    continue;
                }
                let mut k2 = k.clone();
                k2[up] = eu as u8;
                let slot_c = next.entry(k2).or_insert_with(C::zero);
                if !slot_c.acc(c, neg) {
                    return None;
                }
            }
        }
        next.retain(|_, c| !c.is_zero());
        states = next;
        // Close variables with no factors left.
        for x in [a, b] {
            if remaining[x] == 0 {
                if let Some(s) = slot[x].take() {
                    let last = open.len() - 1;
                    open.swap_remove(s);
                    if s != last {
                        slot[open[s]] = Some(s);
                    }
                    states = states
                        .into_iter()
                        .filter(|(k, _)| k[s] as u32 == target[x])
                        .map(|(mut k, c)| {
                            k.swap_remove(s);
                            (k, c)
                        })
                        .collect();
                }
            }
        }
        if states.is_empty() {
            return Some(C::zero());
        }
    }
    Some(states.remove(&Vec::new()).unwrap_or_else(C::zero))
}

fn run_dp(n: usize, factors: &[(usize, usize)], target: &[u32]) -> BigInt {
    match dp::<i128>(n, factors, target) {
        Some(c) => BigInt::from(c),
        None => dp::<BigInt>(n, factors, target).expect("exact arithmetic cannot overflow"),
    }
}

/// Result of a coefficient query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficient {
    pub value: BigInt,
    pub target_degree: u32,
    /// Number of factors, i.e. the degree of the constraint polynomial.
    pub poly_degree: usize,
}

impl Coefficient {
    pub fn degree_matches(&self) -> bool {
        self.target_degree as usize == self.poly_degree
    }
}

/// Exact coefficient of `target` in the constraint polynomial of `h`.
pub fn coefficient(h: &ConstraintGraph, ord: &VariableOrder, target: &Monomial) -> Result<Coefficient> {
    let e = h.exponents(target)?;
    if e.iter().any(|&k| k > u8::MAX as u32) {
        return Err(Error::Invalid("exponent exceeds 255".into()));
    }
    let factors = h.factors(ord);
    let value = if target.degree() as usize == factors.len() {
        run_dp(h.vars.len(), &factors, &e)
    } else {
        BigInt::zero()
    };
    Ok(Coefficient { value, target_degree: target.degree(), poly_degree: factors.len() })
}

/// Outcome of a suitable-monomial search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSearch {
    pub found: Option<(Monomial, BigInt)>,
    /// Search nodes visited, leaves included.
    pub nodes: u64,
    /// False when the node cap stopped the search before it was exhausted.
    pub complete: bool,
}

/// Depth-first search over factor orientations for a monomial of full degree,
/// below every cap, with nonzero coefficient.
pub fn find_monomial(
    h: &ConstraintGraph,
    ord: &VariableOrder,
    caps: &CapVector,
    node_cap: Option<u64>,
) -> Result<MonomialSearch> {
    let n = h.vars.len();
    let mut budget = vec![0u32; n];
    for (i, v) in h.vars.iter().enumerate() {
        let c = *caps.get(v).ok_or_else(|| Error::Invalid(format!("no cap for `{v}`")))?;
        budget[i] = c.saturating_sub(1).min(u8::MAX as usize) as u32;
    }
    let all = h.factors(ord);
    let factors: Vec<(usize, usize)> = elimination_order(n, &all).into_iter().map(|f| all[f]).collect();
    let mut s = Search {
        n,
        factors: &factors,
        all: &all,
        budget,
        exps: vec![0; n],
        slack_total: 0,
        visited: HashSet::new(),
        leaves: HashSet::new(),
        nodes: 0,
        cap: node_cap.unwrap_or(u64::MAX),
        found: None,
        stopped: false,
    };
    s.slack_total = s.budget.iter().map(|&b| b as u64).sum();
    s.dfs(0);
    let found = s.found.take().map(|(e, c)| {
        let m = Monomial::from_pairs(e.iter().enumerate().map(|(i, &k)| (h.vars[i].clone(), k as u32)));
        (m, c)
    });
    let complete = found.is_some() || !s.stopped;
    Ok(MonomialSearch { found, nodes: s.nodes, complete })
}

struct Search<'a> {
    n: usize,
    factors: &'a [(usize, usize)],
    all: &'a [(usize, usize)],
    budget: Vec<u32>,
    exps: Vec<u8>,
    slack_total: u64,
    visited: HashSet<(usize, Vec<u8>)>,
    leaves: HashSet<Vec<u8>>,
    nodes: u64,
    cap: u64,
    found: Option<(Vec<u8>, BigInt)>,
    stopped: bool,
}

impl Search<'_> {
    fn dfs(&mut self, depth: usize) -> bool {
        if self.found.is_some() {
            return true;
        }
        if self.nodes >= self.cap {
            self.stopped = true;
            return true;
        }
        self.nodes += 1;
        if (self.factors.len() - depth) as u64 > self.slack_total {
            return false;
        }
        if depth == self.factors.len() {
            if self.leaves.insert(self.exps.clone()) {
                let t: Vec<u32> = self.exps.iter().map(|&k| k as u32).collect();
                let c = run_dp(self.n, self.all, &t);
                if !c.is_zero() {
                    self.found = Some((self.exps.clone(), c));
                    return true;
                }
            }
            return false;
        }
        if !self.visited.insert((depth, self.exps.clone())) {
            return false;
        }
        let (a, b) = self.factors[depth];
        let slack = |x: usize, s: &Self| s.budget[x] as i64 - s.exps[x] as i64;
        let mut choices = [a, b];
        if slack(b, self) > slack(a, self) {
            choices.swap(0, 1);
        }
        for x in choices {
            if (self.exps[x] as u32) < self.budget[x] {
                self.exps[x] += 1;
                self.slack_total -= 1;
                let stop = self.dfs(depth + 1);
                self.exps[x] -= 1;
                self.slack_total += 1;
                if stop {
                    return true;
                }
            }
        }
        false
    }
}

/// Per-condition outcome of a certificate check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    /// Condition 1: the monomial has the degree of the polynomial.
    pub degree_ok: bool,
    /// Condition 2 failures as `(variable, exponent, cap)`.
    pub cap_violations: Vec<(String, u32, usize)>,
    /// Variables without a cap (treated as violations).
    pub missing_caps: Vec<String>,
    /// Condition 3: the coefficient, nonzero when the condition holds.
    pub coefficient: BigInt,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.degree_ok
            && self.cap_violations.is_empty()
            && self.missing_caps.is_empty()
            && !self.coefficient.is_zero()
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.degree_ok {
            parts.push("condition 1 failed (degree)".to_string());
        }
        for (v, e, c) in &self.cap_violations {
            parts.push(format!("condition 2 failed ({v}: exponent {e} >= cap {c})"));
        }
        for v in &self.missing_caps {
            parts.push(format!("no cap for {v}"));
        }
        if self.coefficient.is_zero() {
            parts.push("condition 3 failed (coefficient 0)".to_string());
        }
        if parts.is_empty() {
            format!("ok, coefficient {}", self.coefficient)
        } else {
            format!("{}; coefficient {}", parts.join("; "), self.coefficient)
        }
    }
}

pub fn verify_certificate(
    h: &ConstraintGraph,
    ord: &VariableOrder,
    caps: &CapVector,
    m: &Monomial,
) -> Result<CertificateReport> {
    let c = coefficient(h, ord, m)?;
    let mut cap_violations = Vec::new();
    let mut missing_caps = Vec::new();
    for v in &h.vars {
        let e = m.exponent(v);
        match caps.get(v) {
            Some(&k) if (e as usize) >= k => cap_violations.push((v.clone(), e, k)),
            Some(_) => {}
            None => missing_caps.push(v.clone()),
        }
    }
    Ok(CertificateReport {
        degree_ok: c.degree_matches(),
        cap_violations,
        missing_caps,
        coefficient: c.value,
    })
}

/// Whether `value` matches `expected` only up to sign.
pub fn sign_only_mismatch(value: &BigInt, expected: &BigInt) -> bool {
    value != expected && value.abs() == expected.abs() && !value.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vars: &[&str], adj: &[(&str, &str)]) -> ConstraintGraph {
        let mut h = ConstraintGraph::new(vars.iter().map(|s| s.to_string()));
        for (x, y) in adj {
            h.add_edge(x, y).unwrap();
        }
        h
    }

    fn cycle4() -> ConstraintGraph {
        graph(&["E1", "E2", "E3", "E4"], &[("E1", "E2"), ("E2", "E3"), ("E3", "E4"), ("E4", "E1")])
    }

    fn caps(pairs: &[(&str, usize)]) -> CapVector {
        pairs.iter().map(|(v, k)| (v.to_string(), *k)).collect()
    }

    #[test]
    fn single_edge() {
        let h = graph(&["E", "U"], &[("E", "U")]);
        let ord = VariableOrder::default();
        let c = coefficient(&h, &ord, &Monomial::parse("U").unwrap()).unwrap();
        assert_eq!(c.value, BigInt::from(-1));
        let p = constraint_polynomial(&h, &ord);
        assert_eq!(p.coefficient(&Monomial::parse("E").unwrap()), BigInt::from(1));
    }

    #[test]
    fn four_cycle() {
        let h = cycle4();
        let ord = VariableOrder::default();
        let m = Monomial::parse("E1*E2*E3*E4").unwrap();
        assert_eq!(coefficient(&h, &ord, &m).unwrap().value, BigInt::from(-2));
        let s = find_monomial(&h, &ord, &caps(&[("E1", 2), ("E2", 2), ("E3", 2), ("E4", 2)]), None).unwrap();
        assert_eq!(s.found, Some((m, BigInt::from(-2))));
    }

    #[test]
    fn empty_graph_is_one() {
        let h = graph(&["A"], &[]);
        let ord = VariableOrder::default();
        assert_eq!(coefficient(&h, &ord, &Monomial::one()).unwrap().value, BigInt::from(1));
        assert_eq!(constraint_polynomial(&h, &ord).term_count(), 1);
    }

    #[test]
    fn self_loop_rejected() {
        assert!(ConstraintGraph::parse("vars A\nadj A A\n").is_err());
    }

    #[test]
    fn degree_mismatch_reported() {
        let h = cycle4();
        let ord = VariableOrder::default();
        let m = Monomial::parse("E1^2*E3*E4*E2").unwrap();
        let c = coefficient(&h, &ord, &m).unwrap();
        assert!(!c.degree_matches());
        let r = verify_certificate(&h, &ord, &caps(&[("E1", 2), ("E2", 2), ("E3", 2), ("E4", 2)]), &m).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn cap_violation_reported() {
        let h = graph(&["X", "Y"], &[("X", "Y")]);
        let ord = VariableOrder::default();
        let r = verify_certificate(&h, &ord, &caps(&[("X", 1), ("Y", 1)]), &Monomial::parse("X").unwrap()).unwrap();
        assert_eq!(r.cap_violations, vec![("X".to_string(), 1, 1)]);
    }

    #[test]
    fn exhausted_search_reports_none() {
        let h = graph(&["A", "B", "C"], &[("A", "B"), ("B", "C"), ("A", "C")]);
        let s = find_monomial(&h, &VariableOrder::default(), &caps(&[("A", 2), ("B", 2), ("C", 2)]), None).unwrap();
        assert!(s.found.is_none() && s.complete && s.nodes > 0);
    }

    #[test]
    fn node_cap_stops_search() {
        let h = graph(&["A", "B", "C"], &[("A", "B"), ("B", "C"), ("A", "C")]);
        let s = find_monomial(&h, &VariableOrder::default(), &caps(&[("A", 2), ("B", 2), ("C", 2)]), Some(2)).unwrap();
        assert!(!s.complete);
    }

    #[test]
    fn text_round_trip() {
        let text = "vars A B C\nadj A B\nadj B C\ncap A 2\ncap B 3\ncap C 2\ntarget A*B\nexpect 1\n";
        let h = ConstraintGraph::parse(text).unwrap();
        assert_eq!(h.to_text(&VariableOrder::default()), text);
    }

    #[test]
    fn explicit_order_flips_sign() {
        let h = graph(&["E", "U"], &[("E", "U")]);
        let ord = VariableOrder::explicit(["U".to_string(), "E".to_string()]);
        let c = coefficient(&h, &ord, &Monomial::parse("U").unwrap()).unwrap();
        assert_eq!(c.value, BigInt::from(1));
    }

    #[test]
    fn default_order_is_natural() {
        let o = VariableOrder::default();
        for (a, b) in [("A", "B"), ("S", "U"), ("V1", "V2"), ("V2", "V10"), ("V10", "W"), ("W", "W1")] {
            assert!(o.less(a, b), "{a} < {b}");
        }
    }
}
