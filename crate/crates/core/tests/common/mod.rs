#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use tc10::catalog::pattern::{Cmp, ConfigPattern, DegreeRange, Role};
use tc10::choose::Color;
use tc10::classify::{classify_neighbor, SClass};
use tc10::graph::EmbeddedGraph;
use tc10::total::{Element, TotalGraph};

/// Checks a total coloring straight from the graph: list membership, then
/// every conflicting pair of vertices and edges.
pub fn total_coloring_ok(g: &EmbeddedGraph, t: &TotalGraph, lists: &[Vec<Color>], col: &[Color]) -> Result<(), String> {
    if col.len() != t.len() {
        return Err(format!("{} colors for {} elements", col.len(), t.len()));
    }
    let id = |e: Element| t.id(e).expect("element exists");
    for x in 0..t.len() {
        if !lists[x].contains(&col[x]) {
            return Err(format!("{} colored {} outside its list", t.name(x), col[x]));
        }
    }
    let edges = g.edges();
    for &(a, b) in &edges {
        let e = id(Element::edge(a, b));
        for v in [a, b] {
            if col[id(Element::Vertex(v))] == col[e] {
                return Err(format!("{} clashes with {}", t.name(e), g.label(v)));
            }
        }
        if col[id(Element::Vertex(a))] == col[id(Element::Vertex(b))] {
            return Err(format!("{} and {} share a color", g.label(a), g.label(b)));
        }
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            if (a == c || a == d || b == c || b == d) && col[id(Element::edge(a, b))] == col[id(Element::edge(c, d))] {
                return Err(format!("edges {}{} and {}{} share a color", g.label(a), g.label(b), g.label(c), g.label(d)));
            }
        }
    }
    Ok(())
}

/// A random `k`-subset of `1..=pool` per element.
pub fn random_lists<R: Rng>(len: usize, pool: u32, k: usize, rng: &mut R) -> Vec<Vec<Color>> {
    let all: Vec<Color> = (1..=pool).collect();
    (0..len)
        .map(|_| {
            let mut l: Vec<Color> = all.choose_multiple(rng, k).copied().collect();
            l.sort_unstable();
            l
        })
        .collect()
}

fn cmp_holds(op: Cmp, a: Option<usize>, b: Option<usize>) -> bool {
    // None is infinity.
    let key = |x: Option<usize>| x.map_or(u64::MAX, |v| v as u64);
    let (a, b) = (key(a), key(b));
    match op {
        Cmp::Eq => a == b,
        Cmp::Ne => a != b,
        Cmp::Le => a <= b,
        Cmp::Ge => a >= b,
        Cmp::Lt => a < b,
        Cmp::Gt => a > b,
    }
}

fn in_range(r: DegreeRange, d: usize) -> bool {
    d >= r.lo && r.hi.is_none_or(|h| d <= h)
}

fn role_ok(g: &EmbeddedGraph, m: &[usize], v: usize, role: Role) -> bool {
    let anchor = match role {
        Role::Triangulated => return g.is_triangulated(v).unwrap_or(false),
        Role::Weak(a) | Role::SemiWeak(a) | Role::Pq(a, _, _) => a,
        Role::S3(a) | Role::S5(a) | Role::S6(a) | Role::E3(a) => a,
    };
    let Ok(c) = classify_neighbor(g, m[anchor], v) else { return false };
    match role {
        Role::Weak(_) => c.is_weak(),
        Role::SemiWeak(_) => c.is_semi_weak(),
        Role::Pq(_, p, q) => {
            c.pq.is_some_and(|(a, b)| (in_range(p, a) && in_range(q, b)) || (in_range(p, b) && in_range(q, a)))
        }
        Role::S3(_) => c.s_class == Some(SClass::S3),
        Role::S5(_) => c.s_class == Some(SClass::S5),
        Role::S6(_) => c.s_class == Some(SClass::S6),
        Role::E3(_) => c.e3 == Some(true),
        Role::Triangulated => unreachable!(),
    }
}

/// Every constraint of `p` under the full map `m`.
pub fn pattern_holds(g: &EmbeddedGraph, p: &ConfigPattern, m: &[usize]) -> bool {
    p.vertices.iter().zip(m).all(|(pv, &x)| in_range(pv.degree, g.degree(x)))
        && p.vertices.iter().zip(m).all(|(pv, &x)| pv.roles.iter().all(|&r| role_ok(g, m, x, r)))
        && p.edges.iter().all(|&(a, b)| g.has_edge(m[a], m[b]))
        && p.nonedges.iter().all(|&(a, b)| !g.has_edge(m[a], m[b]))
        && p.trifaces.iter().all(|&([a, b, c], want)| g.is_triangular_face(m[a], m[b], m[c]) == want)
        && p.tridists.iter().all(|&(u, a, b, op, k)| match g.triangle_distance(m[u], m[a], m[b]) {
            Ok(d) => cmp_holds(op, d, k),
            Err(_) => false,
        })
        && p.degsums.iter().all(|&(a, b, op, k)| cmp_holds(op, Some(g.degree(m[a]) + g.degree(m[b])), Some(k)))
}

/// Closure of the declared automorphisms under composition.
pub fn closure(p: &ConfigPattern) -> Vec<Vec<usize>> {
    let n = p.vertices.len();
    let mut group: BTreeSet<Vec<usize>> = BTreeSet::from([(0..n).collect()]);
    loop {
        let mut grew = false;
        let current: Vec<Vec<usize>> = group.iter().cloned().collect();
        for a in &current {
            for b in &p.autos {
                let c: Vec<usize> = (0..n).map(|i| a[b[i]]).collect();
                grew |= group.insert(c);
            }
        }
        if !grew {
            return group.into_iter().collect();
        }
    }
}

/// Smallest image of `m` over the group; equal keys mean the same occurrence.
pub fn orbit_key(group: &[Vec<usize>], m: &[usize]) -> Vec<usize> {
    group.iter().map(|s| s.iter().map(|&i| m[i]).collect::<Vec<_>>()).min().expect("group has the identity")
}

/// All injective maps satisfying `p`, keyed by orbit, with their multiplicity.
pub fn exhaustive_matches(g: &EmbeddedGraph, p: &ConfigPattern) -> BTreeMap<Vec<usize>, usize> {
    let group = closure(p);
    let mut out = BTreeMap::new();
    let mut m = Vec::new();
    let mut used = vec![false; g.n()];
    fn go(
        g: &EmbeddedGraph,
        p: &ConfigPattern,
        group: &[Vec<usize>],
        m: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut BTreeMap<Vec<usize>, usize>,
    ) {
        let i = m.len();
        if i == p.vertices.len() {
            if pattern_holds(g, p, m) {
                *out.entry(orbit_key(group, m)).or_default() += 1;
            }
            return;
        }
        for x in 0..g.n() {
            if used[x] || !in_range(p.vertices[i].degree, g.degree(x)) {
                continue;
            }
            // Edges and non-edges back to placed vertices are necessary conditions.
            let fits = p.edges.iter().all(|&(a, b)| !(a.max(b) == i && !g.has_edge(x, m[a.min(b)])))
                && p.nonedges.iter().all(|&(a, b)| !(a.max(b) == i && g.has_edge(x, m[a.min(b)])));
            if !fits {
                continue;
            }
            used[x] = true;
            m.push(x);
            go(g, p, group, m, used, out);
            m.pop();
            used[x] = false;
        }
    }
    go(g, p, &group, &mut m, &mut used, &mut out);
    out
}
