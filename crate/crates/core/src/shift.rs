//! Color shifting graphs over a colored clique of the total graph, and
//! recoloring along their directed cycles.

use std::collections::{BTreeSet, VecDeque};

use crate::choose::{Color, Lists};
use crate::error::{Error, Result};
use crate::total::TotalGraph;

/// Partial coloring of the total graph, indexed by element id.
pub type Coloring = Vec<Option<Color>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Elem(usize),
    Color(Color),
}

#[derive(Clone, Debug)]
pub struct ShiftingGraph {
    pub nodes: Vec<Node>,
    /// Available colors of each clique element once the clique is uncolored.
    pub hats: Vec<(usize, BTreeSet<Color>)>,
    pub gamma: Coloring,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl ShiftingGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index(&self, n: Node) -> Option<usize> {
        self.nodes.iter().position(|&m| m == n)
    }

    pub fn has_arc(&self, a: usize, b: usize) -> bool {
        self.out[a].contains(&b)
    }

    pub fn out_arcs(&self, a: usize) -> &[usize] {
        &self.out[a]
    }

    pub fn in_degree(&self, a: usize) -> usize {
        self.inn[a].len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Number of clique elements; they occupy the first node slots.
    pub fn clique_len(&self) -> usize {
        self.hats.len()
    }

    pub fn hat(&self, i: usize) -> &BTreeSet<Color> {
        &self.hats[i].1
    }
}

/// Builds `H_{S,gamma}`; `lists` and `gamma` are indexed by element id.
pub fn build_shifting_graph(t: &TotalGraph, s: &[usize], gamma: &Coloring, lists: &Lists) -> Result<ShiftingGraph> {
    let mut seen = BTreeSet::new();
    if s.iter().any(|x| !seen.insert(*x)) {
        return Err(Error::Invalid("clique lists an element twice".into()));
    }
    if !t.is_clique(s) {
        return Err(Error::Invalid("S is not a clique of the total graph".into()));
    }
    let mut used = BTreeSet::new();
    for &x in s {
        let c = gamma[x].ok_or_else(|| Error::Invalid(format!("{} is not colored", t.name(x))))?;
        if !lists[x].contains(&c) {
            return Err(Error::Invalid(format!("{} is colored outside its list", t.name(x))));
        }
        if !used.insert(c) {
            return Err(Error::Invalid("S is not properly colored".into()));
        }
    }
    let hats: Vec<(usize, BTreeSet<Color>)> = s
        .iter()
        .map(|&x| {
            let blocked: BTreeSet<Color> =
                t.neighbors(x).iter().filter(|y| !s.contains(y)).filter_map(|&y| gamma[y]).collect();
            (x, lists[x].iter().copied().filter(|c| !blocked.contains(c)).collect())
        })
        .collect();
    if let Some((x, _)) = hats.iter().find(|(x, h)| !h.contains(&gamma[*x].expect("checked above"))) {
        return Err(Error::Invalid(format!("{} clashes with a colored neighbor outside S", t.name(*x))));
    }
    let colors: BTreeSet<Color> = hats.iter().flat_map(|(_, h)| h.iter().copied()).collect();
    let mut nodes: Vec<Node> = s.iter().map(|&x| Node::Elem(x)).collect();
    nodes.extend(colors.iter().map(|&c| Node::Color(c)));
    let k = s.len();
    let mut out = vec![Vec::new(); nodes.len()];
    for a in 0..nodes.len() {
        for b in 0..nodes.len() {
            if a == b {
                continue;
            }
            let arc = match (nodes[a], nodes[b]) {
                (Node::Elem(x), Node::Elem(_)) => hats[b].1.contains(&gamma[x].expect("checked above")),
                (Node::Color(al), Node::Elem(_)) => hats[b].1.contains(&al) && !used.contains(&al),
                (Node::Elem(_), Node::Color(_)) | (Node::Color(_), Node::Color(_)) => true,
            };
            if arc {
                out[a].push(b);
            }
        }
    }
    let mut inn = vec![Vec::new(); nodes.len()];
    for (a, outs) in out.iter().enumerate() {
        for &b in outs {
            inn[b].push(a);
        }
    }
    let h = ShiftingGraph { nodes, hats, gamma: gamma.clone(), out, inn };
    for i in 0..h.len() {
        let expect = if i < k { h.hat(i).len() - 1 } else { h.len() - 1 };
        assert_eq!(h.in_degree(i), expect, "in-degree law fails at node {i}");
    }
    Ok(h)
}

/// Strong components among `alive` nodes, each sorted, sinks first.
pub fn strong_components(h: &ShiftingGraph, alive: &[bool]) -> Vec<Vec<usize>> {
    let n = h.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut comps = Vec::new();
    // Iterative Tarjan: frames hold (node, next arc position).
    for root in 0..n {
        if !alive[root] || index[root] != usize::MAX {
            continue;
        }
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            if let Some(&w) = h.out[v].get(*pos) {
                *pos += 1;
                if !alive[w] {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _)) = frames.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("component members are stacked");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

fn source_among(h: &ShiftingGraph, alive: &[bool]) -> Vec<usize> {
    let comps = strong_components(h, alive);
    let mut which = vec![usize::MAX; h.len()];
    for (k, c) in comps.iter().enumerate() {
        for &v in c {
            which[v] = k;
        }
    }
    comps
        .iter()
        .enumerate()
        .find(|(k, c)| c.iter().all(|&v| h.inn[v].iter().all(|&u| !alive[u] || which[u] == *k)))
        .map(|(_, c)| c.clone())
        .unwrap_or_default()
}

/// A strong component with no arcs entering it from outside.
pub fn source_scc(h: &ShiftingGraph) -> Vec<usize> {
    source_among(h, &vec![true; h.len()])
}

/// In-degree of `v` counting only arcs from `alive` nodes.
fn live_in_degree(h: &ShiftingGraph, alive: &[bool], v: usize) -> usize {
    h.inn[v].iter().filter(|&&u| alive[u]).count()
}

/// Shortest directed cycle through `start` using only `allowed` nodes.
pub fn cycle_through(h: &ShiftingGraph, start: usize, allowed: &[bool]) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; h.len()];
    let mut queue = VecDeque::from([start]);
    let mut seen = vec![false; h.len()];
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &h.out[v] {
            if !allowed[w] {
                continue;
            }
            if w == start {
                let mut cyc = vec![v];
                let mut cur = v;
                while cur != start {
                    cur = prev[cur];
                    cyc.push(cur);
                }
                cyc.reverse();
                return Some(cyc);
            }
            if !seen[w] {
                seen[w] = true;
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Looks for a directed cycle through one of the `targets` (node indices).
///
/// Takes the source component; if it holds a target with company, a cycle
/// through it is returned, otherwise the vertices of largest in-degree are
/// deleted and the search repeats. A plain search over the whole graph
/// closes the loop when the descent runs dry.
pub fn find_shift_cycle(h: &ShiftingGraph, targets: &[usize]) -> Option<Vec<usize>> {
    let mut alive = vec![true; h.len()];
    while alive.iter().any(|&a| a) {
        let c = source_among(h, &alive);
        let mut in_c = vec![false; h.len()];
        for &v in &c {
            in_c[v] = true;
        }
        if c.len() >= 2 {
            for &x in targets.iter().filter(|&&x| in_c[x]) {
                if let Some(cyc) = cycle_through(h, x, &in_c) {
                    return Some(cyc);
                }
            }
        }
        let top = (0..h.len()).filter(|&v| alive[v]).map(|v| live_in_degree(h, &alive, v)).max().unwrap_or(0);
        for v in 0..h.len() {
            if alive[v] && live_in_degree(h, &alive, v) == top {
                alive[v] = false;
            }
        }
    }
    let all = vec![true; h.len()];
    targets.iter().find_map(|&x| cycle_through(h, x, &all))
}

/// The recoloring carried by a directed cycle of `h`.
pub fn shift_along_cycle(h: &ShiftingGraph, cycle: &[usize]) -> Result<Coloring> {
    let n = cycle.len();
    let distinct: BTreeSet<usize> = cycle.iter().copied().collect();
    if n < 2 || distinct.len() != n || cycle.iter().any(|&v| v >= h.len()) {
        return Err(Error::Invalid("not a simple directed cycle".into()));
    }
    for i in 0..n {
        if !h.has_arc(cycle[i], cycle[(i + 1) % n]) {
            return Err(Error::Invalid(format!("missing arc {} -> {}", cycle[i], cycle[(i + 1) % n])));
        }
    }
    let mut out = h.gamma.clone();
    let color_of = |v: usize| match h.nodes[v] {
        Node::Elem(x) => h.gamma[x].expect("clique is colored"),
        Node::Color(c) => c,
    };
    // Each element takes the color of its predecessor: an element's color
    // moves along element arcs, and a color node seeds the head of its path.
    for i in 0..n {
        let (p, v) = (cycle[(i + n - 1) % n], cycle[i]);
        if let Node::Elem(x) = h.nodes[v] {
            out[x] = Some(color_of(p));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::samples;

    /// K2 has elements u, v, uv; all three form a clique.
    fn k2_instance(lists: Lists, gamma: Coloring) -> (TotalGraph, ShiftingGraph) {
        let t = TotalGraph::new(&samples::k2());
        let h = build_shifting_graph(&t, &[0, 1, 2], &gamma, &lists).unwrap();
        (t, h)
    }

    #[test]
    fn single_color_gives_zero_in_degree() {
        let t = TotalGraph::new(&samples::k2());
        let lists = vec![vec![1], vec![2, 3], vec![3, 4]];
        let gamma = vec![Some(1), Some(2), Some(3)];
        let h = build_shifting_graph(&t, &[0], &gamma, &lists).unwrap();
        // u's neighbors v and uv keep colors 2 and 3 outside S.
        assert_eq!(h.in_degree(0), 0);
    }

    #[test]
    fn swap_pair() {
        let lists = vec![vec![1, 2], vec![1, 2], vec![3]];
        let (_, h) = k2_instance(lists, vec![Some(1), Some(2), Some(3)]);
        assert!(h.has_arc(0, 1) && h.has_arc(1, 0));
        let g2 = shift_along_cycle(&h, &[0, 1]).unwrap();
        assert_eq!(g2, vec![Some(2), Some(1), Some(3)]);
    }

    #[test]
    fn color_node_seeds_path_head() {
        let lists = vec![vec![1, 5], vec![2], vec![3]];
        let (_, h) = k2_instance(lists, vec![Some(1), Some(2), Some(3)]);
        let s5 = h.index(Node::Color(5)).unwrap();
        let g2 = shift_along_cycle(&h, &[s5, 0]).unwrap();
        assert_eq!(g2[0], Some(5));
        assert_eq!(&g2[1..], &[Some(2), Some(3)]);
    }

    #[test]
    fn rejects_non_cycles() {
        let lists = vec![vec![1, 2], vec![1, 2], vec![3]];
        let (_, h) = k2_instance(lists, vec![Some(1), Some(2), Some(3)]);
        assert!(shift_along_cycle(&h, &[0, 2]).is_err());
        assert!(shift_along_cycle(&h, &[0]).is_err());
    }

    #[test]
    fn improper_clique_is_rejected() {
        let t = TotalGraph::new(&samples::k2());
        let lists = vec![vec![1], vec![1], vec![3]];
        assert!(build_shifting_graph(&t, &[0, 1], &vec![Some(1), Some(1), Some(3)], &lists).is_err());
    }

    #[test]
    fn source_component_satisfies_bound() {
        let lists = vec![vec![1, 2, 4], vec![1, 2], vec![3, 4]];
        let (_, h) = k2_instance(lists, vec![Some(1), Some(2), Some(3)]);
        let c = source_scc(&h);
        assert!(c.iter().all(|&x| c.len() > h.in_degree(x)));
    }

    #[test]
    fn driver_finds_swap() {
        let lists = vec![vec![1, 2], vec![1, 2], vec![3]];
        let (_, h) = k2_instance(lists, vec![Some(1), Some(2), Some(3)]);
        let cyc = find_shift_cycle(&h, &[0]).unwrap();
        assert!(cyc.contains(&0));
    }
}
