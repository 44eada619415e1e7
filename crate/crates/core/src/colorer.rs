//! Total list coloring of planar graphs with maximum degree at most 8.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::choose::{self, Color, Lists};
use crate::error::{parse_err, Error, Result};
use crate::graph::{strip_comment, EmbeddedGraph};
use crate::shift::{build_shifting_graph, find_shift_cycle, shift_along_cycle, Coloring, Node};
use crate::total::{Element, TotalGraph, PALETTE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColorerConfig {
    pub kernel: usize,
    pub node_cap: u64,
}

impl Default for ColorerConfig {
    fn default() -> Self {
        ColorerConfig { kernel: 20, node_cap: 1_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// A color per total-graph element.
    Colored(Vec<Color>),
    /// Elements of the last kernel that could not be recolored.
    Stuck { kernel: Vec<usize> },
}

/// Reads `list <element>: c1 c2 ...` lines into lists indexed by element id.
pub fn parse_lists(g: &EmbeddedGraph, t: &TotalGraph, text: &str) -> Result<Lists> {
    let mut lists: Vec<Option<Vec<Color>>> = vec![None; t.len()];
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let rest = line.strip_prefix("list ").ok_or_else(|| parse_err(i + 1, "expected `list <element>: colors`"))?;
        let (name, colors) = rest.split_once(':').ok_or_else(|| parse_err(i + 1, "missing `:`"))?;
        let x = t.lookup(g, name.trim()).map_err(|e| parse_err(i + 1, e))?;
        let mut cs: Vec<Color> = colors
            .split_whitespace()
            .map(|c| c.parse().map_err(|_| parse_err(i + 1, format!("bad color `{c}`"))))
            .collect::<Result<_>>()?;
        cs.sort_unstable();
        cs.dedup();
        if lists[x].replace(cs).is_some() {
            return Err(parse_err(i + 1, format!("second list for `{}`", t.name(x))));
        }
    }
    lists
        .into_iter()
        .enumerate()
        .map(|(x, l)| l.ok_or_else(|| Error::Invalid(format!("no list for `{}`", t.name(x)))))
        .collect()
}

/// The total graph as a plain conflict graph.
pub fn conflict_graph(t: &TotalGraph) -> choose::Graph {
    let mut g = choose::Graph::new(t.len());
    for x in 0..t.len() {
        for &y in t.neighbors(x) {
            if x < y {
                g.add_edge(x, y);
            }
        }
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConflictKind {
    AdjacentVertices,
    Incidence,
    AdjacentEdges,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Missing(usize),
    OutsideList(usize, Color),
    Conflict(ConflictKind, usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl Violation {
    pub fn describe(&self, t: &TotalGraph) -> String {
        match *self {
            Violation::Missing(x) => format!("{} is uncolored", t.name(x)),
            Violation::OutsideList(x, c) => format!("{} has color {c} outside its list", t.name(x)),
            Violation::Conflict(k, a, b) => format!("{k} {} and {} share a color", t.name(a), t.name(b)),
        }
    }
}

impl fmt::Display for ConflictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConflictKind::AdjacentVertices => "adjacent vertices",
            ConflictKind::Incidence => "incident elements",
            ConflictKind::AdjacentEdges => "adjacent edges",
        })
    }
}

pub fn validate_total_coloring(t: &TotalGraph, lists: &Lists, coloring: &Coloring) -> Validation {
    let mut violations = Vec::new();
    for x in 0..t.len() {
        match coloring.get(x).copied().flatten() {
            None => violations.push(Violation::Missing(x)),
            Some(c) if !lists[x].contains(&c) => violations.push(Violation::OutsideList(x, c)),
            Some(_) => {}
        }
    }
    for a in 0..t.len() {
        for &b in t.neighbors(a) {
            if a < b {
                if let (Some(Some(ca)), Some(Some(cb))) = (coloring.get(a), coloring.get(b)) {
                    if ca == cb {
                        let kind = match (t.element(a), t.element(b)) {
                            (Element::Vertex(_), Element::Vertex(_)) => ConflictKind::AdjacentVertices,
                            (Element::Edge(..), Element::Edge(..)) => ConflictKind::AdjacentEdges,
                            _ => ConflictKind::Incidence,
                        };
                        violations.push(Violation::Conflict(kind, a, b));
                    }
                }
            }
        }
    }
    Validation { ok: violations.is_empty(), violations }
}

/// Elements that can be colored last, in the order they were set aside,
/// and the core that remains.
pub fn forgetting_order(g: &EmbeddedGraph, t: &TotalGraph, lists: &Lists) -> (Vec<usize>, Vec<usize>) {
    let mut alive = vec![true; t.len()];
    let mut live_deg: Vec<usize> = (0..t.len()).map(|x| t.neighbors(x).len()).collect();
    let mut order = Vec::new();
    let small_vertex = |x: usize| matches!(t.element(x), Element::Vertex(v) if g.degree(v) <= 4);
    let mut queue: VecDeque<usize> = (0..t.len()).filter(|&x| small_vertex(x)).collect();
    queue.extend((0..t.len()).filter(|&x| !small_vertex(x)));
    let mut queued = vec![true; t.len()];
    while let Some(x) = queue.pop_front() {
        queued[x] = false;
        if !alive[x] || lists[x].len() <= live_deg[x] {
            continue;
        }
        alive[x] = false;
        order.push(x);
        for &y in t.neighbors(x) {
            if alive[y] {
                live_deg[y] -= 1;
                if !queued[y] && lists[y].len() > live_deg[y] {
                    queued[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    let core = (0..t.len()).filter(|&x| alive[x]).collect();
    (order, core)
}

struct State<'a> {
    t: &'a TotalGraph,
    lists: &'a Lists,
    col: Coloring,
    cfg: ColorerConfig,
    stats: RunStats,
}

/// How often each repair step ran.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub forgotten: usize,
    pub core: usize,
    pub kernel_repairs: usize,
    pub shifts: usize,
}

impl State<'_> {
    fn available(&self, x: usize) -> Vec<Color> {
        let used: BTreeSet<Color> = self.t.neighbors(x).iter().filter_map(|&y| self.col[y]).collect();
        self.lists[x].iter().copied().filter(|c| !used.contains(c)).collect()
    }

    /// Next core element by saturation, ties by degree then id.
    fn dsatur_pick(&self, core: &[usize]) -> Option<usize> {
        core.iter().copied().filter(|&x| self.col[x].is_none()).max_by_key(|&x| {
            let sat: BTreeSet<Color> = self.t.neighbors(x).iter().filter_map(|&y| self.col[y]).collect();
            (sat.len(), self.t.neighbors(x).len(), std::cmp::Reverse(x))
        })
    }

    /// `x` and colored core elements closest to it, at most `kernel` in all.
    fn kernel_around(&self, x: usize, in_core: &[bool]) -> Vec<usize> {
        let mut seen = vec![false; self.t.len()];
        let mut out = vec![x];
        let mut queue = VecDeque::from([x]);
        seen[x] = true;
        while let Some(v) = queue.pop_front() {
            for &y in self.t.neighbors(v) {
                if seen[y] || !in_core[y] || self.col[y].is_none() {
                    continue;
                }
                seen[y] = true;
                if out.len() == self.cfg.kernel {
                    return out;
                }
                out.push(y);
                queue.push_back(y);
            }
        }
        out
    }

    /// Recolors `kernel` from scratch against the fixed rest.
    fn solve_kernel(&mut self, kernel: &[usize]) -> bool {
        let saved: Vec<Option<Color>> = kernel.iter().map(|&x| self.col[x]).collect();
        for &x in kernel {
            self.col[x] = None;
        }
        let mut nodes = 0u64;
        if self.backtrack(kernel, &mut nodes) {
            return true;
        }
        for (&x, c) in kernel.iter().zip(saved) {
            self.col[x] = c;
        }
        false
    }

    fn backtrack(&mut self, kernel: &[usize], nodes: &mut u64) -> bool {
        *nodes += 1;
        if *nodes > self.cfg.node_cap {
            return false;
        }
        let pick = kernel
            .iter()
            .copied()
            .filter(|&x| self.col[x].is_none())
            .map(|x| (self.available(x), x))
            .min_by_key(|(a, x)| (a.len(), *x));
        let Some((avail, x)) = pick else { return true };
        for c in avail {
            self.col[x] = Some(c);
            if self.backtrack(kernel, nodes) {
                return true;
            }
        }
        self.col[x] = None;
        false
    }

    /// Tries to free a color for `x` by shifting colors inside a colored
    /// clique of its neighborhood.
    fn try_shift(&mut self, x: usize) -> bool {
        for s in self.cliques_near(x) {
            let Ok(h) = build_shifting_graph(self.t, &s, &self.col, self.lists) else { continue };
            // Shifting an element whose color is in L(x) and unique around x may free it.
            let targets: Vec<usize> = (0..h.clique_len())
                .filter(|&i| {
                    let Node::Elem(y) = h.nodes[i] else { return false };
                    let c = self.col[y].expect("clique is colored");
                    self.lists[x].contains(&c)
                        && self.t.neighbors(x).iter().filter(|&&z| self.col[z] == Some(c)).count() == 1
                })
                .collect();
            for &target in &targets {
                let Some(cycle) = find_shift_cycle(&h, &[target]) else { continue };
                let Ok(next) = shift_along_cycle(&h, &cycle) else { continue };
                let before = std::mem::replace(&mut self.col, next);
                if let Some(&c) = self.available(x).first() {
                    self.col[x] = Some(c);
                    return true;
                }
                self.col = before;
            }
        }
        false
    }

    /// Colored cliques made of a vertex neighbor of `x` with its colored incident edges.
    fn cliques_near(&self, x: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut centers: BTreeSet<usize> = BTreeSet::new();
        for &y in self.t.neighbors(x) {
            if let Element::Vertex(_) = self.t.element(y) {
                centers.insert(y);
            }
        }
        if let Element::Vertex(_) = self.t.element(x) {
            centers.insert(x);
        }
        for c in centers {
            let mut s: Vec<usize> = self
                .t
                .neighbors(c)
                .iter()
                .copied()
                .filter(|&e| matches!(self.t.element(e), Element::Edge(..)) && e != x && self.col[e].is_some())
                .collect();
            if c != x && self.col[c].is_some() {
                s.push(c);
            }
            if !s.is_empty() && self.t.is_clique(&s) {
                out.push(s);
            }
        }
        out
    }
}

/// Colors every element of `g` from `lists` (indexed by total-graph id).
pub fn total_color(g: &EmbeddedGraph, lists: &Lists, cfg: ColorerConfig) -> Result<Outcome> {
    total_color_with_stats(g, lists, cfg).map(|(o, _)| o)
}

pub fn total_color_with_stats(g: &EmbeddedGraph, lists: &Lists, cfg: ColorerConfig) -> Result<(Outcome, RunStats)> {
    if g.max_degree() > 8 {
        return Err(Error::DegreeTooLarge(g.max_degree()));
    }
    let t = TotalGraph::new(g);
    if lists.len() != t.len() {
        return Err(Error::Invalid(format!("{} lists for {} elements", lists.len(), t.len())));
    }
    if let Some(x) = (0..t.len()).find(|&x| lists[x].iter().collect::<BTreeSet<_>>().len() < PALETTE) {
        return Err(Error::Hypothesis(format!("list of {} has fewer than {PALETTE} colors", t.name(x))));
    }
    let (forgotten, core) = forgetting_order(g, &t, lists);
    let mut in_core = vec![false; t.len()];
    for &x in &core {
        in_core[x] = true;
    }
    let stats = RunStats { forgotten: forgotten.len(), core: core.len(), ..RunStats::default() };
    let mut st = State { t: &t, lists, col: vec![None; t.len()], cfg, stats };
    while let Some(x) = st.dsatur_pick(&core) {
        if let Some(&c) = st.available(x).first() {
            st.col[x] = Some(c);
            continue;
        }
        let kernel = st.kernel_around(x, &in_core);
        if st.solve_kernel(&kernel) {
            st.stats.kernel_repairs += 1;
            continue;
        }
        if st.try_shift(x) {
            st.stats.shifts += 1;
            continue;
        }
        return Ok((Outcome::Stuck { kernel }, st.stats));
    }
    for &x in forgotten.iter().rev() {
        let c = *st.available(x).first().expect("forgotten elements always have a free color");
        st.col[x] = Some(c);
    }
    let v = validate_total_coloring(&t, lists, &st.col);
    if !v.ok {
        return Ok((Outcome::Stuck { kernel: Vec::new() }, st.stats));
    }
    let stats = st.stats;
    Ok((Outcome::Colored(st.col.into_iter().map(|c| c.expect("validated")).collect()), stats))
}

/// Exhaustive search over the whole total graph; `None` means no coloring exists.
pub fn exhaustive_total_coloring(g: &EmbeddedGraph, lists: &Lists) -> Option<Vec<Color>> {
    let t = TotalGraph::new(g);
    choose::l_colorable(&conflict_graph(&t), lists)
}

/// `set <element> <color>` lines in element order.
pub fn render_coloring(t: &TotalGraph, col: &[Color]) -> String {
    let mut out = String::new();
    for (x, c) in col.iter().enumerate() {
        out.push_str(&format!("set {} {c}\n", t.name(x)));
    }
    out
}

/// Reads `set <element> <color>` lines; unnamed elements stay uncolored.
pub fn parse_coloring(g: &EmbeddedGraph, t: &TotalGraph, text: &str) -> Result<Coloring> {
    let mut col = vec![None; t.len()];
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let w: Vec<&str> = line.split_whitespace().collect();
        let ["set", name, c] = w[..] else {
            return Err(parse_err(i + 1, "expected `set <element> <color>`"));
        };
        let x = t.lookup(g, name).map_err(|e| parse_err(i + 1, e))?;
        if let Some(prev) = seen.insert(x, i + 1) {
            return Err(parse_err(i + 1, format!("`{name}` already set on line {prev}")));
        }
        col[x] = Some(c.parse().map_err(|_| parse_err(i + 1, format!("bad color `{c}`")))?);
    }
    Ok(col)
}
