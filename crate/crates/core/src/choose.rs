//! List coloring of small graphs: an exhaustive oracle, f-choosability,
//! and constructive colorings for the reusable coloring lemmas.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub type Color = u32;

/// Per-vertex lists, indexed like the graph's vertices.
pub type Lists = Vec<Vec<Color>>;

/// Simple undirected graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        Graph { adj: vec![BTreeSet::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "loops are not allowed");
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n()).flat_map(|a| self.adj[a].range(a + 1..).map(move |&b| (a, b))).collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Line graph, with vertices in the order of `edges()`.
    pub fn line_graph(&self) -> Graph {
        let es = self.edges();
        let mut l = Graph::new(es.len());
        for i in 0..es.len() {
            for j in i + 1..es.len() {
                let (a, b) = es[i];
                if es[j].0 == a || es[j].0 == b || es[j].1 == a || es[j].1 == b {
                    l.add_edge(i, j);
                }
            }
        }
        l
    }
}

/// Violations of properness or list membership; empty means valid.
pub fn coloring_violations(g: &Graph, lists: &Lists, col: &[Color]) -> Vec<String> {
    let mut out = Vec::new();
    for v in 0..g.n() {
        if !lists[v].contains(&col[v]) {
            out.push(format!("vertex {v} colored {} outside its list", col[v]));
        }
    }
    for (a, b) in g.edges() {
        if col[a] == col[b] {
            out.push(format!("vertices {a} and {b} share color {}", col[a]));
        }
    }
    out
}

pub fn is_proper(g: &Graph, lists: &Lists, col: &[Color]) -> bool {
    col.len() == g.n() && coloring_violations(g, lists, col).is_empty()
}

/// An L-coloring by backtracking, or `None` after exhausting the search.
pub fn l_colorable(g: &Graph, lists: &Lists) -> Option<Vec<Color>> {
    let n = g.n();
    let mut col: Vec<Option<Color>> = vec![None; n];
    fn options(g: &Graph, lists: &Lists, col: &[Option<Color>], v: usize) -> Vec<Color> {
        lists[v].iter().copied().filter(|c| g.neighbors(v).all(|w| col[w] != Some(*c))).collect()
    }
    fn go(g: &Graph, lists: &Lists, col: &mut Vec<Option<Color>>) -> bool {
        // Most constrained uncolored vertex first.
        let pick = (0..g.n())
            .filter(|&v| col[v].is_none())
            .map(|v| (options(g, lists, col, v), v))
            .min_by_key(|(o, v)| (o.len(), *v));
        let Some((opts, v)) = pick else { return true };
        for c in opts {
            col[v] = Some(c);
            if go(g, lists, col) {
                return true;
            }
        }
        col[v] = None;
        false
    }
    go(g, lists, &mut col).then(|| col.into_iter().map(|c| c.expect("all colored")).collect())
}

/// Verdict of [`f_choosable`], with a witness list assignment on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Choosability {
    pub choosable: bool,
    pub witness: Option<Lists>,
    pub assignments_checked: u64,
}

pub const F_CHOOSABLE_MAX_VERTICES: usize = 10;

/// Whether every assignment with `|L(v)| = f(v)` is colorable.
///
/// Lists are drawn from `0..sum(f)` up to renaming of colors: each vertex
/// may reuse colors seen so far or open the next unused ones.
pub fn f_choosable(g: &Graph, f: &[usize]) -> Result<Choosability> {
    if g.n() > F_CHOOSABLE_MAX_VERTICES {
        return Err(Error::Guard(format!(
            "f-choosability is limited to {F_CHOOSABLE_MAX_VERTICES} vertices, got {}",
            g.n()
        )));
    }
    if f.len() != g.n() {
        return Err(Error::Invalid(format!("f has {} entries for {} vertices", f.len(), g.n())));
    }
    if f.contains(&0) {
        let lists = f.iter().map(|&k| (0..k as Color).collect()).collect();
        return Ok(Choosability { choosable: false, witness: Some(lists), assignments_checked: 1 });
    }
    // Vertices adjacent to earlier ones first keeps list overlaps meaningful.
    let order = bfs_order(g);
    let mut lists: Lists = vec![Vec::new(); g.n()];
    let mut state = Enum { g, f, order: &order, checked: 0, witness: None };
    state.run(0, 0, &mut lists);
    Ok(Choosability {
        choosable: state.witness.is_none(),
        witness: state.witness,
        assignments_checked: state.checked,
    })
}

fn bfs_order(g: &Graph) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut order = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

struct Enum<'a> {
    g: &'a Graph,
    f: &'a [usize],
    order: &'a [usize],
    checked: u64,
    witness: Option<Lists>,
}

impl Enum<'_> {
    fn run(&mut self, step: usize, used: usize, lists: &mut Lists) {
        if self.witness.is_some() {
            return;
        }
        if step == self.order.len() {
            self.checked += 1;
            if l_colorable(self.g, lists).is_none() {
                self.witness = Some(lists.clone());
            }
            return;
        }
        let v = self.order[step];
        let k = self.f[v];
        for fresh in 0..=k {
            let old = k - fresh;
            if old > used {
                continue;
            }
            let new_colors: Vec<Color> = (used..used + fresh).map(|c| c as Color).collect();
            for subset in subsets(used, old) {
                let mut l: Vec<Color> = subset.into_iter().map(|c| c as Color).collect();
                l.extend(&new_colors);
                lists[v] = l;
                self.run(step + 1, used + fresh, lists);
                if self.witness.is_some() {
                    return;
                }
            }
        }
        lists[v].clear();
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Blocks (biconnected components) as vertex sets, via Tarjan's lowpoint search.
pub fn blocks(g: &Graph) -> Vec<BTreeSet<usize>> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();
    fn dfs(
        g: &Graph,
        v: usize,
        parent: Option<usize>,
        disc: &mut [usize],
        low: &mut [usize],
        time: &mut usize,
        stack: &mut Vec<(usize, usize)>,
        out: &mut Vec<BTreeSet<usize>>,
    ) {
        disc[v] = *time;
        low[v] = *time;
        *time += 1;
        for w in g.neighbors(v) {
            if disc[w] == usize::MAX {
                stack.push((v, w));
                dfs(g, w, Some(v), disc, low, time, stack, out);
                low[v] = low[v].min(low[w]);
                if low[w] >= disc[v] {
                    let mut block = BTreeSet::new();
                    while let Some((a, b)) = stack.pop() {
                        block.insert(a);
                        block.insert(b);
                        if (a, b) == (v, w) {
                            break;
                        }
                    }
                    out.push(block);
                }
            } else if Some(w) != parent && disc[w] < disc[v] {
                stack.push((v, w));
                low[v] = low[v].min(disc[w]);
            }
        }
    }
    for s in 0..n {
        if disc[s] == usize::MAX {
            dfs(g, s, None, &mut disc, &mut low, &mut time, &mut stack, &mut out);
        }
    }
    out
}

/// Whether no block is complete and no block is an odd cycle, so that
/// `f >= deg` guarantees choosability.
pub fn degree_choosable_applicable(g: &Graph) -> Result<bool> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    for b in blocks(g) {
        let k = b.len();
        let edges = b.iter().map(|&v| g.neighbors(v).filter(|w| b.contains(w)).count()).sum::<usize>() / 2;
        let complete = edges == k * (k - 1) / 2;
        let odd_cycle = k % 2 == 1 && edges == k && b.iter().all(|&v| g.neighbors(v).filter(|w| b.contains(w)).count() == 2);
        if complete || odd_cycle {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A system of distinct representatives by augmenting paths, if one exists.
pub fn clique_coloring(lists: &Lists) -> Option<Vec<Color>> {
    let mut owner: std::collections::HashMap<Color, usize> = std::collections::HashMap::new();
    fn augment(
        x: usize,
        lists: &Lists,
        owner: &mut std::collections::HashMap<Color, usize>,
        seen: &mut BTreeSet<Color>,
    ) -> bool {
        for &c in &lists[x] {
            if !seen.insert(c) {
                continue;
            }
            let free = match owner.get(&c) {
                None => true,
                Some(&y) => augment(y, lists, owner, seen),
            };
            if free {
                owner.insert(c, x);
                return true;
            }
        }
        false
    }
    for x in 0..lists.len() {
        if !augment(x, lists, &mut owner, &mut BTreeSet::new()) {
            return None;
        }
    }
    let mut col = vec![0; lists.len()];
    for (c, x) in owner {
        col[x] = c;
    }
    Some(col)
}

/// Hall's condition on a clique, decided by bipartite matching.
pub fn hall_clique_colorable(lists: &Lists) -> bool {
    clique_coloring(lists).is_some()
}

/// Why a constructive decider declined an input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Declined {
    Hypothesis(String),
    Shape(String),
}

impl From<Declined> for Error {
    fn from(d: Declined) -> Error {
        match d {
            Declined::Hypothesis(m) => Error::Hypothesis(m),
            Declined::Shape(m) => Error::Invalid(m),
        }
    }
}

/// Partial coloring with residual lists computed on demand.
struct Painter<'a> {
    g: &'a Graph,
    lists: &'a Lists,
    col: Vec<Option<Color>>,
}

impl<'a> Painter<'a> {
    fn new(g: &'a Graph, lists: &'a Lists) -> Self {
        Painter { g, lists, col: vec![None; g.n()] }
    }

    fn residual(&self, v: usize) -> Vec<Color> {
        self.lists[v].iter().copied().filter(|c| self.g.neighbors(v).all(|w| self.col[w] != Some(*c))).collect()
    }

    /// Residual list of `v` cut to its first `k` colors.
    fn trunc(&self, v: usize, k: usize) -> Vec<Color> {
        let mut r = self.residual(v);
        r.truncate(k);
        r
    }

    /// Colors `v` from `from`, preferring colors outside `avoid`.
    fn put(&mut self, v: usize, from: &[Color], avoid: &[Color]) -> Option<Color> {
        let c = from.iter().copied().find(|c| !avoid.contains(c)).or_else(|| from.first().copied())?;
        self.col[v] = Some(c);
        Some(c)
    }

    /// Colors `v` greedily from its residual list.
    fn greedy(&mut self, v: usize) -> Option<Color> {
        let r = self.residual(v);
        self.put(v, &r, &[])
    }

    fn finish(self) -> Option<Vec<Color>> {
        self.col.into_iter().collect()
    }
}

fn check_sizes(lists: &Lists, n: usize, min: impl Fn(usize) -> usize) -> std::result::Result<(), Declined> {
    if lists.len() != n {
        return Err(Declined::Shape(format!("expected {n} lists, got {}", lists.len())));
    }
    for (v, l) in lists.iter().enumerate() {
        let distinct: BTreeSet<_> = l.iter().collect();
        if distinct.len() < min(v) {
            return Err(Declined::Hypothesis(format!("list {v} has {} colors, needs {}", distinct.len(), min(v))));
        }
    }
    Ok(())
}

fn dedup(lists: &Lists) -> Lists {
    lists
        .iter()
        .map(|l| {
            let mut l = l.clone();
            l.sort_unstable();
            l.dedup();
            l
        })
        .collect()
}

fn validated(g: &Graph, lists: &Lists, col: Option<Vec<Color>>, what: &str) -> Vec<Color> {
    let col = col.unwrap_or_else(|| panic!("{what}: construction got stuck on a valid input"));
    assert!(is_proper(g, lists, &col), "{what}: construction produced an improper coloring");
    col
}

/// Even cycle `0..n` (edges `i, i+1 mod n`) colored from lists of size at least 2.
pub fn even_cycle_color(lists: &Lists) -> std::result::Result<Vec<Color>, Declined> {
    let n = lists.len();
    if n < 4 || n % 2 == 1 {
        return Err(Declined::Shape(format!("needs an even cycle, got length {n}")));
    }
    let lists = dedup(lists);
    check_sizes(&lists, n, |_| 2)?;
    let g = Graph::cycle(n);
    let mut p = Painter::new(&g, &lists);
    let t: Vec<Vec<Color>> = (0..n).map(|v| p.trunc(v, 2)).collect();
    match (0..n).find(|&i| t[i] != t[(i + 1) % n]) {
        None => {
            for v in 0..n {
                p.col[v] = Some(t[0][v % 2]);
            }
        }
        Some(i) => {
            let start = (i + 1) % n;
            p.put(start, &t[start], &t[i]);
            for k in 1..n {
                p.greedy((start + k) % n);
            }
        }
    }
    Ok(validated(&g, &lists, p.finish(), "even cycle"))
}

/// Cycle `v1..vn` (indices `0..n`) plus an apex `u` (index `n`) adjacent to `v1` and `vn`.
pub fn fryingpan_graph(n: usize) -> Graph {
    let mut g = Graph::cycle(n);
    g.adj.push(BTreeSet::new());
    g.add_edge(n, 0);
    g.add_edge(n, n - 1);
    g
}

pub fn fryingpan_color(lists: &Lists, n: usize) -> std::result::Result<Vec<Color>, Declined> {
    if n < 3 || lists.len() != n + 1 {
        return Err(Declined::Shape(format!("needs a cycle of length at least 3 and {} lists", n + 1)));
    }
    let lists = dedup(lists);
    check_sizes(&lists, n + 1, |_| 2)?;
    let g = fryingpan_graph(n);
    let (v1, vn, u) = (0, n - 1, n);
    let mut p = Painter::new(&g, &lists);
    if lists[v1].len() >= 3 {
        let t: Vec<Vec<Color>> = (0..=n).map(|v| p.trunc(v, if v == v1 { 3 } else { 2 })).collect();
        if t[vn] == t[u] {
            p.put(v1, &t[v1], &t[u]);
            for v in 1..n {
                p.greedy(v);
            }
        } else {
            p.put(vn, &t[vn], &t[u]);
            for v in (0..vn).rev() {
                p.greedy(v);
            }
        }
        p.greedy(u);
        return Ok(validated(&g, &lists, p.finish(), "fryingpan"));
    }
    if n % 2 == 1 {
        return Err(Declined::Hypothesis("odd cycle needs |L(v1)| >= 3".into()));
    }
    if lists[v1] == lists[u] {
        return Err(Declined::Hypothesis("L(v1) = L(u) with |L(v1)| = 2".into()));
    }
    // Keep a color of u outside L(v1) when cutting L(u) down to two.
    let mut lu: Vec<Color> = lists[u].iter().copied().filter(|c| !lists[v1].contains(c)).take(1).collect();
    let rest: Vec<Color> = lists[u].iter().copied().filter(|c| !lu.contains(c)).take(2 - lu.len()).collect();
    lu.extend(rest);
    let t: Vec<Vec<Color>> = (0..n).map(|v| p.trunc(v, 2)).collect();
    match (1..n - 1).find(|&i| t[i] != t[i + 1]) {
        None => {
            for v in 1..n {
                p.col[v] = Some(t[1][(v - 1) % 2]);
            }
            let hat_v1 = p.residual(v1);
            if hat_v1.len() >= 2 {
                let hu: Vec<Color> = lu.iter().copied().filter(|c| p.residual(u).contains(c)).collect();
                p.put(u, &hu, &[]);
                p.greedy(v1);
            } else {
                p.greedy(v1);
                let hu: Vec<Color> = lu.iter().copied().filter(|c| p.residual(u).contains(c)).collect();
                p.put(u, &hu, &[]);
            }
        }
        Some(i) => {
            p.put(i + 1, &t[i + 1], &t[i]);
            for v in i + 2..n {
                p.greedy(v);
            }
            let hu: Vec<Color> = lu.iter().copied().filter(|c| p.residual(u).contains(c)).collect();
            if p.residual(v1).len() >= 2 {
                p.put(u, &hu, &[]);
            } else {
                p.put(u, &hu, &lists[v1]);
            }
            for v in 0..=i {
                p.greedy(v);
            }
        }
    }
    Ok(validated(&g, &lists, p.finish(), "fryingpan"))
}

/// Path `v1..vn` with chords `v_i v_{i+2}`.
pub fn diam_graph(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in [i + 1, i + 2] {
            if j < n {
                g.add_edge(i, j);
            }
        }
    }
    g
}

pub fn diam_color(lists: &Lists, n: usize) -> std::result::Result<Vec<Color>, Declined> {
    if n < 4 || lists.len() != n {
        return Err(Declined::Shape(format!("needs n >= 4 and {n} lists")));
    }
    if n.is_multiple_of(3) {
        return Err(Declined::Hypothesis(format!("n = {n} is divisible by 3")));
    }
    let lists = dedup(lists);
    check_sizes(&lists, n, |v| if v == 0 || v + 2 >= n { 2 } else { 3 })?;
    let g = diam_graph(n);
    let mut p = Painter::new(&g, &lists);
    diam_step(&mut p, n);
    Ok(validated(&g, &lists, p.finish(), "diam"))
}

/// Colors `v1..vm` (indices `0..m`) with the later vertices possibly precolored.
fn diam_step(p: &mut Painter, m: usize) {
    let size = |v: usize| if v == 0 || v + 2 >= m { 2 } else { 3 };
    let t = |p: &Painter, v: usize| p.trunc(v, size(v));
    let (a, b) = (m - 2, m - 1);
    match m {
        4 => {
            if t(p, a) == t(p, b) {
                let (l1, l2) = (t(p, 1), t(p, a));
                p.put(1, &l1, &l2);
                for v in [0, 2, 3] {
                    p.greedy(v);
                }
            } else {
                let (l2, l3) = (t(p, 2), t(p, 3));
                p.put(2, &l2, &l3);
                for v in [0, 1, 3] {
                    p.greedy(v);
                }
            }
        }
        5 => {
            if t(p, a) == t(p, b) {
                let (l2, l3) = (t(p, 2), t(p, 3));
                p.put(2, &l2, &l3);
                for v in [0, 1, 3, 4] {
                    p.greedy(v);
                }
            } else {
                let (l4, l3) = (t(p, 4), t(p, 3));
                p.put(4, &l4, &l3);
                diam_step(p, 4);
            }
        }
        _ => {
            if t(p, a) == t(p, b) {
                let (lc, lb) = (t(p, m - 3), t(p, b));
                p.put(m - 3, &lc, &lb);
                diam_step(p, m - 3);
                p.greedy(a);
                p.greedy(b);
            } else if m % 3 == 2 {
                let (lb, la) = (t(p, b), t(p, a));
                p.put(b, &lb, &la);
                diam_step(p, m - 1);
            } else {
                let (la, lb) = (t(p, a), t(p, b));
                p.put(a, &la, &lb);
                diam_step(p, m - 2);
                p.greedy(b);
            }
        }
    }
}

/// Edge names of the ten-edge gadget, in list order.
pub const AUX13_EDGES: [&str; 10] = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"];

/// Endpoints of the gadget edges; vertex 0 is the hub.
const AUX13_ENDS: [(usize, usize); 10] =
    [(3, 2), (2, 1), (1, 8), (8, 0), (6, 0), (6, 5), (5, 4), (4, 3), (3, 0), (2, 0)];

/// Minimum list sizes for `a..j`.
pub const AUX13_SIZES: [usize; 10] = [3, 3, 2, 3, 3, 2, 2, 3, 2, 4];

/// Conflict graph of the gadget's edges.
pub fn aux13_graph() -> Graph {
    let mut g = Graph::new(10);
    for i in 0..10 {
        for j in i + 1..10 {
            let (a, b) = AUX13_ENDS[i];
            let (c, d) = AUX13_ENDS[j];
            if a == c || a == d || b == c || b == d {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Edge coloring of the gadget; existence rests on its verified certificate.
pub fn aux13_color(lists: &Lists) -> std::result::Result<Vec<Color>, Declined> {
    let lists = dedup(lists);
    check_sizes(&lists, 10, |i| AUX13_SIZES[i])?;
    let g = aux13_graph();
    Ok(validated(&g, &lists, l_colorable(&g, &lists), "aux13"))
}
