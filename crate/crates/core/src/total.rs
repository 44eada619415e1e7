//! The total graph: vertices and edges of `G` as one conflict graph.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::EmbeddedGraph;

/// Number of colors every element starts with.
pub const PALETTE: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Vertex(usize),
    /// Endpoints with the smaller index first.
    Edge(usize, usize),
}

impl Element {
    pub fn edge(a: usize, b: usize) -> Element {
        Element::Edge(a.min(b), a.max(b))
    }
}

#[derive(Clone, Debug)]
pub struct TotalGraph {
    elements: Vec<Element>,
    names: Vec<String>,
    index: HashMap<Element, usize>,
    adj: Vec<Vec<usize>>,
}

impl TotalGraph {
    pub fn new(g: &EmbeddedGraph) -> TotalGraph {
        let mut elements: Vec<Element> = (0..g.n()).map(Element::Vertex).collect();
        elements.extend(g.edges().into_iter().map(|(a, b)| Element::edge(a, b)));
        let index: HashMap<Element, usize> =
            elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let names = elements.iter().map(|&e| element_name(g, e)).collect();
        let mut adj = vec![Vec::new(); elements.len()];
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        for (i, &e) in elements.iter().enumerate() {
            match e {
                Element::Vertex(v) => {
                    for &w in g.rotation(v) {
                        adj[i].push(index[&Element::Vertex(w)]);
                    }
                }
                Element::Edge(a, b) => {
                    incident[a].push(i);
                    incident[b].push(i);
                    for x in [a, b] {
                        let xv = index[&Element::Vertex(x)];
                        adj[i].push(xv);
                        adj[xv].push(i);
                    }
                }
            }
        }
        for list in &incident {
            for (k, &e) in list.iter().enumerate() {
                for &f in &list[k + 1..] {
                    adj[e].push(f);
                    adj[f].push(e);
                }
            }
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        TotalGraph { elements, names, index, adj }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> Element {
        self.elements[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn id(&self, e: Element) -> Option<usize> {
        self.index.get(&e).copied()
    }

    /// Resolves a vertex label or a `u-v` edge name.
    pub fn lookup(&self, g: &EmbeddedGraph, name: &str) -> Result<usize> {
        if let Ok(v) = g.vertex(name) {
            return Ok(self.index[&Element::Vertex(v)]);
        }
        for (k, _) in name.match_indices('-') {
            let (a, b) = (&name[..k], &name[k + 1..]);
            if let (Ok(a), Ok(b)) = (g.vertex(a), g.vertex(b)) {
                if let Some(&i) = self.index.get(&Element::edge(a, b)) {
                    return Ok(i);
                }
            }
        }
        Err(Error::Invalid(format!("unknown element `{name}`")))
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn adjacency_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Whether the given elements are pairwise adjacent.
    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &a)| set[k + 1..].iter().all(|&b| self.adjacent(a, b)))
    }
}

/// Display name: vertex label, or `a-b` with labels in lexicographic order.
pub fn element_name(g: &EmbeddedGraph, e: Element) -> String {
    match e {
        Element::Vertex(v) => g.label(v).to_string(),
        Element::Edge(a, b) => {
            let (x, y) = (g.label(a), g.label(b));
            if x <= y {
                format!("{x}-{y}")
            } else {
                format!("{y}-{x}")
            }
        }
    }
}

/// Worst-case residual list sizes once everything outside `uncolored` is colored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Residuals {
    pub sizes: BTreeMap<usize, usize>,
    /// Elements with more than ten colored neighbors (reported at size 0).
    pub overloaded: Vec<usize>,
}

pub fn residual_lists(t: &TotalGraph, uncolored: &HashSet<usize>) -> Residuals {
    let mut out = Residuals::default();
    let mut ids: Vec<usize> = uncolored.iter().copied().collect();
    ids.sort_unstable();
    for x in ids {
        let colored = t.neighbors(x).iter().filter(|y| !uncolored.contains(y)).count();
        if colored > PALETTE {
            out.overloaded.push(x);
        }
        out.sizes.insert(x, PALETTE.saturating_sub(colored));
    }
    out
}
