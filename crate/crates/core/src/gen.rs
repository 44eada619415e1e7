//! Random planar inputs: triangulations with bounded degree and sparser subgraphs.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::EmbeddedGraph;

/// Builds an embedding from consistently oriented face boundaries.
///
/// For consecutive boundary vertices `a, v, b`, the neighbor `b` is placed
/// just before `a` in the rotation at `v`.
pub fn from_faces(name: &str, labels: Vec<String>, faces: &[Vec<usize>]) -> Result<EmbeddedGraph> {
    let n = labels.len();
    let mut succ: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
    for f in faces {
        let k = f.len();
        for j in 0..k {
            let a = f[(j + k - 1) % k];
            let v = f[j];
            let b = f[(j + 1) % k];
            if succ[v].insert(b, a).is_some() {
                return Err(Error::Malformed(format!("inconsistent face orientation at {v}")));
            }
        }
    }
    let mut rot = Vec::with_capacity(n);
    for (v, s) in succ.iter().enumerate() {
        let Some(&start) = s.keys().min() else {
            rot.push(Vec::new());
            continue;
        };
        let mut cyc = vec![start];
        let mut cur = s[&start];
        while cur != start {
            cyc.push(cur);
            cur = *s
                .get(&cur)
                .ok_or_else(|| Error::Malformed(format!("open fan around vertex {v}")))?;
            if cyc.len() > s.len() {
                return Err(Error::Malformed(format!("fan around vertex {v} does not close")));
            }
        }
        if cyc.len() != s.len() {
            return Err(Error::Malformed(format!("vertex {v} is pinched")));
        }
        rot.push(cyc);
    }
    EmbeddedGraph::from_indices(name, labels, rot)
}

struct Tri {
    faces: Vec<[usize; 3]>,
    owner: HashMap<(usize, usize), usize>,
    adj: HashSet<(usize, usize)>,
    deg: Vec<usize>,
}

impl Tri {
    fn tetrahedron() -> Tri {
        let mut t = Tri { faces: Vec::new(), owner: HashMap::new(), adj: HashSet::new(), deg: vec![3; 4] };
        for f in [[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]] {
            t.push(f);
        }
        for (a, b) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            t.adj.insert((a, b));
            t.adj.insert((b, a));
        }
        t
    }

    fn push(&mut self, f: [usize; 3]) {
        let i = self.faces.len();
        self.faces.push(f);
        self.own(i);
    }

    fn own(&mut self, i: usize) {
        let f = self.faces[i];
        for j in 0..3 {
            self.owner.insert((f[j], f[(j + 1) % 3]), i);
        }
    }

    fn link(&mut self, a: usize, b: usize) {
        self.adj.insert((a, b));
        self.adj.insert((b, a));
        self.deg[a] += 1;
        self.deg[b] += 1;
    }

    fn insert(&mut self, fi: usize) {
        let [a, b, c] = self.faces[fi];
        let x = self.deg.len();
        self.deg.push(0);
        self.faces[fi] = [a, b, x];
        self.own(fi);
        self.push([b, c, x]);
        self.push([c, a, x]);
        self.link(a, x);
        self.link(b, x);
        self.link(c, x);
    }

    /// Flips the edge under dart `u -> v` when degrees and simplicity allow it.
    fn flip(&mut self, u: usize, v: usize, max_deg: usize) -> bool {
        let f1 = self.owner[&(u, v)];
        let f2 = self.owner[&(v, u)];
        let x = apex(self.faces[f1], u, v);
        let y = apex(self.faces[f2], v, u);
        if x == y
            || self.adj.contains(&(x, y))
            || self.deg[u] <= 3
            || self.deg[v] <= 3
            || self.deg[x] >= max_deg
            || self.deg[y] >= max_deg
        {
            return false;
        }
        self.owner.remove(&(u, v));
        self.owner.remove(&(v, u));
        self.adj.remove(&(u, v));
        self.adj.remove(&(v, u));
        self.deg[u] -= 1;
        self.deg[v] -= 1;
        self.faces[f1] = [y, v, x];
        self.faces[f2] = [x, u, y];
        self.own(f1);
        self.own(f2);
        self.link(x, y);
        true
    }

    fn into_graph(self, name: &str) -> EmbeddedGraph {
        let labels = (0..self.deg.len()).map(|i| format!("v{i}")).collect();
        let faces: Vec<Vec<usize>> = self.faces.iter().map(|f| f.to_vec()).collect();
        from_faces(name, labels, &faces).expect("generated triangulation is consistent")
    }
}

fn apex(f: [usize; 3], u: usize, v: usize) -> usize {
    f.into_iter().find(|&w| w != u && w != v).expect("triangle has three vertices")
}

/// Random triangulation on `n >= 4` vertices with maximum degree at most
/// `max_deg >= 6`, built by face insertions mixed with degree-bounded flips.
pub fn random_triangulation<R: Rng>(n: usize, max_deg: usize, rng: &mut R) -> EmbeddedGraph {
    assert!(n >= 4, "a triangulation needs at least 4 vertices");
    assert!(max_deg >= 6, "maximum degree below 6 cannot reach arbitrary sizes");
    'restart: loop {
        let mut t = Tri::tetrahedron();
        while t.deg.len() < n {
            let open: Vec<usize> = (0..t.faces.len())
                .filter(|&i| t.faces[i].iter().all(|&v| t.deg[v] < max_deg))
                .collect();
            if open.is_empty() {
                continue 'restart;
            }
            let fi = *open.choose(rng).expect("nonempty");
            t.insert(fi);
            for _ in 0..2 {
                random_flip(&mut t, max_deg, rng);
            }
        }
        for _ in 0..2 * n {
            random_flip(&mut t, max_deg, rng);
        }
        return t.into_graph(&format!("tri{n}"));
    }
}

fn random_flip<R: Rng>(t: &mut Tri, max_deg: usize, rng: &mut R) {
    let f = t.faces[rng.gen_range(0..t.faces.len())];
    let j = rng.gen_range(0..3);
    t.flip(f[j], f[(j + 1) % 3], max_deg);
}

/// Removes up to `k` random edges from `g` while keeping it connected and
/// every degree at least `min_deg`. The rotation system stays an embedding.
pub fn thin<R: Rng>(g: &EmbeddedGraph, k: usize, min_deg: usize, rng: &mut R) -> EmbeddedGraph {
    let mut rot: Vec<Vec<usize>> = (0..g.n()).map(|v| g.rotation(v).to_vec()).collect();
    let mut edges = g.edges();
    edges.shuffle(rng);
    let mut removed = 0;
    for (u, v) in edges {
        if removed == k {
            break;
        }
        if rot[u].len() <= min_deg || rot[v].len() <= min_deg {
            continue;
        }
        rot[u].retain(|&w| w != v);
        rot[v].retain(|&w| w != u);
        if connected(&rot) {
            removed += 1;
        } else {
            // Put the edge back into its original rotation slots.
            rot[u] = g.rotation(u).iter().copied().filter(|&w| w == v || rot[u].contains(&w)).collect();
            rot[v] = g.rotation(v).iter().copied().filter(|&w| w == u || rot[v].contains(&w)).collect();
        }
    }
    EmbeddedGraph::from_indices(&format!("{}-thin", g.name()), g.labels().to_vec(), rot)
        .expect("edge deletion preserves validity")
}

fn connected(rot: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; rot.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &w in &rot[u] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn triangulations_respect_the_degree_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [4, 12, 30, 60] {
            let g = random_triangulation(n, 8, &mut rng);
            assert_eq!(g.n(), n);
            assert!(g.max_degree() <= 8);
            assert_eq!(g.edge_count(), 3 * n - 6);
            assert!((0..n).all(|v| g.is_triangulated(v).unwrap()));
        }
    }

    #[test]
    fn thinning_keeps_connectivity_and_minimum_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_triangulation(20, 8, &mut rng);
        let h = thin(&g, 10, 3, &mut rng);
        assert!(h.is_connected());
        assert!((0..h.n()).all(|v| h.degree(v) >= 3));
        assert!(h.edge_count() < g.edge_count());
        assert_eq!(h.faces().unwrap().len() as i64, 2 - h.n() as i64 + h.edge_count() as i64);
    }

    #[test]
    fn faces_build_a_tetrahedron() {
        let labels = ["a", "b", "c", "d"].map(String::from).to_vec();
        let g = from_faces("t", labels, &[vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1], vec![1, 3, 2]]).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.faces().unwrap().len(), 4);
    }
}
