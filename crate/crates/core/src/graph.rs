//! Embedded planar graphs given by rotation systems.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{parse_err, Error, Result};

/// Face walks of a connected rotation system.
#[derive(Clone, Debug)]
pub struct FaceSet {
    /// Each face as the cyclic sequence of vertices met along its walk.
    pub walks: Vec<Vec<usize>>,
    dart_face: Vec<usize>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    /// Length of face `f` (number of darts on its walk).
    pub fn length(&self, f: usize) -> usize {
        self.walks[f].len()
    }
}

#[derive(Clone, Debug)]
pub struct EmbeddedGraph {
    name: String,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    rot: Vec<Vec<usize>>,
    dart_offset: Vec<usize>,
    dart_index: HashMap<(usize, usize), usize>,
    faces: std::result::Result<FaceSet, FaceError>,
}

#[derive(Clone, Copy, Debug)]
enum FaceError {
    Disconnected,
    NotPlanar(i64),
}

impl EmbeddedGraph {
    /// Builds a graph from labels and clockwise neighbor lists given by index.
    pub fn from_indices(name: &str, labels: Vec<String>, rot: Vec<Vec<usize>>) -> Result<Self> {
        if labels.len() != rot.len() {
            return Err(Error::Malformed("label and rotation counts differ".into()));
        }
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(Error::Malformed(format!("bad vertex label `{l}`")));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Malformed(format!("vertex `{l}` listed twice")));
            }
        }
        let n = labels.len();
        let mut dart_offset = Vec::with_capacity(n + 1);
        let mut dart_index = HashMap::new();
        let mut off = 0;
        for (u, r) in rot.iter().enumerate() {
            dart_offset.push(off);
            for (i, &v) in r.iter().enumerate() {
                if v >= n {
                    return Err(Error::Malformed(format!("neighbor index {v} out of range")));
                }
                if v == u {
                    return Err(Error::Malformed(format!("loop at `{}`", labels[u])));
                }
                if dart_index.insert((u, v), off + i).is_some() {
                    return Err(Error::Malformed(format!(
                        "`{}` appears twice around `{}`",
                        labels[v], labels[u]
                    )));
                }
            }
            off += r.len();
        }
        dart_offset.push(off);
        for &(u, v) in dart_index.keys() {
            if !dart_index.contains_key(&(v, u)) {
                return Err(Error::Malformed(format!(
                    "`{}` lists `{}` but not conversely",
                    labels[u], labels[v]
                )));
            }
        }
        let mut g = EmbeddedGraph {
            name: name.to_string(),
            labels,
            index,
            rot,
            dart_offset,
            dart_index,
            faces: Err(FaceError::Disconnected),
        };
        g.faces = g.trace_faces();
        Ok(g)
    }

    /// Builds a graph from `(label, clockwise neighbor labels)` pairs.
    pub fn from_rotation(name: &str, rows: &[(String, Vec<String>)]) -> Result<Self> {
        let labels: Vec<String> = rows.iter().map(|(l, _)| l.clone()).collect();
        let index: HashMap<&str, usize> =
            labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut rot = Vec::with_capacity(rows.len());
        for (_, nbrs) in rows {
            let mut r = Vec::with_capacity(nbrs.len());
            for w in nbrs {
                r.push(*index.get(w.as_str()).ok_or_else(|| Error::UnknownVertex(w.clone()))?);
            }
            rot.push(r);
        }
        Self::from_indices(name, labels, rot)
    }

    /// Parses the `graph` / `rot v: ...` text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut rows = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let lineno = no + 1;
            if name.is_none() {
                let rest = line
                    .strip_prefix("graph")
                    .filter(|r| r.is_empty() || r.starts_with(char::is_whitespace))
                    .ok_or_else(|| parse_err(lineno, "expected `graph <name>`"))?;
                name = Some(rest.trim().to_string());
                continue;
            }
            let rest = line
                .strip_prefix("rot ")
                .ok_or_else(|| parse_err(lineno, "expected `rot <v>: <neighbors>`"))?;
            let (v, nbrs) =
                rest.split_once(':').ok_or_else(|| parse_err(lineno, "missing `:`"))?;
            let v = v.trim();
            if v.is_empty() {
                return Err(parse_err(lineno, "empty vertex label"));
            }
            rows.push((v.to_string(), nbrs.split_whitespace().map(str::to_string).collect()));
        }
        let name = name.ok_or_else(|| parse_err(1, "empty graph file"))?;
        Self::from_rotation(&name, &rows)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("graph {}\n", self.name);
        for v in 0..self.n() {
            let _ = write!(s, "rot {}:", self.labels[v]);
            for &w in &self.rot[v] {
                let _ = write!(s, " {}", self.labels[w]);
            }
            s.push('\n');
        }
        s
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.dart_index.len() / 2
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.rot.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Clockwise neighbors of `v`.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.dart_index.contains_key(&(u, v))
    }

    /// Edges as index pairs `(u, v)` with `u < v`, ordered by `u` then rotation.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            for &v in &self.rot[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.rot[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n()
    }

    fn dart(&self, u: usize, v: usize) -> usize {
        self.dart_index[&(u, v)]
    }

    /// The dart following `u -> v` along its face.
    fn next_dart(&self, u: usize, v: usize) -> (usize, usize) {
        let r = &self.rot[v];
        let i = self.dart(v, u) - self.dart_offset[v];
        (v, r[(i + r.len() - 1) % r.len()])
    }

    fn trace_faces(&self) -> std::result::Result<FaceSet, FaceError> {
        if !self.is_connected() {
            return Err(FaceError::Disconnected);
        }
        let darts = self.dart_index.len();
        let mut dart_face = vec![usize::MAX; darts];
        let mut walks = Vec::new();
        for u in 0..self.n() {
            for &v in &self.rot[u] {
                if dart_face[self.dart(u, v)] != usize::MAX {
                    continue;
                }
                let f = walks.len();
                let mut walk = Vec::new();
                let (mut a, mut b) = (u, v);
                loop {
                    let d = self.dart(a, b);
                    if dart_face[d] != usize::MAX {
                        break;
                    }
                    dart_face[d] = f;
                    walk.push(a);
                    (a, b) = self.next_dart(a, b);
                }
                walks.push(walk);
            }
        }
        let n = self.n() as i64;
        let euler = n - self.edge_count() as i64 + walks.len() as i64;
        if n > 0 && euler != 2 {
            return Err(FaceError::NotPlanar(euler));
        }
        Ok(FaceSet { walks, dart_face })
    }

    /// Faces of the embedding; errors on disconnected or non-planar rotation systems.
    pub fn faces(&self) -> Result<&FaceSet> {
        match &self.faces {
            Ok(f) => Ok(f),
            Err(FaceError::Disconnected) => Err(Error::Disconnected),
            Err(FaceError::NotPlanar(e)) => Err(Error::NotPlanar(*e)),
        }
    }

    /// Face containing the dart `u -> v`.
    pub fn face_of_dart(&self, u: usize, v: usize) -> Result<usize> {
        let faces = self.faces()?;
        let d = *self
            .dart_index
            .get(&(u, v))
            .ok_or_else(|| Error::NotAdjacent(self.labels[u].clone(), self.labels[v].clone()))?;
        Ok(faces.dart_face[d])
    }

    /// Third vertex of the face on dart `u -> v` when that face is a triangle.
    pub fn triangle_apex(&self, u: usize, v: usize) -> Result<Option<usize>> {
        let f = self.face_of_dart(u, v)?;
        let walk = &self.faces()?.walks[f];
        if walk.len() != 3 {
            return Ok(None);
        }
        Ok(walk.iter().copied().find(|&x| x != u && x != v))
    }

    /// Whether `u`, `v`, `w` bound a triangular face.
    pub fn is_triangular_face(&self, u: usize, v: usize, w: usize) -> bool {
        if !self.has_edge(u, v) || self.faces.is_err() {
            return false;
        }
        [(u, v), (v, u)]
            .iter()
            .any(|&(a, b)| matches!(self.triangle_apex(a, b), Ok(Some(x)) if x == w))
    }

    /// Every face around `v` is a triangle.
    pub fn is_triangulated(&self, v: usize) -> Result<bool> {
        let faces = self.faces()?;
        Ok(self.rot[v].iter().all(|&w| faces.walks[faces.dart_face[self.dart(v, w)]].len() == 3))
    }

    /// Shortest path between two neighbors of `u` using only pairs `x, y`
    /// with `uxy` a triangular face. `None` means unreachable.
    pub fn triangle_distance(&self, u: usize, v1: usize, v2: usize) -> Result<Option<usize>> {
        for &v in &[v1, v2] {
            if !self.has_edge(u, v) {
                return Err(Error::NotAdjacent(self.labels[u].clone(), self.labels[v].clone()));
            }
        }
        let nbrs = &self.rot[u];
        let mut link: HashMap<usize, Vec<usize>> = HashMap::new();
        for &x in nbrs {
            if let Some(y) = self.triangle_apex(u, x)? {
                link.entry(x).or_default().push(y);
                link.entry(y).or_default().push(x);
            }
        }
        let mut dist = HashMap::from([(v1, 0usize)]);
        let mut queue = VecDeque::from([v1]);
        while let Some(x) = queue.pop_front() {
            if x == v2 {
                return Ok(Some(dist[&x]));
            }
            for &y in link.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                if !dist.contains_key(&y) {
                    dist.insert(y, dist[&x] + 1);
                    queue.push_back(y);
                }
            }
        }
        Ok(None)
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Small named graphs used in tests and examples.
pub mod samples {
    use super::EmbeddedGraph;

    fn build(name: &str, rows: &[(&str, &[&str])]) -> EmbeddedGraph {
        let rows: Vec<(String, Vec<String>)> = rows
            .iter()
            .map(|(v, n)| (v.to_string(), n.iter().map(|s| s.to_string()).collect()))
            .collect();
        EmbeddedGraph::from_rotation(name, &rows).expect("sample graph is valid")
    }

    pub fn k2() -> EmbeddedGraph {
        build("K2", &[("u", &["v"]), ("v", &["u"])])
    }

    pub fn k3() -> EmbeddedGraph {
        build("K3", &[("a", &["b", "c"]), ("b", &["c", "a"]), ("c", &["a", "b"])])
    }

    pub fn k4() -> EmbeddedGraph {
        build(
            "K4",
            &[
                ("a", &["b", "c", "d"]),
                ("b", &["a", "d", "c"]),
                ("c", &["a", "b", "d"]),
                ("d", &["a", "c", "b"]),
            ],
        )
    }

    /// Octahedron: poles n, s and equator 1..4.
    pub fn octahedron() -> EmbeddedGraph {
        build(
            "octahedron",
            &[
                ("n", &["e1", "e2", "e3", "e4"]),
                ("s", &["e4", "e3", "e2", "e1"]),
                ("e1", &["n", "e4", "s", "e2"]),
                ("e2", &["n", "e1", "s", "e3"]),
                ("e3", &["n", "e2", "s", "e4"]),
                ("e4", &["n", "e3", "s", "e1"]),
            ],
        )
    }

    /// Wheel with hub `h` and rim `r1..rk`.
    pub fn wheel(k: usize) -> EmbeddedGraph {
        let mut labels = vec!["h".to_string()];
        labels.extend((1..=k).map(|i| format!("r{i}")));
        let mut rot = vec![(1..=k).collect::<Vec<_>>()];
        for i in 1..=k {
            let prev = if i == 1 { k } else { i - 1 };
            let next = if i == k { 1 } else { i + 1 };
            rot.push(vec![0, prev, next]);
        }
        EmbeddedGraph::from_indices(&format!("W{k}"), labels, rot).expect("wheel is valid")
    }

    /// Regular icosahedron (12 vertices of degree 5, 20 triangles).
    pub fn icosahedron() -> EmbeddedGraph {
        // Poles t, b; upper ring a0..a4, lower ring c0..c4 with c_k between a_k and a_{k+1}.
        let a = |k: usize| 1 + k % 5;
        let c = |k: usize| 6 + k % 5;
        let mut faces = Vec::new();
        for k in 0..5 {
            faces.push(vec![0, a(k), a(k + 1)]);
            faces.push(vec![a(k), c(k), a(k + 1)]);
            faces.push(vec![a(k + 1), c(k), c(k + 1)]);
            faces.push(vec![11, c(k + 1), c(k)]);
        }
        let labels = std::iter::once("t".to_string())
            .chain((0..5).map(|k| format!("a{k}")))
            .chain((0..5).map(|k| format!("c{k}")))
            .chain(std::iter::once("b".to_string()))
            .collect();
        crate::gen::from_faces("icosahedron", labels, &faces).expect("icosahedron is valid")
    }

    /// Regular dodecahedron (20 vertices of degree 3, 12 pentagons).
    pub fn dodecahedron() -> EmbeddedGraph {
        // Outer ring o0..o4, middle ring m0..m9, inner ring i0..i4.
        let o = |k: usize| k % 5;
        let m = |k: usize| 5 + k % 10;
        let i = |k: usize| 15 + k % 5;
        let mut faces = vec![(0..5).rev().map(o).collect::<Vec<_>>()];
        for k in 0..5 {
            faces.push(vec![o(k), o(k + 1), m(2 * k + 2), m(2 * k + 1), m(2 * k)]);
            faces.push(vec![m(2 * k + 1), m(2 * k + 2), m(2 * k + 3), i(k + 1), i(k)]);
        }
        faces.push((0..5).map(i).collect());
        let labels = (0..5)
            .map(|k| format!("o{k}"))
            .chain((0..10).map(|k| format!("m{k}")))
            .chain((0..5).map(|k| format!("i{k}")))
            .collect();
        crate::gen::from_faces("dodecahedron", labels, &faces).expect("dodecahedron is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(table: &[(&str, &str)]) -> Vec<(String, Vec<String>)> {
        table.iter().map(|(v, n)| (v.to_string(), n.split_whitespace().map(str::to_string).collect())).collect()
    }

    // Hub of degree 5 whose link is the path v3 - x - y - v1, plus a pendant v2.
    fn fan() -> EmbeddedGraph {
        let r = rows(&[("u", "v2 v1 y x v3"), ("v3", "u x"), ("x", "v3 u y"), ("y", "x u v1"), ("v1", "u y"), ("v2", "u")]);
        EmbeddedGraph::from_rotation("fan", &r).unwrap()
    }

    #[test]
    fn face_counts_follow_euler() {
        for (g, f) in [(samples::k3(), 2), (samples::k4(), 4), (samples::octahedron(), 8), (samples::dodecahedron(), 12)] {
            let faces = g.faces().unwrap();
            assert_eq!(faces.len(), f, "{}", g.name());
            let darts: usize = faces.walks.iter().map(Vec::len).sum();
            assert_eq!(darts, 2 * g.edge_count());
        }
    }

    #[test]
    fn triangle_distance_on_the_fan() {
        let g = fan();
        let v = |l| g.vertex(l).unwrap();
        assert_eq!(g.faces().unwrap().len(), 4);
        assert_eq!(g.triangle_distance(v("u"), v("v1"), v("v2")).unwrap(), None);
        assert_eq!(g.triangle_distance(v("u"), v("v1"), v("v3")).unwrap(), Some(3));
        assert!(matches!(g.triangle_distance(v("u"), v("v1"), v("y")), Ok(Some(1))));
        assert!(g.triangle_distance(v("x"), v("v1"), v("y")).is_err());
    }

    #[test]
    fn wheel_rim_neighbors_are_at_distance_one() {
        let g = samples::wheel(5);
        let hub = (0..g.n()).find(|&v| g.degree(v) == 5).unwrap();
        let r = g.rotation(hub);
        assert_eq!(g.triangle_distance(hub, r[0], r[1]).unwrap(), Some(1));
        assert!(g.is_triangulated(hub).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let asym = rows(&[("a", "b"), ("b", "")]);
        assert!(EmbeddedGraph::from_rotation("x", &asym).is_err());
        let two = rows(&[("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")]);
        let g = EmbeddedGraph::from_rotation("x", &two).unwrap();
        assert!(matches!(g.faces(), Err(Error::Disconnected)));
        assert!(EmbeddedGraph::parse("rot a: b\n").is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = samples::octahedron();
        let h = EmbeddedGraph::parse(&g.to_text()).unwrap();
        assert_eq!(h.to_text(), g.to_text());
        assert_eq!(h.max_degree(), 4);
    }
}
