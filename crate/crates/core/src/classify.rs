//! Neighbor classes used by the discharging rules: weak, semi-weak,
//! `(p,q)` flanks, and the refined classes of weak 5-neighbors.

use crate::error::{Error, Result};
use crate::graph::EmbeddedGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weakness {
    Weak,
    SemiWeak,
    Neither,
}

/// Refined class of a weak 5-neighbor of a 7-vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SClass {
    S3,
    S5,
    S6,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeighborClass {
    pub class: Weakness,
    /// Sorted degrees of the two vertices closing triangular faces on `uv`.
    pub pq: Option<(usize, usize)>,
    /// Set when `d(u) = 7` and `v` is a weak 5-neighbor that is S3, S5 or S6.
    pub s_class: Option<SClass>,
    /// Set when `d(u) = 8` and `v` is a weak 5-neighbor.
    pub e3: Option<bool>,
}

impl NeighborClass {
    pub fn is_weak(&self) -> bool {
        self.class == Weakness::Weak
    }

    pub fn is_semi_weak(&self) -> bool {
        self.class == Weakness::SemiWeak
    }
}

/// Apexes of the faces on either side of `uv` that are triangles.
pub fn flank_apexes(g: &EmbeddedGraph, u: usize, v: usize) -> Result<[Option<usize>; 2]> {
    Ok([g.triangle_apex(u, v)?, g.triangle_apex(v, u)?])
}

pub fn classify_neighbor(g: &EmbeddedGraph, u: usize, v: usize) -> Result<NeighborClass> {
    if !g.has_edge(u, v) {
        return Err(Error::NotAdjacent(g.label(u).into(), g.label(v).into()));
    }
    let [w1, w2] = flank_apexes(g, u, v)?;
    let tri = w1.is_some() as usize + w2.is_some() as usize;
    let dv = g.degree(v);
    let weak = (dv <= 4 && tri == 2) || (dv == 5 && g.is_triangulated(v)?);
    let class = if weak {
        Weakness::Weak
    } else if dv <= 4 && tri == 1 {
        Weakness::SemiWeak
    } else {
        Weakness::Neither
    };
    let pq = match (weak, w1, w2) {
        (true, Some(a), Some(b)) => {
            let (da, db) = (g.degree(a), g.degree(b));
            Some((da.min(db), da.max(db)))
        }
        _ => None,
    };
    let mut out = NeighborClass { class, pq, s_class: None, e3: None };
    if weak && dv == 5 {
        let (p, q) = pq.expect("weak 5-vertices are flanked by triangles");
        match g.degree(u) {
            7 => out.s_class = s_class(g, u, v, p, q),
            8 => out.e3 = Some(is_e3(g, u, v, p, q)),
            _ => {}
        }
    }
    Ok(out)
}

/// Neighbors `w` of `v` of degree `d` such that `uvw` is not a triangular face.
fn off_face_neighbors(g: &EmbeddedGraph, u: usize, v: usize, d: usize) -> usize {
    g.rotation(v)
        .iter()
        .filter(|&&w| w != u && g.degree(w) == d && !g.is_triangular_face(u, v, w))
        .count()
}

fn is_s3(g: &EmbeddedGraph, u: usize, v: usize, p: usize, q: usize) -> bool {
    (p == 6 && q >= 6)
        || (p >= 7 && off_face_neighbors(g, u, v, 6) >= 2)
        || off_face_neighbors(g, u, v, 5) >= 1
}

fn s_class(g: &EmbeddedGraph, u: usize, v: usize, p: usize, q: usize) -> Option<SClass> {
    if is_s3(g, u, v, p, q) {
        Some(SClass::S3)
    } else if g.rotation(v).iter().all(|&w| g.degree(w) == 7) {
        Some(SClass::S5)
    } else if (p, q) != (5, 6) {
        Some(SClass::S6)
    } else {
        None
    }
}

fn is_e3(g: &EmbeddedGraph, u: usize, v: usize, p: usize, q: usize) -> bool {
    (p == 6 && q >= 7)
        || (p == 7 && q == 7)
        || (p >= 7
            && q == 8
            && (off_face_neighbors(g, u, v, 6) >= 2 || off_face_neighbors(g, u, v, 5) >= 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::samples;

    #[test]
    fn rim_of_a_wheel_is_weak() {
        let g = samples::wheel(6);
        let hub = (0..g.n()).find(|&v| g.degree(v) == 6).unwrap();
        let c = classify_neighbor(&g, hub, g.rotation(hub)[0]).unwrap();
        assert!(c.is_weak());
        assert_eq!(c.pq, Some((3, 3)));
        assert_eq!(c.s_class, None);
    }

    #[test]
    fn pentagon_faces_make_neighbors_neither() {
        let g = samples::dodecahedron();
        let c = classify_neighbor(&g, 0, g.rotation(0)[0]).unwrap();
        assert_eq!(c.class, Weakness::Neither);
        assert_eq!(c.pq, None);
    }

    #[test]
    fn non_neighbors_are_rejected() {
        let g = samples::octahedron();
        let far = (1..g.n()).find(|&v| !g.has_edge(0, v)).unwrap();
        assert!(matches!(classify_neighbor(&g, 0, far), Err(Error::NotAdjacent(..))));
    }

    #[test]
    fn icosahedron_five_vertices_are_weak_but_unrefined() {
        let g = samples::icosahedron();
        for &v in g.rotation(0) {
            let c = classify_neighbor(&g, 0, v).unwrap();
            assert!(c.is_weak());
            assert_eq!((c.pq, c.s_class, c.e3), (Some((5, 5)), None, None));
        }
    }
}
