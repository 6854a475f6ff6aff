use serde::Serialize;

use crate::error::{Error, Result};

use super::rays::{inner_abs, RaySet};

/// Default orthogonality tolerance for exact ray files.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Vertices are rays, edges join orthogonal pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalityGraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip)]
    adjacency: Vec<Vec<bool>>,
    tolerance: f64,
}

/// Three mutually adjacent vertices, `a < b < c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Triad(pub usize, pub usize, pub usize);

impl Triad {
    pub fn vertices(&self) -> [usize; 3] {
        [self.0, self.1, self.2]
    }
}

/// Edge `(i, j)` iff `|<v_i|v_j>| <= tol`, with `tol` in `(0, 0.1]`.
pub fn build_graph(rays: &RaySet, tol: f64) -> Result<OrthogonalityGraph> {
    if !(tol > 0.0 && tol <= 0.1) {
        return Err(Error::Precondition(format!("tolerance {tol} outside (0, 0.1]")));
    }
    let v = rays.rays();
    let mut edges = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let overlap = inner_abs(&v[i], &v[j]);
            if overlap > 1.0 - 1e-10 {
                return Err(Error::DuplicateRay { first: i, second: j });
            }
            if overlap <= tol {
                edges.push((i, j));
            }
        }
    }
    let mut g = OrthogonalityGraph::from_edges(v.len(), &edges)?;
    g.tolerance = tol;
    Ok(g)
}

impl OrthogonalityGraph {
    /// A graph given directly by its edges; the tolerance is recorded as 0.
    pub fn from_edges(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![vec![false; vertices]; vertices];
        for &(a, b) in edges {
            if a >= vertices || b >= vertices || a == b {
                return Err(Error::InvalidState(format!("bad edge ({a}, {b})")));
            }
            adjacency[a][b] = true;
            adjacency[b][a] = true;
        }
        let mut edges: Vec<(usize, usize)> = (0..vertices)
            .flat_map(|i| (i + 1..vertices).map(move |j| (i, j)))
            .filter(|&(i, j)| adjacency[i][j])
            .collect();
        edges.sort_unstable();
        Ok(Self {
            vertices,
            edges,
            adjacency,
            tolerance: 0.0,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v]
            .iter()
            .enumerate()
            .filter_map(|(u, &e)| e.then_some(u))
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

/// All 3-cliques, each once, in lexicographic order.
pub fn enumerate_triads(g: &OrthogonalityGraph) -> Vec<Triad> {
    let mut out = Vec::new();
    for &(a, b) in g.edges() {
        for c in b + 1..g.vertex_count() {
            if g.adjacent(a, c) && g.adjacent(b, c) {
                out.push(Triad(a, b, c));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Vertices lying in two or more triads.
pub fn contextual_witness(g: &OrthogonalityGraph, triads: &[Triad]) -> Vec<usize> {
    let mut count = vec![0usize; g.vertex_count()];
    for t in triads {
        for v in t.vertices() {
            count[v] += 1;
        }
    }
    (0..g.vertex_count()).filter(|v| count[*v] >= 2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn basis() -> RaySet {
        RaySet::from_real(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap()
    }

    fn two_bases() -> RaySet {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        RaySet::from_real(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, h, h],
            vec![0.0, h, -h],
        ])
        .unwrap()
    }

    #[test]
    fn basis_is_a_triangle() {
        let g = build_graph(&basis(), DEFAULT_TOL).unwrap();
        assert_eq!(g.edges(), [(0, 1), (0, 2), (1, 2)]);
        assert_eq!(enumerate_triads(&g), [Triad(0, 1, 2)]);
        assert!(contextual_witness(&g, &enumerate_triads(&g)).is_empty());
    }

    #[test]
    fn diagonal_ray_adds_no_edges() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rays = RaySet::from_real(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![h, h, 0.0]]).unwrap();
        let g = build_graph(&rays, DEFAULT_TOL).unwrap();
        assert_eq!(g.edges(), [(0, 1)]);
        assert!(enumerate_triads(&g).is_empty());
    }

    #[test]
    fn two_bases_share_a_vertex() {
        let g = build_graph(&two_bases(), DEFAULT_TOL).unwrap();
        let t = enumerate_triads(&g);
        assert_eq!(t, [Triad(0, 1, 2), Triad(0, 3, 4)]);
        assert_eq!(contextual_witness(&g, &t), [0]);
    }

    #[test]
    fn edgeless_and_bad_tolerance() {
        let g = OrthogonalityGraph::from_edges(4, &[]).unwrap();
        assert!(enumerate_triads(&g).is_empty());
        assert!(build_graph(&basis(), 0.0).is_err());
        assert!(build_graph(&basis(), 0.2).is_err());
        assert!(OrthogonalityGraph::from_edges(2, &[(0, 0)]).is_err());
    }

    fn rotation(a: f64, b: f64, c: f64) -> [[f64; 3]; 3] {
        let (sa, ca) = a.sin_cos();
        let (sb, cb) = b.sin_cos();
        let (sc, cc) = c.sin_cos();
        let rz = |s: f64, c: f64| [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]];
        let ry = |s: f64, c: f64| [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]];
        let mul = |x: [[f64; 3]; 3], y: [[f64; 3]; 3]| {
            let mut m = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
                }
            }
            m
        };
        mul(mul(rz(sa, ca), ry(sb, cb)), rz(sc, cc))
    }

    proptest! {
        #[test]
        fn edges_invariant_under_rotation_and_sign(
            a in 0.0..6.3f64, b in 0.0..3.2f64, c in 0.0..6.3f64, signs in proptest::collection::vec(any::<bool>(), 5)
        ) {
            let base = two_bases();
            let r = rotation(a, b, c);
            let moved: Vec<Vec<f64>> = base
                .rays()
                .iter()
                .zip(&signs)
                .map(|(v, s)| {
                    let sign = if *s { -1.0 } else { 1.0 };
                    (0..3).map(|i| sign * (0..3).map(|k| r[i][k] * v[k].re).sum::<f64>()).collect()
                })
                .collect();
            let g0 = build_graph(&base, DEFAULT_TOL).unwrap();
            let g1 = build_graph(&RaySet::from_real(&moved).unwrap(), DEFAULT_TOL).unwrap();
            prop_assert_eq!(g0.edges(), g1.edges());
        }
    }
}
