//! Red/green value assignments on orthogonality graphs of ray sets.
//!
//! Constraints: (1) every vertex is colored; (2) every triad has exactly one
//! green vertex; (3) no edge joins two green vertices.

mod graph;
mod rays;
mod search;

use serde::{Deserialize, Serialize};

pub use graph::{build_graph, contextual_witness, enumerate_triads, OrthogonalityGraph, Triad, DEFAULT_TOL};
pub use rays::RaySet;
pub use search::{enumerate_colorings, search_coloring, SearchOutcome};

/// Red is value 0, green value 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
}

/// Per-vertex colors; `None` is uncolored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring(pub Vec<Option<Color>>);

impl Coloring {
    pub fn from_colors(colors: &[Color]) -> Self {
        Self(colors.iter().copied().map(Some).collect())
    }

    pub fn greens(&self) -> Vec<usize> {
        (0..self.0.len())
            .filter(|&v| self.0[v] == Some(Color::Green))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub constraint: u8,
    pub vertices: Vec<usize>,
}

/// All violations, constraint 1 first, then 2 by triad, then 3 by edge.
pub fn validate_coloring(g: &OrthogonalityGraph, triads: &[Triad], c: &Coloring) -> Vec<Violation> {
    let mut out = Vec::new();
    let color = |v: usize| c.0.get(v).copied().flatten();
    let uncolored: Vec<usize> = (0..g.vertex_count()).filter(|&v| color(v).is_none()).collect();
    if !uncolored.is_empty() || c.0.len() != g.vertex_count() {
        out.push(Violation {
            constraint: 1,
            vertices: uncolored,
        });
    }
    for t in triads {
        let greens = t
            .vertices()
            .iter()
            .filter(|&&v| color(v) == Some(Color::Green))
            .count();
        if greens != 1 {
            out.push(Violation {
                constraint: 2,
                vertices: t.vertices().to_vec(),
            });
        }
    }
    for &(a, b) in g.edges() {
        if color(a) == Some(Color::Green) && color(b) == Some(Color::Green) {
            out.push(Violation {
                constraint: 3,
                vertices: vec![a, b],
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use Color::{Green as G, Red as R};

    fn triangle() -> (OrthogonalityGraph, Vec<Triad>) {
        let g = OrthogonalityGraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let t = enumerate_triads(&g);
        (g, t)
    }

    #[test]
    fn basis_colorings() {
        let (g, t) = triangle();
        assert!(validate_coloring(&g, &t, &Coloring::from_colors(&[G, R, R])).is_empty());
        let v = validate_coloring(&g, &t, &Coloring::from_colors(&[G, G, R]));
        assert_eq!(v.iter().map(|x| x.constraint).collect::<Vec<_>>(), [2, 3]);
        let v = validate_coloring(&g, &t, &Coloring::from_colors(&[R, R, R]));
        assert_eq!(v, [Violation { constraint: 2, vertices: vec![0, 1, 2] }]);
        let v = validate_coloring(&g, &t, &Coloring(vec![Some(G), None, Some(R)]));
        assert_eq!(v[0], Violation { constraint: 1, vertices: vec![1] });
    }

    #[test]
    fn edge_rule_applies_outside_triads() {
        let g = OrthogonalityGraph::from_edges(2, &[(0, 1)]).unwrap();
        let v = validate_coloring(&g, &[], &Coloring::from_colors(&[G, G]));
        assert_eq!(v, [Violation { constraint: 3, vertices: vec![0, 1] }]);
    }
}
