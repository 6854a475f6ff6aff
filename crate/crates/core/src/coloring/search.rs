//! Backtracking search for red/green colorings with unit propagation:
//! a green vertex reddens its neighbours, a triad with two reds forces its
//! third vertex green, and a triad with three reds is a conflict.

use serde::Serialize;

use super::graph::{OrthogonalityGraph, Triad};
use super::{validate_coloring, Color, Coloring};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SearchOutcome {
    Satisfiable { coloring: Coloring, nodes: u64 },
    Unsatisfiable { nodes: u64 },
}

impl SearchOutcome {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, SearchOutcome::Satisfiable { .. })
    }

    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Satisfiable { nodes, .. } | SearchOutcome::Unsatisfiable { nodes } => *nodes,
        }
    }
}

struct Problem<'a> {
    g: &'a OrthogonalityGraph,
    triads: &'a [Triad],
    /// Triads containing each vertex.
    member: Vec<Vec<usize>>,
}

impl<'a> Problem<'a> {
    fn new(g: &'a OrthogonalityGraph, triads: &'a [Triad]) -> Self {
        let mut member = vec![Vec::new(); g.vertex_count()];
        for (i, t) in triads.iter().enumerate() {
            for v in t.vertices() {
                member[v].push(i);
            }
        }
        Self { g, triads, member }
    }

    /// Assign and propagate to a fixpoint. `false` on conflict.
    fn assign(&self, c: &mut [Option<Color>], v: usize, color: Color) -> bool {
        let mut queue = vec![(v, color)];
        while let Some((v, color)) = queue.pop() {
            match c[v] {
                Some(existing) if existing == color => continue,
                Some(_) => return false,
                None => c[v] = Some(color),
            }
            if color == Color::Green {
                for u in self.g.neighbors(v) {
                    match c[u] {
                        Some(Color::Green) => return false,
                        Some(Color::Red) => {}
                        None => queue.push((u, Color::Red)),
                    }
                }
            }
            for &t in &self.member[v] {
                let vs = self.triads[t].vertices();
                let greens = vs.iter().filter(|&&x| c[x] == Some(Color::Green)).count();
                let reds = vs.iter().filter(|&&x| c[x] == Some(Color::Red)).count();
                if greens > 1 || reds == 3 {
                    return false;
                }
                if reds == 2 && greens == 0 {
                    let free = vs.iter().copied().find(|&x| c[x].is_none());
                    if let Some(x) = free {
                        queue.push((x, Color::Green));
                    }
                }
            }
        }
        true
    }

    /// First triad without a green vertex.
    fn open_triad(&self, c: &[Option<Color>]) -> Option<Triad> {
        self.triads
            .iter()
            .copied()
            .find(|t| t.vertices().iter().all(|&v| c[v] != Some(Color::Green)))
    }
}

/// Complete search; branches on which vertex of the first open triad is
/// green. Vertices left uncolored once every triad has a green are red.
pub fn search_coloring(g: &OrthogonalityGraph, triads: &[Triad]) -> SearchOutcome {
    let p = Problem::new(g, triads);
    let mut nodes = 0u64;
    let start = vec![None; g.vertex_count()];
    match solve(&p, start, &mut nodes) {
        Some(c) => {
            let coloring = Coloring(c.into_iter().map(|x| Some(x.unwrap_or(Color::Red))).collect());
            debug_assert!(validate_coloring(g, triads, &coloring).is_empty());
            SearchOutcome::Satisfiable { coloring, nodes }
        }
        None => SearchOutcome::Unsatisfiable { nodes },
    }
}

fn solve(p: &Problem, c: Vec<Option<Color>>, nodes: &mut u64) -> Option<Vec<Option<Color>>> {
    *nodes += 1;
    let Some(t) = p.open_triad(&c) else {
        return Some(c);
    };
    let mut c = c;
    for v in t.vertices() {
        match c[v] {
            Some(Color::Red) => continue,
            // Forced by reddening an earlier vertex of this triad.
            Some(Color::Green) => return solve(p, c, nodes),
            None => {}
        }
        let mut branch = c.clone();
        if p.assign(&mut branch, v, Color::Green) {
            if let Some(done) = solve(p, branch, nodes) {
                return Some(done);
            }
        }
        // Later branches may assume v is red.
        if !p.assign(&mut c, v, Color::Red) {
            return None;
        }
    }
    None
}

/// Every total valid coloring, by branching on each vertex in index order
/// with the same propagation. Stops after `limit` colorings if given.
pub fn enumerate_colorings(
    g: &OrthogonalityGraph,
    triads: &[Triad],
    limit: Option<usize>,
) -> Vec<Coloring> {
    let p = Problem::new(g, triads);
    let mut out = Vec::new();
    enumerate(&p, vec![None; g.vertex_count()], 0, limit, &mut out);
    out
}

fn enumerate(
    p: &Problem,
    c: Vec<Option<Color>>,
    from: usize,
    limit: Option<usize>,
    out: &mut Vec<Coloring>,
) {
    if limit.is_some_and(|l| out.len() >= l) {
        return;
    }
    let Some(v) = (from..c.len()).find(|&v| c[v].is_none()) else {
        let coloring = Coloring(c);
        if validate_coloring(p.g, p.triads, &coloring).is_empty() {
            out.push(coloring);
        }
        return;
    };
    for color in [Color::Green, Color::Red] {
        let mut branch = c.clone();
        if p.assign(&mut branch, v, color) {
            enumerate(p, branch, v + 1, limit, out);
        }
    }
}
