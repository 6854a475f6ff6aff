use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use ontic_core::coloring::{
    build_graph, contextual_witness, enumerate_colorings, enumerate_triads, search_coloring,
    validate_coloring, Color, Coloring, OrthogonalityGraph, RaySet, SearchOutcome, DEFAULT_TOL,
};
use proptest::prelude::*;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn load(name: &str) -> (OrthogonalityGraph, Vec<ontic_core::coloring::Triad>) {
    let rays = RaySet::load(&data(name)).unwrap();
    let g = build_graph(&rays, DEFAULT_TOL).unwrap();
    let t = enumerate_triads(&g);
    (g, t)
}

/// Independent check of the three constraints on a total assignment.
fn brute_valid(g: &OrthogonalityGraph, triads: &[ontic_core::coloring::Triad], green: u32) -> bool {
    let is_green = |v: usize| green >> v & 1 == 1;
    triads
        .iter()
        .all(|t| t.vertices().iter().filter(|&&v| is_green(v)).count() == 1)
        && g.edges().iter().all(|&(a, b)| !(is_green(a) && is_green(b)))
}

fn brute_force(g: &OrthogonalityGraph, triads: &[ontic_core::coloring::Triad]) -> BTreeSet<u32> {
    (0..1u32 << g.vertex_count())
        .filter(|&m| brute_valid(g, triads, m))
        .collect()
}

fn mask(c: &Coloring) -> u32 {
    c.0.iter()
        .enumerate()
        .filter(|(_, x)| **x == Some(Color::Green))
        .map(|(v, _)| 1u32 << v)
        .sum()
}

#[test]
fn basis3_has_exactly_three_colorings() {
    let (g, t) = load("basis3.rays");
    assert_eq!(g.edges().len(), 3);
    assert!(search_coloring(&g, &t).is_satisfiable());
    let all = enumerate_colorings(&g, &t, None);
    assert_eq!(all.len(), 3);
    assert_eq!(brute_force(&g, &t).len(), 3);
}

#[test]
fn two_bases_have_one_shared_vertex() {
    let (g, t) = load("two_bases.rays");
    assert_eq!(t.len(), 2);
    assert_eq!(contextual_witness(&g, &t), [0]);
    let all: BTreeSet<u32> = enumerate_colorings(&g, &t, None).iter().map(mask).collect();
    assert_eq!(all, brute_force(&g, &t));
}

#[test]
fn peres33_is_uncolorable() {
    let (g, t) = load("peres33.rays");
    assert_eq!(g.vertex_count(), 33);
    assert!(!t.is_empty());
    assert!(!contextual_witness(&g, &t).is_empty());
    let start = Instant::now();
    let outcome = search_coloring(&g, &t);
    assert!(start.elapsed() < Duration::from_secs(10));
    match outcome {
        SearchOutcome::Unsatisfiable { nodes } => assert!(nodes > 0),
        other => panic!("expected no coloring, got {other:?}"),
    }
    assert!(enumerate_colorings(&g, &t, Some(1)).is_empty());
}

#[test]
fn peres33_structure_and_criticality() {
    let (g, t) = load("peres33.rays");
    assert_eq!(g.edges().len(), 72);
    assert_eq!(t.len(), 16);
    let text = std::fs::read_to_string(data("peres33.rays")).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines.len(), 33);
    for skip in 0..lines.len() {
        let reduced: Vec<&str> = lines
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, l)| *l)
            .collect();
        let rays = RaySet::parse(&reduced.join("\n")).unwrap();
        let g = build_graph(&rays, DEFAULT_TOL).unwrap();
        let t = enumerate_triads(&g);
        match search_coloring(&g, &t) {
            SearchOutcome::Satisfiable { coloring, .. } => {
                assert!(validate_coloring(&g, &t, &coloring).is_empty())
            }
            other => panic!("without ray {skip}: {other:?}"),
        }
    }
}

fn random_graph(n: usize, bits: &[bool]) -> OrthogonalityGraph {
    let mut edges = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if bits[k] {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    OrthogonalityGraph::from_edges(n, &edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn search_agrees_with_brute_force(
        n in 0usize..=15,
        bits in proptest::collection::vec(proptest::bool::weighted(0.45), 105),
    ) {
        let g = random_graph(n, &bits);
        let t = enumerate_triads(&g);
        let oracle = brute_force(&g, &t);
        let outcome = search_coloring(&g, &t);
        prop_assert_eq!(outcome.is_satisfiable(), !oracle.is_empty());
        if let SearchOutcome::Satisfiable { coloring, .. } = &outcome {
            prop_assert!(validate_coloring(&g, &t, coloring).is_empty());
            prop_assert!(oracle.contains(&mask(coloring)));
        }
        let found: BTreeSet<u32> = enumerate_colorings(&g, &t, None).iter().map(mask).collect();
        prop_assert_eq!(found, oracle);
    }
}

