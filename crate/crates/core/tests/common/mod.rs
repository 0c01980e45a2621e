#![allow(dead_code)]

use magnihom::digraph::Digraph;
use magnihom::simplicial::PureComplex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded Erdős–Rényi digraphs: each ordered pair is an arrow with probability `p`.
pub fn random_digraphs(seed: u64, count: usize, max_vertices: usize, p: f64) -> Vec<Digraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_vertices);
            let mut arrows = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.gen_bool(p) {
                        arrows.push((u, v));
                    }
                }
            }
            Digraph::new(n, arrows).expect("no loops or duplicates")
        })
        .collect()
}

/// Seeded pure complexes of dimension 1 or 2 on at most `max_vertices` vertices.
pub fn random_complexes(seed: u64, count: usize, max_vertices: usize) -> Vec<PureComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(3..=max_vertices);
        let size = rng.gen_range(2..=3);
        let mut candidates: Vec<Vec<usize>> = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == size {
                candidates.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
            }
        }
        let facets: Vec<Vec<usize>> = candidates.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        if let Ok(k) = PureComplex::new(facets) {
            out.push(k);
        }
    }
    out
}
