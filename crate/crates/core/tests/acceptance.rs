//! Acceptance gate. Runs every criterion, prints one line per criterion and
//! exits nonzero if any fails. Tolerances are exact; time limits are pinned
//! below and measured on the whole criterion.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use magnihom::algebras::{
    koszul_exactness_for, omega_presentation, quadratic_dual, same_relations, sigma_presentation,
    QuadraticPresentation,
};
use magnihom::congruence::{check_v, girth_check, mh2_basis, mh2_rank};
use magnihom::digraph::Digraph;
use magnihom::fixtures::{cycle, fixture_complex, fixture_digraph, fixture_names};
use magnihom::gruenberg::{gruenberg_mh, gruenberg_table, lattice_of, IdealWord, PathAlgebra};
use magnihom::linalg::{AbelianInvariants, Field, FieldId, PrimeField, Rationals, Ring};
use magnihom::magnitude::{diagonality_report, magnitude_series, mh, mh_components, mh_table};
use magnihom::simplicial::{d_count, extended_hasse, hasse_mh_formula, PureComplex};
use num_bigint::BigInt;

const SWEEP_SEED: u64 = 0x6d61_676e;
const SWEEP_COUNT: usize = 50;
const SWEEP_VERTICES: usize = 5;
const SWEEP_DENSITY: f64 = 0.4;
const KOSZUL_BOUND: usize = 5;

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn z(rank: usize) -> AbelianInvariants {
    AbelianInvariants::free(rank)
}

fn vertex(g: &Digraph, name: &str) -> usize {
    g.vertex_by_name(name).unwrap_or_else(|| panic!("no vertex {}", name))
}

fn sweep() -> Vec<Digraph> {
    common::random_digraphs(SWEEP_SEED, SWEEP_COUNT, SWEEP_VERTICES, SWEEP_DENSITY)
}

/// MH_{3,4}(D1) = Z in component (a, b) by both routes; no other off-diagonal
/// group for l <= 4.
fn computation_d1() -> Result<(), String> {
    let g = fixture_digraph("D1").map_err(|e| e.to_string())?;
    let (a, b) = (vertex(&g, "a"), vertex(&g, "b"));
    let comps = mh_components(&g, 3, 4, Ring::Z).map_err(|e| e.to_string())?;
    ensure(comps.len() == 1 && comps.get(&(a, b)) == Some(&z(1)), || format!("chain components {:?}", comps))?;
    let gr = gruenberg_mh(&g, 3, 4, Some((a, b))).map_err(|e| e.to_string())?;
    ensure(gr == z(1), || format!("gruenberg (a,b) = {}", gr))?;
    let chain = mh_table(&g, 4, 4, Ring::Z).map_err(|e| e.to_string())?;
    let ideal = gruenberg_table(&g, 4, 4, None).map_err(|e| e.to_string())?;
    for l in 0..=4 {
        for n in 0..=4 {
            ensure(chain.get(n, l) == ideal.get(n, l), || format!("routes differ at ({}, {})", n, l))?;
            if n != l {
                let expected = if (n, l) == (3, 4) { z(1) } else { AbelianInvariants::zero() };
                ensure(chain.get(n, l) == expected, || format!("({}, {}) = {}", n, l, chain.get(n, l)))?;
            }
        }
    }
    Ok(())
}

/// MH_{3,4}(G2)_{a,e} = Z by both routes, with the intermediate spans.
fn computation_g2() -> Result<(), String> {
    let g = fixture_digraph("G2").map_err(|e| e.to_string())?;
    let v = |s: &str| vertex(&g, s);
    let (a, e) = (v("a"), v("e"));
    ensure(mh(&g, 3, 4, Ring::Z, Some((a, e))).map_err(|e| e.to_string())? == z(1), || "chain route".into())?;
    ensure(gruenberg_mh(&g, 3, 4, Some((a, e))).map_err(|e| e.to_string())? == z(1), || "gruenberg route".into())?;
    let alg = PathAlgebra::new(&g);
    let block = alg.block(a, e, 4);
    let p = |i: usize, j: usize| vec![a, v(&format!("b{}", i)), v("c"), v(&format!("d{}", j)), e];
    let r2: IdealWord = "R^2".parse().map_err(|e: magnihom::Error| e.to_string())?;
    let jrj: IdealWord = "J R J".parse().map_err(|e: magnihom::Error| e.to_string())?;
    let expected_r2 = lattice_of(&block, &[vec![(1, p(0, 0)), (-1, p(0, 1)), (-1, p(1, 0)), (1, p(1, 1))]]);
    let expected_jrj = lattice_of(&block, &[vec![(1, p(0, 0))], vec![(1, p(1, 1))]]);
    ensure(*alg.word_block(&r2, a, e, 4) == expected_r2, || "a(R^2)_4 e".into())?;
    ensure(*alg.word_block(&jrj, a, e, 4) == expected_jrj, || "a(JRJ)_4 e".into())
}

/// Extended Hasse diagram of the annulus.
fn annulus() -> Result<(), String> {
    let k = fixture_complex("ANN").map_err(|e| e.to_string())?;
    let g = extended_hasse(&k);
    ensure((g.vertex_count(), g.arrow_count()) == (26, 54), || "vertex or arrow count".into())?;
    let table = mh_table(&g, 4, 4, Ring::Z).map_err(|e| e.to_string())?;
    let expected: BTreeMap<(usize, usize), AbelianInvariants> =
        [((0, 0), z(26)), ((1, 1), z(54)), ((2, 2), z(36)), ((3, 3), z(6)), ((3, 4), z(1))].into_iter().collect();
    let got: BTreeMap<(usize, usize), AbelianInvariants> = table.nonzero().map(|(k, v)| (*k, v.clone())).collect();
    ensure(got == expected, || format!("table {:?}", got))?;
    ensure((d_count(&k, 2), d_count(&k, 3)) == (30, 6), || "D(2), D(3)".into())?;
    ensure(check_v(&g, 2).holds, || "(V_2) should hold".into())?;
    ensure(!diagonality_report(&g, 4).map_err(|e| e.to_string())?.is_empty(), || "should not be diagonal".into())
}

fn compare_routes(g: &Digraph, formula: Option<&PureComplex>) -> Result<(), String> {
    let chain = mh_table(g, 3, 5, Ring::Z).map_err(|e| e.to_string())?;
    let ideal = gruenberg_table(g, 3, 5, None).map_err(|e| e.to_string())?;
    for l in 0..=5 {
        for n in 0..=3 {
            let c = chain.get(n, l);
            ensure(c == ideal.get(n, l), || format!("chain {} vs gruenberg {} at ({}, {})", c, ideal.get(n, l), n, l))?;
            if let Some(k) = formula {
                let f = hasse_mh_formula(k, n, l, Ring::Z);
                ensure(c == f, || format!("chain {} vs formula {} at ({}, {})", c, f, n, l))?;
            }
        }
    }
    Ok(())
}

/// Chain complex, Gruenberg and (for Hasse inputs) closed-form routes agree.
fn oracle_sweep() -> Result<(), String> {
    for (i, g) in sweep().iter().enumerate() {
        compare_routes(g, None).map_err(|e| format!("random digraph {}: {}", i, e))?;
    }
    let mut complexes: Vec<PureComplex> =
        ["DT2", "PATH", "DT3", "WEDGE", "ANN"].iter().map(|n| fixture_complex(n).expect("fixture")).collect();
    complexes.extend(common::random_complexes(SWEEP_SEED, 10, SWEEP_VERTICES));
    for k in &complexes {
        compare_routes(&extended_hasse(k), Some(k)).map_err(|e| format!("complex {:?}: {}", k.facets(), e))?;
    }
    Ok(())
}

fn mh2_theory_on(name: &str, g: &Digraph) -> Result<(), String> {
    let n = g.vertex_count();
    for l in 0..=5 {
        let over_q = mh(g, 2, l, Ring::Q, None).map_err(|e| e.to_string())?.free_rank;
        let over_z = mh(g, 2, l, Ring::Z, None).map_err(|e| e.to_string())?;
        let by_pairs: usize = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| mh2_rank(g, l, x, y)).sum();
        ensure(by_pairs == over_q && mh2_basis(g, l).rank() == over_q, || {
            format!("{}: l = {}: basis {} vs chain {}", name, l, by_pairs, over_q)
        })?;
        ensure(over_z.torsion.is_empty(), || format!("{}: torsion at l = {}", name, l))?;
    }
    let diam = g.distances().finite_diameter();
    for l in 1..=diam + 1 {
        let direct = (l + 1..=diam + 1).all(|k| mh(g, 2, k, Ring::Z, None).map(|h| h.is_zero()).unwrap_or(false));
        ensure(check_v(g, l).holds == direct, || format!("{}: check_v disagrees at l = {}", name, l))?;
    }
    Ok(())
}

/// Second magnitude homology from path classes.
fn mh2_theory() -> Result<(), String> {
    for name in fixture_names() {
        mh2_theory_on(name, &fixture_digraph(name).map_err(|e| e.to_string())?)?;
    }
    for (i, g) in sweep().iter().enumerate() {
        mh2_theory_on(&format!("random {}", i), g)?;
    }
    Ok(())
}

/// Shortest cycles force nonvanishing MH_2.
fn girth() -> Result<(), String> {
    for n in 4..=8 {
        let g = cycle(n).map_err(|e| e.to_string())?;
        let r = girth_check(&g, (0, 1)).map_err(|e| e.to_string())?;
        let l = n.div_ceil(2);
        ensure(r.girth == Some(n) && r.l == Some(l), || format!("C{}: {:?}", n, r))?;
        ensure(r.nonvanishing() == Some(true), || format!("C{}: MH_2 vanishes by basis", n))?;
        ensure(!mh(&g, 2, l, Ring::Z, None).map_err(|e| e.to_string())?.is_zero(), || format!("C{}: chain route", n))?;
    }
    Ok(())
}

const FIELDS: [FieldId; 3] = [FieldId::Rationals, FieldId::PrimeField(2), FieldId::PrimeField(3)];

/// Koszul complexes are exact on diagonal inputs and fail where MH_{3,4}
/// lives on the non-diagonal ones.
fn koszul() -> Result<(), String> {
    let exact = [("C4", fixture_digraph("C4")), ("DT3", fixture_digraph("DT3"))];
    for (name, g) in exact {
        let g = g.map_err(|e| e.to_string())?;
        ensure(check_v(&g, 2).holds, || format!("{}: (V_2)", name))?;
        for f in FIELDS {
            let r = koszul_exactness_for(&g, f, KOSZUL_BOUND).map_err(|e| e.to_string())?;
            ensure(r.exact(), || format!("{} over {}: {:?}", name, f, r.failures))?;
        }
    }
    for name in ["D1", "G2"] {
        let g = fixture_digraph(name).map_err(|e| e.to_string())?;
        ensure(check_v(&g, 2).holds, || format!("{}: (V_2)", name))?;
        // the lowest anomaly: each target y of a nonzero MH_{3,4} component
        let mut expected: BTreeMap<usize, usize> = BTreeMap::new();
        for ((_, y), h) in mh_components(&g, 3, 4, Ring::Z).map_err(|e| e.to_string())? {
            *expected.entry(y).or_default() += h.free_rank;
        }
        for f in FIELDS {
            let r = koszul_exactness_for(&g, f, KOSZUL_BOUND).map_err(|e| e.to_string())?;
            ensure(!r.exact(), || format!("{} over {}: unexpectedly exact", name, f))?;
            let m0 = r.failures.iter().map(|x| x.m).min().unwrap_or(0);
            let lowest: BTreeMap<usize, usize> =
                r.failures.iter().filter(|x| x.m == m0).map(|x| (x.y, x.homology_dim)).collect();
            ensure(m0 == 4 && r.failures.iter().filter(|x| x.m == 4).all(|x| x.n == 2) && lowest == expected, || {
                format!("{} over {}: failures {:?}, expected targets {:?}", name, f, r.failures, expected)
            })?;
        }
    }
    Ok(())
}

fn dual_matches<F: Field>(g: &Digraph, field: F) -> Result<(), String> {
    let sigma = sigma_presentation(g, field);
    let dual = quadratic_dual(&sigma);
    ensure(same_relations(&quadratic_dual(&dual), &sigma), || "dual of dual".into())?;
    let omega: QuadraticPresentation<F> = omega_presentation(&g.opposite(), field);
    let (da, oa) = (dual.algebra(), omega.algebra());
    for k in 0..=4 {
        ensure(da.quotient_dim(k) == oa.quotient_dim(k), || format!("degree {}", k))?;
    }
    Ok(())
}

/// Quadratic dual of the distance algebra against the path cochain algebra
/// of the opposite digraph.
fn duality() -> Result<(), String> {
    for name in ["D1", "G2", "C4", "K4c"] {
        let g = fixture_digraph(name).map_err(|e| e.to_string())?;
        dual_matches(&g, Rationals).map_err(|e| format!("{} over Q: {}", name, e))?;
        dual_matches(&g, PrimeField::new(2).expect("prime")).map_err(|e| format!("{} over F2: {}", name, e))?;
    }
    Ok(())
}

/// Coefficients of the inverse magnitude matrix against Euler characteristics
/// of the homology.
fn series() -> Result<(), String> {
    const ORDER: usize = 5;
    for name in ["D1", "G2", "C4", "CTR"] {
        let g = fixture_digraph(name).map_err(|e| e.to_string())?;
        let s = magnitude_series(&g, ORDER);
        let n = g.vertex_count();
        for x in 0..n {
            for y in 0..n {
                for l in 0..=ORDER {
                    let mut chi = BigInt::from(0);
                    for k in 0..=l {
                        let r = BigInt::from(mh(&g, k, l, Ring::Q, Some((x, y))).map_err(|e| e.to_string())?.free_rank);
                        chi += if k % 2 == 0 { r } else { -r };
                    }
                    ensure(s.inverse[x][y][l] == chi, || format!("{} ({}, {}) q^{}", name, x, y, l))?;
                }
            }
        }
    }
    Ok(())
}

/// The boundary of the tetrahedron gives a diagonal extended Hasse diagram.
fn sphere() -> Result<(), String> {
    let k = fixture_complex("DT3").map_err(|e| e.to_string())?;
    let g = extended_hasse(&k);
    let report = diagonality_report(&g, 4).map_err(|e| e.to_string())?;
    ensure(report.is_empty(), || format!("off-diagonal {:?}", report))?;
    for l in 0..=4 {
        for n in 0..=l {
            let direct = mh(&g, n, l, Ring::Z, None).map_err(|e| e.to_string())?;
            let formula = hasse_mh_formula(&k, n, l, Ring::Z);
            ensure(direct == formula, || format!("({}, {}): {} vs {}", n, l, direct, formula))?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, Check, Duration); 10] = [
        ("1 MH_{3,4}(D1) two routes", computation_d1, Duration::from_secs(5)),
        ("2 MH_{3,4}(G2)_{a,e} and spans", computation_g2, Duration::from_secs(5)),
        ("3 annulus extended Hasse table", annulus, Duration::from_secs(60)),
        ("4 oracle sweep", oracle_sweep, Duration::from_secs(600)),
        ("5 MH_2 basis and vanishing", mh2_theory, Duration::from_secs(600)),
        ("6 girth", girth, Duration::from_secs(60)),
        ("7 Koszul correspondence", koszul, Duration::from_secs(120)),
        ("8 quadratic duality", duality, Duration::from_secs(60)),
        ("9 magnitude series", series, Duration::from_secs(60)),
        ("10 sphere diagonality", sphere, Duration::from_secs(60)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check, limit) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= limit, || format!("took {:.2?}, limit {:?}", elapsed, limit))
        });
        match outcome {
            Ok(()) => println!("PASS criterion {} ({:.2?})", name, elapsed),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {} ({:.2?}): {}", name, elapsed, e);
            }
        }
    }
    if failed > 0 {
        println!("{} criteria failed", failed);
        std::process::exit(1);
    }
}
