mod input;
mod report;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use magnihom::algebras::{
    check_sigma_quadratic, diag_cohomology_check, koszul_exactness_for, omega_differential_self_test,
    omega_presentation, quadratic_dual, sigma_dims, sigma_presentation,
};
use magnihom::congruence::{check_v, girth_check, mh2_basis, tau_classes_bounded};
use magnihom::digraph::Digraph;
use magnihom::fixtures::{FixtureKind, FIXTURES};
use magnihom::gruenberg::gruenberg_table;
use magnihom::linalg::{AbelianInvariants, Field, FieldId, PrimeField, Rationals, Ring};
use magnihom::magnitude::{magnitude_series, mh_table, mh_table_component};
use magnihom::simplicial::{d_count, formula_table, top_concentration_check};
use magnihom::{Error, Result};
use serde_json::{json, Value};

use input::{load, parse_pair, Input};

type Cells = BTreeMap<(usize, usize), AbelianInvariants>;
use report::{align, big, cells_csv, cells_json, cells_pretty, path, path_text, Format, Report};

#[derive(Args, Clone)]
struct Source {
    /// Named fixture (see `magnihom fixtures`).
    #[arg(long, global = true)]
    fixture: Option<String>,
    /// Digraph (JSON or edge list) or complex (`{"facets": ...}`) file.
    #[arg(long, global = true)]
    input: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Magnitude homology table from the chain complex.
    Table {
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[arg(long, default_value_t = 4)]
        lmax: usize,
        #[arg(long, default_value = "z")]
        ring: Ring,
        /// Restrict to one directed component `x,y`.
        #[arg(long)]
        component: Option<String>,
    },
    /// Basis of MH_2 from path classes.
    Second {
        #[arg(long)]
        l: usize,
    },
    /// Decide vanishing of MH_{2,k} for every k > l.
    Vanish {
        #[arg(long)]
        l: usize,
    },
    /// Magnitude homology table from the ideal formulas (over Z).
    Gruenberg {
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[arg(long, default_value_t = 4)]
        lmax: usize,
        #[arg(long)]
        component: Option<String>,
    },
    /// Inverse of the magnitude matrix as truncated power series.
    Series {
        /// Truncation order.
        #[arg(long, default_value_t = 5)]
        lmax: usize,
    },
    /// Distance algebra and path cochain algebra as quadratic quotients.
    Omega {
        #[arg(long, default_value = "q")]
        field: Ring,
        /// Highest degree reported.
        #[arg(long, default_value_t = 4)]
        nmax: usize,
    },
    /// Exactness of the Koszul complex up to an internal degree.
    Koszul {
        /// Repeatable; defaults to Q, F2 and F3.
        #[arg(long)]
        field: Vec<Ring>,
        #[arg(long, default_value_t = 5)]
        bound: usize,
    },
    /// Closed-form and direct tables for the extended Hasse diagram of a complex.
    Hasse {
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        lmax: Option<usize>,
    },
    /// Bounded probe of the congruence generated by short replacements.
    Tau {
        #[arg(long)]
        l: usize,
        /// Longest path length explored.
        #[arg(long)]
        lambda: Option<usize>,
    },
    /// Shortest cycles through edges and MH_2 at half their length.
    Girth {
        /// Edge `u,v`; all edges when omitted.
        #[arg(long)]
        component: Option<String>,
    },
    /// Compare every applicable route and exit 3 on disagreement.
    Crosscheck {
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long, default_value_t = 5)]
        lmax: usize,
    },
    /// List the built-in fixtures.
    Fixtures,
}

#[derive(Parser)]
#[command(name = "magnihom", version, about = "Exact magnitude homology of finite digraphs")]
struct Invocation {
    #[command(flatten)]
    source: Source,
    #[command(subcommand)]
    command: Command,
}

/// A result plus whether a cross-check disagreed.
struct Outcome {
    report: Report,
    mismatch: bool,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, mismatch: false }
    }
}

fn field_of(ring: Ring) -> Result<FieldId> {
    match ring {
        Ring::Field(f) => Ok(f),
        Ring::Integers => Err(Error::Parse("a field is required (q or fp:<p>)".into())),
    }
}

fn header(command: &str, name: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("input".into(), json!(name));
    m
}

fn table_report(
    command: &str,
    name: &str,
    entries: &Cells,
    ring: Ring,
    component: Option<(usize, usize)>,
    g: &Digraph,
    (nmax, lmax): (usize, usize),
) -> Report {
    let mut m = header(command, name);
    m.insert("ring".into(), json!(ring.to_string()));
    m.insert("component".into(), component.map_or(Value::Null, |(x, y)| json!([g.label(x), g.label(y)])));
    m.insert("nmax".into(), json!(nmax));
    m.insert("lmax".into(), json!(lmax));
    m.insert("cells".into(), cells_json(entries));
    Report { json: Value::Object(m), csv: Some(cells_csv(entries)), pretty: cells_pretty(entries, nmax, lmax) }
}

fn omega_json<F: Field>(g: &Digraph, field: F, nmax: usize) -> Value {
    let sigma = sigma_presentation(g, field);
    let sa = sigma.algebra();
    let omega = omega_presentation(g, field);
    let oa = omega.algebra();
    let dual = quadratic_dual(&sigma);
    let opposite = omega_presentation(&g.opposite(), field);
    let (da, pa) = (dual.algebra(), opposite.algebra());
    // the comparison is only claimed under (V_2); report null otherwise
    let v2 = check_v(g, 2).holds;
    let dual_matches = v2.then(|| (0..=nmax).all(|k| da.quotient_dim(k) == pa.quotient_dim(k)));
    json!({
        "field": field.id().to_string(),
        "v2": v2,
        "sigma": {
            "pair_census": sigma_dims(g, nmax),
            "quotient_dims": (0..=nmax).map(|k| sa.quotient_dim(k).1).collect::<Vec<_>>(),
            "relations": sigma.total_relation_dim(),
            "quadratic": check_sigma_quadratic(g, field, nmax.max(3)),
        },
        "omega": {
            "dims": (0..=nmax).map(|k| oa.quotient_dim(k).1).collect::<Vec<_>>(),
            "relations": omega.total_relation_dim(),
            "differential_preserves_relations": omega_differential_self_test(g, field),
            "matches_diagonal_homology": diag_cohomology_check(g, field, nmax).unwrap_or(false),
        },
        "dual_matches_opposite_omega": dual_matches,
    })
}

fn run(source: &Source, command: Command) -> Result<Outcome> {
    if let Command::Fixtures = command {
        let rows: Vec<Value> = FIXTURES
            .iter()
            .map(|f| {
                let kind = match f.kind {
                    FixtureKind::Digraph => "digraph",
                    FixtureKind::Complex => "complex",
                };
                json!({"name": f.name, "kind": kind, "description": f.description})
            })
            .collect();
        let mut grid = vec![vec!["name".to_string(), "kind".into(), "description".into()]];
        for f in FIXTURES {
            let kind = if f.kind == FixtureKind::Complex { "complex" } else { "digraph" };
            grid.push(vec![f.name.to_string(), kind.to_string(), f.description.to_string()]);
        }
        let csv = grid.iter().map(|r| r.join(",")).collect::<Vec<_>>().join("\n") + "\n";
        return Ok(Report { json: json!({"command": "fixtures", "fixtures": rows}), csv: Some(csv), pretty: align(&grid) }.into());
    }
    let (name, inp) = load(source.fixture.as_deref(), source.input.as_deref())?;
    let g = inp.digraph();
    match command {
        Command::Fixtures => unreachable!("handled above"),
        Command::Table { nmax, lmax, ring, component } => {
            let comp = component.map(|c| parse_pair(&g, &c)).transpose()?;
            let table = match comp {
                Some(c) => mh_table_component(&g, nmax, lmax, ring, c)?,
                None => mh_table(&g, nmax, lmax, ring)?,
            };
            Ok(table_report("table", &name, &table.entries, ring, comp, &g, (nmax, lmax)).into())
        }
        Command::Gruenberg { nmax, lmax, component } => {
            let comp = component.map(|c| parse_pair(&g, &c)).transpose()?;
            let table = gruenberg_table(&g, nmax, lmax, comp)?;
            Ok(table_report("gruenberg", &name, &table.entries, Ring::Z, comp, &g, (nmax, lmax)).into())
        }
        Command::Second { l } => {
            let basis = mh2_basis(&g, l);
            let mut per_pair: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for (s, _) in &basis.diff_generators {
                *per_pair.entry((s[0], s[l])).or_default() += 1;
            }
            for p in &basis.long_generators {
                *per_pair.entry((p[0], p[l])).or_default() += 1;
            }
            let mut m = header("second", &name);
            m.insert("l".into(), json!(l));
            m.insert("rank".into(), json!(basis.rank()));
            m.insert(
                "components".into(),
                json!(per_pair.iter().map(|(&(x, y), r)| json!({"x": g.label(x), "y": g.label(y), "rank": r})).collect::<Vec<_>>()),
            );
            m.insert(
                "diff_generators".into(),
                json!(basis.diff_generators.iter().map(|(s, t)| json!([path(&g, s), path(&g, t)])).collect::<Vec<_>>()),
            );
            m.insert("long_generators".into(), json!(basis.long_generators.iter().map(|p| path(&g, p)).collect::<Vec<_>>()));
            let mut pretty = format!("MH_2,{} rank {}\n", l, basis.rank());
            for (s, t) in &basis.diff_generators {
                pretty += &format!("  {} - {}\n", path_text(&g, s), path_text(&g, t));
            }
            for p in &basis.long_generators {
                pretty += &format!("  {}\n", path_text(&g, p));
            }
            let mut csv = String::from("x,y,rank\n");
            for (&(x, y), r) in &per_pair {
                csv += &format!("{},{},{}\n", g.label(x), g.label(y), r);
            }
            Ok(Report { json: Value::Object(m), csv: Some(csv), pretty }.into())
        }
        Command::Vanish { l } => {
            let r = check_v(&g, l);
            let witness = r.witness.as_ref().map_or(Value::Null, |w| {
                json!({"kind": w.kind.as_str(), "k": w.k, "paths": w.paths.iter().map(|p| path(&g, p)).collect::<Vec<_>>()})
            });
            let pretty = match &r.witness {
                None => format!("(V_{}) holds\n", l),
                Some(w) => format!(
                    "(V_{}) fails at length {}: {} {}\n",
                    l,
                    w.k,
                    w.kind.as_str(),
                    w.paths.iter().map(|p| path_text(&g, p)).collect::<Vec<_>>().join(" ")
                ),
            };
            let json = json!({"command": "vanish", "input": name, "holds": r.holds, "l": l, "witness": witness});
            Ok(Report { json, csv: None, pretty }.into())
        }
        Command::Series { lmax } => {
            let s = magnitude_series(&g, lmax);
            let n = g.vertex_count();
            let mut entries = Vec::new();
            let mut csv = String::from("x,y,coefficients\n");
            for x in 0..n {
                for y in 0..n {
                    let coeffs = &s.inverse[x][y];
                    if coeffs.iter().all(|c| c.sign() == num_bigint::Sign::NoSign) {
                        continue;
                    }
                    entries.push(json!({"x": g.label(x), "y": g.label(y), "coefficients": coeffs.iter().map(big).collect::<Vec<_>>()}));
                    let text: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                    csv += &format!("{},{},{}\n", g.label(x), g.label(y), text.join(";"));
                }
            }
            let mut terms = String::new();
            for (k, c) in s.total.iter().enumerate() {
                let sign = if c.sign() == num_bigint::Sign::Minus { "-" } else { "+" };
                if terms.is_empty() {
                    terms = format!("{}", c);
                } else {
                    terms += &format!(" {} {} q^{}", sign, c.magnitude(), k);
                }
            }
            let json = json!({
                "command": "series", "input": name, "order": lmax,
                "total": s.total.iter().map(big).collect::<Vec<_>>(), "entries": entries,
            });
            Ok(Report { json, csv: Some(csv), pretty: format!("magnitude = {} + O(q^{})\n", terms, lmax + 1) }.into())
        }
        Command::Omega { field, nmax } => {
            let body = match field_of(field)? {
                FieldId::Rationals => omega_json(&g, Rationals, nmax),
                FieldId::PrimeField(p) => omega_json(&g, PrimeField::new(p)?, nmax),
            };
            let mut m = header("omega", &name);
            if let Value::Object(b) = body {
                m.extend(b);
            }
            let json = Value::Object(m);
            let pretty = serde_json::to_string_pretty(&json).expect("values serialize") + "\n";
            Ok(Report { json, csv: None, pretty }.into())
        }
        Command::Koszul { field, bound } => {
            let fields: Vec<FieldId> = if field.is_empty() {
                vec![FieldId::Rationals, FieldId::PrimeField(2), FieldId::PrimeField(3)]
            } else {
                field.into_iter().map(field_of).collect::<Result<_>>()?
            };
            let mut rows = Vec::new();
            let mut pretty = String::new();
            let mut csv = String::from("field,y,n,m,homology_dim\n");
            for f in fields {
                let r = koszul_exactness_for(&g, f, bound)?;
                let failures: Vec<Value> = r
                    .failures
                    .iter()
                    .map(|x| json!({"y": g.label(x.y), "n": x.n, "m": x.m, "homology_dim": x.homology_dim}))
                    .collect();
                for x in &r.failures {
                    csv += &format!("{},{},{},{},{}\n", f, g.label(x.y), x.n, x.m, x.homology_dim);
                }
                pretty += &format!("{}: {}\n", f, if r.exact() { "exact" } else { "not exact" });
                for x in &r.failures {
                    pretty += &format!("  y={} n={} m={} dim={}\n", g.label(x.y), x.n, x.m, x.homology_dim);
                }
                rows.push(json!({"field": f.to_string(), "exact": r.exact(), "failures": failures}));
            }
            let json = json!({"command": "koszul", "input": name, "bound": bound, "fields": rows});
            Ok(Report { json, csv: Some(csv), pretty }.into())
        }
        Command::Hasse { nmax, lmax } => {
            let k = inp.complex().ok_or_else(|| Error::Parse("hasse needs a simplicial complex input".into()))?;
            let top = (k.dim() + 2).max(0) as usize;
            let lmax = lmax.unwrap_or(top);
            let nmax = nmax.unwrap_or(lmax);
            let formula = formula_table(k, nmax, lmax, Ring::Z);
            let direct: Cells =
                mh_table(&g, nmax, lmax, Ring::Z)?.entries.into_iter().filter(|(_, h)| !h.is_zero()).collect();
            let differences: Vec<Value> = diff_cells(&[("formula", &formula), ("direct", &direct)]);
            let conc = top_concentration_check(k);
            let mismatch = !differences.is_empty();
            let mut m = header("hasse", &name);
            m.insert("dimension".into(), json!(k.dim()));
            m.insert("vertices".into(), json!(g.vertex_count()));
            m.insert("arrows".into(), json!(g.arrow_count()));
            m.insert("D".into(), json!((1..=nmax).map(|n| json!({"n": n, "value": d_count(k, n)})).collect::<Vec<_>>()));
            m.insert("formula".into(), cells_json(&formula));
            m.insert("direct".into(), cells_json(&direct));
            m.insert("agree".into(), json!(!mismatch));
            m.insert("differences".into(), json!(differences));
            m.insert(
                "top_concentration".into(),
                json!({
                    "overall": conc.overall(),
                    "complex": conc.complex,
                    "failures": conc.failures().iter().map(|f| json!(f)).collect::<Vec<_>>(),
                }),
            );
            let pretty = format!(
                "formula\n{}direct\n{}{}\n",
                cells_pretty(&formula, nmax, lmax),
                cells_pretty(&direct, nmax, lmax),
                if mismatch { "routes DISAGREE" } else { "routes agree" }
            );
            Ok(Outcome { report: Report { json: Value::Object(m), csv: Some(cells_csv(&direct)), pretty }, mismatch })
        }
        Command::Tau { l, lambda } => {
            let bound = lambda.unwrap_or(l + 2);
            let r = tau_classes_bounded(&g, l, bound);
            let classes: Vec<Value> = r
                .class_counts
                .iter()
                .map(|(&(x, y), c)| json!({"x": g.label(x), "y": g.label(y), "classes": c}))
                .collect();
            let mut csv = String::from("x,y,classes\n");
            for (&(x, y), c) in &r.class_counts {
                csv += &format!("{},{},{}\n", g.label(x), g.label(y), c);
            }
            let thin = r.thin_within_bound();
            let json = json!({"command": "tau", "input": name, "l": l, "lambda": bound, "method": "bounded probe", "thin_within_bound": thin, "pairs": classes});
            let pretty = format!("l={} lambda={}: {}\n", l, bound, if thin { "one class per pair" } else { "several classes for some pair" });
            Ok(Report { json, csv: Some(csv), pretty }.into())
        }
        Command::Girth { component } => {
            let edges: Vec<(usize, usize)> = match component {
                Some(c) => vec![parse_pair(&g, &c)?],
                None => g.arrows().filter(|(u, v)| u < v).collect(),
            };
            let mut rows = Vec::new();
            let mut csv = String::from("u,v,girth,l,mh2_rank\n");
            let mut pretty = String::new();
            let opt = |v: Option<usize>| v.map_or(String::from("-"), |x| x.to_string());
            for e in edges {
                let r = girth_check(&g, e)?;
                rows.push(json!({
                    "edge": [g.label(e.0), g.label(e.1)], "girth": r.girth, "l": r.l,
                    "mh2_rank": r.mh2_rank, "nonvanishing": r.nonvanishing(),
                }));
                csv += &format!("{},{},{},{},{}\n", g.label(e.0), g.label(e.1), opt(r.girth), opt(r.l), opt(r.mh2_rank));
                pretty += &format!(
                    "edge {}-{}: girth {} l {} rank MH_2,l {}\n",
                    g.label(e.0),
                    g.label(e.1),
                    opt(r.girth),
                    opt(r.l),
                    opt(r.mh2_rank)
                );
            }
            Ok(Report { json: json!({"command": "girth", "input": name, "edges": rows}), csv: Some(csv), pretty }.into())
        }
        Command::Crosscheck { nmax, lmax } => crosscheck(&name, &inp, &g, nmax, lmax),
    }
}

fn diff_cells(routes: &[(&str, &Cells)]) -> Vec<Value> {
    let mut keys: Vec<(usize, usize)> = routes.iter().flat_map(|(_, t)| t.keys().copied()).collect();
    keys.sort_unstable();
    keys.dedup();
    let get = |t: &Cells, k| t.get(&k).cloned().unwrap_or_default();
    keys.into_iter()
        .filter(|&k| routes.windows(2).any(|w| get(w[0].1, k) != get(w[1].1, k)))
        .map(|(n, l)| {
            let mut m = serde_json::Map::new();
            m.insert("n".into(), json!(n));
            m.insert("l".into(), json!(l));
            for (name, t) in routes {
                m.insert((*name).into(), json!(get(t, (n, l)).to_string()));
            }
            Value::Object(m)
        })
        .collect()
}

fn crosscheck(name: &str, inp: &Input, g: &Digraph, nmax: usize, lmax: usize) -> Result<Outcome> {
    let nonzero = |t: Cells| -> Cells {
        t.into_iter().filter(|(_, h)| !h.is_zero()).collect()
    };
    let chain = nonzero(mh_table(g, nmax, lmax, Ring::Z)?.entries);
    let ideal = nonzero(gruenberg_table(g, nmax, lmax, None)?.entries);
    let mut routes: Vec<(&str, &Cells)> = vec![("chain", &chain), ("gruenberg", &ideal)];
    let formula = inp.complex().map(|k| nonzero(formula_table(k, nmax, lmax, Ring::Z)));
    if let Some(f) = &formula {
        routes.push(("formula", f));
    }
    let second: Cells = if nmax >= 2 {
        (2..=lmax).map(|l| ((2, l), AbelianInvariants::free(mh2_basis(g, l).rank()))).filter(|(_, h)| !h.is_zero()).collect()
    } else {
        BTreeMap::new()
    };
    let chain_second: Cells =
        chain.iter().filter(|((n, _), _)| *n == 2).map(|(k, v)| (*k, v.clone())).collect();
    let mut differences = diff_cells(&routes);
    differences.extend(diff_cells(&[("chain", &chain_second), ("path_classes", &second)]));
    let mismatch = !differences.is_empty();
    let used: Vec<&str> = routes.iter().map(|(n, _)| *n).chain(std::iter::once("path_classes")).collect();
    let mut m = header("crosscheck", name);
    m.insert("nmax".into(), json!(nmax));
    m.insert("lmax".into(), json!(lmax));
    m.insert("routes".into(), json!(used));
    m.insert("agree".into(), json!(!mismatch));
    m.insert("differences".into(), json!(differences));
    m.insert("cells".into(), cells_json(&chain));
    let pretty = format!(
        "{}routes {}: {}\n",
        cells_pretty(&chain, nmax, lmax),
        used.join(", "),
        if mismatch { "DISAGREE" } else { "agree" }
    );
    Ok(Outcome { report: Report { json: Value::Object(m), csv: Some(cells_csv(&chain)), pretty }, mismatch })
}

fn configure_threads() {
    if let Some(n) = std::env::var("MAGNIHOM_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0) {
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    configure_threads();
    let inv = Invocation::parse();
    let format = inv.source.format;
    match run(&inv.source, inv.command) {
        Ok(outcome) => {
            let text = outcome.report.render(format);
            if text.ends_with('\n') {
                print!("{}", text);
            } else {
                println!("{}", text);
            }
            if outcome.mismatch {
                eprintln!("error: routes disagree");
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(if e.is_internal() { 3 } else { 2 })
        }
    }
}
