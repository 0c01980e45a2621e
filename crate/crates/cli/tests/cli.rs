use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magnihom")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(out.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).expect("valid JSON")
}

#[test]
fn d1_table_has_the_off_diagonal_cell() {
    let out = run(&["table", "--fixture", "D1", "--nmax", "4", "--lmax", "4", "--ring", "z"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(r#"{"n":3,"l":4,"free":1,"torsion":[]}"#));
}

#[test]
fn component_filter_uses_labels() {
    let v = json(&["table", "--fixture", "G2", "--component", "a,e"]);
    let cells = v["cells"].as_array().unwrap();
    assert!(cells.iter().any(|c| c["n"] == 3 && c["l"] == 4 && c["free"] == 1));
    let g = json(&["gruenberg", "--fixture", "G2", "--component", "a,e"]);
    assert_eq!(g["cells"], v["cells"]);
}

#[test]
fn annulus_hasse_sections_agree() {
    let v = json(&["hasse", "--fixture", "ANN", "--lmax", "4"]);
    assert_eq!(v["formula"], v["direct"]);
    assert_eq!(v["agree"], true);
    let free = |n: u64, l: u64| {
        v["direct"].as_array().unwrap().iter().find(|c| c["n"] == n && c["l"] == l).map(|c| c["free"].as_u64().unwrap())
    };
    assert_eq!([free(0, 0), free(1, 1), free(2, 2), free(3, 3)], [Some(26), Some(54), Some(36), Some(6)]);
    assert_eq!(free(3, 4), Some(1));
}

#[test]
fn ctr_fails_v2_with_witness() {
    let v = json(&["vanish", "--fixture", "CTR", "--l", "2"]);
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"]["kind"], "shortest-pair");
    assert_eq!(v["witness"]["k"], 3);
}

#[test]
fn koszul_defaults_to_three_fields() {
    let v = json(&["koszul", "--fixture", "C4"]);
    let fields: Vec<&str> = v["fields"].as_array().unwrap().iter().map(|f| f["field"].as_str().unwrap()).collect();
    assert_eq!(fields, ["Q", "Fp:2", "Fp:3"]);
    assert!(v["fields"].as_array().unwrap().iter().all(|f| f["exact"] == true));
    let out = run(&["koszul", "--fixture", "CTR"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn crosscheck_passes_on_fixtures() {
    for name in ["D1", "C5", "DT3", "WEDGE"] {
        let v = json(&["crosscheck", "--fixture", name, "--nmax", "3", "--lmax", "4"]);
        assert_eq!(v["agree"], true, "{}", name);
    }
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(run(&["table", "--fixture", "NOPE"]).status.code(), Some(2));
    assert_eq!(run(&["table"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--fixture", "D1", "--component", "a,zz"]).status.code(), Some(2));
    assert_eq!(run(&["girth", "--fixture", "D1"]).status.code(), Some(2));
    assert_eq!(run(&["hasse", "--fixture", "C4"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--fixture", "D1", "--ring", "fp:4"]).status.code(), Some(2));
}

#[test]
fn file_inputs() {
    let dir = std::env::temp_dir().join(format!("magnihom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let edges = dir.join("square.txt");
    writeln!(std::fs::File::create(&edges).unwrap(), "# 4-cycle\n0 1\n1 0\n1 2\n2 1\n2 3\n3 2\n3 0\n0 3").unwrap();
    let v = json(&["table", "--input", edges.to_str().unwrap(), "--lmax", "2"]);
    assert_eq!(v["cells"][2]["free"], 12);
    let complex = dir.join("triangle.json");
    std::fs::write(&complex, r#"{"facets": [[0, 1], [1, 2], [0, 2]]}"#).unwrap();
    let h = json(&["hasse", "--input", complex.to_str().unwrap()]);
    assert_eq!(h["agree"], true);
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"vertices": 2, "arrows": [[0, 0]]}"#).unwrap();
    assert_eq!(run(&["table", "--input", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["table", "--fixture", "G2", "--lmax", "5"][..],
        &["second", "--fixture", "C5", "--l", "3"][..],
        &["omega", "--fixture", "D1", "--field", "fp:2"][..],
        &["tau", "--fixture", "C4", "--l", "2", "--lambda", "4"][..],
    ] {
        let a = stdout(&run(args));
        let b = stdout(&run(args));
        assert_eq!(a, b);
        let mut threaded = Command::new(env!("CARGO_BIN_EXE_magnihom"));
        threaded.args(args).env("MAGNIHOM_THREADS", "1");
        assert_eq!(String::from_utf8(threaded.output().unwrap().stdout).unwrap(), a);
    }
}

#[test]
fn other_formats() {
    let csv = stdout(&run(&["table", "--fixture", "D1", "--format", "csv"]));
    assert!(csv.starts_with("n,l,free,torsion\n"));
    assert!(csv.contains("3,4,1,\n"));
    let pretty = stdout(&run(&["girth", "--fixture", "C6", "--component", "0,1", "--format", "pretty"]));
    assert!(pretty.contains("girth 6 l 3"));
    let listing = json(&["fixtures"]);
    assert!(listing["fixtures"].as_array().unwrap().iter().any(|f| f["name"] == "ANN"));
}

#[test]
fn series_and_omega() {
    let s = json(&["series", "--fixture", "C4", "--lmax", "3"]);
    assert_eq!(s["total"], serde_json::json!([4, -8, 12, -16]));
    let o = json(&["omega", "--fixture", "C4"]);
    assert_eq!(o["sigma"]["pair_census"], serde_json::json!([4, 8, 4, 0, 0]));
    assert_eq!(o["omega"]["matches_diagonal_homology"], true);
    assert_eq!(o["dual_matches_opposite_omega"], true);
    assert_eq!(run(&["omega", "--fixture", "C4", "--field", "z"]).status.code(), Some(2));
}
