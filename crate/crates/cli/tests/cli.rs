use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sharpsob"))
        .args(args)
        .env_remove("SHARPSOB_DIGITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn constants_csv_has_header_and_rows() {
    let o = run(&["constants", "--kmax", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "k",
            "c_exact",
            "c_squared",
            "c_decimal",
            "landau_l1",
            "landau_deriv_l2_sq",
            "kalyabin_lower",
            "kalyabin_upper_decimal",
            "galerkin_check"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    let c: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    for (got, want) in c.iter().zip([0.8164966, 0.2108185, 0.0356348]) {
        assert!((got - want).abs() < 5e-8, "{got} vs {want}");
    }
}

#[test]
fn constants_csv_round_trips_exact_strings() {
    let o = run(&["constants", "--kmax", "4"]);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.unwrap();
        let (c2, _) = sharpsob::exactnum::parse_rational(&rec[2]).unwrap();
        assert_eq!(c2, sharpsob::constants::sharp_constant_squared(i as u32 + 1));
        assert_eq!(&rec[1], sharpsob::constants::sharp_constant(i as u32 + 1).to_string());
        assert_eq!(&rec[8], &rec[2]);
        let (l1, _) = sharpsob::exactnum::parse_rational(&rec[4]).unwrap();
        let (d, _) = sharpsob::exactnum::parse_rational(&rec[5]).unwrap();
        assert_eq!(&l1 * &l1 / d, c2);
    }
}

#[test]
fn constants_json_and_usage_errors() {
    let o = run(&["constants", "--kmax", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["c_squared"], "2/3");
    assert_eq!(run(&["constants", "--kmax", "0"]).status.code(), Some(2));
    assert_eq!(run(&["constants"]).status.code(), Some(2));
    assert_eq!(run(&["constants", "--kmax", "2", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn digits_flag_and_env() {
    let o = run(&["constants", "--kmax", "1", "--digits", "5"]);
    assert!(stdout(&o).contains(",0.81650,"));
    let o = Command::new(env!("CARGO_BIN_EXE_sharpsob"))
        .args(["constants", "--kmax", "1"])
        .env("SHARPSOB_DIGITS", "3")
        .output()
        .unwrap();
    assert!(stdout(&o).contains(",0.816,"));
}

#[test]
fn verify_kernel_passes() {
    let o = run(&["verify", "--suite", "kernel", "--k", "2", "--nodes", "-1/2,1/2", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suite"], "kernel");
    assert_eq!(v["k"], 2);
    assert_eq!(v["pass"], true);
    let ids: Vec<&str> = v["cases"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(v["cases"].as_array().unwrap().iter().all(|c| c["status"] == "pass" && c.get("witness").is_none()));
}

#[test]
fn verify_usage_errors() {
    assert_eq!(run(&["verify", "--suite", "kernel", "--k", "2", "--nodes", "1/2,1/2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "kernel", "--k", "2", "--nodes", "1/2,x"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "kernel", "--k", "3", "--nodes", "0,1/2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope", "--k", "2"]).status.code(), Some(2));
}

#[test]
fn verify_decimal_nodes_are_noted() {
    let o = run(&["verify", "--suite", "kernel", "--k", "2", "--nodes", "-0.5,0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let notes = v["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n == "node 0.25 read as 1/4"));
}

#[test]
fn verify_galerkin_final_gap_zero() {
    let o = run(&["verify", "--suite", "galerkin", "--k", "1", "--size", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let weighted = v["sweeps"].as_array().unwrap().iter().find(|s| s["basis"] == "landau_weighted").unwrap();
    let rows = weighted["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows.last().unwrap()["gap"], "0");
}

#[test]
fn verify_csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let o = run(&[
        "verify", "--suite", "bvp", "--k", "1", "--size", "3", "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("id,status,exact,witness"));
    assert!(text.lines().skip(1).all(|l| l.contains(",pass,")));
}

#[test]
fn verify_all_is_seed_reproducible() {
    let a = run(&["verify", "--suite", "lemma", "--k", "2", "--seed", "9"]);
    let b = run(&["verify", "--suite", "lemma", "--k", "2", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn plot_heatmap_has_node_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b2.svg");
    let o = run(&["plot", "--kind", "kernel_heatmap", "--k", "2", "--nodes", "-1/2,1/2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains(r#"class="node-line" data-y="-1/2""#));
    assert!(svg.contains(r#"class="node-line" data-y="1/2""#));
}

#[test]
fn plot_landau_and_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let l = dir.path().join("l.svg");
    assert_eq!(run(&["plot", "--kind", "landau", "--k", "3", "--out", l.to_str().unwrap()]).status.code(), Some(0));
    let svg = std::fs::read_to_string(&l).unwrap();
    assert_eq!(svg.matches(r#"class="landau""#).count(), 3);

    let c = dir.path().join("c.svg");
    assert_eq!(run(&["plot", "--kind", "convergence", "--k", "1", "--out", c.to_str().unwrap()]).status.code(), Some(0));
    let svg = std::fs::read_to_string(&c).unwrap();
    assert!(svg.contains(r#"class="asymptote" data-value="2/3""#));
    let values: Vec<f64> = svg
        .split(r#"data-value=""#)
        .skip(2)
        .map(|s| {
            let (n, d) = s[..s.find('"').unwrap()].split_once('/').unwrap();
            n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap()
        })
        .collect();
    assert_eq!(values.len(), 8);
    assert!(values.windows(2).all(|w| w[0] <= w[1]) && values.iter().all(|v| *v < 2.0 / 3.0));
}

#[test]
fn plot_errors() {
    assert_eq!(run(&["plot", "--kind", "landau", "--k", "2"]).status.code(), Some(2));
    assert_eq!(run(&["plot", "--kind", "landau", "--k", "2", "--out", "/nonexistent/dir/x.svg"]).status.code(), Some(1));
}
