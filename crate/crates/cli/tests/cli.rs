use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use algdist::io::hgr::write_hgr;
use algdist::io::mtx::write_matrix_market;
use algdist::synth;

fn algdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .take_while(|l| !l.is_empty())
        .collect()
}

fn write_k2(dir: &Path) -> String {
    let p = dir.join("k2.mtx");
    fs::write(&p, "%%MatrixMarket matrix coordinate pattern symmetric\n2 2 1\n2 1\n").unwrap();
    p.display().to_string()
}

fn write_graph(path: &Path, g: &algdist::Graph) {
    let mut f = fs::File::create(path).unwrap();
    write_matrix_market(g, &mut f).unwrap();
}

#[test]
fn distance_on_k2_has_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&algdist(&["distance", &write_k2(dir.path()), "--seed", "3"]));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("1,2,"));
    assert!(out.contains("\ni,j,rho\n"));
}

#[test]
fn defaults_are_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&algdist(&["distance", &write_k2(dir.path())]));
    for line in ["# omega=0.5", "# k=20", "# R=10", "# p=inf", "# seed=0"] {
        assert!(out.lines().any(|l| l == line), "missing {line} in\n{out}");
    }
}

#[test]
fn flags_override_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("p.mtx");
    write_graph(&g, &synth::path(6));
    let out = stdout(&algdist(&[
        "distance",
        g.to_str().unwrap(),
        "--omega",
        "0.25",
        "--k",
        "3",
        "--R",
        "2",
        "--p",
        "2",
    ]));
    for line in ["# omega=0.25", "# k=3", "# R=2", "# p=2"] {
        assert!(out.lines().any(|l| l == line), "missing {line}");
    }
    assert_eq!(data_rows(&out).len(), 5);
}

#[test]
fn bench_over_five_files() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(&dir.path().join("a_grid.mtx"), &synth::grid(6, 7, 1));
    write_graph(&dir.path().join("b_rand.mtx"), &synth::random_connected(60, 90, 2));
    write_graph(&dir.path().join("c_comm.mtx"), &synth::two_communities(20, 5, 2, 3));
    write_graph(&dir.path().join("d_band.mtx"), &synth::banded(80, 3, 6, 4));
    let h = synth::random_hypergraph(40, 50, 4, 8, 5);
    write_hgr(&h, &mut fs::File::create(dir.path().join("e_hyper.hgr")).unwrap()).unwrap();
    fs::write(dir.path().join("notes.txt"), "ignored").unwrap();

    let out_path = dir.path().join("bench.csv");
    let o = algdist(&["bench", dir.path().to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out_path).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 5, "{text}");
    let names: Vec<&str> = rows.iter().map(|r| r.split(',').next().unwrap()).collect();
    assert_eq!(names, ["a_grid.mtx", "b_rand.mtx", "c_comm.mtx", "d_band.mtx", "e_hyper.hgr"]);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[4], "20");
        assert_eq!(cols[5].split(';').count(), 20);
        assert_eq!(cols[6].split(';').count(), 20);
        let mean: f64 = cols[7].parse().unwrap();
        assert!(mean.is_finite() && mean > 0.0);
    }
}

#[test]
fn distance_output_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("b.mtx");
    write_graph(&g, &synth::banded(20_000, 3, 40, 9));
    let g = g.to_str().unwrap();
    let one = stdout(&algdist(&["--threads", "1", "distance", g, "--seed", "11"]));
    let four = stdout(&algdist(&["--threads", "4", "distance", g, "--seed", "11"]));
    assert_eq!(one, four);
}

#[test]
fn match_reports_twenty_seeds_and_timings_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.mtx");
    write_graph(&g, &synth::random_connected(50, 80, 6));
    let g = g.to_str().unwrap();
    let plain = stdout(&algdist(&["match", g, "--algo", "path-growing"]));
    assert!(plain.contains("# algo=path-growing"));
    let rows = data_rows(&plain);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].split(',').nth(5).unwrap().split(';').count(), 20);
    assert!(!plain.contains("relax_s"));
    let timed = stdout(&algdist(&["match", g, "--timings", "--seeds", "3"]));
    assert!(timed.contains(",relax_s,preprocess_s,solve_s"));
}

#[test]
fn hpart_with_internal_bisector_and_literal_mode() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("h.hgr");
    write_hgr(&synth::random_hypergraph(30, 30, 4, 6, 1), &mut fs::File::create(&p).unwrap()).unwrap();
    let p = p.to_str().unwrap();
    let out = stdout(&algdist(&["hpart", p, "--seeds", "4", "--literal-alg4"]));
    assert!(out.contains("# literal_alg4=true"));
    assert!(out.contains("# partitioner=internal"));
    assert_eq!(data_rows(&out).len(), 1);
}

#[test]
fn missing_partitioner_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("h.hgr");
    write_hgr(&synth::random_hypergraph(20, 10, 3, 5, 1), &mut fs::File::create(&p).unwrap()).unwrap();
    let o = algdist(&["hpart", p.to_str().unwrap(), "--partitioner", "/nonexistent/shmetis"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("not found"));
}

#[test]
fn diag_reports_bound_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.mtx");
    write_graph(&g, &synth::random_connected(40, 60, 8));
    let out = stdout(&algdist(&[
        "diag",
        g.to_str().unwrap(),
        "--R",
        "3",
        "--k",
        "40",
        "--theta-points",
        "4",
    ]));
    assert!(out.contains("# theta="));
    let mut sections = out.split("\n\n");
    let runs = sections.next().unwrap();
    assert_eq!(data_rows(runs).len(), 3);
    for row in data_rows(runs) {
        let cols: Vec<&str> = row.split(',').collect();
        let defect: f64 = cols[1].parse().unwrap();
        if cols[7] == "Applies" {
            assert!(defect <= cols[6].parse::<f64>().unwrap());
        }
    }
    let theta = sections.next().expect("theta table");
    assert_eq!(theta.lines().count(), 5);
}

#[test]
fn errors_exit_nonzero_with_usage() {
    let o = algdist(&["distance", "/nonexistent/graph.mtx"]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("/nonexistent/graph.mtx") && err.contains("Usage:"), "{err}");

    let o = algdist(&["distance", "--no-such-flag", "x.mtx"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage:"));

    let dir = tempfile::tempdir().unwrap();
    let o = algdist(&["distance", &write_k2(dir.path()), "--p", "3"]);
    assert!(!o.status.success());
}

#[test]
fn disconnected_input_needs_flag() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("two.mtx");
    fs::write(
        &p,
        "%%MatrixMarket matrix coordinate real symmetric\n5 5 3\n2 1 1.0\n3 2 2.0\n5 4 1.0\n",
    )
    .unwrap();
    let p = p.to_str().unwrap();
    let o = algdist(&["distance", p]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--largest-component"));
    let out = stdout(&algdist(&["distance", p, "--largest-component"]));
    let ids: Vec<&str> = data_rows(&out).iter().map(|r| &r[..3]).collect();
    assert_eq!(ids, ["1,2", "2,3"]);
}
