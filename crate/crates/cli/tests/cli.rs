use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pgcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgcode")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: stdout {:?} stderr {:?}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn build_writes_matrices_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = pgcode(&["build", "--n", "2", "--p", "3", "--h", "1", "--k", "1", "--out", d]);
    assert_eq!(code(&out), 0);
    let env = json(&out);
    assert_eq!(env["schema"], 1);
    assert_eq!(env["command"], "build");
    let m = &env["report"];
    assert_eq!(m["length"], 13);
    assert_eq!(m["dim"], 7);
    assert_eq!(m["dual_dim"], 6);
    assert_eq!(m["theta_k"], 4);
    assert_eq!(m["hypotheses"]["p_gt_5"], false);

    let on_disk: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(&on_disk, m);
    let gen = pgcode_core::io::read_generator(&fs::read_to_string(dir.path().join("generator.txt")).unwrap()).unwrap();
    let dual = pgcode_core::io::read_generator(&fs::read_to_string(dir.path().join("dual.txt")).unwrap()).unwrap();
    assert_eq!((gen.dim(), dual.dim()), (7, 6));
    for g in gen.generator() {
        for r in dual.generator() {
            let dot = g.iter().zip(r).map(|(&a, &b)| a as u32 * b as u32).sum::<u32>() % 3;
            assert_eq!(dot, 0);
        }
    }
}

#[test]
fn build_pg32_hyperplanes() {
    let dir = tempfile::tempdir().unwrap();
    let out = pgcode(&["build", "--n", "3", "--p", "2", "--k", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let m = &json(&out)["report"];
    assert_eq!(m["length"], 15);
    // 2-rank of the point/plane incidence of PG(3,2)
    assert_eq!(m["dim"], 5);
}

#[test]
fn parameter_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = pgcode(&["build", "--n", "2", "--p", "4", "--h", "1", "--k", "1", "--out", d]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
    assert_eq!(code(&pgcode(&["build", "--n", "2", "--p", "3", "--k", "3", "--out", d])), 3);
    assert_eq!(code(&pgcode(&["verify", "no-such-id", "--n", "2", "--p", "3", "--k", "1"])), 3);
    assert_eq!(code(&pgcode(&["verify", "thm-main", "--n", "2", "--p", "3"])), 3);
    assert_eq!(code(&pgcode(&["verify", "hull-min", "--n", "2", "--p", "3", "--k", "0"])), 3);
    assert_eq!(code(&pgcode(&["nonsense"])), 3);
    assert_eq!(code(&pgcode(&["--help"])), 0);
}

#[test]
fn budget_exhaustion_exits_2() {
    let out = pgcode(&["spread", "--n", "2", "--p", "3", "--h", "2", "--budget-cells", "10"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_thm_main_below_hypothesis() {
    let out = pgcode(&["verify", "thm-main", "--n", "2", "--p", "3", "--h", "1", "--k", "1"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["report"][0];
    assert_eq!(r["verdict"], "hypothesis-not-met");
    assert_eq!(r["unmet"][0], "p > 5");
    assert!(r["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("res-plane-prime")));
    let gap = &r["checks"][0];
    assert_eq!(gap["report"]["interval"]["text"], "]4,6[");
    assert_eq!(gap["report"]["mode"], "exhaustive");
    assert_eq!(gap["report"]["verdict"], "empty");
}

#[test]
fn verify_dual_and_hull_minimum() {
    let out = pgcode(&["verify", "dual-min", "--n", "2", "--p", "3", "--h", "1", "--k", "1"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["report"][0];
    assert_eq!(r["id"], "res-dual-prime");
    assert_eq!(r["verdict"], "proved-by-exhaustion");
    let mw = r["checks"].as_array().unwrap().iter().find(|c| c["kind"] == "minimum-words").unwrap();
    assert_eq!(mw["weight"], 6);
    assert_eq!(mw["classes"], mw["structured"]);

    let out = pgcode(&["verify", "hull-min", "--n", "2", "--p", "3", "--h", "1"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["report"][0];
    assert_eq!(r["id"], "res-hull");
    assert_eq!(r["verdict"], "proved-by-exhaustion");
    assert_eq!(r["checks"][1]["witness"]["weight"], 6);
}

#[test]
fn budgeted_verify_is_inconclusive() {
    let out = pgcode(&["verify", "cor-plane", "--n", "2", "--p", "7", "--budget-steps", "20000", "--samples", "50"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["report"][0]["verdict"], "searched-no-counterexample");
}

#[test]
fn spread_of_pg1_9() {
    let out = pgcode(&["spread", "--n", "1", "--p", "3", "--h", "2"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["report"];
    assert_eq!(r["elements"], 10);
    assert_eq!(r["partition_verified"], true);
    assert_eq!(r["element_points"].as_array().unwrap().len(), 10);
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn blocking_from_subspace_file_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let u = write(dir.path(), "U.txt", "# plane of PG(5,3)\n1 0 0 0 0 0\n0 0 1 0 0 0\n0 0 0 0 1 0\n");
    let export = dir.path().join("B.txt");
    let ex = export.to_str().unwrap();
    let out = pgcode(&["blocking", "--n", "2", "--p", "3", "--h", "2", "--k", "1", "--subspace-file", &u, "--export", ex]);
    assert_eq!(code(&out), 0);
    let c = &json(&out)["report"]["certificate"];
    assert_eq!(c["size"], 13);
    assert_eq!(c["is_blocking"], true);
    assert_eq!(c["is_minimal"], true);
    assert_eq!(c["is_small"], true);
    assert_eq!(c["residues_one_mod_p"], true);

    // the exported set certifies identically when read back
    let again = pgcode(&["blocking", "--n", "2", "--p", "3", "--h", "2", "--k", "1", "--point-file", ex]);
    assert_eq!(code(&again), 0);
    assert_eq!(&json(&again)["report"]["certificate"], c);
}

#[test]
fn blocking_rejects_wrong_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let u = write(dir.path(), "U.txt", "1 0 0 0 0 0\n0 0 1 0 0 0\n");
    let out = pgcode(&["blocking", "--n", "2", "--p", "3", "--h", "2", "--k", "1", "--subspace-file", &u]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension"));
    let out = pgcode(&["blocking", "--n", "2", "--p", "3", "--h", "2", "--k", "1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn spectrum_of_dual() {
    let out = pgcode(&["spectrum", "--n", "2", "--p", "3", "--k", "1", "--code", "dual", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "weight,count\n0,1\n6,156\n9,494\n12,78\n");
}

#[test]
fn identical_config_gives_identical_bytes() {
    let args = ["verify", "all", "--n", "2", "--p", "7", "--k", "1", "--budget-steps", "50000", "--samples", "20", "--seed", "9"];
    let a = pgcode(&args);
    let b = pgcode(&args);
    assert_eq!(code(&a), 2);
    assert_eq!(a.stdout, b.stdout);
    let r = pgcode(&["blocking", "--n", "2", "--p", "3", "--h", "2", "--k", "1", "--random-subspace", "--seed", "3"]);
    let s = pgcode(&["blocking", "--n", "2", "--p", "3", "--h", "2", "--k", "1", "--random-subspace", "--seed", "3"]);
    assert_eq!(r.stdout, s.stdout);
}

#[test]
fn out_flag_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("list.csv");
    let out = pgcode(&["list", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(path).unwrap();
    assert!(text.starts_with("id,requires,statement\nthm-main,"));
    assert_eq!(text.lines().count(), 12);
}
