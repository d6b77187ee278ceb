use std::fs;
use std::path::Path;

use crestflow::cli;
use crestflow::cli::output::CSV_COLUMNS;
use tempfile::TempDir;

fn run(dir: &Path, cmd: &str, config: &str, extra: &[&str]) -> i32 {
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, config).unwrap();
    let mut args = vec![
        "crestflow".to_string(),
        cmd.to_string(),
        "--config".into(),
        cfg.display().to_string(),
        "--out".into(),
        dir.display().to_string(),
        "--quiet".into(),
    ];
    args.extend(extra.iter().map(|s| s.to_string()));
    cli::run(args)
}

const TRIVIAL: &str = "\
# translating circle
mode = disc
n_grid = 32
init.kind = trivial
init.vel_re = 0.25
dt_init = 0.01
dt_max = 0.01
t_final = 0.1
output.every = 2
";

const RANDOM: &str = "\
mode = disc
n_grid = 32
init.kind = random
init.seed = 4
dt_init = 0.01
dt_max = 0.01
t_final = 0.2
output.every = 2
checkpoint.every = 10
";

#[test]
fn simulate_writes_csv_and_checkpoint() {
    let d = TempDir::new().unwrap();
    assert_eq!(run(d.path(), "simulate", TRIVIAL, &[]), 0);
    let csv = fs::read_to_string(d.path().join("run.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
    header.push("stop_reason");
    assert_eq!(lines[0], header.join(","));
    assert_eq!(lines.len(), 1 + 6);
    for l in &lines[1..] {
        let cells: Vec<&str> = l.split(',').collect();
        assert_eq!(cells.len(), header.len());
        for c in &cells[..CSV_COLUMNS.len()] {
            let x: f64 = c.parse().unwrap();
            assert_eq!(format!("{x:.16e}"), *c);
        }
    }
    assert!(lines[6].ends_with(",t_final"));
    assert!(lines[5].ends_with(','));
    let t: f64 = lines[6].split(',').next().unwrap().parse().unwrap();
    assert!((t - 0.1).abs() < 1e-15);
    let cp: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("run_final.json")).unwrap()).unwrap();
    assert_eq!(cp["format"], "crestflow-checkpoint");
    assert_eq!(cp["n"], 32);
}

#[test]
fn runs_are_deterministic() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    assert_eq!(run(a.path(), "simulate", RANDOM, &[]), 0);
    assert_eq!(run(b.path(), "simulate", RANDOM, &[]), 0);
    for f in ["run.csv", "run_final.json", "run_step00000010.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn seed_flag_overrides_config() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    assert_eq!(run(a.path(), "simulate", RANDOM, &[]), 0);
    assert_eq!(run(b.path(), "simulate", RANDOM, &["--seed", "5"]), 0);
    assert_ne!(fs::read(a.path().join("run.csv")).unwrap(), fs::read(b.path().join("run.csv")).unwrap());
}

#[test]
fn resume_continues_bit_exactly() {
    let d = TempDir::new().unwrap();
    assert_eq!(run(d.path(), "simulate", RANDOM, &[]), 0);
    let full = fs::read_to_string(d.path().join("run.csv")).unwrap();
    let final_full = fs::read(d.path().join("run_final.json")).unwrap();

    let r = TempDir::new().unwrap();
    let cp = d.path().join("run_step00000010.json");
    let cfg = format!("{RANDOM}resume = {}\n", cp.display());
    assert_eq!(run(r.path(), "simulate", &cfg, &[]), 0);
    let tail = fs::read_to_string(r.path().join("run.csv")).unwrap();
    let full_rows: Vec<&str> = full.lines().collect();
    let tail_rows: Vec<&str> = tail.lines().collect();
    assert_eq!(tail_rows[0], full_rows[0]);
    // rows after step 10: steps 12, 14, ..., 20
    assert_eq!(&tail_rows[1..], &full_rows[full_rows.len() - 5..]);
    assert_eq!(fs::read(r.path().join("run_final.json")).unwrap(), final_full);
}

#[test]
fn config_errors_exit_2() {
    let d = TempDir::new().unwrap();
    assert_eq!(run(d.path(), "simulate", "n_grid = 32\nwarp_factor = 9\n", &[]), 2);
    assert_eq!(run(d.path(), "simulate", "n_grid = 32\nn_grid = 64\n", &[]), 2);
    assert_eq!(run(d.path(), "simulate", "n_grid = lots\n", &[]), 2);
    assert_eq!(run(d.path(), "simulate", "mode = disc\ng = 1\n", &[]), 2);
    assert_eq!(run(d.path(), "simulate", "mode = line\ninit.kind = trivial\n", &[]), 2);
    assert_eq!(run(d.path(), "simulate", "just words\n", &[]), 2);
    assert_eq!(run(d.path(), "scale-check", TRIVIAL, &[]), 2);
    assert_eq!(cli::run(["crestflow", "simulate", "--config", "/nonexistent/x.cfg"]), 2);
    assert_eq!(cli::run(["crestflow", "explode"]), 2);
    assert_eq!(cli::run(["crestflow", "simulate", "--bogus"]), 2);
}

#[test]
fn verification_failure_exits_3() {
    let d = TempDir::new().unwrap();
    let cfg = "mode = disc\nn_grid = 64\ninit.kind = random\nsuite.random_states = 1\n";
    assert_eq!(run(d.path(), "verify", cfg, &[]), 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("run_verify.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["identities"].as_array().unwrap().len(), 24);

    let bad = format!("{cfg}suite.corrupt_hilbert = true\n");
    assert_eq!(run(d.path(), "verify", &bad, &[]), 3);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("run_verify.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
}

#[test]
fn lossy_dilation_exits_3() {
    let d = TempDir::new().unwrap();
    let base = "mode = line\ng = 1\nn_grid = 32\ninit.kind = line_wave\ninit.k = 1\ninit.amplitude = 0.05\n\
                scale.t_final = 0.1\nscale.samples = 2\ndt_init = 0.01\ndt_max = 0.01\n";
    assert_eq!(run(d.path(), "scale-check", &format!("{base}scale.list = 2:0.5\n"), &[]), 0);
    assert_eq!(run(d.path(), "scale-check", &format!("{base}scale.list = 1/2:0\n"), &[]), 3);
}

#[test]
fn step_floor_exits_4() {
    let d = TempDir::new().unwrap();
    let cfg = "mode = disc\nn_grid = 32\ninit.kind = random\ndt_init = 0.1\ndt_max = 0.1\ndt_min = 0.09\ncfl = 0.01\n\
               t_final = 1\noutput.every = 1\n";
    assert_eq!(run(d.path(), "simulate", cfg, &[]), 4);
    let csv = fs::read_to_string(d.path().join("run.csv")).unwrap();
    assert!(csv.trim_end().ends_with(",near_singular"));
}

#[test]
fn pinch_outputs_follow_schema() {
    let d = TempDir::new().unwrap();
    let cfg = "mode = disc\nn_grid = 128\ninit.kind = crest\ninit.nu = 0.3\ninit.eps = 0.1\npinch.outputs = 100\n\
               pinch.horizon = 0.2\n";
    assert_eq!(run(d.path(), "pinch", cfg, &[]), 0);
    let csv = fs::read_to_string(d.path().join("run.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.ends_with(",holo_residual,d_pinch,stop_reason"), "{header}");
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert!(rows.len() >= 2);
    for r in &rows {
        let d_pinch: f64 = r.split(',').nth(CSV_COLUMNS.len()).unwrap().parse().unwrap();
        assert!(d_pinch > 0.0);
    }
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("run_pinch.json")).unwrap()).unwrap();
    for key in ["d0", "v", "samples", "t_stop", "stop", "lower", "upper", "d_deviation"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    let s = &json["samples"][0];
    for key in ["t", "d", "report"] {
        assert!(s.get(key).is_some(), "{key}");
    }
}
