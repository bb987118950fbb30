use std::path::PathBuf;
use std::process::{Command, Output};

fn nbhood(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbhood")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = nbhood(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn scenario(name: &str) -> String {
    format!("{}/../../scenarios/{name}.scenario", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn tables_have_one_block_per_total() {
    let text = stdout(&["timing", "tables", "--trials", "200"]);
    let blocks: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(blocks.len(), 4);
    for (block, (total, rows)) in blocks.iter().zip([(256, 5), (512, 6), (1024, 7), (2048, 8)]) {
        let mut lines = block.lines();
        assert_eq!(lines.next(), Some(format!("# {total} hops").as_str()));
        assert!(lines.next().unwrap().starts_with("rows,columns,trials,"));
        assert_eq!(lines.count(), rows);
    }
}

#[test]
fn sweep_means_add_up() {
    let text = stdout(&["timing", "sweep", "--total", "1024", "--trials", "300"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rows,columns,t_c,t_cl,t_c_prime,T_u"));
    for line in lines {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((f[2] + f[3] + f[4] - f[5]).abs() <= 0.0015, "{line}");
    }
}

#[test]
fn optimum_ms_is_units_times_fifty() {
    let text = stdout(&["timing", "optimum", "--trials", "300"]);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert_eq!(r[5], r[4] * 50.0);
        assert!((0.25..=0.5).contains(&r[3]));
    }
}

#[test]
fn figure9_accepts_custom_totals() {
    let text = stdout(&[
        "timing",
        "figure9",
        "--totals",
        "256,512",
        "--trials",
        "200",
        "--format",
        "plot-data",
    ]);
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("# total_hops T_u_ms\n256 "));
}

#[test]
fn same_config_same_bytes_and_seed_matters() {
    let args = ["timing", "sweep", "--total", "256", "--trials", "100", "--seed", "11"];
    assert_eq!(stdout(&args), stdout(&args));
    assert_ne!(
        stdout(&args),
        stdout(&["timing", "sweep", "--total", "256", "--trials", "100", "--seed", "12"])
    );
}

#[test]
fn literal_mode_doubles_the_leader_ring() {
    let mean_t_cl = |mode| {
        let text = stdout(&["timing", "sweep", "--total", "256", "--trials", "400", "--mode", mode]);
        let last = text.lines().last().unwrap().to_string();
        last.split(',').nth(3).unwrap().parse::<f64>().unwrap()
    };
    let ratio = mean_t_cl("equation-literal") / mean_t_cl("table_consistent");
    assert!((ratio - 2.0).abs() < 0.1, "{ratio}");
}

#[test]
fn out_writes_the_same_bytes() {
    let path: PathBuf = std::env::temp_dir().join(format!("nbhood-out-{}.csv", std::process::id()));
    let args = ["timing", "sweep", "--total", "512", "--trials", "50"];
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(stdout(&with_out).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&args));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn bad_timing_input_exits_2() {
    assert_eq!(nbhood(&["timing", "sweep", "--total", "300"]).status.code(), Some(2));
    assert_eq!(
        nbhood(&["timing", "sweep", "--total", "256", "--trials", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        nbhood(&["timing", "tables", "--mode", "sideways"]).status.code(),
        Some(2)
    );
}

#[test]
fn mm1_worked_example() {
    let text = stdout(&["mm1", "--g", "2", "--l", "8000", "--b", "16000"]);
    for want in [
        "A   = 0.5000",
        "S   = 0.5000",
        "D   = 2.0000",
        "U   = 0.2500",
        "T_w = 0.1667",
        "T   = 0.6667",
        "N   = 0.3333",
        "Q   = 0.0833",
    ] {
        assert!(text.contains(want), "missing {want}:\n{text}");
    }
    let csv = stdout(&["mm1", "--a", "0.5", "--s", "1", "--format", "csv"]);
    assert_eq!(csv.lines().nth(1), Some("0.5,1,1,0.5,1,2,1,0.5"));
}

#[test]
fn mm1_rejects_unstable_and_invalid() {
    let unstable = nbhood(&["mm1", "--a", "3", "--s", "0.5"]);
    assert_eq!(unstable.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unstable.stderr).contains("unstable"));
    assert_eq!(nbhood(&["mm1", "--g", "-1", "--s", "1"]).status.code(), Some(2));
    assert_eq!(nbhood(&["mm1", "--g", "1"]).status.code(), Some(2));
}

#[test]
fn mm1_broadcast_saturates_a_modem() {
    let text = stdout(&["mm1", "--broadcast", "--clients", "256", "--bytes", "64"]);
    assert!(text.contains("load     = 130560 bits/s"));
    assert!(text.contains("(saturated)"));
    let small = stdout(&[
        "mm1",
        "--broadcast",
        "--clients",
        "2",
        "--bytes",
        "64",
        "--format",
        "csv",
    ]);
    assert_eq!(small.lines().nth(1), Some("2,64,1,512"));
}

#[test]
fn bundled_scenarios_pass() {
    for name in ["fig3", "router-failover", "commit-timeout", "update-round"] {
        let text = stdout(&["scenario", "run", &scenario(name)]);
        assert!(!text.contains("FAIL"), "{name}:\n{text}");
    }
}

#[test]
fn failing_expectation_exits_1() {
    let path = std::env::temp_dir().join(format!("nbhood-fail-{}.scenario", std::process::id()));
    std::fs::write(&path, "at=0 event=download addr=10.0.0.1 name=A\nexpect connect A\n").unwrap();
    let out = nbhood(&["scenario", "run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL line 2: connect A"));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn parse_errors_name_the_line() {
    let path = std::env::temp_dir().join(format!("nbhood-bad-{}.scenario", std::process::id()));
    std::fs::write(&path, "# header\nat=0 event=teleport addr=10.0.0.1\n").unwrap();
    let out = nbhood(&["scenario", "run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains(&format!("{}:2: unknown event", path.display())), "{err}");
    std::fs::remove_file(path).unwrap();
}

#[test]
fn guide_sample_output_is_current() {
    let guide = include_str!("../../../book/src/cli.md");
    let (_, rest) = guide.split_once("$ nbhood timing optimum --format table\n").unwrap();
    let (sample, _) = rest.split_once("```").unwrap();
    assert_eq!(stdout(&["timing", "optimum", "--format", "table"]), sample);
}
