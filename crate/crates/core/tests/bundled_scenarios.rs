use std::path::PathBuf;

use nbhood::scenario::{parse_scenario, run_scenario, simulate};

fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn load(name: &str) -> nbhood::scenario::Scenario {
    let text = std::fs::read_to_string(scenario_dir().join(name)).unwrap();
    parse_scenario(&text).unwrap()
}

#[test]
fn every_bundled_scenario_passes_across_seeds() {
    let mut names: Vec<_> = std::fs::read_dir(scenario_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".scenario"))
        .collect();
    names.sort();
    assert!(names.len() >= 3);
    for name in names {
        let sc = load(&name);
        for seed in 0..40 {
            let report = run_scenario(&sc, seed);
            assert!(report.passed(), "{name} seed {seed}\n{}", report.render());
        }
    }
}

#[test]
fn fig3_first_run() {
    let report = run_scenario(&load("fig3.scenario"), 0);
    println!("{}", report.render());
    assert!(report.passed());
    assert_eq!(report.neighborhoods.len(), 1);
    assert_eq!(report.neighborhoods[0].1, ["I1", "I4", "I3", "I2"]);
}

#[test]
fn membership_stays_exclusive() {
    for name in ["fig3.scenario", "router-failover.scenario", "commit-timeout.scenario"] {
        let sc = load(name);
        for seed in 0..20 {
            let (world, _) = simulate(&sc, seed);
            world.check_membership().unwrap();
        }
    }
}

#[test]
fn reruns_are_identical() {
    let sc = load("router-failover.scenario");
    assert_eq!(run_scenario(&sc, 7).render(), run_scenario(&sc, 7).render());
}
