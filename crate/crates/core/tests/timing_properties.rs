use nbhood::simcore::RandomStream;
use nbhood::timing::{
    factor_pairs, figure9_curve, find_optimum, monte_carlo, report, simulate_detailed, sweep, HopsArrayDims,
    TimingMode, TABLE_TOTALS,
};
use proptest::prelude::*;

const SEED: u64 = 0x5EED;
const MEAN_HOP: f64 = 5.5;

fn within(actual: f64, expected: f64, rel: f64) -> bool {
    (actual - expected).abs() <= rel * expected
}

#[test]
fn leader_ring_mean_per_mode() {
    for total in TABLE_TOTALS {
        for d in factor_pairs(total).unwrap() {
            let expected = f64::from(d.columns() - 1) * MEAN_HOP;
            let t = monte_carlo(d, 1000, SEED, TimingMode::TableConsistent).unwrap();
            assert!(
                within(t.t_cl.mean, expected, 0.05),
                "{d}: {} vs {expected}",
                t.t_cl.mean
            );
            let e = monte_carlo(d, 1000, SEED, TimingMode::EquationLiteral).unwrap();
            assert!(
                within(e.t_cl.mean, 2.0 * expected, 0.05),
                "{d}: {} vs {}",
                e.t_cl.mean,
                2.0 * expected
            );
        }
    }
}

#[test]
fn cluster_sum_mean_and_doubling() {
    for total in TABLE_TOTALS {
        for d in factor_pairs(total).unwrap() {
            let r = monte_carlo(d, 1000, SEED, TimingMode::default()).unwrap();
            let expected = f64::from(d.rows()) * MEAN_HOP;
            assert!(within(r.cluster_sum_mean, expected, 0.05), "{d}");
            let ratio = r.t_c.mean / r.t_c_prime.mean;
            assert!((ratio - 2.0).abs() <= 0.1, "{d}: t_c/t_c' = {ratio}");
        }
    }
}

#[test]
fn eight_by_thirty_two_leader_ring() {
    let d = HopsArrayDims::new(8, 32).unwrap();
    let r = monte_carlo(d, 1000, SEED, TimingMode::default()).unwrap();
    assert!(within(r.t_cl.mean, 170.5, 0.05));
    assert!(r.t_u.band_contains(328));
}

#[test]
fn csv_means_add_up() {
    for total in TABLE_TOTALS {
        let rows = sweep(total, &factor_pairs(total).unwrap(), 300, SEED, TimingMode::default()).unwrap();
        let csv = report::sweep_csv(&rows);
        for line in csv.lines().skip(1) {
            let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            assert!((v[2] + v[3] + v[4] - v[5]).abs() <= 0.0015 + 1e-9, "{line}");
        }
    }
}

#[test]
fn optimum_ratio_in_band() {
    for total in TABLE_TOTALS {
        let o = find_optimum(total, 1000, SEED, TimingMode::default()).unwrap();
        assert!((0.25..=0.5).contains(&o.ratio), "{total}: {}", o.dims);
        assert_eq!(o.ms(), o.units() * 50);
    }
}

#[test]
fn figure9_tracks_published_curve() {
    let points = figure9_curve(&TABLE_TOTALS, 1000, SEED, TimingMode::default()).unwrap();
    let published = [16_400.0, 24_400.0, 34_600.0, 48_750.0];
    for (p, want) in points.iter().zip(published) {
        assert!(within(p.ms, want, 0.15), "{}: {} vs {want}", p.total, p.ms);
    }
    assert!(points.windows(2).all(|w| w[0].ms < w[1].ms));
}

fn dims() -> impl Strategy<Value = HopsArrayDims> {
    (1u32..40, 1u32..40).prop_map(|(r, c)| HopsArrayDims::new(r, c).unwrap())
}

proptest! {
    #[test]
    fn every_trial_obeys_the_identity(d in dims(), seed in any::<u64>(), literal in any::<bool>()) {
        let mode = if literal { TimingMode::EquationLiteral } else { TimingMode::TableConsistent };
        let mut s = RandomStream::derive(seed, "prop");
        let t = simulate_detailed(d, &mut s, mode);
        prop_assert_eq!(t.timing.t_u, t.timing.t_c + t.timing.t_cl + t.timing.t_c_prime);
        let top = *t.forward_sums.iter().max().unwrap();
        prop_assert!(t.forward_sums.iter().all(|&x| x <= top));
        prop_assert_eq!(t.timing.t_c, 2 * top);
        prop_assert_eq!(t.forward_sums.len(), d.columns() as usize);
    }

    #[test]
    fn same_config_same_row(d in dims(), seed in any::<u64>()) {
        let a = monte_carlo(d, 20, seed, TimingMode::default()).unwrap();
        let b = monte_carlo(d, 20, seed, TimingMode::default()).unwrap();
        prop_assert_eq!(a, b);
    }
}
