use rayon::prelude::*;

use super::model::{simulate_detailed, HopsArrayDims, TimingMode, UpdateTiming};
use super::stats::ComponentStats;
use super::TimingError;
use crate::simcore::{mean_units_to_ms, units_to_ms, RandomStream};

/// Monte Carlo summary for one hops-array shape.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub dims: HopsArrayDims,
    pub mode: TimingMode,
    pub trials: usize,
    pub t_c: ComponentStats,
    pub t_cl: ComponentStats,
    pub t_c_prime: ComponentStats,
    pub t_u: ComponentStats,
    /// Mean of a single cluster's hop sum, over every cluster of every
    /// trial (forward and redistribution passes).
    pub cluster_sum_mean: f64,
}

/// The stream trial `trial` of a `dims` sweep draws from.
pub fn trial_stream(seed: u64, dims: HopsArrayDims, trial: usize) -> RandomStream {
    RandomStream::derive(seed, &format!("timing/{}x{}/{}", dims.rows(), dims.columns(), trial))
}

/// Runs `trials` independent realizations in parallel. Each trial owns a
/// stream derived from `(seed, dims, trial)`, so the result does not depend
/// on thread scheduling.
pub fn monte_carlo(dims: HopsArrayDims, trials: usize, seed: u64, mode: TimingMode) -> Result<SweepRow, TimingError> {
    if trials == 0 {
        return Err(TimingError::NoTrials);
    }
    let runs: Vec<(UpdateTiming, u64)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let d = simulate_detailed(dims, &mut trial_stream(seed, dims, i), mode);
            let sums = d.forward_sums.iter().chain(&d.redistribute_sums).sum::<u64>();
            (d.timing, sums)
        })
        .collect();
    let column = |f: fn(&UpdateTiming) -> u64| -> ComponentStats {
        ComponentStats::from_samples(&runs.iter().map(|(t, _)| f(t)).collect::<Vec<_>>())
    };
    let clusters = 2.0 * trials as f64 * f64::from(dims.columns());
    Ok(SweepRow {
        dims,
        mode,
        trials,
        t_c: column(|t| t.t_c),
        t_cl: column(|t| t.t_cl),
        t_c_prime: column(|t| t.t_c_prime),
        t_u: column(|t| t.t_u),
        cluster_sum_mean: runs.iter().map(|&(_, s)| s as f64).sum::<f64>() / clusters,
    })
}

/// Power-of-two shapes of `total` with at least four rows and four
/// columns, most rows first.
pub fn factor_pairs(total: u64) -> Result<Vec<HopsArrayDims>, TimingError> {
    if !total.is_power_of_two() || total < 16 || total > u64::from(u32::MAX) {
        return Err(TimingError::UnsupportedTotal(total));
    }
    let mut rows = total / 4;
    let mut out = Vec::new();
    while rows >= 4 {
        out.push(HopsArrayDims::new(rows as u32, (total / rows) as u32)?);
        rows /= 2;
    }
    Ok(out)
}

/// One row per shape, reordered to descending rows.
pub fn sweep(
    total: u64,
    pairs: &[HopsArrayDims],
    trials: usize,
    seed: u64,
    mode: TimingMode,
) -> Result<Vec<SweepRow>, TimingError> {
    if let Some(bad) = pairs.iter().find(|d| d.total_hops() != total) {
        return Err(TimingError::NotAFactorization { total, dims: *bad });
    }
    let mut ordered = pairs.to_vec();
    ordered.sort_by_key(|d| std::cmp::Reverse(d.rows()));
    ordered
        .into_iter()
        .map(|d| monte_carlo(d, trials, seed, mode))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Optimum {
    pub total: u64,
    pub dims: HopsArrayDims,
    /// rows / columns.
    pub ratio: f64,
    pub row: SweepRow,
}

impl Optimum {
    /// Mean `T_u` rounded to whole units.
    pub fn units(&self) -> u64 {
        self.row.t_u.mean.round() as u64
    }

    /// [`units`](Self::units) at 50 ms per unit.
    pub fn ms(&self) -> u64 {
        units_to_ms(self.units())
    }
}

/// The shape with the lowest mean `T_u` over [`factor_pairs`]. Ties go to
/// the shape with more rows.
pub fn find_optimum(total: u64, trials: usize, seed: u64, mode: TimingMode) -> Result<Optimum, TimingError> {
    let rows = sweep(total, &factor_pairs(total)?, trials, seed, mode)?;
    let best = rows
        .iter()
        .fold(None::<&SweepRow>, |best, r| match best {
            Some(b) if b.t_u.mean <= r.t_u.mean => Some(b),
            _ => Some(r),
        })
        .expect("factor_pairs is never empty")
        .clone();
    Ok(Optimum {
        total,
        dims: best.dims,
        ratio: best.dims.ratio(),
        row: best,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Figure9Point {
    pub total: u64,
    pub dims: HopsArrayDims,
    pub mean_units: f64,
    pub ms: f64,
}

/// Optimal mean update time against neighborhood size.
pub fn figure9_curve(
    totals: &[u64],
    trials: usize,
    seed: u64,
    mode: TimingMode,
) -> Result<Vec<Figure9Point>, TimingError> {
    totals
        .iter()
        .map(|&total| {
            let o = find_optimum(total, trials, seed, mode)?;
            Ok(Figure9Point {
                total,
                dims: o.dims,
                mean_units: o.row.t_u.mean,
                ms: mean_units_to_ms(o.row.t_u.mean),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timing::simulate_once;

    fn dims(r: u32, c: u32) -> HopsArrayDims {
        HopsArrayDims::new(r, c).unwrap()
    }

    #[test]
    fn factor_pair_layouts() {
        let shape = |t| -> Vec<(u32, u32)> {
            factor_pairs(t)
                .unwrap()
                .iter()
                .map(|d| (d.rows(), d.columns()))
                .collect()
        };
        assert_eq!(shape(256), [(64, 4), (32, 8), (16, 16), (8, 32), (4, 64)]);
        assert_eq!(shape(512).len(), 6);
        assert_eq!(shape(1024).len(), 7);
        assert_eq!(shape(2048).len(), 8);
        assert_eq!(shape(2048)[0], (512, 4));
        assert_eq!(shape(16), [(4, 4)]);
        assert!(factor_pairs(1000).is_err());
        assert!(factor_pairs(8).is_err());
    }

    #[test]
    fn single_trial_matches_simulate_once() {
        let d = dims(8, 32);
        let row = monte_carlo(d, 1, 42, TimingMode::TableConsistent).unwrap();
        let t = simulate_once(d, &mut trial_stream(42, d, 0), TimingMode::TableConsistent);
        assert_eq!(row.t_u.mean, t.t_u as f64);
        assert_eq!(row.t_c.p_low, t.t_c);
        assert_eq!(row.t_cl.max, t.t_cl);
        assert_eq!(row.t_c_prime.min, t.t_c_prime);
        assert_eq!(row.t_u.std_dev, 0.0);
    }

    #[test]
    fn zero_trials_rejected() {
        assert_eq!(
            monte_carlo(dims(4, 4), 0, 1, TimingMode::default()),
            Err(TimingError::NoTrials)
        );
    }

    #[test]
    fn sweep_rejects_non_factorization() {
        let err = sweep(256, &[dims(8, 32), dims(8, 16)], 10, 1, TimingMode::default()).unwrap_err();
        assert_eq!(
            err,
            TimingError::NotAFactorization {
                total: 256,
                dims: dims(8, 16)
            }
        );
    }

    #[test]
    fn sweep_orders_by_descending_rows() {
        let rows = sweep(
            256,
            &[dims(4, 64), dims(64, 4), dims(16, 16)],
            20,
            1,
            TimingMode::default(),
        )
        .unwrap();
        let r: Vec<u32> = rows.iter().map(|r| r.dims.rows()).collect();
        assert_eq!(r, [64, 16, 4]);
    }

    #[test]
    fn deterministic_rows() {
        let d = dims(16, 16);
        let a = monte_carlo(d, 300, 9, TimingMode::EquationLiteral).unwrap();
        let b = monte_carlo(d, 300, 9, TimingMode::EquationLiteral).unwrap();
        assert_eq!(a, b);
        let c = monte_carlo(d, 300, 10, TimingMode::EquationLiteral).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn mean_identity_holds() {
        for d in factor_pairs(256).unwrap() {
            let r = monte_carlo(d, 200, 5, TimingMode::default()).unwrap();
            let sum = r.t_c.mean + r.t_cl.mean + r.t_c_prime.mean;
            assert!((r.t_u.mean - sum).abs() < 1e-9 * sum);
        }
    }
}
