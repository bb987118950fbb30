use std::fmt;
use std::str::FromStr;

use super::TimingError;
use crate::simcore::HopSource;

/// Shape of the hops array: `rows` hops per cluster (a cluster of `n`
/// members has `n − 1` hops) by `columns` clusters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HopsArrayDims {
    rows: u32,
    columns: u32,
}

impl HopsArrayDims {
    pub fn new(rows: u32, columns: u32) -> Result<HopsArrayDims, TimingError> {
        if rows == 0 || columns == 0 {
            return Err(TimingError::InvalidDims { rows, columns });
        }
        Ok(HopsArrayDims { rows, columns })
    }

    pub fn rows(&self) -> u32 {
        self.rows
    }

    pub fn columns(&self) -> u32 {
        self.columns
    }

    pub fn total_hops(&self) -> u64 {
        u64::from(self.rows) * u64::from(self.columns)
    }

    /// rows / columns.
    pub fn ratio(&self) -> f64 {
        f64::from(self.rows) / f64::from(self.columns)
    }
}

impl fmt::Display for HopsArrayDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.rows, self.columns)
    }
}

/// How many leader-ring hops are sampled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TimingMode {
    /// `N − 1` hops: the accounting the published timing tables follow.
    #[default]
    TableConsistent,
    /// `2(N − 1)` hops: forward and reverse around the leaders, as the
    /// leader-ring formula is written.
    EquationLiteral,
}

impl TimingMode {
    pub fn leader_hops(self, columns: u32) -> u64 {
        let one_way = u64::from(columns) - 1;
        match self {
            TimingMode::TableConsistent => one_way,
            TimingMode::EquationLiteral => 2 * one_way,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TimingMode::TableConsistent => "table_consistent",
            TimingMode::EquationLiteral => "equation_literal",
        }
    }
}

impl fmt::Display for TimingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TimingMode {
    type Err = TimingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "table_consistent" => Ok(TimingMode::TableConsistent),
            "equation_literal" => Ok(TimingMode::EquationLiteral),
            _ => Err(TimingError::UnknownMode(s.to_string())),
        }
    }
}

/// Component times of one neighborhood-wide update, in abstract units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UpdateTiming {
    /// Slowest cluster's forward pass, doubled for the return trip.
    pub t_c: u64,
    /// Leader ring.
    pub t_cl: u64,
    /// Slowest cluster's redistribution pass.
    pub t_c_prime: u64,
    pub t_u: u64,
}

impl UpdateTiming {
    pub fn new(t_c: u64, t_cl: u64, t_c_prime: u64) -> UpdateTiming {
        UpdateTiming {
            t_c,
            t_cl,
            t_c_prime,
            t_u: t_c + t_cl + t_c_prime,
        }
    }
}

/// One trial with the per-cluster sums it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialDetail {
    pub timing: UpdateTiming,
    pub forward_sums: Vec<u64>,
    pub redistribute_sums: Vec<u64>,
}

/// Draws one realization of the update time.
///
/// Each cluster sums `rows` fresh hop delays; `t_c` is twice the largest
/// sum, since the return trip reuses the outbound draws. The leader ring
/// sums its own hops according to `mode`, and `t_c'` is the largest of a
/// fresh set of per-cluster sums.
pub fn simulate_once<H: HopSource>(dims: HopsArrayDims, hops: &mut H, mode: TimingMode) -> UpdateTiming {
    simulate_detailed(dims, hops, mode).timing
}

pub fn simulate_detailed<H: HopSource>(dims: HopsArrayDims, hops: &mut H, mode: TimingMode) -> TrialDetail {
    let cluster_sums = |hops: &mut H| -> Vec<u64> {
        (0..dims.columns)
            .map(|_| (0..dims.rows).map(|_| hops.next_hop()).sum())
            .collect()
    };
    let forward_sums = cluster_sums(hops);
    let t_cl = (0..mode.leader_hops(dims.columns)).map(|_| hops.next_hop()).sum();
    let redistribute_sums = cluster_sums(hops);
    let t_c = 2 * forward_sums.iter().copied().max().unwrap_or(0);
    let t_c_prime = redistribute_sums.iter().copied().max().unwrap_or(0);
    TrialDetail {
        timing: UpdateTiming::new(t_c, t_cl, t_c_prime),
        forward_sums,
        redistribute_sums,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::{FixedHop, RandomStream};

    #[test]
    fn degenerate_single_hop() {
        let dims = HopsArrayDims::new(1, 1).unwrap();
        let t = simulate_once(dims, &mut FixedHop(5), TimingMode::TableConsistent);
        assert_eq!(
            t,
            UpdateTiming {
                t_c: 10,
                t_cl: 0,
                t_c_prime: 5,
                t_u: 15
            }
        );
    }

    #[test]
    fn fixed_hops_closed_form() {
        let dims = HopsArrayDims::new(8, 32).unwrap();
        let t = simulate_once(dims, &mut FixedHop(2), TimingMode::TableConsistent);
        assert_eq!((t.t_c, t.t_cl, t.t_c_prime), (32, 62, 16));
        let t = simulate_once(dims, &mut FixedHop(2), TimingMode::EquationLiteral);
        assert_eq!(t.t_cl, 124);
    }

    #[test]
    fn dims_validation() {
        assert!(HopsArrayDims::new(0, 4).is_err());
        assert!(HopsArrayDims::new(4, 0).is_err());
        let d = HopsArrayDims::new(8, 32).unwrap();
        assert_eq!(d.total_hops(), 256);
        assert_eq!(d.ratio(), 0.25);
        assert_eq!(d.to_string(), "8/32");
    }

    #[test]
    fn mode_tokens() {
        assert_eq!(
            "table_consistent".parse::<TimingMode>().unwrap(),
            TimingMode::TableConsistent
        );
        assert_eq!(
            "equation-literal".parse::<TimingMode>().unwrap(),
            TimingMode::EquationLiteral
        );
        assert!("both".parse::<TimingMode>().is_err());
        assert_eq!(TimingMode::default(), TimingMode::TableConsistent);
    }

    #[test]
    fn per_trial_invariants() {
        let mut s = RandomStream::derive(1, "inv");
        for (rows, cols) in [(1, 1), (4, 64), (16, 16), (64, 4)] {
            let dims = HopsArrayDims::new(rows, cols).unwrap();
            for _ in 0..200 {
                let d = simulate_detailed(dims, &mut s, TimingMode::TableConsistent);
                let t = d.timing;
                assert_eq!(t.t_u, t.t_c + t.t_cl + t.t_c_prime);
                let max_fwd = *d.forward_sums.iter().max().unwrap();
                assert!(d.forward_sums.iter().all(|&s| 2 * s <= t.t_c));
                assert_eq!(2 * max_fwd, t.t_c);
                assert!(d.redistribute_sums.iter().all(|&s| s <= t.t_c_prime));
                let r = u64::from(rows);
                assert!(d.forward_sums.iter().all(|&s| (r..=10 * r).contains(&s)));
                let l = u64::from(cols) - 1;
                assert!((l..=10 * l).contains(&t.t_cl));
            }
        }
    }
}
