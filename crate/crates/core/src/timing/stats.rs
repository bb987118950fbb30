/// Summary of one timing component across Monte Carlo trials.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentStats {
    pub mean: f64,
    /// Sample standard deviation (zero for a single trial).
    pub std_dev: f64,
    pub p_low: u64,
    pub p_high: u64,
    pub min: u64,
    pub max: u64,
}

/// Lower and upper band edges reported by [`ComponentStats::from_samples`].
pub const BAND_LOW: f64 = 0.005;
pub const BAND_HIGH: f64 = 0.995;

impl ComponentStats {
    /// Panics on an empty slice.
    pub fn from_samples(samples: &[u64]) -> ComponentStats {
        assert!(!samples.is_empty(), "no samples");
        let n = samples.len() as f64;
        let mean = samples.iter().map(|&x| x as f64).sum::<f64>() / n;
        let std_dev = if samples.len() < 2 {
            0.0
        } else {
            let ss: f64 = samples.iter().map(|&x| (x as f64 - mean).powi(2)).sum();
            (ss / (n - 1.0)).sqrt()
        };
        let mut sorted = samples.to_vec();
        sorted.sort_unstable();
        ComponentStats {
            mean,
            std_dev,
            p_low: percentile(&sorted, BAND_LOW),
            p_high: percentile(&sorted, BAND_HIGH),
            min: sorted[0],
            max: sorted[sorted.len() - 1],
        }
    }

    pub fn band_contains(&self, value: u64) -> bool {
        (self.p_low..=self.p_high).contains(&value)
    }
}

/// Nearest-rank percentile of an ascending slice: the smallest value with
/// at least `p` of the samples at or below it.
pub fn percentile(sorted: &[u64], p: f64) -> u64 {
    assert!(!sorted.is_empty(), "no samples");
    let rank = (p * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}
