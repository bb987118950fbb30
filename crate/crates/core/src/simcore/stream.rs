use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::time::VirtualTime;

/// Identifies one independent random stream under a master seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StreamId(pub u64);

impl StreamId {
    /// Stable 64-bit FNV-1a hash of a derivation label. Stable across
    /// platforms and toolchains, unlike `DefaultHasher`.
    pub fn from_label(label: &str) -> StreamId {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let hash = label
            .bytes()
            .fold(OFFSET, |h, b| (h ^ u64::from(b)).wrapping_mul(PRIME));
        StreamId(hash)
    }
}

/// Hop-delay bounds and the real-time caps they are calibrated against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatencyModel {
    pub hop_low: u64,
    pub hop_high: u64,
    pub local_cap_ms: u64,
    pub regional_cap_ms: u64,
}

impl Default for LatencyModel {
    fn default() -> Self {
        LatencyModel {
            hop_low: 1,
            hop_high: 10,
            local_cap_ms: 10,
            regional_cap_ms: 500,
        }
    }
}

impl LatencyModel {
    /// Milliseconds per unit obtained by pinning the slowest hop to the
    /// regional delay cap.
    pub fn ms_per_unit(&self) -> u64 {
        self.regional_cap_ms / self.hop_high
    }

    pub fn mean_hop(&self) -> f64 {
        (self.hop_low + self.hop_high) as f64 / 2.0
    }

    pub fn is_valid(&self) -> bool {
        1 <= self.hop_low && self.hop_low <= self.hop_high && self.local_cap_ms <= self.regional_cap_ms
    }
}

/// A reproducible pseudorandom stream: `(seed, stream id)` fully determines
/// the sequence.
#[derive(Clone, Debug)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream: StreamId) -> RandomStream {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream.0);
        RandomStream { rng }
    }

    pub fn derive(seed: u64, label: &str) -> RandomStream {
        RandomStream::new(seed, StreamId::from_label(label))
    }

    /// Uniform integer in `low..=high`.
    pub fn uniform(&mut self, low: u64, high: u64) -> u64 {
        self.rng.random_range(low..=high)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn unit_f64(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

/// Draws one hop delay, uniform over the default model's `{1, …, 10}`.
pub fn sample_hop_delay(stream: &mut RandomStream) -> VirtualTime {
    sample_hop_delay_with(stream, &LatencyModel::default())
}

pub fn sample_hop_delay_with(stream: &mut RandomStream, model: &LatencyModel) -> VirtualTime {
    VirtualTime(stream.uniform(model.hop_low, model.hop_high))
}

/// Anything that yields a sequence of hop delays in units.
pub trait HopSource {
    fn next_hop(&mut self) -> u64;
}

impl HopSource for RandomStream {
    fn next_hop(&mut self) -> u64 {
        sample_hop_delay(self).0
    }
}

/// Every hop takes the same fixed time. Useful for degenerate cases and
/// hand-checkable traces.
#[derive(Clone, Copy, Debug)]
pub struct FixedHop(pub u64);

impl HopSource for FixedHop {
    fn next_hop(&mut self) -> u64 {
        self.0
    }
}
