//! Deterministic discrete-event core: virtual clock, event queue, seeded
//! random streams and the hop-delay model every simulation draws from.

mod engine;
mod stream;
mod time;

pub use engine::{DelaySource, Engine, EventKind, EventTrace, Handler, RunSummary, SimEvent, TraceEntry};
pub use stream::{sample_hop_delay, sample_hop_delay_with, FixedHop, HopSource, LatencyModel, RandomStream, StreamId};
pub use time::{mean_units_to_ms, units_to_ms, VirtualTime, MS_PER_UNIT};
