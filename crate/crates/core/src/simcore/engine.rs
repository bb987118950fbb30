use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use super::stream::{sample_hop_delay_with, LatencyModel, RandomStream};
use super::time::VirtualTime;
use crate::topology::NodeAddress;

/// What happens when an event fires.
#[derive(Clone, Debug, PartialEq)]
pub enum EventKind<M> {
    Deliver { from: NodeAddress, msg: M },
    NodeUp,
    NodeDown,
    Timer(M),
    Beacon { from: NodeAddress },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimEvent<M> {
    pub at: VirtualTime,
    pub seq: u64,
    pub target: NodeAddress,
    pub kind: EventKind<M>,
}

// Heap entry ordered on (at, seq) only, reversed for a min-heap.
struct Queued<M>(SimEvent<M>);

impl<M> PartialEq for Queued<M> {
    fn eq(&self, other: &Self) -> bool {
        (self.0.at, self.0.seq) == (other.0.at, other.0.seq)
    }
}

impl<M> Eq for Queued<M> {}

impl<M> PartialOrd for Queued<M> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<M> Ord for Queued<M> {
    fn cmp(&self, other: &Self) -> Ordering {
        (other.0.at, other.0.seq).cmp(&(self.0.at, self.0.seq))
    }
}

/// Source of per-hop delays keyed by the sending node.
pub trait DelaySource {
    fn delay_from(&mut self, from: NodeAddress) -> VirtualTime;
}

impl DelaySource for super::stream::FixedHop {
    fn delay_from(&mut self, _from: NodeAddress) -> VirtualTime {
        VirtualTime(self.0)
    }
}

/// One shared stream for every sender, for callers outside the engine.
impl DelaySource for super::stream::RandomStream {
    fn delay_from(&mut self, _from: NodeAddress) -> VirtualTime {
        super::stream::sample_hop_delay(self)
    }
}

/// Reacts to events popped off the engine's queue.
pub trait Handler<M> {
    fn handle(&mut self, event: SimEvent<M>, engine: &mut Engine<M>);
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub processed: u64,
    pub pending: usize,
    /// Events remained beyond the horizon when the loop stopped.
    pub truncated: bool,
}

/// Single-threaded discrete-event loop with a virtual clock.
///
/// Events fire in `(at, seq)` order; `seq` is the insertion counter, so
/// simultaneous events run in the order they were scheduled. Message delays
/// are drawn from a per-sender stream derived from the master seed, which
/// keeps one node's draws independent of how many messages others send.
pub struct Engine<M> {
    now: VirtualTime,
    next_seq: u64,
    queue: BinaryHeap<Queued<M>>,
    seed: u64,
    latency: LatencyModel,
    streams: BTreeMap<NodeAddress, RandomStream>,
    processed: u64,
}

impl<M> fmt::Debug for Engine<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("now", &self.now)
            .field("pending", &self.queue.len())
            .field("seed", &self.seed)
            .finish()
    }
}

impl<M> Engine<M> {
    pub fn new(seed: u64) -> Engine<M> {
        Engine::with_latency(seed, LatencyModel::default())
    }

    pub fn with_latency(seed: u64, latency: LatencyModel) -> Engine<M> {
        assert!(latency.is_valid(), "invalid latency model {latency:?}");
        Engine {
            now: VirtualTime::ZERO,
            next_seq: 0,
            queue: BinaryHeap::new(),
            seed,
            latency,
            streams: BTreeMap::new(),
            processed: 0,
        }
    }

    pub fn now(&self) -> VirtualTime {
        self.now
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn latency(&self) -> &LatencyModel {
        &self.latency
    }

    pub fn pending(&self) -> usize {
        self.queue.len()
    }

    pub fn is_idle(&self) -> bool {
        self.queue.is_empty()
    }

    /// Queues an event and returns its sequence number.
    ///
    /// Panics if `at` lies in the past; the clock never runs backwards.
    pub fn schedule(&mut self, at: VirtualTime, target: NodeAddress, kind: EventKind<M>) -> u64 {
        assert!(at >= self.now, "event scheduled at {at} before now {}", self.now);
        let seq = self.next_seq;
        self.next_seq += 1;
        self.queue.push(Queued(SimEvent { at, seq, target, kind }));
        seq
    }

    pub fn schedule_in(&mut self, delay: VirtualTime, target: NodeAddress, kind: EventKind<M>) -> u64 {
        self.schedule(self.now + delay, target, kind)
    }

    /// Draws the next hop delay from `from`'s stream.
    pub fn hop_delay(&mut self, from: NodeAddress) -> VirtualTime {
        let seed = self.seed;
        let stream = self
            .streams
            .entry(from)
            .or_insert_with(|| RandomStream::derive(seed, &format!("node/{from}")));
        sample_hop_delay_with(stream, &self.latency)
    }

    /// Sends `msg` from `from` to `to`; it arrives one sampled hop later.
    /// Returns the delivery time.
    pub fn send(&mut self, from: NodeAddress, to: NodeAddress, msg: M) -> VirtualTime {
        let at = self.now + self.hop_delay(from);
        self.schedule(at, to, EventKind::Deliver { from, msg });
        at
    }

    /// Removes the next event and advances the clock to it.
    pub fn pop(&mut self) -> Option<SimEvent<M>> {
        let Queued(event) = self.queue.pop()?;
        debug_assert!(event.at >= self.now);
        self.now = event.at;
        self.processed += 1;
        Some(event)
    }

    fn peek_time(&self) -> Option<VirtualTime> {
        self.queue.peek().map(|q| q.0.at)
    }

    /// Runs until the queue drains or the next event lies past `horizon`.
    pub fn run<H: Handler<M>>(&mut self, handler: &mut H, horizon: Option<VirtualTime>) -> RunSummary {
        let start = self.processed;
        while let Some(at) = self.peek_time() {
            if horizon.is_some_and(|h| at > h) {
                return RunSummary {
                    processed: self.processed - start,
                    pending: self.queue.len(),
                    truncated: true,
                };
            }
            let event = self.pop().expect("peeked");
            handler.handle(event, self);
        }
        RunSummary {
            processed: self.processed - start,
            pending: 0,
            truncated: false,
        }
    }
}

impl<M> DelaySource for Engine<M> {
    fn delay_from(&mut self, from: NodeAddress) -> VirtualTime {
        self.hop_delay(from)
    }
}

/// One line of a simulation trace.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry<R> {
    pub at: VirtualTime,
    pub record: R,
}

/// Ordered record of what a simulation did.
#[derive(Clone, Debug, PartialEq)]
pub struct EventTrace<R> {
    pub entries: Vec<TraceEntry<R>>,
    pub truncated: bool,
}

impl<R> Default for EventTrace<R> {
    fn default() -> Self {
        EventTrace {
            entries: Vec::new(),
            truncated: false,
        }
    }
}

impl<R> EventTrace<R> {
    pub fn push(&mut self, at: VirtualTime, record: R) {
        debug_assert!(self.entries.last().is_none_or(|e| e.at <= at), "trace went backwards");
        self.entries.push(TraceEntry { at, record });
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &TraceEntry<R>> {
        self.entries.iter()
    }
}
