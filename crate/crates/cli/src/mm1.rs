use std::fmt::Write;

use clap::Args;
use nbhood::queueing::{mm1_metrics, naive_broadcast_load, Arrival, MmOneInputs, QueueingError, Service};

use crate::{Failure, Format, Output, RunConfig};

/// Typical dial-up link, for the broadcast comparison.
const MODEM_BPS: f64 = 56_000.0;

#[derive(Args, Debug)]
pub struct Mm1Args {
    /// Mean interarrival time G, seconds
    #[arg(long, conflicts_with = "a")]
    g: Option<f64>,
    /// Arrival rate A, messages per second
    #[arg(long)]
    a: Option<f64>,
    /// Message length L, bits
    #[arg(long, requires = "b", conflicts_with = "s")]
    l: Option<f64>,
    /// Link speed B, bits per second
    #[arg(long, requires = "l")]
    b: Option<f64>,
    /// Service time S, seconds
    #[arg(long)]
    s: Option<f64>,
    /// Print how many P_k terms
    #[arg(long, default_value_t = 5)]
    states: u32,

    /// Compute the all-to-all broadcast load instead
    #[arg(long, conflicts_with_all = ["g", "a", "l", "b", "s"])]
    broadcast: bool,
    #[arg(long, requires = "broadcast", default_value_t = 256)]
    clients: u64,
    /// Payload per message, bytes
    #[arg(long, requires = "broadcast", default_value_t = 64)]
    bytes: u64,
    /// Seconds between each client's broadcasts
    #[arg(long, requires = "broadcast", default_value_t = 1.0)]
    interval: f64,
}

fn fail(e: QueueingError) -> Failure {
    Failure::new(2, e.to_string())
}

pub fn run(args: &Mm1Args, cfg: &RunConfig) -> Result<Output, Failure> {
    let format = cfg.format.unwrap_or(Format::Table);
    if args.broadcast {
        let load = naive_broadcast_load(args.clients, args.bytes, args.interval).map_err(fail)?;
        let text = match format {
            Format::Table => format!(
                "clients  = {}\npayload  = {} bytes every {} s\nload     = {load} bits/s per client interface\nmodem    = {MODEM_BPS} bits/s ({})\n",
                args.clients,
                args.bytes,
                args.interval,
                if load > MODEM_BPS { "saturated" } else { "within capacity" }
            ),
            Format::Csv | Format::PlotData => format!("clients,bytes,interval_s,load_bps\n{},{},{},{load}\n", args.clients, args.bytes, args.interval),
        };
        return Ok(Output { text, ok: true });
    }

    let arrival = match (args.g, args.a) {
        (Some(g), _) => Arrival::Interarrival(g),
        (None, Some(a)) => Arrival::Rate(a),
        (None, None) => return Err(Failure::new(2, "give --g or --a")),
    };
    let service = match (args.l, args.b, args.s) {
        (Some(l), Some(b), _) => Service::Link {
            message_bits: l,
            link_bps: b,
        },
        (_, _, Some(s)) => Service::Time(s),
        _ => return Err(Failure::new(2, "give --l and --b, or --s")),
    };
    let m = mm1_metrics(&MmOneInputs { arrival, service }).map_err(fail)?;
    let mut text = String::new();
    match format {
        Format::Table => {
            let rows = [
                ("A", m.a, " messages/s"),
                ("S", m.s, " s"),
                ("D", m.d, " messages/s"),
                ("U", m.u, ""),
                ("T_w", m.t_w, " s"),
                ("T", m.t, " s"),
                ("N", m.n, ""),
                ("Q", m.q, ""),
            ];
            for (name, v, unit) in rows {
                writeln!(text, "{name:<4}= {v:.4}{unit}").unwrap();
            }
            for k in 0..args.states {
                writeln!(text, "P_{k:<2}= {:.4}", m.p(k)).unwrap();
            }
        }
        Format::Csv | Format::PlotData => {
            text.push_str("A,S,D,U,T_w,T,N,Q\n");
            writeln!(
                text,
                "{},{},{},{},{},{},{},{}",
                m.a, m.s, m.d, m.u, m.t_w, m.t, m.n, m.q
            )
            .unwrap();
        }
    }
    Ok(Output { text, ok: true })
}
