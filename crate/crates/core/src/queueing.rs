//! Closed-form M/M/1 metrics for a node's message queue, and the load a
//! naive all-to-all broadcast puts on each client link.

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum QueueingError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("unstable queue: utilization {0} is not below 1, waiting time grows without bound")]
    Unstable(f64),
    #[error("utilization {0} is outside [0, 1)")]
    Domain(f64),
    #[error("a broadcast needs at least 2 clients, got {0}")]
    TooFewClients(u64),
}

/// How messages arrive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Arrival {
    /// Mean interarrival time `G`, seconds.
    Interarrival(f64),
    /// Arrival rate `A`, messages per second.
    Rate(f64),
}

/// How long one message takes to serve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Service {
    /// Message length `L` in bits over a link of `B` bits per second.
    Link { message_bits: f64, link_bps: f64 },
    /// Service time `S` in seconds.
    Time(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MmOneInputs {
    pub arrival: Arrival,
    pub service: Service,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MmOneMetrics {
    /// Arrivals per second.
    pub a: f64,
    /// Service time, seconds.
    pub s: f64,
    /// Departures per second, `1 / S`.
    pub d: f64,
    /// Utilization `A / D`.
    pub u: f64,
    /// Time spent waiting before service, seconds.
    pub t_w: f64,
    /// Total time in the system, `S + T_w`.
    pub t: f64,
    /// Mean messages in the system, `A · T`.
    pub n: f64,
    /// Mean messages waiting, `A · T_w`.
    pub q: f64,
}

impl MmOneMetrics {
    /// Probability of `k` messages in the system.
    pub fn p(&self, k: u32) -> f64 {
        (1.0 - self.u) * self.u.powi(k as i32)
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64, QueueingError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(QueueingError::NonPositive { name, value })
    }
}

pub fn mm1_metrics(inputs: &MmOneInputs) -> Result<MmOneMetrics, QueueingError> {
    let a = match inputs.arrival {
        Arrival::Interarrival(g) => 1.0 / positive("G", g)?,
        Arrival::Rate(a) => positive("A", a)?,
    };
    let s = match inputs.service {
        Service::Link { message_bits, link_bps } => positive("L", message_bits)? / positive("B", link_bps)?,
        Service::Time(s) => positive("S", s)?,
    };
    let d = 1.0 / s;
    let u = a / d;
    if u >= 1.0 {
        return Err(QueueingError::Unstable(u));
    }
    let t_w = u * s / (1.0 - u);
    let t = s + t_w;
    Ok(MmOneMetrics {
        a,
        s,
        d,
        u,
        t_w,
        t,
        n: a * t,
        q: a * t_w,
    })
}

/// `(1 − U) · U^k`.
pub fn state_probability(u: f64, k: u32) -> Result<f64, QueueingError> {
    if !(0.0..1.0).contains(&u) {
        return Err(QueueingError::Domain(u));
    }
    Ok((1.0 - u) * u.powi(k as i32))
}

/// Bits per second arriving at each client when every one of `clients`
/// sends `payload_bytes` to all the others once per `interval_s`.
pub fn naive_broadcast_load(clients: u64, payload_bytes: u64, interval_s: f64) -> Result<f64, QueueingError> {
    if clients < 2 {
        return Err(QueueingError::TooFewClients(clients));
    }
    let interval = positive("interval", interval_s)?;
    Ok((clients - 1) as f64 * payload_bytes as f64 * 8.0 / interval)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    fn rate(u: f64) -> MmOneMetrics {
        mm1_metrics(&MmOneInputs {
            arrival: Arrival::Rate(u),
            service: Service::Time(1.0),
        })
        .unwrap()
    }

    #[test]
    fn worked_example() {
        let m = mm1_metrics(&MmOneInputs {
            arrival: Arrival::Interarrival(2.0),
            service: Service::Link {
                message_bits: 8000.0,
                link_bps: 16000.0,
            },
        })
        .unwrap();
        assert_eq!((m.a, m.s, m.d, m.u), (0.5, 0.5, 2.0, 0.25));
        assert!(close(m.t_w, 1.0 / 6.0));
        assert!(close(m.t, 2.0 / 3.0));
        assert!(close(m.n, 1.0 / 3.0));
        assert!(close(m.q, 1.0 / 12.0));
    }

    #[test]
    fn half_utilization() {
        let m = rate(0.5);
        assert_eq!((m.t, m.n, m.q), (2.0, 1.0, 0.5));
        assert_eq!((m.p(0), m.p(1)), (0.5, 0.25));
    }

    #[test]
    fn closed_forms_agree() {
        for u in [0.01, 0.1, 0.5, 0.9, 0.99] {
            let m = rate(u);
            assert!(close(m.t, m.s / (1.0 - u)));
            assert!(close(m.n, u / (1.0 - u)));
            assert!(close(m.n, m.a * m.s / (1.0 - u)));
            assert!(close(m.q, u * u / (1.0 - u)));
        }
    }

    #[test]
    fn light_load_barely_waits() {
        assert!(rate(1e-9).t_w < 1e-8);
    }

    #[test]
    fn instability_and_domain() {
        assert_eq!(
            mm1_metrics(&MmOneInputs {
                arrival: Arrival::Rate(2.0),
                service: Service::Time(0.5),
            }),
            Err(QueueingError::Unstable(1.0))
        );
        assert!(matches!(
            mm1_metrics(&MmOneInputs {
                arrival: Arrival::Interarrival(0.0),
                service: Service::Time(1.0),
            }),
            Err(QueueingError::NonPositive { name: "G", .. })
        ));
        assert_eq!(state_probability(0.0, 0), Ok(1.0));
        assert_eq!(state_probability(0.0, 3), Ok(0.0));
        assert_eq!(state_probability(1.0, 0), Err(QueueingError::Domain(1.0)));
        assert!(state_probability(-0.1, 0).is_err());
    }

    #[test]
    fn broadcast_load() {
        assert_eq!(naive_broadcast_load(256, 64, 1.0), Ok(130_560.0));
        assert_eq!(naive_broadcast_load(2, 64, 1.0), Ok(512.0));
        assert!(naive_broadcast_load(256, 64, 1.0).unwrap() > 56_000.0);
        assert_eq!(naive_broadcast_load(1, 64, 1.0), Err(QueueingError::TooFewClients(1)));
    }
}
