//! Text renderings of sweep results. Every function returns a `String` so
//! output is byte-stable for a fixed input.

use std::fmt::Write;

use super::stats::ComponentStats;
use super::sweep::{Figure9Point, Optimum, SweepRow};

pub const CSV_HEADER: &str = "rows,columns,t_c,t_cl,t_c_prime,T_u";
pub const CSV_PERCENTILE_HEADER: &str = "rows,columns,trials,\
t_c,t_c_p0.5,t_c_p99.5,t_cl,t_cl_p0.5,t_cl_p99.5,\
t_c_prime,t_c_prime_p0.5,t_c_prime_p99.5,T_u,T_u_p0.5,T_u_p99.5";

fn components(r: &SweepRow) -> [&ComponentStats; 4] {
    [&r.t_c, &r.t_cl, &r.t_c_prime, &r.t_u]
}

/// Means only, three decimals.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        write!(out, "{},{}", r.dims.rows(), r.dims.columns()).unwrap();
        for c in components(r) {
            write!(out, ",{:.3}", c.mean).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Means with the 0.5 and 99.5 percentile band of each component.
pub fn sweep_csv_percentiles(rows: &[SweepRow]) -> String {
    let mut out = format!("{CSV_PERCENTILE_HEADER}\n");
    for r in rows {
        write!(out, "{},{},{}", r.dims.rows(), r.dims.columns(), r.trials).unwrap();
        for c in components(r) {
            write!(out, ",{:.3},{},{}", c.mean, c.p_low, c.p_high).unwrap();
        }
        out.push('\n');
    }
    out
}

/// `ratio  mean T_u` pairs, one per line.
pub fn sweep_plot_data(rows: &[SweepRow]) -> String {
    let mut out = String::from("# rows/columns T_u\n");
    for r in rows {
        writeln!(out, "{} {:.3}", r.dims.ratio(), r.t_u.mean).unwrap();
    }
    out
}

pub fn sweep_table(total: u64, rows: &[SweepRow]) -> String {
    let mut out = format!("{total} hops\n");
    writeln!(
        out,
        "{:<10} {:>10} {:>10} {:>10} {:>10}",
        "rows/cols", "t_c", "t_cl", "t_c'", "T_u"
    )
    .unwrap();
    for r in rows {
        write!(out, "{:<10}", r.dims.to_string()).unwrap();
        for c in components(r) {
            write!(out, " {:>10.1}", c.mean).unwrap();
        }
        out.push('\n');
    }
    out
}

pub const OPTIMUM_CSV_HEADER: &str = "total_hops,rows,columns,ratio,T_u_units,T_u_ms";

/// The real-time view of each optimum: mean `T_u` rounded to whole units,
/// then 50 ms per unit.
pub fn optimum_csv(optima: &[Optimum]) -> String {
    let mut out = format!("{OPTIMUM_CSV_HEADER}\n");
    for o in optima {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            o.total,
            o.dims.rows(),
            o.dims.columns(),
            o.ratio,
            o.units(),
            o.ms()
        )
        .unwrap();
    }
    out
}

pub fn optimum_table(optima: &[Optimum]) -> String {
    let mut out = format!("{:<12} {:<12} {:>8} {:>10}\n", "hops", "optimal", "T_u", "ms");
    for o in optima {
        let shape = format!("{} x {}", o.dims.rows(), o.dims.columns());
        writeln!(out, "{:<12} {:<12} {:>8} {:>10}", o.total, shape, o.units(), o.ms()).unwrap();
    }
    out
}

pub const FIGURE9_CSV_HEADER: &str = "total_hops,rows,columns,T_u_units,T_u_ms";

pub fn figure9_csv(points: &[Figure9Point]) -> String {
    let mut out = format!("{FIGURE9_CSV_HEADER}\n");
    for p in points {
        writeln!(
            out,
            "{},{},{},{:.3},{:.1}",
            p.total,
            p.dims.rows(),
            p.dims.columns(),
            p.mean_units,
            p.ms
        )
        .unwrap();
    }
    out
}

pub fn figure9_plot_data(points: &[Figure9Point]) -> String {
    let mut out = String::from("# total_hops T_u_ms\n");
    for p in points {
        writeln!(out, "{} {:.1}", p.total, p.ms).unwrap();
    }
    out
}

pub fn figure9_table(points: &[Figure9Point]) -> String {
    let mut out = format!("{:<12} {:<12} {:>10} {:>12}\n", "hops", "optimal", "T_u", "ms");
    for p in points {
        let shape = format!("{} x {}", p.dims.rows(), p.dims.columns());
        writeln!(
            out,
            "{:<12} {:<12} {:>10.1} {:>12.1}",
            p.total, shape, p.mean_units, p.ms
        )
        .unwrap();
    }
    out
}
