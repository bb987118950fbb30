use clap::Subcommand;
use nbhood::timing::{factor_pairs, figure9_curve, find_optimum, report, sweep, TimingError, TABLE_TOTALS};

use crate::{Failure, Format, Output, RunConfig};

#[derive(Subcommand, Debug)]
pub enum TimingCommand {
    /// All four published configurations: 256, 512, 1024 and 2048 hops
    Tables,
    /// Every power-of-two shape of one total
    Sweep {
        #[arg(long)]
        total: u64,
        /// Add 0.5/99.5 percentile bands to the CSV
        #[arg(long)]
        percentiles: bool,
    },
    /// Best shape per total, in units and milliseconds
    Optimum,
    /// Optimal update time against neighborhood size
    Figure9 {
        #[arg(long, value_delimiter = ',', default_values_t = TABLE_TOTALS)]
        totals: Vec<u64>,
    },
}

fn fail(e: TimingError) -> Failure {
    Failure::new(2, e.to_string())
}

pub fn run(cmd: &TimingCommand, cfg: &RunConfig) -> Result<Output, Failure> {
    let trials = cfg.trials as usize;
    let format = cfg.format.unwrap_or(Format::Csv);
    let text = match cmd {
        TimingCommand::Tables => {
            let mut out = String::new();
            for (i, total) in TABLE_TOTALS.into_iter().enumerate() {
                let rows =
                    sweep(total, &factor_pairs(total).map_err(fail)?, trials, cfg.seed, cfg.mode).map_err(fail)?;
                if i > 0 {
                    out.push('\n');
                }
                match format {
                    Format::Csv => {
                        out.push_str(&format!("# {total} hops\n"));
                        out.push_str(&report::sweep_csv_percentiles(&rows));
                    }
                    Format::PlotData => {
                        out.push_str(&format!("# {total} hops\n"));
                        out.push_str(&report::sweep_plot_data(&rows));
                    }
                    Format::Table => out.push_str(&report::sweep_table(total, &rows)),
                }
            }
            out
        }
        TimingCommand::Sweep { total, percentiles } => {
            let rows = sweep(*total, &factor_pairs(*total).map_err(fail)?, trials, cfg.seed, cfg.mode).map_err(fail)?;
            match (format, percentiles) {
                (Format::Csv, false) => report::sweep_csv(&rows),
                (Format::Csv, true) => report::sweep_csv_percentiles(&rows),
                (Format::PlotData, _) => report::sweep_plot_data(&rows),
                (Format::Table, _) => report::sweep_table(*total, &rows),
            }
        }
        TimingCommand::Optimum => {
            let optima = TABLE_TOTALS
                .into_iter()
                .map(|t| find_optimum(t, trials, cfg.seed, cfg.mode))
                .collect::<Result<Vec<_>, _>>()
                .map_err(fail)?;
            match format {
                Format::Csv => report::optimum_csv(&optima),
                Format::PlotData => {
                    let mut s = String::from("# total_hops T_u_ms\n");
                    for o in &optima {
                        s.push_str(&format!("{} {}\n", o.total, o.ms()));
                    }
                    s
                }
                Format::Table => report::optimum_table(&optima),
            }
        }
        TimingCommand::Figure9 { totals } => {
            let points = figure9_curve(totals, trials, cfg.seed, cfg.mode).map_err(fail)?;
            match format {
                Format::Csv => report::figure9_csv(&points),
                Format::PlotData => report::figure9_plot_data(&points),
                Format::Table => report::figure9_table(&points),
            }
        }
    };
    Ok(Output { text, ok: true })
}
