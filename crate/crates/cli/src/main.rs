//! `defects`: batch verification, amplitude tables, chain spectra and Bethe
//! roots for type-I defects in XXX/XXZ chains.

mod config;
mod output;
mod tables;
mod verify;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use defect_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use config::{Common, Failure, Format, RunConfig};
use tables::{Family, SignArg};

#[derive(Debug, Parser)]
#[command(name = "defects", version, about = "Integrable defects in XXX/XXZ spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the identity suite; exit status 1 if any record fails.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate transmission amplitudes on the grid.
    Amplitude {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "soliton")]
        family: Family,
        /// Breather order n.
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Eigenvalues of the transfer matrix at each grid point, by charge sector.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Number of bulk sites N.
        #[arg(long, default_value_t = 2)]
        sites: usize,
        /// 1-based position of the defect among the N+1 sites.
        #[arg(long, default_value_t = 1)]
        defect_site: usize,
    },
    /// Solve or evaluate the Bethe equations.
    Bae {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        sites: usize,
        #[arg(long, value_enum, default_value = "plus")]
        sign: SignArg,
        /// Starting root as re,im; repeat for several roots.
        #[arg(long = "init", value_parser = tables::parse_complex, allow_hyphen_values = true)]
        init: Vec<C64>,
        /// Evaluate the residual at the given roots without solving.
        #[arg(long)]
        eval: bool,
    },
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Verify { common } => {
            let cfg = RunConfig::new("verify", &common, Format::Jsonl)?;
            let records = verify::run(&cfg);
            output::write_rows(&cfg, &cfg.header(verify::header_extra(cfg.seed)), &records)?;
            Ok(records.iter().all(|r| r.pass))
        }
        Command::Amplitude { common, family, order } => {
            let cfg = RunConfig::new("amplitude", &common, Format::Csv)?;
            let table = tables::amplitude_table(&cfg, family, order)?;
            let tol = cfg.tol_or(tables::route_tolerance(&cfg.params, family, order));
            let mut extra = BTreeMap::new();
            extra.insert("order".into(), order as f64);
            extra.insert("discrepancy_tol".into(), tol);
            let header = cfg.header(extra);
            match &table {
                tables::AmplitudeTable::Pair(rows) => output::write_rows(&cfg, &header, rows)?,
                tables::AmplitudeTable::Scalar(rows) => output::write_rows(&cfg, &header, rows)?,
            }
            Ok(table.worst_discrepancy() < tol)
        }
        Command::Spectrum { common, sites, defect_site } => {
            let cfg = RunConfig::new("spectrum", &common, Format::Csv)?;
            let lambda2 = ChaCha8Rng::seed_from_u64(cfg.seed).random_range(-1.5..1.5);
            let rows = tables::spectrum_table(&cfg, sites, defect_site, lambda2)?;
            let mut extra = BTreeMap::new();
            extra.insert("sites".into(), sites as f64);
            extra.insert("defect_site".into(), defect_site as f64);
            extra.insert("lambda2".into(), lambda2);
            output::write_rows(&cfg, &cfg.header(extra), &rows)?;
            let tol = cfg.tol_or(1e-10);
            Ok(rows.iter().all(|r| r.reference_residual < tol))
        }
        Command::Bae {
            common,
            sites,
            sign,
            init,
            eval,
        } => {
            let cfg = RunConfig::new("bae", &common, Format::Csv)?;
            let tol = cfg.tol_or(1e-10);
            let init = if init.is_empty() { vec![C64::new(0.2, -0.3)] } else { init };
            let rows = tables::bae_table(&cfg, sites, sign.into(), &init, eval, tol)?;
            let mut extra = BTreeMap::new();
            extra.insert("sites".into(), sites as f64);
            extra.insert("sign".into(), defect_core::lax::Sign::from(sign).factor());
            output::write_rows(&cfg, &cfg.header(extra), &rows)?;
            Ok(rows.iter().all(|r| r.residual_abs < tol))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("defects: {e}");
            ExitCode::from(match e {
                Failure::Usage(_) => 2,
                Failure::Runtime(_) => 1,
            })
        }
    }
}
