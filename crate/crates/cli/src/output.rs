use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;

use crate::config::{Failure, Format, Header, RunConfig};

fn sink(cfg: &RunConfig) -> io::Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes the header and the rows. CSV carries the header as a leading
/// `# {json}` comment line; JSONL as a `{"header": ..}` record.
pub fn write_rows<R: Serialize>(cfg: &RunConfig, header: &Header, rows: &[R]) -> Result<(), Failure> {
    let mut w = sink(cfg)?;
    let head = serde_json::to_string(header).map_err(|e| Failure::Runtime(e.to_string()))?;
    match cfg.format {
        Format::Jsonl => {
            writeln!(w, "{{\"header\":{head}}}")?;
            for r in rows {
                let line = serde_json::to_string(r).map_err(|e| Failure::Runtime(e.to_string()))?;
                writeln!(w, "{line}")?;
            }
        }
        Format::Csv => {
            writeln!(w, "# {head}")?;
            let mut csv = csv::Writer::from_writer(&mut w);
            for r in rows {
                csv.serialize(r).map_err(|e| Failure::Runtime(e.to_string()))?;
            }
            csv.flush()?;
        }
    }
    w.flush()?;
    Ok(())
}
