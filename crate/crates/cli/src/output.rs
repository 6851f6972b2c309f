use std::io::Write;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::settings::{Format, Settings};

/// JSON gets the whole report; CSV gets its rows.
pub fn emit<R: Serialize, T: Serialize>(s: &Settings, report: &R, rows: &[T]) -> Result<()> {
    let bytes = match s.format {
        Format::Json => {
            let mut b = serde_json::to_vec_pretty(report)?;
            b.push(b'\n');
            b
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r)?;
            }
            w.into_inner().context("flushing CSV")?
        }
    };
    match &s.out {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}
