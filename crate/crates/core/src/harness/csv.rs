//! CSV writers. Every file starts with `#` metadata lines (command, seed,
//! seed derivation, configuration echo, column list) above the header row.

use std::io::{self, Write};

use super::experiment::{ComplexityRow, CrlbRow, ProfileRun, RmseRow};

pub const RMSE_COLUMNS: &str = "method,snr_db,n_snapshots,k_left,rmse_deg,n_trials,failures,crlb_deg";
pub const PROFILE_COLUMNS: &str =
    "theta0_deg,snr_db,sector_index,sector_angle_deg,mean_power,is_peak,peak_hits,n_trials";
pub const COMPLEXITY_COLUMNS: &str =
    "n_antennas,subarray_size,n_subarrays,n_snapshots,method,flops,flops_exact";
pub const CRLB_COLUMNS: &str = "receiver,k_left,snr_db,n_snapshots,crlb_deg";

/// Metadata lines written above the header, without the leading `#`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metadata {
    pub lines: Vec<String>,
}

impl Metadata {
    pub fn new(command: &str) -> Self {
        Self {
            lines: vec![format!("hybrid-doa {command}")],
        }
    }

    pub fn push(&mut self, line: impl Into<String>) -> &mut Self {
        self.lines.push(line.into());
        self
    }

    fn write(&self, out: &mut impl Write, columns: &str) -> io::Result<()> {
        for line in &self.lines {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "# columns: {columns}")?;
        writeln!(out, "{columns}")
    }
}

pub fn write_rmse(out: &mut impl Write, meta: &Metadata, rows: &[RmseRow]) -> io::Result<()> {
    meta.write(out, RMSE_COLUMNS)?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.method.name(),
            r.snr_db,
            r.n_snapshots,
            r.k_left,
            r.rmse_deg,
            r.n_trials,
            r.failures,
            r.crlb_deg
        )?;
    }
    Ok(())
}

pub fn write_profiles(out: &mut impl Write, meta: &Metadata, runs: &[ProfileRun]) -> io::Result<()> {
    meta.write(out, PROFILE_COLUMNS)?;
    for run in runs {
        let peak = run.peak_index();
        for (k, (a, p)) in run.sector_angles.iter().zip(&run.mean_powers).enumerate() {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                run.theta0_deg,
                run.snr_db,
                k,
                a.to_degrees(),
                p,
                u8::from(k == peak),
                run.peak_hits,
                run.n_trials
            )?;
        }
    }
    Ok(())
}

pub fn write_complexity(out: &mut impl Write, meta: &Metadata, rows: &[ComplexityRow]) -> io::Result<()> {
    meta.write(out, COMPLEXITY_COLUMNS)?;
    for r in rows {
        let exact = if r.flops.denom == 1 {
            r.flops.numer.to_string()
        } else {
            format!("{}/{}", r.flops.numer, r.flops.denom)
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n_antennas,
            r.subarray_size,
            r.n_subarrays,
            r.n_snapshots,
            r.method.name(),
            r.flops.to_f64(),
            exact
        )?;
    }
    Ok(())
}

pub fn write_crlb(out: &mut impl Write, meta: &Metadata, rows: &[CrlbRow]) -> io::Result<()> {
    meta.write(out, CRLB_COLUMNS)?;
    for r in rows {
        let receiver = if r.k_left == 0 { "sectors" } else { "hybrid" };
        writeln!(
            out,
            "{},{},{},{},{}",
            receiver, r.k_left, r.snr_db, r.n_snapshots, r.crlb_deg
        )?;
    }
    Ok(())
}
