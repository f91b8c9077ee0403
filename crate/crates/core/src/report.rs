//! CSV and JSON emitters. Floats are written with 12 significant digits.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::model::PeaReport;
use crate::stats::SuccessRateReport;
use crate::tomography::TomographyBatch;
use crate::witness::WitnessScan;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.11e}")
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(out)
}

pub fn write_witness_scan<W: Write>(scan: &WitnessScan, out: W) -> Result<()> {
    write_witness_scans(std::slice::from_ref(scan), out)
}

/// Several scans (typically one per `γ`) in one table.
pub fn write_witness_scans<W: Write>(scans: &[WitnessScan], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["tau_s", "value", "gamma"])?;
    for scan in scans {
        let gamma = fmt_f64(scan.gamma);
        for (t, v) in scan.taus.iter().zip(&scan.values) {
            w.write_record([fmt_f64(*t), fmt_f64(*v), gamma.clone()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_success_rates<W: Write>(report: &SuccessRateReport, out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["total_measurements", "rate", "lambda_min", "trials", "gamma", "d_m"])?;
    for (i, (n, r)) in report.shots_axis.iter().zip(&report.rates).enumerate() {
        let lambda = report.lambda_min_used.get(i).copied().flatten().map(fmt_f64).unwrap_or_default();
        w.write_record([
            n.to_string(),
            fmt_f64(*r),
            lambda,
            report.trials.to_string(),
            fmt_f64(report.gamma),
            fmt_f64(report.separation_d),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_tomography_batches<W: Write>(batches: &[TomographyBatch], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["shots", "hypothesis", "trial", "negativity", "fidelity_to_truth"])?;
    for b in batches {
        for r in &b.records {
            w.write_record([
                b.shots.to_string(),
                r.hypothesis.label().to_string(),
                r.trial.to_string(),
                fmt_f64(r.negativity),
                fmt_f64(r.fidelity_to_truth),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_pea<W: Write>(reports: &[PeaReport], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record([
        "tau_s",
        "theta_magnitude",
        "phase_correction",
        "decoherence_factor_zero_t",
        "decoherence_factor_thermal",
        "zero_t_exponent",
        "thermal_exponent",
        "kappa",
    ])?;
    for r in reports {
        w.write_record(
            [
                r.tau,
                r.theta_magnitude,
                r.phase_correction,
                r.decoherence_factor_zero_t,
                r.decoherence_factor_thermal,
                r.zero_t_exponent,
                r.thermal_exponent,
                r.kappa,
            ]
            .map(fmt_f64),
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize, W: Write>(value: &T, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, value)?;
    Ok(())
}

/// Writes to `path`, or stdout when `path` is `None`.
pub fn with_output<F>(path: Option<&Path>, emit: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(p)?);
            emit(&mut f)?;
            f.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            emit(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_f64(0.1), "1.00000000000e-1");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn success_csv_leaves_missing_threshold_empty() {
        let report = SuccessRateReport {
            shots_axis: vec![3, 30],
            rates: vec![0.5, 1.0],
            trials: 10,
            lambda_min_used: vec![None, Some(2.0)],
            gamma: 0.0,
            separation_d: 4.5e-4,
        };
        let mut buf = Vec::new();
        write_success_rates(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "total_measurements,rate,lambda_min,trials,gamma,d_m");
        assert!(lines[1].starts_with("3,5.00000000000e-1,,10,"));
        assert!(lines[2].contains(",2.00000000000e0,"));
    }
}
