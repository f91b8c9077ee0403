use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use swp_core::loophole::{find_loophole_state, verify_loophole, LoopholeResult, LoopholeVerification};
use swp_core::report::{write_json, write_pea, write_success_rates, write_tomography_batches, write_witness_scans};
use swp_core::rng::derive_seed;
use swp_core::stats::{
    differential_success_rate, hypothesis_states, simulate_measurements, witness_negative_probability,
    DistinctionProblem,
};
use swp_core::tomography::tomography_batch;
use swp_core::witness::{default_tau_max, scan_negativity, scan_witness, uniform_grid, w0, w1, w1_observables};
use swp_core::{pea_corrections, DataVector, MleConfig, MonteCarlo, SignificanceLevel, SuccessRateReport, TomographySetup};

use crate::config::{DataSource, MeasurementSet, RunConfig};

pub struct RunContext {
    pub cfg: RunConfig,
    pub out: PathBuf,
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn monte_carlo(cfg: &RunConfig) -> MonteCarlo {
    MonteCarlo { trials: cfg.trials, lambda_trials: cfg.lambda_trials, seed: cfg.seed }
}

fn alpha(cfg: &RunConfig) -> Result<SignificanceLevel> {
    Ok(SignificanceLevel::new(cfg.alpha)?)
}

pub fn pea(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let reports = ctx
        .cfg
        .taus
        .iter()
        .map(|&t| pea_corrections(&ctx.cfg.scenario, t))
        .collect::<swp_core::Result<Vec<_>>>()?;
    write_pea(&reports, create(&ctx.out, "pea.csv")?)?;
    Ok(vec![ctx.out.join("pea.csv")])
}

pub fn scan(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let cfg = &ctx.cfg;
    let tau_max = match cfg.tau_max {
        Some(t) => t,
        None => default_tau_max(&cfg.scenario)?,
    };
    let taus = uniform_grid(tau_max, cfg.tau_points - 1);
    let (mut s0, mut s1, mut sn) = (Vec::new(), Vec::new(), Vec::new());
    for &gamma in &cfg.gammas {
        let p = cfg.scenario.clone().with_gamma(gamma);
        s0.push(scan_witness(&p, &w0(), &taus)?);
        s1.push(scan_witness(&p, &w1(), &taus)?);
        sn.push(scan_negativity(&p, &taus)?);
    }
    let mut written = Vec::new();
    for (name, scans) in [("scan_w0.csv", &s0), ("scan_w1.csv", &s1), ("scan_negativity.csv", &sn)] {
        write_witness_scans(scans, create(&ctx.out, name)?)?;
        written.push(ctx.out.join(name));
    }
    Ok(written)
}

pub fn success(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let cfg = &ctx.cfg;
    let (rho_a, rho_0, _) = hypothesis_states(&cfg.scenario)?;
    let observables = match cfg.measurements {
        MeasurementSet::Witness => w1_observables(),
        MeasurementSet::Tomography => TomographySetup::new().observables().to_vec(),
    };
    let truth = match cfg.data_source {
        DataSource::Alternative => &rho_a,
        DataSource::Null => &rho_0,
    };
    let problem = DistinctionProblem::new(&rho_a, &rho_0, truth, &observables)?;
    let (rates, thresholds) = problem.success_curve(&cfg.n_axis, alpha(cfg)?, &monte_carlo(cfg))?;
    let report = SuccessRateReport {
        shots_axis: cfg.n_axis.iter().map(|n| n * observables.len() as u64).collect(),
        rates,
        trials: cfg.trials,
        lambda_min_used: thresholds.into_iter().map(Some).collect(),
        gamma: cfg.scenario.dephasing_gamma,
        separation_d: cfg.scenario.separation_d,
    };
    write_success_rates(&report, create(&ctx.out, "success.csv")?)?;
    Ok(vec![ctx.out.join("success.csv")])
}

pub fn witneg(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let cfg = &ctx.cfg;
    let report = witness_negative_probability(&cfg.scenario, &cfg.n_axis, cfg.trials, cfg.seed)?;
    write_success_rates(&report, create(&ctx.out, "witneg.csv")?)?;
    Ok(vec![ctx.out.join("witneg.csv")])
}

pub fn differential(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let cfg = &ctx.cfg;
    let report = differential_success_rate(&cfg.scenario, &cfg.n_axis, alpha(cfg)?, &monte_carlo(cfg))?;
    write_success_rates(&report, create(&ctx.out, "differential.csv")?)?;
    Ok(vec![ctx.out.join("differential.csv")])
}

#[derive(Serialize)]
struct TomoSummary {
    shots: u64,
    tau_s: f64,
    null_threshold: f64,
    exceedance: f64,
}

pub fn tomo(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let cfg = &ctx.cfg;
    let mle = MleConfig { iterations: cfg.mle_iterations };
    let batches = cfg
        .tomo_shots
        .iter()
        .map(|&s| tomography_batch(&cfg.scenario, s, cfg.trials, cfg.seed, &mle))
        .collect::<swp_core::Result<Vec<_>>>()?;
    write_tomography_batches(&batches, create(&ctx.out, "tomo.csv")?)?;
    let summary: Vec<TomoSummary> = batches
        .iter()
        .map(|b| TomoSummary { shots: b.shots, tau_s: b.tau, null_threshold: b.null_threshold, exceedance: b.exceedance })
        .collect();
    write_json(&summary, create(&ctx.out, "tomo_summary.json")?)?;
    Ok(vec![ctx.out.join("tomo.csv"), ctx.out.join("tomo_summary.json")])
}

#[derive(Serialize)]
struct LoopholeReport {
    tau_s: f64,
    data: DataVector,
    result: LoopholeResult,
    verification: LoopholeVerification,
}

pub fn loophole(ctx: &RunContext) -> Result<Vec<PathBuf>> {
    let cfg = &ctx.cfg;
    let (rho_a, rho_0, tau) = hypothesis_states(&cfg.scenario)?;
    let data = simulate_measurements(&rho_a, &w1_observables(), cfg.loophole_shots, derive_seed(cfg.seed, "loophole_data", 0))?;
    let result = find_loophole_state(&data, &rho_0, &rho_a, &cfg.optimizer, cfg.seed)?;
    let verification = verify_loophole(&result, &rho_a, &rho_0, &data)?;
    write_json(&LoopholeReport { tau_s: tau, data, result, verification }, create(&ctx.out, "loophole.json")?)?;
    Ok(vec![ctx.out.join("loophole.json")])
}
