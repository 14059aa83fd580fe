use crate::config::{ExperimentConfig, Target};
use crate::context::{amplitudes, bloch_of, fidelity, Context};
use crate::report::{summarize, Report};
use qwec::codec::{logical_readout, run_cycle, run_cycle_branches, update_frame, PauliFrame};
use qwec::error::Result;
use qwec::error_model::{sample_random_error, Family};
use qwec::pauli::DATA;
use qwec::{rng_for, ErrorSpec};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub trial: usize,
    pub family: Family,
    pub target: String,
    /// outcome syndromes, with probabilities when several
    pub syndrome: String,
    pub corrected_fidelity: f64,
}

/// Family and target of trial `i` when the config leaves them open.
pub fn trial_plan(cfg: &ExperimentConfig, i: usize) -> (Family, usize) {
    let fams = cfg.families();
    let fam = fams[i % fams.len()];
    let target = match cfg.target {
        Some(Target(p)) => p,
        None => DATA[(i / fams.len()) % DATA.len()],
    };
    (fam, target)
}

/// One trial: random Bloch state, one random error, one cycle, frame readout.
/// Randomness comes from stream `trial` of `seed` only.
pub fn run_trial(ctx: &Context, seed: u64, trial: usize, family: Family, target: usize, monte_carlo: bool) -> Result<SweepRow> {
    let mut rng = rng_for(seed, trial as u64);
    let theta = (1.0 - 2.0 * rng.random::<f64>()).acos();
    let phi = std::f64::consts::TAU * rng.random::<f64>();
    let (a, b) = amplitudes(theta, phi);
    let r0 = bloch_of(a, b);
    let mut s = ctx.state(a, b);
    let e: ErrorSpec = sample_random_error(&mut rng, family, target);
    e.inject(&mut s)?;
    let (syndrome, f) = if monte_carlo {
        let mut h = ctx.history.clone();
        let m = run_cycle(&mut s, &mut h, &mut rng)?;
        let frame = update_frame(&h, &PauliFrame::default())?;
        (m.to_string(), fidelity(logical_readout(&s, &frame)?.bloch, r0))
    } else {
        let mut f = 0.0;
        let mut parts = Vec::new();
        for (p, st, h) in run_cycle_branches(&s, &ctx.history, None)? {
            let frame = update_frame(&h, &PauliFrame::default())?;
            f += p * fidelity(logical_readout(&st, &frame)?.bloch, r0);
            parts.push((h.last_syndrome().expect("one cycle").to_string(), p));
        }
        parts.sort_by(|x, y| x.0.cmp(&y.0));
        let syndrome = if parts.len() == 1 {
            parts[0].0.clone()
        } else {
            parts.iter().map(|(m, p)| format!("{m}:{p:.6}")).collect::<Vec<_>>().join(" ")
        };
        (syndrome, f)
    };
    Ok(SweepRow { trial, family, target: format!("P{target}"), syndrome, corrected_fidelity: f })
}

pub fn run_trials(cfg: &ExperimentConfig, ctx: &Context) -> Result<Vec<SweepRow>> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let (fam, target) = trial_plan(cfg, i);
            run_trial(ctx, cfg.seed, i, fam, target, cfg.monte_carlo)
        })
        .collect()
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["trial", "family", "target", "syndrome", "corrected_fidelity"]).expect("in memory");
    for r in rows {
        w.write_record([
            r.trial.to_string(),
            r.family.to_string(),
            r.target.clone(),
            r.syndrome.clone(),
            format!("{:.15}", r.corrected_fidelity),
        ])
        .expect("in memory");
    }
    String::from_utf8(w.into_inner().expect("in memory")).expect("utf8")
}

pub fn error_sweep(cfg: &ExperimentConfig, ctx: &Context) -> Result<(Report, String)> {
    let tol = cfg.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    let rows = run_trials(cfg, ctx)?;
    let (results, mut summary) = summarize(&rows, |r| r.corrected_fidelity >= 1.0 - tol, |r| (1.0 - r.corrected_fidelity).abs());
    if !rows.is_empty() {
        let fs: Vec<f64> = rows.iter().map(|r| r.corrected_fidelity).collect();
        summary.min_fidelity = Some(fs.iter().copied().fold(f64::INFINITY, f64::min));
        summary.mean_fidelity = Some(fs.iter().sum::<f64>() / fs.len() as f64);
    }
    let report = Report { command: cfg.command.name().into(), seed: cfg.seed, config: cfg.echo(), results, summary };
    Ok((report, to_csv(&rows)))
}
