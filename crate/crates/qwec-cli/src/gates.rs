use crate::config::ExperimentConfig;
use crate::context::{amplitudes, bloch_of, Context};
use crate::report::{summarize, Report};
use qwec::codec::{apply_logical_clifford, logical_readout, logical_t_branches, PauliFrame};
use qwec::error::{QwecError, Result};
use qwec::scalar::{c, cone, czero};
use qwec::schedule::LogicalGate;
use qwec::{Complex, StateVector};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

pub const DEFAULT_WORDS: [&str; 8] = ["H", "S", "T", "Z", "H H", "T T", "H T", "S H T"];

/// (theta, phi): the six cardinal points, then two generic ones.
pub const GRID: [(f64, f64); 8] = [
    (0.0, 0.0),
    (PI, 0.0),
    (FRAC_PI_2, 0.0),
    (FRAC_PI_2, PI),
    (FRAC_PI_2, FRAC_PI_2),
    (FRAC_PI_2, 3.0 * FRAC_PI_2),
    (1.1, 0.7),
    (2.3, 4.0),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    H,
    S,
    T,
    Z,
}

/// Gates in time order: "H T" applies H first.
pub fn parse_word(w: &str) -> Result<Vec<Gate>> {
    let gs: Vec<Gate> = w
        .split_whitespace()
        .map(|t| match t {
            "H" => Ok(Gate::H),
            "S" => Ok(Gate::S),
            "T" => Ok(Gate::T),
            "Z" => Ok(Gate::Z),
            o => Err(QwecError::Parse(format!("unknown gate {o:?} in word {w:?}"))),
        })
        .collect::<Result<_>>()?;
    if gs.is_empty() {
        return Err(QwecError::Parse("empty gate word".into()));
    }
    Ok(gs)
}

pub fn gate_2x2(g: Gate) -> [[Complex; 2]; 2] {
    let r = FRAC_1_SQRT_2;
    match g {
        Gate::H => [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]],
        Gate::S => [[cone(), czero()], [czero(), c(0.0, 1.0)]],
        Gate::T => [[cone(), czero()], [czero(), c(r, r)]],
        Gate::Z => [[cone(), czero()], [czero(), c(-1.0, 0.0)]],
    }
}

pub fn compose(word: &[Gate], a: Complex, b: Complex) -> (Complex, Complex) {
    word.iter().fold((a, b), |(a, b), g| {
        let m = gate_2x2(*g);
        (m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b)
    })
}

/// Every outcome path of the encoded word, as (probability, state, frame).
pub fn run_word(ctx: &Context, word: &[Gate], s: StateVector) -> Result<Vec<(f64, StateVector, PauliFrame)>> {
    let mut paths = vec![(1.0, s, PauliFrame::default())];
    for g in word {
        let lg = match g {
            Gate::H => LogicalGate::H,
            Gate::S => LogicalGate::S,
            Gate::Z => LogicalGate::Z,
            Gate::T => {
                let mut next = Vec::new();
                for (p, s, f) in paths {
                    if !f.correction.is_identity_up_to_phase() {
                        return Err(QwecError::Precondition("T needs an empty Pauli frame".into()));
                    }
                    for (q, t) in logical_t_branches(&s, &ctx.history)? {
                        next.push((p * q, t, f.clone()));
                    }
                }
                paths = next;
                continue;
            }
        };
        for (_, s, f) in paths.iter_mut() {
            *f = apply_logical_clifford(s, f, lg)?;
        }
    }
    Ok(paths)
}

#[derive(Clone, Debug, Serialize)]
pub struct GateRow {
    pub word: String,
    pub theta: f64,
    pub phi: f64,
    pub expected: [f64; 3],
    /// readout on the worst outcome path
    pub observed: [f64; 3],
    pub paths: usize,
    pub total_probability: f64,
    pub deviation: f64,
    pub pass: bool,
}

pub fn gate_row(ctx: &Context, word: &str, theta: f64, phi: f64, tol: f64) -> Result<GateRow> {
    let gs = parse_word(word)?;
    let (a, b) = amplitudes(theta, phi);
    let (ea, eb) = compose(&gs, a, b);
    let expected = bloch_of(ea, eb);
    let paths = run_word(ctx, &gs, ctx.state(a, b))?;
    let total: f64 = paths.iter().map(|p| p.0).sum();
    let mut deviation = (total - 1.0).abs();
    let mut observed = expected;
    for (_, s, f) in &paths {
        let r = logical_readout(s, f)?.gauge_fixed;
        let d = r.iter().zip(expected).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        if d >= deviation {
            deviation = d;
            observed = r;
        }
    }
    Ok(GateRow {
        word: word.into(),
        theta,
        phi,
        expected,
        observed,
        paths: paths.len(),
        total_probability: total,
        deviation,
        pass: deviation < tol,
    })
}

pub fn logical_gates(cfg: &ExperimentConfig, ctx: &Context) -> Result<Report> {
    let tol = cfg.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    let words: Vec<String> = if cfg.words.is_empty() {
        DEFAULT_WORDS.iter().map(|w| w.to_string()).collect()
    } else {
        cfg.words.clone()
    };
    for w in &words {
        parse_word(w)?;
    }
    let jobs: Vec<(&String, (f64, f64))> = words.iter().flat_map(|w| GRID.iter().map(move |p| (w, *p))).collect();
    let rows: Vec<GateRow> = jobs
        .into_par_iter()
        .map(|(w, (th, ph))| gate_row(ctx, w, th, ph, tol))
        .collect::<Result<_>>()?;
    let (results, summary) = summarize(&rows, |r| r.pass, |r| r.deviation);
    Ok(Report { command: cfg.command.name().into(), seed: cfg.seed, config: cfg.echo(), results, summary })
}
