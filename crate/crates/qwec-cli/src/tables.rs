use crate::config::ExperimentConfig;
use crate::context::Context;
use crate::report::{summarize, Report};
use qwec::codec::run_cycle_branches;
use qwec::error::{QwecError, Result};
use qwec::pauli::{table_rows, CodeBasis, Letter, PauliWord, QubitId, Role, Syndrome, DATA, P0};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub flip: String,
    pub word: String,
    /// tabulated syndrome, m5..m0
    pub m: String,
    pub analytic: String,
    pub walk: String,
    pub walk_branches: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantRow {
    pub invariant: String,
    pub pass: bool,
}

/// "(X_c)_{P2}" for a single-qubit flip.
pub fn flip_name(w: &PauliWord) -> String {
    for p in DATA {
        for r in Role::ALL {
            let l = w.letter(QubitId::new(p, r));
            if l != Letter::I {
                return format!("({}_{})_{{P{p}}}", l.symbol(), r.name());
            }
        }
    }
    "I".into()
}

/// Generators with s_i replaced by s_i (X_c)_{P0}.
pub fn corrupted_basis(i: usize) -> Result<CodeBasis> {
    if i >= 6 {
        return Err(QwecError::Precondition(format!("no stabilizer s{i}")));
    }
    let mut cb = CodeBasis::standard();
    cb.stabilizers[i] = cb.stabilizers[i] * PauliWord::on_particle(P0, "XII");
    Ok(cb)
}

fn analytic(cb: &CodeBasis, e: &PauliWord) -> Syndrome {
    let mut m = 0u8;
    for (i, s) in cb.stabilizers.iter().enumerate() {
        if !s.commutes(e) {
            m |= 1 << i;
        }
    }
    Syndrome(m)
}

pub fn table_rows_checked(ctx: &Context, cb: &CodeBasis) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for (w, m) in table_rows() {
        let mut s = ctx.zero.clone();
        s.apply_pauli(&w)?;
        let br = run_cycle_branches(&s, &ctx.history, None)?;
        let walk: Vec<String> = br
            .iter()
            .map(|(_, _, h)| h.last_syndrome().expect("one cycle").to_string())
            .collect();
        let a = analytic(cb, &w).to_string();
        let walk = walk.join("|");
        rows.push(TableRow {
            flip: flip_name(&w),
            word: w.to_string(),
            m: m.to_string(),
            pass: a == m.to_string() && walk == m.to_string(),
            analytic: a,
            walk,
            walk_branches: br.len(),
        });
    }
    Ok(rows)
}

pub fn verify_tables(cfg: &ExperimentConfig, ctx: &Context) -> Result<Report> {
    let cb = match cfg.corrupt_generator {
        Some(i) => corrupted_basis(i)?,
        None => CodeBasis::standard(),
    };
    let rows = table_rows_checked(ctx, &cb)?;
    let inv: Vec<InvariantRow> = cb
        .check_invariants()
        .into_iter()
        .map(|(invariant, pass)| InvariantRow { invariant, pass })
        .collect();
    let (mut results, mut summary) = summarize(&rows, |r| r.pass, |r| if r.pass { 0.0 } else { 1.0 });
    let (ires, isum) = summarize(&inv, |r| r.pass, |r| if r.pass { 0.0 } else { 1.0 });
    // invariants only show up in the results when they fail
    results.extend(ires.into_iter().filter(|v| v["pass"] == false));
    summary.failures += isum.failures;
    summary.pass &= isum.pass;
    summary.max_deviation = summary.max_deviation.max(isum.max_deviation);
    Ok(Report { command: cfg.command.name().into(), seed: cfg.seed, config: cfg.echo(), results, summary })
}
