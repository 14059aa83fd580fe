use crate::config::ExperimentConfig;
use crate::context::Context;
use crate::report::{summarize, Report};
use qwec::codec::gauge_g_prime;
use qwec::error::Result;
use qwec::oracle::{dense_of, embed_data, extract_unitary, single_particle_unitary};
use qwec::pauli::*;
use qwec::scalar::{c, cone, czero};
use qwec::schedule::{build_basis_transform, build_cnot_coin_to_logical, build_cnot_middle, build_cphase, run_unitary};
use qwec::walk::{random_state, Layout};
use qwec::{rng_for, Complex, Dense, StateVector};
use serde::Serialize;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct IdentityRow {
    pub identity: String,
    /// "unitary" or "symbolic"
    pub kind: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
    /// symbolic rows: whether the two sides agree up to stabilizers, gauges and phase
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mod_gauge: Option<bool>,
}

fn row(identity: &str, kind: &'static str, deviation: f64, tolerance: f64, actual: Option<String>) -> IdentityRow {
    IdentityRow { identity: identity.into(), kind, deviation, tolerance, pass: deviation < tolerance, actual, mod_gauge: None }
}

fn symbolic(identity: &str, got: PauliWord, want: PauliWord) -> IdentityRow {
    let ok = got == want;
    let mut r = row(identity, "symbolic", if ok { 0.0 } else { 1.0 }, 0.5, (!ok).then(|| got.to_string()));
    r.mod_gauge = Some(equivalent_mod_gauge(&got, &want));
    r
}

/// Deviations of W XXX = ZZZ W and W ZZZ = XXX W on one particle.
pub fn basis_transform_deviation() -> Result<(f64, f64)> {
    let w = single_particle_unitary::<f64>(&build_basis_transform(&[0]))?;
    let xxx = dense_of::<f64>(&PauliWord::on_particle(0, "XXX"), &[0])?;
    let zzz = dense_of::<f64>(&PauliWord::on_particle(0, "ZZZ"), &[0])?;
    Ok((w.mul(&xxx).max_diff(&zzz.mul(&w)), w.mul(&zzz).max_diff(&xxx.mul(&w))))
}

fn coins() -> [[Complex; 2]; 2] {
    [[cone(), czero()], [czero(), cone()]]
}

pub fn cnot_deviation(ctx: &Context) -> Result<f64> {
    let mut ins = Vec::new();
    for coin in coins() {
        for l in [&ctx.zero, &ctx.one] {
            ins.push(l.with_external(coin)?);
        }
    }
    let u = extract_unitary(&build_cnot_coin_to_logical(), &ins, &ins)?;
    let mut want = Dense::identity(4);
    want.set(2, 2, czero());
    want.set(3, 3, czero());
    want.set(2, 3, cone());
    want.set(3, 2, cone());
    Ok(u.max_diff(&want))
}

/// CPhase against |+><+| I + |-><-| w on {|+>, |->} x {|0>_L, |1>_L}.
pub fn cphase_deviation(ctx: &Context, w: &PauliWord) -> Result<f64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut dev: f64 = 0.0;
    for (sign, minus) in [(1.0, false), (-1.0, true)] {
        for l in [&ctx.zero, &ctx.one] {
            let s = l.with_external([c(r, 0.0), c(sign * r, 0.0)])?;
            let mut got = s.clone();
            run_unitary(&build_cphase(), &mut got)?;
            let mut want = s;
            if minus {
                want.apply_pauli(w)?;
            }
            dev = dev.max(got.max_diff(&want));
        }
    }
    Ok(dev)
}

/// Middle block against controlled (ZZZ) on P4, over a random data state.
pub fn middle_deviation(seed: u64) -> Result<f64> {
    let d: StateVector = random_state(Layout { chain: 3, external: false }, &mut rng_for(seed, 0));
    let data = embed_data(d.amplitudes(), Layout::data_only())?;
    let zzz = PauliWord::on_particle(P4, "ZZZ");
    let mut dev: f64 = 0.0;
    for (coin, w) in coins().into_iter().zip([PauliWord::identity(), zzz]) {
        let s = data.with_external(coin)?;
        let mut got = s.clone();
        run_unitary(&build_cnot_middle(), &mut got)?;
        let mut want = s;
        want.apply_pauli(&w)?;
        dev = dev.max(got.max_diff(&want));
    }
    Ok(dev)
}

pub fn symbolic_rows() -> Result<Vec<IdentityRow>> {
    let (h, s) = (TransversalGate::H, TransversalGate::ZS);
    let (z, x, g) = (logical_z(), logical_x(), gauge_g());
    let zc = PauliWord::data("ZII", "ZII", "ZII");
    let xc = PauliWord::data("XII", "XII", "XII");
    Ok(vec![
        symbolic("H Zbar H = g Xbar", conjugate_transversal(&z, h)?, g * x),
        symbolic("H Xbar H = g Zbar", conjugate_transversal(&x, h)?, g * z),
        symbolic("Zbar = (g0Z g1Z s0 s1) Z_c Z_c Z_c", z, gauge_h() * zc),
        symbolic("Xbar = (g0X g1X s4) X_c X_c X_c", x, gauge_x(0) * gauge_x(1) * stabilizer(4) * xc),
        symbolic("S Zbar S^dag = g Zbar", conjugate_transversal(&z, s)?, g * z),
        symbolic("S Xbar S^dag = g (i Xbar Zbar)", conjugate_transversal(&x, s)?, g * logical_y()),
    ])
}

pub fn identity_rows(ctx: &Context, seed: u64, tol: f64) -> Result<Vec<IdentityRow>> {
    let (wx, wz) = basis_transform_deviation()?;
    let mut rows = vec![
        row("W XXX = ZZZ W", "unitary", wx, 1e-12, None),
        row("W ZZZ = XXX W", "unitary", wz, 1e-12, None),
        row("CNOT (external coin -> logical)", "unitary", cnot_deviation(ctx)?, tol, None),
        row("CPhase = |+><+| I + |-><-| g Zbar", "unitary", cphase_deviation(ctx, &(gauge_g() * logical_z()))?, tol, None),
        row(
            "CPhase = |+><+| I + |-><-| g' Zbar, g' = H g H",
            "unitary",
            cphase_deviation(ctx, &(gauge_g_prime() * logical_z()))?,
            tol,
            Some(gauge_g_prime().to_string()),
        ),
        row("middle block = controlled (ZZZ)_P4", "unitary", middle_deviation(seed)?, tol, None),
    ];
    rows.extend(symbolic_rows()?);
    Ok(rows)
}

pub fn verify_identities(cfg: &ExperimentConfig, ctx: &Context) -> Result<Report> {
    let tol = cfg.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    let rows = identity_rows(ctx, cfg.seed, tol)?;
    let (results, summary) = summarize(&rows, |r| r.pass, |r| r.deviation);
    Ok(Report { command: cfg.command.name().into(), seed: cfg.seed, config: cfg.echo(), results, summary })
}
