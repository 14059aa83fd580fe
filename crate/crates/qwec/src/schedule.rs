//! Walk programs: step lists compiled from the protocols, plus the executor.

use crate::error::{QwecError, Result};
use crate::linalg::Mat2;
use crate::pauli::{P0, P1, P2, P3, P4, PEX};
use crate::scalar::{Real, C};
use crate::walk::{CoinSpec, StateVector, Vertex};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which record a coin measurement feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasTag {
    /// stabilizer s_i
    S(u8),
    /// one of the two ancillas of the gauge ZZ readout
    Zz(u8),
    Pex,
}

impl fmt::Display for MeasTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasTag::S(i) => write!(f, "s{i}"),
            MeasTag::Zz(i) => write!(f, "zz{i}"),
            MeasTag::Pex => write!(f, "pex"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WalkStep<T> {
    Coin(CoinSpec<T>),
    Shift,
    Neighbor,
    LocalCoin(usize, Mat2<T>),
    MeasureCoin(usize, MeasTag),
    /// X on the coin if the last outcome of this particle was 1
    ResetAncilla(usize),
    /// coin step applied only if the last outcome with this tag was 1
    Conditional(MeasTag, CoinSpec<T>),
    InjectionPoint(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkProgram<T> {
    pub name: String,
    pub steps: Vec<WalkStep<T>>,
    /// particles that must be back at these vertices when the program ends
    pub returns: Vec<(usize, Vertex)>,
}

/// Single-coin names used in listings.
pub fn mat_name<T: Real>(u: &Mat2<T>) -> &'static str {
    let tol = T::lit(1e-12);
    let named: [(&'static str, Mat2<T>); 9] = [
        ("I", Mat2::identity()),
        ("X", Mat2::x()),
        ("Y", Mat2::y()),
        ("Z", Mat2::z()),
        ("H", Mat2::h()),
        ("H'", Mat2::h_prime()),
        ("S", Mat2::s_c()),
        ("ZS", Mat2::zs()),
        ("T", Mat2::t_c()),
    ];
    for (n, m) in named.iter() {
        if u.max_diff(m) < tol {
            return n;
        }
    }
    if u.max_diff(&Mat2::t_c().adjoint()) < tol {
        return "T*";
    }
    "U"
}

fn pname(p: usize) -> String {
    if p == PEX {
        "PEX".into()
    } else {
        format!("P{p}")
    }
}

impl<T: Real> WalkProgram<T> {
    pub fn new(name: impl Into<String>) -> Self {
        WalkProgram { name: name.into(), steps: Vec::new(), returns: Vec::new() }
    }

    pub fn push(&mut self, s: WalkStep<T>) -> &mut Self {
        self.steps.push(s);
        self
    }

    pub fn append(&mut self, o: &WalkProgram<T>) -> &mut Self {
        self.steps.extend(o.steps.iter().cloned());
        for r in &o.returns {
            if !self.returns.contains(r) {
                self.returns.push(*r);
            }
        }
        self
    }

    /// Coin-step count; one coin step per C-S(-N) iteration.
    pub fn iterations(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, WalkStep::Coin(_))).count()
    }

    pub fn has_measurement(&self) -> bool {
        self.steps
            .iter()
            .any(|s| matches!(
                s,
                WalkStep::MeasureCoin(..) | WalkStep::ResetAncilla(_) | WalkStep::Conditional(..)
            ))
    }

    /// Reversed conjugate program; only for measurement-free programs.
    pub fn inverse(&self) -> Result<WalkProgram<T>> {
        if self.has_measurement() {
            return Err(QwecError::Program(format!("{} has measurements", self.name)));
        }
        let mut inv = WalkProgram::new(format!("{}^-1", self.name));
        for s in self.steps.iter().rev() {
            match s {
                WalkStep::Coin(c) => {
                    inv.push(WalkStep::Coin(c.adjoint()));
                }
                WalkStep::Shift => {
                    for _ in 0..3 {
                        inv.push(WalkStep::Shift);
                    }
                }
                WalkStep::Neighbor => {
                    inv.push(WalkStep::Neighbor);
                }
                WalkStep::LocalCoin(p, u) => {
                    inv.push(WalkStep::LocalCoin(*p, u.adjoint()));
                }
                WalkStep::InjectionPoint(t) => {
                    inv.push(WalkStep::InjectionPoint(t.clone()));
                }
                _ => unreachable!(),
            }
        }
        Ok(inv)
    }

    /// Line-oriented dump: index, kind, coin entries.
    pub fn listing(&self) -> String {
        let mut out = format!("# {} ({} iterations)\n", self.name, self.iterations());
        for (i, s) in self.steps.iter().enumerate() {
            let line = match s {
                WalkStep::Coin(c) => {
                    let mut e: Vec<String> = c
                        .nontrivial()
                        .iter()
                        .map(|(p, v, u)| format!("{}@{}:{}", pname(*p), v, mat_name(u)))
                        .collect();
                    if e.is_empty() {
                        e.push("identity".into());
                    }
                    format!("COIN {}", e.join(" "))
                }
                WalkStep::Shift => "SHIFT".into(),
                WalkStep::Neighbor => "NEIGHBOR".into(),
                WalkStep::LocalCoin(p, u) => format!("LOCAL {} {}", pname(*p), mat_name(u)),
                WalkStep::MeasureCoin(p, t) => format!("MEASURE {} -> {}", pname(*p), t),
                WalkStep::ResetAncilla(p) => format!("RESET {}", pname(*p)),
                WalkStep::Conditional(t, c) => {
                    let e: Vec<String> = c
                        .nontrivial()
                        .iter()
                        .map(|(p, v, u)| format!("{}@{}:{}", pname(*p), v, mat_name(u)))
                        .collect();
                    format!("IF {t} COIN {}", e.join(" "))
                }
                WalkStep::InjectionPoint(t) => format!("INJECT {t}"),
            };
            out.push_str(&format!("{i:4} {line}\n"));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SyndromePair {
    S0S2,
    S1S3,
    S4S5,
}

impl SyndromePair {
    pub fn tags(self) -> (MeasTag, MeasTag) {
        match self {
            SyndromePair::S0S2 => (MeasTag::S(0), MeasTag::S(2)),
            SyndromePair::S1S3 => (MeasTag::S(1), MeasTag::S(3)),
            SyndromePair::S4S5 => (MeasTag::S(4), MeasTag::S(5)),
        }
    }

    fn vertices(self) -> [Vertex; 2] {
        match self {
            SyndromePair::S0S2 => [Vertex::V10, Vertex::V11],
            SyndromePair::S1S3 => [Vertex::V11, Vertex::V01],
            SyndromePair::S4S5 => [Vertex::V10, Vertex::V01],
        }
    }
}

/// H on both ancillas, six C-S-N rounds with X at the given vertices, H again.
fn kickback<T: Real>(prog: &mut WalkProgram<T>, vertices: [Vertex; 2], extra: &CoinSpec<T>) {
    prog.push(WalkStep::LocalCoin(P1, Mat2::h()));
    prog.push(WalkStep::LocalCoin(P3, Mat2::h()));
    let mut spec = extra.clone();
    for p in [P1, P3] {
        for v in vertices {
            spec = spec.set(p, v, Mat2::x());
        }
    }
    for _ in 0..6 {
        prog.push(WalkStep::Coin(spec.clone()));
        prog.push(WalkStep::Shift);
        prog.push(WalkStep::Neighbor);
    }
    prog.push(WalkStep::LocalCoin(P1, Mat2::h()));
    prog.push(WalkStep::LocalCoin(P3, Mat2::h()));
}

fn measure_pair<T: Real>(prog: &mut WalkProgram<T>, tags: (MeasTag, MeasTag)) {
    prog.push(WalkStep::MeasureCoin(P1, tags.0));
    prog.push(WalkStep::MeasureCoin(P3, tags.1));
    prog.push(WalkStep::ResetAncilla(P1));
    prog.push(WalkStep::ResetAncilla(P3));
}

pub fn build_syndrome_step<T: Real>(pair: SyndromePair) -> WalkProgram<T> {
    let tags = pair.tags();
    let mut prog = WalkProgram::new(format!("syndrome({},{})", tags.0, tags.1));
    prog.returns = vec![(P1, Vertex::V00), (P3, Vertex::V00)];
    match pair {
        SyndromePair::S0S2 | SyndromePair::S1S3 => {
            kickback(&mut prog, pair.vertices(), &CoinSpec::identity());
            measure_pair(&mut prog, tags);
        }
        SyndromePair::S4S5 => {
            let w = build_basis_transform::<T>(&[P0, P2, P4]);
            prog.append(&w);
            kickback(&mut prog, pair.vertices(), &CoinSpec::identity());
            measure_pair(&mut prog, tags);
            // two bare shifts bring the data round to a full R^8 before the
            // transform is undone
            prog.push(WalkStep::Shift);
            prog.push(WalkStep::Shift);
            prog.append(&w);
        }
    }
    prog
}

/// Coin pattern over vertices (00, 10, 11, 01) used by the transform.
fn hphp<T: Real>() -> [Mat2<T>; 4] {
    [Mat2::h(), Mat2::h_prime(), Mat2::h(), Mat2::h_prime()]
}

/// Eight neighbor-free C-S rounds mapping XXX eigenstates to ZZZ eigenstates.
pub fn build_basis_transform<T: Real>(targets: &[usize]) -> WalkProgram<T> {
    let mut prog = WalkProgram::new(format!(
        "basis-transform[{}]",
        targets.iter().map(|p| pname(*p)).collect::<Vec<_>>().join(",")
    ));
    if targets.is_empty() {
        return prog;
    }
    for it in 1..=8 {
        let mut spec = CoinSpec::identity();
        if matches!(it, 1 | 3 | 5) {
            for &p in targets {
                for (v, u) in Vertex::CYCLE.iter().zip(hphp::<T>()) {
                    spec = spec.set(p, *v, u);
                }
            }
        }
        prog.push(WalkStep::Coin(spec));
        prog.push(WalkStep::Shift);
    }
    prog
}

/// The three syndrome steps. The order does not depend on the parity, see README.
pub fn build_full_cycle<T: Real>(cycle_parity: u8) -> WalkProgram<T> {
    let mut prog = WalkProgram::new(format!("cycle(parity {})", cycle_parity & 1));
    prog.push(WalkStep::InjectionPoint("cycle-start".into()));
    for pair in [SyndromePair::S0S2, SyndromePair::S1S3, SyndromePair::S4S5] {
        prog.append(&build_syndrome_step(pair));
    }
    prog
}

/// Controlled logical X with the external coin as control.
pub fn build_cnot_coin_to_logical<T: Real>() -> WalkProgram<T> {
    let mut prog = WalkProgram::new("cnot(PEX -> logical)");
    let w = build_basis_transform::<T>(&[P4]);
    prog.append(&w);
    prog.append(&build_cnot_middle());
    prog.append(&w);
    prog.returns = vec![(PEX, Vertex::V00)];
    prog
}

/// Eight C-S-N rounds with X on every data coin: controlled (Z Z Z) on P4.
pub fn build_cnot_middle<T: Real>() -> WalkProgram<T> {
    let mut prog = WalkProgram::new("cnot-middle");
    let spec = [P0, P2, P4].iter().fold(CoinSpec::identity(), |s, p| s.set_all(*p, Mat2::x()));
    for _ in 0..8 {
        prog.push(WalkStep::Coin(spec.clone()));
        prog.push(WalkStep::Shift);
        prog.push(WalkStep::Neighbor);
    }
    prog
}

pub fn build_cphase<T: Real>() -> WalkProgram<T> {
    let mut prog = WalkProgram::new("cphase");
    let bracket = |prog: &mut WalkProgram<T>| {
        prog.push(WalkStep::LocalCoin(PEX, Mat2::h()));
        prog.append(&build_logical_clifford::<T>(LogicalGate::H));
    };
    bracket(&mut prog);
    prog.append(&build_cnot_coin_to_logical());
    bracket(&mut prog);
    prog
}

/// Two-ancilla readout whose outcome product is the eigenvalue of (I Z Z) on P4.
pub fn build_gauge_zz_measurement<T: Real>() -> WalkProgram<T> {
    let mut prog = WalkProgram::new("gauge-zz");
    prog.returns = vec![(P1, Vertex::V00), (P3, Vertex::V00)];
    prog.push(WalkStep::Shift);
    let extra = CoinSpec::identity().set_all(P0, Mat2::x());
    kickback(&mut prog, [Vertex::V01, Vertex::V10], &extra);
    measure_pair(&mut prog, (MeasTag::Zz(0), MeasTag::Zz(1)));
    prog.push(WalkStep::Shift);
    // P0 was driven with X through the rounds; walk it back home
    for u in [Mat2::x(), Mat2::x(), Mat2::identity(), Mat2::identity()] {
        prog.push(WalkStep::Coin(CoinSpec::identity().set_all(P0, u)));
        prog.push(WalkStep::Shift);
    }
    // the +1 branch leaves a sign (-1)^x on P0
    let minus = Mat2::identity().scale(C::new(-T::one(), T::zero()));
    let fix = CoinSpec::identity().set(P0, Vertex::V10, minus).set(P0, Vertex::V11, minus);
    prog.push(WalkStep::Conditional(MeasTag::Zz(0), fix));
    prog
}

pub fn build_gauge_xx_measurement<T: Real>() -> WalkProgram<T> {
    let mut prog = WalkProgram::new("gauge-xx");
    let w = build_basis_transform::<T>(&[P0, P2, P4]);
    prog.append(&w);
    prog.append(&build_gauge_zz_measurement());
    prog.append(&w);
    prog
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogicalGate {
    H,
    S,
    Z,
}

impl LogicalGate {
    pub fn coin<T: Real>(self) -> Mat2<T> {
        match self {
            LogicalGate::H => Mat2::h(),
            LogicalGate::S => Mat2::zs(),
            LogicalGate::Z => Mat2::z(),
        }
    }
}

/// One coin step applying the same gate to the coins of P0, P2, P4.
pub fn build_logical_clifford<T: Real>(gate: LogicalGate) -> WalkProgram<T> {
    let mut prog = WalkProgram::new(format!("logical-{gate:?}"));
    let u = gate.coin::<T>();
    let spec = [P0, P2, P4].iter().fold(CoinSpec::identity(), |s, p| s.set_all(*p, u));
    prog.push(WalkStep::Coin(spec));
    prog
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasRecord {
    pub tag: MeasTag,
    pub particle: usize,
    pub bit: u8,
}

#[derive(Clone, Debug)]
pub struct Branch<T> {
    pub state: StateVector<T>,
    pub records: Vec<MeasRecord>,
    pub probability: T,
}

/// Hook run at InjectionPoint steps.
pub type Injector<'a, T> = dyn FnMut(&str, &mut StateVector<T>) -> Result<()> + 'a;

enum Mode<'a> {
    Sample(&'a mut dyn RngCore),
    Forced(&'a [u8], usize),
    Branches(f64),
}

fn check_home<T: Real>(s: &StateVector<T>, p: usize, v: Vertex) -> Result<()> {
    let d = s.vertex_distribution(p)?;
    let away = T::one() - d[v.code()];
    if away > T::lit(1e-9) {
        return Err(QwecError::Program(format!(
            "{} not at vertex {} (weight elsewhere {:e})",
            pname(p),
            v,
            away.to_f64_lossy()
        )));
    }
    Ok(())
}

fn apply_unitary_step<T: Real>(s: &mut StateVector<T>, step: &WalkStep<T>) -> Result<()> {
    match step {
        WalkStep::Coin(c) => s.apply_coin(c),
        WalkStep::Shift => s.apply_shift(),
        WalkStep::Neighbor => s.apply_neighbor(),
        WalkStep::LocalCoin(p, u) => s.apply_local_coin(*p, u)?,
        _ => unreachable!(),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn exec_from<T: Real>(
    prog: &WalkProgram<T>,
    mut i: usize,
    mut st: StateVector<T>,
    mut rec: Vec<MeasRecord>,
    mut prob: T,
    mode: &mut Mode<'_>,
    inj: &mut Option<&mut Injector<'_, T>>,
    out: &mut Vec<Branch<T>>,
) -> Result<()> {
    while i < prog.steps.len() {
        match &prog.steps[i] {
            WalkStep::InjectionPoint(tag) => {
                if let Some(f) = inj.as_mut() {
                    f(tag, &mut st)?;
                }
            }
            WalkStep::MeasureCoin(p, tag) => {
                check_home(&st, *p, Vertex::V00)?;
                let p0 = st.coin_probability(*p, 0)?;
                let p1 = st.coin_probability(*p, 1)?;
                let bit = match mode {
                    Mode::Sample(rng) => {
                        let r: f64 = rng.random();
                        if T::lit(r) * (p0 + p1) < p0 {
                            0
                        } else {
                            1
                        }
                    }
                    Mode::Forced(bits, pos) => {
                        let b = *bits.get(*pos).ok_or_else(|| {
                            QwecError::Program("not enough forced outcomes".into())
                        })?;
                        *pos += 1;
                        b
                    }
                    Mode::Branches(cutoff) => {
                        let cut = T::lit(*cutoff);
                        let keep0 = prob * p0 > cut;
                        let keep1 = prob * p1 > cut;
                        if keep0 && keep1 {
                            for (bit, pb) in [(0u8, p0), (1u8, p1)] {
                                let mut s = st.clone();
                                s.project_coin(*p, bit)?;
                                let mut r = rec.clone();
                                r.push(MeasRecord { tag: *tag, particle: *p, bit });
                                exec_from(prog, i + 1, s, r, prob * pb, mode, inj, out)?;
                            }
                            return Ok(());
                        } else if keep1 {
                            1
                        } else {
                            0
                        }
                    }
                };
                let pr = st.project_coin(*p, bit)?;
                prob = prob * pr;
                rec.push(MeasRecord { tag: *tag, particle: *p, bit });
            }
            WalkStep::Conditional(tag, c) => {
                let last = rec
                    .iter()
                    .rev()
                    .find(|r| r.tag == *tag)
                    .ok_or_else(|| QwecError::Program(format!("condition on {tag} before it was measured")))?;
                if last.bit == 1 {
                    st.apply_coin(c);
                }
            }
            WalkStep::ResetAncilla(p) => {
                let last = rec
                    .iter()
                    .rev()
                    .find(|r| r.particle == *p)
                    .ok_or_else(|| QwecError::Program(format!("reset of {} before any measurement", pname(*p))))?;
                if last.bit == 1 {
                    st.apply_local_coin(*p, &Mat2::x())?;
                }
                check_home(&st, *p, Vertex::V00)?;
            }
            s => apply_unitary_step(&mut st, s)?,
        }
        i += 1;
    }
    for (p, v) in &prog.returns {
        if *p < st.layout().particles() {
            check_home(&st, *p, *v)?;
        }
    }
    out.push(Branch { state: st, records: rec, probability: prob });
    Ok(())
}

/// Runs a measurement-free program in place; injection points are skipped.
pub fn run_unitary<T: Real>(prog: &WalkProgram<T>, state: &mut StateVector<T>) -> Result<()> {
    if prog.has_measurement() {
        return Err(QwecError::Program(format!("{} contains measurements", prog.name)));
    }
    for s in &prog.steps {
        if !matches!(s, WalkStep::InjectionPoint(_)) {
            apply_unitary_step(state, s)?;
        }
    }
    Ok(())
}

fn single<T: Real>(
    prog: &WalkProgram<T>,
    state: &mut StateVector<T>,
    mut mode: Mode<'_>,
    mut inj: Option<&mut Injector<'_, T>>,
) -> Result<(Vec<MeasRecord>, T)> {
    let mut out = Vec::new();
    exec_from(prog, 0, state.clone(), Vec::new(), T::one(), &mut mode, &mut inj, &mut out)?;
    let b = out.pop().expect("single-path execution yields one branch");
    *state = b.state;
    Ok((b.records, b.probability))
}

/// Measurements drawn from `rng`.
pub fn run_sampled<T: Real>(
    prog: &WalkProgram<T>,
    state: &mut StateVector<T>,
    rng: &mut dyn RngCore,
) -> Result<Vec<MeasRecord>> {
    Ok(single(prog, state, Mode::Sample(rng), None)?.0)
}

/// Measurements forced to the given bits, in program order. Returns the path probability.
pub fn run_forced<T: Real>(prog: &WalkProgram<T>, state: &mut StateVector<T>, bits: &[u8]) -> Result<(Vec<MeasRecord>, T)> {
    single(prog, state, Mode::Forced(bits, 0), None)
}

/// Every measurement path with probability above `cutoff`.
pub fn run_branches<T: Real>(prog: &WalkProgram<T>, state: &StateVector<T>, cutoff: f64) -> Result<Vec<Branch<T>>> {
    run_branches_with(prog, state, cutoff, None)
}

pub fn run_branches_with<T: Real>(
    prog: &WalkProgram<T>,
    state: &StateVector<T>,
    cutoff: f64,
    mut inj: Option<&mut Injector<'_, T>>,
) -> Result<Vec<Branch<T>>> {
    let mut out = Vec::new();
    let mut mode = Mode::Branches(cutoff);
    exec_from(prog, 0, state.clone(), Vec::new(), T::one(), &mut mode, &mut inj, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_shape() {
        let w = build_basis_transform::<f64>(&[P0, P2, P4]);
        assert_eq!(w.iterations(), 8);
        assert!(!w.steps.iter().any(|s| matches!(s, WalkStep::Neighbor)));
        assert!(build_basis_transform::<f64>(&[]).steps.is_empty());
    }

    #[test]
    fn cycle_iteration_count() {
        assert_eq!(build_full_cycle::<f64>(0).iterations(), 34);
        assert_eq!(build_full_cycle::<f64>(1).iterations(), 34);
    }

    #[test]
    fn cnot_iteration_count() {
        assert_eq!(build_cnot_coin_to_logical::<f64>().iterations(), 24);
    }

    #[test]
    fn listing_mentions_steps() {
        let l = build_syndrome_step::<f64>(SyndromePair::S0S2).listing();
        assert!(l.contains("COIN P1@10:X P1@11:X P3@10:X P3@11:X"), "{l}");
        assert!(l.contains("MEASURE P1 -> s0"));
        assert!(l.contains("RESET P3"));
        let w = build_basis_transform::<f64>(&[P4]).listing();
        assert!(w.contains("P4@00:H P4@10:H' P4@11:H P4@01:H'"), "{w}");
    }

    #[test]
    fn inverse_rejects_measurements() {
        assert!(build_syndrome_step::<f64>(SyndromePair::S0S2).inverse().is_err());
        assert!(build_cnot_coin_to_logical::<f64>().inverse().is_ok());
    }
}
