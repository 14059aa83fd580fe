//! Logical-qubit lifecycle: preparation, encoding, syndrome cycles, the Pauli
//! frame, readout, and the T gate.

use crate::error::{QwecError, Result};
use crate::linalg::Mat2;
use crate::pauli::{
    conjugate_transversal, decode_lookup, destabilizer, gauge_g, gauge_z, logical_x, logical_z, stabilizer, Decoded, PauliWord,
    Syndrome, TransversalGate,
};
use crate::scalar::{cone, czero, Real, C};
use crate::schedule::{
    build_cnot_coin_to_logical, build_cphase, build_gauge_zz_measurement, build_full_cycle, build_logical_clifford, build_syndrome_step, run_branches,
    run_branches_with, run_forced, run_sampled, run_unitary, Injector, LogicalGate, MeasRecord, MeasTag, SyndromePair,
    WalkProgram,
};
use crate::walk::{Layout, MeasurePolicy, Measured, StateVector};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

/// Branches lighter than this are dropped when enumerating outcomes.
pub const BRANCH_CUTOFF: f64 = 1e-15;

/// Target signs for projective preparation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signs {
    pub stabilizers: [i8; 6],
    pub logical_z: i8,
    pub g: i8,
}

impl Default for Signs {
    fn default() -> Self {
        Signs { stabilizers: [1; 6], logical_z: 1, g: 1 }
    }
}

pub enum PrepPolicy<'a> {
    Forced(Signs),
    /// random stabilizer outcomes; Zbar and g still forced to the given signs
    Random(&'a mut dyn RngCore, i8, i8),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub eigenvalues: [i8; 6],
    pub m: String,
    pub parity: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyndromeHistory {
    pub reference: [i8; 6],
    pub cycles: Vec<CycleRecord>,
    /// signs the next cycle is compared against
    pub expected: [i8; 6],
}

impl SyndromeHistory {
    pub fn new(reference: [i8; 6]) -> Self {
        SyndromeHistory { reference, cycles: Vec::new(), expected: reference }
    }

    pub fn last_eigenvalues(&self) -> [i8; 6] {
        self.expected
    }

    pub fn next_parity(&self) -> u8 {
        (self.cycles.len() % 2) as u8
    }

    pub fn has_completed_cycle(&self) -> bool {
        !self.cycles.is_empty()
    }

    /// Appends a cycle; m_i = 1 where the sign changed since the previous cycle.
    pub fn push(&mut self, eigenvalues: [i8; 6]) -> Syndrome {
        let prev = self.last_eigenvalues();
        let mut m = 0u8;
        for i in 0..6 {
            if eigenvalues[i] != prev[i] {
                m |= 1 << i;
            }
        }
        let parity = self.next_parity();
        self.expected = eigenvalues;
        let s = Syndrome(m);
        self.cycles.push(CycleRecord { eigenvalues, m: s.to_string(), parity });
        s
    }

    pub fn last_syndrome(&self) -> Option<Syndrome> {
        self.cycles.last().map(|c| c.m.parse().expect("stored syndrome"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameEntry {
    pub m: String,
    pub correctable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliFrame {
    pub correction: PauliWord,
    pub log: Vec<FrameEntry>,
}

impl Default for PauliFrame {
    fn default() -> Self {
        PauliFrame { correction: PauliWord::identity(), log: Vec::new() }
    }
}

impl PauliFrame {
    pub fn uncorrectable(&self) -> bool {
        self.log.iter().any(|e| !e.correctable)
    }

    /// Sign the frame puts on a readout of `o`.
    pub fn sign_on(&self, o: &PauliWord) -> i8 {
        if self.correction.commutes(o) {
            1
        } else {
            -1
        }
    }

    pub fn conjugate(&self, gate: LogicalGate) -> Result<PauliFrame> {
        let g = match gate {
            LogicalGate::H => TransversalGate::H,
            LogicalGate::S => TransversalGate::ZS,
            LogicalGate::Z => TransversalGate::Z,
        };
        Ok(PauliFrame { correction: conjugate_transversal(&self.correction, g)?, log: self.log.clone() })
    }
}

/// Frame after folding in the newest syndrome.
pub fn update_frame(history: &SyndromeHistory, frame: &PauliFrame) -> Result<PauliFrame> {
    let m = history
        .last_syndrome()
        .ok_or_else(|| QwecError::Precondition("no cycle recorded".into()))?;
    let mut f = frame.clone();
    match decode_lookup(m) {
        Decoded::Correction(c) => {
            f.correction = f.correction * c;
            f.log.push(FrameEntry { m: m.to_string(), correctable: true });
        }
        Decoded::Uncorrectable => f.log.push(FrameEntry { m: m.to_string(), correctable: false }),
    }
    Ok(f)
}

/// Applies the frame's correction to the state and clears it. The history's
/// expected signs follow the stabilizers the correction flips.
pub fn apply_frame<T: Real>(
    state: &mut StateVector<T>,
    history: &mut SyndromeHistory,
    frame: &PauliFrame,
) -> Result<PauliFrame> {
    state.apply_pauli(&frame.correction)?;
    for (i, e) in history.expected.iter_mut().enumerate() {
        if !stabilizer(i).commutes(&frame.correction) {
            *e = -*e;
        }
    }
    Ok(PauliFrame { correction: PauliWord::identity(), log: frame.log.clone() })
}

/// (X, Y, Z) expectations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogicalReadout<T> {
    /// bare Xbar, iXbarZbar, Zbar, after the frame
    pub bloch: [T; 3],
    /// with the dressed X = g Xbar, after the frame
    pub gauge_fixed: [T; 3],
    /// bare operators before the frame
    pub raw: [T; 3],
}

impl<T: Real> LogicalReadout<T> {
    pub fn norm(&self) -> T {
        self.bloch.iter().fold(T::zero(), |a, b| a + *b * *b).sqrt()
    }
}

/// g Xbar, the X that logical Clifford gates act on.
pub fn dressed_x() -> PauliWord {
    gauge_g() * logical_x()
}

fn y_of(x: PauliWord) -> PauliWord {
    (x * logical_z()).with_phase(1)
}

pub fn logical_readout<T: Real>(state: &StateVector<T>, frame: &PauliFrame) -> Result<LogicalReadout<T>> {
    let bare = [logical_x(), y_of(logical_x()), logical_z()];
    let dressed = [dressed_x(), y_of(dressed_x()), logical_z()];
    let mut out = LogicalReadout { bloch: [T::zero(); 3], gauge_fixed: [T::zero(); 3], raw: [T::zero(); 3] };
    for i in 0..3 {
        let r = state.expectation(&bare[i])?;
        out.raw[i] = r;
        out.bloch[i] = if frame.sign_on(&bare[i]) > 0 { r } else { -r };
        let d = state.expectation(&dressed[i])?;
        out.gauge_fixed[i] = if frame.sign_on(&dressed[i]) > 0 { d } else { -d };
    }
    Ok(out)
}

fn project_or_sample<T: Real>(
    s: &mut StateVector<T>,
    w: &PauliWord,
    forced: Option<i8>,
    rng: &mut Option<&mut dyn RngCore>,
) -> Result<i8> {
    let sign = match (forced, rng.as_mut()) {
        (Some(x), _) => x,
        (None, Some(r)) => {
            let pp = (T::one() + s.expectation(w)?) * T::lit(0.5);
            let u: f64 = r.random();
            if T::lit(u) < pp {
                1
            } else {
                -1
            }
        }
        (None, None) => 1,
    };
    s.project_pauli(w, sign)?;
    Ok(sign)
}

/// Projective preparation of |0>_L from the all-(0, 00) state.
///
/// A requested sign that the projection cannot reach (the vacuum is a +1
/// eigenstate of every Z-type generator and of Zbar) is produced afterwards:
/// a destabilizer for s_i, Xbar for Zbar, and g0Z for g. Each of these flips
/// only its own sign.
pub fn prepare_logical_zero<T: Real>(
    layout: Layout,
    policy: PrepPolicy<'_>,
) -> Result<(StateVector<T>, SyndromeHistory, Signs)> {
    let mut s = StateVector::vacuum(layout);
    let (forced, mut rng, zsign, gsign) = match policy {
        PrepPolicy::Forced(sg) => (Some(sg.stabilizers), None, sg.logical_z, sg.g),
        PrepPolicy::Random(r, z, g) => (None, Some(r), z, g),
    };
    let mut reference = [1i8; 6];
    let mut fixes = PauliWord::identity();
    for (i, r) in reference.iter_mut().enumerate() {
        let want = forced.map(|f| f[i]);
        let got = project_reachable(&mut s, &stabilizer(i), want, &mut rng)?;
        *r = want.unwrap_or(got);
        if got != *r {
            fixes = fixes * destabilizer(i);
        }
    }
    s.project_pauli(&logical_z(), 1)?;
    // g contains s0, s1 and s4, so their fixes go in before g is read
    s.apply_pauli(&fixes)?;
    let got = project_reachable(&mut s, &gauge_g(), forced.map(|_| gsign), &mut rng)?;
    let mut fixes = PauliWord::identity();
    if got != gsign {
        fixes = fixes * gauge_z(0);
    }
    if zsign < 0 {
        fixes = fixes * logical_x();
    }
    s.apply_pauli(&fixes)?;
    let signs = Signs { stabilizers: reference, logical_z: zsign, g: gsign };
    Ok((s, SyndromeHistory::new(reference), signs))
}

/// Projects onto the wanted sign if it has weight, else onto the other one;
/// with no wish the sign is sampled. Returns the sign projected onto.
fn project_reachable<T: Real>(
    s: &mut StateVector<T>,
    w: &PauliWord,
    want: Option<i8>,
    rng: &mut Option<&mut dyn RngCore>,
) -> Result<i8> {
    match want {
        Some(x) => {
            let p = (T::one() + T::lit(x as f64) * s.expectation(w)?) * T::lit(0.5);
            let sign = if p > T::lit(1e-12) { x } else { -x };
            s.project_pauli(w, sign)?;
            Ok(sign)
        }
        None => project_or_sample(s, w, None, rng),
    }
}

/// Encodes alpha|0>_L + beta|1>_L through the external particle.
///
/// `zero` holds |0>_L; the external particle is added (or reloaded) with coin
/// alpha|0> + beta|1>, then CNOT, H on its coin, a coin measurement and a
/// conditional Zbar. The external coin is reset to 0 at the end.
pub fn encode<T: Real>(
    alpha: C<T>,
    beta: C<T>,
    zero: &StateVector<T>,
    policy: MeasurePolicy<'_>,
) -> Result<Vec<(T, StateVector<T>)>> {
    let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    if n == T::zero() {
        return Err(QwecError::Precondition("alpha = beta = 0".into()));
    }
    let (a, b) = (alpha / n, beta / n);
    let data = if zero.layout().external { zero.without_external()? } else { zero.clone() };
    let mut s = data.with_external([a, b])?;
    let pex = s.layout().external_index().expect("external present");
    run_unitary(&build_cnot_coin_to_logical(), &mut s)?;
    s.apply_local_coin(pex, &Mat2::h())?;
    let finish = |mut st: StateVector<T>, bit: u8| -> Result<StateVector<T>> {
        if bit == 1 {
            run_unitary(&build_logical_clifford(LogicalGate::Z), &mut st)?;
            st.apply_local_coin(pex, &Mat2::x())?;
        }
        Ok(st)
    };
    match s.measure_coin(pex, policy)? {
        Measured::Outcome { bit, probability } => Ok(vec![(probability, finish(s, bit)?)]),
        Measured::Branches(br) => {
            let mut out = Vec::new();
            for (bit, (p, st)) in br.into_iter().enumerate() {
                if let Some(st) = st {
                    out.push((p, finish(st, bit as u8)?));
                }
            }
            Ok(out)
        }
    }
}

/// |0>_L and |1>_L = Xbar|0>_L on the data-only layout, built through the walk.
#[derive(Clone, Debug)]
pub struct LogicalBasis<T> {
    pub zero: StateVector<T>,
    pub one: StateVector<T>,
    pub history: SyndromeHistory,
}

impl<T: Real> LogicalBasis<T> {
    pub fn new(signs: Signs) -> Result<Self> {
        let (z, history, _) = prepare_logical_zero::<T>(Layout::data_only(), PrepPolicy::Forced(signs))?;
        let zero = encode(cone(), czero(), &z, MeasurePolicy::Forced(0))?.remove(0).1.without_external()?;
        let one = encode(czero(), cone(), &z, MeasurePolicy::Forced(0))?.remove(0).1.without_external()?;
        Ok(LogicalBasis { zero, one, history })
    }

    pub fn state(&self, alpha: C<T>, beta: C<T>) -> StateVector<T> {
        let mut s = self.zero.clone();
        s.scale(alpha);
        s.axpy(beta, &self.one).expect("same layout");
        s.normalize();
        s
    }
}

fn eigenvalues_of(records: &[MeasRecord]) -> Result<[i8; 6]> {
    let mut e = [0i8; 6];
    for r in records {
        if let MeasTag::S(i) = r.tag {
            e[i as usize] = if r.bit == 0 { 1 } else { -1 };
        }
    }
    if e.contains(&0) {
        return Err(QwecError::Program("cycle did not record all six stabilizers".into()));
    }
    Ok(e)
}

pub fn cycle_program<T: Real>(history: &SyndromeHistory) -> WalkProgram<T> {
    build_full_cycle(history.next_parity())
}

/// One sampled syndrome cycle.
pub fn run_cycle<T: Real>(
    state: &mut StateVector<T>,
    history: &mut SyndromeHistory,
    rng: &mut dyn RngCore,
) -> Result<Syndrome> {
    let rec = run_sampled(&cycle_program(history), state, rng)?;
    Ok(history.push(eigenvalues_of(&rec)?))
}

/// One cycle with every outcome path enumerated.
pub fn run_cycle_branches<T: Real>(
    state: &StateVector<T>,
    history: &SyndromeHistory,
    injector: Option<&mut Injector<'_, T>>,
) -> Result<Vec<(T, StateVector<T>, SyndromeHistory)>> {
    let br = run_branches_with(&cycle_program(history), state, BRANCH_CUTOFF, injector)?;
    br.into_iter()
        .map(|b| {
            let mut h = history.clone();
            h.push(eigenvalues_of(&b.records)?);
            Ok((b.probability, b.state, h))
        })
        .collect()
}

/// Applies a transversal logical Clifford and carries the frame through it.
pub fn apply_logical_clifford<T: Real>(
    state: &mut StateVector<T>,
    frame: &PauliFrame,
    gate: LogicalGate,
) -> Result<PauliFrame> {
    run_unitary(&build_logical_clifford(gate), state)?;
    frame.conjugate(gate)
}

/// Outcome of a g measurement.
#[derive(Clone, Debug)]
pub struct GOutcome<T> {
    pub sign: i8,
    pub probability: T,
    pub state: StateVector<T>,
}

/// Eigenvalue of g, by projection. Needs a completed cycle so s4 is current.
///
/// The sign is reported relative to the frame: a frame that anticommutes with g
/// flips it.
pub fn measure_g<T: Real>(
    state: &StateVector<T>,
    history: &SyndromeHistory,
    frame: &PauliFrame,
    policy: MeasurePolicy<'_>,
) -> Result<Vec<GOutcome<T>>> {
    if !history.has_completed_cycle() {
        return Err(QwecError::Precondition("measure_g needs a completed syndrome cycle (stale s4)".into()));
    }
    let g = gauge_g();
    let fs = frame.sign_on(&g);
    let one = |sign: i8| -> Result<Option<GOutcome<T>>> {
        let mut s = state.clone();
        match s.project_pauli(&g, sign) {
            Ok(p) => Ok(Some(GOutcome { sign: sign * fs, probability: p, state: s })),
            Err(QwecError::ZeroProbability(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    match policy {
        MeasurePolicy::Forced(bit) => {
            let sign = if bit == 0 { 1 } else { -1 };
            Ok(vec![one(sign)?.ok_or(QwecError::ZeroProbability(0.0))?])
        }
        MeasurePolicy::Random(rng) => {
            let pp = (T::one() + state.expectation(&g)?) * T::lit(0.5);
            let u: f64 = rng.random();
            let sign = if T::lit(u) < pp { 1 } else { -1 };
            Ok(vec![one(sign)?.ok_or(QwecError::ZeroProbability(0.0))?])
        }
        MeasurePolicy::BothBranches => Ok([1, -1].into_iter().filter_map(|s| one(s).transpose()).collect::<Result<_>>()?),
    }
}

/// Eigenvalue of h = g0Z g1Z through the walk: P1 reads 1 exactly when h = +1.
/// Returns (h, probability, state) per outcome path.
pub fn measure_h_walk<T: Real>(state: &StateVector<T>) -> Result<Vec<(i8, T, StateVector<T>)>> {
    let br = run_branches(&build_gauge_zz_measurement(), state, BRANCH_CUTOFF)?;
    br.into_iter()
        .map(|b| {
            let r = b
                .records
                .iter()
                .find(|r| r.tag == MeasTag::Zz(0))
                .ok_or_else(|| QwecError::Program("no zz0 record".into()))?;
            Ok((if r.bit == 1 { 1 } else { -1 }, b.probability, b.state))
        })
        .collect()
}

/// g' = H g H, the gauge operator read out inside the T protocol.
pub fn gauge_g_prime() -> PauliWord {
    conjugate_transversal(&gauge_g(), TransversalGate::H).expect("Clifford")
}

fn t_stage<T: Real>(s: &mut StateVector<T>, history: &SyndromeHistory, sign: i8) -> Result<T> {
    let pex = s.layout().external_index().expect("checked");
    run_unitary(&build_cphase(), s)?;
    run_unitary(&build_logical_clifford(LogicalGate::H), s)?;
    let out = measure_g(s, history, &PauliFrame::default(), MeasurePolicy::Forced(if sign > 0 { 0 } else { 1 }))?;
    let o = out.into_iter().next().expect("one outcome");
    *s = o.state;
    run_unitary(&build_logical_clifford(LogicalGate::H), s)?;
    if sign < 0 {
        s.apply_local_coin(pex, &Mat2::x())?;
    }
    Ok(o.probability)
}

/// The three T stages with both g outcomes forced. Returns the path
/// probability and the data state with the external particle dropped.
pub fn logical_t_stages<T: Real>(
    state: &StateVector<T>,
    history: &SyndromeHistory,
    signs: [i8; 2],
) -> Result<(T, StateVector<T>)> {
    let mut s = if state.layout().external { state.clone() } else { state.with_external([cone(), czero()])? };
    let pex = s.layout().external_index().expect("external present");
    if s.coin_probability(pex, 1)? > T::lit(1e-12) {
        return Err(QwecError::Precondition("external particle must start at coin 0".into()));
    }
    let mut p = t_stage(&mut s, history, signs[0])?;
    s.apply_local_coin(pex, &Mat2::t_c().adjoint())?;
    p = p * t_stage(&mut s, history, signs[1])?;
    Ok((p, s.without_external()?))
}

/// Measures (s4, s5) and undoes g' on the branch where s5 flipped.
fn t_cleanup<T: Real>(branch: StateVector<T>, records: &[MeasRecord], history: &SyndromeHistory) -> Result<StateVector<T>> {
    let mut s = branch;
    let e5 = history.last_eigenvalues()[5];
    let bit = records
        .iter()
        .find(|r| r.tag == MeasTag::S(5))
        .ok_or_else(|| QwecError::Program("no s5 record".into()))?
        .bit;
    let now = if bit == 0 { 1 } else { -1 };
    if now != e5 {
        s.apply_pauli(&gauge_g_prime())?;
    }
    Ok(s)
}

/// Logical T with all measurement outcomes drawn from `rng`.
pub fn logical_t<T: Real>(
    state: &StateVector<T>,
    history: &SyndromeHistory,
    rng: &mut dyn RngCore,
) -> Result<StateVector<T>> {
    let ext = state.layout().external;
    let mut s = if ext { state.clone() } else { state.with_external([cone(), czero()])? };
    let pex = s.layout().external_index().expect("external present");
    for stage in 0..3 {
        if stage == 1 {
            s.apply_local_coin(pex, &Mat2::t_c().adjoint())?;
            continue;
        }
        run_unitary(&build_cphase(), &mut s)?;
        run_unitary(&build_logical_clifford(LogicalGate::H), &mut s)?;
        let o = measure_g(&s, history, &PauliFrame::default(), MeasurePolicy::Random(&mut *rng))?.remove(0);
        s = o.state;
        run_unitary(&build_logical_clifford(LogicalGate::H), &mut s)?;
        if o.sign < 0 {
            s.apply_local_coin(pex, &Mat2::x())?;
        }
    }
    let mut d = s.without_external()?;
    let rec = run_sampled(&build_syndrome_step(SyndromePair::S4S5), &mut d, rng)?;
    let d = t_cleanup(d, &rec, history)?;
    if ext {
        d.with_external([cone(), czero()])
    } else {
        Ok(d)
    }
}

/// Logical T with every outcome path enumerated, as (probability, data state).
pub fn logical_t_branches<T: Real>(state: &StateVector<T>, history: &SyndromeHistory) -> Result<Vec<(T, StateVector<T>)>> {
    let mut out = Vec::new();
    for s1 in [1i8, -1] {
        for s2 in [1i8, -1] {
            let (p, d) = match logical_t_stages(state, history, [s1, s2]) {
                Ok(x) => x,
                Err(QwecError::ZeroProbability(_)) => continue,
                Err(e) => return Err(e),
            };
            for b in run_branches(&build_syndrome_step(SyndromePair::S4S5), &d, BRANCH_CUTOFF)? {
                let st = t_cleanup(b.state, &b.records, history)?;
                out.push((p * b.probability, st));
            }
        }
    }
    Ok(out)
}

/// Serializable record of one run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Transcript {
    pub reference: [i8; 6],
    pub cycles: Vec<CycleRecord>,
    pub injected: Vec<serde_json::Value>,
    pub frame: PauliFrame,
    pub readout: Option<LogicalReadout<f64>>,
}

impl Transcript {
    pub fn new<T: Real>(history: &SyndromeHistory, frame: &PauliFrame, readout: Option<&LogicalReadout<T>>) -> Self {
        let conv = |a: [T; 3]| a.map(|x| x.to_f64_lossy());
        Transcript {
            reference: history.reference,
            cycles: history.cycles.clone(),
            injected: Vec::new(),
            frame: frame.clone(),
            readout: readout.map(|r| LogicalReadout { bloch: conv(r.bloch), gauge_fixed: conv(r.gauge_fixed), raw: conv(r.raw) }),
        }
    }
}

/// Runs the forced-outcome path of a program and returns the records.
pub fn run_program_forced<T: Real>(prog: &WalkProgram<T>, state: &mut StateVector<T>, bits: &[u8]) -> Result<Vec<MeasRecord>> {
    Ok(run_forced(prog, state, bits)?.0)
}
