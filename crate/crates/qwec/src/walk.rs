//! State vector of the multi-particle walk and the C, S, N operators.
//!
//! Particle digit b = 4c + 2x + y; particle p occupies bits 3p..3p+2 with P0
//! least significant and the external particle, when present, last.

use crate::error::{QwecError, Result};
use crate::linalg::{Dense, Mat2};
use crate::pauli::PauliWord;
use crate::scalar::{cone, czero, ipow, Real, C};
use rand::{Rng, RngCore};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Vertex of the square. Stored as v = 2x + y.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(u8);

impl Vertex {
    pub const V00: Vertex = Vertex(0);
    pub const V10: Vertex = Vertex(2);
    pub const V11: Vertex = Vertex(3);
    pub const V01: Vertex = Vertex(1);
    /// Clockwise order starting at 00.
    pub const CYCLE: [Vertex; 4] = [Vertex::V00, Vertex::V10, Vertex::V11, Vertex::V01];

    pub fn from_xy(x: u8, y: u8) -> Self {
        Vertex(((x & 1) << 1) | (y & 1))
    }

    pub fn from_code(v: u8) -> Self {
        Vertex(v & 3)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn x(self) -> u8 {
        self.0 >> 1
    }

    pub fn y(self) -> u8 {
        self.0 & 1
    }

    pub fn next(self) -> Vertex {
        Vertex(NEXT[self.0 as usize])
    }

    pub fn label(self) -> String {
        format!("{}{}", self.x(), self.y())
    }

    pub fn parse(s: &str) -> Result<Vertex> {
        match s {
            "00" => Ok(Vertex::V00),
            "10" => Ok(Vertex::V10),
            "11" => Ok(Vertex::V11),
            "01" => Ok(Vertex::V01),
            o => Err(QwecError::Parse(format!("bad vertex {o:?}"))),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

// clockwise successor indexed by v = 2x + y: 00->10, 01->00, 10->11, 11->01
const NEXT: [u8; 4] = [2, 0, 3, 1];

/// Particles P0..P(chain-1) in a nested chain, plus an optional external one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Layout {
    pub chain: usize,
    pub external: bool,
}

impl Layout {
    /// P0..P4 without the external particle.
    pub fn data_only() -> Self {
        Layout { chain: 5, external: false }
    }

    /// P0..P4 plus the external particle.
    pub fn with_external() -> Self {
        Layout { chain: 5, external: true }
    }

    pub fn particles(&self) -> usize {
        self.chain + self.external as usize
    }

    pub fn external_index(&self) -> Option<usize> {
        self.external.then_some(self.chain)
    }

    pub fn dim(&self) -> usize {
        1 << (3 * self.particles())
    }

    pub fn check_particle(&self, p: usize) -> Result<()> {
        if p < self.particles() {
            Ok(())
        } else {
            Err(QwecError::Unhoused(p))
        }
    }
}

/// Vertex-conditioned coin operators, identity where unset.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinSpec<T> {
    entries: Vec<[Option<Mat2<T>>; 4]>,
}

impl<T: Real> Default for CoinSpec<T> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<T: Real> CoinSpec<T> {
    pub fn identity() -> Self {
        CoinSpec { entries: vec![[None; 4]; 6] }
    }

    pub fn set(mut self, particle: usize, v: Vertex, u: Mat2<T>) -> Self {
        if particle >= self.entries.len() {
            self.entries.resize(particle + 1, [None; 4]);
        }
        self.entries[particle][v.code()] = if u.is_identity() { None } else { Some(u) };
        self
    }

    pub fn set_all(self, particle: usize, u: Mat2<T>) -> Self {
        Vertex::CYCLE.iter().fold(self, |s, v| s.set(particle, *v, u))
    }

    pub fn get(&self, particle: usize, v: Vertex) -> Mat2<T> {
        self.entries
            .get(particle)
            .and_then(|e| e[v.code()])
            .unwrap_or_else(Mat2::identity)
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().all(|e| e.iter().all(|u| u.is_none()))
    }

    /// (particle, vertex, op) for every non-identity entry.
    pub fn nontrivial(&self) -> Vec<(usize, Vertex, Mat2<T>)> {
        let mut v = Vec::new();
        for (p, e) in self.entries.iter().enumerate() {
            for vx in Vertex::CYCLE {
                if let Some(u) = e[vx.code()] {
                    v.push((p, vx, u));
                }
            }
        }
        v
    }

    pub fn adjoint(&self) -> Self {
        CoinSpec {
            entries: self.entries.iter().map(|e| e.map(|u| u.map(|m| m.adjoint()))).collect(),
        }
    }

    pub fn validate(&self, tol: T) -> Result<()> {
        for (p, v, u) in self.nontrivial() {
            u.check_unitary(tol, &format!("coin entry (P{p}, {v})"))?;
        }
        Ok(())
    }

    /// 8x8 single-particle form: block diagonal over vertices.
    pub fn particle_matrix(&self, particle: usize) -> Dense<T> {
        let mut m = Dense::zeros(8, 8);
        for v in Vertex::CYCLE {
            let u = self.get(particle, v);
            for a in 0..2 {
                for b in 0..2 {
                    m.set(4 * a + v.code(), 4 * b + v.code(), u.m[a][b]);
                }
            }
        }
        m
    }
}

/// 8x8 permutation of one shift step: coin 1 moves clockwise.
pub fn shift_matrix<T: Real>() -> Dense<T> {
    let mut m = Dense::zeros(8, 8);
    for d in 0..8usize {
        m.set(shift_digit(d), d, cone());
    }
    m
}

/// The bare vertex rotation R on the 4-dim position space.
pub fn rotation_matrix<T: Real>() -> Dense<T> {
    let mut m = Dense::zeros(4, 4);
    for v in 0..4usize {
        m.set(NEXT[v] as usize, v, cone());
    }
    m
}

fn shift_digit(d: usize) -> usize {
    if d & 4 != 0 {
        4 | NEXT[d & 3] as usize
    } else {
        d
    }
}

#[inline]
fn digit(k: usize, p: usize) -> usize {
    (k >> (3 * p)) & 7
}

/// Sign picked up by basis state k under N.
pub fn neighbor_sign(layout: &Layout, k: usize) -> bool {
    let mut flip = false;
    for i in 0..layout.chain.saturating_sub(1) {
        if digit(k, i) == digit(k, i + 1) {
            flip = !flip;
        }
    }
    if let Some(e) = layout.external_index() {
        let de = digit(k, e);
        let dq = digit(k, layout.chain - 1);
        if external_pair(de, dq) {
            flip = !flip;
        }
    }
    flip
}

struct Tables {
    shift: Vec<u32>,
    neighbor: Vec<bool>,
}

/// Shift targets and N signs, built once per layout.
fn tables(layout: Layout) -> Arc<Tables> {
    static CACHE: OnceLock<Mutex<HashMap<Layout, Arc<Tables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut m = cache.lock().expect("table cache");
    m.entry(layout)
        .or_insert_with(|| {
            let n = layout.particles();
            let dim = layout.dim();
            let shift = (0..dim)
                .map(|k| {
                    let mut t = k;
                    for p in 0..n {
                        let d = digit(k, p);
                        if d & 4 != 0 {
                            t = (t & !(7 << (3 * p))) | (shift_digit(d) << (3 * p));
                        }
                    }
                    t as u32
                })
                .collect();
            let neighbor = (0..dim).map(|k| neighbor_sign(&layout, k)).collect();
            Arc::new(Tables { shift, neighbor })
        })
        .clone()
}

/// External particle at 10 with P4 at 00, or at 11 with P4 at 01, same coin.
pub fn external_pair(de: usize, d4: usize) -> bool {
    let same_coin = (de >> 2) == (d4 >> 2);
    let (ve, v4) = (de & 3, d4 & 3);
    same_coin
        && ((ve == Vertex::V10.code() && v4 == Vertex::V00.code())
            || (ve == Vertex::V11.code() && v4 == Vertex::V01.code()))
}

/// How a coin measurement is resolved.
pub enum MeasurePolicy<'a> {
    Random(&'a mut dyn RngCore),
    Forced(u8),
    BothBranches,
}

#[derive(Clone, Debug)]
pub enum Measured<T> {
    Outcome { bit: u8, probability: T },
    Branches([(T, Option<StateVector<T>>); 2]),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    layout: Layout,
    amps: Vec<C<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn basis(layout: Layout, index: usize) -> Self {
        let mut amps = vec![czero(); layout.dim()];
        amps[index] = cone();
        StateVector { layout, amps }
    }

    /// Everything at coin 0, vertex 00.
    pub fn vacuum(layout: Layout) -> Self {
        Self::basis(layout, 0)
    }

    pub fn from_amplitudes(layout: Layout, amps: Vec<C<T>>) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(QwecError::Dimension(amps.len(), layout.dim()));
        }
        Ok(StateVector { layout, amps })
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C<T>] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |a, z| a + z.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) -> T {
        let n = self.norm();
        if n > T::zero() {
            let inv = T::one() / n;
            for a in &mut self.amps {
                *a = *a * inv;
            }
        }
        n
    }

    pub fn scale(&mut self, s: C<T>) {
        for a in &mut self.amps {
            *a = *a * s;
        }
    }

    pub fn inner(&self, o: &Self) -> Result<C<T>> {
        if self.amps.len() != o.amps.len() {
            return Err(QwecError::Dimension(self.amps.len(), o.amps.len()));
        }
        Ok(self.amps.iter().zip(&o.amps).fold(czero(), |a, (x, y)| a + x.conj() * *y))
    }

    /// |<a|b>|^2
    pub fn fidelity(&self, o: &Self) -> Result<T> {
        Ok(self.inner(o)?.norm_sqr())
    }

    /// a + s b, same layout.
    pub fn axpy(&mut self, s: C<T>, o: &Self) -> Result<()> {
        if self.amps.len() != o.amps.len() {
            return Err(QwecError::Dimension(self.amps.len(), o.amps.len()));
        }
        for (a, b) in self.amps.iter_mut().zip(&o.amps) {
            *a = *a + s * *b;
        }
        Ok(())
    }

    pub fn apply_coin(&mut self, spec: &CoinSpec<T>) {
        let n = self.layout.particles();
        for p in 0..n {
            let ops = [0, 1, 2, 3].map(|v| spec.get(p, Vertex::from_code(v)));
            if ops.iter().all(|u| u.is_identity()) {
                continue;
            }
            let cb = 1usize << (3 * p + 2);
            for k in 0..self.amps.len() {
                if k & cb != 0 {
                    continue;
                }
                let u = &ops[digit(k, p) & 3];
                let (a, b) = (self.amps[k], self.amps[k | cb]);
                self.amps[k] = u.m[0][0] * a + u.m[0][1] * b;
                self.amps[k | cb] = u.m[1][0] * a + u.m[1][1] * b;
            }
        }
    }

    /// u on the coin of one particle, at every vertex.
    pub fn apply_local_coin(&mut self, p: usize, u: &Mat2<T>) -> Result<()> {
        self.layout.check_particle(p)?;
        self.apply_coin(&CoinSpec::identity().set_all(p, *u));
        Ok(())
    }

    pub fn apply_shift(&mut self) {
        let tb = tables(self.layout);
        let mut out = vec![czero(); self.amps.len()];
        for (a, t) in self.amps.iter().zip(&tb.shift) {
            out[*t as usize] = *a;
        }
        self.amps = out;
    }

    pub fn apply_neighbor(&mut self) {
        let tb = tables(self.layout);
        for (a, f) in self.amps.iter_mut().zip(&tb.neighbor) {
            if *f {
                *a = -*a;
            }
        }
    }

    /// Dense 8x8 u on the (c, x, y) factor of particle p.
    pub fn apply_particle_unitary(&mut self, p: usize, u: &Dense<T>) -> Result<()> {
        self.layout.check_particle(p)?;
        if u.rows != 8 || u.cols != 8 {
            return Err(QwecError::Dimension(u.rows, 8));
        }
        u.check_unitary(T::lit(1e-12), "particle unitary")?;
        self.apply_particle_matrix(p, u);
        Ok(())
    }

    /// Same as apply_particle_unitary without the unitarity check.
    pub fn apply_particle_matrix(&mut self, p: usize, u: &Dense<T>) {
        let sh = 3 * p;
        let stride = 1usize << sh;
        let mut buf = [czero(); 8];
        for k in 0..self.amps.len() {
            if digit(k, p) != 0 {
                continue;
            }
            for (d, b) in buf.iter_mut().enumerate() {
                *b = self.amps[k | (d * stride)];
            }
            for d in 0..8 {
                let mut acc = czero();
                for (e, b) in buf.iter().enumerate() {
                    acc = acc + u.data[d * 8 + e] * *b;
                }
                self.amps[k | (d * stride)] = acc;
            }
        }
    }

    fn check_word(&self, w: &PauliWord) -> Result<()> {
        let bits = 3 * self.layout.particles();
        if bits < 32 && ((w.x_mask() | w.z_mask()) >> bits) != 0 {
            let p = (32 - (w.x_mask() | w.z_mask()).leading_zeros() as usize - 1) / 3;
            return Err(QwecError::Unhoused(p));
        }
        Ok(())
    }

    /// w|psi> as a new vector.
    pub fn pauli_image(&self, w: &PauliWord) -> Result<Vec<C<T>>> {
        self.check_word(w)?;
        let mut out = vec![czero(); self.amps.len()];
        for (k, a) in self.amps.iter().enumerate() {
            let (e, t) = w.act_on_index(k);
            out[t] = *a * ipow::<T>(e);
        }
        Ok(out)
    }

    pub fn apply_pauli(&mut self, w: &PauliWord) -> Result<()> {
        self.amps = self.pauli_image(w)?;
        Ok(())
    }

    pub fn expectation(&self, w: &PauliWord) -> Result<T> {
        if !w.is_hermitian() {
            return Err(QwecError::NotHermitian(w.to_string()));
        }
        self.check_word(w)?;
        let mut acc = czero::<T>();
        for (k, a) in self.amps.iter().enumerate() {
            let (e, t) = w.act_on_index(k);
            acc = acc + self.amps[t].conj() * *a * ipow::<T>(e);
        }
        Ok(acc.re)
    }

    /// Applies (1 + sign w)/2, renormalises, returns the prior probability.
    pub fn project_pauli(&mut self, w: &PauliWord, sign: i8) -> Result<T> {
        if !w.is_hermitian() {
            return Err(QwecError::NotHermitian(w.to_string()));
        }
        let img = self.pauli_image(w)?;
        let half = T::lit(0.5);
        let s = if sign >= 0 { T::one() } else { -T::one() };
        for (a, b) in self.amps.iter_mut().zip(img) {
            *a = (*a + b * s) * half;
        }
        let p = self.norm_sqr();
        if p < T::lit(1e-12) {
            return Err(QwecError::ZeroProbability(p.to_f64_lossy()));
        }
        self.normalize();
        Ok(p)
    }

    pub fn coin_probability(&self, p: usize, bit: u8) -> Result<T> {
        self.layout.check_particle(p)?;
        let cb = 1usize << (3 * p + 2);
        let want = if bit & 1 == 1 { cb } else { 0 };
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(k, _)| k & cb == want)
            .fold(T::zero(), |a, (_, z)| a + z.norm_sqr()))
    }

    /// Projects the coin of p onto `bit`, returns the prior probability.
    pub fn project_coin(&mut self, p: usize, bit: u8) -> Result<T> {
        let pr = self.coin_probability(p, bit)?;
        if pr < T::lit(1e-12) {
            return Err(QwecError::ZeroProbability(pr.to_f64_lossy()));
        }
        let cb = 1usize << (3 * p + 2);
        let want = if bit & 1 == 1 { cb } else { 0 };
        for (k, a) in self.amps.iter_mut().enumerate() {
            if k & cb != want {
                *a = czero();
            }
        }
        self.normalize();
        Ok(pr)
    }

    pub fn measure_coin(&mut self, p: usize, policy: MeasurePolicy<'_>) -> Result<Measured<T>> {
        match policy {
            MeasurePolicy::Forced(bit) => {
                let probability = self.project_coin(p, bit)?;
                Ok(Measured::Outcome { bit, probability })
            }
            MeasurePolicy::Random(rng) => {
                let p0 = self.coin_probability(p, 0)?;
                let r: f64 = rng.random();
                let bit = if T::lit(r) < p0 { 0 } else { 1 };
                let probability = self.project_coin(p, bit)?;
                Ok(Measured::Outcome { bit, probability })
            }
            MeasurePolicy::BothBranches => {
                let mut out = [(T::zero(), None), (T::zero(), None)];
                for bit in 0..2u8 {
                    let mut s = self.clone();
                    let pr = s.coin_probability(p, bit)?;
                    out[bit as usize] = if pr < T::lit(1e-12) {
                        (pr, None)
                    } else {
                        s.project_coin(p, bit)?;
                        (pr, Some(s))
                    };
                }
                Ok(Measured::Branches(out))
            }
        }
    }

    /// Marginal distribution of a particle's vertex, indexed by Vertex::code.
    pub fn vertex_distribution(&self, p: usize) -> Result<[T; 4]> {
        self.layout.check_particle(p)?;
        let mut d = [T::zero(); 4];
        for (k, a) in self.amps.iter().enumerate() {
            d[digit(k, p) & 3] = d[digit(k, p) & 3] + a.norm_sqr();
        }
        Ok(d)
    }

    /// Drops the external particle, which must sit at (coin 0, 00).
    pub fn without_external(&self) -> Result<Self> {
        let e = self
            .layout
            .external_index()
            .ok_or_else(|| QwecError::Layout("no external particle".into()))?;
        let inner = Layout { chain: self.layout.chain, external: false };
        let d = inner.dim();
        let stray: T = self.amps[d..].iter().fold(T::zero(), |a, z| a + z.norm_sqr());
        if stray > T::lit(1e-12) {
            return Err(QwecError::Precondition(format!(
                "external particle P{e} not parked at (0, 00): stray weight {stray:e}"
            )));
        }
        Ok(StateVector { layout: inner, amps: self.amps[..d].to_vec() })
    }

    /// Appends the external particle at vertex 00 with the given coin amplitudes.
    pub fn with_external(&self, coin: [C<T>; 2]) -> Result<Self> {
        if self.layout.external {
            return Err(QwecError::Layout("external particle already present".into()));
        }
        let layout = Layout { chain: self.layout.chain, external: true };
        let d = self.amps.len();
        let mut amps = vec![czero(); layout.dim()];
        for (k, a) in self.amps.iter().enumerate() {
            amps[k] = *a * coin[0];
            amps[k + 4 * d] = *a * coin[1];
        }
        Ok(StateVector { layout, amps })
    }

    pub fn max_diff(&self, o: &Self) -> T {
        self.amps.iter().zip(&o.amps).fold(T::zero(), |d, (a, b)| d.max((*a - *b).norm()))
    }
}

/// Basis state from one (particle, coin, vertex) placement per particle.
pub fn init_state<T: Real>(layout: Layout, placements: &[(usize, u8, Vertex)]) -> Result<StateVector<T>> {
    let n = layout.particles();
    if n == 0 {
        return Err(QwecError::Layout("empty layout".into()));
    }
    let mut seen = vec![false; n];
    let mut k = 0usize;
    for &(p, c, v) in placements {
        if p >= n {
            return Err(QwecError::Layout(format!("particle {p} not in layout")));
        }
        if seen[p] {
            return Err(QwecError::Layout(format!("duplicate placement for particle {p}")));
        }
        seen[p] = true;
        k |= ((((c & 1) as usize) << 2) | v.code()) << (3 * p);
    }
    if let Some(p) = seen.iter().position(|s| !s) {
        return Err(QwecError::Layout(format!("missing placement for particle {p}")));
    }
    Ok(StateVector::basis(layout, k))
}

/// Random normalised state, for property tests.
pub fn random_state<T: Real>(layout: Layout, rng: &mut dyn RngCore) -> StateVector<T> {
    let amps: Vec<C<T>> = (0..layout.dim())
        .map(|_| C::new(T::lit(rng.random::<f64>() - 0.5), T::lit(rng.random::<f64>() - 0.5)))
        .collect();
    let mut s = StateVector { layout, amps };
    s.normalize();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{PauliWord, P0, P1, P2, P3, P4, PEX};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type S = StateVector<f64>;

    fn all_zero(layout: Layout) -> Vec<(usize, u8, Vertex)> {
        (0..layout.particles()).map(|p| (p, 0, Vertex::V00)).collect()
    }

    #[test]
    fn vertex_cycle() {
        let mut v = Vertex::V00;
        let mut seen = vec![];
        for _ in 0..4 {
            seen.push(v.label());
            v = v.next();
        }
        assert_eq!(seen, ["00", "10", "11", "01"]);
        assert_eq!(v, Vertex::V00);
    }

    #[test]
    fn init_examples() {
        let l = Layout::data_only();
        let s: S = init_state(l, &all_zero(l)).unwrap();
        assert_eq!(s.amplitudes()[0], cone());
        let fig_b = [
            (P4, 1, Vertex::V10),
            (P2, 1, Vertex::V10),
            (P0, 1, Vertex::V01),
            (P1, 0, Vertex::V00),
            (P3, 0, Vertex::V00),
        ];
        let s: S = init_state(l, &fig_b).unwrap();
        let k = (6 << 12) | (6 << 6) | 5;
        assert_eq!(s.amplitudes()[k], cone());
        assert!(init_state::<f64>(Layout { chain: 0, external: false }, &[]).is_err());
        assert!(init_state::<f64>(l, &fig_b[..4]).is_err());
        let mut dup = fig_b.to_vec();
        dup[4] = (P1, 0, Vertex::V00);
        assert!(init_state::<f64>(l, &dup).is_err());
    }

    #[test]
    fn coin_examples() {
        let l = Layout::data_only();
        let mut s: S = init_state(l, &all_zero(l)).unwrap();
        let before = s.clone();
        s.apply_coin(&CoinSpec::identity());
        assert_eq!(s, before);

        let mut pl = all_zero(l);
        pl[P1] = (P1, 0, Vertex::V10);
        let mut s: S = init_state(l, &pl).unwrap();
        s.apply_coin(&CoinSpec::identity().set(P1, Vertex::V10, Mat2::x()));
        assert_abs_diff_eq!(s.coin_probability(P1, 1).unwrap(), 1.0, epsilon = 1e-15);

        let mut s: S = init_state(l, &all_zero(l)).unwrap();
        s.apply_coin(&CoinSpec::identity().set(P0, Vertex::V00, Mat2::h()));
        assert_abs_diff_eq!(s.amplitudes()[0].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[4].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn shift_examples() {
        let l = Layout { chain: 1, external: false };
        let mut s: S = init_state(l, &[(0, 1, Vertex::V00)]).unwrap();
        s.apply_shift();
        assert_eq!(s.amplitudes()[4 | Vertex::V10.code()], cone());
        let mut s: S = init_state(l, &[(0, 0, Vertex::V11)]).unwrap();
        let b = s.clone();
        s.apply_shift();
        assert_eq!(s, b);
    }

    #[test]
    fn neighbor_examples() {
        let l = Layout::data_only();
        let mut pl = all_zero(l);
        pl[P0] = (P0, 1, Vertex::V10);
        pl[P1] = (P1, 1, Vertex::V10);
        pl[P2] = (P2, 1, Vertex::V11);
        let mut s: S = init_state(l, &pl).unwrap();
        s.apply_neighbor();
        // P0=P1 flips; P3 = P4 = (0,00) flips too
        assert_eq!(s.amplitudes().iter().find(|a| a.norm() > 0.5).unwrap().re, 1.0);
        pl[P3] = (P3, 1, Vertex::V01);
        let mut s: S = init_state(l, &pl).unwrap();
        s.apply_neighbor();
        assert_eq!(s.amplitudes().iter().find(|a| a.norm() > 0.5).unwrap().re, -1.0);
        pl[P1] = (P1, 0, Vertex::V10);
        let mut s: S = init_state(l, &pl).unwrap();
        s.apply_neighbor();
        assert_eq!(s.amplitudes().iter().find(|a| a.norm() > 0.5).unwrap().re, 1.0);
    }

    #[test]
    fn external_adjacency() {
        let l = Layout::with_external();
        // spread the chain so no nested pair matches
        let pl = [
            (P0, 0, Vertex::V11),
            (P1, 1, Vertex::V11),
            (P2, 0, Vertex::V01),
            (P3, 1, Vertex::V01),
            (P4, 0, Vertex::V00),
            (PEX, 0, Vertex::V10),
        ];
        let mut s: S = init_state(l, &pl).unwrap();
        s.apply_neighbor();
        assert_eq!(s.amplitudes().iter().find(|a| a.norm() > 0.5).unwrap().re, -1.0);
        assert!(external_pair(4 | 3, 4 | 1));
        assert!(!external_pair(3, 4 | 1));
        assert!(!external_pair(0, 0));
    }

    #[test]
    fn dense_rotation_facts() {
        let r = rotation_matrix::<f64>();
        let r2 = r.mul(&r);
        let xx = crate::oracle::dense_of::<f64>(&PauliWord::on_particle(0, "IXX"), &[0]).unwrap();
        let xx4 = Dense::from_fn(4, 4, |i, j| xx.get(i, j));
        assert_eq!(r2.max_diff(&xx4), 0.0);
        assert_eq!(r.adjoint().max_diff(&r2.mul(&r)), 0.0);
        assert_eq!(r2.mul(&r2).max_diff(&Dense::identity(4)), 0.0);
    }

    #[test]
    fn particle_unitary_examples() {
        let l = Layout::data_only();
        let mut s: S = init_state(l, &all_zero(l)).unwrap();
        let b = s.clone();
        s.apply_particle_unitary(P0, &Dense::identity(8)).unwrap();
        assert_eq!(s, b);
        let xc = crate::oracle::dense_of::<f64>(&PauliWord::on_particle(0, "XII"), &[0]).unwrap();
        s.apply_particle_unitary(P0, &xc).unwrap();
        assert_eq!(s.amplitudes()[4], cone());
        let r = shift_matrix::<f64>();
        let r_all = Dense::identity(2).kron(&rotation_matrix());
        let mut s: S = init_state(l, &all_zero(l)).unwrap();
        s.apply_particle_unitary(P2, &r_all.mul(&r_all)).unwrap();
        assert_eq!(s.amplitudes()[3 << 6], cone());
        let bad = r.scale(crate::scalar::c(2.0, 0.0));
        assert!(s.apply_particle_unitary(P2, &bad).is_err());
    }

    #[test]
    fn measurement_examples() {
        let l = Layout { chain: 1, external: false };
        let mut s: S = init_state(l, &[(0, 0, Vertex::V00)]).unwrap();
        match s.measure_coin(0, MeasurePolicy::Forced(0)).unwrap() {
            Measured::Outcome { bit, probability } => {
                assert_eq!(bit, 0);
                assert_abs_diff_eq!(probability, 1.0);
            }
            _ => unreachable!(),
        }
        assert!(s.clone().measure_coin(0, MeasurePolicy::Forced(1)).is_err());
        s.apply_local_coin(0, &Mat2::h()).unwrap();
        match s.measure_coin(0, MeasurePolicy::BothBranches).unwrap() {
            Measured::Branches(b) => {
                assert_abs_diff_eq!(b[0].0, 0.5, epsilon = 1e-15);
                assert_abs_diff_eq!(b[1].0, 0.5, epsilon = 1e-15);
            }
            _ => unreachable!(),
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut t = s.clone();
        let m = t.measure_coin(0, MeasurePolicy::Random(&mut rng)).unwrap();
        assert!(matches!(m, Measured::Outcome { probability, .. } if (probability - 0.5).abs() < 1e-12));
    }

    #[test]
    fn expectation_and_projection() {
        let l = Layout { chain: 1, external: false };
        let s: S = init_state(l, &[(0, 0, Vertex::V00)]).unwrap();
        let zc = PauliWord::on_particle(0, "ZII");
        assert_abs_diff_eq!(s.expectation(&zc).unwrap(), 1.0);
        assert!(s.expectation(&zc.with_phase(1)).is_err());
        let mut t = s.clone();
        assert_abs_diff_eq!(t.project_pauli(&zc, 1).unwrap(), 1.0);
        assert_eq!(t, s);
        assert!(t.project_pauli(&zc, -1).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let l = Layout { chain: 1, external: false };
        let a: S = StateVector::basis(l, 0);
        let mut b = a.clone();
        b.scale(crate::scalar::c(-1.0, 0.0));
        assert_abs_diff_eq!(a.fidelity(&a).unwrap(), 1.0);
        assert_abs_diff_eq!(a.fidelity(&b).unwrap(), 1.0);
        assert_abs_diff_eq!(a.fidelity(&StateVector::basis(l, 1)).unwrap(), 0.0);
        assert!(a.fidelity(&StateVector::basis(Layout::data_only(), 0)).is_err());
    }

    #[test]
    fn external_round_trip() {
        let l = Layout::data_only();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s: S = random_state(l, &mut rng);
        let e = s.with_external([cone(), czero()]).unwrap();
        assert_eq!(e.without_external().unwrap(), s);
        let e1 = s.with_external([czero(), cone()]).unwrap();
        assert!(e1.without_external().is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let l = Layout::data_only();
        let mut s: StateVector<f32> = StateVector::vacuum(l);
        s.apply_coin(&CoinSpec::identity().set_all(P0, Mat2::h()));
        s.apply_shift();
        s.apply_neighbor();
        assert!((s.norm() - 1.0).abs() < 1e-6);
    }
}
