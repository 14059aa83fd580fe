//! Brute-force ground truth: dense Pauli matrices, the code space on the
//! 512-dim data space, and program unitaries extracted column by column.

use crate::error::{QwecError, Result};
use crate::linalg::{Dense, Mat2};
use crate::pauli::{gauge_z, logical_z, stabilizers, PauliWord, DATA};
use crate::schedule::{run_unitary, WalkProgram, WalkStep};
use crate::scalar::{cone, czero, ipow, Real, C};
use crate::walk::{external_pair, shift_matrix, CoinSpec, Layout, StateVector};

/// Largest dense operator this module will build.
pub const MAX_DENSE_DIM: usize = 4096;

fn to_global(local: usize, ordering: &[usize]) -> usize {
    ordering.iter().enumerate().fold(0, |g, (i, p)| g | (((local >> (3 * i)) & 7) << (3 * p)))
}

fn to_local(global: usize, ordering: &[usize]) -> usize {
    ordering.iter().enumerate().fold(0, |l, (i, p)| l | (((global >> (3 * p)) & 7) << (3 * i)))
}

/// Kronecker matrix of `p` over the listed particles, first one least significant.
pub fn dense_of<T: Real>(p: &PauliWord, ordering: &[usize]) -> Result<Dense<T>> {
    let housed = ordering.iter().fold(0u32, |m, q| m | (7 << (3 * q)));
    let stray = (p.x_mask() | p.z_mask()) & !housed;
    if stray != 0 {
        return Err(QwecError::Unhoused(stray.trailing_zeros() as usize / 3));
    }
    let dim = 1usize << (3 * ordering.len());
    if dim > MAX_DENSE_DIM {
        return Err(QwecError::Dimension(dim, MAX_DENSE_DIM));
    }
    let mut m = Dense::zeros(dim, dim);
    for j in 0..dim {
        let (e, t) = p.act_on_index(to_global(j, ordering));
        m.set(to_local(t, ordering), j, ipow(e));
    }
    Ok(m)
}

/// P|v> for a vector on the data space (ordering P0, P2, P4).
pub fn apply_data_word<T: Real>(p: &PauliWord, v: &[C<T>]) -> Vec<C<T>> {
    let mut out = vec![czero(); v.len()];
    for (j, a) in v.iter().enumerate() {
        let (e, t) = p.act_on_index(to_global(j, &DATA));
        out[to_local(t, &DATA)] = *a * ipow::<T>(e);
    }
    out
}

/// Data-space vector placed in the walk space with P1, P3 at (0, 00).
pub fn embed_data<T: Real>(v: &[C<T>], layout: Layout) -> Result<StateVector<T>> {
    if v.len() != 512 {
        return Err(QwecError::Dimension(v.len(), 512));
    }
    let mut amps = vec![czero(); layout.dim()];
    for (j, a) in v.iter().enumerate() {
        amps[to_global(j, &DATA)] = *a;
    }
    StateVector::from_amplitudes(layout, amps)
}

/// Data-space part of a walk state; other particles must sit at (0, 00).
pub fn data_vector<T: Real>(s: &StateVector<T>) -> Result<Vec<C<T>>> {
    let mut v = vec![czero(); 512];
    let mut stray = T::zero();
    for (k, a) in s.amplitudes().iter().enumerate() {
        let back = to_global(to_local(k, &DATA), &DATA);
        if back == k {
            v[to_local(k, &DATA)] = *a;
        } else {
            stray = stray + a.norm_sqr();
        }
    }
    if stray > T::lit(1e-12) {
        return Err(QwecError::Precondition(format!("ancillas not at (0, 00): weight {stray:e}")));
    }
    Ok(v)
}

fn words_with_signs(gens: &[(PauliWord, i8)]) -> Vec<PauliWord> {
    let n = gens.len();
    (0..1usize << n)
        .map(|mask| {
            (0..n).filter(|i| mask >> i & 1 == 1).fold(PauliWord::identity(), |w, i| {
                let (g, s) = gens[i];
                let g = if s < 0 { g.neg() } else { g };
                w * g
            })
        })
        .collect()
}

/// prod_i (1 + s_i g_i)/2 applied to the data basis vector e_k.
fn project_basis<T: Real>(words: &[PauliWord], k: usize) -> Vec<C<T>> {
    let mut v = vec![czero(); 512];
    let norm = T::one() / T::lit(words.len() as f64);
    let g = to_global(k, &DATA);
    for w in words {
        let (e, t) = w.act_on_index(g);
        let i = to_local(t, &DATA);
        v[i] = v[i] + ipow::<T>(e) * norm;
    }
    v
}

fn inner<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).fold(czero(), |s, (x, y)| s + x.conj() * *y)
}

/// Orthonormal basis of the span, dropping vectors below `tol`.
pub fn gram_schmidt<T: Real>(vs: impl IntoIterator<Item = Vec<C<T>>>, tol: T) -> Vec<Vec<C<T>>> {
    let mut basis: Vec<Vec<C<T>>> = Vec::new();
    for mut v in vs {
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x = *x - c * *y;
                }
            }
        }
        let n = inner(&v, &v).re.sqrt();
        if n > tol {
            let inv = T::one() / n;
            basis.push(v.into_iter().map(|x| x * inv).collect());
        }
    }
    basis
}

/// Rank and trace of the joint projector onto the s0..s5 eigenspace with these signs.
pub fn eigenspace_rank<T: Real>(signs: [i8; 6]) -> (usize, T) {
    let gens: Vec<(PauliWord, i8)> = stabilizers().iter().copied().zip(signs).collect();
    let words = words_with_signs(&gens);
    let mut trace = T::zero();
    let cols: Vec<Vec<C<T>>> = (0..512)
        .map(|k| {
            let v = project_basis::<T>(&words, k);
            trace = trace + v[k].re;
            v
        })
        .collect();
    (gram_schmidt(cols, T::lit(1e-9)).len(), trace)
}

/// The 8-dim joint eigenspace of s0..s5, one vector per (Zbar, g0Z, g1Z) sign triple.
#[derive(Clone, Debug)]
pub struct CodespaceBasis<T> {
    pub signs: [i8; 6],
    pub vectors: Vec<([i8; 3], Vec<C<T>>)>,
}

impl<T: Real> CodespaceBasis<T> {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn get(&self, z: i8, g0: i8, g1: i8) -> Option<&Vec<C<T>>> {
        self.vectors.iter().find(|(s, _)| *s == [z, g0, g1]).map(|(_, v)| v)
    }

    /// Logical pair (Zbar = +1, Zbar = -1) at one gauge configuration.
    pub fn logical_pair(&self, g0: i8, g1: i8) -> Option<(&Vec<C<T>>, &Vec<C<T>>)> {
        Some((self.get(1, g0, g1)?, self.get(-1, g0, g1)?))
    }
}

pub fn codespace_basis<T: Real>(signs: [i8; 6]) -> Result<CodespaceBasis<T>> {
    let (rank, _) = eigenspace_rank::<T>(signs);
    if rank == 0 {
        return Err(QwecError::Precondition(format!("inconsistent stabilizer signs {signs:?}")));
    }
    let mut vectors = Vec::new();
    for z in [1i8, -1] {
        for g0 in [1i8, -1] {
            for g1 in [1i8, -1] {
                let mut gens: Vec<(PauliWord, i8)> = stabilizers().iter().copied().zip(signs).collect();
                gens.extend([(logical_z(), z), (gauge_z(0), g0), (gauge_z(1), g1)]);
                let words = words_with_signs(&gens);
                let v = (0..512)
                    .map(|k| project_basis::<T>(&words, k))
                    .find(|v| inner(v, v).re > T::lit(1e-6))
                    .ok_or_else(|| QwecError::Precondition("empty sign sector".into()))?;
                let n = inner(&v, &v).re.sqrt();
                vectors.push(([z, g0, g1], v.into_iter().map(|x| x / n).collect()));
            }
        }
    }
    Ok(CodespaceBasis { signs, vectors })
}

/// Matrix of <out_i| U |in_j> for a measurement-free program.
pub fn extract_unitary<T: Real>(
    program: &WalkProgram<T>,
    inputs: &[StateVector<T>],
    outputs: &[StateVector<T>],
) -> Result<Dense<T>> {
    if program.has_measurement() {
        return Err(QwecError::Program(format!("{} contains a measurement", program.name)));
    }
    let mut m = Dense::zeros(outputs.len(), inputs.len());
    for (j, inp) in inputs.iter().enumerate() {
        let mut s = inp.clone();
        run_unitary(program, &mut s)?;
        for (i, o) in outputs.iter().enumerate() {
            m.set(i, j, o.inner(&s)?);
        }
    }
    Ok(m)
}

/// Single-particle 8x8 unitary of a program acting on a one-particle layout.
pub fn single_particle_unitary<T: Real>(program: &WalkProgram<T>) -> Result<Dense<T>> {
    let l = Layout { chain: 1, external: false };
    let basis: Vec<StateVector<T>> = (0..8).map(|k| StateVector::basis(l, k)).collect();
    extract_unitary(program, &basis, &basis)
}

/// One 8x8 factor on particle p, by explicit index arithmetic.
fn naive_factor<T: Real>(amps: &[C<T>], p: usize, m: &Dense<T>) -> Vec<C<T>> {
    let inner_sz = 1usize << (3 * p);
    let outer = amps.len() / (inner_sz * 8);
    let mut out = vec![czero(); amps.len()];
    for o in 0..outer {
        for i in 0..inner_sz {
            for r in 0..8 {
                let mut acc = czero();
                for cidx in 0..8 {
                    acc = acc + m.get(r, cidx) * amps[(o * 8 + cidx) * inner_sz + i];
                }
                out[(o * 8 + r) * inner_sz + i] = acc;
            }
        }
    }
    out
}

/// Diagonal of N for one adjacent pair, as a 64-entry table over (d_a, d_b).
fn pair_diagonal(external: bool) -> [bool; 64] {
    let mut t = [false; 64];
    for da in 0..8 {
        for db in 0..8 {
            t[da * 8 + db] = if external { external_pair(da, db) } else { da == db };
        }
    }
    t
}

/// Reference application of one step: dense 8x8 factors and pair diagonals.
pub fn naive_apply<T: Real>(s: &StateVector<T>, step: &WalkStep<T>) -> Result<StateVector<T>> {
    let layout = s.layout();
    let n = layout.particles();
    let mut a = s.amplitudes().to_vec();
    match step {
        WalkStep::Coin(spec) => {
            for p in 0..n {
                a = naive_factor(&a, p, &spec.particle_matrix(p));
            }
        }
        WalkStep::LocalCoin(p, u) => {
            let spec = CoinSpec::identity().set_all(*p, *u);
            a = naive_factor(&a, *p, &spec.particle_matrix(*p));
        }
        WalkStep::Shift => {
            let sm = shift_matrix::<T>();
            for p in 0..n {
                a = naive_factor(&a, p, &sm);
            }
        }
        WalkStep::Neighbor => {
            let nested = pair_diagonal(false);
            let ext = pair_diagonal(true);
            let mut pairs: Vec<(usize, usize, &[bool; 64])> =
                (0..layout.chain.saturating_sub(1)).map(|i| (i, i + 1, &nested)).collect();
            if let Some(e) = layout.external_index() {
                pairs.push((e, layout.chain - 1, &ext));
            }
            for (pa, pb, tab) in pairs {
                for (k, x) in a.iter_mut().enumerate() {
                    let da = (k >> (3 * pa)) & 7;
                    let db = (k >> (3 * pb)) & 7;
                    if tab[da * 8 + db] {
                        *x = -*x;
                    }
                }
            }
        }
        other => return Err(QwecError::Program(format!("naive_apply does not handle {other:?}"))),
    }
    StateVector::from_amplitudes(layout, a)
}

/// Dense 8x8 form of a coin operator on every vertex.
pub fn coin_dense<T: Real>(u: &Mat2<T>) -> Dense<T> {
    Dense::coin_op(u)
}

/// c0 |0><0| (x) A + c1 |1><1| (x) B style block matrix helper: diag(blocks).
pub fn block_diag<T: Real>(blocks: &[Dense<T>]) -> Dense<T> {
    let n: usize = blocks.iter().map(|b| b.rows).sum();
    let mut m = Dense::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows {
            for j in 0..b.cols {
                m.set(off + i, off + j, b.get(i, j));
            }
        }
        off += b.rows;
    }
    m
}

pub fn unit<T: Real>(n: usize, k: usize) -> Vec<C<T>> {
    let mut v = vec![czero(); n];
    v[k] = cone();
    v
}
