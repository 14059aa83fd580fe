use qwec::codec::{run_cycle_branches, LogicalBasis, Signs, SyndromeHistory};
use qwec::error::{QwecError, Result};
use qwec::scalar::C;
use qwec::StateVector;

/// |0>_L and |1>_L after one clean syndrome cycle, so that errors injected
/// into their combinations land between two cycles.
pub struct Context {
    pub zero: StateVector,
    pub one: StateVector,
    pub history: SyndromeHistory,
}

fn clean_cycle(s: &StateVector, h: &SyndromeHistory) -> Result<(StateVector, SyndromeHistory)> {
    let mut br = run_cycle_branches(s, h, None)?;
    if br.len() != 1 || br[0].2.last_syndrome().map(|m| m.0) != Some(0) {
        return Err(QwecError::Program("clean cycle was not quiet".into()));
    }
    let (_, st, hist) = br.remove(0);
    Ok((st, hist))
}

impl Context {
    pub fn new() -> Result<Self> {
        let b = LogicalBasis::<f64>::new(Signs::default())?;
        let (zero, history) = clean_cycle(&b.zero, &b.history)?;
        let (one, _) = clean_cycle(&b.one, &b.history)?;
        Ok(Context { zero, one, history })
    }

    pub fn state(&self, alpha: C<f64>, beta: C<f64>) -> StateVector {
        let mut s = self.zero.clone();
        s.scale(alpha);
        s.axpy(beta, &self.one).expect("same layout");
        s.normalize();
        s
    }
}

/// (alpha, beta) for polar angle theta and azimuth phi.
pub fn amplitudes(theta: f64, phi: f64) -> (C<f64>, C<f64>) {
    (C::new((theta / 2.0).cos(), 0.0), C::from_polar((theta / 2.0).sin(), phi))
}

pub fn bloch_of(a: C<f64>, b: C<f64>) -> [f64; 3] {
    let n = a.norm_sqr() + b.norm_sqr();
    let ab = a.conj() * b;
    [2.0 * ab.re / n, 2.0 * ab.im / n, (a.norm_sqr() - b.norm_sqr()) / n]
}

/// Fidelity of a (possibly shrunk) Bloch vector r with the pure state at r0.
pub fn fidelity(r: [f64; 3], r0: [f64; 3]) -> f64 {
    0.5 * (1.0 + r[0] * r0[0] + r[1] * r0[1] + r[2] * r0[2])
}
