//! Coin errors, shift errors and Pauli flips on a single particle.

use crate::error::{QwecError, Result};
use crate::linalg::{Dense, Mat2};
use crate::oracle::dense_of;
use crate::pauli::{Letter, PauliWord, QubitId, Role};
use crate::scalar::{cis, czero, Real, C};
use crate::walk::{rotation_matrix, StateVector, Vertex};
use rand::{Rng, RngCore};
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Coin,
    Shift,
    Pauli,
}

impl FromStr for Family {
    type Err = QwecError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coin" => Ok(Family::Coin),
            "shift" => Ok(Family::Shift),
            "pauli" => Ok(Family::Pauli),
            o => Err(QwecError::Parse(format!("unknown error family {o:?}"))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Coin => "coin",
            Family::Shift => "shift",
            Family::Pauli => "pauli",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ErrorKind<T> {
    /// one coin unitary per vertex, indexed by Vertex::code
    Coin([Mat2<T>; 4]),
    /// alpha_j I + beta_j R + gamma_j R^T on coin branch j
    Shift { alpha: [C<T>; 2], beta: [C<T>; 2], gamma: [C<T>; 2] },
    Pauli(PauliWord),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorSpec<T> {
    pub kind: ErrorKind<T>,
    pub target: usize,
}

impl<T: Real> ErrorSpec<T> {
    pub fn family(&self) -> Family {
        match self.kind {
            ErrorKind::Coin(_) => Family::Coin,
            ErrorKind::Shift { .. } => Family::Shift,
            ErrorKind::Pauli(_) => Family::Pauli,
        }
    }

    pub fn identity(target: usize) -> Self {
        ErrorSpec { kind: ErrorKind::Coin([Mat2::identity(); 4]), target }
    }

    /// Pauli flip given as a (c, x, y) triple on the target, e.g. "IXI".
    pub fn pauli(target: usize, triple: &str) -> Self {
        ErrorSpec { kind: ErrorKind::Pauli(PauliWord::on_particle(target, triple)), target }
    }

    /// The 8x8 unitary on the target's (c, x, y) factor.
    pub fn realize(&self) -> Result<Dense<T>> {
        let tol = T::lit(1e-12);
        match &self.kind {
            ErrorKind::Coin(blocks) => {
                let mut m = Dense::zeros(8, 8);
                for v in Vertex::CYCLE {
                    let u = &blocks[v.code()];
                    u.check_unitary(tol, &format!("coin error block at vertex {v}"))?;
                    for a in 0..2 {
                        for b in 0..2 {
                            m.set(4 * a + v.code(), 4 * b + v.code(), u.m[a][b]);
                        }
                    }
                }
                Ok(m)
            }
            ErrorKind::Shift { alpha, beta, gamma } => {
                let r = rotation_matrix::<T>();
                let rt = r.adjoint();
                let mut m = Dense::zeros(8, 8);
                for j in 0..2 {
                    let blk = Dense::identity(4).scale(alpha[j]).add(&r.scale(beta[j])).add(&rt.scale(gamma[j]));
                    blk.check_unitary(tol, &format!("shift error block for coin {j}"))?;
                    for a in 0..4 {
                        for b in 0..4 {
                            m.set(4 * j + a, 4 * j + b, blk.get(a, b));
                        }
                    }
                }
                Ok(m)
            }
            ErrorKind::Pauli(w) => {
                let sup = w.support_particles();
                if sup.iter().any(|p| *p != self.target) {
                    return Err(QwecError::Precondition(format!("flip {w} is not on particle {}", self.target)));
                }
                let local = PauliWord::from_masks(
                    w.phase(),
                    w.x_mask() >> (3 * self.target),
                    w.z_mask() >> (3 * self.target),
                );
                dense_of(&local, &[0])
            }
        }
    }

    pub fn inject(&self, state: &mut StateVector<T>) -> Result<()> {
        let u = self.realize()?;
        state.layout().check_particle(self.target)?;
        state.apply_particle_matrix(self.target, &u);
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let cj = |z: &C<T>| json!([z.re.to_f64_lossy(), z.im.to_f64_lossy()]);
        let params = match &self.kind {
            ErrorKind::Coin(bl) => {
                let mut o = serde_json::Map::new();
                for v in Vertex::CYCLE {
                    let u = &bl[v.code()];
                    o.insert(
                        v.label(),
                        json!([[cj(&u.m[0][0]), cj(&u.m[0][1])], [cj(&u.m[1][0]), cj(&u.m[1][1])]]),
                    );
                }
                Value::Object(o)
            }
            ErrorKind::Shift { alpha, beta, gamma } => json!({
                "alpha": [cj(&alpha[0]), cj(&alpha[1])],
                "beta": [cj(&beta[0]), cj(&beta[1])],
                "gamma": [cj(&gamma[0]), cj(&gamma[1])],
            }),
            ErrorKind::Pauli(w) => json!({ "word": w.to_string() }),
        };
        json!({ "family": self.family().to_string(), "target": format!("P{}", self.target), "parameters": params })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |w: &str| QwecError::Parse(format!("error spec: {w}"));
        let fam: Family = v["family"].as_str().ok_or_else(|| bad("family"))?.parse()?;
        let target = v["target"]
            .as_str()
            .and_then(|s| s.strip_prefix('P'))
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| bad("target"))?;
        let p = &v["parameters"];
        let cx = |z: &Value| -> Result<C<T>> {
            let a = z.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("complex"))?;
            let re = a[0].as_f64().ok_or_else(|| bad("re"))?;
            let im = a[1].as_f64().ok_or_else(|| bad("im"))?;
            Ok(C::new(T::lit(re), T::lit(im)))
        };
        let kind = match fam {
            Family::Coin => {
                let mut bl = [Mat2::identity(); 4];
                for v in Vertex::CYCLE {
                    let m = &p[v.label()];
                    bl[v.code()] = Mat2::new(cx(&m[0][0])?, cx(&m[0][1])?, cx(&m[1][0])?, cx(&m[1][1])?);
                }
                ErrorKind::Coin(bl)
            }
            Family::Shift => {
                let pair = |k: &str| -> Result<[C<T>; 2]> { Ok([cx(&p[k][0])?, cx(&p[k][1])?]) };
                ErrorKind::Shift { alpha: pair("alpha")?, beta: pair("beta")?, gamma: pair("gamma")? }
            }
            Family::Pauli => ErrorKind::Pauli(p["word"].as_str().ok_or_else(|| bad("word"))?.parse()?),
        };
        let spec = ErrorSpec { kind, target };
        spec.realize()?;
        Ok(spec)
    }
}

fn gauss(rng: &mut dyn RngCore) -> f64 {
    rng.sample(StandardNormal)
}

/// Haar-random element of U(2).
pub fn haar_u2<T: Real>(rng: &mut dyn RngCore) -> Mat2<T> {
    let q: [f64; 4] = [gauss(rng), gauss(rng), gauss(rng), gauss(rng)];
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, cc, d] = q.map(|x| T::lit(x / n));
    let ph = cis(T::lit(rng.random::<f64>() * std::f64::consts::TAU));
    let u = Mat2::new(C::new(a, b), C::new(cc, d), C::new(-cc, d), C::new(a, -b));
    u.scale(ph)
}

/// Coefficients of f(R) = alpha + beta R + gamma R^3 with eigenvalue lam[k] at R = i^k.
pub fn shift_coefficients<T: Real>(lam: [C<T>; 4]) -> (C<T>, C<T>, C<T>) {
    let quarter = T::lit(0.25);
    let mut a = czero::<T>();
    let mut b = czero::<T>();
    let mut g = czero::<T>();
    for (k, l) in lam.iter().enumerate() {
        a = a + *l;
        b = b + *l * crate::scalar::ipow::<T>((4 - k as u8) & 3);
        g = g + *l * crate::scalar::ipow::<T>(k as u8);
    }
    (a * quarter, b * quarter, g * quarter)
}

/// Random unitary in span{I, R, R^T}: eigenphases with no R^2 component.
fn random_shift_block<T: Real>(rng: &mut dyn RngCore) -> (C<T>, C<T>, C<T>) {
    let tau = std::f64::consts::TAU;
    let l0 = cis(T::lit(rng.random::<f64>() * tau));
    let l2 = cis(T::lit(rng.random::<f64>() * tau));
    // lam0 - lam1 + lam2 - lam3 = 0 leaves three families
    let lam = match rng.random_range(0..3u8) {
        0 => [l0, l0, l2, l2],
        1 => [l0, l2, l2, l0],
        _ => [l0, l2, -l0, -l2],
    };
    shift_coefficients(lam)
}

pub fn sample_random_error<T: Real>(rng: &mut dyn RngCore, family: Family, target: usize) -> ErrorSpec<T> {
    let kind = match family {
        Family::Coin => ErrorKind::Coin([haar_u2(rng), haar_u2(rng), haar_u2(rng), haar_u2(rng)]),
        Family::Shift => {
            let (a0, b0, g0) = random_shift_block(rng);
            let (a1, b1, g1) = random_shift_block(rng);
            ErrorKind::Shift { alpha: [a0, a1], beta: [b0, b1], gamma: [g0, g1] }
        }
        Family::Pauli => {
            let role = Role::ALL[rng.random_range(0..3usize)];
            let letter = [Letter::X, Letter::Y, Letter::Z][rng.random_range(0..3usize)];
            ErrorKind::Pauli(PauliWord::single(QubitId::new(target, role), letter))
        }
    };
    ErrorSpec { kind, target }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, cone};
    use crate::walk::{init_state, shift_matrix, Layout};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shift_identity_and_advance() {
        let id: ErrorSpec<f64> = ErrorSpec {
            kind: ErrorKind::Shift { alpha: [cone(); 2], beta: [czero(); 2], gamma: [czero(); 2] },
            target: 0,
        };
        assert_eq!(id.realize().unwrap().max_diff(&Dense::identity(8)), 0.0);
        let adv: ErrorSpec<f64> = ErrorSpec {
            kind: ErrorKind::Shift { alpha: [czero(); 2], beta: [cone(); 2], gamma: [czero(); 2] },
            target: 0,
        };
        let r = Dense::identity(2).kron(&rotation_matrix());
        assert_eq!(adv.realize().unwrap().max_diff(&r), 0.0);
    }

    #[test]
    fn coin_error_moves_a_resting_particle() {
        let mut bl = [Mat2::<f64>::identity(); 4];
        bl[Vertex::V00.code()] = Mat2::x();
        let e = ErrorSpec { kind: ErrorKind::Coin(bl), target: 0 };
        let l = Layout { chain: 1, external: false };
        let mut s = init_state::<f64>(l, &[(0, 0, Vertex::V00)]).unwrap();
        e.inject(&mut s).unwrap();
        s.apply_shift();
        assert_eq!(s.vertex_distribution(0).unwrap()[Vertex::V10.code()], 1.0);
        let _ = shift_matrix::<f64>();
    }

    #[test]
    fn non_unitary_shift_rejected_with_block() {
        let e: ErrorSpec<f64> = ErrorSpec {
            kind: ErrorKind::Shift { alpha: [cone(), c(0.5, 0.0)], beta: [czero(), c(0.5, 0.0)], gamma: [czero(); 2] },
            target: 2,
        };
        let err = e.realize().unwrap_err().to_string();
        assert!(err.contains("coin 1"), "{err}");
    }

    #[test]
    fn samples_are_valid_and_reproducible() {
        for fam in [Family::Coin, Family::Shift, Family::Pauli] {
            let mut a = ChaCha8Rng::seed_from_u64(42);
            let mut b = ChaCha8Rng::seed_from_u64(42);
            for _ in 0..50 {
                let x: ErrorSpec<f64> = sample_random_error(&mut a, fam, 4);
                let y: ErrorSpec<f64> = sample_random_error(&mut b, fam, 4);
                assert_eq!(x.to_json().to_string(), y.to_json().to_string());
                x.realize().unwrap();
            }
        }
    }

    #[test]
    fn pauli_family_covers_nine_flips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..400 {
            let e: ErrorSpec<f64> = sample_random_error(&mut rng, Family::Pauli, 2);
            if let ErrorKind::Pauli(w) = e.kind {
                assert_eq!(w.weight(), 1);
                seen.insert(w);
            }
        }
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for fam in [Family::Coin, Family::Shift, Family::Pauli] {
            let e: ErrorSpec<f64> = sample_random_error(&mut rng, fam, 0);
            let back: ErrorSpec<f64> = ErrorSpec::from_json(&e.to_json()).unwrap();
            assert!(back.realize().unwrap().max_diff(&e.realize().unwrap()) < 1e-15);
        }
    }
}
