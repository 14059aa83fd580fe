//! Small dense matrices. `Mat2` is a coin operator, `Dense` is anything else.

use crate::error::QwecError;
use crate::scalar::{c, cis, cone, czero, Real, C};

/// 2x2 complex matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<T> {
    pub m: [[C<T>; 2]; 2],
}

impl<T: Real> Mat2<T> {
    pub fn new(a: C<T>, b: C<T>, cc: C<T>, d: C<T>) -> Self {
        Mat2 { m: [[a, b], [cc, d]] }
    }

    pub fn identity() -> Self {
        Self::new(cone(), czero(), czero(), cone())
    }

    pub fn x() -> Self {
        Self::new(czero(), cone(), cone(), czero())
    }

    pub fn y() -> Self {
        Self::new(czero(), c(0.0, -1.0), c(0.0, 1.0), czero())
    }

    pub fn z() -> Self {
        Self::new(cone(), czero(), czero(), c(-1.0, 0.0))
    }

    /// (X + Z)/sqrt 2
    pub fn h() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0))
    }

    /// H' = (X - Z)/sqrt 2
    pub fn h_prime() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(c(-s, 0.0), c(s, 0.0), c(s, 0.0), c(s, 0.0))
    }

    /// exp(-i theta/2 Z)
    pub fn rz(theta: T) -> Self {
        let h = theta / T::lit(2.0);
        Self::new(cis(-h), czero(), czero(), cis(h))
    }

    /// S_c = exp(-i pi/4 Z)
    pub fn s_c() -> Self {
        Self::rz(T::FRAC_PI_2())
    }

    /// T_c = exp(+i pi/8 Z), as written in the paper.
    pub fn t_c() -> Self {
        Self::rz(-T::FRAC_PI_4())
    }

    /// Z S_c, the coin gate behind the logical phase gate.
    pub fn zs() -> Self {
        Self::z().mul(&Self::s_c())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = &self.m;
        let b = &o.m;
        let mut r = [[czero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2 { m: r }
    }

    pub fn adjoint(&self) -> Self {
        let a = &self.m;
        Self::new(a[0][0].conj(), a[1][0].conj(), a[0][1].conj(), a[1][1].conj())
    }

    pub fn scale(&self, s: C<T>) -> Self {
        let a = &self.m;
        Self::new(a[0][0] * s, a[0][1] * s, a[1][0] * s, a[1][1] * s)
    }

    pub fn max_diff(&self, o: &Self) -> T {
        let mut d = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.m[i][j] - o.m[i][j]).norm());
            }
        }
        d
    }

    pub fn is_identity(&self) -> bool {
        self.max_diff(&Self::identity()) == T::zero()
    }

    /// Largest entry of |U U^dagger - I|.
    pub fn unitarity_defect(&self) -> T {
        self.mul(&self.adjoint()).max_diff(&Self::identity())
    }

    pub fn check_unitary(&self, tol: T, what: &str) -> Result<(), QwecError> {
        let d = self.unitarity_defect();
        if d > tol || d.is_nan() {
            return Err(QwecError::NotUnitary { what: what.to_string(), defect: d.to_f64_lossy() });
        }
        Ok(())
    }

    pub fn apply(&self, v: [C<T>; 2]) -> [C<T>; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }
}

/// Rectangular complex matrix, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C<T>>,
}

impl<T: Real> Dense<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense { rows, cols, data: vec![czero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = cone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_mat2(u: &Mat2<T>) -> Self {
        Self::from_fn(2, 2, |i, j| u.m[i][j])
    }

    /// u on the coin, identity on the vertex: index 4c + v.
    pub fn coin_op(u: &Mat2<T>) -> Self {
        Self::from_mat2(u).kron(&Self::identity(4))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C<T>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in Dense::mul");
        let mut r = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &o.data[k * o.cols..(k + 1) * o.cols];
                let out = &mut r.data[i * o.cols..(i + 1) * o.cols];
                for (x, y) in out.iter_mut().zip(row) {
                    *x = *x + a * *y;
                }
            }
        }
        r
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Dense {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| *a + *b).collect(),
        }
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Dense { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| *a * s).collect() }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Kronecker product; `self` is the more significant factor.
    pub fn kron(&self, o: &Self) -> Self {
        Self::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            self.get(i / o.rows, j / o.cols) * o.get(i % o.rows, j % o.cols)
        })
    }

    pub fn trace(&self) -> C<T> {
        (0..self.rows.min(self.cols)).fold(czero(), |a, i| a + self.get(i, i))
    }

    pub fn max_diff(&self, o: &Self) -> T {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        self.data
            .iter()
            .zip(&o.data)
            .fold(T::zero(), |d, (a, b)| d.max((*a - *b).norm()))
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |d, a| d.max(a.norm()))
    }

    pub fn unitarity_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        self.mul(&self.adjoint()).max_diff(&Self::identity(self.rows))
    }

    pub fn check_unitary(&self, tol: T, what: &str) -> Result<(), QwecError> {
        let d = self.unitarity_defect();
        if d > tol || d.is_nan() {
            return Err(QwecError::NotUnitary { what: what.to_string(), defect: d.to_f64_lossy() });
        }
        Ok(())
    }

    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(czero(), |a, (m, x)| a + *m * *x)
            })
            .collect()
    }

    /// Smallest max-norm distance to `o` over a global phase, with the phase.
    pub fn diff_up_to_phase(&self, o: &Self) -> (T, C<T>) {
        let mut best = (czero(), T::zero());
        for (a, b) in self.data.iter().zip(&o.data) {
            if b.norm() > best.1 {
                best = (*a / *b, b.norm());
            }
        }
        let ph = if best.1 == T::zero() || best.0.norm() == T::zero() {
            cone()
        } else {
            best.0 / C::new(best.0.norm(), T::zero())
        };
        (self.max_diff(&o.scale(ph)), ph)
    }
}
