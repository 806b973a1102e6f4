//! Truncated bivariate Taylor series in `(a, b)` used to differentiate the
//! closed-form Coulomb integrals to high order.
//!
//! `c[p][q]` is the coefficient of `da^p db^q`; terms with `p + q > ORDER` are
//! dropped.

use std::ops::{Add, Mul, Neg, Sub};

pub(crate) const ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Jet {
    c: [[f64; ORDER + 1]; ORDER + 1],
}

impl Jet {
    pub(crate) fn constant(v: f64) -> Self {
        let mut c = [[0.0; ORDER + 1]; ORDER + 1];
        c[0][0] = v;
        Self { c }
    }

    /// The independent variable `a` at value `v`.
    pub(crate) fn var_a(v: f64) -> Self {
        let mut j = Self::constant(v);
        j.c[1][0] = 1.0;
        j
    }

    pub(crate) fn var_b(v: f64) -> Self {
        let mut j = Self::constant(v);
        j.c[0][1] = 1.0;
        j
    }

    pub(crate) fn value(&self) -> f64 {
        self.c[0][0]
    }

    /// Taylor coefficient of `da^p db^q`.
    pub(crate) fn coeff(&self, p: usize, q: usize) -> f64 {
        self.c[p][q]
    }

    pub(crate) fn scale(mut self, s: f64) -> Self {
        for p in 0..=ORDER {
            for q in 0..=ORDER - p {
                self.c[p][q] *= s;
            }
        }
        self
    }

    /// `g(self)` for a scalar function `g` given its derivatives
    /// `g^(n)(self.value())`, `n = 0..=ORDER`.
    pub(crate) fn compose(&self, derivs: &[f64; ORDER + 1]) -> Self {
        let mut h = *self;
        h.c[0][0] = 0.0;
        // Horner in the nilpotent increment h.
        let mut factorial = 1.0;
        let mut coeffs = [0.0; ORDER + 1];
        for (n, d) in derivs.iter().enumerate() {
            if n > 0 {
                factorial *= n as f64;
            }
            coeffs[n] = d / factorial;
        }
        let mut acc = Self::constant(coeffs[ORDER]);
        for n in (0..ORDER).rev() {
            acc = acc * h;
            acc.c[0][0] += coeffs[n];
        }
        acc
    }

    pub(crate) fn powf(&self, s: f64) -> Self {
        let x = self.value();
        let mut derivs = [0.0; ORDER + 1];
        let mut falling = 1.0;
        for (n, d) in derivs.iter_mut().enumerate() {
            *d = falling * x.powf(s - n as f64);
            falling *= s - n as f64;
        }
        self.compose(&derivs)
    }

    pub(crate) fn recip(&self) -> Self {
        self.powf(-1.0)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        for p in 0..=ORDER {
            for q in 0..=ORDER - p {
                self.c[p][q] += rhs.c[p][q];
            }
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = [[0.0; ORDER + 1]; ORDER + 1];
        for p1 in 0..=ORDER {
            for q1 in 0..=ORDER - p1 {
                let x = self.c[p1][q1];
                if x == 0.0 {
                    continue;
                }
                for p2 in 0..=ORDER - p1 - q1 {
                    for q2 in 0..=ORDER - p1 - q1 - p2 {
                        out[p1 + p2][q1 + q2] += x * rhs.c[p2][q2];
                    }
                }
            }
        }
        Jet { c: out }
    }
}
