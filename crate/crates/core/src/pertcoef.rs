//! First-order `1/Z` coefficients `eps_D^(1)` at `D = 1, 3, infinity`.
//!
//! Each coefficient is a sum of pair repulsions `<1/r_ij>` over the electron
//! pairs of the occupancy. At `D = 3` (and any finite `D >= 2`) the pair
//! values come from the derivative integrals
//!
//! ```text
//! K_D(i, j) = int d^D r1 d^D r2 e^{-a r1 - b r2} r1^{i-1} r2^{j-1} / r12
//!           = (-d/da)^i (-d/db)^j G_D(a, b)
//! ```
//!
//! of the closed-form parent integral `G_D`, differentiated with truncated
//! Taylor jets. An independent radial quadrature cross-checks the `D = 3`
//! values.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::delta1d::{delta_pair_coefficient, ratio_f64, AtomSpec, Orbital};
use crate::error::{Error, Result};
use crate::jet::{Jet, ORDER};
use crate::specfun::{f_universal, hyp2f1_derivative, log_gamma, Dimension, F_UNIVERSAL_INF, HYP_FAMILY_SWITCH};

/// Highest total derivative order `i + j` supported by the `K` integrals.
pub const MAX_DERIVATIVE_ORDER: usize = ORDER;

/// The three first-order coefficients of one atom, in scaled units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbCoeffs {
    pub eps1_1: f64,
    pub eps3_1: f64,
    pub epsinf_1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairKind {
    S1S1,
    S1S2,
    S2S2,
}

impl PairKind {
    pub const ALL: [PairKind; 3] = [PairKind::S1S1, PairKind::S1S2, PairKind::S2S2];

    pub fn of(p: Orbital, q: Orbital) -> Self {
        match (p, q) {
            (Orbital::S1, Orbital::S1) => PairKind::S1S1,
            (Orbital::S2, Orbital::S2) => PairKind::S2S2,
            _ => PairKind::S1S2,
        }
    }

    fn orbitals(self) -> (Orbital, Orbital) {
        match self {
            PairKind::S1S1 => (Orbital::S1, Orbital::S1),
            PairKind::S1S2 => (Orbital::S1, Orbital::S2),
            PairKind::S2S2 => (Orbital::S2, Orbital::S2),
        }
    }
}

/// The dimensions at which coefficients are assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimLimit {
    One,
    Three,
    Infinity,
}

/// A radial density `sum_p c_p r^p e^{-a r}` of an s orbital.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialDensity {
    pub poly: Vec<f64>,
    pub exponent: f64,
}

impl RadialDensity {
    /// Squared hydrogenic orbital at `D = 3` in scaled units:
    /// 1s `e^{-2r}`, 2s `(2 - r)^2 e^{-r}` (unnormalized).
    pub fn hydrogenic_d3(orbital: Orbital) -> Self {
        match orbital {
            Orbital::S1 => Self {
                poly: vec![1.0],
                exponent: 2.0,
            },
            Orbital::S2 => Self {
                poly: vec![4.0, -4.0, 1.0],
                exponent: 1.0,
            },
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.poly.iter().rev().fold(0.0, |acc, c| acc * r + c) * (-self.exponent * r).exp()
    }

    /// `int d^D r rho(r)` for dimension `d`.
    pub fn norm(&self, d: f64) -> Result<f64> {
        let omega_ln = (2.0f64).ln() + 0.5 * d * PI.ln() - log_gamma(0.5 * d)?;
        let mut total = 0.0;
        for (p, c) in self.poly.iter().enumerate() {
            let p = p as f64;
            total += c * (omega_ln + log_gamma(d + p)? - (d + p) * self.exponent.ln()).exp();
        }
        Ok(total)
    }
}

fn check_exponents(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::domain("a/b", format!("exponents must be positive, got a = {a}, b = {b}")));
    }
    Ok(())
}

fn ln_normalization(d: f64) -> Result<f64> {
    Ok((d - 1.0) * (4.0 * PI).ln() + log_gamma(d - 1.5)? + 3.0 * log_gamma(0.5 * (d - 1.0))?
        - log_gamma(d - 1.0)?
        - log_gamma(0.5 * d)?)
}

/// `G_D` as a jet in `(a, b)`.
fn parent_jet(d: f64, a: f64, b: f64) -> Result<Jet> {
    let (ja, jb) = (Jet::var_a(a), Jet::var_b(b));
    let sum = ja + jb;
    let ratio = (ja - jb) * sum.recip();
    let y = ratio * ratio;
    let y0 = y.value();
    let f = if d > HYP_FAMILY_SWITCH {
        (Jet::constant(1.0) + y).powf(-0.5)
    } else {
        let (p, q, r) = (0.5, 0.5 * (3.0 - d), 0.5 * d);
        let mut derivs = [0.0; ORDER + 1];
        for (n, slot) in derivs.iter_mut().enumerate() {
            *slot = hyp2f1_derivative(n as u32, p, q, r, y0)?;
        }
        y.compose(&derivs)
    };
    let n_d = ln_normalization(d)?.exp();
    Ok((f * (ja * jb).powf(2.0 - d) * sum.recip()).scale(n_d))
}

fn check_parent_dimension(d: f64) -> Result<f64> {
    let d = Dimension::new(d)?.d();
    if d < 2.0 {
        return Err(Error::domain("D", format!("parent integral closed form needs D >= 2, got {d}")));
    }
    Ok(d)
}

/// `G_D(a, b) = int d^D r1 d^D r2 e^{-a r1} e^{-b r2} / (r1 r2 r12)`.
pub fn parent_integral_g(d: f64, a: f64, b: f64) -> Result<f64> {
    let d = check_parent_dimension(d)?;
    check_exponents(a, b)?;
    if d == 3.0 {
        return Ok(g3_jet(0, a, b).value());
    }
    Ok(parent_jet(d, a, b)?.value())
}

/// `G_3^k(a, b) = int d^3 r1 d^3 r2 e^{-a r1} e^{-b r2} r12^{k-1} / (r1 r2)`
/// for integer `k >= 0`, finite at `a = b`.
pub fn parent_integral_g3(k: u32, a: f64, b: f64) -> Result<f64> {
    check_exponents(a, b)?;
    Ok(g3_jet(k, a, b).value())
}

/// `(4 pi)^2 k! (b^{-k-1} - a^{-k-1}) / (a^2 - b^2)`, expanded into the
/// equivalent finite sum `sum_q a^{-1-q} b^{-1-k+q} / (a + b)`.
fn g3_jet(k: u32, a: f64, b: f64) -> Jet {
    let (ja, jb) = (Jet::var_a(a), Jet::var_b(b));
    let mut sum = Jet::constant(0.0);
    for q in 0..=k {
        sum = sum + ja.powf(-1.0 - q as f64) * jb.powf(-1.0 - (k - q) as f64);
    }
    let k_fact: f64 = (1..=k).map(f64::from).product();
    (sum * (ja + jb).recip()).scale(16.0 * PI * PI * k_fact)
}

fn k_from_jet(jet: &Jet, i: usize, j: usize) -> f64 {
    let fact = |n: usize| (1..=n).map(|m| m as f64).product::<f64>();
    let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
    sign * fact(i) * fact(j) * jet.coeff(i, j)
}

fn check_order(i: usize, j: usize) -> Result<()> {
    if i + j > MAX_DERIVATIVE_ORDER {
        return Err(Error::domain(
            "i+j",
            format!("derivative order {} exceeds {MAX_DERIVATIVE_ORDER}", i + j),
        ));
    }
    Ok(())
}

/// `K_D(i, j) = (-d/da)^i (-d/db)^j G_D(a, b)`.
pub fn derivative_integral_k(d: f64, i: usize, j: usize, a: f64, b: f64) -> Result<f64> {
    let d = check_parent_dimension(d)?;
    check_exponents(a, b)?;
    check_order(i, j)?;
    let jet = if d == 3.0 { g3_jet(0, a, b) } else { parent_jet(d, a, b)? };
    Ok(k_from_jet(&jet, i, j))
}

/// `K_3(i, j, k) = (-d/da)^i (-d/db)^j G_3^k(a, b)`.
pub fn derivative_integral_k3(i: usize, j: usize, k: u32, a: f64, b: f64) -> Result<f64> {
    check_exponents(a, b)?;
    check_order(i, j)?;
    Ok(k_from_jet(&g3_jet(k, a, b), i, j))
}

/// `<1/r12>` between two radial densities in `d >= 2` dimensions, from the
/// `K` integrals. The weight `r^p` maps to index `p + 1`.
pub fn pair_repulsion(d: f64, rho1: &RadialDensity, rho2: &RadialDensity) -> Result<f64> {
    let d = check_parent_dimension(d)?;
    check_exponents(rho1.exponent, rho2.exponent)?;
    check_order(rho1.poly.len(), rho2.poly.len())?;
    let jet = if d == 3.0 {
        g3_jet(0, rho1.exponent, rho2.exponent)
    } else {
        parent_jet(d, rho1.exponent, rho2.exponent)?
    };
    let mut total = 0.0;
    for (p, c) in rho1.poly.iter().enumerate() {
        for (q, e) in rho2.poly.iter().enumerate() {
            total += c * e * k_from_jet(&jet, p + 1, q + 1);
        }
    }
    Ok(total / (rho1.norm(d)? * rho2.norm(d)?))
}

/// Scaled-unit pair value `beta <1/r12>` at dimension `d`, `beta = (D-1)/2`.
pub fn pair_value_scaled(d: f64, rho1: &RadialDensity, rho2: &RadialDensity) -> Result<f64> {
    let beta = Dimension::new(d)?.beta();
    Ok(beta * pair_repulsion(d, rho1, rho2)?)
}

/// The large-D pair value `f(inf) (1 + y)^{-1/2} ab / (a + b)`.
fn large_d_pair(a: f64, b: f64) -> f64 {
    let y = ((a - b) / (a + b)).powi(2);
    F_UNIVERSAL_INF * (1.0 + y).powf(-0.5) * a * b / (a + b)
}

/// The same pair value at finite `d`, with `f(D)` and the exact
/// hypergeometric factor.
pub fn pair_value_bare(d: f64, a: f64, b: f64) -> Result<f64> {
    check_exponents(a, b)?;
    let y = ((a - b) / (a + b)).powi(2);
    Ok(f_universal(d)? * crate::specfun::gauss_2f1_family(d, y)? * a * b / (a + b))
}

/// Exponent pair `(a, b)` of the large-D formula: 1s pairs against 1s at
/// `a = b = 2`, 1s against 2s at `(2, 1)`, 2s against 2s at `(1, 1)`.
fn large_d_exponents(pair: PairKind) -> (f64, f64) {
    match pair {
        PairKind::S1S1 => (2.0, 2.0),
        PairKind::S1S2 => (2.0, 1.0),
        PairKind::S2S2 => (1.0, 1.0),
    }
}

/// Pair repulsion coefficient at `D = 1, 3` or infinity.
pub fn pair_coefficient(dim: DimLimit, pair: PairKind) -> f64 {
    let (p, q) = pair.orbitals();
    match dim {
        DimLimit::One => ratio_f64(delta_pair_coefficient(p, q)),
        DimLimit::Three => pair_repulsion(3.0, &RadialDensity::hydrogenic_d3(p), &RadialDensity::hydrogenic_d3(q))
            .expect("hydrogenic densities are within the supported order"),
        DimLimit::Infinity => {
            let (a, b) = large_d_exponents(pair);
            large_d_pair(a, b)
        }
    }
}

/// How many electron pairs of each kind the atom has.
pub fn pair_multiplicities(atom: &AtomSpec) -> BTreeMap<PairKind, usize> {
    let mut counts = BTreeMap::new();
    for (i, j) in atom.pairs() {
        *counts.entry(PairKind::of(atom.occupancy[i], atom.occupancy[j])).or_insert(0) += 1;
    }
    counts
}

pub fn assemble_coefficients(atom: &AtomSpec) -> PerturbCoeffs {
    let counts = pair_multiplicities(atom);
    let sum = |dim| {
        counts
            .iter()
            .map(|(&pair, &m)| m as f64 * pair_coefficient(dim, pair))
            .sum::<f64>()
    };
    PerturbCoeffs {
        eps1_1: sum(DimLimit::One),
        eps3_1: sum(DimLimit::Three),
        epsinf_1: sum(DimLimit::Infinity),
    }
}

/// `<1/r12>` at `D = 3` for s densities by two-dimensional radial quadrature
/// with the monopole kernel `1/max(r1, r2)`.
pub fn radial_coulomb_quadrature(rho1: &RadialDensity, rho2: &RadialDensity) -> Result<f64> {
    check_exponents(rho1.exponent, rho2.exponent)?;
    let cutoff = 80.0 / rho1.exponent.min(rho2.exponent);
    let width = 0.25;
    let w1 = |r: f64| 4.0 * PI * r * r * rho1.eval(r);
    let w2 = |r: f64| 4.0 * PI * r * r * rho2.eval(r);
    let numerator = crate::delta1d::panels(0.0, cutoff, width, &|r1| {
        let inner = crate::delta1d::panels(0.0, r1, width, &|r2| w2(r2)) / r1
            + crate::delta1d::panels(r1, cutoff, width, &|r2| w2(r2) / r2);
        w1(r1) * inner
    });
    let n1 = crate::delta1d::panels(0.0, cutoff, width, &w1);
    let n2 = crate::delta1d::panels(0.0, cutoff, width, &w2);
    Ok(numerator / (n1 * n2))
}

/// Independent quadrature value of a `D = 3` pair coefficient.
pub fn quadrature_oracle_d3(pair: PairKind) -> f64 {
    let (p, q) = pair.orbitals();
    radial_coulomb_quadrature(&RadialDensity::hydrogenic_d3(p), &RadialDensity::hydrogenic_d3(q))
        .expect("hydrogenic exponents are positive")
}
