//! `D = 1` delta-function models.
//!
//! In one dimension the Coulomb potentials become delta functions in scaled
//! coordinates. Atoms are treated variationally with a single screening
//! exponent `xi` shared by the orbitals
//!
//! ```text
//! 1s: chi(x) = sqrt(xi) exp(-xi |x|)
//! 2s: chi(x) = sqrt(9 xi / 20) (2/3 - xi |x|) exp(-xi |x| / 2)
//! ```
//!
//! Every expectation value is linear or quadratic in `xi`, so the energy is
//! `A xi^2 - (B0 - B1 lambda) xi` with exact rational `A`, `B0`, `B1` summed
//! from per-orbital and per-pair pieces.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use gauss_quad::GaussLegendre;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Element {
    He,
    Li,
    Be,
}

impl Element {
    pub const ALL: [Element; 3] = [Element::He, Element::Li, Element::Be];

    pub fn nuclear_charge(self) -> u32 {
        match self {
            Element::He => 2,
            Element::Li => 3,
            Element::Be => 4,
        }
    }

    pub fn occupancy(self) -> Vec<Orbital> {
        use Orbital::*;
        match self {
            Element::He => vec![S1, S1],
            Element::Li => vec![S1, S1, S2],
            Element::Be => vec![S1, S1, S2, S2],
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Element::He => "He",
            Element::Li => "Li",
            Element::Be => "Be",
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "he" => Ok(Element::He),
            "li" => Ok(Element::Li),
            "be" => Ok(Element::Be),
            _ => Err(Error::domain("element", format!("unknown element {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orbital {
    S1,
    S2,
}

impl Orbital {
    /// Principal quantum number.
    pub fn n(self) -> u32 {
        match self {
            Orbital::S1 => 1,
            Orbital::S2 => 2,
        }
    }

    /// `<chi| -1/2 d^2/dx^2 |chi>` in units of `xi^2`.
    pub fn kinetic_1d(self) -> Rational {
        match self {
            Orbital::S1 => Rational::new(1, 2),
            Orbital::S2 => Rational::new(17, 40),
        }
    }

    /// `<chi| delta(x) |chi> = chi(0)^2` in units of `xi`.
    pub fn attraction_1d(self) -> Rational {
        match self {
            Orbital::S1 => Rational::new(1, 1),
            Orbital::S2 => Rational::new(1, 5),
        }
    }

    /// Orbital value at `x` for screening exponent `xi`.
    pub fn wavefunction_1d(self, xi: f64, x: f64) -> f64 {
        let u = xi * x.abs();
        match self {
            Orbital::S1 => xi.sqrt() * (-u).exp(),
            Orbital::S2 => (0.45 * xi).sqrt() * (2.0 / 3.0 - u) * (-0.5 * u).exp(),
        }
    }
}

/// `<chi_i chi_j| delta(x_i - x_j) |chi_i chi_j>` in units of `xi`.
pub fn delta_pair_coefficient(p: Orbital, q: Orbital) -> Rational {
    use Orbital::*;
    match (p, q) {
        (S1, S1) => Rational::new(1, 2),
        (S1, S2) | (S2, S1) => Rational::new(1, 15),
        (S2, S2) => Rational::new(71, 800),
    }
}

/// Element identity with its nuclear charge, coupling `lambda = 1/Z` and
/// orbital occupancy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub element: Element,
    pub z: u32,
    pub lambda: f64,
    pub occupancy: Vec<Orbital>,
}

impl AtomSpec {
    pub fn new(element: Element) -> Self {
        let z = element.nuclear_charge();
        Self {
            element,
            z,
            lambda: 1.0 / z as f64,
            occupancy: element.occupancy(),
        }
    }

    pub fn helium() -> Self {
        Self::new(Element::He)
    }

    pub fn lithium() -> Self {
        Self::new(Element::Li)
    }

    pub fn beryllium() -> Self {
        Self::new(Element::Be)
    }

    pub fn lambda_exact(&self) -> Rational {
        Rational::new(1, self.z as i64)
    }

    pub fn electron_count(&self) -> usize {
        self.occupancy.len()
    }

    /// Electron pairs `(i, j)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.occupancy.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }
}

/// Coefficients of `E(xi) = A xi^2 - (B0 - B1 lambda) xi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadraticModel {
    pub kinetic: Rational,
    pub attraction: Rational,
    pub repulsion: Rational,
}

impl QuadraticModel {
    pub fn for_atom(atom: &AtomSpec) -> Self {
        let kinetic = atom.occupancy.iter().map(|o| o.kinetic_1d()).sum();
        let attraction = atom.occupancy.iter().map(|o| o.attraction_1d()).sum();
        let repulsion = atom
            .pairs()
            .map(|(i, j)| delta_pair_coefficient(atom.occupancy[i], atom.occupancy[j]))
            .sum();
        Self {
            kinetic,
            attraction,
            repulsion,
        }
    }

    /// Linear coefficient `B = B0 - B1 lambda`.
    pub fn linear(&self, lambda: Rational) -> Rational {
        self.attraction - self.repulsion * lambda
    }

    pub fn energy(&self, xi: f64, lambda: f64) -> f64 {
        let a = ratio_f64(self.kinetic);
        let b = ratio_f64(self.attraction) - ratio_f64(self.repulsion) * lambda;
        a * xi * xi - b * xi
    }

    /// Stationary point `(xi0, eps1) = (B/2A, -B^2/4A)` in exact arithmetic.
    pub fn optimum_exact(&self, lambda: Rational) -> (Rational, Rational) {
        let b = self.linear(lambda);
        let two = Rational::from_integer(2);
        let four = Rational::from_integer(4);
        (b / (two * self.kinetic), -(b * b) / (four * self.kinetic))
    }
}

pub(crate) fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationalResult1D {
    pub xi0: f64,
    pub epsilon1: f64,
}

/// Variational energy of the delta-function atom at screening `xi`.
pub fn energy_quadratic(atom: &AtomSpec, xi: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::domain("xi", format!("screening parameter must be positive, got {xi}")));
    }
    Ok(QuadraticModel::for_atom(atom).energy(xi, atom.lambda))
}

pub fn optimize_xi_exact(atom: &AtomSpec) -> (Rational, Rational) {
    QuadraticModel::for_atom(atom).optimum_exact(atom.lambda_exact())
}

pub fn optimize_xi(atom: &AtomSpec) -> VariationalResult1D {
    let (xi0, eps) = optimize_xi_exact(atom);
    VariationalResult1D {
        xi0: ratio_f64(xi0),
        epsilon1: ratio_f64(eps),
    }
}

/// Delta-pair coefficients at `xi = 1`, keyed by electron indices `(i, j)`,
/// `i < j`, zero-based.
pub fn delta_pair_values(atom: &AtomSpec) -> BTreeMap<(usize, usize), f64> {
    atom.pairs()
        .map(|(i, j)| {
            let c = delta_pair_coefficient(atom.occupancy[i], atom.occupancy[j]);
            ((i, j), ratio_f64(c))
        })
        .collect()
}

/// Symmetric-state electronic energy of the one-dimensional H2 model with
/// nuclei at `+-R/2`. The nuclear repulsion is not included.
pub fn h2_epsilon1(r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::domain("R", format!("internuclear distance must be >= 0, got {r}")));
    }
    let e = (-2.0 * r).exp();
    let num = 1.0 + (4.0 + 2.0 * r + r * r) * e;
    let den = 1.0 + (1.0 + r) * (1.0 + r) * e;
    Ok(-num / den)
}

/// Heitler-London energy of
/// `sum_i [-(kappa/2) d^2/dy_i^2 - mu delta(y_i - a) - mu delta(y_i + a)] + mu lambda delta(y_1 - y_2)`
/// with `a = R/2`, built from the exact one-centre orbitals
/// `sqrt(k) exp(-k |y -+ a|)`, `k = mu / kappa`, by numerical quadrature.
///
/// With `kappa = mu = lambda = 1` this is the closed form [`h2_epsilon1`];
/// `kappa = 9, mu = 3` is the rescaled Hamiltonian used to check the H2
/// interpolation.
pub fn h2_heitler_london(r: f64, kappa: f64, mu: f64, lambda: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::domain("R", format!("internuclear distance must be >= 0, got {r}")));
    }
    if !(kappa > 0.0 && mu > 0.0) {
        return Err(Error::domain("kappa/mu", "scale factors must be positive"));
    }
    let a = 0.5 * r;
    let k = mu / kappa;
    let orb = |c: f64, y: f64| k.sqrt() * (-k * (y - c).abs()).exp();
    let dorb = |c: f64, y: f64| -k * (y - c).signum() * orb(c, y);
    let (pa, pb) = (a, -a);

    let width = 1.0 / k;
    let cutoff = 40.0 / k;
    let integrate = |f: &dyn Fn(f64) -> f64| -> f64 {
        let mut total = 0.0;
        for (lo, hi) in [(-a - cutoff, -a), (-a, a), (a, a + cutoff)] {
            total += panels(lo, hi, width, f);
        }
        total
    };

    let s = integrate(&|y| orb(pa, y) * orb(pb, y));
    let h_aa = 0.5 * kappa * integrate(&|y| dorb(pa, y).powi(2))
        - mu * (orb(pa, a).powi(2) + orb(pa, -a).powi(2));
    let h_ab = 0.5 * kappa * integrate(&|y| dorb(pa, y) * dorb(pb, y))
        - mu * (orb(pa, a) * orb(pb, a) + orb(pa, -a) * orb(pb, -a));
    let rep = mu * lambda * integrate(&|y| orb(pa, y).powi(2) * orb(pb, y).powi(2));

    Ok((2.0 * h_aa + 2.0 * h_ab * s + 2.0 * rep) / (1.0 + s * s))
}

/// Composite 20-point Gauss-Legendre over `[lo, hi]` with panels no wider
/// than `width`.
pub(crate) fn panels(lo: f64, hi: f64, width: f64, f: &dyn Fn(f64) -> f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let rule = GaussLegendre::new(20.try_into().expect("nonzero degree"));
    let n = ((hi - lo) / width).ceil().max(1.0) as usize;
    let h = (hi - lo) / n as f64;
    (0..n)
        .map(|i| {
            let x0 = lo + i as f64 * h;
            rule.integrate(x0, x0 + h, f)
        })
        .sum()
}
