//! Interpolation between the `D = 1` and `D -> infinity` limits.
//!
//! For atoms the `D = 3` energy is the `1/D`-weighted mean of the two limits
//! plus a first-order correction that makes the `1/Z` expansion exact:
//!
//! ```text
//! eps_D = d eps_1 + (1 - d) eps_inf + [eps_D^(1) - d eps_1^(1) - (1 - d) eps_inf^(1)] lambda,   d = 1/D
//! ```
//!
//! For H2 the limits are evaluated at rescaled internuclear distances,
//! `eps_3(R) = eps_1(R/3)/3 + 2 eps_inf(2R/3)/3`, and the nuclear repulsion
//! `1/R` is added afterwards.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::delta1d::{h2_epsilon1, h2_heitler_london, optimize_xi, AtomSpec, Element};
use crate::error::{Error, Result};
use crate::large_d::{minimize_atom, minimize_h2, minimize_h2_rescaled, AtomGeometry, GramianForm};
use crate::optim::OptimSettings;
use crate::pertcoef::{assemble_coefficients, PerturbCoeffs};
use crate::specfun::Dimension;

/// Exact ground-state energy of the one-dimensional delta-function helium atom.
pub const HE_EXACT_EPS1: f64 = -0.788843;

/// Large-D helium energy to the printed precision.
pub const HE_EPS_INF: f64 = -0.684442;

/// Reference `D = 3` ground-state energies in scaled units.
pub fn exact_epsilon3(element: Element) -> f64 {
    match element {
        Element::He => -0.725931,
        Element::Li => -0.830896,
        Element::Be => -0.916709,
    }
}

/// Where the `D = 1` energy comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Eps1Source {
    /// Exact value of the delta-function model; available for helium only.
    ExactConstant,
    /// Single-exponent variational optimum.
    Variational1D,
    /// First-order estimate from the large-D limit.
    Subformula,
}

impl Eps1Source {
    pub const ALL: [Eps1Source; 3] = [Eps1Source::ExactConstant, Eps1Source::Variational1D, Eps1Source::Subformula];

    pub fn default_for(element: Element) -> Self {
        match element {
            Element::He => Eps1Source::ExactConstant,
            Element::Li | Element::Be => Eps1Source::Variational1D,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Eps1Source::ExactConstant => "exact",
            Eps1Source::Variational1D => "variational",
            Eps1Source::Subformula => "subformula",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomInterpolationInput {
    pub eps1: f64,
    pub epsinf: f64,
    pub coeffs: PerturbCoeffs,
    pub lambda: f64,
    pub source_eps1: Eps1Source,
}

impl AtomInterpolationInput {
    pub fn new(eps1: f64, epsinf: f64, coeffs: PerturbCoeffs, lambda: f64, source_eps1: Eps1Source) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::domain("lambda", format!("expected lambda in (0, 1], got {lambda}")));
        }
        if !(eps1 < 0.0 && epsinf < 0.0) {
            return Err(Error::domain("eps", "limit energies must be negative"));
        }
        Ok(Self {
            eps1,
            epsinf,
            coeffs,
            lambda,
            source_eps1,
        })
    }
}

/// Interpolated energy at `D = 3`.
pub fn atom_epsilon3(input: &AtomInterpolationInput) -> f64 {
    let c = &input.coeffs;
    input.eps1 / 3.0
        + 2.0 * input.epsinf / 3.0
        + (c.eps3_1 - c.eps1_1 / 3.0 - 2.0 * c.epsinf_1 / 3.0) * input.lambda
}

/// Interpolated energy at dimension `d`, given the first-order coefficient
/// `eps_d_1` at that dimension.
pub fn atom_epsilon_d(input: &AtomInterpolationInput, d: f64, eps_d_1: f64) -> Result<f64> {
    let delta = Dimension::new(d)?.delta();
    let c = &input.coeffs;
    Ok(delta * input.eps1
        + (1.0 - delta) * input.epsinf
        + (eps_d_1 - delta * c.eps1_1 - (1.0 - delta) * c.epsinf_1) * input.lambda)
}

/// First-order estimate `eps_inf + (eps_1^(1) - eps_inf^(1)) lambda` of the
/// `D = 1` energy.
pub fn one_dim_subformula(epsinf: f64, coeffs: &PerturbCoeffs, lambda: f64) -> f64 {
    epsinf + (coeffs.eps1_1 - coeffs.epsinf_1) * lambda
}

/// Converts a scaled energy to hartree: `(Z/beta)^2 eps`, `beta = (D-1)/2`.
pub fn to_hartree(eps: f64, z: u32, d: f64) -> Result<f64> {
    if !(d > 1.0) {
        return Err(Error::domain("D", format!("conversion needs D > 1, got {d}")));
    }
    let beta = Dimension::new(d)?.beta();
    let s = z as f64 / beta;
    Ok(s * s * eps)
}

/// `|computed - exact| / |exact| * 100`.
pub fn percent_error(computed: f64, exact: f64) -> f64 {
    (computed - exact).abs() / exact.abs() * 100.0
}

/// Everything that enters one atom's interpolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomInterpolation {
    pub element: Element,
    pub lambda: f64,
    pub xi0: f64,
    pub eps1_variational: f64,
    pub eps1_exact: Option<f64>,
    pub eps1_subformula: f64,
    pub epsinf: f64,
    pub gramian_form: GramianForm,
    pub geometry: AtomGeometry,
    pub coeffs: PerturbCoeffs,
    pub default_source: Eps1Source,
}

impl AtomInterpolation {
    pub fn eps1(&self, source: Eps1Source) -> Option<f64> {
        match source {
            Eps1Source::ExactConstant => self.eps1_exact,
            Eps1Source::Variational1D => Some(self.eps1_variational),
            Eps1Source::Subformula => Some(self.eps1_subformula),
        }
    }

    pub fn input(&self, source: Eps1Source) -> Option<AtomInterpolationInput> {
        Some(AtomInterpolationInput {
            eps1: self.eps1(source)?,
            epsinf: self.epsinf,
            coeffs: self.coeffs,
            lambda: self.lambda,
            source_eps1: source,
        })
    }

    pub fn epsilon3(&self, source: Eps1Source) -> Option<f64> {
        self.input(source).map(|i| atom_epsilon3(&i))
    }

    pub fn epsilon3_default(&self) -> f64 {
        self.epsilon3(self.default_source)
            .expect("default source is available for every element")
    }
}

/// Runs both limits and the coefficient assembly for one atom.
pub fn interpolate_atom(atom: &AtomSpec, settings: &OptimSettings) -> Result<AtomInterpolation> {
    let var = optimize_xi(atom);
    let min = minimize_atom(atom, settings)?;
    let coeffs = assemble_coefficients(atom);
    Ok(AtomInterpolation {
        element: atom.element,
        lambda: atom.lambda,
        xi0: var.xi0,
        eps1_variational: var.epsilon1,
        eps1_exact: (atom.element == Element::He).then_some(HE_EXACT_EPS1),
        eps1_subformula: one_dim_subformula(min.epsilon_inf, &coeffs, atom.lambda),
        epsinf: min.epsilon_inf,
        gramian_form: min.form,
        geometry: min.geometry,
        coeffs,
        default_source: Eps1Source::default_for(atom.element),
    })
}

/// One row of the H2 curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub r: f64,
    /// `eps_1(R/3)`.
    pub eps1_scaled: f64,
    /// `eps_inf(2R/3)`.
    pub epsinf_scaled: f64,
    pub eps3: f64,
    /// `eps3 + 1/R`.
    pub binding: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialCurve {
    pub points: Vec<CurvePoint>,
}

fn check_distance(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain("R", format!("internuclear distance must be positive, got {r}")));
    }
    Ok(())
}

pub fn h2_curve_point(r: f64, settings: &OptimSettings) -> Result<CurvePoint> {
    check_distance(r)?;
    let eps1_scaled = h2_epsilon1(r / 3.0)?;
    let epsinf_scaled = minimize_h2(2.0 * r / 3.0, settings)?.epsilon_inf;
    let eps3 = eps1_scaled / 3.0 + 2.0 * epsinf_scaled / 3.0;
    Ok(CurvePoint {
        r,
        eps1_scaled,
        epsinf_scaled,
        eps3,
        binding: eps3 + 1.0 / r,
    })
}

/// Interpolated electronic H2 energy at `D = 3` (nuclear repulsion excluded).
pub fn h2_epsilon3(r: f64, settings: &OptimSettings) -> Result<f64> {
    Ok(h2_curve_point(r, settings)?.eps3)
}

/// The same quantity from the rescaled Hamiltonians evaluated at `R` itself:
/// a Heitler-London treatment of the one-dimensional model with kinetic
/// factor 9 and delta strength 3, and the large-D Hamiltonian in coordinates
/// stretched by 3/2.
pub fn h2_epsilon3_rescaled(r: f64, settings: &OptimSettings) -> Result<f64> {
    check_distance(r)?;
    let eps1 = h2_heitler_london(r, 9.0, 3.0, 1.0)?;
    let (epsinf, _) = minimize_h2_rescaled(r, settings)?;
    Ok(eps1 / 3.0 + 2.0 * epsinf / 3.0)
}

/// Seed used for the curve point at `r`, independent of the grid it sits on.
pub fn point_seed(seed: u64, r: f64) -> u64 {
    seed ^ r.to_bits().rotate_left(17)
}

/// Uniform grid of `n_points` from `r_min` to `r_max`, evaluated in parallel.
pub fn build_curve(r_min: f64, r_max: f64, n_points: usize, settings: &OptimSettings) -> Result<PotentialCurve> {
    check_distance(r_min)?;
    if !(r_max > r_min && r_max.is_finite()) {
        return Err(Error::domain("r_max", format!("need r_min < r_max, got [{r_min}, {r_max}]")));
    }
    if n_points < 2 {
        return Err(Error::domain("points", format!("need at least 2 points, got {n_points}")));
    }
    let step = (r_max - r_min) / (n_points - 1) as f64;
    let grid: Vec<f64> = (0..n_points)
        .map(|k| if k + 1 == n_points { r_max } else { r_min + k as f64 * step })
        .collect();
    let points = grid
        .par_iter()
        .map(|&r| {
            let s = OptimSettings {
                seed: point_seed(settings.seed, r),
                ..*settings
            };
            h2_curve_point(r, &s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PotentialCurve { points })
}

impl PotentialCurve {
    /// Interior local minima of the binding curve, as grid indices.
    pub fn binding_minima(&self) -> Vec<usize> {
        (1..self.points.len().saturating_sub(1))
            .filter(|&k| {
                let v = self.points[k].binding;
                v < self.points[k - 1].binding && v <= self.points[k + 1].binding
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn he_coeffs() -> PerturbCoeffs {
        PerturbCoeffs {
            eps1_1: 0.5,
            eps3_1: 0.625,
            epsinf_1: std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    #[test]
    fn helium_with_exact_limits() {
        let input = AtomInterpolationInput::new(HE_EXACT_EPS1, HE_EPS_INF, he_coeffs(), 0.5, Eps1Source::ExactConstant).unwrap();
        assert!((atom_epsilon3(&input) + 0.725780).abs() < 1e-5);
    }

    #[test]
    fn general_d_weights_at_three() {
        let input = AtomInterpolationInput::new(-0.7, -0.6, he_coeffs(), 0.5, Eps1Source::Variational1D).unwrap();
        let a = atom_epsilon_d(&input, 3.0, 0.625).unwrap();
        assert!((a - atom_epsilon3(&input)).abs() < 1e-15);
    }

    #[test]
    fn subformula_identity_at_zero_coupling() {
        assert_eq!(one_dim_subformula(-0.684442, &he_coeffs(), 0.0), -0.684442);
    }

    #[test]
    fn hartree_conversion() {
        assert!((to_hartree(-0.725931, 2, 3.0).unwrap() + 2.903724).abs() < 1e-12);
        assert_eq!(to_hartree(-1.0, 1, 3.0).unwrap(), -1.0);
        assert!(to_hartree(-1.0, 1, 1.0).is_err());
    }

    #[test]
    fn input_validation() {
        assert!(AtomInterpolationInput::new(-0.7, -0.6, he_coeffs(), 0.0, Eps1Source::Subformula).is_err());
        assert!(AtomInterpolationInput::new(0.7, -0.6, he_coeffs(), 0.5, Eps1Source::Subformula).is_err());
    }

    #[test]
    fn point_seed_depends_only_on_r() {
        assert_eq!(point_seed(3, 1.5), point_seed(3, 1.5));
        assert_ne!(point_seed(3, 1.5), point_seed(3, 1.52));
    }
}
