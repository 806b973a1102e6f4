//! `D -> infinity` effective Hamiltonians.
//!
//! In the large-dimension limit the electrons freeze at fixed radii and
//! mutual angles and the energy becomes an ordinary function of that geometry.
//! Its minimum is `eps_inf`. The kinetic factor of electron `i` is the ratio of
//! Gramian determinants `Gamma^(i) / Gamma` of the direction-cosine matrix.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::delta1d::{AtomSpec, Element};
use crate::error::{Error, Result};
use crate::optim::{minimize_with, OptimProblem, OptimReport, OptimSettings, Transform};

/// How the per-electron Gramian factor is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GramianForm {
    /// The exact ratio `Gamma^(i) / Gamma = (G^-1)_ii`.
    Exact,
    /// The truncated polynomial `2 - det G`, identical for every electron.
    /// For three electrons this is `1 + sum gamma^2 - 2 g12 g13 g23`.
    Expanded,
}

impl GramianForm {
    /// The form that reproduces the reference minima for each atom: exact for
    /// two electrons, the truncated polynomial for three and four.
    pub fn default_for(element: Element) -> Self {
        match element {
            Element::He => GramianForm::Exact,
            Element::Li | Element::Be => GramianForm::Expanded,
        }
    }
}

fn cholesky_or_domain(g: &DMatrix<f64>) -> Result<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
    if !g.is_square() || g.nrows() == 0 {
        return Err(Error::domain("cosines", "Gram matrix must be square and non-empty"));
    }
    if (g - g.transpose()).amax() > 1e-12 {
        return Err(Error::domain("cosines", "Gram matrix must be symmetric"));
    }
    g.clone()
        .cholesky()
        .ok_or_else(|| Error::domain("cosines", "Gram matrix is not positive definite"))
}

/// `Gamma^(i) / Gamma` for the Gram matrix `g` of unit direction vectors.
pub fn gram_ratio(g: &DMatrix<f64>, i: usize) -> Result<f64> {
    let chol = cholesky_or_domain(g)?;
    if i >= g.nrows() {
        return Err(Error::domain("i", format!("electron index {i} out of range")));
    }
    Ok(chol.inverse()[(i, i)])
}

/// The truncated Gramian factor `2 - det G`.
pub fn gram_ratio_expanded(g: &DMatrix<f64>, i: usize) -> Result<f64> {
    let chol = cholesky_or_domain(g)?;
    if i >= g.nrows() {
        return Err(Error::domain("i", format!("electron index {i} out of range")));
    }
    Ok(2.0 - chol.determinant())
}

/// Electron radii and pairwise direction cosines of a frozen atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomGeometry {
    radii: Vec<f64>,
    /// Cosines `gamma_ij` for `i < j` in row-major order.
    cosines: Vec<f64>,
}

impl AtomGeometry {
    pub fn new(radii: Vec<f64>, cosines: Vec<f64>) -> Result<Self> {
        let n = radii.len();
        if n < 2 {
            return Err(Error::domain("radii", "need at least two electrons"));
        }
        if cosines.len() != n * (n - 1) / 2 {
            return Err(Error::domain(
                "cosines",
                format!("expected {} cosines for {n} electrons, got {}", n * (n - 1) / 2, cosines.len()),
            ));
        }
        if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
            return Err(Error::domain("radii", format!("radii must be positive, got {r}")));
        }
        if let Some(c) = cosines.iter().find(|c| !(c.abs() < 1.0)) {
            return Err(Error::domain("cosines", format!("cosines must lie in (-1, 1), got {c}")));
        }
        let geometry = Self { radii, cosines };
        cholesky_or_domain(&geometry.gram_matrix())?;
        Ok(geometry)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn cosines(&self) -> &[f64] {
        &self.cosines
    }

    pub fn electron_count(&self) -> usize {
        self.radii.len()
    }

    pub fn cosine(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 1.0;
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let n = self.radii.len();
        // offset of row i in the packed upper triangle
        let row = i * (2 * n - i - 1) / 2;
        self.cosines[row + (j - i - 1)]
    }

    pub fn gram_matrix(&self) -> DMatrix<f64> {
        let n = self.radii.len();
        DMatrix::from_fn(n, n, |i, j| self.cosine(i, j))
    }

    /// The same angles with every radius multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.radii.iter().map(|r| r * s).collect(), self.cosines.clone())
    }
}

/// Kinetic, nuclear-attraction and (unweighted) repulsion parts of the
/// effective energy; the total is `kinetic + attraction + lambda * repulsion`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyParts {
    pub kinetic: f64,
    pub attraction: f64,
    pub repulsion: f64,
}

impl EnergyParts {
    pub fn total(&self, lambda: f64) -> f64 {
        self.kinetic + self.attraction + lambda * self.repulsion
    }
}

pub fn atom_energy_parts(atom: &AtomSpec, g: &AtomGeometry, form: GramianForm) -> Result<EnergyParts> {
    let n = atom.electron_count();
    if g.electron_count() != n {
        return Err(Error::domain(
            "geometry",
            format!("{} electrons in geometry, {n} in atom", g.electron_count()),
        ));
    }
    let chol = cholesky_or_domain(&g.gram_matrix())?;
    let factors: Vec<f64> = match form {
        GramianForm::Exact => {
            let inv = chol.inverse();
            (0..n).map(|i| inv[(i, i)]).collect()
        }
        GramianForm::Expanded => vec![2.0 - chol.determinant(); n],
    };

    let r = g.radii();
    let kinetic = 0.5
        * atom
            .occupancy
            .iter()
            .zip(r)
            .zip(&factors)
            .map(|((o, ri), f)| {
                let n = o.n() as f64;
                n * n / (ri * ri) * f
            })
            .sum::<f64>();
    let attraction = -r.iter().map(|ri| 1.0 / ri).sum::<f64>();
    let mut repulsion = 0.0;
    for (i, j) in atom.pairs() {
        let d2 = r[i] * r[i] + r[j] * r[j] - 2.0 * r[i] * r[j] * g.cosine(i, j);
        if !(d2 > 1e-300) {
            return Err(Error::domain("geometry", format!("electrons {i} and {j} coincide")));
        }
        repulsion += 1.0 / d2.sqrt();
    }
    Ok(EnergyParts {
        kinetic,
        attraction,
        repulsion,
    })
}

/// Effective energy with the atom's default Gramian form.
pub fn atom_effective_energy(atom: &AtomSpec, g: &AtomGeometry) -> Result<f64> {
    atom_effective_energy_with(atom, g, GramianForm::default_for(atom.element))
}

pub fn atom_effective_energy_with(atom: &AtomSpec, g: &AtomGeometry, form: GramianForm) -> Result<f64> {
    Ok(atom_energy_parts(atom, g, form)?.total(atom.lambda))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomMinimum {
    pub epsilon_inf: f64,
    pub geometry: AtomGeometry,
    pub form: GramianForm,
    pub report: OptimReport,
}

pub fn minimize_atom(atom: &AtomSpec, settings: &OptimSettings) -> Result<AtomMinimum> {
    minimize_atom_with(atom, GramianForm::default_for(atom.element), settings)
}

/// Multi-start minimization over radii and cosines, starting from hydrogenic
/// shell radii `n^2` and all cosines `-0.1`.
pub fn minimize_atom_with(atom: &AtomSpec, form: GramianForm, settings: &OptimSettings) -> Result<AtomMinimum> {
    let n = atom.electron_count();
    let m = n * (n - 1) / 2;
    let mut transforms = vec![Transform::Positive; n];
    transforms.extend(std::iter::repeat(Transform::Cosine).take(m));
    let mut start: Vec<f64> = atom.occupancy.iter().map(|o| (o.n() * o.n()) as f64).collect();
    start.extend(std::iter::repeat(-0.1).take(m));

    let problem = OptimProblem::new(transforms, start, |x| {
        AtomGeometry::new(x[..n].to_vec(), x[n..].to_vec())
            .and_then(|g| atom_effective_energy_with(atom, &g, form))
            .unwrap_or(f64::INFINITY)
    });
    let report = minimize_with(&problem, settings)?;
    if !report.converged {
        return Err(Error::NonConvergence(format!(
            "{} large-D minimum: gradient norm {:.3e}",
            atom.element, report.gradient_norm_fd
        )));
    }
    let x = &report.best_point;
    let geometry = AtomGeometry::new(x[..n].to_vec(), x[n..].to_vec())?;
    Ok(AtomMinimum {
        epsilon_inf: report.best_value,
        geometry,
        form,
        report,
    })
}

/// Electron placement for H2 in cylindrical coordinates about the molecular
/// axis, nuclei at `z = -+R/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H2Geometry {
    pub rho: [f64; 2],
    pub z: [f64; 2],
    /// Dihedral angle between the electrons about the axis.
    pub phi: f64,
    /// Internuclear distance.
    pub r: f64,
}

impl H2Geometry {
    pub fn a(&self) -> f64 {
        0.5 * self.r
    }

    /// Branch-constrained geometry: `rho_1 = rho_2 = rho`, `z_1 = z`, and
    /// `z_2 = z` (symmetric) or `z_2 = -z` (antisymmetric).
    pub fn on_branch(branch: H2Branch, rho: f64, z: f64, phi: f64, r: f64) -> Self {
        let z2 = match branch {
            H2Branch::Symmetric => z,
            H2Branch::Antisymmetric => -z,
        };
        Self {
            rho: [rho, rho],
            z: [z, z2],
            phi,
            r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum H2Branch {
    /// `rho_1 = rho_2`, `z_1 = z_2`.
    Symmetric,
    /// `rho_1 = rho_2`, `z_1 = -z_2`; the ground state.
    Antisymmetric,
}

fn h2_energy_unchecked(g: &H2Geometry) -> f64 {
    let a = g.a();
    let sin2 = g.phi.sin().powi(2);
    let kinetic = 0.5 * (1.0 / g.rho[0].powi(2) + 1.0 / g.rho[1].powi(2)) / sin2;
    let attraction: f64 = (0..2)
        .map(|i| {
            let (rho, z) = (g.rho[i], g.z[i]);
            1.0 / (rho * rho + (z + a).powi(2)).sqrt() + 1.0 / (rho * rho + (z - a).powi(2)).sqrt()
        })
        .sum();
    let d2 = (g.z[0] - g.z[1]).powi(2) + g.rho[0].powi(2) + g.rho[1].powi(2)
        - 2.0 * g.rho[0] * g.rho[1] * g.phi.cos();
    kinetic - attraction + 1.0 / d2.sqrt()
}

/// Large-D electronic energy of H2 (nuclear repulsion excluded).
pub fn h2_effective_energy(g: &H2Geometry, branch: H2Branch) -> Result<f64> {
    if !(g.rho[0] > 0.0 && g.rho[1] > 0.0) {
        return Err(Error::domain("rho", "cylindrical radii must be positive"));
    }
    if !(g.phi > 0.0 && g.phi < std::f64::consts::PI) {
        return Err(Error::domain("phi", format!("dihedral angle must lie in (0, pi), got {}", g.phi)));
    }
    if !(g.r >= 0.0) {
        return Err(Error::domain("R", format!("internuclear distance must be >= 0, got {}", g.r)));
    }
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
    let on_branch = close(g.rho[0], g.rho[1])
        && match branch {
            H2Branch::Symmetric => close(g.z[0], g.z[1]),
            H2Branch::Antisymmetric => close(g.z[0], -g.z[1]),
        };
    if !on_branch {
        return Err(Error::domain("geometry", format!("not on the {branch:?} branch")));
    }
    let e = h2_energy_unchecked(g);
    if !e.is_finite() {
        return Err(Error::domain("geometry", "electrons coincide"));
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct H2Minimum {
    pub epsilon_inf: f64,
    pub geometry: H2Geometry,
    pub report: OptimReport,
}

/// Ground-state (antisymmetric branch) large-D energy at distance `r`.
pub fn minimize_h2(r: f64, settings: &OptimSettings) -> Result<H2Minimum> {
    minimize_h2_branch(r, H2Branch::Antisymmetric, settings)
}

/// Minimizes over `(rho, z, cos phi)` on one branch, starting from
/// `rho = 1`, `z = R/2`, `phi = pi/2`.
pub fn minimize_h2_branch(r: f64, branch: H2Branch, settings: &OptimSettings) -> Result<H2Minimum> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::domain("R", format!("internuclear distance must be >= 0, got {r}")));
    }
    let geometry_of = |x: &[f64]| H2Geometry::on_branch(branch, x[0], x[1], x[2].acos(), r);
    let problem = OptimProblem::new(
        vec![Transform::Positive, Transform::Free, Transform::Cosine],
        vec![1.0, 0.5 * r, 0.0],
        |x| h2_energy_unchecked(&geometry_of(x)),
    );
    let report = minimize_with(&problem, settings)?;
    if !report.converged {
        return Err(Error::NonConvergence(format!(
            "H2 large-D minimum at R = {r}: gradient norm {:.3e}",
            report.gradient_norm_fd
        )));
    }
    Ok(H2Minimum {
        epsilon_inf: report.best_value,
        geometry: geometry_of(&report.best_point),
        report,
    })
}

/// The antisymmetric-branch Hamiltonian written in coordinates rescaled by
/// `3/2` at rescaled distance `r_prime`:
/// `(9/4)/(rho^2 sin^2 phi) - 3[1/|e - A| + 1/|e - B|] + (3/2)/sqrt(4z^2 + 2rho^2 (1 - cos phi))`.
///
/// Its minimum equals the ordinary large-D energy at `2 r_prime / 3`.
pub fn h2_rescaled_energy(rho: f64, z: f64, phi: f64, r_prime: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::domain("rho", "cylindrical radius must be positive"));
    }
    if !(phi > 0.0 && phi < std::f64::consts::PI) {
        return Err(Error::domain("phi", format!("dihedral angle must lie in (0, pi), got {phi}")));
    }
    let a = 0.5 * r_prime;
    let kinetic = 2.25 / (rho * rho * phi.sin().powi(2));
    let attraction = 3.0 * (1.0 / (rho * rho + (z + a).powi(2)).sqrt() + 1.0 / (rho * rho + (z - a).powi(2)).sqrt());
    let j = 1.0 / (4.0 * z * z + 2.0 * rho * rho * (1.0 - phi.cos())).sqrt();
    Ok(kinetic - attraction + 1.5 * j)
}

/// Minimum of [`h2_rescaled_energy`] over `(rho, z, phi)`.
pub fn minimize_h2_rescaled(r_prime: f64, settings: &OptimSettings) -> Result<(f64, OptimReport)> {
    if !(r_prime >= 0.0 && r_prime.is_finite()) {
        return Err(Error::domain("R", format!("internuclear distance must be >= 0, got {r_prime}")));
    }
    let problem = OptimProblem::new(
        vec![Transform::Positive, Transform::Free, Transform::Cosine],
        vec![1.5, 0.5 * r_prime, 0.0],
        |x| h2_rescaled_energy(x[0], x[1], x[2].acos(), r_prime).unwrap_or(f64::INFINITY),
    );
    let report = minimize_with(&problem, settings)?;
    if !report.converged {
        return Err(Error::NonConvergence(format!(
            "rescaled H2 minimum at R' = {r_prime}: gradient norm {:.3e}",
            report.gradient_norm_fd
        )));
    }
    Ok((report.best_value, report))
}
