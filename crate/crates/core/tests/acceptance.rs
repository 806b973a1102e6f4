//! Acceptance gate: one PASS/FAIL line per criterion, followed by the
//! individual checks. Exits non-zero if any criterion fails.

use dimscale::delta1d::{optimize_xi, optimize_xi_exact, Rational};
use dimscale::interp::{
    atom_epsilon3, build_curve, h2_epsilon3, h2_epsilon3_rescaled, interpolate_atom, one_dim_subformula, to_hartree,
    AtomInterpolationInput, Eps1Source, HE_EPS_INF, HE_EXACT_EPS1,
};
use dimscale::large_d::{
    atom_effective_energy, h2_effective_energy, minimize_atom, minimize_atom_with, minimize_h2, minimize_h2_branch,
    AtomGeometry, GramianForm, H2Branch, H2Geometry,
};
use dimscale::optim::OptimSettings;
use dimscale::pertcoef::{
    assemble_coefficients, derivative_integral_k, pair_coefficient, quadrature_oracle_d3, DimLimit, PairKind,
};
use dimscale::specfun::{gauss_2f1_family, gauss_2f1_family_limit};
use dimscale::{AtomSpec, Element};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Criterion {
    id: u32,
    title: &'static str,
    lines: Vec<(bool, String)>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Self {
            id,
            title,
            lines: Vec::new(),
        }
    }

    fn near(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.lines
            .push((ok, format!("{what}: got {got:.9}, want {want} +- {tol:e} (diff {:.2e})", (got - want).abs())));
    }

    fn check(&mut self, what: &str, ok: bool, detail: String) {
        self.lines.push((ok, format!("{what}: {detail}")));
    }

    fn info(&mut self, what: &str, detail: String) {
        self.lines.push((true, format!("{what} (informational): {detail}")));
    }

    fn passed(&self) -> bool {
        self.lines.iter().all(|(ok, _)| *ok)
    }

    fn print(&self) {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        println!("{tag} criterion {:>2}: {}", self.id, self.title);
        for (ok, line) in &self.lines {
            println!("    [{}] {line}", if *ok { "ok" } else { "FAIL" });
        }
    }
}

fn settings() -> OptimSettings {
    OptimSettings::default()
}

fn c1() -> Criterion {
    let mut c = Criterion::new(1, "helium one-dimensional variational optimum");
    let (xi, eps) = optimize_xi_exact(&AtomSpec::helium());
    c.check("xi0 exact", xi == Rational::new(7, 8), format!("{xi}"));
    c.check("eps1 exact", eps == Rational::new(-49, 64), format!("{eps}"));
    let v = optimize_xi(&AtomSpec::helium());
    c.near("xi0", v.xi0, 0.875, 1e-12);
    c.near("eps1", v.epsilon1, -0.765625, 1e-12);
    c
}

fn c2() -> Criterion {
    let mut c = Criterion::new(2, "helium interpolation");
    let he = AtomSpec::helium();
    let coeffs = assemble_coefficients(&he);
    let exact = AtomInterpolationInput::new(HE_EXACT_EPS1, HE_EPS_INF, coeffs, 0.5, Eps1Source::ExactConstant).unwrap();
    c.near("eps3 from exact limits", atom_epsilon3(&exact), -0.725780, 1e-5);
    let run = interpolate_atom(&he, &settings()).unwrap();
    c.near("eps3 from computed limits", run.epsilon3(Eps1Source::ExactConstant).unwrap(), -0.725780, 1e-5);
    let sub = one_dim_subformula(run.epsinf, &coeffs, he.lambda);
    c.near("subformula eps1", sub, -0.787996, 1e-5);
    c.near("eps3 from subformula eps1", run.epsilon3(Eps1Source::Subformula).unwrap(), -0.725496, 1e-5);
    c
}

fn c3() -> Criterion {
    let mut c = Criterion::new(3, "helium large-D minimum");
    let m = minimize_atom(&AtomSpec::helium(), &settings()).unwrap();
    c.near("eps_inf", m.epsilon_inf, -0.684442, 5e-6);
    let r = m.geometry.radii();
    c.check("r1 = r2", (r[0] - r[1]).abs() <= 1e-6, format!("|r1 - r2| = {:.2e}", (r[0] - r[1]).abs()));
    c
}

fn atom_criterion(
    c: &mut Criterion,
    atom: &AtomSpec,
    xi0: f64,
    eps1: f64,
    eps_inf: f64,
    coeffs: [f64; 3],
    eps3: f64,
) {
    let v = optimize_xi(atom);
    c.near("xi0", v.xi0, xi0, 1e-6);
    c.near("eps1", v.epsilon1, eps1, 1e-6);

    let selected = minimize_atom(atom, &settings()).unwrap();
    c.check(
        "selected Gramian form",
        selected.form == GramianForm::Expanded,
        format!("{:?}", selected.form),
    );
    c.near("eps_inf (selected form)", selected.epsilon_inf, eps_inf, 5e-6);
    let exact = minimize_atom_with(atom, GramianForm::Exact, &settings()).unwrap();
    c.near("eps_inf (exact Gramian ratio)", exact.epsilon_inf, eps_inf, 2e-3);

    let k = assemble_coefficients(atom);
    c.near("eps1^(1)", k.eps1_1, coeffs[0], 1e-6);
    c.near("eps3^(1)", k.eps3_1, coeffs[1], 1e-6);
    c.near("eps_inf^(1)", k.epsinf_1, coeffs[2], 1e-6);

    let run = interpolate_atom(atom, &settings()).unwrap();
    c.near("eps3 (variational eps1)", run.epsilon3_default(), eps3, 1e-4);
}

fn c4() -> Criterion {
    let mut c = Criterion::new(4, "lithium");
    atom_criterion(
        &mut c,
        &AtomSpec::lithium(),
        0.697856,
        -0.693979,
        -0.795453,
        [0.633333, 1.044753, 1.601531],
        -0.839648,
    );
    c
}

fn c5() -> Criterion {
    let mut c = Criterion::new(5, "beryllium");
    atom_criterion(
        &mut c,
        &AtomSpec::beryllium(),
        0.590850,
        -0.645842,
        -0.875837,
        [0.855417, 1.740202, 2.849508],
        -0.910325,
    );
    c.near("pair 1s-2s, D = 3", pair_coefficient(DimLimit::Three, PairKind::S1S2), 17.0 / 81.0, 1e-6);
    c.near("pair 2s-2s, D = 3", pair_coefficient(DimLimit::Three, PairKind::S2S2), 0.275696, 1e-6);
    c.near("pair 1s-2s, D = inf", pair_coefficient(DimLimit::Infinity, PairKind::S1S2), 0.447212, 1e-6);
    c.near("pair 2s-2s, D = inf", pair_coefficient(DimLimit::Infinity, PairKind::S2S2), 0.353553, 1e-6);
    c
}

fn c6() -> Criterion {
    let mut c = Criterion::new(6, "integral route agrees with radial quadrature");
    for pair in PairKind::ALL {
        c.near(
            &format!("{pair:?} K-route vs quadrature"),
            pair_coefficient(DimLimit::Three, pair),
            quadrature_oracle_d3(pair),
            1e-6,
        );
    }
    let mut worst: f64 = 0.0;
    for &(a, b) in &[(1.0, 1.0), (2.0, 1.0)] {
        for i in 0..=3usize {
            for j in 0..=3usize {
                let h = 1e-3 * a;
                let k = |x: f64| derivative_integral_k(3.0, i, j, x, b).unwrap();
                let fd = -(k(a - 2.0 * h) - 8.0 * k(a - h) + 8.0 * k(a + h) - k(a + 2.0 * h)) / (12.0 * h);
                let exact = derivative_integral_k(3.0, i + 1, j, a, b).unwrap();
                worst = worst.max(((exact - fd) / exact).abs());
            }
        }
    }
    c.check(
        "K derivatives vs finite differences",
        worst <= 1e-7,
        format!("worst relative error {worst:.2e} (tolerance 1e-7)"),
    );
    c
}

fn c7() -> Criterion {
    let mut c = Criterion::new(7, "hypergeometric large-D limit");
    let v = gauss_2f1_family(1e6, 1.0 / 9.0).unwrap();
    c.near("F at D = 1e6, y = 1/9", v, 0.948683, 1e-6);
    c.near("same vs (1 + 1/9)^(-1/2)", v, gauss_2f1_family_limit(1.0 / 9.0), 1e-5);
    c
}

fn c8() -> Criterion {
    let mut c = Criterion::new(8, "H2 potential curve");
    let s = settings();
    let e20 = h2_epsilon3(20.0, &s).unwrap();
    c.near("eps3(20) dissociates to -1", e20, -1.0, 1e-3);
    c.info("binding(20) = eps3(20) + 1/20", format!("{:.9}", e20 + 1.0 / 20.0));

    let curve = build_curve(0.5, 6.0, 276, &s).unwrap();
    let minima = curve.binding_minima();
    let located: Vec<f64> = minima.iter().map(|&k| curve.points[k].r).collect();
    c.check(
        "single binding minimum on [0.5, 6]",
        minima.len() == 1,
        format!("interior minima at R = {located:?}"),
    );
    c.check(
        "minimum located in [1, 2]",
        located.len() == 1 && (1.0..=2.0).contains(&located[0]),
        format!("R = {located:?}"),
    );
    let worst = curve
        .points
        .iter()
        .map(|p| (p.binding - p.eps3 - 1.0 / p.r).abs())
        .fold(0.0, f64::max);
    c.check("binding = eps3 + 1/R on every row", worst <= 1e-12, format!("max deviation {worst:.1e}"));

    let anti = minimize_h2(8.0, &s).unwrap().epsilon_inf;
    let sym = minimize_h2_branch(8.0, H2Branch::Symmetric, &s).unwrap().epsilon_inf;
    c.check(
        "antisymmetric below symmetric at R = 8",
        anti < sym,
        format!("{anti:.6} vs {sym:.6}"),
    );
    for r in [1.0, 2.0, 4.0] {
        let direct = h2_epsilon3(r, &s).unwrap();
        let rescaled = h2_epsilon3_rescaled(r, &s).unwrap();
        c.near(&format!("rescaled-Hamiltonian route at R = {r}"), rescaled, direct, 1e-4);
    }
    c
}

fn random_atom_geometry(rng: &mut ChaCha8Rng, n: usize) -> AtomGeometry {
    loop {
        let radii: Vec<f64> = (0..n).map(|_| (rng.gen_range(-1.5f64..3.0)).exp()).collect();
        let dirs: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.into_iter().map(|x| x / norm).collect()
            })
            .collect();
        let mut cos = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                cos.push(dirs[i].iter().zip(&dirs[j]).map(|(x, y)| x * y).sum());
            }
        }
        if let Ok(g) = AtomGeometry::new(radii, cos) {
            return g;
        }
    }
}

fn c9() -> Criterion {
    let mut c = Criterion::new(9, "optimizer determinism, stationarity and variational bounds");
    let s = settings();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for atom in [AtomSpec::helium(), AtomSpec::lithium(), AtomSpec::beryllium()] {
        let a = minimize_atom(&atom, &s).unwrap();
        let b = minimize_atom(&atom, &s).unwrap();
        c.check(
            &format!("{} determinism", atom.element),
            a == b && a.epsilon_inf.to_bits() == b.epsilon_inf.to_bits(),
            format!("{:.12}", a.epsilon_inf),
        );
        c.check(
            &format!("{} stationarity", atom.element),
            a.report.converged && a.report.gradient_norm_fd <= 1e-6,
            format!("gradient norm {:.2e}", a.report.gradient_norm_fd),
        );
        let mut below = 0;
        for _ in 0..1000 {
            let g = random_atom_geometry(&mut rng, atom.electron_count());
            if atom_effective_energy(&atom, &g).unwrap() < a.epsilon_inf {
                below += 1;
            }
        }
        c.check(
            &format!("{} bound over 1000 random geometries", atom.element),
            below == 0,
            format!("{below} geometries below the minimum"),
        );
    }
    let r = 1.4;
    let a = minimize_h2(r, &s).unwrap();
    let b = minimize_h2(r, &s).unwrap();
    c.check("H2 determinism", a == b, format!("{:.12}", a.epsilon_inf));
    c.check(
        "H2 stationarity",
        a.report.converged && a.report.gradient_norm_fd <= 1e-6,
        format!("gradient norm {:.2e}", a.report.gradient_norm_fd),
    );
    let mut below = 0;
    for _ in 0..1000 {
        let g = H2Geometry::on_branch(
            H2Branch::Antisymmetric,
            rng.gen_range(-1.5f64..2.0).exp(),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(0.01..std::f64::consts::PI - 0.01),
            r,
        );
        if h2_effective_energy(&g, H2Branch::Antisymmetric).unwrap() < a.epsilon_inf {
            below += 1;
        }
    }
    c.check("H2 bound over 1000 random geometries", below == 0, format!("{below} geometries below the minimum"));
    c
}

fn c10() -> Criterion {
    let mut c = Criterion::new(10, "hartree conversion");
    c.near("helium eps3 -0.725931 in hartree", to_hartree(-0.725931, Element::He.nuclear_charge(), 3.0).unwrap(), -2.903724, 1e-6);
    c
}

fn main() {
    let criteria = [c1(), c2(), c3(), c4(), c5(), c6(), c7(), c8(), c9(), c10()];
    for c in &criteria {
        c.print();
    }
    let failed: Vec<u32> = criteria.iter().filter(|c| !c.passed()).map(|c| c.id).collect();
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed.len(),
        criteria.len()
    );
    if !failed.is_empty() {
        println!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
