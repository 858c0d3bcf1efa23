//! Unimodular rational interpolation on the disk.
//!
//! The pipeline has three stages.
//!
//! 1. [`solve_centered`] handles data with a node at the origin. The Pick
//!    matrix is split into Gram parts, the resulting kernel identity defines
//!    a partial J-isometry, and its J-unitary extension is read as a
//!    transfer-function realization `φ = p̃ / p`. This interpolates strictly at
//!    the origin and at least weakly everywhere else.
//! 2. [`solve_all_shifts`] moves every node to the origin in turn with a
//!    disk automorphism and pulls the centered solution back, giving one
//!    polynomial `p_j` per node that is nonzero at `λ_j`.
//! 3. [`combine`] mixes the `p_j` with real weights into `q` with no zeros at
//!    the nodes, so `q̃ / q` interpolates strictly everywhere.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TakagiError};
use crate::krein::{extend_j_isometry_with, PartialJIsometry, SignatureMatrix};
use crate::linalg::{
    hermitian_inertia, BlaschkeProduct, CMatrix, CPoly, Inertia, MoebiusMap, DEFAULT_INERTIA_TOL,
};
use crate::pick::{gram_decompose, pick_matrix, DiskProblem};
use crate::random::DEFAULT_SEED;
use crate::rational::{NodeStatus, RationalFunction, RationalInterpolant, DEFAULT_GCD_TOL};
use crate::realization::{
    absorb_reflection_constant, realization_to_rational, realization_to_rational_sampled,
    reflection_constant, Realization,
};
use crate::verify::{blaschke_factors, certify_disk, check_interpolation, count_zeros_poles, CertificateTolerances, DiskCertificate};
use crate::C64;

/// How the realization is turned into polynomial coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PolynomialRoute {
    /// Determinants at roots of unity followed by an inverse DFT.
    #[default]
    Sampled,
    /// Faddeev–LeVerrier recurrence for the characteristic polynomial and adjugate.
    Leverrier,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub seed: u64,
    /// Relative eigenvalue threshold for the Pick matrix inertia.
    pub inertia_tol: f64,
    /// Allowed relative J-Gram mismatch between domain and range vectors.
    pub gram_tol: f64,
    /// Relative threshold for radical directions of the J-Gram.
    pub radical_tol: f64,
    /// Root-matching radius for cancelling common factors.
    pub gcd_tol: f64,
    pub combination_attempts: usize,
    pub parallel: bool,
    pub route: PolynomialRoute,
    pub tolerances: CertificateTolerances,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            inertia_tol: DEFAULT_INERTIA_TOL,
            gram_tol: 1e-6,
            radical_tol: 1e-9,
            gcd_tol: DEFAULT_GCD_TOL,
            combination_attempts: 64,
            parallel: true,
            route: PolynomialRoute::Sampled,
            tolerances: CertificateTolerances::default(),
        }
    }
}

/// Output of the centered solve: `φ = p̃_d / p` with `d = declared_degree`.
#[derive(Debug, Clone)]
pub struct CenteredSolution {
    pub p: CPoly,
    pub declared_degree: usize,
    pub realization: Realization,
    pub inertia: Inertia,
    pub status: Vec<NodeStatus>,
}

impl CenteredSolution {
    pub fn function(&self) -> Result<RationalFunction> {
        Ok(RationalFunction::new(self.p.reflect(self.declared_degree)?, self.p.clone()))
    }
}

/// Solves the problem weakly from a realization. The first node must be the origin.
pub fn solve_centered(problem: &DiskProblem, opts: &SolverOptions) -> Result<CenteredSolution> {
    if problem.nodes()[0].norm() > 1e-14 {
        return Err(TakagiError::InvalidInput(
            "the centered solve needs the first node at the origin".into(),
        ));
    }
    let gamma = pick_matrix(problem);
    let split = gram_decompose(&gamma, opts.inertia_tol)?;
    let inertia = split.inertia;
    let x = split.stacked();
    let (n, kappa) = (x.nrows(), x.ncols());
    let j1 = SignatureMatrix::block(
        split.u.ncols() + split.y.ncols(),
        split.v.ncols() + split.y.ncols(),
    );

    let mut domain = CMatrix::zeros(kappa + 1, n);
    let mut range = CMatrix::zeros(kappa + 1, n);
    for (i, (&l, &w)) in problem.nodes().iter().zip(problem.values()).enumerate() {
        domain[(0, i)] = C64::new(1.0, 0.0);
        range[(0, i)] = w;
        for k in 0..kappa {
            domain[(k + 1, i)] = l * x[(i, k)];
            range[(k + 1, i)] = x[(i, k)];
        }
    }
    let partial = PartialJIsometry::new(j1.with_leading_positive(), domain, range)?;
    let v1 = extend_j_isometry_with(&partial, opts.gram_tol, opts.radical_tol)?;
    let realization = Realization::from_colligation(&v1, j1)?;

    let (q, p) = match opts.route {
        PolynomialRoute::Sampled => realization_to_rational_sampled(&realization),
        PolynomialRoute::Leverrier => realization_to_rational(&realization),
    };
    let c = reflection_constant(&q, &p, kappa)?;
    let p = absorb_reflection_constant(&p, c).padded(kappa + 1);
    let phi = RationalFunction::new(p.reflect(kappa)?, p.clone());
    let status = check_interpolation(&phi, problem, opts.tolerances.interpolation).status;
    Ok(CenteredSolution {
        p,
        declared_degree: kappa,
        realization,
        inertia,
        status,
    })
}

/// Polynomial `p_j` of the `j`-th shifted solve, `φ_j = p̃_j / p_j`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShiftedPolynomial {
    pub index: usize,
    /// Coefficients padded to the common degree of the family.
    pub p: CPoly,
    /// Degree of the underlying centered solve.
    pub declared_degree: usize,
    /// Power of `(1 + z)` appended to reach the common degree.
    pub padding: usize,
}

fn solve_shift(problem: &DiskProblem, j: usize, opts: &SolverOptions) -> Result<(CPoly, usize)> {
    let m = MoebiusMap::swap(problem.nodes()[j])?;
    let n = problem.len();
    let order: Vec<usize> = std::iter::once(j).chain((0..n).filter(|&i| i != j)).collect();
    let nodes: Vec<C64> = order
        .iter()
        .map(|&i| if i == j { C64::new(0.0, 0.0) } else { m.eval(problem.nodes()[i]) })
        .collect();
    let values: Vec<C64> = order.iter().map(|&i| problem.values()[i]).collect();
    let shifted = DiskProblem::new(nodes, values)?;
    let centered = solve_centered(&shifted, opts)?;
    let d = centered.declared_degree;
    let (pulled, _) = m.compose_poly(&centered.p, d)?;
    let (pulled_reflection, _) = m.compose_poly(&centered.p.reflect(d)?, d)?;
    let c = reflection_constant(&pulled_reflection, &pulled, d)?;
    Ok((absorb_reflection_constant(&pulled, c).padded(d + 1), d))
}

/// Runs the shifted solve for every node and pads the results by powers of
/// `(1 + z)` to a common degree.
pub fn solve_all_shifts(problem: &DiskProblem, opts: &SolverOptions) -> Result<Vec<ShiftedPolynomial>> {
    let run = |j: usize| solve_shift(problem, j, opts).map_err(|e| TakagiError::ShiftFailed {
        index: j,
        source: Box::new(e),
    });
    let raw: Vec<(CPoly, usize)> = if opts.parallel {
        (0..problem.len()).into_par_iter().map(run).collect::<Result<_>>()?
    } else {
        (0..problem.len()).map(run).collect::<Result<_>>()?
    };
    let common = raw.iter().map(|(_, d)| *d).max().unwrap_or(0);
    let one_plus_z = CPoly::from_real(&[1.0, 1.0]);
    Ok(raw
        .into_iter()
        .enumerate()
        .map(|(index, (p, d))| {
            let padding = common - d;
            ShiftedPolynomial {
                index,
                p: (&p * &one_plus_z.pow(padding)).padded(common + 1),
                declared_degree: d,
                padding,
            }
        })
        .collect())
}

/// A certified solution `φ = f / g` of the interpolation problem.
#[derive(Debug, Clone)]
pub struct TakagiSolution {
    /// Reduced `q̃ / q` with per-node status.
    pub interpolant: RationalInterpolant,
    /// `q̃ / q` before cancellation of common factors.
    pub unreduced: RationalFunction,
    /// Blaschke product of the zeros in the disk, carrying the unimodular constant.
    pub f: BlaschkeProduct,
    /// Blaschke product of the poles in the disk.
    pub g: BlaschkeProduct,
    pub inertia: Inertia,
    /// Common degree of the shifted polynomials.
    pub declared_degree: usize,
    pub weights: Vec<f64>,
    /// `min_i |q(λ_i)| / (max_j ‖p_j‖ · ‖t‖)` for the chosen weights.
    pub margin: f64,
    pub shifts: Vec<ShiftedPolynomial>,
    pub certificate: DiskCertificate,
}

impl TakagiSolution {
    pub fn function(&self) -> &RationalFunction {
        &self.interpolant.function
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.interpolant.eval(z)
    }
}

fn node_margin(q: &CPoly, problem: &DiskProblem, scale: f64) -> f64 {
    problem
        .nodes()
        .iter()
        .map(|&l| q.eval(l).norm())
        .fold(f64::INFINITY, f64::min)
        / scale
}

/// Picks real weights `t`, forms `q = Σ t_j p_j` and reduces `q̃ / q`.
///
/// The best of `combination_attempts` seeded draws from `[−1, 1]^N` is used;
/// it is accepted when `min_i |q(λ_i)| > 1e−8 · max_j ‖p_j‖ · ‖t‖`.
pub fn combine(shifts: &[ShiftedPolynomial], problem: &DiskProblem, opts: &SolverOptions) -> Result<TakagiSolution> {
    if shifts.is_empty() || shifts.len() != problem.len() {
        return Err(TakagiError::DimensionMismatch {
            expected: problem.len(),
            found: shifts.len(),
        });
    }
    let len = shifts[0].p.coeffs().len();
    if shifts.iter().any(|s| s.p.coeffs().len() != len) {
        return Err(TakagiError::InvalidInput("shifted polynomials differ in degree".into()));
    }
    let degree = len - 1;
    let pmax = shifts.iter().map(|s| s.p.norm()).fold(0.0_f64, f64::max);
    let mix = |t: &[f64]| {
        shifts
            .iter()
            .zip(t)
            .fold(CPoly::zero().padded(len), |acc, (s, &w)| &acc + &s.p.scale(C64::new(w, 0.0)))
    };

    let mut best: Option<(f64, Vec<f64>)> = None;
    if shifts.len() == 1 {
        best = Some((node_margin(&shifts[0].p, problem, pmax), vec![1.0]));
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.combination_attempts {
            let t: Vec<f64> = (0..shifts.len()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let tn = t.iter().map(|x| x * x).sum::<f64>().sqrt();
            let margin = node_margin(&mix(&t), problem, pmax * tn);
            if best.as_ref().is_none_or(|(m, _)| margin > *m) {
                best = Some((margin, t));
            }
        }
    }
    let (margin, weights) = best.unwrap_or((0.0, Vec::new()));
    if !(margin > 1e-8) {
        return Err(TakagiError::CombinationFailed {
            attempts: opts.combination_attempts,
            best_margin: margin,
        });
    }
    let q = mix(&weights);
    let unreduced = RationalFunction::new(q.reflect(degree)?, q);
    let reduced = unreduced.reduced(opts.gcd_tol)?;
    let certificate = certify_disk(problem, &reduced, opts.tolerances)?;
    let (zeros_in_disk, poles_in_disk) = count_zeros_poles(&reduced)?;
    let (f, g) = blaschke_factors(&reduced)?;
    Ok(TakagiSolution {
        interpolant: RationalInterpolant {
            function: reduced,
            status: certificate.status.clone(),
            zeros_in_disk,
            poles_in_disk,
        },
        unreduced,
        f,
        g,
        inertia: certificate.inertia,
        declared_degree: degree,
        weights,
        margin,
        shifts: shifts.to_vec(),
        certificate,
    })
}

/// Runs the whole pipeline and returns the solution with its certificate,
/// whether or not the certificate passes.
pub fn construct(problem: &DiskProblem, opts: &SolverOptions) -> Result<TakagiSolution> {
    let shifts = solve_all_shifts(problem, opts)?;
    combine(&shifts, problem, opts)
}

/// Like [`construct`], but a failing certificate is an error.
pub fn solve(problem: &DiskProblem, opts: &SolverOptions) -> Result<TakagiSolution> {
    let sol = construct(problem, opts)?;
    if !sol.certificate.passed() {
        let v = sol.certificate.verdicts;
        return Err(TakagiError::CertificateFailed(format!(
            "strict={} unimodular={} (defect {:.3e}) degree_lower={} degree_upper={} \
             (inertia {}, deg f {}, deg g {}, max residual {:.3e})",
            v.strict_interpolation,
            v.unimodular,
            sol.certificate.unimodular_defect,
            v.degree_lower,
            v.degree_upper,
            sol.inertia,
            sol.f.degree(),
            sol.g.degree(),
            sol.certificate.max_residual,
        )));
    }
    Ok(sol)
}

/// Pick matrix inertia with the solver's tolerance.
pub fn problem_inertia(problem: &DiskProblem, opts: &SolverOptions) -> Result<Inertia> {
    Ok(hermitian_inertia(&pick_matrix(problem), opts.inertia_tol)?.inertia)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pick::tests::example_problem;
    use crate::random::{point_in_disk, separated_points};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn centered_single_zero() {
        let p = DiskProblem::new(vec![c(0.0, 0.0)], vec![c(0.0, 0.0)]).unwrap();
        let s = solve_centered(&p, &opts()).unwrap();
        let phi = s.function().unwrap();
        assert!(phi.eval(c(0.0, 0.0)).norm() < 1e-12);
        for k in 0..16 {
            let z = C64::from_polar(1.0, k as f64);
            assert!((phi.eval(z).norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(s.p.degree(), Some(0));
    }

    #[test]
    fn centered_single_two() {
        let p = DiskProblem::new(vec![c(0.0, 0.0)], vec![c(2.0, 0.0)]).unwrap();
        let s = solve_centered(&p, &opts()).unwrap();
        let phi = s.function().unwrap().reduced(1e-6).unwrap();
        assert!((phi.eval(c(0.0, 0.0)) - c(2.0, 0.0)).norm() < 1e-12);
        // 1/φ is a degree-one Blaschke factor b with b(0) = 1/2 · (unimodular)
        assert_eq!(count_zeros_poles(&phi).unwrap(), (0, 1));
        let pole = phi.denominator.roots().unwrap()[0];
        assert!((pole.norm() - 0.5).abs() < 1e-12);
        for k in 0..16 {
            let z = C64::from_polar(1.0, 0.4 * k as f64);
            assert!((phi.eval(z).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_unimodular_data() {
        let w = C64::from_polar(1.0, 0.7);
        let p = DiskProblem::new(vec![c(0.0, 0.0), c(0.5, 0.0), c(0.0, -0.4)], vec![w; 3]).unwrap();
        let s = solve(&p, &opts()).unwrap();
        assert_eq!(s.inertia, Inertia::new(0, 0, 3));
        // the degree bounds allow up to ζ zeros and ζ poles
        assert!(s.f.degree() <= 3 && s.g.degree() <= 3);
        for &l in p.nodes() {
            assert!((s.eval(l) - w).norm() < 1e-9);
        }
    }

    #[test]
    fn shifts_vanish_at_both_nodes() {
        let p = DiskProblem::new(vec![c(0.0, 0.0), c(0.5, 0.0)], vec![c(0.0, 0.0); 2]).unwrap();
        let shifts = solve_all_shifts(&p, &opts()).unwrap();
        for s in &shifts {
            let d = s.p.coeffs().len() - 1;
            let pr = s.p.reflect(d).unwrap();
            for &l in p.nodes() {
                assert!(pr.eval(l).norm() < 1e-10 * s.p.norm());
            }
        }
    }

    #[test]
    fn example_shifts_are_nonzero_at_their_node() {
        let p = example_problem(4);
        let shifts = solve_all_shifts(&p, &opts()).unwrap();
        for s in &shifts {
            assert!(s.p.eval(p.nodes()[s.index]).norm() > 1e-6 * s.p.norm());
        }
    }

    #[test]
    fn example_four_is_strict_with_high_degree() {
        let p = example_problem(4);
        let s = solve(&p, &opts()).unwrap();
        assert_eq!(s.inertia, Inertia::new(1, 1, 2));
        assert!(s.f.degree() >= 3 && s.g.degree() >= 3, "{} {}", s.f.degree(), s.g.degree());
    }

    #[test]
    fn random_indefinite_problem() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let nodes = separated_points(5, 0.8, 0.1, &mut rng);
        let values: Vec<C64> = (0..5).map(|_| point_in_disk(1.0, &mut rng) * 2.5).collect();
        let p = DiskProblem::new(nodes, values).unwrap();
        let s = solve(&p, &opts()).unwrap();
        assert!(s.certificate.passed());
    }

    #[test]
    fn routes_agree() {
        let p = example_problem(5);
        let mut o = opts();
        let a = solve_centered(&p, &o).unwrap();
        o.route = PolynomialRoute::Leverrier;
        let b = solve_centered(&p, &o).unwrap();
        let (fa, fb) = (a.function().unwrap(), b.function().unwrap());
        for z in [c(0.1, 0.2), c(-0.3, 0.5)] {
            assert!((fa.eval(z) - fb.eval(z)).norm() < 1e-8);
        }
    }

    #[test]
    fn sequential_matches_parallel() {
        let p = example_problem(5);
        let mut o = opts();
        let a = solve(&p, &o).unwrap();
        o.parallel = false;
        let b = solve(&p, &o).unwrap();
        assert_eq!(a.weights, b.weights);
    }
}
