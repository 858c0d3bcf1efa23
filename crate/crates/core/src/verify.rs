//! Certificates for disk solutions. Every quantity here is recomputed from the
//! problem data and the final rational function; nothing is taken from solver
//! intermediates.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TakagiError};
use crate::linalg::{classify_eigenvalues, hermitian_inertia, BlaschkeProduct, CMatrix, CPoly, Inertia};
use crate::pick::{pick_matrix, pick_matrix_raw, validate_nodes, DiskProblem};
use crate::rational::{NodeStatus, RationalFunction};
use crate::C64;

/// Roots with modulus below `1 − DISK_MARGIN` count as inside the disk.
pub const DISK_MARGIN: f64 = 1e-9;
/// Boundary samples closer than this to a denominator root are skipped.
pub const POLE_EXCLUSION: f64 = 1e-6;
/// `|p(λ)| <= WEAK_NODE_TOL · ‖p‖` marks a vanishing denominator.
pub const WEAK_NODE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateTolerances {
    /// Relative interpolation tolerance, scaled by `1 + max|w_i|`.
    pub interpolation: f64,
    pub unimodular: f64,
    pub inertia: f64,
    pub boundary_samples: usize,
}

impl Default for CertificateTolerances {
    fn default() -> Self {
        Self {
            interpolation: 1e-7,
            unimodular: 1e-7,
            inertia: 1e-9,
            boundary_samples: 512,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterpolationReport {
    pub status: Vec<NodeStatus>,
    /// `|φ(λ_i) − w_i|` at strict nodes, `|q(λ_i) − w_i p(λ_i)| / ‖p‖` otherwise.
    pub residuals: Vec<f64>,
}

/// Classifies every node as strict, weak or failing for `φ = q / p`.
///
/// `tol` is relative: the absolute tolerance is `tol · (1 + max|w_i|)`.
pub fn check_interpolation(phi: &RationalFunction, problem: &DiskProblem, tol: f64) -> InterpolationReport {
    let abs_tol = tol * (1.0 + problem.max_value_modulus());
    let (q, p) = (&phi.numerator, &phi.denominator);
    let pn = p.norm().max(f64::MIN_POSITIVE);
    let mut status = Vec::with_capacity(problem.len());
    let mut residuals = Vec::with_capacity(problem.len());
    for (&l, &w) in problem.nodes().iter().zip(problem.values()) {
        let (qv, pv) = (q.eval(l), p.eval(l));
        if pv.norm() <= WEAK_NODE_TOL * pn {
            let r = (qv - w * pv).norm() / pn;
            residuals.push(r);
            status.push(if r <= abs_tol { NodeStatus::Weak } else { NodeStatus::Fail });
        } else {
            let r = (qv / pv - w).norm();
            residuals.push(r);
            status.push(if r <= abs_tol { NodeStatus::Strict } else { NodeStatus::Fail });
        }
    }
    InterpolationReport { status, residuals }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct UnimodularReport {
    pub max_defect: f64,
    pub samples: usize,
    pub excluded: usize,
}

/// `max ||φ(e^{iθ})| − 1|` over equally spaced samples, skipping those within
/// `POLE_EXCLUSION` of a denominator root.
pub fn check_unimodular(phi: &RationalFunction, samples: usize) -> Result<UnimodularReport> {
    let poles = if phi.denominator.degree().unwrap_or(0) > 0 {
        phi.denominator.roots()?
    } else {
        Vec::new()
    };
    let mut max_defect = 0.0_f64;
    let mut excluded = 0;
    for k in 0..samples {
        let z = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / samples as f64);
        if poles.iter().any(|r| (r - z).norm() < POLE_EXCLUSION) {
            excluded += 1;
            continue;
        }
        let v = phi.eval(z);
        let d = if v.is_finite() { (v.norm() - 1.0).abs() } else { f64::INFINITY };
        max_defect = max_defect.max(d);
    }
    Ok(UnimodularReport {
        max_defect,
        samples,
        excluded,
    })
}

fn roots_inside(p: &CPoly) -> Result<Vec<C64>> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    Ok(p.roots()?
        .into_iter()
        .filter(|r| r.norm() < 1.0 - DISK_MARGIN)
        .collect())
}

/// Numbers of zeros and poles of a reduced `φ = q / p` inside the disk.
pub fn count_zeros_poles(phi: &RationalFunction) -> Result<(usize, usize)> {
    if phi.numerator.is_zero() {
        return Err(TakagiError::ZeroPolynomial);
    }
    Ok((roots_inside(&phi.numerator)?.len(), roots_inside(&phi.denominator)?.len()))
}

/// Writes a reduced unimodular `φ` as `c · f / g` with Blaschke products `f`
/// (zeros of `φ` in the disk) and `g` (poles in the disk).
pub fn blaschke_factors(phi: &RationalFunction) -> Result<(BlaschkeProduct, BlaschkeProduct)> {
    let f_zeros = roots_inside(&phi.numerator)?;
    let g_zeros = roots_inside(&phi.denominator)?;
    let one = C64::new(1.0, 0.0);
    let mut f = BlaschkeProduct::new(f_zeros, one)?;
    let g = BlaschkeProduct::new(g_zeros, one)?;
    // pick the boundary point farthest from all zeros to fix the constant
    let probe = (0..16)
        .map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / 16.0))
        .max_by(|a, b| {
            let da = distance_to(&phi.denominator, *a);
            let db = distance_to(&phi.denominator, *b);
            da.total_cmp(&db)
        })
        .unwrap_or(one);
    let c = phi.eval(probe) * g.eval(probe) / f.eval(probe);
    f.constant = if c.norm() > 0.0 { c / c.norm() } else { one };
    Ok((f, g))
}

fn distance_to(p: &CPoly, z: C64) -> f64 {
    p.eval(z).norm() / p.norm().max(f64::MIN_POSITIVE)
}

/// Pick matrix of `φ = f/g` at `points`, returned as the congruent matrix
/// `Δ_ij = (g_i ḡ_j − f_i f̄_j) / (1 − λ_i λ̄_j)` which avoids division by `g`.
pub fn blaschke_pair_matrix(f: &BlaschkeProduct, g: &BlaschkeProduct, points: &[C64]) -> CMatrix {
    let fv: Vec<C64> = points.iter().map(|&z| f.eval(z)).collect();
    let gv: Vec<C64> = points.iter().map(|&z| g.eval(z)).collect();
    let n = points.len();
    let one = C64::new(1.0, 0.0);
    let m = CMatrix::from_fn(n, n, |i, j| {
        (gv[i] * gv[j].conj() - fv[i] * fv[j].conj()) / (one - points[i] * points[j].conj())
    });
    crate::linalg::symmetrize(&m)
}

/// Inertia of the Pick matrix of `f/g` at `points`, for relatively prime
/// Blaschke products and `deg f + deg g` distinct points avoiding the zeros
/// of `g`. The expected answer is `(deg f, deg g, 0)`.
pub fn lemma_inertia_oracle(f: &BlaschkeProduct, g: &BlaschkeProduct, points: &[C64]) -> Result<Inertia> {
    for a in &f.zeros {
        if let Some(b) = g.zeros.iter().find(|b| (*b - a).norm() < 1e-8) {
            return Err(TakagiError::SharedZeros { zero: format!("{b}") });
        }
    }
    if points.len() != f.degree() + g.degree() {
        return Err(TakagiError::InvalidInput(format!(
            "expected {} points, got {}",
            f.degree() + g.degree(),
            points.len()
        )));
    }
    validate_nodes(points)?;
    for (k, z) in points.iter().enumerate() {
        if g.zeros.iter().any(|b| (b - z).norm() < 1e-8) {
            return Err(TakagiError::InvalidInput(format!("point {k} is a zero of g")));
        }
    }
    if points.is_empty() {
        return Ok(Inertia::new(0, 0, 0));
    }
    let delta = blaschke_pair_matrix(f, g, points);
    let eig = hermitian_inertia(&delta, 0.0)?;
    Ok(classify_eigenvalues(&eig.eigenvalues, 1e-8 * delta.norm()))
}

/// Inertia of the Pick matrix of `φ` sampled at `points` (the kernel
/// `(1 − φ(λ) conj φ(μ)) / (1 − λ μ̄)`).
pub fn sampled_kernel_inertia(phi: &RationalFunction, points: &[C64], tol: f64) -> Result<Inertia> {
    validate_nodes(points)?;
    let values: Vec<C64> = points.iter().map(|&z| phi.eval(z)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(TakagiError::InvalidInput("sample point hits a pole".into()));
    }
    Ok(hermitian_inertia(&pick_matrix_raw(points, &values), tol)?.inertia)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AugmentedReport {
    pub inertia: Inertia,
    /// Level-set constant used, if any augmentation was needed.
    pub level: Option<C64>,
    pub added_points: Vec<C64>,
    /// Number of original nodes included in the augmented matrix.
    pub original_nodes: usize,
}

/// Level-set constants tried in order: moduli `0.7` and `1.3` over 8 phases.
pub fn default_level_constants() -> Vec<C64> {
    let mut out = Vec::with_capacity(16);
    for k in 0..8 {
        let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / 8.0;
        out.push(C64::from_polar(0.7, theta));
        out.push(C64::from_polar(1.3, theta));
    }
    out
}

/// Inertia of the Pick matrix of a reduced solution `φ` on the nodes
/// augmented by `deg f + deg g − N` points of the level set `{φ = c}` in the
/// disk, trying each constant of `levels` until enough usable points exist.
///
/// With fewer than `N` total degrees the first `deg f + deg g` original nodes
/// are used instead.
pub fn augmented_inertia(
    phi: &RationalFunction,
    problem: &DiskProblem,
    levels: &[C64],
    tol: f64,
) -> Result<AugmentedReport> {
    let (deg_f, deg_g) = count_zeros_poles(phi)?;
    let total = deg_f + deg_g;
    let n = problem.len();
    if total <= n {
        let nodes = &problem.nodes()[..total];
        let values = &problem.values()[..total];
        let inertia = if total == 0 {
            Inertia::new(0, 0, 0)
        } else {
            hermitian_inertia(&pick_matrix_raw(nodes, values), tol)?.inertia
        };
        return Ok(AugmentedReport {
            inertia,
            level: None,
            added_points: Vec::new(),
            original_nodes: total,
        });
    }
    let needed = total - n;
    for &c in levels {
        if (c.norm() - 1.0).abs() < 1e-3 {
            continue;
        }
        let level_poly = &phi.numerator - &phi.denominator.scale(c);
        if level_poly.is_zero() {
            continue;
        }
        let mut candidates: Vec<C64> = roots_inside(&level_poly)?
            .into_iter()
            .filter(|z| problem.nodes().iter().all(|l| (l - z).norm() > 1e-6))
            .filter(|z| phi.denominator.eval(*z).norm() > WEAK_NODE_TOL * phi.denominator.norm())
            .collect();
        candidates.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        let mut chosen: Vec<C64> = Vec::with_capacity(needed);
        for z in candidates {
            if chosen.iter().all(|w| (w - z).norm() > 1e-6) {
                chosen.push(z);
            }
            if chosen.len() == needed {
                break;
            }
        }
        if chosen.len() < needed {
            continue;
        }
        let mut nodes = problem.nodes().to_vec();
        let mut values = problem.values().to_vec();
        nodes.extend_from_slice(&chosen);
        values.extend(std::iter::repeat_n(c, needed));
        let inertia = hermitian_inertia(&pick_matrix_raw(&nodes, &values), tol)?.inertia;
        return Ok(AugmentedReport {
            inertia,
            level: Some(c),
            added_points: chosen,
            original_nodes: n,
        });
    }
    Err(TakagiError::LevelSetUnavailable(format!(
        "no level constant produced {needed} usable points; choose other c"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskVerdicts {
    pub strict_interpolation: bool,
    pub unimodular: bool,
    /// `deg f >= π` and `deg g >= ν`.
    pub degree_lower: bool,
    /// `deg f <= π + ζ` and `deg g <= ν + ζ`.
    pub degree_upper: bool,
}

impl DiskVerdicts {
    pub fn passed(&self) -> bool {
        self.strict_interpolation && self.unimodular && self.degree_lower && self.degree_upper
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiskCertificate {
    pub inertia: Inertia,
    pub status: Vec<NodeStatus>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub unimodular_defect: f64,
    pub zeros_in_disk: usize,
    pub poles_in_disk: usize,
    pub tolerances: CertificateTolerances,
    pub verdicts: DiskVerdicts,
}

impl DiskCertificate {
    pub fn passed(&self) -> bool {
        self.verdicts.passed()
    }
}

/// Full certificate for a reduced disk solution.
pub fn certify_disk(
    problem: &DiskProblem,
    phi: &RationalFunction,
    tolerances: CertificateTolerances,
) -> Result<DiskCertificate> {
    let inertia = hermitian_inertia(&pick_matrix(problem), tolerances.inertia)?.inertia;
    let interp = check_interpolation(phi, problem, tolerances.interpolation);
    let uni = check_unimodular(phi, tolerances.boundary_samples)?;
    let (zeros, poles) = count_zeros_poles(phi)?;
    let (p, n, z) = (inertia.positive, inertia.negative, inertia.zero);
    let verdicts = DiskVerdicts {
        strict_interpolation: interp.status.iter().all(|s| *s == NodeStatus::Strict),
        unimodular: uni.max_defect <= tolerances.unimodular,
        degree_lower: zeros >= p && poles >= n,
        degree_upper: zeros <= p + z && poles <= n + z,
    };
    Ok(DiskCertificate {
        inertia,
        max_residual: interp.residuals.iter().fold(0.0_f64, |a, &b| a.max(b)),
        status: interp.status,
        residuals: interp.residuals,
        unimodular_defect: uni.max_defect,
        zeros_in_disk: zeros,
        poles_in_disk: poles,
        tolerances,
        verdicts,
    })
}
