//! Unimodular rational interpolation on the bidisk from a given two-term
//! decomposition of the data.
//!
//! [`solve_bidisk`] mirrors the disk pipeline. Every node is moved to the
//! origin by a Möbius shift of both coordinates, the pair is transported
//! along, and the realization of the shifted data gives a denominator
//! `q_j` that does not vanish at `λ_j`. A real combination of the `q_j`
//! then interpolates strictly, and `q̃ / q` is unimodular on the torus
//! wherever `q ≠ 0`.

pub mod bipoly;
pub mod pair;
pub mod realization;
pub mod torus;

pub use bipoly::{BalancedDisk, BiPoly, BiRational};
pub use pair::{regularize_pair, validate_pair, AglerPair, PairCase, PairReport, DECOMPOSITION_TOL};
pub use realization::{
    build_bidisk_realization, eval_bidisk, gamma_forms, to_birational, BidiskRealization,
};
pub use torus::{toral_check, torus_unimodularity, ToralReport, TorusUnimodularReport, DEFAULT_TORUS_GRID};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disk::SolverOptions;
use crate::error::{Result, TakagiError};
use crate::linalg::{CMatrix, CPoly, Inertia, MoebiusMap};
use crate::pick::validate_nodes;
use crate::random::{point_in_disk, unimodular};
use crate::rational::NodeStatus;
use crate::verify::{count_zeros_poles, WEAK_NODE_TOL};
use crate::C64;

/// Number of random balanced disks in the certificate.
pub const BALANCED_MAPS: usize = 25;

/// Nodes `λ_i = (λ¹_i, λ²_i)` in the open bidisk with target values `w_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBidiskProblem")]
pub struct BidiskProblem {
    nodes: Vec<[C64; 2]>,
    values: Vec<C64>,
}

#[derive(Deserialize)]
struct RawBidiskProblem {
    nodes: Vec<[C64; 2]>,
    values: Vec<C64>,
}

impl TryFrom<RawBidiskProblem> for BidiskProblem {
    type Error = TakagiError;

    fn try_from(raw: RawBidiskProblem) -> Result<Self> {
        Self::new(raw.nodes, raw.values)
    }
}

impl BidiskProblem {
    pub fn new(nodes: Vec<[C64; 2]>, values: Vec<C64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(TakagiError::InvalidInput("at least one node is required".into()));
        }
        if nodes.len() != values.len() {
            return Err(TakagiError::DimensionMismatch {
                expected: nodes.len(),
                found: values.len(),
            });
        }
        for (k, z) in nodes.iter().enumerate() {
            for c in z {
                if !(c.norm() < 1.0) {
                    return Err(TakagiError::NodeOutsideDisk {
                        index: k,
                        modulus: c.norm(),
                    });
                }
            }
        }
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                let distance = (nodes[i][0] - nodes[j][0]).norm().max((nodes[i][1] - nodes[j][1]).norm());
                if distance <= crate::pick::MIN_NODE_SEPARATION {
                    return Err(TakagiError::CoincidentNodes {
                        first: i,
                        second: j,
                        distance,
                    });
                }
            }
        }
        if let Some(k) = values.iter().position(|w| !w.is_finite()) {
            return Err(TakagiError::InvalidInput(format!("value {k} is not finite")));
        }
        Ok(Self { nodes, values })
    }

    /// Pairs one-variable data with arbitrary second coordinates.
    pub fn embed(first: &[C64], second: &[C64], values: &[C64]) -> Result<Self> {
        validate_nodes(first)?;
        if first.len() != second.len() {
            return Err(TakagiError::DimensionMismatch {
                expected: first.len(),
                found: second.len(),
            });
        }
        Self::new(first.iter().zip(second).map(|(&a, &b)| [a, b]).collect(), values.to_vec())
    }

    pub fn nodes(&self) -> &[[C64; 2]] {
        &self.nodes
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_value_modulus(&self) -> f64 {
        self.values.iter().map(|w| w.norm()).fold(0.0, f64::max)
    }
}

impl AglerPair {
    /// Reorders nodes: entry `(i, j)` of the result is entry
    /// `(order[i], order[j])` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let perm = |m: &CMatrix| CMatrix::from_fn(order.len(), order.len(), |i, j| m[(order[i], order[j])]);
        Self {
            gamma: [perm(&self.gamma[0]), perm(&self.gamma[1])],
            regularizers: [
                self.regularizers[0].as_ref().map(perm),
                self.regularizers[1].as_ref().map(perm),
            ],
        }
    }
}

/// Denominator of the `j`-th shifted solve, pulled back to the original coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShiftedBiPoly {
    pub index: usize,
    /// Coefficients padded to the common bidegree of the family.
    pub q: BiPoly,
    /// State dimensions `(κ¹, κ²)` of the shifted realization.
    pub kappa: [usize; 2],
    /// Regularizer ranks used by the shifted realization.
    pub deltas: [usize; 2],
    /// Powers of `(1 + λ¹)` and `(1 + λ²)` appended to reach the common bidegree.
    pub padding: [usize; 2],
}

struct RawShift {
    q: BiPoly,
    kappa: [usize; 2],
    deltas: [usize; 2],
}

/// Moves node `j` to the origin with `m_r = swap(λ^r_j)` in both coordinates.
///
/// Since `1 − λ μ̄ = (1 − |a|²)(1 − m(λ) m(μ)‾) / ((1 − ā m(λ))(1 − a m(μ)‾))`
/// for the involution `m = swap(a)`, the identity survives with
/// `Γ^r ↦ S^r Γ^r S^r*`, `S^r_i = (1 − ā_r λ^r_i) / √(1 − |a_r|²)`.
fn solve_shift(problem: &BidiskProblem, pair: &AglerPair, j: usize, opts: &SolverOptions) -> Result<RawShift> {
    let a = problem.nodes()[j];
    let maps = [MoebiusMap::swap(a[0])?, MoebiusMap::swap(a[1])?];
    let n = problem.len();
    let order: Vec<usize> = std::iter::once(j).chain((0..n).filter(|&i| i != j)).collect();
    let nodes: Vec<[C64; 2]> = order
        .iter()
        .map(|&i| {
            if i == j {
                [C64::new(0.0, 0.0); 2]
            } else {
                let l = problem.nodes()[i];
                [maps[0].eval(l[0]), maps[1].eval(l[1])]
            }
        })
        .collect();
    let values = order.iter().map(|&i| problem.values()[i]).collect();
    let shifted = BidiskProblem::new(nodes, values)?;
    let scales: Vec<Vec<C64>> = (0..2)
        .map(|r| {
            let norm = (1.0 - a[r].norm_sqr()).sqrt();
            order
                .iter()
                .map(|&i| (C64::new(1.0, 0.0) - a[r].conj() * problem.nodes()[i][r]) / norm)
                .collect()
        })
        .collect();
    let mut moved = pair.permuted(&order).congruence([&scales[0], &scales[1]]);
    let report = validate_pair(&shifted, &moved, DECOMPOSITION_TOL, opts.inertia_tol)?;
    if !report.conditions_hold() {
        let bare = AglerPair {
            gamma: moved.gamma.clone(),
            regularizers: [None, None],
        };
        moved = regularize_pair(&shifted, &bare, opts.seed ^ j as u64, opts.inertia_tol)?;
    }
    let br = build_bidisk_realization(&shifted, &moved, opts)?;
    let [k1, k2] = br.kappa;
    let q = realization::normalized_denominator(&to_birational(&br), k1, k2)?;
    let pulled = q.compose([&maps[0], &maps[1]], k1, k2)?;
    let pulled_reflection = q.reflect(k1, k2)?.compose([&maps[0], &maps[1]], k1, k2)?;
    let c = realization::bi_reflection_constant(&pulled_reflection, &pulled, k1, k2)?;
    Ok(RawShift {
        q: pulled.scale(C64::from_polar(1.0, -0.5 * c.arg())),
        kappa: br.kappa,
        deltas: moved.deltas()?,
    })
}

fn one_plus(k: usize, variable: usize) -> BiPoly {
    let p = CPoly::from_real(&[1.0, 1.0]).pow(k);
    let c = p.coeffs();
    let shape = if variable == 0 { (k + 1, 1) } else { (1, k + 1) };
    BiPoly::new(CMatrix::from_fn(shape.0, shape.1, |a, b| c[a + b]))
}

/// Runs the shifted solve for every node and pads the denominators by
/// powers of `(1 + λ¹)` and `(1 + λ²)` to a common bidegree.
pub fn solve_all_bidisk_shifts(problem: &BidiskProblem, pair: &AglerPair, opts: &SolverOptions) -> Result<Vec<ShiftedBiPoly>> {
    let run = |j: usize| {
        solve_shift(problem, pair, j, opts).map_err(|e| TakagiError::ShiftFailed {
            index: j,
            source: Box::new(e),
        })
    };
    let raw: Vec<RawShift> = if opts.parallel {
        (0..problem.len()).into_par_iter().map(run).collect::<Result<_>>()?
    } else {
        (0..problem.len()).map(run).collect::<Result<_>>()?
    };
    let common = [0, 1].map(|r| raw.iter().map(|s| s.kappa[r]).max().unwrap_or(0));
    Ok(raw
        .into_iter()
        .enumerate()
        .map(|(index, s)| {
            let padding = [common[0] - s.kappa[0], common[1] - s.kappa[1]];
            let q = s
                .q
                .mul(&one_plus(padding[0], 0))
                .mul(&one_plus(padding[1], 1))
                .padded(common[0], common[1]);
            ShiftedBiPoly {
                index,
                q,
                kappa: s.kappa,
                deltas: s.deltas,
                padding,
            }
        })
        .collect())
}

/// Zero and pole counts of balanced-disk restrictions against `π + δ` and `ν + δ`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BalancedAudit {
    pub maps: usize,
    pub max_zeros: usize,
    pub max_poles: usize,
    pub zero_bound: usize,
    pub pole_bound: usize,
    /// Restrictions whose counts exceed a bound, as `(map index, zeros, poles)`.
    pub violations: Vec<(usize, usize, usize)>,
}

impl BalancedAudit {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Random balanced disks `{(z, ω m_a(z))}` with `|a| ≤ 0.9`.
pub fn random_balanced_disks(count: usize, seed: u64) -> Result<Vec<BalancedDisk>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = point_in_disk(0.9, &mut rng);
            BalancedDisk::new(MoebiusMap::swap(a)?, unimodular(&mut rng))
        })
        .collect()
}

/// Restricts `φ` to each disk and counts zeros and poles in `𝔻`.
pub fn balanced_audit(
    phi: &BiRational,
    disks: &[BalancedDisk],
    zero_bound: usize,
    pole_bound: usize,
    gcd_tol: f64,
) -> Result<BalancedAudit> {
    let mut audit = BalancedAudit {
        maps: disks.len(),
        max_zeros: 0,
        max_poles: 0,
        zero_bound,
        pole_bound,
        violations: Vec::new(),
    };
    for (k, disk) in disks.iter().enumerate() {
        let psi = phi.restrict_balanced(disk, gcd_tol)?;
        let (z, p) = count_zeros_poles(&psi)?;
        audit.max_zeros = audit.max_zeros.max(z);
        audit.max_poles = audit.max_poles.max(p);
        if z > zero_bound || p > pole_bound {
            audit.violations.push((k, z, p));
        }
    }
    Ok(audit)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidiskVerdicts {
    pub strict_interpolation: bool,
    pub torus_unimodular: bool,
    /// Reduced bidegree within `(π¹ + ν¹ + δ¹, π² + ν² + δ²)`.
    pub bidegree_tight: bool,
    /// Reduced bidegree within `(π¹ + ν¹ + 2δ¹, π² + ν² + 2δ²)`.
    pub bidegree_construction: bool,
    /// Coefficient support within the declared bidegree of the construction.
    pub bidegree_declared: bool,
    pub balanced_counts: bool,
    pub toral: bool,
}

impl BidiskVerdicts {
    pub fn passed(&self) -> bool {
        self.strict_interpolation
            && self.torus_unimodular
            && self.bidegree_tight
            && self.bidegree_construction
            && self.bidegree_declared
            && self.balanced_counts
            && self.toral
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BidiskCertificate {
    pub status: Vec<NodeStatus>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub inertia: [Inertia; 2],
    pub deltas: [usize; 2],
    pub torus: TorusUnimodularReport,
    pub toral: ToralReport,
    pub declared_bidegree: (usize, usize),
    pub support_bidegree: (usize, usize),
    pub reduced_bidegree: (usize, usize),
    /// `(π¹ + ν¹ + δ¹, π² + ν² + δ²)`.
    pub tight_bound: (usize, usize),
    /// `(π¹ + ν¹ + 2δ¹, π² + ν² + 2δ²)`, the state dimensions of the realization.
    pub construction_bound: (usize, usize),
    /// Balanced-disk counts of the realized (weakly interpolating) function.
    pub balanced: BalancedAudit,
    /// The same counts for the strict interpolant, for information.
    pub strict_balanced: BalancedAudit,
    pub verdicts: BidiskVerdicts,
}

impl BidiskCertificate {
    pub fn passed(&self) -> bool {
        self.verdicts.passed()
    }
}

/// Per-node classification of `φ = p / q`, as on the disk: a node where
/// `q` is below `WEAK_NODE_TOL · ‖q‖₁` is weak if `p − w q` is small there.
pub fn check_bidisk_interpolation(phi: &BiRational, problem: &BidiskProblem, tol: f64) -> (Vec<NodeStatus>, Vec<f64>) {
    let abs_tol = tol * (1.0 + problem.max_value_modulus());
    let qn = phi.denominator.norm1().max(f64::MIN_POSITIVE);
    problem
        .nodes()
        .iter()
        .zip(problem.values())
        .map(|(&l, &w)| {
            let (pv, qv) = (phi.numerator.eval(l), phi.denominator.eval(l));
            if qv.norm() <= WEAK_NODE_TOL * qn {
                let r = (pv - w * qv).norm() / qn;
                (if r <= abs_tol { NodeStatus::Weak } else { NodeStatus::Fail }, r)
            } else {
                let r = (pv / qv - w).norm();
                (if r <= abs_tol { NodeStatus::Strict } else { NodeStatus::Fail }, r)
            }
        })
        .unzip()
}

/// Generic slice constants for the reduced bidegree.
fn bidegree_probes() -> Vec<C64> {
    vec![C64::new(0.31, 0.17), C64::new(-0.43, 0.29), C64::new(0.07, -0.61)]
}

/// Certificate inputs that come from the pair rather than the function.
#[derive(Debug, Clone, Copy)]
pub struct PairBounds {
    pub inertia: [Inertia; 2],
    pub deltas: [usize; 2],
}

impl PairBounds {
    pub fn from_report(report: &PairReport) -> Self {
        Self {
            inertia: report.inertia,
            deltas: report.deltas,
        }
    }

    pub fn tight_bound(&self) -> (usize, usize) {
        let b = |r: usize| self.inertia[r].positive + self.inertia[r].negative + self.deltas[r];
        (b(0), b(1))
    }

    pub fn construction_bound(&self) -> (usize, usize) {
        let (a, b) = self.tight_bound();
        (a + self.deltas[0], b + self.deltas[1])
    }

    /// `(π¹ + π² + δ¹ + δ², ν¹ + ν² + δ¹ + δ²)`.
    pub fn balanced_bounds(&self) -> (usize, usize) {
        let d = self.deltas[0] + self.deltas[1];
        (
            self.inertia[0].positive + self.inertia[1].positive + d,
            self.inertia[0].negative + self.inertia[1].negative + d,
        )
    }
}

/// Evaluates every claim about `φ = p / q` on the problem.
///
/// `realized` is the function of the unshifted realization. The zero and
/// pole bounds on balanced disks are claimed for it and audited there; the
/// counts of `φ` itself are reported without a verdict.
pub fn certify_bidisk(
    problem: &BidiskProblem,
    phi: &BiRational,
    realized: &BiRational,
    bounds: PairBounds,
    opts: &SolverOptions,
) -> Result<BidiskCertificate> {
    let tol = opts.tolerances;
    let (status, residuals) = check_bidisk_interpolation(phi, problem, tol.interpolation);
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let torus = torus_unimodularity(phi, DEFAULT_TORUS_GRID, tol.unimodular);
    let toral = toral_check(phi, DEFAULT_TORUS_GRID);
    let declared = phi.numerator.declared_bidegree();
    let declared = {
        let q = phi.denominator.declared_bidegree();
        (declared.0.max(q.0), declared.1.max(q.1))
    };
    let support = phi.support_bidegree();
    let reduced = phi.reduced_bidegree(&bidegree_probes(), opts.gcd_tol)?;
    let tight_bound = bounds.tight_bound();
    let construction_bound = bounds.construction_bound();
    let (zb, pb) = bounds.balanced_bounds();
    let disks = random_balanced_disks(BALANCED_MAPS, opts.seed)?;
    let balanced = balanced_audit(realized, &disks, zb, pb, opts.gcd_tol)?;
    let strict_balanced = balanced_audit(phi, &disks, zb, pb, opts.gcd_tol)?;
    let verdicts = BidiskVerdicts {
        strict_interpolation: status.iter().all(|s| *s == NodeStatus::Strict),
        torus_unimodular: torus.max_defect <= tol.unimodular,
        bidegree_tight: reduced.0 <= tight_bound.0 && reduced.1 <= tight_bound.1,
        bidegree_construction: reduced.0 <= construction_bound.0 && reduced.1 <= construction_bound.1,
        bidegree_declared: support.0 <= declared.0 && support.1 <= declared.1,
        balanced_counts: balanced.passed(),
        toral: toral.violations.is_empty() && toral.singular_candidates <= declared.0 * declared.1,
    };
    Ok(BidiskCertificate {
        status,
        residuals,
        max_residual,
        inertia: bounds.inertia,
        deltas: bounds.deltas,
        torus,
        toral,
        declared_bidegree: declared,
        support_bidegree: support,
        reduced_bidegree: reduced,
        tight_bound,
        construction_bound,
        balanced,
        strict_balanced,
        verdicts,
    })
}

#[derive(Debug, Clone)]
pub struct BidiskSolution {
    /// `q̃ / q`.
    pub function: BiRational,
    /// The pair after regularization.
    pub pair: AglerPair,
    pub pair_report: PairReport,
    /// Realization of the unshifted data, which interpolates at least weakly.
    pub base: BidiskRealization,
    pub weights: Vec<f64>,
    /// `min_i |q(λ_i)| / (max_j ‖q_j‖₁ · ‖t‖)` for the chosen weights.
    pub margin: f64,
    pub shifts: Vec<ShiftedBiPoly>,
    pub certificate: BidiskCertificate,
}

impl BidiskSolution {
    pub fn eval(&self, z: [C64; 2]) -> C64 {
        self.function.eval(z)
    }
}

fn node_margin(q: &BiPoly, problem: &BidiskProblem, scale: f64) -> f64 {
    problem.nodes().iter().map(|&l| q.eval(l).norm()).fold(f64::INFINITY, f64::min) / scale
}

/// Real weights `t` for `q = Σ t_j q_j`, chosen as on the disk.
pub fn combine_bidisk(shifts: &[ShiftedBiPoly], problem: &BidiskProblem, opts: &SolverOptions) -> Result<(BiRational, Vec<f64>, f64)> {
    if shifts.is_empty() || shifts.len() != problem.len() {
        return Err(TakagiError::DimensionMismatch {
            expected: problem.len(),
            found: shifts.len(),
        });
    }
    let (d1, d2) = shifts[0].q.declared_bidegree();
    if shifts.iter().any(|s| s.q.declared_bidegree() != (d1, d2)) {
        return Err(TakagiError::InvalidInput("shifted denominators differ in bidegree".into()));
    }
    let qmax = shifts.iter().map(|s| s.q.norm1()).fold(0.0_f64, f64::max);
    let mix = |t: &[f64]| {
        shifts
            .iter()
            .zip(t)
            .fold(BiPoly::zero().padded(d1, d2), |acc, (s, &w)| acc.add(&s.q.scale(C64::new(w, 0.0))))
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    if shifts.len() == 1 {
        best = Some((node_margin(&shifts[0].q, problem, qmax), vec![1.0]));
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.combination_attempts {
            let t: Vec<f64> = (0..shifts.len()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let tn = t.iter().map(|x| x * x).sum::<f64>().sqrt();
            let margin = node_margin(&mix(&t), problem, qmax * tn);
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
    Ok((BiRational::new(q.reflect(d1, d2)?, q), weights, margin))
}

/// Regularizes the pair when needed, runs the shifted solves, combines
/// them, and attaches the certificate whether or not it passes.
pub fn construct_bidisk(problem: &BidiskProblem, pair: &AglerPair, opts: &SolverOptions) -> Result<BidiskSolution> {
    let pair = regularize_pair(problem, pair, opts.seed, opts.inertia_tol)?;
    let pair_report = validate_pair(problem, &pair, DECOMPOSITION_TOL, opts.inertia_tol)?;
    let base = build_bidisk_realization(problem, &pair, opts)?;
    let shifts = solve_all_bidisk_shifts(problem, &pair, opts)?;
    let (function, weights, margin) = combine_bidisk(&shifts, problem, opts)?;
    let realized = to_birational(&base);
    let certificate = certify_bidisk(problem, &function, &realized, PairBounds::from_report(&pair_report), opts)?;
    Ok(BidiskSolution {
        function,
        pair,
        pair_report,
        base,
        weights,
        margin,
        shifts,
        certificate,
    })
}

/// Like [`construct_bidisk`], but a failing certificate is an error.
pub fn solve_bidisk(problem: &BidiskProblem, pair: &AglerPair, opts: &SolverOptions) -> Result<BidiskSolution> {
    let sol = construct_bidisk(problem, pair, opts)?;
    let cert = &sol.certificate;
    if !cert.passed() {
        let v = cert.verdicts;
        return Err(TakagiError::CertificateFailed(format!(
            "strict={} torus_unimodular={} (defect {:.3e}) bidegree={} (reduced {:?}, bound {:?}) \
             declared={} balanced={} toral={}",
            v.strict_interpolation,
            v.torus_unimodular,
            cert.torus.max_defect,
            v.bidegree_tight,
            cert.reduced_bidegree,
            cert.tight_bound,
            v.bidegree_declared,
            v.balanced_counts,
            v.toral,
        )));
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pick::zero_one_problem;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn problem_validation() {
        assert!(BidiskProblem::new(vec![[c(0.0, 0.0), c(1.0, 0.0)]], vec![c(0.0, 0.0)]).is_err());
        assert!(BidiskProblem::new(vec![[c(0.1, 0.0), c(0.2, 0.0)]; 2], vec![c(0.0, 0.0); 2]).is_err());
        let ok = BidiskProblem::new(vec![[c(0.1, 0.0), c(0.2, 0.0)], [c(0.1, 0.0), c(0.3, 0.0)]], vec![c(0.0, 0.0); 2]);
        assert_eq!(ok.unwrap().len(), 2);
    }

    #[test]
    fn single_node_with_one_pole() {
        let b = BidiskProblem::new(vec![[c(0.0, 0.0); 2]], vec![c(2.0, 0.0)]).unwrap();
        let pair = AglerPair::new(CMatrix::from_element(1, 1, c(-3.0, 0.0)), CMatrix::zeros(1, 1)).unwrap();
        let sol = solve_bidisk(&b, &pair, &opts()).unwrap();
        assert!((sol.eval([c(0.0, 0.0); 2]) - c(2.0, 0.0)).norm() < 1e-9);
        assert_eq!(sol.certificate.reduced_bidegree, (1, 0));
        for audit in [&sol.certificate.balanced, &sol.certificate.strict_balanced] {
            assert_eq!(audit.max_poles, 1);
            assert_eq!(audit.max_zeros, 0);
        }
    }

    #[test]
    fn one_variable_embedding_ignores_second_coordinate() {
        let p = zero_one_problem(3).unwrap();
        let second = [c(0.2, 0.1), c(-0.3, 0.0), c(0.0, 0.5)];
        let b = BidiskProblem::embed(p.nodes(), &second, p.values()).unwrap();
        let sol = construct_bidisk(&b, &AglerPair::one_variable(&b), &opts()).unwrap();
        let cert = &sol.certificate;
        assert!(cert.verdicts.strict_interpolation && cert.verdicts.torus_unimodular);
        assert_eq!(cert.reduced_bidegree.1, 0);
        // degenerate data: the reduced degree reaches π + ν + 2δ, above π + ν + δ
        assert!(cert.deltas[0] >= 1);
        assert!(cert.verdicts.bidegree_construction);
        assert!(!cert.verdicts.bidegree_tight);
        for z in [c(0.1, 0.2), c(-0.4, 0.3)] {
            let a = sol.eval([z, c(0.0, 0.0)]);
            let b = sol.eval([z, c(0.6, -0.3)]);
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn mixed_two_node_pair() {
        // Γ¹ = I and Γ² chosen so the identity holds
        let nodes = [[c(0.0, 0.0), c(0.3, 0.0)], [c(0.5, 0.0), c(0.0, -0.4)]];
        let w = [c(0.2, 0.0), c(-0.5, 0.3)];
        let one = c(1.0, 0.0);
        let g1 = CMatrix::identity(2, 2);
        let g2 = CMatrix::from_fn(2, 2, |i, j| {
            let lhs = one - w[i] * w[j].conj() - (one - nodes[i][0] * nodes[j][0].conj()) * g1[(i, j)];
            lhs / (one - nodes[i][1] * nodes[j][1].conj())
        });
        let b = BidiskProblem::new(nodes.to_vec(), w.to_vec()).unwrap();
        let pair = AglerPair::new(g1, g2).unwrap();
        let sol = construct_bidisk(&b, &pair, &opts()).unwrap();
        assert!(sol.certificate.verdicts.strict_interpolation);
        assert!(sol.certificate.verdicts.torus_unimodular);
        assert!(sol.certificate.verdicts.toral);
    }

    #[test]
    fn pair_permutation_round_trip() {
        let g = CMatrix::from_fn(3, 3, |i, j| c((i * 3 + j) as f64, 0.0));
        let pair = AglerPair {
            gamma: [g.clone() + g.adjoint(), CMatrix::zeros(3, 3)],
            regularizers: [None, None],
        };
        let back = pair.permuted(&[2, 0, 1]).permuted(&[1, 2, 0]);
        assert_eq!(back, pair);
    }

    #[test]
    fn padding_factor_shapes() {
        assert_eq!(one_plus(2, 0).declared_bidegree(), (2, 0));
        assert_eq!(one_plus(3, 1).coeff(0, 2), c(3.0, 0.0));
    }
}
