//! Two-term decompositions `1 − w_i w̄_j = Σ_r (1 − λ^r_i λ̄^r_j) Γ^r_ij`,
//! their rank conditions, and regularization by positive terms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::BidiskProblem;
use crate::error::{Result, TakagiError};
use crate::linalg::{ensure_hermitian, hermitian_inertia, numerical_rank, symmetrize, CMatrix, Inertia};
use crate::pick::{gram_decompose, pick_matrix_raw, row_gram, GramDecomposition};
use crate::random::random_matrix;
use crate::C64;

/// Default relative tolerance on the decomposition residual.
pub const DECOMPOSITION_TOL: f64 = 1e-9;
/// Singular values below this fraction of the largest count as zero in the
/// rank conditions.
pub const RANK_TOL: f64 = 1e-10;

/// Hermitian matrices `Γ¹, Γ²` and optional positive regularizers `Y¹, Y²`.
#[derive(Debug, Clone, PartialEq)]
pub struct AglerPair {
    pub gamma: [CMatrix; 2],
    pub regularizers: [Option<CMatrix>; 2],
}

impl AglerPair {
    pub fn new(gamma1: CMatrix, gamma2: CMatrix) -> Result<Self> {
        for g in [&gamma1, &gamma2] {
            if g.nrows() != gamma1.nrows() || !g.is_square() {
                return Err(TakagiError::DimensionMismatch {
                    expected: gamma1.nrows(),
                    found: g.nrows(),
                });
            }
            ensure_hermitian(g)?;
        }
        Ok(Self {
            gamma: [symmetrize(&gamma1), symmetrize(&gamma2)],
            regularizers: [None, None],
        })
    }

    /// `Γ¹` is the one-variable Pick matrix in the first coordinate and `Γ² = 0`.
    pub fn one_variable(problem: &BidiskProblem) -> Self {
        let first: Vec<C64> = problem.nodes().iter().map(|z| z[0]).collect();
        let g1 = pick_matrix_raw(&first, problem.values());
        let n = problem.len();
        Self {
            gamma: [g1, CMatrix::zeros(n, n)],
            regularizers: [None, None],
        }
    }

    pub fn len(&self) -> usize {
        self.gamma[0].nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Attaches `Y^r`, which must be positive semi-definite.
    pub fn with_regularizers(mut self, y1: Option<CMatrix>, y2: Option<CMatrix>) -> Result<Self> {
        for y in [&y1, &y2].into_iter().flatten() {
            if y.nrows() != self.len() || !y.is_square() {
                return Err(TakagiError::DimensionMismatch {
                    expected: self.len(),
                    found: y.nrows(),
                });
            }
            psd_factor(y)?;
        }
        self.regularizers = [y1.map(|y| symmetrize(&y)), y2.map(|y| symmetrize(&y))];
        Ok(self)
    }

    /// Row factor `y^r` with `Y^r = y^r (y^r)*` (zero columns when absent).
    pub fn regularizer_factor(&self, r: usize) -> Result<CMatrix> {
        match &self.regularizers[r] {
            Some(y) => psd_factor(y),
            None => Ok(CMatrix::zeros(self.len(), 0)),
        }
    }

    /// Ranks `δ¹, δ²` of the regularizers.
    pub fn deltas(&self) -> Result<[usize; 2]> {
        Ok([self.regularizer_factor(0)?.ncols(), self.regularizer_factor(1)?.ncols()])
    }

    /// Transports the pair along a diagonal congruence `Γ^r ↦ S^r Γ^r S^r*`.
    pub fn congruence(&self, scales: [&[C64]; 2]) -> Self {
        let apply = |m: &CMatrix, s: &[C64]| CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| s[i] * m[(i, j)] * s[j].conj());
        Self {
            gamma: [apply(&self.gamma[0], scales[0]), apply(&self.gamma[1], scales[1])],
            regularizers: [
                self.regularizers[0].as_ref().map(|y| apply(y, scales[0])),
                self.regularizers[1].as_ref().map(|y| apply(y, scales[1])),
            ],
        }
    }
}

/// Factor `F` with `Y = F F*` for a positive semi-definite `Y`.
pub fn psd_factor(y: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_inertia(y, 1e-10)?;
    if eig.inertia.negative > 0 {
        return Err(TakagiError::InvalidInput(
            "regularizer has a negative eigenvalue".into(),
        ));
    }
    let (pos, _, _) = eig.partition();
    let n = y.nrows();
    let mut f = CMatrix::zeros(n, pos.len());
    for (dst, &k) in pos.iter().enumerate() {
        let s = eig.eigenvalues[k].sqrt();
        for i in 0..n {
            f[(i, dst)] = eig.eigenvectors[(i, k)] * s;
        }
    }
    Ok(f)
}

/// Which rank conditions hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairCase {
    /// Both conditions hold without regularizers.
    Unregularized,
    /// Both conditions hold once the attached regularizers are included.
    Regularized,
    /// A condition fails; regularization is needed.
    NeedsRegularization,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairReport {
    /// Frobenius norm of `(1 − w w*) − Σ_r (𝒥 − Λ^r) ∘ Γ^r`.
    pub residual: f64,
    pub inertia: [Inertia; 2],
    pub deltas: [usize; 2],
    /// `rank(W + Δ¹ + Y¹ + Δ² + Y²)`.
    pub range_rank: usize,
    /// `rank(𝒥 + Λ¹ ∘ (Δ¹ + Y¹) + Λ² ∘ (Δ² + Y²))`.
    pub domain_rank: usize,
    pub case: PairCase,
}

impl PairReport {
    pub fn conditions_hold(&self) -> bool {
        self.case != PairCase::NeedsRegularization
    }
}

/// `Σ_r (1 − λ^r_i λ̄^r_j) Γ^r_ij − (1 − w_i w̄_j)` in Frobenius norm.
pub fn decomposition_residual(problem: &BidiskProblem, pair: &AglerPair) -> f64 {
    let n = problem.len();
    let (nodes, w) = (problem.nodes(), problem.values());
    let one = C64::new(1.0, 0.0);
    let m = CMatrix::from_fn(n, n, |i, j| {
        let mut s = -(one - w[i] * w[j].conj());
        for r in 0..2 {
            s += (one - nodes[i][r] * nodes[j][r].conj()) * pair.gamma[r][(i, j)];
        }
        s
    });
    m.norm()
}

pub(crate) fn split_term(gamma: &CMatrix, tol: f64) -> Result<GramDecomposition> {
    gram_decompose(gamma, tol)
}

/// Checks the decomposition identity and computes both rank conditions.
pub fn validate_pair(problem: &BidiskProblem, pair: &AglerPair, tol: f64, inertia_tol: f64) -> Result<PairReport> {
    let n = problem.len();
    if pair.len() != n {
        return Err(TakagiError::DimensionMismatch {
            expected: n,
            found: pair.len(),
        });
    }
    let residual = decomposition_residual(problem, pair);
    let scale = 1.0 + pair.gamma[0].norm() + pair.gamma[1].norm();
    if residual > tol * scale {
        return Err(TakagiError::DecompositionResidual {
            residual,
            tol: tol * scale,
        });
    }
    let mut inertia = [Inertia::new(0, 0, n); 2];
    let mut positive_parts = Vec::with_capacity(2);
    for r in 0..2 {
        let split = split_term(&pair.gamma[r], inertia_tol)?;
        inertia[r] = split.inertia;
        let y = pair.regularizer_factor(r)?;
        positive_parts.push(row_gram(&split.u) + row_gram(&split.v) + row_gram(&y));
    }
    let deltas = pair.deltas()?;
    let (range_rank, domain_rank) = rank_conditions(problem, &positive_parts);
    let holds = range_rank == n && domain_rank == n;
    let case = match (holds, deltas == [0, 0]) {
        (false, _) => PairCase::NeedsRegularization,
        (true, true) => PairCase::Unregularized,
        (true, false) => PairCase::Regularized,
    };
    Ok(PairReport {
        residual,
        inertia,
        deltas,
        range_rank,
        domain_rank,
        case,
    })
}

fn rank_conditions(problem: &BidiskProblem, positive_parts: &[CMatrix]) -> (usize, usize) {
    let n = problem.len();
    let (nodes, w) = (problem.nodes(), problem.values());
    let range = CMatrix::from_fn(n, n, |i, j| {
        w[i] * w[j].conj() + positive_parts[0][(i, j)] + positive_parts[1][(i, j)]
    });
    let domain = CMatrix::from_fn(n, n, |i, j| {
        let mut s = C64::new(1.0, 0.0);
        for r in 0..2 {
            s += nodes[i][r] * nodes[j][r].conj() * positive_parts[r][(i, j)];
        }
        s
    });
    (numerical_rank(&range, RANK_TOL), numerical_rank(&domain, RANK_TOL))
}

/// Adds regularizers `Y^r = ρ G^r G^r*` with seeded random `N × δ^r`
/// factors and `ρ = 10⁻² · max(1, ‖Γ¹‖, ‖Γ²‖)`, trying `(δ¹, δ²)` by
/// increasing `δ¹ + δ²` (larger `δ¹` first) until both rank conditions
/// hold. A pair that already satisfies them is returned unchanged.
pub fn regularize_pair(problem: &BidiskProblem, pair: &AglerPair, seed: u64, inertia_tol: f64) -> Result<AglerPair> {
    let report = validate_pair(problem, pair, DECOMPOSITION_TOL, inertia_tol)?;
    if report.conditions_hold() {
        return Ok(pair.clone());
    }
    let n = problem.len();
    let rho = 1e-2 * pair.gamma.iter().map(|g| g.norm()).fold(1.0_f64, f64::max);
    for total in 1..=2 * n {
        for d1 in (0..=total.min(n)).rev() {
            let d2 = total - d1;
            if d2 > n {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((d1 as u64) << 32 | d2 as u64));
            let make = |d: usize, rng: &mut ChaCha8Rng| {
                (d > 0).then(|| {
                    let g = random_matrix(n, d, rng);
                    (&g * g.adjoint()).scale(rho)
                })
            };
            let y1 = make(d1, &mut rng);
            let y2 = make(d2, &mut rng);
            let candidate = AglerPair {
                gamma: pair.gamma.clone(),
                regularizers: [y1, y2],
            };
            let rep = validate_pair(problem, &candidate, DECOMPOSITION_TOL, inertia_tol)?;
            if rep.conditions_hold() {
                return Ok(candidate);
            }
        }
    }
    Err(TakagiError::RegularizationFailed { max_rank: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_INERTIA_TOL;
    use crate::pick::zero_one_problem;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn embed(nodes: &[C64], values: &[C64], second: &[C64]) -> BidiskProblem {
        let pts = nodes.iter().zip(second).map(|(&a, &b)| [a, b]).collect();
        BidiskProblem::new(pts, values.to_vec()).unwrap()
    }

    #[test]
    fn one_variable_embedding_has_zero_residual() {
        let p = zero_one_problem(4).unwrap();
        let b = embed(p.nodes(), p.values(), &[c(0.1, 0.0), c(0.2, 0.3), c(-0.4, 0.0), c(0.0, 0.6)]);
        let pair = AglerPair::one_variable(&b);
        assert!(decomposition_residual(&b, &pair) < 1e-14);
    }

    #[test]
    fn single_node_any_split() {
        let b = BidiskProblem::new(vec![[c(0.0, 0.0), c(0.0, 0.0)]], vec![c(0.0, 0.0)]).unwrap();
        for t in [-2.0, 0.0, 0.3, 5.0] {
            let pair = AglerPair::new(
                CMatrix::from_element(1, 1, c(t, 0.0)),
                CMatrix::from_element(1, 1, c(1.0 - t, 0.0)),
            )
            .unwrap();
            assert!(decomposition_residual(&b, &pair) < 1e-15);
        }
    }

    #[test]
    fn wrong_pair_rejected() {
        let b = BidiskProblem::new(vec![[c(0.1, 0.0), c(0.2, 0.0)]], vec![c(0.5, 0.0)]).unwrap();
        let pair = AglerPair::new(CMatrix::identity(1, 1), CMatrix::identity(1, 1)).unwrap();
        assert!(matches!(
            validate_pair(&b, &pair, DECOMPOSITION_TOL, DEFAULT_INERTIA_TOL),
            Err(TakagiError::DecompositionResidual { .. })
        ));
    }

    #[test]
    fn degenerate_embedding_needs_regularization() {
        let p = zero_one_problem(5).unwrap();
        let second = [c(0.1, 0.0), c(0.2, 0.3), c(-0.4, 0.0), c(0.0, 0.6), c(0.5, -0.2)];
        let b = embed(p.nodes(), p.values(), &second);
        let pair = AglerPair::one_variable(&b);
        let rep = validate_pair(&b, &pair, DECOMPOSITION_TOL, DEFAULT_INERTIA_TOL).unwrap();
        assert_eq!(rep.case, PairCase::NeedsRegularization);
        let reg = regularize_pair(&b, &pair, 7, DEFAULT_INERTIA_TOL).unwrap();
        let rep = validate_pair(&b, &reg, DECOMPOSITION_TOL, DEFAULT_INERTIA_TOL).unwrap();
        assert_eq!(rep.case, PairCase::Regularized);
        // two regularizing directions leave the domain condition short by one
        assert_eq!(rep.deltas, [3, 0]);
    }

    #[test]
    fn equal_unimodular_values_need_regularization() {
        let w = C64::from_polar(1.0, 0.3);
        let b = embed(&[c(0.0, 0.0), c(0.4, 0.1)], &[w, w], &[c(0.2, 0.0), c(-0.3, 0.2)]);
        let pair = AglerPair::new(CMatrix::zeros(2, 2), CMatrix::zeros(2, 2)).unwrap();
        let rep = validate_pair(&b, &pair, DECOMPOSITION_TOL, DEFAULT_INERTIA_TOL).unwrap();
        assert_eq!(rep.range_rank, 1);
        let reg = regularize_pair(&b, &pair, 1, DEFAULT_INERTIA_TOL).unwrap();
        let d = reg.deltas().unwrap();
        assert!(d[0] + d[1] >= 1);
    }

    #[test]
    fn psd_factor_round_trip() {
        let g = CMatrix::from_row_slice(3, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(1.0, -1.0)]);
        let y = &g * g.adjoint();
        let f = psd_factor(&y).unwrap();
        assert_eq!(f.ncols(), 2);
        assert!((&f * f.adjoint() - y).norm() < 1e-12);
    }
}
