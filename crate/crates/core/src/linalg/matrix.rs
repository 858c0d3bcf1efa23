//! Dense complex matrices, Hermitian eigen-decomposition and inertia.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use serde::{Deserialize, Serialize};

use crate::error::{Result, TakagiError};
use crate::C64;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative tolerance used to accept a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Default zero-classification tolerance for eigenvalues.
pub const DEFAULT_INERTIA_TOL: f64 = 1e-9;

/// Counts of positive, negative and zero eigenvalues of a Hermitian matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Self {
            positive,
            negative,
            zero,
        }
    }

    pub fn dim(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }
}

impl std::fmt::Display for Inertia {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.zero)
    }
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub inertia: Inertia,
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
    /// Absolute threshold below which an eigenvalue counted as zero.
    pub threshold: f64,
}

impl HermitianEigen {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Indices of eigenvalues classified as positive, negative and zero.
    pub fn partition(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut zero = Vec::new();
        for (k, &v) in self.eigenvalues.iter().enumerate() {
            if v.abs() <= self.threshold {
                zero.push(k);
            } else if v > 0.0 {
                pos.push(k);
            } else {
                neg.push(k);
            }
        }
        (pos, neg, zero)
    }
}

/// Largest entrywise deviation `|M_ij - conj(M_ji)|`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn ensure_hermitian(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(TakagiError::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    let defect = hermitian_defect(m);
    if defect > HERMITIAN_TOL * max_abs(m).max(1.0) {
        return Err(TakagiError::NotHermitian { asymmetry: defect });
    }
    Ok(())
}

/// `(M + M*) / 2`.
pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues, eigenvectors and inertia of a Hermitian matrix.
///
/// Eigenvalues with `|λ| <= tol * max(1, ρ)` are counted as zero, where `ρ` is
/// the spectral radius.
pub fn hermitian_inertia(m: &CMatrix, tol: f64) -> Result<HermitianEigen> {
    ensure_hermitian(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(HermitianEigen {
            inertia: Inertia::new(0, 0, 0),
            eigenvalues: Vec::new(),
            eigenvectors: CMatrix::zeros(0, 0),
            threshold: 0.0,
        });
    }
    let eig = SymmetricEigen::new(symmetrize(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    let radius = eigenvalues.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let threshold = tol * radius.max(1.0);
    let inertia = classify_eigenvalues(&eigenvalues, threshold);
    Ok(HermitianEigen {
        inertia,
        eigenvalues,
        eigenvectors,
        threshold,
    })
}

/// Counts eigenvalues against an absolute zero threshold.
pub fn classify_eigenvalues(eigenvalues: &[f64], threshold: f64) -> Inertia {
    let mut inertia = Inertia::new(0, 0, 0);
    for &v in eigenvalues {
        if v.abs() <= threshold {
            inertia.zero += 1;
        } else if v > 0.0 {
            inertia.positive += 1;
        } else {
            inertia.negative += 1;
        }
    }
    inertia
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let svd = SVD::new(m.clone(), false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank: singular values above `tol * σ_max`.
pub fn numerical_rank(m: &CMatrix, tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        None => 0,
        Some(&0.0) => 0,
        Some(&top) => s.iter().filter(|&&v| v > tol * top).count(),
    }
}

/// Ratio of the smallest to the largest singular value (0 for empty input).
pub fn conditioning_ratio(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&top), Some(&bottom)) if top > 0.0 => bottom / top,
        _ => 0.0,
    }
}

/// Orthonormal basis for `{x : M x = 0}`, using singular values below
/// `tol * σ_max` as the null threshold.
pub fn null_space(m: &CMatrix, tol: f64) -> CMatrix {
    let cols = m.ncols();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    // pad to square so the SVD returns a full right basis
    let rows = m.nrows().max(cols);
    let mut padded = CMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let top = svd.singular_values.iter().fold(0.0_f64, |a, &b| a.max(b));
    let cut = if top == 0.0 { 0.0 } else { tol * top };
    let null_idx: Vec<usize> = (0..cols)
        .filter(|&k| svd.singular_values[k] <= cut)
        .collect();
    let mut basis = CMatrix::zeros(cols, null_idx.len());
    for (dst, &k) in null_idx.iter().enumerate() {
        let row = v_t.row(k);
        for i in 0..cols {
            basis[(i, dst)] = row[i].conj();
        }
    }
    basis
}

/// Gram matrix `G_ij = <v_j, v_i>` of the columns, i.e. `V* V`.
pub fn gram(columns: &CMatrix) -> CMatrix {
    columns.adjoint() * columns
}

/// Determinant via LU; zero-sized matrices have determinant one.
pub fn det(m: &CMatrix) -> C64 {
    if m.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn real_diagonal(entries: &[f64]) -> CMatrix {
    let n = entries.len();
    let mut m = CMatrix::zeros(n, n);
    for (k, &e) in entries.iter().enumerate() {
        m[(k, k)] = C64::new(e, 0.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMatrix {
        CMatrix::from_fn(r, c, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn identity_inertia() {
        let e = hermitian_inertia(&identity(3), 1e-10).unwrap();
        assert_eq!(e.inertia, Inertia::new(3, 0, 0));
    }

    #[test]
    fn diagonal_inertia() {
        let e = hermitian_inertia(&real_diagonal(&[1.0, -1.0, 0.0]), 1e-10).unwrap();
        assert_eq!(e.inertia, Inertia::new(1, 1, 1));
        assert_eq!(e.eigenvalues.len(), 3);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = identity(2);
        m[(0, 1)] = C64::new(0.5, 0.0);
        match hermitian_inertia(&m, 1e-9) {
            Err(TakagiError::NotHermitian { asymmetry }) => assert!((asymmetry - 0.5).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eigenvectors_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 5, 5);
        let h = symmetrize(&a);
        let e = hermitian_inertia(&h, 1e-9).unwrap();
        let d = real_diagonal(&e.eigenvalues);
        let back = &e.eigenvectors * d * e.eigenvectors.adjoint();
        assert!((back - h).norm() < 1e-12);
    }

    #[test]
    fn sylvester_law_of_inertia() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let signs: Vec<f64> = (0..6)
                .map(|_| [1.0, -1.0, 0.0][rng.gen_range(0..3)] * rng.gen_range(0.5..2.0))
                .collect();
            let q = random_matrix(&mut rng, 6, 6).qr().q();
            let m = symmetrize(&(&q * real_diagonal(&signs) * q.adjoint()));
            let s = random_matrix(&mut rng, 6, 6) + identity(6).scale(2.0);
            let congruent = symmetrize(&(s.adjoint() * &m * &s));
            let base = hermitian_inertia(&m, 1e-9).unwrap().inertia;
            let moved = hermitian_inertia(&congruent, 1e-9).unwrap().inertia;
            assert_eq!(base, moved);
        }
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_matrix(&mut rng, 2, 5);
        let ns = null_space(&m, 1e-12);
        assert_eq!(ns.ncols(), 3);
        assert!((&m * &ns).norm() < 1e-12);
        assert!((ns.adjoint() * &ns - identity(3)).norm() < 1e-12);
    }

    #[test]
    fn rank_of_outer_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = random_matrix(&mut rng, 4, 2);
        assert_eq!(numerical_rank(&(&u * u.adjoint()), 1e-10), 2);
    }
}
