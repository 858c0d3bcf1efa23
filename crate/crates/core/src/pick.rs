//! Pick matrices of disk interpolation data and their signed Gram splitting.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TakagiError};
use crate::linalg::{hermitian_inertia, symmetrize, CMatrix, Inertia};
use crate::C64;

/// Smallest admissible distance between two interpolation nodes.
pub const MIN_NODE_SEPARATION: f64 = 1e-9;

/// Interpolation data `λ_i ↦ w_i` with nodes in the open unit disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskProblem {
    nodes: Vec<C64>,
    values: Vec<C64>,
}

impl DiskProblem {
    pub fn new(nodes: Vec<C64>, values: Vec<C64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(TakagiError::InvalidInput("at least one node is required".into()));
        }
        if nodes.len() != values.len() {
            return Err(TakagiError::DimensionMismatch {
                expected: nodes.len(),
                found: values.len(),
            });
        }
        validate_nodes(&nodes)?;
        if let Some(k) = values.iter().position(|w| !w.is_finite()) {
            return Err(TakagiError::InvalidInput(format!("value {k} is not finite")));
        }
        Ok(Self { nodes, values })
    }

    pub fn nodes(&self) -> &[C64] {
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
        self.values.iter().fold(0.0_f64, |m, w| m.max(w.norm()))
    }
}

pub(crate) fn validate_nodes(nodes: &[C64]) -> Result<()> {
    for (k, z) in nodes.iter().enumerate() {
        if !(z.norm() < 1.0) {
            return Err(TakagiError::NodeOutsideDisk {
                index: k,
                modulus: z.norm(),
            });
        }
    }
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let distance = (nodes[i] - nodes[j]).norm();
            if distance <= MIN_NODE_SEPARATION {
                return Err(TakagiError::CoincidentNodes {
                    first: i,
                    second: j,
                    distance,
                });
            }
        }
    }
    Ok(())
}

/// `Γ_ij = (1 − w_i w̄_j) / (1 − λ_i λ̄_j)`, symmetrized.
pub fn pick_matrix(problem: &DiskProblem) -> CMatrix {
    pick_matrix_raw(problem.nodes(), problem.values())
}

pub(crate) fn pick_matrix_raw(nodes: &[C64], values: &[C64]) -> CMatrix {
    let n = nodes.len();
    let one = C64::new(1.0, 0.0);
    let m = CMatrix::from_fn(n, n, |i, j| {
        (one - values[i] * values[j].conj()) / (one - nodes[i] * nodes[j].conj())
    });
    symmetrize(&m)
}

/// Splitting `Γ_ij = <u_i,u_j> − <v_i,v_j>` together with padding vectors
/// `y_i` that make `B = Gram(u) + Gram(v) + Gram(y)` positive definite.
///
/// Row `i` of each matrix is the vector attached to node `i`.
#[derive(Debug, Clone)]
pub struct GramDecomposition {
    pub u: CMatrix,
    pub v: CMatrix,
    pub y: CMatrix,
    pub inertia: Inertia,
    pub eigenvalues: Vec<f64>,
}

impl GramDecomposition {
    pub fn len(&self) -> usize {
        self.u.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `Gram(u) − Gram(v)`, which reproduces `Γ` up to the discarded spectrum.
    pub fn reconstruct(&self) -> CMatrix {
        row_gram(&self.u) - row_gram(&self.v)
    }

    /// `Gram(u) + Gram(v) + Gram(y)`.
    pub fn b_matrix(&self) -> CMatrix {
        row_gram(&self.u) + row_gram(&self.v) + row_gram(&self.y)
    }

    /// Stacked vectors `x_i = (u_i ⊕ y_i, v_i ⊕ y_i)` as rows, of dimension
    /// `2N − π − ν`.
    pub fn stacked(&self) -> CMatrix {
        let n = self.len();
        let (p, q, z) = (self.u.ncols(), self.v.ncols(), self.y.ncols());
        let mut x = CMatrix::zeros(n, p + q + 2 * z);
        x.view_mut((0, 0), (n, p)).copy_from(&self.u);
        x.view_mut((0, p), (n, z)).copy_from(&self.y);
        x.view_mut((0, p + z), (n, q)).copy_from(&self.v);
        x.view_mut((0, p + z + q), (n, z)).copy_from(&self.y);
        x
    }
}

/// `M_ij = <r_i, r_j> = Σ_k R_ik conj(R_jk)` for the rows of `R`.
pub fn row_gram(rows: &CMatrix) -> CMatrix {
    rows * rows.adjoint()
}

/// Splits a Hermitian matrix into positive and negative Gram parts using its
/// eigen-decomposition; the null eigenvectors, scaled by `sqrt(max(1, ‖Γ‖))`,
/// supply the padding vectors.
pub fn gram_decompose(gamma: &CMatrix, tol: f64) -> Result<GramDecomposition> {
    let eig = hermitian_inertia(gamma, tol)?;
    let (pos, neg, zero) = eig.partition();
    let n = gamma.nrows();
    let pad = eig.spectral_radius().max(1.0).sqrt();
    let build = |idx: &[usize], weight: &dyn Fn(f64) -> f64| {
        let mut m = CMatrix::zeros(n, idx.len());
        for (dst, &k) in idx.iter().enumerate() {
            let s = weight(eig.eigenvalues[k]);
            for i in 0..n {
                m[(i, dst)] = eig.eigenvectors[(i, k)] * s;
            }
        }
        m
    };
    // largest magnitudes first
    let mut pos = pos;
    pos.reverse();
    Ok(GramDecomposition {
        u: build(&pos, &|l| l.sqrt()),
        v: build(&neg, &|l| (-l).sqrt()),
        y: build(&zero, &|_| pad),
        inertia: eig.inertia,
        eigenvalues: eig.eigenvalues,
    })
}

/// Data `0 ↦ 0` and `λ_k ↦ 1` at up to five fixed further nodes
/// `½, −½, i/2, 0.3+0.3i, −0.2−0.4i`. Its Pick matrix has inertia
/// `(1, 1, n − 2)` for `n >= 2`.
pub fn zero_one_problem(n: usize) -> Result<DiskProblem> {
    const EXTRA: [(f64, f64); 5] = [(0.5, 0.0), (-0.5, 0.0), (0.0, 0.5), (0.3, 0.3), (-0.2, -0.4)];
    if n == 0 || n > EXTRA.len() + 1 {
        return Err(TakagiError::InvalidInput(format!("zero-one problem needs 1 <= n <= 6, got {n}")));
    }
    let mut nodes = vec![C64::new(0.0, 0.0)];
    let mut values = vec![C64::new(0.0, 0.0)];
    for &(re, im) in &EXTRA[..n - 1] {
        nodes.push(C64::new(re, im));
        values.push(C64::new(1.0, 0.0));
    }
    DiskProblem::new(nodes, values)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::linalg::{conditioning_ratio, hermitian_inertia, real_diagonal};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    pub(crate) fn example_problem(n: usize) -> DiskProblem {
        zero_one_problem(n).unwrap()
    }

    #[test]
    fn single_node_entries() {
        let p = DiskProblem::new(vec![c(0.0, 0.0)], vec![c(0.0, 0.0)]).unwrap();
        assert_eq!(pick_matrix(&p)[(0, 0)], c(1.0, 0.0));
        let p = DiskProblem::new(vec![c(0.0, 0.0)], vec![c(2.0, 0.0)]).unwrap();
        assert_eq!(pick_matrix(&p)[(0, 0)], c(-3.0, 0.0));
    }

    #[test]
    fn equal_unimodular_values_give_zero_matrix() {
        let w = C64::from_polar(1.0, 0.7);
        let p = DiskProblem::new(vec![c(0.1, 0.0), c(0.0, 0.4), c(-0.3, 0.2)], vec![w; 3]).unwrap();
        let g = pick_matrix(&p);
        assert!(g.norm() < 1e-15);
        assert_eq!(hermitian_inertia(&g, 1e-9).unwrap().inertia, Inertia::new(0, 0, 3));
    }

    #[test]
    fn rejects_bad_nodes() {
        assert!(matches!(
            DiskProblem::new(vec![c(0.1, 0.0), c(0.1, 0.0)], vec![c(0.0, 0.0); 2]),
            Err(TakagiError::CoincidentNodes { .. })
        ));
        assert!(matches!(
            DiskProblem::new(vec![c(1.0, 0.0)], vec![c(0.0, 0.0)]),
            Err(TakagiError::NodeOutsideDisk { .. })
        ));
        assert!(DiskProblem::new(vec![], vec![]).is_err());
    }

    #[test]
    fn example_inertia() {
        let p = DiskProblem::new(
            vec![c(0.0, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(0.0, 0.5)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let e = hermitian_inertia(&pick_matrix(&p), 1e-10).unwrap();
        assert_eq!(e.inertia, Inertia::new(1, 1, 2));
    }

    #[test]
    fn decompose_signature_matrix() {
        let g = real_diagonal(&[1.0, -1.0]);
        let d = gram_decompose(&g, 1e-9).unwrap();
        assert_eq!((d.u.ncols(), d.v.ncols(), d.y.ncols()), (1, 1, 0));
        assert!((d.reconstruct() - &g).norm() < 1e-15);
    }

    #[test]
    fn decompose_zero_matrix() {
        let g = CMatrix::zeros(2, 2);
        let d = gram_decompose(&g, 1e-9).unwrap();
        assert_eq!(d.inertia, Inertia::new(0, 0, 2));
        assert_eq!(d.y.ncols(), 2);
        assert!(hermitian_inertia(&d.b_matrix(), 1e-9).unwrap().inertia.positive == 2);
    }

    #[test]
    fn decompose_example() {
        let g = pick_matrix(&example_problem(4));
        let d = gram_decompose(&g, 1e-9).unwrap();
        assert_eq!(d.inertia, Inertia::new(1, 1, 2));
        assert!((d.reconstruct() - &g).norm() < 1e-10);
        let x = d.stacked();
        assert_eq!(x.ncols(), 2 * 4 - 2);
        assert!(conditioning_ratio(&row_gram(&x)) > 1e-8);
    }
}
