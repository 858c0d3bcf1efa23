//! Indefinite inner products given by diagonal signature matrices, and the
//! completion of a partially defined J-isometry to a J-unitary matrix.
//!
//! The extension works in three stages. The common J-Gram of the domain and
//! range families is diagonalized so both families split into a
//! nondegenerate part and a radical. Every radical vector then receives a
//! J-dual partner, chosen on each side with identical Gram data, so the
//! enlarged spans are nondegenerate. Finally the J-orthogonal complements of
//! the two enlarged spans are J-orthonormalized and matched by sign.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TakagiError};
use crate::linalg::{conditioning_ratio, hermitian_inertia, null_space, symmetrize, CMatrix, Inertia};
use crate::C64;

/// Default tolerance for J-Gram agreement and radical detection.
pub const DEFAULT_KREIN_TOL: f64 = 1e-9;

/// A diagonal matrix with entries `±1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureMatrix {
    signs: Vec<i8>,
}

impl SignatureMatrix {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(s) = signs.iter().find(|s| **s != 1 && **s != -1) {
            return Err(TakagiError::InvalidInput(format!("signature entry {s} is not ±1")));
        }
        Ok(Self { signs })
    }

    /// `diag(I_p, −I_q)`.
    pub fn block(p: usize, q: usize) -> Self {
        Self::from_blocks(&[(p, 1), (q, -1)])
    }

    /// Concatenates runs of `(length, sign)`.
    pub fn from_blocks(blocks: &[(usize, i8)]) -> Self {
        let signs = blocks
            .iter()
            .flat_map(|&(len, s)| std::iter::repeat_n(s, len))
            .collect();
        Self { signs }
    }

    pub fn identity(n: usize) -> Self {
        Self::block(n, 0)
    }

    /// `diag(1, self)`.
    pub fn with_leading_positive(&self) -> Self {
        let mut signs = Vec::with_capacity(self.signs.len() + 1);
        signs.push(1);
        signs.extend_from_slice(&self.signs);
        Self { signs }
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn inertia(&self) -> Inertia {
        let p = self.signs.iter().filter(|s| **s > 0).count();
        Inertia::new(p, self.dim() - p, 0)
    }

    pub fn to_matrix(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (k, &s) in self.signs.iter().enumerate() {
            m[(k, k)] = C64::new(s as f64, 0.0);
        }
        m
    }

    /// `J M`, scaling the rows of `M`.
    pub fn apply(&self, m: &CMatrix) -> CMatrix {
        let mut out = m.clone();
        for (k, &s) in self.signs.iter().enumerate() {
            if s < 0 {
                out.row_mut(k).neg_mut();
            }
        }
        out
    }

    /// `‖V* J V − J‖_F`.
    pub fn isometry_defect(&self, v: &CMatrix) -> f64 {
        (v.adjoint() * self.apply(v) - self.to_matrix()).norm()
    }
}

/// J-Gram of the columns of `vectors`: `G_ij = <J v_i, v_j> = v_j* J v_i`.
pub fn j_gram(signature: &SignatureMatrix, vectors: &CMatrix) -> Result<CMatrix> {
    if vectors.nrows() != signature.dim() {
        return Err(TakagiError::DimensionMismatch {
            expected: signature.dim(),
            found: vectors.nrows(),
        });
    }
    Ok((vectors.adjoint() * signature.apply(vectors)).transpose())
}

/// A linear map defined on the span of `domain` columns by `d_i ↦ r_i`.
#[derive(Debug, Clone)]
pub struct PartialJIsometry {
    signature: SignatureMatrix,
    domain: CMatrix,
    range: CMatrix,
}

impl PartialJIsometry {
    pub fn new(signature: SignatureMatrix, domain: CMatrix, range: CMatrix) -> Result<Self> {
        let n = signature.dim();
        for m in [&domain, &range] {
            if m.nrows() != n {
                return Err(TakagiError::DimensionMismatch {
                    expected: n,
                    found: m.nrows(),
                });
            }
        }
        if domain.ncols() != range.ncols() {
            return Err(TakagiError::DimensionMismatch {
                expected: domain.ncols(),
                found: range.ncols(),
            });
        }
        if domain.ncols() > n {
            return Err(TakagiError::InvalidInput(format!(
                "{} vectors cannot be independent in dimension {n}",
                domain.ncols()
            )));
        }
        Ok(Self {
            signature,
            domain,
            range,
        })
    }

    pub fn signature(&self) -> &SignatureMatrix {
        &self.signature
    }

    pub fn domain(&self) -> &CMatrix {
        &self.domain
    }

    pub fn range(&self) -> &CMatrix {
        &self.range
    }

    /// `‖D* J D − R* J R‖_F`.
    pub fn gram_mismatch(&self) -> f64 {
        let gd = self.domain.adjoint() * self.signature.apply(&self.domain);
        let gr = self.range.adjoint() * self.signature.apply(&self.range);
        (gd - gr).norm()
    }
}

/// Both sides of the extension, expressed in a shared column order.
struct Side {
    nondegenerate: CMatrix,
    radical: CMatrix,
}

/// Extends a partial J-isometry to a J-unitary `V₁` with `V₁ d_i = r_i`.
///
/// `tol` bounds the relative J-Gram mismatch and classifies radical
/// directions (eigenvalues `|g| <= tol · max(1, g_max)` of the common J-Gram).
pub fn extend_j_isometry(partial: &PartialJIsometry, tol: f64) -> Result<CMatrix> {
    extend_j_isometry_with(partial, tol, tol)
}

/// Like [`extend_j_isometry`] with separate tolerances for the relative
/// J-Gram mismatch and for radical detection.
pub fn extend_j_isometry_with(partial: &PartialJIsometry, gram_tol: f64, radical_tol: f64) -> Result<CMatrix> {
    let tol = radical_tol;
    let j = partial.signature();
    let n = j.dim();
    let (dom, ran) = (partial.domain(), partial.range());
    let count = dom.ncols();

    for (side, m) in [("domain", dom), ("range", ran)] {
        if count > 0 {
            let ratio = conditioning_ratio(m);
            if ratio < 1e-12 {
                return Err(TakagiError::DependentVectors { side, ratio });
            }
        }
    }

    let gd = dom.adjoint() * j.apply(dom);
    let gr = ran.adjoint() * j.apply(ran);
    let mismatch = (&gd - &gr).norm();
    if mismatch > gram_tol * gd.norm().max(1.0) {
        return Err(TakagiError::JGramMismatch { mismatch });
    }
    let common = symmetrize(&((&gd + &gr).scale(0.5)));
    let eig = hermitian_inertia(&common, tol)?;
    let (pos, neg, zero) = eig.partition();

    let split = |m: &CMatrix| -> Side {
        let rotated = m * &eig.eigenvectors;
        let nondeg_idx: Vec<usize> = pos.iter().chain(neg.iter()).copied().collect();
        let mut nondegenerate = CMatrix::zeros(n, nondeg_idx.len());
        for (dst, &k) in nondeg_idx.iter().enumerate() {
            let s = 1.0 / eig.eigenvalues[k].abs().sqrt();
            nondegenerate.set_column(dst, &rotated.column(k).scale(s));
        }
        let mut radical = CMatrix::zeros(n, zero.len());
        for (dst, &k) in zero.iter().enumerate() {
            radical.set_column(dst, &rotated.column(k));
        }
        Side {
            nondegenerate,
            radical,
        }
    };
    let dom_side = split(dom);
    let ran_side = split(ran);

    let dom_full = enlarge(j, &dom_side)?;
    let ran_full = enlarge(j, &ran_side)?;
    let dom_basis = complete(j, dom_full, tol)?;
    let ran_basis = complete(j, ran_full, tol)?;
    if dom_basis.1 != ran_basis.1 {
        return Err(TakagiError::NumericalBreakdown(format!(
            "complement signatures differ: {} vs {} positive directions",
            dom_basis.1, ran_basis.1
        )));
    }
    let inverse = dom_basis
        .0
        .clone()
        .try_inverse()
        .ok_or_else(|| TakagiError::NumericalBreakdown("completed domain basis is singular".into()))?;
    Ok(&ran_basis.0 * inverse)
}

/// Appends J-dual partners of the radical vectors, returning
/// `[nondegenerate, radical, partners]`.
fn enlarge(j: &SignatureMatrix, side: &Side) -> Result<CMatrix> {
    let n = j.dim();
    let (a, z) = (side.nondegenerate.ncols(), side.radical.ncols());
    let mut span = CMatrix::zeros(n, a + z);
    span.view_mut((0, 0), (n, a)).copy_from(&side.nondegenerate);
    span.view_mut((0, a), (n, z)).copy_from(&side.radical);
    if z == 0 {
        return Ok(span);
    }
    let mut targets = CMatrix::zeros(a + z, z);
    for k in 0..z {
        targets[(a + k, k)] = C64::new(1.0, 0.0);
    }
    // minimum-norm solution of (span* J) F = targets
    let gram = span.adjoint() * &span;
    let coeffs = gram
        .lu()
        .solve(&targets)
        .ok_or_else(|| TakagiError::NumericalBreakdown("radical partner system is singular".into()))?;
    let mut partners = j.apply(&(&span * coeffs));
    let h = partners.adjoint() * j.apply(&partners);
    partners -= &side.radical * h.scale(0.5);
    let mut out = CMatrix::zeros(n, a + 2 * z);
    out.view_mut((0, 0), (n, a + z)).copy_from(&span);
    out.view_mut((0, a + z), (n, z)).copy_from(&partners);
    Ok(out)
}

/// Appends a J-orthonormal basis of the J-orthogonal complement of `span`,
/// positive directions first. Returns the square basis and the number of
/// positive complement directions.
fn complete(j: &SignatureMatrix, span: CMatrix, tol: f64) -> Result<(CMatrix, usize)> {
    let n = j.dim();
    let used = span.ncols();
    let extra = n - used;
    let mut basis = CMatrix::zeros(n, n);
    basis.view_mut((0, 0), (n, used)).copy_from(&span);
    if extra == 0 {
        return Ok((basis, 0));
    }
    let constraint = span.adjoint() * j.to_matrix();
    let complement = null_space(&constraint, 1e-10);
    if complement.ncols() != extra {
        return Err(TakagiError::NumericalBreakdown(format!(
            "J-orthogonal complement has dimension {} instead of {extra}",
            complement.ncols()
        )));
    }
    let gram = symmetrize(&(complement.adjoint() * j.apply(&complement)));
    let eig = hermitian_inertia(&gram, tol)?;
    if eig.inertia.zero != 0 {
        return Err(TakagiError::NumericalBreakdown(
            "J-orthogonal complement is degenerate".into(),
        ));
    }
    let mut order: Vec<usize> = (0..extra).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (eig.eigenvalues[a], eig.eigenvalues[b]);
        (y > 0.0)
            .cmp(&(x > 0.0))
            .then(y.abs().total_cmp(&x.abs()))
    });
    let rotated = &complement * &eig.eigenvectors;
    for (dst, &k) in order.iter().enumerate() {
        let s = 1.0 / eig.eigenvalues[k].abs().sqrt();
        basis.set_column(used + dst, &rotated.column(k).scale(s));
    }
    Ok((basis, eig.inertia.positive))
}
