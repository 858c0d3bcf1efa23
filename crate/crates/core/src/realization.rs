//! Transfer-function realizations `φ(λ) = A + λ B (I − λD)⁻¹ C` built from a
//! J-unitary colligation, their kernel identity, and exact conversion to a
//! polynomial fraction.

use crate::error::{Result, TakagiError};
use crate::krein::SignatureMatrix;
use crate::linalg::{det, identity, CMatrix, CPoly, CVector};
use crate::C64;

/// Relative size of `det(I − λD)` below which the resolvent is treated as singular.
pub const RESOLVENT_TOL: f64 = 1e-12;

/// Colligation `[[A, B], [C, D]]` with state-space signature `J₁`.
#[derive(Debug, Clone)]
pub struct Realization {
    pub a: C64,
    /// Row vector of length `κ`.
    pub b: CMatrix,
    /// Column vector of length `κ`.
    pub c: CMatrix,
    pub d: CMatrix,
    pub j1: SignatureMatrix,
}

impl Realization {
    /// Splits a `(κ+1)×(κ+1)` matrix into its colligation blocks.
    pub fn from_colligation(v1: &CMatrix, j1: SignatureMatrix) -> Result<Self> {
        let k = j1.dim();
        if v1.nrows() != k + 1 || v1.ncols() != k + 1 {
            return Err(TakagiError::DimensionMismatch {
                expected: k + 1,
                found: v1.nrows(),
            });
        }
        Ok(Self {
            a: v1[(0, 0)],
            b: v1.view((0, 1), (1, k)).into_owned(),
            c: v1.view((1, 0), (k, 1)).into_owned(),
            d: v1.view((1, 1), (k, k)).into_owned(),
            j1,
        })
    }

    pub fn kappa(&self) -> usize {
        self.j1.dim()
    }

    pub fn colligation(&self) -> CMatrix {
        let k = self.kappa();
        let mut v = CMatrix::zeros(k + 1, k + 1);
        v[(0, 0)] = self.a;
        v.view_mut((0, 1), (1, k)).copy_from(&self.b);
        v.view_mut((1, 0), (k, 1)).copy_from(&self.c);
        v.view_mut((1, 1), (k, k)).copy_from(&self.d);
        v
    }

    /// `‖V₁* J V₁ − J‖_F` with `J = diag(1, J₁)`.
    pub fn j_defect(&self) -> f64 {
        self.j1.with_leading_positive().isometry_defect(&self.colligation())
    }

    /// `I − λD`
    pub fn resolvent_matrix(&self, lambda: C64) -> CMatrix {
        identity(self.kappa()) - self.d.map(|z| z * lambda)
    }

    /// State `x(λ) = (I − λD)⁻¹ C`.
    pub fn state(&self, lambda: C64) -> Result<CVector> {
        let m = self.resolvent_matrix(lambda);
        check_resolvent(&m, || format!("{lambda}"))?;
        let sol = m
            .lu()
            .solve(&self.c)
            .ok_or_else(|| TakagiError::ResolventSingular {
                point: format!("{lambda}"),
            })?;
        Ok(sol.column(0).into_owned())
    }
}

/// Rejects resolvent matrices whose determinant is negligible relative to the
/// product of their column norms.
pub(crate) fn check_resolvent(m: &CMatrix, point: impl Fn() -> String) -> Result<()> {
    if m.nrows() == 0 {
        return Ok(());
    }
    let hadamard: f64 = m.column_iter().map(|c| c.norm().max(1e-300)).product();
    if det(m).norm() <= RESOLVENT_TOL * hadamard {
        return Err(TakagiError::ResolventSingular { point: point() });
    }
    Ok(())
}

/// `φ(λ) = A + λ B (I − λD)⁻¹ C`.
pub fn eval_realization(r: &Realization, lambda: C64) -> Result<C64> {
    let x = r.state(lambda)?;
    Ok(r.a + lambda * (&r.b * x)[(0, 0)])
}

/// Exact numerator and denominator `(q, p)` with `p(λ) = det(I − λD)` and
/// `q(λ) = p(λ)A + λ B adj(I − λD) C`, via the Faddeev–LeVerrier recurrence.
pub fn realization_to_rational(r: &Realization) -> (CPoly, CPoly) {
    let k = r.kappa();
    if k == 0 {
        return (CPoly::constant(r.a), CPoly::one());
    }
    // char poly det(sI − D) = Σ a_m s^m, adj(sI − D) = Σ_{m=1}^{k} M_m s^{k−m}
    let eye = identity(k);
    let mut char_coeffs = vec![C64::new(0.0, 0.0); k + 1];
    char_coeffs[k] = C64::new(1.0, 0.0);
    let mut adj_terms: Vec<C64> = Vec::with_capacity(k);
    let mut m = eye.clone();
    for step in 1..=k {
        adj_terms.push((&r.b * &m * &r.c)[(0, 0)]);
        let dm = &r.d * &m;
        let a = -dm.trace() / step as f64;
        char_coeffs[k - step] = a;
        m = dm + eye.map(|z| z * a);
    }
    // det(I − λD) = Σ_m a_{k−m} λ^m ; adj(I − λD) = Σ_m M_{m+1} λ^m
    let p = CPoly::new((0..=k).map(|m| char_coeffs[k - m]).collect());
    let mut q = p.scale(r.a).padded(k + 1);
    let mut qc = q.coeffs().to_vec();
    for (m, t) in adj_terms.iter().enumerate() {
        qc[m + 1] += *t;
    }
    q = CPoly::new(qc);
    (q, p)
}

/// Same pair as [`realization_to_rational`], obtained by evaluating
/// `det(I − λD)` and `det[[A, −λB], [C, I − λD]]` at the `(κ+1)`-th roots of
/// unity and inverting the discrete Fourier transform.
pub fn realization_to_rational_sampled(r: &Realization) -> (CPoly, CPoly) {
    let k = r.kappa();
    let n = k + 1;
    let mut pv = Vec::with_capacity(n);
    let mut qv = Vec::with_capacity(n);
    let colligation = r.colligation();
    for s in 0..n {
        let z = root_of_unity(s, n);
        let res = r.resolvent_matrix(z);
        pv.push(det(&res));
        let mut big = colligation.clone();
        big.view_mut((0, 1), (1, k)).copy_from(&r.b.map(|x| -x * z));
        big.view_mut((1, 1), (k, k)).copy_from(&res);
        qv.push(det(&big));
    }
    (CPoly::new(inverse_dft(&qv)), CPoly::new(inverse_dft(&pv)))
}

pub(crate) fn root_of_unity(s: usize, n: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * s as f64 / n as f64)
}

/// Coefficients `c_m` of the polynomial with values `v_s` at `ω^s`, `ω = e^{2πi/n}`.
pub(crate) fn inverse_dft(values: &[C64]) -> Vec<C64> {
    let n = values.len();
    (0..n)
        .map(|m| {
            values
                .iter()
                .enumerate()
                .map(|(s, v)| v * root_of_unity((s * m) % n, n).conj())
                .sum::<C64>()
                / n as f64
        })
        .collect()
}

/// `<J₁ x(λ), x(μ)> = x(μ)* J₁ x(λ)`, which equals
/// `(1 − φ(λ) conj φ(μ)) / (1 − λ μ̄)` for a J-unitary colligation.
pub fn kernel_gamma(r: &Realization, lambda: C64, mu: C64) -> Result<C64> {
    if (C64::new(1.0, 0.0) - lambda * mu.conj()).norm() < 1e-14 {
        return Err(TakagiError::InvalidInput("λ μ̄ = 1 on the kernel diagonal".into()));
    }
    let xl = r.state(lambda)?;
    let xm = r.state(mu)?;
    let jx = r.j1.apply(&CMatrix::from_column_slice(xl.len(), 1, xl.as_slice()));
    Ok((xm.adjoint() * jx)[(0, 0)])
}

/// Estimates the unimodular `c` with `q ≈ c · p̃_d` from the coordinatewise
/// median of coefficient ratios over the well-sized coefficients of `p̃_d`.
pub fn reflection_constant(q: &CPoly, p: &CPoly, d: usize) -> Result<C64> {
    let pr = p.reflect(d)?;
    let cut = 1e-6 * pr.norm();
    let ratios: Vec<C64> = (0..=d)
        .filter(|&k| pr.coeff(k).norm() > cut)
        .map(|k| q.coeff(k) / pr.coeff(k))
        .collect();
    if ratios.is_empty() {
        return Err(TakagiError::ZeroPolynomial);
    }
    let median = |mut v: Vec<f64>| {
        v.sort_by(|a, b| a.total_cmp(b));
        let m = v.len();
        if m % 2 == 1 {
            v[m / 2]
        } else {
            0.5 * (v[m / 2 - 1] + v[m / 2])
        }
    };
    let c = C64::new(
        median(ratios.iter().map(|z| z.re).collect()),
        median(ratios.iter().map(|z| z.im).collect()),
    );
    if c.norm() == 0.0 {
        return Err(TakagiError::NumericalBreakdown("reflection constant vanished".into()));
    }
    Ok(c / c.norm())
}

/// Rescales `p` by a unimodular factor so that `p̃_d / p` equals `c · p̃_d / p`.
pub fn absorb_reflection_constant(p: &CPoly, c: C64) -> CPoly {
    // (αp)~ = ᾱ p̃, so ᾱ/α = c needs α = c^{-1/2}
    let alpha = C64::from_polar(1.0, -0.5 * c.arg());
    p.scale(alpha)
}
