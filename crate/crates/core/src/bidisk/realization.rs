//! Realizations `φ(λ) = A + B E_λ (I − D E_λ)⁻¹ C` with
//! `E_λ = diag(λ¹ I_{κ¹}, λ² I_{κ²})`.

use super::bipoly::{BalancedDisk, BiPoly, BiRational};
use super::pair::{split_term, AglerPair};
use super::BidiskProblem;
use crate::disk::SolverOptions;
use crate::error::{Result, TakagiError};
use crate::krein::{extend_j_isometry_with, PartialJIsometry, SignatureMatrix};
use crate::linalg::{det, identity, CMatrix, CVector};
use crate::rational::RationalFunction;
use crate::C64;

#[derive(Debug, Clone)]
pub struct BidiskRealization {
    pub a: C64,
    pub b: CMatrix,
    pub c: CMatrix,
    pub d: CMatrix,
    pub j1: SignatureMatrix,
    /// State dimensions attached to each variable.
    pub kappa: [usize; 2],
    /// Positive and negative directions of `J₁` within each variable's block.
    pub blocks: [(usize, usize); 2],
}

impl BidiskRealization {
    /// Splits a J-unitary colligation; `blocks[r]` gives the signature of
    /// variable `r`'s part of the state space, first variable first.
    pub fn from_colligation(v1: &CMatrix, blocks: [(usize, usize); 2]) -> Result<Self> {
        let kappa = [blocks[0].0 + blocks[0].1, blocks[1].0 + blocks[1].1];
        let k = kappa[0] + kappa[1];
        if v1.nrows() != k + 1 || v1.ncols() != k + 1 {
            return Err(TakagiError::DimensionMismatch {
                expected: k + 1,
                found: v1.nrows(),
            });
        }
        let j1 = SignatureMatrix::from_blocks(&[
            (blocks[0].0, 1),
            (blocks[0].1, -1),
            (blocks[1].0, 1),
            (blocks[1].1, -1),
        ]);
        Ok(Self {
            a: v1[(0, 0)],
            b: v1.view((0, 1), (1, k)).into_owned(),
            c: v1.view((1, 0), (k, 1)).into_owned(),
            d: v1.view((1, 1), (k, k)).into_owned(),
            j1,
            kappa,
            blocks,
        })
    }

    pub fn dim(&self) -> usize {
        self.kappa[0] + self.kappa[1]
    }

    pub fn colligation(&self) -> CMatrix {
        let k = self.dim();
        let mut v = CMatrix::zeros(k + 1, k + 1);
        v[(0, 0)] = self.a;
        v.view_mut((0, 1), (1, k)).copy_from(&self.b);
        v.view_mut((1, 0), (k, 1)).copy_from(&self.c);
        v.view_mut((1, 1), (k, k)).copy_from(&self.d);
        v
    }

    /// `‖V₁* J V₁ − J‖_F`.
    pub fn j_defect(&self) -> f64 {
        self.j1.with_leading_positive().isometry_defect(&self.colligation())
    }

    /// Diagonal of `E_λ`.
    pub fn e_diagonal(&self, lambda: [C64; 2]) -> Vec<C64> {
        let mut e = vec![lambda[0]; self.kappa[0]];
        e.extend(std::iter::repeat_n(lambda[1], self.kappa[1]));
        e
    }

    /// `I − D E_λ`.
    pub fn resolvent_matrix(&self, lambda: [C64; 2]) -> CMatrix {
        let e = self.e_diagonal(lambda);
        let mut de = self.d.clone();
        for (j, s) in e.iter().enumerate() {
            de.column_mut(j).scale_mut_complex(*s);
        }
        identity(self.dim()) - de
    }

    /// `x(λ) = (I − D E_λ)⁻¹ C`.
    pub fn state(&self, lambda: [C64; 2]) -> Result<CVector> {
        let m = self.resolvent_matrix(lambda);
        crate::realization::check_resolvent(&m, || format!("({}, {})", lambda[0], lambda[1]))?;
        let x = m
            .lu()
            .solve(&self.c)
            .ok_or_else(|| TakagiError::ResolventSingular {
                point: format!("({}, {})", lambda[0], lambda[1]),
            })?;
        Ok(x.column(0).into_owned())
    }
}

trait ScaleComplex {
    fn scale_mut_complex(&mut self, s: C64);
}

impl<S: nalgebra::StorageMut<C64, nalgebra::Dyn, nalgebra::U1>> ScaleComplex
    for nalgebra::Matrix<C64, nalgebra::Dyn, nalgebra::U1, S>
{
    fn scale_mut_complex(&mut self, s: C64) {
        for v in self.iter_mut() {
            *v *= s;
        }
    }
}

/// Builds the colligation from the kernel identity of a (regularized) pair.
pub fn build_bidisk_realization(
    problem: &BidiskProblem,
    pair: &AglerPair,
    opts: &SolverOptions,
) -> Result<BidiskRealization> {
    let n = problem.len();
    let mut parts: Vec<CMatrix> = Vec::with_capacity(2);
    let mut blocks = [(0, 0); 2];
    for r in 0..2 {
        let split = split_term(&pair.gamma[r], opts.inertia_tol)?;
        let y = pair.regularizer_factor(r)?;
        let (p, q, d) = (split.u.ncols(), split.v.ncols(), y.ncols());
        let mut x = CMatrix::zeros(n, p + q + 2 * d);
        x.view_mut((0, 0), (n, p)).copy_from(&split.u);
        x.view_mut((0, p), (n, d)).copy_from(&y);
        x.view_mut((0, p + d), (n, q)).copy_from(&split.v);
        x.view_mut((0, p + d + q), (n, d)).copy_from(&y);
        blocks[r] = (p + d, q + d);
        parts.push(x);
    }
    let k1 = parts[0].ncols();
    let kappa = k1 + parts[1].ncols();
    let mut domain = CMatrix::zeros(kappa + 1, n);
    let mut range = CMatrix::zeros(kappa + 1, n);
    for (i, (l, &w)) in problem.nodes().iter().zip(problem.values()).enumerate() {
        domain[(0, i)] = C64::new(1.0, 0.0);
        range[(0, i)] = w;
        for (r, x) in parts.iter().enumerate() {
            let offset = if r == 0 { 0 } else { k1 };
            for k in 0..x.ncols() {
                domain[(1 + offset + k, i)] = l[r] * x[(i, k)];
                range[(1 + offset + k, i)] = x[(i, k)];
            }
        }
    }
    let template = BidiskRealization::from_colligation(&identity(kappa + 1), blocks)?;
    let partial = PartialJIsometry::new(template.j1.with_leading_positive(), domain, range)?;
    let v1 = extend_j_isometry_with(&partial, opts.gram_tol, opts.radical_tol)?;
    BidiskRealization::from_colligation(&v1, blocks)
}

pub fn eval_bidisk(r: &BidiskRealization, lambda: [C64; 2]) -> Result<C64> {
    let x = r.state(lambda)?;
    let e = r.e_diagonal(lambda);
    let ex = CVector::from_iterator(x.len(), x.iter().zip(&e).map(|(a, b)| a * b));
    Ok(r.a + (&r.b * ex)[(0, 0)])
}

/// `p = det[[A, −B E_λ], [C, I − D E_λ]]` and `q = det(I − D E_λ)`, both of
/// bidegree at most `(κ¹, κ²)`, interpolated from a grid of roots of unity.
pub fn to_birational(r: &BidiskRealization) -> BiRational {
    let (d1, d2) = (r.kappa[0], r.kappa[1]);
    let k = r.dim();
    let mut pv = CMatrix::zeros(d1 + 1, d2 + 1);
    let mut qv = CMatrix::zeros(d1 + 1, d2 + 1);
    let colligation = r.colligation();
    for s in 0..=d1 {
        for t in 0..=d2 {
            let z = BiPoly::unit_grid_point(s, t, d1, d2);
            let res = r.resolvent_matrix(z);
            qv[(s, t)] = det(&res);
            let e = r.e_diagonal(z);
            let mut big = colligation.clone();
            for j in 0..k {
                big[(0, 1 + j)] = -r.b[(0, j)] * e[j];
            }
            big.view_mut((1, 1), (k, k)).copy_from(&res);
            pv[(s, t)] = det(&big);
        }
    }
    BiRational::new(BiPoly::from_unit_grid(&pv), BiPoly::from_unit_grid(&qv))
}

/// `(Γ¹(λ, μ), Γ²(λ, μ))` with `Γ^r(λ, μ) = x(μ)* P_r J₁ x(λ)`, where `P_r`
/// projects onto variable `r`'s block.
pub fn gamma_forms(r: &BidiskRealization, lambda: [C64; 2], mu: [C64; 2]) -> Result<[C64; 2]> {
    let xl = r.state(lambda)?;
    let xm = r.state(mu)?;
    let signs = r.j1.signs();
    let mut out = [C64::new(0.0, 0.0); 2];
    for k in 0..r.dim() {
        let block = usize::from(k >= r.kappa[0]);
        out[block] += xm[k].conj() * f64::from(signs[k]) * xl[k];
    }
    Ok(out)
}

/// Unimodular `c` with `p ≈ c · q̃`, from the coordinatewise median of the
/// coefficient ratios over the well-sized coefficients of `q̃`.
pub fn bi_reflection_constant(p: &BiPoly, q: &BiPoly, d1: usize, d2: usize) -> Result<C64> {
    let qr = q.reflect(d1, d2)?;
    let cut = 1e-6 * qr.coeffs().norm();
    let mut re = Vec::new();
    let mut im = Vec::new();
    for k in 0..=d1 {
        for l in 0..=d2 {
            if qr.coeff(k, l).norm() > cut {
                let ratio = p.coeff(k, l) / qr.coeff(k, l);
                re.push(ratio.re);
                im.push(ratio.im);
            }
        }
    }
    if re.is_empty() {
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
    let c = C64::new(median(re), median(im));
    if c.norm() == 0.0 {
        return Err(TakagiError::NumericalBreakdown("reflection constant vanished".into()));
    }
    Ok(c / c.norm())
}

/// Denominator `q` rescaled so that `q̃ / q` equals the realized function.
pub fn normalized_denominator(br: &BiRational, d1: usize, d2: usize) -> Result<BiPoly> {
    let c = bi_reflection_constant(&br.numerator, &br.denominator, d1, d2)?;
    Ok(br.denominator.scale(C64::from_polar(1.0, -0.5 * c.arg())).padded(d1, d2))
}

/// `z ↦ φ(z, ω m(z))` for the realized function, reduced.
pub fn restrict_balanced(r: &BidiskRealization, disk: &BalancedDisk, gcd_tol: f64) -> Result<RationalFunction> {
    to_birational(r).restrict_balanced(disk, gcd_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::MoebiusMap;
    use crate::random::{point_in_disk, random_j_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_realization(blocks: [(usize, usize); 2], seed: u64) -> BidiskRealization {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = BidiskRealization::from_colligation(
            &identity(blocks[0].0 + blocks[0].1 + blocks[1].0 + blocks[1].1 + 1),
            blocks,
        )
        .unwrap();
        let v = random_j_unitary(&t.j1.with_leading_positive(), 1.0, &mut rng);
        BidiskRealization::from_colligation(&v, blocks).unwrap()
    }

    fn torus(k: usize) -> [C64; 2] {
        [C64::from_polar(1.0, 0.37 * k as f64 + 0.1), C64::from_polar(1.0, 1.13 * k as f64 + 0.2)]
    }

    #[test]
    fn origin_value_and_bilinear_case() {
        let r = random_realization([(1, 1), (1, 0)], 1);
        assert!((eval_bidisk(&r, [c(0.0, 0.0); 2]).unwrap() - r.a).norm() < 1e-14);
        let mut z = r.clone();
        z.d = CMatrix::zeros(3, 3);
        let l = [c(0.3, 0.1), c(-0.2, 0.4)];
        let e = z.e_diagonal(l);
        let expected = z.a + (0..3).map(|k| z.b[(0, k)] * e[k] * z.c[(k, 0)]).sum::<C64>();
        assert!((eval_bidisk(&z, l).unwrap() - expected).norm() < 1e-14);
    }

    #[test]
    fn unimodular_on_torus() {
        for seed in 0..5 {
            let r = random_realization([(2, 1), (0, 1)], seed);
            for k in 0..20 {
                let v = eval_bidisk(&r, torus(k)).unwrap();
                assert!((v.norm() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn two_by_two_denominator() {
        let r = random_realization([(1, 0), (0, 1)], 3);
        let br = to_birational(&r);
        let d = &r.d;
        let expected = [
            ((0, 0), c(1.0, 0.0)),
            ((1, 0), -d[(0, 0)]),
            ((0, 1), -d[(1, 1)]),
            ((1, 1), d[(0, 0)] * d[(1, 1)] - d[(0, 1)] * d[(1, 0)]),
        ];
        for ((k, l), v) in expected {
            assert!((br.denominator.coeff(k, l) - v).norm() < 1e-13);
        }
    }

    #[test]
    fn birational_matches_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let r = random_realization([(1, 1), (2, 0)], 4);
        let br = to_birational(&r);
        for _ in 0..128 {
            let z = [point_in_disk(0.95, &mut rng), point_in_disk(0.95, &mut rng)];
            if let Ok(v) = eval_bidisk(&r, z) {
                assert!((br.eval(z) - v).norm() < 1e-8 * (1.0 + v.norm()));
            }
        }
    }

    #[test]
    fn numerator_is_reflected_denominator() {
        for seed in 0..10 {
            let r = random_realization([(1, 1), (1, 1)], 20 + seed);
            let br = to_birational(&r);
            let (d1, d2) = (r.kappa[0], r.kappa[1]);
            let cst = bi_reflection_constant(&br.numerator, &br.denominator, d1, d2).unwrap();
            let expected = br.denominator.reflect(d1, d2).unwrap().scale(cst);
            assert!((expected.coeffs() - br.numerator.coeffs()).norm() < 1e-10 * br.numerator.norm1());
        }
    }

    #[test]
    fn gamma_form_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = random_realization([(1, 2), (1, 1)], 6);
        let one = c(1.0, 0.0);
        for _ in 0..20 {
            let l = [point_in_disk(0.9, &mut rng), point_in_disk(0.9, &mut rng)];
            let m = [point_in_disk(0.9, &mut rng), point_in_disk(0.9, &mut rng)];
            let g = gamma_forms(&r, l, m).unwrap();
            let lhs = one - eval_bidisk(&r, l).unwrap() * eval_bidisk(&r, m).unwrap().conj();
            let rhs = (one - l[0] * m[0].conj()) * g[0] + (one - l[1] * m[1].conj()) * g[1];
            assert!((lhs - rhs).norm() < 1e-8 * (1.0 + lhs.norm()));
        }
        let g = gamma_forms(&r, [c(0.0, 0.0); 2], [c(0.0, 0.0); 2]).unwrap();
        assert!((g[0] + g[1] - (one - r.a * r.a.conj())).norm() < 1e-12);
    }

    #[test]
    fn balanced_restriction_evaluates_on_the_disk() {
        let r = random_realization([(1, 1), (1, 0)], 8);
        let disk = BalancedDisk::new(MoebiusMap::swap(c(0.3, 0.2)).unwrap(), C64::from_polar(1.0, 1.0)).unwrap();
        let psi = restrict_balanced(&r, &disk, 1e-6).unwrap();
        for z in [c(0.1, 0.1), c(-0.5, 0.2)] {
            let v = eval_bidisk(&r, disk.point(z)).unwrap();
            assert!((psi.eval(z) - v).norm() < 1e-8 * (1.0 + v.norm()));
        }
    }
}
