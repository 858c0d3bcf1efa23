//! Seeded generators for test problems, J-unitary matrices and Blaschke pairs.

use rand::Rng;

use crate::bidisk::{gamma_forms, AglerPair, BidiskProblem, BidiskRealization};
use crate::error::Result;
use crate::krein::{PartialJIsometry, SignatureMatrix};
use crate::linalg::{det, identity, BlaschkeProduct, CMatrix};
use crate::pick::DiskProblem;
use crate::C64;

/// Default seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 0x5e_ed7a_6a91;

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    // Box–Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    let r = (-u1.ln()).sqrt();
    C64::from_polar(r, 2.0 * std::f64::consts::PI * u2)
}

pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Uniform point in the disk of the given radius.
pub fn point_in_disk<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> C64 {
    let r = radius * rng.gen_range(0.0..1.0_f64).sqrt();
    C64::from_polar(r, rng.gen_range(0.0..2.0 * std::f64::consts::PI))
}

pub fn unimodular<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..2.0 * std::f64::consts::PI))
}

/// `count` points in the disk of radius `radius`, pairwise at least
/// `separation` apart (rejection sampling).
pub fn separated_points<R: Rng + ?Sized>(
    count: usize,
    radius: f64,
    separation: f64,
    rng: &mut R,
) -> Vec<C64> {
    let mut pts: Vec<C64> = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while pts.len() < count {
        attempts += 1;
        let z = point_in_disk(radius, rng);
        let sep = if attempts > 10_000 { separation * 0.1 } else { separation };
        if pts.iter().all(|p| (p - z).norm() >= sep) {
            pts.push(z);
        }
    }
    pts
}

/// Random J-unitary matrix from the Cayley transform of `X = J S` with `S`
/// skew-Hermitian of spectral scale `scale`.
pub fn random_j_unitary<R: Rng + ?Sized>(j: &SignatureMatrix, scale: f64, rng: &mut R) -> CMatrix {
    let n = j.dim();
    let a = random_matrix(n, n, rng);
    let skew = (&a - a.adjoint()).scale(0.5 * scale / (n as f64).sqrt().max(1.0));
    let x = j.apply(&skew);
    let eye = identity(n);
    let lhs = &eye - &x;
    let rhs = &eye + &x;
    lhs.lu().solve(&rhs).expect("I − X is invertible for J-skew X")
}

/// Random Blaschke product with zeros in the disk of radius `radius`.
pub fn random_blaschke<R: Rng + ?Sized>(degree: usize, radius: f64, rng: &mut R) -> BlaschkeProduct {
    let zeros = (0..degree).map(|_| point_in_disk(radius, rng)).collect();
    BlaschkeProduct::new(zeros, unimodular(rng)).expect("zeros inside the disk")
}

/// Nodes of radius at most 0.8, pairwise at least 0.1 apart, and values of
/// modulus uniform in `[0.2, 3]` with uniform phase.
pub fn random_disk_problem<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DiskProblem> {
    let nodes = separated_points(n, 0.8, 0.1, rng);
    let values = (0..n)
        .map(|_| C64::from_polar(rng.gen_range(0.2..=3.0), rng.gen_range(0.0..2.0 * std::f64::consts::PI)))
        .collect();
    DiskProblem::new(nodes, values)
}

/// Samples `f / g` at `n` separated nodes kept at least 0.1 away from the
/// zeros of `g`.
pub fn sampled_problem<R: Rng + ?Sized>(
    f: &BlaschkeProduct,
    g: &BlaschkeProduct,
    n: usize,
    rng: &mut R,
) -> Result<DiskProblem> {
    let mut nodes: Vec<C64> = Vec::with_capacity(n);
    while nodes.len() < n {
        let z = point_in_disk(0.8, rng);
        let clear = g.zeros.iter().all(|b| (b - z).norm() >= 0.1);
        if clear && nodes.iter().all(|p| (p - z).norm() >= 0.1) {
            nodes.push(z);
        }
    }
    let values = nodes.iter().map(|&z| f.eval(z) / g.eval(z)).collect();
    DiskProblem::new(nodes, values)
}

/// `count` nodes of radius at most 0.85, pairwise at least 0.3 apart and at
/// least 0.1 away from the zeros of both factors.
pub fn lemma_nodes<R: Rng + ?Sized>(
    f: &BlaschkeProduct,
    g: &BlaschkeProduct,
    count: usize,
    rng: &mut R,
) -> Vec<C64> {
    loop {
        let pts = separated_points(count, 0.85, 0.3, rng);
        let clear = pts
            .iter()
            .all(|z| f.zeros.iter().chain(&g.zeros).all(|b| (b - z).norm() > 0.1));
        if clear {
            return pts;
        }
    }
}

/// Blaschke products of degrees `m` and `n` whose zeros are at least
/// `0.1` apart from each other's.
pub fn coprime_blaschke_pair<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    radius: f64,
    rng: &mut R,
) -> (BlaschkeProduct, BlaschkeProduct) {
    loop {
        let f = random_blaschke(m, radius, rng);
        let g = random_blaschke(n, radius, rng);
        if f.zeros.iter().all(|a| g.zeros.iter().all(|b| (a - b).norm() >= 0.1)) {
            return (f, g);
        }
    }
}

/// Random partial J-isometry `d_i ↦ V d_i` for a random J-unitary `V` and
/// `m <= dim J` random domain columns. With `isotropic` set, the first
/// column is made J-isotropic (when J is indefinite).
pub fn random_partial_j_isometry<R: Rng + ?Sized>(
    j: &SignatureMatrix,
    m: usize,
    isotropic: bool,
    rng: &mut R,
) -> Result<PartialJIsometry> {
    let n = j.dim();
    let v = random_j_unitary(j, 1.0, rng);
    let mut d = random_matrix(n, m, rng);
    let pos = j.signs().iter().position(|&s| s == 1);
    let neg = j.signs().iter().position(|&s| s == -1);
    if let (true, Some(p), Some(q), true) = (isotropic, pos, neg, m > 0) {
        let mut col = CMatrix::zeros(n, 1);
        col[(p, 0)] = C64::new(1.0, 0.0);
        col[(q, 0)] = unimodular(rng);
        d.set_column(0, &col.column(0));
    }
    let r = &v * &d;
    PartialJIsometry::new(j.clone(), d, r)
}

/// Lifts one-variable data to the bidisk with random second coordinates in
/// the disk of radius 0.8.
pub fn embed_disk_problem<R: Rng + ?Sized>(problem: &DiskProblem, rng: &mut R) -> Result<BidiskProblem> {
    let second: Vec<C64> = (0..problem.len()).map(|_| point_in_disk(0.8, rng)).collect();
    BidiskProblem::embed(problem.nodes(), &second, problem.values())
}

/// A genuinely two-variable instance: a random J-unitary colligation with
/// `blocks[r] = (positive, negative)` directions for variable `r`, `n` nodes
/// in the bidisk of radius 0.8 (first coordinates at least 0.1 apart, every
/// resolvent determinant at least 0.05 in modulus), values `φ(λ_i)` and the
/// pair `Γ^r_ij = Γ^r(λ_i, λ_j)` read off the realization.
pub fn random_bidisk_instance<R: Rng + ?Sized>(
    blocks: [(usize, usize); 2],
    n: usize,
    rng: &mut R,
) -> Result<(BidiskProblem, AglerPair, BidiskRealization)> {
    let k = blocks[0].0 + blocks[0].1 + blocks[1].0 + blocks[1].1;
    let template = BidiskRealization::from_colligation(&identity(k + 1), blocks)?;
    let v = random_j_unitary(&template.j1.with_leading_positive(), 1.0, rng);
    let r = BidiskRealization::from_colligation(&v, blocks)?;
    let mut nodes: Vec<[C64; 2]> = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while nodes.len() < n {
        attempts += 1;
        let z = [point_in_disk(0.8, rng), point_in_disk(0.8, rng)];
        let sep = if attempts > 10_000 { 0.01 } else { 0.1 };
        if nodes.iter().all(|p| (p[0] - z[0]).norm() >= sep) && det(&r.resolvent_matrix(z)).norm() >= 0.05 {
            nodes.push(z);
        }
    }
    let values = nodes
        .iter()
        .map(|&z| crate::bidisk::eval_bidisk(&r, z))
        .collect::<Result<Vec<_>>>()?;
    let mut gamma = [CMatrix::zeros(n, n), CMatrix::zeros(n, n)];
    for i in 0..n {
        for j in 0..n {
            let g = gamma_forms(&r, nodes[i], nodes[j])?;
            gamma[0][(i, j)] = g[0];
            gamma[1][(i, j)] = g[1];
        }
    }
    let [g1, g2] = gamma;
    Ok((BidiskProblem::new(nodes, values)?, AglerPair::new(g1, g2)?, r))
}
