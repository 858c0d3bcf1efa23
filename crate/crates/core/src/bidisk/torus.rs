//! Sampling certificates on the torus `𝕋² = {|λ¹| = |λ²| = 1}`.
//!
//! A grid cell is the sample `(e^{2πi s/n}, e^{2πi t/n})`. "Near zero" for a
//! polynomial means a modulus at most `NEAR_ZERO` times its coefficient
//! 1-norm, which bounds the polynomial on the closed bidisk.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bipoly::{BiPoly, BiRational};
use crate::C64;

/// Relative modulus below which a sampled value counts as zero.
pub const NEAR_ZERO: f64 = 1e-6;
/// Relative modulus above which a numerator counts as bounded away from zero.
pub const AWAY_FROM_ZERO: f64 = 1e-4;
/// Default samples per axis.
pub const DEFAULT_TORUS_GRID: usize = 256;

pub fn torus_point(s: usize, t: usize, grid: usize) -> [C64; 2] {
    let step = std::f64::consts::TAU / grid as f64;
    [C64::from_polar(1.0, step * s as f64), C64::from_polar(1.0, step * t as f64)]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToralReport {
    pub grid: usize,
    /// Cells where the denominator is near zero.
    pub near_zero_denominator: usize,
    /// Cells where both numerator and denominator are near zero.
    pub common_zero_cells: Vec<(usize, usize)>,
    /// Cells where the denominator is near zero but the numerator is not.
    pub violations: Vec<(usize, usize)>,
    /// Connected clusters of common-zero cells on the periodic grid, one per
    /// candidate point of `Z_p ∩ Z_q ∩ 𝕋²`.
    pub singular_candidates: usize,
}

impl ToralReport {
    /// Fraction of near-zero-denominator cells that are violations.
    pub fn violation_fraction(&self) -> f64 {
        if self.near_zero_denominator == 0 {
            0.0
        } else {
            self.violations.len() as f64 / self.near_zero_denominator as f64
        }
    }
}

fn sample_moduli(p: &BiPoly, grid: usize) -> Vec<f64> {
    (0..grid * grid)
        .into_par_iter()
        .map(|k| p.eval(torus_point(k / grid, k % grid, grid)).norm())
        .collect()
}

/// Scans the torus for zeros of the denominator and checks that the
/// numerator vanishes there too.
pub fn toral_check(br: &BiRational, grid: usize) -> ToralReport {
    let grid = grid.max(1);
    let (pn, qn) = (br.numerator.norm1(), br.denominator.norm1());
    let pv = sample_moduli(&br.numerator, grid);
    let qv = sample_moduli(&br.denominator, grid);
    let mut near = 0;
    let mut common = Vec::new();
    let mut violations = Vec::new();
    for k in 0..grid * grid {
        if qv[k] > NEAR_ZERO * qn {
            continue;
        }
        near += 1;
        let cell = (k / grid, k % grid);
        if pv[k] <= NEAR_ZERO * pn {
            common.push(cell);
        } else if pv[k] > AWAY_FROM_ZERO * pn {
            violations.push(cell);
        }
    }
    let singular_candidates = count_clusters(&common, grid);
    ToralReport {
        grid,
        near_zero_denominator: near,
        common_zero_cells: common,
        violations,
        singular_candidates,
    }
}

/// Number of 8-connected components of `cells` on the `grid × grid` torus.
fn count_clusters(cells: &[(usize, usize)], grid: usize) -> usize {
    let set: std::collections::HashSet<(usize, usize)> = cells.iter().copied().collect();
    let mut seen = std::collections::HashSet::new();
    let mut clusters = 0;
    for &start in cells {
        if !seen.insert(start) {
            continue;
        }
        clusters += 1;
        let mut stack = vec![start];
        while let Some((s, t)) = stack.pop() {
            for ds in [grid - 1, 0, 1] {
                for dt in [grid - 1, 0, 1] {
                    let nb = ((s + ds) % grid, (t + dt) % grid);
                    if set.contains(&nb) && seen.insert(nb) {
                        stack.push(nb);
                    }
                }
            }
        }
    }
    clusters
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TorusUnimodularReport {
    pub grid: usize,
    /// Largest `||φ| − 1|` over the samples that were not excluded.
    pub max_defect: f64,
    /// Fraction of evaluated samples with defect at most `tol`.
    pub fraction_within: f64,
    /// Samples skipped because the denominator is near zero.
    pub excluded: usize,
}

/// `||φ| − 1|` on the torus grid, skipping cells where the denominator is near zero.
pub fn torus_unimodularity(br: &BiRational, grid: usize, tol: f64) -> TorusUnimodularReport {
    let grid = grid.max(1);
    let qn = br.denominator.norm1();
    let defects: Vec<Option<f64>> = (0..grid * grid)
        .into_par_iter()
        .map(|k| {
            let z = torus_point(k / grid, k % grid, grid);
            let q = br.denominator.eval(z);
            (q.norm() > NEAR_ZERO * qn).then(|| ((br.numerator.eval(z) / q).norm() - 1.0).abs())
        })
        .collect();
    let evaluated: Vec<f64> = defects.iter().flatten().copied().collect();
    let within = evaluated.iter().filter(|&&d| d <= tol).count();
    TorusUnimodularReport {
        grid,
        max_defect: evaluated.iter().copied().fold(0.0, f64::max),
        fraction_within: if evaluated.is_empty() { 1.0 } else { within as f64 / evaluated.len() as f64 },
        excluded: defects.len() - evaluated.len(),
    }
}
