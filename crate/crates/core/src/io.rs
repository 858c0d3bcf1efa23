//! JSON problem and result files.
//!
//! Complex numbers are two-element arrays `[re, im]`. A problem file carries
//! `schema_version` (currently 1), `kind` (`"disk"` or `"bidisk"`), `nodes`,
//! `values`, and optionally `tolerances` and `seed`. Bidisk files may add the
//! pair as `gamma1` and `gamma2`, each a list of rows. Without them the
//! one-variable embedding (`Γ¹` the Pick matrix in the first coordinate,
//! `Γ² = 0`) is used. See `docs/file-format.md` for the full schema.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bidisk::{
    construct_bidisk, validate_pair, AglerPair, BiRational, BidiskCertificate, BidiskProblem, BidiskSolution,
    PairBounds, DECOMPOSITION_TOL,
};
use crate::disk::{construct, SolverOptions, TakagiSolution};
use crate::error::{Result, TakagiError};
use crate::linalg::{BlaschkeProduct, CMatrix, CPoly};
use crate::pick::DiskProblem;
use crate::rational::RationalFunction;
use crate::verify::{certify_disk, DiskCertificate};
use crate::C64;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Disk,
    Bidisk,
}

/// Optional tolerance overrides; absent fields keep their defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpolation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unimodular: Option<f64>,
    /// Relative eigenvalue threshold for inertia counts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inertia: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_samples: Option<usize>,
    /// Relative J-Gram mismatch allowed in the isometry extension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radical: Option<f64>,
    /// Root-matching radius for cancelling common factors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gcd: Option<f64>,
}

impl ToleranceOverrides {
    /// Fields set in `other` win.
    pub fn merged(self, other: &Self) -> Self {
        Self {
            interpolation: other.interpolation.or(self.interpolation),
            unimodular: other.unimodular.or(self.unimodular),
            inertia: other.inertia.or(self.inertia),
            boundary_samples: other.boundary_samples.or(self.boundary_samples),
            gram: other.gram.or(self.gram),
            radical: other.radical.or(self.radical),
            gcd: other.gcd.or(self.gcd),
        }
    }

    pub fn apply(&self, opts: &mut SolverOptions) {
        if let Some(v) = self.interpolation {
            opts.tolerances.interpolation = v;
        }
        if let Some(v) = self.unimodular {
            opts.tolerances.unimodular = v;
        }
        if let Some(v) = self.inertia {
            opts.tolerances.inertia = v;
            opts.inertia_tol = v;
        }
        if let Some(v) = self.boundary_samples {
            opts.tolerances.boundary_samples = v;
        }
        if let Some(v) = self.gram {
            opts.gram_tol = v;
        }
        if let Some(v) = self.radical {
            opts.radical_tol = v;
        }
        if let Some(v) = self.gcd {
            opts.gcd_tol = v;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskProblemFile {
    pub schema_version: u32,
    pub kind: ProblemKind,
    pub nodes: Vec<C64>,
    pub values: Vec<C64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BidiskProblemFile {
    pub schema_version: u32,
    pub kind: ProblemKind,
    pub nodes: Vec<[C64; 2]>,
    pub values: Vec<C64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<Vec<Vec<C64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma2: Option<Vec<Vec<C64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemFile {
    Disk(DiskProblemFile),
    Bidisk(BidiskProblemFile),
}

impl ProblemFile {
    pub fn tolerances(&self) -> Option<ToleranceOverrides> {
        match self {
            ProblemFile::Disk(f) => f.tolerances,
            ProblemFile::Bidisk(f) => f.tolerances,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            ProblemFile::Disk(f) => f.seed,
            ProblemFile::Bidisk(f) => f.seed,
        }
    }
}

impl DiskProblemFile {
    pub fn from_problem(problem: &DiskProblem) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind: ProblemKind::Disk,
            nodes: problem.nodes().to_vec(),
            values: problem.values().to_vec(),
            tolerances: None,
            seed: None,
        }
    }

    pub fn problem(&self) -> Result<DiskProblem> {
        DiskProblem::new(self.nodes.clone(), self.values.clone())
    }
}

impl BidiskProblemFile {
    pub fn problem(&self) -> Result<BidiskProblem> {
        BidiskProblem::new(self.nodes.clone(), self.values.clone())
    }

    /// The supplied pair, or the one-variable embedding when neither matrix is given.
    pub fn pair(&self, problem: &BidiskProblem) -> Result<AglerPair> {
        let n = problem.len();
        match (&self.gamma1, &self.gamma2) {
            (None, None) => Ok(AglerPair::one_variable(problem)),
            (g1, g2) => {
                let read = |g: &Option<Vec<Vec<C64>>>, name: &str| match g {
                    Some(rows) => matrix_from_rows(rows, n, name),
                    None => Ok(CMatrix::zeros(n, n)),
                };
                AglerPair::new(read(g1, "gamma1")?, read(g2, "gamma2")?)
            }
        }
    }
}

pub fn matrix_from_rows(rows: &[Vec<C64>], n: usize, name: &str) -> Result<CMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(TakagiError::InvalidInput(format!(
            "{name} must be a {n} x {n} grid of [re, im] entries"
        )));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<C64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Deserializes `text`, reporting the failing field path with line and column.
fn parse_with_path<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        TakagiError::InvalidInput(if path == "." {
            inner.to_string()
        } else {
            format!("field `{path}`: {inner}")
        })
    })
}

#[derive(Deserialize)]
struct Header {
    schema_version: Option<u32>,
    kind: Option<ProblemKind>,
}

fn check_header(text: &str, what: &str) -> Result<ProblemKind> {
    let header: Header = parse_with_path(text)?;
    match header.schema_version {
        Some(SCHEMA_VERSION) => {}
        Some(v) => {
            return Err(TakagiError::InvalidInput(format!(
                "unsupported schema_version {v} (expected {SCHEMA_VERSION})"
            )))
        }
        None => return Err(TakagiError::InvalidInput(format!("{what} is missing `schema_version`"))),
    }
    header
        .kind
        .ok_or_else(|| TakagiError::InvalidInput(format!("{what} is missing `kind` (\"disk\" or \"bidisk\")")))
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    Ok(match check_header(text, "problem file")? {
        ProblemKind::Disk => ProblemFile::Disk(parse_with_path(text)?),
        ProblemKind::Bidisk => ProblemFile::Bidisk(parse_with_path(text)?),
    })
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| TakagiError::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

pub fn read_problem(path: &Path) -> Result<ProblemFile> {
    parse_problem(&read_text(path)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskResult {
    pub schema_version: u32,
    pub kind: ProblemKind,
    pub problem: DiskProblemFile,
    pub options: SolverOptions,
    /// `φ = numerator / denominator`, reduced.
    pub numerator: CPoly,
    pub denominator: CPoly,
    /// Zeros of `φ` in the disk, with the unimodular constant.
    pub f: BlaschkeProduct,
    /// Poles of `φ` in the disk.
    pub g: BlaschkeProduct,
    pub declared_degree: usize,
    pub weights: Vec<f64>,
    pub margin: f64,
    pub certificate: DiskCertificate,
    pub passed: bool,
}

/// The pair as used by the solver, including regularizers.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairRecord {
    pub gamma1: Vec<Vec<C64>>,
    pub gamma2: Vec<Vec<C64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y1: Option<Vec<Vec<C64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y2: Option<Vec<Vec<C64>>>,
}

impl PairRecord {
    pub fn from_pair(pair: &AglerPair) -> Self {
        Self {
            gamma1: matrix_to_rows(&pair.gamma[0]),
            gamma2: matrix_to_rows(&pair.gamma[1]),
            y1: pair.regularizers[0].as_ref().map(matrix_to_rows),
            y2: pair.regularizers[1].as_ref().map(matrix_to_rows),
        }
    }

    pub fn pair(&self, n: usize) -> Result<AglerPair> {
        let opt = |m: &Option<Vec<Vec<C64>>>, name: &str| m.as_ref().map(|r| matrix_from_rows(r, n, name)).transpose();
        AglerPair::new(matrix_from_rows(&self.gamma1, n, "gamma1")?, matrix_from_rows(&self.gamma2, n, "gamma2")?)?
            .with_regularizers(opt(&self.y1, "y1")?, opt(&self.y2, "y2")?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BidiskResult {
    pub schema_version: u32,
    pub kind: ProblemKind,
    pub problem: BidiskProblemFile,
    pub options: SolverOptions,
    pub pair: PairRecord,
    /// The strict interpolant `q̃ / q`.
    pub function: BiRational,
    /// The function of the unshifted realization.
    pub realized: BiRational,
    pub weights: Vec<f64>,
    pub margin: f64,
    pub certificate: BidiskCertificate,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub enum ResultFile {
    Disk(Box<DiskResult>),
    Bidisk(Box<BidiskResult>),
}

impl ResultFile {
    pub fn passed(&self) -> bool {
        match self {
            ResultFile::Disk(r) => r.passed,
            ResultFile::Bidisk(r) => r.passed,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let text = match self {
            ResultFile::Disk(r) => serde_json::to_string_pretty(r),
            ResultFile::Bidisk(r) => serde_json::to_string_pretty(r),
        };
        text.map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| TakagiError::InvalidInput(format!("cannot serialize result: {e}")))
    }
}

pub fn parse_result(text: &str) -> Result<ResultFile> {
    Ok(match check_header(text, "result file")? {
        ProblemKind::Disk => ResultFile::Disk(Box::new(parse_with_path(text)?)),
        ProblemKind::Bidisk => ResultFile::Bidisk(Box::new(parse_with_path(text)?)),
    })
}

pub fn read_result(path: &Path) -> Result<ResultFile> {
    parse_result(&read_text(path)?)
}

pub fn disk_result(file: &DiskProblemFile, opts: &SolverOptions, sol: &TakagiSolution) -> DiskResult {
    DiskResult {
        schema_version: SCHEMA_VERSION,
        kind: ProblemKind::Disk,
        problem: file.clone(),
        options: *opts,
        numerator: sol.function().numerator.clone(),
        denominator: sol.function().denominator.clone(),
        f: sol.f.clone(),
        g: sol.g.clone(),
        declared_degree: sol.declared_degree,
        weights: sol.weights.clone(),
        margin: sol.margin,
        certificate: sol.certificate.clone(),
        passed: sol.certificate.passed(),
    }
}

pub fn bidisk_result(file: &BidiskProblemFile, opts: &SolverOptions, sol: &BidiskSolution) -> BidiskResult {
    BidiskResult {
        schema_version: SCHEMA_VERSION,
        kind: ProblemKind::Bidisk,
        problem: file.clone(),
        options: *opts,
        pair: PairRecord::from_pair(&sol.pair),
        function: sol.function.clone(),
        realized: crate::bidisk::to_birational(&sol.base),
        weights: sol.weights.clone(),
        margin: sol.margin,
        certificate: sol.certificate.clone(),
        passed: sol.certificate.passed(),
    }
}

/// Solves a problem file. The result is returned even when its certificate fails.
pub fn solve_file(file: &ProblemFile, opts: &SolverOptions) -> Result<ResultFile> {
    match file {
        ProblemFile::Disk(f) => {
            let sol = construct(&f.problem()?, opts)?;
            Ok(ResultFile::Disk(Box::new(disk_result(f, opts, &sol))))
        }
        ProblemFile::Bidisk(f) => {
            let problem = f.problem()?;
            let pair = f.pair(&problem)?;
            let sol = construct_bidisk(&problem, &pair, opts)?;
            Ok(ResultFile::Bidisk(Box::new(bidisk_result(f, opts, &sol))))
        }
    }
}

/// Outcome of re-certifying a stored result.
#[derive(Debug, Clone)]
pub enum Recertified {
    Disk(DiskCertificate),
    Bidisk(BidiskCertificate),
}

impl Recertified {
    pub fn passed(&self) -> bool {
        match self {
            Recertified::Disk(c) => c.passed(),
            Recertified::Bidisk(c) => c.passed(),
        }
    }

    /// Whether the recomputed verdicts equal the stored ones.
    pub fn matches(&self, stored: &ResultFile) -> bool {
        match (self, stored) {
            (Recertified::Disk(c), ResultFile::Disk(r)) => c.verdicts == r.certificate.verdicts,
            (Recertified::Bidisk(c), ResultFile::Bidisk(r)) => c.verdicts == r.certificate.verdicts,
            _ => false,
        }
    }
}

/// Recomputes the certificate of a stored result from its problem and function.
pub fn recertify(result: &ResultFile) -> Result<Recertified> {
    match result {
        ResultFile::Disk(r) => {
            let problem = r.problem.problem()?;
            let phi = RationalFunction::new(r.numerator.clone(), r.denominator.clone());
            Ok(Recertified::Disk(certify_disk(&problem, &phi, r.options.tolerances)?))
        }
        ResultFile::Bidisk(r) => {
            let problem = r.problem.problem()?;
            let pair = r.pair.pair(problem.len())?;
            let report = validate_pair(&problem, &pair, DECOMPOSITION_TOL, r.options.inertia_tol)?;
            Ok(Recertified::Bidisk(crate::bidisk::certify_bidisk(
                &problem,
                &r.function,
                &r.realized,
                PairBounds::from_report(&report),
                &r.options,
            )?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_kind_is_reported() {
        let err = parse_problem(r#"{"schema_version": 1, "nodes": [], "values": []}"#).unwrap_err();
        assert!(err.to_string().contains("kind"));
    }

    #[test]
    fn bad_field_has_path() {
        let text = "{\n \"schema_version\": 1,\n \"kind\": \"disk\",\n \"nodes\": [[0, 0], [0.5]],\n \"values\": [[1, 0], [0, 0]]\n}";
        let msg = parse_problem(text).unwrap_err().to_string();
        assert!(msg.contains("nodes[1]"), "{msg}");
        assert!(msg.contains("line 4"), "{msg}");
    }

    #[test]
    fn unknown_field_rejected() {
        let text = r#"{"schema_version": 1, "kind": "disk", "nodes": [[0,0]], "values": [[0,0]], "extra": 1}"#;
        assert!(parse_problem(text).is_err());
    }

    #[test]
    fn overrides_apply() {
        let mut opts = SolverOptions::default();
        let o = ToleranceOverrides {
            interpolation: Some(1e-5),
            inertia: Some(1e-8),
            ..Default::default()
        };
        o.apply(&mut opts);
        assert_eq!(opts.tolerances.interpolation, 1e-5);
        assert_eq!(opts.inertia_tol, 1e-8);
        assert_eq!(opts.tolerances.unimodular, 1e-7);
    }

    #[test]
    fn disk_result_round_trip() {
        let text = r#"{"schema_version": 1, "kind": "disk", "nodes": [[0,0],[0.5,0]], "values": [[0,0],[0.8,0]]}"#;
        let file = parse_problem(text).unwrap();
        let opts = SolverOptions::default();
        let result = solve_file(&file, &opts).unwrap();
        let json = result.to_json().unwrap();
        let back = parse_result(&json).unwrap();
        assert_eq!(back.to_json().unwrap(), json);
        let re = recertify(&back).unwrap();
        assert!(re.passed());
        assert!(re.matches(&back));
    }

    #[test]
    fn bidisk_pair_from_rows() {
        let text = r#"{"schema_version": 1, "kind": "bidisk",
            "nodes": [[[0,0],[0,0]]], "values": [[2,0]],
            "gamma1": [[[-3,0]]], "gamma2": [[[0,0]]]}"#;
        let ProblemFile::Bidisk(f) = parse_problem(text).unwrap() else {
            panic!("expected a bidisk file")
        };
        let p = f.problem().unwrap();
        let pair = f.pair(&p).unwrap();
        assert_eq!(pair.gamma[0][(0, 0)], C64::new(-3.0, 0.0));
    }
}
