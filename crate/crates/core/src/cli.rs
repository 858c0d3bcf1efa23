//! Command-line front end: `inertia`, `solve`, `verify`, `boundary-samples`
//! and `lemma-check`.
//!
//! Exit status is 0 when everything passes, 1 for input errors, 2 for a
//! failed certificate and 3 for numerical breakdown.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bidisk::torus::{torus_point, NEAR_ZERO};
use crate::bidisk::{validate_pair, BiRational, DECOMPOSITION_TOL};
use crate::disk::SolverOptions;
use crate::error::{Result, TakagiError};
use crate::io::{self, ProblemFile, Recertified, ResultFile, ToleranceOverrides};
use crate::linalg::{hermitian_inertia, CMatrix, CPoly, Inertia};
use crate::pick::pick_matrix;
use crate::random::{coprime_blaschke_pair, lemma_nodes, DEFAULT_SEED};
use crate::rational::RationalFunction;
use crate::verify::lemma_inertia_oracle;
use crate::C64;

/// Environment variable supplying the default seed.
pub const SEED_ENV: &str = "TAKAGI_SEED";

#[derive(Debug, Parser)]
#[command(name = "takagi", version, about = "Unimodular rational interpolation on the disk and bidisk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Pick matrix of a problem and its inertia (π, ν, ζ).
    Inertia {
        file: PathBuf,
        #[arg(long)]
        inertia_tol: Option<f64>,
    },
    /// Solve a problem file and certify the result.
    Solve {
        file: PathBuf,
        /// Where to write the JSON result.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Boundary samples used by the unimodularity certificate.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Re-certify a result file.
    Verify { result: PathBuf },
    /// Tabulate |φ| on the circle (or torus) as comma-separated rows.
    BoundarySamples {
        result: PathBuf,
        /// Samples per axis.
        #[arg(long, default_value_t = 512)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the inertia of the Blaschke pair matrix on random instances.
    LemmaCheck {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Args, Default)]
pub struct CommonFlags {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub interpolation_tol: Option<f64>,
    #[arg(long)]
    pub unimodular_tol: Option<f64>,
    #[arg(long)]
    pub inertia_tol: Option<f64>,
    #[arg(long)]
    pub gram_tol: Option<f64>,
    #[arg(long)]
    pub radical_tol: Option<f64>,
    #[arg(long)]
    pub gcd_tol: Option<f64>,
}

impl CommonFlags {
    fn overrides(&self) -> ToleranceOverrides {
        ToleranceOverrides {
            interpolation: self.interpolation_tol,
            unimodular: self.unimodular_tol,
            inertia: self.inertia_tol,
            boundary_samples: None,
            gram: self.gram_tol,
            radical: self.radical_tol,
            gcd: self.gcd_tol,
        }
    }
}

/// `flag`, then the file, then the environment, then the built-in default.
fn resolve_seed(flag: Option<u64>, file: Option<u64>) -> Result<u64> {
    if let Some(s) = flag.or(file) {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| TakagiError::InvalidInput(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Parses `args` and runs the command, writing reports to `out` and
/// diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io_error(e: std::io::Error) -> TakagiError {
    TakagiError::InvalidInput(format!("write failed: {e}"))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| TakagiError::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Inertia { file, inertia_tol } => cmd_inertia(file, *inertia_tol, out),
        Command::Solve {
            file,
            out: path,
            samples,
            common,
        } => cmd_solve(file, path.as_deref(), *samples, common, out),
        Command::Verify { result } => cmd_verify(result, out),
        Command::BoundarySamples { result, n, out: path } => cmd_boundary_samples(result, *n, path.as_deref(), out),
        Command::LemmaCheck { m, n, trials, seed } => cmd_lemma_check(*m, *n, *trials, *seed, out),
    }
}

fn write_matrix(out: &mut dyn Write, m: &CMatrix) -> std::io::Result<()> {
    for i in 0..m.nrows() {
        let row: Vec<String> = m.row(i).iter().map(|c| format!("{:+.6e}{:+.6e}i", c.re, c.im)).collect();
        writeln!(out, "  {}", row.join("  "))?;
    }
    Ok(())
}

fn write_eigen(out: &mut dyn Write, name: &str, m: &CMatrix, tol: f64) -> Result<Inertia> {
    let eig = hermitian_inertia(m, tol)?;
    (|| {
        writeln!(out, "{name}:")?;
        write_matrix(out, m)?;
        writeln!(out, "inertia (π, ν, ζ) of {name} = {}", eig.inertia)?;
        let ev: Vec<String> = eig.eigenvalues.iter().map(|v| format!("{v:.6e}")).collect();
        writeln!(out, "eigenvalues: {}", ev.join(", "))
    })()
    .map_err(io_error)?;
    Ok(eig.inertia)
}

pub fn cmd_inertia(file: &Path, inertia_tol: Option<f64>, out: &mut dyn Write) -> Result<i32> {
    let pf = io::read_problem(file)?;
    let mut opts = SolverOptions::default();
    pf.tolerances().unwrap_or_default().apply(&mut opts);
    if let Some(t) = inertia_tol {
        opts.inertia_tol = t;
    }
    match &pf {
        ProblemFile::Disk(f) => {
            let problem = f.problem()?;
            write_eigen(out, "Γ", &pick_matrix(&problem), opts.inertia_tol)?;
        }
        ProblemFile::Bidisk(f) => {
            let problem = f.problem()?;
            let pair = f.pair(&problem)?;
            let report = validate_pair(&problem, &pair, DECOMPOSITION_TOL, opts.inertia_tol)?;
            write_eigen(out, "Γ¹", &pair.gamma[0], opts.inertia_tol)?;
            write_eigen(out, "Γ²", &pair.gamma[1], opts.inertia_tol)?;
            writeln!(
                out,
                "decomposition residual {:.3e}; rank conditions: range {} / domain {} of {}",
                report.residual,
                report.range_rank,
                report.domain_rank,
                problem.len()
            )
            .map_err(io_error)?;
        }
    }
    Ok(0)
}

pub fn cmd_solve(
    file: &Path,
    path: Option<&Path>,
    samples: Option<usize>,
    flags: &CommonFlags,
    out: &mut dyn Write,
) -> Result<i32> {
    let pf = io::read_problem(file)?;
    let mut opts = SolverOptions {
        seed: resolve_seed(flags.seed, pf.seed())?,
        ..SolverOptions::default()
    };
    let mut overrides = pf.tolerances().unwrap_or_default().merged(&flags.overrides());
    if samples.is_some() {
        overrides.boundary_samples = samples;
    }
    overrides.apply(&mut opts);
    let result = io::solve_file(&pf, &opts)?;
    write_result_report(&result, out).map_err(io_error)?;
    if let Some(p) = path {
        write_file(p, &result.to_json()?)?;
    }
    Ok(if result.passed() { 0 } else { 2 })
}

fn poly_text(p: &CPoly) -> String {
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .map(|c| format!("({:.6e}{:+.6e}i)", c.re, c.im))
        .collect();
    format!("[{}]", terms.join(", "))
}

fn write_result_report(result: &ResultFile, out: &mut dyn Write) -> std::io::Result<()> {
    match result {
        ResultFile::Disk(r) => {
            let c = &r.certificate;
            writeln!(out, "kind: disk, {} nodes", r.problem.nodes.len())?;
            writeln!(out, "inertia (π, ν, ζ) = {}", c.inertia)?;
            writeln!(out, "numerator: {}", poly_text(&r.numerator))?;
            writeln!(out, "denominator: {}", poly_text(&r.denominator))?;
            writeln!(out, "zeros in disk (f): {}, poles in disk (g): {}", r.f.degree(), r.g.degree())?;
            let status: Vec<String> = c.status.iter().map(|s| s.to_string()).collect();
            writeln!(out, "node status: {}", status.join(" "))?;
            writeln!(out, "max interpolation residual: {:.3e}", c.max_residual)?;
            writeln!(out, "unimodular defect: {:.3e}", c.unimodular_defect)?;
            let v = c.verdicts;
            writeln!(
                out,
                "verdicts: strict={} unimodular={} degree_lower={} degree_upper={}",
                v.strict_interpolation, v.unimodular, v.degree_lower, v.degree_upper
            )?;
        }
        ResultFile::Bidisk(r) => {
            let c = &r.certificate;
            writeln!(out, "kind: bidisk, {} nodes", r.problem.nodes.len())?;
            writeln!(
                out,
                "inertia Γ¹ = {}, Γ² = {}, regularizer ranks {:?}",
                c.inertia[0], c.inertia[1], c.deltas
            )?;
            writeln!(
                out,
                "bidegree: reduced {:?}, support {:?}, declared {:?}, tight bound {:?}, construction bound {:?}",
                c.reduced_bidegree, c.support_bidegree, c.declared_bidegree, c.tight_bound, c.construction_bound
            )?;
            let status: Vec<String> = c.status.iter().map(|s| s.to_string()).collect();
            writeln!(out, "node status: {}", status.join(" "))?;
            writeln!(out, "max interpolation residual: {:.3e}", c.max_residual)?;
            writeln!(
                out,
                "torus defect: {:.3e} ({} of {}² samples excluded)",
                c.torus.max_defect, c.torus.excluded, c.torus.grid
            )?;
            writeln!(
                out,
                "toral scan: {} violations, {} singular candidates",
                c.toral.violations.len(),
                c.toral.singular_candidates
            )?;
            writeln!(
                out,
                "balanced disks: max zeros {} / bound {}, max poles {} / bound {}",
                c.balanced.max_zeros, c.balanced.zero_bound, c.balanced.max_poles, c.balanced.pole_bound
            )?;
            let v = c.verdicts;
            writeln!(
                out,
                "verdicts: strict={} torus_unimodular={} bidegree_tight={} bidegree_construction={} \
                 bidegree_declared={} balanced={} toral={}",
                v.strict_interpolation,
                v.torus_unimodular,
                v.bidegree_tight,
                v.bidegree_construction,
                v.bidegree_declared,
                v.balanced_counts,
                v.toral
            )?;
        }
    }
    writeln!(out, "certificate: {}", if result.passed() { "PASS" } else { "FAIL" })
}

pub fn cmd_verify(path: &Path, out: &mut dyn Write) -> Result<i32> {
    let stored = io::read_result(path)?;
    let fresh = io::recertify(&stored)?;
    let consistent = fresh.matches(&stored);
    let passed = fresh.passed();
    let recomputed = match &fresh {
        Recertified::Disk(c) => format!("{:?}", c.verdicts),
        Recertified::Bidisk(c) => format!("{:?}", c.verdicts),
    };
    (|| {
        writeln!(out, "recomputed verdicts: {recomputed}")?;
        writeln!(out, "stored verdicts reproduced: {consistent}")?;
        writeln!(out, "certificate: {}", if passed { "PASS" } else { "FAIL" })
    })()
    .map_err(io_error)?;
    Ok(if passed && consistent { 0 } else { 2 })
}

/// Distance below which a boundary sample counts as sitting on a pole.
const FLAG_RADIUS: f64 = 1e-6;

fn disk_samples(num: &CPoly, den: &CPoly, n: usize, out: &mut dyn Write) -> Result<()> {
    let phi = RationalFunction::new(num.clone(), den.clone());
    let roots = if den.trimmed().degree().unwrap_or(0) > 0 {
        den.trimmed().roots()?
    } else {
        Vec::new()
    };
    (|| {
        writeln!(out, "theta,modulus,argument,flagged")?;
        for k in 0..n {
            let theta = std::f64::consts::TAU * k as f64 / n as f64;
            let z = C64::from_polar(1.0, theta);
            let flagged = roots.iter().any(|r| (r - z).norm() < FLAG_RADIUS);
            let v = phi.eval(z);
            writeln!(out, "{theta:.9},{:.15},{:.15},{}", v.norm(), v.arg(), u8::from(flagged))?;
        }
        Ok(())
    })()
    .map_err(io_error)
}

fn torus_samples(phi: &BiRational, n: usize, out: &mut dyn Write) -> Result<()> {
    let qn = phi.denominator.norm1();
    (|| {
        writeln!(out, "theta1,theta2,modulus,flagged")?;
        for s in 0..n {
            for t in 0..n {
                let z = torus_point(s, t, n);
                let q = phi.denominator.eval(z);
                let flagged = q.norm() <= NEAR_ZERO * qn;
                let modulus = if flagged { f64::NAN } else { (phi.numerator.eval(z) / q).norm() };
                let step = std::f64::consts::TAU / n as f64;
                writeln!(out, "{:.9},{:.9},{modulus:.15},{}", step * s as f64, step * t as f64, u8::from(flagged))?;
            }
        }
        Ok(())
    })()
    .map_err(io_error)
}

pub fn cmd_boundary_samples(path: &Path, n: usize, dest: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    if n == 0 {
        return Err(TakagiError::InvalidInput("--n must be positive".into()));
    }
    let result = io::read_result(path)?;
    let mut buffer: Vec<u8> = Vec::new();
    match &result {
        ResultFile::Disk(r) => disk_samples(&r.numerator, &r.denominator, n, &mut buffer)?,
        ResultFile::Bidisk(r) => torus_samples(&r.function, n, &mut buffer)?,
    }
    match dest {
        Some(p) => write_file(p, &String::from_utf8_lossy(&buffer))?,
        None => out.write_all(&buffer).map_err(io_error)?,
    }
    Ok(0)
}

pub fn cmd_lemma_check(m: usize, n: usize, trials: usize, seed: Option<u64>, out: &mut dyn Write) -> Result<i32> {
    if trials == 0 {
        return Err(TakagiError::InvalidInput("--trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(resolve_seed(seed, None)?);
    let expected = Inertia::new(m, n, 0);
    let mut failures = 0;
    for trial in 0..trials {
        let (f, g) = coprime_blaschke_pair(m, n, 0.8, &mut rng);
        let nodes = lemma_nodes(&f, &g, m + n, &mut rng);
        match lemma_inertia_oracle(&f, &g, &nodes) {
            Ok(i) if i == expected => {}
            Ok(i) => {
                failures += 1;
                writeln!(out, "trial {trial}: inertia {i}, expected {expected}").map_err(io_error)?;
            }
            Err(e) => {
                failures += 1;
                writeln!(out, "trial {trial}: {e}").map_err(io_error)?;
            }
        }
    }
    writeln!(out, "lemma check (m, n) = ({m}, {n}): {failures} failures in {trials} trials").map_err(io_error)?;
    Ok(if failures == 0 { 0 } else { 2 })
}
