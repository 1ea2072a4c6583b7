//! Implementations behind the `qtoeplitz` subcommands.
//!
//! Each command reads its input files, runs the pipeline, writes any output
//! files, and returns the human-readable report for stdout. Reports go to
//! stdout, vectors and matrices to files named by flags, and nothing is
//! written on an error path.

use crate::error::CliError;
use crate::format::{read_matrix, read_vector, write_vector, ParsedMatrix};
use num_complex::Complex64;
use qtoeplitz::dilation::{DiagonalDilation, HermitianEmbedding};
use qtoeplitz::numerics::{dft, relative_l2_error, DenseMatrix};
use qtoeplitz::pipeline::{
    acceleration, apply_circulant, apply_hankel, apply_hankel_fast, run_pipeline,
    run_pipeline_fast, sample_measurement, ApplyResult,
};
use qtoeplitz::structured::{reverse, sparsity_report, ToeplitzSpec, DEFAULT_ORACLE_CAP};
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

/// Largest base dimension simulated with the full register by default; above
/// it (or off powers of two) `apply` switches to the structured fast path.
pub const FULL_REGISTER_LIMIT: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// Exact amplitude post-selection.
    Exact,
    /// Exact run plus seeded Bernoulli shot sampling.
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EmbedKind {
    /// The circulant the matrix embeds in.
    Circulant,
    /// The unitary dilation of the scaled spectrum.
    Dilation,
    /// The involutory Hermitian embedding of that dilation.
    Embedding,
}

impl EmbedKind {
    fn label(self) -> &'static str {
        match self {
            EmbedKind::Circulant => "circulant",
            EmbedKind::Dilation => "dilation",
            EmbedKind::Embedding => "embedding",
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct ApplyArgs {
    /// Matrix specification file (JSON).
    #[arg(long)]
    pub matrix: PathBuf,
    /// Input vector file.
    #[arg(long)]
    pub vector: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Shots drawn in sample mode.
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    /// RNG seed for sample mode.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Force the structured O(n log n) path instead of the full register.
    #[arg(long)]
    pub fast: bool,
    /// Write the output vector here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SolveArgs {
    /// Circulant specification file (JSON).
    #[arg(long)]
    pub matrix: PathBuf,
    /// Right-hand-side vector file.
    #[arg(long)]
    pub rhs: PathBuf,
    /// Write the solution vector here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct LaplacianArgs {
    /// System size (number of interior sectors).
    #[arg(long)]
    pub n: usize,
    /// Spacing between sectors.
    #[arg(long)]
    pub h: f64,
    /// Displacement vector file.
    #[arg(long)]
    pub vector: PathBuf,
    /// Write the acceleration vector here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct InfoArgs {
    /// Matrix specification file (JSON).
    #[arg(long)]
    pub matrix: PathBuf,
    /// Optional input vector: adds the exact success probability.
    #[arg(long)]
    pub vector: Option<PathBuf>,
    /// Threshold for frequency-domain nonzeros (default: 1e-12 * max modulus).
    #[arg(long)]
    pub tau: Option<f64>,
}

#[derive(Debug, clap::Args)]
pub struct EmbedArgs {
    /// Matrix specification file (JSON).
    #[arg(long)]
    pub matrix: PathBuf,
    /// Which dense operator to dump.
    #[arg(value_enum)]
    pub what: EmbedKind,
    /// Output file for the dense matrix.
    #[arg(long)]
    pub out: PathBuf,
    /// Refuse to materialize matrices of dimension above this.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    pub cap: usize,
}

fn check_dimensions(matrix_dim: usize, vector_len: usize) -> Result<(), CliError> {
    if matrix_dim != vector_len {
        return Err(CliError::Dimension(format!(
            "matrix has dimension {matrix_dim}, vector has {vector_len}"
        )));
    }
    Ok(())
}

fn run_apply(
    matrix: &ParsedMatrix,
    v: &[Complex64],
    fast: bool,
) -> Result<(ApplyResult, &'static str), CliError> {
    let n = v.len();
    let use_fast = fast || !n.is_power_of_two() || n > FULL_REGISTER_LIMIT;
    Ok(match matrix {
        ParsedMatrix::Toeplitz(t) => {
            if use_fast {
                (run_pipeline_fast(t, v)?, "fast (structured FFT)")
            } else {
                (run_pipeline(t, v)?, "full register")
            }
        }
        ParsedMatrix::Hankel(h) => {
            if use_fast {
                (apply_hankel_fast(h, v)?, "fast (structured FFT)")
            } else {
                (apply_hankel(h, v)?, "full register")
            }
        }
        // circulants need no embedding, so the register is already O(m log m)
        ParsedMatrix::Circulant(c) => (apply_circulant(c, v)?, "diagonal register"),
    })
}

fn expected_repeats(p: f64) -> f64 {
    if p > 0.0 {
        1.0 / p
    } else {
        f64::INFINITY
    }
}

fn push_result_lines(report: &mut String, result: &ApplyResult) {
    let _ = writeln!(
        report,
        "dilation scale k: {} (max-modulus convention)",
        result.k
    );
    let _ = writeln!(
        report,
        "success probability: {:.6}",
        result.success_probability
    );
    let _ = writeln!(
        report,
        "expected repeats: {:.2}",
        expected_repeats(result.success_probability)
    );
    report.push_str("global phase: -i (divided out of the output)\n");
}

pub fn cmd_apply(args: &ApplyArgs) -> Result<String, CliError> {
    let matrix = read_matrix(&args.matrix)?;
    let vector = read_vector(&args.vector)?;
    check_dimensions(matrix.dimension(), vector.len())?;

    let (mut result, path_label) = run_apply(&matrix, &vector, args.fast)?;
    if args.mode == Mode::Sample {
        result.shots = Some(sample_measurement(&result, args.shots, args.seed)?);
    }
    if let Some(out) = &args.out {
        write_vector(out, &result.output)?;
    }

    let mut report = String::new();
    let _ = writeln!(report, "kind: {}", matrix.kind());
    let _ = writeln!(report, "dimension: {}", matrix.dimension());
    let _ = writeln!(report, "path: {path_label}");
    push_result_lines(&mut report, &result);
    if let Some(record) = &result.shots {
        let _ = writeln!(report, "shots: {}", record.shots);
        let _ = writeln!(report, "successes: {}", record.successes);
        let _ = writeln!(report, "empirical frequency: {:.6}", record.frequency());
    }
    if let Some(out) = &args.out {
        let _ = writeln!(report, "output: {}", out.display());
    }
    Ok(report)
}

pub fn cmd_solve_circulant(args: &SolveArgs) -> Result<String, CliError> {
    let matrix = read_matrix(&args.matrix)?;
    let circulant = match matrix {
        ParsedMatrix::Circulant(c) => c,
        other => {
            return Err(CliError::Usage(format!(
                "solve-circulant requires a circulant matrix file, found kind {}",
                other.kind()
            )))
        }
    };
    let rhs = read_vector(&args.rhs)?;
    check_dimensions(circulant.dimension(), rhs.len())?;

    let result = qtoeplitz::pipeline::solve_circulant(&circulant, &rhs)?;
    // verify the solution with a second, independent product
    let product = apply_circulant(&circulant, &result.output)?;
    let residual = relative_l2_error(&product.output, &rhs);
    if let Some(out) = &args.out {
        write_vector(out, &result.output)?;
    }

    let mut report = String::new();
    let _ = writeln!(report, "kind: circulant (solve)");
    let _ = writeln!(report, "dimension: {}", circulant.dimension());
    push_result_lines(&mut report, &result);
    let _ = writeln!(report, "relative residual: {residual:e}");
    if let Some(out) = &args.out {
        let _ = writeln!(report, "solution: {}", out.display());
    }
    Ok(report)
}

pub fn cmd_laplacian(args: &LaplacianArgs) -> Result<String, CliError> {
    if args.n < 2 {
        return Err(CliError::Usage(format!(
            "laplacian needs n >= 2, got {}",
            args.n
        )));
    }
    if args.h <= 0.0 {
        return Err(CliError::Usage(format!(
            "step size h must be positive, got {}",
            args.h
        )));
    }
    let u = read_vector(&args.vector)?;
    check_dimensions(args.n, u.len())?;
    let accel = acceleration(&u, args.h)?;
    if let Some(out) = &args.out {
        write_vector(out, &accel)?;
    }

    let mut report = String::new();
    let _ = writeln!(report, "laplacian dimension: {}", args.n);
    let _ = writeln!(report, "step h: {}", args.h);
    let _ = writeln!(report, "acceleration = -(1/h^2) L2 u");
    if let Some(out) = &args.out {
        let _ = writeln!(report, "output: {}", out.display());
    }
    Ok(report)
}

fn info_toeplitz(
    t: &ToeplitzSpec,
    kind: &str,
    note: Option<&str>,
    psi: Option<&[Complex64]>,
    tau: Option<f64>,
) -> Result<String, CliError> {
    let n = t.dimension();
    let mut report = String::new();
    let _ = writeln!(report, "kind: {kind}");
    if let Some(note) = note {
        let _ = writeln!(report, "note: {note}");
    }
    let _ = writeln!(report, "dimension: {n}");
    let sparsity = sparsity_report(t, tau);
    let _ = writeln!(
        report,
        "time-domain nonzeros: {} of {}",
        sparsity.nnz_time,
        2 * n
    );
    let _ = writeln!(
        report,
        "frequency-domain nonzeros: {} of {} (threshold {:e})",
        sparsity.nnz_freq,
        2 * n,
        sparsity.threshold
    );
    if t.is_zero() {
        report.push_str("matrix is zero: no spectrum to report\n");
    } else {
        let lambdas = t.embed_in_circulant().eigenvalues();
        let max = lambdas.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let min = lambdas.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        let _ = writeln!(report, "dilation scale k: {max} (max-modulus convention)");
        let _ = writeln!(report, "spectrum max |lambda|: {max:e}");
        let _ = writeln!(report, "spectrum min |lambda|: {min:e}");
    }
    let qubits = (8 * n).next_power_of_two().ilog2();
    let q = (2 * n).next_power_of_two().ilog2() as u64;
    let _ = writeln!(report, "qubits: {qubits}");
    let _ = writeln!(
        report,
        "qft gates: {} per transform, two transforms",
        q * (q + 1) / 2
    );
    if let Some(psi) = psi {
        check_dimensions(n, psi.len())?;
        let p = run_pipeline_fast(t, psi)?.success_probability;
        let _ = writeln!(report, "success probability: {p:.6}");
        let _ = writeln!(report, "expected repeats: {:.2}", expected_repeats(p));
    }
    Ok(report)
}

pub fn cmd_info(args: &InfoArgs) -> Result<String, CliError> {
    let matrix = read_matrix(&args.matrix)?;
    let vector = match &args.vector {
        Some(path) => Some(read_vector(path)?),
        None => None,
    };
    match &matrix {
        ParsedMatrix::Toeplitz(t) => info_toeplitz(t, "toeplitz", None, vector.as_deref(), args.tau),
        ParsedMatrix::Hankel(h) => {
            let reversed = vector.as_deref().map(reverse);
            info_toeplitz(
                &h.to_toeplitz(),
                "hankel",
                Some("reported through the Toeplitz permutation T_H = H P"),
                reversed.as_deref(),
                args.tau,
            )
        }
        ParsedMatrix::Circulant(c) => {
            let m = c.dimension();
            let mut report = String::new();
            let _ = writeln!(report, "kind: circulant");
            let _ = writeln!(report, "dimension: {m}");
            let nnz_time = c
                .first_row()
                .iter()
                .filter(|z| **z != Complex64::new(0.0, 0.0))
                .count();
            let _ = writeln!(report, "time-domain nonzeros: {nnz_time} of {m}");
            let spectrum = dft(c.first_row()).map_err(CliError::from)?;
            let max_spec = spectrum.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let threshold = args.tau.unwrap_or(1e-12 * max_spec);
            let nnz_freq = spectrum.iter().filter(|z| z.norm() > threshold).count();
            let _ = writeln!(
                report,
                "frequency-domain nonzeros: {nnz_freq} of {m} (threshold {threshold:e})"
            );
            if c.is_zero() {
                report.push_str("matrix is zero: no spectrum to report\n");
            } else {
                let lambdas = c.eigenvalues();
                let max = lambdas.iter().map(|z| z.norm()).fold(0.0, f64::max);
                let min = lambdas.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
                let _ = writeln!(report, "dilation scale k: {max} (max-modulus convention)");
                let _ = writeln!(report, "spectrum max |lambda|: {max:e}");
                let _ = writeln!(report, "spectrum min |lambda|: {min:e}");
            }
            let qubits = (4 * m).next_power_of_two().ilog2();
            let q = m.next_power_of_two().ilog2() as u64;
            let _ = writeln!(report, "qubits: {qubits}");
            let _ = writeln!(
                report,
                "qft gates: {} per transform, two transforms",
                q * (q + 1) / 2
            );
            if let Some(v) = vector.as_deref() {
                check_dimensions(m, v.len())?;
                let p = apply_circulant(c, v)?.success_probability;
                let _ = writeln!(report, "success probability: {p:.6}");
                let _ = writeln!(report, "expected repeats: {:.2}", expected_repeats(p));
            }
            Ok(report)
        }
    }
}

fn format_dense(m: &DenseMatrix) -> String {
    let mut out = format!("# dense {} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let mut line = String::new();
        for j in 0..m.cols() {
            let z = m.get(i, j);
            if j > 0 {
                line.push(' ');
            }
            let _ = write!(line, "{} {}", z.re, z.im);
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn cmd_embed(args: &EmbedArgs) -> Result<String, CliError> {
    let matrix = read_matrix(&args.matrix)?;
    let n = matrix.dimension();
    if n > args.cap {
        return Err(CliError::CapExceeded { n, cap: args.cap });
    }
    let circulant = match &matrix {
        ParsedMatrix::Toeplitz(t) => t.embed_in_circulant(),
        ParsedMatrix::Hankel(h) => h.to_toeplitz().embed_in_circulant(),
        ParsedMatrix::Circulant(c) => c.clone(),
    };
    let m = circulant.dimension();
    let dense = match args.what {
        EmbedKind::Circulant => circulant.to_dense(m)?,
        EmbedKind::Dilation => DiagonalDilation::new(circulant.eigenvalues())?.to_dense(2 * m)?,
        EmbedKind::Embedding => {
            HermitianEmbedding::new(DiagonalDilation::new(circulant.eigenvalues())?)
                .to_dense(4 * m)?
        }
    };
    fs::write(&args.out, format_dense(&dense)).map_err(|source| CliError::Io {
        action: "write",
        path: args.out.clone(),
        source,
    })?;

    let mut report = String::new();
    let _ = writeln!(
        report,
        "wrote {} ({} x {}) to {}",
        args.what.label(),
        dense.rows(),
        dense.cols(),
        args.out.display()
    );
    if matches!(matrix, ParsedMatrix::Hankel(_)) {
        report.push_str("note: derived from the Toeplitz permutation T_H = H P\n");
    }
    Ok(report)
}
