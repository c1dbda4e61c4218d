//! Command-line surface: realize spectra, verify structure, apply
//! eigenvalue-replacing updates, and bound stability radii.
//!
//! Reports are JSON on stdout (complex numbers as {re, im} objects,
//! full-precision values); human-readable diagnostics go to stderr. Exit
//! codes: 0 success, 1 domain/structure error, 2 I/O or parse error.

use clap::{Parser, Subcommand};
use hamspec::eig::CHARPOLY_DIM_CAP;
use hamspec::error::{Error, Result};
use hamspec::io::{read_matrix_csv, read_spectrum_json, write_matrix_csv};
use hamspec::{
    apply_rado, build_h_alpha, charpoly_coefficients, default_ham_tol, eigenvalues, format_complex,
    has_imaginary_axis_eigenvalue, is_hamiltonian, is_normal, pairing_error, parse_complex,
    select_targets, spectrum_normal_closed_form, stability::default_axis_tol,
    stability_radius_bisection, HamMatrix, Mat, PerturbationSpec, Spectrum,
};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "hamspec",
    version,
    about = "Hamiltonian matrices: prescribed spectra, structured updates, stability radii"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a Hamiltonian matrix realizing a prescribed spectrum.
    ///
    /// The spectrum file is a JSON array of complex-number strings, e.g.
    /// ["1+1i", "1-1i", "-1+1i", "-1-1i"]; the multiset must be closed under
    /// negation and conjugation. The realized matrix is written as CSV.
    Realize {
        /// Spectrum JSON file.
        spectrum: PathBuf,
        /// Output CSV path for the realized matrix.
        out: PathBuf,
    },
    /// Verify Hamiltonian structure of a CSV matrix and report diagnostics.
    Check {
        /// Matrix CSV file (square, even dimension).
        matrix: PathBuf,
    },
    /// Apply the structure-preserving update A + X C X^H replacing the
    /// targeted eigenvalues with the spectrum of Omega + C X^H X.
    Perturb {
        /// Hamiltonian matrix CSV file.
        matrix: PathBuf,
        /// Hamiltonian core matrix C (CSV, r x r with r = number of targets).
        core: PathBuf,
        /// Output CSV path for the updated matrix.
        out: PathBuf,
        /// Comma-separated eigenvalues to replace, e.g. "2.5,-2.5" or
        /// "1+2i,1-2i" (complex targets need their conjugates).
        #[arg(long, allow_hyphen_values = true)]
        targets: String,
        /// Optional CSV of eigenvector columns to use as X. Column k must be
        /// an eigenvector for the k-th target; a conjugate pair contributes
        /// two adjacent columns (real part, then imaginary part) and must
        /// appear adjacently in --targets. Without this flag, unit-norm
        /// eigenvectors are computed from the matrix; the replaced values
        /// depend on the column scaling of X, so supplying X pins them down.
        #[arg(long)]
        x_file: Option<PathBuf>,
    },
    /// Bracket the stability radius gamma(A) by bisection on the
    /// imaginary-axis test for H(alpha).
    Radius {
        /// Matrix CSV file (no eigenvalue on the imaginary axis).
        matrix: PathBuf,
        /// Bracket width at which bisection stops.
        #[arg(long, default_value_t = 1e-6, allow_hyphen_values = true)]
        tol: f64,
        /// Upper endpoint for the bracket; must already test true. Default:
        /// start at the Frobenius norm plus one and double until the test
        /// flips.
        #[arg(long, allow_hyphen_values = true)]
        alpha_max: Option<f64>,
    },
    /// Assemble H(alpha) = [[A, -alpha I], [alpha I, -A^T]] and report its
    /// spectrum and imaginary-axis verdict.
    Halpha {
        /// Matrix CSV file (square).
        matrix: PathBuf,
        /// Coupling strength alpha (nonnegative).
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
    },
}

fn cjson(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn cjson_list(values: &[Complex64]) -> Value {
    Value::Array(values.iter().map(|z| cjson(*z)).collect())
}

fn parse_targets(text: &str) -> Result<Vec<Complex64>> {
    text.split(',')
        .map(parse_complex)
        .collect::<Result<Vec<_>>>()
        .map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("--targets: {m}")),
            other => other,
        })
}

/// Block-diagonal Omega for caller-supplied eigenvector columns: one
/// diagonal entry per real target, one 2x2 rotation block per adjacent
/// conjugate pair.
fn omega_from_targets(targets: &[Complex64]) -> Result<Mat> {
    let r = targets.len();
    let mut omega = Mat::zeros(r, r);
    let mut i = 0;
    while i < r {
        let t = targets[i];
        if t.im.abs() <= 1e-9 {
            omega[(i, i)] = t.re;
            i += 1;
        } else {
            if i + 1 >= r || (targets[i + 1] - t.conj()).norm() > 1e-9 {
                return Err(Error::Closure(format!(
                    "with --x-file, complex target {} must be immediately followed by its \
                     conjugate",
                    format_complex(t)
                )));
            }
            omega[(i, i)] = t.re;
            omega[(i, i + 1)] = t.im;
            omega[(i + 1, i)] = -t.im;
            omega[(i + 1, i + 1)] = t.re;
            i += 2;
        }
    }
    Ok(omega)
}

fn cmd_realize(spectrum: &Path, out: &Path) -> Result<Value> {
    let values = read_spectrum_json(spectrum)?;
    let spectrum = Spectrum::from_values(values)?;
    let h = hamspec::realize_spectrum(&spectrum)?;
    let achieved = eigenvalues(h.body())?;
    let pairing = pairing_error(&achieved.values, spectrum.values());
    write_matrix_csv(out, h.body())?;
    eprintln!(
        "realized {dim}x{dim} matrix, structure residual {res:.3e}, spectrum pairing error {pairing:.3e}",
        dim = h.dim(),
        res = h.residual()
    );
    Ok(json!({
        "status": "ok",
        "dimension": h.dim(),
        "residual": h.residual(),
        "pairing_error": pairing,
        "spectrum": cjson_list(&achieved.values),
    }))
}

fn cmd_check(matrix: &Path) -> Result<Value> {
    let a = read_matrix_csv(matrix)?;
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "matrix must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.rows() % 2 != 0 {
        return Err(Error::Parity(format!(
            "Hamiltonian matrices have even dimension, got {}",
            a.rows()
        )));
    }
    let (verdict, residual) = is_hamiltonian(&a, default_ham_tol(&a))?;
    let spectrum = eigenvalues(&a)?;
    let negated: Vec<Complex64> = spectrum.values.iter().map(|z| -z).collect();
    let negation_closure_error = pairing_error(&spectrum.values, &negated);

    // For a Hamiltonian matrix the characteristic polynomial is even, so all
    // odd-power coefficients vanish; their magnitudes quantify the failure.
    let odd_coeffs: Value = if a.rows() <= CHARPOLY_DIM_CAP {
        let coeffs = charpoly_coefficients(&a)?;
        let n = a.rows();
        // coeffs[k] multiplies x^(n-k); odd powers are the diagnostics.
        let odd: Vec<f64> = (0..=n)
            .filter(|k| (n - k) % 2 == 1)
            .map(|k| coeffs[k].abs())
            .collect();
        json!(odd)
    } else {
        Value::Null
    };

    eprintln!(
        "dimension {}, residual {residual:.3e}, hamiltonian: {verdict}",
        a.rows()
    );
    Ok(json!({
        "status": "ok",
        "dimension": a.rows(),
        "residual": residual,
        "hamiltonian": verdict,
        "spectrum": cjson_list(&spectrum.values),
        "negation_closure_error": negation_closure_error,
        "odd_charpoly_coefficients": odd_coeffs,
    }))
}

fn cmd_perturb(
    matrix: &Path,
    core: &Path,
    out: &Path,
    targets: &str,
    x_file: Option<&Path>,
) -> Result<Value> {
    let a = HamMatrix::certify(read_matrix_csv(matrix)?)?;
    let c = HamMatrix::certify(read_matrix_csv(core)?)?;
    let targets = parse_targets(targets)?;
    let spec = match x_file {
        Some(path) => {
            let x = read_matrix_csv(path)?;
            let omega = omega_from_targets(&targets)?;
            PerturbationSpec::new(x, omega, c)?
        }
        None => select_targets(&a, &targets)?.with_core(c)?,
    };
    let report = apply_rado(&a, &spec)?;
    write_matrix_csv(out, report.updated.body())?;
    eprintln!(
        "replaced {} eigenvalue(s); updated residual {:.3e}, split error {:.3e}",
        report.replaced.len(),
        report.updated.residual(),
        report.predicted_vs_achieved
    );
    Ok(json!({
        "status": "ok",
        "dimension": report.updated.dim(),
        "residual": report.updated.residual(),
        "targets": cjson_list(&targets),
        "replaced": cjson_list(&report.replaced),
        "retained": cjson_list(&report.retained),
        "predicted_vs_achieved": report.predicted_vs_achieved,
    }))
}

fn cmd_radius(matrix: &Path, tol: f64, alpha_max: Option<f64>) -> Result<Value> {
    let a = read_matrix_csv(matrix)?;
    let result = stability_radius_bisection(&a, tol, alpha_max)?;
    if let Some(diagnostic) = result.diagnostic {
        // The radius is zero and no bracket exists; surfaced as a domain
        // error at the command level.
        return Err(Error::Domain(diagnostic));
    }
    let certificates: Vec<Value> = result
        .certificates
        .iter()
        .map(|c| json!({ "alpha": c.alpha, "min_abs_real": c.min_abs_real }))
        .collect();
    eprintln!(
        "gamma(A) in [{:.9}, {:.9}] after {} bisection iteration(s)",
        result.lower, result.upper, result.iterations
    );
    Ok(json!({
        "status": "ok",
        "alpha_lower": result.lower,
        "alpha_upper": result.upper,
        "iterations": result.iterations,
        "certificates": certificates,
    }))
}

fn cmd_halpha(matrix: &Path, alpha: f64) -> Result<Value> {
    let a = read_matrix_csv(matrix)?;
    let sys = build_h_alpha(&a, alpha)?;
    let spectrum = eigenvalues(sys.h().body())?;
    let test = has_imaginary_axis_eigenvalue(sys.h(), default_axis_tol(sys.h()))?;
    let normal = is_normal(&a);
    let closed_form: Value = if normal {
        let eigs = eigenvalues(&a)?.values;
        cjson_list(&spectrum_normal_closed_form(&eigs, alpha))
    } else {
        Value::Null
    };
    eprintln!(
        "H(alpha) is {0}x{0}; on-axis verdict: {1}",
        sys.h().dim(),
        test.on_axis
    );
    Ok(json!({
        "status": "ok",
        "alpha": alpha,
        "dimension": sys.h().dim(),
        "spectrum": cjson_list(&spectrum.values),
        "on_axis": test.on_axis,
        "witness": cjson(test.witness),
        "min_abs_real": test.min_abs_real,
        "normal": normal,
        "closed_form": closed_form,
    }))
}

fn run(cli: Cli) -> Result<Value> {
    match &cli.command {
        Command::Realize { spectrum, out } => cmd_realize(spectrum, out),
        Command::Check { matrix } => cmd_check(matrix),
        Command::Perturb {
            matrix,
            core,
            out,
            targets,
            x_file,
        } => cmd_perturb(matrix, core, out, targets, x_file.as_deref()),
        Command::Radius {
            matrix,
            tol,
            alpha_max,
        } => cmd_radius(matrix, *tol, *alpha_max),
        Command::Halpha { matrix, alpha } => cmd_halpha(matrix, *alpha),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::Io(_) => "io",
        Error::Dimension(_) => "dimension",
        Error::Parity(_) => "parity",
        Error::Closure(_) => "closure",
        Error::Rank(_) => "rank",
        Error::NotAnEigenvalue(_) => "not-an-eigenvalue",
        Error::EigenResidual(_) => "eigen-residual",
        Error::NonConvergence(_) => "non-convergence",
        Error::Domain(_) => "domain",
        Error::Structure(_) => "structure",
        Error::SizeCap(_) => "size-cap",
        Error::Bracket(_) => "bracket",
        Error::Inconsistency(_) => "inconsistency",
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
        }
        Err(e) => {
            let report = json!({
                "status": "error",
                "kind": error_kind(&e),
                "message": e.to_string(),
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
