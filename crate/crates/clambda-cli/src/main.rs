//! Command-line front end: generate the deformed Hermite family, evaluate
//! the deformed exponential and kernel, export ladder and block matrices,
//! and run the residual verification suites.
//!
//! Exit codes: 0 when every requested residual is within tolerance, 1 when
//! a verification fails, 2 when the configuration is invalid.

mod literal;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use clambda::analytic::{
    bargmann_inner, gen_exp_hypergeom, gen_exp_series, hamiltonian_residual, kernel_eval,
    SeriesFunction,
};
use clambda::blocks::{
    block_coefficients, structural_invariant_residual, verify_flat_commutator, verify_spectrum,
    verify_vector_recurrences, BlockSystem,
};
use clambda::fock::{verify_algebra, verify_power_commutators, FockMatrices};
use clambda::functionals::{moment, verify_d_orthogonality, verify_vector_orthogonality};
use clambda::hermite::{generating_function_residual, inversion_residual, HermiteFamily, Route};
use clambda::ops::BandOperator;
use clambda::params::{sample_hermitian_positive, Precision};
use clambda::poly::rel_distance;
use clambda::{AlgebraParams, DensePoly, Report};

use literal::{parse_complex, parse_complex_list};

#[derive(Parser)]
#[command(
    name = "clambda",
    version,
    about = "Deformed oscillator toolkit: generalized Hermite families, \
             deformed exponentials, ladder and block matrices, and \
             machine-readable verification of the identities tying them together."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the polynomial family as a coefficient table
    Hermite(HermiteArgs),
    /// Evaluate the deformed exponential by series and by resummation
    Genexp(GenexpArgs),
    /// Emit the moment table of the orthogonality functionals
    Moments(MomentsArgs),
    /// Run a verification suite and emit a residual report
    Verify(VerifyArgs),
    /// Export ladder matrices on the graded number basis
    Fock(FockArgs),
    /// Export the block recurrence matrices
    Matrix(MatrixArgs),
    /// Evaluate the reproducing kernel
    Kernel(KernelArgs),
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Cycle length of the grading group (at least 2)
    #[arg(long)]
    lambda: usize,

    /// Comma-separated complex weights "a+bi": lambda entries summing to
    /// zero, or lambda-1 entries with the head derived
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,

    /// Draw a compliant weight profile from this seed instead of --nu
    #[arg(long)]
    seed: Option<u64>,

    /// Residual tolerance for verification verdicts
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    /// Working precision for the deformed factorial recurrences
    #[arg(long, value_enum, default_value_t = PrecisionArg::Extended)]
    precision: PrecisionArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    Double,
    Extended,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct HermiteArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Largest degree in the table
    #[arg(long = "n", default_value_t = 8)]
    n: usize,
    /// Construction route
    #[arg(long, value_enum, default_value_t = RouteArg::Recurrence)]
    route: RouteArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Operational,
    Explicit,
    Recurrence,
}

#[derive(Args)]
struct GenexpArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Evaluation point, complex literal "a+bi"
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    /// Series truncation order
    #[arg(long, default_value_t = 64)]
    truncation: usize,
}

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Largest moment index in the table
    #[arg(long, default_value_t = 16)]
    mmax: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    /// Truncation cap: polynomial degrees and matrix sizes scale with it
    #[arg(long, default_value_t = 20)]
    degree: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Algebra,
    Hermite,
    Orthogonality,
    Bargmann,
    Blocks,
}

#[derive(Args)]
struct FockArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Matrix dimension (at least twice the cycle length)
    #[arg(long, default_value_t = 16)]
    dim: usize,
    /// Which matrix a CSV export carries
    #[arg(long, value_enum, default_value_t = FockWhat::Aminus)]
    what: FockWhat,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum FockWhat {
    Aminus,
    Aplus,
    Number,
    Grading,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Number of blocks; each block is (lambda - 1) square
    #[arg(long, default_value_t = 6)]
    blocks: usize,
    /// Which block matrix to export
    #[arg(long, value_enum)]
    what: MatrixWhat,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixWhat {
    X,
    Y,
    R,
}

#[derive(Args)]
struct KernelArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Kernel argument, complex literal "a+bi"
    #[arg(long, allow_hyphen_values = true)]
    w: String,
    /// Evaluation point, complex literal "a+bi"
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    /// Series truncation order
    #[arg(long, default_value_t = 64)]
    truncation: usize,
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<clambda::Error> for CliError {
    fn from(e: clambda::Error) -> Self {
        CliError::config(e.to_string())
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Writes one line to stdout; a closed pipe (head-style consumers) ends
/// the process quietly instead of panicking.
fn out_line(line: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out
        .write_all(line.as_bytes())
        .and_then(|_| out.write_all(b"\n"))
        .is_err()
    {
        std::process::exit(0);
    }
}

/// One quoted CSV cell holding "re,im".
fn cell(z: Complex64) -> String {
    format!("\"{},{}\"", z.re, z.im)
}

fn resolve_params(args: &ParamArgs) -> Result<AlgebraParams, CliError> {
    let nu: Vec<Complex64> = match (&args.nu, args.seed) {
        (Some(text), _) => parse_complex_list(text).map_err(CliError::config)?,
        (None, Some(seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            sample_hermitian_positive(args.lambda, &mut rng)
        }
        (None, None) => {
            return Err(CliError::config(
                "provide --nu weights or --seed to sample a profile",
            ))
        }
    };
    let precision = match args.precision {
        PrecisionArg::Double => Precision::Double,
        PrecisionArg::Extended => Precision::Extended,
    };
    Ok(AlgebraParams::with_options(
        args.lambda,
        &nu,
        args.tol,
        precision,
    )?)
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    command: &'static str,
    lambda: usize,
    nu: Vec<[f64; 2]>,
    tol: f64,
    precision: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(flatten)]
    payload: T,
}

fn emit_json<T: Serialize>(
    command: &'static str,
    p: &AlgebraParams,
    seed: Option<u64>,
    payload: T,
) {
    let envelope = Envelope {
        command,
        lambda: p.lambda(),
        nu: p.nu().iter().copied().map(pair).collect(),
        tol: p.tol(),
        precision: match p.precision() {
            Precision::Double => "double",
            Precision::Extended => "extended",
        },
        seed,
        payload,
    };
    out_line(&serde_json::to_string_pretty(&envelope).unwrap());
}

fn matrix_rows(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect())
        .collect()
}

fn print_matrix_csv(m: &DMatrix<Complex64>, header: &[String]) {
    out_line(&header.join(","));
    for i in 0..m.nrows() {
        let cells: Vec<String> = std::iter::once(i.to_string())
            .chain((0..m.ncols()).map(|j| cell(m[(i, j)])))
            .collect();
        out_line(&cells.join(","));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Hermite(args) => run_hermite(args),
        Command::Genexp(args) => run_genexp(args),
        Command::Moments(args) => run_moments(args),
        Command::Verify(args) => run_verify(args),
        Command::Fock(args) => run_fock(args),
        Command::Matrix(args) => run_matrix(args),
        Command::Kernel(args) => run_kernel(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            out_line(
                &serde_json::to_string_pretty(&serde_json::json!({ "error": e.message })).unwrap(),
            );
            ExitCode::from(e.code)
        }
    }
}

#[derive(Serialize)]
struct HermiteRow {
    degree: usize,
    coeffs: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct HermitePayload {
    route: &'static str,
    max_degree: usize,
    rows: Vec<HermiteRow>,
}

fn run_hermite(args: HermiteArgs) -> Result<ExitCode, CliError> {
    let p = resolve_params(&args.params)?;
    let (route, route_name) = match args.route {
        RouteArg::Operational => (Route::Operational, "operational"),
        RouteArg::Explicit => (Route::Explicit, "explicit"),
        RouteArg::Recurrence => (Route::Recurrence, "recurrence"),
    };
    let fam = HermiteFamily::build(&p, args.n, route);
    let rows: Vec<HermiteRow> = (0..=args.n)
        .map(|degree| {
            let poly = fam.monic(degree)?;
            Ok(HermiteRow {
                degree,
                coeffs: poly.coeffs().iter().copied().map(pair).collect(),
            })
        })
        .collect::<Result<_, clambda::Error>>()?;
    match args.format {
        Format::Json => emit_json(
            "hermite",
            &p,
            args.params.seed,
            HermitePayload {
                route: route_name,
                max_degree: args.n,
                rows,
            },
        ),
        Format::Csv => {
            let header: Vec<String> = std::iter::once("degree".to_string())
                .chain((0..=args.n).map(|k| format!("z^{k}")))
                .collect();
            out_line(&header.join(","));
            let zero = Complex64::new(0.0, 0.0);
            for row in &rows {
                let cells: Vec<String> = std::iter::once(row.degree.to_string())
                    .chain((0..=args.n).map(|k| {
                        let c = row
                            .coeffs
                            .get(k)
                            .map_or(zero, |&[re, im]| Complex64::new(re, im));
                        cell(c)
                    }))
                    .collect();
                out_line(&cells.join(","));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct GenexpPayload {
    z: [f64; 2],
    truncation: usize,
    value: [f64; 2],
    series: [f64; 2],
    resummed: [f64; 2],
    delta: f64,
    tail_bound: f64,
}

fn run_genexp(args: GenexpArgs) -> Result<ExitCode, CliError> {
    let p = resolve_params(&args.params)?;
    let z = parse_complex(&args.z).map_err(CliError::config)?;
    let series = gen_exp_series(&p, z, args.truncation)?;
    let resummed = gen_exp_hypergeom(&p, z)?;
    let delta = (series - resummed).norm();
    let tail_coeff = SeriesFunction::gen_exp(&p, args.truncation).coefficients()[args.truncation];
    let tail_bound = tail_coeff.norm() * z.norm().powi(args.truncation as i32);
    emit_json(
        "genexp",
        &p,
        args.params.seed,
        GenexpPayload {
            z: pair(z),
            truncation: args.truncation,
            value: pair(series),
            series: pair(series),
            resummed: pair(resummed),
            delta,
            tail_bound,
        },
    );
    let scale = series.norm().max(1.0);
    if delta <= p.tol() * scale {
        eprintln!("genexp: routes agree, delta {delta:.3e}");
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("genexp: routes disagree, delta {delta:.3e}");
        Ok(ExitCode::FAILURE)
    }
}

#[derive(Serialize)]
struct MomentRow {
    k: usize,
    m: u64,
    value: [f64; 2],
}

#[derive(Serialize)]
struct MomentsPayload {
    mmax: u64,
    rows: Vec<MomentRow>,
}

fn run_moments(args: MomentsArgs) -> Result<ExitCode, CliError> {
    let p = resolve_params(&args.params)?;
    let mut rows = Vec::new();
    for k in 0..p.d() {
        for m in 0..=args.mmax {
            rows.push(MomentRow {
                k,
                m,
                value: pair(moment(&p, k, m)?),
            });
        }
    }
    match args.format {
        Format::Json => emit_json(
            "moments",
            &p,
            args.params.seed,
            MomentsPayload {
                mmax: args.mmax,
                rows,
            },
        ),
        Format::Csv => {
            out_line("k,m,re,im");
            for row in rows {
                out_line(&format!("{},{},{},{}", row.k, row.m, row.value[0], row.value[1]));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyPayload {
    degree: usize,
    suites: Vec<Report>,
    max_residual: f64,
    pass: bool,
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    let p = resolve_params(&args.params)?;
    let degree = args.degree.max(4);
    let wanted: &[SuiteArg] = match args.suite {
        SuiteArg::All => &[
            SuiteArg::Algebra,
            SuiteArg::Hermite,
            SuiteArg::Orthogonality,
            SuiteArg::Bargmann,
            SuiteArg::Blocks,
        ],
        ref one => std::slice::from_ref(one),
    };
    let mut suites = Vec::new();
    for suite in wanted {
        let report = match suite {
            SuiteArg::Algebra => suite_algebra(&p, degree)?,
            SuiteArg::Hermite => suite_hermite(&p, degree)?,
            SuiteArg::Orthogonality => suite_orthogonality(&p, degree)?,
            SuiteArg::Bargmann => suite_bargmann(&p, degree, args.params.seed)?,
            SuiteArg::Blocks => suite_blocks(&p, degree)?,
            SuiteArg::All => unreachable!(),
        };
        eprintln!(
            "suite {}: {} (max residual {:.3e}, {} checks)",
            report.suite,
            if report.pass { "pass" } else { "FAIL" },
            report.max_residual,
            report.checks.len()
        );
        suites.push(report);
    }
    let pass = suites.iter().all(|r| r.pass);
    let max_residual = suites.iter().fold(0.0f64, |a, r| a.max(r.max_residual));
    emit_json(
        "verify",
        &p,
        args.params.seed,
        VerifyPayload {
            degree,
            suites,
            max_residual,
            pass,
        },
    );
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn suite_algebra(p: &AlgebraParams, degree: usize) -> Result<Report, clambda::Error> {
    let dim = (degree + p.lambda()).max(2 * p.lambda());
    let fock = FockMatrices::build(p, dim)?;
    let mut report = verify_algebra(&fock);
    report.absorb(verify_power_commutators(&fock, 6));
    report.suite = "algebra".into();
    Ok(report)
}

fn suite_hermite(p: &AlgebraParams, degree: usize) -> Result<Report, clambda::Error> {
    let tol = p.tol();
    let mut report = Report::new("hermite");
    let operational = HermiteFamily::build(p, degree, Route::Operational);
    let explicit = HermiteFamily::build(p, degree, Route::Explicit);
    let recurrence = HermiteFamily::build(p, degree, Route::Recurrence);
    for n in 0..=degree {
        let r = recurrence.monic(n)?;
        let gap = rel_distance(operational.monic(n)?, r).max(rel_distance(explicit.monic(n)?, r));
        report.push(format!("route agreement n={n}"), gap, tol);
    }
    for n in 0..=degree {
        report.push(
            format!("lowering n={n}"),
            recurrence.lowering_residual(n)?,
            tol,
        );
        if n < degree {
            report.push(
                format!("raising n={n}"),
                recurrence.raising_residual(n)?,
                tol,
            );
        }
        report.push(
            format!("eigen equation n={n}"),
            recurrence.eigen_residual(n)?,
            tol,
        );
        report.push_bool(
            format!("degree parity n={n}"),
            recurrence.symmetry_exact(n)?,
        );
    }
    for m in 0..=degree.min(12) {
        report.push(
            format!("inversion m={m}"),
            inversion_residual(&recurrence, m)?,
            tol,
        );
    }
    let t_order = degree.min(16);
    for (label, x0) in [
        ("generating function x=0.9", Complex64::new(0.9, 0.0)),
        ("generating function x=-0.35+0.2i", Complex64::new(-0.35, 0.2)),
    ] {
        report.push(
            label,
            generating_function_residual(&recurrence, x0, t_order)?,
            tol,
        );
    }
    Ok(report)
}

fn suite_orthogonality(p: &AlgebraParams, degree: usize) -> Result<Report, clambda::Error> {
    let d = p.d();
    let nmax = degree.min(18);
    let fam_degree = nmax.max(7 * d - 1);
    let fam = HermiteFamily::build(p, fam_degree, Route::Recurrence);
    let mut report = verify_d_orthogonality(&fam, nmax)?;
    report.suite = "orthogonality".into();
    // the blockwise deltas need normalized members, so a positivity-
    // compliant profile; the vanishing window above is profile-agnostic
    if p.flags().positive {
        report.absorb(verify_vector_orthogonality(&fam, 6)?);
    }
    Ok(report)
}

fn suite_bargmann(
    p: &AlgebraParams,
    degree: usize,
    seed: Option<u64>,
) -> Result<Report, clambda::Error> {
    let tol = p.tol();
    let mut report = Report::new("bargmann");
    let nm = degree.min(20);
    let facts = p.deformed_factorials(nm as u64);
    let basis: Vec<DensePoly> = (0..=nm)
        .map(|n| DensePoly::monomial(n).scale(facts[n].sqrt().inv()))
        .collect();
    let mut worst = 0.0f64;
    for n in 0..=nm {
        for m in 0..=nm {
            let want = if n == m {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            let got = bargmann_inner(p, &basis[n], &basis[m])?;
            worst = worst.max((got - want).norm());
        }
    }
    report.push(format!("monomial orthonormality n,m<={nm}"), worst, tol);

    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0) ^ 0x9e3779b97f4a7c15);
    let random_poly = |deg: usize, rng: &mut ChaCha8Rng| {
        DensePoly::from_coeffs((0..=deg).map(|_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }))
    };
    let dunkl = BandOperator::dunkl(p);
    let mut worst = 0.0f64;
    for _ in 0..40 {
        let f = random_poly(10, &mut rng);
        let g = random_poly(10, &mut rng);
        let lhs = bargmann_inner(p, &dunkl.apply(&f), &g)?;
        let rhs = bargmann_inner(p, &f, &g.shift_up(1))?;
        worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
    }
    report.push("lowering adjoint to multiplication", worst, tol);

    for w in [Complex64::new(0.7, 0.0), Complex64::new(-0.3, 0.4)] {
        let f = random_poly(8, &mut rng);
        let section = SeriesFunction::kernel_section(p, w, 40).as_poly();
        let got = bargmann_inner(p, &f, &section)?;
        let res = (got - f.eval(w)).norm() / f.eval(w).norm().max(1.0);
        report.push(format!("kernel reproduces at w={w}"), res, tol);
    }

    report.push(
        "hamiltonian forms agree",
        hamiltonian_residual(p, degree.min(12)),
        tol,
    );
    Ok(report)
}

fn suite_blocks(p: &AlgebraParams, degree: usize) -> Result<Report, clambda::Error> {
    let d = p.d();
    let nblocks = (degree / d).clamp(3, 12);
    let samples = [
        Complex64::new(0.7, -0.3),
        Complex64::new(1.2, 0.0),
        Complex64::new(-0.4, 1.1),
    ];
    let mut report = verify_vector_recurrences(p, nblocks, &samples)?;
    report.suite = "blocks".into();
    let bs = BlockSystem::build(p, nblocks)?;
    report.push(
        "transpose structure of the pair",
        structural_invariant_residual(&bs)?,
        p.tol(),
    );
    report.absorb(verify_flat_commutator(p, (2 * p.lambda()).max(degree))?);
    report.absorb(verify_spectrum(p, degree.min(12))?);
    Ok(report)
}

#[derive(Serialize)]
struct FockMatricesPayload {
    a_minus: Vec<Vec<[f64; 2]>>,
    a_plus: Vec<Vec<[f64; 2]>>,
    number: Vec<Vec<[f64; 2]>>,
    grading: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct FockPayload {
    dim: usize,
    matrices: FockMatricesPayload,
    report: Report,
}

fn run_fock(args: FockArgs) -> Result<ExitCode, CliError> {
    let p = resolve_params(&args.params)?;
    let fock = FockMatrices::build(&p, args.dim)?;
    match args.format {
        Format::Json => {
            let mut report = verify_algebra(&fock);
            report.absorb(verify_power_commutators(&fock, 4));
            let pass = report.pass;
            emit_json(
                "fock",
                &p,
                args.params.seed,
                FockPayload {
                    dim: args.dim,
                    matrices: FockMatricesPayload {
                        a_minus: matrix_rows(fock.a_minus()),
                        a_plus: matrix_rows(fock.a_plus()),
                        number: matrix_rows(fock.number()),
                        grading: matrix_rows(fock.grading()),
                    },
                    report,
                },
            );
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Format::Csv => {
            let m = match args.what {
                FockWhat::Aminus => fock.a_minus(),
                FockWhat::Aplus => fock.a_plus(),
                FockWhat::Number => fock.number(),
                FockWhat::Grading => fock.grading(),
            };
            let header: Vec<String> = std::iter::once("row".to_string())
                .chain((0..m.ncols()).map(|j| j.to_string()))
                .collect();
            print_matrix_csv(m, &header);
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Serialize)]
struct MatrixPayload {
    what: &'static str,
    blocks: usize,
    dim: usize,
    rows: Vec<Vec<[f64; 2]>>,
}

fn run_matrix(args: MatrixArgs) -> Result<ExitCode, CliError> {
    let p = resolve_params(&args.params)?;
    let d = p.d();
    let (what, matrix) = match args.what {
        MatrixWhat::X => ("x", BlockSystem::build(&p, args.blocks)?.x().clone()),
        MatrixWhat::Y => ("y", BlockSystem::build(&p, args.blocks)?.y().clone()),
        MatrixWhat::R => {
            let dim = args.blocks * d;
            let mut m = DMatrix::<Complex64>::zeros(dim, dim);
            for n in 0..args.blocks {
                let coeffs = block_coefficients(&p, n)?;
                m.view_mut((n * d, n * d), (d, d)).copy_from(&coeffs.r);
            }
            ("r", m)
        }
    };
    match args.format {
        Format::Json => emit_json(
            "matrix",
            &p,
            args.params.seed,
            MatrixPayload {
                what,
                blocks: args.blocks,
                dim: matrix.nrows(),
                rows: matrix_rows(&matrix),
            },
        ),
        Format::Csv => {
            // header names the block each column belongs to
            let header: Vec<String> = std::iter::once("block".to_string())
                .chain((0..matrix.ncols()).map(|j| format!("b{}", j / d)))
                .collect();
            print_matrix_csv(&matrix, &header);
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct KernelPayload {
    w: [f64; 2],
    z: [f64; 2],
    truncation: usize,
    value: [f64; 2],
    tail_bound: f64,
}

fn run_kernel(args: KernelArgs) -> Result<ExitCode, CliError> {
    let p = resolve_params(&args.params)?;
    let w = parse_complex(&args.w).map_err(CliError::config)?;
    let z = parse_complex(&args.z).map_err(CliError::config)?;
    let value = kernel_eval(&p, w, z, args.truncation)?;
    let tail_coeff = SeriesFunction::gen_exp(&p, args.truncation).coefficients()[args.truncation];
    let tail_bound = tail_coeff.norm() * (z * w.conj()).norm().powi(args.truncation as i32);
    emit_json(
        "kernel",
        &p,
        args.params.seed,
        KernelPayload {
            w: pair(w),
            z: pair(z),
            truncation: args.truncation,
            value: pair(value),
            tail_bound,
        },
    );
    Ok(ExitCode::SUCCESS)
}
