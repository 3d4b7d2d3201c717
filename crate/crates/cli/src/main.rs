//! `knumpar`: k-numerical radius, parallel pairs and preserver checks from
//! the command line.
//!
//! Exit codes: 0 success or true, 1 false or violation found, 2 input error.

mod plot;
mod verify;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use knumpar::combinat::{binomial, omega_count, omega_hat_count, Composition};
use knumpar::io::{
    parse_map, parse_matrix, parse_projection, CanonicalFormJson, CertificateJson, MapJson, MatrixJson, ProjectionJson,
};
use knumpar::knum::{radius_with, range_boundary, RadiusOptions};
use knumpar::linalg::sample::{random_projection, random_sample, Sample, SampleKind};
use knumpar::parallel::{is_parallel, is_tea, membership_s, span_dimension, Verdict};
use knumpar::preservers::{
    canonical_to_map, find_violation, is_scalar_isometry, preserves_pairs, random_form, recover_form, structural_flags,
    Family, PairMode, PreservationReport, SearchOptions,
};
use knumpar::{ComplexMatrix, Error, SeededRng, Space};

#[derive(Parser)]
#[command(name = "knumpar", version, about = "k-numerical radius, parallel pairs and their preservers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// w_k(A), a maximizing angle and an attaining projection.
    Radius {
        matrix: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 720)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// Sampled boundary of W_k(A).
    Range {
        matrix: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 720)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// Whether A and B are parallel for w_k.
    Parallel(PairArgs),
    /// Whether A and B attain the triangle equality for w_k.
    Tea(PairArgs),
    /// Whether B lies in the cone of matrices attaining w_k at P.
    Member {
        matrix: String,
        projection: String,
        #[arg(long, default_value = "Mn")]
        space: Space,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Real dimension of the span of sampled attaining cones.
    SpanDim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "Mn")]
        space: Space,
        /// Number of random (P, θ) cones; a single cone uses θ = 0.
        #[arg(long, default_value_t = 1)]
        cones: usize,
        /// Samples per cone; defaults to the single-cone dimension plus 10.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Pair preservation, structural flags and isometry factor of a map.
    CheckMap {
        map: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Recover a canonical form, or report the map as non-canonical.
    ClassifyMap {
        map: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Search for a preserved pair whose image is not preserved.
    FuzzMap {
        map: String,
        #[arg(long, value_enum, default_value_t = Mode::Parallel)]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Run the property suites at (n, k) and print a summary.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Restrict to one space; both by default.
        #[arg(long)]
        space: Option<Space>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Count index subsets of a composition with part-sum k.
    Omega {
        /// Comma-separated parts, e.g. 2,2,1.
        parts: Composition,
        #[arg(long)]
        k: usize,
        /// Count complementary pairs instead (n = 2k).
        #[arg(long)]
        pairs: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Seeded random matrix or projection as JSON.
    Sample {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Seeded random canonical map of a family, as map JSON.
    MakeMap {
        /// Family name, e.g. Conjugation or TraceAdjustConjugation.
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "Mn")]
        space: Space,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also print the form that was drawn.
        #[arg(long)]
        with_form: bool,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct PairArgs {
    a: String,
    b: String,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "Mn")]
    space: Space,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Parallel,
    Tea,
}

impl From<Mode> for PairMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Parallel => PairMode::Parallel,
            Mode::Tea => PairMode::Tea,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ginibre,
    Gue,
    Unitary,
    Projection,
}

/// Any error; all of them exit with code 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

struct Emit {
    text: String,
    code: u8,
    out: Option<PathBuf>,
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn emit(v: Value, code: u8, out: &Output) -> Emit {
    Emit { text: json_text(&v), code, out: out.out.clone() }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}")))
    }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure(format!("tol must be positive, got {tol}")))
    }
}

/// Reads a matrix for `space`; on `H_n` an untagged matrix is accepted when
/// it is Hermitian to rounding.
fn read_matrix(path: &str, space: Space) -> Result<ComplexMatrix, Failure> {
    let a = parse_matrix(&read_input(path)?)?;
    Ok(if space == Space::Hn && !a.is_hermitian() { a.into_hermitian()? } else { a })
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "holds": v.holds,
        "uncertain": v.uncertain,
        "defect": v.defect,
        "threshold": v.threshold,
        "certificate": v.certificate.as_ref().map(CertificateJson::from_certificate),
    })
}

fn preservation_json(r: &PreservationReport) -> Value {
    json!({
        "passed": r.passed(),
        "trials": r.trials,
        "checked": r.checked,
        "discarded": r.discarded,
        "failures": r.failures.len(),
        "first_failure": r.failures.first().map(|f| json!({
            "A": MatrixJson::from_matrix(&f.a),
            "B": MatrixJson::from_matrix(&f.b),
            "image": verdict_json(&f.image),
        })),
    })
}

fn parse_family(name: &str) -> Result<Family, Failure> {
    serde_json::from_value(Value::String(name.to_string()))
        .map_err(|_| Failure(format!("unknown family {name:?}; expected one of {:?}", Family::ALL)))
}

fn single_cone_dimension(space: Space, n: usize, k: usize) -> usize {
    let blocks = k * k + (n - k) * (n - k);
    match space {
        Space::Mn => blocks + n * n - 1,
        Space::Hn => blocks,
    }
}

fn run(command: Command) -> Result<Emit, Failure> {
    Ok(match command {
        Command::Radius { matrix, k, grid, format, out } => {
            let a = parse_matrix(&read_input(&matrix)?)?;
            let r = radius_with(&a, k, &RadiusOptions { grid: grid.max(8), ..RadiusOptions::default() })?;
            match format {
                Format::Json => emit(
                    json!({
                        "k": k,
                        "radius": r.value,
                        "theta_star": r.theta_star,
                        "degenerate": r.degenerate,
                        "projection": ProjectionJson::from_projection(&r.attaining),
                    }),
                    0,
                    &out,
                ),
                Format::Csv => {
                    Emit { text: format!("radius,theta_star\n{},{}\n", r.value, r.theta_star), code: 0, out: out.out }
                }
                Format::Svg => return Err(Failure("radius has no SVG output; use range".into())),
            }
        }
        Command::Range { matrix, k, grid, format, out } => {
            let a = parse_matrix(&read_input(&matrix)?)?;
            let points = range_boundary(&a, k, grid)?;
            let r = radius_with(&a, k, &RadiusOptions { grid, ..RadiusOptions::default() })?;
            let text = match format {
                Format::Csv => plot::csv(&points),
                Format::Svg => plot::svg(&points, r.value),
                Format::Json => json_text(&json!({
                    "k": k,
                    "radius": r.value,
                    "points": points.iter().map(|p| json!({
                        "theta": p.theta,
                        "re": p.point.re,
                        "im": p.point.im,
                        "flat_edge": p.flat_edge,
                    })).collect::<Vec<_>>(),
                })),
            };
            Emit { text, code: 0, out: out.out }
        }
        Command::Parallel(args) => pair_command(args, false)?,
        Command::Tea(args) => pair_command(args, true)?,
        Command::Member { matrix, projection, space, tol, out } => {
            check_tol(tol)?;
            let b = read_matrix(&matrix, space)?;
            let p = parse_projection(&read_input(&projection)?)?;
            let r = membership_s(&b, &p, space, tol)?;
            emit(
                json!({
                    "member": r.member,
                    "attained_trace": [r.attained_trace.re, r.attained_trace.im],
                    "block_residual": r.block_residual,
                    "radius": r.radius,
                }),
                u8::from(!r.member),
                &out,
            )
        }
        Command::SpanDim { n, k, space, cones, trials, seed, out } => {
            if k == 0 || k >= n {
                return Err(Error::BadK { k, n }.into());
            }
            let single = single_cone_dimension(space, n, k);
            let samples = trials.unwrap_or(single + 10);
            let mut rng = SeededRng::new(seed);
            let mut list = Vec::with_capacity(cones.max(1));
            for i in 0..cones.max(1) {
                let p = random_projection(n, k, &mut rng)?;
                let theta = if i == 0 { 0.0 } else { rng.uniform_in(0.0, std::f64::consts::TAU) };
                list.push((p, theta));
            }
            let dimension = span_dimension(&list, space, samples, &mut rng)?;
            emit(
                json!({
                    "space": space,
                    "n": n,
                    "k": k,
                    "cones": list.len(),
                    "samples_per_cone": samples,
                    "dimension": dimension,
                    "single_cone_dimension": single,
                }),
                0,
                &out,
            )
        }
        Command::CheckMap { map, trials, tol, seed, out } => {
            check_tol(tol)?;
            let (t, k) = parse_map(&read_input(&map)?)?;
            t.require_bijective()?;
            let mut rng = SeededRng::new(seed);
            let par = preserves_pairs(&t, k, PairMode::Parallel, trials, tol, &mut rng)?;
            let tea = preserves_pairs(&t, k, PairMode::Tea, trials, tol, &mut rng)?;
            let flags = structural_flags(&t, trials.clamp(1, 50), &mut rng)?;
            let iso = is_scalar_isometry(&t, k, trials.clamp(1, 50), &mut rng)?;
            let passed = par.passed() && tea.passed();
            emit(
                json!({
                    "passed": passed,
                    "parallel": preservation_json(&par),
                    "tea": preservation_json(&tea),
                    "flags": flags,
                    "isometry": iso,
                }),
                u8::from(!passed),
                &out,
            )
        }
        Command::ClassifyMap { map, tol, out } => {
            check_tol(tol)?;
            let (t, k) = parse_map(&read_input(&map)?)?;
            t.require_bijective()?;
            match recover_form(&t, k, tol) {
                Some(form) => {
                    let residual = canonical_to_map(&form, t.n(), k)?.operator_distance(&t);
                    emit(
                        json!({
                            "result": "canonical",
                            "form": CanonicalFormJson::from_form(&form),
                            "residual": residual,
                        }),
                        0,
                        &out,
                    )
                }
                None => emit(json!({ "result": "non-canonical" }), 1, &out),
            }
        }
        Command::FuzzMap { map, mode, budget, tol, seed, out } => {
            check_tol(tol)?;
            let (t, k) = parse_map(&read_input(&map)?)?;
            let mut rng = SeededRng::new(seed);
            let opts = SearchOptions { budget, tol, ..SearchOptions::default() };
            match find_violation(&t, k, mode.into(), opts, &mut rng)? {
                Some(v) => emit(
                    json!({
                        "violation": {
                            "A": MatrixJson::from_matrix(&v.a),
                            "B": MatrixJson::from_matrix(&v.b),
                            "source": verdict_json(&v.source),
                            "image": verdict_json(&v.image),
                            "evaluations": v.evaluations,
                        }
                    }),
                    1,
                    &out,
                ),
                None => emit(json!({ "violation": null, "budget": budget }), 0, &out),
            }
        }
        Command::Verify { n, k, space, trials, budget, seed, out } => {
            let summary = verify::run(n, k, space, trials, budget, seed)?;
            let passed = summary.passed;
            emit(serde_json::to_value(summary).expect("serializable"), u8::from(!passed), &out)
        }
        Command::Omega { parts, k, pairs, out } => {
            let n = parts.n();
            let (count, bound) = if pairs {
                let count = omega_hat_count(&parts, k)?;
                (count, binomial(n, k) / 2)
            } else {
                (omega_count(&parts, k)?, binomial(n, k))
            };
            emit(json!({ "count": count, "bound": bound, "equality": count == bound }), 0, &out)
        }
        Command::Sample { kind, n, k, seed, out } => {
            let kind = match kind {
                Kind::Ginibre => SampleKind::Ginibre,
                Kind::Gue => SampleKind::GueHermitian,
                Kind::Unitary => SampleKind::HaarUnitary,
                Kind::Projection => SampleKind::RankKProjection,
            };
            let v = match random_sample(kind, n, k, seed)? {
                Sample::Matrix(a) => serde_json::to_value(MatrixJson::from_matrix(&a)),
                Sample::Projection(p) => serde_json::to_value(ProjectionJson::from_projection(&p)),
            };
            emit(v.expect("serializable"), 0, &out)
        }
        Command::MakeMap { family, n, k, space, seed, with_form, out } => {
            let family = parse_family(&family)?;
            let mut rng = SeededRng::new(seed);
            let form = random_form(family, space, n, k, &mut rng)?;
            let t = canonical_to_map(&form, n, k)?;
            let map = serde_json::to_value(MapJson::from_map(&t, k)).expect("serializable");
            let v = if with_form { json!({ "map": map, "form": CanonicalFormJson::from_form(&form) }) } else { map };
            emit(v, 0, &out)
        }
    })
}

fn pair_command(args: PairArgs, tea: bool) -> Result<Emit, Failure> {
    check_tol(args.tol)?;
    let a = read_matrix(&args.a, args.space)?;
    let b = read_matrix(&args.b, args.space)?;
    let v = if tea {
        is_tea(&a, &b, args.k, args.space, args.tol)?
    } else {
        is_parallel(&a, &b, args.k, args.space, args.tol)?
    };
    Ok(emit(verdict_json(&v), u8::from(!v.holds), &args.out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|e| {
        match &e.out {
            Some(path) => fs::write(path, &e.text).map_err(|err| Failure(format!("{}: {err}", path.display())))?,
            None => io::stdout().write_all(e.text.as_bytes()).map_err(|err| Failure(format!("stdout: {err}")))?,
        }
        Ok(e.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
