use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use hkr_verifier::catalog;
use hkr_verifier::lie::LieAlgebra;
use hkr_verifier::series;
use hkr_verifier::verify::{self, ReportStream, DEFAULT_MAX_DEGREE, MAX_HODGE_DIM};

const DEGREE_CAP: usize = 6;
const WEIGHT_CAP: usize = 12;

#[derive(Parser)]
#[command(name = "hkr-verify", version, about = "Exact checks of the PBW/Duflo and Hodge-model identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesKind {
    Todd,
    SqrtTodd,
    Ch,
    Mukai,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the Lie-side diagram, phi = theta, invariants and adjunction.
    VerifyLie {
        /// Catalog name (abelian<n>, heisenberg3, sl2, gl2) or a JSON file.
        #[arg(long)]
        algebra: String,
        /// Representation name, or `all` for every catalog representation.
        #[arg(long, default_value = "all")]
        rep: String,
        /// Defaults to 4; capped at 6 unless VERIFIER_MAX_DEGREE raises the cap.
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Print wall-clock time to standard error.
        #[arg(long)]
        timing: bool,
    },
    /// Seeded and exhaustive sweeps of the bi-exterior Hodge model.
    VerifyHodge {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=MAX_HODGE_DIM as i64))]
        dim: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        timing: bool,
    },
    /// Print a characteristic-class series in canonical form.
    Series {
        #[arg(value_enum)]
        kind: SeriesKind,
        #[arg(long, default_value_t = series::DEFAULT_WEIGHT)]
        weight: usize,
        /// Rank of the bundle for `ch` and `mukai`.
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn degree_cap() -> Result<usize, String> {
    match std::env::var("VERIFIER_MAX_DEGREE") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("VERIFIER_MAX_DEGREE must be a non-negative integer, got {v:?}")),
        Err(_) => Ok(DEGREE_CAP),
    }
}

fn emit(stream: &ReportStream, format: Format, started: Option<Instant>) -> ExitCode {
    let body = match format {
        Format::Json => stream.to_json_lines(),
        Format::Text => stream.to_text_lines(),
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(2);
    }
    for r in stream.failures() {
        eprintln!("FAIL {} {}: {}", r.suite, r.instance, r.detail);
    }
    eprintln!("{}", stream.summary());
    if let Some(t) = started {
        eprintln!("elapsed: {:.3}s", t.elapsed().as_secs_f64());
    }
    if stream.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn load_algebra(spec: &str) -> Result<(String, LieAlgebra), String> {
    let path = Path::new(spec);
    if path.exists() {
        let alg = LieAlgebra::from_json_file(path).map_err(|e| e.to_string())?;
        let name = path.file_stem().map_or("custom".into(), |s| s.to_string_lossy().into_owned());
        return Ok((name, alg));
    }
    let alg = catalog::algebra(spec).map_err(|e| e.to_string())?;
    Ok((spec.to_string(), alg))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::VerifyLie {
            algebra,
            rep,
            max_degree,
            format,
            timing,
        } => {
            let started = Instant::now();
            let cap = match degree_cap() {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            let max_degree = max_degree.unwrap_or(DEFAULT_MAX_DEGREE.min(cap));
            if max_degree > cap {
                return usage(format!(
                    "--max-degree {max_degree} exceeds the cap {cap} (set VERIFIER_MAX_DEGREE to raise it)"
                ));
            }
            let (name, alg) = match load_algebra(&algebra) {
                Ok(x) => x,
                Err(e) => return usage(e),
            };
            let reps = if rep == "all" {
                catalog::representations(&alg, 5)
                    .into_iter()
                    .map(|(n, r)| (n.to_string(), r))
                    .collect()
            } else {
                match catalog::representation(&alg, &rep) {
                    Ok(r) => vec![(rep.clone(), r)],
                    Err(e) => return usage(e),
                }
            };
            let stream = ReportStream::new(verify::verify_lie(&name, &alg, &reps, max_degree));
            emit(&stream, format, timing.then_some(started))
        }
        Command::VerifyHodge {
            dim,
            seed,
            cases,
            format,
            timing,
        } => {
            let started = Instant::now();
            match verify::verify_hodge(dim as usize, seed, cases) {
                Ok(reports) => emit(&ReportStream::new(reports), format, timing.then_some(started)),
                Err(e) => usage(e),
            }
        }
        Command::Series {
            kind,
            weight,
            rank,
            format,
        } => {
            if weight > WEIGHT_CAP {
                return usage(format!("--weight {weight} exceeds the cap {WEIGHT_CAP}"));
            }
            let s = match kind {
                SeriesKind::Todd => series::todd(weight),
                SeriesKind::SqrtTodd => series::sqrt_todd(weight),
                SeriesKind::Ch => series::chern_character(rank, weight),
                SeriesKind::Mukai => series::mukai_vector(rank, weight),
            };
            match format {
                Format::Text => println!("{s}"),
                Format::Json => println!("{}", s.to_json()),
            }
            ExitCode::SUCCESS
        }
    }
}
