//! `milef`: generate, verify and transform mixed-integer extended formulations.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 a verification or check
//! failed, 3 a resource cap was hit.

mod input;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use milef_core::caps::{caps, set_caps};
use milef_core::exactgeom::{AffineMap, HPolyhedron};
use milef_core::lattice::{lattice_width, WidthCertificate};
use milef_core::metrics::{lp_gap_max, lp_gap_min, rdist};
use milef_core::milef::{milef_to_lef, mixed_integer_hull, mixed_integer_hull_image, slice_family, LefReport, Milef};
use milef_core::zoo::{
    bimodularity_check, generate, mutate_entry, odd_cut_conic_matrix, verify_bundle, BimodularityReport, Family,
};
use milef_core::{instances, Error, Rational};
use serde::Serialize;

use input::{read_body, read_bundle, read_matrix, read_milef, read_polytope, CliError};

#[derive(Parser, Debug)]
#[command(name = "milef", version, about = "Exact mixed-integer extended formulations")]
struct RunConfig {
    /// Cap overrides `key=value,...`, applied after the MILEF_CAPS environment variable.
    #[arg(long, global = true)]
    caps: Option<String>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a formulation bundle for a family over K_n.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Embed the oracle's vertex list in the bundle.
        #[arg(long)]
        with_oracle: bool,
    },
    /// Compare a bundle's mixed-integer hull with its oracle.
    Verify { bundle: PathBuf },
    /// Vertices of the mixed-integer hull (projected by π unless --lifted).
    Mihull {
        input: PathBuf,
        #[arg(long)]
        lifted: bool,
    },
    /// Slicing family with its certificate.
    Slice {
        input: PathBuf,
        #[command(flatten)]
        delta: DeltaArg,
    },
    /// Linear extended formulation approximating the formulation's polytope.
    Lef {
        input: PathBuf,
        #[command(flatten)]
        delta: DeltaArg,
        /// Known error of the input formulation, as p/q.
        #[arg(long, default_value = "0", value_parser = parse_rational)]
        epsilon: Rational,
    },
    /// Relative distance rdist(A, B) for A ⊆ B.
    Rdist { a: PathBuf, b: PathBuf },
    /// Maximization or minimization LP gap between A ⊆ B.
    Gap {
        #[arg(long, conflicts_with = "min", required_unless_present = "min")]
        max: bool,
        #[arg(long)]
        min: bool,
        a: PathBuf,
        b: PathBuf,
    },
    /// Lattice width with a witness direction.
    Width {
        input: PathBuf,
        /// Direction box ‖v‖∞ ≤ v_max (default from caps).
        #[arg(long)]
        v_max: Option<i64>,
    },
    /// Bimodularity sweep over all maximal square submatrices.
    Bimod {
        /// Matrix JSON (list of rows of "p/q" strings).
        #[arg(required_unless_present = "conic")]
        matrix: Option<PathBuf>,
        /// Use the conic odd-cut matrix over K_n instead of a file.
        #[arg(long)]
        conic: Option<usize>,
        /// Add the unit row that makes the conic matrix full column rank.
        #[arg(long, requires = "conic")]
        pointed: bool,
        /// Replace the first entry of absolute value FROM by TO before the sweep.
        #[arg(long, value_parser = parse_mutation)]
        mutate: Option<(i64, i64)>,
    },
    /// A seeded random bounded formulation with ℓ ≤ 4 continuous and k ≤ ℓ integer coordinates.
    Random {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct DeltaArg {
    /// Target relative distance, as p/q with p/q > 0.
    #[arg(long, value_parser = parse_rational)]
    delta: Rational,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| format!("`{s}` is not a rational p/q: {e}"))
}

fn parse_mutation(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("`{s}` is not FROM:TO"))?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("`{x}`: {e}"));
    Ok((p(a)?, p(b)?))
}

/// A report plus whether the run counts as a failed check.
struct Outcome {
    json: String,
    failed: bool,
}

impl Outcome {
    fn ok<T: Serialize>(v: &T) -> Result<Outcome, CliError> {
        Self::with_status(v, false)
    }

    fn with_status<T: Serialize>(v: &T, failed: bool) -> Result<Outcome, CliError> {
        let json = serde_json::to_string_pretty(v).map_err(|e| CliError::Usage(format!("serializing output: {e}")))?;
        Ok(Outcome { json, failed })
    }
}

#[derive(Serialize)]
struct LefOutput {
    report: LefReport,
    lef: HPolyhedron,
    proj: AffineMap,
}

#[derive(Serialize)]
struct BimodOutput {
    is_bimodular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    mutated_entry: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<BimodularityReport>,
    /// Set when the matrix is rejected before the sweep (e.g. rank deficient).
    #[serde(skip_serializing_if = "Option::is_none")]
    rejected: Option<String>,
}

fn require_positive(delta: &Rational) -> Result<(), CliError> {
    if delta.is_positive() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--delta must be positive, got {delta}")))
    }
}

fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut c = caps();
    if let Ok(env) = std::env::var("MILEF_CAPS") {
        c = c.apply_overrides(&env).map_err(|e| CliError::Usage(format!("MILEF_CAPS: {e}")))?;
    }
    if let Some(s) = &cfg.caps {
        c = c.apply_overrides(s).map_err(|e| CliError::Usage(format!("--caps: {e}")))?;
    }
    set_caps(c);

    match &cfg.command {
        Command::Gen { family, n, with_oracle } => {
            let mut b = generate(*family, *n)?;
            if *with_oracle {
                b = b.with_oracle()?;
            }
            Outcome::ok(&b)
        }
        Command::Verify { bundle } => {
            let b = read_bundle(bundle)?;
            let r = verify_bundle(&b)?;
            Outcome::with_status(&r, !r.pass)
        }
        Command::Mihull { input, lifted } => {
            let m = read_milef(input)?;
            let v = if *lifted { mixed_integer_hull(&m)? } else { mixed_integer_hull_image(&m)? };
            Outcome::ok(&v)
        }
        Command::Slice { input, delta } => {
            require_positive(&delta.delta)?;
            let m = read_milef(input)?;
            let cert = slice_family(&m.q, &m.sigma, &delta.delta)?;
            Outcome::with_status(&cert, !cert.holds())
        }
        Command::Lef { input, delta, epsilon } => {
            require_positive(&delta.delta)?;
            let m = read_milef(input)?;
            let res = milef_to_lef(&m, &delta.delta, epsilon)?;
            let failed = !res.report.holds();
            Outcome::with_status(&LefOutput { report: res.report, lef: res.lef, proj: res.proj }, failed)
        }
        Command::Rdist { a, b } => {
            let (a, b) = (read_polytope(a)?, read_polytope(b)?);
            Outcome::ok(&rdist(&a, &b)?)
        }
        Command::Gap { max, a, b, .. } => {
            let (a, b) = (read_polytope(a)?, read_polytope(b)?);
            let g = if *max { lp_gap_max(&a, &b)? } else { lp_gap_min(&a, &b)? };
            Outcome::ok(&g)
        }
        Command::Width { input, v_max } => {
            let h = read_body(input)?.into_h()?;
            let w: WidthCertificate = lattice_width(&h, v_max.unwrap_or(caps().v_max))?;
            Outcome::ok(&w)
        }
        Command::Bimod { matrix, conic, pointed, mutate } => {
            let mut m = match (conic, matrix) {
                (Some(n), _) => odd_cut_conic_matrix(*n, *pointed),
                (None, Some(path)) => read_matrix(path)?,
                (None, None) => return Err(CliError::Usage("give a matrix file or --conic N".into())),
            };
            let mut mutated_entry = None;
            if let Some((from, to)) = mutate {
                let (mm, at) = mutate_entry(&m, *from, *to)
                    .ok_or_else(|| CliError::Usage(format!("no entry of absolute value {from} to mutate")))?;
                m = mm;
                mutated_entry = Some(at);
            }
            match bimodularity_check(&m) {
                Ok(r) => {
                    let ok = r.is_bimodular;
                    Outcome::with_status(&BimodOutput { is_bimodular: ok, mutated_entry, report: Some(r), rejected: None }, !ok)
                }
                Err(Error::Precondition(msg)) => Outcome::with_status(
                    &BimodOutput { is_bimodular: false, mutated_entry, report: None, rejected: Some(msg) },
                    true,
                ),
                Err(e) => Err(e.into()),
            }
        }
        Command::Random { ell, k, seed } => {
            if *ell == 0 || *ell > 4 || *k > *ell {
                return Err(CliError::Usage(format!("need 1 ≤ ell ≤ 4 and k ≤ ell, got ell={ell}, k={k}")));
            }
            let mut rng = instances::rng(*seed);
            let (q, sigma) = instances::random_milef_domain(&mut rng, *ell, *k);
            Outcome::ok(&Milef::new(q, sigma, AffineMap::identity(*ell))?)
        }
    }
}

fn write_output(path: Option<&Path>, json: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, format!("{json}\n")),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{json}")
        }
    }
}

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cfg) {
        Ok(o) => {
            if let Err(e) = write_output(cfg.out.as_deref(), &o.json) {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    return ExitCode::from(if o.failed { 2 } else { 0 });
                }
                eprintln!("error: writing output: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(if o.failed { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
