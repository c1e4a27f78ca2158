//! Command-line front end: JSON files in, one line of deterministic JSON out.
//!
//! Exit codes: 0 on success (including negative decisions like
//! {"equal": false}), 1 when a precondition fails (e.g. a lower-dimensional
//! body), 2 when input cannot be read or parsed. Failures print a one-line
//! {"error": ...} object on standard output.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use hadwiger_core::io::{
    dirs_json, evaluation_json, frame_json, invariant_table_json, parse_body, parse_certificate,
    parse_coefficient_table, parse_polytope,
};
use hadwiger_core::{
    equidecomposable, evaluate_valuation, homogeneous_components, invariant_table,
    surface_area_measure, tight_frames, verify_certificate, Error, Verdict, MAX_DIM,
};

#[derive(Parser)]
#[command(
    name = "hadwiger",
    version,
    about = "Exact translation-invariant valuations on rational polytopes",
    long_about = "All numeric input is exact: rationals are JSON strings like \"-3/4\"; \
                  a bare number in an exact field is rejected. Floats appear only in \
                  output fields named \"euclid\" or \"degrees\".\n\n\
                  File formats:\n  \
                  polytope     {\"dim\": 2, \"vertices\": [[\"0\",\"0\"], [\"1\",\"0\"], [\"0\",\"1\"]]}\n  \
                  body         a polytope, or {\"pieces\": [<polytope>, ...]}\n  \
                  coefficients {\"n\": 2, \"entries\": [{\"frame\": [[\"1\",\"1\"]], \"coeff\": \"1\"}]}\n  \
                  certificate  {\"pieces\": [<polytope>, ...], \"translations\": [[\"-1\",\"1\"], ...]}"
)]
struct Cli {
    /// Largest ambient dimension accepted from input files.
    #[arg(long, global = true, default_value_t = MAX_DIM)]
    max_dim: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List all tight frames of a polytope, in canonical order.
    TightFrames { polytope: PathBuf },
    /// Compute the invariant table of a full-dimensional body.
    Invariants { body: PathBuf },
    /// Decide whether two bodies are translative-equidecomposable.
    Equal { a: PathBuf, b: PathBuf },
    /// Evaluate the valuation given by a coefficient table on a body.
    Evaluate { body: PathBuf, coefficients: PathBuf },
    /// Split the valuation into its homogeneous degree components.
    Homogeneous { body: PathBuf, coefficients: PathBuf },
    /// Facet areas of a polytope by outward normal direction.
    SurfaceMeasure { polytope: PathBuf },
    /// Check a cut-and-translate certificate between two bodies.
    Verify {
        a: PathBuf,
        b: PathBuf,
        certificate: PathBuf,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = if matches!(e, Error::Parse(_)) { 2 } else { 1 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    serde_json::from_str(&text).map_err(|e| Failure {
        code: 2,
        message: format!("invalid JSON in {}: {e}", path.display()),
    })
}

fn check_dim(n: usize, max_dim: usize) -> Result<(), Failure> {
    if n > max_dim {
        return Err(Failure {
            code: 1,
            message: format!("ambient dimension {n} exceeds --max-dim {max_dim}"),
        });
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<Value, Failure> {
    match &cli.command {
        Command::TightFrames { polytope } => {
            let p = parse_polytope(&read_json(polytope)?)?;
            check_dim(p.ambient_dim(), cli.max_dim)?;
            let frames: Vec<Value> = tight_frames(&p).iter().map(frame_json).collect();
            Ok(json!({ "n": p.ambient_dim(), "frames": frames }))
        }
        Command::Invariants { body } => {
            let b = parse_body(&read_json(body)?)?;
            check_dim(b.ambient_dim(), cli.max_dim)?;
            Ok(invariant_table_json(&invariant_table(&b)?))
        }
        Command::Equal { a, b } => {
            let a = parse_body(&read_json(a)?)?;
            let b = parse_body(&read_json(b)?)?;
            check_dim(a.ambient_dim().max(b.ambient_dim()), cli.max_dim)?;
            let (equal, witnesses) = equidecomposable(&a, &b)?;
            let witnesses: Vec<Value> = witnesses.iter().map(dirs_json).collect();
            Ok(json!({ "equal": equal, "witnesses": witnesses }))
        }
        Command::Evaluate { body, coefficients } => {
            let b = parse_body(&read_json(body)?)?;
            check_dim(b.ambient_dim(), cli.max_dim)?;
            let c = parse_coefficient_table(&read_json(coefficients)?)?;
            Ok(evaluation_json(&evaluate_valuation(&b, &c)?))
        }
        Command::Homogeneous { body, coefficients } => {
            let b = parse_body(&read_json(body)?)?;
            check_dim(b.ambient_dim(), cli.max_dim)?;
            let c = parse_coefficient_table(&read_json(coefficients)?)?;
            let decomposition = homogeneous_components(&b, &c)?;
            let degrees: serde_json::Map<String, Value> = decomposition
                .degrees
                .iter()
                .map(|(deg, euclid)| (deg.to_string(), json!(euclid)))
                .collect();
            Ok(json!({ "degrees": degrees }))
        }
        Command::SurfaceMeasure { polytope } => {
            let p = parse_polytope(&read_json(polytope)?)?;
            check_dim(p.ambient_dim(), cli.max_dim)?;
            let entries: Vec<Value> = surface_area_measure(&p)?
                .iter()
                .map(|e| {
                    json!({
                        "frame": dirs_json(&e.frame),
                        "coord": hadwiger_core::format_rational(&e.coordinate_area),
                        "gram": hadwiger_core::format_rational(&e.gram),
                        "euclid": e.euclidean_approx,
                    })
                })
                .collect();
            Ok(json!({ "n": p.ambient_dim(), "entries": entries }))
        }
        Command::Verify { a, b, certificate } => {
            let a = parse_body(&read_json(a)?)?;
            let b = parse_body(&read_json(b)?)?;
            check_dim(a.ambient_dim().max(b.ambient_dim()), cli.max_dim)?;
            let cert = parse_certificate(&read_json(certificate)?)?;
            match verify_certificate(&a, &b, &cert)? {
                Verdict::Accepted => Ok(json!({ "accepted": true })),
                Verdict::Rejected(reason) => {
                    Ok(json!({ "accepted": false, "reason": reason }))
                }
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match execute(&cli) {
        Ok(value) => {
            println!("{value}");
            0
        }
        Err(failure) => {
            println!("{}", json!({ "error": failure.message }));
            failure.code
        }
    };
    std::process::exit(code);
}
