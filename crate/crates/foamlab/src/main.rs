//! foamlab CLI: validate cover/foam documents, run the family pipeline,
//! and enumerate small families.
//!
//! Exit codes: 0 ok, 1 validation or mathematical failure, 2 parse or
//! schema error, 3 guardrail exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use foamlab::error::Error;
use foamlab::famforge::{build_family, LiftPolicy};
use foamlab::foamkit::{assemble_compressed, FoamClass};
use foamlab::io::{
    family_report, render_family_text, ComponentValidation, FoamValidation, InputDocument,
    ValidationReport, CONVENTION, FORMAT_VERSION,
};
use foamlab::realcover::{
    admissible_component, involution_lifts, validate_monodromy,
};
use foamlab::survey::{enumerate_families, extremal_report, EnumLimits};

#[derive(Parser)]
#[command(name = "foamlab", version, about = "combinatorial Klein foams and their families of real forms")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a document: monodromy, lifts, admissibility, foam conditions.
    Validate { file: PathBuf },
    /// Build the equipped family and report all invariants and bounds.
    Family {
        file: PathBuf,
        #[arg(long, default_value = "text", value_parser = ["text", "json"])]
        report: String,
    },
    /// Enumerate families at small parameters.
    Enumerate {
        #[arg(long, default_value_t = foamlab::survey::DEFAULT_MAX_DEGREE)]
        degree: usize,
        #[arg(long, default_value_t = foamlab::survey::DEFAULT_MAX_POINTS)]
        points: usize,
        #[arg(long, default_value_t = foamlab::survey::DEFAULT_MAX_COMPONENTS)]
        components: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_for(err: &Error) -> ExitCode {
    match err {
        Error::Parse(_) => ExitCode::from(2),
        Error::Guardrail(_) | Error::ClosureLimit(_) | Error::CellLimit(_, _) => {
            ExitCode::from(3)
        }
        _ => ExitCode::from(1),
    }
}

fn read_document(path: &PathBuf) -> Result<InputDocument, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    InputDocument::parse(&text)
}

fn cmd_validate(path: &PathBuf) -> Result<bool, Error> {
    let doc = read_document(path)?;
    let comps = doc.to_components()?;
    let mut reports = Vec::new();
    let mut all_pass = true;
    let mut resolved = Vec::new();
    for c in &comps {
        let rep = validate_monodromy(c);
        let mut cv = ComponentValidation {
            name: c.name.clone(),
            monodromy_valid: rep.monodromy_valid(),
            failures: rep.failures().iter().map(|s| s.to_string()).collect(),
            lift_count: None,
            lift_valid: None,
            admissible: None,
        };
        if !rep.monodromy_valid() {
            all_pass = false;
            reports.push(cv);
            continue;
        }
        let chosen = match &c.lift {
            Some(t) => {
                let ok = rep.lift_involution == Some(true) && rep.lift_condition == Some(true);
                cv.lift_valid = Some(ok);
                if !ok {
                    all_pass = false;
                    reports.push(cv);
                    continue;
                }
                t.clone()
            }
            None => {
                let lifts = involution_lifts(c)?;
                cv.lift_count = Some(lifts.len());
                match lifts.into_iter().next() {
                    Some(t) => t,
                    None => {
                        all_pass = false;
                        reports.push(cv);
                        continue;
                    }
                }
            }
        };
        let adm = admissible_component(c, &chosen)?;
        cv.admissible = Some(adm);
        if !adm {
            all_pass = false;
        }
        resolved.push(c.clone().with_lift(chosen));
        reports.push(cv);
    }

    let foam = if all_pass && !resolved.is_empty() {
        match assemble_compressed(doc.base(), &resolved) {
            Ok(f) => {
                let class = f.classification();
                if class != FoamClass::Foam {
                    all_pass = false;
                }
                Some(FoamValidation {
                    classification: match class {
                        FoamClass::Foam => "foam",
                        FoamClass::Pseudofoam => "pseudofoam",
                        FoamClass::Invalid => "invalid",
                    }
                    .to_string(),
                    cond_a: f.report.cond_a,
                    cond_b: f.report.cond_b,
                    cond_c: f.report.cond_c,
                    cond_d: f.report.cond_d,
                    connected: f.report.connected,
                })
            }
            Err(Error::Guardrail(g)) => return Err(Error::Guardrail(g)),
            Err(_) => {
                all_pass = false;
                None
            }
        }
    } else {
        None
    };

    let report = ValidationReport {
        version: FORMAT_VERSION.to_string(),
        convention: CONVENTION.to_string(),
        components: reports,
        foam,
        all_pass,
    };
    print!("{}", report.render_text());
    Ok(all_pass)
}

fn cmd_family(path: &PathBuf, format: &str) -> Result<(), Error> {
    let doc = read_document(path)?;
    let comps = doc.to_components()?;
    let family = build_family(doc.base(), &comps, LiftPolicy::FirstValid)?;
    let report = family_report(&family)?;
    if format == "json" {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable report")
        );
    } else {
        print!("{}", render_family_text(&report));
    }
    Ok(())
}

/// Parses `FOAMLAB_LIMITS` ("degree=5,points=6,components=3"): presence
/// unlocks the guardrails and supplies new ceilings.
fn env_limits(base: EnumLimits) -> Result<EnumLimits, Error> {
    let raw = match std::env::var("FOAMLAB_LIMITS") {
        Ok(v) if !v.trim().is_empty() => v,
        _ => return Ok(base),
    };
    let (mut cap_degree, mut cap_points, mut cap_components) =
        (usize::MAX, usize::MAX, usize::MAX);
    for part in raw.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad FOAMLAB_LIMITS entry '{part}'")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad FOAMLAB_LIMITS value '{value}'")))?;
        match key.trim() {
            "degree" => cap_degree = value,
            "points" => cap_points = value,
            "components" => cap_components = value,
            other => {
                return Err(Error::Parse(format!(
                    "unknown FOAMLAB_LIMITS key '{other}'"
                )))
            }
        }
    }
    let mut limits = base;
    // The env var raises the guardrails up to its own ceilings.
    limits.unlocked = limits.max_degree <= cap_degree
        && limits.points <= cap_points
        && limits.max_components <= cap_components;
    Ok(limits)
}

fn cmd_enumerate(
    degree: usize,
    points: usize,
    components: usize,
    out: Option<&PathBuf>,
) -> Result<(), Error> {
    let requested = EnumLimits {
        max_degree: degree,
        points,
        max_components: components,
        unlocked: false,
    };
    let limits = env_limits(requested)?;
    let families = enumerate_families(&limits)?;
    let extremal = extremal_report(&families)?;

    let records: Vec<serde_json::Value> = families
        .iter()
        .map(|f| {
            let report = family_report(f)?;
            Ok(serde_json::to_value(report).expect("serializable report"))
        })
        .collect::<Result<_, Error>>()?;
    let catalog = serde_json::json!({
        "version": FORMAT_VERSION,
        "convention": CONVENTION,
        "limits": {
            "max_degree": limits.max_degree,
            "points": limits.points,
            "max_components": limits.max_components,
        },
        "family_count": families.len(),
        "families": records,
        "extremal": extremal.rows.iter().map(|row| serde_json::json!({
            "family_index": row.family_index,
            "r": row.r,
            "hat_genus": row.hat_genus,
            "sum_k": row.sum_k,
            "sum_k_hat": row.sum_k_hat,
            "margin": row.margin,
            "all_nonconjugate": row.all_nonconjugate,
        })).collect::<Vec<_>>(),
        "extremal_note": extremal.note,
    });
    let text = serde_json::to_string_pretty(&catalog).expect("serializable catalog");
    match out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    eprintln!("enumerated {} families", families.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Validate { file } => cmd_validate(file).map(|ok| {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }),
        Cmd::Family { file, report } => {
            cmd_family(file, report).map(|()| ExitCode::SUCCESS)
        }
        Cmd::Enumerate {
            degree,
            points,
            components,
            out,
        } => cmd_enumerate(*degree, *points, *components, out.as_ref())
            .map(|()| ExitCode::SUCCESS),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}
