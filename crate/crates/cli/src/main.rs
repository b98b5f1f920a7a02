//! Command-line surface: parse a data-distribution document, dispatch the
//! requested computation, and render exact results as text tables or JSON.
//!
//! Exit codes: 0 success (and, for diagnostic commands, data consistent with
//! monotonicity); 2 exogeneity fits but monotonicity is refuted; 3 even
//! exogeneity is refuted; 4 input or validation error; 5 a cross-check
//! between the closed forms and the LP engine failed.

mod render;
mod schema;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use rayon::prelude::*;

use ivbounds::analysis::{
    compare_assumption_sets, consistency_report, identifying_content, sample_consistent,
    sharpness_witness, ConsistencyReport,
};
use ivbounds::closed_form::{bounds_table_permissive, BoundsTable};
use ivbounds::constraints::{build_lp, event_functional};
use ivbounds::lp::{enumerate_dual_vertices, solve, Direction};
use ivbounds::rational::{format_rational, parse_rational};
use ivbounds::{AssumptionSet, DataDistribution, Event, Interval};

use render::RenderableBounds;
use schema::{event_arg, parse_event_arg, EventBoundsDoc, IntervalDoc};

const EXIT_EM_INCONSISTENT: u8 = 2;
const EXIT_E_INFEASIBLE: u8 = 3;
const EXIT_INVALID: u8 = 4;
const EXIT_MISMATCH: u8 = 5;

#[derive(Parser)]
#[command(
    name = "ivbounds",
    version,
    about = "Exact sharp bounds on potential-outcome distributions in binary instrument models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AssumptionsArg {
    /// Instrument exogeneity only.
    E,
    /// Exogeneity plus instrument monotonicity.
    Em,
}

impl From<AssumptionsArg> for AssumptionSet {
    fn from(arg: AssumptionsArg) -> Self {
        match arg {
            AssumptionsArg::E => AssumptionSet::ExogeneityOnly,
            AssumptionsArg::Em => AssumptionSet::ExogeneityPlusMonotonicity,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Min,
    Max,
}

impl From<DirectionArg> for Direction {
    fn from(arg: DirectionArg) -> Self {
        match arg {
            DirectionArg::Min => Direction::Minimize,
            DirectionArg::Max => Direction::Maximize,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Consistency triage: margins, model feasibility, noncompliance.
    Check { input: PathBuf },
    /// Identified intervals for outcome events under both assumption sets.
    Bounds {
        input: PathBuf,
        /// Restrict output to one event (cells as y0y1 digits, e.g. `01,10`).
        #[arg(long)]
        event: Option<String>,
        /// Compute through the LP engine instead of the closed forms.
        #[arg(long)]
        lp_only: bool,
        /// Evaluate the closed forms even when consistency fails (diagnostic).
        #[arg(long)]
        permissive: bool,
        /// Annotate intervals with approximate decimals.
        #[arg(long)]
        decimal: bool,
    },
    /// Does instrument monotonicity shrink the identified set here?
    Content { input: PathBuf },
    /// A mass function attaining a target probability for an event.
    Witness {
        input: PathBuf,
        /// Event cells as y0y1 digits, e.g. `01`.
        #[arg(long)]
        event: String,
        /// Target probability, an exact rational such as `1/4` or `0.25`.
        #[arg(long)]
        value: String,
        #[arg(long, value_enum, default_value_t = AssumptionsArg::Em)]
        assumptions: AssumptionsArg,
    },
    /// Draw a seeded consistent data distribution.
    Sample {
        #[arg(long)]
        seed: u64,
        /// All probabilities are fractions over this denominator.
        #[arg(long)]
        denominator: u64,
        #[arg(long, value_enum, default_value_t = AssumptionsArg::Em)]
        class: AssumptionsArg,
        /// Include the generating mass function in the output.
        #[arg(long)]
        with_q: bool,
    },
    /// Cross-check every closed-form endpoint against the LP engine.
    Verify {
        /// Check this distribution; otherwise check `--count` sampled ones.
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 360)]
        denominator: u64,
        #[arg(long)]
        count: Option<u64>,
    },
    /// Enumerate the dual vertices behind one event's bound.
    Dual {
        input: PathBuf,
        #[arg(long)]
        event: String,
        #[arg(long, value_enum, default_value_t = DirectionArg::Max)]
        direction: DirectionArg,
        #[arg(long, value_enum, default_value_t = AssumptionsArg::Em)]
        assumptions: AssumptionsArg,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_INVALID,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("error: {}", failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}

fn load_distribution(path: &Path) -> Result<DataDistribution, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_INVALID, format!("cannot read {}: {e}", path.display())))?;
    DataDistribution::from_json_str(&text).map_err(|e| fail(EXIT_INVALID, e.to_string()))
}

/// Refuses data that the requested analysis cannot serve: exit 3 when even
/// exogeneity is refuted, exit 2 when only monotonicity is.
fn consistency_gate(report: &ConsistencyReport) -> Result<(), Failure> {
    if !report.e_feasible {
        return Err(fail(
            EXIT_E_INFEASIBLE,
            "no mass function reproduces these data: the exogeneity model is refuted",
        ));
    }
    if !report.em_consistent {
        let margins: Vec<String> =
            report.condition_margins.iter().map(format_rational).collect();
        return Err(fail(
            EXIT_EM_INCONSISTENT,
            format!(
                "instrument monotonicity is refuted: consistency margins ({}) must all be nonnegative",
                margins.join(", ")
            ),
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Check { input } => run_check(&input, cli.json),
        Command::Bounds { input, event, lp_only, permissive, decimal } => {
            run_bounds(&input, event.as_deref(), lp_only, permissive, decimal, cli.json)
        }
        Command::Content { input } => run_content(&input, cli.json),
        Command::Witness { input, event, value, assumptions } => {
            run_witness(&input, &event, &value, assumptions.into(), cli.json)
        }
        Command::Sample { seed, denominator, class, with_q } => {
            run_sample(seed, denominator, class.into(), with_q)
        }
        Command::Verify { input, seed, denominator, count } => {
            run_verify(input.as_deref(), seed, denominator, count, cli.json)
        }
        Command::Dual { input, event, direction, assumptions } => {
            run_dual(&input, &event, direction.into(), assumptions.into(), cli.json)
        }
    }
}

fn triage_code(report: &ConsistencyReport) -> u8 {
    if !report.e_feasible {
        EXIT_E_INFEASIBLE
    } else if !report.em_consistent {
        EXIT_EM_INCONSISTENT
    } else {
        0
    }
}

fn run_check(input: &Path, json: bool) -> Result<u8, Failure> {
    let p = load_distribution(input)?;
    let report = consistency_report(&p);
    if json {
        let margins: Vec<serde_json::Value> = render::margin_labels()
            .iter()
            .zip(&report.condition_margins)
            .map(|(label, value)| {
                serde_json::json!({"difference": label, "value": format_rational(value)})
            })
            .collect();
        let doc = serde_json::json!({
            "condition_margins": margins,
            "em_consistent": report.em_consistent,
            "e_feasible": report.e_feasible,
            "two_sided_noncompliance": report.two_sided_noncompliance,
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        print!("{}", render::render_check(&report));
    }
    Ok(triage_code(&report))
}

fn lp_interval(
    p: &DataDistribution,
    event: Event,
    assumptions: AssumptionSet,
) -> Option<Interval> {
    let spec = build_lp(p, assumptions);
    let f = event_functional(event);
    let lo = solve(&spec, &f, Direction::Minimize).ok()?.value;
    let hi = solve(&spec, &f, Direction::Maximize).ok()?.value;
    Some(Interval::new(lo, hi).expect("LP bounds are ordered probabilities"))
}

fn run_bounds(
    input: &Path,
    event: Option<&str>,
    lp_only: bool,
    permissive: bool,
    decimal: bool,
    json: bool,
) -> Result<u8, Failure> {
    let p = load_distribution(input)?;
    let selected = event
        .map(|text| parse_event_arg(text).map_err(|e| fail(EXIT_INVALID, e)))
        .transpose()?;
    let report = consistency_report(&p);
    if !report.e_feasible {
        return Err(fail(
            EXIT_E_INFEASIBLE,
            "no mass function reproduces these data: nothing to bound",
        ));
    }
    if !report.em_consistent && !lp_only && !permissive {
        return Err(fail(
            EXIT_EM_INCONSISTENT,
            "instrument monotonicity is refuted by these data; \
             rerun with --lp-only for exogeneity-only bounds or --permissive to \
             evaluate the formulas anyway",
        ));
    }

    let rows: Vec<RenderableBounds> = if lp_only {
        Event::all()
            .map(|ev| {
                let e = lp_interval(&p, ev, AssumptionSet::ExogeneityOnly);
                let em = if report.em_consistent {
                    lp_interval(&p, ev, AssumptionSet::ExogeneityPlusMonotonicity)
                } else {
                    None
                };
                let strict = match (&e, &em) {
                    (Some(e), Some(em)) => em.strictly_inside(e),
                    _ => false,
                };
                RenderableBounds { event: ev, exogeneity_only: e, with_monotonicity: em, strict }
            })
            .collect()
    } else {
        let table: BoundsTable = if report.em_consistent {
            compare_assumption_sets(&p).map_err(|e| fail(EXIT_INVALID, e.to_string()))?
        } else {
            eprintln!(
                "warning: consistency condition fails; formula values carry no sharpness guarantee"
            );
            bounds_table_permissive(&p)
        };
        table.entries().iter().map(RenderableBounds::from).collect()
    };

    let rows: Vec<RenderableBounds> = match selected {
        Some(ev) => rows.into_iter().filter(|r| r.event == ev).collect(),
        None => rows,
    };

    if json {
        let docs: Vec<EventBoundsDoc> = rows
            .iter()
            .map(|row| EventBoundsDoc {
                event: row.event.to_pairs(),
                exogeneity_only: row.exogeneity_only.as_ref().map(IntervalDoc::of),
                with_monotonicity: row.with_monotonicity.as_ref().map(IntervalDoc::of),
                strict: Some(row.strict),
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&docs).unwrap());
    } else {
        print!("{}", render::render_bounds_rows(&rows, decimal));
    }
    Ok(triage_code(&report))
}

fn run_content(input: &Path, json: bool) -> Result<u8, Failure> {
    let p = load_distribution(input)?;
    let report = consistency_report(&p);
    consistency_gate(&report)?;
    let content = identifying_content(&p).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    if json {
        let witnesses: Vec<serde_json::Value> = content
            .witnesses
            .iter()
            .map(|w| {
                serde_json::json!({
                    "i": u8::from(w.i),
                    "j": u8::from(w.j),
                    "noncompliance_mass": format_rational(&w.noncompliance_mass),
                    "triple_mass": format_rational(&w.triple_mass),
                })
            })
            .collect();
        let doc = serde_json::json!({
            "verdict": content.verdict,
            "two_sided_noncompliance": report.two_sided_noncompliance,
            "witnesses": witnesses,
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        print!("{}", render::render_content(&content, report.two_sided_noncompliance));
    }
    Ok(0)
}

fn run_witness(
    input: &Path,
    event: &str,
    value: &str,
    assumptions: AssumptionSet,
    json: bool,
) -> Result<u8, Failure> {
    let p = load_distribution(input)?;
    let report = consistency_report(&p);
    consistency_gate(&report)?;
    let event = parse_event_arg(event).map_err(|e| fail(EXIT_INVALID, e))?;
    let target = parse_rational(value).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    let witness = match sharpness_witness(&p, event, assumptions, &target) {
        Ok(witness) => witness,
        Err(err @ ivbounds::Error::TargetOutsideInterval { .. }) => {
            return Err(fail(EXIT_INVALID, err.to_string()))
        }
        Err(ivbounds::Error::Infeasible(_)) => {
            return Err(fail(
                EXIT_MISMATCH,
                "formula interval and LP feasibility disagree: please report this input",
            ))
        }
        Err(err) => return Err(fail(EXIT_INVALID, err.to_string())),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&witness.to_json()).unwrap());
    } else {
        println!(
            "mass function attaining {} on {}:",
            format_rational(&target),
            event_arg(event)
        );
        for w in ivbounds::ResponseType::all() {
            if !witness.q(w).is_zero() {
                println!("  Q({w}) = {}", format_rational(witness.q(w)));
            }
        }
    }
    Ok(0)
}

fn run_sample(
    seed: u64,
    denominator: u64,
    class: AssumptionSet,
    with_q: bool,
) -> Result<u8, Failure> {
    if denominator == 0 {
        return Err(fail(EXIT_INVALID, "denominator must be positive"));
    }
    let (p, q) = sample_consistent(seed, denominator, class);
    let doc = if with_q {
        serde_json::json!({"distribution": p.to_json(), "mass_function": q.to_json()})
    } else {
        p.to_json()
    };
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    Ok(0)
}

struct EndpointMismatch {
    source: String,
    event: Event,
    assumptions: AssumptionSet,
    formula: Interval,
    lp: Interval,
}

/// All 64 endpoint comparisons (16 events x 2 assumption sets x 2 endpoints)
/// for one distribution; the data must already be consistent.
fn compare_endpoints(p: &DataDistribution, source: &str) -> Vec<EndpointMismatch> {
    let table = match compare_assumption_sets(p) {
        Ok(table) => table,
        Err(_) => unreachable!("caller guarantees consistency"),
    };
    let mut mismatches = Vec::new();
    for assumptions in AssumptionSet::BOTH {
        for event in Event::all() {
            let formula = table.interval(event, assumptions).clone();
            let lp = lp_interval(p, event, assumptions)
                .expect("consistent data give feasible specs");
            if formula != lp {
                mismatches.push(EndpointMismatch {
                    source: source.to_string(),
                    event,
                    assumptions,
                    formula,
                    lp,
                });
            }
        }
    }
    mismatches
}

fn run_verify(
    input: Option<&Path>,
    seed: u64,
    denominator: u64,
    count: Option<u64>,
    json: bool,
) -> Result<u8, Failure> {
    let (mismatches, checked) = match (input, count) {
        (Some(_), Some(_)) => {
            return Err(fail(EXIT_INVALID, "give either an input file or --count, not both"))
        }
        (Some(path), None) => {
            let p = load_distribution(path)?;
            let report = consistency_report(&p);
            consistency_gate(&report)?;
            (compare_endpoints(&p, &path.display().to_string()), 1u64)
        }
        (None, maybe_count) => {
            let count = maybe_count.unwrap_or(100);
            if denominator == 0 {
                return Err(fail(EXIT_INVALID, "denominator must be positive"));
            }
            let mismatches: Vec<EndpointMismatch> = (0..count)
                .into_par_iter()
                .flat_map(|k| {
                    let (p, _) = sample_consistent(
                        seed.wrapping_add(k),
                        denominator,
                        AssumptionSet::ExogeneityPlusMonotonicity,
                    );
                    compare_endpoints(&p, &format!("seed {}", seed.wrapping_add(k)))
                })
                .collect();
            (mismatches, count)
        }
    };

    let endpoints = checked * 64;
    if json {
        let items: Vec<serde_json::Value> = mismatches
            .iter()
            .map(|m| {
                serde_json::json!({
                    "source": m.source,
                    "event": m.event.to_pairs(),
                    "assumptions": m.assumptions.label(),
                    "formula": IntervalDoc::of(&m.formula),
                    "lp": IntervalDoc::of(&m.lp),
                })
            })
            .collect();
        let doc = serde_json::json!({
            "distributions_checked": checked,
            "endpoints_checked": endpoints,
            "mismatches": items,
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else if mismatches.is_empty() {
        println!(
            "verified: {endpoints} endpoints across {checked} distribution(s), formulas and LP agree exactly"
        );
    } else {
        for m in &mismatches {
            println!(
                "MISMATCH {} event {} [{}]: formula {} vs LP {}",
                m.source,
                event_arg(m.event),
                m.assumptions.label(),
                m.formula,
                m.lp,
            );
        }
    }
    Ok(if mismatches.is_empty() { 0 } else { EXIT_MISMATCH })
}

fn run_dual(
    input: &Path,
    event: &str,
    direction: Direction,
    assumptions: AssumptionSet,
    json: bool,
) -> Result<u8, Failure> {
    let p = load_distribution(input)?;
    let report = consistency_report(&p);
    if !report.e_feasible {
        return Err(fail(
            EXIT_E_INFEASIBLE,
            "no mass function reproduces these data: the dual region is unbounded",
        ));
    }
    if assumptions == AssumptionSet::ExogeneityPlusMonotonicity && !report.em_consistent {
        return Err(fail(
            EXIT_EM_INCONSISTENT,
            "instrument monotonicity is refuted by these data; use --assumptions e",
        ));
    }
    let event = parse_event_arg(event).map_err(|e| fail(EXIT_INVALID, e))?;
    let f = event_functional(event);
    let spec = build_lp(&p, assumptions);
    let vertices = enumerate_dual_vertices(&spec, &f, direction)
        .map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    let extremum = match direction {
        Direction::Maximize => vertices.iter().map(|v| v.objective_value.clone()).min(),
        Direction::Minimize => vertices.iter().map(|v| v.objective_value.clone()).max(),
    }
    .expect("feasible specs have at least one dual vertex");
    let primal = solve(&spec, &f, direction)
        .map_err(|e| fail(EXIT_INVALID, e.to_string()))?
        .value;

    if json {
        let items: Vec<serde_json::Value> = vertices
            .iter()
            .map(|v| {
                serde_json::json!({
                    "u": v.u.iter().map(format_rational).collect::<Vec<_>>(),
                    "objective": format_rational(&v.objective_value),
                })
            })
            .collect();
        let doc = serde_json::json!({
            "event": event.to_pairs(),
            "assumptions": assumptions.label(),
            "direction": match direction {
                Direction::Maximize => "max",
                Direction::Minimize => "min",
            },
            "vertices": items,
            "dual_extremum": format_rational(&extremum),
            "primal_optimum": format_rational(&primal),
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        print!("{}", render::render_dual_vertices(&vertices, &extremum, &primal));
    }
    if extremum != primal {
        return Err(fail(
            EXIT_MISMATCH,
            "dual extremum does not match the primal optimum",
        ));
    }
    Ok(triage_code(&report))
}
