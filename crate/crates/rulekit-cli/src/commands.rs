use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rulekit::eval::{compactness, space_coverage, Evaluation, Fraction, Policy};
use rulekit::model::{Dataset, RuleSystem, Schema};
use rulekit::reduce::{
    greedy_reduce, subsumption_prune, system_hash, verify_reduction, Guard, VerificationReport,
    VerifyOptions,
};
use rulekit::textio::{
    evaluation_to_interchange, log_to_interchange, parse_dataset, parse_schema, parse_system,
    report_to_interchange, serialize_system, system_from_interchange,
    system_to_interchange_with, ColumnLayout, Format, ParseDiagnostic,
};

use crate::{
    CliFailure, EvaluateArgs, FormatArg, GuardArg, PolicyArg, ReduceArgs, ValidateArgs,
    VerifyArgs, EXIT_FAILURE, EXIT_OK,
};

impl From<PolicyArg> for Policy {
    fn from(arg: PolicyArg) -> Policy {
        match arg {
            PolicyArg::Strict => Policy::Strict,
            PolicyArg::AnyCorrect => Policy::AnyCorrect,
        }
    }
}

impl From<GuardArg> for Guard {
    fn from(arg: GuardArg) -> Guard {
        match arg {
            GuardArg::Rules => Guard::Rules,
            GuardArg::Data => Guard::Data,
        }
    }
}

fn read(path: &Path) -> Result<String, CliFailure> {
    fs::read_to_string(path)
        .map_err(|err| CliFailure {
            code: EXIT_FAILURE,
            message: format!("{}: {err}", path.display()),
        })
}

fn print_warnings(warnings: &[ParseDiagnostic]) {
    for warning in warnings {
        eprintln!("rulekit: {warning}");
    }
}

/// Loads a system from DSL or interchange JSON, resolving the schema from
/// `--schema` or from the system document itself.
pub(crate) fn load_system(
    schema_path: Option<&Path>,
    system_path: &Path,
) -> Result<(Schema, RuleSystem), CliFailure> {
    let system_text = read(system_path)?;
    if system_text.trim_start().starts_with('{') {
        let parsed = system_from_interchange(&system_text)?;
        print_warnings(&parsed.warnings);
        let system = parsed.value;
        if let Some(path) = schema_path {
            let schema = parse_schema(&read(path)?)?.value;
            if &schema != system.schema() {
                return Err(CliFailure {
                    code: EXIT_FAILURE,
                    message: format!(
                        "schema {} differs from the schema embedded in {}",
                        path.display(),
                        system_path.display()
                    ),
                });
            }
        }
        let schema = system.schema().clone();
        return Ok((schema, system));
    }

    let schema = match schema_path {
        Some(path) => parse_schema(&read(path)?)?.value,
        None => parse_schema(&system_text)?.value,
    };
    let parsed = parse_system(&system_text, &schema)?;
    print_warnings(&parsed.warnings);
    Ok((schema, parsed.value))
}

fn load_dataset(
    path: &Path,
    schema: &Schema,
    columns: Option<&[String]>,
    label_column: &str,
) -> Result<Dataset, CliFailure> {
    let text = read(path)?;
    let layout = match columns {
        Some(columns) => ColumnLayout::Explicit {
            columns: columns.to_vec(),
            label_column: label_column.to_string(),
        },
        None => ColumnLayout::Header {
            label_column: label_column.to_string(),
        },
    };
    let parsed = parse_dataset(&text, schema, &layout)?;
    print_warnings(&parsed.warnings);
    Ok(parsed.value)
}

pub(crate) fn validate(args: &ValidateArgs) -> Result<u8, CliFailure> {
    let (_, system) = load_system(args.schema.as_deref(), &args.system)?;
    println!(
        "ok: {} rules over {} attributes, {} classes",
        system.rule_count(),
        system.schema().attribute_count(),
        system.schema().classes().len()
    );
    for warning in system.warnings() {
        println!("warning: {warning}");
    }
    Ok(EXIT_OK)
}

fn render_fraction(f: Fraction) -> String {
    format!("{}/{} = {:.4}", f.num, f.den, f.value())
}

fn evaluation_table(evaluation: &Evaluation, space: Option<Fraction>) -> String {
    let m = &evaluation.metrics;
    let mut out = String::new();
    let policy = match evaluation.policy {
        Policy::Strict => "strict",
        Policy::AnyCorrect => "any-correct",
    };
    let mut verdicts = [0u64; 4];
    for row in &evaluation.rows {
        let slot = match row.verdict {
            rulekit::eval::RowVerdict::Correct => 0,
            rulekit::eval::RowVerdict::Misclassified => 1,
            rulekit::eval::RowVerdict::Conflict => 2,
            rulekit::eval::RowVerdict::Uncovered => 3,
        };
        verdicts[slot] += 1;
    }
    let _ = writeln!(out, "policy               {policy}");
    let _ = writeln!(out, "rows                 {}", m.total_rows);
    let _ = writeln!(out, "accuracy             {}", render_fraction(m.accuracy()));
    let _ = writeln!(out, "coverage             {}", render_fraction(m.coverage()));
    let _ = writeln!(
        out,
        "accuracy_on_covered  {}",
        render_fraction(m.accuracy_on_covered())
    );
    let _ = writeln!(
        out,
        "verdicts             correct={} misclassified={} conflict={} uncovered={}",
        verdicts[0], verdicts[1], verdicts[2], verdicts[3]
    );
    let _ = writeln!(out, "conflict_rows        {}", m.conflict_rows);
    let _ = writeln!(out, "rules                {}", m.rule_count);
    let _ = writeln!(out, "conditions           {}", m.condition_count);
    if let Some(space) = space {
        let _ = writeln!(out, "space_coverage       {}", render_fraction(space));
    }
    let _ = writeln!(out, "fires per rule:");
    for (rule, fires) in &m.per_rule_fire_counts {
        let _ = writeln!(out, "  {rule:<12} {fires}");
    }
    out
}

fn evaluation_markdown(evaluation: &Evaluation, space: Option<Fraction>) -> String {
    let m = &evaluation.metrics;
    let mut out = String::from("| indicator | value |\n|---|---|\n");
    let _ = writeln!(out, "| accuracy | {} |", render_fraction(m.accuracy()));
    let _ = writeln!(out, "| coverage | {} |", render_fraction(m.coverage()));
    let _ = writeln!(
        out,
        "| accuracy on covered | {} |",
        render_fraction(m.accuracy_on_covered())
    );
    let _ = writeln!(out, "| conflict rows | {} |", m.conflict_rows);
    let _ = writeln!(out, "| rules | {} |", m.rule_count);
    let _ = writeln!(out, "| conditions | {} |", m.condition_count);
    if let Some(space) = space {
        let _ = writeln!(out, "| space coverage | {} |", render_fraction(space));
    }
    out
}

pub(crate) fn evaluate(args: &EvaluateArgs) -> Result<u8, CliFailure> {
    let (schema, system) = load_system(args.schema.as_deref(), &args.system)?;
    let dataset = load_dataset(
        &args.dataset,
        &schema,
        args.columns.as_deref(),
        &args.label_column,
    )?;
    let evaluation = rulekit::eval::evaluate(&system, &dataset, args.policy.into())?;
    let space = if args.space {
        Some(space_coverage(&system, args.space_limit)?)
    } else {
        None
    };
    match args.format {
        FormatArg::Table => print!("{}", evaluation_table(&evaluation, space)),
        FormatArg::Interchange => print!("{}", evaluation_to_interchange(&evaluation, space)),
        FormatArg::Markdown => print!("{}", evaluation_markdown(&evaluation, space)),
    }
    Ok(EXIT_OK)
}

pub(crate) fn reduce(args: &ReduceArgs) -> Result<u8, CliFailure> {
    if args.guard == GuardArg::Data && args.dataset.is_none() {
        return Err(CliFailure::usage("--guard data requires --dataset"));
    }
    let (schema, system) = load_system(args.schema.as_deref(), &args.system)?;
    let dataset = match &args.dataset {
        Some(path) => Some(load_dataset(path, &schema, None, "class")?),
        None => None,
    };
    let (reduced, log) = greedy_reduce(&system, args.guard.into(), dataset.as_ref())?;
    let final_system = if args.prune {
        subsumption_prune(&reduced)
    } else {
        reduced
    };

    let pruned = system.rule_count() - final_system.rule_count();
    eprintln!(
        "rulekit: {} removals, {} rules kept ({} pruned)",
        log.removals,
        final_system.rule_count(),
        pruned
    );

    let rendered = match args.format {
        FormatArg::Interchange => {
            let guard_name = match args.guard {
                GuardArg::Rules => "rules",
                GuardArg::Data => "data",
            };
            let mut provenance = vec![format!(
                "greedy single-condition reduction (guard={guard_name}), {} removals, source sha256:{}",
                log.removals,
                system_hash(&system)
            )];
            if args.prune {
                provenance.push(format!("subsumption pruning removed {pruned} rules"));
            }
            system_to_interchange_with(&final_system, &provenance)
        }
        _ => serialize_system(&final_system, Format::Dsl),
    };
    match &args.output {
        Some(path) => fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    if let Some(path) = &args.log {
        fs::write(path, log_to_interchange(&log))?;
    }
    Ok(EXIT_OK)
}

fn verification_table(report: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "verdict              {}",
        if report.valid { "valid" } else { "invalid" }
    );
    if let Some(violation) = &report.first_violation {
        let _ = writeln!(out, "violation            {violation:?}");
    }
    let _ = writeln!(
        out,
        "modified rules       {}",
        if report.modified_rules.is_empty() {
            "(none)".to_string()
        } else {
            report.modified_rules.join(", ")
        }
    );
    let _ = writeln!(
        out,
        "removed rules        {}",
        if report.removed_rules.is_empty() {
            "(none)".to_string()
        } else {
            report.removed_rules.join(", ")
        }
    );
    if let Some(change) = &report.dataset_coverage {
        let _ = writeln!(
            out,
            "dataset coverage     {} -> {}",
            render_fraction(change.before),
            render_fraction(change.after)
        );
    }
    if let Some(change) = &report.space_coverage {
        let _ = writeln!(
            out,
            "space coverage       {} -> {}",
            render_fraction(change.before),
            render_fraction(change.after)
        );
    }
    if let Some(diff) = &report.semantic_diff {
        let _ = writeln!(
            out,
            "semantic diff        {} of {} descriptions changed",
            diff.changed, diff.space_size
        );
        for example in &diff.examples {
            let _ = writeln!(
                out,
                "  {}: {{{}}} -> {{{}}}",
                example.description.join(", "),
                example.classes_a.join(", "),
                example.classes_b.join(", ")
            );
        }
    }
    out
}

pub(crate) fn verify(args: &VerifyArgs) -> Result<u8, CliFailure> {
    let (schema, original) = load_system(args.schema.as_deref(), &args.original)?;
    let (reduced_schema, reduced) = load_system(None, &args.reduced).or_else(|_| {
        // A reduced file without an embedded schema borrows the original's.
        let text = read(&args.reduced)?;
        let parsed = parse_system(&text, &schema)?;
        print_warnings(&parsed.warnings);
        Ok::<_, CliFailure>((schema.clone(), parsed.value))
    })?;
    if reduced_schema != schema {
        return Err(CliFailure {
            code: EXIT_FAILURE,
            message: "original and reduced systems use different schemas".to_string(),
        });
    }
    let dataset = match &args.dataset {
        Some(path) => Some(load_dataset(path, &schema, None, "class")?),
        None => None,
    };
    let options = VerifyOptions {
        space_limit: args.space_limit,
        ..VerifyOptions::default()
    };
    let report = verify_reduction(&original, &reduced, dataset.as_ref(), &options)?;
    match args.format {
        FormatArg::Interchange => print!("{}", report_to_interchange(&report)),
        _ => print!("{}", verification_table(&report)),
    }
    Ok(if report.valid { EXIT_OK } else { EXIT_FAILURE })
}

/// Compactness line used by the report command.
pub(crate) fn compactness_line(system: &RuleSystem) -> String {
    let c = compactness(system);
    format!(
        "{} rules, {} conditions ({:.2} per rule)",
        c.rule_count, c.condition_count, c.mean_conditions_per_rule
    )
}
