use std::fmt::Write as _;

use rulekit::eval::{
    conflict_pairs, evaluate, semantic_diff, space_coverage, Fraction, Policy,
};
use rulekit::fixtures;
use rulekit::model::{Dataset, RuleSystem};
use rulekit::reduce::{
    greedy_reduce, subsumption_prune, verify_reduction, Guard, VerifyOptions,
};

use crate::commands::compactness_line;
use crate::{CliFailure, FixtureArg, ReportArgs, EXIT_OK};

const SPACE_LIMIT: u64 = 1_000_000;

fn pct(f: Fraction) -> String {
    format!("{}/{} ({:.1}%)", f.num, f.den, f.value() * 100.0)
}

struct SystemReport {
    name: &'static str,
    removals: usize,
    semantic_changes: u64,
}

fn report_system(
    out: &mut String,
    name: &'static str,
    system: &RuleSystem,
    dataset: &Dataset,
) -> Result<SystemReport, CliFailure> {
    let ev = evaluate(system, dataset, Policy::Strict)?;
    let space = space_coverage(system, SPACE_LIMIT)?;
    let _ = writeln!(out, "### {name}\n");
    let _ = writeln!(out, "- compactness: {}", compactness_line(system));
    let _ = writeln!(out, "- accuracy: {}", pct(ev.metrics.accuracy()));
    let _ = writeln!(out, "- coverage: {}", pct(ev.metrics.coverage()));
    let _ = writeln!(out, "- space coverage: {}", pct(space));
    let _ = writeln!(
        out,
        "- cross-class conflict pairs: {}",
        conflict_pairs(system).len()
    );

    let (reduced, log) = greedy_reduce(system, Guard::Rules, None)?;
    let ev_red = evaluate(&reduced, dataset, Policy::Strict)?;
    let space_red = space_coverage(&reduced, SPACE_LIMIT)?;
    let diff = semantic_diff(system, &reduced, SPACE_LIMIT, 3)?;
    let verdict = if log.removals == 0 {
        "irreducible: no condition can be removed".to_string()
    } else if diff.changed == 0 {
        format!(
            "reducible but not improvable: {} conditions removed, no fired-class set changes",
            log.removals
        )
    } else {
        format!(
            "reducible and improvable: {} conditions removed, {} of {} descriptions change",
            log.removals, diff.changed, diff.space_size
        )
    };
    let _ = writeln!(out, "- reduction verdict: {verdict}");
    if log.removals > 0 {
        let _ = writeln!(
            out,
            "- after reduction: {}; accuracy {}, coverage {}, space coverage {}",
            compactness_line(&reduced),
            pct(ev_red.metrics.accuracy()),
            pct(ev_red.metrics.coverage()),
            pct(space_red)
        );
        let report = verify_reduction(system, &reduced, Some(dataset), &VerifyOptions::default())?;
        let _ = writeln!(
            out,
            "- verification: {}",
            if report.valid { "valid" } else { "INVALID" }
        );
    }
    let _ = writeln!(out);
    Ok(SystemReport {
        name,
        removals: log.removals,
        semantic_changes: diff.changed,
    })
}

fn toy_report() -> Result<String, CliFailure> {
    let system = fixtures::toy_system();
    let dataset = fixtures::toy_dataset();
    let reduced_fixture = fixtures::toy_system_reduced();

    let mut out = String::from("# Toy case study\n\n");
    let _ = writeln!(
        out,
        "Two attributes (P: 1..20, W: two wheel classes), two classes, \
         {} reference objects.\n",
        dataset.len()
    );
    report_system(&mut out, "original system", &system, &dataset)?;

    let (reduced, _) = greedy_reduce(&system, Guard::Rules, None)?;
    let diff = semantic_diff(&reduced, &reduced_fixture, SPACE_LIMIT, 3)?;
    let _ = writeln!(
        out,
        "The reduced system {} the bundled reduced fixture on all {} descriptions.\n",
        if diff.changed == 0 {
            "matches"
        } else {
            "DIFFERS FROM"
        },
        diff.space_size
    );
    Ok(out)
}

fn bankruptcy_report() -> Result<String, CliFailure> {
    let dataset = fixtures::bankruptcy_dataset();
    let mut out = String::from("# Qualitative bankruptcy case study\n\n");
    let _ = writeln!(
        out,
        "Six three-valued attributes (729 possible descriptions), two \
         classes, dataset of {} rows labeled by the experts' decision \
         structure.\n",
        dataset.len()
    );

    let summaries = vec![
        report_system(
            &mut out,
            "genetic algorithm (11 rules)",
            &fixtures::ga_system(),
            &dataset,
        )?,
        report_system(
            &mut out,
            "inductive learning (16 rules)",
            &fixtures::il_system(),
            &dataset,
        )?,
        report_system(
            &mut out,
            "neural network (12 rules)",
            &fixtures::nn_system(),
            &dataset,
        )?,
    ];

    let _ = writeln!(out, "### Reduced genetic-algorithm system vs. published form\n");
    let ga = fixtures::ga_system();
    let (reduced, _) = greedy_reduce(&ga, Guard::Rules, None)?;
    let pruned = subsumption_prune(&reduced);
    let fixture = fixtures::ga_system_reduced();
    let diff = semantic_diff(&pruned, &fixture, SPACE_LIMIT, 5)?;
    let _ = writeln!(
        out,
        "- after subsumption pruning: {}",
        compactness_line(&pruned)
    );
    let _ = writeln!(
        out,
        "- bundled reduced form: {}",
        compactness_line(&fixture)
    );
    if diff.changed == 0 {
        let _ = writeln!(
            out,
            "- fired-class sets are identical on all {} descriptions",
            diff.space_size
        );
    } else {
        let _ = writeln!(
            out,
            "- MISMATCH on {} of {} descriptions: {:?}",
            diff.changed, diff.space_size, diff.examples
        );
    }
    let _ = writeln!(out);

    let _ = writeln!(out, "### Verdicts\n");
    let _ = writeln!(out, "| system | removals | fired-class changes | verdict |");
    let _ = writeln!(out, "|---|---|---|---|");
    for s in &summaries {
        let verdict = if s.removals == 0 {
            "irreducible"
        } else if s.semantic_changes == 0 {
            "reducible, not improvable"
        } else {
            "reducible and improvable"
        };
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            s.name, s.removals, s.semantic_changes, verdict
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "The il and nn systems are transcribed verbatim from their published \
         tables, including the redundancies noted in the fixture files; the \
         removals above are sound (each reduced rule stays mutually exclusive \
         with every opposing rule) but leave all fired-class sets unchanged, \
         so those two systems are compacted rather than improved."
    );
    Ok(out)
}

pub(crate) fn run(args: &ReportArgs) -> Result<u8, CliFailure> {
    let text = match args.fixture {
        FixtureArg::Toy => toy_report()?,
        FixtureArg::Bankruptcy => bankruptcy_report()?,
    };
    print!("{text}");
    Ok(EXIT_OK)
}
