use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use fairshare::analysis::{pool_aggregates, productivity_comparison};
use fairshare::cohort::{match_pairs, stratified_tests, Grouping, MatchOutcome};
use fairshare::funding::{normalized_funding, GroupAggregate, Metric};
use fairshare::ingest::{self, Corpus, CorpusPaths};
use fairshare::report::{
    credit_table, funding_table, pairs_table, productivity_table, ttest_table, ReportTable,
    TableFormat,
};
use fairshare::{
    a_index, a_index_oracle, fractional_credit, harmonic_credit, inflated_credit,
    pattern_from_byline, Byline,
};

use crate::{
    By, CorpusArgs, CreditArgs, NormalizeArgs, PairArgs, PairingArgs, ReportArgs, Settings,
    TtestArgs,
};

impl From<By> for Grouping {
    fn from(b: By) -> Self {
        match b {
            By::Title => Grouping::Title,
            By::Tier => Grouping::Tier,
            By::Gender => Grouping::Gender,
            By::All => Grouping::All,
        }
    }
}

/// Writes several tables: blank-line separated for text, `# title` headed
/// blocks for CSV, a single array for JSON.
fn emit(out: &mut dyn Write, tables: &[ReportTable], format: TableFormat) -> Result<()> {
    match format {
        TableFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, tables)?;
            writeln!(out)?;
        }
        TableFormat::Text => {
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                out.write_all(t.render(format).as_bytes())?;
            }
        }
        TableFormat::Csv => {
            for (i, t) in tables.iter().enumerate() {
                if tables.len() > 1 {
                    if i > 0 {
                        writeln!(out)?;
                    }
                    writeln!(out, "# {}", t.title)?;
                }
                out.write_all(t.render(format).as_bytes())?;
            }
        }
    }
    Ok(())
}

fn warn_all(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn load(ctx: &Settings, args: &CorpusArgs) -> Result<Corpus> {
    let paths = CorpusPaths {
        roster: args.roster.clone(),
        publications: args.publications.clone(),
        funding: args.funding.clone(),
        if_table: args.if_table.clone(),
    };
    let corpus = ingest::load_corpus(&paths, ctx.format)?;
    warn_all(&corpus.warnings);
    Ok(corpus)
}

fn pair_up(
    ctx: &Settings,
    roster: &[fairshare::cohort::FacultyRecord],
    p: &PairingArgs,
) -> Result<MatchOutcome> {
    let outcome = match_pairs(
        roster,
        &p.case_label,
        &p.control_label,
        usize::from(p.ratio),
        ctx.seed,
    )?;
    warn_all(&outcome.warnings);
    if !outcome.unmatched.is_empty() {
        eprintln!(
            "warning: {} case(s) left unmatched: {}",
            outcome.unmatched.len(),
            outcome.unmatched.join(", ")
        );
    }
    if outcome.pairs.is_empty() {
        bail!("no case could be matched to {} control(s)", p.ratio);
    }
    Ok(outcome)
}

pub fn credit(ctx: &Settings, args: &CreditArgs, out: &mut dyn Write) -> Result<()> {
    let (pattern, subject) = match (&args.pattern, args.authors, args.position) {
        (Some(p), _, _) => (p.clone(), None),
        (None, Some(n), Some(pos)) => {
            let mut corresponding = args.corresponding_at.clone();
            if args.corresponding {
                corresponding.push(pos);
            }
            let ties = args
                .ties
                .as_deref()
                .map(ingest::parse_tie_groups)
                .transpose()
                .map_err(|e| anyhow!("--ties: {e}"))?;
            let byline = Byline::new(n, pos, corresponding, ties)?;
            let (pattern, group) = pattern_from_byline(&byline, !args.no_merge)?;
            (pattern, Some(group))
        }
        _ => bail!("give either --pattern or both --authors and --position"),
    };

    let credit = a_index(&pattern);
    let oracle = args
        .oracle
        .map(|budget| a_index_oracle(&pattern, budget, ctx.seed))
        .transpose()?;
    let mut table = credit_table(&credit, oracle.as_ref());
    if let Some(est) = &oracle {
        table = table.with_footnote(format!(
            "oracle: {} of {} draws accepted, seed {}",
            est.accepted, est.draws, ctx.seed
        ));
    }
    if let Some(group) = subject {
        table.headers.push("subject".into());
        for (i, row) in table.rows.iter_mut().enumerate() {
            row.push(if i + 1 == group { "yes" } else { "" }.into());
        }
        let share = credit.group_share(group).expect("subject group exists");
        let note = format!("subject in group {group}, share {share:.6}");
        table.footnote = Some(match table.footnote.take() {
            Some(prev) => format!("{note}; {prev}"),
            None => note,
        });
    }
    let mut tables = vec![table];

    if args.compare {
        let n = pattern.author_count();
        let harmonic = harmonic_credit(n)?;
        let fractional = fractional_credit(n)?;
        let inflated = inflated_credit(n)?;
        let mut cmp = ReportTable::new(
            "Per-author credit by scheme (authors in group order)",
            ["rank", "a_index", "harmonic", "fractional", "inflated"],
        );
        let rows = credit
            .per_author()
            .into_iter()
            .zip(harmonic.per_author())
            .zip(fractional.per_author())
            .zip(inflated);
        for (i, (((a, h), f), x)) in rows.enumerate() {
            cmp.push_row(vec![
                (i + 1).to_string(),
                format!("{a:.6}"),
                format!("{h:.6}"),
                format!("{f:.6}"),
                format!("{x:.6}"),
            ]);
        }
        tables.push(cmp);
    }
    emit(out, &tables, ctx.table)
}

pub fn score(ctx: &Settings, args: &CorpusArgs, out: &mut dyn Write) -> Result<()> {
    let corpus = load(ctx, args)?;
    let scores = corpus.score_all()?;
    ingest::write_scores(out, &scores, ctx.format)?;
    Ok(())
}

pub fn pair(ctx: &Settings, args: &PairArgs, out: &mut dyn Write) -> Result<()> {
    let roster = ingest::load_roster(&args.roster, ctx.format)?;
    let outcome = pair_up(ctx, &roster, &args.pairing)?;
    let title = format!(
        "Matched pairs, {} vs {} (1:{})",
        args.pairing.case_label, args.pairing.control_label, args.pairing.ratio
    );
    emit(out, &[pairs_table(&title, &outcome)], ctx.table)
}

pub fn ttest(ctx: &Settings, args: &TtestArgs, out: &mut dyn Write) -> Result<()> {
    let corpus = load(ctx, &args.corpus)?;
    let outcome = pair_up(ctx, &corpus.roster, &args.pairing)?;
    let scores = ingest::scores_by_id(&corpus.score_all()?);
    let mut strata = Vec::new();
    for &by in &args.by {
        strata.extend(stratified_tests(
            &outcome.pairs,
            &corpus.roster,
            &scores,
            by.into(),
        )?);
    }
    let title = format!(
        "Paired t-tests, {} vs {}",
        args.pairing.case_label, args.pairing.control_label
    );
    emit(out, &[ttest_table(&title, &strata)], ctx.table)
}

fn funding_tables(case: &GroupAggregate, control: &GroupAggregate) -> Vec<ReportTable> {
    let ratios = normalized_funding(case, control);
    Metric::ALL
        .iter()
        .map(|&metric| {
            let title = format!(
                "{metric} normalized by productivity, {} vs {}",
                case.group_label, control.group_label
            );
            funding_table(&title, metric, &ratios, case, control)
        })
        .collect()
}

fn pick(aggregates: &[GroupAggregate], label: &str, path: &Path) -> Result<GroupAggregate> {
    aggregates
        .iter()
        .find(|a| a.group_label == label)
        .cloned()
        .with_context(|| format!("no group `{label}` in {}", path.display()))
}

pub fn normalize(ctx: &Settings, args: &NormalizeArgs, out: &mut dyn Write) -> Result<()> {
    let (case, control) = match (&args.aggregates, &args.roster) {
        (Some(path), _) => {
            let aggregates = ingest::load_aggregates(path, ctx.format)?;
            (
                pick(&aggregates, &args.case_label, path)?,
                pick(&aggregates, &args.control_label, path)?,
            )
        }
        (None, Some(roster)) => {
            let corpus = load(
                ctx,
                &CorpusArgs {
                    roster: roster.clone(),
                    publications: args.publications.clone().expect("required by roster"),
                    if_table: args.if_table.clone().expect("required by roster"),
                    funding: args.funding.clone(),
                },
            )?;
            let pairing = PairingArgs {
                case_label: args.case_label.clone(),
                control_label: args.control_label.clone(),
                ratio: args.ratio,
            };
            let outcome = pair_up(ctx, &corpus.roster, &pairing)?;
            let scores = ingest::scores_by_id(&corpus.score_all()?);
            pool_aggregates(
                &outcome.pairs,
                &scores,
                |id| corpus.funding_of(id),
                &args.case_label,
                &args.control_label,
            )?
        }
        (None, None) => bail!("give either --aggregates or a corpus (--roster, --publications, --if-table, --funding)"),
    };
    emit(out, &funding_tables(&case, &control), ctx.table)
}

pub fn report(ctx: &Settings, args: &ReportArgs, out: &mut dyn Write) -> Result<()> {
    let corpus = load(ctx, &args.corpus)?;
    let p = &args.pairing;
    let outcome = pair_up(ctx, &corpus.roster, p)?;
    let scores = ingest::scores_by_id(&corpus.score_all()?);
    let groupings = [
        Grouping::Title,
        Grouping::Tier,
        Grouping::Gender,
        Grouping::All,
    ];
    let strata = productivity_comparison(&outcome.pairs, &corpus.roster, &scores, &groupings)?;
    let title = format!(
        "Scientific productivity, {} vs {} (1:{} matching)",
        p.case_label, p.control_label, p.ratio
    );
    let mut tables = vec![productivity_table(
        &title,
        &p.case_label,
        &p.control_label,
        &strata,
    )];
    if args.corpus.funding.is_some() {
        let (case, control) = pool_aggregates(
            &outcome.pairs,
            &scores,
            |id| corpus.funding_of(id),
            &p.case_label,
            &p.control_label,
        )?;
        tables.extend(funding_tables(&case, &control));
    }
    emit(out, &tables, ctx.table)
}
