//! Loading and cross-validating the input datasets.
//!
//! Four tables, as CSV with a header row or as a JSON array of objects with
//! the same field names:
//!
//! | file         | columns                                                                                        |
//! |--------------|------------------------------------------------------------------------------------------------|
//! | roster       | person_id, group_label, gender, degree, title, specialty, school_id, tier                       |
//! | publications | person_id, pub_id, author_count, subject_position, is_corresponding, tie_groups, journal_key, citations |
//! | funding      | person_id, project_count, funding_total                                                        |
//! | if_table     | journal_key, impact_factor                                                                     |
//!
//! `is_corresponding` is `true`, `false` or empty (unknown). `tie_groups` is
//! optional: groups separated by `;`, positions within a group by `,` or
//! spaces, e.g. `1,2;3`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cohort::FacultyRecord;
use crate::credit::{pattern_from_byline, Byline};
use crate::error::{Error, Location, Result};
use crate::funding::{FundingRecord, GroupAggregate};
use crate::productivity::{score_profile, ProductivityScores, PublicationRecord};

pub const ROSTER_HEADERS: [&str; 8] = [
    "person_id",
    "group_label",
    "gender",
    "degree",
    "title",
    "specialty",
    "school_id",
    "tier",
];
pub const PUBLICATION_HEADERS: [&str; 8] = [
    "person_id",
    "pub_id",
    "author_count",
    "subject_position",
    "is_corresponding",
    "tie_groups",
    "journal_key",
    "citations",
];
pub const FUNDING_HEADERS: [&str; 3] = ["person_id", "project_count", "funding_total"];
pub const IF_TABLE_HEADERS: [&str; 2] = ["journal_key", "impact_factor"];
pub const AGGREGATE_HEADERS: [&str; 7] = [
    "group_label",
    "n_people",
    "funding_total",
    "project_count",
    "pr_sum",
    "pc_sum",
    "pcif_sum",
];
pub const SCORE_HEADERS: [&str; 6] = ["person_id", "papers", "citations", "pr", "pc", "pcif"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DataFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for DataFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(DataFormat::Csv),
            "json" => Ok(DataFormat::Json),
            other => Err(Error::InvalidArgument(format!(
                "unknown data format `{other}` (expected csv or json)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusPaths {
    pub roster: PathBuf,
    pub publications: PathBuf,
    pub funding: Option<PathBuf>,
    pub if_table: PathBuf,
}

/// The validated inputs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    pub roster: Vec<FacultyRecord>,
    /// Per person, sorted by `pub_id`.
    pub publications: BTreeMap<String, Vec<PublicationRecord>>,
    pub funding: BTreeMap<String, FundingRecord>,
    pub if_table: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl Corpus {
    pub fn publications_of(&self, person_id: &str) -> &[PublicationRecord] {
        self.publications
            .get(person_id)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Scores for every roster member, in roster order.
    pub fn score_all(&self) -> Result<Vec<ProductivityScores>> {
        self.roster
            .iter()
            .map(|r| score_profile(&r.person_id, self.publications_of(&r.person_id)))
            .collect()
    }

    /// Funding for a person; people absent from the funding file had none.
    pub fn funding_of(&self, person_id: &str) -> FundingRecord {
        self.funding
            .get(person_id)
            .cloned()
            .unwrap_or_else(|| FundingRecord::none(person_id))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PublicationRow {
    person_id: String,
    pub_id: String,
    author_count: u32,
    subject_position: u32,
    is_corresponding: Option<bool>,
    tie_groups: Option<String>,
    journal_key: Option<String>,
    citations: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ImpactRow {
    journal_key: String,
    impact_factor: f64,
}

/// Reads and validates a roster on its own.
pub fn load_roster(path: &Path, format: DataFormat) -> Result<Vec<FacultyRecord>> {
    let roster_rows: Vec<(Location, FacultyRecord)> = read_rows(path, format, &ROSTER_HEADERS)?;
    let mut ids = HashSet::new();
    for (loc, r) in &roster_rows {
        if r.person_id.is_empty() {
            return Err(schema(path, *loc, Some("person_id"), "person_id is empty"));
        }
        if !ids.insert(r.person_id.clone()) {
            return Err(schema(
                path,
                *loc,
                Some("person_id"),
                format!("duplicate person_id `{}`", r.person_id),
            ));
        }
        if !(1..=3).contains(&r.tier) {
            return Err(schema(
                path,
                *loc,
                Some("tier"),
                format!("tier must be 1, 2 or 3 (got {})", r.tier),
            ));
        }
    }
    Ok(roster_rows.into_iter().map(|(_, r)| r).collect())
}

pub fn load_corpus(paths: &CorpusPaths, format: DataFormat) -> Result<Corpus> {
    let mut warnings = Vec::new();

    let roster = load_roster(&paths.roster, format)?;
    let ids: HashSet<String> = roster.iter().map(|r| r.person_id.clone()).collect();

    let mut if_table = BTreeMap::new();
    for (loc, row) in read_rows::<ImpactRow>(&paths.if_table, format, &IF_TABLE_HEADERS)? {
        if !(row.impact_factor >= 0.0 && row.impact_factor.is_finite()) {
            return Err(schema(
                &paths.if_table,
                loc,
                Some("impact_factor"),
                format!(
                    "impact factor must be finite and non-negative (got {})",
                    row.impact_factor
                ),
            ));
        }
        if if_table
            .insert(row.journal_key.clone(), row.impact_factor)
            .is_some()
        {
            return Err(schema(
                &paths.if_table,
                loc,
                Some("journal_key"),
                format!("duplicate journal_key `{}`", row.journal_key),
            ));
        }
    }

    let mut publications: BTreeMap<String, Vec<PublicationRecord>> = BTreeMap::new();
    let mut seen_pubs = HashSet::new();
    let file = &paths.publications;
    for (loc, row) in read_rows::<PublicationRow>(file, format, &PUBLICATION_HEADERS)? {
        if !ids.contains(&row.person_id) {
            return Err(Error::OrphanPerson {
                file: file.clone(),
                location: loc,
                person_id: row.person_id,
            });
        }
        if !seen_pubs.insert((row.person_id.clone(), row.pub_id.clone())) {
            return Err(schema(
                file,
                loc,
                Some("pub_id"),
                format!(
                    "duplicate pub_id `{}` for person `{}`",
                    row.pub_id, row.person_id
                ),
            ));
        }
        if row.author_count == 0 {
            return Err(schema(
                file,
                loc,
                Some("author_count"),
                "author_count must be at least 1",
            ));
        }
        if !(1..=row.author_count).contains(&row.subject_position) {
            return Err(schema(
                file,
                loc,
                Some("subject_position"),
                format!(
                    "subject_position {} outside 1..={}",
                    row.subject_position, row.author_count
                ),
            ));
        }
        let ties = row
            .tie_groups
            .as_deref()
            .map(parse_tie_groups)
            .transpose()
            .map_err(|m| schema(file, loc, Some("tie_groups"), m))?;
        let corresponding = match row.is_corresponding {
            Some(true) => vec![row.subject_position],
            _ => vec![],
        };
        let byline = Byline::new(row.author_count, row.subject_position, corresponding, ties)
            .map_err(|e| schema(file, loc, None, e.to_string()))?;
        pattern_from_byline(&byline, true)
            .map_err(|e| schema(file, loc, Some("tie_groups"), e.to_string()))?;

        if row.is_corresponding.is_none() {
            warnings.push(format!(
                "{}, {loc}: corresponding-author flag missing for `{}`/`{}`; scored with singleton groups",
                file.display(),
                row.person_id,
                row.pub_id
            ));
        }
        let impact_factor = match row.journal_key.as_deref() {
            Some(key) => match if_table.get(key) {
                Some(&v) => v,
                None => {
                    warnings.push(format!(
                        "{}, {loc}: journal `{key}` not in impact-factor table; IF scored as 0",
                        file.display()
                    ));
                    0.0
                }
            },
            None => {
                warnings.push(format!(
                    "{}, {loc}: no journal_key for `{}`/`{}`; IF scored as 0",
                    file.display(),
                    row.person_id,
                    row.pub_id
                ));
                0.0
            }
        };
        let record = PublicationRecord {
            pub_id: row.pub_id,
            byline,
            journal_key: row.journal_key,
            impact_factor,
            citations: row.citations,
            roles_known: row.is_corresponding.is_some(),
        };
        publications.entry(row.person_id).or_default().push(record);
    }
    for list in publications.values_mut() {
        list.sort_by(|a, b| a.pub_id.cmp(&b.pub_id));
    }

    let mut funding = BTreeMap::new();
    if let Some(path) = &paths.funding {
        for (loc, row) in read_rows::<FundingRecord>(path, format, &FUNDING_HEADERS)? {
            if !ids.contains(&row.person_id) {
                return Err(Error::OrphanPerson {
                    file: path.clone(),
                    location: loc,
                    person_id: row.person_id,
                });
            }
            row.validate()
                .map_err(|e| schema(path, loc, Some("funding_total"), e.to_string()))?;
            if funding.contains_key(&row.person_id) {
                return Err(schema(
                    path,
                    loc,
                    Some("person_id"),
                    format!("duplicate funding row for `{}`", row.person_id),
                ));
            }
            funding.insert(row.person_id.clone(), row);
        }
    }

    Ok(Corpus {
        roster,
        publications,
        funding,
        if_table,
        warnings,
    })
}

/// Writes the corpus back out in the same schemas. Reloading the result gives
/// an identical corpus.
pub fn write_corpus(corpus: &Corpus, paths: &CorpusPaths, format: DataFormat) -> Result<()> {
    write_rows(&paths.roster, format, &ROSTER_HEADERS, &corpus.roster)?;

    let pubs: Vec<PublicationRow> = corpus
        .publications
        .iter()
        .flat_map(|(person, list)| {
            list.iter().map(move |p| PublicationRow {
                person_id: person.clone(),
                pub_id: p.pub_id.clone(),
                author_count: p.byline.author_count(),
                subject_position: p.byline.subject_position(),
                is_corresponding: p.roles_known.then(|| {
                    p.byline
                        .corresponding_positions()
                        .contains(&p.byline.subject_position())
                }),
                tie_groups: p.byline.explicit_ties().map(format_tie_groups),
                journal_key: p.journal_key.clone(),
                citations: p.citations,
            })
        })
        .collect();
    write_rows(&paths.publications, format, &PUBLICATION_HEADERS, &pubs)?;

    if let Some(path) = &paths.funding {
        let rows: Vec<&FundingRecord> = corpus.funding.values().collect();
        write_rows(path, format, &FUNDING_HEADERS, &rows)?;
    }
    let rows: Vec<ImpactRow> = corpus
        .if_table
        .iter()
        .map(|(k, &v)| ImpactRow {
            journal_key: k.clone(),
            impact_factor: v,
        })
        .collect();
    write_rows(&paths.if_table, format, &IF_TABLE_HEADERS, &rows)
}

/// Reads pre-aggregated group totals.
pub fn load_aggregates(path: &Path, format: DataFormat) -> Result<Vec<GroupAggregate>> {
    let rows: Vec<(Location, GroupAggregate)> = read_rows(path, format, &AGGREGATE_HEADERS)?;
    let mut labels = HashSet::new();
    for (loc, agg) in &rows {
        if !labels.insert(agg.group_label.clone()) {
            return Err(schema(
                path,
                *loc,
                Some("group_label"),
                format!("duplicate group `{}`", agg.group_label),
            ));
        }
        let sums = [agg.funding_total, agg.pr_sum, agg.pc_sum, agg.pcif_sum];
        if sums.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(schema(
                path,
                *loc,
                None,
                "sums must be finite and non-negative",
            ));
        }
        if agg.n_people == 0 {
            return Err(schema(path, *loc, Some("n_people"), "group has no members"));
        }
    }
    Ok(rows.into_iter().map(|(_, a)| a).collect())
}

/// Scores at full precision, one row per person.
pub fn write_scores<W: Write>(
    out: W,
    scores: &[ProductivityScores],
    format: DataFormat,
) -> Result<()> {
    let to_err = |message: String| Error::InvalidArgument(format!("writing scores: {message}"));
    match format {
        DataFormat::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(out);
            writer
                .write_record(SCORE_HEADERS)
                .map_err(|e| to_err(e.to_string()))?;
            for s in scores {
                writer.serialize(s).map_err(|e| to_err(e.to_string()))?;
            }
            writer.flush().map_err(|e| to_err(e.to_string()))
        }
        DataFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, scores).map_err(|e| to_err(e.to_string()))?;
            out.write_all(b"\n").map_err(|e| to_err(e.to_string()))
        }
    }
}

/// Parses `1,2;3` style tie groups.
pub fn parse_tie_groups(s: &str) -> std::result::Result<Vec<Vec<u32>>, String> {
    s.split(';')
        .map(|group| {
            group
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|p| !p.is_empty())
                .map(|p| {
                    p.parse::<u32>()
                        .map_err(|_| format!("`{p}` is not a byline position"))
                })
                .collect::<std::result::Result<Vec<_>, _>>()
        })
        .collect()
}

pub fn format_tie_groups(groups: &[Vec<u32>]) -> String {
    groups
        .iter()
        .map(|g| g.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn schema(
    file: &Path,
    location: Location,
    column: Option<&str>,
    message: impl Into<String>,
) -> Error {
    Error::Schema {
        file: file.to_path_buf(),
        location,
        column: column.map(str::to_string),
        message: message.into(),
    }
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn read_rows<T: DeserializeOwned>(
    path: &Path,
    format: DataFormat,
    headers: &[&str],
) -> Result<Vec<(Location, T)>> {
    match format {
        DataFormat::Csv => read_csv(path, headers),
        DataFormat::Json => read_json(path, headers),
    }
}

fn read_csv<T: DeserializeOwned>(path: &Path, expected: &[&str]) -> Result<Vec<(Location, T)>> {
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(BufReader::new(file));
    let headers = reader
        .headers()
        .map_err(|e| csv_error(path, e, expected))?
        .clone();
    let found: Vec<&str> = headers.iter().collect();
    if found != expected {
        return Err(schema(
            path,
            Location::Line(1),
            None,
            format!(
                "header must be `{}` (found `{}`)",
                expected.join(","),
                found.join(",")
            ),
        ));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e, expected))?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record.deserialize(Some(&headers)).map_err(|e| {
            let mut err = csv_error(path, e, expected);
            if let Error::Schema { location, .. } = &mut err {
                *location = Location::Line(line);
            }
            err
        })?;
        rows.push((Location::Line(line), row));
    }
    Ok(rows)
}

fn csv_error(path: &Path, err: csv::Error, expected: &[&str]) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    let (column, message) = match err.kind() {
        csv::ErrorKind::Deserialize { err, .. } => (
            err.field()
                .and_then(|i| expected.get(i as usize))
                .map(|c| c.to_string()),
            err.kind().to_string(),
        ),
        _ => (None, err.to_string()),
    };
    match err.into_kind() {
        csv::ErrorKind::Io(e) => io_error(path, e),
        _ => Error::Schema {
            file: path.to_path_buf(),
            location: Location::Line(line),
            column,
            message,
        },
    }
}

fn read_json<T: DeserializeOwned>(path: &Path, expected: &[&str]) -> Result<Vec<(Location, T)>> {
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    let values: Vec<serde_json::Value> = serde_json::from_reader(BufReader::new(file))
        .map_err(|e| schema(path, Location::Line(e.line() as u64), None, e.to_string()))?;
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let loc = Location::Record(i + 1);
            serde_json::from_value(v)
                .map(|row| (loc, row))
                .map_err(|e| {
                    let message = e.to_string();
                    Error::Schema {
                        file: path.to_path_buf(),
                        location: loc,
                        column: named_field(&message, expected),
                        message,
                    }
                })
        })
        .collect()
}

// serde_json names missing and unknown fields in backticks.
fn named_field(message: &str, expected: &[&str]) -> Option<String> {
    message
        .split('`')
        .skip(1)
        .step_by(2)
        .find(|name| expected.contains(name))
        .map(str::to_string)
}

fn write_rows<T: Serialize>(
    path: &Path,
    format: DataFormat,
    headers: &[&str],
    rows: &[T],
) -> Result<()> {
    let file = File::create(path).map_err(|e| io_error(path, e))?;
    let mut out = BufWriter::new(file);
    match format {
        DataFormat::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(&mut out);
            let to_schema = |e: csv::Error| schema(path, Location::Line(0), None, e.to_string());
            writer.write_record(headers).map_err(to_schema)?;
            for row in rows {
                writer.serialize(row).map_err(to_schema)?;
            }
            writer.flush().map_err(|e| io_error(path, e))?;
        }
        DataFormat::Json => {
            serde_json::to_writer_pretty(&mut out, rows)
                .map_err(|e| schema(path, Location::Record(0), None, e.to_string()))?;
            out.write_all(b"\n").map_err(|e| io_error(path, e))?;
        }
    }
    out.flush().map_err(|e| io_error(path, e))
}

/// Scores keyed by person, for lookups during pairing.
pub fn scores_by_id(scores: &[ProductivityScores]) -> HashMap<String, ProductivityScores> {
    scores
        .iter()
        .map(|s| (s.person_id.clone(), s.clone()))
        .collect()
}

/// Distinct group labels in roster order.
pub fn group_labels(roster: &[FacultyRecord]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    roster
        .iter()
        .filter(|r| seen.insert(r.group_label.clone()))
        .map(|r| r.group_label.clone())
        .collect()
}
