use std::fs;
use std::path::Path;

use fairshare::ingest::{load_corpus, write_corpus, CorpusPaths, DataFormat};
use fairshare::{pattern_from_byline, Error, Location};
use tempfile::TempDir;

const ROSTER: &str = "person_id,group_label,gender,degree,title,specialty,school_id,tier
b1,black,F,MD,Assistant,surgery,s1,1
w1,white,F,MD,Assistant,surgery,s1,1
w2,white,F,MD,Assistant,surgery,s1,1
";
const PUBS: &str = "person_id,pub_id,author_count,subject_position,is_corresponding,tie_groups,journal_key,citations
b1,p1,3,3,true,,J Med,10
b1,p2,1,1,false,,J Bio,4
w1,p1,2,1,,,Unknown J,7
w2,p9,4,2,false,\"1,2;3;4\",J Med,0
";
const FUNDING: &str = "person_id,project_count,funding_total
b1,1,250000
w1,2,600000.5
";
const IF: &str = "journal_key,impact_factor
J Med,5.5
J Bio,2
";

fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn fixture(dir: &Path, pubs: &str) -> CorpusPaths {
    CorpusPaths {
        roster: write(dir, "roster.csv", ROSTER),
        publications: write(dir, "publications.csv", pubs),
        funding: Some(write(dir, "funding.csv", FUNDING)),
        if_table: write(dir, "if_table.csv", IF),
    }
}

#[test]
fn loads_and_resolves() {
    let dir = TempDir::new().unwrap();
    let corpus = load_corpus(&fixture(dir.path(), PUBS), DataFormat::Csv).unwrap();
    assert_eq!(corpus.roster.len(), 3);
    let b1 = corpus.publications_of("b1");
    assert_eq!(b1.len(), 2);
    assert_eq!(b1[0].impact_factor, 5.5);
    let (pattern, group) = pattern_from_byline(&b1[0].byline, true).unwrap();
    assert_eq!(pattern.counts(), &[2, 1]);
    assert_eq!(group, 1);

    let w2 = &corpus.publications_of("w2")[0];
    assert_eq!(
        w2.byline.explicit_ties().unwrap(),
        &[vec![1, 2], vec![3], vec![4]]
    );

    // Unknown journal and unknown roles both surface as warnings.
    assert_eq!(corpus.publications_of("w1")[0].impact_factor, 0.0);
    assert!(!corpus.publications_of("w1")[0].roles_known);
    assert_eq!(corpus.warnings.len(), 2);
    assert_eq!(corpus.funding_of("w2").project_count, 0);
    assert_eq!(corpus.funding_of("w1").funding_total, 600000.5);
}

#[test]
fn empty_publications_are_fine() {
    let dir = TempDir::new().unwrap();
    let header = PUBS.lines().next().unwrap().to_string() + "\n";
    let corpus = load_corpus(&fixture(dir.path(), &header), DataFormat::Csv).unwrap();
    assert!(corpus.publications.is_empty());
    assert!(corpus
        .score_all()
        .unwrap()
        .iter()
        .all(|s| s.papers == 0 && s.pr == 0.0));
}

#[test]
fn funding_file_is_optional() {
    let dir = TempDir::new().unwrap();
    let mut paths = fixture(dir.path(), PUBS);
    paths.funding = None;
    assert!(load_corpus(&paths, DataFormat::Csv)
        .unwrap()
        .funding
        .is_empty());
}

fn load_err(pubs: &str) -> Error {
    let dir = TempDir::new().unwrap();
    load_corpus(&fixture(dir.path(), pubs), DataFormat::Csv).unwrap_err()
}

fn header() -> &'static str {
    PUBS.lines().next().unwrap()
}

#[test]
fn orphan_person_is_named() {
    match load_err(&format!("{}\nx9,p1,1,1,true,,J Med,1\n", header())) {
        Error::OrphanPerson {
            person_id,
            location,
            ..
        } => {
            assert_eq!(person_id, "x9");
            assert_eq!(location, Location::Line(2));
        }
        e => panic!("unexpected {e}"),
    }
}

#[test]
fn malformed_rows_are_located() {
    let cases = [
        ("b1,p1,0,1,true,,J Med,1", "author_count"),
        ("b1,p1,2,3,true,,J Med,1", "subject_position"),
        ("b1,p1,2,1,maybe,,J Med,1", "is_corresponding"),
        ("b1,p1,2,1,true,,J Med,-4", "citations"),
        ("b1,p1,3,1,true,\"1;2\",J Med,1", "tie_groups"),
        ("b1,p1,3,1,true,\"1;x\",J Med,1", "tie_groups"),
        ("b1,p1,two,1,true,,J Med,1", "author_count"),
    ];
    for (row, column) in cases {
        match load_err(&format!("{}\nb1,p0,1,1,true,,J Med,1\n{row}\n", header())) {
            Error::Schema {
                location,
                column: c,
                ..
            } => {
                assert_eq!(location, Location::Line(3), "{row}");
                assert_eq!(c.as_deref(), Some(column), "{row}");
            }
            e => panic!("{row}: unexpected {e}"),
        }
    }
}

#[test]
fn duplicate_publication_rejected() {
    let body = format!(
        "{}\nb1,p1,1,1,true,,J Med,1\nb1,p1,1,1,true,,J Med,1\n",
        header()
    );
    assert!(matches!(
        load_err(&body),
        Error::Schema {
            location: Location::Line(3),
            ..
        }
    ));
}

#[test]
fn wrong_header_rejected() {
    let body = "person,pub_id,author_count,subject_position,is_corresponding,tie_groups,journal_key,citations\n";
    match load_err(body) {
        Error::Schema { location, .. } => assert_eq!(location, Location::Line(1)),
        e => panic!("unexpected {e}"),
    }
}

#[test]
fn roster_and_funding_validation() {
    let dir = TempDir::new().unwrap();
    let paths = fixture(dir.path(), PUBS);
    fs::write(
        &paths.roster,
        format!("{ROSTER}w1,white,F,MD,Assistant,surgery,s1,1\n"),
    )
    .unwrap();
    assert!(matches!(
        load_corpus(&paths, DataFormat::Csv),
        Err(Error::Schema { .. })
    ));

    fs::write(&paths.roster, ROSTER.replace("s1,1\nw2", "s1,4\nw2")).unwrap();
    match load_corpus(&paths, DataFormat::Csv) {
        Err(Error::Schema { column, .. }) => assert_eq!(column.as_deref(), Some("tier")),
        other => panic!("unexpected {other:?}"),
    }

    fs::write(&paths.roster, ROSTER).unwrap();
    fs::write(
        paths.funding.as_ref().unwrap(),
        format!("{FUNDING}w2,0,10\n"),
    )
    .unwrap();
    assert!(matches!(
        load_corpus(&paths, DataFormat::Csv),
        Err(Error::Schema { .. })
    ));
    fs::write(
        paths.funding.as_ref().unwrap(),
        format!("{FUNDING}zz,1,10\n"),
    )
    .unwrap();
    assert!(matches!(
        load_corpus(&paths, DataFormat::Csv),
        Err(Error::OrphanPerson { .. })
    ));
}

#[test]
fn csv_round_trip() {
    let dir = TempDir::new().unwrap();
    let corpus = load_corpus(&fixture(dir.path(), PUBS), DataFormat::Csv).unwrap();
    let out = TempDir::new().unwrap();
    let paths = CorpusPaths {
        roster: out.path().join("r.csv"),
        publications: out.path().join("p.csv"),
        funding: Some(out.path().join("f.csv")),
        if_table: out.path().join("i.csv"),
    };
    write_corpus(&corpus, &paths, DataFormat::Csv).unwrap();
    let mut again = load_corpus(&paths, DataFormat::Csv).unwrap();
    // Warnings name the file they came from.
    again.warnings = corpus.warnings.clone();
    assert_eq!(again, corpus);
}

#[test]
fn json_mirror_round_trip() {
    let dir = TempDir::new().unwrap();
    let corpus = load_corpus(&fixture(dir.path(), PUBS), DataFormat::Csv).unwrap();
    let out = TempDir::new().unwrap();
    let paths = CorpusPaths {
        roster: out.path().join("r.json"),
        publications: out.path().join("p.json"),
        funding: Some(out.path().join("f.json")),
        if_table: out.path().join("i.json"),
    };
    write_corpus(&corpus, &paths, DataFormat::Json).unwrap();
    let again = load_corpus(&paths, DataFormat::Json).unwrap();
    assert_eq!(again.roster, corpus.roster);
    assert_eq!(again.publications, corpus.publications);
    assert_eq!(again.funding, corpus.funding);
    assert_eq!(again.if_table, corpus.if_table);
    assert_eq!(again.warnings.len(), corpus.warnings.len());
}

#[test]
fn json_errors_name_record_and_field() {
    let dir = TempDir::new().unwrap();
    let mut paths = fixture(dir.path(), PUBS);
    paths.roster = write(
        dir.path(),
        "roster.json",
        r#"[{"person_id":"b1","group_label":"black","gender":"F","degree":"MD","title":"A","specialty":"s","school_id":"s1","tier":1},
            {"person_id":"w1","group_label":"white","gender":"F","degree":"MD","title":"A","specialty":"s","school_id":"s1"}]"#,
    );
    paths.publications = write(dir.path(), "p.json", "[]");
    paths.funding = None;
    paths.if_table = write(dir.path(), "i.json", "[]");
    match load_corpus(&paths, DataFormat::Json) {
        Err(Error::Schema {
            location, column, ..
        }) => {
            assert_eq!(location, Location::Record(2));
            assert_eq!(column.as_deref(), Some("tier"));
        }
        other => panic!("unexpected {other:?}"),
    }
}
