#![allow(dead_code)]

use fairshare::cohort::FacultyRecord;
use fairshare::funding::GroupAggregate;

/// Two-sided Student t tail from the finite trigonometric series for integer
/// degrees of freedom (Abramowitz & Stegun 26.7.3/26.7.4). Shares no code
/// with the incomplete-beta route.
pub fn t_tail_series(t: f64, df: u32) -> f64 {
    let theta = (t.abs() / f64::from(df).sqrt()).atan();
    let (s, c) = theta.sin_cos();
    let c2 = c * c;
    let a = if df % 2 == 1 {
        let mut sum = 0.0;
        if df > 1 {
            let mut term = c;
            sum = term;
            for k in 1..=((df - 3) / 2) {
                term *= f64::from(2 * k) / f64::from(2 * k + 1) * c2;
                sum += term;
            }
        }
        2.0 / std::f64::consts::PI * (theta + s * sum)
    } else {
        let mut term = 1.0;
        let mut sum = term;
        for k in 1..=((df - 2) / 2) {
            term *= f64::from(2 * k - 1) / f64::from(2 * k) * c2;
            sum += term;
        }
        s * sum
    };
    1.0 - a
}

pub fn faculty(
    id: &str,
    label: &str,
    gender: &str,
    title: &str,
    school: &str,
    tier: u8,
) -> FacultyRecord {
    FacultyRecord {
        person_id: id.to_string(),
        group_label: label.to_string(),
        gender: gender.to_string(),
        degree: "MD".to_string(),
        title: title.to_string(),
        specialty: "medicine".to_string(),
        school_id: school.to_string(),
        tier,
    }
}

/// 40 cases spread over schools, titles and genders, with three eligible
/// controls per case (so 1:2 matching always succeeds but has a choice).
pub fn forty_case_roster() -> Vec<FacultyRecord> {
    let titles = ["Full", "Associate", "Assistant"];
    let genders = ["Male", "Female"];
    let mut roster = Vec::new();
    for i in 0..40 {
        let title = titles[i % 3];
        let gender = genders[(i / 3) % 2];
        let school = format!("school{:02}", i / 2);
        let tier = (1 + (i / 14)) as u8;
        roster.push(faculty(
            &format!("b{i:02}"),
            "black",
            gender,
            title,
            &school,
            tier,
        ));
        for j in 0..3 {
            roster.push(faculty(
                &format!("w{i:02}_{j}"),
                "white",
                gender,
                title,
                &school,
                tier,
            ));
        }
    }
    roster
}

/// Group aggregate whose sums are `n` copies of per-person means.
pub fn aggregate_from_means(
    label: &str,
    n: usize,
    funding: f64,
    projects: u64,
    pr: f64,
    pc: f64,
    pcif: f64,
) -> GroupAggregate {
    let k = n as f64;
    GroupAggregate {
        group_label: label.to_string(),
        n_people: n,
        funding_total: funding,
        project_count: projects,
        pr_sum: k * pr,
        pc_sum: k * pc,
        pcif_sum: k * pcif,
    }
}

/// Second-pool aggregates: 11 people per group at the published means, with
/// the published funding totals and project counts.
pub fn second_pool() -> (GroupAggregate, GroupAggregate) {
    (
        aggregate_from_means("black", 11, 20_140_082.0, 22, 11.13, 14.96, 90.43),
        aggregate_from_means("white", 11, 43_796_537.0, 37, 18.03, 34.39, 318.42),
    )
}
