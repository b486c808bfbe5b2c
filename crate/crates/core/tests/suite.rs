use std::time::Instant;

use coherlab::fixtures::{run_suite, FixtureSet};

#[test]
fn standard_fixtures_behave_as_expected() {
    let start = Instant::now();
    let outcomes = run_suite(&FixtureSet::standard()).unwrap();
    let mut wrong = Vec::new();
    for o in &outcomes {
        println!(
            "{:<28} {:<26?} expected {:?} got {:?} {:?}",
            o.fixture, o.check, o.expected, o.report.status, o.report.witnesses
        );
        if !o.as_expected() {
            wrong.push(format!("{} {:?}: {:?}", o.fixture, o.check, o.report.notes));
        }
    }
    println!("suite took {:?}", start.elapsed());
    assert!(wrong.is_empty(), "{wrong:#?}");
}
