//! From raw label pairs to a dependence report, as the CLI does it.
use depcore::io::{format_table, ingest_pairs, parse_table};
use depcore::measures::Calibration;
use depcore::report::{analyze, to_json};

fn main() -> depcore::Result<()> {
    let pairs = "x,y,count\nsmoker,cough,40\nsmoker,none,10\nnon-smoker,cough,20\nnon-smoker,none,30\n";
    let got = ingest_pairs(pairs)?;
    println!("labels: rows {:?}, cols {:?}", got.labels.rows, got.labels.cols);
    let text = format_table(&got.table);
    print!("table file:\n{text}");
    assert_eq!(parse_table(&text)?, got.table);
    let report = analyze(text.as_bytes(), &got.table, Calibration::Yule, 1e-9);
    print!("{}", to_json(&report));
    Ok(())
}
