//! Dumps the synthetic reference-task datasets to CSV so an external
//! reference implementation can be scored on the identical data. Run with
//! `cargo test -p notional-core --test reference_dump -- --ignored`.

use std::io::Write;
use std::path::PathBuf;

use notional_core::extract::Label;
use notional_core::synthetic;

fn write_csv(path: &PathBuf, rows: &[Vec<f64>], labels: &[Label]) {
    let mut f = std::fs::File::create(path).unwrap();
    for (row, label) in rows.iter().zip(labels) {
        let mut cols: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
        cols.push(match label {
            Label::Strict => "0".into(),
            Label::Notional => "1".into(),
        });
        writeln!(f, "{}", cols.join(",")).unwrap();
    }
}

#[test]
#[ignore = "one-time oracle data dump"]
fn dump_reference_datasets() {
    let out = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../target/ref_dump");
    std::fs::create_dir_all(&out).unwrap();
    for seed in 0..50u64 {
        let (tr, trl, te, tel) = synthetic::reference_task(seed, 700, 300);
        write_csv(&out.join(format!("ref_{seed}_train.csv")), &tr, &trl);
        write_csv(&out.join(format!("ref_{seed}_test.csv")), &te, &tel);
        let (tr, trl, te, tel) = synthetic::small_task(seed, 20, 100);
        write_csv(&out.join(format!("small_{seed}_train.csv")), &tr, &trl);
        write_csv(&out.join(format!("small_{seed}_test.csv")), &te, &tel);
    }
    println!("dumped to {}", out.display());
}
