//! Building, serializing and replaying a verification report in-process.

use grassq::cli::{execute, render, replay, Command, Format, Params, Report, RunConfig, Suite};

fn main() -> grassq::Result<()> {
    let cfg = RunConfig::new(Command::Verify { suite: Suite::Measures, replay: None }, Params { n: 4, m: 2, k: 2, cutoff: 4, ..Params::default() });
    let report = execute(&cfg)?;
    for v in &report.verdicts {
        println!("{} {}: {}", if v.pass { "ok  " } else { "FAIL" }, v.check, v.detail);
    }
    let json = render(&report, Format::Json);
    let again = replay(&Report::from_json(&json)?)?;
    println!("replayed {} rows: {}", report.rows.len(), if again.passed() { "consistent" } else { "MISMATCH" });
    print!("{}", render(&report, Format::Csv).lines().take(6).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}
