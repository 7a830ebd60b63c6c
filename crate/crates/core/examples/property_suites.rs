//! Runs the named property suites and the discrepancy report.

use pspec::checks::{run_suite, Suite};
use pspec::discrepancy::discrepancies;

fn main() -> pspec::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    for suite in [Suite::ProductLaw, Suite::Barrier, Suite::Quadrilateral, Suite::Lemma] {
        let r = run_suite(suite, seed)?;
        println!("{}: {} cases, {} failed", suite.name(), r.cases.len(), r.failures().count());
        for f in r.failures().take(3) {
            println!("    {} :: {}", f.case, f.detail);
        }
    }
    for d in discrepancies()? {
        println!("{}: computed {}, published {}", d.id, d.computed, d.published_value);
    }
    Ok(())
}
