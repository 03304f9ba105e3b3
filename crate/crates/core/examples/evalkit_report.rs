//! Category aggregates, verdicts and correlations over the bundled
//! reference measurements.

use propshift::evalkit::{aggregate_all, bundled_fixtures, render_summary, summarize, ReportFormat, DEFAULT_EPSILON};

fn main() {
    let rows = bundled_fixtures();
    println!("{:<14} {:>8} {:>8} {:>8}", "category", "orig", "prop", "gain");
    for c in aggregate_all(rows) {
        let gain = c.propositional.mean - c.original.mean;
        println!("{:<14} {:>8.4} {:>8.4} {:>+8.4}", c.category.as_str(), c.original.mean, c.propositional.mean, gain);
    }
    println!();
    print!("{}", render_summary(&summarize(rows, DEFAULT_EPSILON), ReportFormat::MarkdownTables));
}
