//! Sweep every abelian group of order at most 8 and report which of them
//! carry a norm making all zero-sum triples collinear.

use groupot::classify::classify_groups;
use groupot::solver::SolveOptions;

fn main() -> groupot::Result<()> {
    let report = classify_groups(8, &SolveOptions::default())?;
    for entry in &report.entries {
        if let Some(table) = &entry.result.witness_norm {
            let rendered: Vec<String> = table.iter().map(|v| v.to_string()).collect();
            println!("{:8} feasible, norm ({})", entry.name, rendered.join(", "));
        } else {
            println!(
                "{:8} infeasible ({} equality patterns refuted)",
                entry.name, entry.result.trace.patterns_refuted
            );
        }
    }
    let feasible: Vec<&str> = report.feasible().iter().map(|e| e.name.as_str()).collect();
    println!("feasible groups: {}", feasible.join(", "));
    assert_eq!(feasible, ["Z2", "Z2^2", "Z4"]);
    Ok(())
}
