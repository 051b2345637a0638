//! Solve for every norm on a finite group that keeps zero-sum triples
//! collinear, reporting the feasible family or the exhaustive refutation.

use groupot::feasibility::czt_norm_feasibility;
use groupot::solver::SolveOptions;

fn main() -> groupot::Result<()> {
    let opts = SolveOptions::default();

    // The Klein four-group: one tight equality ties the three involutions,
    // with one degree of freedom left over.
    let klein = czt_norm_feasibility(&[2, 2], &opts)?;
    assert!(klein.feasible);
    let witness: Vec<String> = klein
        .witness_norm
        .as_ref()
        .expect("feasible")
        .iter()
        .map(|v| v.to_string())
        .collect();
    println!("Z2 x Z2 admits ({})", witness.join(", "));
    for line in klein.family_description.iter().flatten() {
        println!("  {line}");
    }

    // Z8 does not: all equality patterns on its norm classes are refuted.
    let z8 = czt_norm_feasibility(&[8], &opts)?;
    assert!(!z8.feasible);
    println!(
        "Z8 refuted: {} patterns over {} zero-free triples, {} subtree cuts",
        z8.trace.patterns_total,
        z8.trace.triples,
        z8.trace.refutations.len()
    );
    Ok(())
}
