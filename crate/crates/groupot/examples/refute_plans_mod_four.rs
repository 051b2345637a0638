//! Exhaustively show that four unit residues mod 4, under the norm
//! 0, 1, 2, 1, admit no plan whose row norms match its edge norm sums.

use groupot::group::{element_to_json, FactorSpec, GroupSpec};
use groupot::nbp::{find_nbp_counterexample, NbpSearchOptions};
use groupot::Scalar;

fn main() -> groupot::Result<()> {
    let table = [0, 1, 2, 1].map(Scalar::from_int).to_vec();
    let spec = GroupSpec::single(FactorSpec::zmod(4, table));

    let found = find_nbp_counterexample(&spec, 4, &NbpSearchOptions::default())?;
    let (coeffs, proof) = found.expect("mod-4 counterexample exists at size 4");

    print!("no nonbranching plan for coefficients");
    for c in &coeffs {
        print!(" {}", element_to_json(c));
    }
    println!();
    println!(
        "checked {} of {} assignments",
        proof.visited, proof.search_space
    );
    assert_eq!(coeffs.len(), 4);
    Ok(())
}
