//! Three views of triple collinearity: an exact check on finite groups,
//! the forced line along an infinite cyclic subgroup, and a sampled check
//! against the square-root cost used in branched transport.

use groupot::czt::{czt_cyclic_forcing, czt_sampled, has_czt, CyclicForcing};
use groupot::group::{element_to_json, FactorSpec, GroupSpec};
use groupot::sampled::SqrtNorm;
use groupot::Scalar;
use num::BigInt;

fn main() -> groupot::Result<()> {
    // Mod 4 with |2| = 2|1| keeps every zero-sum triple collinear; the
    // uniform norm does not.
    let good = GroupSpec::single(FactorSpec::zmod(
        4,
        [0, 1, 2, 1].map(Scalar::from_int).to_vec(),
    ));
    let bad = GroupSpec::single(FactorSpec::zmod(
        4,
        [0, 1, 1, 1].map(Scalar::from_int).to_vec(),
    ));
    assert!(has_czt(&good)?.is_none());
    let witness = has_czt(&bad)?.expect("uniform norm breaks a triple");
    print!("uniform mod-4 norm fails on");
    for g in &witness {
        print!(" {}", element_to_json(g));
    }
    println!();

    // Along an infinite cyclic subgroup the triples force |ng| = n|g|.
    let line = [1, 2, 3, 4, 5].map(Scalar::from_int);
    assert_eq!(czt_cyclic_forcing(&line)?, CyclicForcing::Linear);
    let bent = [1, 2, 3, 3].map(Scalar::from_int);
    match czt_cyclic_forcing(&bent)? {
        CyclicForcing::Violation { n, value, forced } => {
            println!("|{n}g| = {value} leaves the forced line at {forced}")
        }
        CyclicForcing::Linear => unreachable!("4 != 3"),
    }

    // |v|^(1/2) is strictly subadditive, so sampled triples break the
    // collinearity equalities wherever both parts move.
    let big = |v: i64| vec![BigInt::from(v)];
    let triples = [[big(16), big(9), big(-25)]];
    let sampled = czt_sampled(&SqrtNorm, &triples)?.expect("concave cost branches");
    println!(
        "sqrt cost on (16, 9, -25): norms {}, {}, {}",
        sampled.norms[0], sampled.norms[1], sampled.norms[2]
    );
    Ok(())
}
