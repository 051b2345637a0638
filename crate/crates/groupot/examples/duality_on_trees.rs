//! Price an integer-coefficient instance with a dual potential, realize
//! the potential as a map into an interval tree, and confirm the
//! calibration bound closes the gap exactly.

use groupot::calib::{
    calibration_value, converse_check, kantorovich_dual, realize_potential, DualPotential,
};
use groupot::group::{Coord, FactorSpec, GroupElement, GroupSpec};
use groupot::metric::{FiniteMetric, Instance};
use groupot::solver::solve;
use groupot::Scalar;
use num::BigInt;

fn int(v: i64) -> GroupElement {
    GroupElement::new(vec![Coord::Int(BigInt::from(v))])
}

fn main() -> groupot::Result<()> {
    let d: Vec<Vec<Scalar>> = [
        [0, 2, 5, 4],
        [2, 0, 3, 2],
        [5, 3, 0, 3],
        [4, 2, 3, 0],
    ]
    .iter()
    .map(|row| row.iter().map(|&v| Scalar::from_int(v)).collect())
    .collect();
    let metric = FiniteMetric::new(d)?;
    let coeffs = [3, -1, -1, -1];

    let scalars: Vec<Scalar> = coeffs.iter().map(|&c| Scalar::from_int(c)).collect();
    let (potential, value): (DualPotential, Scalar) = kantorovich_dual(&metric, &scalars)?;
    let rendered: Vec<String> = potential.values.iter().map(|v| v.to_string()).collect();
    println!("dual value {value} at potential ({})", rendered.join(", "));

    let group = GroupSpec::single(FactorSpec::IntZ {
        weight: Scalar::one(),
    });
    let inst = Instance::new(
        group,
        metric,
        coeffs.iter().map(|&c| int(c)).collect(),
    )?;
    let optimal = solve(&inst)?.cost.expect("cost attached");
    println!("transport cost {optimal}");
    assert_eq!(value, optimal);

    // The potential's level set embeds in a path tree; pushing the
    // coefficients forward and filling the tree recovers the same number.
    let (tree, map) = realize_potential(&potential)?;
    let bound = calibration_value(&inst, &[(tree.clone(), map.clone())])?;
    println!("tree calibration bound {bound}");
    assert_eq!(bound, optimal);

    let report = converse_check(&inst, &tree, &map)?;
    println!("optimal plan nonbranching: {}", report.nbp);
    Ok(())
}
