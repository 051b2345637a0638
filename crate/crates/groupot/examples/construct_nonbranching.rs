//! Build a nonbranching plan for mixed integer and parity coefficients
//! directly from the coefficient list, then verify the row equalities and
//! that its support is a forest.

use groupot::group::{Coord, FactorSpec, GroupElement, GroupSpec};
use groupot::metric::{metric_from_points, Instance, PointNorm};
use groupot::nbp::{check_nbp, construct_nbp};
use groupot::solver::solve;
use groupot::Scalar;
use num::BigInt;

fn elem(z: i64, parity: u8) -> GroupElement {
    GroupElement::new(vec![
        Coord::Int(BigInt::from(z)),
        Coord::Mod(vec![u64::from(parity)]),
    ])
}

fn main() -> groupot::Result<()> {
    let group = GroupSpec::new(vec![
        FactorSpec::IntZ {
            weight: Scalar::one(),
        },
        FactorSpec::z2(Scalar::one()),
    ])?;
    let points: Vec<Vec<Scalar>> = [0, 2, 5, 9]
        .iter()
        .map(|&c| vec![Scalar::from_int(c)])
        .collect();
    let metric = metric_from_points(&points, PointNorm::L1)?;
    let coeffs = vec![elem(1, 1), elem(2, 0), elem(-3, 1), elem(0, 0)];
    let inst = Instance::new(group, metric, coeffs)?;

    let plan = construct_nbp(&inst.group, &inst.coefficients)?.with_cost(&inst.metric)?;
    let report = check_nbp(&plan, &inst)?;
    println!("row equalities hold: {}", report.nbp);
    println!("support is a forest:  {}", report.acyclic);
    assert!(report.nbp && report.acyclic);

    // The constructed plan pays the independent-coordinates price; the true
    // optimum can only be cheaper.
    let built = plan.cost.as_ref().expect("cost attached");
    let best = solve(&inst)?;
    let optimal = best.cost.as_ref().expect("cost attached");
    println!("constructed cost {built}, optimal cost {optimal}");
    assert!(optimal <= built);
    Ok(())
}
