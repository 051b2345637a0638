//! Solve a four-point instance with integer coefficients two ways and
//! confirm the exhaustive search agrees with the flow solver.

use groupot::group::{element_to_json, FactorSpec, GroupElement, GroupSpec};
use groupot::metric::{metric_from_points, Instance, PointNorm};
use groupot::solver::{solve_brute, solve_flow, CandidateBound, SolveOptions};
use groupot::Scalar;
use num::BigInt;

fn int(v: i64) -> GroupElement {
    GroupElement::new(vec![groupot::group::Coord::Int(BigInt::from(v))])
}

fn main() -> groupot::Result<()> {
    let group = GroupSpec::single(FactorSpec::IntZ {
        weight: Scalar::one(),
    });
    let points: Vec<Vec<Scalar>> = [[0, 0], [3, 0], [0, 4], [3, 4]]
        .iter()
        .map(|p| p.iter().map(|&c| Scalar::from_int(c)).collect())
        .collect();
    let metric = metric_from_points(&points, PointNorm::L1)?;
    // Two sources and two sinks; total charge is zero.
    let inst = Instance::new(group, metric, vec![int(2), int(-1), int(-1), int(0)])?;

    let flow = solve_flow(&inst)?;
    let brute = solve_brute(&inst, &CandidateBound::Auto, &SolveOptions::default())?;
    let flow_cost = flow.cost.as_ref().expect("cost attached");
    let brute_cost = brute.cost.as_ref().expect("cost attached");

    println!("flow cost  {flow_cost}");
    println!("brute cost {brute_cost}");
    assert_eq!(flow_cost, brute_cost);

    for i in 0..inst.len() {
        for j in (i + 1)..inst.len() {
            let g = flow.entry(i, j);
            if !inst.group.is_zero(g) {
                println!(
                    "ship {} along {i} -> {j} (distance {})",
                    element_to_json(g),
                    inst.metric.dist(i, j)
                );
            }
        }
    }
    Ok(())
}
