//! Flatten a chain with interior junction vertices onto its boundary
//! vertices, one elimination at a time, without ever increasing mass.

use groupot::chain::PolyChain1;
use groupot::group::{Coord, FactorSpec, GroupElement, GroupSpec};
use groupot::metric::{metric_from_points, PointNorm};
use groupot::nbp::NbpSearchOptions;
use groupot::Scalar;
use num::BigInt;

fn int(v: i64) -> GroupElement {
    GroupElement::new(vec![Coord::Int(BigInt::from(v))])
}

fn main() -> groupot::Result<()> {
    let group = GroupSpec::single(FactorSpec::IntZ {
        weight: Scalar::one(),
    });
    // Boundary terminals at the corners, two junctions on the middle line.
    let points: Vec<Vec<Scalar>> = [[0, 2], [0, -2], [6, 2], [6, -2], [1, 0], [5, 0]]
        .iter()
        .map(|p| p.iter().map(|&c| Scalar::from_int(c)).collect())
        .collect();
    let metric = metric_from_points(&points, PointNorm::L1)?;
    let chain = PolyChain1::new(
        group,
        metric,
        [0, 1, 2, 3],
        vec![
            (0, 4, int(1)),
            (1, 4, int(1)),
            (4, 5, int(2)),
            (5, 2, int(1)),
            (5, 3, int(1)),
        ],
    )?;

    println!("interior vertices {:?}", chain.interior_vertices());
    println!("initial mass {}", chain.mass()?);

    let (flat, trace) = chain.simplify(&NbpSearchOptions::default())?;
    for step in &trace.steps {
        println!(
            "eliminated vertex {}: mass {} -> {}",
            step.vertex, step.mass_before, step.mass_after
        );
    }
    println!("final mass {}", flat.mass()?);
    assert!(flat.interior_vertices().is_empty());
    assert_eq!(flat.boundary()?.to_json(), chain.boundary()?.to_json());
    Ok(())
}
