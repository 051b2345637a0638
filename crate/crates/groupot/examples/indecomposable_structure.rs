//! For a weighted product of a line and a parity bit, list the
//! indecomposable elements, check the nearest-multiple laws at one of
//! them, and embed a sampled torsion-free norm into the signed line.

use groupot::group::{element_to_json, Coord, FactorSpec, GroupElement, GroupSpec};
use groupot::sampled::PullbackNorm;
use groupot::solver::SolveOptions;
use groupot::structure::{
    classify_signs, list_indecomposables_in_ball, verify_indecomposable_laws, Sign,
};
use groupot::Scalar;
use num::BigInt;

fn elem(z: i64, parity: u8) -> GroupElement {
    GroupElement::new(vec![
        Coord::Int(BigInt::from(z)),
        Coord::Mod(vec![u64::from(parity)]),
    ])
}

fn main() -> groupot::Result<()> {
    let opts = SolveOptions::default();
    let spec = GroupSpec::new(vec![
        FactorSpec::IntZ {
            weight: Scalar::from_int(3),
        },
        FactorSpec::z2(Scalar::from_int(2)),
    ])?;

    // The line factor is infinite, so enumerate inside a norm ball. Radius
    // 3 reaches both unit vectors (weights 3 and 2) and nothing shorter.
    let set = list_indecomposables_in_ball(&spec, &Scalar::from_int(3), &opts)?;
    print!("indecomposables:");
    for g in &set.representatives {
        print!(" {}", element_to_json(g));
    }
    println!();
    // Exactly the unit coordinate vectors, one per factor.
    assert_eq!(set.representatives.len(), 2);

    let g = elem(1, 0);
    let h = elem(7, 1);
    let report = verify_indecomposable_laws(&spec, &g, &h, 8, &opts)?;
    assert!(report.holds());
    println!(
        "nearest multiple of {} to {} is n = {}, residual {}",
        element_to_json(&g),
        element_to_json(&h),
        report.minimizer.as_ref().expect("law holds"),
        element_to_json(report.residual.as_ref().expect("law holds")),
    );

    // A rank-one pullback norm on Z^2 looks like a line at any finite
    // sample scale; every sample lands on one of the two half-lines.
    let oracle = PullbackNorm::new(vec![Scalar::from_int(2), Scalar::from_int(3)])?;
    let base = vec![BigInt::from(1), BigInt::from(0)];
    let samples: Vec<Vec<BigInt>> = [(1, 0), (0, 1), (-1, -1), (2, -1), (-3, 1)]
        .iter()
        .map(|&(a, b)| vec![BigInt::from(a), BigInt::from(b)])
        .collect();
    let classes = classify_signs(&oracle, &samples, &base)?;
    for (sample, side, phi) in &classes.classes {
        let tag = match side {
            Sign::Plus => "+",
            Sign::Minus => "-",
        };
        println!("sample {sample:?} on side {tag}, phi = {phi}");
    }
    Ok(())
}
