//! Indecomposable elements and the additive structure they generate.
//!
//! An element `g` is indecomposable when no `h` outside `{0, g}` splits its
//! norm, `|h| + |g - h| = |g|`. These elements behave like signed unit
//! vectors: their multiples have additive norms, every element sits at a
//! well-defined nearest multiple, and distinct indecomposables combine in
//! `l1` fashion. Each of those statements is checked here exactly, at
//! caller-chosen scale, together with a sign classification that embeds a
//! sampled torsion-free group into the line.

use std::collections::HashSet;

use num::bigint::BigInt;
use num::{Integer, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{sign_order, Coord, FactorSpec, GroupElement, GroupSpec};
use crate::sampled::NormOracle;
use crate::scalar::Scalar;
use crate::solver::SolveOptions;

/// Order of a single element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementOrder {
    Finite(u128),
    Infinite,
}

/// Nonzero indecomposable elements, one representative per `{g, -g}` pair.
#[derive(Debug, Clone)]
pub struct IndecomposableSet {
    pub representatives: Vec<GroupElement>,
    pub orders: Vec<ElementOrder>,
}

impl IndecomposableSet {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Outcome of an indecomposability test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndecomposabilityReport {
    pub indecomposable: bool,
    /// An `h` with `|h| + |g - h| = |g|`, `h` outside `{0, g}`, when one exists.
    pub witness: Option<GroupElement>,
}

/// Order of `g` as a group element.
pub fn element_order(spec: &GroupSpec, g: &GroupElement) -> Result<ElementOrder> {
    spec.conforms(g)?;
    let mut order: u128 = 1;
    for (c, f) in g.coords.iter().zip(spec.factors()) {
        match (c, f) {
            (Coord::Int(v), _) if !v.is_zero() => return Ok(ElementOrder::Infinite),
            (Coord::Rat(r), _) if !r.is_zero() => return Ok(ElementOrder::Infinite),
            (Coord::Mod(rs), FactorSpec::ModM { moduli, .. }) => {
                // Residue r in Z_m has order m / gcd(r, m).
                for (r, m) in rs.iter().zip(moduli) {
                    let o = (m / r.gcd(m)) as u128;
                    order = order.lcm(&o);
                }
            }
            _ => {}
        }
    }
    Ok(ElementOrder::Finite(order))
}

/// The search box that provably contains every decomposition witness of `g`:
/// any `h` with `|h| + |g - h| = |g|` has `|h| <= |g|`, and coordinate-wise
/// triangle equality forces its unordered coordinates into the box below.
/// `None` when the box is not finite, which cannot happen for elements whose
/// rational coordinates vanish.
fn witness_box(spec: &GroupSpec, g: &GroupElement) -> Result<Vec<Vec<Coord>>> {
    let target = spec.norm(g)?;
    let mut per_coord: Vec<Vec<Coord>> = Vec::new();
    for (k, f) in spec.factors().iter().enumerate() {
        match f {
            FactorSpec::ModM { moduli, .. } => {
                let single = GroupSpec::single(f.clone());
                let elems = single.enumerate_elements()?;
                per_coord.push(
                    elems
                        .into_iter()
                        .map(|e| e.coords.into_iter().next().expect("single factor"))
                        .collect(),
                );
                let _ = moduli;
            }
            FactorSpec::IntZ { weight } => {
                let bound = (&target / weight).floor_int();
                let mut coords = vec![Coord::Int(BigInt::zero())];
                let mut v = BigInt::from(1);
                while v <= bound {
                    coords.push(Coord::Int(v.clone()));
                    coords.push(Coord::Int(-v.clone()));
                    v += 1;
                }
                per_coord.push(coords);
            }
            FactorSpec::RealQ { .. } => {
                // Witnesses for elements with zero rational part have zero
                // rational part: a nonzero h_k adds 2 w |h_k| to
                // |h| + |g - h| on this coordinate alone.
                match &g.coords[k] {
                    Coord::Rat(r) if r.is_zero() => {
                        per_coord.push(vec![Coord::Rat(Scalar::zero())])
                    }
                    _ => unreachable!("nonzero rational part is handled before the box"),
                }
            }
        }
    }
    Ok(per_coord)
}

/// Exhaustively decides indecomposability; the witness, when present, is the
/// first splitter in deterministic box order.
pub fn is_indecomposable(
    spec: &GroupSpec,
    g: &GroupElement,
    opts: &SolveOptions,
) -> Result<IndecomposabilityReport> {
    spec.conforms(g)?;
    if spec.is_zero(g) {
        return Ok(IndecomposabilityReport {
            indecomposable: true,
            witness: None,
        });
    }
    // A nonzero rational coordinate is split by halving it.
    for (k, c) in g.coords.iter().enumerate() {
        if let Coord::Rat(r) = c {
            if !r.is_zero() {
                let mut coords = spec.zero().coords;
                coords[k] = Coord::Rat(r / &Scalar::from_int(2));
                return Ok(IndecomposabilityReport {
                    indecomposable: false,
                    witness: Some(GroupElement::new(coords)),
                });
            }
        }
    }
    let per_coord = witness_box(spec, g)?;
    let size: u128 = per_coord
        .iter()
        .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
        .unwrap_or(u128::MAX);
    if size > opts.budget {
        return Err(Error::BudgetExceeded {
            needed: size,
            budget: opts.budget,
        });
    }
    let target = spec.norm(g)?;
    let mut idx = vec![0usize; per_coord.len()];
    loop {
        let h = GroupElement::new(
            idx.iter()
                .zip(&per_coord)
                .map(|(&i, c)| c[i].clone())
                .collect(),
        );
        if !spec.is_zero(&h) && &h != g {
            let split = &spec.norm(&h)? + &spec.norm(&spec.sub(g, &h)?)?;
            if split == target {
                return Ok(IndecomposabilityReport {
                    indecomposable: false,
                    witness: Some(h),
                });
            }
        }
        let mut at = idx.len();
        loop {
            if at == 0 {
                return Ok(IndecomposabilityReport {
                    indecomposable: true,
                    witness: None,
                });
            }
            at -= 1;
            idx[at] += 1;
            if idx[at] < per_coord[at].len() {
                break;
            }
            idx[at] = 0;
        }
    }
}

fn collect_indecomposables(
    spec: &GroupSpec,
    candidates: impl Iterator<Item = GroupElement>,
    opts: &SolveOptions,
) -> Result<IndecomposableSet> {
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for g in candidates {
        if spec.is_zero(&g) {
            continue;
        }
        let rep = spec.canonical_rep(&g)?;
        if seen.contains(&rep) {
            continue;
        }
        if is_indecomposable(spec, &rep, opts)?.indecomposable {
            seen.insert(rep.clone());
            reps.push(rep);
        } else {
            seen.insert(rep);
        }
    }
    reps.sort_by(|a, b| sign_order(spec, a, b));
    reps.dedup();
    let orders = reps
        .iter()
        .map(|g| element_order(spec, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(IndecomposableSet {
        representatives: reps,
        orders,
    })
}

/// All nonzero indecomposables of a finite group, canonical representatives
/// in sign order.
pub fn list_indecomposables(spec: &GroupSpec, opts: &SolveOptions) -> Result<IndecomposableSet> {
    let elems = spec.enumerate_elements()?;
    collect_indecomposables(spec, elems.into_iter(), opts)
}

/// Indecomposables in the closed norm ball of the given radius. Elements
/// with a nonzero rational coordinate are never indecomposable, so only the
/// integer/modular slice of the ball is walked; works for infinite specs.
pub fn list_indecomposables_in_ball(
    spec: &GroupSpec,
    radius: &Scalar,
    opts: &SolveOptions,
) -> Result<IndecomposableSet> {
    if radius.is_negative() {
        return Err(Error::InvalidInput("negative ball radius".into()));
    }
    let mut per_coord: Vec<Vec<Coord>> = Vec::new();
    for f in spec.factors() {
        match f {
            FactorSpec::ModM { .. } => {
                let single = GroupSpec::single(f.clone());
                per_coord.push(
                    single
                        .enumerate_elements()?
                        .into_iter()
                        .map(|e| e.coords.into_iter().next().expect("single factor"))
                        .collect(),
                );
            }
            FactorSpec::IntZ { weight } => {
                let bound = (radius / weight).floor_int();
                let mut coords = vec![Coord::Int(BigInt::zero())];
                let mut v = BigInt::from(1);
                while v <= bound {
                    coords.push(Coord::Int(v.clone()));
                    coords.push(Coord::Int(-v.clone()));
                    v += 1;
                }
                per_coord.push(coords);
            }
            FactorSpec::RealQ { .. } => per_coord.push(vec![Coord::Rat(Scalar::zero())]),
        }
    }
    let size: u128 = per_coord
        .iter()
        .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
        .unwrap_or(u128::MAX);
    if size > opts.budget {
        return Err(Error::BudgetExceeded {
            needed: size,
            budget: opts.budget,
        });
    }
    let mut candidates = Vec::new();
    let mut idx = vec![0usize; per_coord.len()];
    'outer: loop {
        let g = GroupElement::new(
            idx.iter()
                .zip(&per_coord)
                .map(|(&i, c)| c[i].clone())
                .collect(),
        );
        if &spec.norm(&g)? <= radius {
            candidates.push(g);
        }
        let mut at = idx.len();
        loop {
            if at == 0 {
                break 'outer;
            }
            at -= 1;
            idx[at] += 1;
            if idx[at] < per_coord[at].len() {
                break;
            }
            idx[at] = 0;
        }
    }
    collect_indecomposables(spec, candidates.into_iter(), opts)
}

/// First failed law in a structure-law check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawFailure {
    /// `|n g| != n |g|` although `2g != 0`.
    Homogeneity {
        n: BigInt,
        norm_ng: Scalar,
        expected: Scalar,
    },
    /// The nearest-multiple distance `|h - n g|` has several minimizers.
    Minimizer { candidates: Vec<BigInt> },
    /// `|m g + r| != |m g| + |r|` for the residual `r = h - n(h,g) g`.
    Orthogonality {
        m: BigInt,
        lhs: Scalar,
        rhs: Scalar,
    },
}

/// Result of [`verify_indecomposable_laws`].
#[derive(Debug, Clone)]
pub struct LawReport {
    pub g: GroupElement,
    pub h: GroupElement,
    pub n_max: u32,
    /// Nearest multiple of `g` to `h`, when the minimizer law held.
    pub minimizer: Option<BigInt>,
    /// `h - n(h,g) g`, when the minimizer law held.
    pub residual: Option<GroupElement>,
    pub failure: Option<LawFailure>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Range of multiples that must contain every minimizer of `n -> |h - ng|`:
/// outside it the linear growth of `|ng|` already exceeds `|h - 0 g|`.
fn minimizer_range(spec: &GroupSpec, g: &GroupElement, h: &GroupElement) -> Result<Vec<BigInt>> {
    match element_order(spec, g)? {
        ElementOrder::Finite(m) => Ok((0..m as i128).map(BigInt::from).collect()),
        ElementOrder::Infinite => {
            // Growth rate: the norm of the free part of g.
            let mut gamma = Scalar::zero();
            for (c, f) in g.coords.iter().zip(spec.factors()) {
                match (c, f) {
                    (Coord::Int(v), FactorSpec::IntZ { weight }) => {
                        gamma = &gamma + &(weight * &Scalar::from_bigint(v.abs()));
                    }
                    (Coord::Rat(r), FactorSpec::RealQ { weight }) => {
                        gamma = &gamma + &(weight * &r.abs());
                    }
                    _ => {}
                }
            }
            debug_assert!(gamma.is_positive(), "infinite order needs a free part");
            let bound = (&(&spec.norm(h)? * &Scalar::from_int(2)) / &gamma).floor_int();
            let mut out = Vec::new();
            let mut v = -bound.clone();
            while v <= bound {
                out.push(v.clone());
                v += 1;
            }
            Ok(out)
        }
    }
}

/// Checks, for an indecomposable `g`, that multiples of `g` have additive
/// norms, that `h` has a unique nearest multiple of `g` (unique mod the
/// order of `g` when finite), and that the residual of `h` is norm-additive
/// against every multiple `|m| <= n_max`. Stops at the first failure.
pub fn verify_indecomposable_laws(
    spec: &GroupSpec,
    g: &GroupElement,
    h: &GroupElement,
    n_max: u32,
    opts: &SolveOptions,
) -> Result<LawReport> {
    spec.conforms(h)?;
    if spec.is_zero(g) {
        return Err(Error::InvalidInput(
            "laws are about nonzero indecomposables".into(),
        ));
    }
    let probe = is_indecomposable(spec, g, opts)?;
    if !probe.indecomposable {
        return Err(Error::NotIndecomposable(format!(
            "{} splits as {} + rest",
            g,
            probe.witness.expect("decomposable elements carry a witness")
        )));
    }
    let mut report = LawReport {
        g: g.clone(),
        h: h.clone(),
        n_max,
        minimizer: None,
        residual: None,
        failure: None,
    };
    let order = element_order(spec, g)?;
    let norm_g = spec.norm(g)?;

    if order != ElementOrder::Finite(2) {
        for n in 2..=n_max {
            let n_big = BigInt::from(n);
            let ng = spec.mul_int(g, &n_big)?;
            let norm_ng = spec.norm(&ng)?;
            let expected = &Scalar::from_bigint(n_big.clone()) * &norm_g;
            if norm_ng != expected {
                report.failure = Some(LawFailure::Homogeneity {
                    n: n_big,
                    norm_ng,
                    expected,
                });
                return Ok(report);
            }
        }
    }

    let mut best: Option<Scalar> = None;
    let mut argmins: Vec<BigInt> = Vec::new();
    for n in minimizer_range(spec, g, h)? {
        let dist = spec.norm(&spec.sub(h, &spec.mul_int(g, &n)?)?)?;
        match &best {
            Some(b) if &dist > b => {}
            Some(b) if &dist == b => argmins.push(n),
            _ => {
                best = Some(dist);
                argmins = vec![n];
            }
        }
    }
    if argmins.len() != 1 {
        report.failure = Some(LawFailure::Minimizer {
            candidates: argmins,
        });
        return Ok(report);
    }
    let n0 = argmins.remove(0);
    let residual = spec.sub(h, &spec.mul_int(g, &n0)?)?;
    report.minimizer = Some(n0);
    report.residual = Some(residual.clone());

    let norm_res = spec.norm(&residual)?;
    for m in -(n_max as i64)..=(n_max as i64) {
        let m_big = BigInt::from(m);
        let mg = spec.mul_int(g, &m_big)?;
        let lhs = spec.norm(&spec.add(&mg, &residual)?)?;
        let rhs = &spec.norm(&mg)? + &norm_res;
        if lhs != rhs {
            report.failure = Some(LawFailure::Orthogonality { m: m_big, lhs, rhs });
            return Ok(report);
        }
    }
    Ok(report)
}

/// Failure found by [`verify_pairwise_l1`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairwiseFailure {
    /// `|k g + l h| != |k g| + |l h|`.
    Additivity {
        k: i64,
        l: i64,
        lhs: Scalar,
        rhs: Scalar,
    },
    /// `k g + l h = 0` with `(k, l) != (0, 0)`: the spans intersect.
    NontrivialRelation { k: i64, l: i64 },
}

/// `h` is an integer multiple of `g`.
fn is_multiple_of(spec: &GroupSpec, h: &GroupElement, g: &GroupElement) -> Result<bool> {
    match element_order(spec, g)? {
        ElementOrder::Finite(m) => {
            let mut acc = spec.zero();
            for _ in 0..m {
                if &acc == h {
                    return Ok(true);
                }
                acc = spec.add(&acc, g)?;
            }
            Ok(false)
        }
        ElementOrder::Infinite => {
            // Candidate multiplier from the first free coordinate of g.
            let mut k: Option<BigInt> = None;
            for (cg, ch) in g.coords.iter().zip(&h.coords) {
                let (a, b) = match (cg, ch) {
                    (Coord::Int(a), Coord::Int(b)) => {
                        (Scalar::from_bigint(a.clone()), Scalar::from_bigint(b.clone()))
                    }
                    (Coord::Rat(a), Coord::Rat(b)) => (a.clone(), b.clone()),
                    _ => continue,
                };
                if a.is_zero() {
                    continue;
                }
                let ratio = &b / &a;
                match ratio.to_integer() {
                    Some(v) => k = Some(v),
                    None => return Ok(false),
                }
                break;
            }
            let Some(k) = k else {
                return Ok(false);
            };
            Ok(&spec.mul_int(g, &k)? == h)
        }
    }
}

/// Checks `|k g + l h| = |k g| + |l h|` for all `|k|, |l| <= k_max`, plus
/// that no nontrivial combination in that range vanishes. Both elements must
/// be indecomposable and generate distinct cyclic subgroups.
pub fn verify_pairwise_l1(
    spec: &GroupSpec,
    g: &GroupElement,
    h: &GroupElement,
    k_max: u32,
    opts: &SolveOptions,
) -> Result<Option<PairwiseFailure>> {
    for e in [g, h] {
        if spec.is_zero(e) {
            return Err(Error::InvalidInput(
                "pairwise structure needs nonzero elements".into(),
            ));
        }
        let probe = is_indecomposable(spec, e, opts)?;
        if !probe.indecomposable {
            return Err(Error::NotIndecomposable(e.to_string()));
        }
    }
    if is_multiple_of(spec, h, g)? && is_multiple_of(spec, g, h)? {
        return Err(Error::SameSubgroup);
    }
    let r = k_max as i64;
    for k in -r..=r {
        let kg = spec.mul_int(g, &BigInt::from(k))?;
        for l in -r..=r {
            let lh = spec.mul_int(h, &BigInt::from(l))?;
            let sum = spec.add(&kg, &lh)?;
            // kg + lh = 0 is only a span intersection when a nonzero
            // multiple cancels; kg = lh = 0 is vacuous in torsion groups.
            if spec.is_zero(&sum) && !spec.is_zero(&kg) {
                return Ok(Some(PairwiseFailure::NontrivialRelation { k, l }));
            }
            let lhs = spec.norm(&sum)?;
            let rhs = &spec.norm(&kg)? + &spec.norm(&lh)?;
            if lhs != rhs {
                return Ok(Some(PairwiseFailure::Additivity { k, l, lhs, rhs }));
            }
        }
    }
    Ok(None)
}

/// Which half-line a sample maps to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Embedding of a sampled torsion-free group into the line: each nonzero
/// sample `a` is equivalent to the base point or to its negation (written
/// `a ~ b` when `|a - b| < |a| + |b|`), and is sent to the signed norm.
#[derive(Debug, Clone)]
pub struct SignClassification {
    pub base: Vec<BigInt>,
    /// `(sample, side, phi)` with `phi = |a|` on the plus side, `-|a|` on
    /// the minus side; zero samples are skipped.
    pub classes: Vec<(Vec<BigInt>, Sign, Scalar)>,
}

impl SignClassification {
    pub fn phi(&self, sample: &[BigInt]) -> Option<&Scalar> {
        self.classes
            .iter()
            .find(|(s, _, _)| s == sample)
            .map(|(_, _, v)| v)
    }
}

fn related(oracle: &dyn NormOracle, a: &[BigInt], b: &[BigInt]) -> Result<bool> {
    let diff: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let lhs = oracle.norm(&diff)?;
    let rhs = &oracle.norm(a)? + &oracle.norm(b)?;
    Ok(lhs < rhs)
}

/// Splits the samples into the class of `base` and the class of `-base`.
/// A sample related to both sides, or to neither, contradicts collinearity
/// of zero-mean triples and is reported as an inconsistency.
pub fn classify_signs(
    oracle: &dyn NormOracle,
    samples: &[Vec<BigInt>],
    base: &[BigInt],
) -> Result<SignClassification> {
    if oracle.norm(base)?.is_zero() {
        return Err(Error::InvalidInput(
            "base sample has zero norm; pick a point off the kernel".into(),
        ));
    }
    let neg_base: Vec<BigInt> = base.iter().map(|x| -x).collect();
    let mut classes = Vec::new();
    for s in samples {
        if s.iter().all(|x| x.is_zero()) {
            continue;
        }
        let plus = related(oracle, s, base)?;
        let minus = related(oracle, s, &neg_base)?;
        let sign = match (plus, minus) {
            (true, false) => Sign::Plus,
            (false, true) => Sign::Minus,
            (true, true) => {
                return Err(Error::InconsistentClasses(format!(
                    "sample {s:?} is related to the base and to its negation"
                )))
            }
            (false, false) => {
                return Err(Error::InconsistentClasses(format!(
                    "sample {s:?} is related to neither side; the norm is \
                     degenerate on it"
                )))
            }
        };
        let norm = oracle.norm(s)?;
        let phi = match sign {
            Sign::Plus => norm,
            Sign::Minus => -&norm,
        };
        classes.push((s.clone(), sign, phi));
    }
    Ok(SignClassification {
        base: base.to_vec(),
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampled::PullbackNorm;

    fn z_spec() -> GroupSpec {
        GroupSpec::new(vec![FactorSpec::IntZ {
            weight: Scalar::one(),
        }])
        .unwrap()
    }

    fn int_elem(v: i64) -> GroupElement {
        GroupElement::new(vec![Coord::Int(BigInt::from(v))])
    }

    fn z4_spec() -> GroupSpec {
        GroupSpec::new(vec![FactorSpec::zmod(
            4,
            vec![
                Scalar::zero(),
                Scalar::one(),
                Scalar::from_int(2),
                Scalar::one(),
            ],
        )])
        .unwrap()
    }

    fn mod_elem(vals: &[u64]) -> GroupElement {
        GroupElement::new(vals.iter().map(|&v| Coord::Mod(vec![v])).collect())
    }

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    #[test]
    fn integers_split_above_one() {
        let spec = z_spec();
        let one = is_indecomposable(&spec, &int_elem(1), &opts()).unwrap();
        assert!(one.indecomposable);
        let two = is_indecomposable(&spec, &int_elem(2), &opts()).unwrap();
        assert!(!two.indecomposable);
        let w = two.witness.unwrap();
        let rest = spec.sub(&int_elem(2), &w).unwrap();
        assert_eq!(
            &spec.norm(&w).unwrap() + &spec.norm(&rest).unwrap(),
            spec.norm(&int_elem(2)).unwrap()
        );
    }

    #[test]
    fn z4_unit_is_indecomposable() {
        let spec = z4_spec();
        assert!(is_indecomposable(&spec, &mod_elem(&[1]), &opts())
            .unwrap()
            .indecomposable);
        let two = is_indecomposable(&spec, &mod_elem(&[2]), &opts()).unwrap();
        assert!(!two.indecomposable);
    }

    #[test]
    fn diagonal_of_l1_square_splits() {
        let spec = GroupSpec::new(vec![
            FactorSpec::z2(Scalar::one()),
            FactorSpec::z2(Scalar::one()),
        ])
        .unwrap();
        let diag = GroupElement::new(vec![Coord::Mod(vec![1]), Coord::Mod(vec![1])]);
        let report = is_indecomposable(&spec, &diag, &opts()).unwrap();
        assert!(!report.indecomposable);
    }

    #[test]
    fn indecomposable_listing_matches_hand_checks() {
        let squares = GroupSpec::new(vec![
            FactorSpec::z2(Scalar::one()),
            FactorSpec::z2(Scalar::one()),
        ])
        .unwrap();
        let set = list_indecomposables(&squares, &opts()).unwrap();
        assert_eq!(
            set.representatives,
            vec![mod_elem(&[0, 1]), mod_elem(&[1, 0])]
        );
        assert_eq!(set.orders, vec![ElementOrder::Finite(2); 2]);

        let z4 = list_indecomposables(&z4_spec(), &opts()).unwrap();
        assert_eq!(z4.representatives, vec![mod_elem(&[1])]);

        let ball = list_indecomposables_in_ball(&z_spec(), &Scalar::from_int(3), &opts()).unwrap();
        assert_eq!(ball.representatives, vec![int_elem(1)]);
        assert_eq!(ball.orders, vec![ElementOrder::Infinite]);
    }

    #[test]
    fn negation_does_not_change_the_predicate() {
        let spec = z_spec();
        for v in [1i64, 2, 3, 5] {
            let a = is_indecomposable(&spec, &int_elem(v), &opts()).unwrap();
            let b = is_indecomposable(&spec, &int_elem(-v), &opts()).unwrap();
            assert_eq!(a.indecomposable, b.indecomposable);
        }
    }

    #[test]
    fn laws_hold_on_a_mixed_product() {
        let spec = GroupSpec::new(vec![
            FactorSpec::IntZ {
                weight: Scalar::one(),
            },
            FactorSpec::z2(Scalar::one()),
        ])
        .unwrap();
        let g = GroupElement::new(vec![Coord::Int(BigInt::from(1)), Coord::Mod(vec![0])]);
        let h = GroupElement::new(vec![Coord::Int(BigInt::from(5)), Coord::Mod(vec![1])]);
        let report = verify_indecomposable_laws(&spec, &g, &h, 8, &opts()).unwrap();
        assert!(report.holds(), "unexpected failure: {:?}", report.failure);
        assert_eq!(report.minimizer, Some(BigInt::from(5)));
        assert_eq!(
            report.residual,
            Some(GroupElement::new(vec![
                Coord::Int(BigInt::zero()),
                Coord::Mod(vec![1])
            ]))
        );
    }

    #[test]
    fn order_two_skips_homogeneity() {
        let spec = GroupSpec::new(vec![FactorSpec::z2(Scalar::one())]).unwrap();
        let g = mod_elem(&[1]);
        let report = verify_indecomposable_laws(&spec, &g, &g, 4, &opts()).unwrap();
        assert!(report.holds());
        assert_eq!(report.minimizer, Some(BigInt::from(1)));
    }

    #[test]
    fn z4_fails_homogeneity_at_three() {
        let spec = z4_spec();
        let report =
            verify_indecomposable_laws(&spec, &mod_elem(&[1]), &mod_elem(&[2]), 4, &opts())
                .unwrap();
        match report.failure {
            Some(LawFailure::Homogeneity { ref n, ref norm_ng, ref expected })
                if n == &BigInt::from(3) =>
            {
                assert_eq!(norm_ng, &Scalar::one());
                assert_eq!(expected, &Scalar::from_int(3));
            }
            other => panic!("expected the n=3 homogeneity failure, got {other:?}"),
        }
    }

    #[test]
    fn pairwise_structure_of_unit_vectors() {
        let spec = GroupSpec::new(vec![
            FactorSpec::IntZ {
                weight: Scalar::one(),
            },
            FactorSpec::IntZ {
                weight: Scalar::one(),
            },
        ])
        .unwrap();
        let g = GroupElement::new(vec![Coord::Int(BigInt::from(1)), Coord::Int(BigInt::zero())]);
        let h = GroupElement::new(vec![Coord::Int(BigInt::zero()), Coord::Int(BigInt::from(1))]);
        assert_eq!(verify_pairwise_l1(&spec, &g, &h, 6, &opts()).unwrap(), None);
    }

    #[test]
    fn same_line_is_rejected() {
        let spec = z_spec();
        assert!(matches!(
            verify_pairwise_l1(&spec, &int_elem(1), &int_elem(-1), 4, &opts()),
            Err(Error::SameSubgroup)
        ));
    }

    #[test]
    fn square_generators_combine_additively() {
        let spec = GroupSpec::new(vec![
            FactorSpec::z2(Scalar::one()),
            FactorSpec::z2(Scalar::one()),
        ])
        .unwrap();
        let g = mod_elem(&[1, 0]);
        let h = mod_elem(&[0, 1]);
        assert_eq!(verify_pairwise_l1(&spec, &g, &h, 3, &opts()).unwrap(), None);
    }

    #[test]
    fn sign_classes_follow_the_pullback() {
        let f = PullbackNorm::new(vec![Scalar::from_int(2), Scalar::from_int(3)]).unwrap();
        let samples: Vec<Vec<BigInt>> = [
            [1i64, 0],
            [-1, 0],
            [0, 1],
            [0, -1],
            [1, 1],
            [-1, -1],
        ]
        .iter()
        .map(|p| p.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
        let base = vec![BigInt::from(1), BigInt::zero()];
        let cls = classify_signs(&f, &samples, &base).unwrap();
        assert_eq!(cls.phi(&samples[2]), Some(&Scalar::from_int(3)));
        assert_eq!(cls.phi(&samples[3]), Some(&Scalar::from_int(-3)));
        assert_eq!(cls.phi(&samples[4]), Some(&Scalar::from_int(5)));
        // phi respects negation on every sample.
        for (s, _, phi) in &cls.classes {
            let neg: Vec<BigInt> = s.iter().map(|x| -x).collect();
            assert_eq!(cls.phi(&neg), Some(&-phi));
        }
        // Additivity of phi whenever the sum is sampled.
        let sum: Vec<BigInt> = samples[0]
            .iter()
            .zip(&samples[2])
            .map(|(a, b)| a + b)
            .collect();
        let lhs = cls.phi(&sum).unwrap();
        let rhs = &cls.phi(&samples[0]).unwrap().clone() + cls.phi(&samples[2]).unwrap();
        assert_eq!(lhs, &rhs);
    }

    #[test]
    fn kernel_points_are_flagged() {
        let f = PullbackNorm::new(vec![Scalar::from_int(2), Scalar::from_int(3)]).unwrap();
        let base = vec![BigInt::from(1), BigInt::zero()];
        let kernel = vec![vec![BigInt::from(3), BigInt::from(-2)]];
        assert!(matches!(
            classify_signs(&f, &kernel, &base),
            Err(Error::InconsistentClasses(_))
        ));
    }
}
