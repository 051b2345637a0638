//! Normed abelian coefficient groups.
//!
//! A [`GroupSpec`] is a finite product of factors, each either the integers,
//! the rationals (standing in for the reals at exact-arithmetic scale), or a
//! finite product of cyclic groups carrying an explicit norm table. The norm
//! of a product element is the sum of the factor norms, so weighted-l1
//! products are the native case; a single table factor with tuple moduli can
//! carry an arbitrary (non-l1) norm on a finite group.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One factor of a coefficient group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorSpec {
    /// The integers with norm `weight * |n|`.
    IntZ { weight: Scalar },
    /// The rationals with norm `weight * |x|`.
    RealQ { weight: Scalar },
    /// `Z_{m_1} x ... x Z_{m_r}` with an explicit norm table of length
    /// `m_1 * ... * m_r`, indexed lexicographically by the residue tuple.
    ModM {
        moduli: Vec<u64>,
        norm_table: Vec<Scalar>,
    },
}

impl FactorSpec {
    /// A single `Z_2` factor whose nonzero element has norm `weight`.
    pub fn z2(weight: Scalar) -> Self {
        FactorSpec::ModM {
            moduli: vec![2],
            norm_table: vec![Scalar::zero(), weight],
        }
    }

    /// A single cyclic factor `Z_m` with the given table.
    pub fn zmod(m: u64, table: Vec<Scalar>) -> Self {
        FactorSpec::ModM {
            moduli: vec![m],
            norm_table: table,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FactorSpec::ModM { .. })
    }

    fn table_len(moduli: &[u64]) -> Option<u128> {
        let mut n: u128 = 1;
        for &m in moduli {
            n = n.checked_mul(m as u128)?;
        }
        Some(n)
    }
}

/// One coordinate of a group element, matching the factor at the same index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Int(BigInt),
    Rat(Scalar),
    Mod(Vec<u64>),
}

/// An element of a [`GroupSpec`], one coordinate per factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub coords: Vec<Coord>,
}

impl GroupElement {
    pub fn new(coords: Vec<Coord>) -> Self {
        GroupElement { coords }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match c {
                Coord::Int(n) => write!(f, "{n}")?,
                Coord::Rat(r) => write!(f, "{r}")?,
                Coord::Mod(rs) => {
                    if rs.len() == 1 {
                        write!(f, "{}", rs[0])?;
                    } else {
                        write!(f, "[")?;
                        for (k, r) in rs.iter().enumerate() {
                            if k > 0 {
                                write!(f, ",")?;
                            }
                            write!(f, "{r}")?;
                        }
                        write!(f, "]")?;
                    }
                }
            }
        }
        write!(f, ")")
    }
}

/// Outcome of checking the norm axioms on a spec.
#[derive(Debug, Clone, PartialEq)]
pub enum NormValidation {
    Ok,
    Violation(NormViolation),
}

/// First violated norm axiom, with a witness.
#[derive(Debug, Clone, PartialEq)]
pub enum NormViolation {
    /// `|0| != 0` in a table factor.
    NonzeroAtZero { factor: usize },
    /// A negative table entry.
    NegativeValue { factor: usize, elem: Vec<u64> },
    /// `|g| = 0` for a nonzero `g`.
    ZeroAtNonzero { factor: usize, elem: Vec<u64> },
    /// `|g| != |-g|`.
    Asymmetric {
        factor: usize,
        elem: Vec<u64>,
        norm: Scalar,
        neg_norm: Scalar,
    },
    /// `|a+b| > |a| + |b|`.
    Subadditive {
        factor: usize,
        a: Vec<u64>,
        b: Vec<u64>,
        sum_norm: Scalar,
        bound: Scalar,
    },
    /// A nonpositive weight on an integer or rational factor.
    NonpositiveWeight { factor: usize },
}

impl fmt::Display for NormViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormViolation::NonzeroAtZero { factor } => {
                write!(f, "factor {factor}: |0| != 0")
            }
            NormViolation::NegativeValue { factor, elem } => {
                write!(f, "factor {factor}: negative norm at {elem:?}")
            }
            NormViolation::ZeroAtNonzero { factor, elem } => {
                write!(f, "factor {factor}: |{elem:?}| = 0 for nonzero element")
            }
            NormViolation::Asymmetric {
                factor,
                elem,
                norm,
                neg_norm,
            } => write!(
                f,
                "factor {factor}: |{elem:?}| = {norm} but |-{elem:?}| = {neg_norm}"
            ),
            NormViolation::Subadditive {
                factor,
                a,
                b,
                sum_norm,
                bound,
            } => write!(
                f,
                "factor {factor}: |{a:?} + {b:?}| = {sum_norm} > {bound}"
            ),
            NormViolation::NonpositiveWeight { factor } => {
                write!(f, "factor {factor}: weight must be positive")
            }
        }
    }
}

/// A finite product of normed factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    factors: Vec<FactorSpec>,
}

impl GroupSpec {
    /// Builds a spec, checking structural well-formedness (moduli at least 2,
    /// table lengths matching, positive weights). Norm axioms on tables are
    /// checked separately by [`GroupSpec::validate_norm`], so that violating
    /// tables can still be constructed and reported on.
    pub fn new(factors: Vec<FactorSpec>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("group needs at least one factor".into()));
        }
        for (i, f) in factors.iter().enumerate() {
            match f {
                FactorSpec::IntZ { weight } | FactorSpec::RealQ { weight } => {
                    if !weight.is_positive() {
                        return Err(Error::InvalidInput(format!(
                            "factor {i}: weight must be positive"
                        )));
                    }
                }
                FactorSpec::ModM { moduli, norm_table } => {
                    if moduli.is_empty() {
                        return Err(Error::InvalidInput(format!("factor {i}: empty moduli")));
                    }
                    if let Some(&m) = moduli.iter().find(|&&m| m < 2) {
                        return Err(Error::InvalidInput(format!(
                            "factor {i}: modulus {m} must be at least 2"
                        )));
                    }
                    let len = FactorSpec::table_len(moduli).ok_or_else(|| {
                        Error::InvalidInput(format!("factor {i}: moduli product overflows"))
                    })?;
                    if norm_table.len() as u128 != len {
                        return Err(Error::InvalidInput(format!(
                            "factor {i}: norm table has {} entries, expected {len}",
                            norm_table.len()
                        )));
                    }
                }
            }
        }
        Ok(GroupSpec { factors })
    }

    /// Single-factor convenience constructor.
    pub fn single(factor: FactorSpec) -> Self {
        GroupSpec::new(vec![factor]).expect("single factor spec")
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    /// The spec consisting of factor `i` alone.
    pub fn factor_spec(&self, i: usize) -> GroupSpec {
        GroupSpec::single(self.factors[i].clone())
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(FactorSpec::is_finite)
    }

    /// Number of elements, or `None` when infinite (or past `u128`).
    pub fn order(&self) -> Option<u128> {
        let mut n: u128 = 1;
        for f in &self.factors {
            match f {
                FactorSpec::ModM { moduli, .. } => {
                    n = n.checked_mul(FactorSpec::table_len(moduli)?)?;
                }
                _ => return None,
            }
        }
        Some(n)
    }

    pub fn zero(&self) -> GroupElement {
        let coords = self
            .factors
            .iter()
            .map(|f| match f {
                FactorSpec::IntZ { .. } => Coord::Int(BigInt::zero()),
                FactorSpec::RealQ { .. } => Coord::Rat(Scalar::zero()),
                FactorSpec::ModM { moduli, .. } => Coord::Mod(vec![0; moduli.len()]),
            })
            .collect();
        GroupElement::new(coords)
    }

    /// Checks that `g` has the right shape for this spec.
    pub fn conforms(&self, g: &GroupElement) -> Result<()> {
        if g.coords.len() != self.factors.len() {
            return Err(Error::ShapeMismatch {
                expected: self.factors.len(),
                found: g.coords.len(),
            });
        }
        for (i, (c, f)) in g.coords.iter().zip(&self.factors).enumerate() {
            match (c, f) {
                (Coord::Int(_), FactorSpec::IntZ { .. }) => {}
                (Coord::Rat(_), FactorSpec::RealQ { .. }) => {}
                (Coord::Mod(rs), FactorSpec::ModM { moduli, .. }) => {
                    if rs.len() != moduli.len() {
                        return Err(Error::InvalidInput(format!(
                            "coordinate {i}: residue tuple length {} != {}",
                            rs.len(),
                            moduli.len()
                        )));
                    }
                    if let Some((k, _)) = rs
                        .iter()
                        .zip(moduli)
                        .enumerate()
                        .find(|(_, (r, m))| *r >= *m)
                    {
                        return Err(Error::InvalidInput(format!(
                            "coordinate {i}: residue {} out of range at position {k}",
                            rs[k]
                        )));
                    }
                }
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "coordinate {i} does not match factor kind"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.conforms(a)?;
        self.conforms(b)?;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.factors)
            .map(|((ca, cb), f)| match (ca, cb, f) {
                (Coord::Int(x), Coord::Int(y), _) => Coord::Int(x + y),
                (Coord::Rat(x), Coord::Rat(y), _) => Coord::Rat(x + y),
                (Coord::Mod(xs), Coord::Mod(ys), FactorSpec::ModM { moduli, .. }) => Coord::Mod(
                    xs.iter()
                        .zip(ys)
                        .zip(moduli)
                        .map(|((x, y), m)| (x + y) % m)
                        .collect(),
                ),
                _ => unreachable!("conformance checked"),
            })
            .collect();
        Ok(GroupElement::new(coords))
    }

    pub fn neg(&self, g: &GroupElement) -> Result<GroupElement> {
        self.conforms(g)?;
        let coords = g
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(c, f)| match (c, f) {
                (Coord::Int(x), _) => Coord::Int(-x),
                (Coord::Rat(x), _) => Coord::Rat(-x),
                (Coord::Mod(xs), FactorSpec::ModM { moduli, .. }) => {
                    Coord::Mod(xs.iter().zip(moduli).map(|(x, m)| (m - x) % m).collect())
                }
                _ => unreachable!("conformance checked"),
            })
            .collect();
        Ok(GroupElement::new(coords))
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// `n * g` for an integer `n`.
    pub fn mul_int(&self, g: &GroupElement, n: &BigInt) -> Result<GroupElement> {
        self.conforms(g)?;
        let coords = g
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(c, f)| match (c, f) {
                (Coord::Int(x), _) => Coord::Int(x * n),
                (Coord::Rat(x), _) => Coord::Rat(x * &Scalar::from_bigint(n.clone())),
                (Coord::Mod(xs), FactorSpec::ModM { moduli, .. }) => Coord::Mod(
                    xs.iter()
                        .zip(moduli)
                        .map(|(x, m)| {
                            let mm = BigInt::from(*m);
                            let r = (BigInt::from(*x) * n) % &mm;
                            let r = if r.is_negative() { r + &mm } else { r };
                            u64::try_from(r).expect("reduced residue fits u64")
                        })
                        .collect(),
                ),
                _ => unreachable!("conformance checked"),
            })
            .collect();
        Ok(GroupElement::new(coords))
    }

    pub fn is_zero(&self, g: &GroupElement) -> bool {
        g.coords.iter().all(|c| match c {
            Coord::Int(x) => x.is_zero(),
            Coord::Rat(x) => x.is_zero(),
            Coord::Mod(xs) => xs.iter().all(|&r| r == 0),
        })
    }

    /// Norm of `g`: the sum over factors of the factor norm.
    pub fn norm(&self, g: &GroupElement) -> Result<Scalar> {
        self.conforms(g)?;
        let mut total = Scalar::zero();
        for (c, f) in g.coords.iter().zip(&self.factors) {
            total += &self.coord_norm(c, f);
        }
        Ok(total)
    }

    fn coord_norm(&self, c: &Coord, f: &FactorSpec) -> Scalar {
        match (c, f) {
            (Coord::Int(x), FactorSpec::IntZ { weight }) => {
                weight * &Scalar::from_bigint(x.abs())
            }
            (Coord::Rat(x), FactorSpec::RealQ { weight }) => weight * &x.abs(),
            (Coord::Mod(xs), FactorSpec::ModM { moduli, norm_table }) => {
                norm_table[mixed_radix_index(xs, moduli)].clone()
            }
            _ => unreachable!("conformance checked"),
        }
    }

    /// Checks the norm axioms; violations are reported as values, not errors.
    ///
    /// For each table factor, in deterministic order: `|0| = 0`, no negative
    /// entries, definiteness, symmetry, then subadditivity over all pairs.
    pub fn validate_norm(&self) -> NormValidation {
        for (i, f) in self.factors.iter().enumerate() {
            match f {
                FactorSpec::IntZ { weight } | FactorSpec::RealQ { weight } => {
                    if !weight.is_positive() {
                        return NormValidation::Violation(NormViolation::NonpositiveWeight {
                            factor: i,
                        });
                    }
                }
                FactorSpec::ModM { moduli, norm_table } => {
                    if !norm_table[0].is_zero() {
                        return NormValidation::Violation(NormViolation::NonzeroAtZero {
                            factor: i,
                        });
                    }
                    let size = norm_table.len();
                    for idx in 0..size {
                        if norm_table[idx].is_negative() {
                            return NormValidation::Violation(NormViolation::NegativeValue {
                                factor: i,
                                elem: index_to_residues(idx, moduli),
                            });
                        }
                    }
                    for idx in 1..size {
                        if norm_table[idx].is_zero() {
                            return NormValidation::Violation(NormViolation::ZeroAtNonzero {
                                factor: i,
                                elem: index_to_residues(idx, moduli),
                            });
                        }
                    }
                    for idx in 1..size {
                        let rs = index_to_residues(idx, moduli);
                        let neg = negate_residues(&rs, moduli);
                        let nidx = mixed_radix_index(&neg, moduli);
                        if norm_table[idx] != norm_table[nidx] {
                            return NormValidation::Violation(NormViolation::Asymmetric {
                                factor: i,
                                elem: rs,
                                norm: norm_table[idx].clone(),
                                neg_norm: norm_table[nidx].clone(),
                            });
                        }
                    }
                    for a in 0..size {
                        let ra = index_to_residues(a, moduli);
                        for b in a..size {
                            let rb = index_to_residues(b, moduli);
                            let sum: Vec<u64> = ra
                                .iter()
                                .zip(&rb)
                                .zip(moduli)
                                .map(|((x, y), m)| (x + y) % m)
                                .collect();
                            let sidx = mixed_radix_index(&sum, moduli);
                            let bound = &norm_table[a] + &norm_table[b];
                            if norm_table[sidx] > bound {
                                return NormValidation::Violation(NormViolation::Subadditive {
                                    factor: i,
                                    a: ra.clone(),
                                    b: rb,
                                    sum_norm: norm_table[sidx].clone(),
                                    bound,
                                });
                            }
                        }
                    }
                }
            }
        }
        NormValidation::Ok
    }

    /// Errors out unless [`GroupSpec::validate_norm`] passes.
    pub fn ensure_valid_norm(&self) -> Result<()> {
        match self.validate_norm() {
            NormValidation::Ok => Ok(()),
            NormValidation::Violation(v) => Err(Error::NormAxiomViolation(v.to_string())),
        }
    }

    /// All elements of a finite group in lexicographic coordinate order.
    pub fn enumerate_elements(&self) -> Result<Vec<GroupElement>> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup);
        }
        let mut flat_moduli = Vec::new();
        for f in &self.factors {
            if let FactorSpec::ModM { moduli, .. } = f {
                flat_moduli.extend_from_slice(moduli);
            }
        }
        let total = self.order().ok_or(Error::InfiniteGroup)?;
        let total = usize::try_from(total)
            .map_err(|_| Error::InvalidInput("group too large to enumerate".into()))?;
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0u64; flat_moduli.len()];
        loop {
            out.push(self.element_from_flat(&digits));
            // odometer: rightmost digit fastest keeps lexicographic order
            let mut pos = flat_moduli.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < flat_moduli[pos] {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    fn element_from_flat(&self, flat: &[u64]) -> GroupElement {
        let mut coords = Vec::with_capacity(self.factors.len());
        let mut at = 0;
        for f in &self.factors {
            if let FactorSpec::ModM { moduli, .. } = f {
                coords.push(Coord::Mod(flat[at..at + moduli.len()].to_vec()));
                at += moduli.len();
            } else {
                unreachable!("finite spec has only table factors");
            }
        }
        GroupElement::new(coords)
    }

    /// All unordered triples `{a, b, c}` with `a + b + c = 0`, excluding the
    /// all-zero triple, each reported sorted and listed in lexicographic
    /// order.
    pub fn enumerate_zero_mean_triples(
        &self,
    ) -> Result<Vec<(GroupElement, GroupElement, GroupElement)>> {
        let elems = self.enumerate_elements()?;
        let mut out = Vec::new();
        for (i, a) in elems.iter().enumerate() {
            for b in elems.iter().skip(i) {
                let c = self.neg(&self.add(a, b)?)?;
                if c < *b {
                    continue;
                }
                if self.is_zero(a) && self.is_zero(b) && self.is_zero(&c) {
                    continue;
                }
                out.push((a.clone(), b.clone(), c));
            }
        }
        Ok(out)
    }

    /// The representative of `{g, -g}` that is smaller in the sign-insensitive
    /// order (absolute value first, nonnegative preferred; residues compared
    /// by distance to zero).
    pub fn canonical_rep(&self, g: &GroupElement) -> Result<GroupElement> {
        let n = self.neg(g)?;
        if sign_order(self, g, &n) == Ordering::Greater {
            Ok(n)
        } else {
            Ok(g.clone())
        }
    }
}

/// Compares elements by per-coordinate magnitude, preferring the
/// "nonnegative" representative. Used to canonicalize `{g, -g}` pairs and to
/// order representative lists.
pub fn sign_order(spec: &GroupSpec, a: &GroupElement, b: &GroupElement) -> Ordering {
    for ((ca, cb), f) in a.coords.iter().zip(&b.coords).zip(spec.factors()) {
        let ord = match (ca, cb, f) {
            (Coord::Int(x), Coord::Int(y), _) => (x.abs(), x.is_negative())
                .cmp(&(y.abs(), y.is_negative())),
            (Coord::Rat(x), Coord::Rat(y), _) => (x.abs(), x.is_negative())
                .cmp(&(y.abs(), y.is_negative())),
            (Coord::Mod(xs), Coord::Mod(ys), FactorSpec::ModM { moduli, .. }) => {
                let key = |rs: &[u64]| -> Vec<(u64, u64)> {
                    rs.iter()
                        .zip(moduli)
                        .map(|(&r, &m)| (r.min(m - r), r))
                        .collect()
                };
                key(xs).cmp(&key(ys))
            }
            _ => Ordering::Equal,
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

pub(crate) fn mixed_radix_index(residues: &[u64], moduli: &[u64]) -> usize {
    let mut idx: usize = 0;
    for (r, m) in residues.iter().zip(moduli) {
        idx = idx * (*m as usize) + (*r as usize);
    }
    idx
}

pub(crate) fn index_to_residues(mut idx: usize, moduli: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; moduli.len()];
    for (pos, m) in moduli.iter().enumerate().rev() {
        out[pos] = (idx % (*m as usize)) as u64;
        idx /= *m as usize;
    }
    out
}

pub(crate) fn negate_residues(residues: &[u64], moduli: &[u64]) -> Vec<u64> {
    residues.iter().zip(moduli).map(|(r, m)| (m - r) % m).collect()
}

/// Index-based view of a finite group, used by exhaustive solvers.
#[derive(Debug, Clone)]
pub(crate) struct ElementTable {
    pub elems: Vec<GroupElement>,
    pub norms: Vec<Scalar>,
    pub neg: Vec<u32>,
    flat_moduli: Vec<u64>,
    flat_residues: Vec<Vec<u64>>,
}

impl ElementTable {
    pub fn build(spec: &GroupSpec) -> Result<ElementTable> {
        let elems = spec.enumerate_elements()?;
        let mut flat_moduli = Vec::new();
        for f in spec.factors() {
            if let FactorSpec::ModM { moduli, .. } = f {
                flat_moduli.extend_from_slice(moduli);
            }
        }
        let flat_residues: Vec<Vec<u64>> = elems
            .iter()
            .map(|e| {
                let mut flat = Vec::with_capacity(flat_moduli.len());
                for c in &e.coords {
                    if let Coord::Mod(rs) = c {
                        flat.extend_from_slice(rs);
                    }
                }
                flat
            })
            .collect();
        let mut norms = Vec::with_capacity(elems.len());
        let mut neg = Vec::with_capacity(elems.len());
        for (i, e) in elems.iter().enumerate() {
            norms.push(spec.norm(e)?);
            let flat = negate_residues(&flat_residues[i], &flat_moduli);
            neg.push(mixed_radix_index(&flat, &flat_moduli) as u32);
        }
        Ok(ElementTable {
            elems,
            norms,
            neg,
            flat_moduli,
            flat_residues,
        })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let ra = &self.flat_residues[a as usize];
        let rb = &self.flat_residues[b as usize];
        let mut idx: usize = 0;
        for ((x, y), m) in ra.iter().zip(rb).zip(&self.flat_moduli) {
            idx = idx * (*m as usize) + (((x + y) % m) as usize);
        }
        idx as u32
    }

    pub fn index_of(&self, g: &GroupElement) -> u32 {
        let mut flat = Vec::with_capacity(self.flat_moduli.len());
        for c in &g.coords {
            if let Coord::Mod(rs) = c {
                flat.extend_from_slice(rs);
            }
        }
        mixed_radix_index(&flat, &self.flat_moduli) as u32
    }
}

// ---------------------------------------------------------------------------
// JSON forms
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct FactorRaw {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    moduli: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    norm_table: Option<Vec<Scalar>>,
}

impl Serialize for FactorSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = match self {
            FactorSpec::IntZ { weight } => FactorRaw {
                kind: "Z".into(),
                weight: Some(weight.clone()),
                moduli: None,
                norm_table: None,
            },
            FactorSpec::RealQ { weight } => FactorRaw {
                kind: "R".into(),
                weight: Some(weight.clone()),
                moduli: None,
                norm_table: None,
            },
            FactorSpec::ModM { moduli, norm_table } => FactorRaw {
                kind: "Zmod".into(),
                weight: None,
                moduli: Some(moduli.clone()),
                norm_table: Some(norm_table.clone()),
            },
        };
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FactorSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let raw = FactorRaw::deserialize(d)?;
        let weight = raw.weight.clone().unwrap_or_else(Scalar::one);
        match raw.kind.as_str() {
            "Z" => Ok(FactorSpec::IntZ { weight }),
            "R" => Ok(FactorSpec::RealQ { weight }),
            "Z2" => Ok(FactorSpec::z2(weight)),
            "Zmod" => {
                let moduli = raw
                    .moduli
                    .ok_or_else(|| DeError::custom("Zmod factor needs moduli"))?;
                let norm_table = raw
                    .norm_table
                    .ok_or_else(|| DeError::custom("Zmod factor needs norm_table"))?;
                Ok(FactorSpec::ModM { moduli, norm_table })
            }
            other => Err(DeError::custom(format!("unknown factor kind {other:?}"))),
        }
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            factors: &'a [FactorSpec],
        }
        Raw {
            factors: &self.factors,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        #[derive(Deserialize)]
        struct Raw {
            factors: Vec<FactorSpec>,
        }
        let raw = Raw::deserialize(d)?;
        GroupSpec::new(raw.factors).map_err(|e| DeError::custom(e.to_string()))
    }
}

/// Serializes an element as a JSON array with one entry per factor:
/// integers as numbers (strings past `i64`), rationals as `"p/q"` strings,
/// residues as a number (single modulus) or an array of numbers.
pub fn element_to_json(elem: &GroupElement) -> serde_json::Value {
    use serde_json::Value;
    let coords: Vec<Value> = elem
        .coords
        .iter()
        .map(|c| match c {
            Coord::Int(n) => match i64::try_from(n.clone()) {
                Ok(v) => Value::from(v),
                Err(_) => Value::from(n.to_string()),
            },
            Coord::Rat(r) => Value::from(r.to_string()),
            Coord::Mod(rs) => {
                if rs.len() == 1 {
                    Value::from(rs[0])
                } else {
                    Value::from(rs.clone())
                }
            }
        })
        .collect();
    Value::from(coords)
}

/// Parses an element from its JSON array form, guided by the spec. For
/// single-factor groups a bare coordinate is accepted as shorthand for the
/// one-entry array.
pub fn element_from_json(spec: &GroupSpec, value: &serde_json::Value) -> Result<GroupElement> {
    use serde_json::Value;
    let single = spec.factors().len() == 1;
    let owned: Vec<Value>;
    let arr: &[Value] = match value.as_array() {
        Some(a) if a.len() == spec.factors().len() => a,
        _ if single => {
            owned = vec![value.clone()];
            &owned
        }
        Some(a) => {
            return Err(Error::ShapeMismatch {
                expected: spec.factors().len(),
                found: a.len(),
            })
        }
        None => return Err(Error::InvalidInput("element must be a JSON array".into())),
    };
    let mut coords = Vec::with_capacity(arr.len());
    for (v, f) in arr.iter().zip(spec.factors()) {
        let coord = match f {
            FactorSpec::IntZ { .. } => match v {
                Value::Number(n) => {
                    let i = n
                        .as_i64()
                        .ok_or_else(|| Error::InvalidInput(format!("bad integer {n}")))?;
                    Coord::Int(BigInt::from(i))
                }
                Value::String(s) => {
                    let sc = Scalar::parse(s)?;
                    let i = sc
                        .to_integer()
                        .ok_or_else(|| Error::InvalidInput(format!("{s:?} is not an integer")))?;
                    Coord::Int(i)
                }
                _ => return Err(Error::InvalidInput("integer coordinate expected".into())),
            },
            FactorSpec::RealQ { .. } => match v {
                Value::Number(n) => {
                    let i = n
                        .as_i64()
                        .ok_or_else(|| Error::InvalidInput(format!("bad rational {n}")))?;
                    Coord::Rat(Scalar::from_int(i))
                }
                Value::String(s) => Coord::Rat(Scalar::parse(s)?),
                _ => return Err(Error::InvalidInput("rational coordinate expected".into())),
            },
            FactorSpec::ModM { moduli, .. } => match v {
                Value::Number(n) => {
                    if moduli.len() != 1 {
                        return Err(Error::InvalidInput(
                            "residue tuple expected for multi-modulus factor".into(),
                        ));
                    }
                    let r = n
                        .as_u64()
                        .ok_or_else(|| Error::InvalidInput(format!("bad residue {n}")))?;
                    Coord::Mod(vec![r])
                }
                Value::Array(rs) => {
                    let mut tuple = Vec::with_capacity(rs.len());
                    for r in rs {
                        tuple.push(r.as_u64().ok_or_else(|| {
                            Error::InvalidInput(format!("bad residue {r}"))
                        })?);
                    }
                    Coord::Mod(tuple)
                }
                _ => return Err(Error::InvalidInput("residue coordinate expected".into())),
            },
        };
        coords.push(coord);
    }
    let elem = GroupElement::new(coords);
    spec.conforms(&elem)?;
    Ok(elem)
}

// ---------------------------------------------------------------------------
