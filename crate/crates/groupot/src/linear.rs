//! Exact linear constraint systems over the rationals.
//!
//! A [`System`] holds equalities and (possibly strict) inequalities in `n`
//! variables. Feasibility, per-variable ranges, and lexicographically
//! minimal solutions are decided by Fourier-Motzkin elimination, which stays
//! exact because every step is a positive rational combination of rows.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashSet};

use num::bigint::BigInt;
use num::{Integer, One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relation of `coeffs . x` to `rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Ge,
    Gt,
}

/// A single constraint `coeffs . x  rel  rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: Vec<Scalar>,
    pub rel: Rel,
    pub rhs: Scalar,
}

impl Constraint {
    pub fn new(coeffs: Vec<Scalar>, rel: Rel, rhs: Scalar) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    pub fn eq(coeffs: Vec<Scalar>, rhs: Scalar) -> Self {
        Constraint::new(coeffs, Rel::Eq, rhs)
    }

    pub fn ge(coeffs: Vec<Scalar>, rhs: Scalar) -> Self {
        Constraint::new(coeffs, Rel::Ge, rhs)
    }

    pub fn gt(coeffs: Vec<Scalar>, rhs: Scalar) -> Self {
        Constraint::new(coeffs, Rel::Gt, rhs)
    }

    /// `coeffs . x <= rhs`, stored negated.
    pub fn le(coeffs: Vec<Scalar>, rhs: Scalar) -> Self {
        Constraint::new(coeffs.iter().map(|c| -c).collect(), Rel::Ge, -&rhs)
    }

    /// `coeffs . x < rhs`, stored negated.
    pub fn lt(coeffs: Vec<Scalar>, rhs: Scalar) -> Self {
        Constraint::new(coeffs.iter().map(|c| -c).collect(), Rel::Gt, -&rhs)
    }

    pub fn is_ground(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Truth of a ground constraint (`0 rel rhs`).
    fn ground_holds(&self) -> bool {
        match self.rel {
            Rel::Eq => self.rhs.is_zero(),
            Rel::Ge => !self.rhs.is_positive(),
            Rel::Gt => self.rhs.is_negative(),
        }
    }

    pub fn holds_at(&self, point: &[Scalar]) -> bool {
        let lhs: Scalar = self
            .coeffs
            .iter()
            .zip(point)
            .map(|(c, x)| c * x)
            .fold(Scalar::zero(), |a, b| &a + &b);
        match self.rel {
            Rel::Eq => lhs == self.rhs,
            Rel::Ge => lhs >= self.rhs,
            Rel::Gt => lhs > self.rhs,
        }
    }

    /// Exact equality holds at the point (used for tight-set descriptions).
    pub fn tight_at(&self, point: &[Scalar]) -> bool {
        let lhs: Scalar = self
            .coeffs
            .iter()
            .zip(point)
            .map(|(c, x)| c * x)
            .fold(Scalar::zero(), |a, b| &a + &b);
        lhs == self.rhs
    }

    /// Primitive integer coefficient direction plus the rhs rescaled to
    /// match. Parallel rows of any magnitude share the first component, so
    /// it keys dominance checks; the scaling factor is positive, keeping
    /// the relation's sense.
    fn direction(&self) -> (Vec<Scalar>, Scalar) {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.as_rational().denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c.as_rational() * &lcm).to_integer())
            .collect();
        let mut gcd = BigInt::zero();
        for v in &ints {
            gcd = gcd.gcd(v);
        }
        if gcd.is_zero() {
            return (self.coeffs.clone(), self.rhs.clone());
        }
        let dir = ints
            .into_iter()
            .map(|v| Scalar::from_rational(num::rational::BigRational::new(v, gcd.clone())))
            .collect();
        let scale = Scalar::from_rational(num::rational::BigRational::new(lcm, gcd));
        (dir, &self.rhs * &scale)
    }

    /// Scales to a primitive integer vector with positive content, the
    /// canonical representative used for deduplication.
    fn normalized(mut self) -> Self {
        let mut lcm = BigInt::one();
        for c in self.coeffs.iter().chain(std::iter::once(&self.rhs)) {
            lcm = lcm.lcm(c.as_rational().denom());
        }
        let mut gcd = BigInt::zero();
        let scaled: Vec<BigInt> = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.rhs))
            .map(|c| (c.as_rational() * &lcm).to_integer())
            .collect();
        for v in &scaled {
            gcd = gcd.gcd(v);
        }
        if gcd.is_zero() {
            return self;
        }
        let m = scaled.len();
        for (i, v) in scaled.into_iter().enumerate() {
            let s = Scalar::from_rational(num::rational::BigRational::new(v, gcd.clone()));
            if i + 1 == m {
                self.rhs = s;
            } else {
                self.coeffs[i] = s;
            }
        }
        self
    }
}

/// Safety valve: eliminating a variable multiplies bound counts, so a system
/// that grows past this many constraints aborts instead of thrashing.
const MAX_CONSTRAINTS: usize = 200_000;

/// Conjunction of constraints in `nvars` variables.
#[derive(Debug, Clone)]
pub struct System {
    nvars: usize,
    constraints: Vec<Constraint>,
}

/// Feasible values of one variable after projecting out all others: an
/// interval, possibly open or unbounded on either side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarRange {
    pub lower: Option<(Scalar, bool)>,
    pub upper: Option<(Scalar, bool)>,
}

impl VarRange {
    /// The bound pair describes a nonempty set of values.
    pub fn is_nonempty(&self) -> bool {
        match (&self.lower, &self.upper) {
            (Some((lo, lo_strict)), Some((hi, hi_strict))) => {
                if lo < hi {
                    true
                } else {
                    lo == hi && !lo_strict && !hi_strict
                }
            }
            _ => true,
        }
    }

    /// Both bounds agree on a single closed value.
    pub fn forced(&self) -> Option<&Scalar> {
        match (&self.lower, &self.upper) {
            (Some((lo, false)), Some((hi, false))) if lo == hi => Some(lo),
            _ => None,
        }
    }
}

impl System {
    pub fn new(nvars: usize) -> Self {
        System {
            nvars,
            constraints: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn push(&mut self, c: Constraint) {
        assert_eq!(c.coeffs.len(), self.nvars, "constraint arity mismatch");
        let c = c.normalized();
        if c.is_ground() && c.ground_holds() {
            return;
        }
        self.constraints.push(c);
    }

    fn dedup(&mut self) {
        let mut seen = HashSet::new();
        self.constraints
            .retain(|c| seen.insert((c.coeffs.clone(), c.rel, c.rhs.clone())));
    }

    /// Substitutes a fixed value for a variable; its coefficient column
    /// becomes zero.
    pub fn fix_var(&self, var: usize, value: &Scalar) -> System {
        let mut out = System::new(self.nvars);
        for c in &self.constraints {
            let mut coeffs = c.coeffs.clone();
            let moved = &coeffs[var] * value;
            coeffs[var] = Scalar::zero();
            out.push(Constraint::new(coeffs, c.rel, &c.rhs - &moved));
        }
        out
    }

    /// Exact feasibility of the conjunction.
    pub fn feasible(&self) -> Result<bool> {
        let mut p = Projector::new(self);
        let mut alive = vec![true; self.nvars];
        loop {
            if p.ground_contradiction() {
                return Ok(false);
            }
            let Some(v) = p.cheapest_var(&alive) else {
                return Ok(true);
            };
            alive[v] = false;
            p.eliminate(v)?;
        }
    }

    /// Projects onto one variable and reads off its interval. `None` when
    /// the projected system is already infeasible.
    pub fn range_of(&self, var: usize) -> Result<Option<VarRange>> {
        let mut p = Projector::new(self);
        let mut alive = vec![true; self.nvars];
        alive[var] = false;
        loop {
            if p.ground_contradiction() {
                return Ok(None);
            }
            let Some(v) = p.cheapest_var(&alive) else {
                break;
            };
            alive[v] = false;
            p.eliminate(v)?;
        }
        let mut range = VarRange {
            lower: None,
            upper: None,
        };
        for c in p.rows.iter().map(|t| &t.row) {
            let coeff = &c.coeffs[var];
            if coeff.is_zero() {
                continue;
            }
            let bound = &c.rhs / coeff;
            let strict = c.rel == Rel::Gt;
            let sides: &[(bool, bool)] = match c.rel {
                // coeff > 0: lower bound; coeff < 0: upper bound.
                Rel::Eq => &[(true, false), (false, false)],
                _ => {
                    if coeff.is_positive() {
                        &[(true, false)]
                    } else {
                        &[(false, false)]
                    }
                }
            };
            for &(is_lower, _) in sides {
                if is_lower {
                    let tighter = match &range.lower {
                        None => true,
                        Some((cur, cur_strict)) => {
                            &bound > cur || (&bound == cur && strict && !cur_strict)
                        }
                    };
                    if tighter {
                        range.lower = Some((bound.clone(), strict));
                    }
                } else {
                    let tighter = match &range.upper {
                        None => true,
                        Some((cur, cur_strict)) => {
                            &bound < cur || (&bound == cur && strict && !cur_strict)
                        }
                    };
                    if tighter {
                        range.upper = Some((bound.clone(), strict));
                    }
                }
            }
        }
        if range.is_nonempty() {
            Ok(Some(range))
        } else {
            Ok(None)
        }
    }

    /// Lexicographically smallest solution, minimizing variable 0 first.
    /// Requires a closed system (no strict rows) whose projections are
    /// bounded below; strictness or unboundedness is an input error.
    pub fn lex_min(&self) -> Result<Option<Vec<Scalar>>> {
        if self.constraints.iter().any(|c| c.rel == Rel::Gt) {
            return Err(Error::InvalidInput(
                "lexicographic minimum needs a closed system".into(),
            ));
        }
        let mut sys = self.clone();
        let mut point = Vec::with_capacity(self.nvars);
        for var in 0..self.nvars {
            let Some(range) = sys.range_of(var)? else {
                return Ok(None);
            };
            let Some((lo, _)) = range.lower else {
                return Err(Error::InvalidInput(format!(
                    "variable {var} is unbounded below; no lexicographic minimum"
                )));
            };
            point.push(lo.clone());
            sys = sys.fix_var(var, &lo);
        }
        debug_assert!(self.constraints.iter().all(|c| c.holds_at(&point)));
        Ok(Some(point))
    }
}

/// A working row plus the set of original rows it descends from.
#[derive(Clone)]
struct Tracked {
    row: Constraint,
    hist: Vec<u64>,
}

fn hist_union(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

fn hist_count(h: &[u64]) -> u32 {
    h.iter().map(|w| w.count_ones()).sum()
}

/// Repeated Fourier-Motzkin elimination over inequality rows (equalities
/// are split into their two halves on entry). Every product row inherits
/// the union of its parents' ancestor sets; after `k` eliminations a row
/// descending from more than `k + 1` originals is a redundant combination
/// and is dropped. That classical bound, plus keeping only the strongest
/// row per coefficient direction, is what holds the row count down across
/// a long chain of projections.
struct Projector {
    nvars: usize,
    rows: Vec<Tracked>,
    eliminated: usize,
}

impl Projector {
    fn new(sys: &System) -> Projector {
        let mut base = sys.clone();
        base.dedup();
        let mut split: Vec<Constraint> = Vec::new();
        for c in base.constraints {
            match c.rel {
                Rel::Eq => {
                    split.push(Constraint::ge(c.coeffs.clone(), c.rhs.clone()));
                    split.push(Constraint::ge(
                        c.coeffs.iter().map(|x| -x).collect(),
                        -&c.rhs,
                    ));
                }
                _ => split.push(c),
            }
        }
        let words = split.len().div_ceil(64).max(1);
        let rows = split
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                let mut hist = vec![0u64; words];
                hist[i / 64] |= 1 << (i % 64);
                Tracked { row, hist }
            })
            .collect();
        Projector {
            nvars: sys.nvars,
            rows,
            eliminated: 0,
        }
    }

    fn ground_contradiction(&self) -> bool {
        self.rows
            .iter()
            .any(|t| t.row.is_ground() && !t.row.ground_holds())
    }

    fn cheapest_var(&self, alive: &[bool]) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for v in 0..self.nvars {
            if !alive[v] {
                continue;
            }
            let mut lo = 0usize;
            let mut hi = 0usize;
            for t in &self.rows {
                let coeff = &t.row.coeffs[v];
                if coeff.is_zero() {
                    continue;
                } else if coeff.is_positive() {
                    lo += 1;
                } else {
                    hi += 1;
                }
            }
            let work = lo * hi;
            if best.is_none_or(|(_, w)| work < w) {
                best = Some((v, work));
            }
        }
        best.map(|(v, _)| v)
    }

    fn eliminate(&mut self, var: usize) -> Result<()> {
        let mut kept: Vec<Tracked> = Vec::new();
        let mut lowers: Vec<Tracked> = Vec::new();
        let mut uppers: Vec<Tracked> = Vec::new();
        for t in self.rows.drain(..) {
            let coeff = &t.row.coeffs[var];
            if coeff.is_zero() {
                kept.push(t);
            } else if coeff.is_positive() {
                lowers.push(t);
            } else {
                uppers.push(t);
            }
        }
        // Ancestor budget after this step.
        let allowed = (self.eliminated + 2) as u32;
        let mut strongest: BTreeMap<Vec<Scalar>, (Scalar, Rel, Vec<u64>)> = BTreeMap::new();
        for lo in &lowers {
            for hi in &uppers {
                let hist = hist_union(&lo.hist, &hi.hist);
                if hist_count(&hist) > allowed {
                    continue;
                }
                let a = &lo.row.coeffs[var];
                let b = &hi.row.coeffs[var];
                // Positive multipliers -b and a cancel the column.
                let mut coeffs = Vec::with_capacity(self.nvars);
                for k in 0..self.nvars {
                    coeffs.push(&(&-b * &lo.row.coeffs[k]) + &(a * &hi.row.coeffs[k]));
                }
                let rhs = &(&-b * &lo.row.rhs) + &(a * &hi.row.rhs);
                let rel = if lo.row.rel == Rel::Gt || hi.row.rel == Rel::Gt {
                    Rel::Gt
                } else {
                    Rel::Ge
                };
                let row = Constraint::new(coeffs, rel, rhs);
                if row.is_ground() {
                    if !row.ground_holds() {
                        kept.push(Tracked { row, hist });
                    }
                    continue;
                }
                let (dir, scaled_rhs) = row.direction();
                match strongest.entry(dir) {
                    Entry::Vacant(slot) => {
                        slot.insert((scaled_rhs, rel, hist));
                    }
                    Entry::Occupied(mut slot) => {
                        let (held_rhs, held_rel, held_hist) = slot.get();
                        let stricter = rel == Rel::Gt && *held_rel == Rel::Ge;
                        let same = scaled_rhs == *held_rhs && rel == *held_rel;
                        if scaled_rhs > *held_rhs
                            || (scaled_rhs == *held_rhs && stricter)
                            || (same && hist_count(&hist) < hist_count(held_hist))
                        {
                            slot.insert((scaled_rhs, rel, hist));
                        }
                    }
                }
                if kept.len() + strongest.len() > MAX_CONSTRAINTS {
                    return Err(Error::BudgetExceeded {
                        needed: (kept.len() + strongest.len()) as u128,
                        budget: MAX_CONSTRAINTS as u128,
                    });
                }
            }
        }
        for (dir, (rhs, rel, hist)) in strongest {
            kept.push(Tracked {
                row: Constraint::new(dir, rel, rhs),
                hist,
            });
        }
        self.rows = kept;
        self.eliminated += 1;
        Ok(())
    }
}
