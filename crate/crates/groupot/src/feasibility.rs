//! Mechanized search for collinearity norms on finite abelian groups.
//!
//! Given moduli `m_1, ..., m_k`, this module decides whether the product of
//! the cyclic groups `Z_{m_i}` carries any norm making every zero-sum
//! triple collinear. The unknowns are one value per `{g, -g}` class; each
//! zero-free triple must satisfy one of its three collinearity equalities,
//! so the search walks all assignments of equalities to triples and tests
//! each candidate linear system (equalities, subadditivity, positivity)
//! exactly by rational projection. Either some pattern is satisfiable and
//! the least witness norm is produced, or every pattern is refuted and the
//! refutation counts add back up to the full pattern space.

use crate::error::{Error, Result};
use crate::group::{index_to_residues, mixed_radix_index, negate_residues, FactorSpec, GroupSpec};
use crate::linear::{Constraint, System};
use crate::scalar::Scalar;
use crate::solver::SolveOptions;

/// Verdict of the norm search, with enough bookkeeping to re-count it.
#[derive(Debug, Clone)]
pub struct NormFeasibilityResult {
    pub moduli: Vec<u64>,
    pub feasible: bool,
    /// Norm table over all elements in enumeration order, zero first;
    /// the least solution in class order, scaled so the smallest nonzero
    /// norm is one.
    pub witness_norm: Option<Vec<Scalar>>,
    /// For the witness pattern: its tight equalities, then the projected
    /// range of every class value.
    pub family_description: Option<Vec<String>>,
    pub trace: FeasibilityTrace,
}

impl NormFeasibilityResult {
    /// The witness packaged as a one-factor group carrying the found norm.
    pub fn witness_spec(&self) -> Option<GroupSpec> {
        self.witness_norm.as_ref().map(|table| {
            GroupSpec::new(vec![FactorSpec::ModM {
                moduli: self.moduli.clone(),
                norm_table: table.clone(),
            }])
            .expect("witness tables have valid shape")
        })
    }
}

/// Pattern accounting: `patterns_refuted + patterns_feasible` always equals
/// `patterns_total`, and the per-refutation `pruned` counts sum to
/// `patterns_refuted`.
#[derive(Debug, Clone)]
pub struct FeasibilityTrace {
    /// Number of `{g, -g}` classes, one unknown each.
    pub classes: usize,
    /// Canonical zero-free triples constrained by the patterns.
    pub triples: usize,
    pub patterns_total: u128,
    pub patterns_refuted: u128,
    pub patterns_feasible: u128,
    pub refutations: Vec<PatternRefutation>,
}

/// One pruned subtree: the equality choices made so far (the last one
/// sealed the contradiction) and how many full patterns die with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternRefutation {
    pub prefix: Vec<u8>,
    pub pruned: u128,
}

struct ClassTable {
    moduli: Vec<u64>,
    order: usize,
    /// Element index to unknown id; `None` for zero.
    class_of: Vec<Option<usize>>,
    /// Unknown id to the smaller element index of its class.
    reps: Vec<usize>,
}

impl ClassTable {
    fn build(moduli: &[u64]) -> Result<ClassTable> {
        if moduli.is_empty() {
            return Err(Error::InvalidInput("no moduli given".into()));
        }
        let mut order = 1usize;
        for &m in moduli {
            if m < 2 {
                return Err(Error::InvalidInput(format!(
                    "modulus {m} is below 2; drop trivial factors"
                )));
            }
            order = order
                .checked_mul(m as usize)
                .ok_or_else(|| Error::InvalidInput("group order overflows".into()))?;
        }
        let mut class_of = vec![None; order];
        let mut reps = Vec::new();
        for i in 1..order {
            if class_of[i].is_some() {
                continue;
            }
            let res = index_to_residues(i, moduli);
            let n = mixed_radix_index(&negate_residues(&res, moduli), moduli);
            let id = reps.len();
            class_of[i] = Some(id);
            class_of[n] = Some(id);
            reps.push(i);
        }
        Ok(ClassTable {
            moduli: moduli.to_vec(),
            order,
            class_of,
            reps,
        })
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let ra = index_to_residues(a, &self.moduli);
        let rb = index_to_residues(b, &self.moduli);
        let sum: Vec<u64> = ra
            .iter()
            .zip(&rb)
            .zip(&self.moduli)
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        mixed_radix_index(&sum, &self.moduli)
    }

    fn neg(&self, a: usize) -> usize {
        let res = index_to_residues(a, &self.moduli);
        mixed_radix_index(&negate_residues(&res, &self.moduli), &self.moduli)
    }

    fn var(&self, elem: usize) -> usize {
        self.class_of[elem].expect("nonzero element")
    }

    fn name(&self, elem: usize) -> String {
        let res = index_to_residues(elem, &self.moduli);
        if res.len() == 1 {
            res[0].to_string()
        } else {
            let inner: Vec<String> = res.iter().map(u64::to_string).collect();
            format!("({})", inner.join(","))
        }
    }
}

/// Unordered zero-sum triples with no zero entry, each as sorted element
/// indices.
fn zero_free_triples(t: &ClassTable) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 1..t.order {
        for b in a..t.order {
            let c = t.neg(t.add(a, b));
            if c == 0 || c < b {
                continue;
            }
            out.push([a, b, c]);
        }
    }
    out
}

/// Positivity (scaled so every class value is at least one) plus
/// subadditivity over all nonzero pairs with nonzero sum.
fn base_system(t: &ClassTable) -> System {
    let n = t.reps.len();
    let mut sys = System::new(n);
    for id in 0..n {
        let mut coeffs = vec![Scalar::zero(); n];
        coeffs[id] = Scalar::one();
        sys.push(Constraint::ge(coeffs, Scalar::one()));
    }
    for a in 1..t.order {
        for b in a..t.order {
            let s = t.add(a, b);
            if s == 0 {
                continue;
            }
            let mut coeffs = vec![Scalar::zero(); n];
            coeffs[t.var(a)] = &coeffs[t.var(a)] + &Scalar::one();
            coeffs[t.var(b)] = &coeffs[t.var(b)] + &Scalar::one();
            coeffs[t.var(s)] = &coeffs[t.var(s)] - &Scalar::one();
            sys.push(Constraint::ge(coeffs, Scalar::zero()));
        }
    }
    sys
}

/// The members of the chosen equality, as `(left, left, right)` elements.
fn equality_members(tri: [usize; 3], choice: u8) -> (usize, usize, usize) {
    match choice {
        0 => (tri[0], tri[1], tri[2]),
        1 => (tri[0], tri[2], tri[1]),
        _ => (tri[1], tri[2], tri[0]),
    }
}

fn triple_equality(t: &ClassTable, tri: [usize; 3], choice: u8) -> Constraint {
    let (l1, l2, r) = equality_members(tri, choice);
    let mut coeffs = vec![Scalar::zero(); t.reps.len()];
    coeffs[t.var(l1)] = &coeffs[t.var(l1)] + &Scalar::one();
    coeffs[t.var(l2)] = &coeffs[t.var(l2)] + &Scalar::one();
    coeffs[t.var(r)] = &coeffs[t.var(r)] - &Scalar::one();
    Constraint::eq(coeffs, Scalar::zero())
}

struct Dfs<'a> {
    table: &'a ClassTable,
    triples: &'a [[usize; 3]],
    budget: u128,
    nodes: u128,
    refuted: u128,
    feasible_count: u128,
    refutations: Vec<PatternRefutation>,
    best: Option<(Vec<u8>, Vec<Scalar>)>,
}

impl Dfs<'_> {
    fn run(&mut self, sys: &System, choices: &mut Vec<u8>) -> Result<()> {
        let depth = choices.len();
        for choice in 0..3u8 {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded {
                    needed: self.nodes,
                    budget: self.budget,
                });
            }
            let mut next = sys.clone();
            next.push(triple_equality(self.table, self.triples[depth], choice));
            choices.push(choice);
            if next.feasible()? {
                if depth + 1 == self.triples.len() {
                    self.feasible_count += 1;
                    let lex = next
                        .lex_min()?
                        .expect("a feasible bounded-below system has a least point");
                    if self.best.as_ref().map_or(true, |(_, cur)| lex < *cur) {
                        self.best = Some((choices.clone(), lex));
                    }
                } else {
                    self.run(&next, choices)?;
                }
            } else {
                let pruned = 3u128.pow((self.triples.len() - depth - 1) as u32);
                self.refuted += pruned;
                self.refutations.push(PatternRefutation {
                    prefix: choices.clone(),
                    pruned,
                });
            }
            choices.pop();
        }
        Ok(())
    }
}

/// Decides whether the product of the given cyclic groups carries a norm
/// under which every zero-sum triple is collinear. The budget bounds the
/// number of partial patterns examined.
pub fn czt_norm_feasibility(moduli: &[u64], opts: &SolveOptions) -> Result<NormFeasibilityResult> {
    let table = ClassTable::build(moduli)?;
    let triples = zero_free_triples(&table);
    let total = 3u128
        .checked_pow(triples.len() as u32)
        .ok_or(Error::BudgetExceeded {
            needed: u128::MAX,
            budget: opts.budget,
        })?;
    let base = base_system(&table);
    let mut dfs = Dfs {
        table: &table,
        triples: &triples,
        budget: opts.budget,
        nodes: 0,
        refuted: 0,
        feasible_count: 0,
        refutations: Vec::new(),
        best: None,
    };
    if triples.is_empty() {
        let lex = base
            .lex_min()?
            .expect("positivity alone is satisfied by all ones");
        dfs.feasible_count = 1;
        dfs.best = Some((Vec::new(), lex));
    } else {
        let mut choices = Vec::with_capacity(triples.len());
        dfs.run(&base, &mut choices)?;
    }
    let (witness_norm, family_description) = match &dfs.best {
        None => (None, None),
        Some((pattern, values)) => {
            let norm_table: Vec<Scalar> = (0..table.order)
                .map(|i| match table.class_of[i] {
                    None => Scalar::zero(),
                    Some(c) => values[c].clone(),
                })
                .collect();
            let mut winning = base.clone();
            let mut desc = Vec::new();
            for (tri, &choice) in triples.iter().zip(pattern) {
                winning.push(triple_equality(&table, *tri, choice));
                let (l1, l2, r) = equality_members(*tri, choice);
                desc.push(format!(
                    "tight: |{}| + |{}| = |{}|",
                    table.name(l1),
                    table.name(l2),
                    table.name(r)
                ));
            }
            for (id, &rep) in table.reps.iter().enumerate() {
                let range = winning
                    .range_of(id)?
                    .expect("the winning system is feasible");
                if let Some(v) = range.forced() {
                    desc.push(format!("fixed: |{}| = {}", table.name(rep), v));
                } else {
                    let lo = range
                        .lower
                        .as_ref()
                        .map(|(v, _)| v.to_string())
                        .unwrap_or_else(|| "-inf".into());
                    let hi = range
                        .upper
                        .as_ref()
                        .map(|(v, _)| v.to_string())
                        .unwrap_or_else(|| "+inf".into());
                    desc.push(format!("free: |{}| in [{}, {}]", table.name(rep), lo, hi));
                }
            }
            (Some(norm_table), Some(desc))
        }
    };
    Ok(NormFeasibilityResult {
        moduli: moduli.to_vec(),
        feasible: dfs.best.is_some(),
        witness_norm,
        family_description,
        trace: FeasibilityTrace {
            classes: table.reps.len(),
            triples: triples.len(),
            patterns_total: total,
            patterns_refuted: dfs.refuted,
            patterns_feasible: dfs.feasible_count,
            refutations: dfs.refutations,
        },
    })
}
