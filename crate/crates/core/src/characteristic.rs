//! Global characteristics of definable sets and the machinery that makes
//! them decide definable-bijection equivalence: refinement to larger
//! parameter sets, dimension padding, and the minimum-endpoint translation.

use crate::atoms::{split, Atom, GapVector};
use crate::formula::{CTerm, Clause, Constraint, PositiveDnf};
use crate::rat::{binomial, format_rat, rat_int, Rat};
use num::BigInt;
use num::{Signed, Zero};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A finite parameter set, stored strictly descending without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ParamSet(Vec<Rat>);

impl ParamSet {
    pub fn empty() -> ParamSet {
        ParamSet(Vec::new())
    }

    /// Builds a parameter set from arbitrary values (sorted, deduplicated).
    pub fn new(values: impl IntoIterator<Item = Rat>) -> ParamSet {
        let set: BTreeSet<Rat> = values.into_iter().collect();
        ParamSet(set.into_iter().rev().collect())
    }

    pub fn values(&self) -> &[Rat] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: &Rat) -> bool {
        self.0.iter().any(|p| p == v)
    }

    pub fn is_superset_of(&self, other: &ParamSet) -> bool {
        other.0.iter().all(|p| self.contains(p))
    }

    pub fn union(&self, other: &ParamSet) -> ParamSet {
        ParamSet::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn with(&self, extra: Rat) -> ParamSet {
        ParamSet::new(self.0.iter().cloned().chain([extra]))
    }

    /// Number of gaps cut out by the parameters.
    pub fn gap_count(&self) -> usize {
        self.0.len() + 1
    }

    /// Bounds of gap `i` (`None` at the unbounded ends).
    pub fn gap_bounds(&self, gap: usize) -> (Option<&Rat>, Option<&Rat>) {
        let lower = (gap < self.0.len()).then(|| &self.0[gap]);
        let upper = (gap > 0).then(|| &self.0[gap - 1]);
        (lower, upper)
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}}}",
            self.0.iter().map(format_rat).collect::<Vec<_>>().join(", ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharacteristicError {
    NotASuperset,
    PadShrinks { n: usize, m: usize },
    NegativeParam(Rat),
}

impl fmt::Display for CharacteristicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharacteristicError::NotASuperset => {
                write!(f, "refinement target must contain the source parameters")
            }
            CharacteristicError::PadShrinks { n, m } => {
                write!(f, "cannot pad {n} variables down to {m}")
            }
            CharacteristicError::NegativeParam(p) => write!(
                f,
                "parameter {} lies below the minimum endpoint",
                format_rat(p)
            ),
        }
    }
}

impl std::error::Error for CharacteristicError {}

/// The global characteristic of a definable set: for each color (gap-count
/// vector) the number of atoms of that color in the set's decomposition.
/// Integer coefficients may be negative for group-completion elements; zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Characteristic {
    params: ParamSet,
    coeffs: BTreeMap<GapVector, BigInt>,
}

impl Characteristic {
    pub fn new(params: ParamSet, coeffs: BTreeMap<GapVector, BigInt>) -> Characteristic {
        let gaps = params.gap_count();
        for v in coeffs.keys() {
            assert_eq!(v.counts().len(), gaps, "gap vector length mismatch");
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Characteristic { params, coeffs }
    }

    /// The empty set's characteristic.
    pub fn zero(params: ParamSet) -> Characteristic {
        Characteristic {
            params,
            coeffs: BTreeMap::new(),
        }
    }

    /// The singleton class: one atom of the pinned-only color.
    pub fn one(params: ParamSet) -> Characteristic {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(GapVector(vec![0; params.gap_count()]), BigInt::from(1));
        Characteristic { params, coeffs }
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn coeffs(&self) -> &BTreeMap<GapVector, BigInt> {
        &self.coeffs
    }

    pub fn coeff(&self, color: &GapVector) -> BigInt {
        self.coeffs.get(color).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when no stored coefficient is negative (semiring membership).
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Largest height carrying a nonzero coefficient.
    pub fn max_height(&self) -> Option<usize> {
        self.coeffs.keys().map(GapVector::height).max()
    }

    /// Total coefficient mass at the given height.
    pub fn height_total(&self, height: usize) -> BigInt {
        self.coeffs
            .iter()
            .filter(|(v, _)| v.height() == height)
            .map(|(_, c)| c.clone())
            .sum()
    }

    pub fn scale(&self, factor: &BigInt) -> Characteristic {
        Characteristic::new(
            self.params.clone(),
            self.coeffs
                .iter()
                .map(|(v, c)| (v.clone(), c * factor))
                .collect(),
        )
    }

    pub fn neg(&self) -> Characteristic {
        self.scale(&BigInt::from(-1))
    }

    /// Re-expresses the characteristic over a superset of its parameters.
    ///
    /// Within each original gap the descending chain of free blocks is
    /// distributed order-respectingly over the sub-gaps and new-parameter
    /// pins the target creates; every pin absorbs at most one block, and the
    /// ways to choose which pins absorb account for the multiplicities.
    pub fn refine(&self, target: &ParamSet) -> Result<Characteristic, CharacteristicError> {
        if !target.is_superset_of(&self.params) {
            return Err(CharacteristicError::NotASuperset);
        }
        if *target == self.params {
            return Ok(self.clone());
        }
        // How many new parameters land strictly inside each original gap.
        let mut inserted = vec![0usize; self.params.gap_count()];
        for t in target.values() {
            if !self.params.contains(t) {
                let gap = self.params.values().iter().filter(|p| **p > *t).count();
                inserted[gap] += 1;
            }
        }
        let mut out: BTreeMap<GapVector, BigInt> = BTreeMap::new();
        for (vector, coeff) in &self.coeffs {
            let mut partial: Vec<(Vec<usize>, BigInt)> = vec![(Vec::new(), BigInt::from(1))];
            for (gap, count) in vector.counts().iter().enumerate() {
                let options = distribute_gap(*count, inserted[gap]);
                let mut next = Vec::with_capacity(partial.len() * options.len());
                for (prefix, mult) in &partial {
                    for (sub, ways) in &options {
                        let mut v = prefix.clone();
                        v.extend_from_slice(sub);
                        next.push((v, mult * ways));
                    }
                }
                partial = next;
            }
            for (v, mult) in partial {
                let entry = out.entry(GapVector(v)).or_insert_with(BigInt::zero);
                *entry += coeff * mult;
            }
        }
        Ok(Characteristic::new(target.clone(), out))
    }

    /// JSON rendering: rationals as strings, colors in canonical order.
    pub fn to_json(&self) -> Value {
        let params: Vec<Value> = self
            .params
            .values()
            .iter()
            .map(|p| Value::String(format_rat(p)))
            .collect();
        let colors: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(v, c)| {
                json!({
                    "gaps": v.counts(),
                    "coeff": bigint_json(c),
                })
            })
            .collect();
        json!({ "params": params, "colors": colors })
    }
}

/// Big integers render as JSON numbers while they fit, strings beyond.
pub(crate) fn bigint_json(c: &BigInt) -> Value {
    match i64::try_from(c.clone()) {
        Ok(small) => json!(small),
        Err(_) => Value::String(c.to_string()),
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 over {}", self.params);
        }
        let body = self
            .coeffs
            .iter()
            .map(|(v, c)| format!("{c}*{v}"))
            .collect::<Vec<_>>()
            .join(" + ");
        write!(f, "{body} over {}", self.params)
    }
}

/// Distributions of a descending chain of `count` blocks over `pins + 1`
/// sub-gaps separated by `pins` single-capacity pins: each outcome is the
/// sub-gap count vector, weighted by the number of pin choices realizing it.
fn distribute_gap(count: usize, pins: usize) -> Vec<(Vec<usize>, BigInt)> {
    let mut out = Vec::new();
    for absorbed in 0..=pins.min(count) {
        let ways = binomial(pins, absorbed);
        for comp in compositions(count - absorbed, pins + 1) {
            out.push((comp, ways.clone()));
        }
    }
    out
}

/// Ordered compositions of `total` into exactly `parts` non-negative parts.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    assert!(parts >= 1);
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Characteristic of an already-computed atomic decomposition.
pub fn chi_of_atoms<'a>(
    atoms: impl IntoIterator<Item = &'a Atom>,
    params: &ParamSet,
) -> Characteristic {
    let mut coeffs: BTreeMap<GapVector, BigInt> = BTreeMap::new();
    for atom in atoms {
        *coeffs.entry(atom.color()).or_insert_with(BigInt::zero) += 1;
    }
    Characteristic::new(params.clone(), coeffs)
}

/// The global characteristic of the set defined by `d` over `params`, which
/// must contain every parameter of `d`.
pub fn chi(d: &PositiveDnf, params: &ParamSet) -> Characteristic {
    chi_of_atoms(split(d, params.values()).iter(), params)
}

/// Decides existence of a definable bijection between the sets defined by
/// `d1` and `d2` (dimensions may differ): they are equivalent exactly when
/// their characteristics over the union of their parameter sets coincide.
/// Returns the verdict together with the witnessing parameter set.
pub fn equivalent(d1: &PositiveDnf, d2: &PositiveDnf) -> (bool, ParamSet) {
    let params = ParamSet::new(d1.params().into_iter().chain(d2.params()));
    let c1 = chi(d1, &params);
    let c2 = chi(d2, &params);
    (c1 == c2, params)
}

/// Pads the set defined by `d` from its dimension `n` up to dimension `m`
/// by conjoining `x_i = x_1` for the fresh variables. The characteristic is
/// unchanged: padding enlarges the block containing the first variable
/// without touching any gap count.
pub fn delta_pad(d: &PositiveDnf, m: usize) -> Result<PositiveDnf, CharacteristicError> {
    let n = d.dim();
    if m < n || n == 0 {
        return Err(CharacteristicError::PadShrinks { n, m });
    }
    if m == n {
        return Ok(d.clone());
    }
    let mut vars = d.vars().to_vec();
    vars.extend(fresh_names(d.vars(), m - n));
    let clauses = d.clauses().filter_map(|clause| {
        let extra = (n..m).map(|i| Constraint::eq(CTerm::Var(i), CTerm::Var(0)));
        Clause::new(clause.constraints().cloned().chain(extra))
    });
    Ok(PositiveDnf::from_clauses(vars, clauses.collect::<Vec<_>>()))
}

fn fresh_names(existing: &[String], count: usize) -> Vec<String> {
    let used: BTreeSet<&str> = existing.iter().map(String::as_str).collect();
    let pool = ["y", "z", "u", "v", "w", "p", "q", "r", "s", "t"];
    let mut out = Vec::with_capacity(count);
    let mut candidates = pool
        .iter()
        .map(|s| s.to_string())
        .chain((2..).map(|k| format!("v{k}")));
    while out.len() < count {
        let cand = candidates.next().unwrap();
        if !used.contains(cand.as_str()) && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

/// Characteristic of a definable set of the order with a minimum endpoint,
/// fixed as `0` with domain the non-negative rationals.
///
/// The set is interpreted inside the endpoint-free extension of the
/// structure by conjoining `x_i >= 0` for every variable; all gap counts
/// below `0` then vanish, so characteristics computed in the extension are
/// faithful for the endpoint structure.
pub fn min_endpoint_chi(d: &PositiveDnf) -> Result<Characteristic, CharacteristicError> {
    let zero = rat_int(0);
    for p in d.params() {
        if p < zero {
            return Err(CharacteristicError::NegativeParam(p));
        }
    }
    let vars = d.vars().to_vec();
    let mut restricted = d.clone();
    for i in 0..vars.len() {
        let nonneg = PositiveDnf::from_clauses(
            vars.clone(),
            [
                Clause::new([Constraint::lt(CTerm::Const(zero.clone()), CTerm::Var(i))]).unwrap(),
                Clause::new([Constraint::eq(CTerm::Var(i), CTerm::Const(zero.clone()))]).unwrap(),
            ],
        );
        restricted = restricted.and(&nonneg);
    }
    let params = ParamSet::new(d.params().into_iter().chain([zero]));
    let c = chi(&restricted, &params);
    let bottom = params.len();
    debug_assert!(
        c.coeffs().keys().all(|v| v.counts()[bottom] == 0),
        "no free block can sit below the minimum endpoint"
    );
    Ok(c)
}
