//! The Grothendieck semiring of definable-bijection classes and its group
//! completion `K0`: addition and multiplication of characteristics,
//! equality, the pigeonhole check, bounded effectivity search, and
//! injection-nonexistence certificates.
//!
//! Group-completion elements are represented directly as integer-valued
//! characteristics: the semiring is cancellative and additively free over
//! colors at each parameter level, so no formal pairs are needed.

use crate::atoms::{split, GapVector};
use crate::characteristic::{chi_of_atoms, Characteristic, ParamSet};
use crate::formula::PositiveDnf;
use crate::rat::{binomial, midpoint, rat_int, Rat};
use num::BigInt;
use num::Zero;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// An element of `K0`: a characteristic with possibly negative coefficients.
pub type K0Element = Characteristic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum K0Error {
    DimensionMismatch { d1: usize, d2: usize },
    NotProperSubset,
}

impl fmt::Display for K0Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            K0Error::DimensionMismatch { d1, d2 } => {
                write!(f, "sets live in different dimensions ({d1} vs {d2})")
            }
            K0Error::NotProperSubset => {
                write!(f, "the first set must be a proper subset of the second")
            }
        }
    }
}

impl std::error::Error for K0Error {}

fn common(e1: &K0Element, e2: &K0Element) -> (K0Element, K0Element, ParamSet) {
    let params = e1.params().union(e2.params());
    let r1 = e1
        .refine(&params)
        .expect("union contains both parameter sets");
    let r2 = e2
        .refine(&params)
        .expect("union contains both parameter sets");
    (r1, r2, params)
}

/// Disjoint-union class: coefficientwise sum over the union parameter set.
pub fn add(e1: &K0Element, e2: &K0Element) -> K0Element {
    let (r1, r2, params) = common(e1, e2);
    let mut coeffs = r1.coeffs().clone();
    for (v, c) in r2.coeffs() {
        *coeffs.entry(v.clone()).or_insert_with(BigInt::zero) += c;
    }
    Characteristic::new(params, coeffs)
}

pub fn sub(e1: &K0Element, e2: &K0Element) -> K0Element {
    add(e1, &e2.neg())
}

pub fn neg(e: &K0Element) -> K0Element {
    e.neg()
}

/// Ways to merge a descending `g`-chain with a descending `h`-chain inside
/// one gap, allowing identifications: the merged chain has length `max+i`
/// in `C(max+i, i) * C(max, min-i)` ways.
pub fn merge_gap(g: usize, h: usize) -> Vec<(usize, BigInt)> {
    let (lo, hi) = if g <= h { (g, h) } else { (h, g) };
    (0..=lo)
        .map(|i| (hi + i, binomial(hi + i, i) * binomial(hi, lo - i)))
        .collect()
}

/// Cartesian-product class: the bilinear extension of the color product.
/// Two colors over common parameters multiply gap by gap through
/// [`merge_gap`]; pinned content contributes nothing.
pub fn mul(e1: &K0Element, e2: &K0Element) -> K0Element {
    let (r1, r2, params) = common(e1, e2);
    let mut coeffs: BTreeMap<GapVector, BigInt> = BTreeMap::new();
    for (v1, c1) in r1.coeffs() {
        for (v2, c2) in r2.coeffs() {
            let base = c1 * c2;
            let mut partial: Vec<(Vec<usize>, BigInt)> = vec![(Vec::new(), base)];
            for (g, h) in v1.counts().iter().zip(v2.counts()) {
                let options = merge_gap(*g, *h);
                let mut next = Vec::with_capacity(partial.len() * options.len());
                for (prefix, mult) in &partial {
                    for (merged, ways) in &options {
                        let mut v = prefix.clone();
                        v.push(*merged);
                        next.push((v, mult * ways));
                    }
                }
                partial = next;
            }
            for (v, c) in partial {
                *coeffs.entry(GapVector(v)).or_insert_with(BigInt::zero) += c;
            }
        }
    }
    Characteristic::new(params, coeffs)
}

/// `K0` equality: identical coefficient maps after refining both sides to
/// the union parameter set. Cancellativity of the semiring makes this the
/// right notion.
pub fn eq(e1: &K0Element, e2: &K0Element) -> bool {
    let (r1, r2, _) = common(e1, e2);
    r1.coeffs() == r2.coeffs()
}

/// Pigeonhole check for a proper inclusion: verifies the precondition via
/// the atomic decompositions, then reports whether the classes differ (they
/// always should; `false` would disprove the pigeonhole principle).
pub fn php_check(d1: &PositiveDnf, d2: &PositiveDnf) -> Result<bool, K0Error> {
    if d1.dim() != d2.dim() {
        return Err(K0Error::DimensionMismatch {
            d1: d1.dim(),
            d2: d2.dim(),
        });
    }
    let params = ParamSet::new(d1.params().into_iter().chain(d2.params()));
    let a1: BTreeSet<_> = split(d1, params.values()).into_iter().collect();
    let a2: BTreeSet<_> = split(d2, params.values()).into_iter().collect();
    if !(a1.is_subset(&a2) && a1 != a2) {
        return Err(K0Error::NotProperSubset);
    }
    let c1 = chi_of_atoms(a1.iter(), &params);
    let c2 = chi_of_atoms(a2.iter(), &params);
    Ok(!eq(&c1, &c2))
}

/// Outcome of the bounded effectivity search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Effectiveness {
    /// Some refinement makes every coefficient non-negative, so the element
    /// is the class of an actual definable set.
    Yes(ParamSet),
    /// No refinement with at most the budgeted number of fresh parameters
    /// works; inconclusive beyond the budget.
    NoWithinBudget,
}

/// Searches refinements inserting up to `budget` fresh parameters (one per
/// gap midpoint or beyond the extremes — by density only the combinatorial
/// position matters) for one exhibiting `e` as an effective class. Sound
/// for `Yes`; incomplete for `No`.
pub fn is_effective(e: &K0Element, budget: usize) -> Effectiveness {
    let mut queue: VecDeque<(ParamSet, usize)> = VecDeque::new();
    let mut seen: BTreeSet<ParamSet> = BTreeSet::new();
    queue.push_back((e.params().clone(), 0));
    seen.insert(e.params().clone());
    while let Some((params, depth)) = queue.pop_front() {
        let refined = e.refine(&params).expect("search only grows the parameters");
        if refined.is_nonnegative() {
            return Effectiveness::Yes(params);
        }
        if depth == budget {
            continue;
        }
        for candidate in insertion_candidates(&params) {
            let next = params.with(candidate);
            if seen.insert(next.clone()) {
                queue.push_back((next, depth + 1));
            }
        }
    }
    Effectiveness::NoWithinBudget
}

/// One representative fresh parameter per gap of `params`.
fn insertion_candidates(params: &ParamSet) -> Vec<Rat> {
    let values = params.values();
    if values.is_empty() {
        return vec![rat_int(0)];
    }
    let mut out = Vec::with_capacity(values.len() + 1);
    out.push(values[0].clone() + rat_int(1));
    for pair in values.windows(2) {
        out.push(midpoint(&pair[0], &pair[1]));
    }
    out.push(values[values.len() - 1].clone() - rat_int(1));
    out
}

/// A certificate that no definable injection `d1 -> d2` exists: a gap of
/// the common parameter set where `d1` has a free block while `d2` is
/// disjoint from the gap entirely.
///
/// Any refinement keeps some atom of `d1` with a free block inside the gap,
/// while every definable subset of `d2` has zero counts throughout it, so
/// the characteristics can never be made to match.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectionObstruction {
    pub params: ParamSet,
    pub gap: usize,
}

impl InjectionObstruction {
    pub fn bounds(&self) -> (Option<&Rat>, Option<&Rat>) {
        self.params.gap_bounds(self.gap)
    }
}

impl fmt::Display for InjectionObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lower, upper) = self.bounds();
        let lo = lower.map_or("-inf".to_string(), crate::rat::format_rat);
        let hi = upper.map_or("+inf".to_string(), crate::rat::format_rat);
        write!(f, "gap ({lo}, {hi}) of {}", self.params)
    }
}

/// Looks for an [`InjectionObstruction`]; `None` is inconclusive.
pub fn no_injection_certificate(
    d1: &PositiveDnf,
    d2: &PositiveDnf,
) -> Option<InjectionObstruction> {
    let params = ParamSet::new(d1.params().into_iter().chain(d2.params()));
    let occupied = |d: &PositiveDnf| -> Vec<bool> {
        let mut gaps = vec![false; params.gap_count()];
        for atom in split(d, params.values()) {
            for (i, c) in atom.color().counts().iter().enumerate() {
                if *c > 0 {
                    gaps[i] = true;
                }
            }
        }
        gaps
    };
    let g1 = occupied(d1);
    let g2 = occupied(d2);
    (0..params.gap_count())
        .find(|i| g1[*i] && !g2[*i])
        .map(|gap| InjectionObstruction {
            params: params.clone(),
            gap,
        })
}
