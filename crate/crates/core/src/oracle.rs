//! Deliberately naive reference implementations used as ground truth in
//! tests: weak-order enumeration, brute-force chain interleaving, refinement
//! by re-splitting, the Delannoy recurrence, and seeded random generators
//! for definable sets and formulas. Everything here trades speed for being
//! obviously correct.

use crate::atoms::{enumerate_atoms, Atom, GapVector};
use crate::characteristic::{chi, Characteristic, ParamSet};
use crate::formula::{Formula, Node, PositiveDnf, Rel, Term};
use crate::rat::{binomial, Rat};
use num::BigInt;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Number of weak orders (ordered set partitions) of an `n`-set via the
/// recurrence `a(n) = sum_{k=1..n} C(n,k) a(n-k)`, `a(0) = 1`.
pub fn weak_order_count(n: usize) -> BigInt {
    let mut table: Vec<BigInt> = vec![BigInt::from(1)];
    for m in 1..=n {
        let mut total = BigInt::zero();
        for k in 1..=m {
            total += binomial(m, k) * &table[m - k];
        }
        table.push(total);
    }
    table[n].clone()
}

/// All weak orders of `n` elements as level assignments: `levels[i]` is the
/// rank of element `i` from the bottom, and every rank below the maximum is
/// occupied.
pub fn weak_orders(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut levels = vec![0usize; n];
    loop {
        let max = levels.iter().copied().max().unwrap();
        let surjective = (0..=max).all(|r| levels.contains(&r));
        if surjective {
            out.push(levels.clone());
        }
        let mut i = 0;
        loop {
            levels[i] += 1;
            if levels[i] < n {
                break;
            }
            levels[i] = 0;
            i += 1;
            if i == n {
                return out;
            }
        }
    }
}

/// Counts atoms over `n` variables and `k` parameters by filtering weak
/// orders of `n + k` elements: the parameter elements must occupy pairwise
/// distinct ranks in descending order.
pub fn count_atoms_brute(n: usize, k: usize) -> usize {
    weak_orders(n + k)
        .into_iter()
        .filter(|levels| (0..k.saturating_sub(1)).all(|i| levels[n + i] > levels[n + i + 1]))
        .count()
}

/// Delannoy numbers by the standard recurrence.
pub fn delannoy(m: usize, n: usize) -> BigInt {
    let mut row: Vec<BigInt> = vec![BigInt::from(1); n + 1];
    for _ in 1..=m {
        let mut next = vec![BigInt::from(1)];
        for j in 1..=n {
            let v = &next[j - 1] + &row[j] + &row[j - 1];
            next.push(v);
        }
        row = next;
    }
    row[n].clone()
}

/// All ways to merge a descending `g`-chain with a descending `h`-chain,
/// allowing identifications, reported as the merged chain lengths (one
/// entry per interleaving). The topmost merged element comes from the first
/// chain, the second, or both.
pub fn shuffle_lengths(g: usize, h: usize) -> Vec<usize> {
    if g == 0 && h == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    if g > 0 {
        out.extend(shuffle_lengths(g - 1, h).into_iter().map(|t| t + 1));
    }
    if h > 0 {
        out.extend(shuffle_lengths(g, h - 1).into_iter().map(|t| t + 1));
    }
    if g > 0 && h > 0 {
        out.extend(shuffle_lengths(g - 1, h - 1).into_iter().map(|t| t + 1));
    }
    out
}

/// Characteristic of the product of two atoms over the same parameters,
/// computed by exhaustively interleaving their free-block chains gap by
/// gap. Reference oracle for the multiplication of classes.
pub fn atom_product_split(a: &Atom, b: &Atom) -> Characteristic {
    assert_eq!(a.params(), b.params(), "atoms must share their parameters");
    let params = ParamSet::new(a.params().iter().cloned());
    let ca = a.color();
    let cb = b.color();
    let mut outcomes: Vec<Vec<usize>> = vec![Vec::new()];
    for (g, h) in ca.counts().iter().zip(cb.counts()) {
        let merged = shuffle_lengths(*g, *h);
        let mut next = Vec::with_capacity(outcomes.len() * merged.len());
        for prefix in &outcomes {
            for m in &merged {
                let mut v = prefix.clone();
                v.push(*m);
                next.push(v);
            }
        }
        outcomes = next;
    }
    let mut coeffs: BTreeMap<GapVector, BigInt> = BTreeMap::new();
    for v in outcomes {
        *coeffs.entry(GapVector(v)).or_insert_with(BigInt::zero) += 1;
    }
    Characteristic::new(params, coeffs)
}

/// Refinement by brute force: re-splits an explicit realization over the
/// target parameters and recounts colors. Reference oracle for the
/// combinatorial refinement.
pub fn refine_oracle(d: &PositiveDnf, target: &ParamSet) -> Characteristic {
    chi(d, target)
}

/// Deterministic random union of atoms: each atom of the algebra is kept
/// independently with probability `density`.
pub fn random_definable_set(seed: u64, n: usize, params: &ParamSet, density: f64) -> PositiveDnf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = crate::atoms::default_var_names(n);
    let clauses: Vec<_> = enumerate_atoms(n, params.values())
        .into_iter()
        .filter(|_| rng.gen_bool(density))
        .map(|a| a.to_clause())
        .collect();
    PositiveDnf::from_clauses(vars, clauses)
}

/// Deterministic random formula over the given free variables and parameter
/// pool, with at most `max_quantifier_depth` nested quantifiers.
pub fn random_formula(
    seed: u64,
    max_quantifier_depth: usize,
    free_vars: &[String],
    param_pool: &[Rat],
) -> Formula {
    assert!(
        !free_vars.is_empty() || !param_pool.is_empty(),
        "need at least one variable or parameter to build atoms"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scope: Vec<String> = free_vars.to_vec();
    let mut counter = 0usize;
    let node = random_node(
        &mut rng,
        3,
        max_quantifier_depth,
        &mut scope,
        &mut counter,
        param_pool,
    );
    Formula::from_node_with_order(node, Some(free_vars)).expect("generated variables are in scope")
}

fn random_term(rng: &mut ChaCha8Rng, scope: &[String], pool: &[Rat]) -> Term {
    if !scope.is_empty() && (pool.is_empty() || rng.gen_bool(0.6)) {
        Term::Var(scope[rng.gen_range(0..scope.len())].clone())
    } else {
        Term::Const(pool[rng.gen_range(0..pool.len())].clone())
    }
}

fn random_node(
    rng: &mut ChaCha8Rng,
    depth: usize,
    qdepth: usize,
    scope: &mut Vec<String>,
    counter: &mut usize,
    pool: &[Rat],
) -> Node {
    let atom = |rng: &mut ChaCha8Rng, scope: &[String]| {
        let lhs = random_term(rng, scope, pool);
        let rhs = random_term(rng, scope, pool);
        let rel = if rng.gen_bool(0.7) { Rel::Lt } else { Rel::Eq };
        Node::Atom(lhs, rel, rhs)
    };
    if depth == 0 || (scope.is_empty() && pool.is_empty()) {
        return atom(rng, scope);
    }
    let quantifiers_allowed = qdepth > 0;
    let roll = rng.gen_range(0..100);
    match roll {
        0..=34 => atom(rng, scope),
        35..=49 => Node::And(
            Box::new(random_node(rng, depth - 1, qdepth, scope, counter, pool)),
            Box::new(random_node(rng, depth - 1, qdepth, scope, counter, pool)),
        ),
        50..=64 => Node::Or(
            Box::new(random_node(rng, depth - 1, qdepth, scope, counter, pool)),
            Box::new(random_node(rng, depth - 1, qdepth, scope, counter, pool)),
        ),
        65..=74 => Node::Not(Box::new(random_node(
            rng,
            depth - 1,
            qdepth,
            scope,
            counter,
            pool,
        ))),
        75..=81 => Node::Implies(
            Box::new(random_node(rng, depth - 1, qdepth, scope, counter, pool)),
            Box::new(random_node(rng, depth - 1, qdepth, scope, counter, pool)),
        ),
        _ if quantifiers_allowed => {
            *counter += 1;
            let name = format!("q{counter}");
            scope.push(name.clone());
            let body = random_node(rng, depth - 1, qdepth - 1, scope, counter, pool);
            scope.pop();
            if roll < 93 {
                Node::Exists(name, Box::new(body))
            } else {
                Node::Forall(name, Box::new(body))
            }
        }
        _ => atom(rng, scope),
    }
}
