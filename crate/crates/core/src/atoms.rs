//! Atoms of the boolean algebras of definable sets: related sets, their
//! canonical block chains, heights, gap counts and sample points.
//!
//! An atom over a descending parameter list is a strictly descending chain
//! of blocks. Each block is a set of variables forced equal, optionally
//! pinned to a parameter; every parameter pins exactly one block (possibly
//! with no variables), and unpinned ("free") blocks sit strictly inside the
//! gaps between parameters.

use crate::formula::{CTerm, Clause, Constraint, PositiveDnf};
use crate::rat::{format_rat, rat_int, Rat};
use std::collections::BTreeSet;
use std::fmt;

/// One block of an atom's chain: variables forced equal, optionally pinned
/// to a parameter value. Free blocks carry at least one variable; pinned
/// blocks may be empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Block {
    pub vars: BTreeSet<usize>,
    pub pin: Option<Rat>,
}

impl Block {
    pub fn free(vars: impl IntoIterator<Item = usize>) -> Block {
        Block {
            vars: vars.into_iter().collect(),
            pin: None,
        }
    }

    pub fn pinned(pin: Rat, vars: impl IntoIterator<Item = usize>) -> Block {
        Block {
            vars: vars.into_iter().collect(),
            pin: Some(pin),
        }
    }

    pub fn is_free(&self) -> bool {
        self.pin.is_none()
    }
}

/// A related set: the canonical chain representation of an atom of the
/// boolean algebra of sets definable with `dim` variables and the given
/// parameters. Identity is structural equality of this representation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Atom {
    blocks: Vec<Block>,
    params: Vec<Rat>,
}

/// Free-block counts per gap of a descending parameter list. Entry `0`
/// counts blocks above the largest parameter, entry `i` the blocks strictly
/// between the `i`-th and `(i+1)`-th parameters, and the last entry the
/// blocks below the smallest parameter; with no parameters there is a single
/// entry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GapVector(pub Vec<usize>);

impl GapVector {
    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    /// Total number of free blocks.
    pub fn height(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for GapVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.0
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Chain-description parameter: a rational pin or the formal minimum used
/// to address the bottom gap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainParam {
    Value(Rat),
    NegInf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomError {
    LengthMismatch { params: usize, counts: usize },
    MisplacedNegInf,
    NotDescending,
}

impl fmt::Display for AtomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomError::LengthMismatch { params, counts } => write!(
                f,
                "chain description has {params} parameters but {counts} counts"
            ),
            AtomError::MisplacedNegInf => {
                write!(
                    f,
                    "the formal minimum may only appear as the final parameter"
                )
            }
            AtomError::NotDescending => write!(f, "parameters must be strictly descending"),
        }
    }
}

impl std::error::Error for AtomError {}

impl Atom {
    /// Builds an atom from its chain; validates the canonical-form
    /// invariants.
    pub fn new(blocks: Vec<Block>, params: Vec<Rat>) -> Atom {
        assert!(strictly_descending(&params), "params must be descending");
        let pins: Vec<&Rat> = blocks.iter().filter_map(|b| b.pin.as_ref()).collect();
        assert_eq!(
            pins,
            params.iter().collect::<Vec<_>>(),
            "pinned blocks must march through the parameters in order"
        );
        let mut seen = BTreeSet::new();
        for b in &blocks {
            assert!(
                b.pin.is_some() || !b.vars.is_empty(),
                "free blocks must carry at least one variable"
            );
            for v in &b.vars {
                assert!(seen.insert(*v), "variable {v} occurs in two blocks");
            }
        }
        let n = seen.len();
        assert!(
            seen.iter().all(|v| *v < n),
            "variable indices must form a 0..n range"
        );
        Atom { blocks, params }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn params(&self) -> &[Rat] {
        &self.params
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.vars.len()).sum()
    }

    /// Number of free (unpinned) blocks.
    pub fn height(&self) -> usize {
        self.blocks.iter().filter(|b| b.is_free()).count()
    }

    /// The gap-count vector classifying this atom up to permutation of
    /// variables.
    pub fn color(&self) -> GapVector {
        let mut counts = vec![0usize; self.params.len() + 1];
        let mut gap = 0;
        for b in &self.blocks {
            if b.is_free() {
                counts[gap] += 1;
            } else {
                gap += 1;
            }
        }
        GapVector(counts)
    }

    /// A point realizing the atom: pinned blocks take their pin value, free
    /// blocks take distinct values strictly inside their gap (evenly spaced
    /// midpoints; unit steps beyond the extreme parameters).
    pub fn sample_point(&self) -> Vec<Rat> {
        let k = self.params.len();
        let mut point = vec![rat_int(0); self.dim()];
        let mut gap = 0usize;
        let mut gap_run: Vec<&Block> = Vec::new();
        let flush = |gap: usize, run: &[&Block], point: &mut Vec<Rat>| {
            let m = run.len();
            if m == 0 {
                return;
            }
            let lower = (gap < k).then(|| &self.params[gap]);
            let upper = (gap > 0).then(|| &self.params[gap - 1]);
            for (j, block) in run.iter().enumerate() {
                // Position 1..=m in descending order within the gap.
                let pos = j + 1;
                let value = match (lower, upper) {
                    (Some(lo), Some(hi)) => {
                        let t = Rat::new((m + 1 - pos).into(), (m + 1).into());
                        lo + (hi - lo) * t
                    }
                    (Some(lo), None) => lo + rat_int((m + 1 - pos) as i64),
                    (None, Some(hi)) => hi - rat_int(pos as i64),
                    (None, None) => rat_int((m - pos) as i64),
                };
                for v in &block.vars {
                    point[*v] = value.clone();
                }
            }
        };
        for b in &self.blocks {
            if b.is_free() {
                gap_run.push(b);
            } else {
                flush(gap, &gap_run, &mut point);
                gap_run.clear();
                gap += 1;
                for v in &b.vars {
                    point[*v] = b.pin.clone().unwrap();
                }
            }
        }
        flush(gap, &gap_run, &mut point);
        point
    }

    /// The atom's defining conjunctive clause: within-block equalities plus
    /// the strict chain between consecutive block representatives.
    pub fn to_clause(&self) -> Clause {
        let rep = |b: &Block| -> CTerm {
            match &b.pin {
                Some(p) => CTerm::Const(p.clone()),
                None => CTerm::Var(*b.vars.iter().next().expect("free block nonempty")),
            }
        };
        let mut constraints = Vec::new();
        for b in &self.blocks {
            let r = rep(b);
            for v in &b.vars {
                let t = CTerm::Var(*v);
                if t != r {
                    constraints.push(Constraint::eq(t, r.clone()));
                }
            }
        }
        for pair in self.blocks.windows(2) {
            constraints.push(Constraint::lt(rep(&pair[1]), rep(&pair[0])));
        }
        Clause::new(constraints).expect("atoms are satisfiable by construction")
    }

    /// Wraps the defining clause as a one-clause DNF with the given variable
    /// names.
    pub fn to_dnf(&self, vars: Vec<String>) -> PositiveDnf {
        assert_eq!(vars.len(), self.dim());
        PositiveDnf::from_clauses(vars, [self.to_clause()])
    }

    /// Canonical chain rendering, e.g. `x1 > x2 = x3 > 0 = x4`.
    pub fn chain_string(&self, names: &[String]) -> String {
        self.blocks
            .iter()
            .map(|b| {
                let mut parts = Vec::new();
                if let Some(p) = &b.pin {
                    parts.push(format_rat(p));
                }
                parts.extend(b.vars.iter().map(|v| names[*v].clone()));
                parts.join(" = ")
            })
            .collect::<Vec<_>>()
            .join(" > ")
    }
}

fn strictly_descending(values: &[Rat]) -> bool {
    values.windows(2).all(|w| w[0] > w[1])
}

/// Default variable names `x1..xn` for atoms detached from any formula.
pub fn default_var_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Enumerates every atom of the boolean algebra of sets definable with `n`
/// variables and the given strictly descending parameters, each exactly
/// once, in a deterministic order.
pub fn enumerate_atoms(n: usize, params: &[Rat]) -> Vec<Atom> {
    assert!(strictly_descending(params), "params must be descending");
    // Ordered-set-partition counts grow superexponentially; 12 variables is
    // already far past anything tractable downstream.
    assert!(n <= 12, "atom enumeration is exponential in the dimension");
    let k = params.len();
    let vars: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for free_mask in 0..(1u32 << n) {
        let free: Vec<usize> = vars
            .iter()
            .copied()
            .filter(|v| free_mask & (1 << v) != 0)
            .collect();
        let pinned: Vec<usize> = vars
            .iter()
            .copied()
            .filter(|v| free_mask & (1 << v) == 0)
            .collect();
        if !pinned.is_empty() && k == 0 {
            continue;
        }
        let partitions = ordered_partitions(&free);
        for assignment in pin_assignments(pinned.len(), k) {
            for partition in &partitions {
                for gaps in nondecreasing_sequences(partition.len(), k) {
                    out.push(assemble_atom(
                        params,
                        &pinned,
                        &assignment,
                        partition,
                        &gaps,
                    ));
                }
            }
        }
    }
    out
}

#[allow(clippy::needless_range_loop)]
fn assemble_atom(
    params: &[Rat],
    pinned: &[usize],
    assignment: &[usize],
    partition: &[BTreeSet<usize>],
    gaps: &[usize],
) -> Atom {
    let k = params.len();
    let mut blocks = Vec::new();
    let mut next_free = 0;
    for gap in 0..=k {
        while next_free < partition.len() && gaps[next_free] == gap {
            blocks.push(Block::free(partition[next_free].iter().copied()));
            next_free += 1;
        }
        if gap < k {
            let vars = pinned
                .iter()
                .zip(assignment)
                .filter(|(_, g)| **g == gap)
                .map(|(v, _)| *v);
            blocks.push(Block::pinned(params[gap].clone(), vars));
        }
    }
    Atom::new(blocks, params.to_vec())
}

/// All functions from `count` pinned variables into `k` parameters,
/// enumerated as mixed-radix counters.
fn pin_assignments(count: usize, k: usize) -> Vec<Vec<usize>> {
    if count == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut current = vec![0usize; count];
    loop {
        out.push(current.clone());
        let mut i = 0;
        loop {
            current[i] += 1;
            if current[i] < k {
                break;
            }
            current[i] = 0;
            i += 1;
            if i == count {
                return out;
            }
        }
    }
}

/// All ordered set partitions of `items` (sequences of disjoint nonempty
/// blocks covering the set).
fn ordered_partitions(items: &[usize]) -> Vec<Vec<BTreeSet<usize>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let total = 1u32 << items.len();
    for mask in 1..total {
        let mut first = BTreeSet::new();
        let mut rest = Vec::new();
        for (i, v) in items.iter().enumerate() {
            if mask & (1 << i) != 0 {
                first.insert(*v);
            } else {
                rest.push(*v);
            }
        }
        for mut tail in ordered_partitions(&rest) {
            let mut seq = vec![first.clone()];
            seq.append(&mut tail);
            out.push(seq);
        }
    }
    out
}

/// All non-decreasing sequences of the given length with entries in
/// `0..=max_value`.
fn nondecreasing_sequences(len: usize, max_value: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, min: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if len == 0 {
            out.push(prefix.clone());
            return;
        }
        for v in min..=max {
            prefix.push(v);
            go(len - 1, v, max, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(len, 0, max_value, &mut Vec::new(), &mut out);
    out
}

/// Atomic decomposition: the atoms meeting the set defined by `d`, decided
/// by evaluating `d` at each atom's sample point. Since atoms are atoms,
/// meeting `d` is the same as being contained in it. `params` must contain
/// every parameter of `d`.
pub fn split(d: &PositiveDnf, params: &[Rat]) -> Vec<Atom> {
    let have: BTreeSet<&Rat> = params.iter().collect();
    for p in d.params() {
        assert!(
            have.contains(&p),
            "split requires every parameter of the set; missing {}",
            format_rat(&p)
        );
    }
    enumerate_atoms(d.dim(), params)
        .into_iter()
        .filter(|a| d.eval(&a.sample_point()))
        .collect()
}

/// The atom with `counts[i]` free singleton blocks immediately above the
/// `i`-th chain parameter; the formal minimum may close the chain to address
/// the bottom gap. Variables are numbered down the chain.
pub fn chain_atom(params: &[ChainParam], counts: &[usize]) -> Result<Atom, AtomError> {
    if params.len() != counts.len() {
        return Err(AtomError::LengthMismatch {
            params: params.len(),
            counts: counts.len(),
        });
    }
    let mut rats: Vec<Rat> = Vec::new();
    for (i, p) in params.iter().enumerate() {
        match p {
            ChainParam::NegInf => {
                if i + 1 != params.len() {
                    return Err(AtomError::MisplacedNegInf);
                }
            }
            ChainParam::Value(v) => rats.push(v.clone()),
        }
    }
    if !strictly_descending(&rats) {
        return Err(AtomError::NotDescending);
    }
    let mut blocks = Vec::new();
    let mut var = 0usize;
    for (p, count) in params.iter().zip(counts) {
        for _ in 0..*count {
            blocks.push(Block::free([var]));
            var += 1;
        }
        if let ChainParam::Value(v) = p {
            blocks.push(Block::pinned(v.clone(), []));
        }
    }
    Ok(Atom::new(blocks, rats))
}
