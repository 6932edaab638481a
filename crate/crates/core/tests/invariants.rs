//! Cross-module properties: semantic preservation of the normal forms,
//! partition structure of the atoms, coherence of refinement, the algebraic
//! laws of the semiring/ring, and the oracle cross-checks.

mod common;

use common::*;
use dlo_k0::atoms::{chain_atom, enumerate_atoms, split, ChainParam, GapVector};
use dlo_k0::characteristic::{chi, chi_of_atoms, equivalent, Characteristic, ParamSet};
use dlo_k0::formula::{eval_formula, to_positive_dnf, Formula, PositiveDnf};
use dlo_k0::genring::{color_order, monomial_of_color, parse_genpoly, reduce_mod_i, zeta, GenPoly};
use dlo_k0::grothendieck::{add, eq, is_effective, merge_gap, mul, sub, Effectiveness};
use dlo_k0::oracle::{atom_product_split, delannoy, random_definable_set, random_formula};
use dlo_k0::qe::eliminate_quantifiers;
use dlo_k0::rat::{rat_int, Rat};
use num::BigInt;
use proptest::prelude::*;
use rand::Rng;
use std::cmp::Ordering;
use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// formula: normalization preserves semantics

fn quantifier_free_formula(seed: u64) -> Formula {
    let vars = vec!["x".to_string(), "y".to_string()];
    random_formula(seed, 0, &vars, &[rat_int(0), rat_int(1)])
}

#[test]
fn dnf_preserves_evaluation_on_random_points() {
    let vars = ["x".to_string(), "y".to_string()];
    let mut r = rng(1);
    for seed in 0..40u64 {
        let f = quantifier_free_formula(seed);
        let d = to_positive_dnf(&f).unwrap();
        for _ in 0..1000 {
            let point: Vec<Rat> = (0..2).map(|_| random_point_coord(&mut r)).collect();
            let assignment: BTreeMap<String, Rat> =
                vars.iter().cloned().zip(point.iter().cloned()).collect();
            assert_eq!(
                d.eval(&point),
                eval_formula(&f, &assignment).unwrap(),
                "formula {f} at {point:?}"
            );
        }
    }
}

proptest! {
    #[test]
    fn dnf_normalization_is_idempotent(seed in any::<u64>()) {
        let f = quantifier_free_formula(seed);
        let d = to_positive_dnf(&f).unwrap();
        let reparsed = Formula::parse(&d.to_string(), Some(d.vars())).unwrap();
        prop_assert_eq!(to_positive_dnf(&reparsed).unwrap(), d);
    }

    #[test]
    fn print_parse_is_a_fixed_point(seed in any::<u64>()) {
        let vars = vec!["x".to_string(), "y".to_string()];
        let f = random_formula(seed, 2, &vars, &[rat_int(0), rat_int(1)]);
        let printed = f.to_string();
        let reparsed = Formula::parse(&printed, Some(&vars)).unwrap();
        prop_assert_eq!(&f, &reparsed);
        prop_assert_eq!(printed, reparsed.to_string());
    }

    #[test]
    fn elimination_is_idempotent_on_quantifier_free_input(seed in any::<u64>()) {
        let f = quantifier_free_formula(seed);
        let once = eliminate_quantifiers(&f);
        let reparsed = Formula::parse(&once.to_string(), Some(once.vars())).unwrap();
        prop_assert_eq!(eliminate_quantifiers(&reparsed), once);
    }
}

// ---------------------------------------------------------------------------
// atoms: the enumeration is a partition

#[test]
fn atoms_partition_the_space() {
    let mut r = rng(2);
    for n in 1..=4usize {
        for params in [pset(&[]), pset(&[0]), pset(&[1, 0])] {
            if n == 4 && params.len() == 2 {
                continue; // covered below with fewer points
            }
            partition_check(n, &params, 60, &mut r);
        }
    }
    partition_check(4, &pset(&[1, 0]), 15, &mut r);
}

fn partition_check(n: usize, params: &ParamSet, points: usize, r: &mut rand_chacha::ChaCha8Rng) {
    let atoms = enumerate_atoms(n, params.values());
    let names = dlo_k0::atoms::default_var_names(n);
    let dnfs: Vec<PositiveDnf> = atoms.iter().map(|a| a.to_dnf(names.clone())).collect();
    // Sample points separate the atoms pairwise.
    for (i, a) in atoms.iter().enumerate() {
        let p = a.sample_point();
        let hits = dnfs.iter().filter(|d| d.eval(&p)).count();
        assert_eq!(hits, 1, "sample of atom {i} lies in {hits} atoms (n={n})");
    }
    // Every random point lies in exactly one atom.
    for _ in 0..points {
        let point: Vec<Rat> = (0..n).map(|_| random_point_coord(r)).collect();
        let hits = dnfs.iter().filter(|d| d.eval(&point)).count();
        assert_eq!(hits, 1, "point {point:?} lies in {hits} atoms (n={n})");
    }
}

#[test]
fn color_census_is_invariant_under_variable_permutation() {
    for seed in 0..20u64 {
        let d = random_definable_set(seed, 2, &pset(&[1, 0]), 0.5);
        let text = d.to_string();
        let forward = to_positive_dnf(&Formula::parse(&text, Some(d.vars())).unwrap()).unwrap();
        let mut reversed_vars = d.vars().to_vec();
        reversed_vars.reverse();
        let swapped =
            to_positive_dnf(&Formula::parse(&text, Some(&reversed_vars)).unwrap()).unwrap();
        let params = pset(&[1, 0]);
        assert_eq!(
            chi(&forward, &params),
            chi(&swapped, &params),
            "seed {seed}"
        );
    }
}

// ---------------------------------------------------------------------------
// characteristic: additivity, refinement coherence, equivalence structure

#[test]
fn chi_is_additive_over_disjoint_unions() {
    let params = pset(&[1, 0]);
    for seed in 0..20u64 {
        let n = 1 + (seed as usize) % 2;
        let atoms = enumerate_atoms(n, params.values());
        let mut r = rng(seed);
        let vars = dlo_k0::atoms::default_var_names(n);
        let kept: Vec<_> = atoms.iter().filter(|_| r.gen_bool(0.6)).collect();
        let sides: Vec<bool> = kept.iter().map(|_| r.gen_bool(0.5)).collect();
        let (left, right): (Vec<_>, Vec<_>) = kept.into_iter().zip(&sides).partition(|(_, s)| **s);
        let left: Vec<_> = left.into_iter().map(|(a, _)| a).collect();
        let right: Vec<_> = right.into_iter().map(|(a, _)| a).collect();
        let build = |list: &[&dlo_k0::atoms::Atom]| {
            PositiveDnf::from_clauses(vars.clone(), list.iter().map(|a| a.to_clause()))
        };
        let d1 = build(&left);
        let d2 = build(&right);
        let union = d1.or(&d2);
        assert!(
            eq(
                &chi(&union, &params),
                &add(&chi(&d1, &params), &chi(&d2, &params))
            ),
            "seed {seed}"
        );
    }
}

#[test]
fn refinement_commutes_with_resplitting() {
    // refine(chi(d, small), big) must match chi(d, big) computed from
    // scratch, for random sets and random parameter extensions.
    let mut r = rng(3);
    for trial in 0..100u64 {
        let n = 1 + (trial as usize) % 2;
        let small = if trial % 2 == 0 {
            pset(&[0])
        } else {
            pset(&[1, 0])
        };
        let d = random_definable_set(trial, n, &small, 0.5);
        let mut extra = vec![rat_int(r.gen_range(2..5)), rat_int(-r.gen_range(1..4))];
        if trial % 3 == 0 {
            extra.push(Rat::new(1.into(), 2.into()));
        }
        let big = ParamSet::new(small.values().iter().cloned().chain(extra));
        let refined = chi(&d, &small).refine(&big).unwrap();
        let oracle = dlo_k0::oracle::refine_oracle(&d, &big);
        assert_eq!(refined, oracle, "trial {trial}");
    }
}

#[test]
fn refinement_is_injective() {
    let mut r = rng(4);
    for trial in 0..100 {
        let c1 = random_k0(&mut r);
        let c2 = random_k0(&mut r);
        let joint = c1.params().union(c2.params()).with(rat_int(9));
        let r1 = c1.refine(&joint).unwrap();
        let r2 = c2.refine(&joint).unwrap();
        // Equality after refinement must agree with equality as classes.
        assert_eq!(r1 == r2, eq(&c1, &c2), "trial {trial}");
    }
}

#[test]
fn height_obstruction_blocks_bijections() {
    let params = pset(&[1, 0]);
    for seed in 0..40u64 {
        let d1 = random_definable_set(seed, 2, &params, 0.4);
        let d2 = random_definable_set(seed + 1000, 2, &params, 0.4);
        let c1 = chi(&d1, &params);
        let c2 = chi(&d2, &params);
        let h = c1.max_height().max(c2.max_height());
        let Some(h) = h else { continue };
        if c1.height_total(h) != c2.height_total(h) {
            let (equal, _) = equivalent(&d1, &d2);
            assert!(
                !equal,
                "seed {seed}: top-height totals differ yet equivalent"
            );
        }
    }
}

#[test]
fn padding_never_changes_the_characteristic() {
    for seed in 0..50u64 {
        let params = pset(&[1, 0]);
        let n = 1 + (seed as usize) % 2;
        let d = random_definable_set(seed, n, &params, 0.5);
        let padded = dlo_k0::characteristic::delta_pad(&d, n + 2).unwrap();
        assert_eq!(chi(&d, &params), chi(&padded, &params), "seed {seed}");
    }
}

#[test]
fn equivalence_is_transitive_on_random_triples() {
    for seed in 0..60u64 {
        let params = pset(&[1, 0]);
        let d1 = random_definable_set(seed, 2, &params, 0.4);
        // Mix equivalent-by-construction and independent sets.
        let d2 = if seed % 2 == 0 {
            dlo_k0::characteristic::delta_pad(&d1, 3).unwrap()
        } else {
            random_definable_set(seed + 500, 2, &params, 0.4)
        };
        let d3 = if seed % 3 == 0 {
            dlo_k0::characteristic::delta_pad(&d2, 4).unwrap()
        } else {
            random_definable_set(seed + 900, 1, &params, 0.4)
        };
        let (e12, _) = equivalent(&d1, &d2);
        let (e23, _) = equivalent(&d2, &d3);
        let (e13, _) = equivalent(&d1, &d3);
        if e12 && e23 {
            assert!(e13, "seed {seed}: transitivity failed");
        }
        if e12 && e13 {
            assert!(e23, "seed {seed}: transitivity failed");
        }
    }
}

// ---------------------------------------------------------------------------
// grothendieck: ring laws and the interleaving oracle

fn arb_k0() -> impl Strategy<Value = Characteristic> {
    any::<u64>().prop_map(|s| random_k0(&mut rng(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_is_commutative_and_associative(
        a in arb_k0(), b in arb_k0(), c in arb_k0()
    ) {
        prop_assert!(eq(&add(&a, &b), &add(&b, &a)));
        prop_assert!(eq(&add(&add(&a, &b), &c), &add(&a, &add(&b, &c))));
    }

    #[test]
    fn multiplication_is_commutative_and_associative(
        a in arb_k0(), b in arb_k0(), c in arb_k0()
    ) {
        prop_assert!(eq(&mul(&a, &b), &mul(&b, &a)));
        prop_assert!(eq(&mul(&mul(&a, &b), &c), &mul(&a, &mul(&b, &c))));
    }

    #[test]
    fn multiplication_distributes_over_addition(
        a in arb_k0(), b in arb_k0(), c in arb_k0()
    ) {
        prop_assert!(eq(&mul(&a, &add(&b, &c)), &add(&mul(&a, &b), &mul(&a, &c))));
    }

    #[test]
    fn one_is_neutral_and_zero_annihilates(a in arb_k0()) {
        let one = Characteristic::one(ParamSet::empty());
        let zero = Characteristic::zero(ParamSet::empty());
        prop_assert!(eq(&mul(&a, &one), &a));
        prop_assert!(eq(&mul(&a, &zero), &zero));
        prop_assert!(eq(&sub(&a, &a), &zero));
    }
}

#[test]
fn multiplication_matches_the_interleaving_oracle() {
    // Two-parameter colors of height <= 3, all pairs.
    let params = [
        ChainParam::Value(rat_int(1)),
        ChainParam::Value(rat_int(0)),
        ChainParam::NegInf,
    ];
    let mut colors = Vec::new();
    for c0 in 0..=3usize {
        for c1 in 0..=3 - c0 {
            for c2 in 0..=3 - c0 - c1 {
                colors.push([c0, c1, c2]);
            }
        }
    }
    let class = |c: &[usize; 3]| {
        Characteristic::new(
            pset(&[1, 0]),
            [(GapVector(c.to_vec()), BigInt::from(1))]
                .into_iter()
                .collect(),
        )
    };
    for ca in &colors {
        let atom_a = chain_atom(&params, ca).unwrap();
        for cb in &colors {
            let atom_b = chain_atom(&params, cb).unwrap();
            let direct = mul(&class(ca), &class(cb));
            let oracle = atom_product_split(&atom_a, &atom_b);
            assert!(eq(&direct, &oracle), "colors {ca:?} x {cb:?}");
        }
    }
    // Heavier single-gap spot checks, including the largest budgeted pair.
    for (g, h) in [(4usize, 4usize), (2, 4), (4, 3)] {
        let a = chain_atom(&[ChainParam::Value(rat_int(0))], &[g]).unwrap();
        let b = chain_atom(&[ChainParam::Value(rat_int(0))], &[h]).unwrap();
        let ca = Characteristic::new(
            pset(&[0]),
            [(GapVector(vec![g, 0]), BigInt::from(1))]
                .into_iter()
                .collect(),
        );
        let cb = Characteristic::new(
            pset(&[0]),
            [(GapVector(vec![h, 0]), BigInt::from(1))]
                .into_iter()
                .collect(),
        );
        assert!(eq(&mul(&ca, &cb), &atom_product_split(&a, &b)), "({g},{h})");
    }
}

#[test]
fn merge_totals_are_delannoy_numbers() {
    for g in 0..=6usize {
        for h in 0..=6usize {
            let total: BigInt = merge_gap(g, h).into_iter().map(|(_, c)| c).sum();
            assert_eq!(total, delannoy(g, h), "({g},{h})");
        }
    }
}

#[test]
fn effective_elements_have_ineffective_negations() {
    let mut r = rng(5);
    for trial in 0..30 {
        let e = random_semiring_element(&mut r);
        if e.is_zero() {
            continue;
        }
        assert_eq!(
            is_effective(&e, 0),
            Effectiveness::Yes(e.params().clone()),
            "trial {trial}"
        );
        assert_eq!(
            is_effective(&e.neg(), 2),
            Effectiveness::NoWithinBudget,
            "trial {trial}: negation certified effective"
        );
    }
}

// ---------------------------------------------------------------------------
// genring: homomorphism, reduction, triangularity, faithfulness

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn zeta_is_a_ring_homomorphism(s1 in any::<u64>(), s2 in any::<u64>()) {
        let p = random_normal_poly(&mut rng(s1));
        let q = random_normal_poly(&mut rng(s2));
        let params = p.rational_params().union(&q.rational_params());
        let zp = zeta(&p, &params).unwrap();
        let zq = zeta(&q, &params).unwrap();
        prop_assert!(eq(&zeta(&p.add(&q), &params).unwrap(), &add(&zp, &zq)));
        prop_assert!(eq(&zeta(&p.mul(&q), &params).unwrap(), &mul(&zp, &zq)));
    }

    #[test]
    fn reduction_preserves_the_class(s1 in any::<u64>(), s2 in any::<u64>()) {
        let p = random_normal_poly(&mut rng(s1)).mul(&random_normal_poly(&mut rng(s2)));
        let reduced = reduce_mod_i(&p);
        prop_assert!(reduced.is_normal_form());
        let params = p.rational_params();
        prop_assert!(eq(
            &zeta(&p, &params).unwrap(),
            &zeta(&reduced, &params).unwrap()
        ));
    }

    #[test]
    fn genpoly_text_roundtrips(seed in any::<u64>()) {
        let p = random_normal_poly(&mut rng(seed));
        prop_assert_eq!(parse_genpoly(&p.to_string()).unwrap(), p);
    }
}

#[test]
fn zeta_images_are_triangular_with_unit_diagonal() {
    // Every normal-form monomial of height <= 4 over two rationals and the
    // formal minimum: its image leads with the monomial's own color at
    // coefficient one, all other colors strictly below in the peeling order.
    let params = pset(&[2, 0]);
    let gen_params = [
        Some(rat_int(2)),
        Some(rat_int(0)),
        None, // formal minimum
    ];
    let mut monomials = Vec::new();
    for mask in 0u8..8 {
        let chosen: Vec<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
        distribute_indices(&chosen, 4, &mut vec![], &mut monomials);
    }
    assert!(monomials.len() > 20);
    for assignment in monomials {
        let mut color = vec![0usize; 3];
        let mut poly = GenPoly::one();
        for (slot, index) in &assignment {
            color[*slot] = *index;
            let param = match &gen_params[*slot] {
                Some(v) => dlo_k0::genring::GenParam::Value(v.clone()),
                None => dlo_k0::genring::GenParam::NegInf,
            };
            poly = poly.mul(&GenPoly::generator(dlo_k0::genring::Generator::new(
                param, *index,
            )));
        }
        let expected_lead = GapVector(color);
        let image = zeta(&poly, &params).unwrap();
        let lead = image
            .coeffs()
            .keys()
            .max_by(|a, b| color_order(a, b))
            .unwrap()
            .clone();
        assert_eq!(lead, expected_lead, "monomial {poly}");
        assert_eq!(image.coeff(&lead), BigInt::from(1), "monomial {poly}");
        for other in image.coeffs().keys() {
            if *other != lead {
                assert_eq!(
                    color_order(other, &lead),
                    Ordering::Less,
                    "{other} not below lead {lead} for {poly}"
                );
            }
        }
        // And the leading monomial extraction inverts it.
        assert_eq!(monomial_of_color(&expected_lead, &params), {
            let mut m = dlo_k0::genring::Monomial::one();
            for (slot, index) in &assignment {
                let param = match &gen_params[*slot] {
                    Some(v) => dlo_k0::genring::GenParam::Value(v.clone()),
                    None => dlo_k0::genring::GenParam::NegInf,
                };
                m = m.mul(&dlo_k0::genring::Monomial::from_generator(
                    dlo_k0::genring::Generator::new(param, *index),
                ));
            }
            m
        });
    }
}

fn distribute_indices(
    slots: &[usize],
    budget: usize,
    prefix: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    match slots.split_first() {
        None => out.push(prefix.clone()),
        Some((first, rest)) => {
            let reserve = rest.len(); // each remaining slot needs >= 1
            for index in 1..=(budget.saturating_sub(reserve)) {
                prefix.push((*first, index));
                distribute_indices(rest, budget - index, prefix, out);
                prefix.pop();
            }
        }
    }
}

#[test]
fn distinct_normal_forms_have_distinct_images() {
    let mut r = rng(6);
    for trial in 0..50 {
        let p = random_normal_poly(&mut r);
        let q = random_normal_poly(&mut r);
        if p == q {
            continue;
        }
        let params = p.rational_params().union(&q.rational_params());
        assert!(
            !eq(&zeta(&p, &params).unwrap(), &zeta(&q, &params).unwrap()),
            "trial {trial}: distinct normal forms {p} and {q} collide"
        );
    }
}

#[test]
fn splits_respect_atom_census() {
    // chi computed through split agrees with counting colors directly.
    let params = pset(&[1, 0]);
    for seed in 0..10u64 {
        let d = random_definable_set(seed, 2, &params, 0.5);
        let atoms = split(&d, params.values());
        assert_eq!(chi(&d, &params), chi_of_atoms(atoms.iter(), &params));
    }
}
