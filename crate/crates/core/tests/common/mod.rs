//! Helpers shared by the integration suites: seeded random elements,
//! polynomials and point clouds.

#![allow(dead_code)]

use dlo_k0::atoms::GapVector;
use dlo_k0::characteristic::{Characteristic, ParamSet};
use dlo_k0::formula::{to_positive_dnf, Formula, PositiveDnf};
use dlo_k0::genring::{GenParam, GenPoly, Generator, Monomial};
use dlo_k0::rat::{parse_rat, rat_int, Rat};
use num::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dnf(text: &str) -> PositiveDnf {
    to_positive_dnf(&Formula::parse(text, None).unwrap()).unwrap()
}

pub fn dnf_with_vars(text: &str, vars: &[&str]) -> PositiveDnf {
    let order: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
    to_positive_dnf(&Formula::parse(text, Some(&order)).unwrap()).unwrap()
}

pub fn pset(values: &[i64]) -> ParamSet {
    ParamSet::new(values.iter().map(|v| rat_int(*v)))
}

/// Three distinct rational parameters used across the random generators.
pub fn param_pool() -> Vec<Rat> {
    vec![rat_int(-1), parse_rat("1/2").unwrap(), rat_int(3)]
}

/// A random integer-coefficient characteristic with at most three
/// parameters and height at most four.
pub fn random_k0(rng: &mut ChaCha8Rng) -> Characteristic {
    let pool = param_pool();
    let k = rng.gen_range(0..=pool.len());
    let mut picks = pool;
    picks.shuffle(rng);
    picks.truncate(k);
    let params = ParamSet::new(picks);
    let gaps = params.gap_count();
    let mut coeffs: BTreeMap<GapVector, BigInt> = BTreeMap::new();
    for _ in 0..rng.gen_range(1..=4) {
        let height = rng.gen_range(0..=4usize);
        let mut vector = vec![0usize; gaps];
        for _ in 0..height {
            vector[rng.gen_range(0..gaps)] += 1;
        }
        let coeff = loop {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                break c;
            }
        };
        *coeffs
            .entry(GapVector(vector))
            .or_insert_with(|| BigInt::from(0)) += BigInt::from(coeff);
    }
    Characteristic::new(params, coeffs)
}

/// A random semiring element (all coefficients positive).
pub fn random_semiring_element(rng: &mut ChaCha8Rng) -> Characteristic {
    let e = random_k0(rng);
    let coeffs = e
        .coeffs()
        .iter()
        .map(|(v, c)| {
            let c: BigInt = if c < &BigInt::from(0) { -c } else { c.clone() };
            (v.clone(), c)
        })
        .collect();
    Characteristic::new(e.params().clone(), coeffs)
}

/// A random normal-form generator polynomial of height at most four over at
/// most three rational parameters plus the formal minimum.
pub fn random_normal_poly(rng: &mut ChaCha8Rng) -> GenPoly {
    let mut options: Vec<GenParam> = param_pool().into_iter().map(GenParam::Value).collect();
    options.push(GenParam::NegInf);
    let mut poly = GenPoly::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut params = options.clone();
        params.shuffle(rng);
        params.truncate(rng.gen_range(0..=3usize));
        let mut mono = Monomial::one();
        let mut budget = 4usize;
        for p in params {
            if budget == 0 {
                break;
            }
            let index = rng.gen_range(1..=budget);
            budget -= index;
            mono = mono.mul(&Monomial::from_generator(Generator::new(p, index)));
        }
        let coeff = loop {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                break c;
            }
        };
        poly = poly.add(&GenPoly::from_terms([(mono, BigInt::from(coeff))]));
    }
    poly
}

/// Random rational with small numerator and denominator.
pub fn random_point_coord(rng: &mut ChaCha8Rng) -> Rat {
    let num = rng.gen_range(-24i64..=24);
    let den = rng.gen_range(1i64..=4);
    Rat::new(num.into(), den.into())
}

/// Conjoins `x_i >= 0` for every variable of `d`.
pub fn nonneg_restrict(d: &PositiveDnf) -> PositiveDnf {
    let vars: Vec<String> = d.vars().to_vec();
    let guard_text = vars
        .iter()
        .map(|v| format!("{v} >= 0"))
        .collect::<Vec<_>>()
        .join(" & ");
    let guard = to_positive_dnf(&Formula::parse(&guard_text, Some(&vars)).unwrap()).unwrap();
    d.and(&guard)
}
