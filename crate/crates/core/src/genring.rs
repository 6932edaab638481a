//! The presentation of `K0` as a polynomial ring over the chain-class
//! generators modulo the product-relation ideal: reduction to normal form,
//! the isomorphism `zeta` and its triangular inverse, and verifiers for the
//! convolution, factorial and falling-factorial identities.

use crate::atoms::GapVector;
use crate::characteristic::{Characteristic, ParamSet};
use crate::grothendieck::{self, K0Element};
use crate::rat::{binomial, factorial, format_rat, parse_rat, Rat};
use num::BigInt;
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Generator subscript: a rational parameter or the formal minimum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GenParam {
    NegInf,
    Value(Rat),
}

impl fmt::Display for GenParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenParam::NegInf => write!(f, "-inf"),
            GenParam::Value(v) => write!(f, "{}", format_rat(v)),
        }
    }
}

/// The generator `X(a; n)`: the class of a descending chain of `n` free
/// points above `a`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Generator {
    pub param: GenParam,
    pub index: usize,
}

impl Generator {
    pub fn new(param: GenParam, index: usize) -> Generator {
        assert!(index >= 1, "generator index must be positive");
        Generator { param, index }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X({};{})", self.param, self.index)
    }
}

/// A monomial: generators with positive exponents. The empty monomial is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Monomial(BTreeMap<Generator, usize>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn from_generator(gen: Generator) -> Monomial {
        let mut m = BTreeMap::new();
        m.insert(gen, 1);
        Monomial(m)
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Generator, usize)> {
        self.0.iter().map(|(g, e)| (g, *e))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (g, e) in &other.0 {
            *out.entry(g.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }

    /// Total height of the class the monomial maps to.
    pub fn height(&self) -> usize {
        self.0.iter().map(|(g, e)| g.index * e).sum()
    }

    /// Normal-form monomials use each parameter at most once.
    pub fn has_distinct_params(&self) -> bool {
        let mut prev: Option<&GenParam> = None;
        for (g, e) in &self.0 {
            if e > &1 || prev == Some(&g.param) {
                return false;
            }
            prev = Some(&g.param);
        }
        true
    }

    fn repeated_param(&self) -> Option<&GenParam> {
        let mut prev: Option<&Generator> = None;
        for (g, e) in &self.0 {
            if *e > 1 {
                return Some(&g.param);
            }
            if let Some(p) = prev {
                if p.param == g.param {
                    return Some(&g.param);
                }
            }
            prev = Some(g);
        }
        None
    }

    fn without_one(&self, gen: &Generator) -> Monomial {
        let mut out = self.0.clone();
        match out.get_mut(gen) {
            Some(e) if *e > 1 => *e -= 1,
            Some(_) => {
                out.remove(gen);
            }
            None => panic!("factor {gen} not present"),
        }
        Monomial(out)
    }

    /// Expanded factor list in descending parameter order (print order).
    fn expanded_desc(&self) -> Vec<&Generator> {
        let mut out = Vec::new();
        for (g, e) in self.0.iter().rev() {
            for _ in 0..*e {
                out.push(g);
            }
        }
        out
    }
}

/// A sparse polynomial over the generators with arbitrary-precision integer
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GenPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl GenPoly {
    pub fn zero() -> GenPoly {
        GenPoly::default()
    }

    pub fn one() -> GenPoly {
        GenPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> GenPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        GenPoly { terms }
    }

    pub fn generator(gen: Generator) -> GenPoly {
        GenPoly::from_terms([(Monomial::from_generator(gen), BigInt::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> GenPoly {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            let entry = map.entry(m).or_insert_with(BigInt::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        GenPoly { terms: map }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &GenPoly) -> GenPoly {
        GenPoly::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn neg(&self) -> GenPoly {
        GenPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &GenPoly) -> GenPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &GenPoly) -> GenPoly {
        let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                *out.entry(m).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        GenPoly::from_terms(out)
    }

    pub fn scale(&self, factor: &BigInt) -> GenPoly {
        GenPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * factor)))
    }

    /// Every monomial uses pairwise distinct parameters.
    pub fn is_normal_form(&self) -> bool {
        self.terms.keys().all(Monomial::has_distinct_params)
    }

    /// Rational parameters appearing in any generator.
    pub fn rational_params(&self) -> ParamSet {
        ParamSet::new(self.terms.keys().flat_map(|m| {
            m.factors().filter_map(|(g, _)| match &g.param {
                GenParam::Value(v) => Some(v.clone()),
                GenParam::NegInf => None,
            })
        }))
    }

    /// Replaces a generator parameter throughout (merging exponents where
    /// substitution makes generators collide).
    pub fn substitute_param(&self, from: &GenParam, to: &GenParam) -> GenPoly {
        GenPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut out: BTreeMap<Generator, usize> = BTreeMap::new();
            for (g, e) in m.factors() {
                let param = if g.param == *from {
                    to.clone()
                } else {
                    g.param.clone()
                };
                *out.entry(Generator::new(param, g.index)).or_insert(0) += e;
            }
            (Monomial(out), c.clone())
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenRingError {
    MissingParam(Rat),
    InvalidIndices { k: usize, l: usize },
    OrderViolation,
    Parse { pos: usize, message: String },
}

impl fmt::Display for GenRingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenRingError::MissingParam(p) => write!(
                f,
                "parameter {} of the polynomial is outside the evaluation parameters",
                format_rat(p)
            ),
            GenRingError::InvalidIndices { k, l } => {
                write!(f, "indices must satisfy 1 <= l <= k, got l={l}, k={k}")
            }
            GenRingError::OrderViolation => write!(f, "rationals violate the required ordering"),
            GenRingError::Parse { pos, message } => {
                write!(f, "polynomial parse error at position {pos}: {message}")
            }
        }
    }
}

impl std::error::Error for GenRingError {}

// ---------------------------------------------------------------------------
// The relation ideal and reduction to normal form

/// The relation `X(a;k)*X(a;l) - sum_i C(k+i,i)*C(k,l-i)*X(a;k+i)` for
/// `1 <= l <= k`.
pub fn ideal_generator(param: &GenParam, k: usize, l: usize) -> Result<GenPoly, GenRingError> {
    if l < 1 || l > k {
        return Err(GenRingError::InvalidIndices { k, l });
    }
    let product = Monomial::from_generator(Generator::new(param.clone(), k))
        .mul(&Monomial::from_generator(Generator::new(param.clone(), l)));
    let mut terms = vec![(product, BigInt::one())];
    for i in 0..=l {
        let coeff = binomial(k + i, i) * binomial(k, l - i);
        terms.push((
            Monomial::from_generator(Generator::new(param.clone(), k + i)),
            -coeff,
        ));
    }
    Ok(GenPoly::from_terms(terms))
}

/// Rewrites same-parameter products until every monomial uses each
/// parameter at most once. Each step replaces `X(a;k)*X(a;l)` (`l <= k`)
/// with `sum_i C(k+i,i)*C(k,l-i)*X(a;k+i)`, strictly reducing the
/// same-parameter multiplicity, so reduction terminates.
pub fn reduce_mod_i(p: &GenPoly) -> GenPoly {
    let mut normal: BTreeMap<Monomial, BigInt> = BTreeMap::new();
    let mut work: Vec<(Monomial, BigInt)> =
        p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    while let Some((mono, coeff)) = work.pop() {
        if coeff.is_zero() {
            continue;
        }
        let Some(param) = mono.repeated_param().cloned() else {
            let entry = normal.entry(mono).or_insert_with(BigInt::zero);
            *entry += coeff;
            continue;
        };
        // Pull out the two largest same-parameter factors.
        let mut indices: Vec<usize> = Vec::new();
        for (g, e) in mono.factors() {
            if g.param == param {
                indices.extend(std::iter::repeat_n(g.index, e));
            }
        }
        indices.sort_unstable();
        let k = indices.pop().unwrap();
        let l = indices.pop().unwrap();
        let rest = mono
            .without_one(&Generator::new(param.clone(), k))
            .without_one(&Generator::new(param.clone(), l));
        for i in 0..=l {
            let ways = binomial(k + i, i) * binomial(k, l - i);
            let replacement = rest.mul(&Monomial::from_generator(Generator::new(
                param.clone(),
                k + i,
            )));
            work.push((replacement, &coeff * ways));
        }
    }
    GenPoly::from_terms(normal)
}

// ---------------------------------------------------------------------------
// zeta and its inverse

/// Image of one generator in `K0`, refined over `params`.
fn generator_image(gen: &Generator, params: &ParamSet) -> Result<K0Element, GenRingError> {
    let base = match &gen.param {
        GenParam::Value(a) => {
            if !params.contains(a) {
                return Err(GenRingError::MissingParam(a.clone()));
            }
            let mut coeffs = BTreeMap::new();
            coeffs.insert(GapVector(vec![gen.index, 0]), BigInt::one());
            Characteristic::new(ParamSet::new([a.clone()]), coeffs)
        }
        GenParam::NegInf => {
            let mut coeffs = BTreeMap::new();
            coeffs.insert(GapVector(vec![gen.index]), BigInt::one());
            Characteristic::new(ParamSet::empty(), coeffs)
        }
    };
    Ok(base
        .refine(params)
        .expect("params contain the generator parameter"))
}

/// The ring homomorphism onto `K0`: each generator maps to its chain class,
/// monomials multiply, sums add. `params` must contain every rational
/// generator parameter of `p`.
pub fn zeta(p: &GenPoly, params: &ParamSet) -> Result<K0Element, GenRingError> {
    let mut acc = Characteristic::zero(params.clone());
    for (mono, coeff) in p.terms() {
        let mut image = Characteristic::one(params.clone());
        for (gen, exp) in mono.factors() {
            let gi = generator_image(gen, params)?;
            for _ in 0..exp {
                image = grothendieck::mul(&image, &gi);
            }
        }
        acc = grothendieck::add(&acc, &image.scale(coeff));
    }
    Ok(acc)
}

/// Order used to peel leading colors: total height first, then the gap
/// vector read from the bottom gap upward, lexicographically.
pub fn color_order(a: &GapVector, b: &GapVector) -> Ordering {
    debug_assert_eq!(a.counts().len(), b.counts().len());
    a.height().cmp(&b.height()).then_with(|| {
        for (x, y) in a.counts().iter().rev().zip(b.counts().iter().rev()) {
            match x.cmp(y) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    })
}

/// The monomial whose image leads with the given color: one generator per
/// occupied gap, at the gap's lower endpoint.
pub fn monomial_of_color(color: &GapVector, params: &ParamSet) -> Monomial {
    let k = params.len();
    let mut mono = Monomial::one();
    for (gap, count) in color.counts().iter().enumerate() {
        if *count == 0 {
            continue;
        }
        let param = if gap < k {
            GenParam::Value(params.values()[gap].clone())
        } else {
            GenParam::NegInf
        };
        mono = mono.mul(&Monomial::from_generator(Generator::new(param, *count)));
    }
    mono
}

/// Inverts `zeta`: the unique normal-form polynomial mapping to `e`.
///
/// Repeatedly peels the maximal color under [`color_order`]; its monomial's
/// image leads with that color at coefficient one and otherwise contains
/// only strictly smaller colors, so the maximal color strictly decreases.
/// A non-decreasing step would mean the triangularity is violated and is
/// treated as a hard failure.
pub fn zeta_inv(e: &K0Element) -> GenPoly {
    let params = e.params().clone();
    let mut remainder = e.clone();
    let mut out = GenPoly::zero();
    let mut previous: Option<GapVector> = None;
    while !remainder.is_zero() {
        let lead = remainder
            .coeffs()
            .keys()
            .max_by(|a, b| color_order(a, b))
            .expect("nonzero element has a support")
            .clone();
        if let Some(prev) = &previous {
            assert_eq!(
                color_order(&lead, prev),
                Ordering::Less,
                "triangularity violated: leading color {lead} did not decrease below {prev}"
            );
        }
        let coeff = remainder.coeff(&lead);
        let mono = monomial_of_color(&lead, &params);
        let image = zeta(
            &GenPoly::from_terms([(mono.clone(), BigInt::one())]),
            &params,
        )
        .expect("colors only reference the element's parameters");
        remainder = grothendieck::sub(&remainder, &image.scale(&coeff));
        out = out.add(&GenPoly::from_terms([(mono, coeff)]));
        previous = Some(lead);
    }
    debug_assert!(out.is_normal_form());
    out
}

// ---------------------------------------------------------------------------
// Identity verifiers

/// The class of a descending chain of `count` free points strictly between
/// `lower` and `upper` (a single bounded-gap color).
pub fn bounded_chain_class(
    upper: &Rat,
    lower: &Rat,
    count: usize,
) -> Result<K0Element, GenRingError> {
    if lower >= upper {
        return Err(GenRingError::OrderViolation);
    }
    let params = ParamSet::new([upper.clone(), lower.clone()]);
    let mut coeffs = BTreeMap::new();
    coeffs.insert(GapVector(vec![0, count, 0]), BigInt::one());
    Ok(Characteristic::new(params, coeffs))
}

/// Normal form of the bounded chain class, `f(upper, lower; count)`.
pub fn bounded_chain_poly(upper: &Rat, lower: &Rat, count: usize) -> Result<GenPoly, GenRingError> {
    Ok(zeta_inv(&bounded_chain_class(upper, lower, count)?))
}

/// Checks the convolution identity splitting a bounded chain at an interior
/// point `a < c < b`:
///
/// ```text
/// f(b,a;n) = sum_{i=0..n} f(b,c;i)*f(c,a;n-i)
///          + sum_{i=0..n-1} f(b,c;i)*f(c,a;n-1-i)
/// ```
pub fn verify_convolution(n: usize, a: &Rat, c: &Rat, b: &Rat) -> Result<bool, GenRingError> {
    if !(a < c && c < b) {
        return Err(GenRingError::OrderViolation);
    }
    let lhs = bounded_chain_poly(b, a, n)?;
    let mut rhs = GenPoly::zero();
    for i in 0..=n {
        rhs = rhs.add(&bounded_chain_poly(b, c, i)?.mul(&bounded_chain_poly(c, a, n - i)?));
    }
    for i in 0..n {
        rhs = rhs.add(&bounded_chain_poly(b, c, i)?.mul(&bounded_chain_poly(c, a, n - 1 - i)?));
    }
    let params = ParamSet::new([a.clone(), b.clone(), c.clone()]);
    Ok(grothendieck::eq(
        &zeta(&lhs, &params)?,
        &zeta(&rhs, &params)?,
    ))
}

/// Checks the factorial identity `n! * f(b,a;n) = prod_{i=0..n-1} (f(b,a;1) - i)`.
pub fn verify_factorial(n: usize, a: &Rat, b: &Rat) -> Result<bool, GenRingError> {
    if a >= b {
        return Err(GenRingError::OrderViolation);
    }
    let lhs = bounded_chain_poly(b, a, n)?.scale(&factorial(n));
    let f1 = bounded_chain_poly(b, a, 1)?;
    let mut rhs = GenPoly::one();
    for i in 0..n {
        rhs = rhs.mul(&f1.sub(&GenPoly::constant(BigInt::from(i))));
    }
    let params = ParamSet::new([a.clone(), b.clone()]);
    Ok(grothendieck::eq(
        &zeta(&lhs, &params)?,
        &zeta(&rhs, &params)?,
    ))
}

// ---------------------------------------------------------------------------
// Falling-factorial substitution (exact rational univariate polynomials)

/// Dense univariate polynomial over the rationals (little-endian
/// coefficients), used only for the substitution checks.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct QPoly(Vec<Rat>);

impl QPoly {
    fn zero() -> QPoly {
        QPoly(Vec::new())
    }

    fn constant(c: Rat) -> QPoly {
        if c.is_zero() {
            QPoly::zero()
        } else {
            QPoly(vec![c])
        }
    }

    fn x() -> QPoly {
        QPoly(vec![Rat::zero(), Rat::one()])
    }

    fn trim(mut self) -> QPoly {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add(&self, other: &QPoly) -> QPoly {
        let mut out = vec![Rat::zero(); self.0.len().max(other.0.len())];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        QPoly(out).trim()
    }

    fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.scale(&-Rat::one()))
    }

    fn scale(&self, factor: &Rat) -> QPoly {
        QPoly(self.0.iter().map(|c| c * factor).collect()).trim()
    }

    fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly(out).trim()
    }
}

/// `X(a;j)` under the falling-factorial substitution:
/// `(1/j!) * prod_{i=0..j-1} (X - i)` as a rational polynomial in `X`.
fn falling_factorial_image(j: usize) -> QPoly {
    let mut p = QPoly::constant(Rat::one());
    for i in 0..j {
        p = p.mul(&QPoly::x().sub(&QPoly::constant(Rat::from_integer(BigInt::from(i)))));
    }
    p.scale(&Rat::new(BigInt::one(), factorial(j)))
}

/// Checks that the congruence
///
/// ```text
/// X_k * prod_{i=0..l-1} (X_1 - i)
///   - l! * sum_{i=0..l} C(k+i,i)*C(k,l-i)*X_{k+i}
/// ```
///
/// vanishes under the falling-factorial substitution — a necessary
/// condition for membership in the factorial relation ideal.
pub fn verify_iprime_congruence(k: usize, l: usize) -> Result<bool, GenRingError> {
    if l < 1 || l > k {
        return Err(GenRingError::InvalidIndices { k, l });
    }
    let mut lhs = falling_factorial_image(k);
    for i in 0..l {
        lhs = lhs.mul(&QPoly::x().sub(&QPoly::constant(Rat::from_integer(BigInt::from(i)))));
    }
    let mut rhs = QPoly::zero();
    for i in 0..=l {
        let coeff = binomial(k + i, i) * binomial(k, l - i);
        rhs = rhs.add(&falling_factorial_image(k + i).scale(&Rat::from_integer(coeff)));
    }
    let diff = lhs.sub(&rhs.scale(&Rat::from_integer(factorial(l))));
    Ok(diff.is_zero())
}

/// The certified multiplier for the relation `rel(k, l)`: `l!` times the
/// relation vanishes under the falling-factorial substitution.
pub fn relation_multiplier(k: usize, l: usize) -> Result<BigInt, GenRingError> {
    if l < 1 || l > k {
        return Err(GenRingError::InvalidIndices { k, l });
    }
    let image = falling_factorial_image(k).mul(&falling_factorial_image(l));
    let mut rhs = QPoly::zero();
    for i in 0..=l {
        let coeff = binomial(k + i, i) * binomial(k, l - i);
        rhs = rhs.add(&falling_factorial_image(k + i).scale(&Rat::from_integer(coeff)));
    }
    assert!(
        image.sub(&rhs).is_zero(),
        "relation rel({k},{l}) does not vanish under the substitution"
    );
    Ok(factorial(l))
}

// ---------------------------------------------------------------------------
// Text format: `3*X(0;2)*X(-inf;1) - X(1/2;1)`

impl fmt::Display for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        terms.sort_by(|(ma, _), (mb, _)| {
            mb.height().cmp(&ma.height()).then_with(|| {
                let fa: Vec<(&GenParam, usize)> = ma
                    .expanded_desc()
                    .iter()
                    .map(|g| (&g.param, g.index))
                    .collect();
                let fb: Vec<(&GenParam, usize)> = mb
                    .expanded_desc()
                    .iter()
                    .map(|g| (&g.param, g.index))
                    .collect();
                fa.cmp(&fb)
            })
        });
        for (i, (mono, coeff)) in terms.iter().enumerate() {
            let negative = coeff.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let magnitude = coeff.magnitude();
            let factors = mono.expanded_desc();
            if factors.is_empty() {
                write!(f, "{magnitude}")?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{magnitude}*")?;
                }
                let rendered: Vec<String> = factors.iter().map(|g| g.to_string()).collect();
                write!(f, "{}", rendered.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Parses the generator-polynomial text syntax (the printer's inverse).
pub fn parse_genpoly(text: &str) -> Result<GenPoly, GenRingError> {
    let mut p = PolyParser {
        bytes: text.as_bytes(),
        text,
        pos: 0,
    };
    p.poly()
}

struct PolyParser<'a> {
    bytes: &'a [u8],
    text: &'a str,
    pos: usize,
}

impl<'a> PolyParser<'a> {
    fn error(&self, message: &str) -> GenRingError {
        GenRingError::Parse {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<GenPoly, GenRingError> {
        let mut terms: Vec<(Monomial, BigInt)> = Vec::new();
        let mut sign = BigInt::one();
        self.skip_ws();
        if self.eat(b'-') {
            sign = -sign;
        } else {
            let _ = self.eat(b'+');
        }
        loop {
            let (mono, coeff) = self.term()?;
            terms.push((mono, coeff * &sign));
            self.skip_ws();
            if self.pos >= self.bytes.len() {
                break;
            }
            sign = if self.eat(b'+') {
                BigInt::one()
            } else if self.eat(b'-') {
                -BigInt::one()
            } else {
                return Err(self.error("expected `+`, `-` or end of input"));
            };
        }
        Ok(GenPoly::from_terms(terms))
    }

    fn term(&mut self) -> Result<(Monomial, BigInt), GenRingError> {
        self.skip_ws();
        let mut coeff = BigInt::one();
        let mut mono = Monomial::one();
        if self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            coeff = self.natural()?;
            if !self.eat(b'*') {
                return Ok((mono, coeff));
            }
        }
        loop {
            self.skip_ws();
            if self.bytes.get(self.pos) == Some(&b'X') {
                self.pos += 1;
                mono = mono.mul(&Monomial::from_generator(self.generator_body()?));
            } else {
                return Err(self.error("expected a generator"));
            }
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((mono, coeff))
    }

    fn generator_body(&mut self) -> Result<Generator, GenRingError> {
        if !self.eat(b'(') {
            return Err(self.error("expected `(` after X"));
        }
        self.skip_ws();
        let param = if self.text[self.pos..].starts_with("-inf") {
            self.pos += 4;
            GenParam::NegInf
        } else {
            GenParam::Value(self.rational()?)
        };
        if !self.eat(b';') {
            return Err(self.error("expected `;` in generator"));
        }
        self.skip_ws();
        let index = self.natural()?;
        let index = usize::try_from(&index).map_err(|_| self.error("index too large"))?;
        if index == 0 {
            return Err(self.error("generator index must be positive"));
        }
        if !self.eat(b')') {
            return Err(self.error("expected `)` closing generator"));
        }
        Ok(Generator::new(param, index))
    }

    fn natural(&mut self) -> Result<BigInt, GenRingError> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(self.text[start..self.pos]
            .parse()
            .expect("digits form an integer"))
    }

    fn rational(&mut self) -> Result<Rat, GenRingError> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit() || *b == b'/')
        {
            self.pos += 1;
        }
        parse_rat(&self.text[start..self.pos]).map_err(|message| GenRingError::Parse {
            pos: start,
            message,
        })
    }
}
