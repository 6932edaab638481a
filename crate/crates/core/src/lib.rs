//! Definable sets over a dense linear order without endpoints, instantiated
//! over the rationals.
//!
//! The crate decomposes definable sets into their atoms ("related sets"),
//! computes the gap-count invariants that decide existence of definable
//! bijections, and implements the Grothendieck semiring/ring `K0` of the
//! structure together with its presentation by generators and relations.
//!
//! Pipeline overview:
//!
//! * [`formula`] — first-order syntax over `{<}` with exact rational
//!   parameters, parsing, evaluation, and positive-atomic DNF normalization.
//! * [`qe`] — quantifier elimination for dense linear orders without
//!   endpoints.
//! * [`atoms`] — enumeration of the atoms of the boolean algebras of
//!   definable sets, their heights, gap counts and sample points.
//! * [`characteristic`] — global characteristics, refinement across
//!   parameter sets, the definable-bijection decision procedure, dimension
//!   padding, and the minimum-endpoint translation.
//! * [`grothendieck`] — the semiring of bijection classes and its group
//!   completion: addition, products, cancellativity, pigeonhole checks,
//!   effectivity, and injection-nonexistence certificates.
//! * [`genring`] — the polynomial presentation of `K0`: reduction modulo the
//!   product-relation ideal, the isomorphism `zeta` and its triangular
//!   inverse, and the convolution/factorial identity verifiers.
//! * [`oracle`] — deliberately naive reference implementations used as
//!   ground truth in tests.

pub mod atoms;
pub mod characteristic;
pub mod formula;
pub mod genring;
pub mod grothendieck;
pub mod oracle;
pub mod qe;
pub mod rat;

pub use atoms::{Atom, Block, ChainParam, GapVector};
pub use characteristic::{Characteristic, ParamSet};
pub use formula::{Formula, PositiveDnf};
pub use genring::{GenParam, GenPoly, Generator, Monomial};
pub use grothendieck::K0Element;
pub use rat::Rat;
