//! Exact-arithmetic toolkit for Belyi polynomials over the rationals.
//!
//! A normalized Belyi polynomial sends both 0 and 1 into {0, 1} and has
//! every critical value in {0, 1}; equivalently B' divides B(1 - B).
//! This crate constructs such polynomials, certifies the defining
//! divisibility exactly, computes Newton polygons with respect to a
//! prime, and derives certified lower/upper bounds on the least degree
//! of a Belyi polynomial mapping a given rational into {0, 1}.
//!
//! Modules:
//! - [`exactnum`]: arbitrary-precision rationals, primes, p-adic valuation
//! - [`polyring`]: dense univariate polynomials over the rationals
//! - [`newton`]: Newton polygons and the polygon-level lemma checks
//! - [`belyi`]: certification and the basic Belyi families
//! - [`construct`]: constructions producing replayable traces
//! - [`height`]: certified degree bounds for rationals
//! - [`corpus`]: deterministic test corpora
//! - [`verify`]: batch verification suites over the corpora

pub mod belyi;
pub mod construct;
pub mod corpus;
pub mod exactnum;
mod exec;
pub mod height;
pub mod newton;
pub mod polyring;
pub mod verify;

pub use belyi::{belyi_ab, certify, chebyshev, chebyshev_belyi, compose_belyi, precompose_linear, BelyiCertificate};
pub use construct::{
    belyi_for_rational, expected_degree, reduce_critical_values, ConstructionTrace, TraceStep,
};
pub use corpus::{
    belyi_corpus, belyi_corpus_with, random_poly_corpus, split_poly, split_poly_corpus,
    CorpusSpec, SplitPoly,
};
pub use exactnum::{is_prime, prime_support, reduce_mod_p, valuation, Prime, Rational, Valuation};
pub use exec::ExecMode;
pub use height::{enumerate_low_degree, height, lower_bound, HeightBounds};
pub use newton::{
    check_containment, check_shift_lemma, coeff_points, divides_square, is_single_segment,
    minus_one_relation, newton_polygon, valuation_profile, MinusOneReport, NewtonPolygon,
    ProfileEntry, ValuationProfile,
};
pub use polyring::{divides, Poly};
pub use verify::{run_suite, CheckOutcome, Suite, SuiteReport};
