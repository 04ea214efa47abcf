//! Named law suites: batch checks of the polygon, Belyi, and height
//! machinery over the generated corpora. Each check reports case and
//! failure counts plus a few sample failure descriptions, so a clean
//! run is auditable and a broken one is diagnosable.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::belyi::{belyi_ab, chebyshev_belyi, compose_belyi, BelyiCertificate};
use crate::construct::{belyi_for_rational, expected_degree};
use crate::corpus::{
    belyi_corpus_with, random_poly_corpus, split_poly_corpus, CorpusSpec, SplitPoly,
};
use crate::exactnum::{valuation, Prime, Rational};
use crate::exec::ExecMode;
use crate::height::{curated_witnesses, enumerate_low_degree, height, lower_bound, Justification};
use crate::newton::{
    check_containment, check_shift_lemma, coeff_points, divides_square, is_single_segment,
    minus_one_relation, newton_polygon, valuation_profile, ProfileEntry, ValuationProfile,
};
use crate::polyring::Poly;

/// How many random polynomials the randomized polygon checks draw.
const RANDOM_POLY_COUNT: usize = 500;
const RANDOM_POLY_MAX_DEGREE: usize = 8;
/// Sample failure descriptions kept per check.
const SAMPLE_LIMIT: usize = 5;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Hull geometry, the minus-one and derivative-shift relations, the
    /// monomial criterion, and root rescaling.
    PolygonLaws,
    /// Certification, the B_{a,b} value map, the Chebyshev family,
    /// closure under composition and complement, construction traces.
    BelyiLaws,
    /// Polygon containment, the single-segment law, root support
    /// against degree, and sharpness of the height bound.
    Theorems,
    /// Ground-truth comparisons: split-root profiles, the worked
    /// polygon examples, low-degree enumeration, height values.
    Oracles,
    All,
}

impl Suite {
    pub const NAMES: [(&'static str, Suite); 5] = [
        ("polygon-laws", Suite::PolygonLaws),
        ("belyi-laws", Suite::BelyiLaws),
        ("theorems", Suite::Theorems),
        ("oracles", Suite::Oracles),
        ("all", Suite::All),
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, _) = Suite::NAMES
            .iter()
            .find(|(_, s)| s == self)
            .expect("every suite is named");
        f.write_str(name)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown suite {0:?} (expected polygon-laws, belyi-laws, theorems, oracles, or all)")]
pub struct UnknownSuite(String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, UnknownSuite> {
        Suite::NAMES
            .iter()
            .find(|(name, _)| *name == s)
            .map(|&(_, suite)| suite)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

/// Result of one named check: how many cases ran, how many violated the
/// law, and descriptions of the first few violations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub samples: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn cases(&self) -> u64 {
        self.checks.iter().map(|c| c.cases).sum()
    }

    pub fn failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failures).sum()
    }
}

pub fn run_suite(suite: Suite, spec: &CorpusSpec, mode: ExecMode) -> SuiteReport {
    let checks = match suite {
        Suite::PolygonLaws => polygon_laws(spec, mode),
        Suite::BelyiLaws => belyi_laws(spec, mode),
        Suite::Theorems => theorems(spec, mode),
        Suite::Oracles => oracles(spec, mode),
        Suite::All => {
            // The Belyi corpus is the expensive shared input; build it once.
            let corpus = belyi_corpus_with(spec, mode);
            let mut checks = polygon_laws(spec, mode);
            checks.extend(belyi_laws_on(&corpus, spec, mode));
            checks.extend(theorems_on(&corpus, spec, mode));
            checks.extend(oracles(spec, mode));
            checks
        }
    };
    SuiteReport { suite, checks }
}

fn clip(s: String) -> String {
    if s.chars().count() > 240 {
        let mut t: String = s.chars().take(240).collect();
        t.push('…');
        t
    } else {
        s
    }
}

fn run_check<T: Sync>(
    name: &str,
    mode: ExecMode,
    items: &[T],
    law: impl Fn(&T) -> Result<(), String> + Sync + Send,
) -> CheckOutcome {
    let results = mode.map(items, |item| law(item).err());
    let mut failures = 0;
    let mut samples = Vec::new();
    for err in results.into_iter().flatten() {
        failures += 1;
        if samples.len() < SAMPLE_LIMIT {
            samples.push(clip(err));
        }
    }
    CheckOutcome {
        name: name.to_string(),
        cases: items.len() as u64,
        failures,
        samples,
    }
}

fn run_single(name: &str, law: impl FnOnce() -> Result<(), String>) -> CheckOutcome {
    let (failures, samples) = match law() {
        Ok(()) => (0, Vec::new()),
        Err(e) => (1, vec![clip(e)]),
    };
    CheckOutcome {
        name: name.to_string(),
        cases: 1,
        failures,
        samples,
    }
}

// ---------------------------------------------------------------------
// polygon-laws

fn polygon_laws(spec: &CorpusSpec, mode: ExecMode) -> Vec<CheckOutcome> {
    let polys = random_poly_corpus(spec.seed, RANDOM_POLY_COUNT, RANDOM_POLY_MAX_DEGREE);
    let splits = split_poly_corpus(spec);
    let primes = spec.primes();

    let all_pairs: Vec<(&Poly, Prime)> = polys
        .iter()
        .flat_map(|f| primes.iter().map(move |&p| (f, p)))
        .collect();
    // The derivative-shift relation needs deg f < p.
    let low_degree_pairs: Vec<(&Poly, Prime)> = all_pairs
        .iter()
        .copied()
        .filter(|(f, p)| (f.degree().unwrap_or(0) as u64) < p.get())
        .collect();
    let split_pairs: Vec<(&SplitPoly, Prime)> = splits
        .iter()
        .filter(|sp| !sp.roots.is_empty())
        .flat_map(|sp| primes.iter().map(move |&p| (sp, p)))
        .collect();

    vec![
        run_check("hull-soundness", mode, &all_pairs, |&(f, p)| {
            hull_soundness(f, p)
        }),
        run_check("minus-one-junction", mode, &all_pairs, |&(f, p)| {
            let report = minus_one_relation(f, p).map_err(|e| fail(f, p, &e))?;
            if report.j.is_none() || !report.shape_ok || !report.slope_order_ok {
                return Err(fail(
                    f,
                    p,
                    &format!(
                        "junction {:?}, shape_ok {}, slope_order_ok {}",
                        report.junction, report.shape_ok, report.slope_order_ok
                    ),
                ));
            }
            Ok(())
        }),
        run_check("derivative-shift", mode, &low_degree_pairs, |&(f, p)| {
            match check_shift_lemma(f, p) {
                Ok(true) => Ok(()),
                Ok(false) => Err(fail(f, p, "polygon of x f' differs")),
                Err(e) => Err(fail(f, p, &e)),
            }
        }),
        monomial_criterion(mode),
        run_check("rescale-flattens-top", mode, &split_pairs, |&(sp, p)| {
            rescale_flattens_top(sp, p)
        }),
    ]
}

fn fail(f: &Poly, p: Prime, what: impl fmt::Display) -> String {
    format!("f = {f}, p = {}: {what}", p.get())
}

/// The hull is sound when its vertices are coefficient points, its
/// segments have strictly increasing slopes, and every coefficient
/// point lies on or above the chain.
fn hull_soundness(f: &Poly, p: Prime) -> Result<(), String> {
    let points = coeff_points(f, p).map_err(|e| fail(f, p, &e))?;
    let polygon = newton_polygon(f, p).map_err(|e| fail(f, p, &e))?;
    let vs = polygon.vertices();
    if vs.is_empty() {
        return Err(fail(f, p, "empty hull"));
    }
    for v in vs {
        if !points.points().contains(v) {
            return Err(fail(f, p, &format!("vertex {v:?} is not a coefficient point")));
        }
    }
    let (lo, hi) = (vs[0], vs[vs.len() - 1]);
    for &(x, y) in points.points() {
        if x < lo.0 || x > hi.0 {
            return Err(fail(f, p, &format!("point ({x}, {y}) outside the hull span")));
        }
        let above = if vs.len() == 1 {
            y >= lo.1
        } else {
            vs.windows(2).any(|w| {
                let cross = (w[1].0 - w[0].0) as i128 * (y - w[0].1) as i128
                    - (w[1].1 - w[0].1) as i128 * (x - w[0].0) as i128;
                w[0].0 <= x && x <= w[1].0 && cross >= 0
            })
        };
        if !above {
            return Err(fail(f, p, &format!("point ({x}, {y}) below the hull")));
        }
    }
    for w in polygon.segments().windows(2) {
        if w[0].slope >= w[1].slope {
            return Err(fail(f, p, "slopes are not strictly increasing"));
        }
    }
    if polygon.segments().iter().any(|s| s.length <= 0) {
        return Err(fail(f, p, "segment of nonpositive length"));
    }
    Ok(())
}

/// Exhaustive: over nonzero f = c_1 x + ... + c_5 x^5 with coefficients
/// from a fixed pool, f' | f^2 exactly at the monomials.
fn monomial_criterion(mode: ExecMode) -> CheckOutcome {
    let pool: Vec<Rational> = [(0, 1), (-2, 1), (-1, 1), (1, 1), (2, 1), (1, 2)]
        .iter()
        .map(|&(n, d)| Rational::of(n, d))
        .collect();
    let mut items = Vec::new();
    for code in 0..pool.len().pow(5) {
        let mut c = code;
        let mut coeffs = vec![Rational::zero()];
        for _ in 0..5 {
            coeffs.push(pool[c % pool.len()].clone());
            c /= pool.len();
        }
        let f = Poly::new(coeffs);
        if !f.is_zero() {
            items.push(f);
        }
    }
    run_check("monomial-criterion", mode, &items, |f| {
        let divides = divides_square(f).map_err(|e| format!("f = {f}: {e}"))?;
        if divides != f.is_monomial() {
            return Err(format!(
                "f = {f}: f' | f^2 is {divides} but is_monomial is {}",
                f.is_monomial()
            ));
        }
        Ok(())
    })
}

/// Rescaling by a root of minimal valuation and dividing by the leading
/// part puts the top segment on the x-axis; the whole profile shifts by
/// that valuation.
fn rescale_flattens_top(sp: &SplitPoly, p: Prime) -> Result<(), String> {
    let f = &sp.poly;
    let m = sp
        .roots
        .iter()
        .filter_map(|r| valuation(r, p).finite())
        .min()
        .expect("nonempty nonzero roots");
    let gamma = sp
        .roots
        .iter()
        .find(|r| valuation(r, p).finite() == Some(m))
        .expect("some root attains the minimum");
    let n = f.degree().expect("split polynomials are nonzero");
    let unit = (&sp.leading * &gamma.pow(n as i64)).recip();
    let rescaled = f.compose(&Poly::monomial(gamma.clone(), 1)).scale(&unit);
    let polygon = newton_polygon(&rescaled, p).map_err(|e| fail(f, p, &e))?;
    let top = polygon
        .segments()
        .last()
        .ok_or_else(|| fail(f, p, "rescaled polygon has no segments"))?;
    if !top.slope.is_zero() {
        return Err(fail(f, p, &format!("top slope {} after rescaling", top.slope)));
    }
    if *polygon.vertices().last().unwrap() != (n as i64, 0) {
        return Err(fail(f, p, "top segment not on the x-axis"));
    }
    let base = valuation_profile(f, p).map_err(|e| fail(f, p, &e))?;
    let shift = Rational::from(m);
    let expected = ValuationProfile {
        zero_multiplicity: base.zero_multiplicity,
        entries: base
            .entries
            .iter()
            .map(|e| ProfileEntry {
                valuation: &e.valuation - &shift,
                multiplicity: e.multiplicity,
            })
            .collect(),
    };
    let got = valuation_profile(&rescaled, p).map_err(|e| fail(f, p, &e))?;
    if got != expected {
        return Err(fail(f, p, "profile did not shift by the minimal valuation"));
    }
    Ok(())
}

// ---------------------------------------------------------------------
// belyi-laws

fn belyi_laws(spec: &CorpusSpec, mode: ExecMode) -> Vec<CheckOutcome> {
    let corpus = belyi_corpus_with(spec, mode);
    belyi_laws_on(&corpus, spec, mode)
}

fn belyi_laws_on(
    corpus: &[BelyiCertificate],
    spec: &CorpusSpec,
    mode: ExecMode,
) -> Vec<CheckOutcome> {
    let ab_pairs: Vec<(u64, u64)> = {
        let top = spec.max_b.max(6);
        (1..=top).flat_map(|b| (1..=b).map(move |a| (a, b))).collect()
    };
    let cheb_range: Vec<u32> = (1..=spec.chebyshev_max_n.max(12)).collect();
    let cheb_pairs: Vec<(u32, u32)> = (1..=4).flat_map(|m| (1..=4).map(move |n| (m, n))).collect();
    let small: Vec<&BelyiCertificate> = corpus.iter().filter(|c| c.degree() <= 6).collect();
    let compose_pairs: Vec<(&BelyiCertificate, &BelyiCertificate)> = small
        .iter()
        .flat_map(|&f| small.iter().map(move |&g| (f, g)))
        .collect();
    let corpus_refs: Vec<&BelyiCertificate> = corpus.iter().collect();
    let lambdas = rational_grid(12);

    vec![
        run_check("corpus-certification", mode, &corpus_refs, |cert| {
            cert.verify()
                .map_err(|e| format!("B = {}: {e}", cert.subject()))
        }),
        run_check("value-map", mode, &ab_pairs, |&(a, b)| value_map(a, b)),
        run_check("chebyshev-certify", mode, &cheb_range, |&n| {
            let f = chebyshev_belyi(n).map_err(|e| format!("n = {n}: {e}"))?;
            if f.degree() != Some(n as usize) {
                return Err(format!("n = {n}: degree {:?}", f.degree()));
            }
            let lc = Rational::of(2, 1).pow(2 * n as i64 - 2);
            if f.leading() != Some(&lc) {
                return Err(format!("n = {n}: leading coefficient {:?}", f.leading()));
            }
            crate::belyi::certify(&f).map_err(|e| format!("n = {n}: {e}"))?;
            Ok(())
        }),
        run_check("chebyshev-semigroup", mode, &cheb_pairs, |&(m, n)| {
            let composed = chebyshev_belyi(m)
                .unwrap()
                .compose(&chebyshev_belyi(n).unwrap());
            if composed != chebyshev_belyi(m * n).unwrap() {
                return Err(format!("indices {m} and {n}: composition is not index {}", m * n));
            }
            Ok(())
        }),
        run_check("composition-closure", mode, &compose_pairs, |&(f, g)| {
            let c = compose_belyi(f, g);
            c.verify().map_err(|e| format!("{} . {}: {e}", f.subject(), g.subject()))?;
            if c.degree() != f.degree() * g.degree() {
                return Err(format!(
                    "{} . {}: degree {} instead of {}",
                    f.subject(),
                    g.subject(),
                    c.degree(),
                    f.degree() * g.degree()
                ));
            }
            Ok(())
        }),
        run_check("complement-involution", mode, &corpus_refs, |cert| {
            let comp = cert.complement();
            comp.verify()
                .map_err(|e| format!("1 - ({}): {e}", cert.subject()))?;
            if &comp.complement() != *cert {
                return Err(format!("B = {}: complement is not an involution", cert.subject()));
            }
            Ok(())
        }),
        run_check("construction-traces", mode, &lambdas, |lambda| {
            construction_trace(lambda)
        }),
    ]
}

/// Reduced rationals n/d with |n| <= bound, 1 <= d <= bound.
fn rational_grid(bound: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for d in 1..=bound {
        for n in -bound..=bound {
            let q = Rational::of(n, d);
            if q.denom() == &num_bigint::BigInt::from(d) {
                out.push(q);
            }
        }
    }
    out
}

fn value_map(a: u64, b: u64) -> Result<(), String> {
    let f = belyi_ab(a, b).map_err(|e| format!("(a, b) = ({a}, {b}): {e}"))?;
    let ctx = |what: &str| format!("B_({a},{b}): {what}");
    if f.degree() != Some(b as usize) {
        return Err(ctx(&format!("degree {:?}", f.degree())));
    }
    if !f.evaluate(&Rational::zero()).is_zero() {
        return Err(ctx("value at 0 is not 0"));
    }
    let at_one = f.evaluate(&Rational::one());
    let expected_one = if a == b { at_one.is_one() } else { at_one.is_zero() };
    if !expected_one {
        return Err(ctx(&format!("value at 1 is {at_one}")));
    }
    if !f.evaluate(&Rational::of(a as i64, b as i64)).is_one() {
        return Err(ctx("value at a/b is not 1"));
    }
    crate::belyi::certify(&f).map_err(|e| ctx(&e.to_string()))?;
    Ok(())
}

fn construction_trace(lambda: &Rational) -> Result<(), String> {
    let ctx = |what: &str| format!("lambda = {lambda}: {what}");
    let trace = belyi_for_rational(lambda);
    let result = trace.result();
    result.verify().map_err(|e| ctx(&e.to_string()))?;
    if &trace.replay() != result.subject() {
        return Err(ctx("replay does not reproduce the result"));
    }
    let image = result.subject().evaluate(lambda);
    if !(image.is_zero() || image.is_one()) {
        return Err(ctx(&format!("image {image} is not 0 or 1")));
    }
    if trace.image_of_lambda() != Some(&image) {
        return Err(ctx("recorded image disagrees with evaluation"));
    }
    if expected_degree(&trace) != result.degree() {
        return Err(ctx(&format!(
            "degree {} but the step degrees give {}",
            result.degree(),
            expected_degree(&trace)
        )));
    }
    // Closed form: 1 at the endpoints, else denominator, numerator, or
    // their difference depending on where lambda sits.
    let n = lambda.numer().to_i64().expect("grid rationals are small");
    let d = lambda.denom().to_i64().expect("grid rationals are small");
    let closed_form = if lambda.is_zero() || lambda.is_one() {
        1
    } else if !lambda.is_negative() && n < d {
        d
    } else if lambda.is_negative() {
        d - n
    } else {
        n
    };
    if result.degree() != closed_form as usize {
        return Err(ctx(&format!(
            "degree {} instead of {closed_form}",
            result.degree()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------
// theorems

fn theorems(spec: &CorpusSpec, mode: ExecMode) -> Vec<CheckOutcome> {
    let corpus = belyi_corpus_with(spec, mode);
    theorems_on(&corpus, spec, mode)
}

fn theorems_on(
    corpus: &[BelyiCertificate],
    spec: &CorpusSpec,
    mode: ExecMode,
) -> Vec<CheckOutcome> {
    let primes = spec.primes();
    // Containment and the single-segment law quantify over B with
    // B(0) = 0 and deg B < p.
    let pairs: Vec<(&BelyiCertificate, Prime)> = corpus
        .iter()
        .filter(|c| c.subject().coeff(0).is_zero())
        .flat_map(|c| {
            primes
                .iter()
                .filter(move |p| (c.degree() as u64) < p.get())
                .map(move |&p| (c, p))
        })
        .collect();
    let corpus_refs: Vec<&BelyiCertificate> = corpus.iter().collect();
    let sharp_primes: Vec<u64> = vec![2, 3, 5, 7, 11, 13];

    vec![
        run_check("containment", mode, &pairs, |&(cert, p)| {
            match check_containment(cert.subject(), p) {
                Ok(true) => Ok(()),
                Ok(false) => Err(fail(cert.subject(), p, "polygon of B leaves the polygon of B - 1")),
                Err(e) => Err(fail(cert.subject(), p, &e)),
            }
        }),
        run_check("single-segment", mode, &pairs, |&(cert, p)| {
            let ng = newton_polygon(&(cert.subject() - &Poly::one()), p)
                .map_err(|e| fail(cert.subject(), p, &e))?;
            if !is_single_segment(&ng) {
                return Err(fail(
                    cert.subject(),
                    p,
                    &format!("B - 1 has {} segments", ng.segments().len()),
                ));
            }
            Ok(())
        }),
        run_check("root-support", mode, &corpus_refs, |cert| {
            root_support(cert)
        }),
        run_check("sharpness", mode, &sharp_primes, |&p| sharpness(p)),
    ]
}

/// Every rational point B sends to 0 or 1 has height at most deg B; in
/// particular every prime in the support of a root of B or B - 1 is
/// bounded by the degree.
fn root_support(cert: &BelyiCertificate) -> Result<(), String> {
    let b = cert.subject();
    let degree = cert.degree() as u64;
    for (label, g) in [("B", b.clone()), ("B - 1", b - &Poly::one())] {
        let roots = g
            .rational_roots()
            .map_err(|e| format!("B = {b}, roots of {label}: {e}"))?;
        for r in roots {
            let bound = lower_bound(&r).map_err(|e| format!("B = {b}, root {r}: {e}"))?;
            if bound > degree {
                return Err(format!(
                    "B = {b}: root {r} of {label} has support up to {bound} > degree {degree}"
                ));
            }
        }
    }
    Ok(())
}

fn sharpness(p: u64) -> Result<(), String> {
    let scaled = height(&Rational::from(p as i64)).map_err(|e| format!("p = {p}: {e}"))?;
    let expected_witness = belyi_ab(1, p)
        .unwrap()
        .compose(&Poly::linear(&Rational::of(1, p as i64), &Rational::zero()));
    if !(scaled.exact && scaled.lower == p && scaled.upper == p) {
        return Err(format!(
            "p = {p}: bounds [{}, {}], exact {}",
            scaled.lower, scaled.upper, scaled.exact
        ));
    }
    if scaled.witness.subject() != &expected_witness {
        return Err(format!("p = {p}: witness is not B_(1,{p})(x/{p})"));
    }
    let inverse = height(&Rational::of(1, p as i64)).map_err(|e| format!("p = {p}: {e}"))?;
    if !(inverse.exact && inverse.lower == p && inverse.upper == p) {
        return Err(format!(
            "1/{p}: bounds [{}, {}], exact {}",
            inverse.lower, inverse.upper, inverse.exact
        ));
    }
    if inverse.witness.subject() != &belyi_ab(1, p).unwrap() {
        return Err(format!("1/{p}: witness is not B_(1,{p})"));
    }
    Ok(())
}

// ---------------------------------------------------------------------
// oracles

fn oracles(spec: &CorpusSpec, mode: ExecMode) -> Vec<CheckOutcome> {
    let splits = split_poly_corpus(spec);
    let primes = spec.primes();
    let split_pairs: Vec<(&SplitPoly, Prime)> = splits
        .iter()
        .flat_map(|sp| primes.iter().map(move |&p| (sp, p)))
        .collect();

    vec![
        run_check("profile-oracle", mode, &split_pairs, |&(sp, p)| {
            profile_oracle(sp, p)
        }),
        run_single("worked-examples", worked_examples),
        run_single("low-degree-oracle", low_degree_oracle),
        run_single("height-examples", height_examples),
    ]
}

/// The profile read off the polygon equals the multiset of root
/// valuations known from the factorization.
fn profile_oracle(sp: &SplitPoly, p: Prime) -> Result<(), String> {
    let got = valuation_profile(&sp.poly, p).map_err(|e| fail(&sp.poly, p, &e))?;
    let mut vals: Vec<i64> = sp
        .roots
        .iter()
        .map(|r| valuation(r, p).finite().expect("roots are nonzero"))
        .collect();
    vals.sort_unstable_by(|a, b| b.cmp(a));
    let mut entries: Vec<ProfileEntry> = Vec::new();
    for v in vals {
        match entries.last_mut() {
            Some(e) if e.valuation == Rational::from(v) => e.multiplicity += 1,
            _ => entries.push(ProfileEntry {
                valuation: Rational::from(v),
                multiplicity: 1,
            }),
        }
    }
    let expected = ValuationProfile {
        zero_multiplicity: sp.zero_multiplicity,
        entries,
    };
    if got != expected {
        return Err(fail(
            &sp.poly,
            p,
            &format!("profile {got:?} but the roots give {expected:?}"),
        ));
    }
    Ok(())
}

fn worked_examples() -> Result<(), String> {
    let rat = Rational::of;
    let five = Prime::new(5).unwrap();
    let cases: [(&str, Vec<Rational>, Vec<(i64, i64)>, usize, Vec<(i64, usize)>); 3] = [
        (
            "5^4 x (x - 1/5)^2 (x - 5)",
            vec![rat(0, 1), rat(-125, 1), rat(1275, 1), rat(-3375, 1), rat(625, 1)],
            vec![(1, 3), (2, 2), (4, 4)],
            1,
            vec![(1, 1), (-1, 2)],
        ),
        (
            "5^7 x^2 (x - 1/25)(x - 1/125)",
            vec![rat(0, 1), rat(0, 1), rat(25, 1), rat(-3750, 1), rat(78125, 1)],
            vec![(2, 2), (3, 4), (4, 7)],
            2,
            vec![(-2, 1), (-3, 1)],
        ),
        (
            "(5^5/4^4) x^4 (x - 1)",
            vec![
                rat(0, 1),
                rat(0, 1),
                rat(0, 1),
                rat(0, 1),
                rat(-3125, 256),
                rat(3125, 256),
            ],
            vec![(4, 5), (5, 5)],
            4,
            vec![(0, 1)],
        ),
    ];
    for (label, coeffs, vertices, zero_mult, entries) in cases {
        let f = Poly::new(coeffs);
        let polygon = newton_polygon(&f, five).map_err(|e| format!("{label}: {e}"))?;
        if polygon.vertices() != vertices {
            return Err(format!("{label}: vertices {:?}", polygon.vertices()));
        }
        let profile = valuation_profile(&f, five).map_err(|e| format!("{label}: {e}"))?;
        let expected = ValuationProfile {
            zero_multiplicity: zero_mult,
            entries: entries
                .iter()
                .map(|&(v, m)| ProfileEntry {
                    valuation: Rational::from(v),
                    multiplicity: m,
                })
                .collect(),
        };
        if profile != expected {
            return Err(format!("{label}: profile {profile:?}"));
        }
    }
    Ok(())
}

/// Re-derive the full list of degree <= 2 Belyi polynomials by case
/// analysis and compare with the library enumeration. Degree 1 maps are
/// bijections, so the endpoint values determine them; degree 2 maps are
/// e_c + k (x - c)^2 with the critical value e_c and both endpoint
/// values in {0, 1}.
fn low_degree_oracle() -> Result<(), String> {
    let mut derived: Vec<Poly> = Vec::new();
    for e0 in 0..=1i64 {
        for e1 in 0..=1i64 {
            if e0 != e1 {
                derived.push(Poly::new(vec![
                    Rational::from(e0),
                    Rational::from(e1 - e0),
                ]));
            }
        }
    }
    for ec in 0..=1i64 {
        for e0 in 0..=1i64 {
            for e1 in 0..=1i64 {
                // k c^2 = e0 - ec and k (1 - c)^2 = e1 - ec.
                let (d0, d1) = (e0 - ec, e1 - ec);
                let solution = match (d0, d1) {
                    (0, 0) => None,
                    (0, k) => Some((Rational::from(k), Rational::zero())),
                    (k, 0) => Some((Rational::from(k), Rational::one())),
                    // c^2 = (1 - c)^2 forces c = 1/2; opposite signs
                    // would need c^2 / (1 - c)^2 = -1.
                    (a, b) if a == b => Some((Rational::from(4 * a), Rational::of(1, 2))),
                    _ => None,
                };
                if let Some((k, c)) = solution {
                    let shifted = Poly::new(vec![-&c, Rational::one()]);
                    let b = &Poly::constant(Rational::from(ec)) + &(&shifted * &shifted).scale(&k);
                    derived.push(b);
                }
            }
        }
    }

    let enumerated = enumerate_low_degree();
    if derived.len() != 8 || enumerated.len() != 8 {
        return Err(format!(
            "derived {} candidates, enumeration has {}",
            derived.len(),
            enumerated.len()
        ));
    }
    for b in &derived {
        crate::belyi::certify(b).map_err(|e| format!("derived {b}: {e}"))?;
        if !enumerated.contains(b) {
            return Err(format!("derived {b} missing from the enumeration"));
        }
    }
    for b in &enumerated {
        if !derived.contains(b) {
            return Err(format!("enumerated {b} not reachable by case analysis"));
        }
    }
    Ok(())
}

fn height_examples() -> Result<(), String> {
    let four = height(&Rational::from(4)).map_err(|e| e.to_string())?;
    if !(four.lower == 2 && four.upper == 3 && four.exact) {
        return Err(format!(
            "height(4): bounds [{}, {}], exact {}",
            four.lower, four.upper, four.exact
        ));
    }
    if four.witness.subject() != &curated_witnesses()[0] {
        return Err("height(4): unexpected witness".to_string());
    }
    match &four.justification {
        Justification::LowDegreeExclusion { excluded } => {
            if excluded.len() != 8 {
                return Err(format!("height(4): {} exclusions", excluded.len()));
            }
            if excluded
                .iter()
                .any(|e| e.value.is_zero() || e.value.is_one())
            {
                return Err("height(4): an excluded candidate actually hits {0, 1}".to_string());
            }
        }
        other => return Err(format!("height(4): justification {other:?}")),
    }

    for endpoint in [Rational::zero(), Rational::one()] {
        let h = height(&endpoint).map_err(|e| e.to_string())?;
        if !(h.lower == 1 && h.upper == 1 && h.exact && h.witness.subject() == &Poly::x()) {
            return Err(format!("height({endpoint}) is not the identity case"));
        }
    }

    let six = height(&Rational::from(6)).map_err(|e| e.to_string())?;
    if !(six.lower == 3 && six.upper == 6 && !six.exact) {
        return Err(format!(
            "height(6): bounds [{}, {}], exact {}",
            six.lower, six.upper, six.exact
        ));
    }
    if six.justification != Justification::Inconclusive {
        return Err("height(6): expected open bounds".to_string());
    }
    Ok(())
}
