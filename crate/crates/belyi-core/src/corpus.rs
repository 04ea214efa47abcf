//! Deterministic test corpora: a composition-closed family of certified
//! Belyi polynomials, and seeded split polynomials with known rational
//! roots for checking the polygon machinery against ground truth.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::belyi::{belyi_ab, certify, chebyshev_belyi, compose_belyi, BelyiCertificate};
use crate::exactnum::{primes_up_to, Prime, Rational};
use crate::exec::ExecMode;
use crate::polyring::Poly;

/// Bounds and seed for corpus generation. Identical specs give
/// identical corpora.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    /// B_{a,b} generators range over 1 <= a <= b <= max_b.
    pub max_b: u64,
    /// Compositions of generators up to this chain length.
    pub max_chain: usize,
    /// Chebyshev Belyi generators range over 1 <= n <= chebyshev_max_n.
    pub chebyshev_max_n: u32,
    /// Seed for the split polynomial sampler.
    pub seed: u64,
    /// Primes used by polygon checks and split roots stay at or below
    /// this bound.
    pub prime_ceiling: u64,
    /// Number of split polynomials to sample.
    pub split_count: usize,
    /// Degree bound for sampled split polynomials; 0 means none at all.
    pub split_max_degree: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            max_b: 4,
            max_chain: 2,
            chebyshev_max_n: 10,
            seed: 1729,
            prime_ceiling: 31,
            split_count: 200,
            split_max_degree: 8,
        }
    }
}

impl CorpusSpec {
    pub fn primes(&self) -> Vec<Prime> {
        primes_up_to(self.prime_ceiling)
    }
}

/// Generators: the identity, every B_{a,b} within the bound, and the
/// Chebyshev family. All certified.
fn generators(spec: &CorpusSpec) -> Vec<BelyiCertificate> {
    let mut gens = vec![certify(&Poly::x()).expect("x is Belyi")];
    for b in 1..=spec.max_b {
        for a in 1..=b {
            let f = belyi_ab(a, b).expect("in-range parameters");
            gens.push(certify(&f).expect("B_{a,b} is Belyi"));
        }
    }
    for n in 1..=spec.chebyshev_max_n {
        let f = chebyshev_belyi(n).expect("n >= 1");
        gens.push(certify(&f).expect("Chebyshev Belyi polynomials certify"));
    }
    gens
}

/// Every composition of generators with chain length up to max_chain,
/// deduplicated by coefficients, in deterministic order. The result is
/// closed under the recorded compositions and every element carries its
/// certificate.
pub fn belyi_corpus(spec: &CorpusSpec) -> Vec<BelyiCertificate> {
    belyi_corpus_with(spec, ExecMode::default())
}

pub fn belyi_corpus_with(spec: &CorpusSpec, mode: ExecMode) -> Vec<BelyiCertificate> {
    let gens = generators(spec);
    let mut seen: HashSet<Poly> = HashSet::new();
    let mut out: Vec<BelyiCertificate> = Vec::new();
    let mut frontier: Vec<BelyiCertificate> = Vec::new();
    for g in &gens {
        if seen.insert(g.subject().clone()) {
            out.push(g.clone());
            frontier.push(g.clone());
        }
    }
    for _ in 1..spec.max_chain {
        let pairs: Vec<(BelyiCertificate, BelyiCertificate)> = frontier
            .iter()
            .flat_map(|f| gens.iter().map(move |g| (f.clone(), g.clone())))
            .collect();
        let composed = mode.map(&pairs, |(f, g)| compose_belyi(f, g));
        frontier = Vec::new();
        for c in composed {
            if seen.insert(c.subject().clone()) {
                out.push(c.clone());
                frontier.push(c);
            }
        }
    }
    out
}

/// Seeded polynomials with f(0) = 0, nonzero, degree at most max_degree.
/// Coefficients come from a pool with varied valuations at small primes,
/// weighted toward zero so sparse shapes appear.
pub fn random_poly_corpus(seed: u64, count: usize, max_degree: usize) -> Vec<Poly> {
    assert!(max_degree >= 1, "need room for a nonzero polynomial");
    let pool: Vec<Rational> = [
        (0, 1), (0, 1), (0, 1),
        (1, 1), (-1, 1), (2, 1), (-2, 1), (3, 1), (-3, 1), (1, 2), (-1, 2),
        (4, 1), (-4, 1), (9, 1), (-9, 4), (8, 1), (27, 8), (1, 3), (-2, 9),
        (5, 1), (25, 1), (-1, 5), (125, 4), (7, 2), (-49, 6), (11, 1), (-1, 11),
        (13, 1), (6, 1), (-12, 5), (243, 16), (1, 7),
    ]
    .iter()
    .map(|&(n, d)| Rational::of(n, d))
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x517c_c1b7_2722_0a95));
    (0..count)
        .map(|_| loop {
            let degree = rng.gen_range(1..=max_degree);
            let mut coeffs = vec![Rational::zero()];
            coeffs.extend((0..degree).map(|_| pool[rng.gen_range(0..pool.len())].clone()));
            let f = Poly::new(coeffs);
            if !f.is_zero() {
                break f;
            }
        })
        .collect()
}

/// A polynomial split over Q: leading * x^zero_multiplicity * prod (x - r_i)
/// with every r_i rational and nonzero. The factors are the ground truth
/// the polygon profile is checked against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPoly {
    pub poly: Poly,
    pub leading: Rational,
    pub zero_multiplicity: usize,
    pub roots: Vec<Rational>,
}

/// Multiply out the given factorization. Panics on zero leading
/// coefficient or a zero root.
pub fn split_poly(leading: Rational, zero_multiplicity: usize, roots: Vec<Rational>) -> SplitPoly {
    assert!(!leading.is_zero(), "leading coefficient must be nonzero");
    assert!(roots.iter().all(|r| !r.is_zero()), "roots must be nonzero");
    let mut poly = Poly::monomial(leading.clone(), zero_multiplicity);
    for r in &roots {
        poly = &poly * &Poly::linear(&Rational::one(), r);
    }
    SplitPoly { poly, leading, zero_multiplicity, roots }
}

/// Seeded sample of split polynomials. Roots are +-p^i/q^j over primes
/// up to the ceiling, with numerator and denominator capped at 125.
pub fn split_poly_corpus(spec: &CorpusSpec) -> Vec<SplitPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let primes: Vec<u64> = spec.primes().iter().map(|p| p.get()).collect();
    assert!(!primes.is_empty(), "prime ceiling below 2");
    if spec.split_max_degree == 0 {
        return Vec::new();
    }
    let sample_prime_power = |rng: &mut ChaCha8Rng| -> Rational {
        let p = primes[rng.gen_range(0..primes.len())];
        let max_e = (1..).take_while(|&e| p.pow(e) <= 125).last().unwrap_or(0);
        let e = rng.gen_range(0..=max_e);
        Rational::from(p.pow(e) as i64)
    };
    (0..spec.split_count)
        .map(|_| {
            let degree = rng.gen_range(1..=spec.split_max_degree);
            let zero_multiplicity = rng.gen_range(0..=degree);
            let roots: Vec<Rational> = (0..degree - zero_multiplicity)
                .map(|_| {
                    let numer = sample_prime_power(&mut rng);
                    let denom = sample_prime_power(&mut rng);
                    let sign = if rng.gen_bool(0.5) { Rational::one() } else { -Rational::one() };
                    sign * numer / denom
                })
                .collect();
            let leading = {
                let numer = sample_prime_power(&mut rng);
                let denom = sample_prime_power(&mut rng);
                let sign = if rng.gen_bool(0.5) { Rational::one() } else { -Rational::one() };
                sign * numer / denom
            };
            split_poly(leading, zero_multiplicity, roots)
        })
        .collect()
}
