//! Acceptance gate: seven end-to-end criteria, each printed as one
//! pass/fail line with its runtime. Run with `--nocapture` to see the
//! lines on success. Every criterion carries a wall-clock budget; the
//! expensive shared input (the default Belyi corpus) is built once.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use belyi_core::height::Justification;
use belyi_core::{
    belyi_ab, belyi_corpus, belyi_for_rational, check_containment, check_shift_lemma,
    divides_square, expected_degree, height, is_single_segment, lower_bound, minus_one_relation,
    newton_polygon, random_poly_corpus, split_poly_corpus, valuation, valuation_profile,
    BelyiCertificate, CorpusSpec, Poly, Prime, ProfileEntry, Rational, ValuationProfile,
};

struct Outcome {
    label: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn run(
    label: &'static str,
    budget: Duration,
    body: impl FnOnce() -> Result<String, String>,
) -> Outcome {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let (passed, detail) = match result {
        Ok(detail) if elapsed <= budget => (true, detail),
        Ok(detail) => (
            false,
            format!("{detail}; ran {elapsed:.2?}, over the {budget:?} budget"),
        ),
        Err(e) => (false, e),
    };
    Outcome {
        label,
        passed,
        detail,
        elapsed,
    }
}

fn default_corpus() -> &'static [BelyiCertificate] {
    static CORPUS: OnceLock<Vec<BelyiCertificate>> = OnceLock::new();
    CORPUS.get_or_init(|| belyi_corpus(&CorpusSpec::default()))
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::of(n, d)
}

#[test]
fn acceptance() {
    let outcomes = [
        run("1 height of 4", Duration::from_secs(1), height_of_four),
        run("2 sharpness at primes", Duration::from_secs(1), sharpness),
        run("3 worked polygons", Duration::from_secs(1), worked_polygons),
        run("4 theorem suites", Duration::from_secs(60), theorem_suites),
        run("5 lemma suites", Duration::from_secs(60), lemma_suites),
        run("6 root-support audit", Duration::from_secs(30), root_support_audit),
        run("7 construction sweep", Duration::from_secs(30), construction_sweep),
    ];
    let mut failed = Vec::new();
    for o in &outcomes {
        println!(
            "acceptance {}: {} — {} [{:.2?}]",
            o.label,
            if o.passed { "pass" } else { "FAIL" },
            o.detail,
            o.elapsed
        );
        if !o.passed {
            failed.push(format!("{}: {}", o.label, o.detail));
        }
    }
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}

/// The least degree sending 4 into {0, 1} is exactly 3: the prime
/// support of 4 forces at least 2, all eight degree <= 2 Belyi
/// polynomials miss, and -1/4 (x - 1)^2 (x - 4) certifies at degree 3.
fn height_of_four() -> Result<String, String> {
    let bounds = height(&rat(4, 1)).map_err(|e| e.to_string())?;
    if !(bounds.lower == 2 && bounds.upper == 3 && bounds.exact) {
        return Err(format!(
            "bounds [{}, {}], exact {}",
            bounds.lower, bounds.upper, bounds.exact
        ));
    }
    let cubic = Poly::new(vec![rat(1, 1), rat(-9, 4), rat(3, 2), rat(-1, 4)]);
    if bounds.witness.subject() != &cubic {
        return Err(format!("witness {}", bounds.witness.subject()));
    }
    bounds.witness.verify().map_err(|e| e.to_string())?;
    if !bounds.witness.subject().evaluate(&rat(4, 1)).is_zero() {
        return Err("witness does not send 4 to 0".into());
    }
    match &bounds.justification {
        Justification::LowDegreeExclusion { excluded } if excluded.len() == 8 => {
            if let Some(hit) = excluded
                .iter()
                .find(|e| e.value.is_zero() || e.value.is_one())
            {
                return Err(format!("candidate {} hits {{0,1}} at 4", hit.candidate));
            }
        }
        other => return Err(format!("justification {other:?}")),
    }
    Ok("H(4) = 3 exact; witness certifies; 8 smaller candidates excluded".into())
}

/// height(p) and height(1/p) are exactly p with the canonical witnesses
/// B_(1,p)(x/p) and B_(1,p), for p in {2, 3, 5, 7, 11, 13}.
fn sharpness() -> Result<String, String> {
    for p in [2u64, 3, 5, 7, 11, 13] {
        let generator = belyi_ab(1, p).map_err(|e| e.to_string())?;
        let scaled_generator =
            generator.compose(&Poly::linear(&rat(1, p as i64), &Rational::zero()));
        for (lambda, expected_witness) in
            [(rat(p as i64, 1), &scaled_generator), (rat(1, p as i64), &generator)]
        {
            let bounds = height(&lambda).map_err(|e| e.to_string())?;
            if !(bounds.exact && bounds.lower == p && bounds.upper == p) {
                return Err(format!(
                    "height({lambda}): [{}, {}], exact {}",
                    bounds.lower, bounds.upper, bounds.exact
                ));
            }
            if bounds.witness.subject() != expected_witness {
                return Err(format!("height({lambda}): witness {}", bounds.witness.subject()));
            }
            bounds
                .witness
                .verify()
                .map_err(|e| format!("height({lambda}): {e}"))?;
        }
    }
    Ok("height(p) and height(1/p) exact with canonical witnesses, p up to 13".into())
}

/// Newton polygons and valuation profiles of the three worked
/// polynomials match their factored forms at p = 5.
fn worked_polygons() -> Result<String, String> {
    let five = Prime::new(5).unwrap();
    let cases: [(&str, Vec<Rational>, Vec<(i64, i64)>, usize, Vec<(i64, usize)>); 3] = [
        (
            "625 x (x - 1/5)^2 (x - 5)",
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
            "(3125/256) x^4 (x - 1)",
            vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(-3125, 256), rat(3125, 256)],
            vec![(4, 5), (5, 5)],
            4,
            vec![(0, 1)],
        ),
    ];
    for (label, coeffs, vertices, zero_multiplicity, entries) in cases {
        let f = Poly::new(coeffs);
        let polygon = newton_polygon(&f, five).map_err(|e| format!("{label}: {e}"))?;
        if polygon.vertices() != vertices {
            return Err(format!("{label}: vertices {:?}", polygon.vertices()));
        }
        let expected = ValuationProfile {
            zero_multiplicity,
            entries: entries
                .into_iter()
                .map(|(v, m)| ProfileEntry {
                    valuation: Rational::from(v),
                    multiplicity: m,
                })
                .collect(),
        };
        let profile = valuation_profile(&f, five).map_err(|e| format!("{label}: {e}"))?;
        if profile != expected {
            return Err(format!("{label}: profile {profile:?}"));
        }
    }
    Ok("three factored examples reproduce their polygons and profiles".into())
}

/// Over the default corpus, for every B with B(0) = 0 and every prime
/// deg B < p <= 31: the polygon of B lies on the polygon of B - 1, and
/// the polygon of B - 1 is a single segment.
fn theorem_suites() -> Result<String, String> {
    let primes = CorpusSpec::default().primes();
    let mut pairs = 0u64;
    for cert in default_corpus() {
        let b = cert.subject();
        if !b.coeff(0).is_zero() {
            continue;
        }
        for &p in primes.iter().filter(|p| (cert.degree() as u64) < p.get()) {
            pairs += 1;
            match check_containment(b, p) {
                Ok(true) => {}
                Ok(false) => {
                    return Err(format!("containment fails for degree {} at p = {}", cert.degree(), p.get()))
                }
                Err(e) => return Err(format!("degree {} at p = {}: {e}", cert.degree(), p.get())),
            }
            let shifted = newton_polygon(&(b - &Poly::one()), p)
                .map_err(|e| format!("degree {} at p = {}: {e}", cert.degree(), p.get()))?;
            if !is_single_segment(&shifted) {
                return Err(format!(
                    "B - 1 has {} segments for degree {} at p = {}",
                    shifted.segments().len(),
                    cert.degree(),
                    p.get()
                ));
            }
        }
    }
    if pairs == 0 {
        return Err("no (B, p) pairs satisfied the hypotheses".into());
    }
    Ok(format!(
        "containment and single-segment over {pairs} corpus pairs ({} elements)",
        default_corpus().len()
    ))
}

/// The three polygon relations over seeded inputs: the minus-one shape
/// and slope laws plus the derivative shift on 500 random polynomials,
/// the profile oracle and the rescale law on 200 split polynomials, and
/// the exhaustive monomial criterion at degree <= 5.
fn lemma_suites() -> Result<String, String> {
    let spec = CorpusSpec::default();
    let primes = spec.primes();
    let polys = random_poly_corpus(spec.seed, 500, 8);
    let mut cases = 0u64;

    for f in &polys {
        for &p in &primes {
            cases += 1;
            let report = minus_one_relation(f, p).map_err(|e| format!("f = {f}, p = {}: {e}", p.get()))?;
            if report.j.is_none() || !report.shape_ok || !report.slope_order_ok {
                return Err(format!("minus-one relation fails for f = {f} at p = {}", p.get()));
            }
            if (f.degree().unwrap() as u64) < p.get() {
                cases += 1;
                if !check_shift_lemma(f, p).map_err(|e| e.to_string())? {
                    return Err(format!("derivative shift fails for f = {f} at p = {}", p.get()));
                }
            }
        }
    }

    let splits = split_poly_corpus(&spec);
    if splits.len() != 200 {
        return Err(format!("expected 200 split polynomials, got {}", splits.len()));
    }
    for sp in &splits {
        for &p in &primes {
            cases += 1;
            // Profile oracle: polygon profile = root valuation multiset.
            let mut vals: Vec<i64> = sp
                .roots
                .iter()
                .map(|r| valuation(r, p).finite().expect("nonzero root"))
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
            let got = valuation_profile(&sp.poly, p).map_err(|e| e.to_string())?;
            if got != expected {
                return Err(format!(
                    "profile oracle fails for {} at p = {}: {got:?} vs {expected:?}",
                    sp.poly,
                    p.get()
                ));
            }
            // Rescale law: after x -> gamma x (gamma a root of minimal
            // valuation) and dividing by the leading part, the top
            // segment lies on the x-axis.
            if sp.roots.is_empty() {
                continue;
            }
            cases += 1;
            let m = sp
                .roots
                .iter()
                .filter_map(|r| valuation(r, p).finite())
                .min()
                .unwrap();
            let gamma = sp
                .roots
                .iter()
                .find(|r| valuation(r, p).finite() == Some(m))
                .unwrap();
            let n = sp.poly.degree().unwrap();
            let unit = (&sp.leading * &gamma.pow(n as i64)).recip();
            let rescaled = sp
                .poly
                .compose(&Poly::monomial(gamma.clone(), 1))
                .scale(&unit);
            let polygon = newton_polygon(&rescaled, p).map_err(|e| e.to_string())?;
            let flat_top = polygon.segments().last().is_some_and(|s| s.slope.is_zero())
                && *polygon.vertices().last().unwrap() == (n as i64, 0);
            if !flat_top {
                return Err(format!(
                    "rescale law fails for {} at p = {}",
                    sp.poly,
                    p.get()
                ));
            }
        }
    }

    // Monomial criterion, exhaustive at degree <= 5 over the fixed pool.
    let pool = [rat(0, 1), rat(-2, 1), rat(-1, 1), rat(1, 1), rat(2, 1), rat(1, 2)];
    let mut monomials = 0u64;
    for code in 0..pool.len().pow(5) {
        let mut c = code;
        let mut coeffs = vec![Rational::zero()];
        for _ in 0..5 {
            coeffs.push(pool[c % pool.len()].clone());
            c /= pool.len();
        }
        let f = Poly::new(coeffs);
        if f.is_zero() {
            continue;
        }
        cases += 1;
        let divides = divides_square(&f).map_err(|e| format!("f = {f}: {e}"))?;
        if divides != f.is_monomial() {
            return Err(format!("monomial criterion fails for f = {f}"));
        }
        if divides {
            monomials += 1;
        }
    }
    // c x^k for k = 1..5 and the five nonzero pool values.
    if monomials != 25 {
        return Err(format!("found {monomials} monomials, expected 25"));
    }

    Ok(format!("minus-one, shift, profile, rescale, and monomial laws over {cases} cases"))
}

/// Every rational root of a corpus element B or of B - 1 has prime
/// support bounded by deg B.
fn root_support_audit() -> Result<String, String> {
    let mut roots_checked = 0u64;
    for cert in default_corpus() {
        let b = cert.subject();
        let degree = cert.degree() as u64;
        for (label, g) in [("B", b.clone()), ("B - 1", b - &Poly::one())] {
            let roots = g
                .rational_roots()
                .map_err(|e| format!("roots of {label} for degree {degree}: {e}"))?;
            for r in roots {
                roots_checked += 1;
                let bound = lower_bound(&r).map_err(|e| e.to_string())?;
                if bound > degree {
                    return Err(format!(
                        "root {r} of {label} has support {bound} above degree {degree}"
                    ));
                }
            }
        }
    }
    Ok(format!(
        "{roots_checked} rational roots across {} corpus elements stay within degree",
        default_corpus().len()
    ))
}

/// belyi_for_rational over every lambda = a/b with |a|, b <= 25:
/// certificates verify, lambda lands in {0, 1}, traces replay.
fn construction_sweep() -> Result<String, String> {
    let mut seen = std::collections::HashSet::new();
    let mut count = 0u64;
    for b in 1..=25i64 {
        for a in -25..=25i64 {
            let lambda = rat(a, b);
            if !seen.insert(lambda.clone()) {
                continue;
            }
            count += 1;
            let ctx = |what: &str| format!("lambda = {lambda}: {what}");
            let trace = belyi_for_rational(&lambda);
            let result = trace.result();
            result.verify().map_err(|e| ctx(&e.to_string()))?;
            let image = result.subject().evaluate(&lambda);
            if !(image.is_zero() || image.is_one()) {
                return Err(ctx(&format!("image {image}")));
            }
            if trace.image_of_lambda() != Some(&image) {
                return Err(ctx("recorded image disagrees"));
            }
            if &trace.replay() != result.subject() {
                return Err(ctx("replay does not reproduce the result"));
            }
            if expected_degree(&trace) != result.degree() {
                return Err(ctx("step degrees do not multiply to the result degree"));
            }
        }
    }
    Ok(format!("{count} rationals constructed, certified, and replayed"))
}
