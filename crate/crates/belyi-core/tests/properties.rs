//! Randomized algebraic laws for the exact-arithmetic substrate: ring and
//! valuation identities, hull geometry, and serialization round trips.

use belyi_core::{
    belyi_ab, belyi_for_rational, certify, coeff_points, divides, expected_degree,
    newton_polygon, valuation, valuation_profile, Poly, Prime, Rational, Valuation,
};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-200i64..=200, 1i64..=40).prop_map(|(n, d)| Rational::of(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |q| !q.is_zero())
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 0..=max_len).prop_map(Poly::new)
}

fn nonzero_poly(max_len: usize) -> impl Strategy<Value = Poly> {
    poly(max_len).prop_filter("nonzero", |f| !f.is_zero())
}

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]).prop_map(|p| Prime::new(p).unwrap())
}

fn vadd(a: Valuation, b: Valuation) -> Valuation {
    match (a.finite(), b.finite()) {
        (Some(x), Some(y)) => Valuation::Finite(x + y),
        _ => Valuation::Infinity,
    }
}

proptest! {
    #[test]
    fn rational_strings_round_trip(q in rational()) {
        let back: Rational = q.to_string().parse().unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn rational_json_is_a_quoted_string(q in rational()) {
        let json = serde_json::to_string(&q).unwrap();
        prop_assert!(json.starts_with('"') && json.ends_with('"'));
        let back: Rational = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn valuation_is_additive(a in nonzero_rational(), b in nonzero_rational(), p in prime()) {
        let prod = valuation(&(&a * &b), p);
        prop_assert_eq!(prod, vadd(valuation(&a, p), valuation(&b, p)));
    }

    #[test]
    fn valuation_is_ultrametric(a in rational(), b in rational(), p in prime()) {
        let va = valuation(&a, p);
        let vb = valuation(&b, p);
        let vsum = valuation(&(&a + &b), p);
        prop_assert!(vsum >= va.min(vb));
        if va != vb {
            prop_assert_eq!(vsum, va.min(vb));
        }
    }

    #[test]
    fn poly_json_round_trips(f in poly(8)) {
        let json = serde_json::to_string(&f).unwrap();
        let back: Poly = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn divrem_reconstructs_the_dividend(f in poly(8), g in nonzero_poly(5)) {
        let (q, r) = f.divrem(&g).unwrap();
        prop_assert_eq!(&(&q * &g) + &r, f);
        if !r.is_zero() {
            prop_assert!(r.degree().unwrap() < g.degree().unwrap());
        }
    }

    #[test]
    fn divides_detects_exact_products(f in poly(6), g in nonzero_poly(4)) {
        prop_assert!(divides(&g, &(&f * &g)).unwrap());
    }

    #[test]
    fn compose_has_x_as_identity(f in poly(8)) {
        let x = Poly::x();
        prop_assert_eq!(f.compose(&x), f.clone());
        prop_assert_eq!(x.compose(&f), f);
    }

    #[test]
    fn compose_associates(f in poly(3), g in poly(3), h in poly(3)) {
        prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
    }

    #[test]
    fn derivative_obeys_the_product_rule(f in poly(6), g in poly(6)) {
        let lhs = (&f * &g).derivative();
        let rhs = &(&f.derivative() * &g) + &(&f * &g.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_ring_map(f in poly(6), g in poly(6), x in rational()) {
        prop_assert_eq!((&f + &g).evaluate(&x), &f.evaluate(&x) + &g.evaluate(&x));
        prop_assert_eq!((&f * &g).evaluate(&x), &f.evaluate(&x) * &g.evaluate(&x));
    }

    #[test]
    fn reduction_mod_p_is_a_ring_map(f in poly(6), g in poly(6), p in prime()) {
        let reduced = (
            f.reduce_mod_p(p),
            g.reduce_mod_p(p),
            (&f + &g).reduce_mod_p(p),
            (&f * &g).reduce_mod_p(p),
        );
        if let (Ok(fp), Ok(gp), Ok(sum), Ok(prod)) = reduced {
            prop_assert_eq!(fp.add(&gp), sum);
            prop_assert_eq!(fp.mul(&gp), prod);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Every finite coefficient point lies on or above the supporting line of
    // every hull edge, the vertices are themselves coefficient points, and
    // the slopes strictly increase left to right.
    #[test]
    fn newton_polygon_is_the_lower_hull(f in nonzero_poly(9), p in prime()) {
        let points = coeff_points(&f, p).unwrap();
        let ng = newton_polygon(&f, p).unwrap();
        for v in ng.vertices() {
            prop_assert!(points.points().contains(v));
        }
        for edge in ng.vertices().windows(2) {
            let (x0, y0) = edge[0];
            let (x1, y1) = edge[1];
            for &(px, py) in points.points() {
                let cross = i128::from(x1 - x0) * i128::from(py - y0)
                    - i128::from(y1 - y0) * i128::from(px - x0);
                prop_assert!(cross >= 0);
            }
        }
        for pair in ng.segments().windows(2) {
            prop_assert!(pair[0].slope < pair[1].slope);
        }
    }

    // Root bookkeeping: the zero roots plus the profile multiplicities
    // account for the full degree.
    #[test]
    fn valuation_profile_counts_every_root(f in nonzero_poly(9), p in prime()) {
        let profile = valuation_profile(&f, p).unwrap();
        let counted: usize = profile.entries.iter().map(|e| e.multiplicity).sum();
        prop_assert_eq!(profile.zero_multiplicity + counted, f.degree().unwrap());
    }

    #[test]
    fn certificates_round_trip_through_json(a in 1u64..=5, b in 1u64..=5) {
        prop_assume!(a <= b);
        let cert = certify(&belyi_ab(a, b).unwrap()).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let back: belyi_core::BelyiCertificate = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, cert);
    }

    // Degree of the constructed witness in terms of the reduced numerator
    // and denominator of the target: 1 at the endpoints, the denominator
    // inside (0, 1), the numerator above 1, their difference below 0.
    #[test]
    fn construction_hits_the_target(n in -12i64..=12, d in 1i64..=10) {
        let lambda = Rational::of(n, d);
        let trace = belyi_for_rational(&lambda);
        let witness = trace.result().subject();
        let image = witness.evaluate(&lambda);
        prop_assert!(image.is_zero() || image.is_one());
        prop_assert_eq!(Some(&image), trace.image_of_lambda());
        prop_assert_eq!(trace.replay(), witness.clone());

        let num = lambda.numer().to_i64().unwrap();
        let den = lambda.denom().to_i64().unwrap();
        let closed_form = if num == 0 || lambda.is_one() {
            1
        } else if num > 0 && num < den {
            den
        } else if num > den {
            num
        } else {
            den - num
        };
        prop_assert_eq!(witness.degree().unwrap(), closed_form as usize);
        prop_assert_eq!(expected_degree(&trace), closed_form as usize);
        let recertified = certify(witness).unwrap();
        prop_assert_eq!(recertified.subject(), witness);
    }
}
