//! Constructions that produce a certified Belyi polynomial together with
//! a replayable trace: one for a single rational value, one that repairs
//! a polynomial with rational critical points by composing away its
//! critical values.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::belyi::{belyi_ab, certify, precompose_linear, BelyiCertificate};
use crate::exactnum::Rational;
use crate::polyring::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("constant polynomials are excluded")]
    ConstantInput,
    #[error("the provided critical points do not split the derivative")]
    CriticalPointsMismatch,
}

/// One trace step: apply x -> gamma x - alpha, then B_{a,b}. Steps that
/// only need the linear part carry the identity B_{1,1} = x; steps that
/// only need B_{a,b} carry the identity map (gamma, alpha) = (1, 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub gamma: Rational,
    pub alpha: Rational,
    pub a: u64,
    pub b: u64,
}

impl TraceStep {
    /// The composite map y -> B_{a,b}(gamma y - alpha) this step applies.
    fn apply(&self, current: &Poly) -> Poly {
        let linear = Poly::linear(&self.gamma, &self.alpha).compose(current);
        belyi_ab(self.a, self.b)
            .expect("trace steps store valid parameters")
            .compose(&linear)
    }
}

/// A construction record: starting polynomial, the steps applied to it,
/// and the certified result. When the construction targeted a rational
/// lambda, the trace also records lambda and its image under the result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TraceRepr", into = "TraceRepr")]
pub struct ConstructionTrace {
    base: Poly,
    steps: Vec<TraceStep>,
    lambda: Option<Rational>,
    image_of_lambda: Option<Rational>,
    result: BelyiCertificate,
}

#[derive(Serialize, Deserialize)]
struct TraceRepr {
    base: Poly,
    steps: Vec<TraceStep>,
    lambda: Option<Rational>,
    image_of_lambda: Option<Rational>,
    result: BelyiCertificate,
}

impl TryFrom<TraceRepr> for ConstructionTrace {
    type Error = String;
    fn try_from(r: TraceRepr) -> Result<Self, String> {
        let trace = ConstructionTrace {
            base: r.base,
            steps: r.steps,
            lambda: r.lambda,
            image_of_lambda: r.image_of_lambda,
            result: r.result,
        };
        if &trace.replay() != trace.result.subject() {
            return Err("trace replay does not reproduce the recorded result".into());
        }
        if let (Some(lambda), Some(image)) = (&trace.lambda, &trace.image_of_lambda) {
            if &trace.result.subject().evaluate(lambda) != image {
                return Err("recorded image of lambda does not match the result".into());
            }
        }
        Ok(trace)
    }
}

impl From<ConstructionTrace> for TraceRepr {
    fn from(t: ConstructionTrace) -> TraceRepr {
        TraceRepr {
            base: t.base,
            steps: t.steps,
            lambda: t.lambda,
            image_of_lambda: t.image_of_lambda,
            result: t.result,
        }
    }
}

impl ConstructionTrace {
    pub fn base(&self) -> &Poly {
        &self.base
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn lambda(&self) -> Option<&Rational> {
        self.lambda.as_ref()
    }

    pub fn image_of_lambda(&self) -> Option<&Rational> {
        self.image_of_lambda.as_ref()
    }

    pub fn result(&self) -> &BelyiCertificate {
        &self.result
    }

    /// Recompute the result by folding the steps over the base; equality
    /// with the recorded subject is the replay check.
    pub fn replay(&self) -> Poly {
        self.steps
            .iter()
            .fold(self.base.clone(), |acc, step| step.apply(&acc))
    }
}

fn finish_trace(base: Poly, steps: Vec<TraceStep>, lambda: Rational, result: BelyiCertificate) -> ConstructionTrace {
    let image = result.subject().evaluate(&lambda);
    debug_assert!(image.is_zero() || image.is_one());
    ConstructionTrace {
        base,
        steps,
        lambda: Some(lambda),
        image_of_lambda: Some(image),
        result,
    }
}

fn ab_of(q: &Rational) -> (u64, u64) {
    let a = q.numer().to_u64().expect("small numerator");
    let b = q.denom().to_u64().expect("small denominator");
    (a, b)
}

/// A certified Belyi polynomial sending lambda into {0, 1}, of degree
/// max(|numerator|, denominator) of the off-interval reflection:
/// lambda in {0, 1} gives x; lambda = a/b in (0, 1) gives B_{a,b};
/// lambda > 1 composes B_{a,b} with x/lambda for 1/lambda = a/b;
/// lambda < 0 composes with (x - lambda)/(1 - lambda).
pub fn belyi_for_rational(lambda: &Rational) -> ConstructionTrace {
    let identity = || certify(&Poly::x()).expect("x is Belyi");
    if lambda.is_zero() || lambda.is_one() {
        return finish_trace(Poly::x(), vec![], lambda.clone(), identity());
    }
    let one = Rational::one();
    let (gamma, alpha, interior) = if lambda > &Rational::zero() && lambda < &one {
        (Rational::one(), Rational::zero(), lambda.clone())
    } else if lambda > &one {
        // x -> x/lambda sends lambda to 1 and fixes 0.
        (lambda.recip(), Rational::zero(), lambda.recip())
    } else {
        // x -> (x - lambda)/(1 - lambda) sends lambda to 0 and 1 to 1.
        let stretch = (&one - lambda).recip();
        (stretch.clone(), lambda * &stretch, -lambda * &stretch)
    };
    let (a, b) = ab_of(&interior);
    let ab = certify(&belyi_ab(a, b).expect("interior value gives valid parameters"))
        .expect("B_{a,b} is Belyi");
    let result = precompose_linear(&ab, &gamma, &alpha)
        .expect("the linear map sends both endpoints to Belyi values");
    finish_trace(Poly::x(), vec![TraceStep { gamma, alpha, a, b }], lambda.clone(), result)
}

/// Turn g into a Belyi polynomial by composition, given the exact
/// rational root multiset of g'. Tracked values: the images of 0 and 1
/// plus all critical values. One affine map sends their span into
/// [0, 1]; each round then picks the interior value a/b with the
/// smallest denominator (then numerator) and applies B_{a,b}, which
/// absorbs it into 1 without creating new values. The tracked set is
/// [0, 1]-stable under B_{a,b}, so the affine map never recurs.
pub fn reduce_critical_values(
    g: &Poly,
    critical_points: &[Rational],
) -> Result<ConstructionTrace, ConstructError> {
    if g.is_constant() {
        return Err(ConstructError::ConstantInput);
    }
    let derivative = g.derivative();
    let split: Poly = critical_points
        .iter()
        .map(|c| Poly::linear(&Rational::one(), c))
        .fold(Poly::one(), |acc, lin| &acc * &lin);
    if split.degree() != derivative.degree() {
        return Err(ConstructError::CriticalPointsMismatch);
    }
    let expected = split.scale(derivative.leading().expect("nonconstant input"));
    if expected != derivative {
        return Err(ConstructError::CriticalPointsMismatch);
    }

    let mut tracked: BTreeSet<Rational> = [Rational::zero(), Rational::one()]
        .iter()
        .map(|x| g.evaluate(x))
        .chain(critical_points.iter().map(|c| g.evaluate(c)))
        .collect();
    let mut current = g.clone();
    let mut steps: Vec<TraceStep> = Vec::new();
    let in_unit = |v: &Rational| v.is_zero() || v.is_one();

    if !tracked.iter().all(in_unit) {
        let min = tracked.first().expect("nonempty").clone();
        let max = tracked.last().expect("nonempty").clone();
        let (gamma, alpha) = if min == max {
            // Degenerate span: just translate the single value to 0.
            (Rational::one(), min.clone())
        } else {
            let stretch = (&max - &min).recip();
            (stretch.clone(), &min * &stretch)
        };
        let linear = Poly::linear(&gamma, &alpha);
        current = linear.compose(&current);
        tracked = tracked.iter().map(|v| linear.evaluate(v)).collect();
        steps.push(TraceStep { gamma, alpha, a: 1, b: 1 });
    }

    loop {
        let interior = tracked
            .iter()
            .filter(|v| !in_unit(v))
            .min_by_key(|v| (v.denom().clone(), v.numer().clone()))
            .cloned();
        let Some(v) = interior else { break };
        debug_assert!(v > Rational::zero() && v < Rational::one());
        let (a, b) = ab_of(&v);
        let ab = belyi_ab(a, b).expect("interior value gives valid parameters");
        current = ab.compose(&current);
        tracked = tracked.iter().map(|s| ab.evaluate(s)).collect();
        tracked.insert(Rational::zero());
        tracked.insert(Rational::one());
        steps.push(TraceStep { gamma: Rational::one(), alpha: Rational::zero(), a, b });
    }

    let result = certify(&current)
        .expect("all endpoint images and critical values have been driven into {0, 1}");
    Ok(ConstructionTrace {
        base: g.clone(),
        steps,
        lambda: None,
        image_of_lambda: None,
        result,
    })
}

/// Degree bookkeeping for a trace: composing B_{a,b} multiplies degree
/// by b, the affine parts leave it alone.
pub fn expected_degree(trace: &ConstructionTrace) -> usize {
    let base = trace.base().degree().unwrap_or(0).max(1);
    trace.steps().iter().fold(base, |d, s| d * s.b as usize)
}
