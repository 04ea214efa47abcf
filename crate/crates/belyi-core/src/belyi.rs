//! Normalized Belyi polynomials over Q: B(0) and B(1) lie in {0, 1} and
//! B' divides B(1 - B), which pins every critical value to {0, 1}. The
//! certificate stores the exact quotient so the divisibility can be
//! re-checked by one multiplication. Closure under composition makes the
//! certified polynomials a monoid with identity x.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::Rational;
use crate::polyring::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyFailure {
    #[error("constant polynomials are excluded")]
    Constant,
    #[error("endpoint condition fails: B({point}) = {value}")]
    Endpoint { point: u8, value: Rational },
    #[error("critical value condition fails: B' does not divide B(1 - B)")]
    CriticalValues,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BelyiError {
    #[error("B_{{a,b}} needs 1 <= a <= b, got a = {a}, b = {b}")]
    BadAb { a: u64, b: u64 },
    #[error("the Chebyshev Belyi family starts at n = 1")]
    BadChebyshevIndex,
}

/// Proof object for the two Belyi conditions: the endpoint values and
/// the exact quotient B(1 - B) / B'. Deserialization re-verifies, so a
/// certificate in hand always checks out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CertificateRepr", into = "CertificateRepr")]
pub struct BelyiCertificate {
    subject: Poly,
    value_at_0: Rational,
    value_at_1: Rational,
    quotient: Poly,
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    subject: Poly,
    value_at_0: Rational,
    value_at_1: Rational,
    quotient: Poly,
}

impl TryFrom<CertificateRepr> for BelyiCertificate {
    type Error = CertifyFailure;
    fn try_from(r: CertificateRepr) -> Result<Self, CertifyFailure> {
        let cert = BelyiCertificate {
            subject: r.subject,
            value_at_0: r.value_at_0,
            value_at_1: r.value_at_1,
            quotient: r.quotient,
        };
        cert.verify()?;
        Ok(cert)
    }
}

impl From<BelyiCertificate> for CertificateRepr {
    fn from(c: BelyiCertificate) -> CertificateRepr {
        CertificateRepr {
            subject: c.subject,
            value_at_0: c.value_at_0,
            value_at_1: c.value_at_1,
            quotient: c.quotient,
        }
    }
}

impl BelyiCertificate {
    pub fn subject(&self) -> &Poly {
        &self.subject
    }

    pub fn quotient(&self) -> &Poly {
        &self.quotient
    }

    pub fn value_at_0(&self) -> &Rational {
        &self.value_at_0
    }

    pub fn value_at_1(&self) -> &Rational {
        &self.value_at_1
    }

    pub fn degree(&self) -> usize {
        self.subject.degree().expect("certified subjects are nonconstant")
    }

    /// Re-check everything the certificate claims: endpoint values match
    /// and lie in {0, 1}, and B' * quotient = B(1 - B) exactly.
    pub fn verify(&self) -> Result<(), CertifyFailure> {
        if self.subject.is_constant() {
            return Err(CertifyFailure::Constant);
        }
        for (point, x, claimed) in [
            (0u8, Rational::zero(), &self.value_at_0),
            (1u8, Rational::one(), &self.value_at_1),
        ] {
            let value = self.subject.evaluate(&x);
            if &value != claimed || !(value.is_zero() || value.is_one()) {
                return Err(CertifyFailure::Endpoint { point, value });
            }
        }
        let lhs = &self.subject.derivative() * &self.quotient;
        let rhs = &self.subject * &(&Poly::one() - &self.subject);
        if lhs != rhs {
            return Err(CertifyFailure::CriticalValues);
        }
        Ok(())
    }

    /// 1 - B is Belyi alongside B; its quotient is the negated one.
    pub fn complement(&self) -> BelyiCertificate {
        let one = Poly::one();
        BelyiCertificate {
            subject: &one - &self.subject,
            value_at_0: Rational::one() - &self.value_at_0,
            value_at_1: Rational::one() - &self.value_at_1,
            quotient: -&self.quotient,
        }
    }
}

impl fmt::Display for BelyiCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Belyi certificate: B = {}, B(0) = {}, B(1) = {}",
            self.subject, self.value_at_0, self.value_at_1
        )
    }
}

/// Certify a nonconstant polynomial, or say which condition fails.
pub fn certify(b: &Poly) -> Result<BelyiCertificate, CertifyFailure> {
    if b.is_constant() {
        return Err(CertifyFailure::Constant);
    }
    let value_at_0 = b.evaluate(&Rational::zero());
    if !(value_at_0.is_zero() || value_at_0.is_one()) {
        return Err(CertifyFailure::Endpoint { point: 0, value: value_at_0 });
    }
    let value_at_1 = b.evaluate(&Rational::one());
    if !(value_at_1.is_zero() || value_at_1.is_one()) {
        return Err(CertifyFailure::Endpoint { point: 1, value: value_at_1 });
    }
    let target = b * &(&Poly::one() - b);
    let (quotient, remainder) = target
        .divrem(&b.derivative())
        .expect("nonconstant polynomial has nonzero derivative");
    if !remainder.is_zero() {
        return Err(CertifyFailure::CriticalValues);
    }
    Ok(BelyiCertificate { subject: b.clone(), value_at_0, value_at_1, quotient })
}

/// B_{a,b}(x) = b^b a^(-a) (b-a)^(-(b-a)) x^a (1-x)^(b-a), the Belyi
/// polynomial with critical points {0, a/b, 1} sending a/b to 1. The
/// b = a case reads 0^0 = 1 and degenerates to x^a.
pub fn belyi_ab(a: u64, b: u64) -> Result<Poly, BelyiError> {
    if a < 1 || b < a {
        return Err(BelyiError::BadAb { a, b });
    }
    let pow = |base: u64, e: u64| BigInt::from(base).pow(e as u32);
    let scale = Rational::new(pow(b, b), pow(a, a) * pow(b - a, b - a)).expect("nonzero");
    let one_minus_x = Poly::new(vec![Rational::one(), -Rational::one()]);
    let body = &Poly::monomial(Rational::one(), a as usize) * &one_minus_x.pow((b - a) as u32);
    Ok(body.scale(&scale))
}

/// Chebyshev polynomial of the first kind, T_0 = 1, T_1 = x,
/// T_{n+1} = 2x T_n - T_{n-1}.
pub fn chebyshev(n: u32) -> Poly {
    let two_x = Poly::new(vec![Rational::zero(), Rational::from(2)]);
    let mut prev = Poly::one();
    let mut cur = Poly::x();
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &(&two_x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// (T_n(2x - 1) + 1) / 2, the degree-n Belyi polynomial the Chebyshev
/// family produces; n = 1 gives x.
pub fn chebyshev_belyi(n: u32) -> Result<Poly, BelyiError> {
    if n == 0 {
        return Err(BelyiError::BadChebyshevIndex);
    }
    let shifted = chebyshev(n).compose(&Poly::new(vec![Rational::from(-1), Rational::from(2)]));
    Ok((&shifted + &Poly::one()).scale(&Rational::of(1, 2)))
}

/// Composition of certified polynomials, re-certified exactly.
pub fn compose_belyi(outer: &BelyiCertificate, inner: &BelyiCertificate) -> BelyiCertificate {
    let composed = outer.subject.compose(&inner.subject);
    certify(&composed).expect("composition of Belyi polynomials is Belyi")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointImageFailure {
    /// Which endpoint of [0, 1] maps badly.
    pub endpoint: u8,
    /// Its image under the linear map.
    pub image: Rational,
    /// B at that image, the value that is neither 0 nor 1.
    pub value: Rational,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrecomposeError {
    #[error("gamma must be nonzero")]
    ZeroGamma,
    #[error("precomposition is illegal: {0:?}")]
    Illegal(Vec<EndpointImageFailure>),
}

/// B(gamma x - alpha) stays Belyi exactly when the images of 0 and 1
/// under the linear map evaluate into {0, 1}; otherwise the report says
/// which endpoint fails.
pub fn precompose_linear(
    cert: &BelyiCertificate,
    gamma: &Rational,
    alpha: &Rational,
) -> Result<BelyiCertificate, PrecomposeError> {
    if gamma.is_zero() {
        return Err(PrecomposeError::ZeroGamma);
    }
    let mut failures = Vec::new();
    for (endpoint, x) in [(0u8, Rational::zero()), (1u8, Rational::one())] {
        let image = gamma * &x - alpha;
        let value = cert.subject.evaluate(&image);
        if !(value.is_zero() || value.is_one()) {
            failures.push(EndpointImageFailure { endpoint, image, value });
        }
    }
    if !failures.is_empty() {
        return Err(PrecomposeError::Illegal(failures));
    }
    let precomposed = cert.subject.compose(&Poly::linear(gamma, alpha));
    Ok(certify(&precomposed).expect("legal linear precomposition preserves the Belyi conditions"))
}
