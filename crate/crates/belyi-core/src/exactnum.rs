//! Exact scalar arithmetic: arbitrary-precision rationals, validated
//! primes, p-adic valuations, prime support, and reduction mod p.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Trial division is attempted up to this bound before the factorizer
/// falls back to Miller-Rabin and Pollard rho for the cofactor.
const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumberError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero has no prime support")]
    ZeroInput,
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("{value} has negative valuation at p = {p}")]
    NegativeValuation { value: String, p: u64 },
    #[error("prime factor of {0} does not fit in a machine word")]
    FactorTooLarge(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(String);

/// Arbitrary-precision rational, kept in lowest terms with positive
/// denominator; zero is 0/1. Wraps `BigRational`, which maintains the
/// canonical form, so equality and hashing are structural.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self, NumberError> {
        if denom.is_zero() {
            return Err(NumberError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    /// Convenience constructor for small literals. Panics when d = 0.
    pub fn of(n: i64, d: i64) -> Self {
        assert!(d != 0, "denominator is zero");
        Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "zero has no reciprocal");
        Rational(self.0.recip())
    }

    /// Integer power; negative exponents invert. Panics on 0^negative.
    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.recip().pow(-e);
        }
        let e = u32::try_from(e).expect("exponent too large");
        Rational(BigRational::new_raw(
            self.0.numer().pow(e),
            self.0.denom().pow(e),
        ))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |a, b| a * b)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts "a" or "a/b" with optional leading sign; b must be nonzero.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseRationalError(s.to_owned());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            None => (t, "1"),
            Some((n, d)) => (n, d),
        };
        let numer: BigInt = n.parse().map_err(|_| bad())?;
        let denom: BigInt = d.parse().map_err(|_| bad())?;
        Rational::new(numer, denom).map_err(|_| bad())
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A prime number, validated on construction by deterministic trial
/// division. Everything downstream may assume the wrapped value is prime.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, NumberError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(NumberError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for Prime {
    type Error = NumberError;
    fn try_from(p: u64) -> Result<Self, NumberError> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic primality by trial division over 2, 3, and 6k +- 1.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<Prime> {
    (2..=n).filter(|&k| is_prime(k)).map(Prime).collect()
}

/// The p-adic valuation of a rational: the integer exponent of p in its
/// factorization, with the zero input mapped to infinity.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
            (Valuation::Infinity, _) => Ordering::Greater,
            (_, Valuation::Infinity) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "infinity"),
        }
    }
}

fn valuation_int(n: &BigInt, p: Prime) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinity;
    }
    let p = BigInt::from(p.get());
    let mut v = 0i64;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        v += 1;
        rest = q;
    }
}

/// nu_p(q): exponent of p in q, infinity for q = 0. Additive on products;
/// nu_p(a + b) >= min(nu_p a, nu_p b) with equality when the two differ.
pub fn valuation(q: &Rational, p: Prime) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinity;
    }
    let vn = valuation_int(q.numer(), p).finite().expect("nonzero numerator");
    let vd = valuation_int(q.denom(), p).finite().expect("nonzero denominator");
    Valuation::Finite(vn - vd)
}

/// Complete factorization of a nonzero integer into (prime, exponent)
/// pairs sorted by prime. Trial division below the bound, then
/// Miller-Rabin plus Pollard rho on whatever cofactor is left.
pub fn factor(n: &BigInt) -> Result<Vec<(BigInt, u32)>, NumberError> {
    if n.is_zero() {
        return Err(NumberError::ZeroInput);
    }
    let mut rest = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut push = |p: BigInt, e: u32| {
        debug_assert!(e > 0);
        out.push((p, e));
    };
    for d in std::iter::once(2u64).chain((3..TRIAL_DIVISION_BOUND).step_by(2)) {
        let big_d = BigInt::from(d);
        if (&big_d * &big_d) > rest {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&big_d);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            push(big_d, e);
        }
    }
    if !rest.is_one() {
        let mut stack = vec![rest];
        let mut found: Vec<BigInt> = Vec::new();
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if is_probable_prime(&m) {
                found.push(m);
                continue;
            }
            let d = pollard_rho(&m);
            stack.push(&m / &d);
            stack.push(d);
        }
        found.sort();
        let mut i = 0;
        while i < found.len() {
            let mut j = i;
            while j < found.len() && found[j] == found[i] {
                j += 1;
            }
            push(found[i].clone(), (j - i) as u32);
            i = j;
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Miller-Rabin over a fixed witness set; deterministic for inputs below
/// 3.3e24, overwhelmingly reliable beyond, and every factor reported by
/// `factor` is cross-checked by exact multiplication in tests.
fn is_probable_prime(n: &BigInt) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    let one = BigInt::one();
    let two = BigInt::from(2);
    if (n % &two).is_zero() {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = valuation_int(&n_minus_1, Prime(2)).finite().unwrap();
    let d = &n_minus_1 >> (s as usize);
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let a = BigInt::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard rho with Brent cycling. Precondition: n is odd, composite, and
/// has no factor below the trial division bound.
fn pollard_rho(n: &BigInt) -> BigInt {
    let one = BigInt::one();
    for c in 1u64.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut x = BigInt::from(2);
        let mut y = x.clone();
        let mut d = one.clone();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
    }
    unreachable!()
}

/// Sorted list of (p, nu_p(q)) over exactly the primes where the
/// valuation is nonzero. Empty for q = +-1; zero input is rejected.
pub fn prime_support(q: &Rational) -> Result<Vec<(u64, i64)>, NumberError> {
    if q.is_zero() {
        return Err(NumberError::ZeroInput);
    }
    let as_word = |p: &BigInt| {
        p.to_u64()
            .ok_or_else(|| NumberError::FactorTooLarge(p.to_string()))
    };
    let mut support: Vec<(u64, i64)> = Vec::new();
    for (p, e) in factor(q.numer())? {
        support.push((as_word(&p)?, e as i64));
    }
    for (p, e) in factor(q.denom())? {
        support.push((as_word(&p)?, -(e as i64)));
    }
    // Numerator and denominator are coprime, so no prime repeats.
    support.sort_by_key(|&(p, _)| p);
    support.retain(|&(p, _)| p > 1);
    Ok(support)
}

fn mod_word(n: &BigInt, p: u64) -> u64 {
    let r = n % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits")
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Image of q in the field of p elements, defined only on the valuation
/// ring (nu_p(q) >= 0): numerator times inverse denominator mod p.
pub fn reduce_mod_p(q: &Rational, p: Prime) -> Result<u64, NumberError> {
    match valuation(q, p) {
        Valuation::Finite(v) if v < 0 => Err(NumberError::NegativeValuation {
            value: q.to_string(),
            p: p.get(),
        }),
        _ => {
            let n = mod_word(q.numer(), p.get());
            let d = mod_word(q.denom(), p.get());
            debug_assert!(d != 0);
            let inv = pow_mod(d, p.get() - 2, p.get());
            Ok(mul_mod(n, inv, p.get()))
        }
    }
}
