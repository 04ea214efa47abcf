//! Dense univariate polynomials over the exact rationals: ring ops,
//! evaluation, composition, derivative, division with remainder,
//! reduction mod p, and rational root extraction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{self, factor, NumberError, Prime, Rational, Valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error(transparent)]
    Number(#[from] NumberError),
}

/// Polynomial as its coefficient list in ascending degree order.
/// Invariant: the last stored coefficient is nonzero; zero is the empty
/// list. JSON form is {"coeffs": ["a0", "a1", ...]}.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "PolyRepr", into = "PolyRepr")]
pub struct Poly {
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    coeffs: Vec<Rational>,
}

impl From<PolyRepr> for Poly {
    fn from(r: PolyRepr) -> Poly {
        Poly::new(r.coeffs)
    }
}

impl From<Poly> for PolyRepr {
    fn from(p: Poly) -> PolyRepr {
        PolyRepr { coeffs: p.coeffs }
    }
}

impl Poly {
    /// Normalizing constructor: trims trailing zeros.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn x() -> Self {
        Poly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    /// gamma * x - alpha, the linear map recorded by construction traces.
    pub fn linear(gamma: &Rational, alpha: &Rational) -> Self {
        Poly::new(vec![-alpha, gamma.clone()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of x^i, zero beyond the stored length.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Exactly one nonzero coefficient.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
    }

    /// Multiplicity of the root 0; None for the zero polynomial.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// self(inner), by Horner over the coefficient list.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Rational::from(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Quotient and remainder with deg r < deg g. Rejects g = 0.
    pub fn divrem(&self, g: &Poly) -> Result<(Poly, Poly), PolyError> {
        let dg = g.degree().ok_or(PolyError::DivisionByZero)?;
        let lead_inv = g.leading().expect("nonzero divisor").recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dg {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); r.len() - dg];
        while r.len() > dg {
            let t = r.last().expect("nonempty") * &lead_inv;
            let shift = r.len() - 1 - dg;
            if !t.is_zero() {
                for (i, gc) in g.coeffs.iter().enumerate() {
                    r[shift + i] = &r[shift + i] - &(gc * &t);
                }
            }
            debug_assert!(r.last().expect("nonempty").is_zero());
            r.pop();
            q[shift] = t;
        }
        Ok((Poly::new(q), Poly::new(r)))
    }

    /// Image in F_p[x]; every coefficient must lie in the valuation ring.
    pub fn reduce_mod_p(&self, p: Prime) -> Result<FpPoly, PolyError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| exactnum::reduce_mod_p(c, p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FpPoly::new(p, coeffs))
    }

    /// All distinct rational roots, sorted. Candidates come from the
    /// rational root theorem on the cleared-denominator form; the huge
    /// candidate sets that smooth extreme coefficients produce are cut
    /// down by evaluation modulo word-size primes before exact checks.
    pub fn rational_roots(&self) -> Result<Vec<Rational>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let k = self.order_at_zero().expect("nonzero polynomial");
        let mut roots = Vec::new();
        if k > 0 {
            roots.push(Rational::zero());
        }
        let shifted = Poly::new(self.coeffs[k..].to_vec());
        if shifted.is_constant() {
            return Ok(roots);
        }
        let ints = shifted.clear_denominators();
        let n = ints.len() - 1;
        let num_divs = unsigned_divisors(&ints[0].abs())?;
        let den_divs = unsigned_divisors(&ints[n].abs())?;
        let filter = ModularFilter::new(&ints);
        for u in &num_divs {
            for v in &den_divs {
                if u.gcd(v) != BigInt::one() {
                    continue;
                }
                for cand in [Rational::new(u.clone(), v.clone()), Rational::new(-u, v.clone())] {
                    let cand = cand.expect("nonzero divisor");
                    if !filter.may_vanish(&cand) {
                        continue;
                    }
                    if shifted.evaluate(&cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        Ok(roots)
    }

    /// Integer coefficient list (ascending) after multiplying by the lcm
    /// of the denominators. Precondition: nonzero constant term.
    fn clear_denominators(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect()
    }
}

/// Rejects candidates u/v unless sum c_i u^i v^(n-i) = 0 modulo a few
/// fixed word-size primes. Sound: an actual root always passes.
struct ModularFilter {
    rows: Vec<(u64, Vec<u64>)>,
}

impl ModularFilter {
    const PRIMES: [u64; 2] = [1_000_000_007, 998_244_353];

    fn new(ints: &[BigInt]) -> Self {
        let rows = Self::PRIMES
            .iter()
            .map(|&q| {
                let residues = ints
                    .iter()
                    .map(|c| {
                        let r = c % BigInt::from(q);
                        let r = if r.is_negative() { r + BigInt::from(q) } else { r };
                        r.to_u64().expect("residue fits")
                    })
                    .collect();
                (q, residues)
            })
            .collect();
        ModularFilter { rows }
    }

    fn may_vanish(&self, cand: &Rational) -> bool {
        self.rows.iter().all(|(q, residues)| {
            let u = {
                let r = cand.numer() % BigInt::from(*q);
                let r = if r.is_negative() { r + BigInt::from(*q) } else { r };
                r.to_u64().expect("residue fits")
            };
            let v = {
                let r = cand.denom() % BigInt::from(*q);
                r.to_u64().expect("residue fits")
            };
            if v == 0 {
                // q divides the denominator; the filter row says nothing.
                return true;
            }
            // Horner for sum c_i u^i v^(n-i) mod q.
            let mut acc = 0u64;
            let mut vpow = 1u64;
            for c in residues.iter().rev() {
                acc = ((acc as u128 * u as u128 + *c as u128 * vpow as u128) % *q as u128) as u64;
                vpow = ((vpow as u128 * v as u128) % *q as u128) as u64;
            }
            acc == 0
        })
    }
}

/// All positive divisors of |n|, unsorted. Errors if a prime factor does
/// not fit in a machine word.
fn unsigned_divisors(n: &BigInt) -> Result<Vec<BigInt>, PolyError> {
    let factors = factor(n)?;
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    Ok(divs)
}

/// True iff g divides f exactly (zero remainder). g = 0 is rejected.
pub fn divides(g: &Poly, f: &Poly) -> Result<bool, PolyError> {
    let (_, r) = f.divrem(g)?;
    Ok(r.is_zero())
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }
}

macro_rules! poly_binop_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop_owned!(Add, add);
poly_binop_owned!(Sub, sub);
poly_binop_owned!(Mul, mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Polynomial over the field of p elements, coefficients in [0, p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: Prime, mut coeffs: Vec<u64>) -> Self {
        for c in &mut coeffs {
            *c %= p.get();
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p: p.get(), coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, rhs: &FpPoly) -> FpPoly {
        assert_eq!(self.p, rhs.p, "mismatched moduli");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let at = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        let coeffs = (0..n)
            .map(|i| (at(&self.coeffs, i) + at(&rhs.coeffs, i)) % self.p)
            .collect();
        FpPoly { p: self.p, coeffs: trim(coeffs) }
    }

    pub fn mul(&self, rhs: &FpPoly) -> FpPoly {
        assert_eq!(self.p, rhs.p, "mismatched moduli");
        if self.is_zero() || rhs.is_zero() {
            return FpPoly { p: self.p, coeffs: vec![] };
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + a as u128 * b as u128) % self.p as u128) as u64;
            }
        }
        FpPoly { p: self.p, coeffs: trim(out) }
    }
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly(mod {}; {:?})", self.p, self.coeffs)
    }
}

/// Valuations of the coefficients, used by the Newton polygon builder.
pub(crate) fn coeff_valuations(f: &Poly, p: Prime) -> Vec<(usize, Valuation)> {
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| (i, crate::exactnum::valuation(c, p)))
        .collect()
}
