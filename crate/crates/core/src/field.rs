//! Coefficient fields and their elements.
//!
//! A [`Field`] is a cheap, reference-counted descriptor. Elements are plain
//! [`Elem`] values interpreted relative to a field; every arithmetic routine
//! takes the field as receiver. Exact kinds keep a canonical representative
//! (reduced residue, reduced fraction, residue polynomial padded to the
//! extension degree), so structural equality is field equality. The
//! approximate kinds compare within their tolerance.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Above this size k-th roots in a finite field are found by polynomial
/// root finding instead of a scan.
const SCAN_LIMIT: u128 = 1024;

/// Node budget for the lexicographic regular-solution search.
const SEARCH_BUDGET: u64 = 20_000_000;

/// A field element representative.
#[derive(Clone, Debug, PartialEq)]
pub enum Elem {
    /// Residue in `0..p` for a prime field.
    Int(u64),
    /// Residue polynomial over the base field, exactly `degree` coefficients,
    /// low to high.
    Poly(Vec<Elem>),
    Rat(BigRational),
    Real(f64),
    Complex(Complex64),
}

#[derive(Debug)]
pub enum Kind {
    Prime { p: u64 },
    /// `base[T] / (modulus)`, modulus monic and irreducible, stored low to high.
    Extension { base: Field, modulus: Vec<Elem> },
    Rational,
    Real { tol: f64 },
    Complex { tol: f64 },
}

#[derive(Clone)]
pub struct Field {
    inner: Arc<Kind>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.inner, &other.inner) {
            return true;
        }
        match (self.kind(), other.kind()) {
            (Kind::Prime { p }, Kind::Prime { p: q }) => p == q,
            (
                Kind::Extension { base, modulus },
                Kind::Extension {
                    base: b2,
                    modulus: m2,
                },
            ) => base == b2 && modulus == m2,
            (Kind::Rational, Kind::Rational) => true,
            (Kind::Real { tol }, Kind::Real { tol: t2 }) => tol == t2,
            (Kind::Complex { tol }, Kind::Complex { tol: t2 }) => tol == t2,
            _ => false,
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::Prime { p } => write!(f, "Fp:{p}"),
            Kind::Extension { base, modulus } => {
                let coeffs: Vec<String> = modulus.iter().map(|c| base.format(c)).collect();
                match base.kind() {
                    Kind::Prime { p } => write!(
                        f,
                        "Fq:p={p},d={},mod=[{}]",
                        modulus.len() - 1,
                        coeffs.join(",")
                    ),
                    _ => write!(f, "Ext({base};mod=[{}])", coeffs.join(",")),
                }
            }
            Kind::Rational => write!(f, "Q"),
            Kind::Real { tol } => write!(f, "R:tol={tol:e}"),
            Kind::Complex { tol } => write!(f, "C:tol={tol:e}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Parses `Fp:7`, `Fq:p=2,d=2,mod=[1,1,1]`, `Q`, `R:tol=1e-9`, `C:tol=1e-9`.
    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h.trim(), r.trim()),
            None => (s, ""),
        };
        match head {
            "Fp" => {
                let p = rest
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad prime in field descriptor {s:?}")))?;
                Field::prime(p)
            }
            "Fq" => {
                let mut p = None;
                let mut d = None;
                let mut modulus = None;
                let mut remaining = rest;
                while !remaining.is_empty() {
                    let (key, after) = remaining
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("bad field descriptor {s:?}")))?;
                    let key = key.trim().trim_start_matches(',').trim();
                    if key == "mod" {
                        let end = after
                            .find(']')
                            .ok_or_else(|| Error::Parse(format!("unterminated modulus in {s:?}")))?;
                        let list = after[..=end].trim();
                        let coeffs: Vec<i64> = serde_json::from_str(list)
                            .map_err(|e| Error::Parse(format!("bad modulus {list:?}: {e}")))?;
                        modulus = Some(coeffs);
                        remaining = &after[end + 1..];
                    } else {
                        let (value, next) = match after.find(',') {
                            Some(i) => (&after[..i], &after[i..]),
                            None => (after, ""),
                        };
                        let value: u64 = value
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad value for {key} in {s:?}")))?;
                        match key {
                            "p" => p = Some(value),
                            "d" => d = Some(value as usize),
                            _ => return Err(Error::Parse(format!("unknown key {key:?} in {s:?}"))),
                        }
                        remaining = next;
                    }
                    remaining = remaining.trim_start_matches(',').trim();
                }
                let p = p.ok_or_else(|| Error::Parse(format!("missing p in {s:?}")))?;
                let modulus =
                    modulus.ok_or_else(|| Error::Parse(format!("missing mod in {s:?}")))?;
                if let Some(d) = d {
                    if modulus.len() != d + 1 {
                        return Err(Error::Parse(format!(
                            "modulus has degree {} but d={d}",
                            modulus.len().saturating_sub(1)
                        )));
                    }
                }
                Field::prime_power(p, &modulus)
            }
            "Q" if rest.is_empty() => Ok(Field::rationals()),
            "R" | "C" => {
                let tol = if rest.is_empty() {
                    1e-9
                } else {
                    let v = rest
                        .strip_prefix("tol=")
                        .ok_or_else(|| Error::Parse(format!("expected tol= in {s:?}")))?;
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad tolerance in {s:?}")))?
                };
                if head == "R" {
                    Field::real(tol)
                } else {
                    Field::complex(tol)
                }
            }
            _ => Err(Error::Parse(format!("unknown field descriptor {s:?}"))),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Field {
    fn from_kind(kind: Kind) -> Field {
        Field {
            inner: Arc::new(kind),
        }
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(Field::from_kind(Kind::Prime { p }))
    }

    pub fn rationals() -> Field {
        Field::from_kind(Kind::Rational)
    }

    pub fn real(tol: f64) -> Result<Field> {
        if !(tol > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        Ok(Field::from_kind(Kind::Real { tol }))
    }

    pub fn complex(tol: f64) -> Result<Field> {
        if !(tol > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        Ok(Field::from_kind(Kind::Complex { tol }))
    }

    /// `F_p[T]/(modulus)` with the modulus given by integer coefficients,
    /// low to high.
    pub fn prime_power(p: u64, modulus: &[i64]) -> Result<Field> {
        let base = Field::prime(p)?;
        let coeffs: Vec<Elem> = modulus.iter().map(|&c| base.from_i64(c)).collect();
        let poly = Poly::new(&base, coeffs);
        Ok(base.extend(&poly)?.0)
    }

    /// Adjoins a root of `p` to this field. Returns the quotient field and
    /// the class of `T`, which is a root of `p` there. Base elements embed
    /// through [`Field::embed`].
    pub fn extend(&self, p: &Poly) -> Result<(Field, Elem)> {
        if p.field() != self {
            return Err(Error::DescriptorMismatch);
        }
        let d = p
            .degree()
            .ok_or_else(|| Error::InvalidInput("cannot extend by the zero polynomial".into()))?;
        if d == 0 {
            return Err(Error::InvalidInput("extension polynomial must have degree >= 1".into()));
        }
        if !self.is_one(p.lead()) {
            return Err(Error::InvalidInput("extension polynomial must be monic".into()));
        }
        match self.kind() {
            Kind::Complex { .. } => {
                return Err(Error::UnsupportedBase(format!("{self}")));
            }
            Kind::Real { .. } => {
                if d > 2 {
                    return Err(Error::ReduciblePolynomial(format!(
                        "degree {d} polynomials are reducible over R"
                    )));
                }
                if d == 2 {
                    let b = self.to_f64(&p.coeff(1));
                    let c = self.to_f64(&p.coeff(0));
                    if b * b - 4.0 * c >= 0.0 {
                        return Err(Error::ReduciblePolynomial(format!("{p} has a real root")));
                    }
                }
            }
            Kind::Extension { base, .. } if base.is_approx() => {
                return Err(Error::UnsupportedBase(format!("{self}")));
            }
            _ => {
                if d > 1 && !crate::factor::is_irreducible(p)? {
                    return Err(Error::ReduciblePolynomial(format!("{p}")));
                }
            }
        }
        let field = Field::from_kind(Kind::Extension {
            base: self.clone(),
            modulus: p.coeffs().to_vec(),
        });
        let mut g = vec![self.zero(); d];
        if d == 1 {
            g[0] = self.neg(&p.coeff(0));
        } else {
            g[1] = self.one();
        }
        Ok((field, Elem::Poly(g)))
    }

    pub fn kind(&self) -> &Kind {
        &self.inner
    }

    /// Base field of an extension.
    pub fn base(&self) -> Option<&Field> {
        match self.kind() {
            Kind::Extension { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Defining polynomial of an extension.
    pub fn modulus(&self) -> Option<Poly> {
        match self.kind() {
            Kind::Extension { base, modulus } => Some(Poly::new(base, modulus.clone())),
            _ => None,
        }
    }

    /// Degree over the immediate base; 1 for non-extensions.
    pub fn degree(&self) -> usize {
        match self.kind() {
            Kind::Extension { modulus, .. } => modulus.len() - 1,
            _ => 1,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self.kind() {
            Kind::Prime { p } => *p,
            Kind::Extension { base, .. } => base.characteristic(),
            _ => 0,
        }
    }

    /// Degree over the prime field for finite fields.
    pub fn absolute_degree(&self) -> usize {
        match self.kind() {
            Kind::Extension { base, modulus } => base.absolute_degree() * (modulus.len() - 1),
            _ => 1,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self.kind() {
            Kind::Prime { .. } => true,
            Kind::Extension { base, .. } => base.is_finite(),
            _ => false,
        }
    }

    pub fn is_exact(&self) -> bool {
        match self.kind() {
            Kind::Real { .. } | Kind::Complex { .. } => false,
            Kind::Extension { base, .. } => base.is_exact(),
            _ => true,
        }
    }

    pub fn is_approx(&self) -> bool {
        !self.is_exact()
    }

    /// True for the complex numbers and for quadratic extensions of the reals.
    pub fn is_complex_like(&self) -> bool {
        match self.kind() {
            Kind::Complex { .. } => true,
            Kind::Extension { base, modulus } => {
                matches!(base.kind(), Kind::Real { .. }) && modulus.len() == 3
            }
            _ => false,
        }
    }

    pub fn tolerance(&self) -> Option<f64> {
        match self.kind() {
            Kind::Real { tol } | Kind::Complex { tol } => Some(*tol),
            Kind::Extension { base, .. } => base.tolerance(),
            _ => None,
        }
    }

    /// Exact cardinality for finite kinds, when it fits in 128 bits.
    pub fn cardinality(&self) -> Option<u128> {
        match self.kind() {
            Kind::Prime { p } => Some(*p as u128),
            Kind::Extension { base, modulus } => {
                let b = base.cardinality()?;
                b.checked_pow((modulus.len() - 1) as u32)
            }
            _ => None,
        }
    }

    /// Cardinality as a big integer for finite kinds.
    pub fn order(&self) -> Option<BigUint> {
        if !self.is_finite() {
            return None;
        }
        Some(BigUint::from(self.characteristic()).pow(self.absolute_degree() as u32))
    }

    pub fn zero(&self) -> Elem {
        match self.kind() {
            Kind::Prime { .. } => Elem::Int(0),
            Kind::Extension { base, modulus } => Elem::Poly(vec![base.zero(); modulus.len() - 1]),
            Kind::Rational => Elem::Rat(BigRational::zero()),
            Kind::Real { .. } => Elem::Real(0.0),
            Kind::Complex { .. } => Elem::Complex(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        match self.kind() {
            Kind::Prime { p } => Elem::Int((v as i128).rem_euclid(*p as i128) as u64),
            Kind::Extension { base, .. } => self.embed(&base.from_i64(v)),
            Kind::Rational => Elem::Rat(BigRational::from_integer(BigInt::from(v))),
            Kind::Real { .. } => Elem::Real(v as f64),
            Kind::Complex { .. } => Elem::Complex(Complex64::new(v as f64, 0.0)),
        }
    }

    pub fn from_rational(&self, num: i64, den: i64) -> Result<Elem> {
        let d = self.from_i64(den);
        self.div(&self.from_i64(num), &d)
    }

    pub fn from_f64(&self, v: f64) -> Result<Elem> {
        match self.kind() {
            Kind::Real { .. } => Ok(Elem::Real(v)),
            Kind::Complex { .. } => Ok(Elem::Complex(Complex64::new(v, 0.0))),
            Kind::Extension { base, .. } if base.is_approx() => Ok(self.embed(&base.from_f64(v)?)),
            _ => Err(Error::UnsupportedField(format!("{self} has no float embedding"))),
        }
    }

    /// Embeds an element of the immediate base field into this extension.
    pub fn embed(&self, e: &Elem) -> Elem {
        match self.kind() {
            Kind::Extension { base, modulus } => {
                let mut v = vec![base.zero(); modulus.len() - 1];
                v[0] = e.clone();
                Elem::Poly(v)
            }
            _ => e.clone(),
        }
    }

    /// The class of `T` in an extension.
    pub fn generator(&self) -> Option<Elem> {
        match self.kind() {
            Kind::Extension { base, modulus } => {
                let d = modulus.len() - 1;
                if d == 1 {
                    return Some(Elem::Poly(vec![base.neg(&modulus[0])]));
                }
                let mut g = vec![base.zero(); d];
                g[1] = base.one();
                Some(Elem::Poly(g))
            }
            _ => None,
        }
    }

    /// Coefficients of an extension element over the base field.
    pub fn coords<'a>(&self, e: &'a Elem) -> &'a [Elem] {
        match e {
            Elem::Poly(v) => v,
            _ => std::slice::from_ref(e),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (self.kind(), a, b) {
            (Kind::Prime { p }, Elem::Int(x), Elem::Int(y)) => {
                let s = x + y;
                Elem::Int(if s >= *p { s - p } else { s })
            }
            (Kind::Extension { base, .. }, Elem::Poly(x), Elem::Poly(y)) => {
                Elem::Poly(x.iter().zip(y).map(|(u, v)| base.add(u, v)).collect())
            }
            (Kind::Rational, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (Kind::Real { .. }, Elem::Real(x), Elem::Real(y)) => Elem::Real(x + y),
            (Kind::Complex { .. }, Elem::Complex(x), Elem::Complex(y)) => Elem::Complex(x + y),
            _ => panic!("element does not belong to {self}: {a:?}, {b:?}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (self.kind(), a) {
            (Kind::Prime { p }, Elem::Int(x)) => Elem::Int(if *x == 0 { 0 } else { p - x }),
            (Kind::Extension { base, .. }, Elem::Poly(x)) => {
                Elem::Poly(x.iter().map(|u| base.neg(u)).collect())
            }
            (Kind::Rational, Elem::Rat(x)) => Elem::Rat(-x),
            (Kind::Real { .. }, Elem::Real(x)) => Elem::Real(-x),
            (Kind::Complex { .. }, Elem::Complex(x)) => Elem::Complex(-x),
            _ => panic!("element does not belong to {self}: {a:?}"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self.kind(), a, b) {
            (Kind::Prime { p }, Elem::Int(x), Elem::Int(y)) => Elem::Int(mul_mod(*x, *y, *p)),
            (Kind::Extension { base, modulus }, Elem::Poly(x), Elem::Poly(y)) => {
                Elem::Poly(ext_mul(base, modulus, x, y))
            }
            (Kind::Rational, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Kind::Real { .. }, Elem::Real(x), Elem::Real(y)) => Elem::Real(x * y),
            (Kind::Complex { .. }, Elem::Complex(x), Elem::Complex(y)) => Elem::Complex(x * y),
            _ => panic!("element does not belong to {self}: {a:?}, {b:?}"),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self.kind(), a) {
            (Kind::Prime { p }, Elem::Int(x)) => Elem::Int(pow_mod(*x, p - 2, *p)),
            (Kind::Extension { base, modulus }, Elem::Poly(x)) => {
                if self.is_complex_like() {
                    return self.from_complex(self.to_complex(a).inv());
                }
                let m = Poly::new(base, modulus.clone());
                let u = Poly::new(base, x.clone());
                let (g, s, _) = u.ext_gcd(&m);
                if g.degree() != Some(0) {
                    return Err(Error::DivisionByZero);
                }
                let s = s.scale(&base.inv(g.lead())?);
                let mut v = s.coeffs().to_vec();
                v.resize(modulus.len() - 1, base.zero());
                Elem::Poly(v)
            }
            (Kind::Rational, Elem::Rat(x)) => Elem::Rat(x.recip()),
            (Kind::Real { .. }, Elem::Real(x)) => Elem::Real(1.0 / x),
            (Kind::Complex { .. }, Elem::Complex(x)) => Elem::Complex(x.inv()),
            _ => panic!("element does not belong to {self}: {a:?}"),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = a.clone();
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        r
    }

    pub fn pow_big(&self, a: &Elem, e: &BigUint) -> Elem {
        let mut r = self.one();
        for i in (0..e.bits()).rev() {
            r = self.mul(&r, &r);
            if e.bit(i) {
                r = self.mul(&r, a);
            }
        }
        r
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Int(x) => *x == 0,
            Elem::Poly(v) => {
                let base = self.base().expect("polynomial element outside an extension");
                v.iter().all(|c| base.is_zero(c))
            }
            Elem::Rat(x) => x.is_zero(),
            Elem::Real(x) => x.abs() <= self.tolerance().unwrap_or(0.0),
            Elem::Complex(x) => x.norm() <= self.tolerance().unwrap_or(0.0),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        self.eq(a, &self.one())
    }

    /// Field equality; within tolerance for approximate kinds.
    pub fn eq(&self, a: &Elem, b: &Elem) -> bool {
        if self.is_exact() {
            a == b
        } else {
            self.is_zero(&self.sub(a, b))
        }
    }

    /// Magnitude used for pivoting and tolerance scaling.
    pub fn magnitude(&self, a: &Elem) -> f64 {
        match a {
            Elem::Int(x) => {
                if *x == 0 {
                    0.0
                } else {
                    1.0
                }
            }
            Elem::Poly(v) => {
                let base = self.base().expect("polynomial element outside an extension");
                v.iter().map(|c| base.magnitude(c)).fold(0.0, f64::max)
            }
            Elem::Rat(x) => x.to_f64().unwrap_or(f64::MAX).abs(),
            Elem::Real(x) => x.abs(),
            Elem::Complex(x) => x.norm(),
        }
    }

    pub fn to_f64(&self, a: &Elem) -> f64 {
        match a {
            Elem::Real(x) => *x,
            Elem::Complex(x) => x.re,
            Elem::Rat(x) => x.to_f64().unwrap_or(f64::NAN),
            Elem::Int(x) => *x as f64,
            Elem::Poly(v) => self.base().map(|b| b.to_f64(&v[0])).unwrap_or(f64::NAN),
        }
    }

    /// The root of the modulus with positive imaginary part, for a quadratic
    /// extension of the reals.
    fn complex_generator(&self) -> Complex64 {
        match self.kind() {
            Kind::Extension { base, modulus } => {
                let c = base.to_f64(&modulus[0]);
                let b = base.to_f64(&modulus[1]);
                let disc = 4.0 * c - b * b;
                Complex64::new(-b / 2.0, disc.max(0.0).sqrt() / 2.0)
            }
            _ => Complex64::new(0.0, 1.0),
        }
    }

    /// Value in C for complex-like fields; real kinds embed.
    pub fn to_complex(&self, a: &Elem) -> Complex64 {
        match a {
            Elem::Complex(z) => *z,
            Elem::Real(x) => Complex64::new(*x, 0.0),
            Elem::Poly(v) if self.is_complex_like() => {
                let base = self.base().unwrap();
                let z = self.complex_generator();
                Complex64::new(base.to_f64(&v[0]), 0.0) + z * base.to_f64(&v[1])
            }
            _ => Complex64::new(self.to_f64(a), 0.0),
        }
    }

    pub fn from_complex(&self, w: Complex64) -> Result<Elem> {
        match self.kind() {
            Kind::Complex { .. } => Ok(Elem::Complex(w)),
            Kind::Real { .. } => Ok(Elem::Real(w.re)),
            Kind::Extension { base, .. } if self.is_complex_like() => {
                let z = self.complex_generator();
                let v = w.im / z.im;
                let u = w.re - v * z.re;
                Ok(Elem::Poly(vec![base.from_f64(u)?, base.from_f64(v)?]))
            }
            _ => Err(Error::UnsupportedField(format!("{self} has no complex embedding"))),
        }
    }

    /// Enumerates a finite field in its canonical order.
    pub fn enumerate(&self) -> Result<impl Iterator<Item = Elem> + '_> {
        let q = self.cardinality().ok_or(Error::InfiniteField)?;
        Ok((0..q).map(move |i| self.element_at(i)))
    }

    /// Element with the given enumeration index (finite kinds).
    pub fn element_at(&self, idx: u128) -> Elem {
        match self.kind() {
            Kind::Prime { .. } => Elem::Int(idx as u64),
            Kind::Extension { base, modulus } => {
                let b = base.cardinality().expect("finite base");
                let mut idx = idx;
                let v = (0..modulus.len() - 1)
                    .map(|_| {
                        let e = base.element_at(idx % b);
                        idx /= b;
                        e
                    })
                    .collect();
                Elem::Poly(v)
            }
            _ => panic!("element_at on infinite field {self}"),
        }
    }

    /// Enumeration index of an element of a finite field.
    pub fn index_of(&self, e: &Elem) -> u128 {
        match (self.kind(), e) {
            (Kind::Prime { .. }, Elem::Int(x)) => *x as u128,
            (Kind::Extension { base, .. }, Elem::Poly(v)) => {
                let b = base.cardinality().expect("finite base");
                v.iter().rev().fold(0u128, |acc, c| acc * b + base.index_of(c))
            }
            _ => panic!("index_of on infinite field {self}"),
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match self.kind() {
            Kind::Prime { p } => Elem::Int(rng.gen_range(0..*p)),
            Kind::Extension { base, modulus } => {
                Elem::Poly((0..modulus.len() - 1).map(|_| base.random(rng)).collect())
            }
            Kind::Rational => self.from_i64(rng.gen_range(-9..=9)),
            Kind::Real { .. } => Elem::Real(rng.gen_range(-1.0..1.0)),
            Kind::Complex { .. } => Elem::Complex(Complex64::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )),
        }
    }

    /// Random element that is never zero.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        loop {
            let e = self.random(rng);
            if !self.is_zero(&e) {
                return e;
            }
        }
    }

    pub fn format(&self, e: &Elem) -> String {
        match e {
            Elem::Int(x) => x.to_string(),
            Elem::Poly(v) => {
                let base = self.base().expect("polynomial element outside an extension");
                let parts: Vec<String> = v.iter().map(|c| base.format(c)).collect();
                format!("[{}]", parts.join(","))
            }
            Elem::Rat(x) => {
                if x.is_integer() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            Elem::Real(x) => format!("{x}"),
            Elem::Complex(z) => {
                if z.im < 0.0 {
                    format!("{}-{}i", z.re, -z.im)
                } else {
                    format!("{}+{}i", z.re, z.im)
                }
            }
        }
    }

    pub fn to_json(&self, e: &Elem) -> Value {
        match e {
            Elem::Int(x) => Value::from(*x),
            Elem::Poly(v) => {
                let base = self.base().expect("polynomial element outside an extension");
                Value::Array(v.iter().map(|c| base.to_json(c)).collect())
            }
            Elem::Rat(_) => Value::String(self.format(e)),
            Elem::Real(x) => Value::from(*x),
            Elem::Complex(z) => Value::Array(vec![Value::from(z.re), Value::from(z.im)]),
        }
    }

    pub fn from_json(&self, v: &Value) -> Result<Elem> {
        let bad = || Error::Parse(format!("cannot read {v} as an element of {self}"));
        match self.kind() {
            Kind::Prime { .. } => match v {
                Value::Number(n) => Ok(self.from_i64(n.as_i64().ok_or_else(bad)?)),
                Value::String(s) => self.parse_elem(s),
                _ => Err(bad()),
            },
            Kind::Extension { base, modulus } => match v {
                Value::Array(items) => {
                    let d = modulus.len() - 1;
                    if items.len() > d {
                        return Err(Error::Parse(format!(
                            "extension element {v} has more than {d} coefficients"
                        )));
                    }
                    let mut coeffs = items
                        .iter()
                        .map(|c| base.from_json(c))
                        .collect::<Result<Vec<_>>>()?;
                    coeffs.resize(d, base.zero());
                    Ok(Elem::Poly(coeffs))
                }
                _ => Ok(self.embed(&base.from_json(v)?)),
            },
            Kind::Rational => match v {
                Value::Number(n) => Ok(self.from_i64(n.as_i64().ok_or_else(bad)?)),
                Value::String(s) => self.parse_elem(s),
                _ => Err(bad()),
            },
            Kind::Real { .. } => match v {
                Value::Number(n) => Ok(Elem::Real(n.as_f64().ok_or_else(bad)?)),
                Value::String(s) => self.parse_elem(s),
                _ => Err(bad()),
            },
            Kind::Complex { .. } => match v {
                Value::Number(n) => Ok(Elem::Complex(Complex64::new(n.as_f64().ok_or_else(bad)?, 0.0))),
                Value::Array(items) if items.len() == 2 => {
                    let re = items[0].as_f64().ok_or_else(bad)?;
                    let im = items[1].as_f64().ok_or_else(bad)?;
                    Ok(Elem::Complex(Complex64::new(re, im)))
                }
                _ => Err(bad()),
            },
        }
    }

    /// Parses a scalar written as an integer, `a/b`, a float, or a JSON value.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot read {s:?} as an element of {self}"));
        match self.kind() {
            Kind::Prime { .. } | Kind::Rational => {
                if let Some((n, d)) = s.split_once('/') {
                    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    let n = self.from_bigint(&n);
                    let d = self.from_bigint(&d);
                    self.div(&n, &d)
                } else {
                    let n: BigInt = s.parse().map_err(|_| bad())?;
                    Ok(self.from_bigint(&n))
                }
            }
            Kind::Real { .. } => Ok(Elem::Real(s.parse().map_err(|_| bad())?)),
            _ => {
                let v: Value = serde_json::from_str(s).map_err(|_| bad())?;
                self.from_json(&v)
            }
        }
    }

    fn from_bigint(&self, n: &BigInt) -> Elem {
        match self.kind() {
            Kind::Prime { p } => {
                let r = n.mod_floor(&BigInt::from(*p));
                Elem::Int(r.to_u64().unwrap())
            }
            Kind::Rational => Elem::Rat(BigRational::from_integer(n.clone())),
            _ => self.from_i64(n.to_i64().unwrap_or(0)),
        }
    }

    /// All `x` with `x^k = e`.
    ///
    /// Finite fields and the rationals return every root (finite fields in
    /// enumeration order, rationals nonnegative first). The reals return the
    /// real roots; complex-like fields return the principal root only (see
    /// [`Field::kth_roots_all`]).
    pub fn kth_roots(&self, e: &Elem, k: u32) -> Vec<Elem> {
        assert!(k >= 1, "k must be positive");
        if k == 1 {
            return vec![e.clone()];
        }
        if self.is_finite() {
            return self.finite_kth_roots(e, k);
        }
        match self.kind() {
            Kind::Rational => match e {
                Elem::Rat(x) => rational_kth_roots(x, k).into_iter().map(Elem::Rat).collect(),
                _ => vec![],
            },
            Kind::Real { .. } => {
                let x = self.to_f64(e);
                if self.is_zero(e) {
                    return vec![Elem::Real(0.0)];
                }
                if k % 2 == 1 {
                    vec![Elem::Real(x.signum() * x.abs().powf(1.0 / k as f64))]
                } else if x > 0.0 {
                    let r = x.powf(1.0 / k as f64);
                    vec![Elem::Real(r), Elem::Real(-r)]
                } else {
                    vec![]
                }
            }
            _ if self.is_complex_like() => {
                let z = self.to_complex(e);
                let r = if z.norm() == 0.0 { z } else { z.powf(1.0 / k as f64) };
                self.from_complex(r).into_iter().collect()
            }
            Kind::Extension { base, .. } => {
                // Only rational points of Q(alpha) are handled.
                let coords = self.coords(e);
                if coords[1..].iter().all(|c| base.is_zero(c)) {
                    base.kth_roots(&coords[0], k)
                        .iter()
                        .map(|r| self.embed(r))
                        .collect()
                } else {
                    vec![]
                }
            }
            _ => vec![],
        }
    }

    /// All k-th roots, including every complex root for complex-like fields.
    pub fn kth_roots_all(&self, e: &Elem, k: u32) -> Vec<Elem> {
        if !self.is_complex_like() {
            return self.kth_roots(e, k);
        }
        let z = self.to_complex(e);
        if z.norm() == 0.0 {
            return self.from_complex(z).into_iter().collect();
        }
        let r = z.powf(1.0 / k as f64);
        (0..k)
            .filter_map(|j| {
                let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64);
                self.from_complex(r * w).ok()
            })
            .collect()
    }

    fn finite_kth_roots(&self, e: &Elem, k: u32) -> Vec<Elem> {
        let q = self.cardinality();
        if q.map_or(false, |q| q <= SCAN_LIMIT) {
            return self
                .enumerate()
                .expect("finite")
                .filter(|x| self.pow(x, k as u64) == *e)
                .collect();
        }
        if self.is_zero(e) {
            return vec![self.zero()];
        }
        let mut coeffs = vec![self.zero(); k as usize + 1];
        coeffs[0] = self.neg(e);
        coeffs[k as usize] = self.one();
        let f = Poly::new(self, coeffs);
        let mut roots = crate::factor::roots(&f, 0x5eed).unwrap_or_default();
        roots.sort_by_key(|r| self.index_of(r));
        roots
    }
}

fn rational_kth_roots(x: &BigRational, k: u32) -> Vec<BigRational> {
    if x.is_zero() {
        return vec![BigRational::zero()];
    }
    let negative = x.is_negative();
    if negative && k % 2 == 0 {
        return vec![];
    }
    let num = x.numer().abs();
    let den = x.denom().clone();
    let rn = num.nth_root(k);
    let rd = den.nth_root(k);
    if rn.pow(k) != num || rd.pow(k) != den {
        return vec![];
    }
    let r = BigRational::new(rn, rd);
    if negative {
        vec![-r]
    } else if k % 2 == 0 {
        vec![r.clone(), -r]
    } else {
        vec![r]
    }
}

fn ext_mul(base: &Field, modulus: &[Elem], a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let d = modulus.len() - 1;
    let mut prod = vec![base.zero(); 2 * d - 1];
    for (i, x) in a.iter().enumerate() {
        if base.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if base.is_zero(y) {
                continue;
            }
            prod[i + j] = base.add(&prod[i + j], &base.mul(x, y));
        }
    }
    for t in (d..prod.len()).rev() {
        let c = prod[t].clone();
        if base.is_zero(&c) {
            continue;
        }
        for j in 0..d {
            prod[t - d + j] = base.sub(&prod[t - d + j], &base.mul(&c, &modulus[j]));
        }
    }
    prod.truncate(d);
    prod
}

/// An element bundled with its field, for checked arithmetic.
#[derive(Clone, Debug)]
pub struct FieldElement {
    pub field: Field,
    pub value: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

impl FieldElement {
    pub fn new(field: &Field, value: Elem) -> FieldElement {
        FieldElement {
            field: field.clone(),
            value,
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.field.eq(&self.value, &other.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.value))
    }
}

/// Checked field arithmetic. Unary operations ignore `y`.
pub fn arith(op: ArithOp, x: &FieldElement, y: Option<&FieldElement>) -> Result<FieldElement> {
    let field = &x.field;
    let second = || -> Result<&Elem> {
        let y = y.ok_or_else(|| Error::InvalidInput(format!("{op:?} needs two operands")))?;
        if &y.field != field {
            return Err(Error::DescriptorMismatch);
        }
        Ok(&y.value)
    };
    let value = match op {
        ArithOp::Add => field.add(&x.value, second()?),
        ArithOp::Sub => field.sub(&x.value, second()?),
        ArithOp::Mul => field.mul(&x.value, second()?),
        ArithOp::Div => field.div(&x.value, second()?)?,
        ArithOp::Neg => field.neg(&x.value),
        ArithOp::Inv => field.inv(&x.value)?,
    };
    Ok(FieldElement::new(field, value))
}

/// Searches for `(l_1, ..., l_n)` with `sum l_i^k = gamma` whose k-th powers
/// are pairwise distinct; with `require_nonzero` every `l_i` is also nonzero.
///
/// Exact fields are searched lexicographically in enumeration order (the
/// rationals over a fixed list of small fractions), the last coordinate being
/// solved by a k-th root. The reals and complex-like fields use a direct
/// construction. The result is re-checked before it is returned.
pub fn regular_solution_search(
    field: &Field,
    k: u32,
    n: usize,
    gamma: &Elem,
    require_nonzero: bool,
) -> Result<Vec<Elem>> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidInput("n and k must be positive".into()));
    }
    let sol = if field.is_approx() {
        direct_regular_solution(field, k, n, gamma, require_nonzero)?
    } else {
        lexicographic_regular_solution(field, k, n, gamma, require_nonzero)?
    };
    if !is_regular_solution(field, k, &sol, gamma, require_nonzero) {
        return Err(Error::VerificationFailed(
            "regular solution failed its defining equations".into(),
        ));
    }
    Ok(sol)
}

/// Checks the defining equations of a (non-zero) regular solution.
pub fn is_regular_solution(
    field: &Field,
    k: u32,
    sol: &[Elem],
    gamma: &Elem,
    require_nonzero: bool,
) -> bool {
    let powers: Vec<Elem> = sol.iter().map(|x| field.pow(x, k as u64)).collect();
    let sum = powers.iter().fold(field.zero(), |acc, p| field.add(&acc, p));
    if !field.eq(&sum, gamma) {
        return false;
    }
    if require_nonzero && sol.iter().any(|x| field.is_zero(x)) {
        return false;
    }
    for i in 0..powers.len() {
        for j in 0..i {
            if field.eq(&powers[i], &powers[j]) {
                return false;
            }
        }
    }
    true
}

fn small_rationals() -> Vec<BigRational> {
    let mut out = vec![BigRational::zero()];
    for h in 1i64..=8 {
        for num in 1..=h {
            let den = h - num + 1;
            if num.gcd(&den) != 1 {
                continue;
            }
            let r = BigRational::new(BigInt::from(num), BigInt::from(den));
            out.push(r.clone());
            out.push(-r);
        }
    }
    out
}

fn lexicographic_regular_solution(
    field: &Field,
    k: u32,
    n: usize,
    gamma: &Elem,
    require_nonzero: bool,
) -> Result<Vec<Elem>> {
    let candidates: Box<dyn Fn(usize) -> Option<Elem>> = if field.is_finite() {
        let q = field.cardinality().unwrap_or(u128::MAX);
        let f = field.clone();
        Box::new(move |i| ((i as u128) < q).then(|| f.element_at(i as u128)))
    } else if matches!(field.kind(), Kind::Rational) {
        let list = small_rationals();
        Box::new(move |i| list.get(i).cloned().map(Elem::Rat))
    } else {
        let list = small_rationals();
        let f = field.clone();
        let base = field.base().cloned();
        Box::new(move |i| {
            let b = base.as_ref()?;
            list.get(i).map(|r| f.embed(&b.div(&b.from_bigint(r.numer()), &b.from_bigint(r.denom())).ok().unwrap_or_else(|| b.zero())))
        })
    };
    let mut chosen: Vec<Elem> = Vec::with_capacity(n);
    let mut powers: Vec<Elem> = Vec::with_capacity(n);
    let mut budget = SEARCH_BUDGET;
    if search_level(
        field,
        k,
        n,
        gamma,
        require_nonzero,
        &*candidates,
        &mut chosen,
        &mut powers,
        &field.zero(),
        &mut budget,
    ) {
        Ok(chosen)
    } else {
        Err(Error::NotFound(format!(
            "no regular solution of x_1^{k} + ... + x_{n}^{k} = {} over {field}",
            field.format(gamma)
        )))
    }
}

#[allow(clippy::too_many_arguments)]
fn search_level(
    field: &Field,
    k: u32,
    n: usize,
    gamma: &Elem,
    require_nonzero: bool,
    candidates: &dyn Fn(usize) -> Option<Elem>,
    chosen: &mut Vec<Elem>,
    powers: &mut Vec<Elem>,
    partial: &Elem,
    budget: &mut u64,
) -> bool {
    if chosen.len() + 1 == n {
        let rest = field.sub(gamma, partial);
        if require_nonzero && field.is_zero(&rest) {
            return false;
        }
        if powers.iter().any(|p| field.eq(p, &rest)) {
            return false;
        }
        if let Some(root) = field.kth_roots(&rest, k).into_iter().next() {
            chosen.push(root);
            powers.push(rest);
            return true;
        }
        return false;
    }
    let mut i = 0;
    while let Some(x) = candidates(i) {
        i += 1;
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        if require_nonzero && field.is_zero(&x) {
            continue;
        }
        let px = field.pow(&x, k as u64);
        if powers.iter().any(|p| field.eq(p, &px)) {
            continue;
        }
        let next = field.add(partial, &px);
        chosen.push(x);
        powers.push(px);
        if search_level(
            field,
            k,
            n,
            gamma,
            require_nonzero,
            candidates,
            chosen,
            powers,
            &next,
            budget,
        ) {
            return true;
        }
        chosen.pop();
        powers.pop();
    }
    false
}

fn direct_regular_solution(
    field: &Field,
    k: u32,
    n: usize,
    gamma: &Elem,
    require_nonzero: bool,
) -> Result<Vec<Elem>> {
    let not_found = || {
        Err(Error::NotFound(format!(
            "no regular solution of x_1^{k} + ... + x_{n}^{k} = {} over {field}",
            field.format(gamma)
        )))
    };
    let g = field.to_complex(gamma);
    let real_only = !field.is_complex_like();
    if real_only && g.im.abs() > 0.0 {
        return not_found();
    }
    let zero_target = g.norm() <= field.tolerance().unwrap_or(0.0);
    if n == 1 {
        if zero_target && require_nonzero {
            return not_found();
        }
        return match field.kth_roots(gamma, k).into_iter().next() {
            Some(r) => Ok(vec![r]),
            None => not_found(),
        };
    }
    // Distinct target powers summing to gamma.
    let powers: Vec<Complex64> = if zero_target {
        if real_only && k % 2 == 0 {
            return not_found();
        }
        let mut v: Vec<Complex64> = (1..n).map(|i| Complex64::new(i as f64, 0.0)).collect();
        v.push(Complex64::new(-((n * (n - 1) / 2) as f64), 0.0));
        v
    } else {
        if real_only && k % 2 == 0 && g.re < 0.0 {
            return not_found();
        }
        let scale = 2.0 / (n * (n + 1)) as f64;
        (1..=n).map(|i| g * (i as f64 * scale)).collect()
    };
    let mut out = Vec::with_capacity(n);
    for w in powers {
        let e = field.from_complex(w)?;
        match field.kth_roots(&e, k).into_iter().next() {
            Some(r) => out.push(r),
            None => return not_found(),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn inverse_mod_seven() {
        let f = fp(7);
        assert_eq!(f.inv(&Elem::Int(3)).unwrap(), Elem::Int(5));
        // exhaustive: every nonzero element times its inverse is one
        for x in 1..7 {
            let inv = f.inv(&Elem::Int(x)).unwrap();
            assert_eq!(f.mul(&Elem::Int(x), &inv), Elem::Int(1));
        }
        assert_eq!(f.inv(&Elem::Int(0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn rational_addition() {
        let q = Field::rationals();
        let a = q.from_rational(1, 2).unwrap();
        let b = q.from_rational(1, 3).unwrap();
        assert_eq!(q.add(&a, &b), q.from_rational(5, 6).unwrap());
    }

    #[test]
    fn f4_generator_squared() {
        let f4: Field = "Fq:p=2,d=2,mod=[1,1,1]".parse().unwrap();
        let t = f4.generator().unwrap();
        let t2 = f4.mul(&t, &t);
        assert_eq!(t2, Elem::Poly(vec![Elem::Int(1), Elem::Int(1)]));
        assert_eq!(f4.cardinality(), Some(4));
    }

    #[test]
    fn kth_roots_examples() {
        let f = fp(5);
        assert_eq!(f.kth_roots(&Elem::Int(4), 2), vec![Elem::Int(2), Elem::Int(3)]);
        assert!(f.kth_roots(&Elem::Int(2), 2).is_empty());
        let q = Field::rationals();
        assert_eq!(q.kth_roots(&q.from_i64(8), 3), vec![q.from_i64(2)]);
        assert!(q.kth_roots(&q.from_i64(-4), 2).is_empty());
        assert_eq!(q.kth_roots(&q.from_rational(4, 9).unwrap(), 2).len(), 2);
    }

    #[test]
    fn kth_roots_count_matches_gcd() {
        for p in [7u64, 11, 13, 31] {
            let f = fp(p);
            for k in 1..7u32 {
                let g = num_integer::gcd(k as u64, p - 1) as usize;
                for x in 1..p {
                    let e = f.pow(&Elem::Int(x), k as u64);
                    let roots = f.kth_roots(&e, k);
                    assert_eq!(roots.len(), g);
                    assert!(roots.iter().all(|r| f.pow(r, k as u64) == e));
                }
            }
        }
    }

    #[test]
    fn large_field_roots_use_factoring() {
        let f: Field = "Fq:p=101,d=3,mod=[1,1,0,1]".parse().unwrap();
        let mut rng = rand::thread_rng();
        for _ in 0..5 {
            let x = f.random_nonzero(&mut rng);
            let e = f.pow(&x, 3);
            let roots = f.kth_roots(&e, 3);
            assert!(roots.contains(&x));
            assert!(roots.iter().all(|r| f.pow(r, 3) == e));
        }
    }

    #[test]
    fn enumerate_finite_and_infinite() {
        assert_eq!(fp(3).enumerate().unwrap().collect::<Vec<_>>().len(), 3);
        let f4: Field = "Fq:p=2,d=2,mod=[1,1,1]".parse().unwrap();
        let all: Vec<_> = f4.enumerate().unwrap().collect();
        assert_eq!(all.len(), 4);
        for (i, e) in all.iter().enumerate() {
            assert_eq!(f4.index_of(e), i as u128);
        }
        assert!(matches!(Field::rationals().enumerate().map(|_| ()), Err(Error::InfiniteField)));
    }

    #[test]
    fn extend_examples() {
        let f2 = fp(2);
        let p = Poly::from_i64s(&f2, &[1, 1, 1]);
        let (f4, a) = f2.extend(&p).unwrap();
        let val = f4.add(&f4.add(&f4.mul(&a, &a), &a), &f4.one());
        assert!(f4.is_zero(&val));

        let f5 = fp(5);
        let (f25, a) = f5.extend(&Poly::from_i64s(&f5, &[2, 0, 1])).unwrap();
        assert_eq!(f4.cardinality(), Some(4));
        assert_eq!(f25.cardinality(), Some(25));
        assert_eq!(f25.mul(&a, &a), f25.from_i64(3));

        let q = Field::rationals();
        let (qi, _) = q.extend(&Poly::from_i64s(&q, &[1, 0, 1])).unwrap();
        let half = q.from_rational(1, 2).unwrap();
        assert_eq!(qi.coords(&qi.embed(&half))[0], half);

        // reducible modulus is rejected
        assert!(matches!(
            f5.extend(&Poly::from_i64s(&f5, &[1, 0, 1])),
            Err(Error::ReduciblePolynomial(_))
        ));
        assert!(matches!(
            Field::complex(1e-9).unwrap().extend(&Poly::from_i64s(&Field::complex(1e-9).unwrap(), &[1, 0, 1])),
            Err(Error::UnsupportedBase(_))
        ));
    }

    #[test]
    fn regular_solution_examples() {
        let f7 = fp(7);
        let sol = regular_solution_search(&f7, 2, 3, &Elem::Int(0), false).unwrap();
        assert_eq!(sol, vec![Elem::Int(1), Elem::Int(2), Elem::Int(3)]);
        let f5 = fp(5);
        let sol = regular_solution_search(&f5, 2, 2, &Elem::Int(1), false).unwrap();
        assert_eq!(sol, vec![Elem::Int(0), Elem::Int(1)]);
        let sol = regular_solution_search(&f7, 1, 2, &Elem::Int(4), false).unwrap();
        assert_eq!(sol, vec![Elem::Int(0), Elem::Int(4)]);
        // F_3: squares are {0, 1}, so three distinct squares cannot exist
        assert!(matches!(
            regular_solution_search(&fp(3), 2, 3, &Elem::Int(1), false),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn regular_solutions_over_reals_and_complexes() {
        let r = Field::real(1e-9).unwrap();
        let sol = regular_solution_search(&r, 2, 4, &r.from_i64(1), true).unwrap();
        assert!(is_regular_solution(&r, 2, &sol, &r.from_i64(1), true));
        assert!(regular_solution_search(&r, 2, 3, &r.from_i64(-1), false).is_err());
        let sol = regular_solution_search(&r, 3, 3, &r.from_i64(-1), true).unwrap();
        assert_eq!(sol.len(), 3);
        let c = Field::complex(1e-9).unwrap();
        let sol = regular_solution_search(&c, 4, 5, &c.zero(), true).unwrap();
        assert!(is_regular_solution(&c, 4, &sol, &c.zero(), true));
    }

    #[test]
    fn field_spec_round_trip() {
        for s in ["Fp:7", "Fq:p=2,d=2,mod=[1,1,1]", "Q", "R:tol=1e-9", "C:tol=1e-6"] {
            let f: Field = s.parse().unwrap();
            let again: Field = f.to_string().parse().unwrap();
            assert_eq!(f, again);
        }
        assert!("Fp:8".parse::<Field>().is_err());
        assert!("Fq:p=2,d=2,mod=[1,0,1]".parse::<Field>().is_err());
        assert!("R:tol=0".parse::<Field>().is_err());
    }

    #[test]
    fn checked_arith() {
        let f7 = fp(7);
        let x = FieldElement::new(&f7, Elem::Int(3));
        let inv = arith(ArithOp::Inv, &x, None).unwrap();
        assert_eq!(inv.value, Elem::Int(5));
        let y = FieldElement::new(&fp(5), Elem::Int(1));
        assert_eq!(arith(ArithOp::Add, &x, Some(&y)).unwrap_err(), Error::DescriptorMismatch);
        let z = FieldElement::new(&f7, Elem::Int(0));
        assert_eq!(arith(ArithOp::Div, &x, Some(&z)).unwrap_err(), Error::DivisionByZero);
    }
}
