//! Univariate polynomials over a [`Field`], coefficients low to high.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, Debug)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.coeffs.len() == other.coeffs.len()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| self.field.eq(a, b))
    }
}

impl Poly {
    /// Builds a polynomial, dropping vanishing leading coefficients.
    pub fn new(field: &Field, coeffs: Vec<Elem>) -> Poly {
        let mut p = Poly {
            field: field.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn from_i64s(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, vec![])
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, field.one())
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// `T^k`.
    pub fn monomial(field: &Field, k: usize) -> Poly {
        let mut v = vec![field.zero(); k + 1];
        v[k] = field.one();
        Poly::new(field, v)
    }

    /// `T - r`.
    pub fn linear(field: &Field, r: &Elem) -> Poly {
        Poly::new(field, vec![field.neg(r), field.one()])
    }

    fn trim(&mut self) {
        while let Some(c) = self.coeffs.last() {
            if self.field.is_zero(c) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient; panics on the zero polynomial.
    pub fn lead(&self) -> &Elem {
        self.coeffs.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.field.is_one(self.lead())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero lead");
        let mut p = self.scale(&inv);
        let n = p.coeffs.len();
        p.coeffs[n - 1] = self.field.one();
        p
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            f,
            (0..n)
                .map(|i| f.add(&self.coeff(i), &other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs.iter().map(|x| self.field.mul(x, c)).collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut r = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Multiplies by `T^k`.
    pub fn shift(&self, k: usize) -> Poly {
        let mut v = vec![self.field.zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly::new(&self.field, v)
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let f = &self.field;
        let dd = d.degree().ok_or(Error::ZeroPolynomial)?;
        let inv_lead = f.inv(d.lead())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(&rem[i + dd], &inv_lead);
            if f.is_zero(&c) {
                rem[i + dd] = f.zero();
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(&rem[i + j], &f.mul(&c, dc));
            }
            rem[i + dd] = f.zero();
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::InvalidInput(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    /// Monic gcd; zero when both inputs are zero.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let g = self.gcd(other);
        self.mul(other).exact_div(&g).expect("gcd divides").monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` a gcd (not
    /// necessarily monic).
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        (r0, s0, t0)
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        Poly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
                .collect(),
        )
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m).expect("nonzero modulus")
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Poly {
        let base = self.rem(m).expect("nonzero modulus");
        let mut r = Poly::one(&self.field).rem(m).expect("nonzero modulus");
        for i in (0..e.bits()).rev() {
            r = r.mul_mod(&r, m);
            if e.bit(i) {
                r = r.mul_mod(&base, m);
            }
        }
        r
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(&self.field), |acc, c| {
                acc.mul(g).add(&Poly::constant(&self.field, c.clone()))
            })
    }

    /// Maps every coefficient through `f` into another field.
    pub fn map(&self, target: &Field, f: impl Fn(&Elem) -> Elem) -> Poly {
        Poly::new(target, self.coeffs.iter().map(f).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(fm, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let cs = self.field.format(c);
            let term = match (i, self.field.is_one(c)) {
                (0, _) => cs,
                (1, true) => "T".to_string(),
                (1, false) => format!("{cs}*T"),
                (_, true) => format!("T^{i}"),
                (_, false) => format!("{cs}*T^{i}"),
            };
            terms.push(term);
        }
        write!(fm, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        let f = Field::prime(7).unwrap();
        let a = Poly::from_i64s(&f, &[3, 0, 5, 1, 2]);
        let b = Poly::from_i64s(&f, &[1, 4, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_and_bezout() {
        let q = Field::rationals();
        // (T-1)(T-2) and (T-1)(T+3)
        let a = Poly::from_i64s(&q, &[2, -3, 1]);
        let b = Poly::from_i64s(&q, &[-3, 2, 1]);
        assert_eq!(a.gcd(&b), Poly::from_i64s(&q, &[-1, 1]));
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn pow_mod_matches_repeated_multiplication() {
        let f = Field::prime(5).unwrap();
        let x = Poly::monomial(&f, 1);
        let m = Poly::from_i64s(&f, &[2, 0, 0, 1]);
        let direct = x.pow(13).rem(&m).unwrap();
        assert_eq!(x.pow_mod(&BigUint::from(13u32), &m), direct);
    }

    #[test]
    fn derivative_in_characteristic_p() {
        let f = Field::prime(3).unwrap();
        let p = Poly::from_i64s(&f, &[1, 0, 0, 1]);
        assert!(p.derivative().is_zero());
    }

    #[test]
    fn division_by_zero_poly() {
        let f = Field::prime(3).unwrap();
        let p = Poly::from_i64s(&f, &[1, 1]);
        assert_eq!(p.div_rem(&Poly::zero(&f)).unwrap_err(), Error::ZeroPolynomial);
    }
}
