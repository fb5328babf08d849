//! Factorization of univariate polynomials.
//!
//! Finite fields get a full factorization (squarefree decomposition,
//! distinct-degree, then randomized equal-degree splitting). Over the
//! rationals only rational roots and small-degree splits are extracted.
//! Approximate fields have a separate numerical routine,
//! [`approx_factor`].

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field, Kind};
use crate::poly::Poly;

#[derive(Clone, Debug)]
pub struct Factorization {
    /// Monic irreducible factors with multiplicities.
    pub factors: Vec<(Poly, usize)>,
    pub unit: Elem,
    /// Set when some factor over Q has degree at least 4 and no rational
    /// root, so its irreducibility was not certified.
    pub irreducible_unverified: bool,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self, field: &Field) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(field, self.unit.clone()), |acc, (p, m)| {
                acc.mul(&p.pow(*m as u64))
            })
    }
}

/// Factors `f` over a finite field or Q. The seed drives equal-degree
/// splitting.
pub fn factor(f: &Poly, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = f.field();
    let unit = f.lead().clone();
    let monic = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unverified = false;
    let mut factors = Vec::new();
    if field.is_finite() {
        for (g, m) in squarefree_finite(&monic) {
            for (h, d) in distinct_degree(&g) {
                for irr in equal_degree(&h, d, &mut rng) {
                    factors.push((irr, m));
                }
            }
        }
    } else if matches!(field.kind(), Kind::Rational) {
        for (g, m) in squarefree_char0(&monic) {
            let (parts, flag) = split_rational(&g);
            unverified |= flag;
            for p in parts {
                factors.push((p, m));
            }
        }
    } else if field.is_approx() {
        return Err(Error::UnsupportedField(format!("{field}")));
    } else {
        return Err(Error::FactorizationUnavailable(format!(
            "no factorization routine over {field}"
        )));
    }
    merge_and_sort(&mut factors);
    Ok(Factorization {
        factors,
        unit,
        irreducible_unverified: unverified,
    })
}

fn sort_key(p: &Poly) -> (usize, Vec<String>) {
    let f = p.field();
    // linear factors are ordered by their root
    let root;
    let coeffs: &[Elem] = if p.degree() == Some(1) {
        root = [f.neg(&p.coeff(0))];
        &root
    } else {
        p.coeffs()
    };
    let keys = coeffs
        .iter()
        .map(|c| {
            if f.is_finite() {
                format!("{:040}", f.index_of(c))
            } else {
                f.format(c)
            }
        })
        .collect();
    (p.degree().unwrap_or(0), keys)
}

fn merge_and_sort(factors: &mut Vec<(Poly, usize)>) {
    let mut merged: Vec<(Poly, usize)> = Vec::new();
    for (p, m) in factors.drain(..) {
        if let Some(slot) = merged.iter_mut().find(|(q, _)| *q == p) {
            slot.1 += m;
        } else {
            merged.push((p, m));
        }
    }
    merged.sort_by_key(|(p, _)| sort_key(p));
    *factors = merged;
}

/// True when every irreducible factor `g` satisfies `gcd(g, g') = 1`.
/// Approximate fields have characteristic zero and are reported separable.
pub fn is_separable(f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.field().is_approx() {
        return Ok(true);
    }
    let fac = match factor(f, 0) {
        Ok(fac) => fac,
        Err(Error::FactorizationUnavailable(_)) => return Ok(f.field().characteristic() == 0),
        Err(e) => return Err(e),
    };
    Ok(fac
        .factors
        .iter()
        .all(|(g, _)| g.gcd(&g.derivative()).degree() == Some(0)))
}

/// Irreducibility over a finite field or Q; over Q a rootless residual of
/// degree 4 or more is accepted.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Ok(false);
    }
    let fac = factor(f, 0)?;
    Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
}

/// Distinct roots of `f` in its field (finite fields and Q).
pub fn roots(f: &Poly, seed: u64) -> Result<Vec<Elem>> {
    let fac = factor(f, seed)?;
    let field = f.field();
    Ok(fac
        .factors
        .iter()
        .filter(|(p, _)| p.degree() == Some(1))
        .map(|(p, _)| field.neg(&p.coeff(0)))
        .collect())
}

/// Squarefree decomposition in characteristic zero (Yun).
fn squarefree_char0(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    let a = f.gcd(&d);
    let mut b = f.exact_div(&a).expect("gcd divides");
    let mut c = d.exact_div(&a).expect("gcd divides");
    let mut i = 1;
    loop {
        let dd = c.sub(&b.derivative());
        let g = b.gcd(&dd);
        if g.degree() != Some(0) {
            out.push((g.clone(), i));
        }
        b = b.exact_div(&g).expect("gcd divides");
        if b.degree() == Some(0) {
            break;
        }
        c = dd.exact_div(&g).expect("gcd divides");
        i += 1;
    }
    out
}

/// `x^(1/p)` in a finite field of characteristic p.
fn frobenius_root(field: &Field, x: &Elem) -> Elem {
    let q = field.order().expect("finite field");
    let p = BigUint::from(field.characteristic());
    field.pow_big(x, &(q / p))
}

/// Squarefree decomposition over a finite field.
fn squarefree_finite(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let p = field.characteristic() as usize;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    let pth_root = |c: &Poly| -> Poly {
        let coeffs: Vec<Elem> = c
            .coeffs()
            .iter()
            .step_by(p)
            .map(|x| frobenius_root(field, x))
            .collect();
        Poly::new(field, coeffs)
    };
    if d.is_zero() {
        for (g, m) in squarefree_finite(&pth_root(f)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut i = 1;
    while w.degree() != Some(0) {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y).expect("gcd divides");
        if fac.degree() != Some(0) {
            out.push((fac, i));
        }
        w = y.clone();
        c = c.exact_div(&y).expect("gcd divides");
        i += 1;
    }
    if c.degree() != Some(0) {
        for (g, m) in squarefree_finite(&pth_root(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of
/// equal degree.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let q = field.order().expect("finite field");
    let x = Poly::monomial(field, 1);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(&q, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree() != Some(0) {
            rest = rest.exact_div(&g).expect("gcd divides");
            h = h.rem(&rest).expect("nonzero");
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest.monic(), deg));
        }
    }
    out
}

fn random_poly(field: &Field, below: usize, rng: &mut ChaCha8Rng) -> Poly {
    Poly::new(field, (0..below).map(|_| field.random(rng)).collect())
}

/// Splits a product of distinct irreducibles of degree `d` into its
/// factors.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return vec![f.monic()];
    }
    let field = f.field();
    let q = field.order().expect("finite field");
    let odd = field.characteristic() != 2;
    loop {
        let a = random_poly(field, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if odd {
            let e = (q.pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            a.pow_mod(&e, f).sub(&Poly::one(field))
        } else {
            // Trace map: a + a^2 + a^4 + ... over all q^d.
            let bits = field.absolute_degree() * d;
            let mut t = a.rem(f).expect("nonzero");
            let mut acc = t.clone();
            for _ in 1..bits {
                t = t.mul_mod(&t, f);
                acc = acc.add(&t);
            }
            acc
        };
        let g = f.gcd(&b);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let h = f.exact_div(&g).expect("gcd divides");
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

fn rat(e: &Elem) -> BigRational {
    match e {
        Elem::Rat(r) => r.clone(),
        _ => panic!("expected a rational"),
    }
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Some(vec![]);
    }
    let small = n.to_u64()?;
    if small > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= small {
        if small % i == 0 {
            out.push(BigInt::from(i));
            if i * i != small {
                out.push(BigInt::from(small / i));
            }
        }
        i += 1;
    }
    Some(out)
}

/// Integer coefficients with the same roots as a rational polynomial.
fn integer_coeffs(f: &Poly) -> Vec<BigInt> {
    let coeffs: Vec<BigRational> = f.coeffs().iter().map(rat).collect();
    let l = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn rational_root(f: &Poly) -> Option<BigRational> {
    let field = f.field();
    if field.is_zero(&f.coeff(0)) {
        return Some(BigRational::zero());
    }
    let ints = integer_coeffs(f);
    let a0 = ints.first()?;
    let an = ints.last()?;
    let ps = divisors(a0)?;
    let qs = divisors(an)?;
    for p in &ps {
        for q in &qs {
            for s in [1, -1] {
                let r = BigRational::new(p * BigInt::from(s), q.clone());
                if field.is_zero(&f.eval(&Elem::Rat(r.clone()))) {
                    return Some(r);
                }
            }
        }
    }
    None
}

/// Splits a squarefree monic rational polynomial as far as rational roots
/// allow. The flag is set when a residual of degree >= 4 remains.
fn split_rational(f: &Poly) -> (Vec<Poly>, bool) {
    let field = f.field();
    let mut out = Vec::new();
    let mut rest = f.clone();
    while rest.degree().unwrap_or(0) >= 1 {
        match rational_root(&rest) {
            Some(r) => {
                let lin = Poly::linear(field, &Elem::Rat(r));
                rest = rest.exact_div(&lin).expect("root divides");
                out.push(lin);
            }
            None => break,
        }
    }
    let mut flag = false;
    if let Some(d) = rest.degree() {
        if d > 0 {
            flag = d >= 4;
            out.push(rest.monic());
        }
    }
    (out, flag)
}

/// Irreducible factors over an approximate field, found numerically.
///
/// Over C every factor is linear. Over R conjugate pairs become monic
/// quadratics. Clustered roots are merged and counted as a multiple root.
pub fn approx_factor(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let field = f.field();
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    let real = matches!(field.kind(), Kind::Real { .. });
    if !real && !matches!(field.kind(), Kind::Complex { .. }) {
        return Err(Error::UnsupportedField(format!("{field}")));
    }
    if n == 0 {
        return Ok(vec![]);
    }
    let coeffs: Vec<Complex64> = f.coeffs().iter().map(|c| field.to_complex(c)).collect();
    let tol = field.tolerance().unwrap_or(1e-9);
    let roots = aberth(&coeffs);
    let clusters = cluster_roots(&coeffs, &roots, tol);
    let mut out: Vec<(Poly, usize)> = Vec::new();
    for (z, m) in clusters {
        if real {
            let scale = 1.0 + z.norm();
            if z.im.abs() <= tol.sqrt().max(1e-6) * scale {
                out.push((Poly::linear(field, &Elem::Real(z.re)), m));
            } else if z.im > 0.0 {
                // each conjugate pair appears twice among the clusters
                let q = Poly::new(
                    field,
                    vec![Elem::Real(z.norm_sqr()), Elem::Real(-2.0 * z.re), Elem::Real(1.0)],
                );
                out.push((q, m));
            }
        } else {
            out.push((Poly::linear(field, &Elem::Complex(z)), m));
        }
    }
    out.sort_by(|a, b| {
        let ka: Vec<f64> = a.0.coeffs().iter().map(|c| field.to_complex(c).re).collect();
        let kb: Vec<f64> = b.0.coeffs().iter().map(|c| field.to_complex(c).re).collect();
        (a.0.degree(), ka)
            .partial_cmp(&(b.0.degree(), kb))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

fn eval_c(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Simultaneous root iteration (Aberth–Ehrlich).
fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0
        + monic[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.7, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval_c(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::zero();
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        s += diff.inv();
                    }
                }
            }
            let denom = Complex64::one() - ratio * s;
            let w = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// A root of multiplicity `m` is a simple root of the `(m-1)`-th
/// derivative, where Newton's method converges to full precision.
fn polish_multiple_root(coeffs: &[Complex64], z0: Complex64, m: usize, radius: f64) -> Complex64 {
    if m < 2 {
        return z0;
    }
    let mut d = coeffs.to_vec();
    for _ in 1..m {
        d = d
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * i as f64)
            .collect();
    }
    let mut z = z0;
    for _ in 0..8 {
        let (v, dv) = eval_c(&d, z);
        if dv.norm() == 0.0 {
            break;
        }
        z -= v / dv;
    }
    if z.is_finite() && (z - z0).norm() <= radius * (1.0 + z0.norm()) {
        z
    } else {
        z0
    }
}

fn cluster_roots(coeffs: &[Complex64], roots: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let radius = tol.sqrt().max(1e-6);
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![roots[i]];
        used[i] = true;
        // grow the cluster transitively
        let mut changed = true;
        while changed {
            changed = false;
            for j in 0..roots.len() {
                if used[j] {
                    continue;
                }
                if members
                    .iter()
                    .any(|m| (m - roots[j]).norm() <= radius * (1.0 + m.norm()))
                {
                    members.push(roots[j]);
                    used[j] = true;
                    changed = true;
                }
            }
        }
        let mean = members.iter().sum::<Complex64>() / members.len() as f64;
        out.push((polish_multiple_root(coeffs, mean, members.len(), radius), members.len()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn char_two_square() {
        let f = fp(2);
        let p = Poly::from_i64s(&f, &[0, 0, 1, 0, 1]);
        let fac = factor(&p, 1).unwrap();
        assert_eq!(
            fac.factors,
            vec![
                (Poly::from_i64s(&f, &[0, 1]), 2),
                (Poly::from_i64s(&f, &[1, 1]), 2)
            ]
        );
    }

    #[test]
    fn splits_over_f5() {
        let f = fp(5);
        let fac = factor(&Poly::from_i64s(&f, &[1, 0, 1]), 7).unwrap();
        assert_eq!(
            fac.factors,
            vec![
                (Poly::from_i64s(&f, &[3, 1]), 1),
                (Poly::from_i64s(&f, &[2, 1]), 1)
            ]
        );
    }

    #[test]
    fn rational_cases() {
        let q = Field::rationals();
        let fac = factor(&Poly::from_i64s(&q, &[1, 0, 1]), 0).unwrap();
        assert_eq!(fac.factors.len(), 1);
        assert!(!fac.irreducible_unverified);
        // 2(T - 1/2)^2 (T^2 + 1)
        let p = Poly::from_i64s(&q, &[1, -2, 2])
            .mul(&Poly::from_i64s(&q, &[1, 0, 1]));
        let fac = factor(&p, 0).unwrap();
        assert_eq!(fac.expand(&q), p);
        let quartic = factor(&Poly::from_i64s(&q, &[2, 0, 0, 0, 1]), 0).unwrap();
        assert!(quartic.irreducible_unverified);
    }

    #[test]
    fn separability() {
        let q = Field::rationals();
        assert!(is_separable(&Poly::from_i64s(&q, &[1, -2, 1])).unwrap());
        assert!(is_separable(&Poly::from_i64s(&fp(2), &[0, 1, 0, 1])).unwrap());
        assert_eq!(is_separable(&Poly::zero(&q)).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn extension_field_factoring() {
        let f4: Field = "Fq:p=2,d=2,mod=[1,1,1]".parse().unwrap();
        // T^4 - T splits completely over F_4
        let mut c = vec![f4.zero(); 5];
        c[1] = f4.from_i64(1);
        c[4] = f4.one();
        let fac = factor(&Poly::new(&f4, c), 3).unwrap();
        assert_eq!(fac.factors.len(), 4);
        assert!(fac.factors.iter().all(|(p, m)| p.degree() == Some(1) && *m == 1));
    }

    #[test]
    fn numerical_factors() {
        let r = Field::real(1e-9).unwrap();
        // (T - 1)^2 (T^2 + 1)
        let p = Poly::from_i64s(&r, &[1, -2, 2, -2, 1]);
        let fac = approx_factor(&p).unwrap();
        assert_eq!(fac.len(), 2);
        assert_eq!(fac[0].1, 2);
        assert_eq!(fac[1].0.degree(), Some(2));
    }

    proptest! {
        #[test]
        fn refactoring_reproduces_product(
            p in prop::sample::select(vec![2u64, 3, 7]),
            coeffs in prop::collection::vec(0i64..7, 1..9),
            seed in 0u64..1000,
        ) {
            let f = fp(p);
            let mut coeffs = coeffs;
            coeffs.push(1);
            let poly = Poly::from_i64s(&f, &coeffs);
            let fac = factor(&poly, seed).unwrap();
            prop_assert_eq!(fac.expand(&f), poly.clone());
            for (g, _) in &fac.factors {
                prop_assert!(g.is_monic());
                let again = factor(g, seed + 1).unwrap();
                prop_assert_eq!(again.factors.len(), 1);
                prop_assert_eq!(again.factors[0].1, 1);
            }
            prop_assert!(is_separable(&poly).unwrap());
        }
    }
}
