//! Diagonal words `d1 X1^k1 + ... + dm Xm^km`.
//!
//! Each Jordan block of the target is handled over the field generated by
//! its eigenvalue. Invertible blocks are split into two upper triangular
//! matrices with distinct diagonals, large nilpotent blocks use a power of
//! the Jordan block plus a junction matrix, and small nilpotent blocks use a
//! pair of bordered matrices whose characteristic polynomials are prescribed.

use crate::error::{Error, Result};
use crate::field::{regular_solution_search, Elem, Field, Kind};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::reduction;
use crate::word::WordSpec;

const SCALAR_SEARCH_CAP: u128 = 1 << 16;

#[derive(Clone, Debug)]
pub struct DiagonalWordSpec {
    pub field: Field,
    /// `(delta_i, k_i)`.
    pub terms: Vec<(Elem, u32)>,
}

impl DiagonalWordSpec {
    pub fn new(field: &Field, terms: Vec<(Elem, u32)>) -> Result<DiagonalWordSpec> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("a diagonal word needs at least one term".into()));
        }
        for (d, k) in &terms {
            if field.is_zero(d) {
                return Err(Error::InvalidInput("coefficients must be nonzero".into()));
            }
            if *k == 0 {
                return Err(Error::InvalidInput("exponents must be positive".into()));
            }
        }
        Ok(DiagonalWordSpec {
            field: field.clone(),
            terms,
        })
    }

    pub fn evaluate(&self, xs: &[Matrix]) -> Result<Matrix> {
        if xs.len() != self.terms.len() {
            return Err(Error::InvalidInput(format!(
                "word has {} terms, got {} matrices",
                self.terms.len(),
                xs.len()
            )));
        }
        let n = xs[0].rows();
        let f = xs[0].field();
        if f != &self.field {
            return Err(Error::DescriptorMismatch);
        }
        let mut acc = Matrix::zeros(f, n, n);
        for ((d, k), x) in self.terms.iter().zip(xs) {
            if !x.is_square() || x.rows() != n {
                return Err(Error::DimensionMismatch(format!("expected {n}x{n}")));
            }
            acc = acc.add(&x.pow(*k as u64).scale(d));
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug)]
pub struct JunctionSpec {
    pub partition: Vec<usize>,
    pub realization: Matrix,
}

/// Which side of a bordered matrix is prescribed.
#[derive(Clone, Debug)]
pub enum GivenSide {
    /// The last row, with nonzero first entry.
    Y(Vec<Elem>),
    /// The last column, with nonzero last entry.
    X(Vec<Elem>),
}

/// `M = [[eps * J_{0,n-1}, x], [y, z]]` together with the elementary
/// symmetric values of its prescribed spectrum.
#[derive(Clone, Debug)]
pub struct BorderedSpec {
    pub eps: Elem,
    pub x: Vec<Elem>,
    pub y: Vec<Elem>,
    pub z: Elem,
    /// `E_0, ..., E_n` of the prescribed eigenvalues.
    pub e_values: Vec<Elem>,
    pub realization: Matrix,
}

#[derive(Clone, Debug)]
pub struct DiagonalWitness {
    pub matrices: Vec<Matrix>,
    pub diagonalizable: Vec<bool>,
    pub conjugators: Vec<Matrix>,
}

fn rational_candidates(f: &Field) -> Vec<Elem> {
    let mut out = Vec::new();
    for (num, den) in [(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1), (-3, 1), (1, 3), (-1, 3), (3, 2), (-3, 2), (2, 3), (-2, 3), (4, 1), (-4, 1), (1, 4), (-1, 4)] {
        if let Ok(e) = f.from_rational(num, den) {
            out.push(e);
        }
    }
    out
}

/// Two solutions `(a,b)`, `(c,d)` of `x^k1 + beta y^k2 = alpha` with
/// `a^k1 != c^k1` and `b^k2 != d^k2`.
pub fn scalar_two_solutions(
    f: &Field,
    alpha: &Elem,
    k1: u32,
    k2: u32,
    beta: &Elem,
) -> Result<((Elem, Elem), (Elem, Elem))> {
    if f.is_zero(beta) {
        return Err(Error::InvalidInput("beta must be nonzero".into()));
    }
    let solve_b = |a: &Elem| -> Option<Elem> {
        let r = f.div(&f.sub(alpha, &f.pow(a, k1 as u64)), beta).ok()?;
        f.kth_roots(&r, k2).into_iter().next()
    };
    let solve_a = |b: &Elem| -> Option<Elem> {
        let r = f.sub(alpha, &f.mul(beta, &f.pow(b, k2 as u64)));
        f.kth_roots(&r, k1).into_iter().next()
    };
    let pair = if f.is_finite() {
        let q = f.cardinality().unwrap_or(u128::MAX).min(SCALAR_SEARCH_CAP);
        let mut first: Option<(Elem, Elem)> = None;
        let mut found = None;
        for i in 0..q {
            let a = f.element_at(i);
            let Some(b) = solve_b(&a) else { continue };
            match &first {
                None => first = Some((a, b)),
                Some((a0, _)) => {
                    if !f.eq(&f.pow(a0, k1 as u64), &f.pow(&a, k1 as u64)) {
                        found = Some((a, b));
                        break;
                    }
                }
            }
        }
        match (first, found) {
            (Some(s), Some(t)) => (s, t),
            _ => {
                return Err(Error::NotFound(format!(
                    "x^{k1} + {} y^{k2} = {} has fewer than two usable solutions over {f}",
                    f.format(beta),
                    f.format(alpha)
                )))
            }
        }
    } else if f.is_complex_like() || matches!(f.kind(), Kind::Complex { .. }) {
        let a = f.one();
        let c = f.from_i64(2);
        let b = solve_b(&a).ok_or(Error::WitnessNotFound)?;
        let d = solve_b(&c).ok_or(Error::WitnessNotFound)?;
        ((a, b), (c, d))
    } else if matches!(f.kind(), Kind::Real { .. }) {
        if k2 % 2 == 1 {
            let (a, c) = (f.zero(), f.one());
            let b = solve_b(&a).ok_or(Error::WitnessNotFound)?;
            let d = solve_b(&c).ok_or(Error::WitnessNotFound)?;
            ((a, b), (c, d))
        } else if k1 % 2 == 1 {
            let (b, d) = (f.zero(), f.one());
            let a = solve_a(&b).ok_or(Error::WitnessNotFound)?;
            let c = solve_a(&d).ok_or(Error::WitnessNotFound)?;
            ((a, b), (c, d))
        } else {
            return Err(Error::Unsupported(
                "both exponents even over the reals".into(),
            ));
        }
    } else {
        // characteristic zero exact fields: small rational candidates on
        // either coordinate
        let cands = rational_candidates(f);
        let mut sols: Vec<(Elem, Elem)> = Vec::new();
        for a in &cands {
            if let Some(b) = solve_b(a) {
                sols.push((a.clone(), b));
            }
        }
        for b in &cands {
            if let Some(a) = solve_a(b) {
                sols.push((a, b.clone()));
            }
        }
        let mut pick = None;
        'outer: for i in 0..sols.len() {
            for j in i + 1..sols.len() {
                if !f.eq(&f.pow(&sols[i].0, k1 as u64), &f.pow(&sols[j].0, k1 as u64)) {
                    pick = Some((sols[i].clone(), sols[j].clone()));
                    break 'outer;
                }
            }
        }
        pick.ok_or_else(|| {
            Error::NotFound(format!(
                "no pair of small solutions of x^{k1} + {} y^{k2} = {} over {f}",
                f.format(beta),
                f.format(alpha)
            ))
        })?
    };
    let ((a, b), (c, d)) = &pair;
    let val = |x: &Elem, y: &Elem| f.add(&f.pow(x, k1 as u64), &f.mul(beta, &f.pow(y, k2 as u64)));
    let ok = f.eq(&val(a, b), alpha)
        && f.eq(&val(c, d), alpha)
        && !f.eq(&f.pow(a, k1 as u64), &f.pow(c, k1 as u64))
        && !f.eq(&f.pow(b, k2 as u64), &f.pow(d, k2 as u64));
    if !ok {
        return Err(Error::VerificationFailed("scalar solutions failed their equations".into()));
    }
    Ok(pair)
}

/// The two upper triangular summands `G + H = J_{alpha,n}`: `G` carries the
/// values `a^k1, c^k1` alternately on its diagonal and `H` the values
/// `beta b^k2, beta d^k2`.
pub fn jordan_split(
    f: &Field,
    n: usize,
    (a, b): (&Elem, &Elem),
    (c, d): (&Elem, &Elem),
    k1: u32,
    k2: u32,
    beta: &Elem,
) -> (Matrix, Matrix) {
    let u = f.pow(a, k1 as u64);
    let v = f.pow(c, k1 as u64);
    let bb = f.mul(beta, &f.pow(b, k2 as u64));
    let dd = f.mul(beta, &f.pow(d, k2 as u64));
    let mut g = Matrix::zeros(f, n, n);
    let mut h = Matrix::zeros(f, n, n);
    for i in 0..n {
        g.set(i, i, if i % 2 == 0 { u.clone() } else { v.clone() });
        h.set(i, i, if i % 2 == 0 { bb.clone() } else { dd.clone() });
        if i + 1 < n {
            if i % 2 == 0 {
                g.set(i, i + 1, f.one());
            } else {
                h.set(i, i + 1, f.one());
            }
        }
    }
    (g, h)
}

/// `W` with `W^k = m` for an upper bidiagonal `m` whose 2x2 diagonal blocks
/// starting at `start` (0 or 1) have distinct diagonal entries: each block
/// `[[u, w], [0, v]]` equals `S diag(u, v) S^{-1}` with `S = [[1, w], [0, v - u]]`.
fn bidiagonal_root(m: &Matrix, roots: &[Elem], start: usize) -> Result<Matrix> {
    let f = m.field();
    let n = m.rows();
    let mut s = Matrix::identity(f, n);
    let mut i = start;
    while i + 1 < n {
        let u = m.get(i, i);
        let v = m.get(i + 1, i + 1);
        s.set(i, i + 1, m.get(i, i + 1).clone());
        s.set(i + 1, i + 1, f.sub(v, u));
        i += 2;
    }
    let w = s.mul(&Matrix::diag(f, roots)).mul(&s.inverse()?);
    Ok(w)
}

/// `(B, C)` with `B^k1 + beta C^k2 = J_{alpha,n}`, both diagonalizable.
pub fn invertible_jordan_decompose(
    f: &Field,
    alpha: &Elem,
    n: usize,
    k1: u32,
    k2: u32,
    beta: &Elem,
) -> Result<(Matrix, Matrix)> {
    if n == 0 {
        return Err(Error::SizeTooSmall("n must be positive".into()));
    }
    let ((a, b), (c, d)) = scalar_two_solutions(f, alpha, k1, k2, beta)?;
    let (g, h) = jordan_split(f, n, (&a, &b), (&c, &d), k1, k2, beta);
    let groots: Vec<Elem> = (0..n).map(|i| if i % 2 == 0 { a.clone() } else { c.clone() }).collect();
    let hroots: Vec<Elem> = (0..n).map(|i| if i % 2 == 0 { b.clone() } else { d.clone() }).collect();
    let bm = bidiagonal_root(&g, &groots, 0)?;
    let binv = f.inv(beta)?;
    let cm = bidiagonal_root(&h.scale(&binv), &hroots, 1)?;
    let target = Matrix::jordan_scalar(f, alpha, n);
    if !bm.pow(k1 as u64).add(&cm.pow(k2 as u64).scale(beta)).approx_eq(&target) {
        return Err(Error::VerificationFailed("invertible block decomposition".into()));
    }
    Ok((bm, cm))
}

fn check_partition(parts: &[usize]) -> Result<usize> {
    if parts.is_empty() || parts.contains(&0) {
        return Err(Error::InvalidInput("partition parts must be positive".into()));
    }
    if parts.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidInput("partition must be weakly increasing".into()));
    }
    Ok(parts.iter().sum())
}

/// Boundary positions `(s - 1, s)` (0-based) of consecutive parts.
fn junction_positions(parts: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut acc = 0;
    for p in &parts[..parts.len() - 1] {
        acc += p;
        out.push(acc);
    }
    out
}

pub fn junction_matrix(f: &Field, parts: &[usize]) -> Result<JunctionSpec> {
    let n = check_partition(parts)?;
    let mut m = Matrix::zeros(f, n, n);
    for s in junction_positions(parts) {
        m.set(s - 1, s, f.one());
    }
    Ok(JunctionSpec {
        partition: parts.to_vec(),
        realization: m,
    })
}

/// Block sizes of `J_{0,n}^k`, weakly increasing.
pub fn nilpotent_power_partition(n: usize, k: usize) -> Vec<usize> {
    assert!(n >= 1 && k >= 1, "n and k must be positive");
    let lo = n / k;
    let hi = n.div_ceil(k);
    let m = n % k;
    let mut parts = vec![lo; k - m];
    parts.extend(std::iter::repeat(hi).take(m));
    parts.retain(|&p| p > 0);
    parts
}

/// `B` with `beta B^k` equal to the junction matrix of `parts`.
///
/// The junction matrix has one 2-chain per boundary. A nilpotent Jordan
/// block of size `k + t` (`1 <= t <= k`) has a `k`-th power with exactly
/// `t` chains of length 2, so boundaries are grouped greedily into chunks of
/// at most `k` and each chunk becomes one such block, padded with unused
/// coordinates.
pub fn junction_as_scaled_power(f: &Field, parts: &[usize], k: u32, beta: &Elem) -> Result<Matrix> {
    let n = check_partition(parts)?;
    if parts.iter().any(|&p| p < 2) {
        return Err(Error::PartitionTooSmall(format!("parts {parts:?} must all be at least 2")));
    }
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let j = junction_matrix(f, parts)?.realization;
    let binv = f.inv(beta)?;
    if k == 1 {
        return Ok(j.scale(&binv));
    }
    let k = k as usize;
    let bounds = junction_positions(parts);
    let r = bounds.len();
    if r == 0 {
        return Ok(Matrix::zeros(f, n, n));
    }
    let chunks = r.div_ceil(k);
    if chunks * k + r > n {
        return Err(Error::PartitionTooSmall(format!(
            "{r} junctions need {} coordinates for a k={k} power, only {n} available",
            chunks * k + r
        )));
    }
    let mut used = vec![false; n];
    for &s in &bounds {
        used[s - 1] = true;
        used[s] = true;
    }
    let mut free = (0..n).filter(|&i| !used[i]);
    let unit = |i: usize, c: &Elem| {
        let mut v = vec![f.zero(); n];
        v[i] = c.clone();
        v
    };
    let mut columns: Vec<Vec<Elem>> = Vec::with_capacity(n);
    let mut sizes = Vec::new();
    for chunk in bounds.chunks(k) {
        let t = chunk.len();
        let mut chain = Vec::with_capacity(k + t);
        for &s in chunk {
            chain.push(unit(s - 1, &binv));
        }
        for _ in t..k {
            chain.push(unit(free.next().expect("feasibility checked"), &f.one()));
        }
        for &s in chunk {
            chain.push(unit(s, &f.one()));
        }
        sizes.push(chain.len());
        columns.extend(chain);
    }
    for i in free {
        columns.push(unit(i, &f.one()));
        sizes.push(1);
    }
    let blocks: Vec<Matrix> = sizes
        .iter()
        .map(|&s| Matrix::jordan_scalar(f, &f.zero(), s))
        .collect();
    let q = Matrix::from_columns(f, &columns);
    let b = q.mul(&Matrix::block_diag(f, &blocks)).mul(&q.inverse()?);
    if !b.pow(k as u64).scale(beta).approx_eq(&j) {
        return Err(Error::VerificationFailed("junction power construction".into()));
    }
    Ok(b)
}

/// `(X, Y)` with `X^k1 + beta Y^k2 = J_{0,n}` for `n >= 2 k1`.
///
/// Grouping basis vectors by residue mod `k1` turns `J^k1` into a direct sum
/// of Jordan blocks `M`; in that basis `J_{0,n} - M` is a junction matrix,
/// which is a scaled `k2`-th power.
pub fn large_nilpotent_decompose(
    f: &Field,
    n: usize,
    k1: u32,
    k2: u32,
    beta: &Elem,
) -> Result<(Matrix, Matrix)> {
    let k1u = k1 as usize;
    if k1 == 0 || n < 2 * k1u {
        return Err(Error::SizeTooSmall(format!("need n >= 2*k1, got n={n}, k1={k1}")));
    }
    let j = Matrix::jordan_scalar(f, &f.zero(), n);
    let m = n % k1u;
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for r in (m..k1u).chain(0..m) {
        order.extend((r..n).step_by(k1u));
    }
    let mut perm = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        perm[i] = pos;
    }
    let q = Matrix::permutation(f, &perm);
    let qi = q.transpose();
    let parts = nilpotent_power_partition(n, k1u);
    let blocks: Vec<Matrix> = parts
        .iter()
        .map(|&s| Matrix::jordan_scalar(f, &f.zero(), s))
        .collect();
    let power_sum = Matrix::block_diag(f, &blocks);
    if q.mul(&j.pow(k1 as u64)).mul(&qi) != power_sum {
        return Err(Error::VerificationFailed(
            "residue-class basis does not split the power".into(),
        ));
    }
    let junction = junction_matrix(f, &parts)?.realization;
    if j.sub(&power_sum) != junction {
        return Err(Error::VerificationFailed("difference is not a junction matrix".into()));
    }
    let x = q.mul(&j).mul(&qi);
    let y = junction_as_scaled_power(f, &parts, k2, beta)?;
    if !x.pow(k1 as u64).add(&y.pow(k2 as u64).scale(beta)).approx_eq(&j) {
        return Err(Error::VerificationFailed("large nilpotent decomposition".into()));
    }
    Ok((x, y))
}

/// Elementary symmetric values `E_0..E_n` of `vals`.
pub fn elementary_symmetric(f: &Field, vals: &[Elem]) -> Vec<Elem> {
    let p = vals
        .iter()
        .fold(Poly::one(f), |acc, v| acc.mul(&Poly::linear(f, v)));
    let n = vals.len();
    (0..=n)
        .map(|j| {
            let c = p.coeff(n - j);
            if j % 2 == 0 {
                c
            } else {
                f.neg(&c)
            }
        })
        .collect()
}

/// The bordered matrix `[[eps J_{0,n-1}, x], [y, z]]`.
pub fn bordered_matrix(f: &Field, eps: &Elem, x: &[Elem], y: &[Elem], z: &Elem) -> Matrix {
    let n = x.len() + 1;
    let mut m = Matrix::zeros(f, n, n);
    for i in 0..n - 1 {
        if i + 1 < n - 1 {
            m.set(i, i + 1, eps.clone());
        }
        m.set(i, n - 1, x[i].clone());
        m.set(n - 1, i, y[i].clone());
    }
    m.set(n - 1, n - 1, z.clone());
    m
}

/// Completes a bordered matrix so that its eigenvalues are `targets`.
///
/// With `S_j = sum_i y_i x_{i+j}`, the characteristic polynomial is
/// `T^{n-1}(T - z) - sum_j eps^j S_j T^{n-2-j}`, so matching coefficients
/// gives `z = E_1` and `S_j = (-1)^{j+1} eps^{-j} E_{j+2}`, a triangular
/// Toeplitz system in the unknown side.
pub fn bordered_system(f: &Field, eps: &Elem, targets: &[Elem], given: &GivenSide) -> Result<BorderedSpec> {
    let n = targets.len();
    if n < 3 {
        return Err(Error::SizeTooSmall("bordered matrices need n >= 3".into()));
    }
    if f.is_zero(eps) {
        return Err(Error::InvalidInput("eps must be nonzero".into()));
    }
    let e = elementary_symmetric(f, targets);
    let eps_inv = f.inv(eps)?;
    let rhs: Vec<Elem> = (0..n - 1)
        .map(|j| {
            let v = f.mul(&f.pow(&eps_inv, j as u64), &e[j + 2]);
            if j % 2 == 0 {
                f.neg(&v)
            } else {
                v
            }
        })
        .collect();
    let len = n - 1;
    let (x, y) = match given {
        GivenSide::Y(y) => {
            if y.len() != len {
                return Err(Error::DimensionMismatch(format!("y must have length {len}")));
            }
            if f.is_zero(&y[0]) {
                return Err(Error::ZeroLeadingCoordinate);
            }
            let y0_inv = f.inv(&y[0])?;
            let mut x = vec![f.zero(); len];
            for j in (0..len).rev() {
                let mut acc = rhs[j].clone();
                for i in 1..len - j {
                    acc = f.sub(&acc, &f.mul(&y[i], &x[i + j]));
                }
                x[j] = f.mul(&acc, &y0_inv);
            }
            (x, y.clone())
        }
        GivenSide::X(x) => {
            if x.len() != len {
                return Err(Error::DimensionMismatch(format!("x must have length {len}")));
            }
            if f.is_zero(&x[len - 1]) {
                return Err(Error::ZeroLeadingCoordinate);
            }
            let xl_inv = f.inv(&x[len - 1])?;
            let mut y = vec![f.zero(); len];
            for j in (0..len).rev() {
                let mut acc = rhs[j].clone();
                for i in 0..len - 1 - j {
                    acc = f.sub(&acc, &f.mul(&y[i], &x[i + j]));
                }
                y[len - 1 - j] = f.mul(&acc, &xl_inv);
            }
            (x.clone(), y)
        }
    };
    let z = e[1].clone();
    let m = bordered_matrix(f, eps, &x, &y, &z);
    let expected = targets
        .iter()
        .fold(Poly::one(f), |acc, t| acc.mul(&Poly::linear(f, t)));
    let cp = m.charpoly()?;
    let matches = if f.is_approx() {
        (0..=n).all(|i| {
            let scale = 1.0 + f.magnitude(&expected.coeff(i));
            f.magnitude(&f.sub(&cp.coeff(i), &expected.coeff(i))) <= 1e-6 * scale
        })
    } else {
        cp == expected
    };
    if !matches {
        return Err(Error::CharPolyMismatch(format!("got {cp}, expected {expected}")));
    }
    Ok(BorderedSpec {
        eps: eps.clone(),
        x,
        y,
        z,
        e_values: e,
        realization: m,
    })
}

/// Eigenvector of a bordered matrix for the eigenvalue `lambda`.
fn bordered_eigenvector(spec: &BorderedSpec, f: &Field, lambda: &Elem) -> Option<Vec<Elem>> {
    let len = spec.x.len();
    let mut v = vec![f.zero(); len + 1];
    v[len] = f.one();
    if !f.is_zero(lambda) {
        // (lambda - eps J) v' = x, solved from the bottom
        let li = f.inv(lambda).ok()?;
        for i in (0..len).rev() {
            let mut acc = spec.x[i].clone();
            if i + 1 < len {
                acc = f.add(&acc, &f.mul(&spec.eps, &v[i + 1]));
            }
            v[i] = f.mul(&acc, &li);
        }
        return Some(v);
    }
    if f.is_zero(&spec.x[len - 1]) && !f.is_zero(&spec.y[0]) {
        // eps J v' = -x fixes v'_2.., and the last row fixes v'_1
        let ei = f.inv(&spec.eps).ok()?;
        for i in 0..len - 1 {
            v[i + 1] = f.neg(&f.mul(&spec.x[i], &ei));
        }
        let mut acc = f.neg(&spec.z);
        for i in 1..len {
            acc = f.sub(&acc, &f.mul(&spec.y[i], &v[i]));
        }
        v[0] = f.div(&acc, &spec.y[0]).ok()?;
        return Some(v);
    }
    let shifted = spec.realization.sub(&Matrix::scalar(f, len + 1, lambda));
    shifted.nullspace().into_iter().next()
}

/// Eigenvector of a 2x2 matrix for `lambda`.
fn eigenvector_2x2(m: &Matrix, lambda: &Elem) -> Vec<Elem> {
    let f = m.field();
    let (p, q, r, s) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let v1 = vec![q.clone(), f.sub(lambda, p)];
    let v2 = vec![f.sub(lambda, s), r.clone()];
    let norm = |v: &[Elem]| v.iter().map(|x| f.magnitude(x)).fold(0.0, f64::max);
    if norm(&v1) >= norm(&v2) {
        v1
    } else {
        v2
    }
}

/// `S diag(roots) S^{-1}` for eigenvector columns `S`.
fn root_from_eigenvectors(f: &Field, vecs: Vec<Vec<Elem>>, roots: &[Elem]) -> Result<Matrix> {
    let s = Matrix::from_columns(f, &vecs);
    Ok(s.mul(&Matrix::diag(f, roots)).mul(&s.inverse()?))
}

/// Bordered matrix with spectrum `mu_i^k` and a diagonalizable `W` with
/// `W^k` equal to it.
pub fn bordered_solve(
    f: &Field,
    eps: &Elem,
    mu: &[Elem],
    k: u32,
    given: &GivenSide,
) -> Result<(BorderedSpec, Matrix)> {
    scaled_bordered_solve(f, eps, mu, k, &f.one(), given)
}

/// As [`bordered_solve`] with spectrum `scale * mu_i^k` and
/// `scale * W^k = M`.
fn scaled_bordered_solve(
    f: &Field,
    eps: &Elem,
    mu: &[Elem],
    k: u32,
    scale: &Elem,
    given: &GivenSide,
) -> Result<(BorderedSpec, Matrix)> {
    let targets: Vec<Elem> = mu.iter().map(|m| f.mul(scale, &f.pow(m, k as u64))).collect();
    for i in 0..targets.len() {
        for j in 0..i {
            if f.eq(&targets[i], &targets[j]) {
                return Err(Error::InvalidInput("the k-th powers must be distinct".into()));
            }
        }
    }
    let spec = bordered_system(f, eps, &targets, given)?;
    let vecs = targets
        .iter()
        .map(|t| bordered_eigenvector(&spec, f, t))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::VerificationFailed("missing eigenvector".into()))?;
    let w = root_from_eigenvectors(f, vecs, mu)?;
    if !w.pow(k as u64).scale(scale).approx_eq(&spec.realization) {
        return Err(Error::VerificationFailed("bordered root witness".into()));
    }
    Ok((spec, w))
}

/// First enumerated element outside `{0, -1}`.
fn pick_eps(f: &Field) -> Result<Elem> {
    if !f.is_finite() {
        return Ok(f.one());
    }
    let q = f.cardinality().unwrap_or(u128::MAX);
    let minus_one = f.from_i64(-1);
    (0..q.min(4))
        .map(|i| f.element_at(i))
        .find(|e| !f.is_zero(e) && !f.eq(e, &minus_one))
        .ok_or_else(|| Error::NotFound(format!("{f} has no element outside {{0, -1}}")))
}

/// Candidate regular pairs `(m1, m2)` for `m1^k + m2^k = gamma`, in search
/// order.
fn regular_pairs(f: &Field, k: u32, gamma: &Elem, cap: usize) -> Vec<(Elem, Elem)> {
    let mut out = Vec::new();
    if f.is_finite() {
        let q = f.cardinality().unwrap_or(u128::MAX).min(SCALAR_SEARCH_CAP);
        for i in 0..q {
            let a = f.element_at(i);
            let pa = f.pow(&a, k as u64);
            let rest = f.sub(gamma, &pa);
            if f.eq(&rest, &pa) {
                continue;
            }
            if let Some(b) = f.kth_roots(&rest, k).into_iter().next() {
                out.push((a, b));
                if out.len() >= cap {
                    break;
                }
            }
        }
    } else if let Ok(s) = regular_solution_search(f, k, 2, gamma, false) {
        out.push((s[0].clone(), s[1].clone()));
    }
    out
}

/// `(X, Y)` with `X^k1 + beta Y^k2 = J_{0,n}` from regular solutions of
/// `sum x_i^k1 = 1` and `sum x_i^k2 = -1/beta`.
pub fn small_nilpotent_decompose(
    f: &Field,
    n: usize,
    k1: u32,
    k2: u32,
    beta: &Elem,
) -> Result<(Matrix, Matrix)> {
    if f.cardinality().is_some_and(|q| q <= 2) {
        return Err(Error::NotFound(format!("{f} has at most two elements")));
    }
    let target = Matrix::jordan_scalar(f, &f.zero(), n);
    let (x, y) = match n {
        0 => return Err(Error::SizeTooSmall("n must be positive".into())),
        1 => (Matrix::zeros(f, 1, 1), Matrix::zeros(f, 1, 1)),
        2 => two_by_two_nilpotent(f, k1, k2, beta)?,
        _ => bordered_nilpotent(f, n, k1, k2, beta)?,
    };
    if !x.pow(k1 as u64).add(&y.pow(k2 as u64).scale(beta)).approx_eq(&target) {
        return Err(Error::VerificationFailed("small nilpotent decomposition".into()));
    }
    Ok((x, y))
}

fn two_by_two_nilpotent(f: &Field, k1: u32, k2: u32, beta: &Elem) -> Result<(Matrix, Matrix)> {
    let beta_inv = f.inv(beta)?;
    let gamma = f.neg(&beta_inv);
    let mus = regular_pairs(f, k1, &f.one(), 16);
    let lams = regular_pairs(f, k2, &gamma, 16);
    if mus.is_empty() || lams.is_empty() {
        return Err(Error::NotFound(format!(
            "no regular pair for x^{k1} + y^{k1} = 1 or x^{k2} + y^{k2} = {} over {f}",
            f.format(&gamma)
        )));
    }
    let beta2 = f.mul(beta, beta);
    for (m1, m2) in &mus {
        for (l1, l2) in &lams {
            let p1 = f.mul(&f.pow(m1, k1 as u64), &f.pow(m2, k1 as u64));
            let p2 = f.mul(&f.pow(l1, k2 as u64), &f.pow(l2, k2 as u64));
            // det: -y(1 + x) = p1 and -xy / beta^2 = p2, linear once xy is known
            let xy = f.neg(&f.mul(&beta2, &p2));
            let y = f.sub(&f.neg(&p1), &xy);
            let x = if !f.is_zero(&y) {
                f.div(&xy, &y)?
            } else if f.is_zero(&p1) && f.is_zero(&p2) {
                f.from_i64(-1)
            } else {
                continue;
            };
            let a1 = Matrix::new(f, 2, 2, vec![f.zero(), f.add(&f.one(), &x), y.clone(), f.one()])?;
            let a2 = Matrix::new(
                f,
                2,
                2,
                vec![
                    f.zero(),
                    f.neg(&f.mul(&x, &beta_inv)),
                    f.neg(&f.mul(&y, &beta_inv)),
                    f.neg(&beta_inv),
                ],
            )?;
            let xm = root_from_eigenvectors(
                f,
                vec![
                    eigenvector_2x2(&a1, &f.pow(m1, k1 as u64)),
                    eigenvector_2x2(&a1, &f.pow(m2, k1 as u64)),
                ],
                &[m1.clone(), m2.clone()],
            );
            let ym = root_from_eigenvectors(
                f,
                vec![
                    eigenvector_2x2(&a2, &f.pow(l1, k2 as u64)),
                    eigenvector_2x2(&a2, &f.pow(l2, k2 as u64)),
                ],
                &[l1.clone(), l2.clone()],
            );
            if let (Ok(xm), Ok(ym)) = (xm, ym) {
                if xm.pow(k1 as u64).approx_eq(&a1) && ym.pow(k2 as u64).approx_eq(&a2) {
                    return Ok((xm, ym));
                }
            }
        }
    }
    Err(Error::NotFound(format!(
        "no regular pairs give a 2x2 nilpotent decomposition over {f}"
    )))
}

fn bordered_nilpotent(f: &Field, n: usize, k1: u32, k2: u32, beta: &Elem) -> Result<(Matrix, Matrix)> {
    let eps = pick_eps(f)?;
    let one_eps = f.add(&f.one(), &eps);
    let lam = regular_solution_search(f, k1, n, &f.one(), true)?;
    let mut xfirst = vec![f.zero(); n - 1];
    xfirst[n - 2] = one_eps.clone();
    let (s1, w1) = bordered_solve(f, &eps, &lam, k1, &GivenSide::X(xfirst))?;
    let gamma = f.neg(&f.inv(beta)?);
    let mut mu = regular_solution_search(f, k2, n - 1, &gamma, true)?;
    mu.push(f.zero());
    let neg_y: Vec<Elem> = s1.y.iter().map(|v| f.neg(v)).collect();
    let (s2, w2) = scaled_bordered_solve(f, &f.one(), &mu, k2, beta, &GivenSide::Y(neg_y))?;
    let nsum = s1.realization.add(&s2.realization);
    // N is strictly upper triangular with nonzero superdiagonal; the Krylov
    // basis N^{n-1} e, ..., N e, e of the last unit vector conjugates it to
    // J_{0,n}.
    let mut cols = vec![Vec::new(); n];
    let mut v = vec![f.zero(); n];
    v[n - 1] = f.one();
    for j in (0..n).rev() {
        cols[j] = v.clone();
        v = nsum.mul_vec(&v);
    }
    let k = Matrix::from_columns(f, &cols);
    let ki = k.inverse()?;
    Ok((ki.mul(&w1).mul(&k), ki.mul(&w2).mul(&k)))
}

struct BlockSolution {
    x: Matrix,
    y: Matrix,
    x_diag: bool,
    y_diag: bool,
}

fn solve_block_oriented(
    f: &Field,
    alpha: &Elem,
    l: usize,
    k1: u32,
    k2: u32,
    beta: &Elem,
    log: &mut Vec<Error>,
) -> Option<BlockSolution> {
    if !f.is_zero(alpha) {
        return match invertible_jordan_decompose(f, alpha, l, k1, k2, beta) {
            Ok((x, y)) => Some(BlockSolution { x, y, x_diag: true, y_diag: true }),
            Err(e) => {
                log.push(e);
                None
            }
        };
    }
    if l == 1 {
        let z = Matrix::zeros(f, 1, 1);
        return Some(BlockSolution { x: z.clone(), y: z, x_diag: true, y_diag: true });
    }
    if l >= 2 * k1 as usize {
        match large_nilpotent_decompose(f, l, k1, k2, beta) {
            Ok((x, y)) => return Some(BlockSolution { x, y, x_diag: false, y_diag: false }),
            Err(e) => log.push(e),
        }
    }
    match small_nilpotent_decompose(f, l, k1, k2, beta) {
        Ok((x, y)) => return Some(BlockSolution { x, y, x_diag: true, y_diag: true }),
        Err(e) => log.push(e),
    }
    match invertible_jordan_decompose(f, alpha, l, k1, k2, beta) {
        Ok((x, y)) => Some(BlockSolution { x, y, x_diag: true, y_diag: true }),
        Err(e) => {
            log.push(e);
            None
        }
    }
}

/// Solves `X^k1 + beta Y^k2 = J_{alpha,l}`, first as written, then with the
/// roles of the two terms exchanged.
fn solve_block(f: &Field, alpha: &Elem, l: usize, k1: u32, k2: u32, beta: &Elem) -> Result<BlockSolution> {
    let mut log = Vec::new();
    if let Some(s) = solve_block_oriented(f, alpha, l, k1, k2, beta, &mut log) {
        return Ok(s);
    }
    // beta Y^k2 + X^k1 = J_{alpha,l}  <=>  Y^k2 + beta^{-1} X^k1 = J_{alpha,l} / beta,
    // and D J_{alpha/beta,l} D^{-1} = J_{alpha,l} / beta for D = diag(beta^i).
    let binv = f.inv(beta)?;
    let alpha2 = f.mul(alpha, &binv);
    if let Some(s) = solve_block_oriented(f, &alpha2, l, k2, k1, &binv, &mut log) {
        let d = Matrix::diag(f, &(0..l).map(|i| f.pow(beta, i as u64)).collect::<Vec<_>>());
        let di = d.inverse()?;
        let conj = |m: &Matrix| d.mul(m).mul(&di);
        let sol = BlockSolution {
            x: conj(&s.y),
            y: conj(&s.x),
            x_diag: s.y_diag,
            y_diag: s.x_diag,
        };
        let target = Matrix::jordan_scalar(f, alpha, l);
        if sol.x.pow(k1 as u64).add(&sol.y.pow(k2 as u64).scale(beta)).approx_eq(&target) {
            return Ok(sol);
        }
        log.push(Error::VerificationFailed("exchanged block solution".into()));
    }
    if log.iter().all(|e| matches!(e, Error::Unsupported(_))) {
        return Err(log.into_iter().next().unwrap_or(Error::WitnessNotFound));
    }
    let transcript: Vec<String> = log.iter().map(|e| e.to_string()).collect();
    Err(Error::NotFound(format!(
        "J({},{l}) over {f}: {}",
        f.format(alpha),
        transcript.join("; ")
    )))
}

/// `(X, Y)` with `X^2 + Y^2 = a` for a real 2x2 matrix with real
/// eigenvalues.
pub fn real_sum_of_two_squares(a: &Matrix) -> Result<(Matrix, Matrix)> {
    let f = a.field();
    if a.rows() != 2 || !a.is_square() || !matches!(f.kind(), Kind::Real { .. }) {
        return Err(Error::InvalidInput("expected a real 2x2 matrix".into()));
    }
    let gjf = crate::jordan::generalized_jordan_form(a)?;
    let r = |v: f64| Elem::Real(v);
    let m = |e: [f64; 4]| Matrix::new(f, 2, 2, e.iter().map(|&v| r(v)).collect()).expect("4 entries");
    let form = gjf.form();
    let (x, y, swap) = if gjf.blocks.len() == 1 && gjf.blocks[0].degree() == 2 {
        return Err(Error::Unsupported(
            "complex eigenvalues are handled through the complex lift".into(),
        ));
    } else if gjf.blocks.len() == 1 {
        // J_{-t,2} = [[0, -(4t+1)/4], [1, 0]]^2 + [[1/2, 1], [0, 1/2]]^2
        let t = -f.to_f64(form.get(0, 0));
        (m([0.0, -(4.0 * t + 1.0) / 4.0, 1.0, 0.0]), m([0.5, 1.0, 0.0, 0.5]), false)
    } else {
        let u = f.to_f64(form.get(0, 0));
        let v = f.to_f64(form.get(1, 1));
        if f.is_zero(&f.sub(form.get(0, 0), form.get(1, 1))) {
            let h = u / 2.0;
            (m([0.0, h, 1.0, 0.0]), m([0.0, h, 1.0, 0.0]), false)
        } else if u >= 0.0 && v >= 0.0 {
            (m([u.sqrt(), 0.0, 0.0, v.sqrt()]), m([0.0; 4]), false)
        } else if u <= 0.0 && v <= 0.0 {
            // diag(-s, -t) with s >= t: -(s + 1/4) I + diag(1/4, s - t + 1/4)
            let (s, t, swap) = if -u >= -v { (-u, -v, false) } else { (-v, -u, true) };
            (
                m([0.0, -(4.0 * s + 1.0) / 4.0, 1.0, 0.0]),
                m([0.5, 0.0, 0.0, (s - t + 0.25).sqrt()]),
                swap,
            )
        } else {
            // diag(s, -t) with s, t > 0: -2t I + diag(s + 2t, t)
            let (s, t, swap) = if u > 0.0 { (u, -v, false) } else { (v, -u, true) };
            (m([0.0, -2.0 * t, 1.0, 0.0]), m([(s + 2.0 * t).sqrt(), 0.0, 0.0, t.sqrt()]), swap)
        }
    };
    let sw = Matrix::permutation(f, &[1, 0]);
    let (x, y) = if swap {
        (sw.mul(&x).mul(&sw), sw.mul(&y).mul(&sw))
    } else {
        (x, y)
    };
    let p = &gjf.conjugator;
    let pi = p.inverse()?;
    let (x, y) = (pi.mul(&x).mul(p), pi.mul(&y).mul(p));
    if !x.pow(2).add(&y.pow(2)).approx_eq(a) {
        return Err(Error::VerificationFailed("real sum of two squares".into()));
    }
    Ok((x, y))
}

fn minpoly_squarefree(m: &Matrix) -> bool {
    if m.field().is_approx() {
        return false;
    }
    match m.minpoly() {
        Ok(p) => p.gcd(&p.derivative()).degree() == Some(0),
        Err(_) => false,
    }
}

/// `X` with `X^k = a` when `a` is semisimple and every eigenvalue has a
/// k-th root in the field it generates.
fn pure_power(a: &Matrix, k: u32) -> Result<Matrix> {
    let f = a.field();
    if a.is_zero() {
        return Ok(a.clone());
    }
    let plan = reduction::plan(a)?;
    let mut solved = Vec::with_capacity(plan.blocks.len());
    for bp in &plan.blocks {
        if bp.block.l != 1 {
            return Err(Error::NotFound(
                "single-term words are solved only for semisimple targets".into(),
            ));
        }
        let l = &bp.extension;
        let r = l.kth_roots(&bp.generator, k).into_iter().next().ok_or_else(|| {
            Error::NotFound(format!("{} has no {k}-th root over {l}", l.format(&bp.generator)))
        })?;
        solved.push(vec![Matrix::scalar(l, 1, &r)]);
    }
    let word = WordSpec::Diagonal(DiagonalWordSpec::new(f, vec![(f.one(), k)])?);
    let mut xs = reduction::assemble(&plan, &solved, &word, a)?;
    Ok(xs.remove(0))
}

const RANDOM_SPLIT_TRIES: usize = 4000;

/// Samples `X` and keeps it when `(a - X^k1) / beta` is a `k2`-th power.
/// Used over finite fields when the block constructions have no scalar
/// data to work with.
fn random_split(a: &Matrix, k1: u32, k2: u32, beta: &Elem) -> Option<(Matrix, Matrix)> {
    use rand::SeedableRng;
    let f = a.field();
    let n = a.rows();
    let binv = f.inv(beta).ok()?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(n as u64);
    for _ in 0..RANDOM_SPLIT_TRIES {
        let x = Matrix::new(f, n, n, (0..n * n).map(|_| f.random(&mut rng)).collect()).ok()?;
        let rest = a.sub(&x.pow(k1 as u64)).scale(&binv);
        if let Ok(y) = pure_power(&rest, k2) {
            return Some((x, y));
        }
    }
    None
}

fn solve_planned(
    plan: &reduction::Plan,
    core: &WordSpec,
    target: &Matrix,
    k1: u32,
    k2: u32,
    beta: &Elem,
) -> Result<(Matrix, Matrix, bool, bool)> {
    let mut solved = Vec::with_capacity(plan.blocks.len());
    let (mut xd, mut yd) = (true, true);
    for bp in &plan.blocks {
        let l_beta = if bp.block.degree() == 1 {
            beta.clone()
        } else {
            bp.extension.embed(beta)
        };
        let sol = solve_block(&bp.extension, &bp.generator, bp.block.l, k1, k2, &l_beta)?;
        xd &= sol.x_diag;
        yd &= sol.y_diag;
        solved.push(vec![sol.x, sol.y]);
    }
    let xs = reduction::assemble(plan, &solved, core, target)?;
    let [x, y]: [Matrix; 2] = xs.try_into().expect("two letters");
    Ok((x, y, xd, yd))
}

fn real_positive(f: &Field, e: &Elem) -> bool {
    f.to_f64(e) > 0.0
}

/// Solves `d1 X1^k1 + ... + dm Xm^km = a`.
pub fn solve_diagonal_word(a: &Matrix, spec: &DiagonalWordSpec) -> Result<DiagonalWitness> {
    if !a.is_square() {
        return Err(Error::NonSquare);
    }
    let f = a.field();
    if f != &spec.field {
        return Err(Error::DescriptorMismatch);
    }
    let n = a.rows();
    let m = spec.terms.len();
    let zero = Matrix::zeros(f, n, n);
    let mut matrices = vec![zero; m];
    let mut diagonalizable = vec![true; m];
    let mut conjugators = Vec::new();
    if let Some(i) = spec.terms.iter().position(|(_, k)| *k == 1) {
        matrices[i] = a.scale(&f.inv(&spec.terms[i].0)?);
        diagonalizable[i] = minpoly_squarefree(&matrices[i]);
    } else if m == 1 {
        let (d, k) = &spec.terms[0];
        matrices[0] = pure_power(&a.scale(&f.inv(d)?), *k)?;
        diagonalizable[0] = !f.is_exact() || minpoly_squarefree(&matrices[0]);
    } else {
        let (i1, i2) = if spec.terms[1].1 > spec.terms[0].1 { (1, 0) } else { (0, 1) };
        let (d1, k1) = spec.terms[i1].clone();
        let (d2, k2) = spec.terms[i2].clone();
        let beta = f.div(&d2, &d1)?;
        let target = a.scale(&f.inv(&d1)?);
        let core = WordSpec::Diagonal(DiagonalWordSpec::new(f, vec![(f.one(), k1), (beta.clone(), k2)])?);
        let even_real = matches!(f.kind(), Kind::Real { .. }) && k1 % 2 == 0 && k2 % 2 == 0;
        let (x, y, xd, yd) = if even_real && n == 2 && k1 == 2 && k2 == 2 && real_positive(f, &beta)
            && real_sum_of_two_squares(&target).is_ok()
        {
            let (x, y) = real_sum_of_two_squares(&target)?;
            let s = f.kth_roots(&beta, 2)[0].clone();
            (x, y.scale(&f.inv(&s)?), false, false)
        } else {
            let plan = reduction::plan(&target)?;
            if even_real && plan.blocks.iter().any(|b| b.block.degree() == 1) {
                return Err(Error::Unsupported(
                    "both exponents even over the reals with a real eigenvalue".into(),
                ));
            }
            match solve_planned(&plan, &core, &target, k1, k2, &beta) {
                Ok((x, y, xd, yd)) => {
                    conjugators.push(plan.conjugator.clone());
                    (x, y, xd, yd)
                }
                Err(e @ Error::NotFound(_)) if f.is_finite() => {
                    let (x, y) = random_split(&target, k1, k2, &beta).ok_or(e)?;
                    (x, y, false, true)
                }
                Err(e) => return Err(e),
            }
        };
        matrices[i1] = x;
        matrices[i2] = y;
        diagonalizable[i1] = xd || minpoly_squarefree(&matrices[i1]);
        diagonalizable[i2] = yd || minpoly_squarefree(&matrices[i2]);
    }
    if !spec.evaluate(&matrices)?.approx_eq(a) {
        return Err(Error::VerificationFailed(
            "diagonal word witness does not evaluate to the target".into(),
        ));
    }
    Ok(DiagonalWitness {
        matrices,
        diagonalizable,
        conjugators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn scalar_solution_examples() {
        let f7 = fp(7);
        let ((a, b), (c, d)) = scalar_two_solutions(&f7, &f7.from_i64(5), 2, 2, &f7.one()).unwrap();
        assert_eq!([a, b, c, d], [1, 2, 2, 1].map(|v| f7.from_i64(v)));
        let r = Field::real(1e-9).unwrap();
        let ((a, _), (c, _)) = scalar_two_solutions(&r, &r.from_i64(-3), 2, 3, &r.from_i64(2)).unwrap();
        assert_eq!((r.to_f64(&a), r.to_f64(&c)), (0.0, 1.0));
        assert!(matches!(
            scalar_two_solutions(&r, &r.from_i64(-3), 2, 2, &r.one()),
            Err(Error::Unsupported(_))
        ));
        let c = Field::complex(1e-9).unwrap();
        assert!(scalar_two_solutions(&c, &c.from_i64(-3), 4, 2, &c.one()).is_ok());
        // -1 is not a square mod 7, so x^2 + y^2 = 0 only has (0, 0)
        assert!(matches!(
            scalar_two_solutions(&f7, &f7.zero(), 2, 2, &f7.one()),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn invertible_split_example() {
        let f7 = fp(7);
        let (g, h) = jordan_split(
            &f7,
            2,
            (&f7.from_i64(1), &f7.from_i64(2)),
            (&f7.from_i64(2), &f7.from_i64(1)),
            2,
            2,
            &f7.one(),
        );
        assert_eq!(g, Matrix::from_i64(&f7, &[&[1, 1], &[0, 4]]));
        assert_eq!(h, Matrix::from_i64(&f7, &[&[4, 0], &[0, 1]]));
        for n in 1..8 {
            let (b, c) = invertible_jordan_decompose(&f7, &f7.from_i64(5), n, 2, 2, &f7.one()).unwrap();
            assert!(minpoly_squarefree(&b) && minpoly_squarefree(&c));
        }
        let (b, _) = invertible_jordan_decompose(&f7, &f7.from_i64(5), 1, 2, 2, &f7.one()).unwrap();
        assert_eq!(b, Matrix::identity(&f7, 1));
        let f5 = fp(5);
        assert!(invertible_jordan_decompose(&f5, &f5.zero(), 3, 2, 2, &f5.one()).is_ok());
    }

    #[test]
    fn junction_examples() {
        let f = fp(5);
        assert!(junction_matrix(&f, &[4]).unwrap().realization.is_zero());
        assert_eq!(junction_matrix(&f, &[2, 2]).unwrap().realization, Matrix::unit(&f, 4, 1, 2));
        assert_eq!(
            junction_matrix(&f, &[2, 2, 3]).unwrap().realization,
            Matrix::unit(&f, 7, 1, 2).add(&Matrix::unit(&f, 7, 3, 4))
        );
        assert!(junction_matrix(&f, &[3, 2]).is_err());
    }

    #[test]
    fn miller_examples() {
        assert_eq!(nilpotent_power_partition(7, 2), vec![3, 4]);
        assert_eq!(nilpotent_power_partition(6, 2), vec![3, 3]);
        assert_eq!(nilpotent_power_partition(5, 1), vec![5]);
        assert_eq!(nilpotent_power_partition(2, 3), vec![1, 1]);
        let f = fp(3);
        for n in 1..=20 {
            for k in 1..=5 {
                let mut rank = Matrix::jordan_scalar(&f, &f.zero(), n)
                    .pow(k as u64)
                    .nilpotent_partition()
                    .unwrap();
                rank.reverse();
                assert_eq!(rank, nilpotent_power_partition(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn junction_powers() {
        let f5 = fp(5);
        let b = junction_as_scaled_power(&f5, &[2, 2], 2, &f5.one()).unwrap();
        let mut parts = b.pow(2).nilpotent_partition().unwrap();
        parts.sort();
        assert_eq!(parts, vec![1, 1, 2]);
        let f7 = fp(7);
        let b = junction_as_scaled_power(&f7, &[3, 4], 2, &f7.from_i64(3)).unwrap();
        assert_eq!(b.pow(2).scale(&f7.from_i64(3)), junction_matrix(&f7, &[3, 4]).unwrap().realization);
        let b = junction_as_scaled_power(&f7, &[2, 3], 1, &f7.from_i64(2)).unwrap();
        assert_eq!(b.scale(&f7.from_i64(2)), junction_matrix(&f7, &[2, 3]).unwrap().realization);
        assert!(matches!(
            junction_as_scaled_power(&f7, &[1, 3], 2, &f7.one()),
            Err(Error::PartitionTooSmall(_))
        ));
        assert!(matches!(
            junction_as_scaled_power(&f7, &[2, 2, 2, 2, 2, 2, 2], 5, &f7.one()),
            Err(Error::PartitionTooSmall(_))
        ));
    }

    #[test]
    fn large_nilpotent_examples() {
        let f5 = fp(5);
        assert!(large_nilpotent_decompose(&f5, 4, 2, 2, &f5.one()).is_ok());
        let f7 = fp(7);
        assert!(large_nilpotent_decompose(&f7, 6, 3, 2, &f7.from_i64(2)).is_ok());
        let q = Field::rationals();
        assert!(large_nilpotent_decompose(&q, 4, 2, 2, &q.one()).is_ok());
        for n in 6..16 {
            assert!(large_nilpotent_decompose(&f7, n, 3, 3, &f7.from_i64(4)).is_ok());
        }
        assert!(matches!(
            large_nilpotent_decompose(&f7, 14, 7, 5, &f7.one()),
            Err(Error::PartitionTooSmall(_))
        ));
        assert!(matches!(
            large_nilpotent_decompose(&f7, 3, 2, 2, &f7.one()),
            Err(Error::SizeTooSmall(_))
        ));
    }

    #[test]
    fn bordered_examples() {
        let f7 = fp(7);
        let mu = [1, 2, 3].map(|v| f7.from_i64(v));
        let y = vec![f7.one(), f7.zero()];
        let (spec, w) = bordered_solve(&f7, &f7.one(), &mu, 2, &GivenSide::Y(y.clone())).unwrap();
        assert_eq!(spec.x, vec![f7.zero(), f7.one()]);
        assert_eq!(spec.realization, Matrix::from_i64(&f7, &[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]));
        assert_eq!(w.pow(2), spec.realization);
        let (spec, _) =
            bordered_solve(&f7, &f7.one(), &mu, 2, &GivenSide::X(vec![f7.zero(), f7.one()])).unwrap();
        assert_eq!(spec.y, y);
        let mu0 = [1, 2, 0].map(|v| f7.from_i64(v));
        let (spec, _) = bordered_solve(&f7, &f7.one(), &mu0, 2, &GivenSide::Y(y)).unwrap();
        assert!(f7.is_zero(&spec.x[1]));
        assert_eq!(
            bordered_solve(&f7, &f7.one(), &mu, 2, &GivenSide::Y(vec![f7.zero(), f7.one()])).unwrap_err(),
            Error::ZeroLeadingCoordinate
        );
    }

    #[test]
    fn small_nilpotent_examples() {
        let f5 = fp(5);
        let (x, y) = small_nilpotent_decompose(&f5, 2, 2, 2, &f5.one()).unwrap();
        assert_eq!(x.pow(2), Matrix::from_i64(&f5, &[&[0, 0], &[0, 1]]));
        assert_eq!(y.pow(2), Matrix::from_i64(&f5, &[&[0, 1], &[0, 4]]));
        assert!(matches!(
            small_nilpotent_decompose(&fp(2), 2, 2, 2, &fp(2).one()),
            Err(Error::NotFound(_))
        ));
        // the nonzero squares of F7 sum to 0, so no regular solution of
        // x^2 + y^2 + z^2 = 1 exists
        let f7 = fp(7);
        assert!(small_nilpotent_decompose(&f7, 3, 2, 2, &f7.one()).is_err());
        let spec = DiagonalWordSpec::new(&f7, vec![(f7.one(), 2), (f7.one(), 2)]).unwrap();
        let j3 = Matrix::jordan_scalar(&f7, &f7.zero(), 3);
        let w = solve_diagonal_word(&j3, &spec).unwrap();
        assert_eq!(spec.evaluate(&w.matrices).unwrap(), j3);
        let f13 = fp(13);
        assert!(small_nilpotent_decompose(&f13, 3, 2, 2, &f13.one()).is_ok());
        let f101 = fp(101);
        for n in 2..7 {
            assert!(small_nilpotent_decompose(&f101, n, 2, 3, &f101.from_i64(5)).is_ok(), "n={n}");
        }
        let r = Field::real(1e-9).unwrap();
        assert!(small_nilpotent_decompose(&r, 4, 2, 3, &r.from_i64(2)).is_ok());
    }

    #[test]
    fn real_squares_cases() {
        let r = Field::real(1e-9).unwrap();
        let mk = |e: [f64; 4]| Matrix::new(&r, 2, 2, e.iter().map(|&v| Elem::Real(v)).collect()).unwrap();
        for a in [
            mk([0.0, 1.0, 0.0, 0.0]),
            mk([3.0, 0.0, 0.0, 3.0]),
            mk([-2.0, 0.0, 0.0, -2.0]),
            mk([2.0, 0.0, 0.0, 5.0]),
            mk([-2.0, 0.0, 0.0, -5.0]),
            mk([-5.0, 0.0, 0.0, -2.0]),
            mk([2.0, 0.0, 0.0, -5.0]),
            mk([-2.0, 1.0, 0.0, 3.0]),
            mk([1.0, 2.0, 3.0, 4.0]),
        ] {
            let (x, y) = real_sum_of_two_squares(&a).unwrap();
            assert!(x.pow(2).add(&y.pow(2)).approx_eq(&a));
        }
    }

    #[test]
    fn word_level_cases() {
        let f5 = fp(5);
        let spec = DiagonalWordSpec::new(&f5, vec![(f5.one(), 2), (f5.one(), 2)]).unwrap();
        let a = Matrix::from_i64(&f5, &[&[0, 1], &[0, 0]]);
        let w = solve_diagonal_word(&a, &spec).unwrap();
        assert_eq!(spec.evaluate(&w.matrices).unwrap(), a);

        let f101 = fp(101);
        let spec = DiagonalWordSpec::new(&f101, vec![(f101.one(), 2), (f101.one(), 2), (f101.one(), 5)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = Matrix::new(&f101, 3, 3, (0..9).map(|_| f101.random(&mut rng)).collect()).unwrap();
        let w = solve_diagonal_word(&a, &spec).unwrap();
        assert!(w.matrices[2].is_zero());

        let spec = DiagonalWordSpec::new(&f101, vec![(f101.from_i64(3), 1), (f101.one(), 2)]).unwrap();
        let w = solve_diagonal_word(&a, &spec).unwrap();
        assert!(w.matrices[1].is_zero());

        let r = Field::real(1e-9).unwrap();
        let spec = DiagonalWordSpec::new(&r, vec![(r.one(), 2), (r.one(), 2)]).unwrap();
        let j = Matrix::jordan_scalar(&r, &r.zero(), 3);
        assert!(matches!(solve_diagonal_word(&j, &spec), Err(Error::Unsupported(_))));
        let j2 = Matrix::jordan_scalar(&r, &r.zero(), 2);
        assert!(solve_diagonal_word(&j2, &spec).is_ok());
    }

    #[test]
    fn complex_lift_example() {
        let r = Field::real(1e-9).unwrap();
        let a = Matrix::from_i64(&r, &[&[0, -1, 1, 0], &[1, 0, 0, 1], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
        let spec = DiagonalWordSpec::new(&r, vec![(r.one(), 2), (r.one(), 2)]).unwrap();
        let w = solve_diagonal_word(&a, &spec).unwrap();
        assert!(spec.evaluate(&w.matrices).unwrap().approx_eq(&a));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn bordered_charpoly_law(seed in 0u64..1_000_000, n in 3usize..6) {
            let f = fp(101);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let gamma = f.random(&mut rng);
            let mu = regular_solution_search(&f, 2, n, &gamma, false);
            prop_assume!(mu.is_ok());
            let mu = mu.unwrap();
            let mut y: Vec<Elem> = (0..n - 1).map(|_| f.random(&mut rng)).collect();
            y[0] = f.random_nonzero(&mut rng);
            let eps = f.random_nonzero(&mut rng);
            let (spec, w) = bordered_solve(&f, &eps, &mu, 2, &GivenSide::Y(y)).unwrap();
            prop_assert_eq!(w.pow(2), spec.realization);
        }

        #[test]
        fn scaling_covariance(seed in 0u64..1_000_000, n in 2usize..4) {
            let f = fp(101);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = Matrix::new(&f, n, n, (0..n * n).map(|_| f.random(&mut rng)).collect()).unwrap();
            let c = f.random_nonzero(&mut rng);
            let spec = DiagonalWordSpec::new(&f, vec![(f.one(), 2), (f.from_i64(3), 3)]).unwrap();
            let w = solve_diagonal_word(&a, &spec).unwrap();
            let scaled = DiagonalWordSpec::new(&f, spec.terms.iter().map(|(d, k)| (f.mul(&c, d), *k)).collect()).unwrap();
            prop_assert_eq!(scaled.evaluate(&w.matrices).unwrap(), a.scale(&c));
        }
    }
}
