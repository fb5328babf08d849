//! Dense matrices over a [`Field`] and the elimination-based routines on them.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Poly;

#[derive(Clone, Debug)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Elem>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Integer entries reduced into the field; panics on ragged input.
    pub fn from_i64(field: &Field, rows: &[&[i64]]) -> Matrix {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Matrix::from_rows(field, data).expect("rectangular input")
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        Matrix::scalar(field, n, &field.one())
    }

    pub fn scalar(field: &Field, n: usize, c: &Elem) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// The matrix with a single one at `(i, j)`.
    pub fn unit(field: &Field, n: usize, i: usize, j: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        m.set(i, j, field.one());
        m
    }

    pub fn diag(field: &Field, entries: &[Elem]) -> Matrix {
        let mut m = Matrix::zeros(field, entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Companion matrix of a monic polynomial: ones below the diagonal and
    /// `-a_0, ..., -a_{d-1}` in the last column.
    pub fn companion(p: &Poly) -> Matrix {
        let f = p.field();
        let d = p.degree().unwrap_or(0);
        let mut m = Matrix::zeros(f, d, d);
        for i in 1..d {
            m.set(i, i - 1, f.one());
        }
        for i in 0..d {
            m.set(i, d - 1, f.neg(&p.coeff(i)));
        }
        m
    }

    /// `J_{p,l}`: `l` companion blocks of `p` on the diagonal and identity
    /// blocks directly above them.
    pub fn jordan(p: &Poly, l: usize) -> Matrix {
        let f = p.field();
        let d = p.degree().unwrap_or(0);
        let c = Matrix::companion(p);
        let mut m = Matrix::zeros(f, l * d, l * d);
        for b in 0..l {
            m.set_block(b * d, b * d, &c);
            if b + 1 < l {
                for i in 0..d {
                    m.set(b * d + i, (b + 1) * d + i, f.one());
                }
            }
        }
        m
    }

    /// `J_{alpha,n}`: eigenvalue `alpha` with ones on the superdiagonal.
    pub fn jordan_scalar(field: &Field, alpha: &Elem, n: usize) -> Matrix {
        let mut m = Matrix::scalar(field, n, alpha);
        for i in 0..n.saturating_sub(1) {
            m.set(i, i + 1, field.one());
        }
        m
    }

    pub fn block_diag(field: &Field, blocks: &[Matrix]) -> Matrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(field, r, c);
        let (mut i, mut j) = (0, 0);
        for b in blocks {
            m.set_block(i, j, b);
            i += b.rows;
            j += b.cols;
        }
        m
    }

    /// Permutation matrix sending `e_j` to `e_{perm[j]}`.
    pub fn permutation(field: &Field, perm: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(field, perm.len(), perm.len());
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, field.one());
        }
        m
    }

    /// Square matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, cols: &[Vec<Elem>]) -> Matrix {
        let n = cols.first().map_or(0, |c| c.len());
        let mut m = Matrix::zeros(field, n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn set_block(&mut self, i: usize, j: usize, b: &Matrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.set(i + r, j + c, b.get(r, c).clone());
            }
        }
    }

    pub fn block(&self, i: usize, j: usize, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(&self.field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, self.get(i + r, j + c).clone());
            }
        }
        m
    }

    /// Applies `f` to every entry, producing a matrix over `target`.
    pub fn map(&self, target: &Field, f: impl Fn(&Elem) -> Elem) -> Matrix {
        Matrix {
            field: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn check_same_shape(&self, other: &Matrix) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.check_same_shape(other);
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.add(a, b))
            .collect();
        Matrix { data, ..self.clone() }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.check_same_shape(other);
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.sub(a, b))
            .collect();
        Matrix { data, ..self.clone() }
    }

    pub fn neg(&self) -> Matrix {
        let f = &self.field;
        self.map(f, |x| f.neg(x))
    }

    pub fn scale(&self, c: &Elem) -> Matrix {
        let f = &self.field;
        self.map(f, |x| f.mul(x, c))
    }

    /// Matrix product; panics when the inner dimensions differ.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_exact() && f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(f.zero(), |acc, j| f.add(&acc, &f.mul(self.get(i, j), &v[j])))
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut base = self.clone();
        let mut r = Matrix::identity(&self.field, self.rows);
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

    /// `XY - YX`.
    pub fn commutator(x: &Matrix, y: &Matrix) -> Matrix {
        x.mul(y).sub(&y.mul(x))
    }

    pub fn trace(&self) -> Elem {
        let f = &self.field;
        (0..self.rows.min(self.cols)).fold(f.zero(), |acc, i| f.add(&acc, self.get(i, i)))
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    /// Largest entry magnitude.
    pub fn scale_magnitude(&self) -> f64 {
        self.data
            .iter()
            .map(|x| self.field.magnitude(x))
            .fold(0.0, f64::max)
    }

    /// Zero test used by elimination; relative to `scale` for approximate
    /// fields.
    fn negligible(&self, x: &Elem, scale: f64) -> bool {
        match self.field.tolerance() {
            None => self.field.is_zero(x),
            Some(tol) => self.field.magnitude(x) <= tol * scale.max(1.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    /// Entrywise equality; approximate fields compare within tolerance
    /// scaled by the larger entry magnitude.
    pub fn approx_eq(&self, other: &Matrix) -> bool {
        if self.rows != other.rows || self.cols != other.cols || self.field != other.field {
            return false;
        }
        match self.field.tolerance() {
            None => self.data == other.data,
            Some(tol) => {
                let scale = 1.0 + self.scale_magnitude().max(other.scale_magnitude());
                self.data
                    .iter()
                    .zip(&other.data)
                    .all(|(a, b)| self.field.magnitude(&self.field.sub(a, b)) <= tol * scale)
            }
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let scale = self.scale_magnitude();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // exact: first nonzero; approximate: largest magnitude
            let mut best: Option<usize> = None;
            for i in r..m.rows {
                let x = m.get(i, c);
                if m.negligible(x, scale) {
                    continue;
                }
                match best {
                    None => best = Some(i),
                    Some(b) if f.is_approx() && f.magnitude(x) > f.magnitude(m.get(b, c)) => {
                        best = Some(i)
                    }
                    _ => {}
                }
                if f.is_exact() {
                    break;
                }
            }
            let Some(p) = best else {
                for i in r..m.rows {
                    m.set(i, c, f.zero());
                }
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
                m.set(i, c, f.zero());
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NonSquare);
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Matrix::zeros(f, n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Matrix::identity(f, n));
        // scale the tolerance by the original matrix, not the identity
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(r.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn det(&self) -> Result<Elem> {
        if !self.is_square() {
            return Err(Error::NonSquare);
        }
        let cp = self.charpoly()?;
        let c0 = cp.coeff(0);
        Ok(if self.rows % 2 == 0 {
            c0
        } else {
            self.field.neg(&c0)
        })
    }

    /// Solves `self * x = b`, returning one solution if any exists.
    pub fn solve(&self, b: &[Elem]) -> Option<Vec<Elem>> {
        let f = &self.field;
        let mut aug = Matrix::zeros(f, self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (i, x) in b.iter().enumerate() {
            aug.set(i, self.cols, x.clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// `P * self * P^{-1}`.
    pub fn conjugate(&self, p: &Matrix) -> Result<Matrix> {
        Ok(p.mul(self).mul(&p.inverse()?))
    }

    /// Characteristic polynomial `det(T I - A)` by Berkowitz's division-free
    /// recurrence.
    pub fn charpoly(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::NonSquare);
        }
        let f = &self.field;
        let n = self.rows;
        // coefficients high to low
        let mut c: Vec<Elem> = vec![f.one()];
        for r in 0..n {
            let a = self.get(r, r).clone();
            let row: Vec<Elem> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let mut col: Vec<Elem> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let mut t = vec![f.one(), f.neg(&a)];
            for _ in 0..r {
                let dot = row
                    .iter()
                    .zip(&col)
                    .fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)));
                t.push(f.neg(&dot));
                col = (0..r)
                    .map(|i| {
                        (0..r).fold(f.zero(), |acc, j| {
                            f.add(&acc, &f.mul(self.get(i, j), &col[j]))
                        })
                    })
                    .collect();
            }
            // Toeplitz product: new[i] = sum_j t[i-j] c[j]
            let mut next = vec![f.zero(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, cj) in c.iter().enumerate().take(i + 1) {
                    *slot = f.add(slot, &f.mul(&t[i - j], cj));
                }
            }
            c = next;
        }
        c.reverse();
        Ok(Poly::new(f, c))
    }

    /// `p(self)`.
    pub fn eval_poly(&self, p: &Poly) -> Matrix {
        let f = &self.field;
        let n = self.rows;
        p.coeffs().iter().rev().fold(Matrix::zeros(f, n, n), |acc, c| {
            acc.mul(self).add(&Matrix::scalar(f, n, c))
        })
    }

    /// Monic polynomial of least degree killing `v` under `self`.
    pub fn vector_minpoly(&self, v: &[Elem]) -> Poly {
        let f = &self.field;
        let mut krylov: Vec<Vec<Elem>> = vec![v.to_vec()];
        loop {
            let m = Matrix::from_columns(f, &krylov);
            let null = m.nullspace();
            if let Some(rel) = null.into_iter().next() {
                // the first dependency has its last coefficient nonzero
                let lead = rel.last().unwrap().clone();
                let inv = f.inv(&lead).expect("dependency involves the newest vector");
                return Poly::new(f, rel.iter().map(|x| f.mul(x, &inv)).collect());
            }
            let next = self.mul_vec(krylov.last().unwrap());
            krylov.push(next);
        }
    }

    /// Minimal polynomial, the lcm of the minimal polynomials of the
    /// standard basis vectors.
    pub fn minpoly(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::NonSquare);
        }
        let f = &self.field;
        let n = self.rows;
        let mut acc = Poly::one(f);
        for i in 0..n {
            let mut e = vec![f.zero(); n];
            e[i] = f.one();
            if acc.degree() == Some(n) {
                break;
            }
            let mp = self.vector_minpoly(&e);
            acc = acc.lcm(&mp);
        }
        Ok(acc)
    }

    /// Jordan partition of a nilpotent matrix, parts in decreasing order.
    pub fn nilpotent_partition(&self) -> Result<Vec<usize>> {
        if !self.is_square() {
            return Err(Error::NonSquare);
        }
        let n = self.rows;
        let f = &self.field;
        let mut ranks = vec![n];
        let mut power = Matrix::identity(f, n);
        for _ in 0..=n {
            power = power.mul(self);
            ranks.push(power.rank());
        }
        if ranks[n] != 0 {
            return Err(Error::NotNilpotent);
        }
        let mut parts = Vec::new();
        for s in (1..=n).rev() {
            let count = ranks[s - 1] + ranks[s + 1] - 2 * ranks[s];
            parts.extend(std::iter::repeat(s).take(count));
        }
        Ok(parts)
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = (0..self.rows)
            .map(|i| Value::Array((0..self.cols).map(|j| self.field.to_json(self.get(i, j))).collect()))
            .collect();
        json!({
            "field": self.field.to_string(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": entries,
        })
    }

    /// Reads the JSON matrix format. A bare array of rows is accepted when a
    /// field is supplied; a `field` key in the object overrides `default`.
    pub fn from_json(v: &Value, default: Option<&Field>) -> Result<Matrix> {
        let (field, entries) = match v {
            Value::Object(map) => {
                let field = match map.get("field") {
                    Some(Value::String(s)) => s.parse::<Field>()?,
                    Some(other) => {
                        return Err(Error::Parse(format!("field must be a string, got {other}")))
                    }
                    None => default
                        .cloned()
                        .ok_or_else(|| Error::Parse("matrix has no field".into()))?,
                };
                let entries = map
                    .get("entries")
                    .ok_or_else(|| Error::Parse("matrix has no entries".into()))?;
                (field, entries)
            }
            Value::Array(_) => (
                default
                    .cloned()
                    .ok_or_else(|| Error::Parse("matrix has no field".into()))?,
                v,
            ),
            _ => return Err(Error::Parse(format!("not a matrix: {v}"))),
        };
        let rows = entries
            .as_array()
            .ok_or_else(|| Error::Parse("entries must be an array of rows".into()))?;
        let parsed = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("each row must be an array".into()))?
                    .iter()
                    .map(|x| field.from_json(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let m = Matrix::from_rows(&field, parsed)?;
        if let Value::Object(map) = v {
            for (key, expect) in [("rows", m.rows), ("cols", m.cols)] {
                if let Some(x) = map.get(key) {
                    if x.as_u64() != Some(expect as u64) {
                        return Err(Error::DimensionMismatch(format!(
                            "{key} = {x} but entries give {expect}"
                        )));
                    }
                }
            }
        }
        Ok(m)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| self.field.format(x)).collect();
        let width = cells.iter().map(|c| c.len()).max().unwrap_or(1);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(fm, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
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

    fn random_matrix(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        let data = (0..n * n).map(|_| f.random(rng)).collect();
        Matrix::new(f, n, n, data).unwrap()
    }

    fn random_invertible(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        loop {
            let m = random_matrix(f, n, rng);
            if m.is_invertible() {
                return m;
            }
        }
    }

    /// Leibniz-formula determinant of `T I - A`, evaluated at many points,
    /// as an independent check of the characteristic polynomial.
    fn leibniz_det(m: &Matrix) -> Elem {
        let f = m.field();
        let n = m.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = f.zero();
        permute(&mut perm, 0, &mut |p| {
            let mut prod = f.one();
            for (i, &j) in p.iter().enumerate() {
                prod = f.mul(&prod, m.get(i, j));
            }
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            total = if inversions % 2 == 0 {
                f.add(&total, &prod)
            } else {
                f.sub(&total, &prod)
            };
        });
        total
    }

    fn permute(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            visit(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, visit);
            p.swap(k, i);
        }
    }

    #[test]
    fn charpoly_examples() {
        let q = Field::rationals();
        let j = Matrix::jordan_scalar(&q, &q.zero(), 3);
        assert_eq!(j.charpoly().unwrap(), Poly::monomial(&q, 3));
        // [[0,b],[1,a]] -> T^2 - aT - b
        let c = Matrix::from_i64(&q, &[&[0, 5], &[1, 3]]);
        assert_eq!(c.charpoly().unwrap(), Poly::from_i64s(&q, &[-5, -3, 1]));
    }

    #[test]
    fn charpoly_matches_leibniz() {
        let f = fp(101);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..6 {
            let a = random_matrix(&f, n, &mut rng);
            let cp = a.charpoly().unwrap();
            for t in 0..10 {
                let te = f.from_i64(t);
                let shifted = Matrix::scalar(&f, n, &te).sub(&a);
                assert_eq!(cp.eval(&te), leibniz_det(&shifted));
            }
        }
    }

    #[test]
    fn minpoly_examples() {
        let q = Field::rationals();
        assert_eq!(
            Matrix::identity(&q, 3).minpoly().unwrap(),
            Poly::from_i64s(&q, &[-1, 1])
        );
        let f5 = fp(5);
        let d = Matrix::diag(&f5, &[f5.from_i64(1), f5.from_i64(2)]);
        assert_eq!(d.minpoly().unwrap(), Poly::from_i64s(&f5, &[2, -3, 1]));
        let j2 = Matrix::jordan_scalar(&q, &q.zero(), 4).pow(2);
        assert_eq!(j2.minpoly().unwrap(), Poly::monomial(&q, 2));
    }

    #[test]
    fn partitions() {
        let q = Field::rationals();
        assert_eq!(
            Matrix::jordan_scalar(&q, &q.zero(), 4).nilpotent_partition().unwrap(),
            vec![4]
        );
        assert_eq!(
            Matrix::jordan_scalar(&q, &q.zero(), 7)
                .pow(2)
                .nilpotent_partition()
                .unwrap(),
            vec![4, 3]
        );
        assert_eq!(
            Matrix::zeros(&q, 3, 3).nilpotent_partition().unwrap(),
            vec![1, 1, 1]
        );
        assert_eq!(
            Matrix::identity(&q, 2).nilpotent_partition(),
            Err(Error::NotNilpotent)
        );
    }

    #[test]
    fn inverse_and_solve() {
        let f = fp(7);
        let a = Matrix::from_i64(&f, &[&[1, 2], &[3, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(&f, 2));
        let sing = Matrix::from_i64(&f, &[&[1, 2], &[2, 4]]);
        assert_eq!(sing.inverse(), Err(Error::Singular));
        let x = a.solve(&[f.from_i64(1), f.from_i64(0)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![f.from_i64(1), f.from_i64(0)]);
    }

    #[test]
    fn real_inverse_within_tolerance() {
        let r = Field::real(1e-9).unwrap();
        let a = Matrix::new(
            &r,
            2,
            2,
            vec![Elem::Real(1e-3), Elem::Real(2.0), Elem::Real(3.0), Elem::Real(4.0)],
        )
        .unwrap();
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).approx_eq(&Matrix::identity(&r, 2)));
    }

    #[test]
    fn json_round_trip() {
        let q = Field::rationals();
        let a = Matrix::new(
            &q,
            1,
            2,
            vec![q.from_rational(1, 2).unwrap(), q.from_i64(-3)],
        )
        .unwrap();
        let v = a.to_json();
        assert_eq!(v["entries"][0][0], "1/2");
        assert_eq!(Matrix::from_json(&v, None).unwrap(), a);
    }

    #[test]
    fn jordan_block_layout() {
        let f2 = fp(2);
        let p = Poly::from_i64s(&f2, &[1, 1, 1]);
        let j = Matrix::jordan(&p, 2);
        assert_eq!(j.rows(), 4);
        assert_eq!(j.get(0, 2), &Elem::Int(1));
        assert_eq!(j.get(1, 3), &Elem::Int(1));
        assert_eq!(j.charpoly().unwrap(), p.pow(2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn charpoly_conjugation_invariant(seed in 0u64..100_000, n in 1usize..6) {
            let f = fp(101);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&f, n, &mut rng);
            let p = random_invertible(&f, n, &mut rng);
            prop_assert_eq!(a.conjugate(&p).unwrap().charpoly().unwrap(), a.charpoly().unwrap());
        }

        #[test]
        fn cayley_hamilton(seed in 0u64..100_000, n in 1usize..6, p in prop::sample::select(vec![2u64, 3, 101])) {
            let f = fp(p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&f, n, &mut rng);
            prop_assert!(a.eval_poly(&a.charpoly().unwrap()).is_zero());
            let mp = a.minpoly().unwrap();
            prop_assert!(a.eval_poly(&mp).is_zero());
            prop_assert!(a.charpoly().unwrap().rem(&mp).unwrap().is_zero());
        }

        #[test]
        fn partition_conjugation_invariant(seed in 0u64..100_000) {
            let f = fp(5);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = Matrix::block_diag(&f, &[
                Matrix::jordan_scalar(&f, &f.zero(), 3),
                Matrix::jordan_scalar(&f, &f.zero(), 2),
                Matrix::zeros(&f, 1, 1),
            ]);
            let p = random_invertible(&f, 6, &mut rng);
            prop_assert_eq!(a.conjugate(&p).unwrap().nilpotent_partition().unwrap(), vec![3, 2, 1]);
        }
    }
}
