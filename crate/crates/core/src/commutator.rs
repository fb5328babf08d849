//! Products of commutators.
//!
//! Every square matrix of size at least 2 is a product of two trace-zero
//! matrices, and every trace-zero matrix is a single commutator. Together
//! these give explicit witnesses for `[X1,X2]...[X_{m-1},X_m] = A` for every
//! even `m >= 4`, and for `m = 2` whenever `trace A = 0`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::jordan::{companion_lift, generalized_jordan_form, JordanBlock};
use crate::matrix::Matrix;
use crate::poly::Poly;

const FALLBACK_TRIES: usize = 256;
const FALLBACK_SAMPLES: usize = 1 << 16;

/// Two trace-zero matrices whose product is the target.
#[derive(Clone, Debug)]
pub struct TraceZeroPair {
    pub t1: Matrix,
    pub t2: Matrix,
}

impl TraceZeroPair {
    pub fn verify(&self, target: &Matrix) -> bool {
        let f = target.field();
        f.is_zero(&self.t1.trace())
            && f.is_zero(&self.t2.trace())
            && self.t1.mul(&self.t2).approx_eq(target)
    }

    fn checked(self, target: &Matrix) -> Result<TraceZeroPair> {
        if self.verify(target) {
            Ok(self)
        } else {
            Err(Error::VerificationFailed(
                "trace-zero factors do not multiply to the target".into(),
            ))
        }
    }

    /// Conjugates both factors: `(R^{-1} t1 R, R^{-1} t2 R)`.
    fn conjugated_back(&self, r: &Matrix) -> Result<TraceZeroPair> {
        let ri = r.inverse()?;
        Ok(TraceZeroPair {
            t1: ri.mul(&self.t1).mul(r),
            t2: ri.mul(&self.t2).mul(r),
        })
    }
}

/// Commutator pairs `(X_{2i-1}, X_{2i})` whose commutators multiply to the
/// target in order.
#[derive(Clone, Debug)]
pub struct CommutatorWitness {
    pub pairs: Vec<(Matrix, Matrix)>,
}

impl CommutatorWitness {
    pub fn evaluate(&self) -> Option<Matrix> {
        let mut it = self.pairs.iter();
        let (x, y) = it.next()?;
        let first = Matrix::commutator(x, y);
        Some(it.fold(first, |acc, (x, y)| acc.mul(&Matrix::commutator(x, y))))
    }

    pub fn verify(&self, target: &Matrix) -> bool {
        self.evaluate().is_some_and(|v| v.approx_eq(target))
    }
}

fn m2(f: &Field, a: Elem, b: Elem, c: Elem, d: Elem) -> Matrix {
    Matrix::new(f, 2, 2, vec![a, b, c, d]).expect("four entries")
}

/// Explicit factorizations of the 2x2 canonical shapes: `diag(a, b)`,
/// `[[a, 1], [0, a]]`, and a companion matrix `[[0, b], [1, a]]` with
/// `b != 0`.
pub fn two_by_two_trace_zero(a: &Matrix) -> Result<TraceZeroPair> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::UnhandledShape("expected a 2x2 matrix".into()));
    }
    let f = a.field();
    let (p, q, r, s) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
    let zero = f.zero();
    let one = f.one();
    let pair = if f.is_zero(q) && f.is_zero(r) {
        TraceZeroPair {
            t1: m2(f, zero.clone(), p.clone(), one.clone(), zero.clone()),
            t2: m2(f, zero.clone(), s.clone(), one, zero),
        }
    } else if f.is_zero(r) && f.is_one(q) && f.eq(p, s) {
        TraceZeroPair {
            t1: Matrix::diag(f, &[one.clone(), f.neg(&one)]),
            t2: m2(f, p.clone(), one, zero, f.neg(p)),
        }
    } else if f.is_zero(p) && f.is_one(r) && !f.is_zero(q) {
        // [[0, b], [1, a]]
        let (b, av) = (q, s);
        let a_over_b = f.div(av, b)?;
        TraceZeroPair {
            t1: m2(
                f,
                av.clone(),
                f.neg(b),
                f.add(&one, &f.mul(av, &a_over_b)),
                f.neg(av),
            ),
            t2: m2(f, one.clone(), zero, a_over_b, f.neg(&one)),
        }
    } else {
        return Err(Error::UnhandledShape(
            "not diagonal, a Jordan block, or an invertible companion matrix".into(),
        ));
    };
    pair.checked(a)
}

/// Diagonal conjugator turning an upper bidiagonal matrix with nonzero
/// superdiagonal into one with ones above the diagonal: returns `D` with
/// `D u D^{-1}` having unit superdiagonal.
fn unit_superdiagonal_scaling(u: &Matrix) -> Result<Matrix> {
    let f = u.field();
    let n = u.rows();
    let mut d = vec![f.one(); n];
    for i in 0..n.saturating_sub(1) {
        // (D U D^{-1})_{i,i+1} = d_i u_{i,i+1} / d_{i+1}
        d[i + 1] = f.mul(&d[i], u.get(i, i + 1));
    }
    if d.iter().any(|x| f.is_zero(x)) {
        return Err(Error::Singular);
    }
    Ok(Matrix::diag(f, &d))
}

/// The cyclic shift with ones above the diagonal and in the bottom-left
/// corner.
pub fn cyclic_shift(f: &Field, n: usize) -> Matrix {
    let perm: Vec<usize> = (0..n).map(|j| (j + n - 1) % n).collect();
    Matrix::permutation(f, &perm)
}

/// `J_{alpha,n}` as a product of two trace-zero matrices.
///
/// Even `n` uses an alternating-sign diagonal times a signed bidiagonal.
/// Odd `n` writes a bidiagonal matrix with alternating superdiagonal as the
/// cyclic shift times a trace-zero matrix, then conjugates that bidiagonal
/// matrix onto `J_{alpha,n}` by a diagonal scaling.
pub fn jordan_block_trace_zero(f: &Field, alpha: &Elem, n: usize) -> Result<TraceZeroPair> {
    if n < 2 {
        return Err(Error::SizeTooSmall("Jordan block needs n >= 2".into()));
    }
    let target = Matrix::jordan_scalar(f, alpha, n);
    if n == 2 {
        return two_by_two_trace_zero(&target);
    }
    let sign = |i: usize| if i % 2 == 0 { f.one() } else { f.from_i64(-1) };
    if n % 2 == 0 {
        let d = Matrix::diag(f, &(0..n).map(sign).collect::<Vec<_>>());
        let mut m = Matrix::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, f.mul(&sign(i), alpha));
            if i + 1 < n {
                m.set(i, i + 1, sign(i));
            }
        }
        return TraceZeroPair { t1: d, t2: m }.checked(&target);
    }
    let z = cyclic_shift(f, n);
    let mut w = Matrix::zeros(f, n, n);
    w.set(0, n - 1, alpha.clone());
    for i in 1..n {
        w.set(i, i - 1, alpha.clone());
        w.set(i, i, sign(i - 1));
    }
    let product = z.mul(&w);
    let d = unit_superdiagonal_scaling(&product)?;
    // D (Z W) D^{-1} = J, so J = (D Z D^{-1})(D W D^{-1})
    let di = d.inverse()?;
    TraceZeroPair {
        t1: d.mul(&z).mul(&di),
        t2: d.mul(&w).mul(&di),
    }
    .checked(&target)
}

/// A diagonal matrix as a product of two trace-zero matrices.
///
/// Zero entries become 1x1 zero blocks, nonzero entries are paired with the
/// swap factorization `[[0,1],[1,0]] [[0,b],[a,0]] = diag(a, b)`, an odd
/// number of nonzero entries uses one 3x3 block, and a lone nonzero entry is
/// paired with a zero.
pub fn diagonal_trace_zero(f: &Field, entries: &[Elem]) -> Result<TraceZeroPair> {
    let n = entries.len();
    if n < 2 {
        return Err(Error::SizeTooSmall("diagonal factorization needs n >= 2".into()));
    }
    let target = Matrix::diag(f, entries);
    let nonzero: Vec<usize> = (0..n).filter(|&i| !f.is_zero(&entries[i])).collect();
    let zeros: Vec<usize> = (0..n).filter(|&i| f.is_zero(&entries[i])).collect();
    // groups of original indices, each factored on its own
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut zero_iter = zeros.iter().copied();
    match nonzero.len() {
        0 => {}
        1 => groups.push(vec![nonzero[0], zero_iter.next().expect("n >= 2")]),
        c => {
            let mut rest = &nonzero[..];
            if c % 2 == 1 {
                groups.push(rest[..3].to_vec());
                rest = &rest[3..];
            }
            for chunk in rest.chunks(2) {
                groups.push(chunk.to_vec());
            }
        }
    }
    for z in zero_iter {
        groups.push(vec![z]);
    }
    let mut t1_blocks = Vec::new();
    let mut t2_blocks = Vec::new();
    let mut order = Vec::new();
    for g in &groups {
        let vals: Vec<&Elem> = g.iter().map(|&i| &entries[i]).collect();
        let (t1, t2) = match vals.len() {
            1 => (Matrix::zeros(f, 1, 1), Matrix::zeros(f, 1, 1)),
            2 => (
                Matrix::from_i64(f, &[&[0, 1], &[1, 0]]),
                m2(f, f.zero(), vals[1].clone(), vals[0].clone(), f.zero()),
            ),
            _ => {
                let (a1, a2, a3) = (vals[0], vals[1], vals[2]);
                let z = f.zero();
                let t1 = Matrix::new(
                    f,
                    3,
                    3,
                    vec![
                        z.clone(),
                        a3.clone(),
                        z.clone(),
                        f.neg(a1),
                        a3.clone(),
                        z.clone(),
                        z.clone(),
                        z.clone(),
                        f.neg(a3),
                    ],
                )?;
                let t2 = Matrix::new(
                    f,
                    3,
                    3,
                    vec![
                        f.one(),
                        f.neg(&f.div(a2, a1)?),
                        z.clone(),
                        f.div(a1, a3)?,
                        z.clone(),
                        z.clone(),
                        z.clone(),
                        z,
                        f.from_i64(-1),
                    ],
                )?;
                (t1, t2)
            }
        };
        t1_blocks.push(t1);
        t2_blocks.push(t2);
        order.extend(g.iter().copied());
    }
    let grouped = TraceZeroPair {
        t1: Matrix::block_diag(f, &t1_blocks),
        t2: Matrix::block_diag(f, &t2_blocks),
    };
    // S sends original coordinate order[k] to position k
    let mut perm = vec![0; n];
    for (k, &i) in order.iter().enumerate() {
        perm[i] = k;
    }
    let s = Matrix::permutation(f, &perm);
    grouped.conjugated_back(&s)?.checked(&target)
}

/// `J_{alpha,n} (+) (beta)` as a product of two trace-zero matrices.
///
/// For odd `n` the target is conjugated (by a diagonal scaling) to a
/// bidiagonal matrix with alternating superdiagonal, which is the cyclic
/// shift times a trace-zero matrix. For even `n` the inverse cyclic shift is
/// used: `T = Z^{-1} (Z T)` with `trace(Z T) = 0` because `T` has zero
/// subdiagonal and zero top-right corner.
pub fn jordan_plus_scalar_trace_zero(
    f: &Field,
    alpha: &Elem,
    n: usize,
    beta: &Elem,
) -> Result<TraceZeroPair> {
    if n < 2 {
        return Err(Error::SizeTooSmall("Jordan part needs n >= 2".into()));
    }
    let size = n + 1;
    let target = Matrix::block_diag(
        f,
        &[
            Matrix::jordan_scalar(f, alpha, n),
            Matrix::scalar(f, 1, beta),
        ],
    );
    let z = cyclic_shift(f, size);
    if n % 2 == 0 {
        let zi = z.transpose();
        return TraceZeroPair {
            t1: zi,
            t2: z.mul(&target),
        }
        .checked(&target);
    }
    // alternating superdiagonal 1, -1, ..., -1 on the Jordan part
    let mut alt = target.clone();
    for i in 0..n - 1 {
        let s = if i % 2 == 0 { f.one() } else { f.from_i64(-1) };
        alt.set(i, i + 1, s);
    }
    let w = z.transpose().mul(&alt);
    let d = unit_superdiagonal_scaling(&alt.block(0, 0, n, n))?;
    let d = Matrix::block_diag(f, &[d, Matrix::identity(f, 1)]);
    let di = d.inverse()?;
    TraceZeroPair {
        t1: d.mul(&z).mul(&di),
        t2: d.mul(&w).mul(&di),
    }
    .checked(&target)
}

/// The companion matrix of `p` (degree at least 3) as a product of two
/// trace-zero matrices, by an explicit pair whose entries are the
/// coefficients of `p` and the constant `-(n-2)`.
pub fn companion_trace_zero(p: &Poly) -> Result<TraceZeroPair> {
    let f = p.field();
    let n = p.degree().unwrap_or(0);
    if n < 3 {
        return Err(Error::SizeTooSmall("companion factorization needs degree >= 3".into()));
    }
    let target = Matrix::companion(&p.monic());
    let a: Vec<Elem> = (0..n).map(|i| target.get(i, n - 1).clone()).map(|x| f.neg(&x)).collect();
    let shift = f.from_i64(-(n as i64 - 2));
    let mut t1 = Matrix::zeros(f, n, n);
    for i in 0..n - 1 {
        t1.set(i, n - 1, a[i].clone());
        if i >= 1 {
            t1.set(i, i, f.one());
        }
    }
    t1.set(n - 1, 0, f.one());
    t1.set(n - 1, 1, f.from_i64(-1));
    t1.set(n - 1, n - 1, shift.clone());
    let mut t2 = Matrix::zeros(f, n, n);
    t2.set(0, 0, f.one());
    t2.set(0, n - 2, f.add(t2.get(0, n - 2), &f.one()));
    t2.set(0, n - 1, f.add(&f.neg(&a[n - 1]), &shift));
    for i in 1..n - 1 {
        t2.set(i, i - 1, f.one());
    }
    t2.set(n - 1, n - 1, f.from_i64(-1));
    TraceZeroPair { t1, t2 }.checked(&target)
}

/// A cyclic matrix `m` as `K C K^{-1}` with `C` the companion matrix of its
/// characteristic polynomial; returns `K`.
fn cyclic_basis(m: &Matrix, start: &[Elem]) -> Option<Matrix> {
    let f = m.field();
    let n = m.rows();
    let mut cols = vec![start.to_vec()];
    for _ in 1..n {
        let next = m.mul_vec(cols.last().unwrap());
        cols.push(next);
    }
    let k = Matrix::from_columns(f, &cols);
    k.is_invertible().then_some(k)
}

enum Group {
    /// Indices of GJF blocks handled together, with the pair for their
    /// direct sum (in the listed order).
    Blocks(Vec<usize>, TraceZeroPair),
}

fn block_pair(block: &JordanBlock) -> Result<TraceZeroPair> {
    let f = block.p.field();
    let d = block.degree();
    let l = block.l;
    match (d, l) {
        (1, _) => jordan_block_trace_zero(f, &block.eigenvalue().expect("linear"), l),
        (_, 1) if d == 2 => two_by_two_trace_zero(&block.realize()),
        (_, 1) => companion_trace_zero(&block.p),
        _ => {
            let (ext, alpha) = f.extend(&block.p)?;
            let pair = jordan_block_trace_zero(&ext, &alpha, l)?;
            let t1 = companion_lift(&pair.t1, &block.p)?;
            let t2 = companion_lift(&pair.t2, &block.p)?;
            TraceZeroPair { t1, t2 }.checked(&block.realize())
        }
    }
}

/// Any square matrix of size `n >= 2` as a product of two trace-zero
/// matrices.
pub fn factor_two_trace_zero(a: &Matrix) -> Result<TraceZeroPair> {
    if !a.is_square() {
        return Err(Error::NonSquare);
    }
    let n = a.rows();
    if n < 2 {
        return Err(Error::SizeTooSmall(
            "a 1x1 matrix is a product of trace-zero matrices only when it is zero".into(),
        ));
    }
    let f = a.field();
    let gjf = generalized_jordan_form(a)?;
    let form = gjf.form();
    if n == 2 {
        let canon = if gjf.blocks.len() == 2 {
            Matrix::diag(f, &[form.get(0, 0).clone(), form.get(1, 1).clone()])
        } else {
            form.clone()
        };
        let pair = two_by_two_trace_zero(&canon)?;
        return pair.conjugated_back(&gjf.conjugator)?.checked(a);
    }
    let blocks = &gjf.blocks;
    let scalars: Vec<usize> = (0..blocks.len())
        .filter(|&i| blocks[i].size() == 1)
        .collect();
    let mut used = vec![false; blocks.len()];
    let mut groups: Vec<Group> = Vec::new();
    if scalars.len() >= 2 {
        let vals: Vec<Elem> = scalars
            .iter()
            .map(|&i| blocks[i].eigenvalue().expect("linear"))
            .collect();
        groups.push(Group::Blocks(scalars.clone(), diagonal_trace_zero(f, &vals)?));
        for &i in &scalars {
            used[i] = true;
        }
    } else if let Some(&s) = scalars.first() {
        let beta = blocks[s].eigenvalue().expect("linear");
        used[s] = true;
        if f.is_zero(&beta) {
            groups.push(Group::Blocks(
                vec![s],
                TraceZeroPair {
                    t1: Matrix::zeros(f, 1, 1),
                    t2: Matrix::zeros(f, 1, 1),
                },
            ));
        } else if let Some(j) = (0..blocks.len()).find(|&j| blocks[j].degree() == 1 && blocks[j].l >= 2) {
            let alpha = blocks[j].eigenvalue().expect("linear");
            let pair = jordan_plus_scalar_trace_zero(f, &alpha, blocks[j].l, &beta)?;
            used[j] = true;
            groups.push(Group::Blocks(vec![j, s], pair));
        } else {
            // every other block has degree >= 2, so the sum with the scalar
            // block is cyclic and similar to a companion matrix
            let j = (0..blocks.len()).find(|&j| j != s).ok_or_else(|| {
                Error::UnhandledShape("single scalar block with nothing to pair".into())
            })?;
            used[j] = true;
            let m = Matrix::block_diag(f, &[blocks[j].realize(), blocks[s].realize()]);
            let size = m.rows();
            let mut k = None;
            for start in 0..size {
                let mut v = vec![f.zero(); size];
                v[start] = f.one();
                v[size - 1] = f.one();
                if let Some(kk) = cyclic_basis(&m, &v) {
                    k = Some(kk);
                    break;
                }
            }
            let k = k.ok_or_else(|| Error::VerificationFailed("no cyclic vector found".into()))?;
            let cp = m.charpoly()?;
            let pair = companion_trace_zero(&cp)?;
            // m = K C K^{-1}
            let ki = k.inverse()?;
            let pair = pair.conjugated_back(&ki)?;
            groups.push(Group::Blocks(vec![j, s], pair.checked(&m)?));
        }
    }
    for (i, b) in blocks.iter().enumerate() {
        if !used[i] {
            groups.push(Group::Blocks(vec![i], block_pair(b)?));
        }
    }
    // Block offsets in the GJF.
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut acc = 0;
    for b in blocks {
        offsets.push(acc);
        acc += b.size();
    }
    let mut perm = vec![0; n];
    let mut pos = 0;
    let mut t1_blocks = Vec::new();
    let mut t2_blocks = Vec::new();
    for Group::Blocks(ids, pair) in &groups {
        for &i in ids {
            for c in 0..blocks[i].size() {
                perm[offsets[i] + c] = pos;
                pos += 1;
            }
        }
        t1_blocks.push(pair.t1.clone());
        t2_blocks.push(pair.t2.clone());
    }
    let grouped = TraceZeroPair {
        t1: Matrix::block_diag(f, &t1_blocks),
        t2: Matrix::block_diag(f, &t2_blocks),
    };
    // S * form * S^{-1} is the grouped block sum; A = P^{-1} form P
    let s = Matrix::permutation(f, &perm);
    let r = s.mul(&gjf.conjugator);
    grouped.conjugated_back(&r)?.checked(a)
}

/// Conjugator `P` with `P t P^{-1}` having zero diagonal, for a non-scalar
/// trace-zero matrix `t`.
fn zero_diagonal_conjugator(t: &Matrix, rng: &mut ChaCha8Rng) -> Option<Matrix> {
    let f = t.field();
    let n = t.rows();
    if (0..n).all(|i| f.is_zero(t.get(i, i))) {
        return Some(Matrix::identity(f, n));
    }
    if n == 1 {
        return None;
    }
    let mut candidates: Vec<Vec<Elem>> = Vec::new();
    for i in 0..n {
        let mut v = vec![f.zero(); n];
        v[i] = f.one();
        candidates.push(v);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![f.zero(); n];
            v[i] = f.one();
            v[j] = f.one();
            candidates.push(v);
        }
    }
    for _ in 0..16 {
        candidates.push((0..n).map(|_| f.random(rng)).collect());
    }
    for v in candidates {
        let tv = t.mul_vec(&v);
        let mut basis = vec![v.clone(), tv];
        if Matrix::from_columns(f, &basis).rank() < 2 {
            continue;
        }
        for i in 0..n {
            let mut e = vec![f.zero(); n];
            e[i] = f.one();
            let mut trial = basis.clone();
            trial.push(e);
            if Matrix::from_columns(f, &trial).rank() == trial.len() {
                basis = trial;
            }
            if basis.len() == n {
                break;
            }
        }
        let q = Matrix::from_columns(f, &basis);
        let Ok(p) = q.inverse() else { continue };
        // in the new basis the first column is e_1, so entry (0,0) vanishes
        let u = p.mul(t).mul(&q);
        let sub = u.block(1, 1, n - 1, n - 1);
        let sub_p = if n - 1 == 1 {
            if !f.is_zero(sub.get(0, 0)) {
                continue;
            }
            Matrix::identity(f, 1)
        } else {
            let c = sub.get(0, 0).clone();
            let scalar = sub.approx_eq(&Matrix::scalar(f, n - 1, &c));
            if scalar && !f.is_zero(&c) {
                continue;
            }
            match zero_diagonal_conjugator(&sub, rng) {
                Some(sp) => sp,
                None => continue,
            }
        };
        let full = Matrix::block_diag(f, &[Matrix::identity(f, 1), sub_p]).mul(&p);
        return Some(full);
    }
    None
}

/// Commutator of a cyclic-shift-like pair equal to the identity on a block
/// whose size is the characteristic.
fn scalar_commutator(f: &Field, n: usize, c: &Elem) -> Option<(Matrix, Matrix)> {
    let p = f.characteristic() as usize;
    if p == 0 || n % p != 0 {
        return None;
    }
    let mut xb = Matrix::zeros(f, p, p);
    let mut yb = Matrix::zeros(f, p, p);
    for i in 0..p - 1 {
        xb.set(i, i + 1, f.mul(c, &f.from_i64(i as i64 + 1)));
        yb.set(i + 1, i, f.one());
    }
    let k = n / p;
    let x = Matrix::block_diag(f, &vec![xb; k]);
    let y = Matrix::block_diag(f, &vec![yb; k]);
    Some((x, y))
}

/// `(X, Y)` with `XY - YX = t` for a trace-zero matrix `t`.
pub fn trace_zero_to_commutator(t: &Matrix, seed: u64) -> Result<(Matrix, Matrix)> {
    if !t.is_square() {
        return Err(Error::NonSquare);
    }
    let f = t.field();
    let n = t.rows();
    if !f.is_zero(&t.trace()) {
        return Err(Error::NonzeroTrace);
    }
    let check = |x: Matrix, y: Matrix| -> Option<(Matrix, Matrix)> {
        Matrix::commutator(&x, &y).approx_eq(t).then_some((x, y))
    };
    if t.is_zero() {
        return Ok((Matrix::zeros(f, n, n), Matrix::zeros(f, n, n)));
    }
    let c = t.get(0, 0).clone();
    if t.approx_eq(&Matrix::scalar(f, n, &c)) {
        if let Some((x, y)) = scalar_commutator(f, n, &c).and_then(|(x, y)| check(x, y)) {
            return Ok((x, y));
        }
        return Err(Error::WitnessNotFound);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let distinct: Option<Vec<Elem>> = if f.is_finite() {
        let q = f.cardinality().unwrap_or(u128::MAX);
        ((n as u128) <= q).then(|| (0..n as u128).map(|i| f.element_at(i)).collect())
    } else {
        Some((0..n).map(|i| f.from_i64(i as i64)).collect())
    };
    if let (Some(d), Some(p)) = (distinct, zero_diagonal_conjugator(t, &mut rng)) {
        let z = p.mul(t).mul(&p.inverse()?);
        let mut b = Matrix::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    b.set(i, j, f.div(z.get(i, j), &f.sub(&d[i], &d[j]))?);
                }
            }
        }
        let pi = p.inverse()?;
        let x = pi.mul(&Matrix::diag(f, &d)).mul(&p);
        let y = pi.mul(&b).mul(&p);
        if let Some(w) = check(x, y) {
            return Ok(w);
        }
    }
    // Random X, then solve the linear system XY - YX = t for Y. The image of
    // ad X is orthogonal to every power of X under the trace form, so X is
    // screened by that test before the n^2 system is built.
    let mut solves = 0;
    for _ in 0..FALLBACK_SAMPLES {
        if solves >= FALLBACK_TRIES {
            break;
        }
        let x = Matrix::new(f, n, n, (0..n * n).map(|_| f.random(&mut rng)).collect())?;
        let mut xp = x.clone();
        let mut orthogonal = true;
        for _ in 1..n {
            if !f.is_zero(&t.mul(&xp).trace()) {
                orthogonal = false;
                break;
            }
            xp = xp.mul(&x);
        }
        if !orthogonal {
            continue;
        }
        solves += 1;
        let mut sys = Matrix::zeros(f, n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let eq = i * n + j;
                for k in 0..n {
                    // (XY)_{ij} = sum_k X_ik Y_kj ; (YX)_{ij} = sum_k Y_ik X_kj
                    let u = k * n + j;
                    let cur = sys.get(eq, u).clone();
                    sys.set(eq, u, f.add(&cur, x.get(i, k)));
                    let v = i * n + k;
                    let cur = sys.get(eq, v).clone();
                    sys.set(eq, v, f.sub(&cur, x.get(k, j)));
                }
            }
        }
        if let Some(sol) = sys.solve(t.entries()) {
            let y = Matrix::new(f, n, n, sol)?;
            if let Some(w) = check(x, y) {
                return Ok(w);
            }
        }
    }
    Err(Error::WitnessNotFound)
}

/// Witness for `[X1,X2]...[X_{m-1},X_m] = a`, `m` even.
pub fn solve_commutator_product(a: &Matrix, m: usize, seed: u64) -> Result<CommutatorWitness> {
    if m < 2 || m % 2 == 1 {
        return Err(Error::InvalidInput(format!(
            "commutator words need an even number of letters, got {m}"
        )));
    }
    if !a.is_square() {
        return Err(Error::NonSquare);
    }
    let f = a.field();
    let n = a.rows();
    let witness = if m == 2 {
        let (x, y) = trace_zero_to_commutator(a, seed)?;
        CommutatorWitness {
            pairs: vec![(x, y)],
        }
    } else {
        let extra = (m - 4) / 2;
        let u = cyclic_shift(f, n);
        let u_inv = u.transpose();
        let core_target = a.mul(&u_inv.pow(extra as u64));
        let pair = factor_two_trace_zero(&core_target)?;
        let mut pairs = vec![
            trace_zero_to_commutator(&pair.t1, seed)?,
            trace_zero_to_commutator(&pair.t2, seed.wrapping_add(1))?,
        ];
        if extra > 0 {
            let uc = trace_zero_to_commutator(&u, seed.wrapping_add(2))?;
            pairs.extend(std::iter::repeat(uc).take(extra));
        }
        CommutatorWitness { pairs }
    };
    if !witness.verify(a) {
        return Err(Error::VerificationFailed(
            "commutator product does not reproduce the target".into(),
        ));
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn all_matrices(f: &Field, n: usize) -> Vec<Matrix> {
        let q = f.cardinality().unwrap();
        let total = q.pow((n * n) as u32);
        (0..total)
            .map(|mut idx| {
                let data = (0..n * n)
                    .map(|_| {
                        let e = f.element_at(idx % q);
                        idx /= q;
                        e
                    })
                    .collect();
                Matrix::new(f, n, n, data).unwrap()
            })
            .collect()
    }

    #[test]
    fn two_by_two_shapes() {
        let q = Field::rationals();
        let pair = two_by_two_trace_zero(&Matrix::diag(&q, &[q.from_i64(3), q.from_i64(5)])).unwrap();
        assert_eq!(pair.t1, Matrix::from_i64(&q, &[&[0, 3], &[1, 0]]));
        assert_eq!(pair.t2, Matrix::from_i64(&q, &[&[0, 5], &[1, 0]]));
        let j = Matrix::jordan_scalar(&q, &q.from_i64(7), 2);
        let pair = two_by_two_trace_zero(&j).unwrap();
        assert_eq!(pair.t1, Matrix::from_i64(&q, &[&[1, 0], &[0, -1]]));
        assert_eq!(pair.t2, Matrix::from_i64(&q, &[&[7, 1], &[0, -7]]));
        // [[0,b],[1,a]] with a = 2, b = 4
        let c = Matrix::from_i64(&q, &[&[0, 4], &[1, 2]]);
        let pair = two_by_two_trace_zero(&c).unwrap();
        assert_eq!(pair.t1, Matrix::from_i64(&q, &[&[2, -4], &[2, -2]]));
        assert_eq!(
            pair.t2,
            Matrix::new(&q, 2, 2, vec![q.one(), q.from_rational(1, 2).unwrap(), q.zero(), q.from_i64(-1)])
                .unwrap()
                .transpose()
        );
        assert!(matches!(
            two_by_two_trace_zero(&Matrix::from_i64(&q, &[&[1, 2], &[3, 4]])),
            Err(Error::UnhandledShape(_))
        ));
    }

    #[test]
    fn jordan_blocks() {
        for (p, alpha, n) in [(5u64, 1i64, 4usize), (7, 2, 3), (7, 0, 5), (2, 1, 3), (3, 2, 6)] {
            let f = fp(p);
            let pair = jordan_block_trace_zero(&f, &f.from_i64(alpha), n).unwrap();
            assert!(pair.verify(&Matrix::jordan_scalar(&f, &f.from_i64(alpha), n)));
        }
        let f5 = fp(5);
        let pair = jordan_block_trace_zero(&f5, &f5.one(), 4).unwrap();
        assert_eq!(
            pair.t1,
            Matrix::diag(&f5, &[f5.from_i64(1), f5.from_i64(-1), f5.from_i64(1), f5.from_i64(-1)])
        );
    }

    #[test]
    fn diagonal_cases() {
        let f7 = fp(7);
        let d = |v: &[i64]| v.iter().map(|&x| f7.from_i64(x)).collect::<Vec<_>>();
        let pair = diagonal_trace_zero(&f7, &d(&[3, 4])).unwrap();
        assert_eq!(pair.t1, Matrix::from_i64(&f7, &[&[0, 1], &[1, 0]]));
        assert_eq!(pair.t2, Matrix::from_i64(&f7, &[&[0, 4], &[3, 0]]));
        let pair = diagonal_trace_zero(&f7, &d(&[1, 2, 3])).unwrap();
        assert_eq!(pair.t1, Matrix::from_i64(&f7, &[&[0, 3, 0], &[-1, 3, 0], &[0, 0, -3]]));
        let pair = diagonal_trace_zero(&f7, &d(&[0, 0])).unwrap();
        assert!(pair.t1.mul(&pair.t2).is_zero());
        for entries in [vec![0, 5, 0], vec![1, 0, 2, 3, 0], vec![0, 0, 0], vec![4, 0]] {
            let e = d(&entries);
            assert!(diagonal_trace_zero(&f7, &e).unwrap().verify(&Matrix::diag(&f7, &e)));
        }
    }

    #[test]
    fn jordan_plus_scalar_cases() {
        for (p, alpha, n, beta) in [(3u64, 0i64, 2usize, 1i64), (3, 0, 2, 0), (7, 1, 3, 2), (5, 3, 4, 1), (2, 1, 5, 1)] {
            let f = fp(p);
            let pair = jordan_plus_scalar_trace_zero(&f, &f.from_i64(alpha), n, &f.from_i64(beta)).unwrap();
            assert_eq!(pair.t1.rows(), n + 1);
        }
    }

    #[test]
    fn companion_cases() {
        let q = Field::rationals();
        assert!(companion_trace_zero(&Poly::monomial(&q, 3)).is_ok());
        let f5 = fp(5);
        assert!(companion_trace_zero(&Poly::from_i64s(&f5, &[-1, 0, 0, 1])).is_ok());
        let f7 = fp(7);
        assert!(companion_trace_zero(&Poly::from_i64s(&f7, &[1, 2, 0, 1])).is_ok());
        for n in 3..8 {
            let coeffs: Vec<i64> = (0..n).map(|i| 2 * i as i64 - 3).chain([1]).collect();
            assert!(companion_trace_zero(&Poly::from_i64s(&q, &coeffs)).is_ok());
        }
    }

    #[test]
    fn every_two_by_two_over_f3() {
        let f3 = fp(3);
        for a in all_matrices(&f3, 2) {
            let pair = factor_two_trace_zero(&a).unwrap();
            assert!(pair.verify(&a), "{a}");
        }
    }

    #[test]
    fn special_targets() {
        let f3 = fp(3);
        assert!(factor_two_trace_zero(&Matrix::zeros(&f3, 3, 3)).unwrap().t1.is_zero());
        let f2 = fp(2);
        let p = Poly::from_i64s(&f2, &[1, 1, 0, 0, 1]);
        assert!(factor_two_trace_zero(&Matrix::companion(&p)).is_ok());
    }

    #[test]
    fn commutator_examples() {
        let f3 = fp(3);
        let t = Matrix::from_i64(&f3, &[&[0, 1], &[1, 0]]);
        let (x, y) = trace_zero_to_commutator(&t, 0).unwrap();
        assert_eq!(x, Matrix::diag(&f3, &[f3.zero(), f3.one()]));
        assert_eq!(y, Matrix::from_i64(&f3, &[&[0, -1], &[1, 0]]));
        let f2 = fp(2);
        let (x, y) = trace_zero_to_commutator(&Matrix::identity(&f2, 2), 0).unwrap();
        assert_eq!(Matrix::commutator(&x, &y), Matrix::identity(&f2, 2));
        let q = Field::rationals();
        assert_eq!(
            trace_zero_to_commutator(&Matrix::identity(&q, 2), 0).unwrap_err(),
            Error::NonzeroTrace
        );
        // F_2 with n = 3 exercises the small-field fallback
        let t = Matrix::from_i64(&f2, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 0]]);
        let (x, y) = trace_zero_to_commutator(&t, 4).unwrap();
        assert_eq!(Matrix::commutator(&x, &y), t);
    }

    #[test]
    fn commutator_products() {
        let q = Field::rationals();
        let a = Matrix::diag(&q, &[q.one(), q.from_i64(-1)]);
        assert!(solve_commutator_product(&a, 2, 0).unwrap().verify(&a));
        let f2 = fp(2);
        for a in all_matrices(&f2, 2) {
            let w = solve_commutator_product(&a, 4, 0).unwrap();
            assert_eq!(w.pairs.len(), 2);
        }
        let f5 = fp(5);
        let j = Matrix::jordan_scalar(&f5, &f5.from_i64(2), 3);
        assert_eq!(solve_commutator_product(&j, 6, 1).unwrap().pairs.len(), 3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn random_targets_factor(seed in 0u64..1_000_000, p in prop::sample::select(vec![2u64, 3, 5, 101]), n in 2usize..6) {
            let f = fp(p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = Matrix::new(&f, n, n, (0..n * n).map(|_| f.random(&mut rng)).collect()).unwrap();
            let w = solve_commutator_product(&a, 4, seed).unwrap();
            prop_assert!(w.verify(&a));
        }

        #[test]
        fn two_by_two_formulas_random(seed in 0u64..1_000_000) {
            let f = fp(101);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (x, y) = (f.random(&mut rng), f.random(&mut rng));
            let b = f.random_nonzero(&mut rng);
            prop_assert!(two_by_two_trace_zero(&Matrix::diag(&f, &[x.clone(), y.clone()])).is_ok());
            prop_assert!(two_by_two_trace_zero(&Matrix::jordan_scalar(&f, &x, 2)).is_ok());
            let c = m2(&f, f.zero(), b, f.one(), y);
            prop_assert!(two_by_two_trace_zero(&c).is_ok());
        }
    }
}
