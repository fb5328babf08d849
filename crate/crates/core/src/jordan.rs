//! Similarity solving, generalized Jordan forms, and the companion lift
//! from matrices over `K(alpha)` to block matrices over `K`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factor;
use crate::field::{Elem, Field, Kind};
use crate::matrix::Matrix;
use crate::poly::Poly;

const SIMILARITY_RETRIES: usize = 32;
const EXHAUSTIVE_LIMIT: u128 = 1 << 20;

/// Finds an invertible `P` with `P * a * P^{-1} = b`.
///
/// Solves the linear system `P a = b P`, then tries seeded random elements
/// of the solution space, then (over small finite fields) every element.
pub fn solve_similarity(a: &Matrix, b: &Matrix, seed: u64) -> Result<Matrix> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::NonSquare);
    }
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if a.field() != b.field() {
        return Err(Error::DescriptorMismatch);
    }
    let f = a.field();
    let n = a.rows();
    if f.is_exact() && a.charpoly()? != b.charpoly()? {
        return Err(Error::NotSimilar);
    }
    // Unknown P_{rs} sits at index r*n + s.
    let mut sys = Matrix::zeros(f, n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let eq = i * n + j;
            for k in 0..n {
                let pa = i * n + k;
                let cur = sys.get(eq, pa).clone();
                sys.set(eq, pa, f.add(&cur, a.get(k, j)));
                let bp = k * n + j;
                let cur = sys.get(eq, bp).clone();
                sys.set(eq, bp, f.sub(&cur, b.get(i, k)));
            }
        }
    }
    let basis = sys.nullspace();
    if basis.is_empty() {
        return Err(Error::NotSimilar);
    }
    let combine = |coeffs: &[Elem]| -> Matrix {
        let mut data = vec![f.zero(); n * n];
        for (c, v) in coeffs.iter().zip(&basis) {
            if f.is_zero(c) {
                continue;
            }
            for (d, x) in data.iter_mut().zip(v) {
                *d = f.add(d, &f.mul(c, x));
            }
        }
        Matrix::new(f, n, n, data).expect("n*n entries")
    };
    let accept = |p: Matrix| -> Option<Matrix> {
        let inv = p.inverse().ok()?;
        p.mul(a).mul(&inv).approx_eq(b).then_some(p)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SIMILARITY_RETRIES {
        let coeffs: Vec<Elem> = basis.iter().map(|_| f.random(&mut rng)).collect();
        if let Some(p) = accept(combine(&coeffs)) {
            return Ok(p);
        }
    }
    if let Some(q) = f.cardinality() {
        let dim = basis.len() as u32;
        if let Some(total) = q.checked_pow(dim) {
            if total <= EXHAUSTIVE_LIMIT {
                for idx in 0..total {
                    let mut rest = idx;
                    let coeffs: Vec<Elem> = (0..dim)
                        .map(|_| {
                            let e = f.element_at(rest % q);
                            rest /= q;
                            e
                        })
                        .collect();
                    if let Some(p) = accept(combine(&coeffs)) {
                        return Ok(p);
                    }
                }
            }
        }
    }
    Err(Error::NotSimilar)
}

/// One block `J_{p,l}` of a generalized Jordan form.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanBlock {
    pub p: Poly,
    pub l: usize,
}

impl JordanBlock {
    pub fn degree(&self) -> usize {
        self.p.degree().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.degree() * self.l
    }

    pub fn realize(&self) -> Matrix {
        Matrix::jordan(&self.p, self.l)
    }

    /// The eigenvalue when `p` is linear.
    pub fn eigenvalue(&self) -> Option<Elem> {
        (self.degree() == 1).then(|| self.p.field().neg(&self.p.coeff(0)))
    }
}

#[derive(Clone, Debug)]
pub struct GeneralizedJordanForm {
    pub blocks: Vec<JordanBlock>,
    /// `P` with `P * A * P^{-1}` equal to the direct sum of the blocks.
    pub conjugator: Matrix,
}

impl GeneralizedJordanForm {
    pub fn form(&self) -> Matrix {
        let f = self.conjugator.field();
        let blocks: Vec<Matrix> = self.blocks.iter().map(|b| b.realize()).collect();
        Matrix::block_diag(f, &blocks)
    }
}

/// Irreducible factors of the characteristic polynomial with multiplicities.
fn charpoly_factors(a: &Matrix) -> Result<Vec<(Poly, usize)>> {
    let cp = a.charpoly()?;
    let f = a.field();
    if f.is_approx() {
        return factor::approx_factor(&cp);
    }
    match f.kind() {
        Kind::Extension { base, .. } if !f.is_finite() && base.characteristic() == 0 => {
            return Err(Error::FactorizationUnavailable(format!(
                "characteristic polynomial over {f}"
            )));
        }
        _ => {}
    }
    let fac = factor::factor(&cp, 0)?;
    Ok(fac.factors)
}

fn in_span(f: &Field, span: &[Vec<Elem>], v: &[Elem]) -> bool {
    if span.is_empty() {
        return v.iter().all(|x| f.is_zero(x));
    }
    let m = Matrix::from_columns(f, span);
    let mut with = span.to_vec();
    with.push(v.to_vec());
    Matrix::from_columns(f, &with).rank() == m.rank()
}

/// Generalized Jordan form with an explicit conjugator.
///
/// Blocks are grouped by irreducible factor (in factorization order) and
/// sorted by decreasing `l` within a factor. Chain generators are chosen
/// from kernel bases in column order.
pub fn generalized_jordan_form(a: &Matrix) -> Result<GeneralizedJordanForm> {
    if !a.is_square() {
        return Err(Error::NonSquare);
    }
    let f = a.field();
    let n = a.rows();
    let factors = charpoly_factors(a)?;
    if f.is_exact() {
        for (p, _) in &factors {
            if p.gcd(&p.derivative()).degree() != Some(0) {
                return Err(Error::InseparableCharPoly);
            }
        }
    }
    let mut blocks = Vec::new();
    let mut columns: Vec<Vec<Elem>> = Vec::new();
    for (p, s) in &factors {
        let d = p.degree().unwrap_or(0);
        let np = a.eval_poly(p);
        // kernels of N^j for j = 0..=s
        let mut kernels: Vec<Vec<Vec<Elem>>> = vec![vec![]];
        let mut power = Matrix::identity(f, n);
        for _ in 0..*s {
            power = power.mul(&np);
            kernels.push(power.nullspace());
        }
        let dims: Vec<usize> = kernels.iter().map(|k| k.len()).collect();
        if dims[*s] != d * s {
            return Err(Error::VerificationFailed(format!(
                "generalized eigenspace of {p} has dimension {} instead of {}",
                dims[*s],
                d * s
            )));
        }
        // generators: (vector, level)
        let mut gens: Vec<(Vec<Elem>, usize)> = Vec::new();
        for j in (1..=*s).rev() {
            let mut span: Vec<Vec<Elem>> = kernels[j - 1].clone();
            for (w, l) in &gens {
                let mut v = w.clone();
                for _ in 0..(l - j) {
                    v = np.mul_vec(&v);
                }
                for _ in 0..d {
                    span.push(v.clone());
                    v = a.mul_vec(&v);
                }
            }
            for v in &kernels[j] {
                if in_span(f, &span, v) {
                    continue;
                }
                let mut w = v.clone();
                for _ in 0..d {
                    span.push(w.clone());
                    w = a.mul_vec(&w);
                }
                gens.push((v.clone(), j));
            }
        }
        for (w, l) in gens {
            let block = JordanBlock { p: p.clone(), l };
            let j = block.realize();
            let size = block.size();
            let mut kw = vec![w];
            for _ in 1..size {
                let next = a.mul_vec(kw.last().unwrap());
                kw.push(next);
            }
            let kw = Matrix::from_columns(f, &kw);
            let ku = cyclic_krylov(&j)?;
            let cols = kw.mul(&ku.inverse()?);
            for c in 0..size {
                columns.push(cols.col(c));
            }
            blocks.push(block);
        }
    }
    if columns.len() != n {
        return Err(Error::VerificationFailed(format!(
            "Jordan chains span {} of {n} dimensions",
            columns.len()
        )));
    }
    let q = Matrix::from_columns(f, &columns);
    let conjugator = q.inverse()?;
    let gjf = GeneralizedJordanForm { blocks, conjugator };
    let form = gjf.form();
    if !a.mul(&q).approx_eq(&q.mul(&form)) {
        return Err(Error::VerificationFailed(
            "generalized Jordan form does not conjugate back".into(),
        ));
    }
    Ok(gjf)
}

/// Krylov matrix `[u, Ju, J^2 u, ...]` for a cyclic vector `u` of `j`.
fn cyclic_krylov(j: &Matrix) -> Result<Matrix> {
    let f = j.field();
    let n = j.rows();
    let krylov = |u: Vec<Elem>| {
        let mut cols = vec![u];
        for _ in 1..n {
            let next = j.mul_vec(cols.last().unwrap());
            cols.push(next);
        }
        Matrix::from_columns(f, &cols)
    };
    for start in (0..n).rev() {
        let mut u = vec![f.zero(); n];
        u[start] = f.one();
        let k = krylov(u);
        if k.is_invertible() {
            return Ok(k);
        }
    }
    Err(Error::VerificationFailed("block has no cyclic standard vector".into()))
}

/// Replaces each entry `c(alpha)` of a matrix over `K(alpha)` by the `d x d`
/// matrix of multiplication by `c(alpha)` in the basis `1, alpha, ...`.
pub fn companion_lift(w: &Matrix, p: &Poly) -> Result<Matrix> {
    let ext = w.field();
    let base = ext.base().ok_or(Error::DescriptorMismatch)?;
    let modulus = ext.modulus().ok_or(Error::DescriptorMismatch)?;
    if p.field() != base || &modulus != p {
        return Err(Error::DescriptorMismatch);
    }
    let d = p.degree().unwrap_or(0);
    let c = Matrix::companion(p);
    let mut powers = vec![Matrix::identity(base, d)];
    for _ in 1..d {
        let next = powers.last().unwrap().mul(&c);
        powers.push(next);
    }
    let mut out = Matrix::zeros(base, w.rows() * d, w.cols() * d);
    for i in 0..w.rows() {
        for j in 0..w.cols() {
            let coords = ext.coords(w.get(i, j));
            let mut block = Matrix::zeros(base, d, d);
            for (k, ck) in coords.iter().enumerate() {
                if !base.is_zero(ck) {
                    block = block.add(&powers[k].scale(ck));
                }
            }
            out.set_block(i * d, j * d, &block);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn similarity_examples() {
        let q = Field::rationals();
        let i = Matrix::identity(&q, 2);
        let p = solve_similarity(&i, &i, 0).unwrap();
        assert!(p.is_invertible());
        let j = Matrix::jordan_scalar(&q, &q.zero(), 2);
        let p = solve_similarity(&j, &j.transpose(), 0).unwrap();
        assert_eq!(j.conjugate(&p).unwrap(), j.transpose());
        let f7 = fp(7);
        let a = Matrix::diag(&f7, &[f7.from_i64(1), f7.from_i64(2)]);
        let b = Matrix::diag(&f7, &[f7.from_i64(2), f7.from_i64(1)]);
        let p = solve_similarity(&a, &b, 5).unwrap();
        assert_eq!(a.conjugate(&p).unwrap(), b);
        assert_eq!(
            solve_similarity(&a, &Matrix::identity(&f7, 2), 0).unwrap_err(),
            Error::NotSimilar
        );
    }

    #[test]
    fn similarity_over_f2_same_charpoly_different_class() {
        let f2 = fp(2);
        let zero = Matrix::zeros(&f2, 2, 2);
        let j = Matrix::jordan_scalar(&f2, &f2.zero(), 2);
        assert_eq!(solve_similarity(&zero, &j, 1).unwrap_err(), Error::NotSimilar);
    }

    #[test]
    fn gjf_examples() {
        let q = Field::rationals();
        let j = Matrix::jordan_scalar(&q, &q.zero(), 3);
        let g = generalized_jordan_form(&j).unwrap();
        assert_eq!(g.blocks, vec![JordanBlock { p: Poly::monomial(&q, 1), l: 3 }]);
        assert_eq!(g.conjugator, Matrix::identity(&q, 3));

        let rot = Matrix::from_i64(&q, &[&[0, -1], &[1, 0]]);
        let g = generalized_jordan_form(&rot).unwrap();
        assert_eq!(g.blocks, vec![JordanBlock { p: Poly::from_i64s(&q, &[1, 0, 1]), l: 1 }]);

        let f5 = fp(5);
        let d = Matrix::diag(&f5, &[f5.from_i64(1), f5.from_i64(1), f5.from_i64(2)]);
        let g = generalized_jordan_form(&d).unwrap();
        let ls: Vec<usize> = g.blocks.iter().map(|b| b.l).collect();
        assert_eq!(ls, vec![1, 1, 1]);
        assert_eq!(g.blocks[0].eigenvalue(), Some(f5.from_i64(1)));
        assert_eq!(g.blocks[2].eigenvalue(), Some(f5.from_i64(2)));
    }

    #[test]
    fn gjf_mixed_blocks_over_f2() {
        let f2 = fp(2);
        let p = Poly::from_i64s(&f2, &[1, 1, 1]);
        let target = Matrix::block_diag(
            &f2,
            &[
                Matrix::jordan(&p, 2),
                Matrix::jordan(&p, 1),
                Matrix::jordan_scalar(&f2, &f2.one(), 2),
            ],
        );
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let conj = loop {
            let data = (0..64).map(|_| f2.random(&mut rng)).collect();
            let m = Matrix::new(&f2, 8, 8, data).unwrap();
            if m.is_invertible() {
                break m;
            }
        };
        let a = target.conjugate(&conj).unwrap();
        let g = generalized_jordan_form(&a).unwrap();
        assert_eq!(a.conjugate(&g.conjugator).unwrap(), g.form());
        let mut shape: Vec<(usize, usize)> = g.blocks.iter().map(|b| (b.degree(), b.l)).collect();
        shape.sort();
        assert_eq!(shape, vec![(1, 2), (2, 1), (2, 2)]);
    }

    #[test]
    fn gjf_over_reals() {
        let r = Field::real(1e-9).unwrap();
        let a = Matrix::new(
            &r,
            3,
            3,
            [2.0, 1.0, 0.0, 0.0, 2.0, 0.0, 1.0, 0.0, -1.0]
                .iter()
                .map(|&x| Elem::Real(x))
                .collect(),
        )
        .unwrap();
        let g = generalized_jordan_form(&a).unwrap();
        assert!(a.conjugate(&g.conjugator).unwrap().approx_eq(&g.form()));
    }

    #[test]
    fn lift_examples() {
        let q = Field::rationals();
        let p = Poly::from_i64s(&q, &[1, 0, 1]);
        let (qi, alpha) = q.extend(&p).unwrap();
        let w = Matrix::new(&qi, 1, 1, vec![alpha.clone()]).unwrap();
        assert_eq!(
            companion_lift(&w, &p).unwrap(),
            Matrix::from_i64(&q, &[&[0, -1], &[1, 0]])
        );
        let c = Matrix::new(&qi, 1, 1, vec![qi.from_i64(3)]).unwrap();
        assert_eq!(
            companion_lift(&c, &p).unwrap(),
            Matrix::scalar(&q, 2, &q.from_i64(3))
        );
        let f2 = fp(2);
        let p2 = Poly::from_i64s(&f2, &[1, 1, 1]);
        let (f4, a) = f2.extend(&p2).unwrap();
        let j = Matrix::jordan_scalar(&f4, &a, 2);
        assert_eq!(companion_lift(&j, &p2).unwrap(), Matrix::jordan(&p2, 2));
        assert_eq!(
            companion_lift(&j, &Poly::from_i64s(&f2, &[1, 1])).unwrap_err(),
            Error::DescriptorMismatch
        );
    }

    fn random_square(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        Matrix::new(f, n, n, (0..n * n).map(|_| f.random(rng)).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn lift_is_a_homomorphism(seed in 0u64..100_000, use_q in any::<bool>()) {
            let (base, p) = if use_q {
                let q = Field::rationals();
                let p = Poly::from_i64s(&q, &[1, 0, 1]);
                (q, p)
            } else {
                let f2 = fp(2);
                let p = Poly::from_i64s(&f2, &[1, 1, 1]);
                (f2, p)
            };
            let (ext, _) = base.extend(&p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = random_square(&ext, 2, &mut rng);
            let v = random_square(&ext, 2, &mut rng);
            let ru = companion_lift(&u, &p).unwrap();
            let rv = companion_lift(&v, &p).unwrap();
            prop_assert_eq!(companion_lift(&u.add(&v), &p).unwrap(), ru.add(&rv));
            prop_assert_eq!(companion_lift(&u.mul(&v), &p).unwrap(), ru.mul(&rv));
        }

        #[test]
        fn gjf_conjugates_exactly(seed in 0u64..100_000, p in prop::sample::select(vec![2u64, 3, 7]), n in 1usize..7) {
            let f = fp(p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_square(&f, n, &mut rng);
            let g = generalized_jordan_form(&a).unwrap();
            prop_assert_eq!(a.conjugate(&g.conjugator).unwrap(), g.form());
            let cp = g.blocks.iter().fold(Poly::one(&f), |acc, b| acc.mul(&b.p.pow(b.l as u64)));
            prop_assert_eq!(cp, a.charpoly().unwrap());
        }
    }
}
