//! Word-level entry point and the witness JSON format.

use serde_json::{json, Value};

use crate::commutator::solve_commutator_product;
use crate::diagonal::solve_diagonal_word;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::word::WordSpec;

pub const SCHEMA: &str = "wordmap/1";

#[derive(Clone, Debug)]
pub struct Witness {
    pub word: WordSpec,
    pub target: Matrix,
    pub matrices: Vec<Matrix>,
    pub conjugators: Vec<Matrix>,
    /// Per-letter diagonalizability, known for diagonal words only.
    pub diagonalizable: Option<Vec<bool>>,
}

/// Finds matrices on which `word` evaluates to `target`. The result has
/// been checked by direct evaluation.
pub fn solve(word: &WordSpec, target: &Matrix, seed: u64) -> Result<Witness> {
    let (matrices, conjugators, diagonalizable) = match word {
        WordSpec::Commutator { m } => {
            let w = solve_commutator_product(target, *m, seed)?;
            let xs = w.pairs.into_iter().flat_map(|(x, y)| [x, y]).collect();
            (xs, Vec::new(), None)
        }
        WordSpec::Diagonal(d) => {
            let w = solve_diagonal_word(target, d)?;
            (w.matrices, w.conjugators, Some(w.diagonalizable))
        }
    };
    if !verify(word, target, &matrices)? {
        return Err(Error::VerificationFailed("witness does not evaluate to the target".into()));
    }
    Ok(Witness {
        word: word.clone(),
        target: target.clone(),
        matrices,
        conjugators,
        diagonalizable,
    })
}

/// Evaluates the word on `matrices` and compares with `target`, exactly
/// over exact fields and within tolerance otherwise.
pub fn verify(word: &WordSpec, target: &Matrix, matrices: &[Matrix]) -> Result<bool> {
    Ok(word.evaluate(matrices)?.approx_eq(target))
}

impl Witness {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "schema": SCHEMA,
            "field": self.target.field().to_string(),
            "word": self.word.to_string(),
            "target": self.target.to_json(),
            "witnesses": self.matrices.iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "verified": true,
            "conjugators": self.conjugators.iter().map(Matrix::to_json).collect::<Vec<_>>(),
        });
        if let Some(d) = &self.diagonalizable {
            v["diagonalizable"] = json!(d);
        }
        v
    }
}

/// Reads the `word`, `target` and `witnesses` of a witness document and
/// re-checks them.
pub fn verify_json(doc: &Value, field: Option<&Field>) -> Result<bool> {
    let field = match (field, doc.get("field").and_then(Value::as_str)) {
        (Some(f), _) => f.clone(),
        (None, Some(s)) => s.parse()?,
        (None, None) => return Err(Error::Parse("witness document has no field".into())),
    };
    let word = doc
        .get("word")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("witness document has no word".into()))?;
    let word = WordSpec::parse(word, &field)?;
    let target = doc
        .get("target")
        .ok_or_else(|| Error::Parse("witness document has no target".into()))?;
    let target = Matrix::from_json(target, Some(&field))?;
    let xs = doc
        .get("witnesses")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("witness document has no witnesses".into()))?
        .iter()
        .map(|m| Matrix::from_json(m, Some(&field)))
        .collect::<Result<Vec<_>>>()?;
    verify(&word, &target, &xs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let f: Field = "Fp:5".parse().unwrap();
        let word = WordSpec::parse("diag:d=1,k=2;d=1,k=2", &f).unwrap();
        let a = Matrix::from_i64(&f, &[&[0, 1], &[0, 0]]);
        let w = solve(&word, &a, 0).unwrap();
        let doc = w.to_json();
        assert_eq!(doc["schema"], SCHEMA);
        assert!(verify_json(&doc, None).unwrap());
        let mut bad = doc.clone();
        bad["target"] = Matrix::identity(&f, 2).to_json();
        assert!(!verify_json(&bad, None).unwrap());

        let q = Field::rationals();
        let comm = WordSpec::parse("comm:m=2", &q).unwrap();
        assert_eq!(
            solve(&comm, &Matrix::identity(&q, 2), 0).unwrap_err(),
            Error::NonzeroTrace
        );
        let f2: Field = "Fp:2".parse().unwrap();
        let comm4 = WordSpec::parse("comm:m=4", &f2).unwrap();
        let w = solve(&comm4, &Matrix::identity(&f2, 2), 0).unwrap();
        assert_eq!(w.matrices.len(), 4);
        assert!(verify_json(&w.to_json(), None).unwrap());
    }
}
