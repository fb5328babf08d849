//! Word specifications and their evaluation.

use std::fmt;

use crate::diagonal::DiagonalWordSpec;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

#[derive(Clone, Debug)]
pub enum WordSpec {
    /// `[X1,X2][X3,X4]...[X_{m-1},X_m]` with `m` even.
    Commutator { m: usize },
    /// `d1 X1^k1 + ... + dm Xm^km`.
    Diagonal(DiagonalWordSpec),
}

impl WordSpec {
    /// Parses `comm:m=4` or `diag:d=1,k=2;d=3,k=5`.
    pub fn parse(s: &str, field: &Field) -> Result<WordSpec> {
        let s = s.trim();
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("word descriptor '{s}' has no ':'")))?;
        match kind.trim() {
            "comm" => {
                let m = body
                    .trim()
                    .strip_prefix("m=")
                    .ok_or_else(|| Error::Parse(format!("expected m=<even>, got '{body}'")))?
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad m: {e}")))?;
                if m < 2 || m % 2 == 1 {
                    return Err(Error::Parse(format!("m must be even and >= 2, got {m}")));
                }
                Ok(WordSpec::Commutator { m })
            }
            "diag" => {
                let mut terms = Vec::new();
                for term in body.split(';').filter(|t| !t.trim().is_empty()) {
                    let mut d = None;
                    let mut k = None;
                    for kv in term.split(',') {
                        let (key, val) = kv
                            .split_once('=')
                            .ok_or_else(|| Error::Parse(format!("expected key=value, got '{kv}'")))?;
                        match key.trim() {
                            "d" => d = Some(field.parse_elem(val.trim())?),
                            "k" => {
                                k = Some(
                                    val.trim()
                                        .parse::<u32>()
                                        .map_err(|e| Error::Parse(format!("bad k: {e}")))?,
                                )
                            }
                            other => return Err(Error::Parse(format!("unknown key '{other}'"))),
                        }
                    }
                    let d = d.ok_or_else(|| Error::Parse(format!("term '{term}' has no d")))?;
                    let k = k.ok_or_else(|| Error::Parse(format!("term '{term}' has no k")))?;
                    terms.push((d, k));
                }
                Ok(WordSpec::Diagonal(DiagonalWordSpec::new(field, terms)?))
            }
            other => Err(Error::Parse(format!("unknown word kind '{other}'"))),
        }
    }

    /// Number of matrix letters.
    pub fn letters(&self) -> usize {
        match self {
            WordSpec::Commutator { m } => *m,
            WordSpec::Diagonal(d) => d.terms.len(),
        }
    }

    pub fn evaluate(&self, xs: &[Matrix]) -> Result<Matrix> {
        if xs.len() != self.letters() {
            return Err(Error::InvalidInput(format!(
                "word has {} letters, got {} matrices",
                self.letters(),
                xs.len()
            )));
        }
        match self {
            WordSpec::Commutator { .. } => {
                let mut acc: Option<Matrix> = None;
                for pair in xs.chunks(2) {
                    check_square(&pair[0], &pair[1])?;
                    let c = Matrix::commutator(&pair[0], &pair[1]);
                    acc = Some(match acc {
                        None => c,
                        Some(a) => a.mul(&c),
                    });
                }
                acc.ok_or_else(|| Error::InvalidInput("empty word".into()))
            }
            WordSpec::Diagonal(d) => d.evaluate(xs),
        }
    }
}

fn check_square(a: &Matrix, b: &Matrix) -> Result<()> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::NonSquare);
    }
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", a.rows(), b.rows())));
    }
    if a.field() != b.field() {
        return Err(Error::DescriptorMismatch);
    }
    Ok(())
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordSpec::Commutator { m } => write!(f, "comm:m={m}"),
            WordSpec::Diagonal(d) => {
                let terms: Vec<String> = d
                    .terms
                    .iter()
                    .map(|(c, k)| format!("d={},k={k}", d.field.format(c)))
                    .collect();
                write!(f, "diag:{}", terms.join(";"))
            }
        }
    }
}
