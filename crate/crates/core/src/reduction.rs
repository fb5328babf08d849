//! Splitting a matrix into generalized Jordan blocks, solving each block
//! over the field generated by its eigenvalue, and assembling the results.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::jordan::{companion_lift, generalized_jordan_form, JordanBlock};
use crate::matrix::Matrix;
use crate::word::WordSpec;

/// One block `J_{p,l}` of the target, seen as `J_{alpha,l}` over `K(alpha)`.
#[derive(Clone, Debug)]
pub struct BlockPlan {
    pub block: JordanBlock,
    /// `K` itself for linear `p`, otherwise `K[T]/(p)`.
    pub extension: Field,
    pub generator: Elem,
    /// `J_{alpha,l}` over the extension.
    pub lifted_target: Matrix,
    /// First row of the block inside the Jordan form.
    pub offset: usize,
}

impl BlockPlan {
    /// Maps a matrix over the extension back to the base field.
    pub fn lift(&self, w: &Matrix) -> Result<Matrix> {
        if self.block.degree() == 1 {
            Ok(w.clone())
        } else {
            companion_lift(w, &self.block.p)
        }
    }
}

#[derive(Clone, Debug)]
pub struct Plan {
    pub blocks: Vec<BlockPlan>,
    /// `P` with `P * A * P^{-1}` block diagonal.
    pub conjugator: Matrix,
}

pub fn plan(a: &Matrix) -> Result<Plan> {
    let gjf = generalized_jordan_form(a)?;
    let mut blocks = Vec::with_capacity(gjf.blocks.len());
    let mut offset = 0;
    for block in &gjf.blocks {
        let (extension, generator) = if block.degree() == 1 {
            (a.field().clone(), block.eigenvalue().expect("linear"))
        } else {
            a.field().extend(&block.p)?
        };
        let lifted_target = Matrix::jordan_scalar(&extension, &generator, block.l);
        let plan = BlockPlan {
            block: block.clone(),
            extension,
            generator,
            lifted_target,
            offset,
        };
        if !plan.lift(&plan.lifted_target)?.approx_eq(&block.realize()) {
            return Err(Error::VerificationFailed(format!(
                "lift of J(alpha,{}) is not J({},{})",
                block.l, block.p, block.l
            )));
        }
        offset += block.size();
        blocks.push(plan);
    }
    Ok(Plan {
        blocks,
        conjugator: gjf.conjugator,
    })
}

/// Lifts the per-block solutions (`solved[b][i]` is letter `i` for block
/// `b`), sums them block-diagonally, and conjugates back to the original
/// basis. The assembled letters are checked against `target`.
pub fn assemble(
    plan: &Plan,
    solved: &[Vec<Matrix>],
    word: &WordSpec,
    target: &Matrix,
) -> Result<Vec<Matrix>> {
    if solved.len() != plan.blocks.len() {
        return Err(Error::InvalidInput(format!(
            "{} blocks planned, {} solved",
            plan.blocks.len(),
            solved.len()
        )));
    }
    let f = target.field();
    let letters = word.letters();
    let mut lifted: Vec<Vec<Matrix>> = vec![Vec::new(); letters];
    for (bp, sol) in plan.blocks.iter().zip(solved) {
        if sol.len() != letters {
            return Err(Error::InvalidInput("block solution has the wrong length".into()));
        }
        for (i, w) in sol.iter().enumerate() {
            lifted[i].push(bp.lift(w)?);
        }
    }
    let p = &plan.conjugator;
    let pi = p.inverse()?;
    let out: Vec<Matrix> = lifted
        .iter()
        .map(|blocks| pi.mul(&Matrix::block_diag(f, blocks)).mul(p))
        .collect();
    if !word.evaluate(&out)?.approx_eq(target) {
        return Err(Error::VerificationFailed(
            "assembled witness does not evaluate to the target".into(),
        ));
    }
    Ok(out)
}
