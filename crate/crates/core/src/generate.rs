//! Seeded random contexts and I-compatible frames.
//!
//! Relations are sampled uniformly over the algebra and then repaired. Since
//! extents and intents are closed under `α → (·)`, `R_□` is compatible iff
//! every column is an extent and every row an intent, and `R_◇` iff every
//! column is an intent and every row an extent. Repair replaces columns and
//! rows by their Galois closures until nothing changes; closures only raise
//! degrees, so the loop terminates.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Truth, TruthAlgebra};
use crate::context::{Context, Side};
use crate::enriched::{EnrichedContext, Relations};
use crate::error::{Error, Result};
use crate::mvsets::{MvRelation, MvSet};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Retries after a repaired relation still fails the compatibility check.
const MAX_RETRIES: usize = 8;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_relation(rng: &mut impl Rng, alg: &TruthAlgebra, rows: usize, cols: usize) -> MvRelation {
    let degrees = (0..rows * cols).map(|_| Truth(rng.random_range(0..alg.size()) as u8)).collect();
    MvRelation::new(rows, cols, degrees).expect("degree count matches shape")
}

pub fn random_context(rng: &mut impl Rng, alg: Arc<TruthAlgebra>, objects: usize, attributes: usize) -> Context {
    let incidence = random_relation(rng, &alg, objects, attributes);
    Context::anonymous(alg, incidence)
}

fn close(ctx: &Context, side: Side, s: &MvSet) -> MvSet {
    match side {
        Side::Extent => ctx.down(&ctx.up(s).expect("object carrier")).expect("attribute carrier"),
        Side::Intent => ctx.up(&ctx.down(s).expect("attribute carrier")).expect("object carrier"),
    }
}

/// Raises `r` to the least relation above it whose columns are closed on
/// `col_side` and whose rows are closed on the other side.
fn repair(ctx: &Context, mut r: MvRelation, col_side: Side) -> MvRelation {
    let row_side = match col_side {
        Side::Extent => Side::Intent,
        Side::Intent => Side::Extent,
    };
    loop {
        let before = r.clone();
        for c in 0..r.cols() {
            let closed = close(ctx, col_side, &r.column(c));
            for (row, v) in closed.iter().enumerate() {
                r.set(row, c, v);
            }
        }
        for row in 0..r.rows() {
            let closed = close(ctx, row_side, &r.row(row));
            for (c, v) in closed.iter().enumerate() {
                r.set(row, c, v);
            }
        }
        if r == before {
            return r;
        }
    }
}

/// `R_□: A × X` made compatible with `ctx`.
pub fn repair_box(ctx: &Context, r: MvRelation) -> MvRelation {
    repair(ctx, r, Side::Extent)
}

/// `R_◇: X × A` made compatible with `ctx`.
pub fn repair_diamond(ctx: &Context, r: MvRelation) -> MvRelation {
    repair(ctx, r, Side::Intent)
}

/// A random context with I-compatible `R_□` and `R_◇`.
pub fn random_compatible_frame(
    rng: &mut impl Rng,
    alg: Arc<TruthAlgebra>,
    objects: usize,
    attributes: usize,
) -> Result<EnrichedContext> {
    let ctx = random_context(rng, alg.clone(), objects, attributes);
    for _ in 0..MAX_RETRIES {
        let r_box = repair_box(&ctx, random_relation(rng, &alg, objects, attributes));
        let r_diamond = repair_diamond(&ctx, random_relation(rng, &alg, attributes, objects));
        let frame = EnrichedContext::new(
            ctx.clone(),
            Relations { r_box: Some(r_box), r_diamond: Some(r_diamond), ..Default::default() },
        )?;
        if frame.is_compatible() {
            return Ok(frame);
        }
    }
    Err(Error::Input(format!("no compatible frame found after {MAX_RETRIES} attempts")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_frame() {
        let alg = Arc::new(TruthAlgebra::lukasiewicz(3).unwrap());
        let a = random_compatible_frame(&mut rng(7), alg.clone(), 3, 2).unwrap();
        let b = random_compatible_frame(&mut rng(7), alg, 3, 2).unwrap();
        assert_eq!(a.base().incidence(), b.base().incidence());
        assert_eq!(a.relations().r_box, b.relations().r_box);
        assert_eq!(a.relations().r_diamond, b.relations().r_diamond);
    }

    #[test]
    fn repair_yields_compatible_frames() {
        let mut r = rng(1);
        for alg in [TruthAlgebra::boolean(), TruthAlgebra::lukasiewicz(3).unwrap(), TruthAlgebra::goedel(3).unwrap()] {
            let alg = Arc::new(alg);
            for _ in 0..20 {
                let f = random_compatible_frame(&mut r, alg.clone(), 3, 3).unwrap();
                assert!(f.is_compatible());
            }
        }
    }

    #[test]
    fn repair_is_inflationary_and_fixes_compatible_input() {
        let alg = Arc::new(TruthAlgebra::lukasiewicz(3).unwrap());
        let ctx = random_context(&mut rng(3), alg.clone(), 2, 3);
        let i = ctx.incidence().clone();
        assert_eq!(repair_box(&ctx, i.clone()), i);
        assert_eq!(repair_diamond(&ctx, i.transpose()), i.transpose());
        let raw = random_relation(&mut rng(4), &alg, 2, 3);
        let fixed = repair_box(&ctx, raw.clone());
        for a in 0..2 {
            for x in 0..3 {
                assert!(alg.leq(raw.get(a, x), fixed.get(a, x)));
            }
        }
    }
}
