//! Seeded random Gram matrices.
//!
//! A basis `B` has entries `k/8` with `k` uniform in `[−16, 16]`; the Gram
//! matrix is `BᵀB`. Candidates are rejected when `det G < (Π G_ii)/100`,
//! which keeps the bases far enough from degenerate that exact enumeration
//! stays cheap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactnum::{det, Rat, RatMat};
use crate::lattice::GramLattice;

/// Diagonal entries for `diagonal_only` batches are `(k/8)²` with `k` in this range.
/// Keeping `k ≥ 4` leaves room to perturb an off-diagonal entry to 1/10
/// without losing positive definiteness.
pub const DIAGONAL_K: std::ops::RangeInclusive<i64> = 4..=16;

/// Draws one accepted Gram matrix.
pub fn random_gram(rng: &mut impl Rng, n: usize, diagonal_only: bool) -> RatMat {
    if diagonal_only {
        let d: Vec<Rat> = (0..n)
            .map(|_| {
                let b = Rat::new(rng.gen_range(DIAGONAL_K), 8);
                &b * &b
            })
            .collect();
        return RatMat::diag(&d);
    }
    loop {
        let mut b = RatMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                b[(i, j)] = Rat::new(rng.gen_range(-16..=16), 8);
            }
        }
        let g = b.transpose().mul_mat(&b);
        let dg = det(&g);
        if !dg.is_positive() {
            continue;
        }
        let prod = (0..n).fold(Rat::one(), |acc, i| acc * &g[(i, i)]);
        if dg * Rat::from_int(100) >= prod {
            return g;
        }
    }
}

/// `count` named lattices, deterministic in `seed`.
pub fn random_batch(n: usize, seed: u64, count: usize, diagonal_only: bool) -> Vec<(String, GramLattice)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let g = random_gram(&mut rng, n, diagonal_only);
            let kind = if diagonal_only { "diag" } else { "rand" };
            (
                format!("{kind}-n{n}-s{seed}-{i}"),
                GramLattice::new(g).expect("accepted Gram matrices are positive definite"),
            )
        })
        .collect()
}

/// Copy of `g` with the (0,1) and (1,0) entries replaced by `value`.
pub fn perturb_off_diagonal(g: &RatMat, value: &Rat) -> RatMat {
    let mut out = g.clone();
    out[(0, 1)] = value.clone();
    out[(1, 0)] = value.clone();
    out
}
