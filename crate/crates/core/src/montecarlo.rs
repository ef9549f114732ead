//! Floating-point Monte-Carlo estimates of a Voronoi cell's volume and
//! second moment, used as an independent sanity check on the exact values.
//!
//! Points are drawn uniformly from the coordinate bounding box of the cell
//! and kept when the origin is their nearest lattice point among the
//! relevant vectors. Each chunk of samples has its own ChaCha stream, so the
//! estimate does not depend on how chunks are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactnum::Rat;
use crate::lattice::GramLattice;
use crate::par::Execution;
use crate::polytope::Polytope;

const CHUNK: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub samples: usize,
    pub volume: f64,
    pub second_moment: f64,
    pub volume_exact: f64,
    pub second_moment_exact: f64,
    pub volume_rel_dev: f64,
    pub second_moment_rel_dev: f64,
}

pub fn estimate(
    lattice: &GramLattice,
    cell: &Polytope,
    exact_volume: &Rat,
    exact_moment: &Rat,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> McEstimate {
    let n = lattice.dim();
    let g = lattice.gram().to_f64();
    let facets: Vec<(Vec<f64>, f64)> =
        cell.halfspaces().iter().map(|h| (h.functional.to_f64(), h.offset.to_f64())).collect();
    let verts: Vec<Vec<f64>> = cell.vertices().iter().map(|v| v.to_f64()).collect();
    let lo: Vec<f64> = (0..n).map(|i| verts.iter().map(|v| v[i]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..n).map(|i| verts.iter().map(|v| v[i]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();

    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<(usize, f64)> = exec.map_range(chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let take = CHUNK.min(samples - c * CHUNK);
        let mut x = vec![0.0; n];
        let mut hits = 0usize;
        let mut q_sum = 0.0;
        for _ in 0..take {
            for i in 0..n {
                x[i] = rng.gen_range(lo[i]..hi[i]);
            }
            let inside = facets.iter().all(|(l, b)| l.iter().zip(&x).map(|(a, y)| a * y).sum::<f64>() <= *b);
            if inside {
                hits += 1;
                let mut q = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        q += x[i] * g[i][j] * x[j];
                    }
                }
                q_sum += q;
            }
        }
        (hits, q_sum)
    });
    let hits: usize = partial.iter().map(|p| p.0).sum();
    let q_sum: f64 = partial.iter().map(|p| p.1).sum();
    let volume = box_vol * hits as f64 / samples.max(1) as f64;
    let second_moment = box_vol * q_sum / samples.max(1) as f64;
    let volume_exact = exact_volume.to_f64();
    let second_moment_exact = exact_moment.to_f64();
    McEstimate {
        samples,
        volume,
        second_moment,
        volume_exact,
        second_moment_exact,
        volume_rel_dev: (volume - volume_exact).abs() / volume_exact,
        second_moment_rel_dev: (second_moment - second_moment_exact).abs() / second_moment_exact,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::RatVec;
    use crate::voronoi::voronoi_cell;

    #[test]
    fn tiny_sample_counts_still_report() {
        let z2 = GramLattice::integer(2);
        let cell = voronoi_cell(&z2, 5).unwrap();
        let m = cell.second_moment(z2.gram(), &RatVec::zeros(2));
        let est = estimate(&z2, &cell, &cell.volume(), &m, 10, 1, Execution::Sequential);
        assert_eq!(est.samples, 10);
        // The bounding box is the cell itself.
        assert_eq!(est.volume, 1.0);
        assert!(est.second_moment_rel_dev.is_finite());
    }

    #[test]
    fn schedule_does_not_change_estimate() {
        let z2 = GramLattice::integer(2);
        let cell = voronoi_cell(&z2, 5).unwrap();
        let m = cell.second_moment(z2.gram(), &RatVec::zeros(2));
        let a = estimate(&z2, &cell, &cell.volume(), &m, 200_000, 9, Execution::Sequential);
        let b = estimate(&z2, &cell, &cell.volume(), &m, 200_000, 9, Execution::Parallel);
        assert_eq!(a, b);
    }
}
