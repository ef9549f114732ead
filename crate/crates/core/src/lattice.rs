//! Lattices given by a rational Gram matrix.
//!
//! Lattice points are integer coordinate vectors; lengths and angles are
//! measured with the quadratic form `Q_G(x) = xᵀGx`. Enumeration is the
//! square-root-free Fincke–Pohst scheme over the `LDLᵀ` factorisation, with
//! every acceptance decision made in exact arithmetic. Floats are only used
//! to guess the integer range at each level; the guess is then corrected
//! exactly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{ldl_decompose, Ldl, Rat, RatMat, RatVec};

/// Integer coordinates of a lattice point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn zero(n: usize) -> Self {
        LatticePoint(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn to_ratvec(&self) -> RatVec {
        RatVec::from_ints(&self.0)
    }

    pub fn neg(&self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|x| -x).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A full-rank lattice ℤⁿ under a positive-definite rational Gram form.
#[derive(Clone, Debug)]
pub struct GramLattice {
    gram: RatMat,
    ldl: Ldl,
    // Float shadows of the factorisation, used only for range guesses.
    l_f64: Vec<Vec<f64>>,
    d_f64: Vec<f64>,
}

impl PartialEq for GramLattice {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl GramLattice {
    /// Validates `gram` (symmetric, positive definite) and builds the lattice.
    pub fn new(gram: RatMat) -> Result<Self> {
        let ldl = ldl_decompose(&gram)?;
        let l_f64 = ldl.l.to_f64();
        let d_f64 = ldl.d.iter().map(Rat::to_f64).collect();
        Ok(GramLattice { gram, ldl, l_f64, d_f64 })
    }

    /// Builds the lattice spanned by the columns of a rational basis (`G = BᵀB`).
    pub fn from_basis(basis: &RatMat) -> Result<Self> {
        let g = basis.transpose().mul_mat(basis);
        match Self::new(g) {
            Err(Error::NotPositiveDefinite { .. }) => Err(Error::Singular),
            other => other,
        }
    }

    /// The integer lattice ℤⁿ.
    pub fn integer(n: usize) -> Self {
        Self::new(RatMat::identity(n)).expect("identity is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    pub fn gram(&self) -> &RatMat {
        &self.gram
    }

    pub fn ldl(&self) -> &Ldl {
        &self.ldl
    }

    /// `Q_G(x)`.
    pub fn norm_sq(&self, x: &RatVec) -> Rat {
        self.gram.quad(x)
    }

    /// `⟨x, y⟩_G`.
    pub fn inner(&self, x: &RatVec, y: &RatVec) -> Rat {
        self.gram.bilinear(x, y)
    }

    pub fn dist_sq(&self, x: &RatVec, y: &RatVec) -> Rat {
        self.norm_sq(&(x - y))
    }

    /// All integer points `w` with `Q_G(w − center) ≤ r_sq`, sorted lexicographically.
    pub fn enumerate_in_ball(&self, center: &RatVec, r_sq: &Rat) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        let mut bound = r_sq.clone();
        self.search(center, &mut bound, &mut |w, _d| {
            out.push(LatticePoint(w.to_vec()));
            None
        });
        out.sort();
        out
    }

    /// Exact squared distance from `target` to the lattice together with every
    /// minimiser, sorted lexicographically.
    pub fn closest_vectors(&self, target: &RatVec) -> (Rat, Vec<LatticePoint>) {
        assert_eq!(target.dim(), self.dim(), "target dimension");
        // Babai-style rounding supplies the starting radius.
        let rounded: RatVec = target.iter().map(Rat::round).collect();
        let mut bound = self.dist_sq(target, &rounded);
        let mut best: Vec<LatticePoint> = Vec::new();
        let mut best_d: Option<Rat> = None;
        self.search(target, &mut bound, &mut |w, d| match &best_d {
            Some(b) if d > b => None,
            Some(b) if d == b => {
                best.push(LatticePoint(w.to_vec()));
                None
            }
            _ => {
                best.clear();
                best.push(LatticePoint(w.to_vec()));
                best_d = Some(d.clone());
                Some(d.clone())
            }
        });
        best.sort();
        (best_d.expect("rounded point lies inside the initial ball"), best)
    }

    /// Depth-first enumeration of `{w ∈ ℤⁿ : Q_G(w − center) ≤ bound}`.
    ///
    /// `visit` receives each point with its exact squared distance and may
    /// return a new (smaller) bound; later branches are pruned against it.
    fn search<F>(&self, center: &RatVec, bound: &mut Rat, visit: &mut F)
    where
        F: FnMut(&[i64], &Rat) -> Option<Rat>,
    {
        if bound.is_negative() {
            return;
        }
        let n = self.dim();
        let mut w = vec![0i64; n];
        let center_f = center.to_f64();
        self.search_level(n, center, &center_f, &Rat::zero(), &mut w, bound, visit);
    }

    #[allow(clippy::too_many_arguments)]
    fn search_level<F>(
        &self,
        level: usize,
        center: &RatVec,
        center_f: &[f64],
        acc: &Rat,
        w: &mut [i64],
        bound: &mut Rat,
        visit: &mut F,
    ) where
        F: FnMut(&[i64], &Rat) -> Option<Rat>,
    {
        if level == 0 {
            if let Some(b) = visit(w, acc) {
                *bound = b;
            }
            return;
        }
        let i = level - 1;
        let n = self.dim();
        // Q(y) = Σ_i d_i (y_i + Σ_{j>i} L_ji y_j)², y = w − center.
        let mut m = center[i].clone();
        let mut m_f = center_f[i];
        for j in i + 1..n {
            let yj = Rat::from_int(w[j]) - &center[j];
            m -= &(&self.ldl.l[(j, i)] * &yj);
            m_f -= self.l_f64[j][i] * (w[j] as f64 - center_f[j]);
        }
        let d = &self.ldl.d[i];
        let cost = |x: i64| -> Rat {
            let diff = Rat::from_int(x) - &m;
            d * &diff * &diff
        };
        let rem = &*bound - acc;
        if rem.is_negative() {
            return;
        }
        let Some((lo, hi)) = integer_window(&m, m_f, &rem, self.d_f64[i], &cost) else {
            return;
        };
        for x in lo..=hi {
            let c = cost(x);
            let next = acc + &c;
            if next > *bound {
                continue;
            }
            w[i] = x;
            self.search_level(i, center, center_f, &next, w, bound, visit);
        }
        w[i] = 0;
    }

    /// Voronoi-relevant vectors: `v ≠ 0` such that `±v` are the only shortest
    /// vectors of the coset `v + 2Λ`. Sorted lexicographically.
    pub fn relevant_vectors(&self) -> Vec<LatticePoint> {
        let n = self.dim();
        let mut out = Vec::new();
        for rep in coset_system(n).reps.iter().filter(|r| !r.is_zero()) {
            // min over u of Q(s + 2u) = 4·dist²(−s/2, Λ).
            let target: RatVec = rep.0.iter().map(|&s| Rat::new(-s, 2)).collect();
            let (_, mins) = self.closest_vectors(&target);
            if mins.len() == 2 {
                for u in mins {
                    out.push(LatticePoint(rep.0.iter().zip(&u.0).map(|(s, u)| s + 2 * u).collect()));
                }
            }
        }
        out.sort();
        out
    }
}

/// Integer interval `{x : cost(x) ≤ rem}` around `m` (which is where `cost` is minimal).
fn integer_window(m: &Rat, m_f: f64, rem: &Rat, d_f: f64, cost: &dyn Fn(i64) -> Rat) -> Option<(i64, i64)> {
    let ok = |x: i64| cost(x) <= *rem;
    let floor = m.floor().to_i64().expect("coordinate fits in i64");
    let near = if ok(floor) {
        floor
    } else if ok(floor + 1) {
        floor + 1
    } else {
        return None;
    };
    let s = (rem.to_f64() / d_f).max(0.0).sqrt();
    let mut lo = ((m_f - s).ceil() as i64).min(near);
    if ok(lo) {
        while ok(lo - 1) {
            lo -= 1;
        }
    } else {
        while !ok(lo) {
            lo += 1;
        }
    }
    let mut hi = ((m_f + s).floor() as i64).max(near);
    if ok(hi) {
        while ok(hi + 1) {
            hi += 1;
        }
    } else {
        while !ok(hi) {
            hi -= 1;
        }
    }
    Some((lo, hi))
}

/// Representatives of Λ/2Λ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSystem {
    pub reps: Vec<LatticePoint>,
}

/// The 2ⁿ vectors of {0,1}ⁿ in lexicographic order.
pub fn coset_system(n: usize) -> CosetSystem {
    let reps =
        (0u64..1 << n).map(|mask| LatticePoint((0..n).map(|i| ((mask >> (n - 1 - i)) & 1) as i64).collect())).collect();
    CosetSystem { reps }
}
