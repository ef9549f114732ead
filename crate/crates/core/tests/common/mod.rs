//! Brute-force oracles shared by the integration tests. None of these go
//! through the enumeration, double-description or triangulation code they
//! are used to check.

#![allow(dead_code)]

use latcell::exactnum::{inverse, rank, solve, Rat, RatMat, RatVec};
use latcell::lattice::{coset_system, GramLattice, LatticePoint};

/// All integer points of the box `center ± radius` (per coordinate).
pub fn box_points(center: &[i64], radius: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (c, r) in center.iter().zip(radius) {
        let mut next = Vec::new();
        for p in &out {
            for x in c - r..=c + r {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Per-coordinate half-widths of the ellipsoid `Q_G(x − c) ≤ r²`, rounded up generously.
pub fn ellipsoid_radius(gram: &RatMat, r_sq: &Rat) -> Vec<i64> {
    let ginv = inverse(gram).unwrap();
    (0..gram.dim()).map(|i| ((r_sq.to_f64() * ginv[(i, i)].to_f64()).sqrt().ceil() as i64) + 1).collect()
}

/// Lattice points with `Q_G(w − center) ≤ r²`, by scanning the bounding box.
pub fn brute_ball(lat: &GramLattice, center: &RatVec, r_sq: &Rat) -> Vec<LatticePoint> {
    let c: Vec<i64> = center.iter().map(|x| x.round().to_i64().unwrap()).collect();
    let rad = ellipsoid_radius(lat.gram(), r_sq);
    let mut out: Vec<LatticePoint> = box_points(&c, &rad)
        .into_iter()
        .filter(|w| &lat.dist_sq(&RatVec::from_ints(w), center) <= r_sq)
        .map(LatticePoint)
        .collect();
    out.sort();
    out
}

/// Closest vectors by a box scan sized from the naive rounding distance.
pub fn brute_closest(lat: &GramLattice, target: &RatVec) -> (Rat, Vec<LatticePoint>) {
    let rounded: RatVec = target.iter().map(|x| x.round()).collect();
    let bound = lat.dist_sq(target, &rounded);
    let pts = brute_ball(lat, target, &bound);
    let best = pts.iter().map(|w| lat.dist_sq(&w.to_ratvec(), target)).min().unwrap();
    let mins = pts.into_iter().filter(|w| lat.dist_sq(&w.to_ratvec(), target) == best).collect();
    (best, mins)
}

/// Every shortest vector of every nonzero coset of Λ/2Λ, by box scan.
pub fn coset_minima(lat: &GramLattice) -> Vec<(Rat, Vec<LatticePoint>)> {
    let n = lat.dim();
    let reps = coset_system(n).reps;
    let bound = reps.iter().map(|s| lat.norm_sq(&s.to_ratvec())).max().unwrap();
    let all = brute_ball(lat, &RatVec::zeros(n), &bound);
    reps.iter()
        .filter(|s| !s.is_zero())
        .map(|s| {
            let members: Vec<&LatticePoint> =
                all.iter().filter(|w| w.0.iter().zip(&s.0).all(|(a, b)| (a - b).rem_euclid(2) == 0)).collect();
            let best = members.iter().map(|w| lat.norm_sq(&w.to_ratvec())).min().unwrap();
            let mins = members.into_iter().filter(|w| lat.norm_sq(&w.to_ratvec()) == best).cloned().collect();
            (best, mins)
        })
        .collect()
}

/// Relevant vectors as strict coset minima (±v unique in v + 2Λ).
pub fn relevant_by_cosets(lat: &GramLattice) -> Vec<LatticePoint> {
    let mut out: Vec<LatticePoint> =
        coset_minima(lat).into_iter().filter(|(_, m)| m.len() == 2).flat_map(|(_, m)| m).collect();
    out.sort();
    out
}

/// Relevant vectors as the `v` whose bisector `⟨x, v⟩_G ≤ Q_G(v)/2` is
/// facet-defining, among all coset-minimal candidates. Vertices come from
/// solving every n-subset of bisectors.
pub fn relevant_by_facets(lat: &GramLattice) -> Vec<LatticePoint> {
    let n = lat.dim();
    let g = lat.gram();
    let cands: Vec<LatticePoint> = coset_minima(lat).into_iter().flat_map(|(_, m)| m).collect();
    let hs: Vec<(RatVec, Rat)> = cands
        .iter()
        .map(|v| {
            let v = v.to_ratvec();
            (g.mul_vec(&v), g.quad(&v) / Rat::from_int(2))
        })
        .collect();
    let verts = brute_vertices(n, &hs);
    let mut out: Vec<LatticePoint> = cands
        .into_iter()
        .zip(&hs)
        .filter(|(_, (l, b))| {
            let tight: Vec<&RatVec> = verts.iter().filter(|x| &l.dot(x) == b).collect();
            if tight.is_empty() {
                return false;
            }
            let diffs: Vec<RatVec> = tight[1..].iter().map(|x| *x - tight[0]).collect();
            rank(&diffs) == n - 1
        })
        .map(|(v, _)| v)
        .collect();
    out.sort();
    out
}

/// Vertices of `{x : l·x ≤ b}` by solving all n-subsets. A float solve
/// discards clearly singular or infeasible subsets; survivors are redone exactly.
pub fn brute_vertices(n: usize, hs: &[(RatVec, Rat)]) -> Vec<RatVec> {
    let m = hs.len();
    let mut out: Vec<RatVec> = Vec::new();
    if m < n {
        return out;
    }
    let hf: Vec<(Vec<f64>, f64)> = hs.iter().map(|(l, b)| (l.to_f64(), b.to_f64())).collect();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let plausible = float_solve(idx.iter().map(|&i| &hf[i]).collect())
            .is_some_and(|x| hf.iter().all(|(l, b)| l.iter().zip(&x).map(|(a, y)| a * y).sum::<f64>() <= b + 1e-6));
        if plausible {
            let a = RatMat::from_rows(idx.iter().map(|&i| hs[i].0.as_slice().to_vec()).collect()).unwrap();
            let b: RatVec = idx.iter().map(|&i| hs[i].1.clone()).collect();
            if let Ok(x) = solve(&a, &b) {
                if hs.iter().all(|(l, bb)| &l.dot(&x) <= bb) && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        let mut k = n;
        while k > 0 && idx[k - 1] == m - n + k - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
        for j in k..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out.sort();
    out
}

/// Gaussian elimination with partial pivoting; `None` when nearly singular.
fn float_solve(rows: Vec<&(Vec<f64>, f64)>) -> Option<Vec<f64>> {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows.iter().map(|(l, b)| l.iter().copied().chain([*b]).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-10 {
            return None;
        }
        a.swap(c, p);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..=n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

/// `∫_S Q_G(x − c) dx` over a simplex, by pulling back to the standard
/// simplex Δ and using `∫_Δ u^α du = α!/(|α| + n)!`.
pub fn simplex_moment_oracle(vertices: &[RatVec], gram: &RatMat, c: &RatVec) -> (Rat, Rat) {
    let n = c.dim();
    let v0 = &vertices[0] - c;
    let edges: Vec<RatVec> = vertices[1..].iter().map(|v| v - &vertices[0]).collect();
    let jac = latcell::exactnum::det_rows(&edges).abs();
    let fact = |k: usize| -> Rat { Rat::from_int((1..=k as i64).product::<i64>().max(1)) };
    let m0 = fact(n).recip();
    let m1 = fact(n + 1).recip();
    let m_sq = Rat::from_int(2) / fact(n + 2);
    let m_cross = fact(n + 2).recip();
    // Q(v0 + Σ u_i e_i) = Q(v0) + 2 Σ u_i ⟨v0, e_i⟩ + Σ_ij u_i u_j ⟨e_i, e_j⟩.
    let mut total = gram.quad(&v0) * &m0;
    for (i, ei) in edges.iter().enumerate() {
        total += Rat::from_int(2) * gram.bilinear(&v0, ei) * &m1;
        for (j, ej) in edges.iter().enumerate() {
            let w = if i == j { &m_sq } else { &m_cross };
            total += gram.bilinear(ei, ej) * w;
        }
    }
    (&jac * &m0, jac * total)
}

/// Vertices of the A₂ hexagon (Gram [[1,1/2],[1/2,1]]) in cyclic order, computed by hand.
pub fn a2_hexagon_vertices() -> Vec<RatVec> {
    [(1, 1), (2, -1), (1, -2), (-1, -1), (-2, 1), (-1, 2)]
        .iter()
        .map(|&(a, b)| RatVec::new(vec![Rat::new(a, 3), Rat::new(b, 3)]))
        .collect()
}
