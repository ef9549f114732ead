mod common;

use latcell::catalog;
use latcell::exactnum::{Rat, RatMat, RatVec};
use latcell::polytope::Polytope;

#[test]
fn relevant_vector_counts() {
    for (name, want) in [("Z2", 4), ("A2", 6), ("Z3", 6), ("D3", 12), ("D4", 24), ("Z4", 8)] {
        let lat = catalog::get(name).unwrap().lattice();
        let got = lat.relevant_vectors();
        assert_eq!(got.len(), want, "{name}");
        assert_eq!(got, common::relevant_by_cosets(&lat), "{name}");
        if lat.dim() <= 3 || name == "D4" {
            assert_eq!(got, common::relevant_by_facets(&lat), "{name}");
        }
    }
}

#[test]
fn standard_simplex_monomials() {
    for n in 1..=4usize {
        let mut pts = vec![RatVec::zeros(n)];
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            pts.push(RatVec::from_ints(&e));
        }
        let fact = |k: usize| Rat::from_int((1..=k as i64).product::<i64>().max(1));
        let s = Polytope::simplex(&pts).unwrap();
        assert_eq!(s.volume(), fact(n).recip());
        let m1 = s.first_moment();
        assert!(m1.iter().all(|x| *x == fact(n + 1).recip()));
        // ∫ u₀² = 2/(n+2)!, and with G = all-ones, ∫ (Σu)² = n·2/(n+2)! + n(n−1)/(n+2)!.
        let e0: Vec<Rat> = (0..n).map(|i| if i == 0 { Rat::one() } else { Rat::zero() }).collect();
        let g0 = RatMat::diag(&e0);
        assert_eq!(s.second_moment(&g0, &RatVec::zeros(n)), Rat::from_int(2) / fact(n + 2));
        let ones = RatMat::from_rows(vec![vec![Rat::one(); n]; n]).unwrap();
        let want = Rat::from_int((2 * n + n * (n - 1)) as i64) / fact(n + 2);
        assert_eq!(s.second_moment(&ones, &RatVec::zeros(n)), want);
    }
}

#[test]
fn hexagon_closed_form() {
    let lat = catalog::get("A2").unwrap().lattice();
    let cell = latcell::voronoi::voronoi_cell(&lat, 5).unwrap();
    let mut want = common::a2_hexagon_vertices();
    want.sort();
    assert_eq!(cell.vertices(), want.as_slice());
    assert_eq!(cell.second_moment(lat.gram(), &RatVec::zeros(2)), Rat::new(5, 36));
}
