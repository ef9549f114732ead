//! Acceptance gate. Runs every criterion in sequence, prints one
//! `PASS`/`FAIL` line each and exits nonzero if any failed.

mod common;

use std::time::{Duration, Instant};

use latcell::catalog;
use latcell::exactnum::{Rat, RatMat, RatVec};
use latcell::lattice::GramLattice;
use latcell::montecarlo;
use latcell::random::{perturb_off_diagonal, random_batch};
use latcell::verify::{
    check_box_vertexset, check_nonobtuse, verify_batch, verify_main, BoxVertexVerdict, EqualityVerdict, VerifyConfig,
};
use latcell::voronoi::{deep_holes, delaunay_cell_at, verify_empty_sphere, voronoi_cell};
use latcell::Execution;

const MC_SAMPLES: usize = 1_000_000;
const MC_TOLERANCE: f64 = 0.02;

fn r(p: i64, q: i64) -> Rat {
    Rat::new(p, q)
}

fn report(id: u32, what: &str, limit: Duration, started: Instant, failures: &[String]) -> bool {
    let took = started.elapsed();
    let in_time = took <= limit;
    let pass = failures.is_empty() && in_time;
    println!(
        "AC{id} {} {what} ({:.2}s, limit {}s){}",
        if pass { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        limit.as_secs(),
        if pass { String::new() } else { format!(": {failures:?}{}", if in_time { "" } else { " [over time]" }) }
    );
    pass
}

fn expect(failures: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

fn ac1_integer_lattices() -> bool {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    let cfg = VerifyConfig::default();
    for n in 1..=4usize {
        let rep = verify_main(&format!("Z{n}"), &GramLattice::integer(n), &cfg).unwrap();
        let ni = n as i64;
        expect(&mut fails, rep.second_moment == r(ni, 12), || format!("Z{n} moment {}", rep.second_moment));
        expect(&mut fails, rep.r_sq == r(ni, 4), || format!("Z{n} R² {}", rep.r_sq));
        expect(&mut fails, rep.volume == Rat::one(), || format!("Z{n} volume {}", rep.volume));
        expect(&mut fails, rep.gap.is_zero() && rep.all_pass, || {
            format!("Z{n} gap {} all_pass {}", rep.gap, rep.all_pass)
        });
        match &rep.verdict {
            EqualityVerdict::Equality { semi_axes_sq, .. } => {
                expect(&mut fails, semi_axes_sq.len() == n && semi_axes_sq.iter().all(|a| *a == r(1, 4)), || {
                    format!("Z{n} semi-axes {semi_axes_sq:?}")
                })
            }
            v => fails.push(format!("Z{n} verdict {v:?}")),
        }
    }
    report(1, "Z^n moments, R², equality with semi-axes 1/2", Duration::from_secs(5), t0, &fails)
}

fn ac2_rectangular_lattices() -> bool {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    let cfg = VerifyConfig::default();
    let cases: [(&[i64], &[Rat]); 2] = [(&[1, 4], &[r(1, 4), r(1, 1)]), (&[1, 4, 9], &[r(1, 4), r(1, 1), r(9, 4)])];
    for (diag, axes) in cases {
        let g = RatMat::diag(&diag.iter().map(|&d| Rat::from_int(d)).collect::<Vec<_>>());
        let rep = verify_main("rect", &GramLattice::new(g).unwrap(), &cfg).unwrap();
        let sum: Rat = axes.iter().cloned().sum();
        expect(&mut fails, rep.r_sq == sum, || format!("{diag:?}: R² {} vs Σa² {sum}", rep.r_sq));
        expect(&mut fails, rep.all_pass && rep.gap.is_zero(), || format!("{diag:?}: gap {}", rep.gap));
        match &rep.verdict {
            EqualityVerdict::Equality { semi_axes_sq, .. } => {
                let mut got = semi_axes_sq.clone();
                got.sort();
                expect(&mut fails, got == axes, || format!("{diag:?}: semi-axes {got:?}"));
            }
            v => fails.push(format!("{diag:?}: verdict {v:?}")),
        }
    }
    report(2, "rectangular lattices reach equality with R² = Σa²", Duration::from_secs(5), t0, &fails)
}

fn ac3_hexagonal_lattice() -> bool {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    let entry = catalog::get("A2").unwrap();
    let lat = entry.lattice();
    let rep = verify_main("A2", &lat, &VerifyConfig::default()).unwrap();
    expect(&mut fails, rep.ratio == r(5, 4), || format!("ratio {}", rep.ratio));
    expect(&mut fails, rep.gap == r(1, 36), || format!("gap {}", rep.gap));
    expect(&mut fails, rep.all_pass, || "records failed".into());
    expect(&mut fails, matches!(rep.verdict, EqualityVerdict::Strict { .. }), || format!("verdict {:?}", rep.verdict));

    let hex = common::a2_hexagon_vertices();
    let origin = RatVec::zeros(2);
    let (mut vol, mut mom) = (Rat::zero(), Rat::zero());
    for i in 0..6 {
        let (v, m) = common::simplex_moment_oracle(
            &[origin.clone(), hex[i].clone(), hex[(i + 1) % 6].clone()],
            lat.gram(),
            &origin,
        );
        vol += v;
        mom += m;
    }
    expect(&mut fails, vol == rep.volume && mom == rep.second_moment, || {
        format!("closed form |P| {vol}, ∫ {mom} vs {} {}", rep.volume, rep.second_moment)
    });

    let cell = voronoi_cell(&lat, 5).unwrap();
    let mc = montecarlo::estimate(&lat, &cell, &rep.volume, &rep.second_moment, MC_SAMPLES, 7, Execution::default());
    expect(&mut fails, mc.volume_rel_dev < MC_TOLERANCE && mc.second_moment_rel_dev < MC_TOLERANCE, || {
        format!("Monte Carlo deviations {} {}", mc.volume_rel_dev, mc.second_moment_rel_dev)
    });
    report(3, "A2 ratio 5/4, closed form and Monte Carlo within 2%", Duration::from_secs(5), t0, &fails)
}

fn random_corpus() -> Vec<(String, GramLattice)> {
    let mut items = random_batch(2, 2024, 10, false);
    items.extend(random_batch(3, 2024, 10, false));
    items
}

fn ac4_catalog_and_random_batch() -> bool {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    let mut items: Vec<(String, GramLattice)> =
        catalog::entries().iter().map(|e| (e.name.clone(), e.lattice())).collect();
    items.extend(random_corpus());
    let known: Vec<_> = catalog::entries().into_iter().map(|e| (e.r_sq, e.ratio)).collect();
    let cfg = VerifyConfig::default();
    for (i, ((name, _), rep)) in items.iter().zip(verify_batch(&items, &cfg)).enumerate() {
        let rep = match rep {
            Ok(rep) => rep,
            Err(e) => {
                fails.push(format!("{name}: {e}"));
                continue;
            }
        };
        for rec in rep.failed_records() {
            fails.push(format!("{name}: {:?} {} failed", rec.eq, rec.what));
        }
        expect(&mut fails, !rep.gap.is_negative(), || format!("{name}: negative gap"));
        if let Some((r2, ratio)) = known.get(i) {
            if let Some(r2) = r2 {
                expect(&mut fails, &rep.r_sq == r2, || format!("{name}: R² {} expected {r2}", rep.r_sq));
            }
            if let Some(ratio) = ratio {
                expect(&mut fails, &rep.ratio == ratio, || format!("{name}: ratio {} expected {ratio}", rep.ratio));
            }
        }
    }
    report(4, "every record passes on the catalog and 20 random lattices", Duration::from_secs(120), t0, &fails)
}

fn ac5_diagonal_versus_perturbed() -> bool {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    let mut diag = random_batch(2, 99, 5, true);
    diag.extend(random_batch(3, 99, 5, true));
    let tilt = r(1, 10);
    let skew: Vec<(String, GramLattice)> = diag
        .iter()
        .map(|(name, lat)| (format!("{name}-skew"), GramLattice::new(perturb_off_diagonal(lat.gram(), &tilt)).unwrap()))
        .collect();
    let cfg = VerifyConfig::default();
    for ((name, _), rep) in diag.iter().zip(verify_batch(&diag, &cfg)) {
        let rep = rep.unwrap();
        expect(&mut fails, rep.verdict.is_equality() && rep.all_pass, || format!("{name}: {:?}", rep.verdict));
    }
    for ((name, _), rep) in skew.iter().zip(verify_batch(&skew, &cfg)) {
        let rep = rep.unwrap();
        expect(&mut fails, !rep.verdict.is_equality() && rep.gap.is_positive() && rep.all_pass, || {
            format!("{name}: {:?}", rep.verdict)
        });
    }
    report(5, "diagonal lattices are equality cases, tilted ones are strict", Duration::from_secs(60), t0, &fails)
}

fn ac6_oracle_equivalence() -> bool {
    use rand::{Rng, SeedableRng};
    let t0 = Instant::now();
    let mut fails = Vec::new();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
    let lattices = random_corpus();
    for i in 0..50 {
        let (name, lat) = &lattices[i % lattices.len()];
        let target: RatVec = (0..lat.dim()).map(|_| Rat::new(rng.gen_range(-40..=40), rng.gen_range(1..=12))).collect();
        let got = lat.closest_vectors(&target);
        let want = common::brute_closest(lat, &target);
        expect(&mut fails, got == want, || format!("{name} at {target:?}: {got:?} vs {want:?}"));
    }
    for e in catalog::entries() {
        let lat = e.lattice();
        let got = lat.relevant_vectors();
        let by_coset = common::relevant_by_cosets(&lat);
        expect(&mut fails, got == by_coset, || format!("{}: coset oracle disagrees", e.name));
        // Z5 has 3⁵ − 1 coset minima, too many for the all-subsets vertex scan.
        if lat.dim() <= 4 {
            let by_facet = common::relevant_by_facets(&lat);
            expect(&mut fails, got == by_facet, || format!("{}: facet oracle disagrees", e.name));
        }
    }
    let counts = [("Z2", 4), ("A2", 6), ("Z3", 6), ("D3", 12), ("D4", 24), ("Z5", 10)];
    for (name, want) in counts {
        let got = catalog::get(name).unwrap().lattice().relevant_vectors().len();
        expect(&mut fails, got == want, || format!("{name}: {got} relevant vectors, expected {want}"));
    }
    report(6, "closest vectors and relevant vectors match brute force", Duration::from_secs(60), t0, &fails)
}

fn ac7_delaunay_cells() -> bool {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    let mut items: Vec<(String, GramLattice)> =
        catalog::entries().iter().map(|e| (e.name.clone(), e.lattice())).collect();
    items.extend(random_corpus());
    items.extend(random_batch(2, 99, 5, true));
    items.extend(random_batch(3, 99, 5, true));
    let cfg = VerifyConfig::default();
    for (name, lat) in &items {
        let cell = voronoi_cell(lat, cfg.cap).unwrap();
        let equality = verify_main(name, lat, &cfg).unwrap().verdict.is_equality();
        for hole in deep_holes(lat, &cell).unwrap() {
            let d = delaunay_cell_at(lat, &hole).unwrap();
            expect(&mut fails, verify_empty_sphere(lat, &d).is_ok(), || {
                format!("{name}: sphere at {:?} not empty", d.center)
            });
            let pts = d.vertex_vectors();
            if let Err(w) = check_nonobtuse(&pts, lat.gram()) {
                fails.push(format!("{name}: obtuse triple {w:?}"));
            }
            if equality {
                let ok = pts.len() == 1 << lat.dim()
                    && matches!(check_box_vertexset(&pts, lat.gram()), Ok(BoxVertexVerdict::Box { .. }));
                expect(&mut fails, ok, || format!("{name}: Delaunay cell at {:?} is not a box", d.center));
            }
        }
    }
    report(
        7,
        "Delaunay cells at deep holes are empty and non-obtuse; boxes in equality cases",
        Duration::from_secs(120),
        t0,
        &fails,
    )
}

fn ac8_d4() -> bool {
    let t0 = Instant::now();
    let mut fails = Vec::new();
    let lat = catalog::get("D4").unwrap().lattice();
    let cfg = VerifyConfig::default();
    let facets = voronoi_cell(&lat, cfg.cap).unwrap().halfspaces().len();
    expect(&mut fails, facets == 24, || format!("{facets} facets"));
    let rep = verify_main("D4", &lat, &cfg).unwrap();
    for rec in rep.failed_records() {
        fails.push(format!("{:?} {} failed", rec.eq, rec.what));
    }
    expect(&mut fails, !rep.verdict.is_equality() && rep.gap.is_positive(), || format!("verdict {:?}", rep.verdict));
    report(8, "D4 cell has 24 facets and passes every record strictly", Duration::from_secs(60), t0, &fails)
}

fn main() {
    let criteria: [fn() -> bool; 8] = [
        ac1_integer_lattices,
        ac2_rectangular_lattices,
        ac3_hexagonal_lattice,
        ac4_catalog_and_random_batch,
        ac5_diagonal_versus_perturbed,
        ac6_oracle_equivalence,
        ac7_delaunay_cells,
        ac8_d4,
    ];
    let failed = criteria.iter().filter(|f| !f()).count();
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
