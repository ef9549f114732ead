//! Exact verification of the lower bound `∫_P Q_G(x) dx ≥ (R²/3)·|P|` for the
//! Voronoi cell `P` of a lattice, step by step, and classification of the
//! equality case.
//!
//! The argument tiles `P` by the pieces `Q(t, v) = P ∩ (P + t + v)` for a deep
//! hole `t`, splits each piece's moment about its centre of symmetry
//! `(t + v)/2`, bounds the remainder by the squared distance to the shifted
//! half lattice `½Λ + t/2`, and evaluates that integral as a quarter of the
//! cell's moment. Every identity and inequality along the way is checked
//! here with exact rationals; a failing record is an implementation bug, not
//! a counterexample.
//!
//! In the equality case the same chain forces exactly `2ⁿ` pieces, each a
//! half-size copy of `P`, whose lattice vectors lie on an empty sphere and
//! span a rectangular Delaunay cell. [`classify_equality`] walks that chain
//! and cross-checks it against the directly computed gap.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{Rat, RatMat, RatVec};
use crate::lattice::{coset_system, GramLattice, LatticePoint};
use crate::par::Execution;
use crate::polytope::{BoxVerdict, MomentData, Polytope};
use crate::voronoi::{self, DeepHole, DelaunayCell};
use crate::DEFAULT_DIMENSION_CAP;

/// Options shared by every verification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub cap: usize,
    pub exec: Execution,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { cap: DEFAULT_DIMENSION_CAP, exec: Execution::default() }
    }
}

/// One piece `Q(t, v) = P ∩ (P + t + v)` of positive volume.
#[derive(Clone, Debug)]
pub struct TessellationPiece {
    pub v: LatticePoint,
    pub region: Polytope,
    /// `(t + v)/2`, the centre of symmetry.
    pub center: RatVec,
    pub about_origin: MomentData,
    pub about_center: MomentData,
}

/// Candidate translates `v` with `Q_G(v + t) ≤ 9R²`, i.e. within three
/// covering radii of `−t`.
fn candidates(lattice: &GramLattice, hole: &DeepHole) -> Vec<LatticePoint> {
    let r = &hole.r_sq * Rat::from_int(9);
    lattice.enumerate_in_ball(&-&hole.t, &r)
}

/// All positive-volume pieces of `P` cut by the tiling `{P + t + v}`, sorted by `v`.
pub fn tessellation_pieces(
    lattice: &GramLattice,
    cell: &Polytope,
    hole: &DeepHole,
    exec: Execution,
) -> Vec<TessellationPiece> {
    let g = lattice.gram();
    let origin = RatVec::zeros(lattice.dim());
    // |Q(t, v)| > 0 exactly when (t + v)/2 is interior to P.
    let cands: Vec<(LatticePoint, RatVec)> = candidates(lattice, hole)
        .into_iter()
        .map(|v| {
            let c = (&hole.t + &v.to_ratvec()).half();
            (v, c)
        })
        .filter(|(_, c)| cell.interior_contains(c))
        .collect();
    exec.map(&cands, |(v, c)| {
        let shift = &hole.t + &v.to_ratvec();
        let region = cell.intersect(&cell.translate(&shift))?;
        let about_origin = region.moments(g, &origin);
        let about_center = region.moments(g, c);
        Some(TessellationPiece { v: v.clone(), region, center: c.clone(), about_origin, about_center })
    })
    .into_iter()
    .flatten()
    .collect()
}

/// `∫_P dist²(x, ½Λ + t/2) dx`, summed over `P ∩ (½P + p)` for `p ∈ ½Λ + t/2`.
///
/// Returns the value and the number of pieces with positive volume.
pub fn half_lattice_distance_integral(
    lattice: &GramLattice,
    cell: &Polytope,
    hole: &DeepHole,
    exec: Execution,
) -> (Rat, usize) {
    let g = lattice.gram();
    let half_cell = cell.scale_half();
    let three_halves = Rat::new(3, 2);
    // P ∩ (½P + p) has interior iff p ∈ int(P − ½P) = int(3/2·P).
    let centers: Vec<RatVec> = candidates(lattice, hole)
        .into_iter()
        .map(|u| (&u.to_ratvec() + &hole.t).half())
        .filter(|p| cell.halfspaces().iter().all(|h| h.functional.dot(p) < &h.offset * &three_halves))
        .collect();
    let parts: Vec<Option<Rat>> = exec.map(&centers, |p| {
        let region = cell.intersect(&half_cell.translate(p))?;
        Some(region.second_moment(g, p))
    });
    let count = parts.iter().filter(|x| x.is_some()).count();
    (parts.into_iter().flatten().sum(), count)
}

/// Which numbered step of the argument a record checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EqTag {
    Eq1,
    Eq2,
    Eq3agg,
    Eq4,
    Eq5,
    Eq7,
    Main,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Equal,
    #[serde(rename = ">=")]
    AtLeast,
}

impl Relation {
    pub fn holds(self, lhs: &Rat, rhs: &Rat) -> bool {
        match self {
            Relation::Equal => lhs == rhs,
            Relation::AtLeast => lhs >= rhs,
        }
    }
}

/// A single exact comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub eq: EqTag,
    pub what: String,
    pub lhs: Rat,
    pub rhs: Rat,
    /// Intermediate value for chained steps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mid: Option<Rat>,
    pub relation: Relation,
    pub pass: bool,
}

impl Record {
    fn new(eq: EqTag, what: impl Into<String>, lhs: Rat, rhs: Rat, relation: Relation) -> Self {
        let pass = relation.holds(&lhs, &rhs);
        Record { eq, what: what.into(), lhs, rhs, mid: None, relation, pass }
    }

    fn with_mid(mut self, mid: Rat, mid_ok: bool) -> Self {
        self.mid = Some(mid);
        self.pass &= mid_ok;
        self
    }
}

/// The pieces tile `P`: volumes and moments add up exactly.
pub fn verify_eq1(lattice: &GramLattice, cell: &Polytope, pieces: &[TessellationPiece]) -> Result<Vec<Record>> {
    let g = lattice.gram();
    let origin = RatVec::zeros(lattice.dim());
    let vol: Rat = pieces.iter().map(|p| &p.about_origin.volume).sum();
    let mom: Rat = pieces.iter().map(|p| &p.about_origin.second_moment).sum();
    let cell_vol = cell.volume();
    let cell_mom = cell.second_moment(g, &origin);
    if vol != cell_vol || mom != cell_mom {
        return Err(Error::IncompletePieces(format!(
            "piece volumes {vol} vs |P| {cell_vol}; piece moments {mom} vs {cell_mom}"
        )));
    }
    Ok(vec![
        Record::new(EqTag::Eq1, "volume", cell_vol, vol, Relation::Equal),
        Record::new(EqTag::Eq1, "second_moment", cell_mom, mom, Relation::Equal),
    ])
}

/// Moment split about the piece's centre of symmetry, and the vanishing cross term.
pub fn verify_eq2(lattice: &GramLattice, piece: &TessellationPiece) -> Result<Vec<Record>> {
    let c = &piece.center;
    if !piece.region.is_centrally_symmetric_about(c) {
        return Err(Error::NotCentrallySymmetric(format!("{c:?}")));
    }
    let vol = &piece.about_origin.volume;
    let split = lattice.norm_sq(c) * vol + &piece.about_center.second_moment;
    let offset = &piece.region.first_moment() - &c.scale(vol);
    let cross = lattice.inner(c, &offset);
    let tag = format!("{:?}", piece.v.coords());
    Ok(vec![
        Record::new(
            EqTag::Eq2,
            format!("split v={tag}"),
            piece.about_origin.second_moment.clone(),
            split,
            Relation::Equal,
        ),
        Record::new(EqTag::Eq2, format!("cross v={tag}"), cross, Rat::zero(), Relation::Equal),
    ])
}

/// `min_v Q_G((t + v)/2) = Q_G(t)/4`.
pub fn verify_eq5(lattice: &GramLattice, hole: &DeepHole) -> Record {
    let quarter = Rat::new(1, 4);
    let (d, _) = lattice.closest_vectors(&-&hole.t);
    Record::new(EqTag::Eq5, "min_norm", &d * &quarter, lattice.norm_sq(&hole.t) * &quarter, Relation::Equal)
}

/// `dist²(x, ½Λ + t/2)`.
pub fn half_lattice_dist_sq(lattice: &GramLattice, hole: &DeepHole, x: &RatVec) -> Rat {
    let target = &x.scale(&Rat::from_int(2)) - &hole.t;
    lattice.closest_vectors(&target).0 * Rat::new(1, 4)
}

/// Aggregate form of the pointwise bound `Q_G(x − c_v) ≥ dist²(x, ½Λ + t/2)`,
/// plus a pointwise spot check at every piece vertex.
pub fn verify_eq3_aggregate(
    lattice: &GramLattice,
    hole: &DeepHole,
    pieces: &[TessellationPiece],
    half_integral: &Rat,
) -> Record {
    let lhs: Rat = pieces.iter().map(|p| &p.about_center.second_moment).sum();
    let pointwise = pieces.iter().all(|p| {
        p.region.vertices().iter().all(|x| lattice.dist_sq(x, &p.center) >= half_lattice_dist_sq(lattice, hole, x))
    });
    let mut rec = Record::new(EqTag::Eq3agg, "aggregate", lhs, half_integral.clone(), Relation::AtLeast);
    rec.pass &= pointwise;
    rec
}

/// The quarter identity, checked both on `P` directly and on the fundamental
/// domain `D = ∪ (½P + w_i + t/2)` built from the classes of Λ/2Λ.
pub fn verify_eq7(lattice: &GramLattice, cell: &Polytope, hole: &DeepHole, half_integral: &Rat) -> Record {
    let g = lattice.gram();
    let cell_mom = cell.second_moment(g, &RatVec::zeros(lattice.dim()));
    let half_cell = cell.scale_half();
    let half_t = hole.t.half();
    let domain: Rat = coset_system(lattice.dim())
        .reps
        .iter()
        .map(|w| {
            let p = &w.to_ratvec().half() + &half_t;
            half_cell.translate(&p).second_moment(g, &p)
        })
        .sum();
    let quarter = cell_mom * Rat::new(1, 4);
    let domain_ok = domain == quarter;
    Record::new(EqTag::Eq7, "quarter", half_integral.clone(), quarter, Relation::Equal).with_mid(domain, domain_ok)
}

/// Everything the argument needs for one lattice and one deep hole.
pub struct ProofContext {
    pub lattice: GramLattice,
    pub cell: Polytope,
    pub r_sq: Rat,
    pub hole: DeepHole,
    pub volume: Rat,
    pub second_moment: Rat,
    pub pieces: Vec<TessellationPiece>,
    pub half_integral: Rat,
    pub half_pieces: usize,
}

impl ProofContext {
    /// Builds the context using the lexicographically first deep hole.
    pub fn new(lattice: &GramLattice, config: &VerifyConfig) -> Result<Self> {
        let cell = voronoi::voronoi_cell(lattice, config.cap)?;
        let hole = voronoi::deep_holes(lattice, &cell)?.into_iter().next().expect("a polytope has a farthest vertex");
        Ok(Self::with_hole(lattice, cell, hole, config))
    }

    /// One context per deep hole.
    pub fn for_all_deep_holes(lattice: &GramLattice, config: &VerifyConfig) -> Result<Vec<Self>> {
        let cell = voronoi::voronoi_cell(lattice, config.cap)?;
        let holes = voronoi::deep_holes(lattice, &cell)?;
        Ok(holes.into_iter().map(|h| Self::with_hole(lattice, cell.clone(), h, config)).collect())
    }

    pub fn with_hole(lattice: &GramLattice, cell: Polytope, hole: DeepHole, config: &VerifyConfig) -> Self {
        let origin = RatVec::zeros(lattice.dim());
        let r_sq = voronoi::covering_radius_sq(lattice, &cell);
        let volume = cell.volume();
        let second_moment = cell.second_moment(lattice.gram(), &origin);
        let pieces = tessellation_pieces(lattice, &cell, &hole, config.exec);
        let (half_integral, half_pieces) = half_lattice_distance_integral(lattice, &cell, &hole, config.exec);
        ProofContext {
            lattice: lattice.clone(),
            cell,
            r_sq,
            hole,
            volume,
            second_moment,
            pieces,
            half_integral,
            half_pieces,
        }
    }

    /// `∫_P Q_G − R²|P|/3`.
    pub fn gap(&self) -> Rat {
        &self.second_moment - &self.r_sq * &self.volume / Rat::from_int(3)
    }

    /// `(3∫_P Q_G) / (R²|P|)`.
    pub fn ratio(&self) -> Rat {
        Rat::from_int(3) * &self.second_moment / (&self.r_sq * &self.volume)
    }

    /// `min_v Q_G((t + v)/2)` over all of Λ and over the piece translates only.
    pub fn eq4_infima(&self) -> (Rat, Rat) {
        let all = self.lattice.closest_vectors(&-&self.hole.t).0 * Rat::new(1, 4);
        let pieces = self.pieces.iter().map(|p| self.lattice.norm_sq(&p.center)).min().expect("at least one piece");
        (all, pieces)
    }

    /// Every record of the argument for this context.
    pub fn records(&self) -> Result<Vec<Record>> {
        let lat = &self.lattice;
        let mut out = verify_eq1(lat, &self.cell, &self.pieces)?;
        for p in &self.pieces {
            out.extend(verify_eq2(lat, p)?);
        }
        out.push(verify_eq3_aggregate(lat, &self.hole, &self.pieces, &self.half_integral));

        // Aggregate chain: ∫_P = Σ Q(c)|Q| + Σ ∫_Q Q(x − c) ≥ Σ Q(c)|Q| + ∫ dist² ≥ |P|·inf + ∫ dist².
        let centre_terms: Rat = self.pieces.iter().map(|p| lat.norm_sq(&p.center) * &p.about_origin.volume).sum();
        let inner: Rat = self.pieces.iter().map(|p| &p.about_center.second_moment).sum();
        let first = &centre_terms + &inner;
        let middle = &centre_terms + &self.half_integral;
        let (inf_all, _) = self.eq4_infima();
        let last = &self.volume * &inf_all + &self.half_integral;
        let chain_ok = first == self.second_moment && first >= middle && middle >= last;
        out.push(
            Record::new(EqTag::Eq4, "chain", self.second_moment.clone(), last, Relation::AtLeast)
                .with_mid(middle, chain_ok),
        );

        out.push(verify_eq5(lat, &self.hole));
        out.push(verify_eq7(lat, &self.cell, &self.hole, &self.half_integral));

        let quarter = Rat::new(1, 4);
        let chain_rhs = &self.volume * lat.norm_sq(&self.hole.t) * &quarter + &self.second_moment * &quarter;
        out.push(Record::new(EqTag::Main, "final_chain", self.second_moment.clone(), chain_rhs, Relation::AtLeast));
        out.push(Record::new(
            EqTag::Main,
            "three_moment_vs_r2_volume",
            Rat::from_int(3) * &self.second_moment,
            &self.r_sq * &self.volume,
            Relation::AtLeast,
        ));
        Ok(out)
    }
}

/// A named step of the equality-case chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: if pass { String::new() } else { detail.into() } }
    }
}

/// Equality or strict inequality, with supporting data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum EqualityVerdict {
    Equality { semi_axes_sq: Vec<Rat>, k: usize, delaunay_vertices: Vec<LatticePoint> },
    Strict { gap: Rat, first_failed_check: String },
}

impl EqualityVerdict {
    pub fn is_equality(&self) -> bool {
        matches!(self, EqualityVerdict::Equality { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            EqualityVerdict::Equality { .. } => "Equality",
            EqualityVerdict::Strict { .. } => "Strict",
        }
    }
}

/// Outcome of the non-obtuseness test; `Err` is a witness `(v₁, v₂, v₃)`
/// with `⟨v₁ − v₃, v₂ − v₃⟩_G < 0`.
pub type NonObtuse = std::result::Result<(), [RatVec; 3]>;

/// Checks `⟨v_i − v_l, v_j − v_l⟩_G ≥ 0` for every triple of distinct points.
pub fn check_nonobtuse(points: &[RatVec], gram: &RatMat) -> NonObtuse {
    let m = points.len();
    for l in 0..m {
        for i in 0..m {
            for j in i + 1..m {
                if i == l || j == l {
                    continue;
                }
                let a = &points[i] - &points[l];
                let b = &points[j] - &points[l];
                if gram.bilinear(&a, &b).is_negative() {
                    return Err([points[i].clone(), points[j].clone(), points[l].clone()]);
                }
            }
        }
    }
    Ok(())
}

/// Outcome of [`check_box_vertexset`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoxVertexVerdict {
    Box { origin: RatVec, edges: Vec<RatVec> },
    NotBox { witness: String },
}

/// Decides whether `2ⁿ` distinct points are the vertices of a `G`-rectangular box.
///
/// From the least point, edges are picked greedily by increasing length
/// among the difference vectors orthogonal to every edge chosen so far; in a
/// box this recovers exactly its `n` edges. The `2ⁿ` subset sums must then
/// reproduce the point set.
pub fn check_box_vertexset(points: &[RatVec], gram: &RatMat) -> Result<BoxVertexVerdict> {
    let n = gram.dim();
    let expected = 1usize << n;
    if points.len() != expected {
        return Err(Error::WrongCardinality { expected, got: points.len() });
    }
    let mut sorted = points.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != expected {
        return Err(Error::WrongCardinality { expected, got: sorted.len() });
    }
    let origin = sorted[0].clone();
    let mut diffs: Vec<(Rat, RatVec)> = sorted[1..]
        .iter()
        .map(|p| {
            let d = p - &origin;
            (gram.quad(&d), d)
        })
        .collect();
    diffs.sort();
    let mut edges: Vec<RatVec> = Vec::with_capacity(n);
    for (_, d) in &diffs {
        if edges.len() == n {
            break;
        }
        if edges.iter().all(|e| gram.bilinear(e, d).is_zero()) {
            edges.push(d.clone());
        }
    }
    if edges.len() < n {
        return Ok(BoxVertexVerdict::NotBox {
            witness: format!("only {} mutually orthogonal edges from {origin:?}", edges.len()),
        });
    }
    let mut corners: Vec<RatVec> = (0..expected)
        .map(|mask| {
            edges.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(origin.clone(), |acc, (_, e)| &acc + e)
        })
        .collect();
    corners.sort();
    if let Some(p) = sorted.iter().find(|p| corners.binary_search(p).is_err()) {
        return Ok(BoxVertexVerdict::NotBox {
            witness: format!("{p:?} is not a corner of the box spanned at {origin:?}"),
        });
    }
    Ok(BoxVertexVerdict::Box { origin, edges })
}

/// Runs the equality-case chain and cross-checks it against the exact gap.
pub fn classify_equality(ctx: &ProofContext) -> Result<(EqualityVerdict, Vec<Check>)> {
    let lat = &ctx.lattice;
    let g = lat.gram();
    let n = lat.dim();
    let two_n = 1usize << n;
    let t = &ctx.hole.t;
    let mut checks = Vec::new();

    let eq3_lhs: Rat = ctx.pieces.iter().map(|p| &p.about_center.second_moment).sum();
    checks.push(Check::new(
        "eq3_equality",
        eq3_lhs == ctx.half_integral,
        format!("Σ∫Q(x−c) = {eq3_lhs} > ∫dist² = {}", ctx.half_integral),
    ));

    let half_cell = ctx.cell.scale_half();
    let bad_shape = ctx.pieces.iter().find(|p| p.region != half_cell.translate(&p.center));
    checks.push(Check::new(
        "piece_is_half_cell",
        bad_shape.is_none(),
        bad_shape.map(|p| format!("Q(t, {:?}) ≠ ½P + (t+v)/2", p.v.coords())).unwrap_or_default(),
    ));

    let k = ctx.pieces.len();
    checks.push(Check::new("piece_count", k == two_n, format!("k = {k}, 2ⁿ = {two_n}")));

    let mut classes: Vec<Vec<i64>> =
        ctx.pieces.iter().map(|p| p.v.0.iter().map(|x| x.rem_euclid(2)).collect()).collect();
    classes.sort();
    let distinct = classes.windows(2).all(|w| w[0] != w[1]);
    checks.push(Check::new("distinct_mod_2", distinct, "two piece translates agree modulo 2Λ"));

    let t_norm = lat.norm_sq(t);
    let off_sphere = ctx.pieces.iter().find(|p| lat.norm_sq(&(t + &p.v.to_ratvec())) != t_norm);
    checks.push(Check::new(
        "equal_norms",
        off_sphere.is_none(),
        off_sphere.map(|p| format!("Q(t + {:?}) ≠ Q(t)", p.v.coords())).unwrap_or_default(),
    ));

    let delaunay: DelaunayCell = voronoi::delaunay_cell_at(lat, &ctx.hole)?;
    let empty = voronoi::verify_empty_sphere(lat, &delaunay);
    checks.push(Check::new(
        "empty_sphere",
        empty.is_ok(),
        format!("lattice point {:?} inside the sphere", empty.as_ref().err()),
    ));
    let missing = ctx.pieces.iter().find(|p| delaunay.vertices.binary_search(&p.v).is_err());
    checks.push(Check::new(
        "pieces_on_sphere",
        missing.is_none(),
        missing.map(|p| format!("{:?} not on the sphere", p.v.coords())).unwrap_or_default(),
    ));
    let dv = delaunay.vertex_vectors();
    checks.push(Check::new(
        "delaunay_size",
        dv.len() >= two_n,
        format!("{} Delaunay vertices < 2ⁿ = {two_n}", dv.len()),
    ));

    let nonobtuse = check_nonobtuse(&dv, g);
    checks.push(Check::new("delaunay_nonobtuse", nonobtuse.is_ok(), format!("obtuse triple {:?}", nonobtuse.err())));

    let boxed = match check_box_vertexset(&dv, g) {
        Ok(BoxVertexVerdict::Box { .. }) => Check::new("delaunay_box", true, ""),
        Ok(BoxVertexVerdict::NotBox { witness }) => Check::new("delaunay_box", false, witness),
        Err(e) => Check::new("delaunay_box", false, e.to_string()),
    };
    checks.push(boxed);

    let cell_box = ctx.cell.is_rectangular_box(g)?;
    let semi_axes_sq = match &cell_box {
        BoxVerdict::Box { semi_axes_sq, .. } => {
            checks.push(Check::new("cell_is_box", true, ""));
            semi_axes_sq.clone()
        }
        BoxVerdict::NotBox { reason } => {
            checks.push(Check::new("cell_is_box", false, reason.clone()));
            Vec::new()
        }
    };

    let gap = ctx.gap();
    let all_pass = checks.iter().all(|c| c.pass);
    if all_pass != gap.is_zero() {
        return Err(Error::InternalInconsistency(format!(
            "equality checklist {} but gap = {gap}",
            if all_pass { "passes" } else { "fails" }
        )));
    }
    if gap.is_negative() {
        return Err(Error::InternalInconsistency(format!("negative gap {gap}")));
    }
    let verdict = if all_pass {
        if semi_axes_sq.iter().cloned().sum::<Rat>() != ctx.r_sq {
            return Err(Error::InternalInconsistency("box semi-axes do not add up to R²".into()));
        }
        EqualityVerdict::Equality { semi_axes_sq, k, delaunay_vertices: delaunay.vertices }
    } else {
        let first = checks.iter().find(|c| !c.pass).expect("some check failed");
        EqualityVerdict::Strict { gap, first_failed_check: first.name.clone() }
    };
    Ok((verdict, checks))
}

/// Description of the input lattice inside a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeInfo {
    pub name: String,
    pub n: usize,
    pub gram: RatMat,
}

/// Full outcome of one verification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReport {
    pub lattice: LatticeInfo,
    pub deep_hole: RatVec,
    #[serde(rename = "R2")]
    pub r_sq: Rat,
    pub volume: Rat,
    pub second_moment: Rat,
    pub ratio: Rat,
    pub gap: Rat,
    pub k: usize,
    pub half_lattice_pieces: usize,
    pub eq4_inf_all: Rat,
    pub eq4_inf_pieces: Rat,
    pub records: Vec<Record>,
    pub all_pass: bool,
    pub equality_checks: Vec<Check>,
    pub verdict: EqualityVerdict,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ProofReport {
    pub fn from_context(name: &str, ctx: &ProofContext, started: Instant) -> Result<Self> {
        let records = ctx.records()?;
        let (verdict, equality_checks) = classify_equality(ctx)?;
        let (eq4_inf_all, eq4_inf_pieces) = ctx.eq4_infima();
        let all_pass = records.iter().all(|r| r.pass);
        Ok(ProofReport {
            lattice: LatticeInfo { name: name.to_string(), n: ctx.lattice.dim(), gram: ctx.lattice.gram().clone() },
            deep_hole: ctx.hole.t.clone(),
            r_sq: ctx.r_sq.clone(),
            volume: ctx.volume.clone(),
            second_moment: ctx.second_moment.clone(),
            ratio: ctx.ratio(),
            gap: ctx.gap(),
            k: ctx.pieces.len(),
            half_lattice_pieces: ctx.half_pieces,
            eq4_inf_all,
            eq4_inf_pieces,
            records,
            all_pass,
            equality_checks,
            verdict,
            elapsed: started.elapsed(),
        })
    }

    pub fn failed_records(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }
}

/// Verifies every step for `lattice` at its canonical deep hole.
pub fn verify_main(name: &str, lattice: &GramLattice, config: &VerifyConfig) -> Result<ProofReport> {
    let started = Instant::now();
    let ctx = ProofContext::new(lattice, config)?;
    ProofReport::from_context(name, &ctx, started)
}

/// Runs [`verify_main`] once per deep hole and checks the verdict does not depend on it.
pub fn verify_all_deep_holes(name: &str, lattice: &GramLattice, config: &VerifyConfig) -> Result<Vec<ProofReport>> {
    let started = Instant::now();
    let reports = ProofContext::for_all_deep_holes(lattice, config)?
        .iter()
        .map(|ctx| ProofReport::from_context(name, ctx, started))
        .collect::<Result<Vec<_>>>()?;
    if let Some(first) = reports.first() {
        if reports.iter().any(|r| r.verdict.is_equality() != first.verdict.is_equality()) {
            return Err(Error::InternalInconsistency("verdict depends on the choice of deep hole".into()));
        }
    }
    Ok(reports)
}

/// Verifies a batch of lattices, preserving input order.
pub fn verify_batch(items: &[(String, GramLattice)], config: &VerifyConfig) -> Vec<Result<ProofReport>> {
    config.exec.map(items, |(name, lat)| verify_main(name, lat, config))
}
