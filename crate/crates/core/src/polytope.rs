//! Exact convex polytopes in lattice coordinates.
//!
//! A [`Polytope`] keeps an irredundant H-representation, its full vertex set
//! and the vertex/facet incidence. Vertices come from the double-description
//! method run on the homogenised cone `{(λ, x) : bλ − ℓ·x ≥ 0, λ ≥ 0}`.
//! Volumes and moments are integrated over a centroid fan triangulation.
//!
//! Both representations are canonical (halfspaces scaled so the first
//! nonzero functional entry is ±1, both lists sorted), so `==` on polytopes
//! is geometric equality.

use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{affine_dim, det_rows, inverse, rank, Rat, RatMat, RatVec};
use crate::DEFAULT_DIMENSION_CAP;

/// `{x : functional·x ≤ offset}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfSpace {
    #[serde(rename = "l")]
    pub functional: RatVec,
    #[serde(rename = "b")]
    pub offset: Rat,
}

impl HalfSpace {
    pub fn new(functional: RatVec, offset: Rat) -> Result<Self> {
        if functional.is_zero() {
            return Err(Error::Dimension("halfspace functional must be nonzero".into()));
        }
        Ok(HalfSpace { functional, offset })
    }

    pub fn dim(&self) -> usize {
        self.functional.dim()
    }

    /// `offset − functional·x`; nonnegative inside.
    pub fn slack(&self, x: &RatVec) -> Rat {
        &self.offset - self.functional.dot(x)
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        !self.slack(x).is_negative()
    }

    /// Positive rescaling with the first nonzero functional entry equal to ±1.
    pub fn canonical(&self) -> HalfSpace {
        let lead = self.functional.iter().find(|x| !x.is_zero()).expect("nonzero functional").abs();
        let inv = lead.recip();
        HalfSpace { functional: self.functional.scale(&inv), offset: &self.offset * &inv }
    }

    pub fn translate(&self, s: &RatVec) -> HalfSpace {
        HalfSpace { functional: self.functional.clone(), offset: &self.offset + self.functional.dot(s) }
    }
}

impl fmt::Debug for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}·x ≤ {}", self.functional, self.offset)
    }
}

/// An `n`-simplex with its (coordinate) volume.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub vertices: Vec<RatVec>,
    pub volume: Rat,
}

impl Simplex {
    pub fn new(vertices: Vec<RatVec>) -> Self {
        let volume = simplex_volume(&vertices);
        Simplex { vertices, volume }
    }

    /// `∫_S Q_G(x − c) dx`.
    pub fn second_moment(&self, gram: &RatMat, c: &RatVec) -> Rat {
        let n = c.dim();
        let shifted: Vec<RatVec> = self.vertices.iter().map(|v| v - c).collect();
        let mut sum = RatVec::zeros(n);
        let mut acc = Rat::zero();
        for v in &shifted {
            acc += gram.quad(v);
            sum = &sum + v;
        }
        acc += gram.quad(&sum);
        let k = ((n + 1) * (n + 2)) as i64;
        &self.volume * acc / Rat::from_int(k)
    }

    /// `∫_S x dx`.
    pub fn first_moment(&self) -> RatVec {
        let n = self.vertices[0].dim();
        let mut sum = RatVec::zeros(n);
        for v in &self.vertices {
            sum = &sum + v;
        }
        sum.scale(&(&self.volume / Rat::from_int(n as i64 + 1)))
    }
}

/// `|det(v₁−v₀, …, vₙ−v₀)| / n!`.
pub fn simplex_volume(vertices: &[RatVec]) -> Rat {
    let (v0, rest) = vertices.split_first().expect("simplex has vertices");
    let rows: Vec<RatVec> = rest.iter().map(|v| v - v0).collect();
    let fact: i64 = (1..=rows.len() as i64).product();
    det_rows(&rows).abs() / Rat::from_int(fact)
}

/// Volume and second moment of a region, in coordinate measure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentData {
    pub volume: Rat,
    /// `∫ Q_G(x − center) dx`.
    pub second_moment: Rat,
    pub center: RatVec,
}

/// Metric-free moments `|P|`, `∫x dx` and `∫xxᵀ dx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawMoments {
    pub volume: Rat,
    pub first: RatVec,
    pub second: RatMat,
}

impl RawMoments {
    /// `∫ Q_G(x − c) dx = tr(G·M) − 2⟨c, m⟩_G + Q_G(c)|P|`.
    pub fn second_about(&self, gram: &RatMat, c: &RatVec) -> Rat {
        let n = c.dim();
        let mut trace = Rat::zero();
        for i in 0..n {
            for j in 0..n {
                trace += &gram[(i, j)] * &self.second[(i, j)];
            }
        }
        trace - Rat::from_int(2) * gram.bilinear(c, &self.first) + gram.quad(c) * &self.volume
    }
}

/// Sums simplex moments over a common denominator `D`, in integers:
/// with `w = D·v`, a simplex contributes `det/(n!Dⁿ)` to the volume,
/// `det·Σw / ((n+1)·n!·Dⁿ⁺¹)` to `∫x` and
/// `det·(Σwwᵀ + (Σw)(Σw)ᵀ) / ((n+1)(n+2)·n!·Dⁿ⁺²)` to `∫xxᵀ`.
fn raw_moments(n: usize, simplices: &[Vec<RatVec>]) -> RawMoments {
    let mut d = BigInt::one();
    for v in simplices.iter().flatten() {
        for x in v.iter() {
            d = d.lcm(x.denom());
        }
    }
    let scaled = |v: &RatVec| -> Vec<BigInt> { v.iter().map(|x| x.numer() * (&d / x.denom())).collect() };
    let mut vol = BigInt::zero();
    let mut first = vec![BigInt::zero(); n];
    let mut second = vec![vec![BigInt::zero(); n]; n];
    for s in simplices {
        let w: Vec<Vec<BigInt>> = s.iter().map(scaled).collect();
        let edges: Vec<Vec<BigInt>> =
            w[1..].iter().map(|r| r.iter().zip(&w[0]).map(|(a, b)| a - b).collect()).collect();
        let det = bareiss_det(edges).abs();
        if det.is_zero() {
            continue;
        }
        let sum: Vec<BigInt> = (0..n).map(|i| w.iter().map(|r| &r[i]).sum()).collect();
        vol += &det;
        for i in 0..n {
            first[i] += &det * &sum[i];
            for j in i..n {
                let mut acc = &sum[i] * &sum[j];
                for r in &w {
                    acc += &r[i] * &r[j];
                }
                second[i][j] += &det * acc;
            }
        }
    }
    let fact: BigInt = (1..=n as u64).map(BigInt::from).product();
    let dn = num_traits::pow(d.clone(), n);
    let frac = |num: &BigInt, den: BigInt| Rat::from_big(BigRational::new(num.clone(), den));
    let first_den = &fact * &dn * &d * BigInt::from(n + 1);
    let second_den = &fact * &dn * &d * &d * BigInt::from((n + 1) * (n + 2));
    let mut m = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let x = frac(&second[i][j], second_den.clone());
            m[j][i] = x.clone();
            m[i][j] = x;
        }
    }
    RawMoments {
        volume: frac(&vol, &fact * &dn),
        first: first.iter().map(|x| frac(x, first_den.clone())).collect(),
        second: RatMat::from_rows(m).expect("square"),
    }
}

/// Fraction-free Gaussian elimination.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// A bounded, full-dimensional convex polytope.
pub struct Polytope {
    n: usize,
    halfspaces: Vec<HalfSpace>,
    vertices: Vec<RatVec>,
    /// For each halfspace, the set of vertex indices lying on it.
    incidence: Vec<FixedBitSet>,
    fan: OnceLock<Vec<Vec<RatVec>>>,
    simplices: OnceLock<Vec<Simplex>>,
    raw: OnceLock<RawMoments>,
}

fn copy_lock<T: Clone>(lock: &OnceLock<T>) -> OnceLock<T> {
    let out = OnceLock::new();
    if let Some(x) = lock.get() {
        let _ = out.set(x.clone());
    }
    out
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        Polytope {
            n: self.n,
            halfspaces: self.halfspaces.clone(),
            vertices: self.vertices.clone(),
            incidence: self.incidence.clone(),
            fan: copy_lock(&self.fan),
            simplices: copy_lock(&self.simplices),
            raw: copy_lock(&self.raw),
        }
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.halfspaces == other.halfspaces && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polytope")
            .field("n", &self.n)
            .field("halfspaces", &self.halfspaces)
            .field("vertices", &self.vertices)
            .finish()
    }
}

impl Polytope {
    fn assemble(n: usize, halfspaces: Vec<HalfSpace>, vertices: Vec<RatVec>, incidence: Vec<FixedBitSet>) -> Self {
        Polytope {
            n,
            halfspaces,
            vertices,
            incidence,
            fan: OnceLock::new(),
            simplices: OnceLock::new(),
            raw: OnceLock::new(),
        }
    }

    /// Intersection of `halfspaces` under the default dimension cap.
    pub fn from_halfspaces(halfspaces: Vec<HalfSpace>) -> Result<Self> {
        Self::from_halfspaces_capped(halfspaces, DEFAULT_DIMENSION_CAP)
    }

    pub fn from_halfspaces_capped(halfspaces: Vec<HalfSpace>, cap: usize) -> Result<Self> {
        let n = halfspaces.first().map(HalfSpace::dim).ok_or(Error::Unbounded)?;
        if halfspaces.iter().any(|h| h.dim() != n) {
            return Err(Error::Dimension("halfspaces of mixed dimension".into()));
        }
        if n > cap {
            return Err(Error::DimensionCapExceeded { n, cap });
        }
        let mut hs: Vec<HalfSpace> = halfspaces.iter().map(HalfSpace::canonical).collect();
        hs.sort();
        hs.dedup();
        let mut vertices = double_description(n, &hs)?;
        vertices.sort();
        vertices.dedup();
        let refs: Vec<&RatVec> = vertices.iter().collect();
        if affine_dim(&refs) != Some(n) {
            return Err(Error::LowerDimensional);
        }
        // Keep only facet-defining halfspaces.
        let mut kept = Vec::new();
        let mut incidence = Vec::new();
        for h in hs {
            let tight: Vec<usize> = (0..vertices.len()).filter(|&i| h.slack(&vertices[i]).is_zero()).collect();
            if tight.len() < n {
                continue;
            }
            let pts: Vec<&RatVec> = tight.iter().map(|&i| &vertices[i]).collect();
            if affine_dim(&pts) == Some(n - 1) {
                let mut bits = FixedBitSet::with_capacity(vertices.len());
                tight.iter().for_each(|&i| bits.insert(i));
                kept.push(h);
                incidence.push(bits);
            }
        }
        Ok(Polytope::assemble(n, kept, vertices, incidence))
    }

    /// Axis-aligned box `Π [lo_i, hi_i]`.
    pub fn axis_box(lo: &RatVec, hi: &RatVec) -> Result<Self> {
        let n = lo.dim();
        let mut hs = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut e = RatVec::zeros(n);
            e[i] = Rat::one();
            hs.push(HalfSpace::new(e.clone(), hi[i].clone())?);
            hs.push(HalfSpace::new(-&e, -&lo[i])?);
        }
        Self::from_halfspaces_capped(hs, n.max(DEFAULT_DIMENSION_CAP))
    }

    /// Convex hull of `n + 1` affinely independent points.
    pub fn simplex(points: &[RatVec]) -> Result<Self> {
        let n = points.len().checked_sub(1).ok_or(Error::LowerDimensional)?;
        if points.iter().any(|p| p.dim() != n) {
            return Err(Error::Dimension("simplex needs n + 1 points in dimension n".into()));
        }
        let mut hs = Vec::with_capacity(n + 1);
        for skip in 0..=n {
            let face: Vec<&RatVec> = points.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, p)| p).collect();
            let normal = hyperplane_normal(&face).ok_or(Error::LowerDimensional)?;
            let b = normal.dot(face[0]);
            // Orient so the skipped vertex is inside.
            if normal.dot(&points[skip]) > b {
                hs.push(HalfSpace::new(-&normal, -b)?);
            } else {
                hs.push(HalfSpace::new(normal, b)?);
            }
        }
        Self::from_halfspaces_capped(hs, n.max(DEFAULT_DIMENSION_CAP))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    /// Vertex indices on facet `i`.
    pub fn facet_vertices(&self, i: usize) -> Vec<usize> {
        self.incidence[i].ones().collect()
    }

    pub fn contains(&self, x: &RatVec) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    /// Strictly inside every facet.
    pub fn interior_contains(&self, x: &RatVec) -> bool {
        self.halfspaces.iter().all(|h| h.slack(x).is_positive())
    }

    /// The intersection, or `None` when it has empty interior.
    pub fn intersect(&self, other: &Polytope) -> Option<Polytope> {
        assert_eq!(self.n, other.n, "intersecting polytopes of different dimension");
        let hs = self.halfspaces.iter().chain(&other.halfspaces).cloned().collect();
        Self::from_halfspaces_capped(hs, self.n).ok()
    }

    pub fn translate(&self, s: &RatVec) -> Polytope {
        let mut halfspaces: Vec<HalfSpace> = self.halfspaces.iter().map(|h| h.translate(s)).collect();
        let vertices: Vec<RatVec> = self.vertices.iter().map(|v| v + s).collect();
        // Translation preserves both orders, but re-sort for safety of the canonical form.
        let mut order: Vec<usize> = (0..halfspaces.len()).collect();
        order.sort_by(|&a, &b| halfspaces[a].cmp(&halfspaces[b]));
        let incidence = order.iter().map(|&i| self.incidence[i].clone()).collect();
        halfspaces = order.iter().map(|&i| halfspaces[i].clone()).collect();
        Polytope::assemble(self.n, halfspaces, vertices, incidence)
    }

    /// Image under `x ↦ k·x` for `k > 0`.
    pub fn scale(&self, k: &Rat) -> Polytope {
        assert!(k.is_positive(), "scale factor must be positive");
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| HalfSpace { functional: h.functional.clone(), offset: &h.offset * k })
            .collect();
        let vertices = self.vertices.iter().map(|v| v.scale(k)).collect();
        Polytope::assemble(self.n, halfspaces, vertices, self.incidence.clone())
    }

    pub fn scale_half(&self) -> Polytope {
        self.scale(&Rat::new(1, 2))
    }

    /// Point reflection `x ↦ −x`.
    pub fn negate(&self) -> Polytope {
        let hs = self
            .halfspaces
            .iter()
            .map(|h| HalfSpace { functional: -&h.functional, offset: h.offset.clone() })
            .collect();
        Self::from_halfspaces_capped(hs, self.n).expect("reflection of a polytope is a polytope")
    }

    /// Whether `x ↦ 2c − x` maps the vertex set onto itself.
    pub fn is_centrally_symmetric_about(&self, c: &RatVec) -> bool {
        let two_c = c.scale(&Rat::from_int(2));
        let mut reflected: Vec<RatVec> = self.vertices.iter().map(|v| &two_c - v).collect();
        reflected.sort();
        reflected == self.vertices
    }

    /// Average of the vertices.
    pub fn vertex_centroid(&self) -> RatVec {
        centroid(self.vertices.iter())
    }

    /// Centroid fan triangulation, computed once.
    pub fn triangulate(&self) -> &[Simplex] {
        self.simplices.get_or_init(|| self.fan_simplices().iter().cloned().map(Simplex::new).collect())
    }

    fn fan_simplices(&self) -> &[Vec<RatVec>] {
        self.fan.get_or_init(|| {
            let mut out = Vec::new();
            let all: Vec<usize> = (0..self.vertices.len()).collect();
            let mut prefix = Vec::new();
            self.fan(&all, self.n, &mut prefix, &mut out);
            out
        })
    }

    /// `|P|`, `∫x` and `∫xxᵀ`, computed once.
    pub fn raw_moments(&self) -> &RawMoments {
        self.raw.get_or_init(|| raw_moments(self.n, self.fan_simplices()))
    }

    /// Recursively cones the centroid of `face` over its facets; simplicial
    /// faces are used as they are.
    fn fan(&self, face: &[usize], dim: usize, prefix: &mut Vec<RatVec>, out: &mut Vec<Vec<RatVec>>) {
        if face.len() == dim + 1 {
            let mut s = prefix.clone();
            s.extend(face.iter().map(|&i| self.vertices[i].clone()));
            out.push(s);
            return;
        }
        let c = centroid(face.iter().map(|&i| &self.vertices[i]));
        let mut seen: Vec<Vec<usize>> = Vec::new();
        for bits in &self.incidence {
            let sub: Vec<usize> = face.iter().copied().filter(|&i| bits.contains(i)).collect();
            if sub.len() < dim || sub.len() == face.len() || seen.contains(&sub) {
                continue;
            }
            let pts: Vec<&RatVec> = sub.iter().map(|&i| &self.vertices[i]).collect();
            if affine_dim(&pts) == Some(dim - 1) {
                seen.push(sub);
            }
        }
        prefix.push(c);
        for sub in &seen {
            self.fan(sub, dim - 1, prefix, out);
        }
        prefix.pop();
    }

    pub fn volume(&self) -> Rat {
        self.raw_moments().volume.clone()
    }

    /// `∫_P Q_G(x − c) dx`.
    pub fn second_moment(&self, gram: &RatMat, c: &RatVec) -> Rat {
        self.raw_moments().second_about(gram, c)
    }

    /// `∫_P x dx`.
    pub fn first_moment(&self) -> RatVec {
        self.raw_moments().first.clone()
    }

    /// Centre of mass.
    pub fn mass_centroid(&self) -> RatVec {
        self.first_moment().scale(&self.volume().recip())
    }

    pub fn moments(&self, gram: &RatMat, center: &RatVec) -> MomentData {
        MomentData { volume: self.volume(), second_moment: self.second_moment(gram, center), center: center.clone() }
    }

    /// Decides whether the polytope is a `G`-rectangular box centred at the origin.
    pub fn is_rectangular_box(&self, gram: &RatMat) -> Result<BoxVerdict> {
        let origin = RatVec::zeros(self.n);
        if !self.is_centrally_symmetric_about(&origin) {
            return Err(Error::NotCentrallySymmetric(format!("{origin:?}")));
        }
        if self.halfspaces.len() != 2 * self.n {
            return Ok(BoxVerdict::NotBox {
                reason: format!("{} facets, expected {}", self.halfspaces.len(), 2 * self.n),
            });
        }
        let ginv = inverse(gram)?;
        // Representative of each ± pair: the one whose leading entry is +1.
        let mut reps: Vec<&HalfSpace> = Vec::new();
        for h in &self.halfspaces {
            let lead = h.functional.iter().find(|x| !x.is_zero()).expect("nonzero");
            if lead.is_positive() {
                let opposite = HalfSpace { functional: -&h.functional, offset: h.offset.clone() }.canonical();
                if !self.halfspaces.contains(&opposite) {
                    return Ok(BoxVerdict::NotBox { reason: format!("facet {h:?} has no opposite facet") });
                }
                reps.push(h);
            }
        }
        if reps.len() != self.n {
            return Ok(BoxVerdict::NotBox { reason: "facets do not pair up".into() });
        }
        let lead_index = |h: &HalfSpace| h.functional.iter().position(|x| !x.is_zero()).expect("nonzero");
        reps.sort_by(|a, b| lead_index(a).cmp(&lead_index(b)).then_with(|| a.cmp(b)));
        for i in 0..reps.len() {
            for j in 0..i {
                let ip = ginv.bilinear(&reps[i].functional, &reps[j].functional);
                if !ip.is_zero() {
                    return Ok(BoxVerdict::NotBox {
                        reason: format!(
                            "facet normals {:?} and {:?} are not orthogonal",
                            reps[j].functional, reps[i].functional
                        ),
                    });
                }
            }
        }
        let axes: Vec<RatVec> = reps.iter().map(|h| ginv.mul_vec(&h.functional)).collect();
        let semi_axes_sq = reps.iter().map(|h| &h.offset * &h.offset / ginv.quad(&h.functional)).collect();
        Ok(BoxVerdict::Box { axes, semi_axes_sq })
    }

    /// JSON-friendly representation.
    pub fn to_dump(&self) -> PolytopeDump {
        PolytopeDump { halfspaces: self.halfspaces.clone(), vertices: self.vertices.clone() }
    }

    /// Rebuilds a polytope from its halfspaces, checking the listed vertices agree.
    pub fn from_dump(dump: &PolytopeDump) -> Result<Self> {
        let n = dump.halfspaces.first().map(HalfSpace::dim).unwrap_or(0);
        let p = Self::from_halfspaces_capped(dump.halfspaces.clone(), n.max(DEFAULT_DIMENSION_CAP))?;
        let mut v = dump.vertices.clone();
        v.sort();
        if !v.is_empty() && v != p.vertices {
            return Err(Error::Parse("dumped vertices disagree with the halfspaces".into()));
        }
        Ok(p)
    }
}

/// Outcome of [`Polytope::is_rectangular_box`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoxVerdict {
    Box {
        /// Axis directions `G⁻¹ℓ`, one per opposite facet pair.
        axes: Vec<RatVec>,
        /// Squared `G`-lengths of the semi-axes, in the same order.
        semi_axes_sq: Vec<Rat>,
    },
    NotBox {
        reason: String,
    },
}

impl BoxVerdict {
    pub fn is_box(&self) -> bool {
        matches!(self, BoxVerdict::Box { .. })
    }
}

/// Polytope file format: `{"halfspaces": [{"l": [...], "b": "p/q"}], "vertices": [[...]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeDump {
    pub halfspaces: Vec<HalfSpace>,
    pub vertices: Vec<RatVec>,
}

fn centroid<'a>(points: impl Iterator<Item = &'a RatVec>) -> RatVec {
    let mut count = 0i64;
    let mut sum: Option<RatVec> = None;
    for p in points {
        count += 1;
        sum = Some(match sum {
            None => p.clone(),
            Some(s) => &s + p,
        });
    }
    sum.expect("centroid of an empty set").scale(&Rat::new(1, count))
}

/// Normal of the hyperplane through `n` affinely independent points in ℝⁿ.
fn hyperplane_normal(points: &[&RatVec]) -> Option<RatVec> {
    let n = points[0].dim();
    let rows: Vec<RatVec> = points[1..].iter().map(|p| *p - points[0]).collect();
    if rank(&rows) != n - 1 {
        return None;
    }
    // Cofactor expansion: normal_i = (−1)^i det(rows without column i).
    let normal: RatVec = (0..n)
        .map(|i| {
            if n == 1 {
                return Rat::one();
            }
            let minor: Vec<RatVec> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect())
                .collect();
            let d = det_rows(&minor);
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    Some(normal)
}

struct Ray {
    v: RatVec,
    zero: FixedBitSet,
}

/// Scales a nonzero ray so its first nonzero entry has absolute value 1.
fn normalize_ray(v: RatVec) -> RatVec {
    let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero ray").abs();
    v.scale(&lead.recip())
}

/// Vertices of `{x : ℓ_k·x ≤ b_k}` by the double-description method.
fn double_description(n: usize, hs: &[HalfSpace]) -> Result<Vec<RatVec>> {
    let d = n + 1;
    let mut rows: Vec<RatVec> = Vec::with_capacity(hs.len() + 1);
    let mut lambda = RatVec::zeros(d);
    lambda[0] = Rat::one();
    rows.push(lambda);
    for h in hs {
        let mut r = Vec::with_capacity(d);
        r.push(h.offset.clone());
        r.extend(h.functional.iter().map(|x| -x));
        rows.push(RatVec::new(r));
    }

    // Greedy choice of d independent rows for the starting simplicial cone.
    let mut basis: Vec<usize> = Vec::with_capacity(d);
    let mut basis_rows: Vec<RatVec> = Vec::with_capacity(d);
    for (i, r) in rows.iter().enumerate() {
        basis_rows.push(r.clone());
        if rank(&basis_rows) == basis_rows.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        } else {
            basis_rows.pop();
        }
    }
    if basis.len() < d {
        return Err(Error::Unbounded);
    }
    let a0 = RatMat::from_rows(basis_rows.iter().map(|r| r.as_slice().to_vec()).collect())?;
    let inv = inverse(&a0)?;
    let m = rows.len();
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let v: RatVec = (0..d).map(|i| inv[(i, j)].clone()).collect();
            let mut zero = FixedBitSet::with_capacity(m);
            for (k, &bi) in basis.iter().enumerate() {
                if k != j {
                    zero.insert(bi);
                }
            }
            Ray { v: normalize_ray(v), zero }
        })
        .collect();

    for (k, row) in rows.iter().enumerate() {
        if basis.contains(&k) {
            continue;
        }
        let vals: Vec<Rat> = rays.iter().map(|r| row.dot(&r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, r) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    r.zero.insert(k);
                }
            }
            continue;
        }
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].zero.clone();
                common.intersect_with(&rays[q].zero);
                if common.count_ones(..) + 2 < d {
                    continue;
                }
                let adjacent = rays.iter().enumerate().all(|(i, r)| i == p || i == q || !common.is_subset(&r.zero));
                if !adjacent {
                    continue;
                }
                // a·(s_p q − s_q p) = 0 with both coefficients positive.
                let v = &rays[q].v.scale(&vals[p]) - &rays[p].v.scale(&vals[q]);
                common.insert(k);
                fresh.push(Ray { v: normalize_ray(v), zero: common });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.zero.insert(k);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }

    if rays.is_empty() {
        return Err(Error::LowerDimensional);
    }
    let mut vertices = Vec::with_capacity(rays.len());
    for r in rays {
        if !r.v[0].is_positive() {
            return Err(Error::Unbounded);
        }
        // normalize_ray already made λ = 1.
        vertices.push(RatVec::new(r.v.into_inner().into_iter().skip(1).collect()));
    }
    Ok(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    fn rv(v: &[(i64, i64)]) -> RatVec {
        v.iter().map(|&(p, q)| r(p, q)).collect()
    }

    fn cube(n: usize, half: Rat) -> Polytope {
        Polytope::axis_box(&RatVec::new(vec![-&half; n]), &RatVec::new(vec![half; n])).unwrap()
    }

    fn hs(l: &[i64], b: Rat) -> HalfSpace {
        HalfSpace::new(RatVec::from_ints(l), b).unwrap()
    }

    fn hex_gram() -> RatMat {
        RatMat::from_fracs(&[&[(1, 1), (1, 2)], &[(1, 2), (1, 1)]]).unwrap()
    }

    /// Bisector halfspaces ⟨x, v⟩_G ≤ Q_G(v)/2 for the six minimal vectors of A₂.
    fn hexagon() -> Polytope {
        let g = hex_gram();
        let vs: [[i64; 2]; 6] = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, -1], [-1, 1]];
        let h = vs
            .iter()
            .map(|v| {
                let v = RatVec::from_ints(v);
                HalfSpace::new(g.mul_vec(&v), g.quad(&v) / Rat::from_int(2)).unwrap()
            })
            .collect();
        Polytope::from_halfspaces(h).unwrap()
    }

    /// Brute-force vertex oracle: solve every n-subset of halfspaces.
    fn brute_vertices(n: usize, h: &[HalfSpace]) -> Vec<RatVec> {
        let mut out = Vec::new();
        let m = h.len();
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            let a = RatMat::from_rows(idx.iter().map(|&i| h[i].functional.as_slice().to_vec()).collect()).unwrap();
            let b: RatVec = idx.iter().map(|&i| h[i].offset.clone()).collect();
            if let Ok(x) = crate::exactnum::solve(&a, &b) {
                if h.iter().all(|hh| hh.contains(&x)) && !out.contains(&x) {
                    out.push(x);
                }
            }
            // next combination
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

    #[test]
    fn square_from_halfspaces() {
        let p = cube(2, r(1, 2));
        assert_eq!(
            p.vertices(),
            &[rv(&[(-1, 2), (-1, 2)]), rv(&[(-1, 2), (1, 2)]), rv(&[(1, 2), (-1, 2)]), rv(&[(1, 2), (1, 2)])]
        );
        assert_eq!(p.halfspaces().len(), 4);
        for i in 0..4 {
            assert_eq!(p.facet_vertices(i).len(), 2);
        }
    }

    #[test]
    fn hexagon_matches_brute_force() {
        let p = hexagon();
        assert_eq!(p.vertices().len(), 6);
        assert_eq!(p.halfspaces().len(), 6);
        assert_eq!(p.vertices(), brute_vertices(2, p.halfspaces()).as_slice());
    }

    #[test]
    fn redundant_halfspaces_are_dropped() {
        let mut h = cube(2, r(1, 2)).halfspaces().to_vec();
        h.push(hs(&[1, 1], r(5, 1)));
        h.push(hs(&[2, 0], r(1, 1))); // duplicate of x ≤ 1/2
        let p = Polytope::from_halfspaces(h).unwrap();
        assert_eq!(p, cube(2, r(1, 2)));
    }

    #[test]
    fn bad_systems() {
        let empty = vec![hs(&[1], Rat::zero()), hs(&[-1], r(-1, 1))];
        assert!(matches!(Polytope::from_halfspaces(empty), Err(Error::LowerDimensional)));
        let flat =
            vec![hs(&[1, 0], Rat::zero()), hs(&[-1, 0], Rat::zero()), hs(&[0, 1], r(1, 1)), hs(&[0, -1], r(1, 1))];
        assert!(matches!(Polytope::from_halfspaces(flat), Err(Error::LowerDimensional)));
        let open = vec![hs(&[1, 0], r(1, 1)), hs(&[-1, 0], r(1, 1)), hs(&[0, 1], r(1, 1))];
        assert!(matches!(Polytope::from_halfspaces(open), Err(Error::Unbounded)));
        let strip = vec![hs(&[1, 0], r(1, 1)), hs(&[-1, 0], r(1, 1))];
        assert!(matches!(Polytope::from_halfspaces(strip), Err(Error::Unbounded)));
        let big: Vec<HalfSpace> = cube(6, r(1, 2)).halfspaces().to_vec();
        assert!(matches!(Polytope::from_halfspaces(big), Err(Error::DimensionCapExceeded { n: 6, cap: 5 })));
    }

    #[test]
    fn intersect_examples() {
        let seg = cube(1, r(1, 2));
        let shifted = seg.translate(&rv(&[(1, 2)]));
        let q = seg.intersect(&shifted).unwrap();
        assert_eq!(q.vertices(), &[rv(&[(0, 1)]), rv(&[(1, 2)])]);
        assert_eq!(seg.intersect(&seg).unwrap(), seg);
        assert!(seg.intersect(&seg.translate(&rv(&[(1, 1)]))).is_none());
    }

    #[test]
    fn translate_and_scale() {
        let sq = cube(2, r(1, 2));
        assert_eq!(sq.translate(&RatVec::zeros(2)), sq);
        let moved = sq.translate(&RatVec::from_ints(&[1, 0]));
        assert_eq!(
            moved.vertices(),
            &[rv(&[(1, 2), (-1, 2)]), rv(&[(1, 2), (1, 2)]), rv(&[(3, 2), (-1, 2)]), rv(&[(3, 2), (1, 2)])]
        );
        assert_eq!(moved.translate(&RatVec::from_ints(&[-1, 0])), sq);
        let half = sq.scale_half();
        assert_eq!(half, cube(2, r(1, 4)));
        assert_eq!(half.volume(), r(1, 4));
        assert_eq!(half.vertices().iter().map(|v| v.scale(&r(2, 1))).collect::<Vec<_>>(), sq.vertices());
    }

    #[test]
    fn triangulation_counts() {
        assert_eq!(cube(2, r(1, 2)).triangulate().len(), 4);
        let tri =
            Polytope::simplex(&[RatVec::from_ints(&[0, 0]), RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[0, 1])])
                .unwrap();
        assert_eq!(tri.triangulate().len(), 1);
        assert_eq!(tri.triangulate()[0].vertices.len(), 3);
        assert_eq!(hexagon().triangulate().len(), 6);
        assert!(cube(3, r(1, 2)).triangulate().iter().all(|s| s.volume.is_positive()));
    }

    #[test]
    fn volume_examples() {
        assert_eq!(cube(3, r(1, 2)).volume(), r(1, 1));
        assert_eq!(hexagon().volume(), r(1, 1));
        let tri =
            Polytope::simplex(&[RatVec::from_ints(&[0, 0]), RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[0, 1])])
                .unwrap();
        assert_eq!(tri.volume(), r(1, 2));
    }

    #[test]
    fn second_moment_examples() {
        let id2 = RatMat::identity(2);
        assert_eq!(cube(2, r(1, 2)).second_moment(&id2, &RatVec::zeros(2)), r(1, 6));
        assert_eq!(cube(1, r(1, 2)).second_moment(&RatMat::identity(1), &RatVec::zeros(1)), r(1, 12));
        let tri =
            Polytope::simplex(&[RatVec::from_ints(&[0, 0]), RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[0, 1])])
                .unwrap();
        // ∫_0^1 ∫_0^{1−x} (x² + y²) dy dx = 2·∫_0^1 x²(1−x) dx = 2·(1/3 − 1/4) = 1/6.
        assert_eq!(tri.second_moment(&id2, &RatVec::zeros(2)), r(1, 6));
        // Coordinate-measure moment of the A₂ hexagon.
        assert_eq!(hexagon().second_moment(&hex_gram(), &RatVec::zeros(2)), r(5, 36));
    }

    #[test]
    fn box_recognition() {
        let id2 = RatMat::identity(2);
        match cube(2, r(1, 2)).is_rectangular_box(&id2).unwrap() {
            BoxVerdict::Box { semi_axes_sq, .. } => assert_eq!(semi_axes_sq, vec![r(1, 4), r(1, 4)]),
            v => panic!("{v:?}"),
        }
        assert!(!hexagon().is_rectangular_box(&hex_gram()).unwrap().is_box());
        let tri =
            Polytope::simplex(&[RatVec::from_ints(&[0, 0]), RatVec::from_ints(&[1, 0]), RatVec::from_ints(&[0, 1])])
                .unwrap();
        assert!(matches!(tri.is_rectangular_box(&id2), Err(Error::NotCentrallySymmetric(_))));
        // A square is not a box under a skew metric.
        assert!(!cube(2, r(1, 2)).is_rectangular_box(&hex_gram()).unwrap().is_box());
    }

    #[test]
    fn dump_round_trip() {
        let p = hexagon();
        let json = serde_json::to_string(&p.to_dump()).unwrap();
        assert!(json.starts_with(r#"{"halfspaces":[{"l":["#));
        let dump: PolytopeDump = serde_json::from_str(&json).unwrap();
        assert_eq!(Polytope::from_dump(&dump).unwrap(), p);
    }
}
