//! Exact rational scalars, vectors and dense matrices.
//!
//! Everything here is canonical by construction: a [`Rat`] is always reduced
//! with a positive denominator, so structural equality is numeric equality.

// Elimination loops read two rows at once; index loops are clearer there.
#![allow(clippy::needless_range_loop)]

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }

    /// Builds `num/den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rat(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rat(self.0.recip())
    }

    pub fn floor(&self) -> Self {
        Rat(self.0.floor())
    }

    pub fn ceil(&self) -> Self {
        Rat(self.0.ceil())
    }

    /// Nearest integer, ties rounded away from zero.
    pub fn round(&self) -> Self {
        Rat(self.0.round())
    }

    /// Integer value as `i64`, if this is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with exactly `digits` fractional digits, rounded half away from zero.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled = Rat(self.0.clone() * BigRational::from_integer(scale.clone())).round();
        let n = scaled.numer().clone();
        let neg = n.is_negative();
        let (int_part, frac_part) = n.abs().div_rem(&scale);
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push_str(&int_part.to_string());
        if digits > 0 {
            s.push('.');
            s.push_str(&format!("{:0>width$}", frac_part.to_string(), width = digits));
        }
        s
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `p`, `p/q`, and finite decimals such as `-0.125`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(Rat(BigRational::new(p, q)));
        }
        if let Some((ip, fp)) = s.split_once('.') {
            if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let neg = ip.starts_with('-');
            let ip = if ip.is_empty() || ip == "-" || ip == "+" {
                BigInt::zero()
            } else {
                ip.parse::<BigInt>().map_err(|_| bad())?.abs()
            };
            let scale = num_traits::pow(BigInt::from(10), fp.len());
            let fp: BigInt = fp.parse().map_err(|_| bad())?;
            let mag = BigRational::new(ip * &scale + fp, scale);
            return Ok(Rat(if neg { -mag } else { mag }));
        }
        let p: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rat(BigRational::from_integer(p)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        // Plain JSON integers are accepted too, so hand-written inputs like
        // [[1,0],[0,1]] work alongside the canonical string form.
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(v) => Ok(Rat::from_int(v)),
        }
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Self {
        Rat::from_int(v)
    }
}

impl From<BigInt> for Rat {
    fn from(v: BigInt) -> Self {
        Rat(BigRational::from_integer(v))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat(self.0.$m(&rhs.0))
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat((&self.0).$m(rhs.0))
            }
        }
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rat> for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

/// Dense rational vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatVec(Vec<Rat>);

impl RatVec {
    pub fn new(v: Vec<Rat>) -> Self {
        RatVec(v)
    }

    pub fn zeros(n: usize) -> Self {
        RatVec(vec![Rat::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RatVec(v.iter().map(|&x| Rat::from_int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Rat] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Rat> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    /// Euclidean (coordinate) dot product.
    pub fn dot(&self, other: &RatVec) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: &Rat) -> RatVec {
        RatVec(self.0.iter().map(|x| x * s).collect())
    }

    pub fn half(&self) -> RatVec {
        self.scale(&Rat::new(1, 2))
    }

    /// Integer coordinates, if every entry is an integer fitting `i64`.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0.iter().map(Rat::to_i64).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Rat::to_f64).collect()
    }
}

impl fmt::Debug for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Index<usize> for RatVec {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl IndexMut<usize> for RatVec {
    fn index_mut(&mut self, i: usize) -> &mut Rat {
        &mut self.0[i]
    }
}

impl FromIterator<Rat> for RatVec {
    fn from_iter<I: IntoIterator<Item = Rat>>(iter: I) -> Self {
        RatVec(iter.into_iter().collect())
    }
}

impl Add<&RatVec> for &RatVec {
    type Output = RatVec;
    fn add(self, rhs: &RatVec) -> RatVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect()
    }
}

impl Sub<&RatVec> for &RatVec {
    type Output = RatVec;
    fn sub(self, rhs: &RatVec) -> RatVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect()
    }
}

impl Neg for &RatVec {
    type Output = RatVec;
    fn neg(self) -> RatVec {
        self.0.iter().map(|a| -a).collect()
    }
}

/// Dense square rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Rat>>", into = "Vec<Vec<Rat>>")]
pub struct RatMat {
    n: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(n: usize) -> Self {
        RatMat { n, data: vec![Rat::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn diag(entries: &[Rat]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `rows.len()`.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Dimension("matrix must be at least 1x1".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("matrix is not square ({n} rows)")));
        }
        Ok(RatMat { n, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from `(num, den)` pairs.
    pub fn from_fracs(rows: &[&[(i64, i64)]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&(p, q)| Rat::new(p, q)).collect()).collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rat::from_int(x)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul_vec(&self, v: &RatVec) -> RatVec {
        debug_assert_eq!(self.n, v.dim());
        (0..self.n).map(|i| self.row(i).iter().zip(v.iter()).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn mul_mat(&self, other: &RatMat) -> RatMat {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n).map(|k| &self[(i, k)] * &other[(k, j)]).sum();
            }
        }
        out
    }

    /// Bilinear form `xᵀ M y`.
    pub fn bilinear(&self, x: &RatVec, y: &RatVec) -> Rat {
        x.dot(&self.mul_vec(y))
    }

    /// Quadratic form `xᵀ M x`.
    pub fn quad(&self, x: &RatVec) -> Rat {
        self.bilinear(x, x)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).iter().map(Rat::to_f64).collect()).collect()
    }
}

impl Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for RatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.n).map(|i| RatVec::new(self.row(i).to_vec()))).finish()
    }
}

impl TryFrom<Vec<Vec<Rat>>> for RatMat {
    type Error = Error;
    fn try_from(rows: Vec<Vec<Rat>>) -> Result<Self> {
        RatMat::from_rows(rows)
    }
}

impl From<RatMat> for Vec<Vec<Rat>> {
    fn from(m: RatMat) -> Self {
        m.rows()
    }
}

/// Result of a square-root-free Cholesky factorisation `G = L·D·Lᵀ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ldl {
    /// Unit lower-triangular factor.
    pub l: RatMat,
    /// Diagonal of `D`.
    pub d: Vec<Rat>,
}

impl Ldl {
    pub fn d_matrix(&self) -> RatMat {
        RatMat::diag(&self.d)
    }

    /// Reassembles `L·D·Lᵀ`.
    pub fn reconstruct(&self) -> RatMat {
        let n = self.l.dim();
        let mut g = RatMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = (0..=i.min(j)).map(|k| &self.l[(i, k)] * &self.d[k] * &self.l[(j, k)]).sum();
            }
        }
        g
    }
}

/// Factors a symmetric positive-definite matrix as `L·D·Lᵀ`.
pub fn ldl_decompose(g: &RatMat) -> Result<Ldl> {
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = g.dim();
    let mut l = RatMat::identity(n);
    let mut d = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = g[(j, j)].clone();
        for k in 0..j {
            dj -= &(&l[(j, k)] * &l[(j, k)] * &d[k]);
        }
        if !dj.is_positive() {
            return Err(Error::NotPositiveDefinite { pivot: j, value: dj });
        }
        for i in j + 1..n {
            let mut s = g[(i, j)].clone();
            for k in 0..j {
                s -= &(&l[(i, k)] * &l[(j, k)] * &d[k]);
            }
            l[(i, j)] = s / &dj;
        }
        d.push(dj);
    }
    Ok(Ldl { l, d })
}

/// Exact determinant by fraction-based Gaussian elimination with row pivoting.
pub fn det(m: &RatMat) -> Rat {
    let n = m.dim();
    let mut a = m.rows();
    let mut sign = false;
    let mut acc = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            a.swap(p, col);
            sign = !sign;
        }
        let pivot = a[col][col].clone();
        acc = acc * &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] -= &delta;
            }
        }
    }
    if sign {
        -acc
    } else {
        acc
    }
}

/// Determinant of the matrix whose rows are `rows` (each of length `rows.len()`).
pub fn det_rows(rows: &[RatVec]) -> Rat {
    let m = RatMat::from_rows(rows.iter().map(|r| r.as_slice().to_vec()).collect())
        .expect("det_rows requires a square, non-empty row set");
    det(&m)
}

/// Solves `A·x = b` exactly.
pub fn solve(a: &RatMat, b: &RatVec) -> Result<RatVec> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::Dimension(format!("rhs has length {}, expected {n}", b.dim())));
    }
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !aug[r][col].is_zero()).ok_or(Error::Singular)?;
        aug.swap(p, col);
        let inv = aug[col][col].recip();
        for c in col..=n {
            aug[col][c] = &aug[col][c] * &inv;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let f = aug[r][col].clone();
            for c in col..=n {
                let delta = &f * &aug[col][c];
                aug[r][c] -= &delta;
            }
        }
    }
    Ok(aug.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
}

/// Exact inverse of an invertible matrix.
pub fn inverse(a: &RatMat) -> Result<RatMat> {
    let n = a.dim();
    let mut inv = RatMat::zeros(n);
    for j in 0..n {
        let mut e = RatVec::zeros(n);
        e[j] = Rat::one();
        let col = solve(a, &e)?;
        for i in 0..n {
            inv[(i, j)] = col[i].clone();
        }
    }
    Ok(inv)
}

/// Rank of a list of vectors (rows), all of the same dimension.
pub fn rank(rows: &[RatVec]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let cols = first.dim();
    let mut a: Vec<Vec<Rat>> = rows.iter().map(|r| r.as_slice().to_vec()).collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(p, r);
        let pivot = a[r][c].clone();
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for k in c..cols {
                let delta = &f * &a[r][k];
                a[i][k] -= &delta;
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Affine dimension of a point set (−1 is reported as `None` for the empty set).
pub fn affine_dim(points: &[&RatVec]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<RatVec> = rest.iter().map(|p| *p - *first).collect();
    Some(rank(&diffs))
}

impl PartialOrd<i64> for Rat {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Rat::from_int(*other)))
    }
}

impl PartialEq<i64> for Rat {
    fn eq(&self, other: &i64) -> bool {
        *self == Rat::from_int(*other)
    }
}
