//! Compact Lie groups with exact-structure kernels.
//!
//! Every group carries a fixed basis of its Lie algebra; all coordinates in the
//! crate (charges, cochains, signals) refer to it. The negative trace form is
//! scaled so that each basis is orthonormal.
//!
//! | group      | algebra basis                         | inner product        |
//! |------------|---------------------------------------|----------------------|
//! | `U1`       | `i`  (`exp(θ) = e^{iθ}`)               | `uv`                 |
//! | `SU2`      | `iσ₁/2, iσ₂/2, iσ₃/2`                  | `−2 tr(UV)`          |
//! | `SO3`      | `L₁, L₂, L₃` with `L_a b = e_a × b`    | `−½ tr(UV)`          |
//! | `Torus(n)` | `i` in each factor                    | Euclidean            |
//! | `U2`       | `iI/2` then the `SU2` basis           | `−2 tr(UV)`          |
//! | `Product`  | concatenation of the factors          | orthogonal sum       |
//!
//! `SO3` elements are stored as rotation matrices; the logarithm goes through
//! the SU(2) double cover (see [`su2`]).

pub mod su2;

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Quaternion, Rotation3, Vector3};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, block_diag, cross_matrix, LinearMap};

/// Cut-locus margin for circle-valued and SO(3) logarithms: the angle must not
/// exceed `π − CUT_MARGIN`.
pub const CUT_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    U1,
    SU2,
    SO3,
    Torus(usize),
    U2,
    Product(Vec<GroupSpec>),
}

impl GroupSpec {
    /// Product of the given factors, flattening nested products.
    pub fn product(factors: Vec<GroupSpec>) -> GroupSpec {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                GroupSpec::Product(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        GroupSpec::Product(flat)
    }

    pub fn dim(&self) -> usize {
        match self {
            GroupSpec::U1 => 1,
            GroupSpec::SU2 | GroupSpec::SO3 => 3,
            GroupSpec::Torus(n) => *n,
            GroupSpec::U2 => 4,
            GroupSpec::Product(fs) => fs.iter().map(GroupSpec::dim).sum(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupSpec::U1 | GroupSpec::Torus(_) => true,
            GroupSpec::SU2 | GroupSpec::SO3 | GroupSpec::U2 => false,
            GroupSpec::Product(fs) => fs.iter().all(GroupSpec::is_abelian),
        }
    }

    /// Basis of the center 𝔥 of the Lie algebra.
    pub fn center_basis(&self) -> Vec<AlgebraElement> {
        let dim = self.dim();
        let idx: Vec<usize> = self.center_indices();
        idx.into_iter()
            .map(|i| {
                let mut c = DVector::zeros(dim);
                c[i] = 1.0;
                AlgebraElement::new(self.clone(), c)
            })
            .collect()
    }

    fn center_indices(&self) -> Vec<usize> {
        match self {
            GroupSpec::U1 => vec![0],
            GroupSpec::SU2 | GroupSpec::SO3 => vec![],
            GroupSpec::Torus(n) => (0..*n).collect(),
            GroupSpec::U2 => vec![0],
            GroupSpec::Product(fs) => {
                let mut out = Vec::new();
                let mut off = 0;
                for f in fs {
                    out.extend(f.center_indices().into_iter().map(|i| i + off));
                    off += f.dim();
                }
                out
            }
        }
    }

    fn factor_offsets(fs: &[GroupSpec]) -> Vec<usize> {
        let mut off = 0;
        fs.iter()
            .map(|f| {
                let o = off;
                off += f.dim();
                o
            })
            .collect()
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupSpec::U1 => GroupElement::U1(Complex64::new(1.0, 0.0)),
            GroupSpec::SU2 => GroupElement::SU2(Quaternion::identity()),
            GroupSpec::SO3 => GroupElement::SO3(Matrix3::identity()),
            GroupSpec::Torus(n) => GroupElement::Torus(vec![0.0; *n]),
            GroupSpec::U2 => GroupElement::U2(Matrix2::identity()),
            GroupSpec::Product(fs) => GroupElement::Product(fs.iter().map(|f| f.identity()).collect()),
        }
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::new(self.clone(), DVector::zeros(self.dim()))
    }

    /// Lie bracket in coordinates.
    pub fn bracket(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        ad_matrix(self, u.as_slice()) * v
    }

    /// `exp` on raw coordinates.
    pub fn exp_coords(&self, v: &[f64]) -> GroupElement {
        exp_coords(self, v)
    }

    /// Size of the defining matrix representation.
    pub fn matrix_size(&self) -> usize {
        match self {
            GroupSpec::U1 => 1,
            GroupSpec::SU2 | GroupSpec::U2 => 2,
            GroupSpec::SO3 => 3,
            GroupSpec::Torus(n) => *n,
            GroupSpec::Product(fs) => fs.iter().map(GroupSpec::matrix_size).sum(),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::U1 => write!(f, "U1"),
            GroupSpec::SU2 => write!(f, "SU2"),
            GroupSpec::SO3 => write!(f, "SO3"),
            GroupSpec::Torus(n) => write!(f, "T{n}"),
            GroupSpec::U2 => write!(f, "U2"),
            GroupSpec::Product(fs) => {
                let names: Vec<String> = fs.iter().map(ToString::to_string).collect();
                write!(f, "{}", names.join("*"))
            }
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses `U1`, `SU2`, `SO3`, `U2`, `T<n>` and `*`-separated products.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('*').map(str::trim).collect();
        if parts.len() > 1 {
            let fs = parts.into_iter().map(str::parse).collect::<Result<Vec<_>>>()?;
            return Ok(GroupSpec::product(fs));
        }
        let s = parts[0];
        match s.to_ascii_uppercase().as_str() {
            "U1" => Ok(GroupSpec::U1),
            "SU2" => Ok(GroupSpec::SU2),
            "SO3" => Ok(GroupSpec::SO3),
            "U2" => Ok(GroupSpec::U2),
            other => match other.strip_prefix('T').map(str::parse::<usize>) {
                Some(Ok(n)) if n >= 1 => Ok(GroupSpec::Torus(n)),
                _ => Err(Error::Invalid(format!("unknown group '{s}'"))),
            },
        }
    }
}

/// A vector in the Lie algebra, in the fixed basis of its group.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub spec: GroupSpec,
    pub coords: DVector<f64>,
}

impl AlgebraElement {
    pub fn new(spec: GroupSpec, coords: DVector<f64>) -> Self {
        assert_eq!(spec.dim(), coords.len(), "coordinate length must equal dim_g");
        AlgebraElement { spec, coords }
    }

    pub fn from_slice(spec: GroupSpec, coords: &[f64]) -> Result<Self> {
        if coords.len() != spec.dim() {
            return Err(Error::LengthMismatch { expected: spec.dim(), found: coords.len() });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Invalid("non-finite algebra coordinate".into()));
        }
        Ok(AlgebraElement { spec, coords: DVector::from_column_slice(coords) })
    }

    pub fn exp(&self) -> GroupElement {
        exp_coords(&self.spec, self.coords.as_slice())
    }

    /// Matrix of `ad(v)` on coordinates.
    pub fn ad(&self) -> LinearMap {
        ad_matrix(&self.spec, self.coords.as_slice())
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        AlgebraElement { spec: self.spec.clone(), coords: &self.coords * s }
    }
}

/// Ad-invariant inner product.
pub fn inner(u: &AlgebraElement, v: &AlgebraElement) -> Result<f64> {
    check_spec(&u.spec, &v.spec)?;
    Ok(u.coords.dot(&v.coords))
}

fn check_spec(expected: &GroupSpec, found: &GroupSpec) -> Result<()> {
    if expected != found {
        return Err(Error::SpecMismatch { expected: expected.clone(), found: found.clone() });
    }
    Ok(())
}

/// A point of one of the built-in compact groups.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement {
    U1(Complex64),
    SU2(Quaternion<f64>),
    SO3(Matrix3<f64>),
    /// Angles, reduced to `[0, 2π)`.
    Torus(Vec<f64>),
    U2(Matrix2<Complex64>),
    Product(Vec<GroupElement>),
}

fn wrap_angle(a: f64) -> f64 {
    a.rem_euclid(TAU)
}

/// Angle in `(−π, π]`.
fn principal_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn circle_log(angle: f64) -> Result<f64> {
    let a = principal_angle(angle);
    if a.abs() > PI - CUT_MARGIN {
        return Err(Error::CutLocus { angle: a.abs() });
    }
    Ok(a)
}

/// Gram–Schmidt on the columns of a 2×2 complex matrix.
fn reunitarize(m: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    let c0 = m.column(0).into_owned();
    let c0 = c0 / Complex64::new(c0.norm(), 0.0);
    let c1 = m.column(1).into_owned();
    let proj = c0.dotc(&c1);
    let c1 = c1 - c0 * proj;
    let c1 = c1 / Complex64::new(c1.norm(), 0.0);
    Matrix2::from_columns(&[c0, c1])
}

/// Nearest rotation (polar factor).
fn reorthonormalize(r: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = r.svd(true, true);
    let (u, v_t) = (svd.u.expect("u requested"), svd.v_t.expect("v_t requested"));
    let mut d = Matrix3::identity();
    if (u * v_t).determinant() < 0.0 {
        d[(2, 2)] = -1.0;
    }
    u * d * v_t
}

fn u2_exp(v: &[f64]) -> Matrix2<Complex64> {
    let phase = Complex64::from_polar(1.0, 0.5 * v[0]);
    su2::matrix(&su2::exp([v[1], v[2], v[3]])) * phase
}

fn u2_split(m: &Matrix2<Complex64>) -> (f64, Quaternion<f64>) {
    let theta = m.determinant().arg();
    let s = m * Complex64::from_polar(1.0, -0.5 * theta);
    (theta, su2::from_matrix(&s))
}

fn u2_log(m: &Matrix2<Complex64>) -> Result<Vec<f64>> {
    let (theta, q) = u2_split(m);
    // the two ways of writing m = e^{iθ/2} S; keep the shorter logarithm
    let other = if theta > 0.0 { theta - TAU } else { theta + TAU };
    let cands = [(theta, q), (other, -q)];
    let mut best: Option<Vec<f64>> = None;
    let mut last_err = None;
    for (t, s) in cands {
        match su2::log(&s) {
            Ok(v) => {
                let c = vec![t, v[0], v[1], v[2]];
                let n: f64 = c.iter().map(|x| x * x).sum();
                if best.as_ref().is_none_or(|b| n < b.iter().map(|x| x * x).sum()) {
                    best = Some(c);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.expect("at least one candidate failed"))
}

fn exp_coords(spec: &GroupSpec, v: &[f64]) -> GroupElement {
    match spec {
        GroupSpec::U1 => GroupElement::U1(Complex64::from_polar(1.0, v[0])),
        GroupSpec::SU2 => GroupElement::SU2(su2::exp([v[0], v[1], v[2]])),
        GroupSpec::SO3 => {
            GroupElement::SO3(Rotation3::new(Vector3::new(v[0], v[1], v[2])).into_inner())
        }
        GroupSpec::Torus(_) => GroupElement::Torus(v.iter().map(|&a| wrap_angle(a)).collect()),
        GroupSpec::U2 => GroupElement::U2(u2_exp(v)),
        GroupSpec::Product(fs) => {
            let offs = GroupSpec::factor_offsets(fs);
            GroupElement::Product(
                fs.iter()
                    .zip(offs)
                    .map(|(f, o)| exp_coords(f, &v[o..o + f.dim()]))
                    .collect(),
            )
        }
    }
}

fn ad_matrix(spec: &GroupSpec, v: &[f64]) -> LinearMap {
    match spec {
        GroupSpec::U1 => DMatrix::zeros(1, 1),
        GroupSpec::Torus(n) => DMatrix::zeros(*n, *n),
        // [e_a, e_b] = −ε_abc e_c for the iσ/2 basis
        GroupSpec::SU2 => -cross_matrix(v),
        GroupSpec::SO3 => cross_matrix(v),
        GroupSpec::U2 => block_diag(&[DMatrix::zeros(1, 1), -cross_matrix(&v[1..4])]),
        GroupSpec::Product(fs) => {
            let offs = GroupSpec::factor_offsets(fs);
            let blocks: Vec<_> =
                fs.iter().zip(offs).map(|(f, o)| ad_matrix(f, &v[o..o + f.dim()])).collect();
            block_diag(&blocks)
        }
    }
}

impl GroupElement {
    pub fn spec(&self) -> GroupSpec {
        match self {
            GroupElement::U1(_) => GroupSpec::U1,
            GroupElement::SU2(_) => GroupSpec::SU2,
            GroupElement::SO3(_) => GroupSpec::SO3,
            GroupElement::Torus(a) => GroupSpec::Torus(a.len()),
            GroupElement::U2(_) => GroupSpec::U2,
            GroupElement::Product(es) => GroupSpec::Product(es.iter().map(|e| e.spec()).collect()),
        }
    }

    /// Group product, re-projected onto the group.
    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        use GroupElement::*;
        Ok(match (self, other) {
            (U1(a), U1(b)) => {
                let z = a * b;
                U1(z / z.norm())
            }
            (SU2(a), SU2(b)) => SU2((a * b).normalize()),
            (SO3(a), SO3(b)) => SO3(reorthonormalize(&(a * b))),
            (Torus(a), Torus(b)) if a.len() == b.len() => {
                Torus(a.iter().zip(b).map(|(x, y)| wrap_angle(x + y)).collect())
            }
            (U2(a), U2(b)) => U2(reunitarize(&(a * b))),
            (Product(a), Product(b)) if a.len() == b.len() => Product(
                a.iter().zip(b).map(|(x, y)| x.mul(y)).collect::<Result<Vec<_>>>()?,
            ),
            _ => {
                return Err(Error::SpecMismatch { expected: self.spec(), found: other.spec() })
            }
        })
    }

    /// Product for elements known to share a group.
    pub(crate) fn mul_same(&self, other: &GroupElement) -> GroupElement {
        self.mul(other).expect("operands share a group")
    }

    pub fn inverse(&self) -> GroupElement {
        use GroupElement::*;
        match self {
            U1(z) => U1(z.conj()),
            SU2(q) => SU2(q.conjugate()),
            SO3(r) => SO3(r.transpose()),
            Torus(a) => Torus(a.iter().map(|x| wrap_angle(-x)).collect()),
            U2(m) => U2(m.adjoint()),
            Product(es) => Product(es.iter().map(GroupElement::inverse).collect()),
        }
    }

    /// `x g x⁻¹`.
    pub fn conjugate_by(&self, x: &GroupElement) -> Result<GroupElement> {
        x.mul(self)?.mul(&x.inverse())
    }

    /// Principal logarithm.
    pub fn log(&self) -> Result<AlgebraElement> {
        let spec = self.spec();
        let coords = self.log_coords()?;
        Ok(AlgebraElement::new(spec, DVector::from_vec(coords)))
    }

    fn log_coords(&self) -> Result<Vec<f64>> {
        use GroupElement::*;
        match self {
            U1(z) => Ok(vec![circle_log(z.arg())?]),
            SU2(q) => Ok(su2::log(q)?.to_vec()),
            SO3(r) => {
                let v = su2::log(&su2::lift(r))?;
                let angle = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                if angle > PI - CUT_MARGIN {
                    return Err(Error::CutLocus { angle });
                }
                Ok(vec![-v[0], -v[1], -v[2]])
            }
            Torus(a) => a.iter().map(|&x| circle_log(x)).collect(),
            U2(m) => u2_log(m),
            Product(es) => {
                let mut out = Vec::new();
                for e in es {
                    out.extend(e.log_coords()?);
                }
                Ok(out)
            }
        }
    }

    /// Matrix of `Ad(g)` on algebra coordinates (orthogonal).
    pub fn adjoint(&self) -> LinearMap {
        use GroupElement::*;
        match self {
            U1(_) => DMatrix::identity(1, 1),
            Torus(a) => DMatrix::identity(a.len(), a.len()),
            SU2(q) => to_dmatrix3(&su2::adjoint(q)),
            SO3(r) => to_dmatrix3(r),
            U2(m) => {
                let (_, q) = u2_split(m);
                block_diag(&[DMatrix::identity(1, 1), to_dmatrix3(&su2::adjoint(&q))])
            }
            Product(es) => block_diag(&es.iter().map(GroupElement::adjoint).collect::<Vec<_>>()),
        }
    }

    /// Defining matrix representation (block diagonal for products).
    pub fn matrix(&self) -> DMatrix<Complex64> {
        use GroupElement::*;
        let re = |x: f64| Complex64::new(x, 0.0);
        match self {
            U1(z) => DMatrix::from_element(1, 1, *z),
            SU2(q) => {
                let m = su2::matrix(q);
                DMatrix::from_fn(2, 2, |i, j| m[(i, j)])
            }
            SO3(r) => DMatrix::from_fn(3, 3, |i, j| re(r[(i, j)])),
            Torus(a) => {
                let n = a.len();
                DMatrix::from_fn(n, n, |i, j| {
                    if i == j {
                        Complex64::from_polar(1.0, a[i])
                    } else {
                        re(0.0)
                    }
                })
            }
            U2(m) => DMatrix::from_fn(2, 2, |i, j| m[(i, j)]),
            Product(es) => {
                let blocks: Vec<_> = es.iter().map(GroupElement::matrix).collect();
                let n: usize = blocks.iter().map(|b| b.nrows()).sum();
                let mut out = DMatrix::from_element(n, n, re(0.0));
                let mut off = 0;
                for b in blocks {
                    let k = b.nrows();
                    out.view_mut((off, off), (k, k)).copy_from(&b);
                    off += k;
                }
                out
            }
        }
    }

    /// Frobenius distance in the defining representation.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        let d = self.matrix() - other.matrix();
        d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Violation of the defining constraint (`|z| = 1`, `|q| = 1`, `RᵀR = I`
    /// with `det R = 1`, `U*U = I`).
    pub fn constraint_residual(&self) -> f64 {
        use GroupElement::*;
        match self {
            U1(z) => (z.norm() - 1.0).abs(),
            SU2(q) => (q.norm() - 1.0).abs(),
            SO3(r) => (r.transpose() * r - Matrix3::identity()).norm() + (r.determinant() - 1.0).abs(),
            Torus(a) => {
                if a.iter().all(|x| x.is_finite()) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            U2(m) => {
                let d = m.adjoint() * m - Matrix2::identity();
                d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
            }
            Product(es) => es.iter().map(GroupElement::constraint_residual).fold(0.0, f64::max),
        }
    }

    /// `g · exp(ξ)`: the retraction used for left-translated tangent vectors.
    pub fn retract(&self, xi: &[f64]) -> GroupElement {
        self.mul_same(&exp_coords(&self.spec(), xi))
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.distance(&self.spec().identity()) <= tol
    }
}

fn to_dmatrix3(m: &Matrix3<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(3, 3, |i, j| m[(i, j)])
}

/// Haar-distributed sample.
pub fn haar_sample<R: Rng + ?Sized>(spec: &GroupSpec, rng: &mut R) -> GroupElement {
    match spec {
        GroupSpec::U1 => GroupElement::U1(Complex64::from_polar(1.0, rng.random_range(0.0..TAU))),
        GroupSpec::SU2 => GroupElement::SU2(haar_quaternion(rng)),
        GroupSpec::SO3 => GroupElement::SO3(su2::rotation(&haar_quaternion(rng))),
        GroupSpec::Torus(n) => {
            GroupElement::Torus((0..*n).map(|_| rng.random_range(0.0..TAU)).collect())
        }
        GroupSpec::U2 => {
            let phase = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
            GroupElement::U2(su2::matrix(&haar_quaternion(rng)) * phase)
        }
        GroupSpec::Product(fs) => {
            GroupElement::Product(fs.iter().map(|f| haar_sample(f, rng)).collect())
        }
    }
}

fn haar_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion<f64> {
    loop {
        let q = Quaternion::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        );
        let n = q.norm();
        if n > 1e-12 {
            return q / n;
        }
    }
}

/// Orthonormal basis of `ker(Ad(g) − id)`, the centralizer of `g` in 𝔤.
/// `tol` is an absolute singular-value threshold.
pub fn centralizer_algebra(g: &GroupElement, tol: f64) -> Vec<AlgebraElement> {
    let spec = g.spec();
    let n = spec.dim();
    let m = g.adjoint() - DMatrix::identity(n, n);
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= tol)
        .map(|(i, _)| AlgebraElement::new(spec.clone(), v_t.row(i).transpose()))
        .collect()
}

/// `Σ_{n≥0} (−ad F)ⁿ/(n+1)!`, the right-trivialized derivative of `exp` at `F`:
/// `exp(F + εδ) = exp(F)·exp(ε·J δ + O(ε²))`.
pub fn dexp_right(spec: &GroupSpec, f: &[f64]) -> LinearMap {
    let n = spec.dim();
    let a = -ad_matrix(spec, f);
    let mut term = DMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..60 {
        term = &term * &a / (k as f64 + 1.0);
        sum += &term;
        if term.norm() < 1e-17 {
            break;
        }
    }
    sum
}

/// Numerical rank of a linear map with the crate's relative convention.
pub fn rank(map: &LinearMap, rel_tol: f64) -> usize {
    linalg::numerical_rank(map, rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const ALL: [GroupSpec; 5] =
        [GroupSpec::U1, GroupSpec::SU2, GroupSpec::SO3, GroupSpec::U2, GroupSpec::Torus(2)];

    fn specs() -> Vec<GroupSpec> {
        let mut v = ALL.to_vec();
        v.push(GroupSpec::product(vec![GroupSpec::SU2, GroupSpec::U1]));
        v
    }

    fn random_coords<R: Rng>(n: usize, radius: f64, rng: &mut R) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-radius..radius)).collect();
            if v.iter().map(|x| x * x).sum::<f64>().sqrt() < radius {
                return v;
            }
        }
    }

    #[test]
    fn dims_and_center() {
        assert_eq!(GroupSpec::U2.dim(), 4);
        assert_eq!(GroupSpec::product(vec![GroupSpec::SU2, GroupSpec::Torus(3)]).dim(), 6);
        for spec in specs() {
            for z in spec.center_basis() {
                assert!(z.ad().norm() < 1e-12, "{spec}");
            }
        }
        assert_eq!(GroupSpec::SU2.center_basis().len(), 0);
        assert_eq!(GroupSpec::U2.center_basis().len(), 1);
    }

    #[test]
    fn parse_roundtrip() {
        for spec in specs() {
            let s = spec.to_string();
            assert_eq!(s.parse::<GroupSpec>().unwrap(), spec);
        }
        assert!("SU3".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn identity_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for spec in specs() {
            let g = haar_sample(&spec, &mut rng);
            assert!(spec.identity().mul(&g).unwrap().distance(&g) < 1e-14);
        }
    }

    #[test]
    fn quaternion_product_ij_is_k() {
        let i = GroupElement::SU2(Quaternion::new(0.0, 1.0, 0.0, 0.0));
        let j = GroupElement::SU2(Quaternion::new(0.0, 0.0, 1.0, 0.0));
        let k = GroupElement::SU2(Quaternion::new(0.0, 0.0, 0.0, 1.0));
        let ij = i.mul(&j).unwrap();
        assert!(ij.distance(&k) < 1e-15);
        // independent 2×2 matrix multiplication
        let prod = i.matrix() * j.matrix();
        let d = (prod - k.matrix()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(d < 1e-15);
    }

    #[test]
    fn circle_angle_addition() {
        let a = GroupSpec::U1.exp_coords(&[PI / 3.0]);
        let b = GroupSpec::U1.exp_coords(&[PI / 6.0]);
        let c = GroupSpec::U1.exp_coords(&[PI / 2.0]);
        assert!(a.mul(&b).unwrap().distance(&c) < 1e-15);
    }

    #[test]
    fn mixed_groups_refuse_to_multiply() {
        let e = GroupSpec::SU2.identity();
        assert!(matches!(e.mul(&GroupSpec::U1.identity()), Err(Error::SpecMismatch { .. })));
    }

    #[test]
    fn su2_exp_closed_form() {
        // exp(π·iσ₃/2) = diag(e^{iπ/2}, e^{−iπ/2})
        let g = GroupSpec::SU2.exp_coords(&[0.0, 0.0, PI]);
        let m = g.matrix();
        let expect = [Complex64::from_polar(1.0, PI / 2.0), Complex64::from_polar(1.0, -PI / 2.0)];
        assert!((m[(0, 0)] - expect[0]).norm() < 1e-15);
        assert!((m[(1, 1)] - expect[1]).norm() < 1e-15);
        assert!(m[(0, 1)].norm() < 1e-15 && m[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn su2_exp_matches_matrix_series() {
        // oracle: exp of the 2×2 matrix Σ v_a iσ_a/2 by Taylor series
        let v = [0.7, -0.4, 1.3];
        let i = Complex64::i();
        let c = |x: f64| Complex64::new(x, 0.0);
        let x = nalgebra::Matrix2::new(
            i * c(v[2] / 2.0),
            i * c(v[0] / 2.0) + c(v[1] / 2.0),
            i * c(v[0] / 2.0) - c(v[1] / 2.0),
            -i * c(v[2] / 2.0),
        );
        let mut term = Matrix2::<Complex64>::identity();
        let mut sum = term;
        for k in 1..40 {
            term = term * x / c(k as f64);
            sum += term;
        }
        let g = GroupSpec::SU2.exp_coords(&v);
        let m = g.matrix();
        for r in 0..2 {
            for s in 0..2 {
                assert!((m[(r, s)] - sum[(r, s)]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn log_of_minus_identity_is_cut_locus() {
        let minus = GroupElement::SU2(Quaternion::new(-1.0, 0.0, 0.0, 0.0));
        assert!(matches!(minus.log(), Err(Error::CutLocus { .. })));
        let half_turn = GroupSpec::SO3.exp_coords(&[PI, 0.0, 0.0]);
        assert!(matches!(half_turn.log(), Err(Error::CutLocus { .. })));
    }

    #[test]
    fn exp_zero_is_identity() {
        for spec in specs() {
            assert!(spec.zero().exp().distance(&spec.identity()) < 1e-15);
        }
    }

    #[test]
    fn log_inverts_exp_on_unit_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in specs() {
            for _ in 0..1000 {
                let v = random_coords(spec.dim(), 1.0, &mut rng);
                let back = spec.exp_coords(&v).log().unwrap();
                let err = (back.coords - DVector::from_vec(v)).norm();
                assert!(err <= 1e-10, "{spec}: {err}");
            }
        }
    }

    #[test]
    fn products_stay_on_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for spec in specs() {
            for _ in 0..200 {
                let g = haar_sample(&spec, &mut rng);
                let h = haar_sample(&spec, &mut rng);
                assert!(g.mul(&h).unwrap().constraint_residual() <= 1e-10);
            }
        }
    }

    #[test]
    fn adjoint_is_homomorphism_and_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for spec in specs() {
            let n = spec.dim();
            for _ in 0..1000 {
                let g = haar_sample(&spec, &mut rng);
                let h = haar_sample(&spec, &mut rng);
                let lhs = g.mul(&h).unwrap().adjoint();
                let rhs = g.adjoint() * h.adjoint();
                assert!((lhs - rhs).norm() <= 1e-10, "{spec}");
                let u = DVector::from_vec(random_coords(n, 2.0, &mut rng));
                let v = DVector::from_vec(random_coords(n, 2.0, &mut rng));
                let a = g.adjoint();
                assert!(((&a * &u).dot(&(&a * &v)) - u.dot(&v)).abs() <= 1e-10);
            }
            assert!((spec.identity().adjoint() - DMatrix::identity(n, n)).norm() < 1e-15);
        }
    }

    #[test]
    fn adjoint_of_i_negates_third_axis() {
        let i = GroupElement::SU2(Quaternion::new(0.0, 1.0, 0.0, 0.0));
        let v = i.adjoint() * DVector::from_vec(vec![0.0, 0.0, 1.0]);
        assert!((v - DVector::from_vec(vec![0.0, 0.0, -1.0])).norm() < 1e-15);
        // oracle: q v q⁻¹ on 2×2 matrices
        let x = GroupSpec::SU2.exp_coords(&[0.0, 0.0, 0.3]).matrix();
        let conj = i.matrix() * &x * i.matrix().adjoint();
        let expect = GroupSpec::SU2.exp_coords(&[0.0, 0.0, -0.3]).matrix();
        let d = (conj - expect).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(d < 1e-14);
    }

    #[test]
    fn torus_adjoint_is_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = haar_sample(&GroupSpec::Torus(3), &mut rng);
        assert_eq!(g.adjoint(), DMatrix::identity(3, 3));
    }

    #[test]
    fn ad_is_derivative_of_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = 1e-5;
        for spec in specs() {
            for _ in 0..50 {
                let v = random_coords(spec.dim(), 1.5, &mut rng);
                let plus: Vec<f64> = v.iter().map(|x| x * h).collect();
                let minus: Vec<f64> = v.iter().map(|x| -x * h).collect();
                let fd = (spec.exp_coords(&plus).adjoint() - spec.exp_coords(&minus).adjoint())
                    / (2.0 * h);
                let ad = ad_matrix(&spec, &v);
                let scale = ad.norm().max(1e-300);
                if ad.norm() == 0.0 {
                    assert!(fd.norm() < 1e-9);
                } else {
                    assert!((fd - &ad).norm() / scale <= 1e-6, "{spec}");
                }
            }
        }
    }

    #[test]
    fn trace_form_gives_kronecker_delta() {
        // oracle: −2 tr(XY) on the 2×2 matrices iσ_a/2
        let i = Complex64::i();
        let z = Complex64::new(0.0, 0.0);
        let h = Complex64::new(0.5, 0.0);
        let basis = [
            Matrix2::new(z, i * h, i * h, z),
            Matrix2::new(z, h, -h, z),
            Matrix2::new(i * h, z, z, -i * h),
        ];
        for a in 0..3 {
            for b in 0..3 {
                let t = (basis[a] * basis[b]).trace() * Complex64::new(-2.0, 0.0);
                let mut ea = vec![0.0; 3];
                ea[a] = 1.0;
                let mut eb = vec![0.0; 3];
                eb[b] = 1.0;
                let ip = inner(
                    &AlgebraElement::from_slice(GroupSpec::SU2, &ea).unwrap(),
                    &AlgebraElement::from_slice(GroupSpec::SU2, &eb).unwrap(),
                )
                .unwrap();
                assert!((t.re - ip).abs() < 1e-15 && t.im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn haar_is_deterministic_per_seed() {
        let a = haar_sample(&GroupSpec::SU2, &mut ChaCha8Rng::seed_from_u64(42));
        let b = haar_sample(&GroupSpec::SU2, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }

    #[test]
    fn haar_trace_has_zero_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 100_000;
        // tr of a Haar SU(2) matrix is 2w, variance 1
        let mut sum = 0.0;
        for _ in 0..n {
            let g = haar_sample(&GroupSpec::SU2, &mut rng);
            sum += g.matrix().trace().re;
        }
        let mean = sum / n as f64;
        assert!(mean.abs() < 3.0 / (n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn haar_circle_passes_ks() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 5000;
        let mut xs: Vec<f64> = (0..n)
            .map(|_| match haar_sample(&GroupSpec::U1, &mut rng) {
                GroupElement::U1(z) => z.arg().rem_euclid(TAU) / TAU,
                _ => unreachable!(),
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| ((i + 1) as f64 / n as f64 - x).max(x - i as f64 / n as f64))
            .fold(0.0, f64::max);
        // critical value at α = 0.01
        assert!(d < 1.628 / (n as f64).sqrt(), "KS statistic {d}");
    }

    #[test]
    fn centralizers() {
        let e = GroupSpec::SU2.identity();
        assert_eq!(centralizer_algebra(&e, 1e-10).len(), 3);
        let g = GroupSpec::SU2.exp_coords(&[0.0, 0.0, 1.0]);
        let c = centralizer_algebra(&g, 1e-10);
        assert_eq!(c.len(), 1);
        assert!((c[0].coords[2].abs() - 1.0).abs() < 1e-12);
        let r = GroupSpec::SO3.exp_coords(&[0.0, 0.0, PI / 2.0]);
        let c = centralizer_algebra(&r, 1e-10);
        assert_eq!(c.len(), 1);
        assert!((c[0].coords[2].abs() - 1.0).abs() < 1e-12);
    }
}
