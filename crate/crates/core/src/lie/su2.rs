//! Unit-quaternion kernels for SU(2), shared by SO(3) and U(2).
//!
//! Algebra coordinates `v` refer to the basis `{iσ₁/2, iσ₂/2, iσ₃/2}`. The
//! quaternion units are realized as `i ↦ iσ₁`, `j ↦ −iσ₂`, `k ↦ iσ₃`, which is
//! a homomorphism, so `v` corresponds to the pure quaternion `(v₁, −v₂, v₃)/2`.

use nalgebra::{Matrix2, Matrix3, Quaternion, Rotation3, UnitQuaternion};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Logarithm refuses within this angular distance of `−e`.
pub const CUT_MARGIN: f64 = 1e-6;

#[inline]
fn flip(v: [f64; 3]) -> [f64; 3] {
    [v[0], -v[1], v[2]]
}

pub fn exp(v: [f64; 3]) -> Quaternion<f64> {
    let theta = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let half = 0.5 * theta;
    // sin(θ/2)/θ, with its Taylor expansion near zero
    let s = if theta < 1e-4 {
        0.5 - theta * theta / 48.0
    } else {
        half.sin() / theta
    };
    let p = flip(v);
    Quaternion::new(half.cos(), s * p[0], s * p[1], s * p[2])
}

/// Principal logarithm; the coordinate norm lies in `[0, 2π − CUT_MARGIN]`.
pub fn log(q: &Quaternion<f64>) -> Result<[f64; 3]> {
    let q = q.normalize();
    let p = [q.i, q.j, q.k];
    let s = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let theta = 2.0 * s.atan2(q.w);
    if theta > 2.0 * std::f64::consts::PI - CUT_MARGIN {
        return Err(Error::CutLocus { angle: theta });
    }
    let scale = if s < 1e-8 {
        // θ/s → 2/w as s → 0 with w > 0
        2.0 / q.w * (1.0 + s * s / (3.0 * q.w * q.w))
    } else {
        theta / s
    };
    Ok(flip([scale * p[0], scale * p[1], scale * p[2]]))
}

/// Matrix of `Ad(q)` on algebra coordinates.
pub fn adjoint(q: &Quaternion<f64>) -> Matrix3<f64> {
    let r = UnitQuaternion::from_quaternion(*q).to_rotation_matrix().into_inner();
    let d = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -1.0, 1.0));
    d * r * d
}

/// Covering map SU(2) → SO(3) in the coordinates where `so(3)` uses the
/// standard skew generators; it equals `Ad(q)`.
pub fn rotation(q: &Quaternion<f64>) -> Matrix3<f64> {
    adjoint(q)
}

/// One of the two preimages of `r` under [`rotation`], with `w ≥ 0`.
pub fn lift(r: &Matrix3<f64>) -> Quaternion<f64> {
    let d = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -1.0, 1.0));
    let conj = d * r * d;
    let q = UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(conj));
    let q = q.into_inner();
    if q.w < 0.0 {
        -q
    } else {
        q
    }
}

/// Defining 2×2 representation.
pub fn matrix(q: &Quaternion<f64>) -> Matrix2<Complex64> {
    let c = Complex64::new;
    Matrix2::new(
        c(q.w, q.k),
        c(-q.j, q.i),
        c(q.j, q.i),
        c(q.w, -q.k),
    )
}

/// Inverse of [`matrix`] for a matrix in SU(2).
pub fn from_matrix(m: &Matrix2<Complex64>) -> Quaternion<f64> {
    Quaternion::new(m[(0, 0)].re, m[(1, 0)].im, m[(1, 0)].re, m[(0, 0)].im)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_close(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> f64 {
        (a - b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn matrix_is_homomorphism() {
        let a = Quaternion::new(0.3, -0.2, 0.7, 0.1).normalize();
        let b = Quaternion::new(-0.5, 0.4, 0.1, 0.9).normalize();
        assert!(mat_close(&(matrix(&a) * matrix(&b)), &matrix(&(a * b))) < 1e-14);
    }

    #[test]
    fn unit_quaternions_match_pauli_basis() {
        let i = Complex64::i();
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        // k ↦ iσ₃ = diag(i, −i)
        let k = matrix(&Quaternion::new(0.0, 0.0, 0.0, 1.0));
        assert!(mat_close(&k, &Matrix2::new(i, z, z, -i)) < 1e-15);
        // i ↦ iσ₁
        let qi = matrix(&Quaternion::new(0.0, 1.0, 0.0, 0.0));
        assert!(mat_close(&qi, &Matrix2::new(z, i, i, z)) < 1e-15);
        // j ↦ −iσ₂ = [[0, −1], [1, 0]]
        let qj = matrix(&Quaternion::new(0.0, 0.0, 1.0, 0.0));
        assert!(mat_close(&qj, &Matrix2::new(z, -one, one, z)) < 1e-15);
    }

    #[test]
    fn lift_covers_rotation() {
        let q = exp([0.4, -1.1, 0.3]);
        let r = rotation(&q);
        let l = lift(&r);
        assert!((rotation(&l) - r).norm() < 1e-12);
        assert!((l - q).norm() < 1e-12 || (l + q).norm() < 1e-12);
    }
}
