//! Cup-product pairing on `H¹(Σ, 𝔤_χ)` evaluated on the fundamental 2-cell.
//!
//! Cochains `ξ ∈ 𝔤^{2ℓ}` are left-translated tangent vectors. They are turned
//! into crossed homomorphisms `u(ab) = u(a) + Ad(a)u(b)` of the free group via
//! `u(x_k) = Ad(g_k)ξ_k`. The fundamental class of the one-relator complex is
//! represented by the bar chain
//!
//! ```text
//!   Σ_{ℓ_i = x}  [p_{i−1} | x]  −  Σ_{ℓ_i = x⁻¹}  [p_i | x]
//! ```
//!
//! where `p_i` is the prefix of the relator of length `i`, and the cup product
//! of two crossed homomorphisms is `(u ∪ v)[a | b] = ⟨u(a), Ad(a)v(b)⟩`. On
//! the abelian genus-one torus this is exactly the intersection form
//! `s₁t₂ − t₁s₂`, which fixes the normalization. The value is antisymmetrized
//! so antisymmetry holds to rounding.

use nalgebra::{DMatrix, DVector};

use super::{build_cochain, RepPoint};
use crate::error::{Error, Result};
use crate::lie::GroupElement;
use crate::linalg::{image, kernel, LinearMap};
use crate::words::relator_word;

/// `‖d¹u‖ ≤ COCYCLE_TOL·max(1, ‖d¹‖‖u‖)` is accepted as a cocycle.
pub const COCYCLE_TOL: f64 = 1e-8;

fn block(v: &DVector<f64>, k: usize, n: usize) -> DVector<f64> {
    v.rows(k * n, n).into_owned()
}

fn cup_on_fundamental_chain(rep: &RepPoint, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    let elems = rep.elements();
    let spec = rep.spec();
    let n = spec.dim();
    let cu: Vec<DVector<f64>> =
        elems.iter().enumerate().map(|(k, g)| g.adjoint() * block(u, k, n)).collect();
    let cv: Vec<DVector<f64>> =
        elems.iter().enumerate().map(|(k, g)| g.adjoint() * block(v, k, n)).collect();
    let w = relator_word(rep.genus()).expect("genus validated");
    let mut prefix: GroupElement = spec.identity();
    let mut u_prefix = DVector::zeros(n);
    let mut total = 0.0;
    for l in &w.letters {
        let g = &elems[l.generator];
        let ad_p = prefix.adjoint();
        if !l.inverse {
            total += u_prefix.dot(&(&ad_p * &cv[l.generator]));
            u_prefix += &ad_p * &cu[l.generator];
            prefix = prefix.mul_same(g);
        } else {
            // u(x⁻¹) = −Ad(x⁻¹)u(x)
            let g_inv = g.inverse();
            u_prefix -= &ad_p * g_inv.adjoint() * &cu[l.generator];
            prefix = prefix.mul_same(&g_inv);
            total -= u_prefix.dot(&(prefix.adjoint() * &cv[l.generator]));
        }
    }
    total
}

fn check_cocycle(d1: &LinearMap, u: &DVector<f64>) -> Result<()> {
    let defect = (d1 * u).norm();
    if !(defect <= COCYCLE_TOL * (d1.norm() * u.norm()).max(1.0)) {
        return Err(Error::NotACocycle { defect });
    }
    Ok(())
}

/// `⟨u ∪ v, [Σ]⟩` for cocycles `u, v ∈ ker d¹`, without antisymmetrization.
/// On cohomology it is already antisymmetric.
pub fn cup_pairing(rep: &RepPoint, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
    check_pair(rep, u, v)?;
    Ok(cup_on_fundamental_chain(rep, u, v))
}

/// `ω(u, v)` for cocycles `u, v ∈ ker d¹`.
pub fn goldman_pairing(rep: &RepPoint, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
    check_pair(rep, u, v)?;
    Ok(0.5 * (cup_on_fundamental_chain(rep, u, v) - cup_on_fundamental_chain(rep, v, u)))
}

fn check_pair(rep: &RepPoint, u: &DVector<f64>, v: &DVector<f64>) -> Result<()> {
    let len = rep.spec().dim() * rep.elements().len();
    for x in [u, v] {
        if x.len() != len {
            return Err(Error::LengthMismatch { expected: len, found: x.len() });
        }
    }
    let d1 = build_cochain(rep).d1;
    check_cocycle(&d1, u)?;
    check_cocycle(&d1, v)
}

/// Orthonormal cocycles spanning a complement of `im d⁰` in `ker d¹`; their
/// number is `h¹`.
pub fn h1_representatives(rep: &RepPoint, rank_tol: f64) -> DMatrix<f64> {
    let c = build_cochain(rep);
    let z1 = kernel(&c.d1, rank_tol);
    let b1 = image(&c.d0, rank_tol);
    // remove the coboundary directions from the cocycle space
    let projected = &z1 - &b1 * (b1.transpose() * &z1);
    image(&projected, rank_tol)
}

/// Gram matrix of the pairing on [`h1_representatives`].
pub fn goldman_matrix(rep: &RepPoint, rank_tol: f64) -> Result<DMatrix<f64>> {
    let reps = h1_representatives(rep, rank_tol);
    let k = reps.ncols();
    let mut out = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let (a, b) = (reps.column(i).into_owned(), reps.column(j).into_owned());
            out[(i, j)] = goldman_pairing(rep, &a, &b)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::GroupSpec;
    use crate::linalg::numerical_rank;
    use crate::rep::{sample_solved, CentralCharge, ProjectOptions};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Alexander–Whitney cup product on the two-triangle torus, with `s` on
    /// horizontal edges, `t` on vertical ones and `s + t` on the diagonal.
    fn square_cup(s1: f64, t1: f64, s2: f64, t2: f64) -> f64 {
        // [(0,0),(1,0),(1,1)] and [(0,0),(1,1),(0,1)], both counterclockwise
        let aw = |(sa, ta): (f64, f64), (sb, tb): (f64, f64)| sa * tb + (sa + ta) * (-sb);
        0.5 * (aw((s1, t1), (s2, t2)) - aw((s2, t2), (s1, t1)))
    }

    #[test]
    fn circle_genus_one_is_intersection_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let spec = GroupSpec::U1;
        for _ in 0..50 {
            let rep = RepPoint::haar(&spec, 1, CentralCharge::zero(&spec), &mut rng).unwrap();
            let (s1, t1, s2, t2): (f64, f64, f64, f64) =
                (rng.random(), rng.random(), rng.random(), rng.random());
            let u = DVector::from_vec(vec![s1, t1]);
            let v = DVector::from_vec(vec![s2, t2]);
            let w = goldman_pairing(&rep, &u, &v).unwrap();
            assert!((w - square_cup(s1, t1, s2, t2)).abs() < 1e-14);
            assert!(goldman_pairing(&rep, &u, &u).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn irreducible_su2_pairing() {
        let spec = GroupSpec::SU2;
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let rep = sample_solved(&spec, 2, &CentralCharge::zero(&spec), &ProjectOptions::default(), 20, &mut rng)
            .unwrap();
        let m = goldman_matrix(&rep, 1e-8).unwrap();
        assert_eq!(m.nrows(), 6);
        assert!((&m + m.transpose()).norm() <= 1e-12);
        assert_eq!(numerical_rank(&m, 1e-8), 6);

        // the unsymmetrized chain value is already antisymmetric on cocycles
        let reps = h1_representatives(&rep, 1e-8);
        let (a, b) = (reps.column(0).into_owned(), reps.column(1).into_owned());
        let sym = cup_on_fundamental_chain(&rep, &a, &b) + cup_on_fundamental_chain(&rep, &b, &a);
        assert!(sym.abs() < 1e-10, "symmetric part {sym}");

        // coboundaries pair to zero with every cocycle
        let c = build_cochain(&rep);
        let z1 = kernel(&c.d1, 1e-8);
        for _ in 0..10 {
            let xi = DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0));
            let cob = &c.d0 * xi;
            let z = &z1 * DVector::from_fn(z1.ncols(), |_, _| rng.random_range(-1.0..1.0));
            assert!(goldman_pairing(&rep, &cob, &z).unwrap().abs() <= 1e-10);
        }
    }

    #[test]
    fn non_cocycle_is_rejected() {
        let spec = GroupSpec::SU2;
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let rep = sample_solved(&spec, 2, &CentralCharge::zero(&spec), &ProjectOptions::default(), 20, &mut rng)
            .unwrap();
        let c = build_cochain(&rep);
        // a vector in the row space of d1 is never a cocycle
        let u = c.d1.row(0).transpose();
        assert!(matches!(
            goldman_pairing(&rep, &u, &u),
            Err(Error::NotACocycle { .. })
        ));
    }
}
