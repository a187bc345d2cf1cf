//! The twisted cellular cochain complex `𝔤 → 𝔤^{2ℓ} → 𝔤` of the one-relator
//! cell structure, its cohomology, and stabilizers.

use nalgebra::DMatrix;

use super::RepPoint;
use crate::error::{Error, Result};
use crate::lie::AlgebraElement;
use crate::linalg::{kernel, numerical_rank, singular_values, LinearMap};
use crate::words::{fox_jacobian, relator_word};

/// `Ad(r(χ))` must be the identity to this accuracy for the complex to close.
pub const AD_CENTRAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CochainData {
    /// `𝔤 → 𝔤^{2ℓ}`, block `k` is `ξ ↦ ξ − Ad(g_k⁻¹)ξ`.
    pub d0: LinearMap,
    /// `𝔤^{2ℓ} → 𝔤`, the Fox blocks of the relator.
    pub d1: LinearMap,
}

pub fn build_cochain(rep: &RepPoint) -> CochainData {
    let n = rep.spec().dim();
    let m = rep.elements().len();
    let mut d0 = DMatrix::zeros(n * m, n);
    let id = DMatrix::<f64>::identity(n, n);
    for (k, g) in rep.elements().iter().enumerate() {
        // Ad is orthogonal, so Ad(g⁻¹) = Ad(g)ᵀ
        let block = &id - g.adjoint().transpose();
        d0.view_mut((k * n, 0), (n, n)).copy_from(&block);
    }
    let w = relator_word(rep.genus()).expect("genus validated");
    let d1 = fox_jacobian(&w, rep.elements()).expect("tuple validated");
    CochainData { d0, d1 }
}

/// `‖Ad(r(χ)) − id‖_F`.
pub fn ad_defect(rep: &RepPoint) -> f64 {
    let n = rep.spec().dim();
    (rep.relator_value().adjoint() - DMatrix::<f64>::identity(n, n)).norm()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyDims {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub rank_d0: usize,
    pub rank_d1: usize,
    /// Singular values of `d0` and `d1`, descending.
    pub sigma_d0: Vec<f64>,
    pub sigma_d1: Vec<f64>,
}

impl CohomologyDims {
    pub fn euler(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64 + self.h2 as i64
    }
}

/// Dimensions of `H⁰, H¹, H²` with ranks decided by singular values at least
/// `rank_tol` times the largest one.
pub fn cohomology_dims(rep: &RepPoint, rank_tol: f64) -> Result<CohomologyDims> {
    let deviation = ad_defect(rep);
    if !(deviation <= AD_CENTRAL_TOL) {
        return Err(Error::AdNotCentral { deviation });
    }
    let c = build_cochain(rep);
    let n = rep.spec().dim();
    let m = rep.elements().len();
    let rank_d0 = numerical_rank(&c.d0, rank_tol);
    let rank_d1 = numerical_rank(&c.d1, rank_tol);
    Ok(CohomologyDims {
        h0: n - rank_d0,
        h1: (n * m - rank_d1) - rank_d0,
        h2: n - rank_d1,
        rank_d0,
        rank_d1,
        sigma_d0: singular_values(&c.d0),
        sigma_d1: singular_values(&c.d1),
    })
}

fn stacked_adjoint_defect(rep: &RepPoint) -> LinearMap {
    let n = rep.spec().dim();
    let m = rep.elements().len();
    let id = DMatrix::<f64>::identity(n, n);
    let mut stacked = DMatrix::zeros(n * m, n);
    for (k, g) in rep.elements().iter().enumerate() {
        stacked.view_mut((k * n, 0), (n, n)).copy_from(&(g.adjoint() - &id));
    }
    stacked
}

/// Orthonormal basis of `⋂_k ker(Ad(g_k) − id)`, the Lie algebra of the
/// stabilizer of `χ` under conjugation.
pub fn stabilizer_algebra(rep: &RepPoint, rank_tol: f64) -> Vec<AlgebraElement> {
    let k = kernel(&stacked_adjoint_defect(rep), rank_tol);
    k.column_iter()
        .map(|c| AlgebraElement::new(rep.spec().clone(), c.into_owned()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilizerKind {
    /// The whole of 𝔤.
    Full,
    /// An abelian subalgebra of the given dimension.
    Torus(usize),
    /// A non-abelian proper subalgebra.
    NonAbelian(usize),
    /// Zero-dimensional stabilizer.
    Discrete,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StratumLabel {
    pub stabilizer_dim: usize,
    pub kind: StabilizerKind,
    /// Number of central elements of `G` in the stabilizer, for groups with a
    /// finite center (`SU2`: 2, `SO3`: 1). This only inspects the center, so
    /// it is a lower bound for the component group of the stabilizer.
    pub central_stabilizer_order: Option<usize>,
}

pub fn stratum_label(rep: &RepPoint, rank_tol: f64) -> StratumLabel {
    let stab = stabilizer_algebra(rep, rank_tol);
    let d = stab.len();
    let spec = rep.spec();
    let kind = if d == spec.dim() {
        StabilizerKind::Full
    } else if d == 0 {
        StabilizerKind::Discrete
    } else {
        let abelian = stab.iter().enumerate().all(|(i, a)| {
            stab[i + 1..].iter().all(|b| spec.bracket(&a.coords, &b.coords).norm() < 1e-8)
        });
        if abelian {
            StabilizerKind::Torus(d)
        } else {
            StabilizerKind::NonAbelian(d)
        }
    };
    let central_stabilizer_order = match spec {
        // the center acts trivially by conjugation, so all of it stabilizes
        crate::lie::GroupSpec::SU2 => Some(2),
        crate::lie::GroupSpec::SO3 => Some(1),
        _ => None,
    };
    StratumLabel { stabilizer_dim: d, kind, central_stabilizer_order }
}
