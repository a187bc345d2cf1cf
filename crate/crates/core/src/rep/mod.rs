//! Points of `Hom_X(Γ, G) ⊆ G^{2ℓ}`: tuples `(a₁, b₁, …, a_ℓ, b_ℓ)` whose
//! relator value equals `exp(X)` for a central charge `X`.

mod cochain;
mod goldman;
mod solve;
mod symmetry;

pub use cochain::{
    ad_defect, build_cochain, cohomology_dims, stabilizer_algebra, stratum_label, CochainData,
    CohomologyDims, StabilizerKind, StratumLabel, AD_CENTRAL_TOL,
};
pub use goldman::{cup_pairing, goldman_matrix, goldman_pairing, h1_representatives, COCYCLE_TOL};
pub use solve::{project_to_level_set, project_traced, sample_solved, ProjectOptions, ProjectionTrace};
pub use symmetry::{apply_substitution, component_invariant, conjugate_rep, ComponentInvariant};

use nalgebra::DVector;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lie::{haar_sample, AlgebraElement, GroupElement, GroupSpec};
use crate::words::{evaluate_word, relator_word};

/// Elements must satisfy their group constraint to this accuracy.
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// Default level-set tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// A charge in the center 𝔥 of the Lie algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralCharge(AlgebraElement);

impl CentralCharge {
    pub fn new(x: AlgebraElement) -> Result<Self> {
        let deviation = x.ad().norm();
        if deviation > 1e-12 {
            return Err(Error::NonCentralCharge { deviation });
        }
        Ok(CentralCharge(x))
    }

    pub fn zero(spec: &GroupSpec) -> Self {
        CentralCharge(spec.zero())
    }

    pub fn from_slice(spec: &GroupSpec, coords: &[f64]) -> Result<Self> {
        CentralCharge::new(AlgebraElement::from_slice(spec.clone(), coords)?)
    }

    pub fn algebra(&self) -> &AlgebraElement {
        &self.0
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0.coords
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepPoint {
    spec: GroupSpec,
    genus: usize,
    elements: Vec<GroupElement>,
    charge: CentralCharge,
    /// Level-set tolerance the point is meant to satisfy.
    pub tol: f64,
}

impl RepPoint {
    pub fn new(
        spec: GroupSpec,
        genus: usize,
        elements: Vec<GroupElement>,
        charge: CentralCharge,
    ) -> Result<Self> {
        if genus < 1 {
            return Err(Error::InvalidGenus(genus));
        }
        if elements.len() != 2 * genus {
            return Err(Error::LengthMismatch { expected: 2 * genus, found: elements.len() });
        }
        if charge.0.spec != spec {
            return Err(Error::SpecMismatch { expected: spec, found: charge.0.spec.clone() });
        }
        for g in &elements {
            if g.spec() != spec {
                return Err(Error::SpecMismatch { expected: spec, found: g.spec() });
            }
            let c = g.constraint_residual();
            if !(c <= CONSTRAINT_TOL) {
                return Err(Error::Invalid(format!("element violates its group constraint by {c:.3e}")));
            }
        }
        Ok(RepPoint { spec, genus, elements, charge, tol: DEFAULT_TOL })
    }

    pub fn trivial(spec: &GroupSpec, genus: usize, charge: CentralCharge) -> Result<Self> {
        RepPoint::new(spec.clone(), genus, vec![spec.identity(); 2 * genus], charge)
    }

    pub fn haar<R: Rng + ?Sized>(
        spec: &GroupSpec,
        genus: usize,
        charge: CentralCharge,
        rng: &mut R,
    ) -> Result<Self> {
        let elements = (0..2 * genus).map(|_| haar_sample(spec, rng)).collect();
        RepPoint::new(spec.clone(), genus, elements, charge)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn charge(&self) -> &CentralCharge {
        &self.charge
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Same charge and genus, new elements (unchecked beyond the group tags).
    pub(crate) fn with_elements(&self, elements: Vec<GroupElement>) -> RepPoint {
        debug_assert_eq!(elements.len(), self.elements.len());
        RepPoint { elements, ..self.clone() }
    }

    /// `r(χ) = [a₁,b₁]···[a_ℓ,b_ℓ]`.
    pub fn relator_value(&self) -> GroupElement {
        let w = relator_word(self.genus).expect("genus validated on construction");
        evaluate_word(&w, &self.elements).expect("tuple length validated on construction")
    }

    pub fn is_on_level_set(&self) -> bool {
        residual(self) <= self.tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub value: f64,
    /// The logarithm was undefined and the ambient distance was used instead.
    pub fallback: bool,
}

/// Residual of a tuple against an arbitrary (not necessarily central) charge.
pub fn residual_against(elements: &[GroupElement], genus: usize, x: &AlgebraElement) -> ResidualReport {
    let w = relator_word(genus).expect("genus ≥ 1");
    let r = evaluate_word(&w, elements).expect("tuple matches genus");
    let target = x.exp();
    match target.inverse().mul_same(&r).log() {
        Ok(v) => ResidualReport { value: v.norm(), fallback: false },
        Err(_) => ResidualReport { value: r.distance(&target), fallback: true },
    }
}

/// `‖log(exp(−X)·r(χ))‖`, or `‖r(χ) − exp(X)‖_F` in the defining representation
/// when the logarithm is undefined.
pub fn residual_report(rep: &RepPoint) -> ResidualReport {
    residual_against(&rep.elements, rep.genus, rep.charge.algebra())
}

pub fn residual(rep: &RepPoint) -> f64 {
    residual_report(rep).value
}
