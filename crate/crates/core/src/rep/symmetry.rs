//! Conjugation, generator changes and the topological component invariant.

use nalgebra::Quaternion;
use serde::{Deserialize, Serialize};

use super::{residual, RepPoint};
use crate::error::{Error, Result};
use crate::lie::{su2, GroupElement, GroupSpec};
use crate::words::{evaluate_word, relator_word, Word};

/// Class of the relator of lifted generators in the kernel of the universal
/// cover, one `±1` per `SO3` factor (in factor order). Groups without such a
/// factor have an empty list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInvariant {
    pub classes: Vec<i8>,
}

impl ComponentInvariant {
    pub fn is_trivial(&self) -> bool {
        self.classes.iter().all(|&c| c == 1)
    }

    /// The single sign for groups with one `SO3` factor; otherwise the classes
    /// packed into an integer (bit `i` set when factor `i` is `−1`), with `1`
    /// for the trivial class.
    pub fn label(&self) -> i64 {
        match self.classes.as_slice() {
            [c] => *c as i64,
            cs => {
                let bits = cs
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c == -1)
                    .fold(0i64, |acc, (i, _)| acc | (1 << i));
                if bits == 0 {
                    1
                } else {
                    -bits
                }
            }
        }
    }
}

fn check_supported(spec: &GroupSpec, root: &GroupSpec) -> Result<()> {
    match spec {
        GroupSpec::U2 => Err(Error::UnsupportedGroup(root.clone())),
        GroupSpec::Product(fs) => fs.iter().try_for_each(|f| check_supported(f, root)),
        _ => Ok(()),
    }
}

/// Collects the `SO3` factors of each generator, in factor order.
fn so3_slots(g: &GroupElement, out: &mut Vec<nalgebra::Matrix3<f64>>) {
    match g {
        GroupElement::SO3(r) => out.push(*r),
        GroupElement::Product(es) => es.iter().for_each(|e| so3_slots(e, out)),
        _ => {}
    }
}

pub fn component_invariant(rep: &RepPoint) -> Result<ComponentInvariant> {
    check_supported(rep.spec(), rep.spec())?;
    let res = residual(rep);
    if !(res <= rep.tol) {
        return Err(Error::NotOnLevelSet { residual: res, tol: rep.tol });
    }
    let per_generator: Vec<Vec<_>> = rep
        .elements()
        .iter()
        .map(|g| {
            let mut v = Vec::new();
            so3_slots(g, &mut v);
            v
        })
        .collect();
    let factors = per_generator.first().map_or(0, Vec::len);
    let w = relator_word(rep.genus())?;
    let mut classes = Vec::with_capacity(factors);
    for f in 0..factors {
        let lifts: Vec<GroupElement> =
            per_generator.iter().map(|v| GroupElement::SU2(su2::lift(&v[f]))).collect();
        let q: Quaternion<f64> = match evaluate_word(&w, &lifts)? {
            GroupElement::SU2(q) => q,
            _ => unreachable!("lifts live in SU2"),
        };
        classes.push(if q.w >= 0.0 { 1 } else { -1 });
    }
    Ok(ComponentInvariant { classes })
}

/// Every element replaced by `x g x⁻¹`.
pub fn conjugate_rep(rep: &RepPoint, x: &GroupElement) -> Result<RepPoint> {
    if x.spec() != *rep.spec() {
        return Err(Error::SpecMismatch { expected: rep.spec().clone(), found: x.spec() });
    }
    let elements = rep.elements().iter().map(|g| g.conjugate_by(x)).collect::<Result<Vec<_>>>()?;
    Ok(rep.with_elements(elements))
}

/// New generators `evaluate_word(subst_k, χ)`, provided the substitution maps
/// the relator to a conjugate of itself.
pub fn apply_substitution(rep: &RepPoint, subst: &[Word]) -> Result<RepPoint> {
    let m = rep.elements().len();
    if subst.len() != m {
        return Err(Error::LengthMismatch { expected: m, found: subst.len() });
    }
    if let Some(k) = subst.iter().filter_map(Word::max_generator).max() {
        if k >= m {
            return Err(Error::Invalid(format!("substitution uses generator {k} of {m}")));
        }
    }
    let r = relator_word(rep.genus())?;
    if !r.substitute(subst)?.is_conjugate_to(&r) {
        return Err(Error::RelatorNotPreserved);
    }
    let elements =
        subst.iter().map(|w| evaluate_word(w, rep.elements())).collect::<Result<Vec<_>>>()?;
    Ok(rep.with_elements(elements))
}
