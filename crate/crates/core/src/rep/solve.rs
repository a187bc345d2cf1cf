//! Gauss–Newton projection onto the level set `r(χ) = exp(X)`.
//!
//! The defect is `F = log(exp(−X)·r(χ)) ∈ 𝔤`. Perturbing the generators by
//! `g_k ↦ g_k·exp(ξ_k)` moves `F` by `J_r(F)⁻¹·d¹·ξ` to first order, where `d¹`
//! collects the Fox blocks of the relator and `J_r` is the right-trivialized
//! derivative of `exp`. Each step is the minimum-norm solution of the
//! linearized system, followed by backtracking until the residual decreases.

use nalgebra::DVector;
use rand::Rng;

use super::{residual_against, CentralCharge, RepPoint, ResidualReport};
use crate::error::{Error, Result};
use crate::lie::{dexp_right, GroupElement};
use crate::linalg::{pseudo_inverse, LinearMap};
use crate::words::{fox_jacobian, relator_word};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ProjectOptions {
    fn default() -> Self {
        ProjectOptions { tol: 1e-10, max_iter: 50 }
    }
}

#[derive(Debug, Clone)]
pub struct ProjectionTrace {
    pub rep: RepPoint,
    pub iterations: usize,
    /// Residual after each accepted step, starting with the input residual.
    pub history: Vec<f64>,
}

const MAX_HALVINGS: usize = 40;

fn defect(elements: &[GroupElement], genus: usize, charge: &CentralCharge) -> Option<DVector<f64>> {
    let w = relator_word(genus).expect("genus ≥ 1");
    let r = crate::words::evaluate_word(&w, elements).expect("tuple matches genus");
    charge.algebra().exp().inverse().mul_same(&r).log().ok().map(|a| a.coords)
}

fn retract_all(elements: &[GroupElement], step: &DVector<f64>, alpha: f64) -> Vec<GroupElement> {
    let n = elements[0].spec().dim();
    elements
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let xi: Vec<f64> = step.rows(k * n, n).iter().map(|x| alpha * x).collect();
            g.retract(&xi)
        })
        .collect()
}

/// Whether `cand` is an improvement over `cur`. Log-based residuals and
/// ambient fallbacks are not comparable, so leaving the cut locus always counts.
fn improves(cand: &ResidualReport, cur: &ResidualReport) -> bool {
    match (cur.fallback, cand.fallback) {
        (false, false) | (true, true) => cand.value < cur.value,
        (true, false) => true,
        (false, true) => false,
    }
}

fn newton_direction(
    elements: &[GroupElement],
    genus: usize,
    charge: &CentralCharge,
) -> DVector<f64> {
    let spec = elements[0].spec();
    let w = relator_word(genus).expect("genus ≥ 1");
    let d1 = fox_jacobian(&w, elements).expect("tuple matches genus");
    match defect(elements, genus, charge) {
        Some(f) => {
            let jr = dexp_right(&spec, f.as_slice());
            let jac: LinearMap = match jr.clone().try_inverse() {
                Some(inv) => inv * &d1,
                None => d1.clone(),
            };
            -(pseudo_inverse(&jac, 1e-12) * f)
        }
        None => {
            // on the cut locus: move along the most effective direction of d¹
            let svd = d1.clone().svd(false, true);
            let v_t = svd.v_t.expect("right singular vectors requested");
            let (imax, _) = svd
                .singular_values
                .iter()
                .enumerate()
                .fold((0, f64::MIN), |acc, (i, &s)| if s > acc.1 { (i, s) } else { acc });
            v_t.row(imax).transpose() * 0.5
        }
    }
}

/// Projection with the full residual history.
pub fn project_traced(rep: &RepPoint, opts: &ProjectOptions) -> Result<ProjectionTrace> {
    let genus = rep.genus();
    let charge = rep.charge().clone();
    let mut elements = rep.elements().to_vec();
    let mut cur = residual_against(&elements, genus, charge.algebra());
    let mut history = vec![cur.value];
    let mut iterations = 0;
    while cur.fallback || cur.value > opts.tol {
        if iterations >= opts.max_iter {
            return Err(Error::NoConvergence { iterations, residual: cur.value });
        }
        iterations += 1;
        let step = newton_direction(&elements, genus, &charge);
        let mut accepted = None;
        for sign in [1.0, -1.0] {
            let mut alpha = sign;
            for _ in 0..MAX_HALVINGS {
                let cand = retract_all(&elements, &step, alpha);
                let res = residual_against(&cand, genus, charge.algebra());
                if improves(&res, &cur) {
                    accepted = Some((cand, res));
                    break;
                }
                alpha *= 0.5;
            }
            // a Newton direction is a descent direction; only the escape step
            // off the cut locus is tried with both signs
            if accepted.is_some() || !cur.fallback {
                break;
            }
        }
        match accepted {
            Some((cand, res)) => {
                elements = cand;
                cur = res;
                history.push(cur.value);
            }
            None => return Err(Error::NoConvergence { iterations, residual: cur.value }),
        }
    }
    Ok(ProjectionTrace { rep: rep.with_elements(elements).with_tol(opts.tol), iterations, history })
}

pub fn project_to_level_set(rep: &RepPoint, opts: &ProjectOptions) -> Result<RepPoint> {
    project_traced(rep, opts).map(|t| t.rep)
}

/// Haar start followed by projection, retrying non-convergent seeds.
pub fn sample_solved<R: Rng + ?Sized>(
    spec: &crate::lie::GroupSpec,
    genus: usize,
    charge: &CentralCharge,
    opts: &ProjectOptions,
    max_attempts: usize,
    rng: &mut R,
) -> Result<RepPoint> {
    let mut last = Error::NoConvergence { iterations: 0, residual: f64::INFINITY };
    for _ in 0..max_attempts.max(1) {
        let start = RepPoint::haar(spec, genus, charge.clone(), rng)?;
        match project_to_level_set(&start, opts) {
            Ok(rep) => return Ok(rep),
            Err(e @ Error::NoConvergence { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::GroupSpec;
    use crate::rep::residual;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solved_input_is_returned_unchanged() {
        let spec = GroupSpec::SU2;
        let rep = RepPoint::trivial(&spec, 2, CentralCharge::zero(&spec)).unwrap();
        let t = project_traced(&rep, &ProjectOptions::default()).unwrap();
        assert_eq!(t.iterations, 0);
        assert_eq!(t.rep.elements(), rep.elements());
    }

    #[test]
    fn circle_input_needs_no_iterations() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let spec = GroupSpec::U1;
        let rep = RepPoint::haar(&spec, 3, CentralCharge::zero(&spec), &mut rng).unwrap();
        let t = project_traced(&rep, &ProjectOptions::default()).unwrap();
        assert_eq!(t.iterations, 0);
        assert_eq!(t.rep.elements(), rep.elements());
    }

    #[test]
    fn su2_genus_two_converges_monotonically() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let spec = GroupSpec::SU2;
        for _ in 0..20 {
            let rep = RepPoint::haar(&spec, 2, CentralCharge::zero(&spec), &mut rng).unwrap();
            let t = project_traced(&rep, &ProjectOptions::default()).unwrap();
            assert!(residual(&t.rep) <= 1e-10);
            assert!(t.history.windows(2).all(|w| w[1] < w[0] || w[0].is_nan()));
        }
    }

    #[test]
    fn twisted_u2_level_set() {
        // exp(X) = −I is reachable: det r(χ) = 1
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let spec = GroupSpec::U2;
        let charge = CentralCharge::from_slice(&spec, &[std::f64::consts::TAU, 0.0, 0.0, 0.0]).unwrap();
        let rep = sample_solved(&spec, 2, &charge, &ProjectOptions::default(), 10, &mut rng).unwrap();
        assert!(residual(&rep) <= 1e-10);
        let minus = rep.relator_value();
        assert!(minus.distance(&charge.algebra().exp()) < 1e-9);
    }

    #[test]
    fn exhausted_budget_reports_no_convergence() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let spec = GroupSpec::SU2;
        let rep = RepPoint::haar(&spec, 2, CentralCharge::zero(&spec), &mut rng).unwrap();
        let opts = ProjectOptions { tol: 1e-10, max_iter: 1 };
        assert!(matches!(project_to_level_set(&rep, &opts), Err(Error::NoConvergence { .. })));
    }
}
