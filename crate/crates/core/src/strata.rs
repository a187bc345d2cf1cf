//! Yang–Mills strata: adjoint orbits of charges, their centralizers `G_X`,
//! and constructive fiber witnesses in `Hom_X(Γ, G_X)`.
//!
//! Orbit representatives live in the fixed maximal torus spanned by the third
//! basis vector (the last one for `U2`) and are dominant, i.e. the torus
//! coordinate is positive. The quantization condition on a non-central `X` is
//! that `exp(X) = e` inside the abelian `G_X`, since the relator of a tuple of
//! commuting elements is trivial.
//!
//! | group   | `X`            | `G_X`      | `G_X ↪ G`                          | admissible charges                 |
//! |---------|----------------|------------|------------------------------------|------------------------------------|
//! | `U1`    | any            | `U1`       | identity                           | `2πn`                              |
//! | `T<n>`  | any            | `T<n>`     | identity                           | `2πℤⁿ`                             |
//! | `SU2`   | `0`            | `SU2`      | identity                           | `0`                                |
//! | `SU2`   | `(0,0,c)`      | `T1`       | `α ↦ exp(2α e₃)`                    | `c = 4πn`, `n ≥ 1`                 |
//! | `SO3`   | `0`            | `SO3`      | identity                           | `0`, one stratum per class `±1`    |
//! | `SO3`   | `(0,0,c)`      | `T1`       | `α ↦ exp(α e₃)`                     | `c = 2πn`, `n ≥ 1`                 |
//! | `U2`    | `(θ,0,0,0)`    | `U2`       | identity                           | `θ = 2πn`                          |
//! | `U2`    | `(θ,0,0,c)`    | `T2`       | `(α,β) ↦ diag(e^{iα}, e^{iβ})`      | `θ = 2π(a+b)`, `c = 2π(a−b)`, `a > b` |

use std::io::Write;

use nalgebra::DVector;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lie::{haar_sample, AlgebraElement, GroupElement, GroupSpec};
use crate::linalg::kernel;
use crate::rep::{
    cohomology_dims, component_invariant, residual_against, sample_solved, CentralCharge,
    ProjectOptions, RepPoint,
};

const ZERO_TOL: f64 = 1e-12;

/// Exactness required of `exp(X) = e` for abelian fibers.
pub const LATTICE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Embedding {
    Identity,
    Su2Torus,
    So3Torus,
    U2Torus,
}

impl Embedding {
    fn of(x: &AlgebraElement) -> Result<(GroupSpec, Embedding)> {
        let c = x.coords.as_slice();
        let small = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt() <= ZERO_TOL;
        Ok(match &x.spec {
            GroupSpec::U1 | GroupSpec::Torus(_) => (x.spec.clone(), Embedding::Identity),
            GroupSpec::SU2 if small(c) => (GroupSpec::SU2, Embedding::Identity),
            GroupSpec::SU2 => (GroupSpec::Torus(1), Embedding::Su2Torus),
            GroupSpec::SO3 if small(c) => (GroupSpec::SO3, Embedding::Identity),
            GroupSpec::SO3 => (GroupSpec::Torus(1), Embedding::So3Torus),
            GroupSpec::U2 if small(&c[1..]) => (GroupSpec::U2, Embedding::Identity),
            GroupSpec::U2 => (GroupSpec::Torus(2), Embedding::U2Torus),
            GroupSpec::Product(_) => return Err(Error::UnsupportedGroup(x.spec.clone())),
        })
    }

    /// Coordinates in `𝔤_X` of a torus-aligned `X`.
    fn restrict(self, x: &AlgebraElement) -> Result<DVector<f64>> {
        let c = &x.coords;
        let aligned = |idx: &[usize]| idx.iter().all(|&i| c[i].abs() <= ZERO_TOL);
        match self {
            Embedding::Identity => Ok(c.clone()),
            Embedding::Su2Torus | Embedding::So3Torus if !aligned(&[0, 1]) => {
                Err(Error::Invalid("orbit representative must lie along the third axis".into()))
            }
            Embedding::Su2Torus => Ok(DVector::from_element(1, 0.5 * c[2])),
            Embedding::So3Torus => Ok(DVector::from_element(1, c[2])),
            Embedding::U2Torus if !aligned(&[1, 2]) => {
                Err(Error::Invalid("orbit representative must be diagonal".into()))
            }
            Embedding::U2Torus => Ok(DVector::from_vec(vec![0.5 * (c[0] + c[3]), 0.5 * (c[0] - c[3])])),
        }
    }

    fn embed(self, g: &GroupElement) -> GroupElement {
        match (self, g) {
            (Embedding::Identity, _) => g.clone(),
            (Embedding::Su2Torus, GroupElement::Torus(a)) => GroupSpec::SU2.exp_coords(&[0.0, 0.0, 2.0 * a[0]]),
            (Embedding::So3Torus, GroupElement::Torus(a)) => GroupSpec::SO3.exp_coords(&[0.0, 0.0, a[0]]),
            (Embedding::U2Torus, GroupElement::Torus(a)) => {
                GroupSpec::U2.exp_coords(&[a[0] + a[1], 0.0, 0.0, a[0] - a[1]])
            }
            _ => unreachable!("torus embeddings take torus elements"),
        }
    }
}

/// The concrete group `G_X`; products are handled factorwise.
pub fn centralizer_spec(x: &AlgebraElement) -> Result<GroupSpec> {
    match &x.spec {
        GroupSpec::Product(fs) => {
            let mut off = 0;
            let mut parts = Vec::with_capacity(fs.len());
            for f in fs {
                let sub = AlgebraElement::new(f.clone(), x.coords.rows(off, f.dim()).into_owned());
                parts.push(centralizer_spec(&sub)?);
                off += f.dim();
            }
            Ok(GroupSpec::product(parts))
        }
        _ => Embedding::of(x).map(|(s, _)| s),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdjointOrbitDatum {
    pub representative: AlgebraElement,
    pub centralizer: GroupSpec,
    /// `dim G − dim G_X`.
    pub orbit_dim: usize,
}

impl AdjointOrbitDatum {
    pub fn new(representative: AlgebraElement) -> Result<Self> {
        let centralizer = centralizer_spec(&representative)?;
        let orbit_dim = representative.spec.dim() - centralizer.dim();
        Ok(AdjointOrbitDatum { representative, centralizer, orbit_dim })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct YMStratumDescriptor {
    pub group: GroupSpec,
    pub genus: usize,
    pub orbit: AdjointOrbitDatum,
    /// `dim H¹` of the fiber complex at the sampled witnesses.
    pub fiber_h1: usize,
    /// `dim ker d¹ = h¹ + dim 𝔤_X − h⁰`, the local dimension of `Hom_X(Γ, G_X)`.
    pub fiber_dim: usize,
    /// Class in `π₁` of the semisimple part of `G_X`, `±1` when it is `ℤ/2`.
    pub component_label: i64,
    /// Whether the label was computed by lifting to a cover. Otherwise the
    /// semisimple part is simply connected and the stratum holds all classes.
    pub label_from_cover: bool,
    pub total_dim: usize,
    /// A fiber point, embedded in `G^{2ℓ}`.
    pub witness: Vec<GroupElement>,
}

impl YMStratumDescriptor {
    pub fn charge_norm(&self) -> f64 {
        self.orbit.representative.norm()
    }
}

/// Every element commutes with `X` (to `tol` relative to `‖X‖`) and the relator
/// equals `exp(X)` to `tol`. The charge stored in `rep` is not used.
pub fn ym_point_check(rep: &RepPoint, x: &AlgebraElement, tol: f64) -> bool {
    ym_elements_check(rep.elements(), rep.genus(), x, tol)
}

pub fn ym_elements_check(elements: &[GroupElement], genus: usize, x: &AlgebraElement, tol: f64) -> bool {
    if elements.len() != 2 * genus || elements.iter().any(|g| g.spec() != x.spec) {
        return false;
    }
    let scale = x.norm().max(1.0);
    let in_centralizer = elements.iter().all(|g| (g.adjoint() * &x.coords - &x.coords).norm() <= tol * scale);
    in_centralizer && residual_against(elements, genus, x).value <= tol
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrataOptions {
    pub project: ProjectOptions,
    pub rank_tol: f64,
    /// Solver restarts per fiber witness.
    pub max_attempts: usize,
    /// Witnesses sampled when separating components by a cover.
    pub label_samples: usize,
}

impl Default for StrataOptions {
    fn default() -> Self {
        StrataOptions { project: ProjectOptions::default(), rank_tol: 1e-8, max_attempts: 20, label_samples: 200 }
    }
}

const WITNESSES: usize = 3;

/// Candidate orbit representatives with `‖X‖ ≤ bound`.
fn charges(spec: &GroupSpec, bound: f64) -> Result<Vec<DVector<f64>>> {
    let tau = std::f64::consts::TAU;
    let k = (bound / tau + 1e-9).floor() as i64;
    let within = |v: &DVector<f64>| v.norm() <= bound * (1.0 + 1e-12);
    let mut out: Vec<DVector<f64>> = Vec::new();
    match spec {
        GroupSpec::U1 => out.extend((-k..=k).map(|n| DVector::from_element(1, tau * n as f64))),
        GroupSpec::Torus(d) => {
            let mut idx = vec![-k; *d];
            if *d > 0 {
                loop {
                    let v = DVector::from_iterator(*d, idx.iter().map(|&n| tau * n as f64));
                    if within(&v) {
                        out.push(v);
                    }
                    let mut j = 0;
                    while j < *d && idx[j] == k {
                        idx[j] = -k;
                        j += 1;
                    }
                    if j == *d {
                        break;
                    }
                    idx[j] += 1;
                }
            } else {
                out.push(DVector::zeros(0));
            }
        }
        GroupSpec::SU2 | GroupSpec::SO3 => {
            let period = if *spec == GroupSpec::SU2 { 2.0 * tau } else { tau };
            out.push(DVector::zeros(3));
            let mut n = 1;
            while period * n as f64 <= bound * (1.0 + 1e-12) {
                out.push(DVector::from_vec(vec![0.0, 0.0, period * n as f64]));
                n += 1;
            }
        }
        GroupSpec::U2 => {
            out.extend((-k..=k).map(|n| DVector::from_vec(vec![tau * n as f64, 0.0, 0.0, 0.0])));
            for a in -k..=k {
                for b in -k..a {
                    let v = DVector::from_vec(vec![tau * (a + b) as f64, 0.0, 0.0, tau * (a - b) as f64]);
                    if within(&v) {
                        out.push(v);
                    }
                }
            }
        }
        GroupSpec::Product(_) => return Err(Error::UnsupportedGroup(spec.clone())),
    }
    Ok(out)
}

struct Fiber {
    points: Vec<RepPoint>,
    labels: Vec<i64>,
}

fn fiber_point<R: Rng + ?Sized>(
    gx: &GroupSpec,
    genus: usize,
    charge: &CentralCharge,
    opts: &StrataOptions,
    rng: &mut R,
) -> Result<RepPoint> {
    if gx.is_abelian() {
        let elements = (0..2 * genus).map(|_| haar_sample(gx, rng)).collect();
        RepPoint::new(gx.clone(), genus, elements, charge.clone())
    } else {
        sample_solved(gx, genus, charge, &opts.project, opts.max_attempts, rng)
    }
}

fn fiber_dims(points: &[RepPoint], rank_tol: f64) -> Result<(usize, usize)> {
    let mut seen: Option<(usize, usize)> = None;
    for p in points {
        let d = cohomology_dims(p, rank_tol)?;
        let dim_gx = p.spec().dim();
        let pair = (d.h1, d.h1 + dim_gx - d.h0);
        match seen {
            None => seen = Some(pair),
            Some(s) if s != pair => {
                return Err(Error::Invalid(format!(
                    "fiber dimensions disagree between sampled points: {s:?} vs {pair:?}"
                )))
            }
            _ => {}
        }
    }
    seen.ok_or_else(|| Error::Invalid("no fiber witness".into()))
}

/// All strata with `‖X‖ ≤ bound`, each certified by sampled fiber witnesses.
pub fn enumerate_strata<R: Rng + ?Sized>(
    spec: &GroupSpec,
    genus: usize,
    bound: f64,
    opts: &StrataOptions,
    rng: &mut R,
) -> Result<Vec<YMStratumDescriptor>> {
    if genus < 1 {
        return Err(Error::InvalidGenus(genus));
    }
    if !(bound >= 0.0) {
        return Err(Error::Invalid(format!("bound must be non-negative, got {bound}")));
    }
    let mut out = Vec::new();
    for coords in charges(spec, bound)? {
        let x = AlgebraElement::new(spec.clone(), coords);
        let orbit = AdjointOrbitDatum::new(x.clone())?;
        let (gx, emb) = Embedding::of(&x)?;
        let restricted = AlgebraElement::new(gx.clone(), emb.restrict(&x)?);
        if gx.is_abelian() && restricted.exp().distance(&gx.identity()) > LATTICE_TOL {
            continue;
        }
        let charge = CentralCharge::new(restricted)?;
        let by_cover = gx == GroupSpec::SO3;
        let fibers: Vec<Fiber> = if by_cover {
            let mut plus = Fiber { points: Vec::new(), labels: Vec::new() };
            let mut minus = Fiber { points: Vec::new(), labels: Vec::new() };
            for _ in 0..opts.label_samples {
                if plus.points.len() >= WITNESSES && minus.points.len() >= WITNESSES {
                    break;
                }
                let p = fiber_point(&gx, genus, &charge, opts, rng)?;
                let label = component_invariant(&p)?.label();
                let target = if label == 1 { &mut plus } else { &mut minus };
                if target.points.len() < WITNESSES {
                    target.points.push(p);
                    target.labels.push(label);
                }
            }
            [plus, minus].into_iter().filter(|f| !f.points.is_empty()).collect()
        } else {
            let points = (0..WITNESSES)
                .map(|_| fiber_point(&gx, genus, &charge, opts, rng))
                .collect::<Result<Vec<_>>>()?;
            vec![Fiber { labels: vec![1; points.len()], points }]
        };
        for f in fibers {
            let (fiber_h1, fiber_dim) = fiber_dims(&f.points, opts.rank_tol)?;
            let witness: Vec<GroupElement> = f.points[0].elements().iter().map(|g| emb.embed(g)).collect();
            out.push(YMStratumDescriptor {
                group: spec.clone(),
                genus,
                orbit: orbit.clone(),
                fiber_h1,
                fiber_dim,
                component_label: f.labels[0],
                label_from_cover: by_cover,
                total_dim: orbit.orbit_dim + fiber_dim,
                witness,
            });
        }
    }
    Ok(out)
}

/// Distinct strata with the same component label have representatives more
/// than `1e-6` apart.
pub fn strata_disjoint(strata: &[YMStratumDescriptor]) -> bool {
    strata.iter().enumerate().all(|(i, a)| {
        strata[i + 1..].iter().all(|b| {
            a.component_label != b.component_label
                || (&a.orbit.representative.coords - &b.orbit.representative.coords).norm() > 1e-6
        })
    })
}

pub const CSV_HEADER: &str = "group,genus,charge_norm,orbit_dim,fiber_h1,component_label,total_dim";

pub fn write_csv<W: Write>(strata: &[YMStratumDescriptor], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for s in strata {
        writeln!(
            w,
            "{},{},{:.16e},{},{},{},{}",
            s.group,
            s.genus,
            s.charge_norm(),
            s.orbit.orbit_dim,
            s.fiber_h1,
            s.component_label,
            s.total_dim
        )?;
    }
    Ok(())
}

/// Dimension of `ker ad(X)`, independent of [`centralizer_spec`].
pub fn centralizer_dim(x: &AlgebraElement) -> usize {
    kernel(&x.ad(), 1e-10).ncols().min(x.spec.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn el(spec: GroupSpec, c: &[f64]) -> AlgebraElement {
        AlgebraElement::from_slice(spec, c).unwrap()
    }

    #[test]
    fn centralizers() {
        assert_eq!(centralizer_spec(&GroupSpec::SU2.zero()).unwrap(), GroupSpec::SU2);
        let x = el(GroupSpec::SU2, &[0.0, 0.0, 1.0]);
        assert_eq!(centralizer_spec(&x).unwrap(), GroupSpec::Torus(1));
        let y = el(GroupSpec::U2, &[0.3, 0.0, 0.0, 1.0]);
        assert_eq!(centralizer_spec(&y).unwrap(), GroupSpec::Torus(2));
        assert_eq!(centralizer_spec(&el(GroupSpec::U2, &[0.3, 0.0, 0.0, 0.0])).unwrap(), GroupSpec::U2);
        assert_eq!(centralizer_spec(&el(GroupSpec::U1, &[2.0])).unwrap(), GroupSpec::U1);
        for x in [x, y, el(GroupSpec::SO3, &[0.1, 0.7, -0.2]), GroupSpec::SO3.zero()] {
            assert_eq!(centralizer_dim(&x), centralizer_spec(&x).unwrap().dim());
        }
        let p = el("SU2*U1".parse().unwrap(), &[0.0, 0.0, 1.0, 4.0]);
        assert_eq!(centralizer_spec(&p).unwrap(), "T1*U1".parse().unwrap());
    }

    #[test]
    fn embeddings_commute_with_exp() {
        for (spec, c) in [
            (GroupSpec::SU2, vec![0.0, 0.0, 1.3]),
            (GroupSpec::SO3, vec![0.0, 0.0, 0.4]),
            (GroupSpec::U2, vec![0.5, 0.0, 0.0, -0.9]),
        ] {
            let x = AlgebraElement::new(spec.clone(), DVector::from_vec(c));
            let (gx, emb) = Embedding::of(&x).unwrap();
            let r = AlgebraElement::new(gx, emb.restrict(&x).unwrap());
            assert!(emb.embed(&r.exp()).distance(&x.exp()) < 1e-14, "{spec}");
        }
    }

    #[test]
    fn point_check() {
        let spec = GroupSpec::SU2;
        let rep = RepPoint::trivial(&spec, 2, CentralCharge::zero(&spec)).unwrap();
        assert!(ym_point_check(&rep, &spec.zero(), 1e-10));
        // X = 4π e₃ has exp(X) = e; torus elements commute
        let x = el(spec.clone(), &[0.0, 0.0, 2.0 * TAU]);
        let t = |a: f64| spec.exp_coords(&[0.0, 0.0, a]);
        let on = RepPoint::new(spec.clone(), 1, vec![t(0.3), t(2.1)], CentralCharge::zero(&spec)).unwrap();
        assert!(ym_point_check(&on, &x, 1e-10));
        let off_torus = spec.exp_coords(&[0.4, 0.0, 0.0]);
        let off = RepPoint::new(spec.clone(), 1, vec![off_torus, t(2.1)], CentralCharge::zero(&spec)).unwrap();
        assert!(!ym_point_check(&off, &el(spec.clone(), &[0.0, 0.0, 1.0]), 1e-10));
    }

    #[test]
    fn circle_strata() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for genus in 1..=3 {
            let s = enumerate_strata(&GroupSpec::U1, genus, 3.0 * TAU, &StrataOptions::default(), &mut rng)
                .unwrap();
            let ns: Vec<f64> = s.iter().map(|d| d.orbit.representative.coords[0] / TAU).collect();
            assert_eq!(ns, vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
            for d in &s {
                assert_eq!((d.fiber_h1, d.orbit.orbit_dim, d.total_dim), (2 * genus, 0, 2 * genus));
                assert!(ym_elements_check(&d.witness, genus, &d.orbit.representative, 1e-10));
            }
            assert!(strata_disjoint(&s));
        }
    }

    #[test]
    fn su2_genus_two_strata() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = enumerate_strata(&GroupSpec::SU2, 2, 2.0 * 2.0 * TAU, &StrataOptions::default(), &mut rng)
            .unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!((s[0].fiber_h1, s[0].orbit.orbit_dim, s[0].fiber_dim), (6, 0, 9));
        for d in &s[1..] {
            assert_eq!(d.orbit.centralizer, GroupSpec::Torus(1));
            assert_eq!((d.orbit.orbit_dim, d.fiber_h1, d.fiber_dim, d.total_dim), (2, 4, 4, 6));
        }
        for d in &s {
            assert!(ym_elements_check(&d.witness, 2, &d.orbit.representative, 1e-10));
        }
        assert!(strata_disjoint(&s));
    }

    #[test]
    fn so3_central_stratum_splits_by_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = enumerate_strata(&GroupSpec::SO3, 2, 0.0, &StrataOptions::default(), &mut rng).unwrap();
        let mut labels: Vec<i64> = s.iter().map(|d| d.component_label).collect();
        labels.sort();
        assert_eq!(labels, vec![-1, 1]);
        assert!(s.iter().all(|d| d.label_from_cover && d.fiber_h1 == 6));
        assert!(strata_disjoint(&s));
    }

    #[test]
    fn unitary_strata() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = enumerate_strata(&GroupSpec::U2, 1, TAU * 1.5, &StrataOptions::default(), &mut rng).unwrap();
        assert!(!s.is_empty());
        for d in &s {
            assert!(ym_elements_check(&d.witness, 1, &d.orbit.representative, 1e-10), "{:?}", d.orbit);
        }
        let non_central = s.iter().filter(|d| d.orbit.centralizer == GroupSpec::Torus(2)).count();
        assert!(non_central > 0);
        assert!(matches!(
            enumerate_strata(&"SU2*U1".parse().unwrap(), 1, 1.0, &StrataOptions::default(), &mut rng),
            Err(Error::UnsupportedGroup(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = enumerate_strata(&GroupSpec::U1, 1, TAU, &StrataOptions::default(), &mut rng).unwrap();
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("U1,1,6.2831853071795862e0,0,2,1,2"));
        assert!(!text.contains('\r'));
    }
}
