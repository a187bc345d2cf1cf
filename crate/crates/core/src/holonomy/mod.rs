//! Holonomy of connections along paths: the linear ODE `ẇ w⁻¹ = h`,
//! `w(0) = e`, its Magnus expansion, and the derivative of the endpoint with
//! respect to the signal.
//!
//! A [`PathSignal`] is the right logarithmic derivative `h` of the transport
//! on `[0, 1]`. It already carries the minus sign of the connection form, so
//! a constant signal `v` transports to `exp(v)`.

mod model;

pub use model::{
    boundary_check, connection_signal_along, constraint_residual, disk_holonomy,
    transport_polyline, wilson_loop_map, BoundaryReport, Chart, DiskLoop, ModelConnection,
    SIGNAL_SIGN,
};

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::lie::{AlgebraElement, GroupElement, GroupSpec};

pub type SignalFn = Arc<dyn Fn(f64) -> DVector<f64> + Send + Sync>;

/// Samples of a Lie-algebra valued signal at `t_i = i/n`, `i = 0..=n`, with an
/// optional exact evaluator used between the nodes. Without one, values
/// between nodes come from local cubic interpolation.
#[derive(Clone)]
pub struct PathSignal {
    spec: GroupSpec,
    samples: Vec<DVector<f64>>,
    eval: Option<SignalFn>,
}

impl fmt::Debug for PathSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PathSignal")
            .field("spec", &self.spec)
            .field("intervals", &self.intervals())
            .field("analytic", &self.eval.is_some())
            .finish()
    }
}

impl PathSignal {
    pub fn from_samples(spec: GroupSpec, samples: Vec<DVector<f64>>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Invalid("a signal needs at least two samples".into()));
        }
        for s in &samples {
            if s.len() != spec.dim() {
                return Err(Error::LengthMismatch { expected: spec.dim(), found: s.len() });
            }
            if s.iter().any(|x| !x.is_finite()) {
                return Err(Error::Invalid("non-finite signal sample".into()));
            }
        }
        Ok(PathSignal { spec, samples, eval: None })
    }

    /// Samples `f` on `n` uniform intervals and keeps `f` for evaluation.
    pub fn from_fn<F>(spec: GroupSpec, n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> DVector<f64> + Send + Sync + 'static,
    {
        let n = n.max(1);
        let samples = (0..=n).map(|i| f(i as f64 / n as f64)).collect();
        let mut s = PathSignal::from_samples(spec, samples)?;
        s.eval = Some(Arc::new(f));
        Ok(s)
    }

    pub fn constant(v: &AlgebraElement, n: usize) -> Self {
        let c = v.coords.clone();
        PathSignal::from_fn(v.spec.clone(), n, move |_| c.clone()).expect("finite constant")
    }

    pub fn zero(spec: &GroupSpec, n: usize) -> Self {
        PathSignal::constant(&spec.zero(), n)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Number of sampling intervals `n`.
    pub fn intervals(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn samples(&self) -> &[DVector<f64>] {
        &self.samples
    }

    pub fn is_analytic(&self) -> bool {
        self.eval.is_some()
    }

    /// Value at `t ∈ [0, 1]`.
    pub fn at(&self, t: f64) -> DVector<f64> {
        match &self.eval {
            Some(f) => f(t),
            None => self.interpolate(t),
        }
    }

    fn interpolate(&self, t: f64) -> DVector<f64> {
        let n = self.intervals();
        let x = t.clamp(0.0, 1.0) * n as f64;
        let width = 4.min(n + 1);
        // stencil of `width` consecutive nodes around x
        let lo = (x.floor() as isize - (width as isize - 1) / 2).clamp(0, (n + 1 - width) as isize) as usize;
        let mut out = DVector::zeros(self.spec.dim());
        for j in lo..lo + width {
            let mut w = 1.0;
            for m in lo..lo + width {
                if m != j {
                    w *= (x - m as f64) / (j as f64 - m as f64);
                }
            }
            out += &self.samples[j] * w;
        }
        out
    }

    fn map_samples(&self, f: impl Fn(&DVector<f64>) -> DVector<f64>) -> Vec<DVector<f64>> {
        self.samples.iter().map(f).collect()
    }

    pub fn scaled(&self, s: f64) -> PathSignal {
        PathSignal {
            spec: self.spec.clone(),
            samples: self.map_samples(|v| v * s),
            eval: self.eval.clone().map(|f| Arc::new(move |t| f(t) * s) as SignalFn),
        }
    }

    /// `self + s·other`; both must share the sampling grid.
    pub fn add_scaled(&self, other: &PathSignal, s: f64) -> Result<PathSignal> {
        if other.spec != self.spec {
            return Err(Error::SpecMismatch { expected: self.spec.clone(), found: other.spec.clone() });
        }
        if other.samples.len() != self.samples.len() {
            return Err(Error::LengthMismatch { expected: self.samples.len(), found: other.samples.len() });
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b * s).collect();
        let eval = match (&self.eval, &other.eval) {
            (Some(f), Some(g)) => {
                let (f, g) = (f.clone(), g.clone());
                Some(Arc::new(move |t| f(t) + g(t) * s) as SignalFn)
            }
            _ => None,
        };
        Ok(PathSignal { spec: self.spec.clone(), samples, eval })
    }

    /// The signal of the reversed path, `t ↦ −h(1 − t)`.
    pub fn reversed(&self) -> PathSignal {
        let samples = self.samples.iter().rev().map(|v| -v).collect();
        let eval = self.eval.clone().map(|f| Arc::new(move |t| -f(1.0 - t)) as SignalFn);
        PathSignal { spec: self.spec.clone(), samples, eval }
    }

    /// The signal of `self` followed by `next`, each run at double speed.
    /// Analytic signals stay analytic; sampled signals must have equal grids.
    pub fn concat(&self, next: &PathSignal) -> Result<PathSignal> {
        if next.spec != self.spec {
            return Err(Error::SpecMismatch { expected: self.spec.clone(), found: next.spec.clone() });
        }
        match (&self.eval, &next.eval) {
            (Some(f), Some(g)) => {
                let (f, g) = (f.clone(), g.clone());
                let n = self.intervals() + next.intervals();
                PathSignal::from_fn(self.spec.clone(), n, move |t| {
                    if t <= 0.5 {
                        f(2.0 * t) * 2.0
                    } else {
                        g(2.0 * t - 1.0) * 2.0
                    }
                })
            }
            _ => {
                if next.samples.len() != self.samples.len() {
                    return Err(Error::LengthMismatch {
                        expected: self.samples.len(),
                        found: next.samples.len(),
                    });
                }
                // the node at t = ½ takes the first half's endpoint value
                let mut samples = self.map_samples(|v| v * 2.0);
                samples.extend(next.samples[1..].iter().map(|v| v * 2.0));
                PathSignal::from_samples(self.spec.clone(), samples)
            }
        }
    }

    /// `∫₀¹ h` by composite Simpson.
    pub fn integral(&self) -> DVector<f64> {
        simpson(&self.samples, 1.0 / self.intervals() as f64)
    }
}

/// Composite Simpson on uniformly spaced values, closing an odd interval
/// count with the 3/8 rule; two points fall back to the trapezoid.
fn simpson(f: &[DVector<f64>], dt: f64) -> DVector<f64> {
    let n = f.len() - 1;
    let mut acc = DVector::zeros(f[0].len());
    if n == 1 {
        return (&f[0] + &f[1]) * (0.5 * dt);
    }
    let even_end = if n.is_multiple_of(2) { n } else { n - 3 };
    let mut i = 0;
    while i < even_end {
        acc += (&f[i] + &f[i + 1] * 4.0 + &f[i + 2]) * (dt / 3.0);
        i += 2;
    }
    if n % 2 == 1 {
        let j = n - 3;
        acc += (&f[j] + &f[j + 1] * 3.0 + &f[j + 2] * 3.0 + &f[j + 3]) * (3.0 * dt / 8.0);
    }
    acc
}

/// `H_i = ∫₀^{t_i} h` at every node, fourth order for at least four nodes.
fn cumulative(f: &[DVector<f64>], dt: f64) -> Vec<DVector<f64>> {
    let n = f.len() - 1;
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = DVector::zeros(f[0].len());
    out.push(acc.clone());
    for i in 0..n {
        let inc = if n < 3 {
            (&f[i] + &f[i + 1]) * 0.5
        } else if i == 0 {
            (&f[0] * 9.0 + &f[1] * 19.0 - &f[2] * 5.0 + &f[3]) / 24.0
        } else if i == n - 1 {
            (&f[n - 3] - &f[n - 2] * 5.0 + &f[n - 1] * 19.0 + &f[n] * 9.0) / 24.0
        } else {
            (-&f[i - 1] + &f[i] * 13.0 + &f[i + 1] * 13.0 - &f[i + 2]) / 24.0
        };
        acc += inc * dt;
        out.push(acc.clone());
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MagnusOrder {
    /// Exponential midpoint rule.
    Two,
    /// Two-point Gauss Magnus method.
    Four,
}

impl TryFrom<u32> for MagnusOrder {
    type Error = Error;

    fn try_from(v: u32) -> Result<Self> {
        match v {
            2 => Ok(MagnusOrder::Two),
            4 => Ok(MagnusOrder::Four),
            _ => Err(Error::Invalid(format!("integrator order must be 2 or 4, got {v}"))),
        }
    }
}

impl From<MagnusOrder> for u32 {
    fn from(o: MagnusOrder) -> u32 {
        match o {
            MagnusOrder::Two => 2,
            MagnusOrder::Four => 4,
        }
    }
}

const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9; // √3/6

fn magnus_step(h: &PathSignal, t: f64, dt: f64, order: MagnusOrder) -> DVector<f64> {
    match order {
        MagnusOrder::Two => h.at(t + 0.5 * dt) * dt,
        MagnusOrder::Four => {
            let a1 = h.at(t + (0.5 - GAUSS_OFFSET) * dt);
            let a2 = h.at(t + (0.5 + GAUSS_OFFSET) * dt);
            let comm = h.spec.bracket(&a2, &a1);
            (&a1 + &a2) * (0.5 * dt) + comm * (3f64.sqrt() / 12.0 * dt * dt)
        }
    }
}

/// States `w(t_i)` on `steps` uniform steps of `[t0, t1]`, starting from `w0`.
fn integrate(
    h: &PathSignal,
    w0: GroupElement,
    t0: f64,
    t1: f64,
    steps: usize,
    order: MagnusOrder,
) -> GroupElement {
    let dt = (t1 - t0) / steps as f64;
    let mut w = w0;
    for i in 0..steps {
        let omega = magnus_step(h, t0 + i as f64 * dt, dt, order);
        w = h.spec.exp_coords(omega.as_slice()).mul_same(&w);
    }
    w
}

/// `w(1)` for `ẇ w⁻¹ = h`, `w(0) = e`.
///
/// # Panics
/// If `steps` is zero.
pub fn transport(h: &PathSignal, steps: usize, order: MagnusOrder) -> GroupElement {
    assert!(steps >= 1, "transport needs at least one step");
    integrate(h, h.spec.identity(), 0.0, 1.0, steps, order)
}

/// The first two Magnus terms at `t = 1`:
/// `Y⁽¹⁾ = ∫₀¹ h` and `Y⁽²⁾ = ½∫₀¹∫₀^{τ₁} [h(τ₁), h(τ₂)] dτ₂ dτ₁`,
/// by quadrature on the samples.
pub fn magnus_y1_y2(h: &PathSignal) -> (AlgebraElement, AlgebraElement) {
    let dt = 1.0 / h.intervals() as f64;
    let y1 = simpson(&h.samples, dt);
    let big_h = cumulative(&h.samples, dt);
    let integrand: Vec<DVector<f64>> =
        h.samples.iter().zip(&big_h).map(|(a, b)| h.spec.bracket(a, b)).collect();
    let y2 = simpson(&integrand, dt) * 0.5;
    (AlgebraElement::new(h.spec.clone(), y1), AlgebraElement::new(h.spec.clone(), y2))
}

const DERIVATIVE_SUBSTEPS: usize = 4;

/// Right-trivialized derivative of `transport` in the direction `δ`:
/// `∫₀¹ Ad(w(1) w(τ)⁻¹) δ(τ) dτ`, which is `∫₀¹ δ` at `h ≡ 0`. The base flow is
/// resolved on the sampling grid of `δ`.
pub fn holonomy_derivative(h: &PathSignal, delta: &PathSignal) -> Result<AlgebraElement> {
    if delta.spec != h.spec {
        return Err(Error::SpecMismatch { expected: h.spec.clone(), found: delta.spec.clone() });
    }
    let n = delta.intervals();
    let dt = 1.0 / n as f64;
    let mut states = Vec::with_capacity(n + 1);
    let mut w = h.spec.identity();
    states.push(w.clone());
    for i in 0..n {
        let t = i as f64 * dt;
        w = integrate(h, w, t, t + dt, DERIVATIVE_SUBSTEPS, MagnusOrder::Four);
        states.push(w.clone());
    }
    let end = states[n].clone();
    let integrand: Vec<DVector<f64>> = states
        .iter()
        .zip(&delta.samples)
        .map(|(wi, d)| end.mul_same(&wi.inverse()).adjoint() * d)
        .collect();
    Ok(AlgebraElement::new(h.spec.clone(), simpson(&integrand, dt)))
}

/// Central finite difference `(log(T(h+sδ)T(h)⁻¹) − log(T(h−sδ)T(h)⁻¹)) / 2s`,
/// the independent check of [`holonomy_derivative`].
pub fn holonomy_derivative_fd(
    h: &PathSignal,
    delta: &PathSignal,
    s: f64,
    steps: usize,
    order: MagnusOrder,
) -> Result<AlgebraElement> {
    let base_inv = transport(h, steps, order).inverse();
    let side = |sign: f64| -> Result<DVector<f64>> {
        let moved = transport(&h.add_scaled(delta, sign * s)?, steps, order);
        Ok(moved.mul_same(&base_inv).log()?.coords)
    };
    let d = (side(1.0)? - side(-1.0)?) / (2.0 * s);
    Ok(AlgebraElement::new(h.spec.clone(), d))
}
