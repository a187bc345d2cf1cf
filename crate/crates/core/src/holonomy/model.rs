//! Polygon model of a central Yang–Mills connection.
//!
//! The surface is cut open along the canonical generators into a fundamental
//! polygon of unit area whose edges, read counterclockwise, spell the relator.
//! On the polygon the connection is the central potential `η = −X·f` with
//! `df = vol`, and the flat datum enters only through the edge
//! identifications. Its curvature is therefore `−X·vol`, so the holonomy
//! around a disk of signed area `a` is `exp(a·X)`.
//!
//! | chart     | genus | vertices                                  | `f`               |
//! |-----------|-------|-------------------------------------------|-------------------|
//! | `square`  | 1     | `(0,0) (1,0) (1,1) (0,1)`                 | `x dy`            |
//! | `polygon` | any   | regular `4ℓ`-gon about the origin, bottom edge horizontal | `½(x dy − y dx)` |

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{transport, MagnusOrder, PathSignal};
use crate::error::{Error, Result};
use crate::lie::{GroupElement, GroupSpec};
use crate::rep::{residual, CentralCharge, RepPoint};
use crate::words::{evaluate_word, relator_word};

/// `h = SIGNAL_SIGN · η(γ̇)`: the transport signal is minus the connection form.
pub const SIGNAL_SIGN: f64 = -1.0;

const CHART_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Square,
    Polygon,
}

impl Chart {
    pub fn for_genus(genus: usize) -> Chart {
        if genus == 1 {
            Chart::Square
        } else {
            Chart::Polygon
        }
    }

    /// Corners in counterclockwise order; edge `i` runs from corner `i` to
    /// corner `i + 1` and carries letter `i` of the relator.
    pub fn vertices(self, genus: usize) -> Vec<[f64; 2]> {
        match self {
            Chart::Square => vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            Chart::Polygon => {
                let n = 4 * genus;
                let step = TAU / n as f64;
                let radius = (2.0 / (n as f64 * step.sin())).sqrt();
                let start = -0.5 * PI - 0.5 * step;
                (0..n)
                    .map(|i| {
                        let a = start + i as f64 * step;
                        [radius * a.cos(), radius * a.sin()]
                    })
                    .collect()
            }
        }
    }

    pub fn centre(self) -> [f64; 2] {
        match self {
            Chart::Square => [0.5, 0.5],
            Chart::Polygon => [0.0, 0.0],
        }
    }

    pub fn contains(self, genus: usize, p: [f64; 2]) -> bool {
        let v = self.vertices(genus);
        (0..v.len()).all(|i| {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            cross >= -CHART_TOL
        })
    }

    /// `f` at `p` applied to the velocity `d`.
    fn potential_factor(self, p: [f64; 2], d: [f64; 2]) -> f64 {
        match self {
            Chart::Square => p[0] * d[1],
            Chart::Polygon => 0.5 * (p[0] * d[1] - p[1] * d[0]),
        }
    }

    /// `∫ f` along the straight segment `p → q`.
    pub fn edge_integral(self, p: [f64; 2], q: [f64; 2]) -> f64 {
        match self {
            Chart::Square => 0.5 * (p[0] + q[0]) * (q[1] - p[1]),
            Chart::Polygon => 0.5 * (p[0] * q[1] - p[1] * q[0]),
        }
    }
}

/// Closed polyline in chart coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskLoop {
    vertices: Vec<[f64; 2]>,
    signed_area: f64,
}

impl DiskLoop {
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() < 4 {
            return Err(Error::Invalid("a loop needs at least three distinct corners".into()));
        }
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("non-finite loop vertex".into()));
        }
        if vertices.first() != vertices.last() {
            return Err(Error::Invalid("loop is not closed".into()));
        }
        let signed_area = 0.5
            * vertices
                .windows(2)
                .map(|w| w[0][0] * w[1][1] - w[1][0] * w[0][1])
                .sum::<f64>();
        Ok(DiskLoop { vertices, signed_area })
    }

    /// Counterclockwise axis-parallel rectangle.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        DiskLoop::new(vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]])
    }

    /// Counterclockwise square of the given area centred at `c`.
    pub fn square(c: [f64; 2], area: f64) -> Result<Self> {
        let r = 0.5 * area.sqrt();
        DiskLoop::rectangle(c[0] - r, c[1] - r, c[0] + r, c[1] + r)
    }

    pub fn reversed(&self) -> DiskLoop {
        let vertices = self.vertices.iter().rev().copied().collect();
        DiskLoop { vertices, signed_area: -self.signed_area }
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn signed_area(&self) -> f64 {
        self.signed_area
    }
}

/// A central connection on the polygon model built from a point of
/// `Hom_X(Γ, G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConnection {
    flat_datum: RepPoint,
    chart: Chart,
    /// Multiplies the potential; `1` for the genuine model.
    pub potential_scale: f64,
}

impl ModelConnection {
    pub fn new(flat_datum: RepPoint) -> Result<Self> {
        let chart = Chart::for_genus(flat_datum.genus());
        ModelConnection::with_chart(flat_datum, chart)
    }

    pub fn with_chart(flat_datum: RepPoint, chart: Chart) -> Result<Self> {
        if chart == Chart::Square && flat_datum.genus() != 1 {
            return Err(Error::Invalid("the square chart is only available for genus 1".into()));
        }
        let res = residual(&flat_datum);
        if !(res <= flat_datum.tol) {
            return Err(Error::NotOnLevelSet { residual: res, tol: flat_datum.tol });
        }
        Ok(ModelConnection { flat_datum, chart, potential_scale: 1.0 })
    }

    pub fn with_potential_scale(mut self, s: f64) -> Self {
        self.potential_scale = s;
        self
    }

    pub fn spec(&self) -> &GroupSpec {
        self.flat_datum.spec()
    }

    pub fn genus(&self) -> usize {
        self.flat_datum.genus()
    }

    pub fn charge(&self) -> &CentralCharge {
        self.flat_datum.charge()
    }

    pub fn flat_datum(&self) -> &RepPoint {
        &self.flat_datum
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    fn check_inside(&self, p: [f64; 2]) -> Result<()> {
        if self.chart.contains(self.genus(), p) {
            Ok(())
        } else {
            Err(Error::ChartViolation { x: p[0], y: p[1] })
        }
    }

    /// Analytic signal of the straight segment `p → q` traversed on `[0, 1]`.
    fn segment_signal(&self, p: [f64; 2], q: [f64; 2], samples: usize) -> PathSignal {
        let x = self.charge().coords().clone();
        let coef = SIGNAL_SIGN * -self.potential_scale;
        let chart = self.chart;
        let d = [q[0] - p[0], q[1] - p[1]];
        PathSignal::from_fn(self.spec().clone(), samples, move |t| {
            let at = [p[0] + t * d[0], p[1] + t * d[1]];
            &x * (coef * chart.potential_factor(at, d))
        })
        .expect("finite potential")
    }
}

fn check_path(conn: &ModelConnection, path: &[[f64; 2]]) -> Result<()> {
    if path.len() < 2 {
        return Err(Error::Invalid("a path needs at least two points".into()));
    }
    path.iter().try_for_each(|&p| conn.check_inside(p))
}

/// Pull-back of the potential along a polyline, each segment taking equal
/// time, sampled on `samples` uniform intervals.
pub fn connection_signal_along(
    conn: &ModelConnection,
    path: &[[f64; 2]],
    samples: usize,
) -> Result<PathSignal> {
    check_path(conn, path)?;
    let segments: Vec<PathSignal> =
        path.windows(2).map(|w| conn.segment_signal(w[0], w[1], 1)).collect();
    let m = segments.len() as f64;
    PathSignal::from_fn(conn.spec().clone(), samples, move |t| {
        let i = ((t * m).floor() as usize).min(segments.len() - 1);
        // chain rule for the reparametrization onto [0, 1]
        segments[i].at(t * m - i as f64) * m
    })
}

/// Transport along a polyline, integrating each segment separately with
/// `steps / segments` steps (at least one).
pub fn transport_polyline(
    conn: &ModelConnection,
    path: &[[f64; 2]],
    steps: usize,
    order: MagnusOrder,
) -> Result<GroupElement> {
    check_path(conn, path)?;
    let per = (steps / (path.len() - 1)).max(1);
    Ok(path.windows(2).fold(conn.spec().identity(), |w, seg| {
        let h = conn.segment_signal(seg[0], seg[1], 4);
        transport(&h, per, order).mul_same(&w)
    }))
}

pub fn disk_holonomy(
    conn: &ModelConnection,
    disk: &DiskLoop,
    steps: usize,
    order: MagnusOrder,
) -> Result<GroupElement> {
    transport_polyline(conn, disk.vertices(), steps, order)
}

/// `‖Hol(∂Δ)·exp(−a_Δ X) − e‖_F`, zero for the model connection.
pub fn constraint_residual(
    conn: &ModelConnection,
    disk: &DiskLoop,
    steps: usize,
    order: MagnusOrder,
) -> Result<f64> {
    let hol = disk_holonomy(conn, disk, steps, order)?;
    let corr = conn.charge().algebra().scale(-disk.signed_area()).exp();
    Ok(hol.mul_same(&corr).distance(&conn.spec().identity()))
}

fn forward_edges(genus: usize) -> Vec<usize> {
    let w = relator_word(genus).expect("genus ≥ 1");
    let mut edge = vec![0; 2 * genus];
    for (i, l) in w.letters.iter().enumerate() {
        if !l.inverse {
            edge[l.generator] = i;
        }
    }
    edge
}

/// Holonomies of the canonical generators: the flat identification
/// `χ(g_k)·exp(−a_k X)` composed with transport along the edge of the
/// polygon that carries `g_k`, where `a_k = ∫ f` over that edge.
pub fn wilson_loop_map(conn: &ModelConnection, steps: usize, order: MagnusOrder) -> Result<RepPoint> {
    let genus = conn.genus();
    let v = conn.chart.vertices(genus);
    let n = v.len();
    let x = conn.charge().algebra();
    let mut hol = Vec::with_capacity(2 * genus);
    for (k, &i) in forward_edges(genus).iter().enumerate() {
        let (p, q) = (v[i], v[(i + 1) % n]);
        let along = transport_polyline(conn, &[p, q], steps, order)?;
        let ident = x.scale(-conn.chart.edge_integral(p, q)).exp();
        hol.push(conn.flat_datum.elements()[k].mul_same(&ident).mul_same(&along));
    }
    Ok(RepPoint::new(conn.spec().clone(), genus, hol, conn.charge().clone())?
        .with_tol(conn.flat_datum.tol))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryReport {
    /// `‖Hol(∂P) − exp(X)‖_F` for the transport around the whole polygon.
    pub boundary_error: f64,
    /// `‖r(ρ) − exp(X)‖_F` for the Wilson-loop images.
    pub relator_error: f64,
}

pub fn boundary_check(conn: &ModelConnection, steps: usize, order: MagnusOrder) -> Result<BoundaryReport> {
    let mut corners = conn.chart.vertices(conn.genus());
    corners.push(corners[0]);
    let target = conn.charge().algebra().exp();
    let around = transport_polyline(conn, &corners, steps, order)?;
    let rho = wilson_loop_map(conn, steps, order)?;
    let w = relator_word(conn.genus())?;
    let r = evaluate_word(&w, rho.elements())?;
    Ok(BoundaryReport { boundary_error: around.distance(&target), relator_error: r.distance(&target) })
}
