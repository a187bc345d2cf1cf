//! JSON file formats.
//!
//! Reals are written with 17 significant digits, so values round-trip
//! exactly. Group elements are stored as flat arrays:
//!
//! | group      | payload                                        |
//! |------------|------------------------------------------------|
//! | `U1`       | `[re, im]`                                     |
//! | `SU2`      | `[w, x, y, z]`                                 |
//! | `SO3`      | 9 entries, row-major                           |
//! | `T<n>`     | `n` angles                                     |
//! | `U2`       | 8 entries, `(re, im)` pairs in row-major order |
//! | products   | one nested payload per factor                  |

use std::io;

use nalgebra::{Matrix2, Matrix3, Quaternion};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::holonomy::{Chart, ModelConnection};
use crate::lie::{GroupElement, GroupSpec};
use crate::rep::{residual, CentralCharge, RepPoint};
use crate::strata::YMStratumDescriptor;

/// Compact JSON with reals in `{:.16e}` notation.
#[derive(Debug, Clone, Copy, Default)]
pub struct PreciseFormatter;

impl Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, PreciseFormatter);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub fn element_payload(g: &GroupElement) -> Value {
    let nums = |v: Vec<f64>| Value::from(v);
    match g {
        GroupElement::U1(z) => nums(vec![z.re, z.im]),
        GroupElement::SU2(q) => nums(vec![q.w, q.i, q.j, q.k]),
        GroupElement::SO3(r) => nums((0..9).map(|i| r[(i / 3, i % 3)]).collect()),
        GroupElement::Torus(a) => nums(a.clone()),
        GroupElement::U2(m) => {
            nums((0..4).flat_map(|i| [m[(i / 2, i % 2)].re, m[(i / 2, i % 2)].im]).collect())
        }
        GroupElement::Product(es) => Value::Array(es.iter().map(element_payload).collect()),
    }
}

fn numbers(v: &Value, len: usize) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or_else(|| bad("element payload must be an array"))?;
    if arr.len() != len {
        return Err(Error::LengthMismatch { expected: len, found: arr.len() });
    }
    arr.iter().map(|x| x.as_f64().ok_or_else(|| bad("element payload must hold numbers"))).collect()
}

pub fn element_from_payload(spec: &GroupSpec, v: &Value) -> Result<GroupElement> {
    Ok(match spec {
        GroupSpec::U1 => {
            let n = numbers(v, 2)?;
            GroupElement::U1(Complex64::new(n[0], n[1]))
        }
        GroupSpec::SU2 => {
            let n = numbers(v, 4)?;
            GroupElement::SU2(Quaternion::new(n[0], n[1], n[2], n[3]))
        }
        GroupSpec::SO3 => GroupElement::SO3(Matrix3::from_row_slice(&numbers(v, 9)?)),
        GroupSpec::Torus(d) => GroupElement::Torus(numbers(v, *d)?),
        GroupSpec::U2 => {
            let n = numbers(v, 8)?;
            let c = |i: usize| Complex64::new(n[2 * i], n[2 * i + 1]);
            GroupElement::U2(Matrix2::new(c(0), c(1), c(2), c(3)))
        }
        GroupSpec::Product(fs) => {
            let arr = v.as_array().ok_or_else(|| bad("product payload must be an array"))?;
            if arr.len() != fs.len() {
                return Err(Error::LengthMismatch { expected: fs.len(), found: arr.len() });
            }
            GroupElement::Product(
                fs.iter().zip(arr).map(|(f, x)| element_from_payload(f, x)).collect::<Result<_>>()?,
            )
        }
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepPointFile {
    pub group: String,
    pub genus: usize,
    pub charge: Vec<f64>,
    pub elements: Vec<Value>,
    pub residual: f64,
    pub tol: f64,
}

impl RepPointFile {
    pub fn from_rep(rep: &RepPoint) -> Self {
        RepPointFile {
            group: rep.spec().to_string(),
            genus: rep.genus(),
            charge: rep.charge().coords().iter().copied().collect(),
            elements: rep.elements().iter().map(element_payload).collect(),
            residual: residual(rep),
            tol: rep.tol,
        }
    }

    /// Rebuilds and validates the point; the stored residual is informational.
    pub fn into_rep(self) -> Result<RepPoint> {
        let spec: GroupSpec = self.group.parse()?;
        if !(self.tol > 0.0) {
            return Err(bad("tol must be positive"));
        }
        let charge = CentralCharge::from_slice(&spec, &self.charge)?;
        let elements =
            self.elements.iter().map(|v| element_from_payload(&spec, v)).collect::<Result<Vec<_>>>()?;
        Ok(RepPoint::new(spec, self.genus, elements, charge)?.with_tol(self.tol))
    }
}

pub fn rep_to_json(rep: &RepPoint) -> String {
    to_json(&RepPointFile::from_rep(rep))
}

pub fn rep_from_json(s: &str) -> Result<RepPoint> {
    let file: RepPointFile = serde_json::from_str(s).map_err(|e| bad(format!("malformed point file: {e}")))?;
    file.into_rep()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelConnectionFile {
    pub group: String,
    pub genus: usize,
    pub charge: Vec<f64>,
    pub flat_datum: RepPointFile,
    pub chart: Chart,
}

pub fn connection_to_json(conn: &ModelConnection) -> String {
    let flat = RepPointFile::from_rep(conn.flat_datum());
    to_json(&ModelConnectionFile {
        group: flat.group.clone(),
        genus: flat.genus,
        charge: flat.charge.clone(),
        flat_datum: flat,
        chart: conn.chart(),
    })
}

pub fn connection_from_json(s: &str) -> Result<ModelConnection> {
    let file: ModelConnectionFile =
        serde_json::from_str(s).map_err(|e| bad(format!("malformed connection file: {e}")))?;
    if file.group != file.flat_datum.group || file.genus != file.flat_datum.genus || file.charge != file.flat_datum.charge {
        return Err(bad("connection header disagrees with its flat datum"));
    }
    ModelConnection::with_chart(file.flat_datum.into_rep()?, file.chart)
}

#[derive(Debug, Clone, Serialize)]
pub struct StratumRecord {
    pub group: String,
    pub genus: usize,
    pub representative: Vec<f64>,
    pub charge_norm: f64,
    pub centralizer: String,
    pub orbit_dim: usize,
    pub fiber_h1: usize,
    pub fiber_dim: usize,
    pub component_label: i64,
    pub label_from_cover: bool,
    pub total_dim: usize,
    pub witness: Vec<Value>,
}

impl StratumRecord {
    pub fn from_descriptor(d: &YMStratumDescriptor) -> Self {
        StratumRecord {
            group: d.group.to_string(),
            genus: d.genus,
            representative: d.orbit.representative.coords.iter().copied().collect(),
            charge_norm: d.charge_norm(),
            centralizer: d.orbit.centralizer.to_string(),
            orbit_dim: d.orbit.orbit_dim,
            fiber_h1: d.fiber_h1,
            fiber_dim: d.fiber_dim,
            component_label: d.component_label,
            label_from_cover: d.label_from_cover,
            total_dim: d.total_dim,
            witness: d.witness.iter().map(element_payload).collect(),
        }
    }
}

pub fn strata_to_json(strata: &[YMStratumDescriptor]) -> String {
    to_json(&strata.iter().map(StratumRecord::from_descriptor).collect::<Vec<_>>())
}
