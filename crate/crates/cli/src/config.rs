use std::path::PathBuf;

use serde::Serialize;
use surface_ym::holonomy::MagnusOrder;
use surface_ym::{CentralCharge, GroupSpec};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tol: f64,
    pub rank_tol: f64,
    pub steps: usize,
    pub order: u32,
    pub out: Option<PathBuf>,
    pub parallel: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Input(format!("--tol must be positive, got {}", self.tol)));
        }
        if !(self.rank_tol > 0.0 && self.rank_tol.is_finite()) {
            return Err(CliError::Input(format!("--rank-tol must be positive, got {}", self.rank_tol)));
        }
        if self.steps < 1 {
            return Err(CliError::Input("--steps must be at least 1".into()));
        }
        self.magnus_order().map(|_| ())
    }

    pub fn magnus_order(&self) -> Result<MagnusOrder, CliError> {
        MagnusOrder::try_from(self.order).map_err(|_| CliError::Input(format!("--order must be 2 or 4, got {}", self.order)))
    }
}

pub fn parse_group(s: &str) -> Result<GroupSpec, CliError> {
    s.parse().map_err(|e| CliError::Input(format!("bad --group {s:?}: {e}")))
}

/// One real, optionally carrying a factor of π: `1.5`, `pi`, `-2pi`, `0.5*pi`.
pub fn parse_real(s: &str) -> Result<f64, CliError> {
    let t = s.trim();
    let bad = || CliError::Input(format!("cannot parse {t:?} as a number"));
    let (head, pi) = match t.strip_suffix("pi") {
        Some(h) => (h.strip_suffix('*').unwrap_or(h), true),
        None => (t, false),
    };
    let v = match (head, pi) {
        ("" | "+", true) => 1.0,
        ("-", true) => -1.0,
        _ => head.parse::<f64>().map_err(|_| bad())?,
    };
    let v = if pi { v * std::f64::consts::PI } else { v };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Comma-separated coordinates of the charge; absent means `X = 0`.
pub fn parse_charge(spec: &GroupSpec, s: Option<&str>) -> Result<CentralCharge, CliError> {
    let Some(s) = s else { return Ok(CentralCharge::zero(spec)) };
    let coords = s.split(',').map(parse_real).collect::<Result<Vec<_>, _>>()?;
    CentralCharge::from_slice(spec, &coords).map_err(|e| CliError::Input(format!("bad --charge: {e}")))
}

pub fn validate_genus(genus: usize) -> Result<(), CliError> {
    if genus < 1 {
        Err(CliError::Input(format!("genus must be at least 1, got {genus}")))
    } else {
        Ok(())
    }
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed of batch task `index`: the `(index + 1)`-th output of a splitmix64
/// generator started at `seed`. Each task then drives its own `ChaCha8Rng`,
/// so results do not depend on scheduling.
pub fn task_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn reals_with_pi() {
        assert_eq!(parse_real("1.5").unwrap(), 1.5);
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("-2pi").unwrap(), -2.0 * PI);
        assert_eq!(parse_real("0.5*pi").unwrap(), 0.5 * PI);
        assert!(parse_real("two").is_err());
        assert!(parse_real("inf").is_err());
    }

    #[test]
    fn charges() {
        let c = parse_charge(&GroupSpec::U1, Some("2pi")).unwrap();
        assert_eq!(c.coords()[0], 2.0 * PI);
        assert!(parse_charge(&GroupSpec::SU2, Some("1,0,0")).is_err());
        assert!(parse_charge(&GroupSpec::SU2, Some("0,0")).is_err());
        assert_eq!(parse_charge(&GroupSpec::SU2, None).unwrap(), CentralCharge::zero(&GroupSpec::SU2));
    }

    #[test]
    fn splitmix_reference_values() {
        // first outputs of splitmix64 seeded with 0
        assert_eq!(task_seed(0, 0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(task_seed(0, 1), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(task_seed(0, 2), 0x06C4_5D18_8009_454F);
    }
}
