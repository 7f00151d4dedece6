// SPDX-License-Identifier: Apache-2.0

//! Picard lattices of the plane and of Hirzebruch surfaces, canonical
//! classes, and the volume preserving criteria for blowups and blowdowns.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// `P²` with basis `[H]`, or `F_n` with basis `[F, E]` (fiber, negative
/// section). On `F_0` both rulings are fibrations; `ruling` records which
/// one is the current structure map and is toggled by a type IV link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SurfaceModel {
    #[serde(rename = "P2")]
    Plane,
    #[serde(rename = "Fn")]
    Hirzebruch {
        n: u32,
        #[serde(default, skip_serializing_if = "is_zero")]
        ruling: u8,
    },
}

fn is_zero(r: &u8) -> bool {
    *r == 0
}

impl SurfaceModel {
    pub fn hirzebruch(n: u32) -> Self {
        SurfaceModel::Hirzebruch { n, ruling: 0 }
    }

    pub fn rank(&self) -> usize {
        match self {
            SurfaceModel::Plane => 1,
            SurfaceModel::Hirzebruch { .. } => 2,
        }
    }

    pub fn n(&self) -> Option<u32> {
        match self {
            SurfaceModel::Plane => None,
            SurfaceModel::Hirzebruch { n, .. } => Some(*n),
        }
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceModel::Plane => write!(f, "P2"),
            SurfaceModel::Hirzebruch { n, .. } => write!(f, "F{n}"),
        }
    }
}

/// Integer coefficients in the model's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(pub Vec<i64>);

impl DivisorClass {
    pub fn plane(d: i64) -> Self {
        DivisorClass(vec![d])
    }

    /// `aF + bE`.
    pub fn fn_class(a: i64, b: i64) -> Self {
        DivisorClass(vec![a, b])
    }

    pub fn neg(&self) -> Self {
        DivisorClass(self.0.iter().map(|c| -c).collect())
    }

    fn check(&self, model: &SurfaceModel) -> Result<()> {
        if self.0.len() != model.rank() {
            return Err(Error::BasisMismatch(format!("{} coefficients for {model}", self.0.len())));
        }
        Ok(())
    }
}

/// The intersection form: `H² = 1`; `F² = 0`, `F·E = 1`, `E² = −n`.
pub fn intersect(model: &SurfaceModel, d1: &DivisorClass, d2: &DivisorClass) -> Result<i64> {
    d1.check(model)?;
    d2.check(model)?;
    Ok(match model {
        SurfaceModel::Plane => d1.0[0] * d2.0[0],
        SurfaceModel::Hirzebruch { n, .. } => {
            let (a1, b1, a2, b2) = (d1.0[0], d1.0[1], d2.0[0], d2.0[1]);
            a1 * b2 + a2 * b1 - *n as i64 * b1 * b2
        }
    })
}

/// `−3H`, or `−(n+2)F − 2E`.
pub fn canonical_class(model: &SurfaceModel) -> DivisorClass {
    match model {
        SurfaceModel::Plane => DivisorClass::plane(-3),
        SurfaceModel::Hirzebruch { n, .. } => DivisorClass::fn_class(-(*n as i64 + 2), -2),
    }
}

/// Mori fiber spaces admitting a Calabi–Yau pair with irreducible
/// boundary: the plane and `F_n` with `n ≤ 2`.
pub fn is_mf_cy_admissible(model: &SurfaceModel) -> bool {
    match model {
        SurfaceModel::Plane => true,
        SurfaceModel::Hirzebruch { n, .. } => *n <= 2,
    }
}

/// Blowing up a point of multiplicity `m ∈ {0, 1}` on a nonsingular
/// boundary: the exceptional curve has discrepancy `1 − m`, and the blowup
/// is volume preserving iff `m = 1`.
pub fn blowup_vp(m: u32) -> Result<(bool, i64)> {
    if m > 1 {
        return Err(Error::Precondition(format!("boundary multiplicity {m} on a nonsingular curve")));
    }
    Ok((m == 1, 1 - m as i64))
}

/// Discrepancy of a blowup at a point of boundary multiplicity `m`,
/// without the nonsingularity restriction.
pub fn blowup_discrepancy(m: u32) -> i64 {
    1 - m as i64
}

/// Contracting a (−1)-curve `E` is volume preserving iff `C·E = 1`.
pub fn blowdown_vp(c_dot_e: i64) -> Result<bool> {
    if c_dot_e < 0 {
        return Err(Error::Precondition(format!("negative intersection {c_dot_e} with a non-component")));
    }
    Ok(c_dot_e == 1)
}

/// Discrepancy of the contracted curve over the image pair:
/// `π^*(K + C') = K + C̆ + (k − 1)E` for `k = C̆·E`.
pub fn blowdown_discrepancy(c_dot_e: i64) -> i64 {
    1 - c_dot_e
}

/// `d/3` on the plane, `b/2` for `aF + bE` on `F_n`.
pub fn sarkisov_degree(model: &SurfaceModel, gamma: &DivisorClass) -> Result<Rational> {
    gamma.check(model)?;
    Ok(match model {
        SurfaceModel::Plane => Rational::new(gamma.0[0].into(), 3.into()),
        SurfaceModel::Hirzebruch { .. } => Rational::new(gamma.0[1].into(), 2.into()),
    })
}

/// Class of the strict transform of the cubic and its multiplicities at
/// tracked points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicTracker {
    pub class: DivisorClass,
    pub point_mults: BTreeMap<usize, u32>,
    pub nonsingular: bool,
}

impl CubicTracker {
    pub fn plane_cubic() -> Self {
        CubicTracker { class: DivisorClass::plane(3), point_mults: BTreeMap::new(), nonsingular: true }
    }

    pub fn mult(&self, id: usize) -> u32 {
        self.point_mults.get(&id).copied().unwrap_or(0)
    }

    /// Whether `(model, C)` is numerically a Calabi–Yau pair: `C ≡ −K`.
    pub fn is_calabi_yau(&self, model: &SurfaceModel) -> bool {
        self.class == canonical_class(model).neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anticanonical_meets_section() {
        for n in 0..6u32 {
            let m = SurfaceModel::hirzebruch(n);
            let e = DivisorClass::fn_class(0, 1);
            let k = canonical_class(&m).neg();
            assert_eq!(intersect(&m, &k, &e).unwrap(), 2 - n as i64);
            assert_eq!(intersect(&m, &k, &e).unwrap() >= 0, is_mf_cy_admissible(&m));
        }
    }

    #[test]
    fn small_examples() {
        let p = SurfaceModel::Plane;
        assert_eq!(intersect(&p, &DivisorClass::plane(3), &DivisorClass::plane(3)).unwrap(), 9);
        let f2 = SurfaceModel::hirzebruch(2);
        assert_eq!(canonical_class(&f2), DivisorClass::fn_class(-4, -2));
        let f = DivisorClass::fn_class(1, 0);
        assert_eq!(intersect(&f2, &f, &f).unwrap(), 0);
        assert!(matches!(intersect(&p, &f, &f), Err(Error::BasisMismatch(_))));
    }

    #[test]
    fn vp_blowup_and_blowdown_rules() {
        assert_eq!(blowup_vp(1).unwrap(), (true, 0));
        assert_eq!(blowup_vp(0).unwrap(), (false, 1));
        assert!(blowup_vp(2).is_err());
        assert!(blowdown_vp(1).unwrap());
        assert!(!blowdown_vp(0).unwrap());
        assert!(!blowdown_vp(2).unwrap());
        assert!(blowdown_vp(-1).is_err());
    }

    #[test]
    fn sarkisov_degrees() {
        use crate::exact::qf;
        assert_eq!(sarkisov_degree(&SurfaceModel::Plane, &DivisorClass::plane(4)).unwrap(), qf(4, 3));
        let f1 = SurfaceModel::hirzebruch(1);
        assert_eq!(sarkisov_degree(&f1, &DivisorClass::fn_class(2, 1)).unwrap(), qf(1, 2));
    }

    #[test]
    fn model_json() {
        let s = serde_json::to_string(&SurfaceModel::hirzebruch(2)).unwrap();
        assert_eq!(s, r#"{"kind":"Fn","n":2}"#);
        assert_eq!(serde_json::to_string(&SurfaceModel::Plane).unwrap(), r#"{"kind":"P2"}"#);
        let back: SurfaceModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, SurfaceModel::hirzebruch(2));
    }
}
