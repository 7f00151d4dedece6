// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::surfaces::{canonical_class, intersect, CubicTracker, DivisorClass, SurfaceModel};

/// A base point of the current system. Proper points have no parent;
/// infinitely near points hang below the point they were found over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub id: usize,
    pub mult: u32,
    #[serde(default)]
    pub parent: Option<usize>,
    pub on_cubic: bool,
    #[serde(default)]
    pub on_negative_section: bool,
    /// The cubic is tangent to the fiber through the point.
    #[serde(default)]
    pub fiber_tangent_to_cubic: bool,
    /// The cubic is tangent to the negative section at the point; only
    /// meaningful on `F_0`, where the section through the point is used.
    #[serde(default)]
    pub section_tangent_to_cubic: bool,
    /// The point is an inflection point of the cubic (plane points only).
    #[serde(default)]
    pub flex: bool,
    /// Coordinates of a proper plane point; empty otherwise.
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "crate::exact::rational::serde_rational_vec")]
    pub coords: Vec<Rational>,
    /// Tangent line of the cubic at a proper plane point on it.
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "crate::exact::rational::serde_rational_vec")]
    pub tangent_line: Vec<Rational>,
}

impl PointRecord {
    /// A point with only multiplicity and cubic incidence known.
    pub fn simple(id: usize, mult: u32, on_cubic: bool) -> Self {
        PointRecord {
            id,
            mult,
            parent: None,
            on_cubic,
            on_negative_section: false,
            fiber_tangent_to_cubic: false,
            section_tangent_to_cubic: false,
            flex: false,
            coords: Vec::new(),
            tangent_line: Vec::new(),
        }
    }

    pub fn is_proper(&self) -> bool {
        self.parent.is_none()
    }
}

/// `(S_i, C_i, Γ_i)`: a model, the class of the system, its base points and
/// the strict transform of the cubic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationState {
    pub model: SurfaceModel,
    pub system: DivisorClass,
    pub points: Vec<PointRecord>,
    pub cubic: CubicTracker,
    pub step: usize,
    /// Next unused point id.
    pub next_id: usize,
}

impl FactorizationState {
    /// A plane system of degree `d` with a nonsingular cubic through the
    /// points flagged `on_cubic`.
    pub fn plane(d: i64, points: Vec<PointRecord>) -> Self {
        Self::new(SurfaceModel::Plane, DivisorClass::plane(d), points, CubicTracker::plane_cubic())
    }

    /// A state on `model` with the cubic tracker's point multiplicities
    /// taken from the `on_cubic` flags.
    pub fn new(model: SurfaceModel, system: DivisorClass, points: Vec<PointRecord>, mut cubic: CubicTracker) -> Self {
        for p in &points {
            if p.on_cubic {
                cubic.point_mults.insert(p.id, 1);
            }
        }
        let next_id = points.iter().map(|p| p.id + 1).max().unwrap_or(0);
        FactorizationState { model, system, points, cubic, step: 0, next_id }
    }

    /// The plane with the system of lines and no base points.
    pub fn is_terminal(&self) -> bool {
        self.model == SurfaceModel::Plane && self.system.0 == [1] && self.points.is_empty()
    }

    pub fn point(&self, id: usize) -> Option<&PointRecord> {
        self.points.iter().find(|p| p.id == id)
    }

    pub fn proper_points(&self) -> impl Iterator<Item = &PointRecord> {
        self.points.iter().filter(|p| p.is_proper())
    }

    /// Proper point of maximal multiplicity; ties go to the lowest id.
    pub fn max_point(&self) -> Option<&PointRecord> {
        self.proper_points().max_by(|a, b| a.mult.cmp(&b.mult).then(b.id.cmp(&a.id)))
    }

    /// `(Γ² − Σm², −K·Γ − Σm)`, which stay `(1, 3)` along a factorization.
    pub fn numerical_invariants(&self) -> Result<(i64, i64)> {
        let g2 = intersect(&self.model, &self.system, &self.system)?;
        let kg = -intersect(&self.model, &canonical_class(&self.model), &self.system)?;
        let s1: i64 = self.points.iter().map(|p| p.mult as i64).sum();
        let s2: i64 = self.points.iter().map(|p| (p.mult as i64).pow(2)).sum();
        Ok((g2 - s2, kg - s1))
    }

    /// Structural and numerical consistency.
    pub fn validate(&self) -> Result<()> {
        if self.system.0.len() != self.model.rank() || self.cubic.class.0.len() != self.model.rank() {
            return Err(Error::BasisMismatch(format!("classes do not match {}", self.model)));
        }
        for p in &self.points {
            if p.mult == 0 {
                return Err(Error::Verification(format!("point {} has multiplicity 0", p.id)));
            }
            if let Some(q) = p.parent {
                if self.point(q).is_none() {
                    return Err(Error::Verification(format!("point {} hangs below a missing point {q}", p.id)));
                }
            }
            if p.on_cubic != (self.cubic.mult(p.id) > 0) {
                return Err(Error::Verification(format!("cubic incidence of point {} is inconsistent", p.id)));
            }
        }
        let inv = self.numerical_invariants()?;
        if inv != (1, 3) {
            return Err(Error::Verification(format!(
                "Γ² − Σm² = {}, −K·Γ − Σm = {} on {}",
                inv.0, inv.1, self.model
            )));
        }
        Ok(())
    }

    pub(crate) fn dump(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|_| format!("{self:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkKind {
    I,
    II,
    III,
    IV,
}

impl fmt::Display for LinkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LinkKind::I => "I",
            LinkKind::II => "II",
            LinkKind::III => "III",
            LinkKind::IV => "IV",
        };
        f.write_str(s)
    }
}

/// Geometry of a type II center: Cases 1–2 lie on the negative section,
/// 3–4 off it; the even cases have the cubic tangent to the fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    Case(u8),
    OffCubic,
}

impl Serialize for CaseTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CaseTag::Case(k) => s.serialize_u8(*k),
            CaseTag::OffCubic => s.serialize_str("off-cubic"),
        }
    }
}

impl<'de> Deserialize<'de> for CaseTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => match n.as_u64() {
                Some(k @ 1..=4) => Ok(CaseTag::Case(k as u8)),
                _ => Err(serde::de::Error::custom("case must be 1, 2, 3 or 4")),
            },
            serde_json::Value::String(s) if s == "off-cubic" => Ok(CaseTag::OffCubic),
            _ => Err(serde::de::Error::custom("case must be a number or \"off-cubic\"")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SarkisovLink {
    pub kind: LinkKind,
    pub center: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseTag>,
    pub vp: bool,
    pub from: SurfaceModel,
    pub to: SurfaceModel,
    /// Class of the system after the link.
    pub system: DivisorClass,
    /// Discrepancies of the exceptional curves extracted and contracted.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub discrepancies: Vec<i64>,
    /// Whether the center lay on the strict transform of the cubic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_on_cubic: Option<bool>,
}

impl SarkisovLink {
    /// Whether the kind matches the source and target models.
    pub fn is_compatible(&self) -> bool {
        use SurfaceModel::*;
        match (self.kind, self.from, self.to) {
            (LinkKind::I, Plane, Hirzebruch { n: 1, .. }) => true,
            (LinkKind::II, Hirzebruch { n, .. }, Hirzebruch { n: m, .. }) => n.abs_diff(m) == 1,
            (LinkKind::III, Hirzebruch { n: 1, .. }, Plane) => true,
            (LinkKind::IV, Hirzebruch { n: 0, ruling: r }, Hirzebruch { n: 0, ruling: s }) => r != s,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SarkisovTrace {
    pub initial: FactorizationState,
    pub links: Vec<SarkisovLink>,
    /// State after each link.
    pub states: Vec<FactorizationState>,
    pub all_vp: bool,
    /// Whether the input preserves the cubic; `None` for synthetic input.
    pub in_dec: Option<bool>,
    pub lints: Vec<String>,
}

impl SarkisovTrace {
    pub fn kinds(&self) -> Vec<LinkKind> {
        self.links.iter().map(|l| l.kind).collect()
    }

    pub fn final_state(&self) -> &FactorizationState {
        self.states.last().unwrap_or(&self.initial)
    }

    /// One JSON object per link.
    pub fn json_lines(&self) -> String {
        self.links.iter().map(|l| serde_json::to_string(l).expect("links serialize") + "\n").collect()
    }

    /// Chaining, kind-model compatibility and the final state.
    pub fn check_shape(&self) -> Result<()> {
        let mut model = self.initial.model;
        for (i, l) in self.links.iter().enumerate() {
            if l.from != model {
                return Err(Error::Verification(format!("link {i} starts on {} instead of {model}", l.from)));
            }
            if !l.is_compatible() {
                return Err(Error::Verification(format!("link {i} of type {} goes {} → {}", l.kind, l.from, l.to)));
            }
            model = l.to;
        }
        if !self.final_state().is_terminal() {
            return Err(Error::Verification("trace does not end on the system of lines".into()));
        }
        Ok(())
    }
}
