// SPDX-License-Identifier: Apache-2.0

//! Wire formats. Rationals are `"num/den"` strings; a polynomial is
//! `{"vars": n, "terms": [{"exp": [..], "coef": "num/den"}]}`; a plane or
//! space map is `{"deg": d, "components": [poly, ...]}`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cremona::CremonaMap;
use crate::exact::poly::MAX_VARS;
use crate::exact::{format_rational, parse_rational, HomPoly, Poly};
use crate::threefold::{QuarticData, SpaceMap};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermWire {
    exp: Vec<u32>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyWire {
    vars: usize,
    terms: Vec<TermWire>,
}

impl From<&Poly> for PolyWire {
    fn from(p: &Poly) -> Self {
        PolyWire {
            vars: p.nvars(),
            terms: p.terms().map(|(exp, c)| TermWire { exp, coef: format_rational(c) }).collect(),
        }
    }
}

impl TryFrom<PolyWire> for Poly {
    type Error = String;

    fn try_from(w: PolyWire) -> Result<Self, String> {
        if w.vars == 0 || w.vars > MAX_VARS {
            return Err(format!("vars must be between 1 and {MAX_VARS}"));
        }
        let mut terms = Vec::with_capacity(w.terms.len());
        for t in w.terms {
            if t.exp.len() != w.vars {
                return Err(format!("exponent vector of length {} for {} variables", t.exp.len(), w.vars));
            }
            if t.exp.iter().any(|&e| e > u16::MAX as u32) {
                return Err("exponent too large".into());
            }
            terms.push((t.exp, parse_rational(&t.coef).map_err(|e| e.to_string())?));
        }
        Ok(Poly::from_terms(w.vars, terms))
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyWire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Poly::try_from(PolyWire::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// Same format as [`Poly`]; the zero form deserializes with degree 0.
impl Serialize for HomPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.poly().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let p = Poly::deserialize(d)?;
        if p.is_zero() {
            return Ok(HomPoly::zero(p.nvars(), 0));
        }
        HomPoly::new(p).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapWire {
    deg: u32,
    components: Vec<Poly>,
}

fn forms<E: serde::de::Error>(w: MapWire) -> Result<Vec<HomPoly>, E> {
    w.components.into_iter().map(|p| HomPoly::with_degree(p, w.deg).map_err(E::custom)).collect()
}

impl Serialize for CremonaMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MapWire { deg: self.degree(), components: self.components().iter().map(|c| c.poly().clone()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CremonaMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let forms = forms::<D::Error>(MapWire::deserialize(d)?)?;
        CremonaMap::new(forms).map_err(D::Error::custom)
    }
}

impl Serialize for SpaceMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MapWire { deg: self.degree(), components: self.components().iter().map(|c| c.poly().clone()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpaceMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let forms = forms::<D::Error>(MapWire::deserialize(d)?)?;
        SpaceMap::new(forms).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuarticWire {
    #[serde(rename = "A")]
    a: HomPoly,
    #[serde(rename = "B")]
    b: HomPoly,
    #[serde(rename = "C")]
    c: HomPoly,
}

/// `{"A": poly, "B": poly, "C": poly}` in the variables `(x₁, x₂, x₃)`.
impl Serialize for QuarticData {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QuarticWire { a: self.a.clone(), b: self.b.clone(), c: self.c.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuarticData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = QuarticWire::deserialize(d)?;
        QuarticData::new(w.a, w.b, w.c).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qf;

    #[test]
    fn poly_round_trip() {
        let p = &Poly::var(3, 0).scale(&qf(-2, 3)) + &Poly::var(3, 2).pow(2);
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains(r#""coef":"-2/3""#));
        assert_eq!(serde_json::from_str::<Poly>(&s).unwrap(), p);
    }

    #[test]
    fn malformed_polys() {
        assert!(serde_json::from_str::<Poly>(r#"{"vars": 2, "terms": [{"exp": [1], "coef": "1"}]}"#).is_err());
        assert!(serde_json::from_str::<Poly>(r#"{"vars": 5, "terms": []}"#).is_err());
        assert!(serde_json::from_str::<Poly>(r#"{"vars": 1, "terms": [{"exp": [1], "coef": "1/0"}]}"#).is_err());
        assert!(serde_json::from_str::<HomPoly>(r#"{"vars": 2, "terms": [{"exp": [1, 0], "coef": "1"}, {"exp": [0, 0], "coef": "1"}]}"#).is_err());
    }

    #[test]
    fn map_round_trip() {
        let f = CremonaMap::standard_quadratic();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with(r#"{"deg":2"#));
        assert_eq!(serde_json::from_str::<CremonaMap>(&s).unwrap(), f);
    }

    #[test]
    fn quartic_round_trip() {
        let q = QuarticData::desk_instance();
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(serde_json::from_str::<QuarticData>(&s).unwrap(), q);
    }
}
