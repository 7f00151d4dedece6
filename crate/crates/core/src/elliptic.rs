// SPDX-License-Identifier: Apache-2.0

//! Plane cubics in Weierstrass form as elliptic curves, and the
//! degree-4 plane maps that restrict to translations.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cremona::CremonaMap;
use crate::error::{Error, Result};
use crate::exact::rational::serde_rational;
use crate::exact::{q, HomPoly, Poly, Rational};

/// `y^2 z = x^3 + p x z^2 + q z^3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeierstrassCurve {
    #[serde(with = "serde_rational")]
    p: Rational,
    #[serde(with = "serde_rational")]
    q: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Rational, y: Rational },
}

impl CurvePoint {
    pub fn affine(x: Rational, y: Rational) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    /// Homogeneous coordinates, normalized: `(x : y : 1)` or `(0 : 1 : 0)`.
    pub fn to_projective(&self) -> Vec<Rational> {
        match self {
            CurvePoint::Infinity => vec![q(0), q(1), q(0)],
            CurvePoint::Affine { x, y } => vec![x.clone(), y.clone(), q(1)],
        }
    }
}

impl WeierstrassCurve {
    pub fn new(p: Rational, q: Rational) -> Result<Self> {
        let c = WeierstrassCurve { p, q };
        if c.discriminant().is_zero() {
            return Err(Error::SingularCurve("4p^3 + 27q^2 = 0".into()));
        }
        Ok(c)
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    /// `-16 (4p^3 + 27q^2)`.
    pub fn discriminant(&self) -> Rational {
        let four_p3 = q(4) * &self.p * &self.p * &self.p;
        let tw7_q2 = q(27) * &self.q * &self.q;
        q(-16) * (four_p3 + tw7_q2)
    }

    /// `y^2 z - x^3 - p x z^2 - q z^3`.
    pub fn equation(&self) -> HomPoly {
        let terms = vec![
            (vec![0, 2, 1], q(1)),
            (vec![3, 0, 0], q(-1)),
            (vec![1, 0, 2], -self.p.clone()),
            (vec![0, 0, 3], -self.q.clone()),
        ];
        HomPoly::with_degree(Poly::from_terms(3, terms), 3).expect("homogeneous cubic")
    }

    pub fn contains(&self, pt: &CurvePoint) -> bool {
        match pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => y * y == x * x * x + &self.p * x + &self.q,
        }
    }

    /// Reads a projective point of the curve.
    pub fn point_from_projective(&self, pt: &[Rational]) -> Result<CurvePoint> {
        if pt.len() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: pt.len() });
        }
        let cp = if pt[2].is_zero() {
            if pt[0].is_zero() && !pt[1].is_zero() {
                CurvePoint::Infinity
            } else if pt.iter().all(|c| c.is_zero()) {
                return Err(Error::ZeroPoint);
            } else {
                return Err(Error::NotOnCurve);
            }
        } else {
            CurvePoint::affine(&pt[0] / &pt[2], &pt[1] / &pt[2])
        };
        if !self.contains(&cp) {
            return Err(Error::NotOnCurve);
        }
        Ok(cp)
    }

    fn check(&self, pt: &CurvePoint) -> Result<()> {
        if self.contains(pt) { Ok(()) } else { Err(Error::NotOnCurve) }
    }

    pub fn neg(&self, pt: &CurvePoint) -> Result<CurvePoint> {
        self.check(pt)?;
        Ok(match pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::affine(x.clone(), -y),
        })
    }

    /// Chord-and-tangent addition with neutral element `O = (0:1:0)`.
    pub fn add(&self, a: &CurvePoint, b: &CurvePoint) -> Result<CurvePoint> {
        self.check(a)?;
        self.check(b)?;
        let (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) = (a, b) else {
            return Ok(if a.is_infinity() { b.clone() } else { a.clone() });
        };
        let lambda = if x1 != x2 {
            (y2 - y1) / (x2 - x1)
        } else if y1 == y2 && !y1.is_zero() {
            (q(3) * x1 * x1 + &self.p) / (q(2) * y1)
        } else {
            return Ok(CurvePoint::Infinity);
        };
        let x3 = &lambda * &lambda - x1 - x2;
        let y3 = &lambda * (x1 - &x3) - y1;
        Ok(CurvePoint::affine(x3, y3))
    }

    /// The third point of the curve on the line through `a` and `b`
    /// (tangent line when equal), i.e. `⊖(a ⊕ b)`. As a binary operation
    /// this is commutative but not associative.
    pub fn third_point(&self, a: &CurvePoint, b: &CurvePoint) -> Result<CurvePoint> {
        let s = self.add(a, b)?;
        self.neg(&s)
    }

    /// `n · pt`, for any integer `n`.
    pub fn mul(&self, n: i64, pt: &CurvePoint) -> Result<CurvePoint> {
        self.check(pt)?;
        let mut base = if n < 0 { self.neg(pt)? } else { pt.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            base = self.add(&base, &base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Order of the automorphism group fixing `O`: 6 when `j = 0`,
    /// 4 when `j = 1728`, otherwise 2.
    pub fn aut_order(&self) -> u32 {
        if self.p.is_zero() {
            6
        } else if self.q.is_zero() {
            4
        } else {
            2
        }
    }

    pub fn j_invariant(&self) -> Rational {
        let four_p3 = q(4) * &self.p * &self.p * &self.p;
        q(1728) * &four_p3 / (four_p3.clone() + q(27) * &self.q * &self.q)
    }

    /// A degree-4 plane map restricting to `Q ↦ Q ⊕ pt` on the curve.
    /// The neutral element gives the identity.
    ///
    /// With `λ = (y - bz)/(x - az)` and `x' = λ^2 - x - a`, the
    /// components are `F1/F3 = x'` and `F2/F3 = -(λ(x' - a) + b)`; the
    /// second is the reflected ordinate, so the restriction is the group
    /// translation rather than `Q ↦ ⊖(Q ⊕ pt)`.
    pub fn translation_map(&self, pt: &CurvePoint) -> Result<CremonaMap> {
        self.check(pt)?;
        let CurvePoint::Affine { x: a, y: b } = pt else {
            return Ok(CremonaMap::identity());
        };
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let z = Poly::var(3, 2);
        let xa = &x - &z.scale(a); // x - a z
        let yb = &y - &z.scale(b); // y - b z
        let xa2 = xa.pow(2);
        let f1 = &(&(&z * &yb.pow(2)) * &xa) - &(&(&x.pow(2) - &z.pow(2).scale(&(a * a))) * &xa2);
        let f3 = &z * &xa.pow(3);
        let f2_line = &(&z * &yb.pow(3)) - &(&(&yb * &(&x + &z.scale(&(q(2) * a)))) * &xa2);
        let f2 = -&(&f2_line + &f3.scale(b));
        let comps = [f1, f2, f3].into_iter().map(|f| HomPoly::with_degree(f, 4)).collect::<Result<Vec<_>>>()?;
        CremonaMap::new(comps)
    }

    /// `count` points `k·g` for `k = 1, 2, …`, skipping `O` and anything
    /// in `avoid`. Fails if `g` turns out to be torsion.
    pub fn sample_points(&self, g: &CurvePoint, count: usize, avoid: &[CurvePoint]) -> Result<Vec<CurvePoint>> {
        self.check(g)?;
        let mut out = Vec::with_capacity(count);
        let mut cur = CurvePoint::Infinity;
        let mut seen = Vec::new();
        while out.len() < count {
            cur = self.add(&cur, g)?;
            if cur.is_infinity() || seen.contains(&cur) {
                return Err(Error::Precondition("sample generator has finite order".into()));
            }
            seen.push(cur.clone());
            if !avoid.contains(&cur) {
                out.push(cur.clone());
            }
        }
        Ok(out)
    }

    /// Whether the point is an inflection point of the curve (`O` always is;
    /// an affine point is one exactly when it has order 3).
    pub fn is_flex(&self, pt: &CurvePoint) -> Result<bool> {
        self.check(pt)?;
        match pt {
            CurvePoint::Infinity => Ok(true),
            CurvePoint::Affine { y, .. } if y.is_zero() => Ok(false),
            _ => {
                let two = self.add(pt, pt)?;
                Ok(two == self.neg(pt)?)
            }
        }
    }
}

impl Serialize for CurvePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            CurvePoint::Infinity => s.serialize_str("O"),
            CurvePoint::Affine { x, y } => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("x", &crate::exact::format_rational(x))?;
                m.serialize_entry("y", &crate::exact::format_rational(y))?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for CurvePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Tag(String),
            Affine { x: String, y: String },
        }
        match Wire::deserialize(d)? {
            Wire::Tag(t) if t == "O" => Ok(CurvePoint::Infinity),
            Wire::Tag(t) => Err(serde::de::Error::custom(format!("expected \"O\", got {t:?}"))),
            Wire::Affine { x, y } => {
                let x = crate::exact::parse_rational(&x).map_err(serde::de::Error::custom)?;
                let y = crate::exact::parse_rational(&y).map_err(serde::de::Error::custom)?;
                Ok(CurvePoint::affine(x, y))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve() -> WeierstrassCurve {
        WeierstrassCurve::new(q(0), q(1)).unwrap()
    }

    fn pt(x: i64, y: i64) -> CurvePoint {
        CurvePoint::affine(q(x), q(y))
    }

    #[test]
    fn addition_basics() {
        let c = curve();
        assert_eq!(c.add(&CurvePoint::Infinity, &pt(2, 3)).unwrap(), pt(2, 3));
        assert_eq!(c.add(&pt(2, 3), &pt(0, 1)).unwrap(), pt(-1, 0));
        assert_eq!(c.add(&pt(2, 3), &c.neg(&pt(2, 3)).unwrap()).unwrap(), CurvePoint::Infinity);
        assert_eq!(c.add(&pt(2, 5), &pt(0, 1)), Err(Error::NotOnCurve));
    }

    #[test]
    fn automorphism_orders() {
        assert_eq!(curve().aut_order(), 6);
        assert_eq!(WeierstrassCurve::new(q(1), q(0)).unwrap().aut_order(), 4);
        let c = WeierstrassCurve::new(q(-2), q(1)).unwrap();
        assert_eq!(c.aut_order(), 2);
        assert!(c.j_invariant() != q(0) && c.j_invariant() != q(1728));
    }

    #[test]
    fn singular_rejected() {
        // 4(-3)^3 + 27(2)^2 = 0
        assert!(matches!(WeierstrassCurve::new(q(-3), q(2)), Err(Error::SingularCurve(_))));
    }

    #[test]
    fn translation_map_degree_and_action() {
        let c = curve();
        let phi = c.translation_map(&pt(2, 3)).unwrap();
        assert_eq!(phi.degree(), 4);
        // (0,1) ↦ (0,1) ⊕ (2,3) = (-1,0)
        let img = phi.eval(&pt(0, 1).to_projective()).unwrap().unwrap();
        assert_eq!(img, pt(-1, 0).to_projective());
        assert!(c.translation_map(&CurvePoint::Infinity).unwrap().is_identity());
    }

    #[test]
    fn flexes() {
        let c = curve();
        assert!(c.is_flex(&CurvePoint::Infinity).unwrap());
        // (0, ±1) have order 3 on y^2 = x^3 + 1.
        assert!(c.is_flex(&pt(0, 1)).unwrap());
        assert!(!c.is_flex(&pt(2, 3)).unwrap());
    }

    #[test]
    fn json_point_roundtrip() {
        for p in [CurvePoint::Infinity, CurvePoint::affine(q(-1) / q(4), q(3))] {
            let s = serde_json::to_string(&p).unwrap();
            assert_eq!(serde_json::from_str::<CurvePoint>(&s).unwrap(), p);
        }
        assert_eq!(serde_json::to_string(&CurvePoint::Infinity).unwrap(), "\"O\"");
    }

    #[test]
    fn unreflected_ordinate_is_not_associative() {
        // With y' = λ(x' − a) + b the sum is the third chord point; that
        // operation fails associativity, the reflected one satisfies it.
        let c = WeierstrassCurve::new(q(0), q(-2)).unwrap();
        let g = pt(3, 5);
        let pts: Vec<CurvePoint> = (1..=3).map(|k| c.mul(k, &g).unwrap()).collect();
        let (a, b, d) = (&pts[0], &pts[1], &pts[2]);
        let left = c.third_point(&c.third_point(a, b).unwrap(), d).unwrap();
        let right = c.third_point(a, &c.third_point(b, d).unwrap()).unwrap();
        assert_ne!(left, right);
        let left = c.add(&c.add(a, b).unwrap(), d).unwrap();
        let right = c.add(a, &c.add(b, d).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn unreflected_second_component_leaves_the_curve() {
        // F₂ = z(y − bz)³ − (y − bz)(x + 2az)(x − az)², used without the
        // reflection and the `+ b` term, does not send the cubic to itself.
        let c = curve();
        let (a, b) = (q(2), q(3));
        let (x, y, z) = (Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2));
        let (xa, yb) = (&x - &z.scale(&a), &y - &z.scale(&b));
        let f2 = &(&z * &yb.pow(3)) - &(&(&yb * &(&x + &z.scale(&(q(2) * &a)))) * &xa.pow(2));
        let good = c.translation_map(&pt(2, 3)).unwrap();
        let mut comps = good.components().to_vec();
        comps[1] = HomPoly::with_degree(f2, 4).unwrap();
        let literal = CremonaMap::new(comps).unwrap();
        assert!(good.preserves_curve(&c.equation()).unwrap());
        assert!(!literal.preserves_curve(&c.equation()).unwrap());
    }
}
