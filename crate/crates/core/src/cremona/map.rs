// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;

use super::homaloidal::HomaloidalType;
use crate::error::{Error, Result};
use crate::exact::{content_normalize, modp, normalize_point, same_point, zeros, HomPoly, Poly, Rational};

/// A birational self-map of the projective plane, stored as a
/// content-normalized triple of forms of equal degree.
#[derive(Clone)]
pub struct CremonaMap {
    components: [HomPoly; 3],
    cached_type: OnceLock<HomaloidalType>,
}

impl PartialEq for CremonaMap {
    fn eq(&self, o: &Self) -> bool {
        self.components == o.components
    }
}

impl Eq for CremonaMap {}

impl CremonaMap {
    /// Normalizes and validates a triple of forms.
    pub fn new(components: Vec<HomPoly>) -> Result<Self> {
        if components.len() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: components.len() });
        }
        if components.iter().any(|c| c.nvars() != 3) {
            return Err(Error::DimensionMismatch { expected: 3, got: components[0].nvars() });
        }
        let d = components[0].degree();
        if components.iter().any(|c| c.degree() != d) {
            return Err(Error::DegreeMismatch("components of a map must share a degree".into()));
        }
        let normalized = content_normalize(&components)?;
        if normalized[0].degree() == 0 {
            return Err(Error::Degenerate("components are proportional constants".into()));
        }
        let [a, b, c]: [HomPoly; 3] = normalized.try_into().expect("three components");
        let map = CremonaMap { components: [a, b, c], cached_type: OnceLock::new() };
        if !map.is_dominant() {
            return Err(Error::Degenerate("jacobian vanishes identically".into()));
        }
        Ok(map)
    }

    pub fn identity() -> Self {
        CremonaMap {
            components: [HomPoly::var(3, 0), HomPoly::var(3, 1), HomPoly::var(3, 2)],
            cached_type: OnceLock::new(),
        }
    }

    /// The standard quadratic involution `(yz : xz : xy)`.
    pub fn standard_quadratic() -> Self {
        let v = |i| Poly::var(3, i);
        CremonaMap::new(vec![
            HomPoly::new(&v(1) * &v(2)).unwrap(),
            HomPoly::new(&v(0) * &v(2)).unwrap(),
            HomPoly::new(&v(0) * &v(1)).unwrap(),
        ])
        .expect("standard quadratic map is birational")
    }

    /// The projectivity with the given 3×3 matrix (rows are components).
    pub fn linear(m: [[Rational; 3]; 3]) -> Result<Self> {
        let rows = m
            .iter()
            .map(|row| {
                let p = (0..3).fold(Poly::zero(3), |acc, j| &acc + &Poly::var(3, j).scale(&row[j]));
                HomPoly::with_degree(p, 1)
            })
            .collect::<Result<Vec<_>>>()?;
        CremonaMap::new(rows)
    }

    /// The quadratic map `σ ∘ L` whose base points are three given
    /// non-collinear points, where `L` sends them to the coordinate points.
    pub fn quadratic_through(pts: [&[Rational]; 3]) -> Result<Self> {
        if let Some(p) = pts.iter().find(|p| p.len() != 3) {
            return Err(Error::DimensionMismatch { expected: 3, got: p.len() });
        }
        // Columns are the points; the adjugate is a multiple of the inverse.
        let m = |i: usize, j: usize| &pts[j][i];
        let cof = |i: usize, j: usize| {
            let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
            let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
            m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0)
        };
        let det = (0..3).fold(Rational::zero(), |acc, j| acc + m(0, j) * &cof(0, j));
        if det.is_zero() {
            return Err(Error::Precondition("base points are collinear".into()));
        }
        let adj: [[Rational; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i)));
        CremonaMap::standard_quadratic().compose(&CremonaMap::linear(adj)?)
    }

    pub fn components(&self) -> &[HomPoly; 3] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components[0].degree()
    }

    pub fn is_identity(&self) -> bool {
        *self == CremonaMap::identity()
    }

    /// Image of a point, normalized; `None` at a base point.
    pub fn eval(&self, pt: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if pt.len() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: pt.len() });
        }
        if pt.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroPoint);
        }
        let img: Vec<Rational> = self.components.iter().map(|c| c.eval(pt)).collect();
        if img.iter().all(|c| c.is_zero()) {
            return Ok(None);
        }
        normalize_point(&img).map(Some)
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &CremonaMap) -> Result<CremonaMap> {
        let comps = self
            .components
            .iter()
            .map(|c| c.substitute(&inner.components))
            .collect::<Result<Vec<_>>>()?;
        if comps.iter().all(|c| c.is_zero()) {
            return Err(Error::Degenerate("composition vanishes identically".into()));
        }
        CremonaMap::new(comps)
    }

    /// Proper base points (rational ones only).
    pub fn proper_base_points(&self) -> Result<Vec<Vec<Rational>>> {
        if self.degree() == 1 {
            return Ok(vec![]);
        }
        let z = zeros::common_zeros_plane(&self.components)?;
        if z.unresolved > 0 {
            return Err(Error::IrrationalBasePoint(format!("{} irrational candidate(s)", z.unresolved)));
        }
        Ok(z.points)
    }

    /// Jacobian determinant as a form of degree `3(d-1)`.
    pub fn jacobian(&self) -> Poly {
        let d: Vec<Vec<Poly>> = self
            .components
            .iter()
            .map(|c| (0..3).map(|j| c.poly().derivative(j)).collect())
            .collect();
        let m2 = |r1: usize, r2: usize, c1: usize, c2: usize| &(&d[r1][c1] * &d[r2][c2]) - &(&d[r1][c2] * &d[r2][c1]);
        let t0 = &d[0][0] * &m2(1, 2, 1, 2);
        let t1 = &d[0][1] * &m2(1, 2, 0, 2);
        let t2 = &d[0][2] * &m2(1, 2, 0, 1);
        &(&t0 - &t1) + &t2
    }

    fn is_dominant(&self) -> bool {
        // Fast path: a nonzero value at one point mod p settles it.
        let p = modp::P31;
        let partials: Vec<Vec<Poly>> = self
            .components
            .iter()
            .map(|c| (0..3).map(|j| c.poly().derivative(j)).collect())
            .collect();
        for pt in [[3u64, 7, 11], [101, 5, 9973], [2, 65537, 31]] {
            let m: Option<Vec<Vec<u64>>> = partials
                .iter()
                .map(|row| row.iter().map(|f| f.eval_mod(&pt, p)).collect())
                .collect();
            if let Some(m) = m {
                let det = modp::sub(
                    modp::add(
                        modp::mul(m[0][0], modp::sub(modp::mul(m[1][1], m[2][2], p), modp::mul(m[1][2], m[2][1], p), p), p),
                        modp::mul(m[0][2], modp::sub(modp::mul(m[1][0], m[2][1], p), modp::mul(m[1][1], m[2][0], p), p), p),
                        p,
                    ),
                    modp::mul(m[0][1], modp::sub(modp::mul(m[1][0], m[2][2], p), modp::mul(m[1][2], m[2][0], p), p), p),
                    p,
                );
                if det != 0 {
                    return true;
                }
            }
        }
        !self.jacobian().is_zero()
    }

    /// Exact membership in the decomposition group of the cubic: the cubic
    /// divides its pullback, so the map sends it into itself, and does not
    /// divide the Jacobian, so it is not contracted.
    pub fn preserves_curve(&self, cubic: &HomPoly) -> Result<bool> {
        let pulled = cubic.substitute(&self.components)?;
        if pulled.is_zero() || pulled.poly().exact_div(cubic.poly()).is_none() {
            return Ok(false);
        }
        Ok(self.jacobian().exact_div(cubic.poly()).is_none())
    }

    /// Membership in the decomposition group of a nonsingular cubic:
    /// the cubic divides its pullback, and on the sampled curve points the
    /// restriction is non-constant and injective. Injectivity on a finite
    /// sample is a proxy for birationality, not a proof.
    pub fn is_in_dec(&self, cubic: &HomPoly, samples: &[Vec<Rational>]) -> Result<bool> {
        check_nonsingular_cubic(cubic)?;
        let pulled = cubic.substitute(&self.components)?;
        if pulled.is_zero() {
            return Ok(false);
        }
        if pulled.poly().exact_div(cubic.poly()).is_none() {
            return Ok(false);
        }
        let mut images: Vec<Vec<Rational>> = Vec::new();
        for s in samples {
            if !cubic.vanishes_at(s) {
                return Err(Error::Precondition("sample point is not on the cubic".into()));
            }
            if let Some(img) = self.eval(s)? {
                if images.iter().any(|q| same_point(q, &img)) {
                    return Ok(false);
                }
                images.push(img);
            }
        }
        if images.len() < 3 {
            return Err(Error::Precondition("fewer than 3 usable sample points".into()));
        }
        Ok(true)
    }

    pub(crate) fn type_cell(&self) -> &OnceLock<HomaloidalType> {
        &self.cached_type
    }
}

/// Rejects cubics that are singular (or not cubics). The gradient's
/// common zeros are the singular points, by Euler's relation.
pub fn check_nonsingular_cubic(cubic: &HomPoly) -> Result<()> {
    if cubic.degree() != 3 || cubic.nvars() != 3 || cubic.is_zero() {
        return Err(Error::SingularCurve("not a plane cubic".into()));
    }
    let grad: Vec<HomPoly> = (0..3).map(|i| cubic.derivative(i)).collect();
    let z = zeros::common_zeros_plane(&grad)?;
    if z.component.is_some() || !z.points.is_empty() || z.unresolved > 0 {
        return Err(Error::SingularCurve(format!("{} singular point(s)", z.points.len().max(1))));
    }
    Ok(())
}

impl fmt::Debug for CremonaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CremonaMap(deg {}: {} : {} : {})", self.degree(), self.components[0], self.components[1], self.components[2])
    }
}

impl fmt::Display for CremonaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} : {})", self.components[0], self.components[1], self.components[2])
    }
}
