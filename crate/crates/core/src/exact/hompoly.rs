// SPDX-License-Identifier: Apache-2.0

//! Homogeneous forms: a `Poly` tagged with its degree, so that the zero
//! form still knows where it lives.

use std::fmt;

use num_traits::Zero;

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomPoly {
    poly: Poly,
    degree: u32,
}

impl HomPoly {
    /// Wraps a nonzero homogeneous polynomial.
    pub fn new(poly: Poly) -> Result<Self> {
        if !poly.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let degree = poly.total_degree().ok_or(Error::ZeroPolynomial("degree"))?;
        Ok(HomPoly { poly, degree })
    }

    /// Wraps a homogeneous polynomial of known degree (zero allowed).
    pub fn with_degree(poly: Poly, degree: u32) -> Result<Self> {
        if !poly.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        if let Some(d) = poly.total_degree() {
            if d != degree {
                return Err(Error::DegreeMismatch(format!("form of degree {d} tagged as {degree}")));
            }
        }
        Ok(HomPoly { poly, degree })
    }

    pub fn zero(nvars: usize, degree: u32) -> Self {
        HomPoly { poly: Poly::zero(nvars), degree }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        HomPoly { poly: Poly::var(nvars, i), degree: 1 }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, pt: &[Rational]) -> Rational {
        self.poly.eval(pt)
    }

    pub fn vanishes_at(&self, pt: &[Rational]) -> bool {
        self.eval(pt).is_zero()
    }

    pub fn derivative(&self, i: usize) -> HomPoly {
        HomPoly { poly: self.poly.derivative(i), degree: self.degree.saturating_sub(1) }
    }

    pub fn mul(&self, o: &HomPoly) -> HomPoly {
        HomPoly { poly: &self.poly * &o.poly, degree: self.degree + o.degree }
    }

    pub fn add(&self, o: &HomPoly) -> Result<HomPoly> {
        if self.degree != o.degree {
            return Err(Error::DegreeMismatch(format!("{} vs {}", self.degree, o.degree)));
        }
        Ok(HomPoly { poly: &self.poly + &o.poly, degree: self.degree })
    }

    pub fn scale(&self, c: &Rational) -> HomPoly {
        HomPoly { poly: self.poly.scale(c), degree: self.degree }
    }

    pub fn pow(&self, e: u32) -> HomPoly {
        HomPoly { poly: self.poly.pow(e), degree: self.degree * e }
    }

    /// `F(G_0, …, G_n)` for forms `G_i` of a common degree.
    pub fn substitute(&self, subs: &[HomPoly]) -> Result<HomPoly> {
        if subs.len() != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), got: subs.len() });
        }
        let d = subs[0].degree;
        if subs.iter().any(|s| s.degree != d) {
            return Err(Error::DegreeMismatch("substituted forms differ in degree".into()));
        }
        let polys: Vec<Poly> = subs.iter().map(|s| s.poly.clone()).collect();
        Ok(HomPoly { poly: self.poly.compose(&polys), degree: self.degree * d })
    }

    pub fn exact_div(&self, d: &HomPoly) -> Option<HomPoly> {
        let q = self.poly.exact_div(&d.poly)?;
        Some(HomPoly { poly: q, degree: self.degree - d.degree })
    }

    /// Multiplicity of the hypersurface at a projective point (0 if the
    /// point is off it). The zero form has no finite multiplicity; it
    /// reports `u32::MAX`.
    pub fn mult_at(&self, pt: &[Rational]) -> Result<u32> {
        Ok(local_expansion(&self.poly, pt)?.order().unwrap_or(u32::MAX))
    }
}

/// Dehomogenizes at the last nonzero coordinate of `pt` and moves `pt` to
/// the origin. The chart variable keeps its slot but no longer occurs.
pub fn local_expansion(poly: &Poly, pt: &[Rational]) -> Result<Poly> {
    let n = poly.nvars();
    if pt.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: pt.len() });
    }
    let k = pt.iter().rposition(|c| !c.is_zero()).ok_or(Error::ZeroPoint)?;
    let subs: Vec<Poly> = (0..n)
        .map(|j| {
            if j == k {
                Poly::constant(n, Rational::from_integer(1.into()))
            } else {
                &Poly::var(n, j) + &Poly::constant(n, &pt[j] / &pt[k])
            }
        })
        .collect();
    Ok(poly.compose(&subs))
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

impl fmt::Debug for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomPoly[deg {}]({})", self.degree, self.poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::q;

    #[test]
    fn multiplicity_of_node() {
        // y^2 z = x^2 (x + z): node at (0:0:1)
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let z = Poly::var(3, 2);
        let f = &(&y.pow(2) * &z) - &(&x.pow(2) * &(&x + &z));
        let f = HomPoly::new(f).unwrap();
        assert_eq!(f.mult_at(&[q(0), q(0), q(1)]).unwrap(), 2);
        assert_eq!(f.mult_at(&[q(-1), q(0), q(1)]).unwrap(), 1);
        assert_eq!(f.mult_at(&[q(1), q(1), q(1)]).unwrap(), 0);
        assert!(f.mult_at(&[q(0), q(0), q(0)]).is_err());
    }

    #[test]
    fn rejects_inhomogeneous() {
        let p = &Poly::var(3, 0) + &Poly::var(3, 1).pow(2);
        assert_eq!(HomPoly::new(p), Err(Error::NotHomogeneous));
    }
}
