// SPDX-License-Identifier: Apache-2.0

//! Exact scalar and polynomial arithmetic.

pub mod hompoly;
mod mgcd;
pub mod modp;
pub mod poly;
pub mod rational;
pub mod upoly;
pub mod zeros;

pub use hompoly::{local_expansion, HomPoly};
pub use poly::{gcd, Poly};
pub use rational::{format_rational, parse_rational, q, qf, Rational};
pub use upoly::UPoly;
pub use zeros::{common_zeros_plane, normalize_point, same_point, PlaneZeros};

use crate::error::{Error, Result};

/// Divides a list of forms by the gcd of all of them and scales jointly so
/// the coefficients are coprime integers and the lex-leading coefficient of
/// the first nonzero form is positive.
pub fn content_normalize(forms: &[HomPoly]) -> Result<Vec<HomPoly>> {
    let first = forms.first().ok_or(Error::AllZero)?;
    let nv = first.nvars();
    if forms.iter().all(|f| f.is_zero()) {
        return Err(Error::AllZero);
    }
    let mut g = Poly::zero(nv);
    for f in forms.iter().filter(|f| !f.is_zero()) {
        g = gcd(&g, f.poly());
        if g.is_constant() {
            break;
        }
    }
    let gd = g.total_degree().unwrap_or(0);
    let divided: Vec<HomPoly> = forms
        .iter()
        .map(|f| {
            let p = f.poly().exact_div(&g).expect("gcd divides");
            HomPoly::with_degree(p, f.degree() - gd)
        })
        .collect::<Result<_>>()?;
    let coeffs: Vec<Rational> = divided.iter().flat_map(|f| f.poly().raw_terms().values().cloned()).collect();
    let prim = rational::primitive_integer_vector(&coeffs);
    // Find the scale factor from any nonzero coefficient.
    let (i, c) = coeffs.iter().enumerate().find(|(_, c)| !num_traits::Zero::is_zero(*c)).unwrap();
    let scale = &prim[i] / c;
    // Make the lex-leading coefficient of the first nonzero form positive.
    let lead = divided.iter().find(|f| !f.is_zero()).unwrap().poly().leading_coefficient().unwrap() * &scale;
    let scale = if num_traits::Signed::is_negative(&lead) { -scale } else { scale };
    Ok(divided.iter().map(|f| f.scale(&scale)).collect())
}
