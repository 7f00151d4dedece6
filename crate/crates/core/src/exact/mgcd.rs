// SPDX-License-Identifier: Apache-2.0

//! Modular gcd for polynomials in two variables (Brown's dense method):
//! images mod word-sized primes are built by evaluation and interpolation
//! in `x`, combined by CRT, and the candidate is accepted only after exact
//! trial division over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::modp::{self, ModPoly};
use super::poly::Poly;
use super::rational::{common_denominator, Rational};
use super::upoly::UPoly;

/// Coefficients in `y` (low to high), each a polynomial in `x`.
type Biv = Vec<UPoly>;

fn to_biv(p: &Poly, vx: usize, vy: usize) -> Biv {
    let dy = p.degree_in(vy) as usize;
    let dx = p.degree_in(vx) as usize;
    let mut m = vec![vec![Rational::zero(); dx + 1]; dy + 1];
    for (e, c) in p.terms() {
        m[e[vy] as usize][e[vx] as usize] = c.clone();
    }
    m.into_iter().map(UPoly::new).collect()
}

fn from_biv(b: &Biv, nvars: usize, vx: usize, vy: usize) -> Poly {
    let mut terms = Vec::new();
    for (j, cx) in b.iter().enumerate() {
        for (i, c) in cx.coeffs().iter().enumerate() {
            let mut e = vec![0u32; nvars];
            e[vx] = i as u32;
            e[vy] = j as u32;
            terms.push((e, c.clone()));
        }
    }
    Poly::from_terms(nvars, terms)
}

fn content_x(b: &Biv) -> UPoly {
    b.iter().fold(UPoly::zero(), |acc, c| if c.is_zero() { acc } else { acc.gcd(c) })
}

fn div_by_content(b: &Biv, c: &UPoly) -> Biv {
    b.iter().map(|cx| if cx.is_zero() { cx.clone() } else { cx.div_rem(c).0 }).collect()
}

/// Integer coefficient matrix with overall content 1.
fn integerize(b: &Biv) -> Vec<Vec<BigInt>> {
    let den = common_denominator(b.iter().flat_map(|c| c.coeffs().iter()));
    let dr = Rational::from_integer(den);
    let ints: Vec<Vec<BigInt>> = b
        .iter()
        .map(|c| c.coeffs().iter().map(|a| (a * &dr).to_integer()).collect())
        .collect();
    let g = ints.iter().flatten().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return ints;
    }
    ints.into_iter().map(|row| row.into_iter().map(|x| x / &g).collect()).collect()
}

fn reduce_row(row: &[BigInt], p: u64) -> ModPoly {
    ModPoly::new(p, row.iter().map(|x| modp::int_mod(x, p)).collect())
}

fn int_upoly(c: &[BigInt]) -> UPoly {
    UPoly::new(c.iter().map(|x| Rational::from_integer(x.clone())).collect())
}

/// Image of `gcd(a, b)` mod `p`, scaled so that its leading coefficient
/// in `y` is `gamma`. Returns `None` if `p` is unusable.
fn gcd_mod_p(a: &[ModPoly], b: &[ModPoly], gamma: &ModPoly, dx_bound: usize, p: u64) -> Option<Vec<Vec<u64>>> {
    let (la, lb) = (a.last().unwrap(), b.last().unwrap());
    let mut nodes: Vec<u64> = Vec::new();
    let mut images: Vec<Vec<u64>> = Vec::new();
    let mut dy = usize::MAX;
    let mut alpha = 1u64;
    while nodes.len() < dx_bound + 1 {
        alpha += 1;
        if alpha >= p {
            return None;
        }
        let g_a = gamma.eval(alpha);
        if g_a == 0 || la.eval(alpha) == 0 || lb.eval(alpha) == 0 {
            continue;
        }
        let ua = ModPoly::new(p, a.iter().map(|c| c.eval(alpha)).collect());
        let ub = ModPoly::new(p, b.iter().map(|c| c.eval(alpha)).collect());
        let u = ua.gcd(&ub);
        let d = u.degree().unwrap();
        if d == 0 {
            return Some(vec![vec![1]]);
        }
        if d > dy {
            continue; // unlucky evaluation
        }
        if d < dy {
            dy = d;
            nodes.clear();
            images.clear();
        }
        nodes.push(alpha);
        images.push(u.c.iter().map(|&c| modp::mul(c, g_a, p)).collect());
    }
    let mut out = Vec::with_capacity(dy + 1);
    for j in 0..=dy {
        let vs: Vec<u64> = images.iter().map(|im| im[j]).collect();
        out.push(modp::interpolate(&nodes, &vs, p));
    }
    Some(out)
}

/// Monic (lex) gcd of two polynomials whose support lies in `{x_vx, x_vy}`.
pub(crate) fn gcd_bivariate(a: &Poly, b: &Poly, vx: usize, vy: usize) -> Poly {
    let n = a.nvars();
    let (ba, bb) = (to_biv(a, vx, vy), to_biv(b, vx, vy));
    let (ca, cb) = (content_x(&ba), content_x(&bb));
    let c = ca.gcd(&cb);
    let c_poly = from_biv(&vec![c.clone()], n, vx, vy);
    if ba.len() == 1 || bb.len() == 1 {
        return c_poly.monic();
    }
    let pa = integerize(&div_by_content(&ba, &ca));
    let pb = integerize(&div_by_content(&bb, &cb));
    let (la, lb) = (int_upoly(pa.last().unwrap()), int_upoly(pb.last().unwrap()));
    let gamma_u = la.gcd(&lb);
    let gamma: Vec<BigInt> = gamma_u.integer_primitive();
    let deg_x = |m: &Vec<Vec<BigInt>>| m.iter().map(|r| r.len().saturating_sub(1)).max().unwrap_or(0);
    let dx_bound = deg_x(&pa).min(deg_x(&pb)) + gamma.len().saturating_sub(1);
    let lead_int = |r: &Vec<BigInt>| r.last().cloned().unwrap_or_else(BigInt::one);

    let pa_poly = from_biv(&pa.iter().map(|r| int_upoly(r)).collect(), n, vx, vy);
    let pb_poly = from_biv(&pb.iter().map(|r| int_upoly(r)).collect(), n, vx, vy);

    // Images are normalized so the top coefficient (highest y, then x degree)
    // is 1; their CRT lift is then recovered by rational reconstruction, which
    // needs only as many primes as the height of the gcd itself.
    let mut p = modp::P31;
    let mut acc: Option<(Vec<Vec<BigInt>>, BigInt)> = None;
    let mut last_candidate: Option<Vec<Vec<Rational>>> = None;
    loop {
        p = modp::prev_prime(p);
        let bad = [pa.last().unwrap(), pb.last().unwrap(), &gamma]
            .iter()
            .any(|r| (lead_int(r) % BigInt::from(p)).is_zero());
        if bad {
            continue;
        }
        let ra: Vec<ModPoly> = pa.iter().map(|r| reduce_row(r, p)).collect();
        let rb: Vec<ModPoly> = pb.iter().map(|r| reduce_row(r, p)).collect();
        let rg = reduce_row(&gamma, p);
        let Some(mut img) = gcd_mod_p(&ra, &rb, &rg, dx_bound, p) else { continue };
        if img.len() == 1 {
            return c_poly.monic();
        }
        let width = dx_bound + 1;
        let top = img.last().unwrap().iter().rev().copied().find(|&v| v != 0).unwrap_or(0);
        if top == 0 {
            continue;
        }
        let top_inv = modp::inv(top, p).unwrap();
        for row in img.iter_mut() {
            row.resize(width, 0);
            for v in row.iter_mut() {
                *v = modp::mul(*v, top_inv, p);
            }
        }
        let mp = BigInt::from(p);
        acc = Some(match acc.take() {
            None => (img.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(), mp),
            Some((h, _)) if h.len() > img.len() => {
                // Earlier primes were unlucky.
                last_candidate = None;
                (img.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(), mp)
            }
            Some((h, m)) if h.len() < img.len() => (h, m),
            Some((h, m)) => {
                let m_inv = modp::inv(modp::int_mod(&m, p), p).unwrap();
                let combined: Vec<Vec<BigInt>> = h
                    .iter()
                    .zip(&img)
                    .map(|(hr, ir)| {
                        hr.iter()
                            .zip(ir)
                            .map(|(hv, &pv)| {
                                let t = modp::mul(modp::sub(pv, modp::int_mod(hv, p), p), m_inv, p);
                                hv + &m * BigInt::from(t)
                            })
                            .collect()
                    })
                    .collect();
                (combined, m * mp)
            }
        });
        let (h, m) = acc.as_ref().unwrap();
        let recon: Option<Vec<Vec<Rational>>> = h
            .iter()
            .map(|r| r.iter().map(|x| super::upoly::rational_reconstruct(x, m)).collect())
            .collect();
        let Some(recon) = recon else {
            last_candidate = None;
            continue;
        };
        if last_candidate.as_ref() == Some(&recon) {
            // The images carry the leading-coefficient factor γ; strip it.
            let rb: Biv = recon.iter().map(|r| UPoly::new(r.clone())).collect();
            let cand = from_biv(&div_by_content(&rb, &content_x(&rb)), n, vx, vy);
            if pa_poly.exact_div(&cand).is_some() && pb_poly.exact_div(&cand).is_some() {
                return (&c_poly * &cand).monic();
            }
        }
        last_candidate = Some(recon);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::q;

    #[test]
    fn matches_known_factor() {
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let one = Poly::one(3);
        let g = &(&(&x * &y).pow(2) - &x.scale(&q(3))) + &one;
        let a = &g * &(&x.pow(3) + &y);
        let b = &g.pow(2) * &(&y.pow(2) - &x.scale(&q(7)));
        assert_eq!(gcd_bivariate(&a, &b, 0, 1), g.monic());
    }

    #[test]
    fn x_content_kept() {
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let one = Poly::one(3);
        let a = &(&x + &one) * &(&y + &x);
        let b = &(&x + &one) * &(&y - &x);
        assert_eq!(gcd_bivariate(&a, &b, 0, 1), (&x + &one).monic());
    }

    #[test]
    fn leading_coefficient_factor_is_removed() {
        // gcd(y²z⁴ + z³/3, −3yz³ + z²) = z², while γ = gcd(y², −3y) = y.
        let y = Poly::var(3, 1);
        let z = Poly::var(3, 2);
        let a = &(&y.pow(2) * &z.pow(4)) + &z.pow(3).scale(&crate::exact::rational::qf(1, 3));
        let b = &(&y * &z.pow(3)).scale(&q(-3)) + &z.pow(2);
        assert_eq!(gcd_bivariate(&a, &b, 1, 2), z.pow(2));
    }
}
