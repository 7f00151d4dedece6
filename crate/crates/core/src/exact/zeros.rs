// SPDX-License-Identifier: Apache-2.0

//! Rational common zeros of plane forms.
//!
//! Zeros on the line `z = 0` come from binary forms; affine zeros come
//! from the gcd of several `y`-resultants, whose rational roots are then
//! lifted fibre by fibre. Only rational points are produced; irrational
//! candidates are counted, not located.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::hompoly::HomPoly;
use super::poly::{gcd, Poly};
use super::rational::{common_denominator, Rational};
use super::modp::{self, ModPoly};
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// Scales a projective point so that its last nonzero coordinate is 1.
pub fn normalize_point(pt: &[Rational]) -> Result<Vec<Rational>> {
    let k = pt.iter().rposition(|c| !c.is_zero()).ok_or(Error::ZeroPoint)?;
    let s = &pt[k];
    Ok(pt.iter().map(|c| c / s).collect())
}

/// Whether two projective points coincide.
pub fn same_point(a: &[Rational], b: &[Rational]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (i + 1..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
        && a.iter().any(|c| !c.is_zero())
        && b.iter().any(|c| !c.is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneZeros {
    /// Rational common zeros, normalized, in a canonical order.
    pub points: Vec<Vec<Rational>>,
    /// Common curve component (the gcd), if the forms share one.
    pub component: Option<HomPoly>,
    /// Number of candidate coordinates that are not rational; zero means
    /// the rational list is the whole zero set.
    pub unresolved: usize,
}

/// Common roots in `P^1` of binary forms in `(s, t)`, as `(s:t)` with
/// `t = 1` or the point `(1:0)`. Returns the rational roots and the number
/// of irrational ones.
pub fn binary_common_roots(forms: &[UPoly], degrees: &[u32]) -> (Vec<(Rational, Rational)>, usize) {
    // Each form f(s,t) is encoded by f(s,1) plus its formal degree.
    let mut roots = Vec::new();
    let live: Vec<(&UPoly, u32)> = forms.iter().zip(degrees).filter(|(f, _)| !f.is_zero()).map(|(f, &d)| (f, d)).collect();
    if live.is_empty() {
        return (roots, 0);
    }
    // (1:0) is a root iff the coefficient of s^d vanishes.
    if live.iter().all(|(f, d)| f.degree().unwrap_or(0) < *d as usize) {
        roots.push((Rational::one(), Rational::zero()));
    }
    let g = live.iter().fold(UPoly::zero(), |acc, (f, _)| acc.gcd(f));
    let sf = g.square_free_part();
    let rr = g.rational_roots();
    let unresolved = sf.degree().unwrap_or(0) - rr.len();
    roots.extend(rr.into_iter().map(|(r, _)| (r, Rational::one())));
    (roots, unresolved)
}

fn integer_coeffs(p: &Poly) -> Poly {
    let den = common_denominator(p.raw_terms().values());
    p.scale(&Rational::from_integer(den))
}

/// Fraction-free determinant.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Sylvester resultant of two integer polynomials with formal degrees.
fn sylvester(f: &[BigInt], df: usize, g: &[BigInt], dg: usize) -> BigInt {
    let n = df + dg;
    if n == 0 {
        return BigInt::one();
    }
    let coef = |c: &[BigInt], i: usize| c.get(i).cloned().unwrap_or_else(BigInt::zero);
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for r in 0..dg {
        for i in 0..=df {
            m[r][r + i] = coef(f, df - i);
        }
    }
    for r in 0..df {
        for i in 0..=dg {
            m[dg + r][r + i] = coef(g, dg - i);
        }
    }
    det_bareiss(m)
}

/// `Res_y(f, g)` for polynomials in `(x, y)` (variables 0 and 1 of a
/// three-variable ring, variable 2 absent), as a univariate polynomial in
/// `x`. Computed by evaluation at integers and Newton interpolation.
pub fn resultant_y(f: &Poly, g: &Poly) -> UPoly {
    let f = integer_coeffs(f);
    let g = integer_coeffs(g);
    let (df, dg) = (f.degree_in(1) as usize, g.degree_in(1) as usize);
    let bound = (f.total_degree().unwrap_or(0) * g.total_degree().unwrap_or(0)) as usize;
    let fc = f.coeffs_in(1);
    let gc = g.coeffs_in(1);
    let specialize = |cs: &[Poly], x: &BigInt| -> Vec<BigInt> {
        let xr = Rational::from_integer(x.clone());
        cs.iter()
            .map(|c| {
                let v = c.eval(&[xr.clone(), Rational::zero(), Rational::zero()]);
                debug_assert!(v.is_integer());
                v.to_integer()
            })
            .collect()
    };
    let xs: Vec<BigInt> = (0..=bound as i64).map(BigInt::from).collect();
    let ys: Vec<BigInt> = xs.iter().map(|x| sylvester(&specialize(&fc, x), df, &specialize(&gc, x), dg)).collect();
    newton_interpolate(&xs, &ys)
}

fn newton_interpolate(xs: &[BigInt], ys: &[BigInt]) -> UPoly {
    let n = xs.len();
    let mut dd: Vec<Rational> = ys.iter().map(|y| Rational::from_integer(y.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = Rational::from_integer(&xs[i] - &xs[i - j]);
            dd[i] = num / den;
        }
    }
    let mut acc = UPoly::new(vec![dd[n - 1].clone()]);
    for i in (0..n - 1).rev() {
        let lin = UPoly::new(vec![Rational::from_integer(-xs[i].clone()), Rational::one()]);
        acc = acc.mul(&lin);
        let mut c = acc.coeffs().to_vec();
        if c.is_empty() {
            c.push(Rational::zero());
        }
        c[0] += &dd[i];
        acc = UPoly::new(c);
    }
    acc
}

/// `y`-coefficients of an affine form, each as integer coefficients in `x`.
fn int_rows(f: &Poly) -> Vec<Vec<BigInt>> {
    integer_coeffs(f)
        .coeffs_in(1)
        .iter()
        .map(|c| c.to_univariate(0).iter().map(|r| r.to_integer()).collect())
        .collect()
}

/// Resultant of two univariate polynomials mod `p` (Euclidean algorithm).
fn resultant_mod(a: &ModPoly, b: &ModPoly) -> u64 {
    let p = a.p;
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut acc = 1u64;
    loop {
        let (Some(da), Some(db)) = (a.degree(), b.degree()) else { return 0 };
        if db == 0 {
            return modp::mul(acc, modp::pow(b.c[0], da as u64, p), p);
        }
        let r = a.rem(&b);
        let Some(dr) = r.degree() else { return 0 };
        if da % 2 == 1 && db % 2 == 1 {
            acc = modp::sub(0, acc, p);
        }
        acc = modp::mul(acc, modp::pow(*b.c.last().unwrap(), (da - dr) as u64, p), p);
        a = b;
        b = r;
    }
}

/// Image mod `p` of `Res_y(f, g)` by evaluation at `x = 0, 1, ...` and
/// interpolation. `None` if the prime is unusable.
fn resultant_image(f: &[Vec<BigInt>], g: &[Vec<BigInt>], bound: usize, p: u64) -> Option<ModPoly> {
    let red = |rows: &[Vec<BigInt>]| -> Vec<ModPoly> {
        rows.iter().map(|r| ModPoly::new(p, r.iter().map(|x| modp::int_mod(x, p)).collect())).collect()
    };
    let (fr, gr) = (red(f), red(g));
    let (lf, lg) = (fr.last()?, gr.last()?);
    if lf.is_zero() || lg.is_zero() {
        return None;
    }
    let mut xs = Vec::with_capacity(bound + 1);
    let mut ys = Vec::with_capacity(bound + 1);
    let mut alpha = 0u64;
    while xs.len() <= bound {
        if alpha >= p {
            return None;
        }
        if lf.eval(alpha) != 0 && lg.eval(alpha) != 0 {
            let fa = ModPoly::new(p, fr.iter().map(|c| c.eval(alpha)).collect());
            let ga = ModPoly::new(p, gr.iter().map(|c| c.eval(alpha)).collect());
            xs.push(alpha);
            ys.push(resultant_mod(&fa, &ga));
        }
        alpha += 1;
    }
    Some(ModPoly::new(p, modp::interpolate(&xs, &ys, p)))
}

type IntRows = Vec<Vec<BigInt>>;
/// Gcd length, then square-free part length reversed: smaller is better.
type DegreeKey = (usize, std::cmp::Reverse<usize>);

/// Square-free part of the monic gcd of the `y`-resultants of up to three pairs that have a nonzero
/// resultant, or `None` if every pair shares a factor.
///
/// The gcd is computed from images mod word-sized primes. The image degree
/// can only overshoot at finitely many primes, so the smallest degree seen
/// is kept and the lifted coefficients must agree over consecutive primes.
fn resultant_gcd(pairs: &[(&Poly, &Poly)]) -> Option<UPoly> {
    let data: Vec<(IntRows, IntRows, usize)> = pairs
        .iter()
        .map(|(a, b)| {
            let bound = (a.total_degree().unwrap_or(0) * b.total_degree().unwrap_or(0)) as usize;
            (int_rows(a), int_rows(b), bound)
        })
        .collect();
    let mut chosen: Option<Vec<usize>> = None;
    let mut p = modp::P31;
    // CRT accumulator: coefficients, modulus, and the image-size key of the primes it combines.
    let mut acc: Option<(Vec<BigInt>, BigInt, DegreeKey)> = None;
    let mut last: Option<(UPoly, usize)> = None;
    for _ in 0..4096 {
        p = modp::prev_prime(p);
        let idx: Vec<usize> = chosen.clone().unwrap_or_else(|| (0..data.len()).collect());
        let mut imgs = Vec::new();
        let mut bad = false;
        for &i in &idx {
            let (f, g, bound) = &data[i];
            match resultant_image(f, g, *bound, p) {
                Some(r) if !r.is_zero() => imgs.push((i, r)),
                Some(_) if chosen.is_none() => {}
                _ => {
                    bad = true;
                    break;
                }
            }
            if chosen.is_none() && imgs.len() == 3 {
                break;
            }
        }
        if bad {
            continue;
        }
        if chosen.is_none() {
            if imgs.is_empty() {
                return None;
            }
            chosen = Some(imgs.iter().map(|(i, _)| *i).collect());
        }
        let full = imgs.iter().fold(ModPoly::new(p, vec![]), |acc, (_, r)| acc.gcd(r));
        let g = full.square_free_part();
        if g.degree() == Some(0) {
            return Some(UPoly::new(vec![Rational::one()]));
        }
        // Bad primes raise the gcd degree or merge distinct roots; prefer the
        // smallest gcd, then the largest square-free part.
        let key = (full.c.len(), std::cmp::Reverse(g.c.len()));
        let mp = BigInt::from(p);
        acc = Some(match acc.take() {
            Some((h, m, k)) if k == key => {
                let m_inv = modp::inv(modp::int_mod(&m, p), p).unwrap();
                let h = h
                    .iter()
                    .zip(&g.c)
                    .map(|(hv, &pv)| hv + &m * BigInt::from(modp::mul(modp::sub(pv, modp::int_mod(hv, p), p), m_inv, p)))
                    .collect();
                (h, m * mp, k)
            }
            Some((h, m, k)) if k < key => (h, m, k),
            _ => {
                last = None;
                (g.c.iter().map(|&v| BigInt::from(v)).collect(), mp, key)
            }
        });
        let (h, m, _) = acc.as_ref().unwrap();
        let Some(c) = h.iter().map(|x| super::upoly::rational_reconstruct(x, m)).collect::<Option<Vec<_>>>() else {
            last = None;
            continue;
        };
        let cand = UPoly::new(c);
        match &mut last {
            Some((prev, n)) if *prev == cand => {
                *n += 1;
                if *n >= 2 {
                    return Some(cand);
                }
            }
            _ => last = Some((cand, 0)),
        }
    }
    panic!("resultant gcd did not stabilize");
}

/// Restriction of a form in `(x, y, z)` to `x = x0, z = 1`, as a polynomial in `y`.
fn fibre(f: &Poly, x0: &Rational) -> UPoly {
    let r = f.eval_var(0, x0).eval_var(2, &Rational::one());
    UPoly::new(r.to_univariate(1))
}

/// Rational common zeros of plane forms (three variables).
pub fn common_zeros_plane(forms: &[HomPoly]) -> Result<PlaneZeros> {
    if forms.iter().any(|f| f.nvars() != 3) {
        return Err(Error::DimensionMismatch { expected: 3, got: forms.iter().map(|f| f.nvars()).find(|&n| n != 3).unwrap() });
    }
    let live: Vec<&HomPoly> = forms.iter().filter(|f| !f.is_zero()).collect();
    if live.is_empty() {
        return Err(Error::AllZero);
    }
    let g = live.iter().fold(Poly::zero(3), |acc, f| gcd(&acc, f.poly()));
    let (component, reduced): (Option<HomPoly>, Vec<Poly>) = if g.is_constant() {
        (None, live.iter().map(|f| f.poly().clone()).collect())
    } else {
        let red = live.iter().map(|f| f.poly().exact_div(&g).expect("gcd divides")).collect();
        (Some(HomPoly::new(g)?), red)
    };
    if reduced.iter().any(|f| f.is_constant()) {
        return Ok(PlaneZeros { points: vec![], component, unresolved: 0 });
    }

    let mut points: Vec<Vec<Rational>> = Vec::new();
    let mut unresolved = 0;

    // Line z = 0: binary forms in (x, y).
    let (binaries, degs): (Vec<UPoly>, Vec<u32>) = reduced
        .iter()
        .map(|f| {
            let b = f.eval_var(2, &Rational::zero()).eval_var(1, &Rational::one());
            (UPoly::new(b.to_univariate(0)), f.total_degree().unwrap())
        })
        .unzip();
    let (broots, bun) = binary_common_roots(&binaries, &degs);
    unresolved += bun;
    for (s, t) in broots {
        points.push(normalize_point(&[s, t, Rational::zero()])?);
    }

    // Affine chart z = 1.
    let affine: Vec<Poly> = reduced.iter().map(|f| f.eval_var(2, &Rational::one())).collect();
    if affine.len() == 1 {
        // A single curve: infinitely many zeros, already reported as the component.
        points.sort();
        return Ok(PlaneZeros { points, component, unresolved });
    }
    let mut candidates: Vec<(Poly, Poly)> = Vec::new();
    for i in 0..affine.len() {
        for j in i + 1..affine.len() {
            candidates.push((affine[i].clone(), affine[j].clone()));
        }
    }
    // Fixed combinations to cut away spurious resultant roots.
    let weights = [[1i64, 2, 5, 11], [3, -1, 2, -7], [2, 7, -3, 1], [-5, 1, 4, 3]];
    for w in weights.windows(2) {
        let comb = |ws: &[i64; 4]| {
            affine.iter().zip(ws.iter().cycle()).fold(Poly::zero(3), |acc, (f, &c)| {
                &acc + &f.scale(&Rational::from_integer(BigInt::from(c)))
            })
        };
        if reduced.iter().all(|f| f.total_degree() == reduced[0].total_degree()) {
            candidates.push((comb(&w[0]), comb(&w[1])));
        }
    }
    let pairs: Vec<(&Poly, &Poly)> = candidates.iter().filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| (a, b)).collect();
    let Some(res) = resultant_gcd(&pairs) else {
        return Err(Error::Degenerate("no coprime pair among the forms".into()));
    };
    let sf = res.square_free_part();
    let xroots = res.rational_roots();
    unresolved += sf.degree().unwrap_or(0) - xroots.len();
    for (x0, _) in xroots {
        let h = affine.iter().fold(UPoly::zero(), |acc, f| acc.gcd(&fibre(f, &x0)));
        if h.is_zero() {
            // Every form vanishes on the whole line x = x0: cannot happen once
            // the gcd is removed, but report rather than loop.
            return Err(Error::Degenerate("forms share the line x = x0".into()));
        }
        let yr = h.rational_roots();
        unresolved += h.square_free_part().degree().unwrap_or(0) - yr.len();
        for (y0, _) in yr {
            points.push(vec![x0.clone(), y0, Rational::one()]);
        }
    }
    points.sort();
    points.dedup();
    Ok(PlaneZeros { points, component, unresolved })
}

/// Lcm of denominators and gcd of numerators removed; sign fixed so the
/// first nonzero coordinate is positive. Useful for printing.
pub fn integral_point(pt: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(pt.iter());
    let ints: Vec<BigInt> = pt.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    let s = if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) { -g } else { g };
    ints.into_iter().map(|x| x / &s).collect()
}
