// SPDX-License-Identifier: Apache-2.0

//! Sparse multivariate polynomials over ℚ in up to four variables.
//!
//! Monomials are packed into a `u64`, 16 bits per exponent, with variable 0
//! in the most significant field. Integer order on the packed word is then
//! lexicographic order with `x0 > x1 > x2 > x3`, so the last entry of the
//! term map is the lex leading term.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::mgcd;
use super::modp::{self, ModPoly};
use super::upoly::UPoly;
use super::rational::{common_denominator, q, Rational};

pub const MAX_VARS: usize = 4;
const FIELD: u32 = 16;
const MASK: u64 = 0xFFFF;

pub type Mono = u64;

#[inline]
fn shift(i: usize) -> u32 {
    FIELD * (MAX_VARS - 1 - i) as u32
}

#[inline]
pub fn mono_exp(m: Mono, i: usize) -> u32 {
    ((m >> shift(i)) & MASK) as u32
}

pub fn mono_from(exps: &[u32]) -> Mono {
    assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables");
    exps.iter().enumerate().fold(0, |acc, (i, &e)| {
        assert!(e <= MASK as u32, "exponent too large");
        acc | ((e as u64) << shift(i))
    })
}

#[inline]
pub fn mono_deg(m: Mono) -> u32 {
    (0..MAX_VARS).map(|i| mono_exp(m, i)).sum()
}

#[inline]
fn mono_set(m: Mono, i: usize, e: u32) -> Mono {
    (m & !(MASK << shift(i))) | ((e as u64) << shift(i))
}

/// Variable names used for display.
pub const VAR_NAMES: [&str; MAX_VARS] = ["x", "y", "z", "w"];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Mono, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS);
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(0, c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(nvars, &e, Rational::one())
    }

    pub fn monomial(nvars: usize, exps: &[u32], c: Rational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(mono_from(exps), c);
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(mono_from(&e), c);
        }
        p
    }

    fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&m| m == 0)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&0).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as `(exponents, coefficient)`, in increasing lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Vec<u32>, &Rational)> + '_ {
        self.terms
            .iter()
            .map(move |(&m, c)| ((0..self.nvars).map(|i| mono_exp(m, i)).collect(), c))
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<Mono, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(&mono_from(exps)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&m| mono_deg(m)).max()
    }

    /// Lowest total degree of a term (the order at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&m| mono_deg(m)).min()
    }

    /// Sum of the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(&m, _)| mono_deg(m) == d)
                .map(|(&m, c)| (m, c.clone()))
                .collect(),
        }
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|&m| mono_exp(m, i)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|&m| mono_deg(m));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    pub fn leading_monomial(&self) -> Option<Vec<u32>> {
        self.terms
            .keys()
            .next_back()
            .map(|&m| (0..self.nvars).map(|i| mono_exp(m, i)).collect())
    }

    /// Divides by the lex leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) => self.scale(&(Rational::one() / lc)),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(&m, a)| (m, a * c)).collect(),
        }
    }


    pub fn pow(&self, mut e: u32) -> Poly {
        let mut result = Poly::one(self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, pt: &[Rational]) -> Rational {
        assert_eq!(pt.len(), self.nvars);
        let mut powers: Vec<Vec<Rational>> = Vec::with_capacity(self.nvars);
        for (i, x) in pt.iter().enumerate() {
            let d = self.degree_in(i) as usize;
            let mut v = Vec::with_capacity(d + 1);
            v.push(Rational::one());
            for k in 1..=d {
                let next = &v[k - 1] * x;
                v.push(next);
            }
            powers.push(v);
        }
        let mut acc = Rational::zero();
        for (&m, c) in &self.terms {
            let mut t = c.clone();
            for (i, pw) in powers.iter().enumerate() {
                let e = mono_exp(m, i) as usize;
                if e > 0 {
                    t *= &pw[e];
                }
            }
            acc += t;
        }
        acc
    }

    /// Image in `F_p` at a point of `F_p^n`; `None` if a denominator vanishes.
    pub fn eval_mod(&self, pt: &[u64], p: u64) -> Option<u64> {
        let mut acc = 0u64;
        for (&m, c) in &self.terms {
            let mut t = modp::rat_mod(c, p)?;
            for (i, &x) in pt.iter().enumerate() {
                let e = mono_exp(m, i);
                if e > 0 {
                    t = modp::mul(t, modp::pow(x, e as u64, p), p);
                }
            }
            acc = modp::add(acc, t, p);
        }
        Some(acc)
    }

    /// Substitutes `x_i = v`, keeping the variable count.
    pub fn eval_var(&self, i: usize, v: &Rational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        let d = self.degree_in(i) as usize;
        let mut pw = vec![Rational::one()];
        for k in 1..=d {
            let next = &pw[k - 1] * v;
            pw.push(next);
        }
        for (&m, c) in &self.terms {
            let e = mono_exp(m, i) as usize;
            out.add_term(mono_set(m, i, 0), c * &pw[e]);
        }
        out
    }

    /// Coefficients with respect to `x_i`, low to high. Each coefficient
    /// is free of `x_i` and keeps the variable count.
    pub fn coeffs_in(&self, i: usize) -> Vec<Poly> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![Poly::zero(self.nvars); if self.is_zero() { 0 } else { d + 1 }];
        for (&m, c) in &self.terms {
            let e = mono_exp(m, i) as usize;
            out[e].terms.insert(mono_set(m, i, 0), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(nvars: usize, i: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (e, c) in coeffs.iter().enumerate() {
            for (&m, a) in &c.terms {
                debug_assert_eq!(mono_exp(m, i), 0);
                out.add_term(mono_set(m, i, e as u32), a.clone());
            }
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (&m, c) in &self.terms {
            let e = mono_exp(m, i);
            if e > 0 {
                out.add_term(mono_set(m, i, e - 1), c * q(e as i64));
            }
        }
        out
    }

    /// Substitutes `x_i = subs[i]`. All substitutes share a variable count,
    /// which becomes the variable count of the result.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let nv = subs.first().map(|s| s.nvars).unwrap_or(0);
        // Work with integer numerators: s_i = S_i / D_i, and every term is
        // brought to the common denominator den(self) · Π D_i^{deg_i}.
        let mut powers: Vec<Vec<IntPoly>> = Vec::with_capacity(self.nvars);
        let mut den_pows: Vec<Vec<BigInt>> = Vec::with_capacity(self.nvars);
        for (i, s) in subs.iter().enumerate() {
            let d = self.degree_in(i) as usize;
            let (num, den) = numerators(s);
            let num: IntPoly = num.into_iter().collect();
            let mut v: Vec<IntPoly> = vec![IntPoly::from([(0, BigInt::one())])];
            let mut dv = vec![BigInt::one()];
            for k in 1..=d {
                v.push(int_mul(&v[k - 1], &num));
                dv.push(&dv[k - 1] * &den);
            }
            powers.push(v);
            den_pows.push(dv);
        }
        let (coeffs, cden) = numerators(self);
        let mut acc = IntPoly::new();
        for (m, c) in coeffs {
            let mut scale = c;
            let mut t: Option<IntPoly> = None;
            for (i, pw) in powers.iter().enumerate() {
                let e = mono_exp(m, i) as usize;
                let top = pw.len() - 1;
                scale *= &den_pows[i][top - e];
                if e > 0 {
                    t = Some(match t {
                        None => pw[e].clone(),
                        Some(t) => int_mul(&t, &pw[e]),
                    });
                }
            }
            match t {
                None => *acc.entry(0).or_insert_with(BigInt::zero) += scale,
                Some(t) => {
                    for (k, v) in t {
                        *acc.entry(k).or_insert_with(BigInt::zero) += v * &scale;
                    }
                }
            }
        }
        let total_den = den_pows.iter().fold(cden, |a, dv| a * dv.last().unwrap());
        Poly {
            nvars: nv,
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, Rational::new(c, total_den.clone())))
                .collect(),
        }
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero(self.nvars));
        }
        if d.terms.len() == 1 {
            let (&dm, dc) = d.terms.iter().next().unwrap();
            let mut terms = BTreeMap::new();
            for (&m, c) in &self.terms {
                if (0..MAX_VARS).any(|i| mono_exp(m, i) < mono_exp(dm, i)) {
                    return None;
                }
                terms.insert(m - dm, c / dc);
            }
            return Some(Poly { nvars: self.nvars, terms });
        }
        if self.terms.len() * d.terms.len() > 4096 {
            return self.exact_div_modular(d);
        }
        let (&dm, dc) = d.terms.iter().next_back().unwrap();
        let dc_inv = Rational::one() / dc;
        let mut r = self.clone();
        let mut quo = Poly::zero(self.nvars);
        while let Some((&rm, rc)) = r.terms.iter().next_back() {
            if (0..MAX_VARS).any(|i| mono_exp(rm, i) < mono_exp(dm, i)) {
                return None;
            }
            let m = rm - dm;
            let c = rc * &dc_inv;
            for (&tm, tc) in &d.terms {
                let key = tm + m;
                let e = r.terms.entry(key).or_insert_with(Rational::zero);
                *e -= tc * &c;
                if e.is_zero() {
                    r.terms.remove(&key);
                }
            }
            quo.add_term(m, c);
        }
        Some(quo)
    }

    /// Exact division for large operands: quotients mod word-sized primes
    /// are lifted by CRT and rational reconstruction until they stabilize,
    /// then confirmed by one exact multiplication.
    fn exact_div_modular(&self, d: &Poly) -> Option<Poly> {
        let (na, da) = numerators(self);
        let (nd, dd) = numerators(d);
        let (&dm, _) = d.terms.iter().next_back().unwrap();
        let dlead = &nd.last().unwrap().1;
        let mut p = modp::P31;
        let mut acc: Option<(BTreeMap<Mono, BigInt>, BigInt)> = None;
        let mut last: Option<Poly> = None;
        for _ in 0..4096 {
            p = modp::prev_prime(p);
            if modp::int_mod(dlead, p) == 0 {
                continue;
            }
            let inv = modp::inv(modp::int_mod(dlead, p), p).unwrap();
            let dmod: Vec<(Mono, u64)> = nd.iter().map(|(m, c)| (*m, modp::int_mod(c, p))).collect();
            let mut r: BTreeMap<Mono, u64> =
                na.iter().map(|(m, c)| (*m, modp::int_mod(c, p))).filter(|(_, c)| *c != 0).collect();
            let mut quo: BTreeMap<Mono, u64> = BTreeMap::new();
            while let Some((&rm, &rc)) = r.iter().next_back() {
                if (0..MAX_VARS).any(|i| mono_exp(rm, i) < mono_exp(dm, i)) {
                    return None;
                }
                let m = rm - dm;
                let c = modp::mul(rc, inv, p);
                for &(tm, tc) in &dmod {
                    let key = tm + m;
                    let e = r.entry(key).or_insert(0);
                    *e = modp::sub(*e, modp::mul(tc, c, p), p);
                    if *e == 0 {
                        r.remove(&key);
                    }
                }
                quo.insert(m, c);
            }
            let mp = BigInt::from(p);
            acc = Some(match acc.take() {
                None => (quo.into_iter().map(|(m, c)| (m, BigInt::from(c))).collect(), mp),
                Some((mut h, m)) => {
                    let m_inv = modp::inv(modp::int_mod(&m, p), p).unwrap();
                    for k in quo.keys() {
                        h.entry(*k).or_insert_with(BigInt::zero);
                    }
                    for (k, hv) in h.iter_mut() {
                        let pv = quo.get(k).copied().unwrap_or(0);
                        let t = modp::mul(modp::sub(pv, modp::int_mod(hv, p), p), m_inv, p);
                        *hv += &m * BigInt::from(t);
                    }
                    (h, m * mp)
                }
            });
            let (h, m) = acc.as_ref().unwrap();
            let recon: Option<Vec<(Mono, Rational)>> = h
                .iter()
                .map(|(k, v)| super::upoly::rational_reconstruct(v, m).map(|c| (*k, c)))
                .collect();
            let Some(recon) = recon else {
                last = None;
                continue;
            };
            let scale = Rational::new(dd.clone(), da.clone());
            let cand = Poly {
                nvars: self.nvars,
                terms: recon
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c * &scale))
                    .collect(),
            };
            if last.as_ref() == Some(&cand) {
                return if &(&cand * d) == self { Some(cand) } else { None };
            }
            last = Some(cand);
        }
        None
    }

    /// Pseudo-remainder of `self` by `b` with respect to `x_i`.
    pub fn prem(&self, b: &Poly, i: usize) -> Poly {
        let bc = b.coeffs_in(i);
        let db = bc.len() - 1;
        let lb = &bc[db];
        let mut r = self.clone();
        loop {
            if r.is_zero() {
                return r;
            }
            let dr = r.degree_in(i) as usize;
            if dr < db {
                return r;
            }
            let lr = r.coeffs_in(i).pop().unwrap();
            let mut xm = vec![0u32; self.nvars];
            xm[i] = (dr - db) as u32;
            let shifted = &(&lr * b) * &Poly::monomial(self.nvars, &xm, Rational::one());
            r = &(&r * lb) - &shifted;
        }
    }

    /// Gcd of the coefficients with respect to `x_i`.
    pub fn content_in(&self, i: usize) -> Poly {
        let mut g = Poly::zero(self.nvars);
        let mut cs = self.coeffs_in(i);
        // Smaller coefficients first keeps the intermediate gcds cheap.
        cs.sort_by_key(|c| c.num_terms());
        for c in cs {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_constant() {
                break;
            }
        }
        g
    }

    pub fn primitive_part_in(&self, i: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_in(i);
        self.exact_div(&c).expect("content divides").monic()
    }

    /// Variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.degree_in(i) > 0).collect()
    }

    /// Homogenizes with respect to `x_k` to total degree `d`.
    /// Assumes `self` does not involve `x_k`.
    pub fn homogenize(&self, k: usize, d: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (&m, c) in &self.terms {
            let md = mono_deg(m);
            assert!(md <= d, "degree exceeds homogenization degree");
            out.add_term(mono_set(m, k, d - md), c.clone());
        }
        out
    }

    /// Drops variable `k`, shifting later variables down.
    pub fn drop_var(&self, k: usize) -> Poly {
        debug_assert_eq!(self.degree_in(k), 0);
        let nv = self.nvars - 1;
        let mut out = Poly::zero(nv);
        for (&m, c) in &self.terms {
            let e: Vec<u32> = (0..self.nvars).filter(|&i| i != k).map(|i| mono_exp(m, i)).collect();
            out.add_term(mono_from(&e), c.clone());
        }
        out
    }

    /// Univariate coefficient vector in `x_i`, valid when only `x_i` occurs.
    pub fn to_univariate(&self, i: usize) -> Vec<Rational> {
        let d = self.degree_in(i) as usize;
        let mut v = vec![Rational::zero(); if self.is_zero() { 0 } else { d + 1 }];
        for (&m, c) in &self.terms {
            debug_assert_eq!(mono_deg(m), mono_exp(m, i), "not univariate");
            v[mono_exp(m, i) as usize] = c.clone();
        }
        v
    }

    pub fn from_univariate(nvars: usize, i: usize, c: &[Rational]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (e, a) in c.iter().enumerate() {
            let mut ex = vec![0; nvars];
            ex[i] = e as u32;
            out.add_term(mono_from(&ex), a.clone());
        }
        out
    }

    /// Image in `F_p[x_i]` after substituting the other variables by `pt`.
    fn univariate_image(&self, i: usize, pt: &[u64], p: u64) -> Option<ModPoly> {
        let d = self.degree_in(i) as usize;
        let mut c = vec![0u64; d + 1];
        for (&m, a) in &self.terms {
            let mut t = modp::rat_mod(a, p)?;
            for (j, &x) in pt.iter().enumerate() {
                if j != i {
                    t = modp::mul(t, modp::pow(x, mono_exp(m, j) as u64, p), p);
                }
            }
            let e = mono_exp(m, i) as usize;
            c[e] = modp::add(c[e], t, p);
        }
        Some(ModPoly::new(p, c))
    }
}

/// Cheap one-sided coprimality test: `true` means the gcd is certainly a
/// constant. For each variable, specialize the others to pseudo-random
/// residues; if the leading coefficients survive and the univariate images
/// are coprime, the true gcd has degree zero in that variable.
fn certainly_coprime(a: &Poly, b: &Poly) -> bool {
    let p = modp::P31;
    let n = a.nvars;
    let vars: Vec<usize> = (0..n).filter(|&i| a.degree_in(i) > 0 && b.degree_in(i) > 0).collect();
    if vars.is_empty() {
        return true;
    }
    // Fixed, well-spread residues: determinism matters more than luck here,
    // and a miss only costs the slow path.
    let pt: Vec<u64> = (0..n as u64).map(|k| (1_234_567 + 7_654_321 * (k + 1) * (k + 3)) % p).collect();
    for &i in &vars {
        let (Some(ia), Some(ib)) = (a.univariate_image(i, &pt, p), b.univariate_image(i, &pt, p)) else {
            return false;
        };
        if ia.degree() != Some(a.degree_in(i) as usize) || ib.degree() != Some(b.degree_in(i) as usize) {
            return false;
        }
        if ia.gcd(&ib).degree() != Some(0) {
            return false;
        }
    }
    true
}

/// Monic (lex) greatest common divisor. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    assert_eq!(a.nvars, b.nvars);
    let n = a.nvars;
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(n);
    }
    if a == b {
        return a.monic();
    }
    if certainly_coprime(a, b) {
        return Poly::one(n);
    }
    let mut support: Vec<usize> = a.support_vars();
    for v in b.support_vars() {
        if !support.contains(&v) {
            support.push(v);
        }
    }
    support.sort();
    if support.len() == 1 {
        let v = support[0];
        let g = UPoly::new(a.to_univariate(v)).gcd(&UPoly::new(b.to_univariate(v)));
        return Poly::from_univariate(n, v, g.coeffs());
    }
    if support.len() >= 2 && a.is_homogeneous() && b.is_homogeneous() {
        return gcd_homogeneous(a, b, *support.last().unwrap());
    }
    if support.len() == 2 {
        return mgcd::gcd_bivariate(a, b, support[0], support[1]);
    }
    // A variable present in only one argument cannot occur in the gcd.
    for i in 0..n {
        let (da, db) = (a.degree_in(i), b.degree_in(i));
        if da > 0 && db == 0 {
            return gcd(&a.content_in(i), b);
        }
        if db > 0 && da == 0 {
            return gcd(a, &b.content_in(i));
        }
    }
    // Main variable: the one of least degree keeps the remainder sequence short.
    let v = (0..n)
        .filter(|&i| a.degree_in(i) > 0)
        .min_by_key(|&i| a.degree_in(i).max(b.degree_in(i)))
        .expect("non-constant");
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut pa = a.exact_div(&ca).unwrap().monic();
    let mut pb = b.exact_div(&cb).unwrap().monic();
    if pa.degree_in(v) < pb.degree_in(v) {
        std::mem::swap(&mut pa, &mut pb);
    }
    while pb.degree_in(v) > 0 {
        let r = pa.prem(&pb, v);
        if r.is_zero() {
            break;
        }
        pa = pb;
        pb = r.primitive_part_in(v);
    }
    let g = if pb.degree_in(v) == 0 { Poly::one(n) } else { pb };
    (&c * &g).monic()
}

/// Largest power of `x_k` dividing `p`.
fn valuation(p: &Poly, k: usize) -> u32 {
    p.terms.keys().map(|&m| mono_exp(m, k)).min().unwrap_or(0)
}

/// For forms: `gcd(z^i a1, z^j b1) = z^min(i,j) · gcd(a1, b1)`, and the
/// second factor is recovered from the dehomogenized gcd.
fn gcd_homogeneous(a: &Poly, b: &Poly, k: usize) -> Poly {
    let n = a.nvars;
    let (va, vb) = (valuation(a, k), valuation(b, k));
    let strip = |p: &Poly, v: u32| {
        let mut e = vec![0u32; n];
        e[k] = v;
        p.exact_div(&Poly::monomial(n, &e, Rational::one())).unwrap().eval_var(k, &Rational::one())
    };
    let h = gcd(&strip(a, va), &strip(b, vb));
    let d = h.total_degree().unwrap_or(0);
    let mut e = vec![0u32; n];
    e[k] = va.min(vb);
    (&h.homogenize(k, d) * &Poly::monomial(n, &e, Rational::one())).monic()
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut out = big.clone();
        for (&m, c) in &small.terms {
            out.add_term(m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (&m, c) in &o.terms {
            out.add_term(m, -c);
        }
        out
    }
}

type IntPoly = BTreeMap<Mono, BigInt>;

fn int_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = IntPoly::new();
    for (m1, c1) in a {
        for (m2, c2) in b {
            *out.entry(m1 + m2).or_insert_with(BigInt::zero) += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn numerators(p: &Poly) -> (Vec<(Mono, BigInt)>, BigInt) {
    let den = common_denominator(p.terms.values());
    let n = p
        .terms
        .iter()
        .map(|(&m, c)| (m, c.numer() * (&den / c.denom())))
        .collect();
    (n, den)
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        // Multiply integer numerators over a common denominator; one
        // normalization per output term instead of one per product.
        let (na, da) = numerators(self);
        let (nb, db) = numerators(o);
        let mut acc: BTreeMap<Mono, BigInt> = BTreeMap::new();
        for (m1, c1) in &na {
            for (m2, c2) in &nb {
                *acc.entry(m1 + m2).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        let den = da * db;
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, Rational::new(c, den.clone())))
            .collect();
        Poly { nvars: self.nvars, terms }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(&m, c)| (m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: Poly) -> Poly {
                (&self).$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let vars: Vec<String> = (0..self.nvars)
                .filter(|&i| mono_exp(m, i) > 0)
                .map(|i| match mono_exp(m, i) {
                    1 => VAR_NAMES[i].to_string(),
                    e => format!("{}^{}", VAR_NAMES[i], e),
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.nvars, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(3, 0)
    }
    fn y() -> Poly {
        Poly::var(3, 1)
    }
    fn z() -> Poly {
        Poly::var(3, 2)
    }
    fn c(n: i64) -> Poly {
        Poly::constant(3, q(n))
    }

    #[test]
    fn lex_leading_term() {
        let p = &(&x() * &z()) + &y().pow(5);
        assert_eq!(p.leading_monomial(), Some(vec![1, 0, 1]));
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = &(&x() + &c(2)) * &(&y() - &z());
        let b = &(&x() - &y()).pow(3) + &z();
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!((&prod + &c(1)).exact_div(&a), None);
    }

    #[test]
    fn gcd_finds_common_factor() {
        let g = &(&x() * &y()) - &z().pow(2);
        let a = &g * &(&x() + &y());
        let b = &g.pow(2) * &(&x() - &(&y() * &c(3)));
        assert_eq!(gcd(&a, &b), g.monic());
        assert!(gcd(&(&x() + &y()), &(&x() - &y())).is_constant());
    }

    #[test]
    fn gcd_with_variable_powers() {
        let a = &x().pow(3) * &(&y() + &z());
        let b = &x().pow(2) * &(&y() + &z()).pow(2);
        let expected = (&x().pow(2) * &(&y() + &z())).monic();
        assert_eq!(gcd(&a, &b), expected);
    }

    #[test]
    fn compose_and_eval_agree() {
        let f = &(&x().pow(2) * &y()) - &z().pow(3);
        let subs = vec![&y() + &z(), &x() * &c(2), z()];
        let g = f.compose(&subs);
        let pt = vec![q(3), q(-1), q(2)];
        let spt: Vec<Rational> = subs.iter().map(|s| s.eval(&pt)).collect();
        assert_eq!(g.eval(&pt), f.eval(&spt));
    }

    #[test]
    fn display() {
        let p = &(&x().pow(2) * &c(3)) - &(&y() * &z());
        assert_eq!(p.to_string(), "3*x^2 - y*z");
    }
}
