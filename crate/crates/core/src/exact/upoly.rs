// SPDX-License-Identifier: Apache-2.0

//! Dense univariate polynomials over ℚ and their rational roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp::{self, ModPoly};
use super::rational::{common_denominator, Rational};

/// Coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(Vec<Rational>);

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn zero() -> Self {
        UPoly(vec![])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a)
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(c)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dl = d.0.len();
        if r.len() < dl {
            return (UPoly::zero(), self.clone());
        }
        let mut quo = vec![Rational::zero(); r.len() - dl + 1];
        let lc_inv = Rational::one() / d.0.last().unwrap();
        while r.len() >= dl {
            let c = r.last().unwrap() * &lc_inv;
            let shift = r.len() - dl;
            for (j, b) in d.0.iter().enumerate() {
                r[shift + j] -= &c * b;
            }
            quo[shift] = c;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (UPoly::new(quo), UPoly::new(r))
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(lc) => {
                let li = Rational::one() / lc;
                UPoly(self.0.iter().map(|a| a * &li).collect())
            }
        }
    }

    /// Monic gcd. Images mod word-sized primes are lifted by CRT and
    /// rational reconstruction; a candidate is accepted after exact trial
    /// division, so the result never depends on the primes chosen.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() || self.degree() == Some(0) || o.degree() == Some(0) {
            return if o.is_zero() { self.monic() } else { UPoly::new(vec![Rational::one()]) };
        }
        let (a, b) = (self.integer_primitive(), o.integer_primitive());
        let (la, lb) = (a.last().unwrap().clone(), b.last().unwrap().clone());
        let mut p = modp::P31;
        let mut acc: Option<(Vec<BigInt>, BigInt)> = None;
        let mut last: Option<UPoly> = None;
        loop {
            p = modp::prev_prime(p);
            if (&la % BigInt::from(p)).is_zero() || (&lb % BigInt::from(p)).is_zero() {
                continue;
            }
            let ga = ModPoly::new(p, a.iter().map(|x| modp::int_mod(x, p)).collect());
            let gb = ModPoly::new(p, b.iter().map(|x| modp::int_mod(x, p)).collect());
            let g = ga.gcd(&gb);
            if g.degree() == Some(0) {
                return UPoly::new(vec![Rational::one()]);
            }
            let img: Vec<BigInt> = g.c.iter().map(|&v| BigInt::from(v)).collect();
            let mp = BigInt::from(p);
            acc = Some(match acc.take() {
                Some((h, m)) if h.len() == img.len() => {
                    let m_inv = modp::inv(modp::int_mod(&m, p), p).unwrap();
                    let h = h
                        .iter()
                        .zip(&g.c)
                        .map(|(hv, &pv)| {
                            let t = modp::mul(modp::sub(pv, modp::int_mod(hv, p), p), m_inv, p);
                            hv + &m * BigInt::from(t)
                        })
                        .collect();
                    (h, m * mp)
                }
                Some((h, m)) if h.len() < img.len() => (h, m),
                _ => {
                    last = None;
                    (img, mp)
                }
            });
            let (h, m) = acc.as_ref().unwrap();
            let Some(c) = h.iter().map(|x| rational_reconstruct(x, m)).collect::<Option<Vec<_>>>() else {
                last = None;
                continue;
            };
            let cand = UPoly::new(c);
            if last.as_ref() == Some(&cand) && self.div_rem(&cand).1.is_zero() && o.div_rem(&cand).1.is_zero() {
                return cand;
            }
            last = Some(cand);
        }
    }

    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn integer_primitive(&self) -> Vec<BigInt> {
        let den = common_denominator(self.0.iter());
        let ints: Vec<BigInt> = self.0.iter().map(|a| (a * Rational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return ints;
        }
        let sgn = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|x| x / &g * &sgn).collect()
    }

    /// Distinct rational roots with multiplicities, in increasing order.
    pub fn rational_roots(&self) -> Vec<(Rational, u32)> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let sf = self.square_free_part();
        let mut roots = square_free_rational_roots(&sf);
        roots.sort();
        roots
            .into_iter()
            .map(|r| {
                let lin = UPoly::new(vec![-r.clone(), Rational::one()]);
                let mut m = 0;
                let mut cur = self.clone();
                loop {
                    let (qq, rr) = cur.div_rem(&lin);
                    if !rr.is_zero() {
                        break;
                    }
                    m += 1;
                    cur = qq;
                }
                (r, m)
            })
            .collect()
    }
}

/// Rational roots of a square-free polynomial via a p-adic lift: every
/// rational root `u/v` reduces to a simple root mod a good prime `p`;
/// Newton iteration lifts it until rational reconstruction is unique,
/// and each candidate is confirmed by exact evaluation.
fn square_free_rational_roots(f: &UPoly) -> Vec<Rational> {
    let mut roots = Vec::new();
    let mut f = f.clone();
    if f.0.first().is_some_and(|c| c.is_zero()) {
        roots.push(Rational::zero());
        f = UPoly::new(f.0[1..].to_vec());
    }
    let deg = match f.degree() {
        Some(d) if d > 0 => d,
        _ => return roots,
    };
    if deg == 1 {
        roots.push(-&f.0[0] / &f.0[1]);
        return roots;
    }
    let ints = f.integer_primitive();
    let a0 = ints[0].abs();
    let an = ints[deg].abs();
    let bound = a0.clone().max(an.clone());
    let modulus_needed: BigInt = BigInt::from(2) * &bound * &bound + 1;

    let mut p = modp::next_prime(1009.max(deg as u64 + 1));
    let fp = loop {
        if (&an % BigInt::from(p)).is_zero() {
            p = modp::next_prime(p + 1);
            continue;
        }
        let c: Vec<u64> = ints.iter().map(|x| modp::int_mod(x, p)).collect();
        let fp = ModPoly::new(p, c);
        if fp.gcd(&fp.derivative()).degree() == Some(0) {
            break fp;
        }
        p = modp::next_prime(p + 1);
    };

    let fprime: Vec<BigInt> = ints.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect();
    let eval_int = |c: &[BigInt], x: &BigInt, m: &BigInt| -> BigInt {
        c.iter().rev().fold(BigInt::zero(), |acc, a| (acc * x + a).mod_floor(m))
    };

    for r0 in fp.roots_bruteforce() {
        let mut r = BigInt::from(r0);
        let mut m = BigInt::from(p);
        while m < modulus_needed {
            let m2 = &m * &m;
            let fv = eval_int(&ints, &r, &m2);
            let dv = eval_int(&fprime, &r, &m2);
            let Some(dinv) = mod_inverse(&dv, &m2) else { break };
            r = (&r - fv * dinv).mod_floor(&m2);
            m = m2;
        }
        if let Some(cand) = rational_reconstruct(&r, &m) {
            if f.eval(&cand).is_zero() && !roots.contains(&cand) {
                roots.push(cand);
            }
        }
    }
    roots
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Finds `u/v ≡ r (mod m)` with `|u|, |v| <= sqrt(m/2)`, if one exists.
pub fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let qq = &r0 / &r1;
        let r2 = &r0 - &qq * &r1;
        let t2 = &t0 - &qq * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{q, qf};

    fn from_roots(rs: &[Rational]) -> UPoly {
        rs.iter().fold(UPoly::new(vec![q(1)]), |acc, r| acc.mul(&UPoly::new(vec![-r.clone(), q(1)])))
    }

    #[test]
    fn finds_rational_roots_with_multiplicity() {
        let f = from_roots(&[qf(3, 7), qf(3, 7), q(-12), q(0), qf(-5, 2)]);
        // times an irreducible quadratic
        let f = f.mul(&UPoly::new(vec![q(2), q(0), q(1)]));
        assert_eq!(
            f.rational_roots(),
            vec![(q(-12), 1), (qf(-5, 2), 1), (q(0), 1), (qf(3, 7), 2)]
        );
    }

    #[test]
    fn no_roots() {
        assert!(UPoly::new(vec![q(-2), q(0), q(1)]).rational_roots().is_empty());
        assert!(UPoly::new(vec![q(5)]).rational_roots().is_empty());
    }

    #[test]
    fn large_roots() {
        let big = Rational::new(BigInt::from(123_456_789_012i64), BigInt::from(987_654_321i64));
        let f = from_roots(&[big.clone(), q(1), q(2), q(3)]);
        let roots: Vec<Rational> = f.rational_roots().into_iter().map(|r| r.0).collect();
        assert!(roots.contains(&big));
        assert_eq!(roots.len(), 4);
    }

    #[test]
    fn gcd_monic() {
        let a = from_roots(&[q(1), q(2)]);
        let b = from_roots(&[q(2), q(3)]);
        assert_eq!(a.gcd(&b), from_roots(&[q(2)]));
    }
}
