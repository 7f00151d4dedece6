// SPDX-License-Identifier: Apache-2.0

//! Word-sized prime field arithmetic and dense univariate polynomials over
//! `F_p`. Used for fast probabilistic filters; every conclusion drawn from
//! a modular image is either one-sided or re-checked over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::rational::Rational;

/// A prime below 2^31, so products fit in `u64`.
pub const P31: u64 = 2_147_483_647;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    // Deterministic Miller–Rabin for 64-bit inputs.
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod_u128(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Interpolates values at distinct nodes mod `p` (Newton form).
pub fn interpolate(xs: &[u64], vs: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    let mut dd = vs.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = sub(dd[i], dd[i - 1], p);
            let den = sub(xs[i], xs[i - j], p);
            dd[i] = mul(num, inv(den, p).unwrap(), p);
        }
    }
    let mut acc = vec![dd[n - 1]];
    for i in (0..n - 1).rev() {
        // acc = acc * (x - xs[i]) + dd[i]
        let mut next = vec![0u64; acc.len() + 1];
        for (k, &a) in acc.iter().enumerate() {
            next[k + 1] = add(next[k + 1], a, p);
            next[k] = sub(next[k], mul(a, xs[i], p), p);
        }
        next[0] = add(next[0], dd[i], p);
        acc = next;
    }
    acc
}

/// Largest prime below `n`.
pub fn prev_prime(mut n: u64) -> u64 {
    loop {
        n -= 1;
        if is_prime(n) {
            return n;
        }
    }
}

/// Smallest prime `>= n`.
pub fn next_prime(mut n: u64) -> u64 {
    while !is_prime(n) {
        n += 1;
    }
    n
}

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p { s - p } else { s }
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b { a - b } else { a + p - b }
}

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow(b: u64, e: u64, p: u64) -> u64 {
    pow_mod_u128(b, e, p)
}

pub fn inv(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        None
    } else {
        Some(pow(a, p - 2, p))
    }
}

pub fn int_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("reduced below p")
}

/// Image of a rational in `F_p`; `None` when `p` divides the denominator.
pub fn rat_mod(r: &Rational, p: u64) -> Option<u64> {
    let d = int_mod(r.denom(), p);
    let n = int_mod(r.numer(), p);
    inv(d, p).map(|di| mul(n, di, p))
}

/// Dense polynomial over `F_p`, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { p, c }
    }

    /// Reduces a rational polynomial; `None` if a denominator vanishes.
    pub fn from_rationals(p: u64, coeffs: &[Rational]) -> Option<Self> {
        let c = coeffs.iter().map(|r| rat_mod(r, p)).collect::<Option<Vec<_>>>()?;
        Some(ModPoly::new(p, c))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &a| add(mul(acc, x, self.p), a, self.p))
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mul(a, i as u64 % self.p, self.p))
            .collect();
        ModPoly::new(self.p, c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return ModPoly::new(self.p, vec![]);
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = add(c[i + j], mul(a, b, self.p), self.p);
            }
        }
        ModPoly::new(self.p, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| sub(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0), self.p))
            .collect();
        ModPoly::new(self.p, c)
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let mut r = self.c.clone();
        let dl = d.c.len();
        let mut quo = vec![0u64; r.len().saturating_sub(dl - 1)];
        let lc_inv = inv(*d.c.last().unwrap(), p).unwrap();
        while r.len() >= dl {
            let q = mul(*r.last().unwrap(), lc_inv, p);
            let shift = r.len() - dl;
            quo[shift] = q;
            for (j, &b) in d.c.iter().enumerate() {
                r[shift + j] = sub(r[shift + j], mul(q, b, p), p);
            }
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        (ModPoly::new(p, quo), ModPoly { p, c: r })
    }

    /// Monic square-free part (valid when `p` exceeds the degree).
    pub fn square_free_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&lc) => {
                let li = inv(lc, self.p).unwrap();
                ModPoly::new(self.p, self.c.iter().map(|&a| mul(a, li, self.p)).collect())
            }
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: BigInt, m: &Self) -> Self {
        let mut result = ModPoly::new(self.p, vec![1]).rem(m);
        let mut base = self.rem(m);
        let two = BigInt::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                result = result.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e /= &two;
        }
        result
    }

    /// All roots in `F_p` by exhaustive evaluation; intended for small `p`.
    pub fn roots_bruteforce(&self) -> Vec<u64> {
        (0..self.p).filter(|&x| self.eval(x) == 0).collect()
    }
}
