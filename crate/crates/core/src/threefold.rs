// SPDX-License-Identifier: Apache-2.0

//! A quartic threefold `D = x₀²A + x₀B + C ⊂ P³` with a double point at
//! `P = (1:0:0:0)`, its birational involution
//! `(−Ax₀ − B : Ax₁ : Ax₂ : Ax₃)`, and the six base lines through `P`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::modp::{self, ModPoly};
use crate::exact::{common_zeros_plane, content_normalize, q, HomPoly, Poly, Rational};

/// Lifts a form in `(x₁, x₂, x₃)` to `(x₀, …, x₃)`.
fn lift(f: &HomPoly) -> HomPoly {
    let p = Poly::from_terms(4, f.poly().terms().map(|(e, c)| (vec![0, e[0], e[1], e[2]], c.clone())));
    HomPoly::with_degree(p, f.degree()).expect("lift keeps homogeneity")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticData {
    pub a: HomPoly,
    pub b: HomPoly,
    pub c: HomPoly,
    pub d: HomPoly,
}

impl QuarticData {
    /// Checks degrees 2, 3, 4 in three variables and that `A` has rank 3.
    pub fn new(a: HomPoly, b: HomPoly, c: HomPoly) -> Result<Self> {
        for (f, deg, name) in [(&a, 2, "A"), (&b, 3, "B"), (&c, 4, "C")] {
            if f.nvars() != 3 {
                return Err(Error::DimensionMismatch { expected: 3, got: f.nvars() });
            }
            if f.degree() != deg && !f.is_zero() {
                return Err(Error::DegreeMismatch(format!("{name} must have degree {deg}")));
            }
        }
        let x0 = HomPoly::var(4, 0);
        let (la, lb, lc) = (lift(&a), lift(&b), lift(&c));
        let d = x0.pow(2).mul(&la).add(&x0.mul(&lb))?.add(&lc)?;
        let q = QuarticData { a, b, c, d };
        if q.a_rank() != 3 {
            return Err(Error::Precondition("A must be a quadratic form of rank 3".into()));
        }
        Ok(q)
    }

    /// `A = x₁x₃ − x₂²`, `B = x₂(x₃ − x₁)(x₃ − 4x₁) + A(x₁ + x₂ + x₃)`,
    /// `C = x₁⁴ + x₂⁴ + x₃⁴ + x₁x₂x₃(x₁ + x₃)`. On the conic `(1 : t : t²)`
    /// the cubic restricts to `t(t² − 1)(t² − 4)`, vanishing at six
    /// rational points with `t ∈ {0, ±1, ±2, ∞}`.
    pub fn desk_instance() -> Self {
        let v = |i| Poly::var(3, i);
        let (x1, x2, x3) = (v(0), v(1), v(2));
        let a = &(&x1 * &x3) - &x2.pow(2);
        let b = &(&(&x2 * &(&x3 - &x1)) * &(&x3 - &x1.scale(&q(4)))) + &(&a * &(&(&x1 + &x2) + &x3));
        let c = &(&(&x1.pow(4) + &x2.pow(4)) + &x3.pow(4)) + &(&(&(&x1 * &x2) * &x3) * &(&x1 + &x3));
        QuarticData::new(HomPoly::new(a).unwrap(), HomPoly::new(b).unwrap(), HomPoly::new(c).unwrap())
            .expect("desk instance is valid")
    }

    /// Gram matrix of `A`.
    fn a_gram(&self) -> [[Rational; 3]; 3] {
        let two = q(2);
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let h = self.a.poly().derivative(i).derivative(j).constant_term();
                h / &two
            })
        })
    }

    pub fn a_rank(&self) -> usize {
        rank(self.a_gram().iter().map(|r| r.to_vec()).collect())
    }

    /// Multiplicity of `D` at `P` and rank of its tangent cone there.
    pub fn singularity_at_p(&self) -> Result<(u32, usize)> {
        let m = self.d.mult_at(&[q(1), q(0), q(0), q(0)])?;
        Ok((m, if m == 2 { self.a_rank() } else { 0 }))
    }

    /// One-sided irreducibility test: if the restriction of `D` to some line
    /// is an irreducible quartic mod `p`, then `D` is irreducible over ℚ.
    pub fn irreducible_witness<R: Rng>(&self, rng: &mut R, tries: usize) -> bool {
        let p = modp::prev_prime(1 << 20);
        for _ in 0..tries {
            let pt: Vec<[u64; 2]> = (0..4).map(|_| [rng.gen_range(0..p), rng.gen_range(0..p)]).collect();
            // Values at s = x, t = 1 for x = 0..4 determine the restriction.
            let xs: Vec<u64> = (0..5).collect();
            let vals: Option<Vec<u64>> = xs
                .iter()
                .map(|&x| {
                    let at: Vec<u64> = pt.iter().map(|c| modp::add(modp::mul(c[0], x, p), c[1], p)).collect();
                    self.d.poly().eval_mod(&at, p)
                })
                .collect();
            let Some(vals) = vals else { continue };
            let f = ModPoly::new(p, modp::interpolate(&xs, &vals, p));
            if f.degree() == Some(4) && irreducible_quartic_mod_p(&f) {
                return true;
            }
        }
        false
    }
}

/// A quartic over `F_p` is irreducible iff it has no factor of degree 1 or
/// 2, i.e. is coprime to `x^p − x` and `x^{p²} − x`.
fn irreducible_quartic_mod_p(f: &ModPoly) -> bool {
    let p = f.p;
    let x = ModPoly::new(p, vec![0, 1]);
    let mut frob = x.clone();
    for _ in 0..2 {
        frob = frob.pow_mod(BigInt::from(p), f);
        if f.gcd(&frob.sub(&x)).degree() != Some(0) {
            return false;
        }
    }
    true
}

fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, piv);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, pv) in row.iter_mut().zip(&pivot) {
                    *x -= &f * pv;
                }
            }
        }
        r += 1;
    }
    r
}

/// A rational self-map of `P³` given by four forms of equal degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceMap {
    components: Vec<HomPoly>,
}

impl SpaceMap {
    /// Content-normalizes the components.
    pub fn new(components: Vec<HomPoly>) -> Result<Self> {
        if components.len() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: components.len() });
        }
        if components.iter().any(|c| c.nvars() != 4) {
            return Err(Error::DimensionMismatch { expected: 4, got: components[0].nvars() });
        }
        let deg = components.iter().find(|c| !c.is_zero()).ok_or(Error::AllZero)?.degree();
        if components.iter().any(|c| !c.is_zero() && c.degree() != deg) {
            return Err(Error::DegreeMismatch("components differ in degree".into()));
        }
        let components = components.into_iter().map(|c| HomPoly::with_degree(c.into_poly(), deg)).collect::<Result<Vec<_>>>()?;
        Ok(SpaceMap { components: content_normalize(&components)? })
    }

    pub fn identity() -> Self {
        SpaceMap { components: (0..4).map(|i| HomPoly::var(4, i)).collect() }
    }

    pub fn components(&self) -> &[HomPoly] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components[0].degree()
    }

    /// `self ∘ inner`, without removing common factors.
    fn compose_raw(&self, inner: &SpaceMap) -> Result<Vec<HomPoly>> {
        self.components.iter().map(|c| c.substitute(&inner.components)).collect()
    }

    pub fn eval(&self, pt: &[Rational]) -> Vec<Rational> {
        self.components.iter().map(|c| c.eval(pt)).collect()
    }
}

/// `(−Ax₀ − B : Ax₁ : Ax₂ : Ax₃)`.
pub fn build_involution(q: &QuarticData) -> SpaceMap {
    let a = lift(&q.a);
    let b = lift(&q.b);
    let x = |i| HomPoly::var(4, i);
    let first = a.mul(&x(0)).add(&b).expect("degree 3").scale(&-Rational::one());
    let comps = vec![first, a.mul(&x(1)), a.mul(&x(2)), a.mul(&x(3))];
    SpaceMap { components: comps }
}

/// Whether `f ∘ f` is the identity once common factors and content are
/// removed.
pub fn is_involution(f: &SpaceMap) -> Result<bool> {
    let h = f.compose_raw(f)?;
    let normalized = content_normalize(&h).map_err(|_| Error::Degenerate("self-composition vanishes".into()))?;
    Ok(normalized == SpaceMap::identity().components)
}

/// Degree of `D∘f / D` when `D` divides `D∘f`.
pub fn preserves_quartic(f: &SpaceMap, q: &QuarticData) -> Result<Option<u32>> {
    let pulled = q.d.substitute(&f.components)?;
    if pulled.is_zero() {
        return Ok(None);
    }
    Ok(pulled.exact_div(&q.d).map(|h| h.degree()))
}

/// The line through `P` and `(0 : p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseLine {
    #[serde(with = "crate::exact::rational::serde_rational_vec")]
    pub direction: Vec<Rational>,
}

impl BaseLine {
    /// `(s : t p₁ : t p₂ : t p₃)` as forms in `(s, t)`.
    fn parametrization(&self) -> Vec<HomPoly> {
        let s = HomPoly::var(2, 0);
        let t = HomPoly::var(2, 1);
        std::iter::once(s).chain(self.direction.iter().map(|c| t.scale(c))).collect()
    }

    /// Restriction of a form on `P³` to the line.
    pub fn restrict(&self, f: &HomPoly) -> Result<HomPoly> {
        f.substitute(&self.parametrization())
    }
}

/// The lines joining `P` to the points of `{A = 0} ∩ {B = 0}`; each is
/// checked to lie in the base locus of the involution.
pub fn base_lines(q: &QuarticData) -> Result<Vec<BaseLine>> {
    let zeros = common_zeros_plane(&[q.a.clone(), q.b.clone()])?;
    if zeros.component.is_some() {
        return Err(Error::NotGeneral("A and B share a component".into()));
    }
    if zeros.unresolved > 0 {
        return Err(Error::NotGeneral(format!("{} intersection point(s) are not rational", zeros.unresolved)));
    }
    if zeros.points.len() != 6 {
        return Err(Error::NotGeneral(format!("{} distinct intersection points instead of 6", zeros.points.len())));
    }
    let phi = build_involution(q);
    let lines: Vec<BaseLine> = zeros.points.into_iter().map(|p| BaseLine { direction: p }).collect();
    for l in &lines {
        for c in phi.components() {
            if !l.restrict(c)?.is_zero() {
                return Err(Error::Verification("a component does not vanish on a base line".into()));
            }
        }
    }
    Ok(lines)
}

/// Whether some base line is not contained in `D`.
pub fn bs_not_in_quartic(lines: &[BaseLine], q: &QuarticData) -> Result<bool> {
    for l in lines {
        if !l.restrict(&q.d)?.is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All checks on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreefoldReport {
    pub involution: bool,
    pub preserves_quartic: bool,
    pub quotient_degree: Option<u32>,
    pub multiplicity_at_p: u32,
    pub tangent_cone_rank: usize,
    pub irreducible: bool,
    pub base_lines: Vec<BaseLine>,
    pub bs_not_in_quartic: bool,
}

pub fn check<R: Rng>(q: &QuarticData, rng: &mut R) -> Result<ThreefoldReport> {
    let phi = build_involution(q);
    let quotient = preserves_quartic(&phi, q)?;
    let (mult, cone) = q.singularity_at_p()?;
    let lines = base_lines(q)?;
    Ok(ThreefoldReport {
        involution: is_involution(&phi)?,
        preserves_quartic: quotient.is_some(),
        quotient_degree: quotient,
        multiplicity_at_p: mult,
        tangent_cone_rank: cone,
        irreducible: q.irreducible_witness(rng, 64),
        bs_not_in_quartic: bs_not_in_quartic(&lines, q)?,
        base_lines: lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn desk_instance_checks() {
        let qd = QuarticData::desk_instance();
        let r = check(&qd, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert!(r.involution && r.preserves_quartic && r.irreducible && r.bs_not_in_quartic);
        assert_eq!(r.quotient_degree, Some(8));
        assert_eq!((r.multiplicity_at_p, r.tangent_cone_rank), (2, 3));
        assert_eq!(r.base_lines.len(), 6);
        for l in &r.base_lines {
            assert_eq!(l.restrict(&qd.d).unwrap().degree(), 4);
        }
    }

    #[test]
    fn involution_shape() {
        let qd = QuarticData::desk_instance();
        let phi = build_involution(&qd);
        assert_eq!(phi.degree(), 3);
        assert_eq!(phi.components()[3], lift(&qd.a).mul(&HomPoly::var(4, 3)));
    }

    #[test]
    fn trivial_involutions() {
        assert!(is_involution(&SpaceMap::identity()).unwrap());
        let x = |i| HomPoly::var(4, i);
        let swap = SpaceMap::new(vec![x(1), x(0), x(2), x(3)]).unwrap();
        assert!(is_involution(&swap).unwrap());
        let qd = QuarticData::desk_instance();
        assert_eq!(preserves_quartic(&SpaceMap::identity(), &qd).unwrap(), Some(0));
    }

    fn desk_parts() -> (Poly, Poly, Poly, Poly) {
        let qd = QuarticData::desk_instance();
        let v = |i| Poly::var(3, i);
        (qd.a.poly().clone(), v(0), v(1), v(2))
    }

    #[test]
    fn tangent_cubic_is_not_general() {
        // On the conic, x₂(x₃ − x₁)² restricts to t(t² − 1)².
        let (a, x1, x2, x3) = desk_parts();
        let b = &(&x2 * &(&x3 - &x1).pow(2)) + &(&a * &x1);
        let qd = QuarticData::desk_instance();
        let t = QuarticData::new(qd.a.clone(), HomPoly::new(b).unwrap(), qd.c.clone()).unwrap();
        assert!(matches!(base_lines(&t), Err(Error::NotGeneral(_))));
    }

    #[test]
    fn quartic_containing_the_lines() {
        // C = A·(x₁² + x₂² + x₃²) vanishes on the six points, so D contains
        // every base line; a negative test outside the general case.
        let (a, x1, x2, x3) = desk_parts();
        let c = &a * &(&(&x1.pow(2) + &x2.pow(2)) + &x3.pow(2));
        let qd = QuarticData::desk_instance();
        let r = QuarticData::new(qd.a.clone(), qd.b.clone(), HomPoly::new(c).unwrap()).unwrap();
        let lines = base_lines(&r).unwrap();
        assert!(!bs_not_in_quartic(&lines, &r).unwrap());
    }

    #[test]
    fn generic_linear_map_moves_the_quartic() {
        let x = |i| HomPoly::var(4, i);
        let f = SpaceMap::new(vec![x(0).add(&x(1)).unwrap(), x(1), x(2), x(3).add(&x(0)).unwrap()]).unwrap();
        assert_eq!(preserves_quartic(&f, &QuarticData::desk_instance()).unwrap(), None);
    }

    #[test]
    fn rank_two_conic_rejected() {
        let (_, x1, x2, _) = desk_parts();
        let qd = QuarticData::desk_instance();
        let a = HomPoly::new(&x1 * &x2).unwrap();
        assert!(matches!(QuarticData::new(a, qd.b.clone(), qd.c.clone()), Err(Error::Precondition(_))));
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(vec![vec![q(1), q(2)], vec![q(2), q(4)]]), 1);
        assert_eq!(rank(vec![vec![q(0), q(1)], vec![q(1), q(0)]]), 2);
    }
}
