// SPDX-License-Identifier: Apache-2.0

//! Homaloidal types `(d; m_1, ..., m_r)` and their arithmetic.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::forest::{base_forest_seeded, shared_points};
use super::map::CremonaMap;
use crate::elliptic::{CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};

/// Degree and base-point multiplicities, the latter non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomaloidalType {
    pub d: u32,
    pub mults: Vec<u32>,
}

impl HomaloidalType {
    /// Sorts the multiplicities and drops zeros.
    pub fn new(d: u32, mut mults: Vec<u32>) -> Self {
        mults.retain(|&m| m > 0);
        mults.sort_unstable_by(|a, b| b.cmp(a));
        HomaloidalType { d, mults }
    }

    /// The equations of condition: `Σm = 3d − 3` and `Σm² = d² − 1`.
    pub fn noether_check(&self) -> bool {
        let d = self.d as i64;
        let s1: i64 = self.mults.iter().map(|&m| m as i64).sum();
        let s2: i64 = self.mults.iter().map(|&m| (m as i64) * (m as i64)).sum();
        d >= 1 && s1 == 3 * d - 3 && s2 == d * d - 1
    }

    /// `(d; d−1, 1^{2d−2})`, or a projectivity.
    pub fn is_de_jonquieres(&self) -> bool {
        if !self.noether_check() {
            return false;
        }
        if self.d == 1 {
            return true;
        }
        let d = self.d;
        self.mults.len() == (2 * d - 1) as usize && self.mults[0] == d - 1 && self.mults[1..].iter().all(|&m| m == 1)
    }

    /// Center of a de Jonquières type: index of the maximal multiplicity.
    pub fn center(&self) -> Option<usize> {
        if self.mults.is_empty() { None } else { Some(0) }
    }
}

impl fmt::Display for HomaloidalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.d)?;
        let mut sep = ";";
        let mut i = 0;
        while i < self.mults.len() {
            let m = self.mults[i];
            let run = self.mults[i..].iter().take_while(|&&x| x == m).count();
            if run > 1 {
                write!(f, "{sep}{m}^{run}")?;
            } else {
                write!(f, "{sep}{m}")?;
            }
            sep = ",";
            i += run;
        }
        write!(f, ")")
    }
}

/// Degree of `g ∘ f⁻¹` from the types of `f` and `g` and the multiplicity
/// pairs `(m_i, ℓ_i)` of their common base points: `d·e − Σ m_i ℓ_i`.
pub fn composition_degree(tf: &HomaloidalType, tg: &HomaloidalType, shared: &[(u32, u32)]) -> Result<u32> {
    let deg = tf.d as i64 * tg.d as i64 - shared.iter().map(|&(m, l)| m as i64 * l as i64).sum::<i64>();
    if deg < 1 {
        return Err(Error::NegativeDegree(deg));
    }
    Ok(deg as u32)
}

/// Homaloidal type from the full base forest; cached on the map.
pub fn homaloidal_type(f: &CremonaMap) -> Result<HomaloidalType> {
    if let Some(t) = f.type_cell().get() {
        return Ok(t.clone());
    }
    let forest = base_forest_seeded(f, None, None, crate::config::DEFAULT_SEED)?;
    let t = HomaloidalType::new(f.degree(), forest.nodes.iter().map(|n| n.mult).collect());
    if !t.noether_check() {
        return Err(Error::NoetherViolated { degree: t.d, mults: t.mults });
    }
    Ok(f.type_cell().get_or_init(|| t).clone())
}

/// Predicted degree of `g ∘ f⁻¹` with shared points read off the two base
/// forests (same proper point, same chain of tangent directions).
pub fn predicted_composition_degree(f_inverse: &CremonaMap, g: &CremonaMap) -> Result<u32> {
    let seed = crate::config::DEFAULT_SEED;
    let ff = base_forest_seeded(f_inverse, None, None, seed)?;
    let fg = base_forest_seeded(g, None, None, seed)?;
    composition_degree(&homaloidal_type(f_inverse)?, &homaloidal_type(g)?, &shared_points(&ff, &fg))
}

/// An element of the inertia group of the curve: `φ_R ∘ φ_Q ∘ φ_P` with
/// `R = ⊖(P ⊕ Q)`. Its restriction to the curve is translation by
/// `P ⊕ Q ⊕ R = O`, while as a plane map it has degree 22 in general.
pub fn inertia_witness(curve: &WeierstrassCurve, p: &CurvePoint, q: &CurvePoint) -> Result<CremonaMap> {
    let s = curve.add(p, q)?;
    if p.is_infinity() || q.is_infinity() || s.is_infinity() {
        return Err(Error::NeutralTranslation);
    }
    let r = curve.neg(&s)?;
    let fp = curve.translation_map(p)?;
    let fq = curve.translation_map(q)?;
    let fr = curve.translation_map(&r)?;
    fr.compose(&fq.compose(&fp)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noether_examples() {
        assert!(HomaloidalType::new(4, vec![3, 1, 1, 1, 1, 1, 1]).noether_check());
        assert!(HomaloidalType::new(4, vec![2, 2, 2, 1, 1, 1]).noether_check());
        assert!(!HomaloidalType::new(4, vec![3, 3]).noether_check());
        assert!(HomaloidalType::new(1, vec![]).noether_check());
    }

    #[test]
    fn de_jonquieres_examples() {
        assert!(HomaloidalType::new(4, vec![3, 1, 1, 1, 1, 1, 1]).is_de_jonquieres());
        assert!(HomaloidalType::new(2, vec![1, 1, 1]).is_de_jonquieres());
        assert!(!HomaloidalType::new(5, vec![2; 6]).is_de_jonquieres());
        assert!(!HomaloidalType::new(4, vec![2, 2, 2, 1, 1, 1]).is_de_jonquieres());
    }

    #[test]
    fn composition_degree_examples() {
        let t4 = HomaloidalType::new(4, vec![3, 1, 1, 1, 1, 1, 1]);
        assert_eq!(composition_degree(&t4, &t4, &[(1, 1); 6]), Ok(10));
        assert_eq!(composition_degree(&t4, &t4, &[]), Ok(16));
        let t2 = HomaloidalType::new(2, vec![1, 1, 1]);
        assert_eq!(composition_degree(&t2, &t2, &[(1, 1); 3]), Ok(1));
        assert!(matches!(composition_degree(&t2, &t2, &[(3, 3)]), Err(Error::NegativeDegree(_))));
    }

    #[test]
    fn display_uses_exponents() {
        assert_eq!(HomaloidalType::new(4, vec![1, 3, 1, 1, 1, 1, 1]).to_string(), "(4;3,1^6)");
        assert_eq!(HomaloidalType::new(1, vec![]).to_string(), "(1)");
    }

    #[test]
    fn standard_quadratic_type() {
        let t = homaloidal_type(&CremonaMap::standard_quadratic()).unwrap();
        assert_eq!(t, HomaloidalType::new(2, vec![1, 1, 1]));
        assert_eq!(homaloidal_type(&CremonaMap::identity()).unwrap(), HomaloidalType::new(1, vec![]));
    }
}
