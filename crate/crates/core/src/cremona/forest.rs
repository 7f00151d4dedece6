// SPDX-License-Identifier: Apache-2.0

//! Proper and infinitely near base points of a plane linear system.
//!
//! Each proper base point is blown up repeatedly in affine charts. At a
//! point with local coordinates `(u, v)` the system has multiplicity `m`;
//! the infinitely near base points are the common roots of the degree-`m`
//! initial forms. The chart for a direction `(c : 1)` is
//! `(u, v) = (e(w + c), e)`, for `(1 : 0)` it is `(u, v) = (e, ew)`; in
//! both the exceptional line is `e = 0` and the new point is the origin
//! of `(w, e)`. Strict transforms are total transforms divided by `e^m`.

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::map::CremonaMap;
use crate::error::{Error, Result};
use crate::exact::zeros::binary_common_roots;
use crate::exact::{local_expansion, normalize_point, same_point, HomPoly, Poly, Rational, UPoly};

/// Depth limit for chains of infinitely near points.
pub const MAX_DEPTH: u32 = 64;

/// Tangent direction at a point, in the chart coordinates `(u : v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// `(c : 1)`.
    Finite(#[serde(with = "crate::exact::rational::serde_rational")] Rational),
    /// `(1 : 0)`.
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestNode {
    pub id: usize,
    /// Projective coordinates for a proper point; for an infinitely near
    /// point, the direction `(u : v)` in the parent's chart.
    #[serde(with = "crate::exact::rational::serde_rational_vec")]
    pub point: Vec<Rational>,
    pub parent: Option<usize>,
    pub mult: u32,
    pub on_cubic: bool,
    pub level: u32,
    /// Proper point this node lies over.
    #[serde(with = "crate::exact::rational::serde_rational_vec")]
    pub root: Vec<Rational>,
    /// Directions from the root down to this node.
    pub lineage: Vec<Direction>,
}

/// Base points in depth-first preorder: parents precede children.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BubbleForest {
    pub nodes: Vec<ForestNode>,
}

impl BubbleForest {
    pub fn roots(&self) -> impl Iterator<Item = &ForestNode> {
        self.nodes.iter().filter(|n| n.parent.is_none())
    }

    pub fn children(&self, id: usize) -> impl Iterator<Item = &ForestNode> {
        self.nodes.iter().filter(move |n| n.parent == Some(id))
    }

    pub fn node(&self, id: usize) -> Option<&ForestNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn mults(&self) -> Vec<u32> {
        self.nodes.iter().map(|n| n.mult).collect()
    }

    /// Length of the longest chain of infinitely near points over `id`.
    pub fn chain_length(&self, id: usize) -> usize {
        self.children(id).map(|c| 1 + self.chain_length(c.id)).max().unwrap_or(0)
    }

    /// Structural check: ids are positions, parents precede children,
    /// levels increase by one along parent links.
    pub fn is_well_formed(&self) -> bool {
        self.nodes.iter().enumerate().all(|(i, n)| {
            n.id == i
                && match n.parent {
                    None => n.level == 0 && n.lineage.is_empty(),
                    Some(p) => p < i && self.nodes[p].level + 1 == n.level && n.lineage.len() == n.level as usize,
                }
        })
    }
}

/// Multiplicity pairs of points common to two forests. Two nodes coincide
/// when they lie over the same proper point along the same directions.
pub fn shared_points(a: &BubbleForest, b: &BubbleForest) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for x in &a.nodes {
        if let Some(y) = b.nodes.iter().find(|y| y.lineage == x.lineage && same_point(&y.root, &x.root)) {
            out.push((x.mult, y.mult));
        }
    }
    out
}

/// Base forest with a generator seeded from `seed`.
pub fn base_forest_seeded(
    f: &CremonaMap,
    cubic: Option<&HomPoly>,
    hints: Option<&[Vec<Rational>]>,
    seed: u64,
) -> Result<BubbleForest> {
    base_forest(f, cubic, hints, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// All base points of `f`, with incidence to `cubic` when given. Proper
/// points come from `hints` if supplied (each is checked) and otherwise
/// from the rational common zeros of the components.
pub fn base_forest<R: Rng>(
    f: &CremonaMap,
    cubic: Option<&HomPoly>,
    hints: Option<&[Vec<Rational>]>,
    rng: &mut R,
) -> Result<BubbleForest> {
    let mut forest = BubbleForest::default();
    if f.degree() == 1 {
        return Ok(forest);
    }
    let roots = match hints {
        Some(h) => {
            let mut pts: Vec<Vec<Rational>> = Vec::new();
            for p in h {
                let p = normalize_point(p)?;
                if f.eval(&p)?.is_some() {
                    return Err(Error::Precondition("hinted point is not a base point".into()));
                }
                if !pts.iter().any(|q| same_point(q, &p)) {
                    pts.push(p);
                }
            }
            pts
        }
        None => f.proper_base_points()?,
    };
    for root in roots {
        let comps = f
            .components()
            .iter()
            .map(|c| local_expansion(c.poly(), &root).map(|p| to_local(&p, &root)))
            .collect::<Result<Vec<_>>>()?;
        let c = match cubic {
            Some(c) => Some(to_local(&local_expansion(c.poly(), &root)?, &root)),
            None => None,
        };
        let weights: Vec<[i64; 3]> = (0..3).map(|_| [0, 1, 2].map(|_| rng.gen_range(-1000..=1000))).collect();
        let ctx = Walk { root: root.clone(), weights };
        ctx.visit(&mut forest, &comps, c.as_ref(), None, root.clone(), Vec::new())?;
    }
    Ok(forest)
}

struct Walk {
    root: Vec<Rational>,
    weights: Vec<[i64; 3]>,
}

impl Walk {
    fn visit(
        &self,
        forest: &mut BubbleForest,
        comps: &[Poly],
        cubic: Option<&Poly>,
        parent: Option<usize>,
        point: Vec<Rational>,
        lineage: Vec<Direction>,
    ) -> Result<()> {
        let m = system_order(comps);
        if m == 0 {
            return Ok(());
        }
        self.cross_check(comps, m)?;
        let level = lineage.len() as u32;
        if level > MAX_DEPTH {
            return Err(Error::Verification(format!("chain of infinitely near points deeper than {MAX_DEPTH}")));
        }
        let c_order = cubic.and_then(|c| c.order()).unwrap_or(0);
        let id = forest.nodes.len();
        forest.nodes.push(ForestNode {
            id,
            point,
            parent,
            mult: m,
            on_cubic: cubic.is_some() && c_order >= 1,
            level,
            root: self.root.clone(),
            lineage: lineage.clone(),
        });

        let initial: Vec<UPoly> = comps
            .iter()
            .map(|c| c.homogeneous_part(m))
            .filter(|h| !h.is_zero())
            .map(|h| UPoly::new(h.eval_var(1, &Rational::one()).to_univariate(0)))
            .collect();
        let degs = vec![m; initial.len()];
        let (dirs, irrational) = binary_common_roots(&initial, &degs);
        if irrational > 0 {
            return Err(Error::IrrationalBasePoint(format!("{irrational} irrational direction(s) at level {}", level + 1)));
        }
        for (s, t) in dirs {
            let (dir, subs) = if t.is_zero() {
                (Direction::Infinite, [e(), &e() * &w()])
            } else {
                let c = &s / &t;
                (Direction::Finite(c.clone()), [&e() * &(&w() + &Poly::constant(2, c)), e()])
            };
            let next: Vec<Poly> = comps.iter().map(|c| strict(c, &subs, m)).collect();
            let next_cubic = cubic.map(|c| strict(c, &subs, c_order));
            let mut lin = lineage.clone();
            lin.push(dir.clone());
            let pt = match dir {
                Direction::Finite(c) => vec![c, Rational::one()],
                Direction::Infinite => vec![Rational::one(), Rational::zero()],
            };
            self.visit(forest, &next, next_cubic.as_ref(), Some(id), pt, lin)?;
        }
        Ok(())
    }

    /// The multiplicity of a general member must match the minimum over the
    /// components; random combinations catch accidental cancellation.
    fn cross_check(&self, comps: &[Poly], m: u32) -> Result<()> {
        let generic = self
            .weights
            .iter()
            .map(|w| {
                comps.iter().zip(w).fold(Poly::zero(2), |acc, (c, &k)| &acc + &c.scale(&Rational::from_integer(k.into())))
            })
            .filter_map(|p| p.order())
            .min();
        if generic != Some(m) {
            return Err(Error::Verification(format!("system multiplicity {m} not attained by a general member")));
        }
        Ok(())
    }
}

fn w() -> Poly {
    Poly::var(2, 0)
}

fn e() -> Poly {
    Poly::var(2, 1)
}

fn system_order(comps: &[Poly]) -> u32 {
    comps.iter().filter_map(|c| c.order()).min().unwrap_or(0)
}

/// Substitutes the chart and removes `e^k`.
fn strict(p: &Poly, subs: &[Poly; 2], k: u32) -> Poly {
    let total = p.compose(subs);
    if k == 0 {
        return total;
    }
    total.exact_div(&e().pow(k)).expect("exceptional factor divides the total transform")
}

/// Drops the chart variable of a local expansion at `pt`, leaving a
/// polynomial in the two remaining coordinates.
fn to_local(p: &Poly, pt: &[Rational]) -> Poly {
    let k = pt.iter().rposition(|c| !c.is_zero()).expect("nonzero point");
    let keep: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    Poly::from_terms(2, p.terms().map(|(ex, c)| (vec![ex[keep[0]], ex[keep[1]]], c.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn standard_quadratic_has_three_simple_points() {
        let f = base_forest_seeded(&CremonaMap::standard_quadratic(), None, None, 7).unwrap();
        assert_eq!(f.mults(), vec![1, 1, 1]);
        assert!(f.nodes.iter().all(|n| n.parent.is_none()));
        assert!(f.is_well_formed());
    }

    #[test]
    fn identity_has_empty_forest() {
        assert!(base_forest_seeded(&CremonaMap::identity(), None, None, 7).unwrap().nodes.is_empty());
    }

    #[test]
    fn tangent_quadratic_map_has_infinitely_near_point() {
        // (x^2 : xy : y^2 - xz) has a single proper base point (0:0:1)
        // carrying a chain of two infinitely near points.
        let v = |i| Poly::var(3, i);
        let f = CremonaMap::new(vec![
            HomPoly::new(v(0).pow(2)).unwrap(),
            HomPoly::new(&v(0) * &v(1)).unwrap(),
            HomPoly::new(&v(1).pow(2) - &(&v(0) * &v(2))).unwrap(),
        ])
        .unwrap();
        let forest = base_forest_seeded(&f, None, None, 1).unwrap();
        assert_eq!(forest.mults(), vec![1, 1, 1]);
        assert_eq!(forest.roots().count(), 1);
        assert_eq!(forest.chain_length(0), 2);
        assert!(forest.is_well_formed());
    }

    #[test]
    fn hints_must_be_base_points() {
        let r = base_forest_seeded(&CremonaMap::standard_quadratic(), None, Some(&[vec![q(1), q(1), q(1)]]), 7);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
