// SPDX-License-Identifier: Apache-2.0

//! Link selection and the lattice and incidence updates for each link.
//!
//! Points of the current system are assumed to be in general position with
//! respect to the fibration: no two proper base points share a fiber, and a
//! base point off the cubic does not lie in a distinguished direction.

use num_traits::Zero;

use super::state::{CaseTag, FactorizationState, LinkKind, PointRecord, SarkisovLink, SarkisovTrace};
use crate::config::Config;
use crate::cremona::{base_forest, check_nonsingular_cubic, BubbleForest, CremonaMap};
use crate::error::{Error, Result};
use crate::exact::{HomPoly, Rational};
use crate::surfaces::{
    blowdown_discrepancy, blowup_discrepancy, intersect, is_mf_cy_admissible, DivisorClass, SurfaceModel,
};

/// A link and the state it leads to.
pub type Step = (SarkisovLink, FactorizationState);

fn stuck(state: &FactorizationState, why: &str) -> Error {
    Error::Stuck(format!("{why}; state {}", state.dump()))
}

fn fiber() -> DivisorClass {
    DivisorClass::fn_class(1, 0)
}

fn section() -> DivisorClass {
    DivisorClass::fn_class(0, 1)
}

fn to_u32(v: i64, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Verification(format!("{what} is negative ({v})")))
}

/// Chooses and performs the next link; `None` on the terminal state.
pub fn next_link(state: &FactorizationState) -> Result<Option<Step>> {
    if state.is_terminal() {
        return Ok(None);
    }
    let center = state.max_point();
    let step = match state.model {
        SurfaceModel::Plane => {
            let d = state.system.0[0];
            match center {
                _ if d <= 1 => return Err(stuck(state, "base points remain on the system of lines")),
                Some(x) if 3 * x.mult as i64 > d => link_i_update(state, x.id)?,
                _ => return Err(stuck(state, "no point exceeds the Sarkisov degree d/3")),
            }
        }
        SurfaceModel::Hirzebruch { n, .. } => {
            let (a, b) = (state.system.0[0], state.system.0[1]);
            match center {
                Some(x) if 2 * x.mult as i64 > b => elementary_transform_update(state, x.id)?,
                _ if n == 1 => link_iii_update(state)?,
                _ if n == 0 && a < b => link_iv_update(state)?,
                _ => return Err(stuck(state, "no point exceeds the Sarkisov degree b/2")),
            }
        }
    };
    Ok(Some(step))
}

/// The two volume preserving verdicts must agree.
fn reconcile(incidence: bool, discrepancies: &[i64]) -> Result<bool> {
    let by_discrepancy = discrepancies.iter().all(|&a| a == 0);
    if incidence != by_discrepancy {
        return Err(Error::Verification(format!(
            "incidence says vp = {incidence}, discrepancies {discrepancies:?} disagree"
        )));
    }
    Ok(incidence)
}

fn finish(
    state: &FactorizationState,
    mut next: FactorizationState,
    kind: LinkKind,
    center: Option<&PointRecord>,
    case: Option<CaseTag>,
    incidence: bool,
    discrepancies: Vec<i64>,
) -> Result<Step> {
    next.step = state.step + 1;
    next.points.sort_by_key(|p| p.id);
    let vp = reconcile(incidence, &discrepancies)?;
    let link = SarkisovLink {
        kind,
        center: center.map(|c| c.id),
        case,
        vp,
        from: state.model,
        to: next.model,
        system: next.system.clone(),
        discrepancies,
        center_on_cubic: center.map(|c| c.on_cubic),
    };
    Ok((link, next))
}

fn split(state: &FactorizationState, id: usize) -> Result<(PointRecord, Vec<PointRecord>)> {
    let x = state.point(id).cloned().ok_or_else(|| Error::Precondition(format!("no point {id}")))?;
    if !x.is_proper() {
        return Err(Error::Precondition(format!("point {id} is infinitely near")));
    }
    let rest = state.points.iter().filter(|p| p.id != id).cloned().collect();
    Ok((x, rest))
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Type I: blow up a plane point `X` of multiplicity `m`; `dH ↦ dF + (d−m)E`
/// on `F_1`. Points over `X` become points of the exceptional section.
fn link_i_update(state: &FactorizationState, id: usize) -> Result<Step> {
    let (x, rest) = split(state, id)?;
    let (d, m) = (state.system.0[0], x.mult as i64);
    let mu = state.cubic.mult(x.id);
    let c = state.cubic.class.0[0];
    let mut next = state.clone();
    next.model = SurfaceModel::hirzebruch(1);
    next.system = DivisorClass::fn_class(d, d - m);
    next.cubic.class = DivisorClass::fn_class(c, c - mu as i64);
    next.cubic.point_mults.remove(&x.id);
    next.points = rest
        .into_iter()
        .map(|mut p| {
            if p.parent == Some(x.id) {
                // The fiber through a point of E is the line through X in
                // that direction; the cubic's direction gives its tangent
                // line, which meets it to order three exactly at a flex.
                p.parent = None;
                p.on_negative_section = true;
                p.fiber_tangent_to_cubic = p.on_cubic && x.flex;
            } else if p.is_proper() {
                p.on_negative_section = false;
                p.fiber_tangent_to_cubic = p.on_cubic
                    && !p.tangent_line.is_empty()
                    && !x.coords.is_empty()
                    && dot(&p.tangent_line, &x.coords).is_zero();
            }
            p.section_tangent_to_cubic = false;
            p
        })
        .collect();
    let disc = vec![blowup_discrepancy(mu)];
    finish(state, next, LinkKind::I, Some(&x), None, x.on_cubic, disc)
}

/// Type II: the elementary transformation at a proper point `X` of `F_n`.
/// Blowing up `X` and contracting the strict transform `F̃` of its fiber
/// gives `F_{n+1}` if `X` lies on the negative section and `F_{n−1}`
/// otherwise; `F̃` becomes a point `Q` of multiplicity `b − m`.
pub fn elementary_transform_update(state: &FactorizationState, id: usize) -> Result<Step> {
    let SurfaceModel::Hirzebruch { n, .. } = state.model else {
        return Err(Error::Precondition("elementary transformation needs a Hirzebruch surface".into()));
    };
    let (x, rest) = split(state, id)?;
    if x.mult == 0 {
        return Err(Error::Precondition("center has multiplicity 0".into()));
    }
    // On F_0 every point lies on a section of self-intersection 0; that
    // section plays the role of E.
    let on_e = n == 0 || x.on_negative_section;
    if !on_e && n == 0 {
        return Err(Error::Precondition("F_0 center off the chosen section".into()));
    }
    let (a, b, m) = (state.system.0[0], state.system.0[1], x.mult as i64);
    let mu = state.cubic.mult(x.id) as i64;
    let (ca, cb) = (state.cubic.class.0[0], state.cubic.class.0[1]);
    let c_dot_ft = intersect(&state.model, &state.cubic.class, &fiber())? - mu;
    let q_mult = to_u32(b - m, "multiplicity of the contracted fiber")?;
    let q_mu = to_u32(c_dot_ft, "cubic multiplicity at the contracted fiber")?;

    let mut next = state.clone();
    let (n2, a2, ca2) = if on_e { (n + 1, a + b - m, ca + cb - mu) } else { (n - 1, a - m, ca - mu) };
    next.model = SurfaceModel::hirzebruch(n2);
    next.system = DivisorClass::fn_class(a2, b);
    next.cubic.class = DivisorClass::fn_class(ca2, cb);
    next.cubic.point_mults.remove(&x.id);
    let q_id = state.next_id;
    next.next_id += 1;

    // Directions at X that are distinguished for the cubic: its own tangent
    // direction points along the fiber (Cases 2/4) or along the section.
    let cubic_child = rest.iter().find(|p| p.parent == Some(x.id) && p.on_cubic).map(|p| p.id);
    let fiber_child = cubic_child.filter(|_| x.on_cubic && x.fiber_tangent_to_cubic);
    let section_child = cubic_child.filter(|_| on_e && x.on_cubic && x.section_tangent_to_cubic);
    if fiber_child.is_some() && q_mult == 0 {
        return Err(Error::Verification("a base point lies over a contracted fiber of multiplicity 0".into()));
    }
    next.points = rest
        .into_iter()
        .map(|mut p| {
            if p.parent == Some(x.id) {
                if Some(p.id) == fiber_child {
                    p.parent = Some(q_id);
                } else {
                    // Now a point of the new fiber, which meets the cubic at
                    // this point and at Q.
                    p.parent = None;
                    p.on_negative_section = Some(p.id) == section_child;
                    p.fiber_tangent_to_cubic = false;
                    p.section_tangent_to_cubic = false;
                }
            } else if p.is_proper() && n == 0 {
                p.on_negative_section = false;
            }
            p
        })
        .collect();
    if q_mult > 0 {
        let mut q = PointRecord::simple(q_id, q_mult, q_mu > 0);
        // Off E the image of E passes through Q.
        q.on_negative_section = !on_e;
        q.fiber_tangent_to_cubic = q_mu > 0 && x.on_cubic && x.fiber_tangent_to_cubic;
        next.points.push(q);
        if q_mu > 0 {
            next.cubic.point_mults.insert(q_id, q_mu);
        }
    }
    let case = if !x.on_cubic {
        CaseTag::OffCubic
    } else {
        let base = if on_e { 1 } else { 3 };
        CaseTag::Case(base + x.fiber_tangent_to_cubic as u8)
    };
    // Incidence: the cubic meets a fiber twice, so C̆·F̃ = 1 exactly when
    // the center is on it.
    let incidence = x.on_cubic && cb - x.on_cubic as i64 == 1;
    let disc = vec![blowup_discrepancy(mu as u32), blowdown_discrepancy(c_dot_ft)];
    finish(state, next, LinkKind::II, Some(&x), Some(case), incidence, disc)
}

/// Type III: contract the (−1)-section of `F_1`; `aF + bE ↦ aH` with a new
/// point of multiplicity `a − b` at the image of `E`, over which the points
/// of `E` now lie.
pub fn link_iii_update(state: &FactorizationState) -> Result<Step> {
    if state.model.n() != Some(1) {
        return Err(Error::Precondition(format!("type III from {}", state.model)));
    }
    let (a, b) = (state.system.0[0], state.system.0[1]);
    let (ca, cb) = (state.cubic.class.0[0], state.cubic.class.0[1]);
    let c_dot_e = intersect(&state.model, &state.cubic.class, &section())?;
    let q_mult = to_u32(a - b, "multiplicity of the contracted section")?;
    let q_mu = to_u32(c_dot_e, "cubic multiplicity at the contracted section")?;
    if q_mult == 0 && state.proper_points().any(|p| p.on_negative_section) {
        return Err(Error::Verification("base points on a contracted section of multiplicity 0".into()));
    }
    let q_id = state.next_id;
    let mut next = state.clone();
    next.model = SurfaceModel::Plane;
    next.system = DivisorClass::plane(a);
    next.cubic.class = DivisorClass::plane(ca);
    next.next_id += 1;
    for p in next.points.iter_mut() {
        if p.is_proper() && p.on_negative_section {
            p.parent = Some(q_id);
        }
        p.on_negative_section = false;
        p.fiber_tangent_to_cubic = false;
        p.section_tangent_to_cubic = false;
    }
    if q_mult > 0 {
        next.points.push(PointRecord::simple(q_id, q_mult, q_mu > 0));
        if q_mu > 0 {
            next.cubic.point_mults.insert(q_id, q_mu);
        }
    }
    let incidence = ca - cb == 1;
    let disc = vec![blowdown_discrepancy(c_dot_e)];
    finish(state, next, LinkKind::III, None, None, incidence, disc)
}

/// Type IV: exchange the two rulings of `F_0`.
fn link_iv_update(state: &FactorizationState) -> Result<Step> {
    let SurfaceModel::Hirzebruch { n: 0, ruling } = state.model else {
        return Err(Error::Precondition(format!("type IV from {}", state.model)));
    };
    let mut next = state.clone();
    next.model = SurfaceModel::Hirzebruch { n: 0, ruling: 1 - ruling };
    next.system.0.swap(0, 1);
    next.cubic.class.0.swap(0, 1);
    for p in next.points.iter_mut() {
        std::mem::swap(&mut p.fiber_tangent_to_cubic, &mut p.section_tangent_to_cubic);
        p.on_negative_section = false;
    }
    finish(state, next, LinkKind::IV, None, None, true, Vec::new())
}

/// Runs the engine to the terminal state. With `in_dec = Some(true)` every
/// intermediate pair must be Calabi–Yau on an admissible model.
pub fn run(initial: FactorizationState, in_dec: Option<bool>, step_cap: usize) -> Result<SarkisovTrace> {
    initial.validate()?;
    let mut links = Vec::new();
    let mut states = Vec::new();
    let mut cur = initial.clone();
    while let Some((link, next)) = next_link(&cur)? {
        if links.len() >= step_cap {
            return Err(Error::StepCap(step_cap));
        }
        next.validate()?;
        if in_dec == Some(true) && !(next.cubic.is_calabi_yau(&next.model) && is_mf_cy_admissible(&next.model)) {
            return Err(Error::Verification(format!("pair after link {} is not Calabi–Yau", links.len())));
        }
        links.push(link);
        states.push(next.clone());
        cur = next;
    }
    let all_vp = links.iter().all(|l| l.vp);
    let lints = lint(&links);
    let trace = SarkisovTrace { initial, links, states, all_vp, in_dec, lints };
    trace.check_shape()?;
    Ok(trace)
}

fn lint(links: &[SarkisovLink]) -> Vec<String> {
    links
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1].kind == LinkKind::III && w[0].kind != LinkKind::II)
        .map(|(i, w)| format!("link {} of type III follows a link of type {}", i + 1, w[0].kind))
        .collect()
}

/// Tangent line `∇C(p)` and the flex test `H(C)(p) = 0` at a point of `C`.
fn cubic_data(cubic: &HomPoly, p: &[Rational]) -> (Vec<Rational>, bool) {
    let grad: Vec<HomPoly> = (0..3).map(|i| cubic.derivative(i)).collect();
    let line = grad.iter().map(|g| g.eval(p)).collect();
    let h: Vec<Vec<Rational>> = grad.iter().map(|g| (0..3).map(|j| g.derivative(j).eval(p)).collect()).collect();
    let det = &h[0][0] * &(&h[1][1] * &h[2][2] - &h[1][2] * &h[2][1])
        - &h[0][1] * &(&h[1][0] * &h[2][2] - &h[1][2] * &h[2][0])
        + &h[0][2] * &(&h[1][0] * &h[2][1] - &h[1][1] * &h[2][0]);
    (line, det.is_zero())
}

/// Initial state for `map` from its base forest and the cubic.
pub fn enrich(map: &CremonaMap, forest: &BubbleForest, cubic: &HomPoly) -> Result<FactorizationState> {
    check_nonsingular_cubic(cubic)?;
    let points = forest
        .nodes
        .iter()
        .map(|node| {
            let mut p = PointRecord::simple(node.id, node.mult, node.on_cubic);
            p.parent = node.parent;
            if node.parent.is_none() {
                p.coords = node.point.clone();
                if cubic.vanishes_at(&node.point) != node.on_cubic {
                    return Err(Error::Verification(format!("forest incidence of point {} is wrong", node.id)));
                }
                if node.on_cubic {
                    let (line, flex) = cubic_data(cubic, &node.point);
                    p.tangent_line = line;
                    p.flex = flex;
                }
            }
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FactorizationState::plane(map.degree() as i64, points))
}

/// Sarkisov factorization of `map` with volume preserving flags relative
/// to the nonsingular cubic.
pub fn factorize(map: &CremonaMap, cubic: &HomPoly, config: &Config) -> Result<SarkisovTrace> {
    config.validate()?;
    check_nonsingular_cubic(cubic)?;
    let forest = base_forest(map, Some(cubic), None, &mut config.rng())?;
    let state = enrich(map, &forest, cubic)?;
    let in_dec = map.preserves_curve(cubic)?;
    run(state, Some(in_dec), config.step_cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(flags: &[(u32, bool)]) -> Vec<PointRecord> {
        flags.iter().enumerate().map(|(i, &(m, c))| PointRecord::simple(i, m, c)).collect()
    }

    #[test]
    fn quadratic_on_cubic() {
        let s = FactorizationState::plane(2, pts(&[(1, true); 3]));
        let t = run(s, Some(true), 64).unwrap();
        assert_eq!(t.kinds(), vec![LinkKind::I, LinkKind::II, LinkKind::II, LinkKind::III]);
        assert!(t.all_vp);
        assert!(t.lints.is_empty());
    }

    #[test]
    fn quadratic_with_a_point_off_cubic() {
        let s = FactorizationState::plane(2, pts(&[(1, true), (1, true), (1, false)]));
        let t = run(s, None, 64).unwrap();
        assert!(!t.all_vp);
        assert!(t.links.iter().any(|l| l.case == Some(CaseTag::OffCubic)));
    }

    #[test]
    fn f2_pushforward() {
        let mut p = PointRecord::simple(0, 2, false);
        p.on_negative_section = false;
        let s = FactorizationState::new(
            SurfaceModel::hirzebruch(2),
            DivisorClass::fn_class(4, 2),
            vec![p],
            crate::surfaces::CubicTracker {
                class: DivisorClass::fn_class(4, 2),
                point_mults: Default::default(),
                nonsingular: true,
            },
        );
        let (link, next) = elementary_transform_update(&s, 0).unwrap();
        assert_eq!(link.to, SurfaceModel::hirzebruch(1));
        assert_eq!(next.system, DivisorClass::fn_class(2, 2));
        assert!(next.points.is_empty());
    }

    #[test]
    fn type_iii_examples() {
        let cubic = crate::surfaces::CubicTracker {
            class: DivisorClass::fn_class(3, 2),
            point_mults: Default::default(),
            nonsingular: true,
        };
        for (a, b, q) in [(3, 2, 1), (2, 1, 1), (4, 4, 0)] {
            let s = FactorizationState::new(
                SurfaceModel::hirzebruch(1),
                DivisorClass::fn_class(a, b),
                vec![],
                cubic.clone(),
            );
            let (link, next) = link_iii_update(&s).unwrap();
            assert_eq!(next.system, DivisorClass::plane(a));
            assert_eq!(next.points.iter().map(|p| p.mult).sum::<u32>(), q);
            assert!(link.vp);
        }
        let s = FactorizationState::plane(1, vec![]);
        assert!(link_iii_update(&s).is_err());
    }

    #[test]
    fn f0_swaps_when_a_below_b() {
        let s = FactorizationState::new(
            SurfaceModel::hirzebruch(0),
            DivisorClass::fn_class(1, 2),
            pts(&[(1, true); 3]),
            crate::surfaces::CubicTracker {
                class: DivisorClass::fn_class(2, 2),
                point_mults: Default::default(),
                nonsingular: true,
            },
        );
        let t = run(s, Some(true), 64).unwrap();
        use LinkKind::*;
        assert_eq!(t.kinds(), vec![IV, II, II, II, III]);
        assert!(t.all_vp);
    }

    #[test]
    fn stuck_state_reports() {
        let s = FactorizationState::plane(2, vec![]);
        assert!(matches!(next_link(&s), Err(Error::Stuck(_))));
    }
}
