// SPDX-License-Identifier: Apache-2.0

use cremona_core::cremona::{base_forest_seeded, homaloidal_type};
use cremona_core::exact::q;
use cremona_core::sarkisov::{factorize, jonquieres_centers, CaseTag, LinkKind, SarkisovLink};
use cremona_core::surfaces::SurfaceModel;
use cremona_core::{Config, CremonaMap, CurvePoint, Error, HomaloidalType, WeierstrassCurve};

fn curve() -> WeierstrassCurve {
    WeierstrassCurve::new(q(0), q(1)).unwrap()
}

fn phi(x: i64, y: i64) -> CremonaMap {
    curve().translation_map(&CurvePoint::affine(q(x), q(y))).unwrap()
}

#[test]
fn translation_trace_alternates_between_f0_and_f1() {
    let t = factorize(&phi(2, 3), &curve().equation(), &Config::default()).unwrap();
    use LinkKind::*;
    assert_eq!(t.kinds(), vec![I, II, II, II, II, II, II, III]);
    let cases: Vec<Option<CaseTag>> = t.links.iter().map(|l| l.case).collect();
    assert_eq!(cases[1..7], [3, 1, 3, 1, 3, 1].map(|k| Some(CaseTag::Case(k))));
    assert_eq!(t.links[0].from, SurfaceModel::Plane);
    assert!(t.links.iter().all(|l| l.is_compatible()));
    assert!(t.lints.is_empty());
}

#[test]
fn translation_is_one_de_jonquieres_block() {
    let t = factorize(&phi(2, 3), &curve().equation(), &Config::default()).unwrap();
    let r = jonquieres_centers(&t);
    assert!(r.grouped);
    assert_eq!(r.centers.len(), 1);
    assert!(r.centers.iter().all(|&(_, on)| on));
}

#[test]
fn every_nontrivial_translation_factors_volume_preservingly() {
    let c = curve();
    for (x, y) in [(2, 3), (2, -3), (0, 1), (0, -1), (-1, 0)] {
        let t = factorize(&phi(x, y), &c.equation(), &Config::default()).unwrap();
        assert!(t.all_vp && t.in_dec == Some(true), "({x}, {y})");
        assert!(t.states.iter().all(|s| s.cubic.is_calabi_yau(&s.model)));
    }
}

#[test]
fn identity_has_empty_trace() {
    let t = factorize(&CremonaMap::identity(), &curve().equation(), &Config::default()).unwrap();
    assert!(t.links.is_empty() && t.all_vp);
    assert!(jonquieres_centers(&t).centers.is_empty());
}

#[test]
fn quadratic_off_cubic_is_tagged() {
    let pts = [vec![q(0), q(1), q(1)], vec![q(0), q(-1), q(1)], vec![q(1), q(1), q(1)]];
    let f = CremonaMap::quadratic_through([&pts[0], &pts[1], &pts[2]]).unwrap();
    let t = factorize(&f, &curve().equation(), &Config::default()).unwrap();
    assert_eq!(t.in_dec, Some(false));
    assert!(!t.all_vp);
    assert!(t.links.iter().any(|l| l.case == Some(CaseTag::OffCubic)));
}

#[test]
fn trace_lines_round_trip() {
    let t = factorize(&phi(2, 3), &curve().equation(), &Config::default()).unwrap();
    let lines = t.json_lines();
    assert!(lines.lines().next().unwrap().starts_with(r#"{"kind":"I","center":"#));
    let back: Vec<SarkisovLink> = lines.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(back, t.links);
}

#[test]
fn factorization_is_deterministic() {
    let a = factorize(&phi(2, 3), &curve().equation(), &Config::default()).unwrap();
    let b = factorize(&phi(2, 3), &curve().equation(), &Config::default()).unwrap();
    assert_eq!(a.json_lines(), b.json_lines());
}

#[test]
fn step_cap_is_enforced() {
    let cfg = Config { step_cap: 3, ..Config::default() };
    assert_eq!(factorize(&phi(2, 3), &curve().equation(), &cfg).unwrap_err(), Error::StepCap(3));
}

#[test]
fn forest_is_independent_of_the_seed() {
    let f = phi(2, 3);
    let a = base_forest_seeded(&f, None, None, 1).unwrap();
    let b = base_forest_seeded(&f, None, None, 99).unwrap();
    assert_eq!(a, b);
    assert_eq!(homaloidal_type(&f).unwrap(), HomaloidalType::new(4, vec![3, 1, 1, 1, 1, 1, 1]));
}

#[test]
fn singular_cubic_is_rejected() {
    let x = cremona_core::Poly::var(3, 0);
    let y = cremona_core::Poly::var(3, 1);
    let z = cremona_core::Poly::var(3, 2);
    // Nodal cubic y²z = x³ + x²z.
    let nodal = &(&(&y.pow(2) * &z) - &x.pow(3)) - &(&x.pow(2) * &z);
    let c = cremona_core::HomPoly::new(nodal).unwrap();
    assert!(factorize(&phi(2, 3), &c, &Config::default()).is_err());
}
