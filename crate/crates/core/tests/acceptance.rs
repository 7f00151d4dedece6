// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one pass/fail line per criterion. Criteria that are
//! known to be unattainable as stated are reported as expected failures
//! and do not fail the run; any other failure exits with status 1.

use std::process::ExitCode;
use std::time::Instant;

use cremona_core::cremona::{base_forest_seeded, composition_degree, homaloidal_type, inertia_witness, shared_points};
use cremona_core::cremona::predicted_composition_degree;
use cremona_core::exact::{q, same_point, Rational};
use cremona_core::sarkisov::{factorize, LinkKind};
use cremona_core::surfaces::{
    blowup_discrepancy, blowup_vp, canonical_class, intersect, is_mf_cy_admissible, DivisorClass, SurfaceModel,
};
use cremona_core::threefold::{self, QuarticData};
use cremona_core::{Config, CremonaMap, CurvePoint, HomaloidalType, WeierstrassCurve};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn torsion_curve() -> WeierstrassCurve {
    WeierstrassCurve::new(q(0), q(1)).unwrap()
}

fn rank_one_curve() -> (WeierstrassCurve, CurvePoint) {
    (WeierstrassCurve::new(q(0), q(-2)).unwrap(), CurvePoint::affine(q(3), q(5)))
}

fn pt(x: i64, y: i64) -> CurvePoint {
    CurvePoint::affine(q(x), q(y))
}

fn criterion_1() -> Outcome {
    let c = torsion_curve();
    let p = pt(2, 3);
    let f = ok(c.translation_map(&p))?;
    ensure!(f.degree() == 4, "degree {}", f.degree());
    let bs = ok(f.proper_base_points())?;
    let expected = [p.to_projective(), CurvePoint::Infinity.to_projective()];
    ensure!(
        bs.len() == 2 && expected.iter().all(|e| bs.iter().any(|b| same_point(b, e))),
        "proper base points {bs:?}"
    );
    let forest = ok(base_forest_seeded(&f, Some(&c.equation()), None, 1))?;
    let mult_at = |e: &Vec<Rational>| forest.roots().find(|n| same_point(&n.point, e)).map(|n| n.mult);
    ensure!(mult_at(&expected[0]) == Some(3) && mult_at(&expected[1]) == Some(1), "proper multiplicities");
    let t = ok(homaloidal_type(&f))?;
    ensure!(t == HomaloidalType::new(4, vec![3, 1, 1, 1, 1, 1, 1]), "type {t}");
    let o = forest.roots().find(|n| same_point(&n.point, &expected[1])).unwrap();
    ensure!(forest.chain_length(o.id) == 5, "chain over O has length {}", forest.chain_length(o.id));
    ensure!(forest.nodes.iter().all(|n| n.on_cubic), "a base point is off the cubic");
    Ok(format!("type {t}, Bs = {{P, O}}, chain of 5 over O, {} nodes on C", forest.nodes.len()))
}

fn criterion_2() -> Outcome {
    let c = torsion_curve();
    let f = ok(c.translation_map(&pt(2, 3)))?;
    let eq = c.equation();
    let pulled = ok(eq.substitute(f.components()))?;
    ensure!(pulled.exact_div(&eq).is_some(), "F_C does not divide F_C∘φ_P");
    let (c2, g) = rank_one_curve();
    let p = g.clone();
    let f2 = ok(c2.translation_map(&p))?;
    let samples = ok(c2.sample_points(&g, 10, &[p.clone(), ok(c2.neg(&p))?]))?;
    let mut agree = 0;
    for s in &samples {
        let img = ok(f2.eval(&s.to_projective()))?.ok_or("sample is a base point")?;
        let expect = ok(c2.add(s, &p))?.to_projective();
        ensure!(same_point(&img, &expect), "φ_P(Q) ≠ Q ⊕ P at {s:?}");
        agree += 1;
    }
    Ok(format!("exact division; restriction = T_P on {agree} points of y² = x³ − 2"))
}

fn criterion_3() -> Outcome {
    let c = torsion_curve();
    let (p, qq) = (pt(2, 3), pt(0, 1));
    let fp = ok(c.translation_map(&p))?;
    let fq = ok(c.translation_map(&qq))?;
    let symbolic = ok(fq.compose(&fp))?.degree();
    let fnp = ok(c.translation_map(&ok(c.neg(&p))?))?;
    let seed = cremona_core::config::DEFAULT_SEED;
    let shared = shared_points(&ok(base_forest_seeded(&fnp, None, None, seed))?, &ok(base_forest_seeded(&fq, None, None, seed))?);
    ensure!(shared == vec![(1, 1); 6], "shared points {shared:?}");
    let t4 = HomaloidalType::new(4, vec![3, 1, 1, 1, 1, 1, 1]);
    let formula = ok(composition_degree(&t4, &t4, &shared))?;
    let predicted = ok(predicted_composition_degree(&fnp, &fq))?;
    ensure!(symbolic == 10 && formula == 10 && predicted == 10, "symbolic {symbolic}, formula {formula}, predicted {predicted}");
    Ok("deg(φ_Q∘φ_P) = 4·4 − 6·1·1 = 10, symbolic and predicted agree".into())
}

fn criterion_4() -> Outcome {
    let c = torsion_curve();
    let (p, qq) = (pt(2, 3), pt(0, 1));
    let composite = ok(ok(c.translation_map(&qq))?.compose(&ok(c.translation_map(&p))?))?.degree();
    let s = ok(c.add(&qq, &p))?;
    let direct = ok(c.translation_map(&s))?.degree();
    ensure!(direct == 4 && composite != direct, "deg φ_Q∘φ_P = {composite}, deg φ_(Q⊕P) = {direct}");
    Ok(format!("{composite} ≠ {direct} = deg φ_(Q⊕P)"))
}

/// Number of sample points fixed by `f`.
fn fixed_count(f: &CremonaMap, samples: &[CurvePoint]) -> Result<usize, String> {
    let mut n = 0;
    for s in samples {
        let x = s.to_projective();
        if let Some(img) = ok(f.eval(&x))? {
            n += same_point(&img, &x) as usize;
        }
    }
    Ok(n)
}

fn criterion_5() -> Outcome {
    let (c, g) = rank_one_curve();
    let p = g.clone();
    let qq = ok(c.mul(2, &g))?;
    let s = ok(c.add(&p, &qq))?;
    let r = ok(c.neg(&s))?;
    let composite = ok(ok(c.translation_map(&s))?.compose(&ok(c.translation_map(&r))?))?;
    let samples = ok(c.sample_points(&g, 10, &[p.clone(), qq.clone(), s.clone(), r.clone()]))?;
    let fixed = fixed_count(&composite, &samples)?;
    // The three-fold composite is the non-trivial element of the inertia
    // group; reported for context.
    let w = ok(inertia_witness(&c, &p, &qq))?;
    let far: Vec<CurvePoint> = ok(c.sample_points(&g, 14, &[]))?.into_iter().skip(4).collect();
    let w_fixed = fixed_count(&w, &far)?;
    let context = format!(
        "φ_R∘φ_Q∘φ_P has degree {} and fixes {w_fixed}/{} sampled points",
        w.degree(),
        far.len()
    );
    ensure!(fixed >= 10, "φ_(P⊕Q)∘φ_R fixes only {fixed} points; {context}");
    ensure!(
        !composite.is_identity(),
        "φ_(P⊕Q)∘φ_R fixes {fixed}/10 points but is the identity map (φ_R = φ_(P⊕Q)⁻¹); {context}"
    );
    Ok(format!("degree {}, fixes {fixed} points", composite.degree()))
}

fn criterion_6() -> Outcome {
    let c = torsion_curve();
    let f = ok(c.translation_map(&pt(2, 3)))?;
    let t = ok(factorize(&f, &c.equation(), &Config::default()))?;
    ensure!(t.in_dec == Some(true), "input not recognized as preserving the cubic");
    ensure!(t.all_vp, "a link is not volume preserving");
    let allowed = [SurfaceModel::Plane, SurfaceModel::hirzebruch(0), SurfaceModel::hirzebruch(1), SurfaceModel::hirzebruch(2)];
    for (i, st) in t.states.iter().enumerate() {
        let base = match st.model {
            SurfaceModel::Hirzebruch { n, .. } => SurfaceModel::hirzebruch(n),
            m => m,
        };
        ensure!(allowed.contains(&base), "model {} after link {i}", st.model);
        ensure!(st.cubic.class == canonical_class(&st.model).neg(), "cubic class {:?} ≠ −K after link {i}", st.cubic.class);
    }
    ensure!(t.final_state().is_terminal(), "does not end on the system of lines");
    let kinds: Vec<String> = t.kinds().iter().map(|k| k.to_string()).collect();
    Ok(format!("{} links [{}], all vp, C ≡ −K throughout", t.links.len(), kinds.join(" ")))
}

/// Hand lattice computation for a quadratic map: blow up one point
/// (2H ↦ 2F + E on F₁), two elementary transformations at the remaining
/// simple points (F₁ → F₀ with 2F + E ↦ F + E, then F₀ → F₁ keeping F + E),
/// and the contraction F + E ↦ H.
fn quadratic_oracle() -> Vec<(LinkKind, Vec<i64>)> {
    vec![(LinkKind::I, vec![2, 1]), (LinkKind::II, vec![1, 1]), (LinkKind::II, vec![1, 1]), (LinkKind::III, vec![1])]
}

fn criterion_7() -> Outcome {
    let c = torsion_curve();
    let proj = |x: i64, y: i64| vec![q(x), q(y), q(1)];
    let on = [proj(0, 1), proj(0, -1), proj(2, 3)];
    let f = ok(CremonaMap::quadratic_through([&on[0], &on[1], &on[2]]))?;
    let t = ok(factorize(&f, &c.equation(), &Config::default()))?;
    let got: Vec<(LinkKind, Vec<i64>)> = t.links.iter().map(|l| (l.kind, l.system.0.clone())).collect();
    ensure!(got == quadratic_oracle(), "trace {got:?}");
    // The image of C is another cubic, so the map is volume preserving
    // between two pairs without preserving C itself.
    ensure!(t.all_vp, "on-cubic trace not volume preserving");
    let off = [proj(0, 1), proj(0, -1), proj(1, 1)];
    let g = ok(CremonaMap::quadratic_through([&off[0], &off[1], &off[2]]))?;
    let u = ok(factorize(&g, &c.equation(), &Config::default()))?;
    let flipped = u.links.iter().filter(|l| !l.vp).count();
    ensure!(flipped >= 1, "moving a point off C left every link vp");
    Ok(format!("[I, II, II, III] matches the oracle; off-cubic variant has {flipped} non-vp link(s)"))
}

fn noether_oracle(d: i64, m: &[i64]) -> bool {
    d >= 1 && m.iter().sum::<i64>() == 3 * d - 3 && m.iter().map(|x| x * x).sum::<i64>() == d * d - 1
}

fn criterion_8() -> Outcome {
    ensure!(HomaloidalType::new(4, vec![3, 1, 1, 1, 1, 1, 1]).noether_check(), "(4;3,1^6) rejected");
    ensure!(HomaloidalType::new(4, vec![2, 2, 2, 1, 1, 1]).noether_check(), "(4;2^3,1^3) rejected");
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut negatives = 0;
    while negatives < 50 {
        let d: u32 = rng.gen_range(2..=12);
        let r = rng.gen_range(1..=12);
        let m: Vec<u32> = (0..r).map(|_| rng.gen_range(1..d)).collect();
        let mi: Vec<i64> = m.iter().map(|&x| x as i64).collect();
        if noether_oracle(d as i64, &mi) {
            continue;
        }
        let t = HomaloidalType::new(d, m);
        ensure!(!t.noether_check(), "non-homaloidal {t} accepted");
        negatives += 1;
    }
    Ok(format!("both types pass, {negatives} random non-homaloidal tuples rejected"))
}

/// Sum by intersecting the curve with the chord (or tangent) through
/// `a` and `b`: on `(x₀ + t·dx, y₀ + t·dy)` the cubic `y² − x³ − px − q`
/// has `t`-coefficients `−dx³` and `dy² − 3x₀dx²` in degrees 3 and 2, so
/// the roots sum to `(dy² − 3x₀dx²)/dx³`. The third point is reflected.
fn chord_oracle(p: &Rational, a: &CurvePoint, b: &CurvePoint) -> CurvePoint {
    let (CurvePoint::Affine { x: x0, y: y0 }, CurvePoint::Affine { x: x1, y: y1 }) = (a, b) else {
        return if a.is_infinity() { b.clone() } else { a.clone() };
    };
    let (dx, dy, known) = if a == b {
        // Tangent direction (−f_y, f_x) = (−2y, −3x² − p).
        if y0.is_zero() {
            return CurvePoint::Infinity;
        }
        (-(q(2) * y0), -(q(3) * x0 * x0 + p), Rational::zero())
    } else {
        if x0 == x1 {
            return CurvePoint::Infinity;
        }
        (x1 - x0, y1 - y0, Rational::one())
    };
    let sum = (&dy * &dy - q(3) * x0 * &dx * &dx) / (&dx * &dx * &dx);
    let t = sum - known;
    CurvePoint::affine(x0 + &t * &dx, -(y0 + &t * &dy))
}

fn criterion_9() -> Outcome {
    let (c, g) = rank_one_curve();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let multiple = |rng: &mut ChaCha8Rng| -> Result<CurvePoint, String> { ok(c.mul(rng.gen_range(-5..=5), &g)) };
    for i in 0..100 {
        let (a, b, d) = (multiple(&mut rng)?, multiple(&mut rng)?, multiple(&mut rng)?);
        let ab = ok(c.add(&a, &b))?;
        ensure!(ok(c.add(&ab, &d))? == ok(c.add(&a, &ok(c.add(&b, &d))?))?, "associativity fails at triple {i}");
        ensure!(ab == ok(c.add(&b, &a))?, "commutativity fails at triple {i}");
        ensure!(ok(c.add(&a, &ok(c.neg(&a))?))?.is_infinity(), "inverse fails at triple {i}");
        ensure!(ab == chord_oracle(c.p(), &a, &b), "chord oracle disagrees at triple {i}");
        ensure!(c.contains(&ab), "sum off the curve at triple {i}");
    }
    Ok("100 triples: associative, commutative, inverses, chord-and-reflect agrees".into())
}

fn criterion_10() -> Outcome {
    let e = DivisorClass::fn_class(0, 1);
    for n in 0..=3u32 {
        let m = SurfaceModel::hirzebruch(n);
        let k = ok(intersect(&m, &canonical_class(&m).neg(), &e))?;
        ensure!(k == 2 - n as i64, "−K·E = {k} on F{n}");
        ensure!(is_mf_cy_admissible(&m) == (n <= 2), "admissibility on F{n}");
    }
    for m in 0..=1u32 {
        ensure!(ok(blowup_vp(m))?.1 == 1 - m as i64, "blowup discrepancy at m = {m}");
    }
    for m in 0..=5u32 {
        ensure!(blowup_discrepancy(m) == 1 - m as i64, "discrepancy at m = {m}");
    }
    Ok("−K·E = 2 − n for n ≤ 3, admissible iff n ≤ 2, a(E) = 1 − m".into())
}

fn criterion_11() -> Outcome {
    let qd = QuarticData::desk_instance();
    let r = ok(threefold::check(&qd, &mut Config::default().rng()))?;
    ensure!(r.involution, "not an involution");
    ensure!(r.preserves_quartic && r.quotient_degree == Some(8), "quotient degree {:?}", r.quotient_degree);
    ensure!(r.base_lines.len() == 6, "{} base lines", r.base_lines.len());
    ensure!(r.bs_not_in_quartic, "every base line lies in D");
    ensure!(r.multiplicity_at_p == 2 && r.tangent_cone_rank == 3, "singularity ({}, {})", r.multiplicity_at_p, r.tangent_cone_rank);
    let on_lines = r.base_lines.iter().filter(|l| !l.restrict(&qd.d).map(|h| h.is_zero()).unwrap_or(true)).count();
    Ok(format!("involution, D | D∘φ with quotient of degree 8, 6 lines ({on_lines} not in D), A₁ at P"))
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "translation map pipeline", criterion_1),
        (2, "decomposition group membership", criterion_2),
        (3, "composition degree", criterion_3),
        (4, "non-splitting evidence", criterion_4),
        (5, "inertia witness", criterion_5),
        (6, "sarkisov engine, translation map", criterion_6),
        (7, "sarkisov engine, quadratic oracle", criterion_7),
        (8, "equations of condition", criterion_8),
        (9, "group law properties", criterion_9),
        (10, "lattice identities", criterion_10),
        (11, "quartic threefold", criterion_11),
    ];
    // Unattainable as stated; analysed in the decisions ledger.
    let expected_failures = [5];
    let start = Instant::now();
    let mut unexpected = 0;
    for (n, name, run) in criteria {
        let t = Instant::now();
        let outcome = run();
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {n:>2} ({name}): PASS [{ms} ms] {detail}"),
            Err(detail) if expected_failures.contains(&n) => {
                println!("criterion {n:>2} ({name}): FAIL (expected, see decisions) [{ms} ms] {detail}")
            }
            Err(detail) => {
                unexpected += 1;
                println!("criterion {n:>2} ({name}): FAIL [{ms} ms] {detail}");
            }
        }
    }
    println!("acceptance: {unexpected} unexpected failure(s) in {:.1} s", start.elapsed().as_secs_f64());
    if unexpected == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
