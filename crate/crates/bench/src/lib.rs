// SPDX-License-Identifier: Apache-2.0

//! Benchmark bodies; `benches/maps.rs` wires them into criterion.

use std::hint::black_box;

use criterion::Criterion;
use cremona_core::cremona::base_forest_seeded;
use cremona_core::exact::q;
use cremona_core::sarkisov::factorize;
use cremona_core::threefold::{self, QuarticData};
use cremona_core::{Config, CremonaMap, CurvePoint, WeierstrassCurve};

/// `y² = x³ + 1` with `P = (2, 3)` and `Q = (0, 1)`.
pub fn fixture() -> (WeierstrassCurve, CurvePoint, CurvePoint) {
    let c = WeierstrassCurve::new(q(0), q(1)).expect("nonsingular");
    (c, CurvePoint::affine(q(2), q(3)), CurvePoint::affine(q(0), q(1)))
}

fn translations() -> (WeierstrassCurve, CremonaMap, CremonaMap) {
    let (c, p, qq) = fixture();
    let fp = c.translation_map(&p).expect("on curve");
    let fq = c.translation_map(&qq).expect("on curve");
    (c, fp, fq)
}

pub fn benchmarks(c: &mut Criterion) {
    let (curve, p, _) = fixture();
    let (_, fp, fq) = translations();
    let cubic = curve.equation();
    let cfg = Config::default();

    c.bench_function("translation_map", |b| b.iter(|| curve.translation_map(black_box(&p)).unwrap()));
    c.bench_function("compose", |b| b.iter(|| black_box(&fq).compose(black_box(&fp)).unwrap()));
    c.bench_function("base_forest", |b| {
        b.iter(|| base_forest_seeded(black_box(&fp), Some(&cubic), None, cfg.seed).unwrap())
    });
    c.bench_function("factorize", |b| b.iter(|| factorize(black_box(&fp), &cubic, &cfg).unwrap()));

    let qd = QuarticData::desk_instance();
    let mut group = c.benchmark_group("threefold");
    group.sample_size(10);
    group.bench_function("check", |b| b.iter(|| threefold::check(black_box(&qd), &mut cfg.rng()).unwrap()));
    group.finish();
}
