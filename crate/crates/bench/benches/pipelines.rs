//! Criterion benchmarks for the hot paths: batched way-below queries,
//! the full functor pipeline on a random module, and indicator distances.

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scottpersist::functors::{l1_top, overline, r1_socle, scott_radical, scott_socle, scott_top, underline};
use scottpersist::metrics::{distance_indicator, SuperlinearFamily};
use scottpersist::poset::{Point, PosetSpec};
use scottpersist::rat::rat_int;
use scottpersist::verify::{random_module, random_point, random_region};
use std::hint::black_box;

fn bench_way_below(c: &mut Criterion) {
    let poset = PosetSpec::RnStandard(3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pairs: Vec<(Point, Point)> =
        (0..1000).map(|_| (random_point(&mut rng, 3), random_point(&mut rng, 3))).collect();
    c.bench_function("way_below_1000_pairs_r3", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(poset.way_below(x, y).unwrap());
            }
        })
    });
}

fn bench_functor_pipeline(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = random_module(&mut rng, 2);
    c.bench_function("functor_pipeline_random_module_r2", |b| {
        b.iter(|| {
            black_box(overline(&m).unwrap());
            black_box(underline(&m).unwrap());
            black_box(scott_socle(&m).unwrap());
            black_box(scott_radical(&m).unwrap());
            black_box(scott_top(&m).unwrap());
            black_box(r1_socle(&m).unwrap());
            black_box(l1_top(&m).unwrap());
        })
    });
}

fn bench_indicator_distance(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fam = SuperlinearFamily::new(Point(vec![rat_int(1), rat_int(1)])).unwrap();
    let pairs: Vec<_> = (0..20)
        .map(|_| {
            // distance needs same-kind operands; retry until the kinds match
            loop {
                let a = random_region(&mut rng, 2);
                let b = random_region(&mut rng, 2);
                if matches!(
                    (&a, &b),
                    (scottpersist::region::Region::Up(_), scottpersist::region::Region::Up(_))
                        | (scottpersist::region::Region::Down(_), scottpersist::region::Region::Down(_))
                ) {
                    return (a, b);
                }
            }
        })
        .collect();
    c.bench_function("indicator_distance_20_pairs_r2", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(distance_indicator(x, y, &fam).unwrap());
            }
        })
    });
}

criterion_group!(benches, bench_way_below, bench_functor_pipeline, bench_indicator_distance);
criterion_main!(benches);
