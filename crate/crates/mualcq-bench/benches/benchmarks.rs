use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use mualcq::models::{evaluate, satisfies_tbox, Signature, Valuation};
use mualcq::models::enumerate_interpretations;
use mualcq::mucalc::translate_u;
use mualcq::syntax::{parse_concept, parse_tbox};
use mualcq_bench::{chain, list_concept};

fn bench_evaluate(c: &mut Criterion) {
    let concept = list_concept();
    let rho = Valuation::empty();
    let mut group = c.benchmark_group("evaluate_list_fixpoint");
    for size in [8usize, 32, 64] {
        let interp = chain(size);
        group.bench_with_input(BenchmarkId::from_parameter(size), &interp, |b, interp| {
            b.iter(|| evaluate(black_box(&concept), interp, &rho).unwrap());
        });
    }
    group.finish();
}

fn bench_model_enumeration(c: &mut Criterion) {
    let k = parse_tbox(
        "human == mammal and exists parent. top and forall parent. human\n\
         horse == mammal and exists parent. top and forall parent. horse",
    )
    .unwrap();
    let sig = Signature::of_tbox(&k);
    c.bench_function("count_models_size_2", |b| {
        b.iter(|| {
            let mut count = 0usize;
            for interp in enumerate_interpretations(&sig, 2).unwrap() {
                if satisfies_tbox(&interp, &k).is_ok() {
                    count += 1;
                }
            }
            black_box(count)
        });
    });
}

fn bench_translate(c: &mut Criterion) {
    let concept =
        parse_concept("nu X. atmost 3 r. (p and atleast 2 s. q) and exists r. exists s. X")
            .unwrap();
    c.bench_function("translate_u_nested_counts", |b| {
        b.iter(|| translate_u(black_box(&concept)));
    });
}

criterion_group!(benches, bench_evaluate, bench_model_enumeration, bench_translate);
criterion_main!(benches);
