use biquad_bench::{sample_elements, table_row_one};
use biquad_core::sos::{decompose_sos, enumerate_dominated_squares, SearchConfig};
use biquad_core::{make_field, EmbeddingSigns};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn exact_sign(c: &mut Criterion) {
    let k = make_field(2, 5).unwrap();
    let xs = sample_elements(&k, 256, 1 << 20);
    c.bench_function("sign_at_embedding/256", |b| {
        b.iter(|| {
            for x in &xs {
                for s in EmbeddingSigns::ALL {
                    black_box(x.sign_at_embedding(s));
                }
            }
        })
    });
}

fn enumeration(c: &mut Criterion) {
    let alpha = table_row_one();
    c.bench_function("enumerate_dominated_squares/table_row_1", |b| {
        b.iter(|| enumerate_dominated_squares(black_box(&alpha)).unwrap())
    });
}

fn search(c: &mut Criterion) {
    let alpha = table_row_one();
    let mut group = c.benchmark_group("decompose_sos");
    group.sample_size(10);
    group.bench_function("table_row_1", |b| {
        b.iter(|| decompose_sos(black_box(&alpha), SearchConfig::uncapped()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, exact_sign, enumeration, search);
criterion_main!(benches);
