use criterion::{black_box, criterion_group, criterion_main, Criterion};

use skewinv::corealg::{Backend, DEFAULT_PRIME};
use skewinv::genmat::sigma_word;
use skewinv::invbase::linear_rank;
use skewinv_bench::{product_operands, rank_fixture, words};

fn polynomial_multiplication(c: &mut Criterion) {
    for n in [4, 5] {
        let (a, b) = product_operands(n);
        c.bench_function(&format!("poly_mul n={n}"), |bch| bch.iter(|| black_box(&a).mul(black_box(&b))));
    }
}

fn sigma_words(c: &mut Criterion) {
    for w in words() {
        c.bench_function(&format!("sigma2 n=4 {}", w.product_label()), |bch| {
            bch.iter(|| sigma_word(2, black_box(&w), 4).expect("valid"))
        });
    }
}

fn rank(c: &mut Criterion) {
    let invs = rank_fixture();
    c.bench_function("rank (2,2) exact", |bch| bch.iter(|| linear_rank(black_box(&invs), Backend::Exact)));
    c.bench_function("rank (2,2) modular", |bch| {
        bch.iter(|| linear_rank(black_box(&invs), Backend::Modular { prime: DEFAULT_PRIME }))
    });
}

criterion_group!(benches, polynomial_multiplication, sigma_words, rank);
criterion_main!(benches);
