use criterion::{criterion_group, criterion_main, Criterion};

use bicoend::fincat::{check_category, product_cat, FinCat};

fn bench_fincat(c: &mut Criterion) {
    let w = {
        let mut c = FinCat::discrete(&["a", "b"]);
        c.mor.insert("f".into(), ("a".into(), "b".into()));
        c.compose.insert(("f".into(), "id_a".into()), "f".into());
        c.compose.insert(("id_b".into(), "f".into()), "f".into());
        c
    };
    let big = product_cat(&product_cat(&w, &w), &w);
    c.bench_function("check_category product", |b| {
        b.iter(|| check_category(&big).unwrap().is_pass())
    });
}

criterion_group!(benches, bench_fincat);
criterion_main!(benches);
