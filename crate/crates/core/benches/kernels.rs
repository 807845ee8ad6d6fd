use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use weilkit::cartan::{weil_vs_cartan_check, ExtGda, Model};
use weilkit::duflo::{chain_check, DufloContext};
use weilkit::liedata::{so4, su2};
use weilkit::multivec::{basis, Tag};
use weilkit::suite::kostant_vs_oracle;
use weilkit::weil::{all_pass, g_relations, homology, ncw_ops, Complex};

fn single_thread() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool")
}

/// Runs `f` on one thread and on the global pool.
fn compare(c: &mut Criterion, name: &str, f: impl Fn() + Sync) {
    let one = single_thread();
    let mut g = c.benchmark_group(name);
    g.sample_size(10);
    g.bench_function("sequential", |b| b.iter(|| one.install(&f)));
    g.bench_function("parallel", |b| b.iter(&f));
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let g = su2();
    let s = so4();

    compare(c, "kostant_oracle_n6", || {
        black_box(kostant_vs_oracle(6));
    });

    let ops = ncw_ops(&g);
    let b = basis(Tag::Ncw, 3, 5);
    compare(c, "ncw_relations_su2_deg5", || {
        black_box(all_pass(&g_relations(&g, &ops, &b)));
    });

    let ctx = DufloContext::new(&g, 6);
    compare(c, "chain_check_su2_deg6", || {
        black_box(chain_check(&ctx, 6).unwrap());
    });

    let ext = ExtGda::new(&s);
    compare(c, "weil_vs_cartan_so4_deg4", || {
        black_box(weil_vs_cartan_check(Model::Comm, &ext, &s, 4));
    });

    compare(c, "homology_ext_so4", || {
        black_box(homology(&s, Complex::ExtKoszul, 6));
    });
}

criterion_group!(benches, kernels);
criterion_main!(benches);
