use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ljmse_bench::{corpus, terms};
use ljmse_core::cps::{translate, TransKind};
use ljmse_core::reduction::{all_steps, normalize, Strategy};
use ljmse_core::target::Mode;
use ljmse_core::verify::{gen_typed, lam_reach, GenConfig};

fn bench_normalize(c: &mut Criterion) {
    let es = corpus(100, 12);
    c.bench_function("normalize_leftmost_100", |b| {
        b.iter(|| {
            for e in &es {
                black_box(normalize(e, Strategy::Leftmost, 500));
            }
        })
    });
}

fn bench_translate(c: &mut Criterion) {
    let ts = terms(&corpus(200, 12));
    for kind in [TransKind::Cps, TransKind::Cgps] {
        c.bench_function(&format!("translate_{}", kind.as_str()), |b| {
            b.iter(|| {
                for t in &ts {
                    black_box(translate(t, kind));
                }
            })
        });
    }
}

fn bench_reach(c: &mut Criterion) {
    let pairs: Vec<_> = terms(&corpus(40, 10))
        .iter()
        .flat_map(|t| {
            let from = translate(t, TransKind::Cgps).unwrap();
            all_steps(&t.clone().into())
                .into_iter()
                .filter_map(|s| s.to.as_term().map(|u| translate(u, TransKind::Cgps).unwrap()))
                .map(move |to| (from.clone(), to))
                .collect::<Vec<_>>()
        })
        .collect();
    c.bench_function("cgps_step_reach", |b| {
        b.iter(|| {
            for (from, to) in &pairs {
                black_box(lam_reach(from, to, Mode::Plus));
            }
        })
    });
}

fn bench_gen(c: &mut Criterion) {
    let cfg = GenConfig::default().with_count(100);
    c.bench_function("gen_typed_100", |b| b.iter(|| black_box(gen_typed(&cfg))));
}

criterion_group!(benches, bench_normalize, bench_translate, bench_reach, bench_gen);
criterion_main!(benches);
