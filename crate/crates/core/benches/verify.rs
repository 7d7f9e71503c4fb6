//! Parallel against sequential runs of the heavy checks. With the
//! `parallel` feature off both arms run sequentially.

use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nildegen::catalog::Corpus;
use nildegen::degeneration;
use nildegen::invariants::derivation_dim;
use nildegen::nondegeneration;
use nildegen::par;

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", true), ("sequential", false)]
}

fn derivations(c: &mut Criterion) {
    let corpus = Corpus::embedded();
    let algs: Vec<_> = corpus.algebras.iter().filter(|e| !e.is_family()).map(|e| e.algebra(None).unwrap()).collect();
    let mut g = c.benchmark_group("derivation_dim");
    for (name, parallel) in modes() {
        g.bench_function(name, |b| b.iter(|| par::map(&algs, parallel, derivation_dim)));
    }
    g.finish();
}

fn degenerations(c: &mut Criterion) {
    let corpus = Corpus::embedded();
    let mut g = c.benchmark_group("degenerations");
    g.sample_size(10).measurement_time(Duration::from_secs(20));
    for prefix in ["nil3.", "comm4."] {
        let ws: Vec<_> = corpus.witnesses.iter().filter(|w| w.id.starts_with(prefix)).collect();
        for (name, parallel) in modes() {
            g.bench_with_input(BenchmarkId::new(name, prefix.trim_end_matches('.')), &ws, |b, ws| {
                b.iter(|| degeneration::verify_all(&corpus, ws, &degeneration::Options::default(), parallel))
            });
        }
    }
    g.finish();
}

fn certificates(c: &mut Criterion) {
    let corpus = Corpus::embedded();
    let certs: Vec<_> = corpus.certificates.iter().filter(|x| x.id.starts_with("nil3-non.")).collect();
    let opts = nondegeneration::Options { budget: 500, borel_trials: 20, seed: 0 };
    let mut g = c.benchmark_group("certificates");
    g.sample_size(10).measurement_time(Duration::from_secs(20));
    for (name, parallel) in modes() {
        g.bench_function(name, |b| b.iter(|| nondegeneration::verify_all(&corpus, &certs, &opts, parallel)));
    }
    g.finish();
}

criterion_group!(benches, derivations, degenerations, certificates);
criterion_main!(benches);
