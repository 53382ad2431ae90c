use criterion::{black_box, criterion_group, criterion_main, Criterion};

use symdisc::fuzz::{run_suite, Suite};
use symdisc::linalg::r;
use symdisc::nonuniqueness::{member, target};
use symdisc::schwarz::{build_psi, report, SchwarzDatum};

fn schwarz(cr: &mut Criterion) {
    let d = SchwarzDatum::new(r(-0.8), target()).unwrap();
    cr.bench_function("report_worked", |b| b.iter(|| report(black_box(&d))));
    cr.bench_function("build_psi_worked", |b| b.iter(|| build_psi(black_box(&d)).unwrap()));
    let psi = build_psi(&d).unwrap();
    cr.bench_function("psi_eval", |b| b.iter(|| psi.eval(black_box(r(0.3)))));
    cr.bench_function("nonuniqueness_member", |b| b.iter(|| member(black_box(r(0.5))).unwrap()));
}

fn fuzz(cr: &mut Criterion) {
    let mut g = cr.benchmark_group("fuzz");
    g.sample_size(10);
    g.bench_function("thm37_n3_x100", |b| b.iter(|| run_suite(Suite::Thm37, 3, 100, 1)));
    g.bench_function("lemma36_n3_x100", |b| b.iter(|| run_suite(Suite::Lemma36, 3, 100, 1)));
    g.finish();
}

criterion_group!(benches, schwarz, fuzz);
criterion_main!(benches);
