use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use qtorus_bench::{module, reference_tori};
use qtorus_core::cyclotomic::Conductor;
use qtorus_core::fmodule::checks::l_relations_vanish;
use qtorus_core::fmodule::{ad, BoxVector, CheckContext};
use qtorus_core::suites::{run_suite, Suite, SuiteConfig};
use qtorus_core::{CycNumber, LatticePoint, TorusElement, TorusSpec};

fn cyclotomic(c: &mut Criterion) {
    for m in [4u32, 12, 60] {
        let k = Conductor::new(m).unwrap();
        let a: CycNumber = (0..5).map(|j| CycNumber::root_of_unity(k, 2 * j + 1) * CycNumber::from_integer(j + 2)).sum();
        let b: CycNumber = (0..3).map(|j| CycNumber::root_of_unity(k, 3 * j)).sum();
        c.bench_function(&format!("cyc_mul/M={m}"), |bench| bench.iter(|| black_box(&a) * black_box(&b)));
        c.bench_function(&format!("cyc_inv/M={m}"), |bench| bench.iter(|| black_box(&a).inv().unwrap()));
    }
}

fn radical(c: &mut Criterion) {
    c.bench_function("radical/d=3,N=4", |bench| {
        bench.iter(|| {
            let spec = TorusSpec::from_upper(3, 4, &[(0, 1, 1), (0, 2, 2)]).unwrap();
            black_box(spec.radical().index)
        })
    });
}

fn torus_mul(c: &mut Criterion) {
    for (name, spec) in reference_tori() {
        let d = spec.rank();
        let terms = |shift: i64| {
            TorusElement::from_terms(
                &spec,
                (0..6).map(|j| (LatticePoint::new(vec![j - shift; d]), CycNumber::from_integer(j + 1))),
            )
        };
        let (a, b) = (terms(2), terms(3));
        c.bench_function(&format!("tmul/{name}"), |bench| bench.iter(|| black_box(&a).tmul(black_box(&b)).unwrap()));
    }
}

fn module_action(c: &mut Criterion) {
    for (name, spec) in reference_tori() {
        let d = spec.rank();
        let ms = module(&spec, "sym:2");
        let radius = vec![3; d];
        let w = BoxVector::basis(&radius, &LatticePoint::zero(d), 0, ms.dim()).unwrap();
        let x = ad(&spec, &LatticePoint::unit(d, 0));
        c.bench_function(&format!("act/{name}/sym:2"), |bench| bench.iter(|| ms.act(black_box(&x), black_box(&w)).unwrap()));
        let pairs = vec![(LatticePoint::unit(d, 0), LatticePoint::unit(d, 1))];
        let ctx = CheckContext::new(name, 0, 1);
        c.bench_function(&format!("l_relations/{name}/sym:2"), |bench| {
            bench.iter(|| l_relations_vanish(&ms, &pairs, &radius, &ctx).unwrap())
        });
    }
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for (name, spec) in reference_tori() {
        let cfg = SuiteConfig::new(module(&spec, "natural"), vec![3; spec.rank()], CheckContext::new(name, 1, 20)).unwrap();
        group.bench_function(format!("cocycle/{name}"), |bench| bench.iter(|| run_suite(&cfg, Suite::Cocycle).unwrap()));
        group.bench_function(format!("module/{name}"), |bench| bench.iter(|| run_suite(&cfg, Suite::Module).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, cyclotomic, radical, torus_mul, module_action, suites);
criterion_main!(benches);
