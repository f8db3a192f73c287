use criterion::{black_box, criterion_group, criterion_main, Criterion, Throughput};

use tagforge_core::codec::encode_input;
use tagforge_core::compile::compile;
use tagforge_core::cyclic::{crun, CyclicLimits, CyclicTagSystem};
use tagforge_core::gen;
use tagforge_core::lockstep::{lockstep_verify, LockstepOptions};
use tagforge_core::tag::{run, RunLimits, TraceMode};

fn reference_program() -> CyclicTagSystem {
    CyclicTagSystem::new(vec![
        vec![false, false],
        vec![false, true, false],
        vec![true, true],
    ])
}

fn bench_tag_steps(c: &mut Criterion) {
    let program = reference_program();
    let compiled = compile(&program).unwrap();
    let mut rng = gen::rng(1);
    let input = gen::random_input(&mut rng, 32, 32);
    let word = encode_input(&input, compiled.p()).unwrap();
    let steps = 50_000u64;

    let mut group = c.benchmark_group("tag-machine");
    group.throughput(Throughput::Elements(steps));
    group.bench_function("compiled-50k-steps", |b| {
        b.iter(|| {
            let limits = RunLimits {
                max_steps: steps,
                detect_cycles: false,
                cycle_cap: 0,
            };
            let res = run(compiled.tag(), black_box(&word), &limits, TraceMode::Off);
            black_box(res.steps)
        })
    });
    group.finish();
}

fn bench_cyclic_steps(c: &mut Criterion) {
    let program = reference_program();
    let mut rng = gen::rng(2);
    let input = gen::random_input(&mut rng, 64, 64);
    let steps = 100_000u64;

    let mut group = c.benchmark_group("cyclic-machine");
    group.throughput(Throughput::Elements(steps));
    group.bench_function("reference-100k-steps", |b| {
        b.iter(|| {
            let limits = CyclicLimits {
                max_steps: steps,
                detect_cycles: false,
                cycle_cap: 0,
            };
            let res = crun(&program, black_box(&input), &limits, false);
            black_box(res.steps)
        })
    });
    group.finish();
}

fn bench_compile(c: &mut Criterion) {
    let program = reference_program();
    c.bench_function("compile-p3", |b| {
        b.iter(|| black_box(compile(black_box(&program)).unwrap().q()))
    });
}

fn bench_lockstep_macro_steps(c: &mut Criterion) {
    let program = reference_program();
    let mut rng = gen::rng(3);
    let input = gen::random_input(&mut rng, 16, 16);

    c.bench_function("lockstep-8-macro-steps", |b| {
        b.iter(|| {
            let opts = LockstepOptions {
                max_cyclic_steps: 8,
                budget_k: 64,
            };
            let report = lockstep_verify(&program, black_box(&input), &opts).unwrap();
            assert!(report.verdict.is_equivalent());
            black_box(report.total_tag_steps)
        })
    });
}

criterion_group!(
    benches,
    bench_tag_steps,
    bench_cyclic_steps,
    bench_compile,
    bench_lockstep_macro_steps
);
criterion_main!(benches);
