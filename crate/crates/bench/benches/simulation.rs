use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use qutrit_teleport::linalg::{hermitian_eigenvalues, Operator};
use qutrit_teleport::metrics::channel_reports;
use qutrit_teleport::protocol::{run_monte_carlo, CorrectionMode, PhiSpec};
use qutrit_teleport::states::{channel_audit, ChannelKind, UnknownQutrit};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn random_hermitian(seed: u64, dim: usize) -> Operator {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut o = Operator::zeros(dim).unwrap();
    for i in 0..dim {
        o.set(i, i, Complex64::new(2.0 * r.random::<f64>() - 1.0, 0.0));
        for j in (i + 1)..dim {
            let z = Complex64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5);
            o.set(i, j, z);
            o.set(j, i, z.conj());
        }
    }
    o
}

fn bench_eigensolver(c: &mut Criterion) {
    let h = random_hermitian(17, 9);
    c.bench_function("jacobi eigenvalues 9x9", |b| {
        b.iter(|| hermitian_eigenvalues(black_box(&h)).unwrap())
    });
}

fn bench_monte_carlo(c: &mut Criterion) {
    let fixed = PhiSpec::Fixed(UnknownQutrit::basis(0).unwrap());
    c.bench_function("monte carlo 10k trials u/unitary", |b| {
        b.iter(|| {
            run_monte_carlo(
                black_box(&fixed),
                ChannelKind::Unitary,
                CorrectionMode::UnitaryPrinted,
                10_000,
                7,
            )
            .unwrap()
        })
    });
    c.bench_function("monte carlo 10k trials nu/kraus haar", |b| {
        b.iter(|| {
            run_monte_carlo(
                black_box(&PhiSpec::Haar),
                ChannelKind::NonUnitary,
                CorrectionMode::KrausProbabilistic,
                10_000,
                7,
            )
            .unwrap()
        })
    });
}

fn bench_reports(c: &mut Criterion) {
    c.bench_function("channel metrics table", |b| {
        b.iter(|| channel_reports().unwrap())
    });
    c.bench_function("audit nu channel", |b| {
        b.iter(|| channel_audit(black_box(ChannelKind::NonUnitary)))
    });
}

criterion_group!(benches, bench_eigensolver, bench_monte_carlo, bench_reports);
criterion_main!(benches);
