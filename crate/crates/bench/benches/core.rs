use std::hint::black_box;

use cointjump::pricing::price_spread_with_pmf;
use cointjump::reference::{merton_market, Case};
use cointjump::specfun::kummer_m_int;
use cointjump::{Dependence, Direction, SpreadSpec, TwoLegMarket, DEFAULT_TAIL_TOL};
use criterion::{criterion_group, criterion_main, Criterion};

fn joint_pmf(c: &mut Criterion) {
    let mut g = c.benchmark_group("joint_pmf");
    g.sample_size(10);
    for (case, dep) in [
        (Case::A, Dependence::Independent),
        (Case::A, Dependence::Common { lambda: 9.24 }),
        (Case::A, Dependence::Cointegrated { a: 0.5 }),
        (Case::B, Dependence::Cointegrated { a: 0.5 }),
    ] {
        let pair = merton_market(case, dep).unwrap().jump_pair();
        g.bench_function(format!("case_{}_{}", case.name(), dep.name()), |b| {
            b.iter(|| pair.joint_pmf(black_box(1.0), DEFAULT_TAIL_TOL).unwrap())
        });
    }
    g.finish();
}

fn price_spread(c: &mut Criterion) {
    let spec = SpreadSpec { maturity: 1.0, strike: 0.0 };
    let mut g = c.benchmark_group("price_spread");
    for case in [Case::A, Case::B] {
        let mk = merton_market(case, Dependence::Cointegrated { a: 0.5 }).unwrap();
        let pmf = mk.jump_pair().joint_pmf(1.0, DEFAULT_TAIL_TOL).unwrap();
        g.bench_function(format!("case_{}_given_pmf", case.name()), |b| {
            b.iter(|| price_spread_with_pmf(black_box(&mk), &spec, Direction::FirstOverSecond, &pmf).unwrap())
        });
    }
    g.finish();
}

fn kummer(c: &mut Criterion) {
    let mut g = c.benchmark_group("kummer_m_int");
    for (a, b, x) in [(1, 2, 0.5), (10, 20, 20.0), (40, 50, 100.0)] {
        g.bench_function(format!("{a}_{b}_{x}"), |bn| bn.iter(|| kummer_m_int(black_box(a), black_box(b), black_box(x))));
    }
    g.finish();
}

criterion_group!(benches, joint_pmf, price_spread, kummer);
criterion_main!(benches);
