use criterion::{criterion_group, criterion_main, Criterion};

use isharp_core::knotdb::KnotTable;
use isharp_core::scan::{parity_scan_with, table_rows_with, triangle_scan_with, ExecMode};
use isharp_core::slope::reduced_slopes;

fn modes() -> Vec<(&'static str, ExecMode)> {
    let mut v = vec![("sequential", ExecMode::Sequential)];
    #[cfg(feature = "parallel")]
    v.push(("parallel", ExecMode::Parallel));
    v
}

fn bench_triangle_scan(c: &mut Criterion) {
    let k = KnotTable::bundled().get("3_1").unwrap();
    let mut group = c.benchmark_group("triangle_scan_q8_p64");
    for (name, mode) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| triangle_scan_with(mode, &k, 8, 64).unwrap());
        });
    }
    group.finish();
}

fn bench_table(c: &mut Criterion) {
    let k = KnotTable::bundled().get("K_7").unwrap();
    let (from, to) = ("-64".parse().unwrap(), "64".parse().unwrap());
    let mut group = c.benchmark_group("table_denom8");
    for (name, mode) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| table_rows_with(mode, &k, from, to, 8).unwrap());
        });
    }
    group.finish();
}

fn bench_parity_scan(c: &mut Criterion) {
    let k = KnotTable::bundled().get("3_1").unwrap();
    let slopes = reduced_slopes(100, 1, 25);
    let mut group = c.benchmark_group("parity_scan");
    group.throughput(criterion::Throughput::Elements(slopes.len() as u64));
    for (name, mode) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| parity_scan_with(mode, &k, slopes.clone()).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_triangle_scan, bench_table, bench_parity_scan);
criterion_main!(benches);
