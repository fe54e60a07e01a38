use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion, Throughput};
use setsketch::Variant;
use setsketch_bench::{elements, ghll, minhash, setsketch};

fn inserts(c: &mut Criterion) {
    let mut group = c.benchmark_group("insert");
    for n in [100usize, 10_000, 1_000_000] {
        let data = elements(n, n as u64);
        group.throughput(Throughput::Elements(n as u64));
        if n == 1_000_000 {
            group.sample_size(10);
        }
        for (name, variant) in [
            ("setsketch1", Variant::SetSketch1),
            ("setsketch2", Variant::SetSketch2),
        ] {
            let proto = setsketch(variant, 2.0, 62);
            group.bench_with_input(BenchmarkId::new(name, n), &data, |bench, data| {
                bench.iter_batched_ref(
                    || proto.new_empty_like(),
                    |s| data.iter().for_each(|&e| s.insert(e)),
                    BatchSize::LargeInput,
                )
            });
        }
        for (name, tracked) in [("ghll", true), ("ghll-untracked", false)] {
            group.bench_with_input(BenchmarkId::new(name, n), &data, |bench, data| {
                bench.iter_batched_ref(
                    || ghll(tracked),
                    |s| data.iter().for_each(|&e| s.insert(e)),
                    BatchSize::LargeInput,
                )
            });
        }
        if n <= 10_000 {
            group.bench_with_input(BenchmarkId::new("minhash", n), &data, |bench, data| {
                bench.iter_batched_ref(
                    minhash,
                    |s| data.iter().for_each(|&e| s.insert(e)),
                    BatchSize::LargeInput,
                )
            });
        }
    }
    group.finish();
}

criterion_group!(benches, inserts);
criterion_main!(benches);
