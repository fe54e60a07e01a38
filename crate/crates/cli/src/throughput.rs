//! Insert cost as a function of set size.
//!
//! Trials run one after another so that timings do not compete for cores.
//! Element generation and sketch allocation are outside the timed region.

use std::time::Instant;

use setsketch::{split_seed, RandomStream};

use crate::data::generate_set;
use crate::error::{spec_error, Result};
use crate::output::{num, CsvRecord};
use crate::sketch::SketchParams;

#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputSpec {
    pub sketch: SketchParams,
    pub trials: usize,
    pub seed: u64,
    pub grid: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputRecord {
    pub sketch: &'static str,
    pub m: usize,
    pub b: f64,
    pub n: u64,
    pub trials: usize,
    /// Wall clock, hardware dependent.
    pub mean_ns_per_element: f64,
    /// Hash values generated per element.
    pub mean_inner_iterations: f64,
}

impl CsvRecord for ThroughputRecord {
    const HEADER: &'static [&'static str] = &[
        "sketch",
        "m",
        "b",
        "n",
        "trials",
        "mean_ns_per_element",
        "mean_inner_iterations",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            self.sketch.to_string(),
            self.m.to_string(),
            num(self.b),
            self.n.to_string(),
            self.trials.to_string(),
            num(self.mean_ns_per_element),
            num(self.mean_inner_iterations),
        ]
    }
}

pub fn run_throughput_benchmark(spec: &ThroughputSpec) -> Result<Vec<ThroughputRecord>> {
    if spec.trials == 0 {
        return spec_error("trials must be at least 1");
    }
    if spec.grid.is_empty() || spec.grid.contains(&0) {
        return spec_error("grid must be nonempty with cardinalities of at least 1");
    }
    let n_max = *spec.grid.iter().max().unwrap();
    let proto = spec.sketch.build(n_max)?;
    let config = spec.sketch.resolve(n_max)?;
    let mut records = Vec::with_capacity(spec.grid.len());
    for (gi, &n) in spec.grid.iter().enumerate() {
        let (mut nanos, mut iterations) = (0u128, 0u64);
        for trial in 0..spec.trials as u64 {
            let mut stream =
                RandomStream::from_seed(split_seed(split_seed(spec.seed, gi as u64), trial));
            let elements = generate_set(n as usize, &mut stream);
            let mut sketch = proto.new_empty_like();
            let start = Instant::now();
            for &e in &elements {
                iterations += u64::from(sketch.insert_counting(e));
            }
            nanos += start.elapsed().as_nanos();
            std::hint::black_box(&sketch);
        }
        let total = (n * spec.trials as u64) as f64;
        records.push(ThroughputRecord {
            sketch: spec.sketch.label(),
            m: config.m,
            b: config.b,
            n,
            trials: spec.trials,
            mean_ns_per_element: nanos as f64 / total,
            mean_inner_iterations: iterations as f64 / total,
        });
    }
    Ok(records)
}
