use std::sync::Arc;

use crate::config::SketchConfig;
use crate::error::{invalid, Result, SketchError};
use crate::estimation::cardinality;
use crate::histogram::RegisterHistogram;
use crate::powers::PowerTable;
use crate::rng::{truncated_exponential_from_uniform, PermutationSampler, RandomStream};

/// How the ascending points of an element are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Exponential spacings; registers are independent.
    SetSketch1,
    /// One truncated exponential point per interval of equal probability;
    /// registers of small sets are negatively correlated.
    SetSketch2,
}

impl Variant {
    pub fn code(self) -> u8 {
        match self {
            Variant::SetSketch1 => 1,
            Variant::SetSketch2 => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(Variant::SetSketch1),
            2 => Some(Variant::SetSketch2),
            _ => None,
        }
    }
}

/// Boundaries `gamma_0 = 0 < gamma_1 < .. < gamma_m = inf` splitting the
/// exponential distribution with rate `a` into `m` intervals of mass `1/m`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBoundaries {
    gamma: Vec<f64>,
}

impl IntervalBoundaries {
    pub fn new(m: usize, a: f64) -> Result<Self> {
        if m == 0 {
            return invalid("interval count must be positive");
        }
        if !(a > 0.0 && a.is_finite()) {
            return invalid(format!("rate a must be finite and > 0, got {a}"));
        }
        let mut gamma: Vec<f64> = (0..m)
            .map(|j| -(-(j as f64) / m as f64).ln_1p() / a)
            .collect();
        gamma.push(f64::INFINITY);
        Ok(Self { gamma })
    }

    /// `gamma_j` for `j = 0..=m`.
    pub fn get(&self, j: usize) -> f64 {
        self.gamma[j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.gamma
    }

    /// Number of intervals `m`.
    pub fn len(&self) -> usize {
        self.gamma.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Immutable tables shared by all sketches with the same configuration.
#[derive(Debug)]
struct Tables {
    powers: PowerTable,
    /// SetSketch1: `1 / (a (m - j))` for 0-based `j`.
    spacing_scales: Vec<f64>,
    /// SetSketch2: interval boundaries and interval masses relative to
    /// their left ends, `1 / (m - j)`.
    boundaries: Option<IntervalBoundaries>,
    masses: Vec<f64>,
}

impl Tables {
    fn new(config: &SketchConfig, variant: Variant) -> Result<Self> {
        let m = config.m;
        let powers = PowerTable::new(config.b, config.q);
        let (spacing_scales, boundaries, masses) = match variant {
            Variant::SetSketch1 => {
                let scales = (0..m).map(|j| 1.0 / (config.a * (m - j) as f64)).collect();
                (scales, None, Vec::new())
            }
            Variant::SetSketch2 => {
                let masses = (0..m).map(|j| 1.0 / (m - j) as f64).collect();
                (
                    Vec::new(),
                    Some(IntervalBoundaries::new(m, config.a)?),
                    masses,
                )
            }
        };
        Ok(Self {
            powers,
            spacing_scales,
            boundaries,
            masses,
        })
    }
}

/// SetSketch with `m` registers in `{0, .., q+1}`.
///
/// Inserting an element generates up to `m` ascending points from a stream
/// seeded with the element, assigns each to a register drawn without
/// replacement and keeps the register maximum of the clamped update values.
/// A lower bound `B <= min K_i`, refreshed after every `m` register changes,
/// lets the insert stop as soon as no further point can change a register.
#[derive(Debug, Clone)]
pub struct SetSketch {
    config: SketchConfig,
    variant: Variant,
    registers: Vec<u32>,
    lower_bound: u32,
    counter: usize,
    tables: Arc<Tables>,
    sampler: PermutationSampler,
}

impl PartialEq for SetSketch {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config
            && self.variant == other.variant
            && self.registers == other.registers
    }
}

impl SetSketch {
    pub fn new(config: SketchConfig, variant: Variant) -> Result<Self> {
        config.check()?;
        Ok(Self {
            config,
            variant,
            registers: vec![0; config.m],
            lower_bound: 0,
            counter: 0,
            tables: Arc::new(Tables::new(&config, variant)?),
            sampler: PermutationSampler::new(config.m)?,
        })
    }

    /// Empty sketch sharing the precomputed tables of `self`.
    pub fn new_empty_like(&self) -> Self {
        Self {
            config: self.config,
            variant: self.variant,
            registers: vec![0; self.config.m],
            lower_bound: 0,
            counter: 0,
            tables: Arc::clone(&self.tables),
            sampler: self.sampler.clone(),
        }
    }

    /// Sketch with the given register values; `B` is set to their minimum.
    pub fn from_registers(
        config: SketchConfig,
        variant: Variant,
        registers: Vec<u32>,
    ) -> Result<Self> {
        let mut sketch = Self::new(config, variant)?;
        sketch.load_registers(registers)?;
        Ok(sketch)
    }

    /// Replaces the registers, keeping the shared tables.
    pub fn load_registers(&mut self, registers: Vec<u32>) -> Result<()> {
        if registers.len() != self.config.m {
            return invalid(format!(
                "expected {} registers, got {}",
                self.config.m,
                registers.len()
            ));
        }
        let max = self.config.q + 1;
        if let Some(&k) = registers.iter().find(|&&k| k > max) {
            return invalid(format!("register value {k} exceeds q+1 = {max}"));
        }
        self.registers = registers;
        self.refresh_lower_bound();
        Ok(())
    }

    pub fn clear(&mut self) {
        self.registers.fill(0);
        self.lower_bound = 0;
        self.counter = 0;
    }

    pub fn config(&self) -> &SketchConfig {
        &self.config
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn registers(&self) -> &[u32] {
        &self.registers
    }

    /// Tracked lower bound `B`.
    pub fn lower_bound(&self) -> u32 {
        self.lower_bound
    }

    /// Register modifications since the last refresh of `B`.
    pub fn update_counter(&self) -> usize {
        self.counter
    }

    pub fn powers(&self) -> &PowerTable {
        &self.tables.powers
    }

    pub fn insert(&mut self, element: u64) {
        self.insert_impl::<true>(element);
    }

    /// Inserts and returns the number of points generated for the element.
    pub fn insert_counting(&mut self, element: u64) -> u32 {
        self.insert_impl::<true>(element)
    }

    /// Reference insert that generates all `m` points and never stops early.
    pub fn insert_without_early_exit(&mut self, element: u64) {
        self.insert_impl::<false>(element);
    }

    fn insert_impl<const EARLY_EXIT: bool>(&mut self, element: u64) -> u32 {
        let tables = &*self.tables;
        let powers = &tables.powers;
        let m = self.config.m;
        let a = self.config.a;
        let mut stream = RandomStream::from_seed(element);
        self.sampler.reset();
        let mut x = 0.0;
        let mut iterations = 0;
        for j in 0..m {
            iterations += 1;
            x = match self.variant {
                Variant::SetSketch1 => {
                    x + stream.next_standard_exponential() * tables.spacing_scales[j]
                }
                Variant::SetSketch2 => {
                    let gamma = tables.boundaries.as_ref().expect("SetSketch2 boundaries");
                    truncated_exponential_from_uniform(
                        stream.next_uniform(),
                        a,
                        gamma.get(j),
                        gamma.get(j + 1),
                        tables.masses[j],
                    )
                }
            };
            let k = if EARLY_EXIT {
                if x > powers.get(self.lower_bound) {
                    break;
                }
                let k = powers.update_value_above(x, self.lower_bound);
                if k <= self.lower_bound {
                    break;
                }
                k
            } else {
                powers.update_value(x)
            };
            let i = self.sampler.draw(&mut stream);
            if k > self.registers[i] {
                self.registers[i] = k;
                self.counter += 1;
                if self.counter >= m {
                    self.lower_bound = *self.registers.iter().min().expect("m >= 1");
                    self.counter = 0;
                }
            }
        }
        iterations
    }

    fn refresh_lower_bound(&mut self) {
        self.lower_bound = *self.registers.iter().min().expect("m >= 1");
        self.counter = 0;
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.config != other.config || self.variant != other.variant {
            return Err(SketchError::Incompatible(format!(
                "{:?} {:?} vs {:?} {:?}",
                self.variant, self.config, other.variant, other.config
            )));
        }
        Ok(())
    }

    /// Sketch of the union: register-wise maximum.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        let mut merged = self.clone();
        merged.merge_from(other)?;
        Ok(merged)
    }

    pub fn merge_from(&mut self, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        for (k, &o) in self.registers.iter_mut().zip(&other.registers) {
            *k = (*k).max(o);
        }
        self.refresh_lower_bound();
        Ok(())
    }

    pub fn histogram(&self) -> RegisterHistogram {
        RegisterHistogram::from_registers(&self.registers, self.config.q)
    }

    /// Closed-form estimate `m (1 - 1/b) / (a ln b sum_i b^-K_i)`.
    pub fn estimate_raw(&self) -> f64 {
        cardinality::raw_from_power_sum(&self.config, self.powers().power_sum(&self.registers))
    }

    /// Estimate with small- and large-range corrections.
    pub fn estimate_corrected(&self) -> f64 {
        cardinality::estimate_cardinality_corrected(&self.histogram(), &self.config)
            .expect("histogram of a valid sketch")
    }

    /// Maximum-likelihood estimate.
    pub fn estimate_ml(&self) -> f64 {
        cardinality::estimate_cardinality_ml(&self.histogram(), &self.config)
            .expect("histogram of a valid sketch")
    }
}
