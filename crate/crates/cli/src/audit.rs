//! Numerical audit of the series functions behind the estimators.

use setsketch::SpecialFunctions;

use crate::error::Result;
use crate::output::{num, CsvRecord};

/// Bases checked by [`run_special_function_audit`].
pub const AUDIT_BASES: [f64; 3] = [1.001, 1.2, 2.0];

/// Stated bounds for base 2. All deviations shrink as `b -> 1`, so they
/// apply to the smaller bases as well.
pub const XI1_BOUND: f64 = 1e-5;
pub const XI2_BOUND: f64 = 1e-4;
pub const ZETA_BOUND: f64 = 1e-5;

const X_POINTS: usize = 1000;
const ZETA_SPANS: [f64; 4] = [0.25, 1.0, 2.5, 10.0];

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRecord {
    pub function: &'static str,
    pub b: f64,
    pub grid_points: usize,
    /// `max |xi - 1|` for `xi1`, `xi2`; maximum relative deviation of
    /// `zeta(x1, x2)` from `x2 - x1` for `zeta`.
    pub max_abs_error: f64,
    pub bound: f64,
}

impl AuditRecord {
    pub fn pass(&self) -> bool {
        self.max_abs_error <= self.bound
    }
}

impl CsvRecord for AuditRecord {
    const HEADER: &'static [&'static str] = &[
        "function",
        "b",
        "grid_points",
        "max_abs_error",
        "paper_bound",
        "pass",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            self.function.to_string(),
            num(self.b),
            self.grid_points.to_string(),
            num(self.max_abs_error),
            num(self.bound),
            self.pass().to_string(),
        ]
    }
}

/// Both functions have period 1 in `x`, so one period is enough.
fn x_grid() -> impl Iterator<Item = f64> {
    (0..X_POINTS).map(|i| i as f64 / X_POINTS as f64)
}

pub fn run_special_function_audit() -> Result<Vec<AuditRecord>> {
    let mut records = Vec::new();
    for b in AUDIT_BASES {
        let f = SpecialFunctions::new(b)?;
        for (k, name, bound) in [(1, "xi1", XI1_BOUND), (2, "xi2", XI2_BOUND)] {
            let mut worst = 0.0f64;
            for x in x_grid() {
                worst = worst.max((f.xi(k, x)? - 1.0).abs());
            }
            records.push(AuditRecord {
                function: name,
                b,
                grid_points: X_POINTS,
                max_abs_error: worst,
                bound,
            });
        }
        let mut worst = 0.0f64;
        for x in x_grid() {
            for span in ZETA_SPANS {
                worst = worst.max((f.zeta(x, x + span)? / span - 1.0).abs());
            }
        }
        records.push(AuditRecord {
            function: "zeta",
            b,
            grid_points: X_POINTS * ZETA_SPANS.len(),
            max_abs_error: worst,
            bound: ZETA_BOUND,
        });
    }
    Ok(records)
}

pub fn audit_passed(records: &[AuditRecord]) -> bool {
    records.iter().all(AuditRecord::pass)
}
