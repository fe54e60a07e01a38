//! Sketches stored in files.

use std::fs;
use std::io::BufRead;
use std::path::Path;

use setsketch::{
    estimate_jaccard_mh_closed_form, estimate_jaccard_ml, relative_cardinalities, AnySketch,
    JointEstimate,
};

use crate::error::{spec_error, Result};

/// Reads one unsigned 64-bit integer per line, ignoring blank lines.
pub fn read_elements(reader: impl BufRead) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        match trimmed.parse::<u64>() {
            Ok(v) => out.push(v),
            Err(_) => {
                return spec_error(format!(
                    "line {}: {trimmed:?} is not an unsigned 64-bit integer",
                    i + 1
                ))
            }
        }
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<AnySketch> {
    Ok(AnySketch::from_bytes(&fs::read(path)?)?)
}

pub fn save(sketch: &AnySketch, path: &Path) -> Result<()> {
    fs::write(path, sketch.to_bytes())?;
    Ok(())
}

/// Merges all sketches; they must share kind and parameters.
pub fn merge_all(sketches: &[AnySketch]) -> Result<AnySketch> {
    let Some((first, rest)) = sketches.split_first() else {
        return spec_error("nothing to merge");
    };
    let mut acc = first.clone();
    for s in rest {
        acc = acc.merge(s)?;
    }
    Ok(acc)
}

/// Cardinalities and Jaccard similarity of two sketches, with the
/// cardinalities estimated from the sketches themselves.
pub fn compare(a: &AnySketch, b: &AnySketch) -> Result<JointEstimate> {
    let counts = a.joint_counts(b)?;
    let (n_a, n_b) = (a.estimate()?, b.estimate()?);
    let j = match a {
        AnySketch::MinHash(_) => {
            let (u, v) = relative_cardinalities(n_a, n_b)?;
            estimate_jaccard_mh_closed_form(&counts, u, v)?
        }
        AnySketch::SetSketch(s) => estimate_jaccard_ml(&counts, n_a, n_b, s.config().b)?,
        AnySketch::Ghll(s) => estimate_jaccard_ml(&counts, n_a, n_b, s.config().b)?,
    };
    Ok(JointEstimate::new(n_a, n_b, j)?)
}
