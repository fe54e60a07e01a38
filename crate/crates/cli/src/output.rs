use std::io::Write;

use crate::error::Result;

/// A record type with a fixed CSV schema.
pub trait CsvRecord {
    const HEADER: &'static [&'static str];

    fn fields(&self) -> Vec<String>;
}

/// Writes the header and all records.
pub fn write_csv<R: CsvRecord, W: Write>(records: &[R], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(R::HEADER)?;
    for r in records {
        writer.write_record(r.fields())?;
    }
    writer.flush()?;
    Ok(())
}

pub fn to_csv_string<R: CsvRecord>(records: &[R]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// Shortest representation that parses back to the same value; undefined
/// values become `NaN`.
pub(crate) fn num(x: f64) -> String {
    format!("{x:?}")
}

pub(crate) fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NaN".to_string(), num)
}
