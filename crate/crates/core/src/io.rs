//! Point configurations as CSV. The reader locates the `re` and `im` columns
//! by header name, so any CSV carrying them (including `lattice` output) can
//! be read back.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::Configuration;

fn parse_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse(format!("{other:?}")),
    }
}

pub fn read_configuration<R: Read>(input: R) -> Result<Configuration> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(parse_error)?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse(format!("missing `{name}` column in header {:?}", headers.iter().collect::<Vec<_>>())))
    };
    let (re_col, im_col) = (column("re")?, column("im")?);
    let mut points = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(parse_error)?;
        let field = |col: usize| -> Result<f64> {
            let raw = record.get(col).unwrap_or("");
            raw.parse().map_err(|_| Error::Parse(format!("row {}: bad number {raw:?}", k + 1)))
        };
        points.push(Complex64::new(field(re_col)?, field(im_col)?));
    }
    Configuration::new(points)
}

pub fn write_configuration<W: Write>(c: &Configuration, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re", "im"]).map_err(parse_error)?;
    for z in c.points() {
        w.write_record([z.re.to_string(), z.im.to_string()]).map_err(parse_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_configuration_file(path: &Path) -> Result<Configuration> {
    read_configuration(File::open(path)?)
}

pub fn write_configuration_file(c: &Configuration, path: &Path) -> Result<()> {
    write_configuration(c, File::create(path)?)
}
