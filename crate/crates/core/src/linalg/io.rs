//! Plain-text matrix files: a line holding `n`, then `n·n` lines `re im` in
//! row-major order. Values are written in shortest round-trip form.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

pub fn write_matrix<W: Write>(m: &ComplexMatrix, mut out: W) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("matrix files hold square matrices".into()));
    }
    writeln!(out, "{}", m.rows())?;
    for z in m.as_slice() {
        writeln!(out, "{:e} {:e}", z.re, z.im)?;
    }
    Ok(())
}

pub fn read_matrix<R: Read>(input: R) -> Result<ComplexMatrix> {
    let mut lines = BufReader::new(input)
        .lines()
        .enumerate()
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let header = header?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension line {:?}", header.trim())))?;
    let mut data = Vec::with_capacity(n * n);
    for (lineno, line) in lines {
        let line = line?;
        let mut fields = line.split_whitespace();
        let mut next = || -> Result<f64> {
            let tok = fields
                .next()
                .ok_or_else(|| Error::Parse(format!("line {}: expected `re im`", lineno + 1)))?;
            tok.parse()
                .map_err(|_| Error::Parse(format!("line {}: bad number {tok:?}", lineno + 1)))
        };
        let re = next()?;
        let im = next()?;
        if fields.next().is_some() {
            return Err(Error::Parse(format!("line {}: expected exactly two fields", lineno + 1)));
        }
        data.push(Complex64::new(re, im));
    }
    if data.len() != n * n {
        return Err(Error::Parse(format!("expected {} entries, found {}", n * n, data.len())));
    }
    ComplexMatrix::from_row_major(n, n, data)
}

pub fn write_matrix_file(m: &ComplexMatrix, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix(m, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn read_matrix_file(path: &Path) -> Result<ComplexMatrix> {
    read_matrix(File::open(path)?)
}
