//! Time-series CSV: `t,iters,residual,energy_total,norm,E_0..E_{P-1},u_0..u_{P-1}`.
//!
//! Floats are written with 17 significant digits so identical runs produce
//! byte-identical files. `residual` is empty when no self-consistency
//! iteration ran.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::evolution::StepRecord;

pub fn header(n_plaquettes: usize) -> String {
    let mut cols = vec!["t", "iters", "residual", "energy_total", "norm"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    cols.extend((0..n_plaquettes).map(|p| format!("E_{p}")));
    cols.extend((0..n_plaquettes).map(|p| format!("u_{p}")));
    cols.join(",")
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_row(rec: &StepRecord) -> String {
    let mut row = vec![
        format_float(rec.t),
        rec.iterations.to_string(),
        rec.residual.map(format_float).unwrap_or_default(),
        format_float(rec.energy_total),
        format_float(rec.norm),
    ];
    row.extend(rec.energies.iter().copied().map(format_float));
    row.extend(rec.tadpole.iter().copied().map(format_float));
    row.join(",")
}

/// Writes the header immediately and flushes after every row, so a run
/// that fails midway leaves a readable prefix behind.
pub struct SeriesWriter<W: Write> {
    inner: W,
    n_plaquettes: usize,
    rows: usize,
}

impl<W: Write> SeriesWriter<W> {
    pub fn new(mut inner: W, n_plaquettes: usize) -> Result<Self> {
        writeln!(inner, "{}", header(n_plaquettes))?;
        inner.flush()?;
        Ok(Self {
            inner,
            n_plaquettes,
            rows: 0,
        })
    }

    pub fn write(&mut self, rec: &StepRecord) -> Result<()> {
        if rec.energies.len() != self.n_plaquettes || rec.tadpole.len() != self.n_plaquettes {
            return Err(Error::Dimension {
                expected: self.n_plaquettes,
                got: rec.energies.len(),
            });
        }
        writeln!(self.inner, "{}", format_row(rec))?;
        self.inner.flush()?;
        self.rows += 1;
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn into_inner(self) -> W {
        self.inner
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub iters: usize,
    pub residual: Option<f64>,
    pub energy_total: f64,
    pub norm: f64,
    pub energies: Vec<f64>,
    pub tadpole: Vec<f64>,
}

/// Parsed CSV; the header is checked against the expected layout.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTable {
    pub n_plaquettes: usize,
    pub rows: Vec<SeriesRow>,
}

pub fn read_series(reader: impl BufRead) -> Result<SeriesTable> {
    let mut lines = reader.lines();
    let head = lines
        .next()
        .ok_or_else(|| Error::Format("empty time-series file".into()))??;
    let n_cols = head.split(',').count();
    if n_cols < 7 || (n_cols - 5) % 2 != 0 {
        return Err(Error::Format(format!("unexpected header `{head}`")));
    }
    let p = (n_cols - 5) / 2;
    if head != header(p) {
        return Err(Error::Format(format!("unexpected header `{head}`")));
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != n_cols {
            return Err(Error::Format(format!(
                "row {} has {} fields, expected {n_cols}",
                k + 1,
                fields.len()
            )));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Format(format!("row {}: bad number `{s}`", k + 1)))
        };
        rows.push(SeriesRow {
            t: num(fields[0])?,
            iters: fields[1]
                .parse()
                .map_err(|_| Error::Format(format!("row {}: bad iteration count", k + 1)))?,
            residual: match fields[2] {
                "" => None,
                s => Some(num(s)?),
            },
            energy_total: num(fields[3])?,
            norm: num(fields[4])?,
            energies: fields[5..5 + p].iter().map(|s| num(s)).collect::<Result<_>>()?,
            tadpole: fields[5 + p..].iter().map(|s| num(s)).collect::<Result<_>>()?,
        });
    }
    Ok(SeriesTable { n_plaquettes: p, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(residual: Option<f64>) -> StepRecord {
        StepRecord {
            step: 3,
            t: 0.075,
            energies: vec![0.1, 1.0 / 3.0],
            tadpole: vec![1.0, 0.999],
            iterations: residual.map_or(0, |_| 4),
            residual,
            residual_trace: Vec::new(),
            energy_total: -2.5,
            norm: 1.0,
        }
    }

    #[test]
    fn header_layout() {
        assert_eq!(header(2), "t,iters,residual,energy_total,norm,E_0,E_1,u_0,u_1");
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_float(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(format_float(0.0), "0.0000000000000000e0");
    }

    #[test]
    fn write_then_read_is_exact() {
        let mut w = SeriesWriter::new(Vec::new(), 2).unwrap();
        w.write(&rec(None)).unwrap();
        w.write(&rec(Some(3.5e-11))).unwrap();
        assert_eq!(w.rows(), 2);
        let bytes = w.into_inner();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with(&format!("{},0,,", format_float(0.075))));
        let table = read_series(bytes.as_slice()).unwrap();
        assert_eq!(table.n_plaquettes, 2);
        assert_eq!(table.rows[0].residual, None);
        assert_eq!(table.rows[1].residual, Some(3.5e-11));
        assert_eq!(table.rows[1].energies[1], 1.0 / 3.0);
        assert_eq!(table.rows[0].t, 0.075);
    }

    #[test]
    fn rejects_mismatched_rows() {
        let mut w = SeriesWriter::new(Vec::new(), 3).unwrap();
        assert!(w.write(&rec(None)).is_err());
        assert!(read_series("t,iters\n".as_bytes()).is_err());
        let bad = format!("{}\n1,2,3\n", header(1));
        assert!(read_series(bad.as_bytes()).is_err());
    }
}
