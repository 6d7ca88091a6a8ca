//! Tabular output shared by the library and the command line: fixed
//! 12-significant-digit numbers, CSV with a parameter comment line, and
//! JSON arrays of records.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::equilibria::EquilibriumPoint;
use crate::error::Result;
use crate::params::SystemParams;
use crate::propagate::Trajectory;
use crate::stability::StabilityReport;
use crate::sweep::{CurveSet, ZvcGrid};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Shortest rendering of `v` rounded to 12 significant digits, switching to
/// exponent notation outside `[1e-4, 1e12)`. Non-finite values render as
/// `nan`, `inf` or `-inf`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `v` rounded to 12 significant digits.
pub fn round_sig(v: f64) -> f64 {
    if v.is_finite() {
        format_float(v).parse().unwrap_or(v)
    } else {
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    /// Written as an empty CSV field or JSON `null`.
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => format_float(*v),
            Cell::Num(_) | Cell::Missing => String::new(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => Number::from_f64(round_sig(*v)).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Missing => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// CSV with an optional leading `# comment` line.
    pub fn write_csv<W: Write>(&self, mut out: W, comment: Option<&str>) -> Result<()> {
        if let Some(c) = comment {
            writeln!(out, "# {c}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))?;
        }
        w.flush()?;
        Ok(())
    }

    /// JSON array of objects keyed by the header, followed by a newline.
    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::json))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        serde_json::to_writer_pretty(&mut out, &records)?;
        writeln!(out)?;
        Ok(())
    }
}

/// `mu=... q1=... a2=... c_d=...`
pub fn params_comment(p: &SystemParams) -> String {
    format!(
        "mu={} q1={} a2={} c_d={}",
        format_float(p.mu),
        format_float(p.q1),
        format_float(p.a2),
        format_float(p.c_d)
    )
}

pub fn points_table<'a>(points: impl IntoIterator<Item = &'a EquilibriumPoint>) -> Table {
    let mut t = Table::new(["label", "x", "y", "residual", "provenance"]);
    for p in points {
        t.push(vec![
            p.label.as_str().into(),
            p.x.into(),
            p.y.into(),
            p.residual.into(),
            p.provenance.as_str().into(),
        ]);
    }
    t
}

/// One row per report with the roots spread over `re1, im1, ..., re4, im4`.
pub fn stability_table<'a>(
    reports: impl IntoIterator<Item = (&'a str, &'a StabilityReport)>,
) -> Table {
    let mut header = vec![
        "label".to_string(),
        "method".into(),
        "classification".into(),
        "max_re".into(),
        "max_residual".into(),
    ];
    for i in 1..=4 {
        header.push(format!("re{i}"));
        header.push(format!("im{i}"));
    }
    let mut t = Table::new(header);
    for (label, r) in reports {
        let mut row: Vec<Cell> = vec![
            label.into(),
            r.method.as_str().into(),
            r.classification.as_str().into(),
            r.max_real().into(),
            r.max_residual.into(),
        ];
        for z in r.roots {
            row.push(z.re.into());
            row.push(z.im.into());
        }
        t.push(row);
    }
    t
}

/// Long format: one row per curve and parameter value.
pub fn curves_table(curves: &[CurveSet]) -> Table {
    let Some(first) = curves.first() else {
        return Table::new(["curve"]);
    };
    let mut header = vec!["curve".to_string(), first.parameter.clone()];
    header.extend(first.columns.iter().cloned());
    let mut t = Table::new(header);
    for c in curves {
        for r in &c.rows {
            let mut row: Vec<Cell> = vec![c.label.clone().into(), r.parameter.into()];
            row.extend(r.values.iter().map(|&v| Cell::from(v)));
            t.push(row);
        }
    }
    t
}

pub fn grid_table(grid: &ZvcGrid) -> Table {
    let mut t = Table::new(["x", "y", "C"]);
    let xs = grid.spec.xs();
    for (iy, y) in grid.spec.ys().into_iter().enumerate() {
        for (ix, &x) in xs.iter().enumerate() {
            t.push(vec![x.into(), y.into(), grid.get(ix, iy).into()]);
        }
    }
    t
}

pub fn trajectory_table(traj: &Trajectory) -> Table {
    let mut t = Table::new(["t", "x", "y", "vx", "vy", "C"]);
    for s in &traj.samples {
        let st = s.state;
        t.push(vec![
            s.t.into(),
            st.x.into(),
            st.y.into(),
            st.vx.into(),
            st.vy.into(),
            s.c.into(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_float(0.0385208965), "0.0385208965");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_float(299_792_458.0), "299792458");
        assert_eq!(format_float(3e-5), "3e-5");
        assert_eq!(format_float(1.2345e-9), "1.2345e-9");
        assert_eq!(format_float(-8.3386e15), "-8.3386e15");
        assert_eq!(format_float(0.000123), "0.000123");
        assert_eq!(format_float(f64::NAN), "nan");
    }

    #[test]
    fn rounding_is_idempotent() {
        for &v in &[
            0.1 + 0.2,
            1.0 / 7.0,
            -std::f64::consts::E,
            6.02214076e23,
            1e-300,
        ] {
            let r = round_sig(v);
            assert_eq!(round_sig(r), r);
            assert_eq!(format_float(r), format_float(v));
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["name", "value"]);
        t.push(vec!["a,b".into(), 0.5.into()]);
        t.push(vec!["c".into(), Cell::Missing]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf, Some("mu=3e-5")).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# mu=3e-5\nname,value\n\"a,b\",0.5\nc,\n"
        );
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(["name", "value"]);
        t.push(vec!["c".into(), Cell::Missing]);
        t.push(vec!["d".into(), (1.0 / 3.0).into()]);
        let mut buf = Vec::new();
        t.write_json(&mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[0]["value"], Value::Null);
        assert_eq!(v[1]["value"].as_f64().unwrap(), 0.333333333333);
    }

    #[test]
    fn params_line() {
        let p = SystemParams::with_defaults(0.75, 0.0024);
        assert_eq!(
            params_comment(&p),
            "mu=3e-5 q1=0.75 a2=0.0024 c_d=299792458"
        );
    }
}
