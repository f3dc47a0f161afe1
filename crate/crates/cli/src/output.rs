//! Report and table writers. Log-space columns carry a `log10:` prefix.

use std::io::Write;

use carleman_core::constants::LogNumber;
use carleman_core::verify::{Param, Ratio};
use carleman_core::VerificationReport;

/// Above this a value is shown as a power of ten.
pub const PLAIN_LIMIT_LOG10: f64 = 300.0;

/// `1.234568e2`, or `10^1234.567890` past [`PLAIN_LIMIT_LOG10`].
pub fn human(x: LogNumber) -> String {
    if x.is_zero() {
        return "0".into();
    }
    match x.to_f64() {
        Ok(v) if x.log10().abs() <= PLAIN_LIMIT_LOG10 => format!("{v:.6e}"),
        _ => format!("10^{:.6}", x.log10()),
    }
}

/// Pretty JSON array of reports with a trailing newline.
pub fn write_json(reports: &[VerificationReport], out: &mut dyn Write) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, reports)?;
    out.write_all(b"\n")
}

pub const REPORT_COLUMNS: [&str; 14] = [
    "estimate_id",
    "status",
    "expectation",
    "pass",
    "lhs",
    "rhs",
    "log10:rhs",
    "ratio",
    "log10:ratio",
    "samples",
    "quadrature_level",
    "params",
    "notes",
    "error",
];

fn param_text(p: &Param) -> String {
    match p {
        Param::Int(i) => i.to_string(),
        Param::Num(x) => x.to_string(),
        Param::Text(s) => s.clone(),
    }
}

/// One row per report. `ratio` is empty when only the log gap is known;
/// `log10:ratio` is `log10(lhs/rhs)` and empty for `lhs = 0`.
pub fn write_csv(reports: &[VerificationReport], out: &mut dyn Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_COLUMNS)?;
    for r in reports {
        let finite_rhs = r.rhs.to_f64().ok().filter(|_| !r.rhs.is_zero());
        let (ratio, log_ratio) = match r.ratio {
            Ratio::Linear(x) if x > 0.0 => (format!("{x:e}"), format!("{:e}", x.log10())),
            Ratio::Linear(x) => (format!("{x:e}"), String::new()),
            Ratio::LogGap(g) => (String::new(), format!("{:e}", -g)),
        };
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={}", param_text(v))).collect();
        w.write_record([
            r.estimate_id.clone(),
            r.status().to_string(),
            format!("{:?}", r.expectation).to_lowercase(),
            r.pass.to_string(),
            format!("{:e}", r.lhs),
            finite_rhs.map(|v| format!("{v:e}")).unwrap_or_default(),
            if r.rhs.is_zero() { String::new() } else { format!("{:e}", r.rhs.log10()) },
            ratio,
            log_ratio,
            r.samples.to_string(),
            r.quadrature_level.map(|l| l.to_string()).unwrap_or_default(),
            params.join(";"),
            r.notes.join("; "),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// A cell of a constants table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    /// Log-space constant: `log10:` column in CSV, [`human`] in tables.
    Log(LogNumber),
    Num(f64),
    Int(i64),
    Flag(bool),
    Empty,
}

impl Cell {
    fn csv(self) -> String {
        match self {
            Self::Log(x) if x.is_zero() => "-inf".into(),
            Self::Log(x) => format!("{:e}", x.log10()),
            Self::Num(x) => x.to_string(),
            Self::Int(i) => i.to_string(),
            Self::Flag(b) => b.to_string(),
            Self::Empty => String::new(),
        }
    }

    fn human(self) -> String {
        match self {
            Self::Log(x) => human(x),
            Self::Num(x) => format!("{x}"),
            Self::Int(i) => i.to_string(),
            Self::Flag(b) => b.to_string(),
            Self::Empty => "-".into(),
        }
    }
}

/// Named columns, some log-space, with a trailing per-row `error`.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<(String, bool)>,
    pub rows: Vec<(Vec<Cell>, Option<String>)>,
}

impl Table {
    pub fn new(columns: &[(&str, bool)]) -> Self {
        Self { columns: columns.iter().map(|(n, l)| (n.to_string(), *l)).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, cells: Vec<Cell>, error: Option<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push((cells, error));
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|(n, _)| n == name)
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> =
            self.columns.iter().map(|(n, log)| if *log { format!("log10:{n}") } else { n.clone() }).collect();
        header.push("error".into());
        w.write_record(&header)?;
        for (cells, error) in &self.rows {
            let mut rec: Vec<String> = cells.iter().map(|c| c.csv()).collect();
            rec.push(error.clone().unwrap_or_default());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Aligned plain-text table; rows with an error show it instead of values.
    pub fn write_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut grid: Vec<Vec<String>> = vec![self.columns.iter().map(|(n, _)| n.clone()).collect()];
        for (cells, error) in &self.rows {
            let mut line: Vec<String> = cells.iter().map(|c| c.human()).collect();
            if let Some(e) = error {
                let first_value = cells.iter().position(|c| *c == Cell::Empty).unwrap_or(cells.len());
                line.truncate(first_value);
                line.push(format!("error: {e}"));
            }
            grid.push(line);
        }
        let width: Vec<usize> = (0..self.columns.len())
            .map(|i| grid.iter().filter_map(|l| l.get(i)).map(|s| s.chars().count()).max().unwrap_or(0))
            .collect();
        for line in grid {
            let cells: Vec<String> = line
                .iter()
                .enumerate()
                .map(|(i, s)| match width.get(i) {
                    Some(w) if i + 1 < line.len() => format!("{s:<w$}"),
                    _ => s.clone(),
                })
                .collect();
            writeln!(out, "{}", cells.join("  "))?;
        }
        Ok(())
    }
}
