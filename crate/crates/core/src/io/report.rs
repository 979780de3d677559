//! Task reports: exact values with decimal renderings, emitted either as CSV
//! (machine block) or as aligned text (human block).

use crate::rational::{decimal, format_rational, Rational};
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Text(String),
    Int(i128),
    Exact(Rational),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<Rational> for Cell {
    fn from(x: Rational) -> Self {
        Cell::Exact(x)
    }
}

impl From<&Rational> for Cell {
    fn from(x: &Rational) -> Self {
        Cell::Exact(x.clone())
    }
}

impl From<i128> for Cell {
    fn from(x: i128) -> Self {
        Cell::Int(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i128)
    }
}

/// One table of a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Section {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Two-column `quantity, value` table.
    pub fn quantities(title: impl Into<String>) -> Self {
        Self::new(title, &["quantity", "value"])
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> &mut Self {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
        self
    }

    pub fn quantity(&mut self, name: &str, value: impl Into<Cell>) -> &mut Self {
        self.row(vec![name.into(), value.into()])
    }

    /// Looks up the value of a `quantity` row.
    pub fn get(&self, name: &str) -> Option<&Cell> {
        self.rows
            .iter()
            .find(|r| matches!(&r[0], Cell::Text(t) if t == name))
            .map(|r| &r[1])
    }

    fn is_exact_column(&self, j: usize) -> bool {
        self.rows.iter().any(|r| matches!(r[j], Cell::Exact(_)))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Table,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Report {
    pub fn push(&mut self, s: Section) {
        self.sections.push(s);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Table => self.to_table(),
        }
    }

    /// Exact columns are followed by a `<name>_decimal` column.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for s in &self.sections {
            writeln!(out, "# {}", s.title).unwrap();
            let exact: Vec<bool> = (0..s.columns.len()).map(|j| s.is_exact_column(j)).collect();
            let mut header = Vec::new();
            for (j, c) in s.columns.iter().enumerate() {
                header.push(csv_field(c));
                if exact[j] {
                    header.push(csv_field(&format!("{c}_decimal")));
                }
            }
            writeln!(out, "{}", header.join(",")).unwrap();
            for row in &s.rows {
                let mut fields = Vec::new();
                for (j, cell) in row.iter().enumerate() {
                    match cell {
                        Cell::Text(t) => fields.push(csv_field(t)),
                        Cell::Int(i) => fields.push(i.to_string()),
                        Cell::Exact(x) => {
                            fields.push(format_rational(x));
                            fields.push(decimal(x));
                        }
                    }
                    if exact[j] && !matches!(cell, Cell::Exact(_)) {
                        fields.push(String::new());
                    }
                }
                writeln!(out, "{}", fields.join(",")).unwrap();
            }
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            writeln!(out, "== {} ==", s.title).unwrap();
            let rendered: Vec<Vec<String>> = s
                .rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|c| match c {
                            Cell::Text(t) => t.clone(),
                            Cell::Int(v) => v.to_string(),
                            Cell::Exact(x) if x.is_integer() => format_rational(x),
                            Cell::Exact(x) => format!("{}  ≈ {}", format_rational(x), decimal(x)),
                        })
                        .collect()
                })
                .collect();
            let widths: Vec<usize> = (0..s.columns.len())
                .map(|j| {
                    rendered
                        .iter()
                        .map(|r| r[j].chars().count())
                        .chain([s.columns[j].chars().count()])
                        .max()
                        .unwrap()
                })
                .collect();
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(out, "{}", line(&s.columns)).unwrap();
            for r in &rendered {
                writeln!(out, "{}", line(r)).unwrap();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn sample() -> Report {
        let mut s = Section::quantities("chow tent r=2");
        s.quantity("chow", q(1, 6)).quantity("r", 2u64).quantity("whole", qi(3));
        Report { sections: vec![s] }
    }

    #[test]
    fn csv_keeps_exact_values() {
        let csv = sample().to_csv();
        assert_eq!(
            csv,
            "# chow tent r=2\nquantity,value,value_decimal\nchow,1/6,0.166666666666666\nr,2,\nwhole,3,3\n"
        );
    }

    #[test]
    fn table_is_aligned() {
        let t = sample().to_table();
        assert!(t.contains("chow      1/6  ≈ 0.166666666666666"));
        assert!(t.starts_with("== chow tent r=2 =="));
    }

    #[test]
    fn lookup() {
        let r = sample();
        assert_eq!(r.sections[0].get("chow"), Some(&Cell::Exact(q(1, 6))));
        assert_eq!(r.sections[0].get("missing"), None);
    }
}
