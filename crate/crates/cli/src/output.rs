//! Output documents: a list of named fields followed by an optional table,
//! rendered as JSON, TSV or markdown.

use clap::ValueEnum;
use modcone_core::rational::{render, to_decimal};
use modcone_core::Rational;
use serde_json::{Map, Value};

/// Places after the decimal point in approximate renderings.
pub const DECIMAL_DIGITS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Markdown,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Bool(bool),
    /// Exact value; rendered with a decimal companion.
    Num(Rational),
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Num(q) => render(q),
        }
    }

    fn decimal(&self) -> Option<String> {
        match self {
            Cell::Num(q) => Some(to_decimal(q, DECIMAL_DIGITS)),
            _ => None,
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::from(*b),
            Cell::Num(q) => Value::from(render(q)),
        }
    }
}

impl From<Rational> for Cell {
    fn from(q: Rational) -> Cell {
        Cell::Num(q)
    }
}

impl From<&Rational> for Cell {
    fn from(q: &Rational) -> Cell {
        Cell::Num(q.clone())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Cell {
        Cell::Bool(b)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Cell {
        Cell::Int(i)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Cell {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Cell {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Cell {
        Cell::Text(s)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Columns holding at least one exact number get a `_decimal` companion.
    fn numeric_columns(&self) -> Vec<bool> {
        (0..self.columns.len())
            .map(|c| self.rows.iter().any(|r| matches!(r[c], Cell::Num(_))))
            .collect()
    }

    fn flat(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let numeric = self.numeric_columns();
        let mut header = Vec::new();
        for (c, name) in self.columns.iter().enumerate() {
            header.push(name.clone());
            if numeric[c] {
                header.push(format!("{name}_decimal"));
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = Vec::new();
                for (c, cell) in r.iter().enumerate() {
                    out.push(cell.plain());
                    if numeric[c] {
                        out.push(cell.decimal().unwrap_or_default());
                    }
                }
                out
            })
            .collect();
        (header, rows)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Doc {
    pub fields: Vec<(String, Cell)>,
    pub table: Option<Table>,
    pub notes: Vec<String>,
}

impl Doc {
    pub fn new() -> Doc {
        Doc::default()
    }

    pub fn field(mut self, name: &str, value: impl Into<Cell>) -> Doc {
        self.fields.push((name.to_string(), value.into()));
        self
    }

    pub fn with_table(mut self, table: Table) -> Doc {
        self.table = Some(table);
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Doc {
        self.notes.push(text.into());
        self
    }

    fn flat_fields(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (k, v) in &self.fields {
            out.push((k.clone(), v.plain()));
            if let Some(d) = v.decimal() {
                out.push((format!("{k}_decimal"), d));
            }
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.render_json(),
            Format::Tsv => self.render_tsv(),
            Format::Markdown => self.render_markdown(),
        }
    }

    fn render_json(&self) -> String {
        let mut obj = Map::new();
        for (k, v) in &self.fields {
            obj.insert(k.clone(), v.json());
            if let Some(d) = v.decimal() {
                obj.insert(format!("{k}_decimal"), Value::from(d));
            }
        }
        if let Some(t) = &self.table {
            let numeric = t.numeric_columns();
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| {
                    let mut row = Map::new();
                    for (c, cell) in r.iter().enumerate() {
                        row.insert(t.columns[c].clone(), cell.json());
                        if numeric[c] {
                            let d = cell.decimal().map(Value::from).unwrap_or(Value::Null);
                            row.insert(format!("{}_decimal", t.columns[c]), d);
                        }
                    }
                    Value::Object(row)
                })
                .collect();
            obj.insert("rows".into(), Value::Array(rows));
        }
        if !self.notes.is_empty() {
            obj.insert("notes".into(), Value::from(self.notes.clone()));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("output serializes");
        s.push('\n');
        s
    }

    fn render_tsv(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.flat_fields() {
            s.push_str(&format!("{k}\t{v}\n"));
        }
        if let Some(t) = &self.table {
            if !self.fields.is_empty() {
                s.push('\n');
            }
            let (header, rows) = t.flat();
            s.push_str(&header.join("\t"));
            s.push('\n');
            for r in rows {
                s.push_str(&r.join("\t"));
                s.push('\n');
            }
        }
        for n in &self.notes {
            s.push_str(&format!("# {n}\n"));
        }
        s
    }

    fn render_markdown(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.flat_fields() {
            s.push_str(&format!("- **{k}**: {v}\n"));
        }
        if let Some(t) = &self.table {
            if !self.fields.is_empty() {
                s.push('\n');
            }
            let (header, rows) = t.flat();
            s.push_str(&format!("| {} |\n", header.join(" | ")));
            s.push_str(&format!("|{}\n", "---|".repeat(header.len())));
            for r in rows {
                s.push_str(&format!("| {} |\n", r.join(" | ")));
            }
        }
        if !self.notes.is_empty() {
            s.push('\n');
            for n in &self.notes {
                s.push_str(&format!("{n}\n"));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use modcone_core::rational::rat;

    fn sample() -> Doc {
        let mut t = Table::new(&["s", "slope"]);
        t.push(vec![Cell::Int(2), Cell::Num(rat(1665, 256))]);
        t.push(vec![Cell::Int(3), "SKIPPED".into()]);
        Doc::new().field("g", 22u32).field("slope", rat(7, 1)).with_table(t)
    }

    #[test]
    fn tsv_layout() {
        let s = sample().render(Format::Tsv);
        assert_eq!(s, "g\t22\nslope\t7\nslope_decimal\t7\n\ns\tslope\tslope_decimal\n2\t1665/256\t6.50390625\n3\tSKIPPED\t\n");
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        assert_eq!(v["rows"][0]["slope"], "1665/256");
        assert_eq!(v["rows"][0]["slope_decimal"], "6.50390625");
        assert_eq!(v["rows"][1]["slope_decimal"], Value::Null);
        assert_eq!(v["g"], 22);
    }

    #[test]
    fn markdown_layout() {
        let s = sample().render(Format::Markdown);
        assert!(s.contains("| s | slope | slope_decimal |\n|---|---|---|\n"));
        assert!(s.starts_with("- **g**: 22\n"));
    }
}
