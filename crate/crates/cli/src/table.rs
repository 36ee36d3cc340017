use std::fmt::Write as _;

/// Column-oriented report with pre-formatted numeric cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// One JSON array per column; empty cells become `null`.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        for (c, name) in self.columns.iter().enumerate() {
            let cells: Vec<&str> =
                self.rows.iter().map(|r| if r[c].is_empty() { "null" } else { r[c].as_str() }).collect();
            let sep = if c + 1 == self.columns.len() { "" } else { "," };
            let _ = writeln!(out, "  \"{name}\": [{}]{sep}", cells.join(", "));
        }
        out.push_str("}\n");
        out
    }
}
