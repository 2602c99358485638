//! A small column-oriented result table: metadata key/value pairs, column
//! names and numeric rows.  Emitters in the CLI turn these into CSV or JSON;
//! keeping the type dumb here keeps the numeric crate free of format code.

/// Numeric result table with ordered metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Ordered key/value pairs describing how the rows were produced.
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Self {
        Table {
            meta: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_meta<K: Into<String>, V: Into<String>>(&mut self, key: K, value: V) {
        self.meta.push((key.into(), value.into()));
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width {} does not match {} columns",
            row.len(),
            self.columns.len()
        );
        self.rows.push(row);
    }

    /// Index of a named column, panicking on a typo to fail tests loudly.
    pub fn column(&self, name: &str) -> usize {
        self.columns
            .iter()
            .position(|c| c == name)
            .unwrap_or_else(|| panic!("no column {name:?} in {:?}", self.columns))
    }

    /// All values of a named column.
    pub fn column_values(&self, name: &str) -> Vec<f64> {
        let idx = self.column(name);
        self.rows.iter().map(|r| r[idx]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_and_read_back() {
        let mut t = Table::new(vec!["theta", "rate"]);
        t.push_meta("family", "pareto");
        t.push_row(vec![1.0, 0.0]);
        t.push_row(vec![2.0, 0.25]);
        assert_eq!(t.column("rate"), 1);
        assert_eq!(t.column_values("theta"), vec![1.0, 2.0]);
    }

    #[test]
    #[should_panic(expected = "row width")]
    fn mismatched_row_panics() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push_row(vec![1.0]);
    }
}
