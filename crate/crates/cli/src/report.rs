//! Deterministic report emission.  Every command assembles one `Report`:
//! parameter echoes, a header row, data rows, and footer entries.  TSV mode
//! prints echoes and footers as `#`-prefixed lines around the table; `--json`
//! prints the same content as a single structured document.  Iteration orders
//! are fixed by construction, so identical inputs give identical bytes.

use serde_json::{Map, Value};

pub struct Report {
    command: &'static str,
    meta: Vec<(String, Value)>,
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
    footers: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, meta: Vec::new(), columns: Vec::new(), rows: Vec::new(), footers: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn columns<S: Into<String>, I: IntoIterator<Item = S>>(&mut self, cols: I) {
        self.columns = cols.into_iter().map(Into::into).collect();
    }

    pub fn row(&mut self, cells: Vec<Value>) {
        debug_assert_eq!(cells.len(), self.columns.len(), "row width mismatch");
        self.rows.push(cells);
    }

    pub fn footer(&mut self, key: &str, value: impl Into<Value>) {
        self.footers.push((key.to_string(), value.into()));
    }

    pub fn print(&self, json_mode: bool) {
        if json_mode {
            println!("{}", serde_json::to_string_pretty(&self.to_json()).expect("serializable"));
        } else {
            self.print_tsv();
        }
    }

    fn print_tsv(&self) {
        println!("# command\t{}", self.command);
        for (key, value) in &self.meta {
            println!("# {key}\t{}", cell_text(value));
        }
        println!("{}", self.columns.join("\t"));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(cell_text).collect();
            println!("{}", line.join("\t"));
        }
        for (key, value) in &self.footers {
            println!("# {key}\t{}", cell_text(value));
        }
    }

    fn to_json(&self) -> Value {
        let mut top = Map::new();
        top.insert("command".into(), Value::String(self.command.into()));
        let mut params = Map::new();
        for (key, value) in &self.meta {
            params.insert(key.clone(), value.clone());
        }
        top.insert("params".into(), Value::Object(params));
        top.insert(
            "columns".into(),
            Value::Array(self.columns.iter().map(|c| Value::String(c.clone())).collect()),
        );
        top.insert(
            "rows".into(),
            Value::Array(self.rows.iter().map(|r| Value::Array(r.clone())).collect()),
        );
        let mut footer = Map::new();
        for (key, value) in &self.footers {
            footer.insert(key.clone(), value.clone());
        }
        top.insert("footer".into(), Value::Object(footer));
        Value::Object(top)
    }
}

/// TSV cell text: `null` prints as `-`, everything else in its plain form.
fn cell_text(value: &Value) -> String {
    match value {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `Option<T> → Value` with `None` as `null` (printed `-` in TSV).
pub fn opt<T: Into<Value>>(value: Option<T>) -> Value {
    value.map_or(Value::Null, Into::into)
}
