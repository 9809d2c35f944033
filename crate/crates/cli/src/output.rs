use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

/// Pretty JSON with keys sorted at every level.
pub fn json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// Flattens a scalar or short list into one cell.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            let parts: Vec<String> = items.iter().map(cell).collect();
            if items.iter().all(Value::is_number) {
                format!("({})", parts.join(","))
            } else {
                parts.join(";")
            }
        }
        Value::Object(map) if map.values().all(|i| !i.is_array() && !i.is_object()) => {
            let parts: Vec<String> = map.iter().map(|(k, v)| format!("{k}={}", cell(v))).collect();
            parts.join(";")
        }
        other => other.to_string(),
    }
}

/// One CSV row per object, columns the sorted union of keys.
pub fn csv(rows: &[Value]) -> String {
    let mut keys: Vec<String> = rows
        .iter()
        .filter_map(Value::as_object)
        .flat_map(|m| m.keys().cloned())
        .collect();
    keys.sort();
    keys.dedup();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&keys).expect("csv header");
    for row in rows {
        let record: Vec<String> = keys.iter().map(|k| row.get(k).map(cell).unwrap_or_default()).collect();
        w.write_record(&record).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8")
}

/// Left-aligned columns separated by two spaces.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

/// Table rows from the listed keys of each object.
pub fn table_from(headers: &[&str], rows: &[Value]) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| headers.iter().map(|h| r.get(*h).map(cell).unwrap_or_default()).collect())
        .collect();
    table(headers, &body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn cells_flatten() {
        assert_eq!(cell(&json!([1, 2])), "(1,2)");
        assert_eq!(cell(&json!({"q": 2})), "q=2");
        assert_eq!(cell(&json!(null)), "");
        assert_eq!(cell(&json!("5/2")), "5/2");
    }

    #[test]
    fn csv_quotes_and_unions_keys() {
        let rows = [json!({"b": "x,y", "a": 1}), json!({"a": 2, "c": true})];
        assert_eq!(csv(&rows), "a,b,c\n1,\"x,y\",\n2,,true\n");
    }

    #[test]
    fn table_aligns() {
        let t = table(&["a", "bb"], &[vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, "a    bb\nxyz  1\n");
    }
}
