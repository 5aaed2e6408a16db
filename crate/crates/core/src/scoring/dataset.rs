use crate::error::{invalid, BccdError, Result};
use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

/// Columns of discrete categorical observations with per-variable arity.
///
/// Values are dense integer codes `0..arity`. Arities reflect the declared
/// category set (from a schema, or inferred once from the full dataset at
/// load), which may exceed the observed distinct values; they are never
/// re-inferred per subset, so the same family always scores identically.
#[derive(Debug, Clone)]
pub struct Dataset {
    names: Vec<String>,
    arities: Vec<usize>,
    /// category token for each (variable, code), in code order
    categories: Vec<Vec<String>>,
    /// row-major codes, rows.len() == n_rows * n_vars
    values: Vec<u8>,
    n_rows: usize,
}

impl Dataset {
    /// Builds a dataset from coded values. Arity is clamped to at least 2
    /// per variable (a constant column still encodes a binary category set).
    pub fn from_codes(names: Vec<String>, arities: Vec<usize>, rows: &[Vec<u8>]) -> Result<Self> {
        if names.len() != arities.len() {
            return Err(invalid("names and arities must align"));
        }
        let arities: Vec<usize> = arities.iter().map(|&a| a.max(2)).collect();
        if arities.iter().any(|&a| a > 256) {
            return Err(invalid("arity above 256 unsupported"));
        }
        let k = names.len();
        let mut values = Vec::with_capacity(rows.len() * k);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(invalid(format!("row {r} has {} cells, expected {k}", row.len())));
            }
            for (v, &code) in row.iter().enumerate() {
                if code as usize >= arities[v] {
                    return Err(invalid(format!(
                        "row {r}: code {code} exceeds arity {} of '{}'",
                        arities[v], names[v]
                    )));
                }
            }
            values.extend_from_slice(row);
        }
        let categories = arities
            .iter()
            .map(|&a| (0..a).map(|c| c.to_string()).collect())
            .collect();
        Ok(Dataset { names, arities, categories, values, n_rows: rows.len() })
    }

    /// Parses CSV text: first line is the header with variable names; cells
    /// are category tokens mapped to codes in first-appearance order. An
    /// optional schema pins category sets explicitly (tokens not listed
    /// there are rejected).
    pub fn from_csv_reader(reader: impl Read, schema: Option<&Schema>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .flexible(false)
            .from_reader(reader);
        let names: Vec<String> = rdr
            .headers()
            .map_err(|e| csv_err(&e))?
            .iter()
            .map(|s| s.to_string())
            .collect();
        if names.is_empty() {
            return Err(BccdError::Parse { line: 1, msg: "empty header".into() });
        }
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if n.is_empty() || !seen.insert(n.clone()) {
                return Err(BccdError::Parse { line: 1, msg: format!("bad or duplicate column '{n}'") });
            }
        }
        let k = names.len();
        let mut token_maps: Vec<HashMap<String, u8>> = vec![HashMap::new(); k];
        let mut categories: Vec<Vec<String>> = vec![Vec::new(); k];
        if let Some(schema) = schema {
            for (v, name) in names.iter().enumerate() {
                if let Some(tokens) = schema.categories.get(name) {
                    for t in tokens {
                        let code = categories[v].len() as u8;
                        if token_maps[v].insert(t.clone(), code).is_some() {
                            return Err(invalid(format!("schema for '{name}' repeats token '{t}'")));
                        }
                        categories[v].push(t.clone());
                    }
                }
            }
        }
        let pinned: Vec<bool> = names
            .iter()
            .map(|n| schema.map_or(false, |s| s.categories.contains_key(n)))
            .collect();

        let mut values = Vec::new();
        let mut n_rows = 0usize;
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| csv_err(&e))?;
            let line = i + 2;
            if rec.len() != k {
                return Err(BccdError::Parse {
                    line,
                    msg: format!("expected {k} cells, got {}", rec.len()),
                });
            }
            for (v, cell) in rec.iter().enumerate() {
                if cell.is_empty() {
                    return Err(BccdError::Parse {
                        line,
                        msg: format!("missing value in column '{}'", names[v]),
                    });
                }
                let code = match token_maps[v].get(cell) {
                    Some(&c) => c,
                    None if pinned[v] => {
                        return Err(BccdError::Parse {
                            line,
                            msg: format!("token '{cell}' not in pinned categories of '{}'", names[v]),
                        })
                    }
                    None => {
                        let next = categories[v].len();
                        if next >= 256 {
                            return Err(invalid(format!("more than 256 categories in '{}'", names[v])));
                        }
                        token_maps[v].insert(cell.to_string(), next as u8);
                        categories[v].push(cell.to_string());
                        next as u8
                    }
                };
                values.push(code);
            }
            n_rows += 1;
        }
        // arity: declared category count, at least 2
        let arities: Vec<usize> = categories.iter().map(|c| c.len().max(2)).collect();
        for cats in &mut categories {
            let mut filler = 0;
            while cats.len() < 2 {
                // invent distinct placeholder tokens for never-observed codes
                let tok = format!("_unused{filler}");
                filler += 1;
                if !cats.contains(&tok) {
                    cats.push(tok);
                }
            }
        }
        Ok(Dataset { names, arities, categories, values, n_rows })
    }

    pub fn from_csv_path(path: impl AsRef<Path>, schema: Option<&Schema>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(std::io::BufReader::new(file), schema)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.names.join(",");
        out.push('\n');
        for r in 0..self.n_rows {
            let row: Vec<&str> = (0..self.var_count())
                .map(|v| self.categories[v][self.value(r, v) as usize].as_str())
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    #[inline]
    pub fn var_count(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn row_count(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn arity(&self, v: usize) -> usize {
        self.arities[v]
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn categories(&self, v: usize) -> &[String] {
        &self.categories[v]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn value(&self, row: usize, var: usize) -> u8 {
        self.values[row * self.names.len() + var]
    }

    /// Column projection preserving row count. Order of `keep` is respected.
    pub fn select_columns(&self, keep: &[usize]) -> Result<Dataset> {
        if keep.is_empty() {
            return Err(invalid("cannot drop every column"));
        }
        let mut uniq = std::collections::HashSet::new();
        for &v in keep {
            if v >= self.var_count() {
                return Err(invalid(format!("column {v} out of range")));
            }
            if !uniq.insert(v) {
                return Err(invalid(format!("column {v} repeated")));
            }
        }
        let names = keep.iter().map(|&v| self.names[v].clone()).collect();
        let arities = keep.iter().map(|&v| self.arities[v]).collect();
        let categories = keep.iter().map(|&v| self.categories[v].clone()).collect();
        let mut values = Vec::with_capacity(self.n_rows * keep.len());
        for r in 0..self.n_rows {
            for &v in keep {
                values.push(self.value(r, v));
            }
        }
        Ok(Dataset { names, arities, categories, values, n_rows: self.n_rows })
    }

    /// Drops the named columns (simgen hides confounders this way).
    pub fn drop_columns(&self, hidden: &[usize]) -> Result<Dataset> {
        let keep: Vec<usize> = (0..self.var_count()).filter(|v| !hidden.contains(v)).collect();
        self.select_columns(&keep)
    }
}

fn csv_err(e: &csv::Error) -> BccdError {
    let line = match e.position() {
        Some(p) => p.line() as usize,
        None => 0,
    };
    BccdError::Parse { line, msg: e.to_string() }
}

/// Sidecar schema pinning category sets: one line per variable,
/// `name: tok1,tok2,...`, `#` comments allowed.
#[derive(Debug, Clone, Default)]
pub struct Schema {
    pub categories: HashMap<String, Vec<String>>,
}

impl Schema {
    pub fn parse(text: &str) -> Result<Schema> {
        let mut categories = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (name, rest) = line.split_once(':').ok_or(BccdError::Parse {
                line: idx + 1,
                msg: "expected 'name: tok1,tok2,...'".into(),
            })?;
            let tokens: Vec<String> =
                rest.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect();
            if tokens.len() < 2 {
                return Err(BccdError::Parse {
                    line: idx + 1,
                    msg: format!("'{}' needs at least two categories", name.trim()),
                });
            }
            if categories.insert(name.trim().to_string(), tokens).is_some() {
                return Err(BccdError::Parse {
                    line: idx + 1,
                    msg: format!("duplicate schema entry '{}'", name.trim()),
                });
            }
        }
        Ok(Schema { categories })
    }

    pub fn render(&self) -> String {
        let mut names: Vec<&String> = self.categories.keys().collect();
        names.sort();
        let mut out = String::new();
        for name in names {
            out.push_str(&format!("{name}: {}\n", self.categories[name].join(",")));
        }
        out
    }

    pub fn of_dataset(ds: &Dataset) -> Schema {
        let categories = ds
            .names()
            .iter()
            .enumerate()
            .map(|(v, n)| (n.clone(), ds.categories(v).to_vec()))
            .collect();
        Schema { categories }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_tokens_coded_in_first_appearance_order() {
        let csv = "a,b\nyes,low\nno,high\nyes,low\n";
        let ds = Dataset::from_csv_reader(csv.as_bytes(), None).unwrap();
        assert_eq!(ds.var_count(), 2);
        assert_eq!(ds.row_count(), 3);
        assert_eq!(ds.value(0, 0), 0); // yes
        assert_eq!(ds.value(1, 0), 1); // no
        assert_eq!(ds.arity(0), 2);
        assert_eq!(ds.categories(1), &["low".to_string(), "high".to_string()]);
    }

    #[test]
    fn schema_pins_arity_beyond_observed() {
        let schema = Schema::parse("b: low,mid,high\n").unwrap();
        let csv = "a,b\nyes,low\nno,low\n";
        let ds = Dataset::from_csv_reader(csv.as_bytes(), Some(&schema)).unwrap();
        assert_eq!(ds.arity(1), 3);
        assert_eq!(ds.value(0, 1), 0);
        // unknown token under a pinned schema is rejected
        let bad = "a,b\nyes,verylow\n";
        assert!(Dataset::from_csv_reader(bad.as_bytes(), Some(&schema)).is_err());
    }

    #[test]
    fn missing_values_rejected_with_line_numbers() {
        let csv = "a,b\nyes,low\n,high\n";
        let err = Dataset::from_csv_reader(csv.as_bytes(), None).unwrap_err();
        match err {
            BccdError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn constant_column_clamps_to_binary_arity() {
        let csv = "a\nx\nx\n";
        let ds = Dataset::from_csv_reader(csv.as_bytes(), None).unwrap();
        assert_eq!(ds.arity(0), 2);
    }

    #[test]
    fn column_ops() {
        let ds = Dataset::from_codes(
            vec!["a".into(), "b".into(), "c".into()],
            vec![2, 2, 3],
            &[vec![0, 1, 2], vec![1, 0, 0]],
        )
        .unwrap();
        let d = ds.drop_columns(&[1]).unwrap();
        assert_eq!(d.var_count(), 2);
        assert_eq!(d.names(), &["a".to_string(), "c".to_string()]);
        assert_eq!(d.value(0, 1), 2);
        assert!(ds.drop_columns(&[0, 1, 2]).is_err());
    }

    #[test]
    fn csv_roundtrip_is_fixed_point() {
        let csv = "a,b\nyes,low\nno,high\n";
        let ds = Dataset::from_csv_reader(csv.as_bytes(), None).unwrap();
        let once = ds.to_csv();
        let again = Dataset::from_csv_reader(once.as_bytes(), None).unwrap().to_csv();
        assert_eq!(once, again);
    }
}
