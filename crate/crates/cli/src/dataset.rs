//! Two-group CSV ingestion.
//!
//! Format: UTF-8, header `value,group`, one `value,group` row per line with
//! a decimal-point real and a 0/1 group flag. Group 0 is A (e.g.
//! non-smokers), group 1 is B.

use std::path::Path;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct AbDataset {
    pub group_a: Vec<f64>,
    pub group_b: Vec<f64>,
}

impl AbDataset {
    pub fn rows(&self) -> usize {
        self.group_a.len() + self.group_b.len()
    }
}

pub fn load_ab_dataset(path: &Path) -> Result<AbDataset, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("reading {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "value,group" => {}
        _ => {
            return Err(CliError::Usage(format!(
                "{}: expected header 'value,group'",
                path.display()
            )))
        }
    }
    let mut group_a = Vec::new();
    let mut group_b = Vec::new();
    for (idx, line) in lines {
        let row = idx + 1; // 1-based line number
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (value_text, group_text) = line.split_once(',').ok_or_else(|| {
            CliError::Usage(format!("{}:{row}: expected 'value,group'", path.display()))
        })?;
        let value: f64 = value_text.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{}:{row}: '{value_text}' is not a number",
                path.display()
            ))
        })?;
        if !value.is_finite() {
            return Err(CliError::Usage(format!(
                "{}:{row}: value must be finite",
                path.display()
            )));
        }
        match group_text.trim() {
            "0" => group_a.push(value),
            "1" => group_b.push(value),
            other => {
                return Err(CliError::Usage(format!(
                    "{}:{row}: group flag must be 0 or 1, got '{other}'",
                    path.display()
                )))
            }
        }
    }
    if group_a.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: group 0 has no rows",
            path.display()
        )));
    }
    if group_b.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: group 1 has no rows",
            path.display()
        )));
    }
    Ok(AbDataset { group_a, group_b })
}
