//! Tabular output: CSV and JSON with a fixed column layout and numbers
//! rounded to 12 significant digits.

use std::io;

use serde::{Deserialize, Serialize};

use crate::assembly::ScanResult;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `v` with 12 significant digits, `%g` style: fixed notation for
/// decimal exponents in `[-5, 12)`, scientific otherwise, trailing zeros
/// dropped.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Value as it appears after a print/parse cycle at 12 digits.
pub fn round_sig(v: f64) -> f64 {
    format_sig(v).parse().unwrap_or(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    /// `x_um, alpha_sq, W_indis, W_inter, W_dist, W_j<k> … W_j0`, then one
    /// `P_<m>_<n>` column per requested event.
    pub fn from_scan(scan: &ScanResult) -> Self {
        let k = scan.photons_per_mode;
        let mut columns: Vec<String> = ["x_um", "alpha_sq", "W_indis", "W_inter", "W_dist"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        columns.extend((0..=k).rev().map(|j| format!("W_j{j}")));
        columns.extend(scan.events.iter().map(|e| format!("P_{}_{}", e.m, e.n)));

        let rows = scan
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![r.x * 1e6, r.alpha_sq, r.indis, r.inter, r.dist];
                row.extend(&r.weights);
                row.extend(&r.probs);
                row
            })
            .collect();
        Self { columns, rows }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_sig(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rounded = Table {
            columns: self.columns.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&v| round_sig(v)).collect())
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&rounded).expect("finite table serializes");
        s.push('\n');
        s
    }

    pub fn from_json(reader: impl io::Read) -> serde_json::Result<Self> {
        serde_json::from_reader(reader)
    }
}
