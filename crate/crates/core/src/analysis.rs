//! Descriptive statistics over labeled pairs: contingency tables with
//! notional percentages, Pearson residuals for association plots, and binned
//! notional-rate profiles over log distance or document position.

use std::collections::BTreeMap;

use crate::conll::Genre;
use crate::error::{Error, Result};
use crate::extract::Label;
use crate::features::FeatureTable;

#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyRow {
    pub category: String,
    pub notional: u64,
    pub strict: u64,
}

impl ContingencyRow {
    pub fn total(&self) -> u64 {
        self.notional + self.strict
    }

    /// Percent notional, two decimals.
    pub fn pct_notional(&self) -> f64 {
        if self.total() == 0 {
            return 0.0;
        }
        let raw = 100.0 * self.notional as f64 / self.total() as f64;
        (raw * 100.0).round() / 100.0
    }

    /// Unrounded percent notional.
    pub fn pct_notional_raw(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            100.0 * self.notional as f64 / self.total() as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    pub rows: Vec<ContingencyRow>,
}

impl ContingencyTable {
    /// Tabulate (category, label) observations. Rows are sorted by category.
    pub fn from_labeled<I, S>(observations: I) -> ContingencyTable
    where
        I: IntoIterator<Item = (S, Label)>,
        S: Into<String>,
    {
        let mut acc: BTreeMap<String, (u64, u64)> = BTreeMap::new();
        for (category, label) in observations {
            let entry = acc.entry(category.into()).or_default();
            match label {
                Label::Notional => entry.0 += 1,
                Label::Strict => entry.1 += 1,
            }
        }
        ContingencyTable {
            rows: acc
                .into_iter()
                .map(|(category, (notional, strict))| ContingencyRow {
                    category,
                    notional,
                    strict,
                })
                .collect(),
        }
    }

    /// Build from published counts, keeping the given row order.
    pub fn from_counts(rows: &[(&str, u64, u64)]) -> ContingencyTable {
        ContingencyTable {
            rows: rows
                .iter()
                .map(|(category, notional, strict)| ContingencyRow {
                    category: category.to_string(),
                    notional: *notional,
                    strict: *strict,
                })
                .collect(),
        }
    }

    pub fn total_notional(&self) -> u64 {
        self.rows.iter().map(|r| r.notional).sum()
    }

    pub fn total_strict(&self) -> u64 {
        self.rows.iter().map(|r| r.strict).sum()
    }

    pub fn grand_total(&self) -> u64 {
        self.total_notional() + self.total_strict()
    }

    /// Drop rows with fewer than `min_total` observations (table display
    /// only; totals shrink accordingly).
    pub fn filter_rare(&self, min_total: u64) -> ContingencyTable {
        ContingencyTable {
            rows: self
                .rows
                .iter()
                .filter(|r| r.total() >= min_total)
                .cloned()
                .collect(),
        }
    }

    /// Rows sorted by percent notional, descending (presentation order).
    pub fn sorted_by_rate(&self) -> ContingencyTable {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| {
            b.pct_notional_raw()
                .partial_cmp(&a.pct_notional_raw())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.category.cmp(&b.category))
        });
        ContingencyTable { rows }
    }
}

/// Contingency table of a named categorical feature against the label.
pub fn contingency(table: &FeatureTable, by: &str) -> Result<ContingencyTable> {
    let col = table.column(by)?;
    Ok(ContingencyTable::from_labeled(
        table
            .rows
            .iter()
            .zip(&table.labels)
            .map(|(row, label)| (row[col].clone(), *label)),
    ))
}

/// Genre table with written/spoken subtotal rows appended, mirroring the
/// published layout.
pub fn genre_table(table: &FeatureTable) -> Result<ContingencyTable> {
    let base = contingency(table, "genre")?;
    let mut written = ContingencyRow {
        category: "total written".into(),
        notional: 0,
        strict: 0,
    };
    let mut spoken = ContingencyRow {
        category: "total spoken".into(),
        notional: 0,
        strict: 0,
    };
    let mut rows: Vec<ContingencyRow> = Vec::new();
    for row in &base.rows {
        let genre: Genre = row.category.parse()?;
        let bucket = if genre.is_spoken() {
            &mut spoken
        } else {
            &mut written
        };
        bucket.notional += row.notional;
        bucket.strict += row.strict;
        rows.push(row.clone());
    }
    rows.push(written);
    rows.push(spoken);
    Ok(ContingencyTable { rows })
}

#[derive(Debug, Clone)]
pub struct ResidualCell {
    pub category: String,
    pub label: Label,
    pub observed: f64,
    pub expected: f64,
    /// Pearson residual `(O - E) / sqrt(E)`.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ResidualTable {
    pub cells: Vec<ResidualCell>,
    pub chi_square: f64,
}

/// Pearson residuals of a two-column contingency table.
pub fn residuals(table: &ContingencyTable) -> Result<ResidualTable> {
    let grand = table.grand_total() as f64;
    let col_totals = [table.total_notional() as f64, table.total_strict() as f64];
    if col_totals[0] == 0.0 || col_totals[1] == 0.0 {
        let name = if col_totals[0] == 0.0 {
            "notional"
        } else {
            "strict"
        };
        return Err(Error::ZeroMarginal(name.into()));
    }
    let mut cells = Vec::with_capacity(table.rows.len() * 2);
    let mut chi_square = 0.0;
    for row in &table.rows {
        if row.total() == 0 {
            return Err(Error::ZeroMarginal(row.category.clone()));
        }
        for (label, observed, col_total) in [
            (Label::Notional, row.notional as f64, col_totals[0]),
            (Label::Strict, row.strict as f64, col_totals[1]),
        ] {
            let expected = row.total() as f64 * col_total / grand;
            let residual = (observed - expected) / expected.sqrt();
            chi_square += residual * residual;
            cells.push(ResidualCell {
                category: row.category.clone(),
                label,
                observed,
                expected,
                residual,
            });
        }
    }
    Ok(ResidualTable { cells, chi_square })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinVariable {
    /// Natural log of `distance_tokens`.
    LogDistance,
    /// Anaphor position as a percentage of document length.
    AnaphorPositionPct,
}

impl BinVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            BinVariable::LogDistance => "log_distance",
            BinVariable::AnaphorPositionPct => "anaphor_position_pct",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Bin {
    pub low: f64,
    pub high: f64,
    pub count: usize,
    pub notional_fraction: f64,
    /// Bin width proportional to its share of the data (spine-plot width).
    pub mass_width: f64,
}

#[derive(Debug, Clone)]
pub struct BinProfile {
    pub variable: &'static str,
    pub bins: Vec<Bin>,
    pub total: usize,
}

/// Equal-width bins over the observed range of `var`; a degenerate range
/// produces a single bin holding everything.
pub fn bin_profile(table: &FeatureTable, var: BinVariable, n_bins: usize) -> Result<BinProfile> {
    if n_bins < 2 {
        return Err(Error::Invalid(format!(
            "need at least 2 bins, got {n_bins}"
        )));
    }
    let col = match var {
        BinVariable::LogDistance => table.column("distance_tokens")?,
        BinVariable::AnaphorPositionPct => table.column("n_position_pct")?,
    };
    let mut values = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let x: f64 = row[col].parse().map_err(|_| Error::Schema {
            path: "features".into(),
            column: table.feature_names[col].clone(),
            detail: format!("not a number: `{}`", row[col]),
        })?;
        values.push(match var {
            BinVariable::LogDistance => x.ln(),
            BinVariable::AnaphorPositionPct => x,
        });
    }
    if values.is_empty() {
        return Err(Error::EmptyDataset("no pairs to bin".into()));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let total = values.len();

    let mut counts;
    let mut notional;
    let mut edges: Vec<(f64, f64)>;
    if min == max {
        counts = vec![0usize; 1];
        notional = vec![0usize; 1];
        edges = vec![(min, max)];
        counts[0] = total;
        notional[0] = values
            .iter()
            .zip(&table.labels)
            .filter(|(_, l)| **l == Label::Notional)
            .count();
    } else {
        counts = vec![0usize; n_bins];
        notional = vec![0usize; n_bins];
        let width = (max - min) / n_bins as f64;
        edges = (0..n_bins)
            .map(|i| (min + i as f64 * width, min + (i + 1) as f64 * width))
            .collect();
        edges[n_bins - 1].1 = max;
        for (x, label) in values.iter().zip(&table.labels) {
            let mut b = ((x - min) / width) as usize;
            if b >= n_bins {
                b = n_bins - 1;
            }
            counts[b] += 1;
            if *label == Label::Notional {
                notional[b] += 1;
            }
        }
    }

    let bins = edges
        .into_iter()
        .enumerate()
        .map(|(i, (low, high))| Bin {
            low,
            high,
            count: counts[i],
            notional_fraction: if counts[i] == 0 {
                0.0
            } else {
                notional[i] as f64 / counts[i] as f64
            },
            mass_width: counts[i] as f64 / total as f64,
        })
        .collect();
    Ok(BinProfile {
        variable: var.as_str(),
        bins,
        total,
    })
}
