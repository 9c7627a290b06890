//! Feature encoding: numeric features pass through, categoricals one-hot.
//! Categories unseen at fit time encode as an all-zero group.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::Label;
use crate::features::{FeatureTable, NUMERIC_FEATURES};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureEncoding {
    Numeric {
        name: String,
    },
    Categorical {
        name: String,
        categories: Vec<String>,
    },
}

impl FeatureEncoding {
    pub fn name(&self) -> &str {
        match self {
            FeatureEncoding::Numeric { name } => name,
            FeatureEncoding::Categorical { name, .. } => name,
        }
    }

    pub fn width(&self) -> usize {
        match self {
            FeatureEncoding::Numeric { .. } => 1,
            FeatureEncoding::Categorical { categories, .. } => categories.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Encoding {
    pub features: Vec<FeatureEncoding>,
}

impl Encoding {
    /// Derive the encoding from string rows: columns named in
    /// [`NUMERIC_FEATURES`] stay numeric, everything else one-hot encodes
    /// over its observed categories (sorted for determinism).
    pub fn fit(feature_names: &[String], rows: &[Vec<String>]) -> Encoding {
        let features = feature_names
            .iter()
            .enumerate()
            .map(|(col, name)| {
                if NUMERIC_FEATURES.contains(&name.as_str()) {
                    FeatureEncoding::Numeric { name: name.clone() }
                } else {
                    let cats: BTreeSet<String> = rows.iter().map(|r| r[col].clone()).collect();
                    FeatureEncoding::Categorical {
                        name: name.clone(),
                        categories: cats.into_iter().collect(),
                    }
                }
            })
            .collect();
        Encoding { features }
    }

    pub fn width(&self) -> usize {
        self.features.iter().map(|f| f.width()).sum()
    }

    /// Names of encoded columns, `feature=category` for one-hot members.
    pub fn encoded_names(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.width());
        for f in &self.features {
            match f {
                FeatureEncoding::Numeric { name } => out.push(name.clone()),
                FeatureEncoding::Categorical { name, categories } => {
                    for c in categories {
                        out.push(format!("{name}={c}"));
                    }
                }
            }
        }
        out
    }

    /// (feature name, encoded column range) per named feature.
    pub fn groups(&self) -> Vec<(String, std::ops::Range<usize>)> {
        let mut out = Vec::with_capacity(self.features.len());
        let mut offset = 0;
        for f in &self.features {
            let w = f.width();
            out.push((f.name().to_string(), offset..offset + w));
            offset += w;
        }
        out
    }

    pub fn encode_row(&self, row: &[String]) -> Result<Vec<f64>> {
        if row.len() != self.features.len() {
            return Err(Error::Encoding(format!(
                "expected {} feature values, found {}",
                self.features.len(),
                row.len()
            )));
        }
        let mut out = Vec::with_capacity(self.width());
        for (value, feature) in row.iter().zip(&self.features) {
            match feature {
                FeatureEncoding::Numeric { name } => {
                    let x: f64 = value.parse().map_err(|_| Error::Schema {
                        path: "features".into(),
                        column: name.clone(),
                        detail: format!("not a number: `{value}`"),
                    })?;
                    out.push(x);
                }
                FeatureEncoding::Categorical { categories, .. } => {
                    // unknown category: all zeros
                    for c in categories {
                        out.push(if c == value { 1.0 } else { 0.0 });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Encoded rows with labels, ready for fitting.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub encoding: Encoding,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

impl Dataset {
    pub fn from_table(table: &FeatureTable) -> Result<Dataset> {
        let encoding = Encoding::fit(&table.feature_names, &table.rows);
        Self::from_table_with_encoding(table, encoding)
    }

    /// Encode a table against a fixed encoding (prediction/evaluation path).
    /// The table's columns must name the model's features in order.
    pub fn from_table_with_encoding(table: &FeatureTable, encoding: Encoding) -> Result<Dataset> {
        let expected: Vec<&str> = encoding.features.iter().map(|f| f.name()).collect();
        let found: Vec<&str> = table.feature_names.iter().map(String::as_str).collect();
        if expected != found {
            return Err(Error::Encoding(format!(
                "feature columns {found:?} do not match the model's encoding {expected:?}"
            )));
        }
        let rows = table
            .rows
            .iter()
            .map(|r| encoding.encode_row(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset {
            encoding,
            rows,
            labels: table.labels.clone(),
        })
    }

    /// Already-numeric rows (synthetic tasks, tests).
    pub fn from_numeric(rows: Vec<Vec<f64>>, labels: Vec<Label>) -> Dataset {
        let width = rows.first().map(|r| r.len()).unwrap_or(0);
        let features = (0..width)
            .map(|i| FeatureEncoding::Numeric {
                name: format!("f{i}"),
            })
            .collect();
        Dataset {
            encoding: Encoding { features },
            rows,
            labels,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn width(&self) -> usize {
        self.encoding.width()
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            encoding: self.encoding.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}
