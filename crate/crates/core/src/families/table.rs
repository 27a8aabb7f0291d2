use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::MultiIndex;

/// Recurrence coefficients stored explicitly per multi-index.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    r: usize,
    entries: HashMap<Vec<usize>, (Vec<f64>, Vec<f64>)>,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    r: i64,
    entries: Vec<EntryFile>,
}

#[derive(Serialize, Deserialize)]
struct EntryFile {
    n: Vec<i64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl CoefficientTable {
    pub fn new(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("table needs r >= 1".into()));
        }
        Ok(CoefficientTable { r, entries: HashMap::new() })
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, n: MultiIndex, a: Vec<f64>, b: Vec<f64>) -> Result<()> {
        if n.dim() != self.r || a.len() != self.r || b.len() != self.r {
            return Err(Error::Parse(format!("entry {n} has inconsistent r (expected {})", self.r)));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("entry {n} has non-finite values")));
        }
        for j in 0..self.r {
            if n.get(j) == 0 && a[j] != 0.0 {
                return Err(Error::Parse(format!("entry {n}: a_{} must be 0 when n_{} = 0", j + 1, j + 1)));
            }
        }
        if self.entries.insert(n.clone().into(), (a, b)).is_some() {
            return Err(Error::Parse(format!("duplicate entry {n}")));
        }
        Ok(())
    }

    pub fn get(&self, n: &MultiIndex) -> Result<(&[f64], &[f64])> {
        self.entries
            .get(n.entries())
            .map(|(a, b)| (a.as_slice(), b.as_slice()))
            .ok_or_else(|| Error::MissingEntry(n.clone()))
    }

    pub fn contains(&self, n: &MultiIndex) -> bool {
        self.entries.contains_key(n.entries())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text)?;
        if file.r < 1 {
            return Err(Error::Parse(format!("r must be >= 1, got {}", file.r)));
        }
        let mut table = CoefficientTable::new(file.r as usize)?;
        for e in file.entries {
            if let Some(neg) = e.n.iter().find(|&&v| v < 0) {
                return Err(Error::Parse(format!("negative multi-index entry {neg} in {:?}", e.n)));
            }
            let n = MultiIndex::new(e.n.iter().map(|&v| v as usize).collect())
                .map_err(|err| Error::Parse(err.to_string()))?;
            table.insert(n, e.a, e.b)?;
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Serializes with entries sorted by multi-index.
    pub fn to_json(&self) -> String {
        let mut keys: Vec<_> = self.entries.keys().collect();
        keys.sort();
        let entries = keys
            .into_iter()
            .map(|k| {
                let (a, b) = &self.entries[k];
                EntryFile {
                    n: k.iter().map(|&v| v as i64).collect(),
                    a: a.clone(),
                    b: b.clone(),
                }
            })
            .collect();
        let file = TableFile { r: self.r as i64, entries };
        serde_json::to_string_pretty(&file).expect("table serializes")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}
