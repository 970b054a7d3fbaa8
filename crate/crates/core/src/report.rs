//! Per-degree homology summaries shared by every builder.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};


#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub degree: i64,
    pub free_rank: usize,
    /// Orders of the finite cyclic summands, ascending.
    pub torsion: Vec<u64>,
}

impl DegreeEntry {
    pub fn new(degree: i64, free_rank: usize, mut torsion: Vec<u64>) -> Self {
        torsion.sort_unstable();
        DegreeEntry { degree, free_rank, torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Exponents e with order p^e; panics on non-p-power orders.
    pub fn torsion_exponents(&self, p: u64) -> Vec<u32> {
        self.torsion
            .iter()
            .map(|&o| {
                let (mut o, mut e) = (o, 0);
                while o % p == 0 {
                    o /= p;
                    e += 1;
                }
                assert_eq!(o, 1, "order is not a power of {p}");
                e
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub builder: String,
    pub params: BTreeMap<String, String>,
    /// p-adic precision N used for torsion, when computed in `Z/p^N`.
    pub precision: Option<u32>,
    /// Degrees in ascending order; zero groups are omitted.
    pub degrees: Vec<DegreeEntry>,
}

impl HomologyReport {
    pub fn new(builder: &str, precision: Option<u32>) -> Self {
        HomologyReport {
            builder: builder.to_string(),
            params: BTreeMap::new(),
            precision,
            degrees: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Merge a summand into a degree, keeping degrees sorted.
    pub fn push(&mut self, degree: i64, free_rank: usize, torsion: &[u64]) {
        if free_rank == 0 && torsion.is_empty() {
            return;
        }
        match self.degrees.binary_search_by_key(&degree, |e| e.degree) {
            Ok(i) => {
                let e = &mut self.degrees[i];
                e.free_rank += free_rank;
                e.torsion.extend_from_slice(torsion);
                e.torsion.sort_unstable();
            }
            Err(i) => self.degrees.insert(i, DegreeEntry::new(degree, free_rank, torsion.to_vec())),
        }
    }

    /// The group in `degree`; zero if absent.
    pub fn at(&self, degree: i64) -> DegreeEntry {
        self.degrees
            .iter()
            .find(|e| e.degree == degree)
            .cloned()
            .unwrap_or_else(|| DegreeEntry::new(degree, 0, vec![]))
    }
}
