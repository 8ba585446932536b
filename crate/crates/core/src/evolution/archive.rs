use serde::{Deserialize, Serialize};

use super::eval::PolicyEvaluation;
use crate::metrics::{FrontMatrix, FrontRow};
use crate::neural::GaussianPolicy;
use crate::pareto::dominates;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub id: u64,
    pub policy: GaussianPolicy,
    pub eval: PolicyEvaluation,
}

impl ArchiveEntry {
    pub fn policy_id(&self) -> String {
        format!("p{:06}", self.id)
    }
}

/// External archive of mutually nondominated policies.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct EpArchive {
    pub entries: Vec<ArchiveEntry>,
}

impl EpArchive {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn points(&self) -> Vec<[f64; 3]> {
        self.entries.iter().map(|e| e.eval.returns).collect()
    }

    pub fn front_rows(&self) -> Vec<FrontRow> {
        self.entries
            .iter()
            .map(|e| FrontRow::new(e.policy_id(), e.eval.returns, e.eval.raw))
            .collect()
    }

    pub fn front(&self) -> FrontMatrix {
        FrontMatrix::from_rows(&self.front_rows()).expect("archive evaluations are finite")
    }
}

/// Inserts candidates one by one: a candidate dominated by (or equal to) a
/// member is rejected, otherwise it joins and evicts the members it dominates.
pub fn update_ep(archive: &mut EpArchive, candidates: impl IntoIterator<Item = ArchiveEntry>) {
    for c in candidates {
        let f = c.eval.returns;
        if archive
            .entries
            .iter()
            .any(|e| e.eval.returns == f || dominates(&e.eval.returns, &f))
        {
            continue;
        }
        archive.entries.retain(|e| !dominates(&f, &e.eval.returns));
        archive.entries.push(c);
    }
}
