use serde::{Deserialize, Serialize};

use crate::{Error, Objectives, Result};

/// Simplex lattice of weight vectors with spacing `1/delta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightLattice {
    pub m: usize,
    pub delta: usize,
    pub weights: Vec<Vec<f64>>,
}

impl WeightLattice {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// The weights as 3-vectors; only valid for three objectives.
    pub fn triples(&self) -> Result<Vec<Objectives>> {
        if self.m != 3 {
            return Err(Error::Dimension { expected: 3, actual: self.m });
        }
        Ok(self.weights.iter().map(|w| [w[0], w[1], w[2]]).collect())
    }
}

/// Enumerates every vector whose components are multiples of `1/delta` and
/// sum to one, in lexicographic order of the components.
pub fn generate_weight_lattice(m: usize, delta: usize) -> Result<WeightLattice> {
    if delta == 0 {
        return Err(Error::Config("lattice spacing delta must be positive".into()));
    }
    if m == 0 {
        return Err(Error::Config("lattice needs at least one objective".into()));
    }
    let mut weights = Vec::new();
    let mut parts = vec![0usize; m];
    fill(&mut parts, 0, delta, delta, &mut weights);
    Ok(WeightLattice { m, delta, weights })
}

fn fill(parts: &mut [usize], pos: usize, left: usize, delta: usize, out: &mut Vec<Vec<f64>>) {
    if pos + 1 == parts.len() {
        parts[pos] = left;
        out.push(parts.iter().map(|&p| p as f64 / delta as f64).collect());
        return;
    }
    for k in 0..=left {
        parts[pos] = k;
        fill(parts, pos + 1, left - k, delta, out);
    }
}
