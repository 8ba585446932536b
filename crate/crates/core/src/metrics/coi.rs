use serde::{Deserialize, Serialize};

use super::front::FrontMatrix;
use crate::{Error, Objectives, Result};

/// Which objective vectors the weighted argmax runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoiMode {
    /// The discounted return vectors stored in the front.
    #[default]
    Returns,
    /// Raw totals oriented for maximization: (-D_total, -E_total, N_total).
    Raw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoiSummary {
    pub atd: f64,
    pub aec: f64,
    pub atn: f64,
    pub acoi: f64,
    /// Winning row index per weight vector.
    pub winners: Vec<usize>,
}

/// For every weight picks the front member maximizing `w . F`, then averages
/// the winners' raw totals and winning scalarized values over the weights.
pub fn coi_family(front: &FrontMatrix, weights: &[Objectives], mode: CoiMode) -> Result<CoiSummary> {
    if front.is_empty() {
        return Err(Error::Empty("front"));
    }
    if weights.is_empty() {
        return Err(Error::Empty("weight lattice"));
    }
    let raw = front
        .raw
        .as_ref()
        .ok_or_else(|| Error::Format("front carries no raw totals".into()))?;
    let f: Vec<Objectives> = match mode {
        CoiMode::Returns => front.points.clone(),
        CoiMode::Raw => raw.iter().map(|r| [-r[0], -r[1], r[2]]).collect(),
    };
    let mut s = CoiSummary { atd: 0.0, aec: 0.0, atn: 0.0, acoi: 0.0, winners: Vec::with_capacity(weights.len()) };
    let n = weights.len() as f64;
    for w in weights {
        let mut best = 0;
        let mut best_v = f64::NEG_INFINITY;
        for (j, fj) in f.iter().enumerate() {
            let v = w[0] * fj[0] + w[1] * fj[1] + w[2] * fj[2];
            if v > best_v {
                best_v = v;
                best = j;
            }
        }
        s.winners.push(best);
        s.atd += raw[best][0] / n;
        s.aec += raw[best][1] / n;
        s.atn += raw[best][2] / n;
        s.acoi += best_v / n;
    }
    Ok(s)
}
