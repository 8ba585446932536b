use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    LargerBetter,
    SmallerBetter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    /// `ranks[i][a]`: rank of algorithm `a` on instance `i` (1 = best).
    pub ranks: Vec<Vec<f64>>,
    pub average: Vec<f64>,
    /// Position of each algorithm by ascending average rank; equal averages share a position.
    pub positions: Vec<usize>,
}

/// Friedman-style ranking of a table with one row per instance and one
/// column per algorithm. Ties share the average of the ranks they span.
pub fn friedman_ranks(table: &[Vec<f64>], direction: Direction) -> Result<RankTable> {
    if table.is_empty() {
        return Err(Error::Empty("rank table"));
    }
    let algos = table[0].len();
    if algos == 0 {
        return Err(Error::Empty("rank table row"));
    }
    let mut ranks = Vec::with_capacity(table.len());
    for row in table {
        if row.len() != algos {
            return Err(Error::Dimension { expected: algos, actual: row.len() });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Format("rank table has a missing cell".into()));
        }
        let key = |v: f64| match direction {
            Direction::LargerBetter => -v,
            Direction::SmallerBetter => v,
        };
        let mut order: Vec<usize> = (0..algos).collect();
        order.sort_by(|&a, &b| key(row[a]).total_cmp(&key(row[b])));
        let mut r = vec![0.0; algos];
        let mut i = 0;
        while i < algos {
            let mut j = i;
            while j + 1 < algos && row[order[j + 1]] == row[order[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &a in &order[i..=j] {
                r[a] = avg;
            }
            i = j + 1;
        }
        ranks.push(r);
    }
    let n = table.len() as f64;
    let average: Vec<f64> = (0..algos).map(|a| ranks.iter().map(|r| r[a]).sum::<f64>() / n).collect();
    let mut distinct = average.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let positions = average
        .iter()
        .map(|a| distinct.iter().position(|d| d == a).unwrap() + 1)
        .collect();
    Ok(RankTable { ranks, average, positions })
}
