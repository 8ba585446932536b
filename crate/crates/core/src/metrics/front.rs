use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::{Error, Objectives, Result};

/// One line of a front CSV: `policy_id,R_D,R_E,R_N,D_total,E_total,N_total`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontRow {
    pub policy_id: String,
    #[serde(rename = "R_D")]
    pub r_d: f64,
    #[serde(rename = "R_E")]
    pub r_e: f64,
    #[serde(rename = "R_N")]
    pub r_n: f64,
    #[serde(rename = "D_total")]
    pub d_total: f64,
    #[serde(rename = "E_total")]
    pub e_total: f64,
    #[serde(rename = "N_total")]
    pub n_total: f64,
}

impl FrontRow {
    pub fn new(policy_id: impl Into<String>, returns: Objectives, raw: [f64; 3]) -> Self {
        Self {
            policy_id: policy_id.into(),
            r_d: returns[0],
            r_e: returns[1],
            r_n: returns[2],
            d_total: raw[0],
            e_total: raw[1],
            n_total: raw[2],
        }
    }

    pub fn returns(&self) -> Objectives {
        [self.r_d, self.r_e, self.r_n]
    }

    pub fn raw(&self) -> [f64; 3] {
        [self.d_total, self.e_total, self.n_total]
    }
}

pub fn write_front_csv<W: Write>(rows: &[FrontRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(["policy_id", "R_D", "R_E", "R_N", "D_total", "E_total", "N_total"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_front_csv<R: Read>(input: R) -> Result<Vec<FrontRow>> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r.deserialize().collect::<Result<Vec<FrontRow>, csv::Error>>()?;
    for row in &rows {
        if row.returns().iter().chain(&row.raw()).any(|v| !v.is_finite()) {
            return Err(Error::Format(format!("non-finite value in front row {:?}", row.policy_id)));
        }
    }
    Ok(rows)
}

/// A set of objective vectors (all maximized), optionally with the raw
/// totals and labels of the policies they came from.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrontMatrix {
    pub points: Vec<Objectives>,
    pub raw: Option<Vec<[f64; 3]>>,
    pub labels: Option<Vec<String>>,
}

impl FrontMatrix {
    pub fn new(points: Vec<Objectives>) -> Result<Self> {
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("front point"));
        }
        Ok(Self { points, raw: None, labels: None })
    }

    pub fn from_rows(rows: &[FrontRow]) -> Result<Self> {
        let mut f = Self::new(rows.iter().map(FrontRow::returns).collect())?;
        f.raw = Some(rows.iter().map(FrontRow::raw).collect());
        f.labels = Some(rows.iter().map(|r| r.policy_id.clone()).collect());
        Ok(f)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Keeps only the rows at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            points: indices.iter().map(|&i| self.points[i]).collect(),
            raw: self.raw.as_ref().map(|r| indices.iter().map(|&i| r[i]).collect()),
            labels: self.labels.as_ref().map(|l| indices.iter().map(|&i| l[i].clone()).collect()),
        }
    }

    /// Concatenates fronts. Raw totals and labels survive only if every part has them.
    pub fn union(parts: &[FrontMatrix]) -> Self {
        let points = parts.iter().flat_map(|p| p.points.iter().copied()).collect();
        let raw = parts
            .iter()
            .map(|p| p.raw.clone())
            .collect::<Option<Vec<_>>>()
            .map(|v| v.concat());
        let labels = parts
            .iter()
            .map(|p| p.labels.clone())
            .collect::<Option<Vec<_>>>()
            .map(|v| v.concat());
        Self { points, raw, labels }
    }
}
