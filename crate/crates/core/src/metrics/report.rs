use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::Result;

/// Indicator values of one algorithm's front on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub instance: String,
    pub algorithm: String,
    pub front_size: usize,
    pub igd: f64,
    pub hv: f64,
    pub atd: f64,
    pub aec: f64,
    pub atn: f64,
    pub acoi: f64,
}

pub fn write_report_csv<W: Write>(rows: &[MetricsRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// JSON summary keyed by instance, then algorithm.
pub fn write_report_json<W: Write>(rows: &[MetricsRow], out: W) -> Result<()> {
    let mut root = serde_json::Map::new();
    for r in rows {
        let entry = root
            .entry(r.instance.clone())
            .or_insert_with(|| serde_json::Value::Object(Default::default()));
        if let serde_json::Value::Object(m) = entry {
            m.insert(
                r.algorithm.clone(),
                serde_json::json!({
                    "front_size": r.front_size,
                    "igd": r.igd,
                    "hv": r.hv,
                    "atd": r.atd,
                    "aec": r.aec,
                    "atn": r.atn,
                    "acoi": r.acoi,
                }),
            );
        }
    }
    serde_json::to_writer_pretty(out, &serde_json::Value::Object(root))?;
    Ok(())
}
