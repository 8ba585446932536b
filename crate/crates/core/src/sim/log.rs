use std::io::Write;

use serde::{Deserialize, Serialize};

use super::env::SlotOutcome;
use crate::{Error, Result};

/// Raw episode totals and the discounted return vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EpisodeTotals {
    /// Total task delay, s.
    pub delay_total: f64,
    /// Computing, transmission and flight energy, J.
    pub energy_total: f64,
    /// Total collected tasks.
    pub collected_total: f64,
    /// Discounted returns `(R_D, R_E, R_N)`.
    pub returns: [f64; 3],
}

impl EpisodeTotals {
    pub fn raw(&self) -> [f64; 3] {
        [self.delay_total, self.energy_total, self.collected_total]
    }
}

/// Aggregates a complete slot log.
///
/// Returns use the out-of-area penalty coefficients `(4 - 3*1_t)` on delay,
/// `(4 - 3*1_t)/100` on energy and `(3*1_t - 2)` on the collected count.
/// `include_propulsion` adds each slot's flight energy to the energy reward.
pub fn episode_totals(
    log: &[SlotOutcome],
    gamma: f64,
    include_propulsion: bool,
) -> Result<EpisodeTotals> {
    if log.is_empty() {
        return Err(Error::Empty("episode log"));
    }
    let mut totals = EpisodeTotals::default();
    let mut discount = 1.0;
    for slot in log {
        let ind = if slot.in_bounds { 1.0 } else { 0.0 };
        let reward_energy = if include_propulsion {
            slot.energy + slot.propulsion_energy
        } else {
            slot.energy
        };
        totals.returns[0] -= discount * (4.0 - 3.0 * ind) * slot.delay;
        totals.returns[1] -= discount * (4.0 - 3.0 * ind) / 100.0 * reward_energy;
        totals.returns[2] += discount * (3.0 * ind - 2.0) * slot.collected as f64;
        totals.delay_total += slot.delay;
        totals.energy_total += slot.energy + slot.propulsion_energy;
        totals.collected_total += slot.collected as f64;
        discount *= gamma;
    }
    Ok(totals)
}

/// Writes one row per slot: `t,x,y,v,N_c,N_O,N_L,N_q,D_t,E_t,in_bounds`.
pub fn write_episode_csv<W: Write>(log: &[SlotOutcome], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "t", "x", "y", "v", "N_c", "N_O", "N_L", "N_q", "D_t", "E_t", "in_bounds",
    ])?;
    for s in log {
        w.write_record(&[
            s.t.to_string(),
            s.x.to_string(),
            s.y.to_string(),
            s.v.to_string(),
            s.collected.to_string(),
            s.offloaded.to_string(),
            s.local.to_string(),
            s.residual_queue.to_string(),
            s.delay.to_string(),
            s.energy.to_string(),
            u8::from(s.in_bounds).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
