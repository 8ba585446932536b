use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{OffloadMode, SimConfig};
use super::physics::{coverage_radius, data_rate, propulsion_power};
use crate::seed::rng_from;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmartDevice {
    pub position: [f64; 2],
    /// Per-slot arrival probability.
    pub zeta: f64,
    pub queue_len: u32,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct UavState {
    pub position: [f64; 2],
    /// Tasks waiting in the computing queue at the beginning of the slot.
    pub queue_uncompleted: u32,
    /// Tasks collected from the SDs during the current slot.
    pub collected_this_slot: u32,
    /// Bits still in flight to the BS (backlog mode only).
    pub pending_tx_bits: f64,
}

/// Direction (rad), flight distance (m) and offload fraction of one slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionVector {
    pub theta: f64,
    pub d: f64,
    pub b: f64,
}

impl ActionVector {
    pub fn new(theta: f64, d: f64, b: f64) -> Self {
        Self { theta, d, b }
    }

    /// Projects every component onto its admissible interval.
    pub fn clamped(self, cfg: &SimConfig) -> Self {
        Self {
            theta: self.theta.clamp(0.0, std::f64::consts::TAU),
            d: self.d.clamp(0.0, cfg.d_max),
            b: self.b.clamp(0.0, 1.0),
        }
    }

    fn check(&self, cfg: &SimConfig) -> Result<()> {
        let ok = (0.0..=std::f64::consts::TAU).contains(&self.theta)
            && (0.0..=cfg.d_max).contains(&self.d)
            && (0.0..=1.0).contains(&self.b);
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("action out of bounds: {self:?}")))
        }
    }
}

/// State observed by the agent at the start of a slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub x: f64,
    pub y: f64,
    pub queue: u32,
    pub collected: u32,
}

/// Per-slot vector reward: delay-, energy- and collection-linked terms.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RewardVector {
    pub delay: f64,
    pub energy: f64,
    pub collected: f64,
}

impl RewardVector {
    pub fn to_array(self) -> [f64; 3] {
        [self.delay, self.energy, self.collected]
    }

    /// Reward of a slot given its delay, reward-relevant energy, collected
    /// count, and whether the UAV stayed inside the area.
    pub fn from_slot(delay: f64, energy: f64, collected: u32, in_bounds: bool) -> Self {
        let n = collected as f64;
        if in_bounds {
            Self { delay: -delay, energy: -energy / 100.0, collected: n }
        } else {
            Self { delay: -4.0 * delay, energy: -energy / 25.0, collected: -2.0 * n }
        }
    }
}

/// Accounting record of one slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotOutcome {
    /// 1-based slot index.
    pub t: usize,
    /// UAV position during the slot (before moving).
    pub x: f64,
    pub y: f64,
    /// Flight speed, m/s.
    pub v: f64,
    /// Slot delay `D_t`, s.
    pub delay: f64,
    /// Computing plus transmission energy `E_t`, J. Excludes propulsion.
    pub energy: f64,
    pub propulsion_energy: f64,
    /// Tasks collected from SDs in this slot.
    pub collected: u32,
    /// Tasks relayed to the BS.
    pub offloaded: u32,
    /// Tasks kept for local execution (`N_u - N_O`).
    pub local: u32,
    /// Tasks actually executed on the UAV (`min(phi, N_L)`).
    pub processed_local: u32,
    /// Residual computing queue at the end of the slot.
    pub residual_queue: u32,
    pub in_bounds: bool,
    /// Arrivals at the SDs at the beginning of the slot.
    pub arrivals: u32,
    pub sd_dropped: u32,
    pub uav_dropped: u32,
    /// `sd_dropped + uav_dropped`.
    pub dropped_tasks: u32,
    /// Rate of the UAV-to-BS link during the slot, bits/s.
    pub data_rate: f64,
}

/// Cumulative task flow counters for the current episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TaskLedger {
    pub arrivals: u64,
    pub sd_dropped: u64,
    pub collected: u64,
    pub processed_local: u64,
    pub offloaded: u64,
    pub uav_dropped: u64,
}

#[derive(Debug, Clone, PartialEq)]
struct PendingBatch {
    remaining_bits: f64,
    elapsed_slots: u32,
}

/// The UAV-assisted MEC environment.
///
/// The SD layout is fixed by the instance seed given at construction; the
/// UAV's take-off point and the arrival process are drawn from the episode
/// seed given to [`reset`](Self::reset).
#[derive(Debug, Clone)]
pub struct UavMecEnv {
    cfg: SimConfig,
    devices: Vec<SmartDevice>,
    uav: UavState,
    coverage: f64,
    local_capacity: u32,
    bs: [f64; 2],
    rng: ChaCha8Rng,
    /// Slot about to be executed (1-based); 0 before the first reset.
    t: usize,
    done: bool,
    ledger: TaskLedger,
    slot_arrivals: u32,
    slot_sd_dropped: u32,
    backlog: Vec<PendingBatch>,
}

impl UavMecEnv {
    pub fn new(cfg: SimConfig, instance_seed: u64) -> Result<Self> {
        cfg.validate()?;
        let coverage = coverage_radius(cfg.altitude, cfg.theta_max)?;
        let mut layout = rng_from(instance_seed);
        let devices = (0..cfg.num_devices)
            .map(|_| {
                let x = layout.random::<f64>() * cfg.area_x;
                let y = layout.random::<f64>() * cfg.area_y;
                let zeta = cfg.bernoulli_set[layout.random_range(0..cfg.bernoulli_set.len())];
                SmartDevice { position: [x, y], zeta, queue_len: 0 }
            })
            .collect();
        Ok(Self {
            local_capacity: cfg.local_capacity(),
            bs: cfg.bs_position(),
            coverage,
            devices,
            uav: UavState::default(),
            rng: rng_from(0),
            t: 0,
            done: true,
            ledger: TaskLedger::default(),
            slot_arrivals: 0,
            slot_sd_dropped: 0,
            backlog: Vec::new(),
            cfg,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn devices(&self) -> &[SmartDevice] {
        &self.devices
    }

    pub fn uav(&self) -> &UavState {
        &self.uav
    }

    pub fn ledger(&self) -> TaskLedger {
        self.ledger
    }

    pub fn coverage(&self) -> f64 {
        self.coverage
    }

    /// Index of the slot the next call to [`step`](Self::step) executes.
    pub fn slot(&self) -> usize {
        self.t
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Tasks still waiting in SD queues.
    pub fn sd_residual(&self) -> u64 {
        self.devices.iter().map(|d| d.queue_len as u64).sum()
    }

    /// Starts a new episode. Queues are emptied, the UAV takes off at a
    /// uniformly random point, and slot 1's arrivals and collection happen.
    pub fn reset(&mut self, episode_seed: u64) -> Observation {
        self.rng = rng_from(episode_seed);
        for d in &mut self.devices {
            d.queue_len = 0;
        }
        let x = self.rng.random::<f64>() * self.cfg.area_x;
        let y = self.rng.random::<f64>() * self.cfg.area_y;
        self.uav = UavState { position: [x, y], ..UavState::default() };
        self.ledger = TaskLedger::default();
        self.backlog.clear();
        self.t = 1;
        self.done = false;
        self.begin_slot();
        self.observe()
    }

    fn observe(&self) -> Observation {
        Observation {
            x: self.uav.position[0],
            y: self.uav.position[1],
            queue: self.uav.queue_uncompleted,
            collected: self.uav.collected_this_slot,
        }
    }

    /// Arrivals at every SD, then collection from the SDs covered at the
    /// UAV's current position.
    fn begin_slot(&mut self) {
        let cap = self.cfg.sd_queue_cap;
        let mut arrivals = 0;
        let mut dropped = 0;
        for d in &mut self.devices {
            if self.rng.random::<f64>() < d.zeta {
                arrivals += 1;
                if d.queue_len < cap {
                    d.queue_len += 1;
                } else {
                    dropped += 1;
                }
            }
        }
        let [ux, uy] = self.uav.position;
        let mut collected = 0;
        for d in &mut self.devices {
            if (d.position[0] - ux).hypot(d.position[1] - uy) <= self.coverage {
                collected += d.queue_len;
                d.queue_len = 0;
            }
        }
        self.slot_arrivals = arrivals;
        self.slot_sd_dropped = dropped;
        self.uav.collected_this_slot = collected;
        self.ledger.arrivals += arrivals as u64;
        self.ledger.sd_dropped += dropped as u64;
        self.ledger.collected += collected as u64;
    }

    /// Executes one slot under `action`.
    pub fn step(
        &mut self,
        action: ActionVector,
    ) -> Result<(Observation, RewardVector, bool, SlotOutcome)> {
        if self.done {
            return Err(Error::Usage(
                "step called on a finished episode; call reset first".into(),
            ));
        }
        action.check(&self.cfg)?;
        let cfg = &self.cfg;
        let tau = cfg.tau;
        let n_u = self.uav.queue_uncompleted;
        let n_c = self.uav.collected_this_slot;
        let [x, y] = self.uav.position;

        // Offload/local split.
        let n_o = ((action.b * n_u as f64).floor() as u32).min(n_u);
        let n_l = n_u - n_o;
        let processed = self.local_capacity.min(n_l);
        let n_q = n_u.saturating_sub(self.local_capacity + n_o);

        let work = processed as f64 * cfg.beta_cycles;
        let delay_local = work / cfg.f_uav + tau * n_q as f64;
        let energy_local = cfg.kappa * work * cfg.f_uav * cfg.f_uav;

        let rate = data_rate(self.uav.position, cfg.altitude, self.bs, cfg)?;
        let last_slot = self.t == cfg.slots;
        let delay_offload = match cfg.offload_mode {
            OffloadMode::Myopic => {
                if n_o == 0 {
                    0.0
                } else {
                    cfg.alpha_bits * n_o as f64 / rate
                }
            }
            OffloadMode::Backlog => {
                if n_o > 0 {
                    self.backlog.push(PendingBatch {
                        remaining_bits: cfg.alpha_bits * n_o as f64,
                        elapsed_slots: 0,
                    });
                }
                drain_backlog(&mut self.backlog, rate, tau, last_slot)
            }
        };
        self.uav.pending_tx_bits = self.backlog.iter().map(|b| b.remaining_bits).sum();
        let energy_offload = cfg.p_tx * delay_offload;

        // Movement with clamping to the area.
        let nx = x + action.d * action.theta.cos();
        let ny = y + action.d * action.theta.sin();
        let in_bounds = (0.0..=cfg.area_x).contains(&nx) && (0.0..=cfg.area_y).contains(&ny);
        self.uav.position = [nx.clamp(0.0, cfg.area_x), ny.clamp(0.0, cfg.area_y)];
        let v = action.d / tau;
        let propulsion_energy = propulsion_power(v, &cfg.propulsion)? * tau;

        // Queue rollover.
        let incoming = n_q + n_c;
        let uav_dropped = incoming.saturating_sub(cfg.uav_queue_cap);
        self.uav.queue_uncompleted = incoming - uav_dropped;

        let delay = delay_local + delay_offload;
        let energy = energy_local + energy_offload;
        let reward_energy = if cfg.include_propulsion_in_reward {
            energy + propulsion_energy
        } else {
            energy
        };
        let reward = RewardVector::from_slot(delay, reward_energy, n_c, in_bounds);

        self.ledger.processed_local += processed as u64;
        self.ledger.offloaded += n_o as u64;
        self.ledger.uav_dropped += uav_dropped as u64;

        let outcome = SlotOutcome {
            t: self.t,
            x,
            y,
            v,
            delay,
            energy,
            propulsion_energy,
            collected: n_c,
            offloaded: n_o,
            local: n_l,
            processed_local: processed,
            residual_queue: n_q,
            in_bounds,
            arrivals: self.slot_arrivals,
            sd_dropped: self.slot_sd_dropped,
            uav_dropped,
            dropped_tasks: self.slot_sd_dropped + uav_dropped,
            data_rate: rate,
        };

        if last_slot {
            self.done = true;
            self.uav.collected_this_slot = 0;
        } else {
            self.t += 1;
            self.begin_slot();
        }
        Ok((self.observe(), reward, self.done, outcome))
    }
}

/// Drains every pending batch by one slot at `rate` and returns the delay
/// credited for the batches that complete in this slot.
///
/// Each batch is transmitted on its own from the slot it was offloaded, so its
/// delay is the number of full slots it spent in flight times `tau` plus the
/// fraction of the completing slot. On the final slot, unfinished batches are
/// credited as if the current rate persisted until they complete.
fn drain_backlog(backlog: &mut Vec<PendingBatch>, rate: f64, tau: f64, flush: bool) -> f64 {
    let capacity = tau * rate;
    let mut credited = 0.0;
    backlog.retain_mut(|batch| {
        if batch.remaining_bits <= capacity || flush {
            credited += batch.elapsed_slots as f64 * tau + batch.remaining_bits / rate;
            false
        } else {
            batch.remaining_bits -= capacity;
            batch.elapsed_slots += 1;
            true
        }
    });
    credited
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> SimConfig {
        SimConfig {
            slots: 20,
            num_devices: 15,
            area_x: 200.0,
            area_y: 200.0,
            ..SimConfig::default()
        }
    }

    #[test]
    fn reset_is_deterministic_and_seed_scoped() {
        let mut a = UavMecEnv::new(small_cfg(), 7).unwrap();
        let mut b = UavMecEnv::new(small_cfg(), 7).unwrap();
        assert_eq!(a.reset(3), b.reset(3));
        assert_eq!(a.devices(), b.devices());
        let layout = a.devices().to_vec();
        let o1 = a.reset(3);
        let o2 = a.reset(4);
        assert_ne!((o1.x, o1.y), (o2.x, o2.y));
        let pos: Vec<_> = a.devices().iter().map(|d| (d.position, d.zeta)).collect();
        let pos0: Vec<_> = layout.iter().map(|d| (d.position, d.zeta)).collect();
        assert_eq!(pos, pos0);
        assert_eq!(o2.queue, 0);
    }

    #[test]
    fn sixty_devices() {
        let env = UavMecEnv::new(SimConfig::default(), 1).unwrap();
        assert_eq!(env.devices().len(), 60);
        for d in env.devices() {
            assert!((0.0..=400.0).contains(&d.position[0]));
            assert!([0.3, 0.5, 0.7].contains(&d.zeta));
        }
    }

    #[test]
    fn zero_devices_is_a_config_error() {
        let cfg = SimConfig { num_devices: 0, ..SimConfig::default() };
        assert!(matches!(UavMecEnv::new(cfg, 1), Err(Error::Config(_))));
    }

    #[test]
    fn step_after_done_and_before_reset_fail() {
        let mut env = UavMecEnv::new(SimConfig { slots: 2, ..small_cfg() }, 1).unwrap();
        let a = ActionVector::new(0.0, 0.0, 0.0);
        assert!(matches!(env.step(a), Err(Error::Usage(_))));
        env.reset(1);
        assert!(!env.step(a).unwrap().2);
        assert!(env.step(a).unwrap().2);
        assert!(matches!(env.step(a), Err(Error::Usage(_))));
    }

    #[test]
    fn out_of_range_action_is_rejected() {
        let mut env = UavMecEnv::new(small_cfg(), 1).unwrap();
        env.reset(1);
        assert!(env.step(ActionVector::new(0.0, 31.0, 0.0)).is_err());
        assert!(env.step(ActionVector::new(0.0, 0.0, 1.5)).is_err());
        let clamped = ActionVector::new(-1.0, 31.0, 1.5).clamped(env.config());
        assert_eq!(clamped, ActionVector::new(0.0, 30.0, 1.0));
    }

    /// Hand trace: N_u = 10, b = 0.5, phi = 1, tau = 1.
    #[test]
    fn local_split_hand_trace() {
        let mut env = UavMecEnv::new(small_cfg(), 1).unwrap();
        env.reset(1);
        env.uav.queue_uncompleted = 10;
        let rate = data_rate(env.uav.position, 30.0, env.bs, env.config()).unwrap();
        let (_, _, _, out) = env.step(ActionVector::new(0.0, 0.0, 0.5)).unwrap();
        assert_eq!(out.offloaded, 5);
        assert_eq!(out.local, 5);
        assert_eq!(out.processed_local, 1);
        assert_eq!(out.residual_queue, 4);
        let delay_local = 1.0 * 1e9 / 1e9 + 4.0;
        let delay_offload = 4.0e7 * 5.0 / rate;
        assert!((out.delay - (delay_local + delay_offload)).abs() < 1e-9);
        let energy_local = 1e-26 * 1e9 * 1e18;
        assert!((energy_local - 10.0_f64).abs() < 1e-12);
        assert!((out.energy - (10.0 + delay_offload)).abs() < 1e-9);
    }

    #[test]
    fn empty_queue_offloads_nothing() {
        let mut env = UavMecEnv::new(small_cfg(), 1).unwrap();
        env.reset(1);
        let (_, _, _, out) = env.step(ActionVector::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(out.offloaded, 0);
        assert_eq!(out.delay, 0.0);
        assert_eq!(out.energy, 0.0);
    }

    #[test]
    fn leaving_the_area_is_clamped_and_penalized() {
        let mut env = UavMecEnv::new(small_cfg(), 1).unwrap();
        env.reset(1);
        env.uav.position = [5.0, 100.0];
        env.uav.collected_this_slot = 3;
        let (obs, r, _, out) = env.step(ActionVector::new(std::f64::consts::PI, 30.0, 0.0)).unwrap();
        assert!(!out.in_bounds);
        assert_eq!(obs.x, 0.0);
        assert!((obs.y - 100.0).abs() < 1e-9);
        assert_eq!(r.collected, -6.0);
        assert!(r.delay <= 0.0 && r.energy <= 0.0);
        let hover = 168.49 * 1.0;
        let flight = propulsion_power(30.0, &env.config().propulsion).unwrap();
        assert!(flight > hover);
        assert!((r.energy - (-(out.energy + flight) / 25.0)).abs() < 1e-12);
    }

    #[test]
    fn uav_queue_overflow_is_dropped() {
        let mut env = UavMecEnv::new(small_cfg(), 1).unwrap();
        env.reset(1);
        env.uav.queue_uncompleted = 10;
        env.uav.collected_this_slot = 6;
        let (obs, _, _, out) = env.step(ActionVector::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(out.residual_queue, 9);
        assert_eq!(out.uav_dropped, 5);
        assert_eq!(obs.queue, 10);
    }

    #[test]
    fn backlog_batch_completes_with_piecewise_delay() {
        let mut backlog = vec![PendingBatch { remaining_bits: 25.0, elapsed_slots: 0 }];
        // capacity 10 bits/slot: two full slots, then 5 bits at rate 10 -> 0.5 s.
        assert_eq!(drain_backlog(&mut backlog, 10.0, 1.0, false), 0.0);
        assert_eq!(drain_backlog(&mut backlog, 10.0, 1.0, false), 0.0);
        let d = drain_backlog(&mut backlog, 10.0, 1.0, false);
        assert!((d - 2.5).abs() < 1e-12);
        assert!(backlog.is_empty());
        // Exact fit completes in the first slot with delay tau.
        let mut exact = vec![PendingBatch { remaining_bits: 10.0, elapsed_slots: 0 }];
        assert!((drain_backlog(&mut exact, 10.0, 1.0, false) - 1.0).abs() < 1e-12);
        // Flush at the horizon extrapolates the current rate.
        let mut tail = vec![PendingBatch { remaining_bits: 40.0, elapsed_slots: 0 }];
        assert!((drain_backlog(&mut tail, 10.0, 1.0, true) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn backlog_mode_conserves_total_delay_for_constant_rate() {
        // Hovering: rate constant, so deferred and myopic delays sum identically.
        let run = |mode: OffloadMode| {
            let cfg = SimConfig { offload_mode: mode, ..small_cfg() };
            let mut env = UavMecEnv::new(cfg, 3).unwrap();
            env.reset(9);
            let mut total = 0.0;
            loop {
                let (_, _, done, out) = env.step(ActionVector::new(0.0, 0.0, 0.8)).unwrap();
                total += out.delay;
                if done {
                    break;
                }
            }
            total
        };
        let (m, b) = (run(OffloadMode::Myopic), run(OffloadMode::Backlog));
        assert!((m - b).abs() < 1e-6 * m.max(1.0), "{m} vs {b}");
    }
}
