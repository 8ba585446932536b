use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Rotary-wing propulsion model constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PropulsionParams {
    /// Blade profile power in hover, W.
    #[serde(rename = "P1")]
    pub p1: f64,
    /// Induced power in hover, W.
    #[serde(rename = "P2")]
    pub p2: f64,
    /// Rotor blade tip speed, m/s.
    #[serde(rename = "U_tip")]
    pub u_tip: f64,
    /// Mean rotor induced velocity in hover, m/s.
    pub v0: f64,
    /// Fuselage drag ratio.
    pub d0: f64,
    /// Air density, kg/m^3.
    pub rho: f64,
    /// Rotor solidity.
    pub g_sol: f64,
    /// Rotor disc area, m^2.
    #[serde(rename = "A_disc")]
    pub a_disc: f64,
}

impl Default for PropulsionParams {
    fn default() -> Self {
        Self {
            p1: 79.86,
            p2: 88.63,
            u_tip: 120.0,
            v0: 4.03,
            d0: 0.6,
            rho: 1.225,
            g_sol: 0.05,
            a_disc: 0.503,
        }
    }
}

/// UAV-to-BS pathloss constants. `theta0` is in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PathlossParams {
    #[serde(rename = "A0")]
    pub a0: f64,
    #[serde(rename = "B0")]
    pub b0: f64,
    pub theta0: f64,
    #[serde(rename = "C0")]
    pub c0: f64,
    pub eta0: f64,
}

impl Default for PathlossParams {
    fn default() -> Self {
        Self {
            a0: 3.04,
            b0: -23.29,
            theta0: -3.61,
            c0: 4.14,
            eta0: 20.7,
        }
    }
}

/// How the delay of tasks relayed to the BS is accounted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OffloadMode {
    /// Constant-rate approximation at the current slot's data rate.
    #[default]
    Myopic,
    /// Offloaded bits drain over subsequent slots at the rate of each slot;
    /// the delay is credited on the slot the batch completes.
    Backlog,
}

/// Sign applied to the pathloss exponent in the received-power term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PathlossSign {
    /// Received power is `P_U * 10^(-PL/10)`.
    #[default]
    Attenuation,
    /// Received power is `P_U * 10^(+PL/10)`.
    Literal,
}

/// Full parameterization of the simulated world.
///
/// JSON keys follow the symbol names (`T`, `K`, `H`, `f_U`, ...); any key may
/// be omitted and falls back to the default scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    /// Number of slots per episode.
    #[serde(rename = "T")]
    pub slots: usize,
    /// Slot duration, s.
    pub tau: f64,
    pub area_x: f64,
    pub area_y: f64,
    /// Number of smart devices.
    #[serde(rename = "K")]
    pub num_devices: usize,
    /// UAV altitude, m.
    #[serde(rename = "H")]
    pub altitude: f64,
    pub v_max: f64,
    pub d_max: f64,
    /// Maximal azimuth angle of the UAV's coverage cone, rad.
    pub theta_max: f64,
    /// Task input size, bits.
    pub alpha_bits: f64,
    /// CPU cycles per task.
    pub beta_cycles: f64,
    /// UAV CPU frequency, Hz.
    #[serde(rename = "f_U")]
    pub f_uav: f64,
    /// SD queue capacity.
    #[serde(rename = "L_max")]
    pub sd_queue_cap: u32,
    /// UAV computing queue capacity.
    #[serde(rename = "N_max")]
    pub uav_queue_cap: u32,
    /// Effective capacitance coefficient.
    pub kappa: f64,
    /// UAV transmit power, W.
    #[serde(rename = "P_U")]
    pub p_tx: f64,
    /// Channel bandwidth, Hz.
    #[serde(rename = "W_hz")]
    pub bandwidth: f64,
    /// Noise power, W.
    pub sigma2: f64,
    pub propulsion: PropulsionParams,
    pub pathloss: PathlossParams,
    /// Ground position of the BS. `None` places it at the area center.
    pub bs_position: Option<[f64; 2]>,
    /// Candidate arrival probabilities; each SD draws one uniformly.
    pub bernoulli_set: Vec<f64>,
    pub offload_mode: OffloadMode,
    pub include_propulsion_in_reward: bool,
    pub pathloss_sign: PathlossSign,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            slots: 300,
            tau: 1.0,
            area_x: 400.0,
            area_y: 400.0,
            num_devices: 60,
            altitude: 30.0,
            v_max: 30.0,
            d_max: 30.0,
            theta_max: std::f64::consts::FRAC_PI_4,
            alpha_bits: 4.0e7,
            beta_cycles: 1.0e9,
            f_uav: 1.0e9,
            sd_queue_cap: 5,
            uav_queue_cap: 10,
            kappa: 1e-26,
            p_tx: 1.0,
            bandwidth: 1.0e7,
            sigma2: 1e-6,
            propulsion: PropulsionParams::default(),
            pathloss: PathlossParams::default(),
            bs_position: None,
            bernoulli_set: vec![0.3, 0.5, 0.7],
            offload_mode: OffloadMode::Myopic,
            include_propulsion_in_reward: true,
            pathloss_sign: PathlossSign::Attenuation,
        }
    }
}

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SimConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn bs_position(&self) -> [f64; 2] {
        self.bs_position
            .unwrap_or([self.area_x / 2.0, self.area_y / 2.0])
    }

    /// Tasks the UAV can finish locally within one slot.
    pub fn local_capacity(&self) -> u32 {
        (self.tau * self.f_uav / self.beta_cycles).floor() as u32
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: &str| Err(Error::Config(m.to_string()));
        if self.num_devices == 0 {
            return err("K must be at least 1");
        }
        if self.slots == 0 {
            return err("T must be at least 1");
        }
        let positive = [
            ("tau", self.tau),
            ("area_x", self.area_x),
            ("area_y", self.area_y),
            ("H", self.altitude),
            ("v_max", self.v_max),
            ("d_max", self.d_max),
            ("alpha_bits", self.alpha_bits),
            ("beta_cycles", self.beta_cycles),
            ("f_U", self.f_uav),
            ("kappa", self.kappa),
            ("P_U", self.p_tx),
            ("W_hz", self.bandwidth),
            ("sigma2", self.sigma2),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if !(self.theta_max > 0.0 && self.theta_max < std::f64::consts::FRAC_PI_2) {
            return err("theta_max must lie in (0, pi/2)");
        }
        if (self.d_max - self.v_max * self.tau).abs() > 1e-9 * self.d_max.max(1.0) {
            return Err(Error::Config(format!(
                "d_max ({}) must equal v_max * tau ({})",
                self.d_max,
                self.v_max * self.tau
            )));
        }
        if self.uav_queue_cap == 0 || self.sd_queue_cap == 0 {
            return err("queue capacities must be at least 1");
        }
        if self.bernoulli_set.is_empty()
            || self.bernoulli_set.iter().any(|p| !(0.0..=1.0).contains(p))
        {
            return err("bernoulli_set must be non-empty with entries in [0, 1]");
        }
        let [bx, by] = self.bs_position();
        if !(bx.is_finite() && by.is_finite()) {
            return err("bs_position must be finite");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = SimConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.local_capacity(), 1);
        assert_eq!(cfg.bs_position(), [200.0, 200.0]);
    }

    #[test]
    fn json_uses_symbol_names_and_partial_documents() {
        let cfg = SimConfig::from_json(r#"{"T": 100, "K": 20, "H": 50, "offload_mode": "backlog",
            "propulsion": {"P1": 1.0}}"#)
        .unwrap();
        assert_eq!(cfg.slots, 100);
        assert_eq!(cfg.num_devices, 20);
        assert_eq!(cfg.altitude, 50.0);
        assert_eq!(cfg.offload_mode, OffloadMode::Backlog);
        assert_eq!(cfg.propulsion.p1, 1.0);
        assert_eq!(cfg.propulsion.p2, 88.63);
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"f_U\""));
        assert_eq!(SimConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = |f: &dyn Fn(&mut SimConfig)| {
            let mut c = SimConfig::default();
            f(&mut c);
            assert!(matches!(c.validate(), Err(Error::Config(_))));
        };
        bad(&|c| c.num_devices = 0);
        bad(&|c| c.area_x = 0.0);
        bad(&|c| c.theta_max = std::f64::consts::FRAC_PI_2);
        bad(&|c| c.d_max = 10.0);
        bad(&|c| c.bernoulli_set = vec![1.5]);
        bad(&|c| c.sigma2 = -1.0);
    }
}
