//! Dense tanh networks with hand-written reverse-mode gradients, Adam, and
//! the Gaussian policy / vector value heads used by the PPO learner.

mod adam;
mod mlp;
mod policy;

pub use adam::AdamState;
pub use mlp::{ForwardCache, Mlp, OutputActivation};
pub use policy::{
    GaussianPolicy, ObsActionMap, PolicySample, ValueNet, ACTION_DIM, LOG_STD_MAX, LOG_STD_MIN,
    OBS_DIM,
};

/// Hidden layer widths used throughout.
pub const HIDDEN: [usize; 2] = [64, 64];
