use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputActivation {
    Sigmoid,
    Identity,
}

/// Fully connected network with tanh hidden layers.
///
/// Parameters live in one flat vector, layer by layer, each layer stored as
/// its row-major weight matrix (`out x in`) followed by its bias.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mlp {
    dims: Vec<usize>,
    output: OutputActivation,
    params: Vec<f64>,
    #[serde(skip)]
    version: u64,
}

/// Activations recorded by [`Mlp::forward_cached`], consumed by [`Mlp::backward`].
#[derive(Debug, Clone)]
pub struct ForwardCache {
    version: u64,
    /// Input followed by the post-activation output of every layer.
    activations: Vec<Vec<f64>>,
}

impl ForwardCache {
    pub fn output(&self) -> &[f64] {
        self.activations.last().expect("cache holds at least the input")
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn param_count(dims: &[usize]) -> usize {
    dims.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
}

/// Random matrix with orthonormal rows (or columns, whichever is fewer), scaled by `gain`.
fn orthogonal<R: Rng + ?Sized>(rows: usize, cols: usize, gain: f64, rng: &mut R) -> Vec<f64> {
    let (n, len) = if rows <= cols { (rows, cols) } else { (cols, rows) };
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
            v.iter_mut().zip(b).for_each(|(a, c)| *a -= dot * c);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|a| *a /= norm);
            basis.push(v);
        }
    }
    let mut w = vec![0.0; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            w[r * cols + c] = gain * if rows <= cols { basis[r][c] } else { basis[c][r] };
        }
    }
    w
}

impl Mlp {
    /// Network with all parameters zero.
    pub fn zeros(dims: &[usize], output: OutputActivation) -> Result<Self> {
        if dims.len() < 2 || dims.contains(&0) {
            return Err(Error::Config(format!("invalid layer dims {dims:?}")));
        }
        Ok(Self {
            dims: dims.to_vec(),
            output,
            params: vec![0.0; param_count(dims)],
            version: 0,
        })
    }

    /// Orthogonal init: hidden layers with gain sqrt(2), the last layer with
    /// `final_gain`; biases zero.
    pub fn orthogonal<R: Rng + ?Sized>(
        dims: &[usize],
        output: OutputActivation,
        final_gain: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let mut net = Self::zeros(dims, output)?;
        let mut offset = 0;
        let layers = dims.len() - 1;
        for l in 0..layers {
            let (fan_in, fan_out) = (dims[l], dims[l + 1]);
            let gain = if l + 1 == layers { final_gain } else { std::f64::consts::SQRT_2 };
            let w = orthogonal(fan_out, fan_in, gain, rng);
            net.params[offset..offset + w.len()].copy_from_slice(&w);
            offset += fan_in * fan_out + fan_out;
        }
        Ok(net)
    }

    pub fn from_params(dims: &[usize], output: OutputActivation, params: Vec<f64>) -> Result<Self> {
        let mut net = Self::zeros(dims, output)?;
        if params.len() != net.params.len() {
            return Err(Error::Dimension { expected: net.params.len(), actual: params.len() });
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("network parameters"));
        }
        net.params = params;
        Ok(net)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn input_dim(&self) -> usize {
        self.dims[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.dims.last().unwrap()
    }

    pub fn output_activation(&self) -> OutputActivation {
        self.output
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Mutable parameter access. Invalidates outstanding forward caches.
    pub fn params_mut(&mut self) -> &mut [f64] {
        self.version = self.version.wrapping_add(1);
        &mut self.params
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut a = x.to_vec();
        let mut offset = 0;
        for l in 0..self.dims.len() - 1 {
            a = self.layer(l, &mut offset, &a);
        }
        Ok(a)
    }

    pub fn forward_cached(&self, x: &[f64]) -> Result<ForwardCache> {
        self.check_input(x)?;
        let mut activations = Vec::with_capacity(self.dims.len());
        activations.push(x.to_vec());
        let mut offset = 0;
        for l in 0..self.dims.len() - 1 {
            let next = self.layer(l, &mut offset, activations.last().unwrap());
            activations.push(next);
        }
        Ok(ForwardCache { version: self.version, activations })
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dims[0] {
            return Err(Error::Dimension { expected: self.dims[0], actual: x.len() });
        }
        Ok(())
    }

    fn layer(&self, l: usize, offset: &mut usize, input: &[f64]) -> Vec<f64> {
        let (fan_in, fan_out) = (self.dims[l], self.dims[l + 1]);
        let w = &self.params[*offset..*offset + fan_in * fan_out];
        let b = &self.params[*offset + fan_in * fan_out..*offset + fan_in * fan_out + fan_out];
        *offset += fan_in * fan_out + fan_out;
        let last = l + 2 == self.dims.len();
        (0..fan_out)
            .map(|r| {
                let row = &w[r * fan_in..(r + 1) * fan_in];
                let z = b[r] + row.iter().zip(input).map(|(a, c)| a * c).sum::<f64>();
                match (last, self.output) {
                    (false, _) => z.tanh(),
                    (true, OutputActivation::Sigmoid) => sigmoid(z),
                    (true, OutputActivation::Identity) => z,
                }
            })
            .collect()
    }

    /// Gradient of `output . upstream` with respect to every parameter.
    pub fn backward(&self, cache: &ForwardCache, upstream: &[f64]) -> Result<Vec<f64>> {
        let mut grads = vec![0.0; self.params.len()];
        self.backward_into(cache, upstream, &mut grads)?;
        Ok(grads)
    }

    /// Like [`backward`](Self::backward), accumulating into `grads`.
    pub fn backward_into(
        &self,
        cache: &ForwardCache,
        upstream: &[f64],
        grads: &mut [f64],
    ) -> Result<()> {
        if cache.version != self.version || cache.activations.len() != self.dims.len() {
            return Err(Error::StaleCache);
        }
        if upstream.len() != self.output_dim() {
            return Err(Error::Dimension { expected: self.output_dim(), actual: upstream.len() });
        }
        if grads.len() != self.params.len() {
            return Err(Error::Dimension { expected: self.params.len(), actual: grads.len() });
        }
        let layers = self.dims.len() - 1;
        let out = &cache.activations[layers];
        let mut delta: Vec<f64> = match self.output {
            OutputActivation::Sigmoid => upstream
                .iter()
                .zip(out)
                .map(|(g, y)| g * y * (1.0 - y))
                .collect(),
            OutputActivation::Identity => upstream.to_vec(),
        };
        let mut end = self.params.len();
        for l in (0..layers).rev() {
            let (fan_in, fan_out) = (self.dims[l], self.dims[l + 1]);
            let start = end - (fan_in * fan_out + fan_out);
            let input = &cache.activations[l];
            {
                let (gw, gb) = grads[start..end].split_at_mut(fan_in * fan_out);
                for r in 0..fan_out {
                    let d = delta[r];
                    if d == 0.0 {
                        continue;
                    }
                    gb[r] += d;
                    let row = &mut gw[r * fan_in..(r + 1) * fan_in];
                    row.iter_mut().zip(input).for_each(|(g, a)| *g += d * a);
                }
            }
            if l > 0 {
                let w = &self.params[start..start + fan_in * fan_out];
                let mut prev = vec![0.0; fan_in];
                for r in 0..fan_out {
                    let d = delta[r];
                    if d == 0.0 {
                        continue;
                    }
                    let row = &w[r * fan_in..(r + 1) * fan_in];
                    prev.iter_mut().zip(row).for_each(|(p, wv)| *p += d * wv);
                }
                // input is the tanh output of layer l-1
                prev.iter_mut().zip(input).for_each(|(p, a)| *p *= 1.0 - a * a);
                delta = prev;
            }
            end = start;
        }
        Ok(())
    }
}
