use rand::Rng;

/// Simulated binary crossover on genes bounded to [0, 1], applied to each
/// gene pair with probability one half.
pub fn sbx_crossover<R: Rng + ?Sized>(a: &[f64], b: &[f64], eta: f64, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    for i in 0..a.len() {
        if !rng.random_bool(0.5) || (a[i] - b[i]).abs() < 1e-14 {
            continue;
        }
        let (y1, y2) = if a[i] < b[i] { (a[i], b[i]) } else { (b[i], a[i]) };
        let u: f64 = rng.random();
        let spread = |beta: f64| {
            let alpha = 2.0 - beta.powf(-(eta + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(1.0 / (eta + 1.0))
            } else {
                (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
            }
        };
        let lo = 0.5 * ((y1 + y2) - spread(1.0 + 2.0 * y1 / (y2 - y1)) * (y2 - y1));
        let hi = 0.5 * ((y1 + y2) + spread(1.0 + 2.0 * (1.0 - y2) / (y2 - y1)) * (y2 - y1));
        let (lo, hi) = (lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0));
        if rng.random_bool(0.5) {
            c1[i] = hi;
            c2[i] = lo;
        } else {
            c1[i] = lo;
            c2[i] = hi;
        }
    }
    (c1, c2)
}

/// With probability `prob` the chromosome is mutated: each gene is then
/// redrawn uniformly from [0, 1] with probability `1 / len`.
pub fn reset_mutation<R: Rng + ?Sized>(genes: &mut [f64], prob: f64, rng: &mut R) {
    if genes.is_empty() || !rng.random_bool(prob) {
        return;
    }
    let rate = 1.0 / genes.len() as f64;
    for g in genes.iter_mut() {
        if rng.random_bool(rate) {
            *g = rng.random();
        }
    }
}
