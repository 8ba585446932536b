use std::time::Instant;

use rand::Rng;

use super::chromosome::{evaluate_batch, Chromosome, GaConfig, GaFront};
use super::operators::{reset_mutation, sbx_crossover};
use crate::evolution::generate_weight_lattice;
use crate::pareto::dominates;
use crate::seed::rng_from;
use crate::sim::EnvFactory;
use crate::{Error, Result};

/// Tchebycheff scalarization `max_k w_k |z_k - f_k|` (smaller is better).
pub fn tchebycheff(w: &[f64], f: &[f64], z: &[f64]) -> f64 {
    w.iter()
        .zip(f)
        .zip(z)
        .map(|((w, f), z)| w * (z - f).abs())
        .fold(0.0, f64::max)
}

/// The first `count` vectors of the smallest simplex lattice holding at least `count`.
pub fn moead_weights(m: usize, count: usize) -> Result<Vec<Vec<f64>>> {
    if count == 0 {
        return Err(Error::Config("MOEA/D needs at least one subproblem".into()));
    }
    let mut delta = 1;
    loop {
        let l = generate_weight_lattice(m, delta)?;
        if l.len() >= count {
            return Ok(l.weights.into_iter().take(count).collect());
        }
        delta += 1;
    }
}

/// For each weight, the indices of its `t` nearest weights (itself included),
/// nearest first, ties by index.
pub fn moead_neighbors(weights: &[Vec<f64>], t: usize) -> Vec<Vec<usize>> {
    weights
        .iter()
        .map(|w| {
            let mut d: Vec<(usize, f64)> = weights
                .iter()
                .enumerate()
                .map(|(j, v)| (j, w.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()))
                .collect();
            d.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            d.into_iter().take(t).map(|(j, _)| j).collect()
        })
        .collect()
}

/// Indices of the neighbors whose incumbent is strictly worse than `child`
/// under their own Tchebycheff scalarization.
pub fn replace_neighbors(
    incumbents: &[Vec<f64>],
    child: &[f64],
    neighbors: &[usize],
    weights: &[Vec<f64>],
    z: &[f64],
) -> Vec<usize> {
    neighbors
        .iter()
        .copied()
        .filter(|&j| tchebycheff(&weights[j], child, z) < tchebycheff(&weights[j], &incumbents[j], z))
        .collect()
}

fn archive_insert(archive: &mut Vec<Chromosome>, c: &Chromosome, project: &dyn Fn(&Chromosome) -> Vec<f64>) {
    let f = project(c);
    if archive.iter().any(|a| {
        let g = project(a);
        g == f || dominates(&g, &f)
    }) {
        return;
    }
    archive.retain(|a| !dominates(&f, &project(a)));
    archive.push(c.clone());
}

/// MOEA/D with Tchebycheff decomposition and an external nondominated archive.
pub fn moead_run(env: &EnvFactory, cfg: &GaConfig, seed: u64, eval_seeds: &[u64], gamma: f64) -> Result<GaFront> {
    cfg.validate()?;
    env.cfg.validate()?;
    let started = Instant::now();
    let m = cfg.objectives.count();
    let weights = moead_weights(m, cfg.pop_size)?;
    let hood = moead_neighbors(&weights, cfg.neighbors.clamp(2, cfg.pop_size));
    let mut rng = rng_from(seed);
    let len = 3 * env.cfg.slots;
    let genomes: Vec<Vec<f64>> =
        (0..cfg.pop_size).map(|_| (0..len).map(|_| rng.random()).collect()).collect();
    let mut pop = evaluate_batch(genomes, env, eval_seeds, gamma)?;
    let mut evaluations = pop.len();
    let project = |c: &Chromosome| cfg.objectives.project(&c.eval.returns);
    let mut objs: Vec<Vec<f64>> = pop.iter().map(project).collect();
    let mut z: Vec<f64> = (0..m).map(|k| objs.iter().map(|f| f[k]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let mut archive: Vec<Chromosome> = Vec::new();
    for c in &pop {
        archive_insert(&mut archive, c, &project);
    }
    let mut worker = env.build()?;
    let mut generation = 0;
    while cfg.keep_going(generation, started) {
        for i in 0..cfg.pop_size {
            let b = &hood[i];
            let k = rng.random_range(0..b.len());
            let mut l = rng.random_range(0..b.len() - 1);
            if l >= k {
                l += 1;
            }
            let (p1, p2) = (&pop[b[k]].genes, &pop[b[l]].genes);
            let mut child = if rng.random_bool(cfg.crossover_prob) {
                sbx_crossover(p1, p2, cfg.eta_c, &mut rng).0
            } else {
                p1.clone()
            };
            reset_mutation(&mut child, cfg.mutation_prob, &mut rng);
            let eval = super::chromosome::evaluate_chromosome(&child, &mut worker, eval_seeds, gamma)?;
            evaluations += 1;
            let c = Chromosome { genes: child, eval };
            let f = project(&c);
            for k in 0..m {
                z[k] = z[k].max(f[k]);
            }
            for j in replace_neighbors(&objs, &f, b, &weights, &z) {
                pop[j] = c.clone();
                objs[j] = f.clone();
            }
            archive_insert(&mut archive, &c, &project);
        }
        generation += 1;
    }
    Ok(GaFront::from_candidates(&archive, cfg.objectives, generation, evaluations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::SimConfig;

    #[test]
    fn tchebycheff_single_active_term() {
        assert_eq!(tchebycheff(&[1.0, 0.0, 0.0], &[2.0, -50.0, 9.0], &[5.0, 0.0, 0.0]), 3.0);
    }

    #[test]
    fn weights_truncate_lattice() {
        let w = moead_weights(3, 100).unwrap();
        assert_eq!(w.len(), 100);
        assert_eq!(w, generate_weight_lattice(3, 13).unwrap().weights[..100].to_vec());
        assert_eq!(moead_weights(2, 100).unwrap().len(), 100);
    }

    #[test]
    fn neighbors_match_exhaustive_distances() {
        let w = moead_weights(3, 100).unwrap();
        let hood = moead_neighbors(&w, 10);
        for (i, b) in hood.iter().enumerate() {
            assert_eq!(b.len(), 10);
            assert_eq!(b[0], i);
            let d = |j: usize| w[i].iter().zip(&w[j]).map(|(a, c)| (a - c).powi(2)).sum::<f64>();
            let worst_in = b.iter().map(|&j| d(j)).fold(0.0, f64::max);
            let best_out = (0..100).filter(|j| !b.contains(j)).map(d).fold(f64::INFINITY, f64::min);
            assert!(worst_in <= best_out);
        }
    }

    #[test]
    fn no_improving_child_replaces_nothing() {
        let w = vec![vec![1.0, 0.0], vec![0.5, 0.5], vec![0.0, 1.0]];
        let inc = vec![vec![0.0, 0.0], vec![0.0, 0.0], vec![0.0, 0.0]];
        let z = vec![0.0, 0.0];
        assert!(replace_neighbors(&inc, &[-1.0, -1.0], &[0, 1, 2], &w, &z).is_empty());
        assert_eq!(replace_neighbors(&inc, &[0.5, -1.0], &[0, 1, 2], &w, &[0.5, 0.0]), vec![0]);
    }

    #[test]
    fn front_is_nondominated_and_deterministic() {
        let cfg = SimConfig { slots: 6, num_devices: 4, area_x: 200.0, area_y: 200.0, ..Default::default() };
        let env = EnvFactory::new(cfg, 8);
        let ga = GaConfig { pop_size: 12, generations: 3, neighbors: 4, ..Default::default() };
        let a = moead_run(&env, &ga, 4, &[1, 2], 0.995).unwrap();
        let b = moead_run(&env, &ga, 4, &[1, 2], 0.995).unwrap();
        assert_eq!(a.members, b.members);
        assert_eq!(a.evaluations, 48);
        let pts = a.points();
        for p in &pts {
            assert!(pts.iter().all(|q| !dominates(q, p)));
        }
    }
}
