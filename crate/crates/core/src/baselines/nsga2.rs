use std::time::Instant;

use rand::Rng;

use super::chromosome::{evaluate_batch, Chromosome, GaConfig, GaFront};
use super::operators::{reset_mutation, sbx_crossover};
use crate::pareto::{crowding_distance, fast_nondominated_sort};
use crate::seed::rng_from;
use crate::sim::EnvFactory;
use crate::Result;

/// Picks `size` survivors: whole fronts by rank, the last partial front by
/// descending crowding distance. Returns their indices and each one's
/// (rank, crowding) pair.
pub fn environmental_selection(points: &[Vec<f64>], size: usize) -> Vec<(usize, usize, f64)> {
    let mut chosen = Vec::with_capacity(size);
    for (rank, front) in fast_nondominated_sort(points).into_iter().enumerate() {
        if chosen.len() >= size {
            break;
        }
        let crowd = crowding_distance(points, &front);
        let mut order: Vec<usize> = (0..front.len()).collect();
        if chosen.len() + front.len() > size {
            order.sort_by(|&a, &b| crowd[b].total_cmp(&crowd[a]));
        }
        for k in order.into_iter().take(size - chosen.len()) {
            chosen.push((front[k], rank, crowd[k]));
        }
    }
    chosen
}

fn tournament<R: Rng + ?Sized>(info: &[(usize, f64)], rng: &mut R) -> usize {
    let a = rng.random_range(0..info.len());
    let b = rng.random_range(0..info.len());
    let better = |x: usize, y: usize| info[x].0 < info[y].0 || (info[x].0 == info[y].0 && info[x].1 > info[y].1);
    if better(b, a) {
        b
    } else {
        a
    }
}

/// NSGA-II over direct-encoded chromosomes.
pub fn nsga2_run(env: &EnvFactory, cfg: &GaConfig, seed: u64, eval_seeds: &[u64], gamma: f64) -> Result<GaFront> {
    cfg.validate()?;
    env.cfg.validate()?;
    let started = Instant::now();
    let mut rng = rng_from(seed);
    let len = 3 * env.cfg.slots;
    let genomes: Vec<Vec<f64>> =
        (0..cfg.pop_size).map(|_| (0..len).map(|_| rng.random()).collect()).collect();
    let mut pop: Vec<Chromosome> = evaluate_batch(genomes, env, eval_seeds, gamma)?;
    let mut evaluations = pop.len();
    let project = |c: &Chromosome| cfg.objectives.project(&c.eval.returns);
    let mut info: Vec<(usize, f64)> = {
        let pts: Vec<Vec<f64>> = pop.iter().map(project).collect();
        let mut v = vec![(0, 0.0); pop.len()];
        for (i, r, c) in environmental_selection(&pts, pop.len()) {
            v[i] = (r, c);
        }
        v
    };
    let mut generation = 0;
    while cfg.keep_going(generation, started) {
        let mut children = Vec::with_capacity(cfg.pop_size);
        while children.len() < cfg.pop_size {
            let p1 = &pop[tournament(&info, &mut rng)].genes;
            let p2 = &pop[tournament(&info, &mut rng)].genes;
            let (mut c1, mut c2) = if rng.random_bool(cfg.crossover_prob) {
                sbx_crossover(p1, p2, cfg.eta_c, &mut rng)
            } else {
                (p1.clone(), p2.clone())
            };
            reset_mutation(&mut c1, cfg.mutation_prob, &mut rng);
            reset_mutation(&mut c2, cfg.mutation_prob, &mut rng);
            children.push(c1);
            if children.len() < cfg.pop_size {
                children.push(c2);
            }
        }
        let evaluated = evaluate_batch(children, env, eval_seeds, gamma)?;
        evaluations += evaluated.len();
        pop.extend(evaluated);
        let pts: Vec<Vec<f64>> = pop.iter().map(project).collect();
        let survivors = environmental_selection(&pts, cfg.pop_size);
        let mut slots: Vec<Option<Chromosome>> = pop.into_iter().map(Some).collect();
        pop = Vec::with_capacity(cfg.pop_size);
        info = Vec::with_capacity(cfg.pop_size);
        for (i, r, c) in survivors {
            pop.push(slots[i].take().expect("survivor chosen once"));
            info.push((r, c));
        }
        generation += 1;
    }
    Ok(GaFront::from_candidates(&pop, cfg.objectives, generation, evaluations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pareto::dominates;
    use crate::sim::SimConfig;

    #[test]
    fn selection_fills_by_rank_then_crowding() {
        let pts = vec![vec![1.0, 1.0, 1.0], vec![2.0, 2.0, 2.0], vec![1.0, 3.0, 0.0]];
        let s = environmental_selection(&pts, 3);
        let ranks: Vec<(usize, usize)> = s.iter().map(|x| (x.0, x.1)).collect();
        assert_eq!(ranks, vec![(1, 0), (2, 0), (0, 1)]);
        let two = vec![vec![0.0, 4.0], vec![1.0, 3.0], vec![2.0, 2.0], vec![3.0, 1.0], vec![4.0, 0.0]];
        let s = environmental_selection(&two, 3);
        let idx: Vec<usize> = s.iter().map(|x| x.0).collect();
        assert!(idx.contains(&0) && idx.contains(&4));
    }

    fn small() -> (EnvFactory, GaConfig) {
        let cfg = SimConfig { slots: 6, num_devices: 4, area_x: 200.0, area_y: 200.0, ..Default::default() };
        (EnvFactory::new(cfg, 8), GaConfig { pop_size: 12, generations: 5, ..Default::default() })
    }

    #[test]
    fn front_is_nondominated_and_deterministic() {
        let (env, cfg) = small();
        let a = nsga2_run(&env, &cfg, 3, &[1, 2], 0.995).unwrap();
        let b = nsga2_run(&env, &cfg, 3, &[1, 2], 0.995).unwrap();
        assert_eq!(a.members, b.members);
        assert_eq!(a.generations, 5);
        assert_eq!(a.evaluations, 72);
        let pts = a.points();
        for p in &pts {
            assert!(pts.iter().all(|q| !dominates(q, p)));
        }
        assert!(a.members.iter().all(|c| c.genes.iter().all(|g| (0.0..=1.0).contains(g))));
    }
}
