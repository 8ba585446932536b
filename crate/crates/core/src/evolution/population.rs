use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use super::eval::PolicyEvaluation;
use super::lattice::WeightLattice;
use crate::mmppo::LearningTask;
use crate::seed::{label, rng_from};
use crate::{Error, Objectives, Result};

/// A learning task together with its evaluation and a unique id.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Member {
    pub id: u64,
    pub task: LearningTask,
    pub eval: PolicyEvaluation,
}

/// Direction-indexed performance buffers; `members` is their union.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaskPopulation {
    pub directions: Vec<Objectives>,
    pub p_size: usize,
    /// Componentwise minimum of every evaluation seen so far.
    pub z_ref: Option<Objectives>,
    pub members: Vec<Member>,
}

impl TaskPopulation {
    pub fn new(directions: Vec<Objectives>, p_size: usize) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::Config("at least one buffer direction is required".into()));
        }
        if p_size == 0 {
            return Err(Error::Config("buffer size must be positive".into()));
        }
        Ok(Self { directions, p_size, z_ref: None, members: Vec::new() })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `count` directions drawn uniformly from the simplex with a fixed seed.
pub fn buffer_directions(count: usize) -> Vec<Objectives> {
    let mut rng = rng_from(label("performance-buffer-directions"));
    (0..count)
        .map(|_| {
            let e: [f64; 3] = [0; 3].map(|_| Exp1.sample(&mut rng));
            let s: f64 = e.iter().sum();
            e.map(|v| v / s)
        })
        .collect()
}

fn argmax_dot(candidates: &[Objectives], f: &Objectives) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (j, w) in candidates.iter().enumerate() {
        let v = w[0] * f[0] + w[1] * f[1] + w[2] * f[2];
        if v > best_v {
            best_v = v;
            best = j;
        }
    }
    best
}

/// Buffer assignment and truncation. Each point goes to the direction
/// maximizing `w_j . (F - z_ref)`; each buffer keeps its `p_size` points
/// farthest from `z_ref` (stable for equal distances). Returns the kept
/// indices grouped by buffer.
pub fn assign_and_truncate(
    points: &[Objectives],
    z_ref: &Objectives,
    directions: &[Objectives],
    p_size: usize,
) -> Vec<usize> {
    let mut buffers: Vec<Vec<(usize, f64)>> = vec![Vec::new(); directions.len()];
    for (i, f) in points.iter().enumerate() {
        let temp = [0, 1, 2].map(|k| f[k] - z_ref[k]);
        let dist = temp.iter().map(|v| v * v).sum::<f64>().sqrt();
        buffers[argmax_dot(directions, &temp)].push((i, dist));
    }
    let mut kept = Vec::new();
    for mut b in buffers {
        b.sort_by(|x, y| y.1.total_cmp(&x.1));
        kept.extend(b.into_iter().take(p_size).map(|(i, _)| i));
    }
    kept
}

/// Merges evaluated offspring into the population.
pub fn update_population(pop: &mut TaskPopulation, offspring: Vec<Member>) {
    let mut all = std::mem::take(&mut pop.members);
    all.extend(offspring);
    if all.is_empty() {
        return;
    }
    let mut z = pop.z_ref.unwrap_or([f64::INFINITY; 3]);
    for m in &all {
        for k in 0..3 {
            z[k] = z[k].min(m.eval.returns[k]);
        }
    }
    pop.z_ref = Some(z);
    let points: Vec<Objectives> = all.iter().map(|m| m.eval.returns).collect();
    let kept = assign_and_truncate(&points, &z, &pop.directions, pop.p_size);
    let mut slots: Vec<Option<Member>> = all.into_iter().map(Some).collect();
    pop.members = kept.into_iter().map(|i| slots[i].take().expect("each index kept once")).collect();
}

/// For each weight, the index of the population member maximizing `w . F`
/// (lowest index on ties).
pub fn select_indices(points: &[Objectives], weights: &[Objectives]) -> Vec<usize> {
    weights.iter().map(|w| argmax_dot(points, w)).collect()
}

/// Clones the best member for each lattice weight and gives it that weight.
pub fn select_tasks(pop: &TaskPopulation, lattice: &WeightLattice) -> Result<Vec<LearningTask>> {
    if pop.is_empty() {
        return Err(Error::Empty("task population"));
    }
    let weights = lattice.triples()?;
    let points: Vec<Objectives> = pop.members.iter().map(|m| m.eval.returns).collect();
    Ok(select_indices(&points, &weights)
        .into_iter()
        .zip(weights)
        .map(|(i, w)| {
            let mut t = pop.members[i].task.clone();
            t.weight = w;
            t
        })
        .collect())
}

#[cfg(test)]
pub(crate) fn dummy_task<R: rand::Rng + ?Sized>(rng: &mut R) -> LearningTask {
    let io = crate::neural::ObsActionMap::for_config(&crate::sim::SimConfig::default());
    LearningTask::new([1.0, 0.0, 0.0], io, 1e-4, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::generate_weight_lattice;
    use rand::Rng;

    fn member(id: u64, f: Objectives, task: &LearningTask) -> Member {
        Member { id, task: task.clone(), eval: PolicyEvaluation { returns: f, raw: [0.0; 3] } }
    }

    #[test]
    fn keeps_farthest_in_a_full_buffer() {
        let kept = assign_and_truncate(&[[5.0, 0.0, 0.0], [1.0, 0.0, 0.0], [3.0, 0.0, 0.0]], &[0.0; 3], &[[1.0, 0.0, 0.0]], 2);
        assert_eq!(kept, vec![0, 2]);
    }

    #[test]
    fn single_task_population() {
        let t = dummy_task(&mut rng_from(1));
        let mut pop = TaskPopulation::new(buffer_directions(200), 2).unwrap();
        update_population(&mut pop, vec![member(7, [-3.0, -1.0, 2.0], &t)]);
        assert_eq!(pop.len(), 1);
        assert_eq!(pop.members[0].id, 7);
        assert_eq!(pop.z_ref, Some([-3.0, -1.0, 2.0]));
    }

    #[test]
    fn directions_lie_on_simplex_and_are_fixed() {
        let d = buffer_directions(200);
        assert_eq!(d, buffer_directions(200));
        for w in &d {
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(w.iter().all(|v| *v >= 0.0));
        }
    }

    #[test]
    fn matches_brute_force_assignment() {
        let mut rng = rng_from(2);
        let dirs: Vec<Objectives> = buffer_directions(8);
        for _ in 0..30 {
            let pts: Vec<Objectives> = (0..50).map(|_| [0; 3].map(|_| rng.random_range(-10.0..10.0))).collect();
            let z = [0, 1, 2].map(|k| pts.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min));
            let kept = assign_and_truncate(&pts, &z, &dirs, 2);
            // brute force: a point is kept iff fewer than 2 points of its buffer are strictly
            // farther, or equally far but earlier
            let buf = |p: &Objectives| {
                let t = [p[0] - z[0], p[1] - z[1], p[2] - z[2]];
                let mut best = 0;
                for j in 1..dirs.len() {
                    let dot = |w: &Objectives| w[0] * t[0] + w[1] * t[1] + w[2] * t[2];
                    if dot(&dirs[j]) > dot(&dirs[best]) {
                        best = j;
                    }
                }
                best
            };
            let dist = |p: &Objectives| ((p[0] - z[0]).powi(2) + (p[1] - z[1]).powi(2) + (p[2] - z[2]).powi(2)).sqrt();
            let mut want: Vec<usize> = (0..pts.len())
                .filter(|&i| {
                    let ahead = (0..pts.len())
                        .filter(|&j| {
                            buf(&pts[j]) == buf(&pts[i])
                                && (dist(&pts[j]) > dist(&pts[i]) || (dist(&pts[j]) == dist(&pts[i]) && j < i))
                        })
                        .count();
                    ahead < 2
                })
                .collect();
            let mut got = kept.clone();
            got.sort();
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn selection_rules() {
        assert_eq!(select_indices(&[[5.0, 0.0, 0.0], [4.0, 9.0, 9.0]], &[[1.0, 0.0, 0.0]]), vec![0]);
        assert_eq!(select_indices(&[[1.0; 3], [1.0; 3]], &[[0.2, 0.3, 0.5]]), vec![0]);
        let mut rng = rng_from(3);
        let pts: Vec<Objectives> = (0..40).map(|_| [0; 3].map(|_| rng.random_range(0..5) as f64)).collect();
        let w = generate_weight_lattice(3, 4).unwrap().triples().unwrap();
        let got = select_indices(&pts, &w);
        for (wi, &g) in w.iter().zip(&got) {
            let vals: Vec<f64> = pts.iter().map(|p| wi[0] * p[0] + wi[1] * p[1] + wi[2] * p[2]).collect();
            let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(g, vals.iter().position(|v| *v == max).unwrap());
        }
    }

    #[test]
    fn select_tasks_covers_every_weight() {
        let t = dummy_task(&mut rng_from(4));
        let lattice = generate_weight_lattice(3, 4).unwrap();
        let mut pop = TaskPopulation::new(buffer_directions(10), 2).unwrap();
        assert!(select_tasks(&pop, &lattice).is_err());
        update_population(&mut pop, vec![member(0, [1.0, 2.0, 3.0], &t)]);
        let tasks = select_tasks(&pop, &lattice).unwrap();
        assert_eq!(tasks.len(), 15);
        let weights: Vec<Objectives> = tasks.iter().map(|t| t.weight).collect();
        assert_eq!(weights, lattice.triples().unwrap());
        assert!(tasks.iter().all(|x| x.target.mean.params() == t.target.mean.params()));
    }
}
