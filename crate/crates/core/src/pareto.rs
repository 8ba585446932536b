//! Pareto dominance primitives. Every objective is maximized.

use std::cmp::Ordering;

/// `a` dominates `b`: no worse everywhere and strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return false;
        }
        if x > y {
            strictly = true;
        }
    }
    strictly
}

/// Indices of the mutually nondominated points, in input order. Points with
/// identical vectors are kept once (first occurrence).
pub fn nondominated_indices<P: AsRef<[f64]>>(points: &[P]) -> Vec<usize> {
    let mut keep = Vec::new();
    'outer: for (i, p) in points.iter().enumerate() {
        let p = p.as_ref();
        for (j, q) in points.iter().enumerate() {
            let q = q.as_ref();
            if i != j && (dominates(q, p) || (j < i && q == p)) {
                continue 'outer;
            }
        }
        keep.push(i);
    }
    keep
}

/// Fast nondominated sort. Returns fronts of indices, best front first.
pub fn fast_nondominated_sort<P: AsRef<[f64]>>(points: &[P]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut counts = vec![0usize; n];
    let mut fronts = vec![Vec::new()];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = (points[i].as_ref(), points[j].as_ref());
            if dominates(a, b) {
                dominated_by[i].push(j);
            } else if dominates(b, a) {
                counts[i] += 1;
            }
        }
        if counts[i] == 0 {
            fronts[0].push(i);
        }
    }
    let mut k = 0;
    while !fronts[k].is_empty() {
        let mut next = Vec::new();
        for &i in &fronts[k] {
            for &j in &dominated_by[i] {
                counts[j] -= 1;
                if counts[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(next);
        k += 1;
    }
    fronts.pop();
    fronts
}

/// Crowding distance of each member of one front (given as indices into
/// `points`). Boundary points get `f64::INFINITY`.
pub fn crowding_distance<P: AsRef<[f64]>>(points: &[P], front: &[usize]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = points[front[0]].as_ref().len();
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        let val = |i: usize| points[front[i]].as_ref()[k];
        order.sort_by(|&a, &b| val(a).partial_cmp(&val(b)).unwrap_or(Ordering::Equal));
        let (lo, hi) = (val(order[0]), val(order[n - 1]));
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let span = hi - lo;
        if span <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            dist[order[w]] += (val(order[w + 1]) - val(order[w - 1])) / span;
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from;
    use rand::Rng;

    #[test]
    fn dominance_basics() {
        assert!(dominates(&[2.0, 2.0, 2.0], &[1.0, 1.0, 1.0]));
        assert!(dominates(&[1.0, 2.0, 1.0], &[1.0, 1.0, 1.0]));
        assert!(!dominates(&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]));
        assert!(!dominates(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]));
    }

    #[test]
    fn hand_sorted_example() {
        let pts = [[1.0, 1.0, 1.0], [2.0, 2.0, 2.0], [1.0, 3.0, 0.0]];
        let fronts = fast_nondominated_sort(&pts);
        assert_eq!(fronts, vec![vec![1, 2], vec![0]]);
        assert_eq!(nondominated_indices(&pts), vec![1, 2]);
    }

    #[test]
    fn duplicates_are_kept_once() {
        let pts = [[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]];
        assert_eq!(nondominated_indices(&pts), vec![0]);
        // Duplicates share a rank in the sort.
        assert_eq!(fast_nondominated_sort(&pts), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn crowding_boundaries_are_infinite() {
        let pts = [[0.0, 3.0], [1.0, 2.0], [2.0, 1.0], [3.0, 0.0]];
        let d = crowding_distance(&pts, &[0, 1, 2, 3]);
        assert!(d[0].is_infinite() && d[3].is_infinite());
        assert!((d[1] - (2.0 / 3.0 + 2.0 / 3.0)).abs() < 1e-12);
        assert!(crowding_distance(&pts, &[0, 1]).iter().all(|v| v.is_infinite()));
    }

    #[test]
    fn sort_matches_brute_force_rank() {
        let mut rng = rng_from(8);
        for _ in 0..20 {
            let pts: Vec<[f64; 3]> = (0..60)
                .map(|_| [0; 3].map(|_| rng.random_range(0..6) as f64))
                .collect();
            let fronts = fast_nondominated_sort(&pts);
            // rank(i) = 0 if nobody dominates it, else 1 + max rank of its dominators
            let n = pts.len();
            let mut rank = vec![usize::MAX; n];
            let mut assigned = 0;
            let mut r = 0;
            while assigned < n {
                let layer: Vec<usize> = (0..n)
                    .filter(|&i| rank[i] == usize::MAX)
                    .filter(|&i| (0..n).all(|j| rank[j] != usize::MAX && rank[j] < r || !dominates(&pts[j], &pts[i]) || j == i))
                    .collect();
                for &i in &layer {
                    rank[i] = r;
                }
                assigned += layer.len();
                r += 1;
            }
            for (k, f) in fronts.iter().enumerate() {
                for &i in f {
                    assert_eq!(rank[i], k);
                }
            }
            assert_eq!(fronts.iter().map(Vec::len).sum::<usize>(), n);
        }
    }
}
