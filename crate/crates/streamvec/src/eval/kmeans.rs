//! Seeded k-means with k-means++ initialization, used by the categorization
//! evaluator. Reproducibility over speed: fixed seed, fixed restart count,
//! deterministic tie-breaking (lowest index wins).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::w2v::derive_seed;

const MAX_ITER: usize = 100;

#[derive(Debug, Clone)]
pub struct KmeansResult {
    pub assignments: Vec<usize>,
    pub inertia: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in centroids.iter().enumerate() {
        let d = sq_dist(point, c);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    (best, best_d)
}

fn kmeans_pp_init(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids = Vec::with_capacity(k);
    centroids.push(points[rng.random_range(0..points.len())].clone());
    while centroids.len() < k {
        let dists: Vec<f64> = points.iter().map(|p| nearest(p, &centroids).1).collect();
        let total: f64 = dists.iter().sum();
        if total == 0.0 {
            // All points coincide with a centroid; any choice is equivalent.
            centroids.push(points[rng.random_range(0..points.len())].clone());
            continue;
        }
        let mut target = rng.random::<f64>() * total;
        let mut chosen = points.len() - 1;
        for (i, d) in dists.iter().enumerate() {
            target -= d;
            if target <= 0.0 {
                chosen = i;
                break;
            }
        }
        centroids.push(points[chosen].clone());
    }
    centroids
}

fn lloyd(points: &[Vec<f64>], mut centroids: Vec<Vec<f64>>) -> KmeansResult {
    let dim = points[0].len();
    let k = centroids.len();
    let mut assignments = vec![usize::MAX; points.len()];
    for _ in 0..MAX_ITER {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let (c, _) = nearest(p, &centroids);
            if assignments[i] != c {
                assignments[i] = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        // Empty clusters keep their previous centroid; this keeps the
        // degenerate all-identical-points case in a single cluster.
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &a) in points.iter().zip(&assignments) {
            counts[a] += 1;
            for (s, x) in sums[a].iter_mut().zip(p) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                for (j, s) in sums[c].iter().enumerate() {
                    centroids[c][j] = s / counts[c] as f64;
                }
            }
        }
    }
    let inertia = points
        .iter()
        .zip(&assignments)
        .map(|(p, &a)| sq_dist(p, &centroids[a]))
        .sum();
    KmeansResult {
        assignments,
        inertia,
    }
}

/// Best of `restarts` seeded k-means++ runs by inertia.
pub fn kmeans(points: &[Vec<f64>], k: usize, restarts: usize, seed: u64) -> KmeansResult {
    assert!(k >= 1 && k <= points.len(), "need 1 <= k <= #points");
    let mut best: Option<KmeansResult> = None;
    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, r as u64));
        let centroids = kmeans_pp_init(points, k, &mut rng);
        let result = lloyd(points, centroids);
        if best.as_ref().is_none_or(|b| result.inertia < b.inertia) {
            best = Some(result);
        }
    }
    best.unwrap()
}

/// Purity of a clustering against gold labels: each cluster votes for its
/// majority label; purity is the fraction of points covered by those votes.
pub fn purity(assignments: &[usize], labels: &[usize], k: usize, n_labels: usize) -> f64 {
    assert_eq!(assignments.len(), labels.len());
    let n = assignments.len();
    let mut counts = vec![vec![0u64; n_labels]; k];
    for (&a, &l) in assignments.iter().zip(labels) {
        counts[a][l] += 1;
    }
    let covered: u64 = counts
        .iter()
        .map(|c| c.iter().copied().max().unwrap_or(0))
        .sum();
    covered as f64 / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn blob(center: &[f64], n: usize, spread: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| {
                center
                    .iter()
                    .map(|&c| c + rng.random_range(-spread..spread))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn separated_blobs_reach_purity_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for (l, center) in [[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]].iter().enumerate() {
            points.extend(blob(center, 8, 0.5, &mut rng));
            labels.extend(std::iter::repeat_n(l, 8));
        }
        let result = kmeans(&points, 3, 10, 7);
        assert_eq!(purity(&result.assignments, &labels, 3, 3), 1.0);
    }

    #[test]
    fn identical_points_collapse_to_majority_fraction() {
        // 10 identical vectors, 6/4 label split, k=2: one cluster captures
        // everything, purity = 0.6.
        let points = vec![vec![1.0, 2.0]; 10];
        let labels = [vec![0usize; 6], vec![1usize; 4]].concat();
        let result = kmeans(&points, 2, 10, 3);
        let p = purity(&result.assignments, &labels, 2, 2);
        assert!((p - 0.6).abs() < 1e-12, "purity {p}");
    }

    #[test]
    fn purity_invariant_under_label_permutations() {
        let assignments = vec![0, 0, 1, 1, 2, 2, 0, 1];
        let labels = vec![1, 1, 0, 0, 2, 2, 1, 2];
        let base = purity(&assignments, &labels, 3, 3);

        // Permute cluster ids.
        let perm_a: Vec<usize> = assignments.iter().map(|&a| (a + 1) % 3).collect();
        assert_eq!(purity(&perm_a, &labels, 3, 3), base);

        // Permute gold labels.
        let perm_l: Vec<usize> = labels.iter().map(|&l| (l + 2) % 3).collect();
        assert_eq!(purity(&assignments, &perm_l, 3, 3), base);
    }

    #[test]
    fn matches_exhaustive_partition_oracle_at_tiny_n() {
        // 12 fixed 2-d points, k=2. The oracle enumerates all 2^12 cluster
        // assignments, scores each by k-means inertia (centroid = cluster
        // mean) and takes the best; our seeded k-means must find a clustering
        // with the same purity.
        let points: Vec<Vec<f64>> = vec![
            vec![0.1, 0.2],
            vec![-0.2, 0.1],
            vec![0.0, -0.1],
            vec![0.3, 0.0],
            vec![-0.1, -0.3],
            vec![0.2, 0.3],
            vec![5.1, 4.9],
            vec![4.8, 5.2],
            vec![5.0, 5.0],
            vec![5.3, 4.7],
            vec![4.9, 5.1],
            vec![0.4, 5.0], // off-blob point with a blob-0 label
        ];
        let labels = vec![0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 0];

        let mut best_inertia = f64::INFINITY;
        let mut best_assignment = Vec::new();
        for mask in 0u32..(1 << 12) {
            let assignment: Vec<usize> =
                (0..12).map(|i| ((mask >> i) & 1) as usize).collect();
            let mut sums = [[0.0f64; 2]; 2];
            let mut counts = [0usize; 2];
            for (p, &a) in points.iter().zip(&assignment) {
                counts[a] += 1;
                sums[a][0] += p[0];
                sums[a][1] += p[1];
            }
            if counts[0] == 0 || counts[1] == 0 {
                continue;
            }
            let centroids: Vec<Vec<f64>> = (0..2)
                .map(|c| vec![sums[c][0] / counts[c] as f64, sums[c][1] / counts[c] as f64])
                .collect();
            let inertia: f64 = points
                .iter()
                .zip(&assignment)
                .map(|(p, &a)| sq_dist(p, &centroids[a]))
                .sum();
            if inertia < best_inertia {
                best_inertia = inertia;
                best_assignment = assignment;
            }
        }
        let oracle_purity = purity(&best_assignment, &labels, 2, 2);

        let result = kmeans(&points, 2, 10, 11);
        assert!((result.inertia - best_inertia).abs() < 1e-9, "missed the optimum");
        assert_eq!(purity(&result.assignments, &labels, 2, 2), oracle_purity);
    }
}
