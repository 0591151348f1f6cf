use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::Population;
use crate::space::SearchSpace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubswarmReport {
    pub n_clusters: usize,
    pub cluster_centers: Vec<Vec<f64>>,
    pub cluster_sizes: Vec<usize>,
    pub threshold: f64,
}

/// Default linkage threshold: 5% of the domain diagonal.
pub fn default_threshold(space: &SearchSpace) -> f64 {
    0.05 * space.diagonal()
}

/// Single-linkage clusters: agents within `threshold` (Euclidean) of each
/// other are chained into one cluster. Clusters are ordered by their lowest
/// agent index.
pub fn count_subswarms(pop: &Population, threshold: f64) -> Result<SubswarmReport> {
    cluster_positions(&pop.positions(), threshold)
}

pub fn cluster_positions(points: &[Vec<f64>], threshold: f64) -> Result<SubswarmReport> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("population is empty".into()));
    }
    if !(threshold > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cluster threshold must be positive, got {threshold}"
        )));
    }
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let t2 = threshold * threshold;
    for i in 0..n {
        for j in i + 1..n {
            let d2: f64 = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if d2 <= t2 {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }

    let mut label_of_root = vec![usize::MAX; n];
    let mut centers: Vec<Vec<f64>> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let r = root(&mut parent, i);
        if label_of_root[r] == usize::MAX {
            label_of_root[r] = sizes.len();
            centers.push(vec![0.0; p.len()]);
            sizes.push(0);
        }
        let c = label_of_root[r];
        sizes[c] += 1;
        for (acc, v) in centers[c].iter_mut().zip(p) {
            *acc += v;
        }
    }
    for (c, size) in centers.iter_mut().zip(&sizes) {
        c.iter_mut().for_each(|v| *v /= *size as f64);
    }
    Ok(SubswarmReport {
        n_clusters: sizes.len(),
        cluster_centers: centers,
        cluster_sizes: sizes,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tight_group_is_one_cluster() {
        let pts = vec![vec![0.0, 0.0], vec![0.1, 0.0], vec![0.0, 0.1]];
        let r = cluster_positions(&pts, 0.5).unwrap();
        assert_eq!(r.n_clusters, 1);
        assert_eq!(r.cluster_sizes, vec![3]);
    }

    #[test]
    fn separated_groups() {
        let pts = vec![vec![0.0], vec![0.2], vec![10.0], vec![10.1]];
        let r = cluster_positions(&pts, 1.0).unwrap();
        assert_eq!(r.n_clusters, 2);
        assert_eq!(r.cluster_sizes, vec![2, 2]);
        assert!((r.cluster_centers[1][0] - 10.05).abs() < 1e-12);
    }

    #[test]
    fn chaining_links_through_intermediates() {
        let pts = vec![vec![0.0], vec![0.9], vec![1.8], vec![2.7]];
        assert_eq!(cluster_positions(&pts, 1.0).unwrap().n_clusters, 1);
    }

    #[test]
    fn all_far_apart() {
        let pts: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64 * 5.0]).collect();
        assert_eq!(cluster_positions(&pts, 1.0).unwrap().n_clusters, 6);
    }

    #[test]
    fn invalid_inputs() {
        assert!(cluster_positions(&[], 1.0).is_err());
        assert!(cluster_positions(&[vec![0.0]], 0.0).is_err());
        assert!(cluster_positions(&[vec![0.0]], -1.0).is_err());
    }
}
