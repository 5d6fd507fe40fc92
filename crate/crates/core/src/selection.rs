//! Choice of the number of upper order statistics by the Reiss-Thomas
//! criterion
//! `k⁻¹ Σ_{i≤k} i^ν |γ̂_i - median{γ̂_1, ..., γ̂_k}|`.

use crate::error::{Error, Result};
use crate::estimators::EstimatorPath;

pub const DEFAULT_NU: f64 = 0.3;
/// Smallest candidate `k` used by the command line and the simulations.
pub const DEFAULT_K_MIN: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub k_star: usize,
    /// Estimate of the path at `k_star`.
    pub estimate: f64,
    /// Candidate `k` values, increasing.
    pub k_values: Vec<usize>,
    pub criterion_values: Vec<f64>,
    pub nu: f64,
}

/// Fenwick tree over value ranks holding count, `Σw` and `Σw·x`.
struct RankTree {
    count: Vec<usize>,
    weight: Vec<f64>,
    moment: Vec<f64>,
}

impl RankTree {
    fn new(len: usize) -> Self {
        Self {
            count: vec![0; len + 1],
            weight: vec![0.0; len + 1],
            moment: vec![0.0; len + 1],
        }
    }

    fn insert(&mut self, rank: usize, w: f64, x: f64) {
        let mut i = rank + 1;
        while i < self.count.len() {
            self.count[i] += 1;
            self.weight[i] += w;
            self.moment[i] += w * x;
            i += i & i.wrapping_neg();
        }
    }

    /// Sums over ranks `< end`.
    fn prefix(&self, end: usize) -> (f64, f64) {
        let (mut w, mut m) = (0.0, 0.0);
        let mut i = end;
        while i > 0 {
            w += self.weight[i];
            m += self.moment[i];
            i -= i & i.wrapping_neg();
        }
        (w, m)
    }

    /// Rank of the `target`-th (1-based) inserted element.
    fn select(&self, target: usize) -> usize {
        let n = self.count.len() - 1;
        let mut pos = 0;
        let mut remaining = target;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.count[next] < remaining {
                pos = next;
                remaining -= self.count[next];
            }
            step >>= 1;
        }
        pos
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if (0.0..=0.5).contains(&nu) {
        Ok(())
    } else {
        Err(Error::domain(format!("nu must lie in [0, 1/2], got {nu}")))
    }
}

/// Reiss-Thomas over every defined entry of the path.
pub fn reiss_thomas(path: &EstimatorPath, nu: f64) -> Result<SelectionResult> {
    reiss_thomas_in_range(path, nu, 0, usize::MAX)
}

/// Reiss-Thomas with candidates restricted to `k ∈ [k_min, k_max]`.
///
/// All defined entries with index below a candidate still enter its median
/// and sum. A candidate must itself be defined. Ties go to the smallest `k`.
pub fn reiss_thomas_in_range(path: &EstimatorPath, nu: f64, k_min: usize, k_max: usize) -> Result<SelectionResult> {
    check_nu(nu)?;
    let defined: Vec<(usize, f64)> = path.defined().collect();
    if defined.len() < 3 {
        return Err(Error::Insufficient(format!(
            "Reiss-Thomas needs at least 3 defined estimates, got {}",
            defined.len()
        )));
    }
    if defined.iter().any(|(_, x)| !x.is_finite()) {
        return Err(Error::domain("estimator path holds non-finite values"));
    }
    // centre on the first value to limit cancellation in Σw·x
    let offset = defined[0].1;
    let mut order: Vec<usize> = (0..defined.len()).collect();
    order.sort_by(|&a, &b| defined[a].1.total_cmp(&defined[b].1).then(a.cmp(&b)));
    let mut rank = vec![0; defined.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }

    let mut tree = RankTree::new(defined.len());
    let mut total_w = 0.0;
    let mut total_m = 0.0;
    let mut k_values = Vec::new();
    let mut criterion_values = Vec::new();
    for (m, &(k, x)) in defined.iter().enumerate() {
        let w = (k as f64).powf(nu);
        let xc = x - offset;
        tree.insert(rank[m], w, xc);
        total_w += w;
        total_m += w * xc;
        if k < k_min || k > k_max {
            continue;
        }
        let size = m + 1;
        let med_rank = tree.select(size.div_ceil(2));
        let med = defined[order[med_rank]].1 - offset;
        let (lw, lm) = tree.prefix(med_rank + 1);
        let sum = (med * lw - lm) + (total_m - lm) - med * (total_w - lw);
        k_values.push(k);
        criterion_values.push(sum.max(0.0) / k as f64);
    }
    if k_values.is_empty() {
        return Err(Error::Insufficient(format!(
            "no defined estimate with k in [{k_min}, {k_max}]"
        )));
    }

    let min = criterion_values.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = criterion_values.iter().fold(0.0f64, |a, &c| a.max(c.abs()));
    let tol = 1e-12 * scale;
    let idx = criterion_values
        .iter()
        .position(|&c| c <= min + tol)
        .expect("minimum is attained");
    let k_star = k_values[idx];
    let estimate = path
        .at(k_star)
        .and_then(|e| e.ok())
        .expect("candidates are defined entries");
    Ok(SelectionResult {
        k_star,
        estimate,
        k_values,
        criterion_values,
        nu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::Undefined;

    fn path(ks: Vec<usize>, xs: Vec<f64>) -> EstimatorPath {
        EstimatorPath::new("test", "none", ks, xs.into_iter().map(Ok).collect()).unwrap()
    }

    fn naive(path: &EstimatorPath, nu: f64) -> Vec<f64> {
        let d: Vec<(usize, f64)> = path.defined().collect();
        (0..d.len())
            .map(|m| {
                let mut vals: Vec<f64> = d[..=m].iter().map(|e| e.1).collect();
                vals.sort_by(f64::total_cmp);
                let med = vals[vals.len().div_ceil(2) - 1];
                d[..=m]
                    .iter()
                    .map(|&(i, x)| (i as f64).powf(nu) * (x - med).abs())
                    .sum::<f64>()
                    / d[m].0 as f64
            })
            .collect()
    }

    #[test]
    fn constant_path_picks_smallest_k() {
        let p = path((2..20).collect(), vec![0.7; 18]);
        let r = reiss_thomas(&p, DEFAULT_NU).unwrap();
        assert_eq!(r.k_star, 2);
        assert!(r.criterion_values.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn hand_example() {
        let p = path(vec![2, 3, 4, 5], vec![1.0, 1.0, 1.0, 5.0]);
        let r = reiss_thomas(&p, 0.0).unwrap();
        assert_eq!(r.k_star, 2);
        // median of (1,1,1,5) is 1, so k=5 carries |5-1|/5
        assert!((r.criterion_values[3] - 0.8).abs() < 1e-15);
        let r = reiss_thomas(&p, 0.5).unwrap();
        assert!((2..=5).contains(&r.k_star));
    }

    #[test]
    fn matches_naive_oracle() {
        let xs: Vec<f64> = (0..60).map(|i| ((i * 37 % 11) as f64).sin() + 0.01 * i as f64).collect();
        let p = path((2..62).collect(), xs);
        for nu in [0.0, 0.3, 0.5] {
            let r = reiss_thomas(&p, nu).unwrap();
            for (a, b) in r.criterion_values.iter().zip(naive(&p, nu)) {
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn holes_are_skipped_but_keep_their_index() {
        let est = vec![Ok(1.0), Err(Undefined::ZeroKmDenominator), Ok(2.0), Ok(4.0), Ok(3.0)];
        let p = EstimatorPath::new("t", "none", vec![2, 3, 4, 5, 6], est).unwrap();
        let r = reiss_thomas(&p, 0.5).unwrap();
        assert_eq!(r.k_values, vec![2, 4, 5, 6]);
        for (a, b) in r.criterion_values.iter().zip(naive(&p, 0.5)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn range_restricts_candidates() {
        let xs: Vec<f64> = (0..40).map(|i| (i as f64 * 0.3).cos()).collect();
        let p = path((2..42).collect(), xs);
        let r = reiss_thomas_in_range(&p, 0.3, 10, 30).unwrap();
        assert_eq!(r.k_values.first(), Some(&10));
        assert_eq!(r.k_values.last(), Some(&30));
        assert!((10..=30).contains(&r.k_star));
        assert!(reiss_thomas_in_range(&p, 0.3, 100, 200).is_err());
    }

    #[test]
    fn errors() {
        let p = path(vec![2, 3], vec![1.0, 2.0]);
        assert!(matches!(reiss_thomas(&p, 0.3), Err(Error::Insufficient(_))));
        let p = path(vec![2, 3, 4], vec![1.0, 2.0, 3.0]);
        assert!(reiss_thomas(&p, 0.6).is_err());
        assert!(reiss_thomas(&p, -0.1).is_err());
    }
}
