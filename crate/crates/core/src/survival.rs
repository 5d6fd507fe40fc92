//! Order statistics with concomitant indicators and Kaplan-Meier
//! product-limit curves for the censored (F) and censoring (G) laws.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::models::CensoredSample;

/// Above this size products are accumulated as sums of logarithms.
const LOG_ACCUMULATION_THRESHOLD: usize = 10_000;

/// `z` ascending with the concomitant indicators carried along.
///
/// Ties in `z` are ordered with uncensored observations first.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedCensoredSample {
    z: Vec<f64>,
    delta: Vec<bool>,
}

impl OrderedCensoredSample {
    pub fn new(sample: &CensoredSample) -> Self {
        let mut recs = sample.records().to_vec();
        recs.sort_by(|a, b| {
            a.z.partial_cmp(&b.z)
                .unwrap_or(Ordering::Equal)
                .then_with(|| b.delta.cmp(&a.delta))
        });
        Self {
            z: recs.iter().map(|r| r.z).collect(),
            delta: recs.iter().map(|r| r.delta).collect(),
        }
    }

    pub fn from_pairs(z: &[f64], delta: &[bool]) -> Result<Self> {
        Ok(Self::new(&CensoredSample::from_pairs(z, delta)?))
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn delta(&self) -> &[bool] {
        &self.delta
    }

    /// The same sample with every indicator flipped (re-sorted under the
    /// tie rule).
    pub fn complemented(&self) -> Self {
        let flipped: Vec<bool> = self.delta.iter().map(|d| !d).collect();
        Self::from_pairs(&self.z, &flipped).expect("already validated")
    }
}

/// Right-continuous step function with jumps at the sorted sample points,
/// equal to 0 at and beyond the largest observation.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalCurve {
    knots: Vec<f64>,
    // values[i] is the curve after processing knots[0..=i]
    values: Vec<f64>,
}

impl SurvivalCurve {
    /// Product-limit curve over `z` where `event[i]` marks a jump at `z[i]`.
    fn product_limit(z: &[f64], event: impl Iterator<Item = bool>) -> Result<Self> {
        let n = z.len();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let mut values = Vec::with_capacity(n);
        if n > LOG_ACCUMULATION_THRESHOLD {
            let mut log_acc = 0.0f64;
            let mut dead = false;
            for (i, e) in event.enumerate() {
                if e {
                    let at_risk = (n - i) as f64;
                    if at_risk == 1.0 {
                        dead = true;
                    } else {
                        log_acc += (-1.0 / at_risk).ln_1p();
                    }
                }
                values.push(if dead { 0.0 } else { log_acc.exp() });
            }
        } else {
            let mut acc = 1.0f64;
            for (i, e) in event.enumerate() {
                if e {
                    acc *= 1.0 - 1.0 / (n - i) as f64;
                }
                values.push(acc);
            }
        }
        values[n - 1] = 0.0;
        Ok(Self {
            knots: z.to_vec(),
            values,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Curve value at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        let idx = self.knots.partition_point(|&k| k <= t);
        if idx == 0 {
            1.0
        } else {
            self.values[idx - 1]
        }
    }

    /// Left limit `S(t⁻)`.
    pub fn eval_left(&self, t: f64) -> f64 {
        let idx = self.knots.partition_point(|&k| k < t);
        if idx == 0 {
            1.0
        } else {
            self.values[idx - 1]
        }
    }

    /// Value at each order statistic, `S(Z_{i:n})` for `i = 1..n`
    /// (0-based in the returned vector). Tied knots share the value after
    /// the whole tie group.
    pub fn at_order_statistics(&self) -> Vec<f64> {
        let n = self.knots.len();
        let mut out = vec![0.0; n];
        let mut i = n;
        while i > 0 {
            let top = i - 1;
            let mut lo = top;
            while lo > 0 && self.knots[lo - 1] == self.knots[top] {
                lo -= 1;
            }
            out[lo..=top].fill(self.values[top]);
            i = lo;
        }
        out
    }

    /// Largest 0-based index `i` with `S(Z_{i+1:n}) > 0`, if any.
    pub fn last_positive_index(&self) -> Option<usize> {
        let at = self.at_order_statistics();
        at.iter().rposition(|&v| v > 0.0)
    }
}

/// Kaplan-Meier estimate of the survival of the variable of interest.
pub fn km_survival_f(sample: &OrderedCensoredSample) -> Result<SurvivalCurve> {
    SurvivalCurve::product_limit(&sample.z, sample.delta.iter().copied())
}

/// Kaplan-Meier estimate of the survival of the censoring variable.
pub fn km_survival_g(sample: &OrderedCensoredSample) -> Result<SurvivalCurve> {
    SurvivalCurve::product_limit(&sample.z, sample.delta.iter().map(|d| !d))
}

/// Empirical subdistribution `n⁻¹ #{i : z_i ≤ z, δ_i = 1}`.
pub fn subdistribution_h1(sample: &OrderedCensoredSample, z: f64) -> f64 {
    let upto = sample.z.partition_point(|&v| v <= z);
    let count = sample.delta[..upto].iter().filter(|&&d| d).count();
    count as f64 / sample.len() as f64
}

/// Why a term of the jump identity was left out of the check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpExclusion {
    /// `Ḡ(Z_{n-j:n}) = 0`, the right-hand side is undefined.
    ZeroCensoringSurvival,
    /// `j = 1` with a censored largest observation: the curve is forced to 0
    /// at `Z_{n:n}` although its product form is not.
    TopTruncation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpIdentityCheck {
    pub max_residual: f64,
    pub checked: usize,
    pub excluded: Vec<(usize, JumpExclusion)>,
}

/// Checks `F̄(Z_{n-j:n}) - F̄(Z_{n-j+1:n}) = δ_(n-j+1) / (n Ḡ(Z_{n-j:n}))`
/// for `j = 1..=k` and returns the largest absolute residual.
pub fn verify_km_jump_identity(sample: &OrderedCensoredSample, k: usize) -> Result<JumpIdentityCheck> {
    let n = sample.len();
    if k < 1 || k > n.saturating_sub(1) {
        return Err(Error::InvalidK {
            k,
            n,
            min: 1,
            max: n.saturating_sub(1),
        });
    }
    let f = km_survival_f(sample)?.at_order_statistics();
    let g = km_survival_g(sample)?.at_order_statistics();
    let nf = n as f64;
    let mut max_residual = 0.0f64;
    let mut checked = 0;
    let mut excluded = Vec::new();
    for j in 1..=k {
        // Z_{n-j:n} is index n-j-1, Z_{n-j+1:n} is index n-j
        let lower = n - j - 1;
        let upper = n - j;
        if g[lower] == 0.0 {
            excluded.push((j, JumpExclusion::ZeroCensoringSurvival));
            continue;
        }
        if j == 1 && !sample.delta[n - 1] {
            excluded.push((j, JumpExclusion::TopTruncation));
            continue;
        }
        let d = if sample.delta[upper] { 1.0 } else { 0.0 };
        let lhs = f[lower] - f[upper];
        let rhs = d / (nf * g[lower]);
        max_residual = max_residual.max((lhs - rhs).abs());
        checked += 1;
    }
    Ok(JumpIdentityCheck {
        max_residual,
        checked,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hand() -> OrderedCensoredSample {
        OrderedCensoredSample::from_pairs(&[3.0, 1.0, 2.0], &[true, true, false]).unwrap()
    }

    #[test]
    fn sorting_carries_concomitants() {
        let s = hand();
        assert_eq!(s.z(), &[1.0, 2.0, 3.0]);
        assert_eq!(s.delta(), &[true, false, true]);
    }

    #[test]
    fn tie_rule_puts_uncensored_first() {
        let s = OrderedCensoredSample::from_pairs(&[2.0, 2.0, 1.0], &[false, true, false]).unwrap();
        assert_eq!(s.delta(), &[false, true, false]);
    }

    #[test]
    fn km_f_hand_values() {
        let f = km_survival_f(&hand()).unwrap();
        assert!((f.eval(1.0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((f.eval(2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(f.eval(3.0), 0.0);
        assert_eq!(f.eval(10.0), 0.0);
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval_left(1.0), 1.0);
        assert!((f.eval_left(3.0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn km_g_hand_values() {
        let g = km_survival_g(&hand()).unwrap();
        assert_eq!(g.eval(1.0), 1.0);
        assert!((g.eval(2.0) - 0.5).abs() < 1e-15);
        assert_eq!(g.eval(3.0), 0.0);
    }

    #[test]
    fn uncensored_reduces_to_empirical() {
        let z: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let s = OrderedCensoredSample::from_pairs(&z, &[true; 10]).unwrap();
        let f = km_survival_f(&s).unwrap().at_order_statistics();
        for i in 1..10 {
            assert!((f[i - 1] - (10 - i) as f64 / 10.0).abs() < 1e-15);
        }
        // all censored: G is the empirical survival
        let s = OrderedCensoredSample::from_pairs(&z, &[false; 10]).unwrap();
        let g = km_survival_g(&s).unwrap().at_order_statistics();
        for i in 1..10 {
            assert!((g[i - 1] - (10 - i) as f64 / 10.0).abs() < 1e-15);
        }
    }

    #[test]
    fn complement_swaps_curves() {
        let s = OrderedCensoredSample::from_pairs(
            &[0.5, 1.7, 2.2, 3.1, 4.0, 9.0],
            &[true, false, false, true, true, false],
        )
        .unwrap();
        let c = s.complemented();
        assert_eq!(
            km_survival_g(&s).unwrap().at_order_statistics(),
            km_survival_f(&c).unwrap().at_order_statistics()
        );
    }

    #[test]
    fn h1_counts() {
        let s = hand();
        assert_eq!(subdistribution_h1(&s, 0.1), 0.0);
        assert!((subdistribution_h1(&s, 2.5) - 1.0 / 3.0).abs() < 1e-15);
        assert!((subdistribution_h1(&s, 100.0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn jump_identity_hand_sample() {
        let check = verify_km_jump_identity(&hand(), 2).unwrap();
        assert!(check.max_residual < 1e-15);
        assert_eq!(check.checked, 2);
        assert!(check.excluded.is_empty());
    }

    #[test]
    fn jump_identity_uncensored() {
        let z: Vec<f64> = (1..=20).map(|i| (i as f64).sqrt()).collect();
        let s = OrderedCensoredSample::from_pairs(&z, &[true; 20]).unwrap();
        let check = verify_km_jump_identity(&s, 19).unwrap();
        assert!(check.max_residual < 1e-15);
    }

    #[test]
    fn jump_identity_top_censored_is_excluded() {
        let s = OrderedCensoredSample::from_pairs(&[1.0, 2.0, 3.0], &[true, true, false]).unwrap();
        let check = verify_km_jump_identity(&s, 2).unwrap();
        assert_eq!(check.excluded, vec![(1, JumpExclusion::TopTruncation)]);
        assert!(check.max_residual < 1e-15);
        assert!(verify_km_jump_identity(&s, 3).is_err());
        assert!(verify_km_jump_identity(&s, 0).is_err());
    }

    #[test]
    fn log_accumulation_matches_direct_product() {
        let n = LOG_ACCUMULATION_THRESHOLD + 500;
        let z: Vec<f64> = (1..=n).map(|i| i as f64).collect();
        let d: Vec<bool> = (0..n).map(|i| i % 3 != 0).collect();
        let s = OrderedCensoredSample::from_pairs(&z, &d).unwrap();
        let f = km_survival_f(&s).unwrap().at_order_statistics();
        let mut acc = 1.0;
        for i in 0..n - 1 {
            if d[i] {
                acc *= 1.0 - 1.0 / (n - i) as f64;
            }
            assert!((f[i] - acc).abs() < 1e-12 * acc.max(1e-300) + 1e-15);
        }
        assert_eq!(f[n - 1], 0.0);
    }

    #[test]
    fn last_positive_index() {
        let f = km_survival_f(&hand()).unwrap();
        assert_eq!(f.last_positive_index(), Some(1));
    }
}
