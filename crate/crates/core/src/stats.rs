//! Rank statistics for descriptive reports.
//!
//! Degenerate inputs (constant ranks, perfect collinearity) are reported as
//! `Undefined` with a reason, never as a number.

use serde::{Deserialize, Serialize};

/// A correlation that may be undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Correlation {
    Defined { value: f64 },
    Undefined { reason: String },
}

impl Correlation {
    pub fn value(&self) -> Option<f64> {
        match self {
            Correlation::Defined { value } => Some(*value),
            Correlation::Undefined { .. } => None,
        }
    }

    fn undefined(reason: &str) -> Self {
        Correlation::Undefined {
            reason: reason.to_string(),
        }
    }
}

/// Average ranks (1-based) with ties sharing their mean rank.
pub fn average_ranks(keys: &[i128]) -> Vec<f64> {
    let n = keys.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| keys[i]);
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && keys[order[j + 1]] == keys[order[i]] {
            j += 1;
        }
        // Positions i..=j share the average of ranks i+1..=j+1.
        let shared = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = shared;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Correlation {
    if x.len() != y.len() || x.len() < 2 {
        return Correlation::undefined("fewer-than-two-points");
    }
    if x.iter().all(|&v| v == x[0]) || y.iter().all(|&v| v == y[0]) {
        return Correlation::undefined("constant-ranks");
    }
    // Identical or exactly mirrored rank vectors correlate exactly; the
    // short-circuits keep +/-1 free of square-root round-off.
    if x == y {
        return Correlation::Defined { value: 1.0 };
    }
    let flip = (x.len() + 1) as f64;
    if x.iter().zip(y).all(|(&a, &b)| a + b == flip) {
        return Correlation::Defined { value: -1.0 };
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        cov += (a - mx) * (b - my);
        vx += (a - mx) * (a - mx);
        vy += (b - my) * (b - my);
    }
    if vx == 0.0 || vy == 0.0 {
        return Correlation::undefined("constant-ranks");
    }
    Correlation::Defined {
        value: cov / (vx.sqrt() * vy.sqrt()),
    }
}

/// Spearman rank correlation over exact integer keys.
pub fn spearman(x: &[i128], y: &[i128]) -> Correlation {
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Partial Spearman correlation of x and y controlling for z.
pub fn partial_spearman(x: &[i128], y: &[i128], z: &[i128]) -> Correlation {
    let rxy = match spearman(x, y) {
        Correlation::Defined { value } => value,
        undefined => return undefined,
    };
    let rxz = match spearman(x, z) {
        Correlation::Defined { value } => value,
        undefined => return undefined,
    };
    let ryz = match spearman(y, z) {
        Correlation::Defined { value } => value,
        undefined => return undefined,
    };
    let denom = (1.0 - rxz * rxz) * (1.0 - ryz * ryz);
    if denom <= 1e-12 {
        return Correlation::undefined("perfect-collinearity-with-control");
    }
    Correlation::Defined {
        value: (rxy - rxz * ryz) / denom.sqrt(),
    }
}

/// Nearest-rank percentile of a sorted slice (deterministic, no
/// interpolation).
pub fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let idx = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1;
    sorted[idx]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_average_ties() {
        assert_eq!(average_ranks(&[2, 2, 1]), vec![2.5, 2.5, 1.0]);
        assert_eq!(average_ranks(&[5, 1, 3]), vec![3.0, 1.0, 2.0]);
    }

    #[test]
    fn spearman_perfect_and_anti() {
        assert_eq!(
            spearman(&[2, 2, 1], &[-1, -1, -2]),
            Correlation::Defined { value: 1.0 }
        );
        let anti = spearman(&[1, 2, 3], &[3, 2, 1]).value().unwrap();
        assert!((anti + 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs_are_undefined() {
        assert!(matches!(
            spearman(&[1, 1, 1], &[1, 2, 3]),
            Correlation::Undefined { .. }
        ));
        assert!(matches!(
            spearman(&[1], &[1]),
            Correlation::Undefined { .. }
        ));
        // Control perfectly collinear with x.
        assert!(matches!(
            partial_spearman(&[1, 2, 3], &[3, 1, 2], &[1, 2, 3]),
            Correlation::Undefined { .. }
        ));
    }

    #[test]
    fn hand_checked_partial() {
        // x = [1,2,3], y = [1,3,2], z = [3,2,1]: rxy = 0.5, rxz = -1 ->
        // undefined through the control.
        assert!(matches!(
            partial_spearman(&[1, 2, 3], &[1, 3, 2], &[3, 2, 1]),
            Correlation::Undefined { .. }
        ));
        // A defined case: x=[1,2,3,4], y=[1,3,2,4], z=[1,2,4,3].
        let c = partial_spearman(&[1, 2, 3, 4], &[1, 3, 2, 4], &[1, 2, 4, 3])
            .value()
            .unwrap();
        // rxy = 0.8, rxz = 0.8, ryz = 0.4 -> (0.8 - 0.32)/sqrt(0.36*0.84)
        let expected = (0.8 - 0.8 * 0.4) / (0.36f64 * 0.84).sqrt();
        assert!((c - expected).abs() < 1e-12);
    }

    #[test]
    fn percentile_nearest_rank() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(percentile_sorted(&xs, 0.025), 1.0);
        assert_eq!(percentile_sorted(&xs, 0.5), 2.0);
        assert_eq!(percentile_sorted(&xs, 0.975), 4.0);
    }
}
