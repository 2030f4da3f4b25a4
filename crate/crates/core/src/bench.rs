//! Growth measurements on the organization family used for plotting.
//!
//! The family has `n` organizations of three nodes each; a node needs two
//! nodes in each of `t` organizations, personalized as usual. Quorum counts
//! are exact; timings are whatever this machine produces and are only
//! meant for their trend.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::error::Result;
use crate::quorums::{enumerate_quorums, quorum_intersection};
use crate::slices::{generate_org_fbas, OrgFbas};

/// Root threshold as a function of the number of organizations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootThreshold {
    /// `t = n − 1`.
    AllButOne,
    /// `t = ⌊2n/3⌋ + 1`.
    TwoThirds,
}

impl RootThreshold {
    pub const ALL: [RootThreshold; 2] = [RootThreshold::AllButOne, RootThreshold::TwoThirds];

    pub fn threshold(self, n: usize) -> usize {
        match self {
            RootThreshold::AllButOne => n.saturating_sub(1).max(1),
            RootThreshold::TwoThirds => 2 * n / 3 + 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RootThreshold::AllButOne => "n-1",
            RootThreshold::TwoThirds => "2n/3+1",
        }
    }
}

/// `n` organizations of three nodes, two required per organization.
pub fn org_family(n: usize, rule: RootThreshold) -> Result<OrgFbas> {
    generate_org_fbas(&vec![3; n], &vec![2; n], rule.threshold(n))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub rule: RootThreshold,
    pub orgs: usize,
    pub nodes: usize,
    pub root_threshold: usize,
    pub quorums: u64,
    pub enumerate_seconds: f64,
    pub intersects: bool,
    pub intersection_seconds: f64,
}

/// Mean wall time of `f`, repeating until `min_total` has elapsed.
fn time<T>(min_total: Duration, mut f: impl FnMut() -> T) -> (T, f64) {
    let start = Instant::now();
    let mut runs = 0u32;
    loop {
        let out = f();
        runs += 1;
        let elapsed = start.elapsed();
        if elapsed >= min_total {
            return (out, elapsed.as_secs_f64() / f64::from(runs));
        }
    }
}

/// Measures every `n` in `orgs` for every rule.
pub fn run(
    orgs: impl IntoIterator<Item = usize> + Clone,
    rules: &[RootThreshold],
    min_total: Duration,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &rule in rules {
        for n in orgs.clone() {
            let o = org_family(n, rule)?;
            let (quorums, enumerate_seconds) = time(min_total, || enumerate_quorums(&o.fbas).count() as u64);
            let (intersects, intersection_seconds) =
                time(min_total, || quorum_intersection(&o.fbas).intersects);
            rows.push(BenchRow {
                rule,
                orgs: n,
                nodes: o.fbas.universe(),
                root_threshold: rule.threshold(n),
                quorums,
                enumerate_seconds,
                intersects,
                intersection_seconds,
            });
        }
    }
    Ok(rows)
}

/// Tab-separated table with a header line.
pub fn to_tsv(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "rule\torgs\tnodes\troot_threshold\tquorums\tenumerate_seconds\tintersects\tintersection_seconds\n",
    );
    for r in rows {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{:.9}\t{}\t{:.9}",
            r.rule.label(),
            r.orgs,
            r.nodes,
            r.root_threshold,
            r.quorums,
            r.enumerate_seconds,
            r.intersects,
            r.intersection_seconds
        )
        .expect("writing to a String");
    }
    out
}

/// Least-squares slope of `ln y` against `x`; `None` with fewer than two
/// points or a non-positive `y`.
pub fn log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 || ys.iter().any(|&y| y <= 0.0) {
        return None;
    }
    let n = xs.len() as f64;
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Per-rule summary of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct Trend {
    pub rule: RootThreshold,
    pub quorums_strictly_increasing: bool,
    pub enumerate_log_slope: Option<f64>,
    pub intersection_log_slope: Option<f64>,
}

pub fn trends(rows: &[BenchRow]) -> Vec<Trend> {
    RootThreshold::ALL
        .iter()
        .filter_map(|&rule| {
            let rs: Vec<&BenchRow> = rows.iter().filter(|r| r.rule == rule).collect();
            if rs.is_empty() {
                return None;
            }
            let xs: Vec<f64> = rs.iter().map(|r| r.orgs as f64).collect();
            let slope =
                |f: fn(&BenchRow) -> f64| log_slope(&xs, &rs.iter().map(|r| f(r)).collect::<Vec<_>>());
            Some(Trend {
                rule,
                quorums_strictly_increasing: rs.windows(2).all(|w| w[0].quorums < w[1].quorums),
                enumerate_log_slope: slope(|r| r.enumerate_seconds),
                intersection_log_slope: slope(|r| r.intersection_seconds),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        assert_eq!(RootThreshold::AllButOne.threshold(6), 5);
        assert_eq!(RootThreshold::TwoThirds.threshold(6), 5);
        assert_eq!(RootThreshold::TwoThirds.threshold(4), 3);
        assert_eq!(RootThreshold::AllButOne.threshold(2), 1);
    }

    #[test]
    fn slope_of_exponential() {
        let xs = [1.0, 2.0, 3.0];
        let ys = [2f64, 4.0, 8.0];
        assert!((log_slope(&xs, &ys).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert_eq!(log_slope(&xs, &[1.0, 0.0, 1.0]), None);
    }

    #[test]
    fn small_run_counts_grow() {
        let rows = run(2..=4, &RootThreshold::ALL, Duration::ZERO).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(trends(&rows).iter().all(|t| t.quorums_strictly_increasing));
        assert!(to_tsv(&rows).lines().count() == 7);
    }
}
