use serde::{Deserialize, Serialize};

use super::{sample_tensor_at, trace_invariant, EnsembleSpec, TensorSpec, TraceTarget};
use crate::asymptotics::predict_cycle;
use crate::enumeration::minimal_coverings;
use crate::error::{Error, Result};
use crate::exec;
use crate::tensor_sim::contraction::NAIVE_BUDGET;

/// Samples per reduction block. Fixed so the result does not depend on the
/// number of workers.
const BLOCK: usize = 32;

pub const REPORT_SCHEMA: u32 = 1;

/// Running count, mean and sum of squared deviations; blocks combine with
/// Chan's pairwise update.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let frac = other.count as f64 / count as f64;
        Moments {
            count,
            mean: self.mean + delta * frac,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * frac,
        }
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            f64::NAN
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::default();
        for x in iter {
            m.push(x);
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub samples: u64,
    pub mean: f64,
    pub stderr: f64,
}

fn check_target(spec: &TensorSpec, target: &TraceTarget) -> Result<Vec<usize>> {
    let dims = spec.dims()?;
    if dims.len() != target.colors() {
        return Err(Error::InvalidArgument(format!(
            "ensemble has D = {} but the graph has {} colors",
            dims.len(),
            target.colors()
        )));
    }
    match target {
        TraceTarget::Graph(g) => {
            g.require_connected()?;
            let terms: f64 = dims
                .iter()
                .map(|&n| (n as f64).powi(g.k() as i32))
                .product();
            if terms > NAIVE_BUDGET {
                return Err(Error::BudgetExceeded {
                    terms,
                    budget: NAIVE_BUDGET,
                });
            }
        }
        TraceTarget::Cycle(s) => s.validate()?,
    }
    Ok(dims)
}

/// Sample mean and standard error of the trace invariant over `samples`
/// independent tensors. Sample `i` always uses substream `i`.
pub fn monte_carlo_mean(
    spec: &TensorSpec,
    target: &TraceTarget,
    samples: usize,
) -> Result<MeanEstimate> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 samples for a standard error (got {samples})"
        )));
    }
    check_target(spec, target)?;
    let blocks = samples.div_ceil(BLOCK);
    let partial = exec::map_range(blocks, |b| -> Result<Moments> {
        let mut m = Moments::default();
        for i in b * BLOCK..((b + 1) * BLOCK).min(samples) {
            let t = sample_tensor_at(spec, i as u64)?;
            m.push(trace_invariant(&t, target)?);
        }
        Ok(m)
    });
    let mut total = Moments::default();
    for m in partial {
        total = total.merge(m?);
    }
    Ok(MeanEstimate {
        samples: total.count,
        mean: total.mean,
        stderr: total.stderr(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub samples: u64,
    pub mean: f64,
    pub stderr: f64,
    pub normalized: f64,
}

/// Normalized Monte Carlo means against the predicted limit coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniversalityReport {
    pub schema: u32,
    pub graph: String,
    pub gamma: usize,
    pub predicted: f64,
    pub rows: Vec<ReportRow>,
}

impl UniversalityReport {
    /// `stderr / N^gamma` for each row.
    pub fn normalized_stderr(&self, row: &ReportRow) -> f64 {
        row.stderr / (row.n as f64).powi(self.gamma as i32)
    }

    /// `|normalized - predicted|` for each row.
    pub fn deviations(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| (r.normalized - self.predicted).abs())
            .collect()
    }

    /// Rows whose normalized mean sits more than four standard errors from
    /// the prediction. At finite N this includes the genuine o(N^gamma)
    /// correction, so flags on small N are expected.
    pub fn flagged(&self) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                (r.normalized - self.predicted).abs() > 4.0 * self.normalized_stderr(r)
            })
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,samples,mean,stderr,normalized\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:e},{:e},{:e}\n",
                r.n, r.samples, r.mean, r.stderr, r.normalized
            ));
        }
        out
    }
}

/// Leading exponent and limit coefficient: closed form for cycle specs,
/// enumeration otherwise.
pub fn predicted_limit(target: &TraceTarget, c: &[f64]) -> Result<(usize, f64)> {
    match target {
        TraceTarget::Cycle(s) => {
            let p = predict_cycle(s, c)?;
            Ok((p.gamma, p.coefficient))
        }
        TraceTarget::Graph(g) => {
            let min = minimal_coverings(g)?;
            Ok((min.gamma, min.checked_coefficient(c)?))
        }
    }
}

/// Runs [`monte_carlo_mean`] at every N and normalizes by `N^gamma`.
pub fn universality_scan(
    ensemble: &EnsembleSpec,
    target: &TraceTarget,
    n_list: &[usize],
    samples: usize,
) -> Result<UniversalityReport> {
    if n_list.is_empty() {
        return Err(Error::InvalidArgument("N list is empty".into()));
    }
    let specs = n_list
        .iter()
        .map(|&n| ensemble.at(n))
        .collect::<Result<Vec<_>>>()?;
    let (gamma, predicted) = predicted_limit(target, &ensemble.c)?;
    let mut rows = Vec::with_capacity(specs.len());
    for spec in &specs {
        let est = monte_carlo_mean(spec, target, samples)?;
        rows.push(ReportRow {
            n: spec.n,
            samples: est.samples,
            mean: est.mean,
            stderr: est.stderr,
            normalized: est.mean / (spec.n as f64).powi(gamma as i32),
        });
    }
    Ok(UniversalityReport {
        schema: REPORT_SCHEMA,
        graph: target.label(),
        gamma,
        predicted,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{gaussian_exact_mean, Distribution};
    use super::*;
    use crate::constructors::{make_cycle_graph, make_dipole, CycleSpec};
    use proptest::prelude::*;

    #[test]
    fn needs_two_samples() {
        let spec = TensorSpec::new(vec![1.0, 1.0], 2, Distribution::ComplexGaussian, 0).unwrap();
        let target = TraceTarget::Cycle(CycleSpec::standard(2, 1, 1).unwrap());
        assert!(monte_carlo_mean(&spec, &target, 1).is_err());
        assert!(monte_carlo_mean(&spec, &target, 2).is_ok());
    }

    #[test]
    fn color_count_must_match() {
        let spec = TensorSpec::new(vec![1.0, 1.0], 2, Distribution::ComplexGaussian, 0).unwrap();
        let target = TraceTarget::Graph(make_dipole(3).unwrap());
        assert!(monte_carlo_mean(&spec, &target, 4).is_err());
    }

    #[test]
    fn dipole_mean_is_exact_for_every_distribution() {
        for dist in Distribution::ALL {
            let spec = TensorSpec::new(vec![1.0, 0.5, 1.5], 4, dist, 11).unwrap();
            let target = TraceTarget::Graph(make_dipole(3).unwrap());
            let est = monte_carlo_mean(&spec, &target, 2000).unwrap();
            let exact = 4.0 * 2.0 * 6.0;
            // Rademacher entries have unit modulus, so the norm is deterministic.
            assert!(
                (est.mean - exact).abs() <= 4.0 * est.stderr + 1e-9 * exact,
                "{dist:?}: {est:?}"
            );
        }
    }

    #[test]
    fn gaussian_two_cycle_matches_wick() {
        let spec = TensorSpec::new(vec![1.0, 1.0], 8, Distribution::ComplexGaussian, 2).unwrap();
        let target = TraceTarget::Cycle(CycleSpec::standard(2, 1, 1).unwrap());
        let est = monte_carlo_mean(&spec, &target, 10_000).unwrap();
        let g = make_cycle_graph(&CycleSpec::standard(2, 1, 1).unwrap()).unwrap();
        let exact = gaussian_exact_mean(&g, &[8, 8]).unwrap();
        assert_eq!(exact, 1024.0);
        assert!((est.mean - exact).abs() < 4.0 * est.stderr, "{est:?}");
    }

    #[test]
    fn scan_is_deterministic_and_thread_independent() {
        let ensemble = EnsembleSpec::new(vec![1.0, 1.0, 1.0], Distribution::ComplexRademacher, 5);
        let target = TraceTarget::Cycle(CycleSpec::standard(2, 1, 2).unwrap());
        let a = exec::with_threads(Some(1), || {
            universality_scan(&ensemble, &target, &[2, 4], 70).unwrap()
        });
        let b = exec::with_threads(None, || {
            universality_scan(&ensemble, &target, &[2, 4], 70).unwrap()
        });
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.predicted, 1.0);
        assert_eq!(a.gamma, 5);
    }

    #[test]
    fn scan_rejects_bad_inputs() {
        let ensemble = EnsembleSpec::new(vec![1.0, 0.5], Distribution::ComplexGaussian, 5);
        let target = TraceTarget::Cycle(CycleSpec::standard(2, 1, 1).unwrap());
        assert!(universality_scan(&ensemble, &target, &[], 10).is_err());
        assert!(universality_scan(&ensemble, &target, &[3], 10).is_err());
    }

    #[test]
    fn report_json_and_csv_shape() {
        let report = UniversalityReport {
            schema: REPORT_SCHEMA,
            graph: "g".into(),
            gamma: 3,
            predicted: 2.0,
            rows: vec![ReportRow {
                n: 4,
                samples: 10,
                mean: 128.0,
                stderr: 1.5,
                normalized: 2.0,
            }],
        };
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            r#"{"schema":1,"graph":"g","gamma":3,"predicted":2.0,"rows":[{"N":4,"samples":10,"mean":128.0,"stderr":1.5,"normalized":2.0}]}"#
        );
        assert_eq!(
            report.to_csv().lines().next().unwrap(),
            "N,samples,mean,stderr,normalized"
        );
        assert!(report.flagged().is_empty());
    }

    proptest! {
        #[test]
        fn chan_merge_matches_single_pass(
            xs in proptest::collection::vec(-1e3f64..1e3, 2..200), split in 0usize..200
        ) {
            let split = split % xs.len();
            let whole: Moments = xs.iter().copied().collect();
            let left: Moments = xs[..split].iter().copied().collect();
            let right: Moments = xs[split..].iter().copied().collect();
            let merged = left.merge(right);
            prop_assert_eq!(merged.count, whole.count);
            prop_assert!((merged.mean - whole.mean).abs() <= 1e-9 * whole.mean.abs().max(1.0));
            prop_assert!((merged.m2 - whole.m2).abs() <= 1e-7 * whole.m2.abs().max(1.0));
        }
    }
}
