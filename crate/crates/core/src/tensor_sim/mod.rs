//! Random complex tensors and their trace invariants.
//!
//! Tensors of shape `(c_1 N, ..., c_D N)` are filled with i.i.d. entries of
//! unit second moment. Invariants are evaluated either by the direct index
//! sum or, for (m,n)-cycle graphs, as `tr((M^H M)^k)` of a matricization.
//! The complex-Gaussian mean is known exactly from the Wick sum over
//! pairings; Monte Carlo scans compare every ensemble against it and
//! against the closed-form limit.

mod contraction;
mod montecarlo;
mod sampling;
mod unitary;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constructors::{make_cycle_graph, CycleSpec};
use crate::error::{Error, Result};
use crate::graph::ColoredGraph;

pub use contraction::{
    gaussian_exact_mean, gaussian_exact_mean_for, trace_invariant, trace_invariant_cycle,
    trace_invariant_naive, trace_invariant_naive_complex, trace_invariant_naive_with_budget,
    NAIVE_BUDGET,
};
pub use montecarlo::{
    monte_carlo_mean, predicted_limit, universality_scan, MeanEstimate, Moments, ReportRow,
    UniversalityReport, REPORT_SCHEMA,
};
pub use sampling::{sample_rng, sample_tensor, sample_tensor_at};
pub use unitary::{apply_unitaries, random_unitary, unitary_invariance_check};

/// Entry distributions; all have zero odd moments and `E|z|^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// `(x + iy)` with `x, y ~ Normal(0, 1/2)`.
    ComplexGaussian,
    /// `(±1 ± i)/√2` with independent signs.
    ComplexRademacher,
    /// Uniform on the disc of radius `√2`.
    UniformDisc,
}

impl Distribution {
    pub const ALL: [Distribution; 3] = [
        Distribution::ComplexGaussian,
        Distribution::ComplexRademacher,
        Distribution::UniformDisc,
    ];

    /// `E|z|^4`.
    pub fn fourth_moment(self) -> f64 {
        match self {
            Distribution::ComplexGaussian => 2.0,
            Distribution::ComplexRademacher => 1.0,
            Distribution::UniformDisc => 4.0 / 3.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Distribution::ComplexGaussian => "complex_gaussian",
            Distribution::ComplexRademacher => "complex_rademacher",
            Distribution::UniformDisc => "uniform_disc",
        }
    }
}

/// An ensemble without a size: colors, ratios, distribution, seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    #[serde(rename = "D")]
    pub d: usize,
    pub c: Vec<f64>,
    pub distribution: Distribution,
    #[serde(default)]
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(c: Vec<f64>, distribution: Distribution, seed: u64) -> Self {
        EnsembleSpec {
            d: c.len(),
            c,
            distribution,
            seed,
        }
    }

    /// Fixes the size parameter N.
    pub fn at(&self, n: usize) -> Result<TensorSpec> {
        let spec = TensorSpec {
            ensemble: self.clone(),
            n,
        };
        spec.dims()?;
        Ok(spec)
    }
}

/// A concrete random tensor ensemble of shape `(c_i N)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorSpec {
    #[serde(flatten)]
    pub ensemble: EnsembleSpec,
    #[serde(rename = "N")]
    pub n: usize,
}

impl TensorSpec {
    pub fn new(c: Vec<f64>, n: usize, distribution: Distribution, seed: u64) -> Result<Self> {
        EnsembleSpec::new(c, distribution, seed).at(n)
    }

    /// `c_i N`, each required to be a positive integer.
    pub fn dims(&self) -> Result<Vec<usize>> {
        let e = &self.ensemble;
        if e.c.len() != e.d {
            return Err(Error::InvalidSpec(format!(
                "c: has {} entries, expected D = {}",
                e.c.len(),
                e.d
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidSpec("N: must be positive".into()));
        }
        e.c.iter()
            .enumerate()
            .map(|(i, &ci)| {
                let x = ci * self.n as f64;
                let r = x.round();
                if ci.is_nan() || ci <= 0.0 || (x - r).abs() > 1e-9 * x.abs().max(1.0) || r < 1.0 {
                    Err(Error::InvalidSpec(format!(
                        "c[{}] * N = {} * {} = {x} is not a positive integer",
                        i + 1,
                        ci,
                        self.n
                    )))
                } else {
                    Ok(r as usize)
                }
            })
            .collect()
    }
}

/// Dense complex tensor, row-major (last axis fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    dims: Vec<usize>,
    data: Vec<Complex64>,
}

impl Tensor {
    pub fn from_vec(dims: Vec<usize>, data: Vec<Complex64>) -> Result<Self> {
        let len: usize = dims.iter().product();
        if dims.is_empty() || len != data.len() {
            return Err(Error::InvalidArgument(format!(
                "tensor data has {} entries, shape {:?} needs {}",
                data.len(),
                dims,
                len
            )));
        }
        Ok(Tensor { dims, data })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Row-major strides.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    pub fn scaled(&self, lambda: Complex64) -> Self {
        Tensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|z| z * lambda).collect(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum()
    }
}

/// What a trace invariant is taken over: an explicit graph (direct index
/// sum) or an (m,n)-cycle spec (matricized path).
#[derive(Clone, Debug, PartialEq)]
pub enum TraceTarget {
    Graph(ColoredGraph),
    Cycle(CycleSpec),
}

impl TraceTarget {
    pub fn colors(&self) -> usize {
        match self {
            TraceTarget::Graph(g) => g.colors(),
            TraceTarget::Cycle(s) => s.colors(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            TraceTarget::Graph(g) => g.k(),
            TraceTarget::Cycle(s) => s.k,
        }
    }

    pub fn graph(&self) -> Result<ColoredGraph> {
        match self {
            TraceTarget::Graph(g) => Ok(g.clone()),
            TraceTarget::Cycle(s) => make_cycle_graph(s),
        }
    }

    /// Short identifier used in reports.
    pub fn label(&self) -> String {
        match self {
            TraceTarget::Graph(g) => {
                let rows: Vec<String> = g.sigma().iter().map(|s| s.to_string()).collect();
                format!("graph(k={},D={}):{}", g.k(), g.colors(), rows.join(","))
            }
            TraceTarget::Cycle(s) => format!(
                "cycle(m={},n={},k={}):m_colors={:?},n_colors={:?}",
                s.m(),
                s.n(),
                s.k,
                s.m_colors,
                s.n_colors
            ),
        }
    }
}
