//! Closed-form leading exponents and limit coefficients for melonic and
//! (m,n)-cycle graphs, and their cross-check against enumeration.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::constructors::{is_melonic, make_cycle_graph, CycleSpec};
use crate::enumeration::{catalan, minimal_coverings, narayana_row};
use crate::error::{Error, Result};
use crate::graph::ColoredGraph;

/// Relative tolerance used by [`cross_check`] on coefficients.
pub const COEFFICIENT_RTOL: f64 = 1e-12;

/// Above this k the Narayana-weighted sum is evaluated in log space.
const LOG_SPACE_K: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Melonic,
    CycleMm,
    CycleMn,
    #[serde(rename = "cycle_11")]
    Cycle11,
    Generic,
}

/// Leading behaviour `mu(Tr) ~ coefficient * N^gamma`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub gamma: usize,
    pub coefficient: f64,
    pub family: Family,
    /// Number of minimal coverings (the coefficient at `c = 1`).
    pub minimal_count: u64,
}

fn check_c(c: &[f64], d: usize) -> Result<()> {
    if c.len() != d {
        return Err(Error::InvalidArgument(format!(
            "c has {} entries, expected D = {d}",
            c.len()
        )));
    }
    if let Some((i, x)) = c
        .iter()
        .enumerate()
        .find(|(_, x)| !(x.is_finite() && **x > 0.0))
    {
        return Err(Error::InvalidArgument(format!(
            "c[{}] = {x} must be a positive real",
            i + 1
        )));
    }
    Ok(())
}

/// Melonic prediction from the per-color exponents of the unique minimal
/// covering. Only their sum has a closed form, `1 + k(D-1)`.
pub fn predict_melonic_with(
    k: usize,
    d: usize,
    c: &[f64],
    exponents: &[usize],
) -> Result<AsymptoticPrediction> {
    check_c(c, d)?;
    let gamma = 1 + k * (d - 1);
    if exponents.len() != d || exponents.iter().sum::<usize>() != gamma {
        return Err(Error::InvalidArgument(format!(
            "melonic exponents {exponents:?} must have D = {d} entries summing to {gamma}"
        )));
    }
    let coefficient = exponents
        .iter()
        .zip(c)
        .map(|(&f, &ci)| ci.powi(f as i32))
        .product();
    Ok(AsymptoticPrediction {
        gamma,
        coefficient,
        family: Family::Melonic,
        minimal_count: 1,
    })
}

/// Melonic prediction for a concrete graph; the exponents come from
/// enumerating its coverings.
pub fn predict_melonic(b: &ColoredGraph, c: &[f64]) -> Result<AsymptoticPrediction> {
    check_c(c, b.colors())?;
    if !is_melonic(b) {
        return Err(Error::WrongFamily("graph is not melonic".into()));
    }
    let min = minimal_coverings(b)?;
    let exponents = &min.members[0].profile.zero_faces;
    predict_melonic_with(b.k(), b.colors(), c, exponents)
}

fn class_product(c: &[f64], colors: &[usize]) -> f64 {
    colors.iter().map(|&i| c[i - 1]).product()
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 900;
    (x >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `sum_{l=1}^{k} N(k,l) x^l y^(k+1-l)`.
fn narayana_polynomial(k: usize, x: f64, y: f64) -> f64 {
    let row = narayana_row(k as u64).expect("k >= 1");
    if k <= LOG_SPACE_K {
        return row
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let l = i as i32 + 1;
                n.to_f64().unwrap_or(f64::INFINITY) * x.powi(l) * y.powi(k as i32 + 1 - l)
            })
            .sum();
    }
    let logs: Vec<f64> = row
        .iter()
        .enumerate()
        .filter(|(_, n)| !n.is_zero())
        .map(|(i, n)| {
            let l = (i + 1) as f64;
            ln_big(n) + l * x.ln() + (k as f64 + 1.0 - l) * y.ln()
        })
        .collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (top + logs.iter().map(|v| (v - top).exp()).sum::<f64>().ln()).exp()
}

/// (m,m)-cycle graphs: `gamma = m(k+1)`, Narayana-weighted coefficient.
pub fn predict_cycle_mm(spec: &CycleSpec, c: &[f64]) -> Result<AsymptoticPrediction> {
    spec.validate()?;
    check_c(c, spec.colors())?;
    let (m, n, k) = (spec.m(), spec.n(), spec.k);
    if m != n {
        return Err(Error::WrongFamily(format!("expected m = n, got ({m},{n})")));
    }
    let x = class_product(c, &spec.m_colors);
    let y = class_product(c, &spec.n_colors);
    Ok(AsymptoticPrediction {
        gamma: m * (k + 1),
        coefficient: narayana_polynomial(k, x, y),
        family: if m == 1 {
            Family::Cycle11
        } else {
            Family::CycleMm
        },
        minimal_count: catalan(k as u64).to_u64().unwrap_or(u64::MAX),
    })
}

/// (m,n)-cycle graphs with `m < n`: `gamma = nk + m`, unique minimal covering.
pub fn predict_cycle_mn(spec: &CycleSpec, c: &[f64]) -> Result<AsymptoticPrediction> {
    spec.validate()?;
    check_c(c, spec.colors())?;
    let (m, n, k) = (spec.m(), spec.n(), spec.k);
    if m >= n {
        return Err(Error::WrongFamily(format!("expected m < n, got ({m},{n})")));
    }
    let coefficient =
        class_product(c, &spec.m_colors) * class_product(c, &spec.n_colors).powi(k as i32);
    Ok(AsymptoticPrediction {
        gamma: n * k + m,
        coefficient,
        family: Family::CycleMn,
        minimal_count: 1,
    })
}

/// Any (m,n)-cycle graph; `m > n` is handled by exchanging the two classes.
pub fn predict_cycle(spec: &CycleSpec, c: &[f64]) -> Result<AsymptoticPrediction> {
    let spec = if spec.m() > spec.n() {
        spec.swapped()
    } else {
        spec.clone()
    };
    if spec.m() == spec.n() {
        predict_cycle_mm(&spec, c)
    } else {
        predict_cycle_mn(&spec, c)
    }
}

/// What a graph is claimed to be for [`cross_check`].
#[derive(Clone, Debug, PartialEq)]
pub enum Claim {
    Melonic,
    Cycle(CycleSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub family: Family,
    pub gamma_closed: usize,
    pub gamma_enum: usize,
    pub count_closed: u64,
    pub count_enum: u64,
    pub coeff_closed: f64,
    pub coeff_enum: f64,
    pub rel_err: f64,
    pub passed: bool,
}

impl CrossCheckReport {
    pub fn diff(&self) -> String {
        format!(
            "family {:?}: gamma closed {} vs enum {}; count closed {} vs enum {}; \
             coefficient closed {:.15e} vs enum {:.15e} (rel err {:.3e})",
            self.family,
            self.gamma_closed,
            self.gamma_enum,
            self.count_closed,
            self.count_enum,
            self.coeff_closed,
            self.coeff_enum,
            self.rel_err
        )
    }

    pub fn into_result(self) -> Result<Self> {
        if self.passed {
            Ok(self)
        } else {
            Err(Error::Mismatch(self.diff()))
        }
    }
}

/// Compares the closed form for `claim` with brute-force enumeration of `b`:
/// exact on gamma and count, relative [`COEFFICIENT_RTOL`] on the coefficient.
pub fn cross_check(b: &ColoredGraph, claim: &Claim, c: &[f64]) -> Result<CrossCheckReport> {
    let closed = match claim {
        Claim::Melonic => predict_melonic(b, c)?,
        Claim::Cycle(spec) => {
            if make_cycle_graph(spec)? != *b {
                return Err(Error::InvalidArgument(
                    "graph does not match the cycle spec".into(),
                ));
            }
            predict_cycle(spec, c)?
        }
    };
    let min = minimal_coverings(b)?;
    let coeff_enum = min.checked_coefficient(c)?;
    let rel_err = (closed.coefficient - coeff_enum).abs() / coeff_enum.abs().max(f64::MIN_POSITIVE);
    let passed = closed.gamma == min.gamma
        && closed.minimal_count == min.count as u64
        && rel_err <= COEFFICIENT_RTOL;
    Ok(CrossCheckReport {
        family: closed.family,
        gamma_closed: closed.gamma,
        gamma_enum: min.gamma,
        count_closed: closed.minimal_count,
        count_enum: min.count as u64,
        coeff_closed: closed.coefficient,
        coeff_enum,
        rel_err,
        passed,
    })
}
