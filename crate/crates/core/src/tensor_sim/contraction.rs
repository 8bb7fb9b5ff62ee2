use ndarray::Array2;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::{Tensor, TensorSpec, TraceTarget};
use crate::constructors::CycleSpec;
use crate::enumeration::profile_histogram;
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::ColoredGraph;

/// Default cap on the number of index assignments in the direct sum.
pub const NAIVE_BUDGET: f64 = 1e8;

#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

#[derive(Clone, Copy, Default)]
struct ComplexKahan {
    re: Kahan,
    im: Kahan,
}

impl ComplexKahan {
    #[inline]
    fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re.sum, self.im.sum)
    }
}

fn check_shape(t: &Tensor, d: usize) -> Result<()> {
    if t.dims().len() != d {
        return Err(Error::InvalidArgument(format!(
            "tensor has {} slots but the graph has {} colors",
            t.dims().len(),
            d
        )));
    }
    Ok(())
}

/// Direct index sum of the trace invariant, returned as a complex number so
/// the imaginary round-off can be inspected.
pub fn trace_invariant_naive_complex(
    t: &Tensor,
    b: &ColoredGraph,
    budget: f64,
) -> Result<Complex64> {
    let d = b.colors();
    let k = b.k();
    check_shape(t, d)?;
    let terms: f64 = t
        .dims()
        .iter()
        .map(|&n| (n as f64).powi(k as i32))
        .product();
    if terms > budget {
        return Err(Error::BudgetExceeded { terms, budget });
    }

    // One digit per (white vertex j, color i), j-major. Digit (i, j) moves
    // white j's offset and black sigma_i(j)'s offset by stride_i.
    let strides = t.strides();
    let dims = t.dims();
    let digits: Vec<(usize, usize, usize, usize)> = (0..k)
        .flat_map(|j| (0..d).map(move |i| (i, j)))
        .map(|(i, j)| (dims[i], strides[i], j, b.sigma()[i].apply(j)))
        .collect();
    let data = t.data();

    let (top_dim, _, _, _) = digits[0];
    let chunks = exec::map_range(top_dim, |top| {
        let mut value = vec![0usize; digits.len()];
        let mut white = vec![0usize; k];
        let mut black = vec![0usize; k];
        let (_, st, wj, bj) = digits[0];
        value[0] = top;
        white[wj] += top * st;
        black[bj] += top * st;
        let mut acc = ComplexKahan::default();
        loop {
            let mut term = Complex64::new(1.0, 0.0);
            for j in 0..k {
                term *= data[white[j]] * data[black[j]].conj();
            }
            acc.add(term);

            let mut pos = digits.len() - 1;
            loop {
                if pos == 0 {
                    return acc.value();
                }
                let (dim, st, wj, bj) = digits[pos];
                if value[pos] + 1 < dim {
                    value[pos] += 1;
                    white[wj] += st;
                    black[bj] += st;
                    break;
                }
                let back = value[pos] * st;
                value[pos] = 0;
                white[wj] -= back;
                black[bj] -= back;
                pos -= 1;
            }
        }
    });
    let mut total = ComplexKahan::default();
    for c in chunks {
        total.add(c);
    }
    Ok(total.value())
}

/// Direct index sum with the default budget; returns the real part.
pub fn trace_invariant_naive(t: &Tensor, b: &ColoredGraph) -> Result<f64> {
    trace_invariant_naive_with_budget(t, b, NAIVE_BUDGET)
}

pub fn trace_invariant_naive_with_budget(t: &Tensor, b: &ColoredGraph, budget: f64) -> Result<f64> {
    Ok(trace_invariant_naive_complex(t, b, budget)?.re)
}

/// `tr((M^H M)^k)` where `M` has the m-color slots as rows and the n-color
/// slots as columns.
pub fn trace_invariant_cycle(t: &Tensor, spec: &CycleSpec) -> Result<f64> {
    spec.validate()?;
    check_shape(t, spec.colors())?;
    let dims = t.dims();
    let mut row_colors = spec.m_colors.clone();
    let mut col_colors = spec.n_colors.clone();
    row_colors.sort_unstable();
    col_colors.sort_unstable();

    // per-slot contribution of one unit step to the row or column index
    let mut row_step = vec![0usize; dims.len()];
    let mut col_step = vec![0usize; dims.len()];
    let mut rows = 1;
    for &c in row_colors.iter().rev() {
        row_step[c - 1] = rows;
        rows *= dims[c - 1];
    }
    let mut cols = 1;
    for &c in col_colors.iter().rev() {
        col_step[c - 1] = cols;
        cols *= dims[c - 1];
    }

    let mut m = Array2::<Complex64>::zeros((rows, cols));
    let mut coord = vec![0usize; dims.len()];
    let (mut r, mut c) = (0usize, 0usize);
    for &z in t.data() {
        m[[r, c]] = z;
        for axis in (0..dims.len()).rev() {
            coord[axis] += 1;
            r += row_step[axis];
            c += col_step[axis];
            if coord[axis] < dims[axis] {
                break;
            }
            r -= row_step[axis] * dims[axis];
            c -= col_step[axis] * dims[axis];
            coord[axis] = 0;
        }
    }

    let adjoint = m.t().mapv(|z| z.conj());
    let w = if rows <= cols {
        m.dot(&adjoint)
    } else {
        adjoint.dot(&m)
    };
    let mut power = w.clone();
    for _ in 2..spec.k {
        power = power.dot(&w);
    }
    let trace: Complex64 = if spec.k == 1 {
        w.diag().sum()
    } else {
        power
            .outer_iter()
            .enumerate()
            .map(|(a, row)| {
                row.iter()
                    .zip(w.column(a))
                    .map(|(x, y)| x * y)
                    .sum::<Complex64>()
            })
            .sum()
    };
    Ok(trace.re)
}

/// Dispatches on the target kind.
pub fn trace_invariant(t: &Tensor, target: &TraceTarget) -> Result<f64> {
    match target {
        TraceTarget::Graph(g) => trace_invariant_naive(t, g),
        TraceTarget::Cycle(s) => trace_invariant_cycle(t, s),
    }
}

/// Exact complex-Gaussian mean `sum_tau prod_i dims_i^{f_i(tau)}`.
pub fn gaussian_exact_mean(b: &ColoredGraph, dims: &[usize]) -> Result<f64> {
    if dims.len() != b.colors() {
        return Err(Error::InvalidArgument(format!(
            "{} dimensions given for {} colors",
            dims.len(),
            b.colors()
        )));
    }
    let mut total = BigUint::zero();
    for (profile, mult) in profile_histogram(b)? {
        let mut term = BigUint::from(mult);
        for (&n, &f) in dims.iter().zip(&profile) {
            term *= BigUint::from(n).pow(f as u32);
        }
        total += term;
    }
    Ok(total.to_f64().unwrap_or(f64::INFINITY))
}

/// [`gaussian_exact_mean`] at the dimensions of `spec`.
pub fn gaussian_exact_mean_for(b: &ColoredGraph, spec: &TensorSpec) -> Result<f64> {
    gaussian_exact_mean(b, &spec.dims()?)
}
