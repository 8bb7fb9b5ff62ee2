use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{trace_invariant_naive_complex, Tensor};
use crate::error::{Error, Result};
use crate::graph::ColoredGraph;

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Array2<Complex64> {
    let g = DMatrix::<Complex64>::from_fn(n, n, |_, _| {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        Complex64::new(x, y)
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    Array2::from_shape_fn((n, n), |(i, j)| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q[(i, j)] * phase
    })
}

/// Applies `unitaries[i]` to slot `i`: `T'[.., a, ..] = sum_b U[a, b] T[.., b, ..]`.
pub fn apply_unitaries(t: &Tensor, unitaries: &[Array2<Complex64>]) -> Result<Tensor> {
    let dims = t.dims().to_vec();
    if unitaries.len() != dims.len() {
        return Err(Error::InvalidArgument(format!(
            "{} unitaries for a tensor with {} slots",
            unitaries.len(),
            dims.len()
        )));
    }
    for (i, u) in unitaries.iter().enumerate() {
        if u.dim() != (dims[i], dims[i]) {
            return Err(Error::InvalidArgument(format!(
                "unitary {} is {:?}, slot {} has dimension {}",
                i + 1,
                u.dim(),
                i + 1,
                dims[i]
            )));
        }
    }
    let strides = t.strides();
    let mut data = t.data().to_vec();
    let mut fiber = Vec::new();
    for (axis, u) in unitaries.iter().enumerate() {
        let n = dims[axis];
        let inner = strides[axis];
        let outer = data.len() / (n * inner);
        for o in 0..outer {
            for i in 0..inner {
                let base = o * n * inner + i;
                fiber.clear();
                fiber.extend((0..n).map(|a| data[base + a * inner]));
                for a in 0..n {
                    data[base + a * inner] = u.row(a).iter().zip(&fiber).map(|(x, y)| x * y).sum();
                }
            }
        }
    }
    Tensor::from_vec(dims, data)
}

/// `|Tr(U.T) - Tr(T)| / |Tr(T)|`.
pub fn unitary_invariance_check(
    t: &Tensor,
    b: &ColoredGraph,
    unitaries: &[Array2<Complex64>],
) -> Result<f64> {
    let rotated = apply_unitaries(t, unitaries)?;
    let before = trace_invariant_naive_complex(t, b, f64::INFINITY)?;
    let after = trace_invariant_naive_complex(&rotated, b, f64::INFINITY)?;
    Ok((after - before).norm() / before.norm())
}

#[cfg(test)]
mod tests {
    use super::super::{sample_tensor_at, Distribution, TensorSpec};
    use super::*;
    use crate::constructors::{make_cycle_graph, CycleSpec};
    use crate::testutil::seeded_rng;

    fn identity(n: usize) -> Array2<Complex64> {
        Array2::from_shape_fn((n, n), |(i, j)| {
            Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
        })
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = seeded_rng(1);
        for n in [1, 2, 5, 9] {
            let u = random_unitary(n, &mut rng);
            let uh = u.t().mapv(|z| z.conj());
            let prod = uh.dot(&u);
            let err = (&prod - &identity(n))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "n = {n}: {err}");
        }
    }

    fn setup() -> (Tensor, ColoredGraph) {
        let spec = TensorSpec::new(vec![1.0, 1.0], 4, Distribution::ComplexGaussian, 3).unwrap();
        let t = sample_tensor_at(&spec, 0).unwrap();
        let g = make_cycle_graph(&CycleSpec::standard(2, 1, 1).unwrap()).unwrap();
        (t, g)
    }

    #[test]
    fn identity_unitaries_leave_invariant_unchanged() {
        let (t, g) = setup();
        let dev = unitary_invariance_check(&t, &g, &[identity(4), identity(4)]).unwrap();
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn phase_unitaries() {
        let (t, g) = setup();
        let phases = |seed: f64| {
            Array2::from_shape_fn((4, 4), |(i, j)| {
                if i == j {
                    Complex64::from_polar(1.0, seed * (i as f64 + 1.0))
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        };
        let dev = unitary_invariance_check(&t, &g, &[phases(0.3), phases(1.7)]).unwrap();
        assert!(dev < 1e-12, "{dev}");
    }

    #[test]
    fn random_unitaries() {
        let (t, g) = setup();
        let mut rng = seeded_rng(9);
        let us = [random_unitary(4, &mut rng), random_unitary(4, &mut rng)];
        let dev = unitary_invariance_check(&t, &g, &us).unwrap();
        assert!(dev < 1e-8, "{dev}");
    }

    #[test]
    fn dimension_mismatch() {
        let (t, g) = setup();
        assert!(unitary_invariance_check(&t, &g, &[identity(4)]).is_err());
        assert!(unitary_invariance_check(&t, &g, &[identity(4), identity(3)]).is_err());
    }
}
