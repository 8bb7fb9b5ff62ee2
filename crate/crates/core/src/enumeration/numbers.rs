//! Exact Catalan and Narayana numbers.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `C(n, r)` by the multiplicative formula; every partial product is an
/// exact binomial, so each division is exact.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C_k = binom(2k, k) / (k + 1)`.
pub fn catalan(k: u64) -> BigUint {
    binomial(2 * k, k) / (k + 1)
}

/// `N(k, l) = binom(k, l) binom(k, l - 1) / k` for `1 <= l <= k`.
pub fn narayana(k: u64, l: u64) -> Result<BigUint> {
    check_narayana_range(k, l)?;
    Ok(binomial(k, l) * binomial(k, l - 1) / k)
}

fn check_narayana_range(k: u64, l: u64) -> Result<()> {
    if k == 0 || l == 0 || l > k {
        return Err(Error::InvalidArgument(format!(
            "Narayana number needs 1 <= l <= k (got k = {k}, l = {l})"
        )));
    }
    Ok(())
}

/// The Narayana row `N(k, 1..=k)`.
pub fn narayana_row(k: u64) -> Result<Vec<BigUint>> {
    (1..=k).map(|l| narayana(k, l)).collect()
}

/// Evaluates `N(k, l)` from the face-splitting recurrence
///
/// `N(k, l) = sum_{p>=1} sum_{k_1+..+k_p = k-p} sum_{l_1+..+l_p = l-1} prod N(k_i, l_i)`
///
/// with `N(0, 0) = 1` standing for an empty region.
pub fn narayana_recurrence(k: u64, l: u64) -> Result<BigUint> {
    check_narayana_range(k, l)?;
    Ok(NarayanaRecurrence::default().value(k as usize, l as usize))
}

/// Memo tables for the recurrence: `n[(k, l)]` and `tuples[(p, a, b)]`, the
/// weighted count of p-tuples of regions with `sum k_i = a`, `sum l_i = b`.
#[derive(Default)]
pub struct NarayanaRecurrence {
    n: HashMap<(usize, usize), BigUint>,
    tuples: HashMap<(usize, usize, usize), BigUint>,
}

impl NarayanaRecurrence {
    pub fn value(&mut self, k: usize, l: usize) -> BigUint {
        if k == 0 {
            return if l == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        if l == 0 || l > k {
            return BigUint::zero();
        }
        if let Some(v) = self.n.get(&(k, l)) {
            return v.clone();
        }
        let mut sum = BigUint::zero();
        for p in 1..=k {
            sum += self.tuples(p, k - p, l - 1);
        }
        self.n.insert((k, l), sum.clone());
        sum
    }

    fn tuples(&mut self, p: usize, a: usize, b: usize) -> BigUint {
        if p == 0 {
            return if a == 0 && b == 0 {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        if b > a {
            return BigUint::zero();
        }
        if let Some(v) = self.tuples.get(&(p, a, b)) {
            return v.clone();
        }
        let mut sum = BigUint::zero();
        for k1 in 0..=a {
            for l1 in 0..=b.min(k1) {
                let head = self.value(k1, l1);
                if head.is_zero() {
                    continue;
                }
                sum += head * self.tuples(p - 1, a - k1, b - l1);
            }
        }
        self.tuples.insert((p, a, b), sum.clone());
        sum
    }
}
