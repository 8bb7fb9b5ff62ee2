//! Permutations of `{1..k}` stored with 0-based images.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A bijection on `{0..k}`. Externally (JSON, display) labels are 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation {
            images: (0..k).collect(),
        }
    }

    /// The k-cycle `j -> j+1 (mod k)`.
    pub fn shift(k: usize) -> Self {
        Permutation {
            images: (0..k).map(|j| (j + 1) % k).collect(),
        }
    }

    /// Swaps `a` and `b` (0-based).
    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..k).collect();
        images.swap(a, b);
        Permutation { images }
    }

    pub fn from_zero_based(images: Vec<usize>) -> Result<Self> {
        Self::validate(&images, 0, "permutation")?;
        Ok(Permutation { images })
    }

    /// Builds from 1-based images; `field` names the source in diagnostics.
    pub fn from_one_based(images: &[usize], field: &str) -> Result<Self> {
        Self::validate(images, 1, field)?;
        Ok(Permutation {
            images: images.iter().map(|&x| x - 1).collect(),
        })
    }

    /// Builds from disjoint cycles written 1-based, e.g. `[[1, 3], [2]]`.
    pub fn from_cycles(k: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..k).collect();
        let mut seen = vec![false; k];
        for cycle in cycles {
            for (pos, &x) in cycle.iter().enumerate() {
                if x == 0 || x > k || seen[x - 1] {
                    return Err(Error::NotABijection {
                        field: "cycles".into(),
                        len: k,
                        detail: format!("label {x} is out of range or repeated"),
                    });
                }
                seen[x - 1] = true;
                images[x - 1] = cycle[(pos + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation { images })
    }

    fn validate(images: &[usize], base: usize, field: &str) -> Result<()> {
        let k = images.len();
        let mut seen = vec![false; k];
        for (j, &x) in images.iter().enumerate() {
            if x < base || x - base >= k {
                return Err(Error::NotABijection {
                    field: field.into(),
                    len: k,
                    detail: format!("entry {} = {x} is out of range", j + 1),
                });
            }
            if std::mem::replace(&mut seen[x - base], true) {
                return Err(Error::NotABijection {
                    field: field.into(),
                    len: k,
                    detail: format!("value {x} appears twice"),
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, j: usize) -> usize {
        self.images[j]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, &x)| j == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (j, &x) in self.images.iter().enumerate() {
            inv[x] = j;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        })
    }

    /// `rho ∘ self ∘ rho⁻¹`, i.e. the same permutation after relabeling by `rho`.
    pub fn conjugate_by(&self, rho: &Permutation) -> Result<Self> {
        rho.compose(self)?.compose(&rho.inverse())
    }

    /// Number of disjoint cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut cycles = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.images[j];
            }
        }
        cycles
    }

    /// Cycles as 1-based label lists, each starting at its smallest label.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j + 1);
                j = self.images[j];
            }
            out.push(cycle);
        }
        out
    }

    /// Advances to the next permutation in lexicographic order of the image
    /// array. Returns `false` (leaving `self` unchanged) at the last one.
    pub fn advance_lex(&mut self) -> bool {
        next_lex(&mut self.images)
    }
}

/// In-place lexicographic successor of a sequence.
pub(crate) fn next_lex(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Cycle count of `outer⁻¹ ∘ inner`, given `outer_inv` directly. Reuses
/// `seen` to avoid allocating in hot loops.
#[inline]
pub(crate) fn cycles_of(outer_inv: &[usize], inner: &[usize], seen: &mut Vec<bool>) -> usize {
    let k = inner.len();
    seen.clear();
    seen.resize(k, false);
    let mut cycles = 0;
    for start in 0..k {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = outer_inv[inner[j]];
        }
    }
    cycles
}

/// Cycle notation, e.g. `(1 2 3)(4)`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "()");
        }
        for cycle in self.cycles() {
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.one_based())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_based(&raw, "permutation").map_err(serde::de::Error::custom)
    }
}
