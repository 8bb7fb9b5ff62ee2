//! Brute-force enumeration of covering graphs over the symmetric group,
//! minimal coverings, and the exact counting numbers that describe them.

pub mod numbers;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{zero_face_counts, ColoredGraph, FaceProfile};
use crate::perm::{next_lex, Permutation};

pub use numbers::{binomial, catalan, narayana, narayana_recurrence, narayana_row};

/// Largest k enumerated by default (9! = 362 880 pairings).
pub const DEFAULT_CAP: usize = 9;

/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "TUL_ENUM_CAP";

/// The active cap: `TUL_ENUM_CAP` when set to an integer, else 9.
pub fn enum_cap() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

pub fn check_cap(k: usize, cap: usize) -> Result<()> {
    if k > cap {
        Err(Error::CapExceeded { k, cap })
    } else {
        Ok(())
    }
}

fn check_input(b: &ColoredGraph, cap: usize) -> Result<()> {
    b.require_connected()?;
    check_cap(b.k(), cap)
}

/// Lexicographic stream of every pairing `tau` with its face profile.
pub struct Coverings<'a> {
    base: &'a ColoredGraph,
    next: Option<Vec<usize>>,
}

impl Iterator for Coverings<'_> {
    type Item = (Permutation, FaceProfile);

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.next.take()?;
        let profile = FaceProfile::from_counts(zero_face_counts(self.base, &current));
        let mut succ = current.clone();
        if next_lex(&mut succ) {
            self.next = Some(succ);
        }
        let tau = Permutation::from_zero_based(current).expect("lexicographic walk stays in S_k");
        Some((tau, profile))
    }
}

/// All `k!` coverings of `b` in lexicographic order of `tau`.
pub fn enumerate_coverings(b: &ColoredGraph) -> Result<Coverings<'_>> {
    enumerate_coverings_with_cap(b, enum_cap())
}

pub fn enumerate_coverings_with_cap(b: &ColoredGraph, cap: usize) -> Result<Coverings<'_>> {
    check_input(b, cap)?;
    Ok(Coverings {
        base: b,
        next: Some((0..b.k()).collect()),
    })
}

/// Visits every pairing with `tau(0) = first`, in lexicographic order.
fn visit_block(b: &ColoredGraph, first: usize, mut f: impl FnMut(&[usize], Vec<usize>)) {
    let k = b.k();
    let mut tau: Vec<usize> = std::iter::once(first)
        .chain((0..k).filter(|&x| x != first))
        .collect();
    loop {
        let counts = zero_face_counts(b, &tau);
        f(&tau, counts);
        if !next_lex(&mut tau[1..]) {
            break;
        }
    }
}

/// A pairing attaining the maximal total face count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalMember {
    pub tau: Permutation,
    pub profile: FaceProfile,
}

/// All minimal coverings of a graph and their common face total `gamma`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalCoveringSet {
    pub gamma: usize,
    pub count: usize,
    pub members: Vec<MinimalMember>,
}

pub fn minimal_coverings(b: &ColoredGraph) -> Result<MinimalCoveringSet> {
    minimal_coverings_with_cap(b, enum_cap())
}

pub fn minimal_coverings_with_cap(b: &ColoredGraph, cap: usize) -> Result<MinimalCoveringSet> {
    check_input(b, cap)?;
    let blocks = exec::map_range(b.k(), |first| {
        let mut best = 0usize;
        let mut members: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        visit_block(b, first, |tau, counts| {
            let total: usize = counts.iter().sum();
            if total > best {
                best = total;
                members.clear();
            }
            if total == best {
                members.push((tau.to_vec(), counts));
            }
        });
        (best, members)
    });
    let gamma = blocks.iter().map(|(g, _)| *g).max().unwrap_or(0);
    let members: Vec<MinimalMember> = blocks
        .into_iter()
        .filter(|(g, _)| *g == gamma)
        .flat_map(|(_, m)| m)
        .map(|(tau, counts)| MinimalMember {
            tau: Permutation::from_zero_based(tau).expect("valid pairing"),
            profile: FaceProfile::from_counts(counts),
        })
        .collect();
    Ok(MinimalCoveringSet {
        gamma,
        count: members.len(),
        members,
    })
}

/// Multiplicity of every distinct (0,i)-face vector over all `k!` pairings,
/// sorted by face vector.
pub fn profile_histogram(b: &ColoredGraph) -> Result<Vec<(Vec<usize>, u64)>> {
    profile_histogram_with_cap(b, enum_cap())
}

pub fn profile_histogram_with_cap(b: &ColoredGraph, cap: usize) -> Result<Vec<(Vec<usize>, u64)>> {
    check_input(b, cap)?;
    let blocks = exec::map_range(b.k(), |first| {
        let mut hist: HashMap<Vec<usize>, u64> = HashMap::new();
        visit_block(b, first, |_, counts| *hist.entry(counts).or_default() += 1);
        hist
    });
    let mut merged: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for block in blocks {
        for (profile, n) in block {
            *merged.entry(profile).or_default() += n;
        }
    }
    Ok(merged.into_iter().collect())
}

fn check_weights(c: &[f64], d: usize) -> Result<()> {
    if c.len() != d {
        return Err(Error::InvalidArgument(format!(
            "c has {} entries but the graph has {} colors",
            c.len(),
            d
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

/// `sum over minimal coverings of prod_i c_i^{f_i}`.
pub fn limit_coefficient(b: &ColoredGraph, c: &[f64]) -> Result<f64> {
    check_weights(c, b.colors())?;
    Ok(minimal_coverings(b)?.coefficient(c))
}

impl MinimalCoveringSet {
    /// Limit coefficient for the dimension ratios `c` (unchecked).
    pub fn coefficient(&self, c: &[f64]) -> f64 {
        self.members
            .iter()
            .map(|m| {
                m.profile
                    .zero_faces
                    .iter()
                    .zip(c)
                    .map(|(&f, &ci)| ci.powi(f as i32))
                    .product::<f64>()
            })
            .sum()
    }

    pub fn checked_coefficient(&self, c: &[f64]) -> Result<f64> {
        let d = self
            .members
            .first()
            .map_or(c.len(), |m| m.profile.zero_faces.len());
        check_weights(c, d)?;
        Ok(self.coefficient(c))
    }

    /// Histogram of `zero_faces[color]` (0-based color) over the members.
    pub fn face_histogram(&self, color: usize) -> BTreeMap<usize, u64> {
        let mut hist = BTreeMap::new();
        for m in &self.members {
            *hist.entry(m.profile.zero_faces[color]).or_default() += 1;
        }
        hist
    }
}

/// For a 2-colored cycle graph: how many minimal coverings have `l`
/// (0,anchor)-faces, keyed by `l`. `anchor_color` is 1-based.
pub fn narayana_face_distribution(
    b: &ColoredGraph,
    anchor_color: usize,
) -> Result<BTreeMap<usize, u64>> {
    if b.colors() != 2 || !b.is_connected() {
        return Err(Error::InvalidArgument(
            "face distribution needs a (1,1)-cycle graph: two colors, connected".into(),
        ));
    }
    if !(1..=2).contains(&anchor_color) {
        return Err(Error::InvalidArgument(format!(
            "anchor color {anchor_color} is not 1 or 2"
        )));
    }
    Ok(minimal_coverings(b)?.face_histogram(anchor_color - 1))
}
