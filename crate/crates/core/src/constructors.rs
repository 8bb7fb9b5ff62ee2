//! Named graph families: dipoles, melonic graphs and (m,n)-cycle graphs.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ColoredGraph;
use crate::perm::Permutation;

/// The D-colored graph on two vertices: `k = 1`, every color the identity.
pub fn make_dipole(d: usize) -> Result<ColoredGraph> {
    if d == 0 {
        return Err(Error::InvalidArgument(
            "a dipole needs at least one color".into(),
        ));
    }
    ColoredGraph::new(vec![Permutation::identity(1); d])
}

/// Stable identifier of an edge: its color and white endpoint (both 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeId {
    pub color: usize,
    pub white: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MelonicStep {
    pub target_edge: EdgeId,
    pub color: usize,
}

impl MelonicStep {
    pub fn cut(color: usize, white: usize) -> Self {
        MelonicStep {
            target_edge: EdgeId { color, white },
            color,
        }
    }
}

/// Insertion sequence growing a D-dipole into a melonic graph with
/// `steps.len() + 1` white vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MelonicRecipe {
    #[serde(rename = "D")]
    pub d: usize,
    pub steps: Vec<MelonicStep>,
}

impl MelonicRecipe {
    pub fn k(&self) -> usize {
        self.steps.len() + 1
    }

    /// Uniformly random cut positions and colors.
    pub fn random<R: Rng + ?Sized>(d: usize, k: usize, rng: &mut R) -> Self {
        let steps = (1..k.max(1))
            .map(|current| MelonicStep::cut(rng.random_range(1..=d), rng.random_range(1..=current)))
            .collect();
        MelonicRecipe { d, steps }
    }
}

/// Builds the melonic graph described by `recipe`.
///
/// Each step cuts the edge `white -- sigma[color](white)` and inserts a new
/// white/black pair joined by every color except `color`; the cut edge's two
/// halves attach to the new pair.
pub fn make_melonic(recipe: &MelonicRecipe) -> Result<ColoredGraph> {
    let d = recipe.d;
    if d < 3 {
        return Err(Error::Construction(format!(
            "melonic graphs need D >= 3 (got D = {d}); with two colors every insertion \
             just lengthens a cycle"
        )));
    }
    let mut sigma: Vec<Vec<usize>> = vec![vec![0]; d];
    for (n, step) in recipe.steps.iter().enumerate() {
        let k = n + 1;
        let EdgeId { color, white } = step.target_edge;
        if step.color != color {
            return Err(Error::Construction(format!(
                "step {}: inserts color {} but cuts an edge of color {}",
                n + 1,
                step.color,
                color
            )));
        }
        if color == 0 || color > d {
            return Err(Error::Construction(format!(
                "step {}: color {} is not in 1..={}",
                n + 1,
                color,
                d
            )));
        }
        if white == 0 || white > k {
            return Err(Error::Construction(format!(
                "step {}: no edge at white vertex {} (only {} exist)",
                n + 1,
                white,
                k
            )));
        }
        let cut = color - 1;
        for (c, s) in sigma.iter_mut().enumerate() {
            if c == cut {
                let old = s[white - 1];
                s[white - 1] = k;
                s.push(old);
            } else {
                s.push(k);
            }
        }
    }
    let sigma = sigma
        .into_iter()
        .map(Permutation::from_zero_based)
        .collect::<Result<Vec<_>>>()?;
    ColoredGraph::new(sigma)
}

/// Colors of an (m,n)-cycle graph; 1-based, disjoint, covering `1..=m+n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSpec {
    pub k: usize,
    pub m_colors: Vec<usize>,
    pub n_colors: Vec<usize>,
}

impl CycleSpec {
    pub fn new(k: usize, m_colors: Vec<usize>, n_colors: Vec<usize>) -> Result<Self> {
        let spec = CycleSpec {
            k,
            m_colors,
            n_colors,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The split with `m_colors = {1..m}` and `n_colors = {m+1..m+n}`.
    pub fn standard(k: usize, m: usize, n: usize) -> Result<Self> {
        CycleSpec::new(k, (1..=m).collect(), (m + 1..=m + n).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidSpec("k: must be positive".into()));
        }
        if self.m_colors.is_empty() || self.n_colors.is_empty() {
            return Err(Error::InvalidSpec(
                "m_colors and n_colors must both be nonempty".into(),
            ));
        }
        let d = self.colors();
        let mut seen = BTreeSet::new();
        for (field, colors) in [("m_colors", &self.m_colors), ("n_colors", &self.n_colors)] {
            for &c in colors {
                if c == 0 || c > d {
                    return Err(Error::InvalidSpec(format!(
                        "{field}: color {c} is not in 1..={d} (m + n = {d})"
                    )));
                }
                if !seen.insert(c) {
                    return Err(Error::InvalidSpec(format!(
                        "{field}: color {c} appears more than once"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m_colors.len()
    }

    pub fn n(&self) -> usize {
        self.n_colors.len()
    }

    pub fn colors(&self) -> usize {
        self.m() + self.n()
    }

    /// The same graph with the two dipole classes exchanged.
    pub fn swapped(&self) -> Self {
        CycleSpec {
            k: self.k,
            m_colors: self.n_colors.clone(),
            n_colors: self.m_colors.clone(),
        }
    }

    fn sorted(colors: &[usize]) -> Vec<usize> {
        let mut v = colors.to_vec();
        v.sort_unstable();
        v
    }
}

/// m-dipoles join white `j` to black `j`, n-dipoles join white `j` to black
/// `j + 1 (mod k)`.
pub fn make_cycle_graph(spec: &CycleSpec) -> Result<ColoredGraph> {
    spec.validate()?;
    let d = spec.colors();
    let mut sigma = vec![Permutation::identity(spec.k); d];
    for &c in &spec.n_colors {
        sigma[c - 1] = Permutation::shift(spec.k);
    }
    ColoredGraph::new(sigma)
}

/// One piece of a split cycle graph: the original colors it carries
/// (ascending, 1-based) and the graph restricted to them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePart {
    pub colors: Vec<usize>,
    pub graph: ColoredGraph,
}

/// Splits an (m,n)-cycle graph with `m <= n` into `m - 1` (1,1)-cycles
/// pairing `i_v` with `i'_v`, plus one (1, n-m+1)-cycle carrying `i_m` and
/// `i'_m..i'_n`. When `m == n` the last part is also a (1,1)-cycle.
pub fn split_cycle_graph(r: &ColoredGraph, spec: &CycleSpec) -> Result<Vec<CyclePart>> {
    if make_cycle_graph(spec)? != *r {
        return Err(Error::InvalidArgument(
            "graph is not the cycle graph described by the spec".into(),
        ));
    }
    let (m, n) = (spec.m(), spec.n());
    if m > n {
        return Err(Error::InvalidArgument(format!(
            "split expects m <= n (got m = {m}, n = {n}); swap the color classes"
        )));
    }
    let mc = CycleSpec::sorted(&spec.m_colors);
    let nc = CycleSpec::sorted(&spec.n_colors);
    let mut groups: Vec<Vec<usize>> = (0..m - 1).map(|v| vec![mc[v], nc[v]]).collect();
    let mut last = vec![mc[m - 1]];
    last.extend_from_slice(&nc[m - 1..]);
    groups.push(last);

    groups
        .into_iter()
        .map(|mut colors| {
            colors.sort_unstable();
            let sigma = colors.iter().map(|&c| r.sigma()[c - 1].clone()).collect();
            Ok(CyclePart {
                colors,
                graph: ColoredGraph::new(sigma)?,
            })
        })
        .collect()
}

/// Reassembles the parts of [`split_cycle_graph`] into one graph.
pub fn merge_parts(parts: &[CyclePart]) -> Result<ColoredGraph> {
    let d: usize = parts.iter().map(|p| p.colors.len()).sum();
    let mut sigma: Vec<Option<Permutation>> = vec![None; d];
    for part in parts {
        for (slot, &c) in part.colors.iter().enumerate() {
            let target = sigma
                .get_mut(c.wrapping_sub(1))
                .ok_or_else(|| Error::InvalidArgument(format!("color {c} out of range")))?;
            if target.replace(part.graph.sigma()[slot].clone()).is_some() {
                return Err(Error::InvalidArgument(format!("color {c} appears twice")));
            }
        }
    }
    let sigma = sigma
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidArgument("parts leave a color uncovered".into()))?;
    ColoredGraph::new(sigma)
}

/// Whether `b` reduces to a D-dipole by contracting pairs joined by exactly
/// D-1 parallel edges, lowest white label first. Always false for D < 3 and
/// for disconnected graphs.
pub fn is_melonic(b: &ColoredGraph) -> bool {
    reduce_melonic(b, |eligible| eligible[0])
}

/// Melon reduction with a caller-chosen contraction order. `pick` receives
/// the eligible white vertices (0-based, ascending) and returns one of them.
pub fn reduce_melonic(b: &ColoredGraph, mut pick: impl FnMut(&[usize]) -> usize) -> bool {
    let d = b.colors();
    if d < 3 || !b.is_connected() {
        return false;
    }
    let k = b.k();
    let mut sigma: Vec<Vec<usize>> = b.sigma().iter().map(|s| s.images().to_vec()).collect();
    let mut alive = vec![true; k];
    let mut remaining = k;

    while remaining > 1 {
        // (white, black partner, the one color not joining them)
        let mut eligible = Vec::new();
        let mut partner = Vec::new();
        for w in (0..k).filter(|&w| alive[w]) {
            for c in 0..d {
                let target = sigma[c][w];
                let joined = (0..d).filter(|&c2| sigma[c2][w] == target).count();
                if joined == d - 1 {
                    let odd = (0..d).find(|&c2| sigma[c2][w] != target).unwrap();
                    eligible.push(w);
                    partner.push((target, odd));
                    break;
                }
            }
        }
        if eligible.is_empty() {
            return false;
        }
        let w = pick(&eligible);
        let idx = eligible.iter().position(|&x| x == w).unwrap_or(0);
        let w = eligible[idx];
        let (black, odd) = partner[idx];
        let far_black = sigma[odd][w];
        let Some(far_white) = (0..k).find(|&u| alive[u] && u != w && sigma[odd][u] == black) else {
            return false;
        };
        sigma[odd][far_white] = far_black;
        alive[w] = false;
        remaining -= 1;
    }
    true
}
