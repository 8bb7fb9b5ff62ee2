//! D-colored bipartite graphs encoded as permutation tuples, their covering
//! graphs, face counts and genus.
//!
//! White vertex `j` and black vertex `sigma[i](j)` share the color-`i` edge.
//! A covering adds color-0 edges `j -- tau(j)`; the alternating 0/i cycles
//! of the covering are exactly the cycles of `tau⁻¹ ∘ sigma[i]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{cycles_of, Permutation};

/// A D-colored graph on `k` white and `k` black vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct ColoredGraph {
    k: usize,
    sigma: Vec<Permutation>,
}

/// On-disk form: `{"k": .., "D": .., "sigma": [[..], ..]}` with 1-based images.
#[derive(Serialize, Deserialize)]
pub struct GraphFile {
    pub k: usize,
    #[serde(rename = "D")]
    pub d: usize,
    pub sigma: Vec<Vec<usize>>,
}

impl TryFrom<GraphFile> for ColoredGraph {
    type Error = Error;

    fn try_from(raw: GraphFile) -> Result<Self> {
        if raw.sigma.len() != raw.d {
            return Err(Error::InvalidGraph(format!(
                "D: declared {} colors but sigma has {} rows",
                raw.d,
                raw.sigma.len()
            )));
        }
        let mut sigma = Vec::with_capacity(raw.d);
        for (i, row) in raw.sigma.iter().enumerate() {
            if row.len() != raw.k {
                return Err(Error::InvalidGraph(format!(
                    "sigma[{}]: expected {} entries (k), found {}",
                    i + 1,
                    raw.k,
                    row.len()
                )));
            }
            sigma.push(Permutation::from_one_based(
                row,
                &format!("sigma[{}]", i + 1),
            )?);
        }
        ColoredGraph::new(sigma)
    }
}

impl From<ColoredGraph> for GraphFile {
    fn from(g: ColoredGraph) -> Self {
        GraphFile {
            k: g.k,
            d: g.sigma.len(),
            sigma: g.sigma.iter().map(Permutation::one_based).collect(),
        }
    }
}

impl ColoredGraph {
    /// Builds a graph from one permutation per color. Connectivity is not
    /// required here; see [`ColoredGraph::require_connected`].
    pub fn new(sigma: Vec<Permutation>) -> Result<Self> {
        let Some(first) = sigma.first() else {
            return Err(Error::InvalidGraph("D: need at least one color".into()));
        };
        let k = first.len();
        if k == 0 {
            return Err(Error::InvalidGraph(
                "k: need at least one vertex pair".into(),
            ));
        }
        if let Some(bad) = sigma.iter().find(|p| p.len() != k) {
            return Err(Error::LengthMismatch {
                left: k,
                right: bad.len(),
            });
        }
        Ok(ColoredGraph { k, sigma })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of colors D.
    pub fn colors(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[Permutation] {
        &self.sigma
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.k
    }

    pub fn edge_count(&self) -> usize {
        self.k * self.colors()
    }

    /// True iff the 2k-vertex graph is connected.
    pub fn is_connected(&self) -> bool {
        let k = self.k;
        let mut dsu = Dsu::new(2 * k);
        for s in &self.sigma {
            for j in 0..k {
                dsu.union(j, k + s.apply(j));
            }
        }
        dsu.components() == 1
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Conjugates every color by `rho` (relabels white and black vertices).
    pub fn relabel(&self, rho: &Permutation) -> Result<Self> {
        let sigma = self
            .sigma
            .iter()
            .map(|s| s.conjugate_by(rho))
            .collect::<Result<Vec<_>>>()?;
        ColoredGraph::new(sigma)
    }

    /// Reorders colors: color `i` of the result is color `order[i]` of `self`.
    pub fn permute_colors(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.colors() {
            return Err(Error::InvalidArgument(format!(
                "color order has {} entries, graph has {} colors",
                order.len(),
                self.colors()
            )));
        }
        let sigma = order
            .iter()
            .map(|&c| {
                self.sigma
                    .get(c)
                    .cloned()
                    .ok_or_else(|| Error::InvalidArgument(format!("no color {}", c + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        ColoredGraph::new(sigma)
    }
}

/// A colored graph together with a pairing `tau` (its color-0 edges).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringGraph {
    base: ColoredGraph,
    tau: Permutation,
}

impl CoveringGraph {
    pub fn new(base: ColoredGraph, tau: Permutation) -> Result<Self> {
        if tau.len() != base.k() {
            return Err(Error::LengthMismatch {
                left: base.k(),
                right: tau.len(),
            });
        }
        Ok(CoveringGraph { base, tau })
    }

    pub fn base(&self) -> &ColoredGraph {
        &self.base
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    pub fn face_profile(&self) -> FaceProfile {
        FaceProfile::from_counts(zero_face_counts(&self.base, self.tau.images()))
    }

    /// Face profile including the (i,j)-faces of the base graph.
    pub fn face_profile_with_pairs(&self) -> FaceProfile {
        let mut profile = self.face_profile();
        let sigma = self.base.sigma();
        let mut seen = Vec::new();
        let mut pairs = Vec::new();
        for i in 0..sigma.len() {
            for j in (i + 1)..sigma.len() {
                let inv_j = sigma[j].inverse();
                pairs.push(PairFaces {
                    colors: (i + 1, j + 1),
                    faces: cycles_of(inv_j.images(), sigma[i].images(), &mut seen),
                });
            }
        }
        profile.pair_faces = Some(pairs);
        profile
    }

    /// Genus of the 3-colored covering of a 2-colored graph, from
    /// `F - E + V = 2 - 2g` with all (i,j)-faces, `E = 3k`, `V = 2k`.
    pub fn genus(&self) -> Result<Genus> {
        if self.base.colors() != 2 {
            return Err(Error::Unsupported(format!(
                "genus is only defined here for D = 2 (got D = {})",
                self.base.colors()
            )));
        }
        let profile = self.face_profile_with_pairs();
        let faces = profile.total
            + profile
                .pair_faces
                .as_ref()
                .map_or(0, |p| p.iter().map(|f| f.faces).sum::<usize>());
        let k = self.base.k() as i64;
        let euler = faces as i64 - 3 * k + 2 * k;
        Ok(Genus(2 - euler))
    }
}

/// Per-color (0,i)-face counts for a pairing `tau` (0-based images).
pub fn zero_face_counts(base: &ColoredGraph, tau: &[usize]) -> Vec<usize> {
    let mut tau_inv = vec![0; tau.len()];
    for (j, &x) in tau.iter().enumerate() {
        tau_inv[x] = j;
    }
    let mut seen = Vec::with_capacity(tau.len());
    base.sigma()
        .iter()
        .map(|s| cycles_of(&tau_inv, s.images(), &mut seen))
        .collect()
}

/// Number of (i,j)-faces for one color pair (1-based colors).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFaces {
    pub colors: (usize, usize),
    pub faces: usize,
}

/// Counts of (0,i)-faces of a covering, their sum, and optionally the
/// (i,j)-faces of the base graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceProfile {
    pub zero_faces: Vec<usize>,
    pub total: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pair_faces: Option<Vec<PairFaces>>,
}

impl FaceProfile {
    pub fn from_counts(zero_faces: Vec<usize>) -> Self {
        let total = zero_faces.iter().sum();
        FaceProfile {
            zero_faces,
            total,
            pair_faces: None,
        }
    }
}

/// Twice the genus, kept as an integer so half-integral values stay visible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Genus(pub i64);

impl Genus {
    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn as_integer(self) -> Option<i64> {
        (self.0 % 2 == 0).then_some(self.0 / 2)
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn components(&mut self) -> usize {
        (0..self.parent.len())
            .filter(|&x| self.find(x) == x)
            .count()
    }
}
