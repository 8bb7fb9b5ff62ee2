//! Self-check suite: closed forms against enumeration, enumeration against
//! the Gaussian Wick sum, and the Wick sum against a small Monte Carlo run.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::asymptotics::{cross_check, Claim};
use crate::constructors::{make_cycle_graph, make_melonic, CycleSpec, MelonicRecipe};
use crate::enumeration::numbers::{catalan, narayana_recurrence, narayana_row};
use crate::enumeration::{enum_cap, enumerate_coverings, narayana_face_distribution};
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, CoveringGraph};
use crate::tensor_sim::{
    gaussian_exact_mean, monte_carlo_mean, Distribution, TensorSpec, TraceTarget,
};

pub const SUMMARY_SCHEMA: u32 = 1;

/// Monte Carlo samples per Wick check.
const WICK_SAMPLES: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteFamily {
    #[serde(rename = "cycle_11")]
    Cycle11,
    CycleMm,
    CycleMn,
    Melonic,
}

impl SuiteFamily {
    pub const ALL: [SuiteFamily; 4] = [
        SuiteFamily::Cycle11,
        SuiteFamily::CycleMm,
        SuiteFamily::CycleMn,
        SuiteFamily::Melonic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteFamily::Cycle11 => "cycle_11",
            SuiteFamily::CycleMm => "cycle_mm",
            SuiteFamily::CycleMn => "cycle_mn",
            SuiteFamily::Melonic => "melonic",
        }
    }
}

impl std::str::FromStr for SuiteFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown family {s:?}; expected one of cycle_11, cycle_mm, cycle_mn, melonic"
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifySuiteConfig {
    pub max_k: usize,
    #[serde(rename = "max_D")]
    pub max_d: usize,
    pub families: Vec<SuiteFamily>,
    pub seed: u64,
}

impl Default for VerifySuiteConfig {
    fn default() -> Self {
        VerifySuiteConfig {
            max_k: 5,
            max_d: 5,
            families: SuiteFamily::ALL.to_vec(),
            seed: 0,
        }
    }
}

impl VerifySuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let cap = enum_cap();
        if self.max_k > cap {
            return Err(Error::CapExceeded { k: self.max_k, cap });
        }
        if self.max_k == 0 {
            return Err(Error::InvalidArgument("max_k must be at least 1".into()));
        }
        if self.max_d < 2 {
            return Err(Error::InvalidArgument("max_D must be at least 2".into()));
        }
        if self.families.is_empty() {
            return Err(Error::InvalidArgument("no families selected".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub family: SuiteFamily,
    pub passed: bool,
    pub details: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub schema: u32,
    pub passed: bool,
    pub config: VerifySuiteConfig,
    pub total: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    pub checks: Vec<Check>,
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn push(&mut self, family: SuiteFamily, name: String, result: Result<(bool, Value)>) {
        let (passed, details) = match result {
            Ok(x) => x,
            Err(e) => (false, json!({ "error": e.to_string() })),
        };
        self.checks.push(Check {
            name,
            family,
            passed,
            details,
        });
    }
}

/// Runs every check selected by `config`. Gate failures are reported in the
/// summary; only a bad configuration is an `Err`.
pub fn verify(config: &VerifySuiteConfig) -> Result<VerifySummary> {
    config.validate()?;
    let mut families = config.families.clone();
    families.sort();
    families.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut suite = Suite { checks: Vec::new() };

    for &family in &families {
        match family {
            SuiteFamily::Cycle11 => cycle11_checks(&mut suite, config),
            SuiteFamily::CycleMm | SuiteFamily::CycleMn => {
                cycle_split_checks(&mut suite, config, family, &mut rng)
            }
            SuiteFamily::Melonic => melonic_checks(&mut suite, config, &mut rng),
        }
        wick_checks(&mut suite, config, family);
    }

    let failures: Vec<String> = suite
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.clone())
        .collect();
    Ok(VerifySummary {
        schema: SUMMARY_SCHEMA,
        passed: failures.is_empty(),
        config: VerifySuiteConfig {
            families,
            ..config.clone()
        },
        total: suite.checks.len(),
        failed: failures.len(),
        failures,
        checks: suite.checks,
    })
}

fn random_c<R: Rng>(d: usize, rng: &mut R) -> Vec<f64> {
    // Multiples of 1/4 in [0.5, 3] keep c_i N integral for N divisible by 4.
    (0..d)
        .map(|_| rng.random_range(2..=12) as f64 / 4.0)
        .collect()
}

fn cycle11_checks(suite: &mut Suite, config: &VerifySuiteConfig) {
    let fam = SuiteFamily::Cycle11;
    for k in 1..=config.max_k {
        let result = (|| {
            let g = make_cycle_graph(&CycleSpec::standard(k, 1, 1)?)?;
            let hist = narayana_face_distribution(&g, 1)?;
            let row = narayana_row(k as u64)?;
            let expected: Vec<u64> = row.iter().map(|n| n.to_u64().unwrap_or(u64::MAX)).collect();
            let observed: Vec<u64> = (1..=k)
                .map(|l| hist.get(&l).copied().unwrap_or(0))
                .collect();
            let count: u64 = hist.values().sum();
            let cat = catalan(k as u64).to_u64().unwrap_or(u64::MAX);
            let recurrence_ok = (1..=k).all(|l| {
                narayana_recurrence(k as u64, l as u64).ok().as_ref() == Some(&row[l - 1])
            });
            let mut genus_ok = true;
            let mut planar = 0u64;
            for (tau, profile) in enumerate_coverings(&g)? {
                let cov = CoveringGraph::new(g.clone(), tau)?;
                let genus = cov.genus()?;
                let minimal = profile.total == k + 1;
                genus_ok &=
                    genus.as_integer().is_some_and(|x| x >= 0) && (genus.twice() == 0) == minimal;
                planar += u64::from(genus.twice() == 0);
            }
            let passed = observed == expected
                && count == cat
                && !hist.contains_key(&0)
                && recurrence_ok
                && genus_ok
                && planar == cat;
            Ok((
                passed,
                json!({
                    "k": k,
                    "count": count,
                    "catalan": cat,
                    "histogram": observed,
                    "narayana": expected,
                    "recurrence_ok": recurrence_ok,
                    "planar_coverings": planar,
                    "genus_ok": genus_ok,
                }),
            ))
        })();
        suite.push(
            fam,
            format!("cycle_11 k={k}: Catalan count, Narayana row, genus"),
            result,
        );
    }
}

fn cycle_split_checks<R: Rng>(
    suite: &mut Suite,
    config: &VerifySuiteConfig,
    family: SuiteFamily,
    rng: &mut R,
) {
    for d in 2..=config.max_d {
        for m in 1..d {
            let n = d - m;
            let selected = match family {
                SuiteFamily::CycleMm => m == n,
                _ => m != n,
            };
            if !selected {
                continue;
            }
            for k in 1..=config.max_k {
                let c = random_c(d, rng);
                let result = (|| {
                    let spec = CycleSpec::standard(k, m, n)?;
                    let g = make_cycle_graph(&spec)?;
                    let r = cross_check(&g, &Claim::Cycle(spec), &c)?;
                    Ok((r.passed, serde_json::to_value(&r).unwrap_or(Value::Null)))
                })();
                suite.push(
                    family,
                    format!(
                        "{} ({m},{n}) k={k}: closed form vs enumeration",
                        family.name()
                    ),
                    result,
                );
            }
        }
    }
}

fn melonic_checks<R: Rng>(suite: &mut Suite, config: &VerifySuiteConfig, rng: &mut R) {
    let fam = SuiteFamily::Melonic;
    for d in 3..=config.max_d {
        for k in 1..=config.max_k {
            let recipe = MelonicRecipe::random(d, k, rng);
            let c = random_c(d, rng);
            let result = (|| {
                let g = make_melonic(&recipe)?;
                let r = cross_check(&g, &Claim::Melonic, &c)?;
                let gamma_ok = r.gamma_enum == 1 + k * (d - 1);
                Ok((
                    r.passed && gamma_ok,
                    json!({ "recipe": recipe, "report": r }),
                ))
            })();
            suite.push(
                fam,
                format!("melonic D={d} k={k}: unique minimal covering"),
                result,
            );
        }
    }
}

/// Small graphs of the family whose Wick mean is checked by Monte Carlo.
fn wick_targets(
    config: &VerifySuiteConfig,
    family: SuiteFamily,
) -> Vec<(String, ColoredGraph, Vec<f64>)> {
    let k = config.max_k.min(2);
    let cycle = |m: usize, n: usize| -> Option<(String, ColoredGraph, Vec<f64>)> {
        let spec = CycleSpec::standard(k, m, n).ok()?;
        let g = make_cycle_graph(&spec).ok()?;
        Some((format!("({m},{n})-cycle k={k}"), g, vec![1.0; m + n]))
    };
    let picked = match family {
        SuiteFamily::Cycle11 => cycle(1, 1),
        SuiteFamily::CycleMm if config.max_d >= 4 => cycle(2, 2),
        SuiteFamily::CycleMm => None,
        SuiteFamily::CycleMn if config.max_d >= 3 => cycle(1, 2),
        SuiteFamily::CycleMn => None,
        SuiteFamily::Melonic if config.max_d >= 3 => {
            let recipe = MelonicRecipe::random(3, k, &mut ChaCha8Rng::seed_from_u64(config.seed));
            make_melonic(&recipe)
                .ok()
                .map(|g| (format!("melonic D=3 k={k}"), g, vec![1.0; 3]))
        }
        SuiteFamily::Melonic => None,
    };
    picked.into_iter().collect()
}

fn wick_checks(suite: &mut Suite, config: &VerifySuiteConfig, family: SuiteFamily) {
    const N: usize = 3;
    for (label, g, c) in wick_targets(config, family) {
        let result = (|| {
            let spec = TensorSpec::new(c, N, Distribution::ComplexGaussian, config.seed)?;
            let exact = gaussian_exact_mean(&g, &spec.dims()?)?;
            let est = monte_carlo_mean(&spec, &TraceTarget::Graph(g), WICK_SAMPLES)?;
            let z = (est.mean - exact) / est.stderr;
            Ok((
                z.abs() <= 4.0,
                json!({
                    "N": N,
                    "exact": exact,
                    "mean": est.mean,
                    "stderr": est.stderr,
                    "samples": est.samples,
                    "z": z,
                }),
            ))
        })();
        suite.push(
            family,
            format!("{} {label}: Wick mean vs Monte Carlo", family.name()),
            result,
        );
    }
}
