use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::oracle::{CountingOracle, Oracle, QueryOutcome};
use crate::poset::{EdgeSet, ElementId, TreePoset};
use crate::representation::OrderIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every ordered pair `(u, v)` with `u ≠ v`.
    Exhaustive,
    /// This many uniformly random ordered pairs.
    Sampled(usize),
}

impl FromStr for VerifyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "exhaustive" {
            return Ok(VerifyMode::Exhaustive);
        }
        s.strip_prefix("sampled:")
            .and_then(|k| k.parse().ok())
            .map(VerifyMode::Sampled)
            .ok_or_else(|| format!("bad verify mode {s:?} (expected exhaustive or sampled:K)"))
    }
}

impl fmt::Display for VerifyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyMode::Exhaustive => f.write_str("exhaustive"),
            VerifyMode::Sampled(k) => write!(f, "sampled:{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub u: ElementId,
    pub v: ElementId,
    pub expected: QueryOutcome,
    pub got: QueryOutcome,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pair ({}, {}): oracle says {:?}, index says {:?}",
            self.u, self.v, self.expected, self.got
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub pairs_checked: u64,
    /// Set when the recovered edges do not even form a tree.
    pub structural_error: Option<String>,
    pub mismatch: Option<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.structural_error.is_none() && self.mismatch.is_none()
    }
}

/// Builds an [`OrderIndex`] from `edges` and checks its answers against a
/// fresh oracle over `truth`, stopping at the first disagreement.
pub fn verify_edges(
    truth: &TreePoset,
    edges: &EdgeSet,
    mode: VerifyMode,
    seed: u64,
) -> VerifyReport {
    let n = truth.len();
    let index = match OrderIndex::construct(n, edges) {
        Ok(index) => index,
        Err(e) => {
            return VerifyReport {
                pairs_checked: 0,
                structural_error: Some(e.to_string()),
                mismatch: None,
            }
        }
    };
    let mut oracle = CountingOracle::new(truth);
    let mut checked = 0u64;
    let mut check = |u: usize, v: usize| -> Option<Mismatch> {
        let (u, v) = (ElementId::from(u), ElementId::from(v));
        checked += 1;
        let expected = oracle.query(u, v).expect("pair is in range and distinct");
        let got = index
            .comparison_query(u, v)
            .expect("index covers every element");
        (expected != got).then_some(Mismatch {
            u,
            v,
            expected,
            got,
        })
    };

    let mut mismatch = None;
    match mode {
        VerifyMode::Exhaustive => {
            'outer: for u in 0..n {
                for v in 0..n {
                    if u != v {
                        mismatch = check(u, v);
                        if mismatch.is_some() {
                            break 'outer;
                        }
                    }
                }
            }
        }
        VerifyMode::Sampled(k) if n >= 2 => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..k {
                let u = rng.random_range(0..n);
                // uniform over v ≠ u
                let mut v = rng.random_range(0..n - 1);
                if v >= u {
                    v += 1;
                }
                mismatch = check(u, v);
                if mismatch.is_some() {
                    break;
                }
            }
        }
        VerifyMode::Sampled(_) => {}
    }
    VerifyReport {
        pairs_checked: checked,
        structural_error: None,
        mismatch,
    }
}
