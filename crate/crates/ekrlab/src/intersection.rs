//! Standard and Hamming intersection sizes, and t-intersecting family
//! verification.

use serde::{Deserialize, Serialize};

use crate::error::{EkrError, Result};
use crate::families::Family;
use crate::objects::{CombObject, Kind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Standard,
    Hamming,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Standard => "standard",
            Mode::Hamming => "hamming",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(Mode::Standard),
            "hamming" => Ok(Mode::Hamming),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

/// Kind + mode + threshold t; fully determines pairwise compatibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntersectionSpec {
    pub kind: Kind,
    pub mode: Mode,
    pub t: u32,
}

impl IntersectionSpec {
    pub fn new(kind: Kind, mode: Mode, t: u32) -> Result<Self> {
        if t < 1 {
            return Err(EkrError::InvalidParams("need t >= 1".into()));
        }
        if mode == Mode::Hamming && !kind.is_ordered() {
            return Err(EkrError::ModeUnsupported(kind));
        }
        Ok(IntersectionSpec { kind, mode, t })
    }
}

/// Result of checking a family against a threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    pub witness: Option<(CombObject, CombObject)>,
}

pub fn intersection_size(
    spec: IntersectionSpec,
    a: &CombObject,
    b: &CombObject,
) -> Result<u32> {
    a.expect_kind(spec.kind)?;
    b.expect_kind(spec.kind)?;
    if a.len() != b.len() {
        return Err(EkrError::InvalidParams(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    match spec.mode {
        Mode::Hamming => Ok(a
            .entries()
            .iter()
            .zip(b.entries())
            .filter(|(x, y)| x == y)
            .count() as u32),
        Mode::Standard => {
            // min multiplicity per letter; for sets and permutations all
            // multiplicities are 0/1 so this is plain set intersection
            let n = a
                .entries()
                .iter()
                .chain(b.entries())
                .copied()
                .max()
                .unwrap_or(0);
            let ma = a.multiplicities(n);
            let mb = b.multiplicities(n);
            Ok(ma.iter().zip(&mb).map(|(x, y)| x.min(y)).sum())
        }
    }
}

/// ok iff every unordered pair of members meets the threshold; on failure
/// the witness is the first violating pair in canonical member order.
pub fn verify_family(spec: IntersectionSpec, fam: &Family) -> Result<Verdict> {
    if fam.kind() != spec.kind {
        return Err(EkrError::KindMismatch {
            expected: spec.kind,
            got: fam.kind(),
        });
    }
    let members = fam.members();
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            if intersection_size(spec, &members[i], &members[j])? < spec.t {
                return Ok(Verdict {
                    ok: false,
                    witness: Some((members[i].clone(), members[j].clone())),
                });
            }
        }
    }
    Ok(Verdict {
        ok: true,
        witness: None,
    })
}
