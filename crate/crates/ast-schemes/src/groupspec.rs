//! Parsing of group descriptions from the command line.
//!
//! Grammar: `trivial`, `coord-s3`, `cyclic:(c1,...,cn)` for relabeling by the
//! given n-cycle, and `perm:<cycles>[;<cycles>...]` for an arbitrary
//! generator list in cycle notation.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{GroupAction, PermGroup, Permutation};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroupSpec {
    Trivial,
    CoordS3,
    Cyclic(Vec<usize>),
    Perm(Vec<String>),
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidGroupSpec {
            spec: text.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = text.trim();
        match trimmed {
            "trivial" => return Ok(GroupSpec::Trivial),
            "coord-s3" => return Ok(GroupSpec::CoordS3),
            _ => {}
        }
        if let Some(body) = trimmed.strip_prefix("cyclic:") {
            let body = body.trim();
            let inner = body
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| bad("cyclic takes a parenthesized cycle, e.g. cyclic:(1,2,3)"))?;
            let labels = inner
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad("cycle entries must be integers"))?;
            return Ok(GroupSpec::Cyclic(labels));
        }
        if let Some(body) = trimmed.strip_prefix("perm:") {
            let gens: Vec<String> = body
                .split(';')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            if gens.is_empty() {
                return Err(bad("perm needs at least one generator"));
            }
            return Ok(GroupSpec::Perm(gens));
        }
        Err(bad(
            "expected one of trivial, coord-s3, cyclic:(...), perm:...",
        ))
    }

    /// Realizes the spec as a group action for a classification over `n`
    /// vertices.
    pub fn to_action(&self, n: usize) -> Result<GroupAction> {
        match self {
            GroupSpec::Trivial => Ok(GroupAction::relabel(PermGroup::trivial(n))),
            GroupSpec::CoordS3 => GroupAction::coordinate(PermGroup::symmetric(3)),
            GroupSpec::Cyclic(labels) => {
                if labels.len() != n {
                    return Err(Error::InvalidGroupSpec {
                        spec: self.to_string(),
                        reason: format!(
                            "a transitive cycle over {n} vertices needs {n} entries, got {}",
                            labels.len()
                        ),
                    });
                }
                Ok(GroupAction::relabel(PermGroup::cyclic(n, labels)?))
            }
            GroupSpec::Perm(gens) => {
                let perms = gens
                    .iter()
                    .map(|g| Permutation::parse_cycles(n, g))
                    .collect::<Result<Vec<_>>>()?;
                Ok(GroupAction::relabel(PermGroup::from_generators(n, perms)?))
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Trivial => write!(f, "trivial"),
            GroupSpec::CoordS3 => write!(f, "coord-s3"),
            GroupSpec::Cyclic(labels) => {
                write!(f, "cyclic:(")?;
                for (i, l) in labels.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, ")")
            }
            GroupSpec::Perm(gens) => write!(f, "perm:{}", gens.join(";")),
        }
    }
}
