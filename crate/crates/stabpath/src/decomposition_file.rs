//! Decomposition JSON: `{rank, gram, summands, history}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use stabpath_core::mutation::{p1_gram, p1_line, pn_line_bundle_gram, BraidLetter, PairedLattice};

use crate::failure::{read_error, CmdResult, Failure};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub summands: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    pub history: Vec<String>,
    /// Current position of each original summand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
}

impl DecompositionFile {
    pub fn to_lattice(&self) -> CmdResult<PairedLattice> {
        if self.rank != self.gram.len() {
            return Err(Failure::input(format!(
                "decomposition: rank {} does not match the {}-row gram matrix",
                self.rank,
                self.gram.len()
            )));
        }
        if self.summands.iter().flatten().any(|v| v.len() != self.rank) {
            return Err(Failure::input(
                "decomposition: every summand vector must have length rank",
            ));
        }
        let mut lat = PairedLattice::new(self.gram.clone(), self.summands.clone())?;
        lat.history = self
            .history
            .iter()
            .map(|s| s.parse::<BraidLetter>())
            .collect::<Result<_, _>>()?;
        if let Some(p) = &self.permutation {
            let mut sorted = p.clone();
            sorted.sort_unstable();
            if sorted != (0..lat.summands.len()).collect::<Vec<_>>() {
                return Err(Failure::input(
                    "decomposition: permutation is not a permutation of the summands",
                ));
            }
            lat.permutation = p.clone();
        }
        Ok(lat)
    }

    pub fn from_lattice(l: &PairedLattice) -> Self {
        DecompositionFile {
            rank: l.rank,
            gram: l.gram.clone(),
            summands: l.summands.clone(),
            history: l.history.iter().map(|x| x.to_string()).collect(),
            permutation: Some(l.permutation.clone()),
        }
    }
}

pub fn load(path: &Path) -> CmdResult<PairedLattice> {
    let text = std::fs::read_to_string(path).map_err(|e| read_error(path, e))?;
    let f: DecompositionFile = serde_json::from_str(&text).map_err(|e| read_error(path, e))?;
    f.to_lattice()
}

/// `p1` for `<O, O(1)>`, or `pN:d1,d2,...` for line bundles on `P^N` in their own basis.
pub fn builtin(spec: &str) -> CmdResult<PairedLattice> {
    if spec == "p1" {
        return Ok(PairedLattice::new(p1_gram(), vec![vec![p1_line(0)], vec![p1_line(1)]])?);
    }
    let bad = || {
        Failure::input(format!(
            "decomposition: unknown builtin {spec:?} (use p1 or pN:d1,d2,...)"
        ))
    };
    let rest = spec.strip_prefix('p').ok_or_else(bad)?;
    let (n, degs) = rest.split_once(':').ok_or_else(bad)?;
    let n: u32 = n.parse().map_err(|_| bad())?;
    let degs: Vec<i64> = degs
        .split(',')
        .map(|d| d.trim().parse().map_err(|_| bad()))
        .collect::<CmdResult<_>>()?;
    Ok(PairedLattice::standard(pn_line_bundle_gram(n, &degs)?)?)
}
