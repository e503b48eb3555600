//! Spectral data `{lambda_nq, alpha_nq}` with its sharing structure.
//!
//! Eigenvalues are double-indexed by cluster `n = 0..=n_max` and channel
//! `q = 0..m` (0-based internally; serialized 1-based). Coincident
//! eigenvalues across index pairs carry one shared residue matrix; the
//! lexicographically first pair of each coincidence group is its
//! *representative* and is the only pair whose `alpha'` is nonzero.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::problem::OmegaClass;
use crate::util::sqrt_lambda;
use crate::{CMatrix, Complex};

/// One `(n, q)` slot of the data.
#[derive(Debug, Clone)]
pub struct SpectralEntry {
    pub n: usize,
    /// 0-based channel index.
    pub q: usize,
    pub lambda: f64,
    pub alpha: CMatrix,
}

/// A group of index pairs sharing one eigenvalue (exact float equality).
#[derive(Debug, Clone)]
pub struct DistinctGroup {
    pub lambda: f64,
    /// Members in lexicographic `(n, q)` order; `members[0]` is the
    /// representative.
    pub members: Vec<(usize, usize)>,
}

/// The double-indexed collection `{lambda_nq, alpha_nq}`.
#[derive(Debug, Clone)]
pub struct SpectralData {
    omega: OmegaClass,
    n_max: usize,
    /// Row-major `(n, q)` entries, `q` fastest.
    entries: Vec<SpectralEntry>,
    groups: Vec<DistinctGroup>,
    /// Group index per entry.
    group_of: Vec<usize>,
}

impl SpectralData {
    /// Build from per-slot eigenvalues and residues. `lambda[n][q]` must be
    /// nondecreasing in `q` for each `n`; coincident eigenvalues are grouped
    /// by exact float equality.
    pub fn new(omega: OmegaClass, lambda: Vec<Vec<f64>>, alpha: Vec<Vec<CMatrix>>) -> Result<Self> {
        let m = omega.m();
        if lambda.is_empty() || lambda.len() != alpha.len() {
            return Err(Error::DimensionMismatch {
                context: "spectral data: lambda and alpha tables must be nonempty and equal-length"
                    .into(),
            });
        }
        let n_max = lambda.len() - 1;
        let mut entries = Vec::with_capacity((n_max + 1) * m);
        for n in 0..=n_max {
            if lambda[n].len() != m || alpha[n].len() != m {
                return Err(Error::DimensionMismatch {
                    context: format!("spectral data row n={n} must have {m} channels"),
                });
            }
            for q in 0..m {
                if !lambda[n][q].is_finite() {
                    return Err(Error::invalid(
                        format!("/entries/{n}/{}", q + 1),
                        "lambda must be finite",
                    ));
                }
                if q > 0 && lambda[n][q] < lambda[n][q - 1] {
                    return Err(Error::invalid(
                        format!("/entries/{n}/{}", q + 1),
                        "lambda must be nondecreasing in q within a cluster",
                    ));
                }
                if alpha[n][q].nrows() != m || alpha[n][q].ncols() != m {
                    return Err(Error::DimensionMismatch {
                        context: format!("alpha at (n={n}, q={}) must be {m} x {m}", q + 1),
                    });
                }
                entries.push(SpectralEntry {
                    n,
                    q,
                    lambda: lambda[n][q],
                    alpha: alpha[n][q].clone(),
                });
            }
        }
        let (groups, group_of) = Self::group(&entries);
        Ok(SpectralData { omega, n_max, entries, groups, group_of })
    }

    fn group(entries: &[SpectralEntry]) -> (Vec<DistinctGroup>, Vec<usize>) {
        let mut groups: Vec<DistinctGroup> = Vec::new();
        let mut by_bits: HashMap<u64, usize> = HashMap::new();
        let mut group_of = Vec::with_capacity(entries.len());
        for e in entries {
            let key = e.lambda.to_bits();
            let gi = *by_bits.entry(key).or_insert_with(|| {
                groups.push(DistinctGroup { lambda: e.lambda, members: Vec::new() });
                groups.len() - 1
            });
            groups[gi].members.push((e.n, e.q));
            group_of.push(gi);
        }
        (groups, group_of)
    }

    pub fn m(&self) -> usize {
        self.omega.m()
    }

    pub fn omega(&self) -> &OmegaClass {
        &self.omega
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn index(&self, n: usize, q: usize) -> usize {
        debug_assert!(n <= self.n_max && q < self.m());
        n * self.m() + q
    }

    pub fn entry(&self, n: usize, q: usize) -> &SpectralEntry {
        &self.entries[self.index(n, q)]
    }

    pub fn lambda(&self, n: usize, q: usize) -> f64 {
        self.entry(n, q).lambda
    }

    /// `rho = sqrt(lambda)`, principal branch.
    pub fn rho(&self, n: usize, q: usize) -> Complex {
        sqrt_lambda(self.lambda(n, q))
    }

    pub fn alpha(&self, n: usize, q: usize) -> &CMatrix {
        &self.entry(n, q).alpha
    }

    pub fn entries(&self) -> &[SpectralEntry] {
        &self.entries
    }

    pub fn groups(&self) -> &[DistinctGroup] {
        &self.groups
    }

    pub fn group_index(&self, n: usize, q: usize) -> usize {
        self.group_of[self.index(n, q)]
    }

    /// Number of index pairs sharing this entry's eigenvalue.
    pub fn multiplicity(&self, n: usize, q: usize) -> usize {
        self.groups[self.group_index(n, q)].members.len()
    }

    /// True if `(n, q)` is the representative of its coincidence group.
    pub fn is_representative(&self, n: usize, q: usize) -> bool {
        self.groups[self.group_index(n, q)].members[0] == (n, q)
    }

    /// `alpha'_nq`: the entry's residue on representatives, zero elsewhere.
    pub fn alpha_prime(&self, n: usize, q: usize) -> Option<&CMatrix> {
        if self.is_representative(n, q) {
            Some(self.alpha(n, q))
        } else {
            None
        }
    }

    /// The representative index pairs (the distinct-value support).
    pub fn distinct_support(&self) -> Vec<(usize, usize)> {
        self.groups.iter().map(|g| g.members[0]).collect()
    }

    /// `alpha_n^{(s)} = sum_{q in group s} alpha'_nq` for omega group `s`.
    pub fn alpha_group_sum(&self, n: usize, s: usize) -> CMatrix {
        let m = self.m();
        let mut acc = CMatrix::zeros(m, m);
        for q in self.omega.group(s) {
            if let Some(a) = self.alpha_prime(n, q) {
                acc += a;
            }
        }
        acc
    }

    /// Copy of the data truncated to clusters `n <= n_trunc`.
    pub fn truncated(&self, n_trunc: usize) -> SpectralData {
        let n_keep = n_trunc.min(self.n_max);
        let entries: Vec<SpectralEntry> = self
            .entries
            .iter()
            .filter(|e| e.n <= n_keep)
            .cloned()
            .collect();
        let (groups, group_of) = Self::group(&entries);
        SpectralData {
            omega: self.omega.clone(),
            n_max: n_keep,
            entries,
            groups,
            group_of,
        }
    }
}
