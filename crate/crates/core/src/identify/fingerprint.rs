use std::fmt;

use crate::liecore::LieAlgebra;

use super::derivations::{der_tower_bounded, derivation_algebra};
use super::invariants::formal_invariant_count;
use super::series::{center, derived_series, lower_central_series, upper_central_series};
use super::structure::is_semisimple;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FingerprintOptions {
    /// Number of levels Der, Der², ... to compute; zero skips the tower.
    pub tower_depth: usize,
    /// The tower stops before differentiating an algebra of larger dimension.
    pub tower_max_dim: usize,
    pub seed: u64,
}

impl Default for FingerprintOptions {
    fn default() -> Self {
        FingerprintOptions { tower_depth: 4, tower_max_dim: 40, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub dim: usize,
    pub derived_dims: Vec<usize>,
    pub lower_central_dims: Vec<usize>,
    pub upper_central_dims: Vec<usize>,
    pub dim_der: usize,
    pub tau: usize,
    pub center_dim: usize,
    pub solvable: bool,
    pub nilpotent: bool,
    pub semisimple: bool,
    pub der_tower: Vec<usize>,
}

pub fn fingerprint(alg: &LieAlgebra) -> Fingerprint {
    fingerprint_with(alg, &FingerprintOptions::default())
}

pub fn fingerprint_with(alg: &LieAlgebra, opts: &FingerprintOptions) -> Fingerprint {
    let ds = derived_series(alg).dims();
    let lcs = lower_central_series(alg).dims();
    let ucs = upper_central_series(alg).dims();
    let (tau, _) = formal_invariant_count(alg, opts.seed);
    let der_tower = if opts.tower_depth > 0 {
        der_tower_bounded(alg, opts.tower_depth, opts.tower_max_dim)
    } else {
        Vec::new()
    };
    let dim_der = der_tower.first().copied().unwrap_or_else(|| derivation_algebra(alg).dim());
    Fingerprint {
        dim: alg.dim(),
        solvable: ds.last() == Some(&0),
        nilpotent: lcs.last() == Some(&0),
        semisimple: is_semisimple(alg),
        derived_dims: ds,
        lower_central_dims: lcs,
        upper_central_dims: ucs,
        dim_der,
        tau,
        center_dim: center(alg).dim(),
        der_tower,
    }
}

fn list(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dim={} ds={} lcs={} ucs={} der={} tau={} center={} solvable={} nilpotent={} semisimple={}",
            self.dim,
            list(&self.derived_dims),
            list(&self.lower_central_dims),
            list(&self.upper_central_dims),
            self.dim_der,
            self.tau,
            self.center_dim,
            self.solvable,
            self.nilpotent,
            self.semisimple
        )?;
        if !self.der_tower.is_empty() {
            write!(f, " tower={}", list(&self.der_tower))?;
        }
        Ok(())
    }
}
