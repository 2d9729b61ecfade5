//! Resource limits for the exhaustive parts of the library.
//!
//! Caps are process-wide and read on every capped operation. They can be
//! replaced programmatically with [`set_caps`] or parsed from a
//! `key=value,key=value` string (see [`Caps::apply_overrides`]); the CLI reads
//! that string from the `MILEF_CAPS` environment variable.

use std::sync::RwLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Caps {
    /// Largest intrinsic dimension handed to vertex enumeration.
    pub vertex_dim: usize,
    /// Largest number of lattice points (or search nodes) visited by integer enumeration.
    pub lattice_points: u64,
    /// Largest edge count for subset-sweep oracles (2^edges subsets).
    pub oracle_edges: usize,
    /// Largest n accepted by the TSP generator and oracle.
    pub tsp_n: usize,
    /// Largest number of square row selections in the bimodularity sweep.
    pub bimod_subsets: u64,
    /// Default direction box for lattice-width sweeps.
    pub v_max: i64,
}

impl Caps {
    pub const DEFAULT: Caps = Caps {
        vertex_dim: 16,
        lattice_points: 200_000,
        oracle_edges: 15,
        tsp_n: 5,
        bimod_subsets: 10_000_000,
        v_max: 5,
    };

    /// Apply overrides written as `vertex_dim=12,tsp_n=6`.
    pub fn apply_overrides(mut self, spec: &str) -> Result<Caps> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Precondition(format!("cap override `{item}` is not key=value")))?;
            let bad = || Error::Precondition(format!("cap override `{item}` has a malformed value"));
            let key = key.trim();
            let value = value.trim();
            match key {
                "vertex_dim" => self.vertex_dim = value.parse().map_err(|_| bad())?,
                "lattice_points" => self.lattice_points = value.parse().map_err(|_| bad())?,
                "oracle_edges" => self.oracle_edges = value.parse().map_err(|_| bad())?,
                "tsp_n" => self.tsp_n = value.parse().map_err(|_| bad())?,
                "bimod_subsets" => self.bimod_subsets = value.parse().map_err(|_| bad())?,
                "v_max" => self.v_max = value.parse().map_err(|_| bad())?,
                _ => return Err(Error::Precondition(format!("unknown cap `{key}`"))),
            }
        }
        Ok(self)
    }
}

impl Default for Caps {
    fn default() -> Self {
        Caps::DEFAULT
    }
}

static CAPS: RwLock<Caps> = RwLock::new(Caps::DEFAULT);

pub fn caps() -> Caps {
    *CAPS.read().unwrap_or_else(|e| e.into_inner())
}

pub fn set_caps(c: Caps) {
    *CAPS.write().unwrap_or_else(|e| e.into_inner()) = c;
}
