//! Enumeration bounds shared by the exhaustive routines.

use crate::error::{Error, Result};

/// Environment variable that overrides [`Limits::max_n`].
pub const MAX_N_ENV: &str = "PATTERNA_MAX_N";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest index count scanned exhaustively (brute-force oracle, `ip_family`,
    /// membership structures).
    pub max_n: usize,
    /// Largest vertex count for exhaustive clique enumeration.
    pub clique_vertices: usize,
    /// Largest vertex count for maximal-clique realization and blowups.
    pub realization_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_n: 16,
            clique_vertices: 12,
            realization_vertices: 32,
        }
    }
}

impl Limits {
    /// Defaults, with `max_n` taken from `PATTERNA_MAX_N` when it parses.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(n) = std::env::var(MAX_N_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            limits.max_n = n;
        }
        limits
    }

    pub(crate) fn check(what: &'static str, value: usize, limit: usize) -> Result<()> {
        if value > limit {
            Err(Error::BoundExceeded { what, value, limit })
        } else {
            Ok(())
        }
    }
}
