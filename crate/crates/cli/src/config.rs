use std::path::PathBuf;

use krsys_core::{Caps, Error, KrCache, Result};

use crate::{Cli, Output};

/// Resolved settings: flags win over environment variables, which win over defaults.
#[derive(Debug)]
pub struct Config {
    pub cache_dir: PathBuf,
    pub use_disk: bool,
    pub caps: Caps,
    pub output: Output,
    pub timing: bool,
}

impl Config {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let cache_dir = cli.cache_dir.clone().unwrap_or_else(default_cache_dir);
        Ok(Config {
            cache_dir,
            use_disk: !cli.no_cache,
            caps: Caps {
                max_depth: usize::try_from(cli.max_depth).map_err(|_| Error::Overflow)?,
                max_monomials: usize::try_from(cli.max_monomials).map_err(|_| Error::Overflow)?,
            },
            output: cli.output,
            timing: cli.timing,
        })
    }

    pub fn kr_cache(&self) -> KrCache {
        if self.use_disk {
            KrCache::with_dir(&self.cache_dir, self.caps)
        } else {
            KrCache::new(self.caps)
        }
    }
}

fn default_cache_dir() -> PathBuf {
    if let Some(xdg) = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        return PathBuf::from(xdg).join("krsys");
    }
    match std::env::var_os("HOME").filter(|v| !v.is_empty()) {
        Some(home) => PathBuf::from(home).join(".cache").join("krsys"),
        None => PathBuf::from(".krsys-cache"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KRange(pub Vec<i64>);

/// `3,4,5` or the inclusive range `3..5`.
pub fn parse_k_range(s: &str) -> std::result::Result<KRange, String> {
    let bad = || format!("invalid k range `{s}`, expected e.g. `3,4,5` or `3..5`");
    if let Some((a, b)) = s.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok(KRange((a..=b).collect()));
    }
    s.split(',').map(|t| t.trim().parse::<i64>().map_err(|_| bad())).collect::<std::result::Result<_, _>>().map(KRange)
}
