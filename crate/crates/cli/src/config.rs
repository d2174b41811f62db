use std::path::Path;

use anyhow::{bail, Context, Result};
use contracta::map::FamilyTag;
use contracta::semigroup::EnumerationGuard;
use serde::Deserialize;

pub const DEFAULT_CONFIG: &str = "contracta.toml";
pub const MAX_N_VAR: &str = "CONTRACTA_MAX_N";

/// Oracle scans are quadratic in the family size, so they get their own limits.
const ORACLE_CEILING: EnumerationGuard = EnumerationGuard {
    full: 6,
    contraction: 8,
};

const ORACLE_DEFAULT: EnumerationGuard = EnumerationGuard {
    full: 5,
    contraction: 7,
};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    guards: GuardTable,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GuardTable {
    full: Option<usize>,
    contraction: Option<usize>,
    oracle_full: Option<usize>,
    oracle_contraction: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    pub enumeration: EnumerationGuard,
    pub oracle: EnumerationGuard,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            enumeration: EnumerationGuard::default(),
            oracle: ORACLE_DEFAULT,
        }
    }
}

impl Guards {
    /// Defaults, then the config file, then the ceilings, then the env cap.
    pub fn load(path: Option<&Path>, env_cap: Option<&str>) -> Result<Self> {
        let mut g = Guards::default();
        let table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Some(parse(&text).with_context(|| format!("parsing {}", p.display()))?)
            }
            None if Path::new(DEFAULT_CONFIG).is_file() => {
                let text = std::fs::read_to_string(DEFAULT_CONFIG)?;
                Some(parse(&text).with_context(|| format!("parsing {DEFAULT_CONFIG}"))?)
            }
            None => None,
        };
        if let Some(t) = table {
            g.enumeration.full = t.full.unwrap_or(g.enumeration.full);
            g.enumeration.contraction = t.contraction.unwrap_or(g.enumeration.contraction);
            g.oracle.full = t.oracle_full.unwrap_or(g.oracle.full);
            g.oracle.contraction = t.oracle_contraction.unwrap_or(g.oracle.contraction);
        }
        g.enumeration = g.enumeration.clamped();
        g.oracle = EnumerationGuard {
            full: g.oracle.full.min(ORACLE_CEILING.full),
            contraction: g.oracle.contraction.min(ORACLE_CEILING.contraction),
        };
        if let Some(raw) = env_cap {
            let cap: usize = raw
                .trim()
                .parse()
                .with_context(|| format!("{MAX_N_VAR} must be a positive integer, got {raw:?}"))?;
            if cap == 0 {
                bail!("{MAX_N_VAR} must be a positive integer");
            }
            for guard in [&mut g.enumeration, &mut g.oracle] {
                guard.full = guard.full.min(cap);
                guard.contraction = guard.contraction.min(cap);
            }
        }
        Ok(g)
    }

    pub fn check_enumeration(&self, family: FamilyTag, n: usize) -> Result<()> {
        check("enumeration", self.enumeration, family, n)
    }

    pub fn check_oracle(&self, family: FamilyTag, n: usize) -> Result<()> {
        check("oracle", self.oracle, family, n)
    }

    pub fn oracle_allows(&self, family: FamilyTag, n: usize) -> bool {
        n <= self.oracle.limit(family)
    }
}

fn parse(text: &str) -> Result<GuardTable> {
    Ok(toml::from_str::<ConfigFile>(text)?.guards)
}

fn check(what: &str, guard: EnumerationGuard, family: FamilyTag, n: usize) -> Result<()> {
    if n == 0 {
        bail!("n must be at least 1");
    }
    let limit = guard.limit(family);
    if n > limit {
        bail!("guard exceeded: {what} limit for {family} is n <= {limit}, got n = {n}");
    }
    Ok(())
}
