//! Evaluate a continued fraction and recover its `alpha/(beta + gamma G)` form.

use crate::cf_engine::{eval_backward, CFSpec};
use crate::error::{Error, Result};
use crate::lattice::{find_g_relation, verify_relation, GLimit};
use crate::numerics::{catalan, HPReal};
use crate::{DEFAULT_DEPTH, DEFAULT_DIGITS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscoveryConfig {
    pub digits: u32,
    pub depth: u64,
    /// Coefficient size bound in decimal digits; derived from `digits` if unset.
    pub max_coeff_digits: Option<u32>,
    /// A relation must reproduce the value to at least this many digits.
    pub min_verified: u32,
    /// Escalation stops once `digits` would exceed this.
    pub max_digits: u32,
}

impl Default for DiscoveryConfig {
    fn default() -> Self {
        DiscoveryConfig {
            digits: DEFAULT_DIGITS,
            depth: DEFAULT_DEPTH,
            max_coeff_digits: None,
            min_verified: 50,
            max_digits: 2000,
        }
    }
}

impl DiscoveryConfig {
    pub fn coeff_digits(&self) -> u32 {
        self.max_coeff_digits
            .unwrap_or((self.digits.saturating_sub(20)) / 3)
            .min((self.digits.saturating_sub(20)) / 3)
            .max(1)
    }
}

#[derive(Clone, Debug)]
pub struct Discovery {
    pub limit: GLimit,
    pub value: HPReal,
    pub verified_digits: u32,
    pub digits: u32,
    pub depth: u64,
}

/// Single attempt at the configured digits and depth.
pub fn discover(cf: &CFSpec, config: &DiscoveryConfig) -> Result<Discovery> {
    let value = eval_backward(cf, config.depth, config.digits)?;
    let g = catalan(config.digits)?;
    let limit = find_g_relation(&value, &g, config.coeff_digits())?;
    let verified_digits = verify_relation(&limit, &value, &g)?;
    if verified_digits < config.min_verified {
        return Err(Error::NoRelation {
            precision: config.digits,
        });
    }
    Ok(Discovery {
        limit,
        value,
        verified_digits,
        digits: config.digits,
        depth: config.depth,
    })
}

/// Doubles digits and depth after each failed attempt until a relation
/// verifies or `max_digits` is exceeded.
pub fn discover_escalating(cf: &CFSpec, config: &DiscoveryConfig) -> Result<Discovery> {
    let mut cfg = config.clone();
    loop {
        match discover(cf, &cfg) {
            Ok(d) => return Ok(d),
            Err(Error::NoRelation { .. }) if cfg.digits * 2 <= cfg.max_digits => {
                cfg.digits *= 2;
                cfg.depth *= 2;
                if let Some(m) = cfg.max_coeff_digits.as_mut() {
                    *m *= 2;
                }
            }
            Err(e) => return Err(e),
        }
    }
}
