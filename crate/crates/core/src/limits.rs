//! Size caps for the exact solvers.

use crate::error::{Error, Result};

/// Environment variable overriding every item/vertex-count cap.
pub const EXACT_LIMIT_ENV: &str = "MULTIBIN_EXACT_LIMIT";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactLimits {
    pub bpp_items: usize,
    pub knapsack_items: usize,
    pub multi_items: usize,
    pub multi_bins: usize,
    pub color_vertices: usize,
    pub tsp_length: usize,
    pub select_items: usize,
    pub configurations: u64,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits {
            bpp_items: 20,
            knapsack_items: 20,
            multi_items: 12,
            multi_bins: 4,
            color_vertices: 20,
            tsp_length: 12,
            select_items: 15,
            configurations: 1_000_000,
        }
    }
}

impl ExactLimits {
    /// Defaults, with the item-count caps replaced by `MULTIBIN_EXACT_LIMIT`
    /// when it is set to a positive integer.
    pub fn from_env() -> Self {
        let mut limits = ExactLimits::default();
        if let Some(n) = std::env::var(EXACT_LIMIT_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
        {
            limits = limits.with_item_cap(n);
        }
        limits
    }

    /// Sets every item/vertex/sequence cap to `n` (bounded by 64, the width
    /// of the bitmasks used internally).
    pub fn with_item_cap(mut self, n: usize) -> Self {
        let n = n.min(64);
        self.bpp_items = n;
        self.knapsack_items = n;
        self.multi_items = n;
        self.color_vertices = n;
        self.tsp_length = n;
        self.select_items = n;
        self
    }

    pub(crate) fn check(&self, what: &'static str, size: usize, limit: usize) -> Result<()> {
        if size > limit {
            return Err(Error::SizeLimit { what, size, limit });
        }
        Ok(())
    }
}
