//! Top-level configuration and entry points of the full pipeline.

use crate::cachemerge::{InCacheMerge, DEFAULT_CACHE_BLOCK};
use crate::error::{Error, Result};
use crate::lanes::{Element, DEFAULT_LANES, REGISTERS};
use crate::multiway::{AsymVariant, DEFAULT_OUT_BUFFER};
use crate::networks::MergeFamily;
use crate::parallel::{self, Observer, SortStats};
use crate::regsort::{HybridSplit, TransposeKernel};

/// Lane widths the pipeline is compiled for.
pub const LANE_WIDTHS: [usize; 4] = [2, 4, 8, 16];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SortConfig {
    pub lane_width: usize,
    /// Elements per in-cache block.
    pub block_size: usize,
    pub transpose: TransposeKernel,
    /// Network family of the register-level row merge.
    pub family: MergeFamily,
    /// Scalar rounds at the end of each merge network; `None` picks
    /// `log2(lane_width)`.
    pub scalar_rounds: Option<usize>,
    pub in_cache: InCacheMerge,
    pub variant: AsymVariant,
    pub out_buffer: usize,
    pub threads: usize,
}

impl Default for SortConfig {
    fn default() -> Self {
        Self {
            lane_width: DEFAULT_LANES,
            block_size: DEFAULT_CACHE_BLOCK,
            transpose: TransposeKernel::default(),
            family: MergeFamily::default(),
            scalar_rounds: None,
            in_cache: InCacheMerge::default(),
            variant: AsymVariant::default(),
            out_buffer: DEFAULT_OUT_BUFFER,
            threads: 1,
        }
    }
}

impl SortConfig {
    pub fn split(&self) -> HybridSplit {
        match self.scalar_rounds {
            Some(scalar_rounds) => HybridSplit { scalar_rounds },
            None => HybridSplit::for_lanes(self.lane_width),
        }
    }

    /// Rounds of the widest row-merge network at this lane width.
    pub fn rounds(&self) -> usize {
        (REGISTERS * self.lane_width).trailing_zeros() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !LANE_WIDTHS.contains(&self.lane_width) {
            return Err(Error::LaneWidth(self.lane_width));
        }
        if self.block_size == 0 {
            return Err(Error::Config("block size must be positive".into()));
        }
        if self.out_buffer < crate::multiway::BLOCK {
            return Err(Error::Config(format!(
                "output buffer must hold at least {} elements",
                crate::multiway::BLOCK
            )));
        }
        if self.threads == 0 {
            return Err(Error::Config("thread count must be positive".into()));
        }
        if self.split().scalar_rounds > self.rounds() {
            return Err(Error::Config(format!(
                "hybrid split of {} rounds exceeds the {} rounds of the row merge",
                self.split().scalar_rounds,
                self.rounds()
            )));
        }
        Ok(())
    }
}

/// Sorts `data` with the default configuration.
pub fn sort(data: &mut [Element]) {
    sort_with(data, &SortConfig::default()).expect("default configuration is valid");
}

/// Sorts `data` and reports phase timings.
pub fn sort_with(data: &mut [Element], cfg: &SortConfig) -> Result<SortStats> {
    sort_observed(data, cfg, None)
}

/// [`sort_with`] with a hook called around every merge segment.
pub fn sort_observed(data: &mut [Element], cfg: &SortConfig, observer: Option<Observer<'_>>) -> Result<SortStats> {
    cfg.validate()?;
    match cfg.lane_width {
        2 => parallel::run::<2>(data, cfg, observer),
        4 => parallel::run::<4>(data, cfg, observer),
        8 => parallel::run::<8>(data, cfg, observer),
        16 => parallel::run::<16>(data, cfg, observer),
        w => Err(Error::LaneWidth(w)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SortConfig::default().validate().is_ok());
        let bad = [
            SortConfig {
                lane_width: 3,
                ..Default::default()
            },
            SortConfig {
                lane_width: 32,
                ..Default::default()
            },
            SortConfig {
                block_size: 0,
                ..Default::default()
            },
            SortConfig {
                threads: 0,
                ..Default::default()
            },
            SortConfig {
                out_buffer: 4,
                ..Default::default()
            },
            SortConfig {
                scalar_rounds: Some(7),
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
        assert_eq!(
            SortConfig {
                lane_width: 16,
                ..Default::default()
            }
            .rounds(),
            8
        );
        assert_eq!(
            SortConfig {
                lane_width: 8,
                ..Default::default()
            }
            .split(),
            HybridSplit { scalar_rounds: 3 }
        );
    }
}
