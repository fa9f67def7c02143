//! Merge sort over emulated vector registers.
//!
//! Blocks of `16 * W` keys are sorted with lane-wise sorting networks, a
//! register transpose and merging networks; cache-sized runs are merged
//! with half-size scratch; larger runs go through 4-way merge trees; worker
//! threads share the final merges through co-rank partitioning.

pub mod cachemerge;
pub mod data;
pub mod error;
pub mod lanes;
pub mod multiway;
pub mod networks;
pub mod parallel;
pub mod program;
pub mod regsort;
pub mod sort;
pub mod twoway;

pub use cachemerge::{half_merge_serial, sort_in_cache, HalfScratch, InCacheMerge, Run};
pub use data::gen_data;
pub use error::{Error, Result};
pub use lanes::{cmpx_scalar, cmpx_vector, Element, LaneVector, RegisterBlock};
pub use multiway::{asym_merge_8_24, merge_tree, AsymVariant, MultiwayConfig};
pub use networks::{ComparatorNetwork, MergeFamily};
pub use parallel::{co_rank, parallel_sort, PartitionPoint, SortStats};
pub use regsort::{sort_block, HybridSplit, TransposeKernel};
pub use sort::{sort, sort_with, SortConfig};
