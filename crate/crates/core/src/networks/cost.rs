//! Exchange-cost model for vectorized execution of a network.
//!
//! Counting rule, per stage and per register:
//!
//! * a register is charged one masked merge (a `vmerge`-equivalent) when it
//!   holds both endpoints of some comparator, because the min and max
//!   results must be recombined inside it;
//! * two registers joined by comparators whose lane offsets are not one
//!   uniform shift are each charged one masked merge, because a slide
//!   cannot align them;
//! * lane-aligned compares and uniform-shift compares are free (whole
//!   register swaps and slides).
//!
//! At four lanes this reproduces the published counts exactly: odd-even
//! merges of 8/16/32/64 cost 2/4/8/16 and bitonic merges cost 6/12/24/48.
//! Counts for other lane widths follow the same rule; they are
//! extrapolations, not measured values.

use std::collections::{BTreeMap, BTreeSet};

use super::ComparatorNetwork;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CostReport {
    pub comparators: usize,
    /// Masked-merge operations needed for lane movement.
    pub intra_exchanges: usize,
    pub stages: usize,
}

impl std::fmt::Display for CostReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "comparators={} intra_exchanges={} stages={}",
            self.comparators, self.intra_exchanges, self.stages
        )
    }
}

pub fn cost_report(net: &ComparatorNetwork, lanes: usize) -> CostReport {
    assert!(lanes >= 1);
    let mut intra_exchanges = 0;
    for stage in net.stages() {
        let mut charged = BTreeSet::new();
        let mut shifts: BTreeMap<(usize, usize), BTreeSet<isize>> = BTreeMap::new();
        for c in &stage.comparators {
            let (ri, rj) = (c.i / lanes, c.j / lanes);
            if ri == rj {
                charged.insert(ri);
            } else {
                let shift = (c.j % lanes) as isize - (c.i % lanes) as isize;
                shifts.entry((ri, rj)).or_default().insert(shift);
            }
        }
        for ((ri, rj), s) in shifts {
            if s.len() > 1 {
                charged.insert(ri);
                charged.insert(rj);
            }
        }
        intra_exchanges += charged.len();
    }
    CostReport {
        comparators: net.comparator_count(),
        intra_exchanges,
        stages: net.depth(),
    }
}
