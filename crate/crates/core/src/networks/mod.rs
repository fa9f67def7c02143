//! Comparator networks: generators, zero-one verification, an exchange-cost
//! model and a plain-text dump format.
//!
//! Inputs of a network are laid out `W` per register, consecutively: input
//! `k` lives in register `k / W`, lane `k % W`. A stage is tagged
//! [`StageKind::Intra`] when at least one of its comparators joins two
//! different lanes, i.e. the stage cannot be executed with lane-wise
//! register compares alone and needs data movement inside registers.

mod cost;
mod dump;
mod verify;

pub use cost::{cost_report, CostReport};
pub use verify::{verify_network, VerifyMode, SORTER_ENUMERATION_LIMIT};

use crate::error::{Error, Result};
use crate::lanes::{cmpx_at, Element, DEFAULT_LANES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Comparator {
    pub i: usize,
    pub j: usize,
}

impl Comparator {
    pub const fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }

    /// Both endpoints live in the same register.
    pub fn is_intra(&self, lanes: usize) -> bool {
        self.i / lanes == self.j / lanes
    }

    /// Both endpoints sit in the same lane (of possibly different registers).
    pub fn is_lane_aligned(&self, lanes: usize) -> bool {
        self.i % lanes == self.j % lanes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StageKind {
    /// Whole-register compares only.
    Inter,
    /// Needs lane movement inside registers.
    Intra,
}

impl StageKind {
    pub fn label(self) -> &'static str {
        match self {
            StageKind::Inter => "inter",
            StageKind::Intra => "intra",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Stage {
    pub comparators: Vec<Comparator>,
    pub kind: StageKind,
}

impl Stage {
    fn tagged(comparators: Vec<Comparator>, lanes: usize) -> Self {
        let kind = if comparators.iter().all(|c| c.is_lane_aligned(lanes)) {
            StageKind::Inter
        } else {
            StageKind::Intra
        };
        Self { comparators, kind }
    }

    /// Smallest `j - i` among the stage's comparators.
    pub fn min_distance(&self) -> Option<usize> {
        self.comparators.iter().map(|c| c.j - c.i).min()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComparatorNetwork {
    width: usize,
    lanes: usize,
    stages: Vec<Stage>,
}

impl ComparatorNetwork {
    /// Builds and validates a network from raw stages, tagging stages for
    /// `lanes`-wide registers.
    pub fn new(width: usize, lanes: usize, stages: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        if lanes < 2 || !lanes.is_power_of_two() {
            return Err(Error::LaneWidth(lanes));
        }
        let mut seen = vec![usize::MAX; width];
        let mut out = Vec::with_capacity(stages.len());
        for (s, stage) in stages.into_iter().enumerate() {
            let mut comps = Vec::with_capacity(stage.len());
            for (i, j) in stage {
                if i >= j || j >= width {
                    return Err(Error::InvalidComparator { i, j, width });
                }
                for k in [i, j] {
                    if seen[k] == s {
                        return Err(Error::StageConflict { stage: s, index: k });
                    }
                    seen[k] = s;
                }
                comps.push(Comparator::new(i, j));
            }
            out.push(Stage::tagged(comps, lanes));
        }
        Ok(Self {
            width,
            lanes,
            stages: out,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Lane count the stage tags were computed for.
    pub fn lanes(&self) -> usize {
        self.lanes
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn comparator_count(&self) -> usize {
        self.stages.iter().map(|s| s.comparators.len()).sum()
    }

    pub fn comparators(&self) -> impl Iterator<Item = Comparator> + '_ {
        self.stages.iter().flat_map(|s| s.comparators.iter().copied())
    }

    /// Same comparators, stage tags recomputed for `lanes`-wide registers.
    pub fn with_lanes(&self, lanes: usize) -> Result<Self> {
        Self::new(self.width, lanes, self.raw_stages())
    }

    pub fn raw_stages(&self) -> Vec<Vec<(usize, usize)>> {
        self.stages
            .iter()
            .map(|s| s.comparators.iter().map(|c| (c.i, c.j)).collect())
            .collect()
    }

    /// Runs the network on `v[..width]` with scalar compare-exchanges.
    pub fn apply(&self, v: &mut [Element]) {
        assert!(v.len() >= self.width);
        for c in self.comparators() {
            cmpx_at(v, c.i, c.j);
        }
    }

    /// Copy of this network with the comparator at flat position `index`
    /// removed. Used to build broken fixtures.
    pub fn without_comparator(&self, index: usize) -> Self {
        let mut k = 0;
        let stages = self
            .raw_stages()
            .into_iter()
            .map(|st| {
                st.into_iter()
                    .filter(|_| {
                        let keep = k != index;
                        k += 1;
                        keep
                    })
                    .collect()
            })
            .collect();
        Self::new(self.width, self.lanes, stages).expect("removing a comparator keeps a network valid")
    }
}

/// Merge network families used by the row merge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MergeFamily {
    #[default]
    OddEven,
    Bitonic,
}

impl MergeFamily {
    pub fn generate(self, n: usize) -> Result<ComparatorNetwork> {
        match self {
            MergeFamily::OddEven => gen_oddeven_merge(n),
            MergeFamily::Bitonic => gen_bitonic_merge(n),
        }
    }
}

fn check_pow2(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        Err(Error::InvalidWidth(n))
    } else {
        Ok(())
    }
}

/// Bitonic merger for two ascending halves of `n / 2`.
///
/// The first stage compares `i` with `n - 1 - i`, which merges the second
/// half as if it were reversed; the remaining stages are half-cleaners.
pub fn gen_bitonic_merge(n: usize) -> Result<ComparatorNetwork> {
    check_pow2(n)?;
    let mut stages = vec![(0..n / 2).map(|i| (i, n - 1 - i)).collect::<Vec<_>>()];
    let mut d = n / 4;
    while d >= 1 {
        stages.push(
            (0..n)
                .step_by(2 * d)
                .flat_map(|b| (b..b + d).map(move |i| (i, i + d)))
                .collect(),
        );
        d /= 2;
    }
    ComparatorNetwork::new(n, DEFAULT_LANES, stages)
}

/// Batcher odd-even merger for two ascending halves of `n / 2`.
pub fn gen_oddeven_merge(n: usize) -> Result<ComparatorNetwork> {
    check_pow2(n)?;
    let p = n / 2;
    let mut stages = Vec::new();
    let mut k = p;
    while k >= 1 {
        let mut stage = Vec::new();
        let mut j = k % p;
        while j + k < n {
            for i in 0..k.min(n - j - k) {
                if (i + j) / (2 * p) == (i + j + k) / (2 * p) {
                    stage.push((i + j, i + j + k));
                }
            }
            j += 2 * k;
        }
        stages.push(stage);
        k /= 2;
    }
    ComparatorNetwork::new(n, DEFAULT_LANES, stages)
}

/// Published 16-input sorting network with 60 comparators in 10 layers
/// (Green's comparator count).
pub(crate) const SORTER16: [&[(usize, usize)]; 10] = [
    &[(0, 13), (1, 12), (2, 15), (3, 14), (4, 8), (5, 6), (7, 11), (9, 10)],
    &[(0, 5), (1, 7), (2, 9), (3, 4), (6, 13), (8, 14), (10, 15), (11, 12)],
    &[(0, 1), (2, 3), (4, 5), (6, 8), (7, 9), (10, 11), (12, 13), (14, 15)],
    &[(0, 2), (1, 3), (4, 10), (5, 11), (6, 7), (8, 9), (12, 14), (13, 15)],
    &[(1, 2), (3, 12), (4, 6), (5, 7), (8, 10), (9, 11), (13, 14)],
    &[(1, 4), (2, 6), (5, 8), (7, 10), (9, 13), (11, 14)],
    &[(2, 4), (3, 6), (9, 12), (11, 13)],
    &[(3, 5), (6, 8), (7, 9), (10, 12)],
    &[(3, 4), (5, 6), (7, 8), (9, 10), (11, 12)],
    &[(6, 7), (8, 9)],
];

/// Column sorter applied across the registers of a block. Only 16 inputs
/// are supported.
pub fn gen_column_sorter(r: usize) -> Result<ComparatorNetwork> {
    if r != 16 {
        return Err(Error::UnsupportedWidth {
            what: "column sorter",
            width: r,
        });
    }
    ComparatorNetwork::new(16, DEFAULT_LANES, SORTER16.iter().map(|s| s.to_vec()).collect())
}

/// Structure of the merging network that folds a sorted 8-block into a
/// sorted 24-element carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum AsymVariant {
    /// 16-merge of the block with the lowest carry third, then a 32-merge.
    #[default]
    Standard,
    /// Three chained 16-merges.
    Iterative,
    /// Two independent 16-merges that isolate the lowest and highest eight,
    /// then two independent 16-merges for the middle sixteen.
    Parallel,
}

impl AsymVariant {
    pub const ALL: [AsymVariant; 3] = [AsymVariant::Standard, AsymVariant::Iterative, AsymVariant::Parallel];

    pub fn name(self) -> &'static str {
        match self {
            AsymVariant::Standard => "v1",
            AsymVariant::Iterative => "v2",
            AsymVariant::Parallel => "v3",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "v1" | "standard" => Some(AsymVariant::Standard),
            "v2" | "iterative" => Some(AsymVariant::Iterative),
            "v3" | "parallel" => Some(AsymVariant::Parallel),
            _ => None,
        }
    }
}

/// Width-32 network merging a sorted block on inputs `0..8` with a sorted
/// run on inputs `8..32`.
///
/// The parallel variant feeds the block into two merges at once, which a
/// plain comparator network cannot express; it lives in
/// [`crate::multiway::asym_merge_8_24`] and is rejected here.
pub fn gen_asym_merge(variant: AsymVariant) -> Result<ComparatorNetwork> {
    let m16 = gen_oddeven_merge(16)?;
    let m32 = gen_oddeven_merge(32)?;
    let shifted = |net: &ComparatorNetwork, map: &dyn Fn(usize) -> usize| -> Vec<Vec<(usize, usize)>> {
        net.raw_stages()
            .into_iter()
            .map(|st| st.into_iter().map(|(i, j)| (map(i), map(j))).collect())
            .collect()
    };
    let stages = match variant {
        AsymVariant::Standard => {
            let mut s = shifted(&m16, &|k| k);
            s.extend(shifted(&m32, &|k| k));
            s
        }
        AsymVariant::Iterative => {
            let mut s = shifted(&m16, &|k| k);
            s.extend(shifted(&m16, &|k| k + 8));
            s.extend(shifted(&m16, &|k| k + 16));
            s
        }
        AsymVariant::Parallel => {
            return Err(Error::UnsupportedWidth {
                what: "plain network form of the parallel asymmetric merge",
                width: 32,
            })
        }
    };
    ComparatorNetwork::new(32, DEFAULT_LANES, stages)
}

/// Looks up a network by the names the CLI accepts: `oddevenN`,
/// `bitonicN`, `sorter16`, `asym-v1`, `asym-v2`.
pub fn by_name(name: &str) -> Result<ComparatorNetwork> {
    let unknown = || Error::Config(format!("unknown network `{name}`"));
    if name == "sorter16" {
        return gen_column_sorter(16);
    }
    if let Some(v) = name.strip_prefix("asym-") {
        return gen_asym_merge(AsymVariant::from_name(v).ok_or_else(unknown)?);
    }
    for (prefix, family) in [("oddeven", MergeFamily::OddEven), ("bitonic", MergeFamily::Bitonic)] {
        if let Some(n) = name.strip_prefix(prefix) {
            let n: usize = n.parse().map_err(|_| unknown())?;
            return family.generate(n);
        }
    }
    Err(unknown())
}
