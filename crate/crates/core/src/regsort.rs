//! Register-level sort of one block of `REGISTERS * W` elements.
//!
//! load -> column sort -> transpose -> row merge -> store. The column sort
//! runs the 16-input sorter across registers with lane-wise compares, so
//! every lane ends up sorted top to bottom. The transpose turns those
//! columns into `W` sorted rows of `REGISTERS` elements, and the row merge
//! folds the rows pairwise with odd-even merging networks.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::lanes::{cmpx_vector, Element, LaneVector, RegisterBlock, DEFAULT_LANES, REGISTERS};
use crate::networks::{MergeFamily, SORTER16};
use crate::program::{Lowering, Program};

/// Implementation of the `W x W` tile transpose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum TransposeKernel {
    /// Pairwise lane exchanges built from slides and masked merges.
    ShuffleEmulated,
    /// Stores the tile and reads it back with a stride of `W`.
    MemoryStrided,
    /// One strided gather over the tile viewed as a register group.
    #[default]
    RegisterStrided,
}

impl TransposeKernel {
    pub const ALL: [TransposeKernel; 3] = [
        TransposeKernel::ShuffleEmulated,
        TransposeKernel::MemoryStrided,
        TransposeKernel::RegisterStrided,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransposeKernel::ShuffleEmulated => "v0",
            TransposeKernel::MemoryStrided => "v1",
            TransposeKernel::RegisterStrided => "v2",
        }
    }
}

/// Number of trailing row-merge rounds executed with scalar
/// compare-exchanges instead of vector compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HybridSplit {
    pub scalar_rounds: usize,
}

impl HybridSplit {
    /// No scalar rounds: every round is vectorized.
    pub const VECTOR: HybridSplit = HybridSplit { scalar_rounds: 0 };

    /// The rounds whose exchange distance is below the lane count, i.e.
    /// exactly those that would need in-register lane movement.
    pub fn for_lanes(lanes: usize) -> Self {
        Self {
            scalar_rounds: lanes.trailing_zeros() as usize,
        }
    }
}

impl Default for HybridSplit {
    fn default() -> Self {
        Self::for_lanes(DEFAULT_LANES)
    }
}

/// Sorts every column (lane across the registers) ascending.
pub fn column_sort<const W: usize>(block: &RegisterBlock<W>) -> RegisterBlock<W> {
    let mut out = *block;
    column_sort_in_place(&mut out);
    out
}

#[inline]
fn column_sort_in_place<const W: usize>(block: &mut RegisterBlock<W>) {
    for stage in SORTER16 {
        for &(i, j) in stage {
            let (lo, hi) = cmpx_vector(block.row(i), block.row(j));
            block.set_row(i, lo);
            block.set_row(j, hi);
        }
    }
}

/// Transposes a square tile of `W` registers.
pub fn transpose_tile<const W: usize>(tile: &[LaneVector<W>], kernel: TransposeKernel) -> Result<[LaneVector<W>; W]> {
    let tile: [LaneVector<W>; W] = tile.try_into().map_err(|_| Error::Shape {
        expected: W,
        rows: tile.len(),
    })?;
    Ok(transpose_tile_array(tile, kernel))
}

#[inline]
fn transpose_tile_array<const W: usize>(tile: [LaneVector<W>; W], kernel: TransposeKernel) -> [LaneVector<W>; W] {
    match kernel {
        TransposeKernel::ShuffleEmulated => transpose_shuffle(tile),
        TransposeKernel::MemoryStrided => transpose_memory(tile),
        TransposeKernel::RegisterStrided => transpose_register(tile),
    }
}

// Butterfly: at distance d, rows i and i + d (i & d == 0) trade the lanes
// whose bit d differs. Each trade is a slide plus a masked merge per row.
fn transpose_shuffle<const W: usize>(mut rows: [LaneVector<W>; W]) -> [LaneVector<W>; W] {
    let mut d = W / 2;
    while d >= 1 {
        let high: [bool; W] = std::array::from_fn(|k| k & d != 0);
        let low: [bool; W] = high.map(|h| !h);
        for i in (0..W).filter(|i| i & d == 0) {
            let (a, b) = (rows[i], rows[i + d]);
            rows[i] = LaneVector::select(high, b.slide_up(a, d), a);
            rows[i + d] = LaneVector::select(low, a.slide_down(d), b);
        }
        d /= 2;
    }
    rows
}

fn transpose_memory<const W: usize>(rows: [LaneVector<W>; W]) -> [LaneVector<W>; W] {
    let mut memory = [[0; W]; W];
    for (m, r) in memory.iter_mut().zip(rows) {
        *m = r.lanes;
    }
    let flat = std::hint::black_box(&memory).as_flattened();
    std::array::from_fn(|r| LaneVector::new(std::array::from_fn(|k| flat[r + k * W])))
}

fn transpose_register<const W: usize>(group: [LaneVector<W>; W]) -> [LaneVector<W>; W] {
    // lane k of output row r reads group index r + k * W
    std::array::from_fn(|r| {
        LaneVector::new(std::array::from_fn(|k| {
            let idx = r + k * W;
            group[idx / W].lanes[idx % W]
        }))
    })
}

/// Transposes the `REGISTERS x W` block into a `W x REGISTERS` matrix.
///
/// The result is returned in a block whose flat view is that matrix in row
/// major order: output row `i` occupies registers
/// `i * REGISTERS / W .. (i + 1) * REGISTERS / W`.
pub fn transpose_block<const W: usize>(block: &RegisterBlock<W>, kernel: TransposeKernel) -> RegisterBlock<W> {
    let mut out = RegisterBlock::zeroed();
    let per_row = REGISTERS / W;
    for t in 0..per_row {
        let tile: [LaneVector<W>; W] = std::array::from_fn(|k| block.row(t * W + k));
        for (i, reg) in transpose_tile_array(tile, kernel).into_iter().enumerate() {
            out.set_row(i * per_row + t, reg);
        }
    }
    out
}

/// Merges the `W` sorted rows of a transposed block into one sorted run.
#[derive(Clone, Debug)]
pub struct RowMerger<const W: usize> {
    program: Program<W>,
    split: HybridSplit,
    family: MergeFamily,
}

impl<const W: usize> RowMerger<W> {
    /// Total rounds of the widest merge network.
    pub const ROUNDS: usize = (REGISTERS * W).trailing_zeros() as usize;

    pub fn new(family: MergeFamily, split: HybridSplit) -> Result<Self> {
        if split.scalar_rounds > Self::ROUNDS {
            return Err(Error::Config(format!(
                "hybrid split of {} rounds exceeds the {} rounds of the row merge",
                split.scalar_rounds,
                Self::ROUNDS
            )));
        }
        let mut program = Program::new();
        let mut width = 2 * REGISTERS;
        while width <= REGISTERS * W {
            let net = family.generate(width)?;
            for offset in (0..REGISTERS * W).step_by(width) {
                program.push_network(&net, offset, split.scalar_rounds, Lowering::Shuffle);
            }
            width *= 2;
        }
        Ok(Self { program, split, family })
    }

    pub fn split(&self) -> HybridSplit {
        self.split
    }

    pub fn family(&self) -> MergeFamily {
        self.family
    }

    /// `rows` is `W` ascending runs of `REGISTERS` elements, back to back.
    /// Unsorted rows give an unspecified (but permuted) result; debug builds
    /// assert the precondition.
    pub fn merge(&self, rows: &mut [Element]) {
        debug_assert_eq!(rows.len(), REGISTERS * W);
        debug_assert!(rows.chunks(REGISTERS).all(|r| r.windows(2).all(|p| p[0] <= p[1])));
        self.program.run(rows);
    }
}

/// Standalone row merge of `W` sorted rows of `REGISTERS` elements.
pub fn row_merge_hybrid<const W: usize>(rows: &[Element], split: HybridSplit) -> Result<Vec<Element>> {
    if rows.len() != REGISTERS * W {
        return Err(Error::Size {
            expected: REGISTERS * W,
            actual: rows.len(),
        });
    }
    let merger = RowMerger::<W>::new(MergeFamily::OddEven, split)?;
    let mut out = rows.to_vec();
    merger.merge(&mut out);
    Ok(out)
}

/// Sorts blocks of exactly `REGISTERS * W` elements.
#[derive(Clone, Debug)]
pub struct BlockSorter<const W: usize> {
    rows: RowMerger<W>,
    kernel: TransposeKernel,
}

impl<const W: usize> BlockSorter<W> {
    pub const BLOCK: usize = REGISTERS * W;

    pub fn new(kernel: TransposeKernel, family: MergeFamily, split: HybridSplit) -> Result<Self> {
        Ok(Self {
            rows: RowMerger::new(family, split)?,
            kernel,
        })
    }

    pub fn sort_block(&self, data: &mut [Element]) -> Result<()> {
        if data.len() != Self::BLOCK {
            return Err(Error::Size {
                expected: Self::BLOCK,
                actual: data.len(),
            });
        }
        self.sort_exact(data);
        Ok(())
    }

    #[inline]
    pub(crate) fn sort_exact(&self, data: &mut [Element]) {
        let mut block = RegisterBlock::<W>::load(data);
        column_sort_in_place(&mut block);
        let mut rows = transpose_block(&block, self.kernel);
        self.rows.merge(rows.flat_mut());
        rows.store(data);
    }
}

impl<const W: usize> Default for BlockSorter<W> {
    fn default() -> Self {
        Self::new(
            TransposeKernel::default(),
            MergeFamily::OddEven,
            HybridSplit::for_lanes(W),
        )
        .expect("default split is within range")
    }
}

/// Sorts exactly 64 elements with the default four-lane configuration.
pub fn sort_block(data: &mut [Element]) -> Result<()> {
    static SORTER: OnceLock<BlockSorter<DEFAULT_LANES>> = OnceLock::new();
    SORTER.get_or_init(BlockSorter::default).sort_block(data)
}
