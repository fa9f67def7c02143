//! In-cache merging with half-size auxiliary space.
//!
//! A half merge copies one of the two adjacent runs into a scratch buffer
//! and merges it back into the original buffer. Every output slot is
//! assigned once and nothing is swapped. Copying the shorter run means
//! the scratch never has to hold more than half of the block.

use crate::error::{Error, Result};
use crate::lanes::{Element, DEFAULT_LANES, REGISTERS};
use crate::regsort::BlockSorter;
use crate::twoway::{merge_backward, merge_forward, scalar_merge_into, PairMerger};

/// Default in-cache block: 2^15 elements (128 KiB of keys plus at most
/// 64 KiB of scratch).
pub const DEFAULT_CACHE_BLOCK: usize = 1 << 15;

/// A sorted region `offset..offset + len` of some buffer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Run {
    pub offset: usize,
    pub len: usize,
}

impl Run {
    pub const fn new(offset: usize, len: usize) -> Self {
        Self { offset, len }
    }

    pub const fn end(&self) -> usize {
        self.offset + self.len
    }

    pub fn slice<'a>(&self, buf: &'a [Element]) -> Result<&'a [Element]> {
        buf.get(self.offset..self.end()).ok_or(Error::RunBounds {
            offset: self.offset,
            len: self.len,
            buffer: buf.len(),
        })
    }
}

/// Scratch space for half merges, with a high-water mark.
#[derive(Clone, Debug, Default)]
pub struct HalfScratch {
    buf: Vec<Element>,
    high_water: usize,
}

impl HalfScratch {
    /// Scratch for merging within a block of `block_len` elements:
    /// capacity `ceil(block_len / 2)`.
    pub fn for_block(block_len: usize) -> Self {
        Self::with_capacity(block_len.div_ceil(2))
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            buf: vec![0; capacity],
            high_water: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.buf.len()
    }

    /// Most elements resident at once since creation or the last reset.
    pub fn high_water(&self) -> usize {
        self.high_water
    }

    pub fn reset_high_water(&mut self) {
        self.high_water = 0;
    }

    fn check(&self, needed: usize) -> Result<()> {
        if needed > self.buf.len() {
            Err(Error::Capacity {
                needed,
                capacity: self.buf.len(),
            })
        } else {
            Ok(())
        }
    }

    fn stash(&mut self, src: &[Element]) -> &[Element] {
        let n = src.len();
        self.high_water = self.high_water.max(n);
        self.buf[..n].copy_from_slice(src);
        &self.buf[..n]
    }
}

/// Element assignments made by one merge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MergeStats {
    /// Assignments into the merged buffer.
    pub buf_writes: usize,
    /// Assignments into the scratch buffer.
    pub scratch_writes: usize,
    /// Elements that were already in their final slot and were not touched.
    pub in_place: usize,
}

fn check_split(buf: &[Element], mid: usize) -> Result<()> {
    if mid > buf.len() {
        Err(Error::Range { k: mid, max: buf.len() })
    } else {
        Ok(())
    }
}

/// Merges sorted `buf[..mid]` and `buf[mid..]` in place, copying the first
/// run into `scratch`. Ties take from the first run.
pub fn half_merge_serial(buf: &mut [Element], mid: usize, scratch: &mut HalfScratch) -> Result<MergeStats> {
    check_split(buf, mid)?;
    scratch.check(mid)?;
    let n = buf.len();
    if mid == 0 || mid == n {
        return Ok(MergeStats {
            in_place: n,
            ..Default::default()
        });
    }
    let a = scratch.stash(&buf[..mid]);
    let p = buf.as_mut_ptr();
    // SAFETY: `a` is the scratch copy (len `mid`), `b` is `buf[mid..]`, and
    // output starts at `buf[0]`, so `out + k = buf + i + j <= b + j`.
    let (i, j) = unsafe { merge_forward(a.as_ptr(), mid, p.add(mid), n - mid, p) };
    let mut k = i + j;
    let rest = mid - i;
    buf[k..k + rest].copy_from_slice(&a[i..]);
    k += rest;
    Ok(MergeStats {
        buf_writes: k,
        scratch_writes: mid,
        in_place: n - k,
    })
}

/// Mirror image of [`half_merge_serial`]: copies the second run into
/// `scratch` and merges from the back. Used when the second run is the
/// shorter one.
pub fn half_merge_serial_back(buf: &mut [Element], mid: usize, scratch: &mut HalfScratch) -> Result<MergeStats> {
    check_split(buf, mid)?;
    let n = buf.len();
    scratch.check(n - mid)?;
    if mid == 0 || mid == n {
        return Ok(MergeStats {
            in_place: n,
            ..Default::default()
        });
    }
    let b = scratch.stash(&buf[mid..]);
    let p = buf.as_mut_ptr();
    // SAFETY: the first run is `buf[..mid]`, `b` the scratch copy of the
    // second; the write end `i + j` never drops below `i`.
    let (i, j) = unsafe { merge_backward(p, mid, b.as_ptr(), n - mid, p) };
    let k = i + j;
    buf[..j].copy_from_slice(&b[..j]);
    let writes = n - k + j;
    Ok(MergeStats {
        buf_writes: writes,
        scratch_writes: n - mid,
        in_place: n - writes,
    })
}

/// Half merge driven by a `2W` merging network. Both run lengths must be
/// multiples of `W`.
///
/// The carry holds `W` elements; each step merges it with the next
/// `W`-block of whichever input has the smaller head, writes the lower `W`
/// to the output cursor and keeps the upper `W`. When one input runs dry
/// the carry keeps going through the network with the other input.
pub fn half_merge_vectorized<const W: usize>(
    buf: &mut [Element],
    mid: usize,
    scratch: &mut HalfScratch,
) -> Result<MergeStats> {
    half_merge_blocks(&PairMerger::<W>::default(), buf, mid, scratch)
}

fn half_merge_blocks<const W: usize>(
    pair: &PairMerger<W>,
    buf: &mut [Element],
    mid: usize,
    scratch: &mut HalfScratch,
) -> Result<MergeStats> {
    check_split(buf, mid)?;
    let n = buf.len();
    if !mid.is_multiple_of(W) || !(n - mid).is_multiple_of(W) {
        return Err(Error::Alignment {
            first: mid,
            second: n - mid,
            lanes: W,
        });
    }
    scratch.check(mid)?;
    if mid == 0 || mid == n {
        return Ok(MergeStats {
            in_place: n,
            ..Default::default()
        });
    }
    let a = scratch.stash(&buf[..mid]);
    let mut regs = [[0; W]; 2];
    regs[0].copy_from_slice(&a[..W]);
    debug_assert_eq!(pair.block(), W);
    let (mut i, mut j, mut k) = (W, mid, 0);
    loop {
        let take_a = match (i < mid, j < n) {
            (true, true) => a[i] <= buf[j],
            (true, false) => true,
            (false, true) => false,
            (false, false) => break,
        };
        if take_a {
            regs[1].copy_from_slice(&a[i..i + W]);
            i += W;
        } else {
            regs[1].copy_from_slice(&buf[j..j + W]);
            j += W;
        }
        pair.merge(regs.as_flattened_mut());
        debug_assert!(k + W <= j, "write cursor overtook the second run");
        buf[k..k + W].copy_from_slice(&regs[0]);
        regs[0] = regs[1];
        k += W;
    }
    buf[k..k + W].copy_from_slice(&regs[0]);
    Ok(MergeStats {
        buf_writes: n,
        scratch_writes: mid,
        in_place: 0,
    })
}

/// Baseline merge through an auxiliary buffer as long as both runs,
/// followed by a copy back.
pub fn naive_merge(buf: &mut [Element], mid: usize, aux: &mut Vec<Element>) -> Result<MergeStats> {
    check_split(buf, mid)?;
    let n = buf.len();
    if aux.len() < n {
        aux.resize(n, 0);
    }
    let (a, b) = buf.split_at(mid);
    scalar_merge_into(a, b, &mut aux[..n]);
    buf.copy_from_slice(&aux[..n]);
    Ok(MergeStats {
        buf_writes: n,
        scratch_writes: n,
        in_place: 0,
    })
}

/// Merge strategy for the in-cache passes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum InCacheMerge {
    #[default]
    HalfVectorized,
    HalfSerial,
    NaiveVectorized,
    NaiveSerial,
}

impl InCacheMerge {
    pub fn is_half(self) -> bool {
        matches!(self, InCacheMerge::HalfVectorized | InCacheMerge::HalfSerial)
    }
}

/// Outcome of one in-cache sort.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct InCacheStats {
    /// Peak auxiliary elements resident during the call.
    pub peak_aux: usize,
    /// Merge passes run after the register-level sort.
    pub passes: usize,
}

/// Reusable auxiliary storage for [`InCacheSorter`].
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub half: HalfScratch,
    naive: Vec<Element>,
}

impl Workspace {
    pub fn for_block(block_len: usize) -> Self {
        Self {
            half: HalfScratch::for_block(block_len),
            naive: Vec::new(),
        }
    }
}

/// Sorts one cache block: register-level sort of every `16W` chunk, then
/// doubling merge passes.
#[derive(Clone, Debug)]
pub struct InCacheSorter<const W: usize> {
    blocks: BlockSorter<W>,
    pair: PairMerger<W>,
    merge: InCacheMerge,
    block_size: usize,
}

impl<const W: usize> InCacheSorter<W> {
    pub const CHUNK: usize = REGISTERS * W;

    pub fn new(blocks: BlockSorter<W>, merge: InCacheMerge, block_size: usize) -> Self {
        Self {
            blocks,
            pair: PairMerger::default(),
            merge,
            block_size,
        }
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn merge_strategy(&self) -> InCacheMerge {
        self.merge
    }

    pub fn sort(&self, data: &mut [Element], ws: &mut Workspace) -> Result<InCacheStats> {
        let len = data.len();
        if len > self.block_size {
            return Err(Error::Capacity {
                needed: len,
                capacity: self.block_size,
            });
        }
        if self.merge.is_half() && ws.half.capacity() < len.div_ceil(2) {
            ws.half = HalfScratch::for_block(len);
        }
        ws.half.reset_high_water();
        let mut naive_peak = 0;

        let chunk = Self::CHUNK;
        let full = len - len % chunk;
        for c in data[..full].chunks_exact_mut(chunk) {
            self.blocks.sort_exact(c);
        }
        binary_insertion_sort(&mut data[full..]);

        let mut passes = 0;
        let mut width = chunk;
        while width < len {
            for start in (0..len).step_by(2 * width) {
                let mid = (start + width).min(len);
                let end = (start + 2 * width).min(len);
                if mid == end {
                    continue;
                }
                let seg = &mut data[start..end];
                let split = mid - start;
                let right = end - mid;
                match self.merge {
                    InCacheMerge::HalfVectorized if split <= right && split % W == 0 && right % W == 0 => {
                        half_merge_blocks(&self.pair, seg, split, &mut ws.half)?;
                    }
                    InCacheMerge::HalfVectorized | InCacheMerge::HalfSerial => {
                        if split <= right {
                            half_merge_serial(seg, split, &mut ws.half)?;
                        } else {
                            half_merge_serial_back(seg, split, &mut ws.half)?;
                        }
                    }
                    InCacheMerge::NaiveSerial => {
                        naive_merge(seg, split, &mut ws.naive)?;
                        naive_peak = naive_peak.max(seg.len());
                    }
                    InCacheMerge::NaiveVectorized => {
                        let n = seg.len();
                        if ws.naive.len() < n {
                            ws.naive.resize(n, 0);
                        }
                        let (a, b) = seg.split_at(split);
                        self.pair.merge_into(a, b, &mut ws.naive[..n]);
                        seg.copy_from_slice(&ws.naive[..n]);
                        naive_peak = naive_peak.max(n);
                    }
                }
            }
            width *= 2;
            passes += 1;
        }
        Ok(InCacheStats {
            peak_aux: if self.merge.is_half() {
                ws.half.high_water()
            } else {
                naive_peak
            },
            passes,
        })
    }
}

impl<const W: usize> Default for InCacheSorter<W> {
    fn default() -> Self {
        Self::new(BlockSorter::default(), InCacheMerge::default(), DEFAULT_CACHE_BLOCK)
    }
}

/// Insertion sort with binary search for the insertion point.
pub fn binary_insertion_sort(v: &mut [Element]) {
    for i in 1..v.len() {
        let x = v[i];
        let p = v[..i].partition_point(|&y| y <= x);
        v[p..=i].rotate_right(1);
    }
}

/// Sorts `data` (at most [`DEFAULT_CACHE_BLOCK`] elements) with the default
/// four-lane in-cache sorter.
pub fn sort_in_cache(data: &mut [Element]) -> Result<InCacheStats> {
    let sorter = InCacheSorter::<DEFAULT_LANES>::default();
    let mut ws = Workspace::for_block(data.len());
    sorter.sort(data, &mut ws)
}
