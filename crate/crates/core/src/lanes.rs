//! Virtual vector registers and the two compare-exchange primitives that
//! every network in this crate is executed with.
//!
//! A [`LaneVector`] models one hardware vector register of `W` 32-bit lanes.
//! A [`RegisterBlock`] models a group of [`REGISTERS`] such registers. Both
//! are plain values; all operations are pure.

use std::hint::select_unpredictable;

/// Sort key.
pub type Element = i32;

/// Number of registers in a [`RegisterBlock`].
pub const REGISTERS: usize = 16;

/// Lane count used when nothing else is configured (128-bit registers).
pub const DEFAULT_LANES: usize = 4;

/// Compare-exchange of two scalars.
///
/// One comparison feeds two conditional selects; there is no data-dependent
/// branch. `select_unpredictable` lowers to `cmov`/`csel`-style selects on
/// targets that have them.
#[inline(always)]
pub fn cmpx_scalar(a: Element, b: Element) -> (Element, Element) {
    let swap = a > b;
    (select_unpredictable(swap, b, a), select_unpredictable(swap, a, b))
}

/// In-place compare-exchange of `v[i]` and `v[j]` (i is the low side).
#[inline(always)]
pub fn cmpx_at(v: &mut [Element], i: usize, j: usize) {
    let (lo, hi) = cmpx_scalar(v[i], v[j]);
    v[i] = lo;
    v[j] = hi;
}

/// One vector register of `W` lanes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(transparent)]
pub struct LaneVector<const W: usize> {
    pub lanes: [Element; W],
}

impl<const W: usize> LaneVector<W> {
    const VALID: () = assert!(W >= 2 && W.is_power_of_two(), "lane count must be a power of two >= 2");

    #[inline(always)]
    pub const fn new(lanes: [Element; W]) -> Self {
        let () = Self::VALID;
        Self { lanes }
    }

    #[inline(always)]
    pub fn splat(x: Element) -> Self {
        Self::new([x; W])
    }

    /// Loads `W` lanes from the front of `src`.
    #[inline(always)]
    pub fn load(src: &[Element]) -> Self {
        let mut lanes = [0; W];
        lanes.copy_from_slice(&src[..W]);
        Self::new(lanes)
    }

    #[inline(always)]
    pub fn store(self, dst: &mut [Element]) {
        dst[..W].copy_from_slice(&self.lanes);
    }

    #[inline(always)]
    pub fn min(self, other: Self) -> Self {
        let mut out = self.lanes;
        for (o, b) in out.iter_mut().zip(other.lanes) {
            *o = (*o).min(b);
        }
        Self::new(out)
    }

    #[inline(always)]
    pub fn max(self, other: Self) -> Self {
        let mut out = self.lanes;
        for (o, b) in out.iter_mut().zip(other.lanes) {
            *o = (*o).max(b);
        }
        Self::new(out)
    }

    /// Lane permutation within the register: `out[k] = self[index[k]]`.
    #[inline(always)]
    pub fn permute(self, index: [usize; W]) -> Self {
        Self::new(std::array::from_fn(|k| self.lanes[index[k]]))
    }

    /// Masked merge of two registers: lane `k` comes from `on` where
    /// `mask[k]` is set, else from `off`.
    #[inline(always)]
    pub fn select(mask: [bool; W], on: Self, off: Self) -> Self {
        Self::new(std::array::from_fn(|k| {
            select_unpredictable(mask[k], on.lanes[k], off.lanes[k])
        }))
    }

    /// `out[k] = self[k - by]` for `k >= by`; lanes below `by` keep `dest`.
    #[inline(always)]
    pub fn slide_up(self, dest: Self, by: usize) -> Self {
        Self::new(std::array::from_fn(|k| {
            if k >= by {
                self.lanes[k - by]
            } else {
                dest.lanes[k]
            }
        }))
    }

    /// `out[k] = self[k + by]`; lanes past the end read zero.
    #[inline(always)]
    pub fn slide_down(self, by: usize) -> Self {
        Self::new(std::array::from_fn(|k| if k + by < W { self.lanes[k + by] } else { 0 }))
    }
}

impl<const W: usize> From<[Element; W]> for LaneVector<W> {
    fn from(lanes: [Element; W]) -> Self {
        Self::new(lanes)
    }
}

/// Lane-wise compare-exchange of two registers.
#[inline(always)]
pub fn cmpx_vector<const W: usize>(u: LaneVector<W>, v: LaneVector<W>) -> (LaneVector<W>, LaneVector<W>) {
    (u.min(v), u.max(v))
}

/// A group of [`REGISTERS`] registers of `W` lanes each.
///
/// Row `r` is register `r`. The flat view ([`RegisterBlock::flat`]) lists
/// registers in order, so flat index `k` lives in register `k / W`, lane
/// `k % W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegisterBlock<const W: usize> {
    rows: [[Element; W]; REGISTERS],
}

impl<const W: usize> RegisterBlock<W> {
    const VALID: () = assert!(
        W >= 2 && W.is_power_of_two() && REGISTERS.is_multiple_of(W),
        "register count must be a multiple of the lane count"
    );

    /// Number of elements held by the block.
    pub const LEN: usize = REGISTERS * W;

    pub fn zeroed() -> Self {
        let () = Self::VALID;
        Self {
            rows: [[0; W]; REGISTERS],
        }
    }

    /// Loads `REGISTERS * W` elements, row by row. Panics on short input.
    pub fn load(src: &[Element]) -> Self {
        let mut block = Self::zeroed();
        block.flat_mut().copy_from_slice(&src[..Self::LEN]);
        block
    }

    pub fn store(&self, dst: &mut [Element]) {
        dst[..Self::LEN].copy_from_slice(self.flat());
    }

    pub fn from_rows(rows: [LaneVector<W>; REGISTERS]) -> Self {
        let () = Self::VALID;
        Self {
            rows: rows.map(|r| r.lanes),
        }
    }

    #[inline(always)]
    pub fn row(&self, r: usize) -> LaneVector<W> {
        LaneVector::new(self.rows[r])
    }

    #[inline(always)]
    pub fn set_row(&mut self, r: usize, v: LaneVector<W>) {
        self.rows[r] = v.lanes;
    }

    pub fn rows(&self) -> [LaneVector<W>; REGISTERS] {
        self.rows.map(LaneVector::new)
    }

    #[inline(always)]
    pub fn flat(&self) -> &[Element] {
        self.rows.as_flattened()
    }

    #[inline(always)]
    pub fn flat_mut(&mut self) -> &mut [Element] {
        self.rows.as_flattened_mut()
    }

    /// Element at register `r`, lane `c`.
    pub fn get(&self, r: usize, c: usize) -> Element {
        self.rows[r][c]
    }
}

impl<const W: usize> Default for RegisterBlock<W> {
    fn default() -> Self {
        Self::zeroed()
    }
}
