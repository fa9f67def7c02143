//! Out-of-place two-way merges: a branchless scalar merge and a blocked
//! merge that runs a `2W` merging network per step.

use std::hint::select_unpredictable;

use crate::lanes::Element;
use crate::networks::gen_oddeven_merge;
use crate::program::{Lowering, Program};
use crate::regsort::HybridSplit;

/// Merges forward until `a` or `b` runs out; returns the elements taken
/// from each. Ties take from `a`.
///
/// The loop runs in chunks of `min(remaining a, remaining b)` steps, which
/// cannot exhaust either input, so the trip count does not depend on the
/// comparisons.
///
/// # Safety
///
/// `a` and `b` must be valid for `na` and `nb` reads and `out` for
/// `na + nb` writes. `out` may overlap the unread part of `b` only from
/// below: after `k` outputs with `j` elements of `b` taken, `out + k` must
/// not be past `b + j` (true when `out + na == b`).
pub(crate) unsafe fn merge_forward(
    a: *const Element,
    na: usize,
    b: *const Element,
    nb: usize,
    out: *mut Element,
) -> (usize, usize) {
    let (mut i, mut j) = (0, 0);
    loop {
        let steps = (na - i).min(nb - j);
        if steps == 0 {
            return (i, j);
        }
        for _ in 0..steps {
            let (x, y) = (*a.add(i), *b.add(j));
            let take_a = x <= y;
            *out.add(i + j) = select_unpredictable(take_a, x, y);
            i += take_a as usize;
            j += !take_a as usize;
        }
    }
}

/// Mirror of [`merge_forward`]: merges from the top until `a` or `b` runs
/// out and returns how many elements of each remain. Ties put `b` above.
///
/// # Safety
///
/// As for [`merge_forward`], except that `out` may alias `a` only as
/// `out == a`; writes then land at or above the unread end of `a`.
pub(crate) unsafe fn merge_backward(
    a: *const Element,
    na: usize,
    b: *const Element,
    nb: usize,
    out: *mut Element,
) -> (usize, usize) {
    let (mut i, mut j) = (na, nb);
    loop {
        let steps = i.min(j);
        if steps == 0 {
            return (i, j);
        }
        for _ in 0..steps {
            let (x, y) = (*a.add(i - 1), *b.add(j - 1));
            let take_b = y >= x;
            *out.add(i + j - 1) = select_unpredictable(take_b, y, x);
            j -= take_b as usize;
            i -= !take_b as usize;
        }
    }
}

/// Branchless merge of `a` and `b` into `out`; ties take from `a`.
pub fn scalar_merge_into(a: &[Element], b: &[Element], out: &mut [Element]) {
    assert_eq!(out.len(), a.len() + b.len());
    // SAFETY: lengths checked above; `out` is a distinct mutable borrow.
    let (i, j) = unsafe { merge_forward(a.as_ptr(), a.len(), b.as_ptr(), b.len(), out.as_mut_ptr()) };
    let k = i + j;
    out[k..k + a.len() - i].copy_from_slice(&a[i..]);
    out[k + a.len() - i..].copy_from_slice(&b[j..]);
}

/// Largest block a [`PairMerger`] accepts.
pub const MAX_PAIR_BLOCK: usize = 32;

/// Merges two sorted blocks held back to back, using a precompiled
/// odd-even network of width twice the block.
#[derive(Clone, Debug)]
pub struct PairMerger<const W: usize> {
    program: Program<W>,
    block: usize,
}

impl<const W: usize> PairMerger<W> {
    /// Merger for blocks of one register.
    pub fn new(split: HybridSplit) -> Self {
        Self::with_block(W, split)
    }

    /// Merger for blocks of `block` elements, a power of two between `W`
    /// and [`MAX_PAIR_BLOCK`].
    pub fn with_block(block: usize, split: HybridSplit) -> Self {
        assert!(block.is_power_of_two() && block >= W && block <= MAX_PAIR_BLOCK.max(W));
        let net = gen_oddeven_merge(2 * block).expect("2 * block is a power of two");
        let mut program = Program::new();
        program.push_network(&net, 0, split.scalar_rounds.min(net.depth()), Lowering::Shuffle);
        Self { program, block }
    }

    pub fn block(&self) -> usize {
        self.block
    }

    /// Merges the sorted halves of `pair` (length twice the block).
    #[inline]
    pub fn merge(&self, pair: &mut [Element]) {
        debug_assert_eq!(pair.len(), 2 * self.block);
        self.program.run(pair);
    }

    /// Merges `a` and `b` into `out`, one block per network step.
    ///
    /// The carry holds the largest block of elements taken so far; each
    /// step takes the next block from the input with the smaller head,
    /// merges it with the carry and emits the lower half. A short final
    /// block of an input is folded into the carry with a scalar merge.
    pub fn merge_into(&self, a: &[Element], b: &[Element], out: &mut [Element]) {
        assert_eq!(out.len(), a.len() + b.len());
        let w = self.block;
        if a.len() < w || b.len() < w {
            scalar_merge_into(a, b, out);
            return;
        }
        let mut buf = [0; 2 * MAX_PAIR_BLOCK];
        let mut tmp = [0; 2 * MAX_PAIR_BLOCK];
        let pair = &mut buf[..2 * w];
        pair[..w].copy_from_slice(&a[..w]);
        let (mut i, mut j, mut k) = (w, 0, 0);
        loop {
            let take_a = match (i < a.len(), j < b.len()) {
                (true, true) => a[i] <= b[j],
                (true, false) => true,
                (false, true) => false,
                (false, false) => break,
            };
            let (src, pos) = if take_a { (a, &mut i) } else { (b, &mut j) };
            let r = (src.len() - *pos).min(w);
            if r == w {
                pair[w..].copy_from_slice(&src[*pos..*pos + w]);
                self.merge(pair);
                out[k..k + w].copy_from_slice(&pair[..w]);
                pair.copy_within(w.., 0);
            } else {
                let merged = &mut tmp[..w + r];
                scalar_merge_into(&pair[..w], &src[*pos..*pos + r], merged);
                out[k..k + r].copy_from_slice(&merged[..r]);
                pair[..w].copy_from_slice(&merged[r..]);
            }
            *pos += r;
            k += r;
        }
        out[k..].copy_from_slice(&pair[..w]);
    }
}

impl<const W: usize> Default for PairMerger<W> {
    fn default() -> Self {
        Self::new(HybridSplit::for_lanes(W))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reference(a: &[i32], b: &[i32]) -> Vec<i32> {
        let mut v = [a, b].concat();
        v.sort_unstable();
        v
    }

    #[test]
    fn scalar_edges() {
        let mut out = vec![0; 3];
        scalar_merge_into(&[], &[1, 2, 3], &mut out);
        assert_eq!(out, [1, 2, 3]);
        scalar_merge_into(&[1, 2, 3], &[], &mut out);
        assert_eq!(out, [1, 2, 3]);
        let mut out = vec![0; 6];
        scalar_merge_into(&[1, 2, 5], &[3, 4, 6], &mut out);
        assert_eq!(out, [1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn blocked_interleaved() {
        let a: Vec<i32> = (0..32).map(|x| 2 * x).collect();
        let b: Vec<i32> = (0..32).map(|x| 2 * x + 1).collect();
        let mut out = vec![0; 64];
        PairMerger::<4>::default().merge_into(&a, &b, &mut out);
        assert_eq!(out, (0..64).collect::<Vec<_>>());
    }

    proptest! {
        #[test]
        fn blocked_matches_reference(mut a in prop::collection::vec(-50i32..50, 0..80),
                                     mut b in prop::collection::vec(-50i32..50, 0..80)) {
            a.sort_unstable();
            b.sort_unstable();
            let want = reference(&a, &b);
            let mut out = vec![0; a.len() + b.len()];
            PairMerger::<4>::default().merge_into(&a, &b, &mut out);
            prop_assert_eq!(&out, &want);
            PairMerger::<8>::new(HybridSplit::VECTOR).merge_into(&a, &b, &mut out);
            prop_assert_eq!(&out, &want);
            PairMerger::<4>::with_block(16, HybridSplit::default()).merge_into(&a, &b, &mut out);
            prop_assert_eq!(&out, &want);
            scalar_merge_into(&a, &b, &mut out);
            prop_assert_eq!(&out, &want);
        }
    }
}
