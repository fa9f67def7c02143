//! Lowering of comparator networks onto `W`-lane registers.
//!
//! A [`Program`] is a flat list of operations over a slice viewed as
//! consecutive `W`-lane registers:
//!
//! * `Vector`: lane-wise compare-exchange of two whole registers;
//! * `Shuffle`: up to `W` arbitrary comparators gathered into two operand
//!   registers, compared lane-wise, and scattered back. This is how a
//!   vector unit without a cheap in-register shuffle executes stages that
//!   move data between lanes;
//! * `Scalar`: one branchless scalar compare-exchange.

use std::collections::BTreeMap;
use std::ops::Range;

use crate::lanes::{cmpx_scalar, cmpx_vector, Element, LaneVector};
use crate::networks::{ComparatorNetwork, Stage};

// Consecutive operations of one kind. Comparators within a stage are
// independent, so a stage may be split into runs of each kind and
// adjacent runs of the same kind may be fused.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Segment {
    Vector(Range<u32>),
    Shuffle(Range<u32>),
    Scalar(Range<u32>),
}

/// How a stage that is not a set of whole-register compares is executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lowering {
    /// Gather/compare/scatter through operand registers.
    Shuffle,
    /// Scalar compare-exchanges.
    Scalar,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program<const W: usize> {
    segments: Vec<Segment>,
    // element offsets of the low and high register
    vector: Vec<(u32, u32)>,
    // (start, len) into `operands`: `len` low indices, then `len` high ones
    shuffle: Vec<(u32, u32)>,
    operands: Vec<u32>,
    scalar: Vec<(u32, u32)>,
    width: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub vector: usize,
    pub shuffle: usize,
    pub scalar: usize,
}

impl<const W: usize> Program<W> {
    pub fn new() -> Self {
        Self {
            segments: Vec::new(),
            vector: Vec::new(),
            shuffle: Vec::new(),
            operands: Vec::new(),
            scalar: Vec::new(),
            width: 0,
        }
    }

    /// Smallest slice length the program may run on.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn counts(&self) -> OpCounts {
        OpCounts {
            vector: self.vector.len(),
            shuffle: self.shuffle.len(),
            scalar: self.scalar.len(),
        }
    }

    /// Appends `net` shifted by `offset` (a multiple of `W`). The last
    /// `scalar_rounds` stages are lowered to scalar compare-exchanges;
    /// earlier stages use whole-register compares where every comparator
    /// between a register pair covers all lanes, and `misaligned` otherwise.
    pub fn push_network(&mut self, net: &ComparatorNetwork, offset: usize, scalar_rounds: usize, misaligned: Lowering) {
        assert_eq!(offset % W, 0, "network offset must be register aligned");
        let depth = net.depth();
        let first_scalar = depth.saturating_sub(scalar_rounds);
        for (s, stage) in net.stages().iter().enumerate() {
            if s >= first_scalar {
                let ops: Vec<(usize, usize)> = stage.comparators.iter().map(|c| (offset + c.i, offset + c.j)).collect();
                self.push_scalar(&ops);
            } else {
                self.push_vector_stage(stage, offset, misaligned);
            }
        }
        self.width = self.width.max(offset + net.width());
    }

    fn extend(&mut self, kind: fn(Range<u32>) -> Segment, start: usize, end: usize) {
        if start == end {
            return;
        }
        let (start, end) = (start as u32, end as u32);
        match (self.segments.last_mut(), kind(0..0)) {
            (Some(Segment::Vector(r)), Segment::Vector(_))
            | (Some(Segment::Shuffle(r)), Segment::Shuffle(_))
            | (Some(Segment::Scalar(r)), Segment::Scalar(_))
                if r.end == start =>
            {
                r.end = end;
            }
            _ => self.segments.push(kind(start..end)),
        }
    }

    fn push_scalar(&mut self, ops: &[(usize, usize)]) {
        let start = self.scalar.len();
        self.scalar.extend(ops.iter().map(|&(i, j)| (i as u32, j as u32)));
        self.extend(Segment::Scalar, start, self.scalar.len());
    }

    fn push_vector_stage(&mut self, stage: &Stage, offset: usize, misaligned: Lowering) {
        // Register pairs whose comparators are lane aligned and cover every lane.
        let mut pairs: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for c in &stage.comparators {
            if c.is_lane_aligned(W) {
                *pairs.entry(((offset + c.i) / W, (offset + c.j) / W)).or_default() += 1;
            }
        }
        let full = |i: usize, j: usize| pairs.get(&((offset + i) / W, (offset + j) / W)) == Some(&W);
        let mut rest = Vec::new();
        for c in &stage.comparators {
            if !(c.is_lane_aligned(W) && full(c.i, c.j)) {
                rest.push((offset + c.i, offset + c.j));
            }
        }
        let start = self.vector.len();
        for (&(lo, hi), &n) in &pairs {
            if n == W {
                self.vector.push(((lo * W) as u32, (hi * W) as u32));
            }
        }
        self.extend(Segment::Vector, start, self.vector.len());
        match misaligned {
            Lowering::Scalar => self.push_scalar(&rest),
            Lowering::Shuffle => {
                let start = self.shuffle.len();
                for chunk in rest.chunks(W) {
                    let at = self.operands.len() as u32;
                    self.operands.extend(chunk.iter().map(|&(i, _)| i as u32));
                    self.operands.extend(chunk.iter().map(|&(_, j)| j as u32));
                    self.shuffle.push((at, chunk.len() as u32));
                }
                self.extend(Segment::Shuffle, start, self.shuffle.len());
            }
        }
    }

    pub fn run(&self, v: &mut [Element]) {
        assert!(v.len() >= self.width);
        let p = v.as_mut_ptr();
        // SAFETY: every stored index was checked against the network width
        // when pushed (`ComparatorNetwork` validates `i < j < width`), each
        // vector offset is at most `width - W`, and `v.len() >= width`.
        // Indices of one operation are distinct, so reads precede writes
        // without aliasing.
        unsafe {
            for seg in &self.segments {
                match seg {
                    Segment::Vector(r) => {
                        for &(lo, hi) in self.vector.get_unchecked(r.start as usize..r.end as usize) {
                            let (l, h) = (
                                p.add(lo as usize) as *mut [Element; W],
                                p.add(hi as usize) as *mut [Element; W],
                            );
                            let (a, b) = cmpx_vector(LaneVector::new(l.read()), LaneVector::new(h.read()));
                            l.write(a.lanes);
                            h.write(b.lanes);
                        }
                    }
                    Segment::Shuffle(r) => {
                        for &(start, len) in self.shuffle.get_unchecked(r.start as usize..r.end as usize) {
                            let (start, len) = (start as usize, len as usize);
                            let lo_idx = self.operands.get_unchecked(start..start + len);
                            let hi_idx = self.operands.get_unchecked(start + len..start + 2 * len);
                            let mut a = [0; W];
                            let mut b = [0; W];
                            for k in 0..len {
                                a[k] = *p.add(lo_idx[k] as usize);
                                b[k] = *p.add(hi_idx[k] as usize);
                            }
                            let (a, b) = cmpx_vector(LaneVector::new(a), LaneVector::new(b));
                            for k in 0..len {
                                *p.add(lo_idx[k] as usize) = a.lanes[k];
                                *p.add(hi_idx[k] as usize) = b.lanes[k];
                            }
                        }
                    }
                    Segment::Scalar(r) => {
                        for &(i, j) in self.scalar.get_unchecked(r.start as usize..r.end as usize) {
                            let (pi, pj) = (p.add(i as usize), p.add(j as usize));
                            let (lo, hi) = cmpx_scalar(*pi, *pj);
                            *pi = lo;
                            *pj = hi;
                        }
                    }
                }
            }
        }
    }
}
