//! Out-of-cache merging: 4-way nodes driven by an asymmetric 8+24 merging
//! network, composed into a static 4-ary merge tree.

use std::collections::VecDeque;
use std::sync::OnceLock;

use crate::cachemerge::Run;
use crate::error::{Error, Result};
use crate::lanes::{Element, DEFAULT_LANES};
pub use crate::networks::AsymVariant;
use crate::networks::{gen_oddeven_merge, ComparatorNetwork};
use crate::program::{Lowering, Program};
use crate::regsort::HybridSplit;
use crate::twoway::{scalar_merge_into, PairMerger};

/// Elements pulled from an input per step.
pub const BLOCK: usize = 8;
/// Elements retained between steps.
pub const CARRY: usize = 24;
/// Default node output buffer.
pub const DEFAULT_OUT_BUFFER: usize = 2048;

const WIDE: usize = BLOCK + CARRY;

fn compile<const W: usize>(net: &ComparatorNetwork, split: HybridSplit) -> Program<W> {
    let mut p = Program::new();
    p.push_network(net, 0, split.scalar_rounds.min(net.depth()), Lowering::Shuffle);
    p
}

/// Compiled 16- and 32-input odd-even merges, combined per [`AsymVariant`].
#[derive(Clone, Debug)]
pub struct AsymMerger<const W: usize> {
    m16: Program<W>,
    m32: Program<W>,
    variant: AsymVariant,
}

impl<const W: usize> AsymMerger<W> {
    pub fn new(variant: AsymVariant, split: HybridSplit) -> Self {
        let n16 = gen_oddeven_merge(16).expect("16 is a power of two");
        let n32 = gen_oddeven_merge(32).expect("32 is a power of two");
        Self {
            m16: compile(&n16, split),
            m32: compile(&n32, split),
            variant,
        }
    }

    pub fn variant(&self) -> AsymVariant {
        self.variant
    }

    /// Merges sorted `a` (8) with sorted `b` (24).
    pub fn merge(&self, a: &[Element; BLOCK], b: &[Element; CARRY]) -> [Element; WIDE] {
        let mut v = [0; WIDE];
        let (b1, b2, b3) = (&b[..8], &b[8..16], &b[16..]);
        match self.variant {
            AsymVariant::Standard => {
                v[..8].copy_from_slice(a);
                v[8..].copy_from_slice(b);
                self.m16.run(&mut v[..16]);
                self.m32.run(&mut v);
            }
            AsymVariant::Iterative => {
                v[..8].copy_from_slice(a);
                v[8..].copy_from_slice(b);
                self.m16.run(&mut v[..16]);
                self.m16.run(&mut v[8..24]);
                self.m16.run(&mut v[16..]);
            }
            AsymVariant::Parallel => {
                // n1 holds the lowest 8 overall, n2 the highest 8; b2 is
                // merged against both remainders to split the middle 16.
                let mut n1 = [0; 16];
                let mut n2 = [0; 16];
                n1[..8].copy_from_slice(a);
                n1[8..].copy_from_slice(b1);
                n2[..8].copy_from_slice(a);
                n2[8..].copy_from_slice(b3);
                self.m16.run(&mut n1);
                self.m16.run(&mut n2);
                let mut n3 = [0; 16];
                let mut n4 = [0; 16];
                n3[..8].copy_from_slice(&n1[8..]);
                n3[8..].copy_from_slice(b2);
                n4[..8].copy_from_slice(&n2[..8]);
                n4[8..].copy_from_slice(b2);
                self.m16.run(&mut n3);
                self.m16.run(&mut n4);
                v[..8].copy_from_slice(&n1[..8]);
                v[8..16].copy_from_slice(&n3[..8]);
                v[16..24].copy_from_slice(&n4[8..]);
                v[24..].copy_from_slice(&n2[8..]);
            }
        }
        v
    }

    /// Sorts four sorted 8-blocks: two 16-merges, then one 32-merge.
    pub fn merge_4x8(&self, v: &mut [Element; WIDE]) {
        self.m16.run(&mut v[..16]);
        self.m16.run(&mut v[16..]);
        self.m32.run(v);
    }
}

impl<const W: usize> Default for AsymMerger<W> {
    fn default() -> Self {
        Self::new(AsymVariant::default(), HybridSplit::for_lanes(W))
    }
}

fn default_mergers() -> &'static [AsymMerger<DEFAULT_LANES>; 3] {
    static M: OnceLock<[AsymMerger<DEFAULT_LANES>; 3]> = OnceLock::new();
    M.get_or_init(|| AsymVariant::ALL.map(|v| AsymMerger::new(v, HybridSplit::default())))
}

/// Merges sorted `a` (8) and sorted `b` (24) with the four-lane merger.
pub fn asym_merge_8_24(a: &[Element; BLOCK], b: &[Element; CARRY], variant: AsymVariant) -> [Element; WIDE] {
    let m = &default_mergers()[AsymVariant::ALL
        .iter()
        .position(|&v| v == variant)
        .expect("listed variant")];
    m.merge(a, b)
}

/// Checks `variant` on every pair of sorted 0/1 inputs (9 x 25 cases).
pub fn verify_asym(variant: AsymVariant) -> bool {
    let m = AsymMerger::<DEFAULT_LANES>::new(variant, HybridSplit::default());
    (0..=BLOCK).all(|za| {
        (0..=CARRY).all(|zb| {
            let a: [Element; BLOCK] = std::array::from_fn(|i| (i >= za) as Element);
            let b: [Element; CARRY] = std::array::from_fn(|i| (i >= zb) as Element);
            let out = m.merge(&a, &b);
            let zeros = za + zb;
            out.iter().enumerate().all(|(i, &x)| x == (i >= zeros) as Element)
        })
    })
}

/// Node and tree parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiwayConfig {
    pub variant: AsymVariant,
    pub split: HybridSplit,
    /// Output buffer of each node, at least [`BLOCK`] elements.
    pub out_buffer: usize,
}

impl Default for MultiwayConfig {
    fn default() -> Self {
        Self {
            variant: AsymVariant::default(),
            split: HybridSplit::default(),
            out_buffer: DEFAULT_OUT_BUFFER,
        }
    }
}

/// One input of a [`FourWayNode`].
#[derive(Debug)]
pub enum Input<'a, const W: usize> {
    Run { data: &'a [Element], pos: usize },
    Node(Box<FourWayNode<'a, W>>),
    Empty,
}

impl<'a, const W: usize> Input<'a, W> {
    pub fn run(data: &'a [Element]) -> Self {
        if data.is_empty() {
            Input::Empty
        } else {
            Input::Run { data, pos: 0 }
        }
    }

    /// Makes at least one block visible if the input can provide it.
    fn prepare(&mut self) {
        if let Input::Node(n) = self {
            if n.out.len() < BLOCK {
                n.fill();
            }
        }
    }

    fn head(&self) -> Option<Element> {
        match self {
            Input::Run { data, pos } => data.get(*pos).copied(),
            Input::Node(n) => n.out.front().copied(),
            Input::Empty => None,
        }
    }

    fn available(&self) -> usize {
        match self {
            Input::Run { data, pos } => data.len() - pos,
            Input::Node(n) => n.out.len(),
            Input::Empty => 0,
        }
    }

    fn take(&mut self, dst: &mut [Element]) -> usize {
        match self {
            Input::Run { data, pos } => {
                let r = dst.len().min(data.len() - *pos);
                dst[..r].copy_from_slice(&data[*pos..*pos + r]);
                *pos += r;
                r
            }
            Input::Node(n) => {
                let r = dst.len().min(n.out.len());
                for (d, x) in dst.iter_mut().zip(n.out.drain(..r)) {
                    *d = x;
                }
                r
            }
            Input::Empty => 0,
        }
    }

    #[cfg(test)]
    fn unread(&self) -> Vec<Element> {
        match self {
            Input::Run { data, pos } => data[*pos..].to_vec(),
            Input::Node(n) => {
                let mut v: Vec<Element> = n.out.iter().copied().collect();
                for i in &n.inputs {
                    v.extend(i.unread());
                }
                v.extend_from_slice(&n.carry[..n.carry_len]);
                v
            }
            Input::Empty => Vec::new(),
        }
    }
}

/// A 4-way merge node.
///
/// Each step refills the network from the input with the smallest head,
/// merges that block with the carry and emits the lowest elements into the
/// output buffer. The carry holds the largest `min(24, taken)` elements
/// taken so far. A block shorter than 8 is an input's last and is merged
/// into the carry with a scalar merge; once every input is exhausted the
/// carry drains 8 at a time.
#[derive(Debug)]
pub struct FourWayNode<'a, const W: usize> {
    inputs: [Input<'a, W>; 4],
    merger: &'a AsymMerger<W>,
    carry: [Element; CARRY],
    carry_len: usize,
    out: VecDeque<Element>,
    out_cap: usize,
    started: bool,
    done: bool,
}

impl<'a, const W: usize> FourWayNode<'a, W> {
    pub fn new(inputs: [Input<'a, W>; 4], merger: &'a AsymMerger<W>, out_buffer: usize) -> Self {
        assert!(out_buffer >= BLOCK, "node output buffer must hold one block");
        Self {
            inputs,
            merger,
            carry: [0; CARRY],
            carry_len: 0,
            out: VecDeque::with_capacity(out_buffer),
            out_cap: out_buffer,
            started: false,
            done: false,
        }
    }

    /// Leaf node over up to four sorted runs.
    pub fn from_runs(runs: [&'a [Element]; 4], merger: &'a AsymMerger<W>, out_buffer: usize) -> Self {
        Self::new(runs.map(Input::run), merger, out_buffer)
    }

    pub fn carry(&self) -> &[Element] {
        &self.carry[..self.carry_len]
    }

    pub fn buffered(&self) -> usize {
        self.out.len()
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Removes up to `dst.len()` elements from the output buffer.
    pub fn drain_into(&mut self, dst: &mut [Element]) -> usize {
        let r = dst.len().min(self.out.len());
        for (d, x) in dst.iter_mut().zip(self.out.drain(..r)) {
            *d = x;
        }
        r
    }

    /// Runs one step. Returns the number of elements emitted (at most 8),
    /// or `None` once the node has nothing left.
    pub fn step(&mut self) -> Option<usize> {
        if self.done {
            return None;
        }
        assert!(self.out.len() + BLOCK <= self.out_cap, "node output buffer is full");
        for i in &mut self.inputs {
            i.prepare();
        }
        if !self.started {
            self.started = true;
            if self.inputs.iter().all(|i| i.available() >= BLOCK) {
                return Some(self.init_symmetric());
            }
        }
        let mut best: Option<(usize, Element)> = None;
        for (k, i) in self.inputs.iter().enumerate() {
            if let Some(h) = i.head() {
                if best.is_none_or(|(_, b)| h < b) {
                    best = Some((k, h));
                }
            }
        }
        let Some((k, _)) = best else {
            if self.carry_len == 0 {
                self.done = true;
                return None;
            }
            let n = self.carry_len.min(BLOCK);
            self.out.extend(&self.carry[..n]);
            self.carry.copy_within(n..self.carry_len, 0);
            self.carry_len -= n;
            return Some(n);
        };
        let mut block = [0; BLOCK];
        let r = self.inputs[k].take(&mut block);
        if r == BLOCK && self.carry_len == CARRY {
            let v = self.merger.merge(&block, &self.carry);
            self.out.extend(&v[..BLOCK]);
            self.carry.copy_from_slice(&v[BLOCK..]);
            Some(BLOCK)
        } else {
            let total = self.carry_len + r;
            let mut v = [0; WIDE];
            scalar_merge_into(&self.carry[..self.carry_len], &block[..r], &mut v[..total]);
            let e = total.saturating_sub(CARRY);
            self.out.extend(&v[..e]);
            self.carry_len = total - e;
            self.carry[..self.carry_len].copy_from_slice(&v[e..total]);
            Some(e)
        }
    }

    fn init_symmetric(&mut self) -> usize {
        let mut v = [0; WIDE];
        for (k, i) in self.inputs.iter_mut().enumerate() {
            i.take(&mut v[k * BLOCK..(k + 1) * BLOCK]);
        }
        self.merger.merge_4x8(&mut v);
        self.out.extend(&v[..BLOCK]);
        self.carry.copy_from_slice(&v[BLOCK..]);
        self.carry_len = CARRY;
        BLOCK
    }

    /// Steps until the output buffer has no room for another block or the
    /// node is finished.
    pub fn fill(&mut self) {
        while self.out.len() + BLOCK <= self.out_cap && self.step().is_some() {}
    }
}

/// Merges sorted `runs` of `src` into `out` through a tree of 4-way nodes.
/// Runs are padded with empty runs to a power of four.
pub fn merge_tree(src: &[Element], runs: &[Run], out: &mut [Element], cfg: &MultiwayConfig) -> Result<()> {
    let merger = AsymMerger::<DEFAULT_LANES>::new(cfg.variant, cfg.split);
    merge_tree_with(&merger, src, runs, out, cfg.out_buffer)
}

/// [`merge_tree`] with a caller-supplied merger.
pub fn merge_tree_with<const W: usize>(
    merger: &AsymMerger<W>,
    src: &[Element],
    runs: &[Run],
    out: &mut [Element],
    out_buffer: usize,
) -> Result<()> {
    let total = check_runs(src, runs, out)?;
    if out_buffer < BLOCK {
        return Err(Error::Config(format!(
            "node output buffer {out_buffer} is smaller than {BLOCK}"
        )));
    }
    match runs {
        [] => return Ok(()),
        [r] => {
            out[..total].copy_from_slice(r.slice(src)?);
            return Ok(());
        }
        _ => {}
    }
    let mut level: Vec<Input<'_, W>> = Vec::with_capacity(runs.len().next_power_of_two() * 4);
    for r in runs {
        level.push(Input::run(r.slice(src)?));
    }
    let mut width = 1;
    while width < level.len() {
        width *= 4;
    }
    level.resize_with(width, || Input::Empty);
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len() / 4);
        let mut it = level.into_iter();
        while let (Some(a), Some(b), Some(c), Some(d)) = (it.next(), it.next(), it.next(), it.next()) {
            next.push(Input::Node(Box::new(FourWayNode::new(
                [a, b, c, d],
                merger,
                out_buffer,
            ))));
        }
        level = next;
    }
    let Some(Input::Node(mut root)) = level.pop() else {
        unreachable!("at least two runs build a node");
    };
    let mut k = 0;
    loop {
        root.fill();
        k += root.drain_into(&mut out[k..total]);
        if root.is_done() && root.buffered() == 0 {
            break;
        }
    }
    debug_assert_eq!(k, total);
    Ok(())
}

fn check_runs(src: &[Element], runs: &[Run], out: &[Element]) -> Result<usize> {
    let mut total = 0;
    for r in runs {
        r.slice(src)?;
        total += r.len;
    }
    if out.len() < total {
        return Err(Error::Capacity {
            needed: total,
            capacity: out.len(),
        });
    }
    Ok(total)
}

/// Baseline: rounds of pairwise blocked two-way merges with 8-element
/// blocks (16-input networks).
pub fn merge_tree_2way(src: &[Element], runs: &[Run], out: &mut [Element], split: HybridSplit) -> Result<()> {
    let pair = PairMerger::<DEFAULT_LANES>::with_block(BLOCK, split);
    merge_tree_2way_with(&pair, src, runs, out)
}

/// [`merge_tree_2way`] with a caller-supplied merger.
pub fn merge_tree_2way_with<const W: usize>(
    pair: &PairMerger<W>,
    src: &[Element],
    runs: &[Run],
    out: &mut [Element],
) -> Result<()> {
    let total = check_runs(src, runs, out)?;
    let mut a: Vec<Element> = Vec::with_capacity(total);
    let mut bounds = vec![0];
    for r in runs {
        a.extend_from_slice(r.slice(src)?);
        bounds.push(a.len());
    }
    let mut b = vec![0; total];
    while bounds.len() > 2 {
        let mut next = vec![0];
        for w in bounds[1..].chunks(2).enumerate().map(|(i, c)| (bounds[2 * i], c)) {
            let (start, c) = w;
            match *c {
                [mid, end] => pair.merge_into(&a[start..mid], &a[mid..end], &mut b[start..end]),
                [end] => b[start..end].copy_from_slice(&a[start..end]),
                _ => unreachable!(),
            }
            next.push(*c.last().expect("chunk is non-empty"));
        }
        std::mem::swap(&mut a, &mut b);
        bounds = next;
    }
    out[..total].copy_from_slice(&a);
    Ok(())
}
