//! Thread-level sorting.
//!
//! Phase 1 splits the input into one contiguous chunk per worker; each
//! worker sorts its cache blocks and merges them with a 4-way tree. Phase 2
//! merges the sorted chunks pairwise in rounds. Every pairwise merge is cut
//! into one segment per worker with [`co_rank`], so all workers share each
//! merge. Rounds alternate between the input and an auxiliary buffer; a
//! round starts only after every segment of the previous one is written.

use std::time::{Duration, Instant};

use crate::cachemerge::{InCacheSorter, Run, Workspace};
use crate::error::{Error, Result};
use crate::lanes::Element;
use crate::multiway::{merge_tree_with, AsymMerger, BLOCK};
use crate::regsort::BlockSorter;
use crate::sort::SortConfig;
use crate::twoway::PairMerger;

/// Split of a merge at one output rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PartitionPoint {
    pub a_split: usize,
    pub b_split: usize,
}

/// Finds how many elements of `a` and of `b` make up the `k` smallest of
/// their union. Equal keys are taken from `a` first.
pub fn co_rank(a: &[Element], b: &[Element], k: usize) -> Result<PartitionPoint> {
    if k > a.len() + b.len() {
        return Err(Error::Range {
            k,
            max: a.len() + b.len(),
        });
    }
    // largest i with a[i-1] <= b[k-i]
    let (mut lo, mut hi) = (k.saturating_sub(b.len()), k.min(a.len()));
    while lo < hi {
        let i = lo + (hi - lo).div_ceil(2);
        if a[i - 1] <= b[k - i] {
            lo = i;
        } else {
            hi = i - 1;
        }
    }
    Ok(PartitionPoint {
        a_split: lo,
        b_split: k - lo,
    })
}

/// Reported around each worker's share of a merge round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhaseEvent {
    SegmentStart { round: usize, worker: usize },
    SegmentEnd { round: usize, worker: usize },
}

pub type Observer<'a> = &'a (dyn Fn(PhaseEvent) + Sync);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SortStats {
    /// Wall time of the per-worker phase.
    pub in_thread: Duration,
    /// Wall time of the cooperative merge rounds.
    pub out_of_thread: Duration,
    pub threads: usize,
    pub rounds: usize,
    /// Largest auxiliary footprint of any in-cache block sort.
    pub peak_aux: usize,
}

impl SortStats {
    pub fn total(&self) -> Duration {
        self.in_thread + self.out_of_thread
    }

    pub fn in_thread_pct(&self) -> f64 {
        let total = self.total().as_secs_f64();
        if total == 0.0 {
            100.0
        } else {
            100.0 * self.in_thread.as_secs_f64() / total
        }
    }

    pub fn out_thread_pct(&self) -> f64 {
        100.0 - self.in_thread_pct()
    }
}

struct Engine<const W: usize> {
    in_cache: InCacheSorter<W>,
    asym: AsymMerger<W>,
    pair: PairMerger<W>,
    out_buffer: usize,
}

impl<const W: usize> Engine<W> {
    fn new(cfg: &SortConfig) -> Result<Self> {
        let split = cfg.split();
        let blocks = BlockSorter::new(cfg.transpose, cfg.family, split)?;
        Ok(Self {
            in_cache: InCacheSorter::new(blocks, cfg.in_cache, cfg.block_size),
            asym: AsymMerger::new(cfg.variant, split),
            pair: PairMerger::with_block(W.max(BLOCK), split),
            out_buffer: cfg.out_buffer,
        })
    }

    fn sort_chunk(&self, data: &mut [Element], aux: &mut [Element]) -> Result<usize> {
        let bs = self.in_cache.block_size();
        let mut ws = Workspace::for_block(bs.min(data.len()));
        let mut peak = 0;
        for c in data.chunks_mut(bs) {
            peak = peak.max(self.in_cache.sort(c, &mut ws)?.peak_aux);
        }
        if data.len() > bs {
            let runs: Vec<Run> = (0..data.len())
                .step_by(bs)
                .map(|o| Run::new(o, bs.min(data.len() - o)))
                .collect();
            merge_tree_with(&self.asym, data, &runs, aux, self.out_buffer)?;
            data.copy_from_slice(aux);
        }
        Ok(peak)
    }
}

struct Segment<'s> {
    a: &'s [Element],
    b: &'s [Element],
    out: &'s mut [Element],
}

/// Cuts every pair of adjacent runs into `workers` output segments.
fn plan_round<'s>(
    src: &'s [Element],
    mut dst: &'s mut [Element],
    bounds: &[usize],
    workers: usize,
) -> Result<Vec<Vec<Segment<'s>>>> {
    let mut tasks: Vec<Vec<Segment<'s>>> = (0..workers).map(|_| Vec::new()).collect();
    for p in (0..bounds.len() - 1).step_by(2) {
        let start = bounds[p];
        let mid = bounds[p + 1];
        let end = bounds.get(p + 2).copied().unwrap_or(mid);
        let (a, b) = (&src[start..mid], &src[mid..end]);
        let len = end - start;
        let mut from = co_rank(a, b, 0)?;
        for (w, list) in tasks.iter_mut().enumerate() {
            let to = co_rank(a, b, (w + 1) * len / workers)?;
            let seg_len = (to.a_split - from.a_split) + (to.b_split - from.b_split);
            let (out, rest) = std::mem::take(&mut dst).split_at_mut(seg_len);
            dst = rest;
            list.push(Segment {
                a: &a[from.a_split..to.a_split],
                b: &b[from.b_split..to.b_split],
                out,
            });
            from = to;
        }
    }
    Ok(tasks)
}

pub(crate) fn run<const W: usize>(
    data: &mut [Element],
    cfg: &SortConfig,
    observer: Option<Observer<'_>>,
) -> Result<SortStats> {
    let n = data.len();
    let workers = if n < cfg.threads { 1 } else { cfg.threads };
    let engine = Engine::<W>::new(cfg)?;
    let mut aux = vec![0; n];
    let bounds: Vec<usize> = (0..=workers).map(|w| w * n / workers).collect();

    let t0 = Instant::now();
    let mut peak = 0;
    if workers == 1 {
        peak = engine.sort_chunk(data, &mut aux)?;
    } else {
        let mut chunks = Vec::with_capacity(workers);
        let (mut d, mut x) = (&mut *data, &mut aux[..]);
        for w in 0..workers {
            let len = bounds[w + 1] - bounds[w];
            let (dc, dr) = std::mem::take(&mut d).split_at_mut(len);
            let (xc, xr) = std::mem::take(&mut x).split_at_mut(len);
            chunks.push((dc, xc));
            d = dr;
            x = xr;
        }
        let engine = &engine;
        let results: Vec<Result<usize>> = std::thread::scope(|s| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|(dc, xc)| s.spawn(move || engine.sort_chunk(dc, xc)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sort worker panicked"))
                .collect()
        });
        for r in results {
            peak = peak.max(r?);
        }
    }
    let in_thread = t0.elapsed();

    let t1 = Instant::now();
    let mut bounds = bounds;
    let mut in_aux = false;
    let mut round = 0;
    while bounds.len() > 2 {
        let (src, dst): (&[Element], &mut [Element]) = if in_aux { (&aux, data) } else { (data, &mut aux) };
        let tasks = plan_round(src, dst, &bounds, workers)?;
        let pair = &engine.pair;
        let work = move |worker: usize, segs: Vec<Segment<'_>>| {
            if let Some(f) = observer {
                f(PhaseEvent::SegmentStart { round, worker });
            }
            for s in segs {
                pair.merge_into(s.a, s.b, s.out);
            }
            if let Some(f) = observer {
                f(PhaseEvent::SegmentEnd { round, worker });
            }
        };
        std::thread::scope(|s| {
            for (w, segs) in tasks.into_iter().enumerate() {
                s.spawn(move || work(w, segs));
            }
        });
        bounds = bounds.iter().step_by(2).copied().chain(std::iter::once(n)).collect();
        bounds.dedup();
        in_aux = !in_aux;
        round += 1;
    }
    if in_aux {
        data.copy_from_slice(&aux);
    }
    Ok(SortStats {
        in_thread,
        out_of_thread: t1.elapsed(),
        threads: workers,
        rounds: round,
        peak_aux: peak,
    })
}

/// Sorts `data` with `threads` workers and the default configuration.
pub fn parallel_sort(data: &mut [Element], threads: usize) -> SortStats {
    let cfg = SortConfig {
        threads: threads.max(1),
        ..Default::default()
    };
    run::<{ crate::lanes::DEFAULT_LANES }>(data, &cfg, None).expect("default configuration is valid")
}
