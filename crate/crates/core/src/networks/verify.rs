use super::ComparatorNetwork;
use crate::error::{Error, Result};

/// Widest network [`verify_network`] enumerates in sorter mode.
pub const SORTER_ENUMERATION_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every binary input must come out sorted.
    Sorter,
    /// Every pair of sorted binary halves must come out sorted.
    Merger,
    /// Like `Merger`, with the first run covering inputs `0..split`.
    MergerSplit(usize),
}

/// Zero-one check of a network.
///
/// Sorter mode enumerates all `2^width` binary inputs, 64 at a time: wire
/// `k` holds one bit per input, and a comparator is `(a & b, a | b)`.
/// Merger modes enumerate the `(p + 1) * (q + 1)` sorted 0/1 run pairs.
pub fn verify_network(net: &ComparatorNetwork, mode: VerifyMode) -> Result<bool> {
    let n = net.width();
    match mode {
        VerifyMode::Sorter => {
            if n > SORTER_ENUMERATION_LIMIT {
                return Err(Error::EnumerationCapacity {
                    width: n,
                    limit: SORTER_ENUMERATION_LIMIT,
                });
            }
            Ok(verify_sorter(net))
        }
        VerifyMode::Merger => Ok(verify_split(net, n / 2)),
        VerifyMode::MergerSplit(split) => {
            if split > n {
                return Err(Error::InvalidComparator {
                    i: split,
                    j: n,
                    width: n,
                });
            }
            Ok(verify_split(net, split))
        }
    }
}

fn verify_sorter(net: &ComparatorNetwork) -> bool {
    let n = net.width();
    if n <= 1 {
        return true;
    }
    let comps: Vec<_> = net.comparators().collect();
    let total: u64 = 1 << n;
    let mut wires = vec![0u64; n];
    let mut base = 0u64;
    while base < total {
        let batch = (total - base).min(64);
        let live = if batch == 64 { u64::MAX } else { (1u64 << batch) - 1 };
        for (k, w) in wires.iter_mut().enumerate() {
            let mut bits = 0u64;
            for t in 0..batch {
                bits |= (((base + t) >> k) & 1) << t;
            }
            *w = bits;
        }
        for c in &comps {
            let (a, b) = (wires[c.i], wires[c.j]);
            wires[c.i] = a & b;
            wires[c.j] = a | b;
        }
        // sorted ascending: no 1 directly followed by a 0
        if wires.windows(2).any(|p| p[0] & !p[1] & live != 0) {
            return false;
        }
        base += batch;
    }
    true
}

fn verify_split(net: &ComparatorNetwork, split: usize) -> bool {
    let n = net.width();
    let mut v = vec![0; n];
    for zeros_a in 0..=split {
        for zeros_b in 0..=(n - split) {
            for (k, x) in v.iter_mut().enumerate() {
                *x = if k < split {
                    (k >= zeros_a) as i32
                } else {
                    (k - split >= zeros_b) as i32
                };
            }
            net.apply(&mut v);
            if v.windows(2).any(|p| p[0] > p[1]) {
                return false;
            }
        }
    }
    true
}
