//! Benchmark kernels and CSV records.

use std::fmt;
use std::time::{Duration, Instant};

use vmsort::cachemerge::InCacheMerge;
use vmsort::parallel::SortStats;
use vmsort::{gen_data, sort_with, Element, MergeFamily, SortConfig};

pub const CSV_HEADER: &str = "kernel,size,threads,seed,time_ns,elems_per_us,in_thread_pct,out_thread_pct";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// Full pipeline, default configuration.
    Rvms,
    /// Full pipeline with every merge-network round vectorized.
    RvmsNoHybrid,
    /// Full pipeline with in-cache merges through a full-size buffer.
    NaiveMerge,
    /// Full pipeline with bitonic row merges.
    BitonicRowmerge,
    /// The standard library's unstable sort.
    Reference,
}

impl Kernel {
    pub const ALL: [Kernel; 5] = [
        Kernel::Rvms,
        Kernel::RvmsNoHybrid,
        Kernel::NaiveMerge,
        Kernel::BitonicRowmerge,
        Kernel::Reference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Rvms => "rvms",
            Kernel::RvmsNoHybrid => "rvms-no-hybrid",
            Kernel::NaiveMerge => "naive-merge",
            Kernel::BitonicRowmerge => "bitonic-rowmerge",
            Kernel::Reference => "reference",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Kernel::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Pipeline configuration for this kernel, derived from `base`.
    pub fn config(self, base: &SortConfig) -> SortConfig {
        match self {
            Kernel::Rvms | Kernel::Reference => *base,
            Kernel::RvmsNoHybrid => SortConfig {
                scalar_rounds: Some(0),
                ..*base
            },
            Kernel::NaiveMerge => SortConfig {
                in_cache: InCacheMerge::NaiveVectorized,
                ..*base
            },
            Kernel::BitonicRowmerge => SortConfig {
                family: MergeFamily::Bitonic,
                ..*base
            },
        }
    }

    pub fn run(self, data: &mut [Element], base: &SortConfig) -> vmsort::Result<SortStats> {
        match self {
            Kernel::Reference => {
                let t = Instant::now();
                data.sort_unstable();
                Ok(SortStats {
                    in_thread: t.elapsed(),
                    threads: 1,
                    ..Default::default()
                })
            }
            k => sort_with(data, &k.config(base)),
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub kernel: Kernel,
    pub size: usize,
    pub threads: usize,
    pub seed: u64,
    pub time_ns: u128,
    pub elems_per_us: f64,
    pub in_thread_pct: f64,
    pub out_thread_pct: f64,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.3},{:.2},{:.2}",
            self.kernel,
            self.size,
            self.threads,
            self.seed,
            self.time_ns,
            self.elems_per_us,
            self.in_thread_pct,
            self.out_thread_pct
        )
    }
}

#[derive(Debug)]
pub enum BenchError {
    Config(vmsort::Error),
    /// The kernel's output differed from the reference sort.
    Mismatch {
        kernel: Kernel,
        size: usize,
        seed: u64,
    },
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::Config(e) => write!(f, "{e}"),
            BenchError::Mismatch { kernel, size, seed } => {
                write!(f, "kernel {kernel} produced wrong output for size {size}, seed {seed}")
            }
        }
    }
}

/// Times `kernel` on seeded data. Every repetition is checked against the
/// reference sort; the fastest repetition is reported.
pub fn bench_one(
    kernel: Kernel,
    size: usize,
    seed: u64,
    base: &SortConfig,
    reps: usize,
) -> Result<BenchRecord, BenchError> {
    let input = gen_data(size, seed);
    let mut want = input.clone();
    want.sort_unstable();
    let mut best: Option<(Duration, SortStats)> = None;
    for _ in 0..reps.max(1) {
        let mut v = input.clone();
        let t = Instant::now();
        let stats = kernel.run(&mut v, base).map_err(BenchError::Config)?;
        let elapsed = t.elapsed();
        if v != want {
            return Err(BenchError::Mismatch { kernel, size, seed });
        }
        if best.is_none_or(|(b, _)| elapsed < b) {
            best = Some((elapsed, stats));
        }
    }
    let (elapsed, stats) = best.expect("at least one repetition");
    let time_ns = elapsed.as_nanos().max(1);
    Ok(BenchRecord {
        kernel,
        size,
        threads: stats.threads.max(1),
        seed,
        time_ns,
        elems_per_us: size as f64 * 1e3 / time_ns as f64,
        in_thread_pct: stats.in_thread_pct(),
        out_thread_pct: stats.out_thread_pct(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in Kernel::ALL {
            assert_eq!(Kernel::from_name(k.name()), Some(k));
        }
        assert_eq!(Kernel::from_name("quick"), None);
    }

    #[test]
    fn record_row() {
        let r = BenchRecord {
            kernel: Kernel::Reference,
            size: 4096,
            threads: 1,
            seed: 7,
            time_ns: 2048,
            elems_per_us: 2000.0,
            in_thread_pct: 100.0,
            out_thread_pct: 0.0,
        };
        assert_eq!(r.csv_row(), "reference,4096,1,7,2048,2000.000,100.00,0.00");
        assert_eq!(CSV_HEADER.split(',').count(), r.csv_row().split(',').count());
    }

    #[test]
    fn every_kernel_verifies() {
        let base = SortConfig {
            threads: 2,
            block_size: 1024,
            ..Default::default()
        };
        for k in Kernel::ALL {
            let r = bench_one(k, 5000, 3, &base, 1).unwrap();
            assert_eq!(r.size, 5000);
            assert!((r.in_thread_pct + r.out_thread_pct - 100.0).abs() < 1e-6);
        }
    }
}
