//! `vmsort` subcommands.

pub mod bench;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use vmsort::cachemerge::DEFAULT_CACHE_BLOCK;
use vmsort::multiway::verify_asym;
use vmsort::networks::{
    by_name, cost_report, gen_asym_merge, gen_column_sorter, verify_network, ComparatorNetwork, VerifyMode,
};
use vmsort::{gen_data, sort_with, AsymVariant, Element, MergeFamily, SortConfig};

use bench::{bench_one, BenchError, Kernel, CSV_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_WRITE: i32 = 3;

const BENCH_HELP: &str = "\
Writes one CSV row per (size, kernel, seed, threads). Every run is checked
against the reference sort before its time is recorded.

Columns:
  kernel          kernel name
  size            number of elements
  threads         worker threads used
  seed            data seed
  time_ns         wall time of the fastest repetition
  elems_per_us    size / time in microseconds
  in_thread_pct   share of time in the per-thread phase
  out_thread_pct  share of time in the cooperative merge phase

Kernels: rvms, rvms-no-hybrid, naive-merge, bitonic-rowmerge, reference";

#[derive(Debug, Parser)]
#[command(
    name = "vmsort",
    version,
    about = "Vectorized merge sort over emulated lane registers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write seeded random 32-bit integers (raw little-endian).
    Gen {
        #[arg(long, value_parser = parse_size)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        output: PathBuf,
    },
    /// Sort a file of raw little-endian 32-bit signed integers.
    Sort {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, env = "VMSORT_THREADS", default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Time sort kernels on seeded data and write CSV.
    #[command(after_long_help = BENCH_HELP)]
    Bench {
        /// Input sizes; accepts `2^k`. Repeat or separate with commas.
        #[arg(long, value_parser = parse_size, value_delimiter = ',', default_value = "2^20")]
        size: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "rvms")]
        kernel: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        seed: Vec<u64>,
        #[arg(long, env = "VMSORT_THREADS", value_delimiter = ',', default_value = "1")]
        threads: Vec<usize>,
        /// Repetitions per row; the fastest is reported.
        #[arg(long, default_value_t = 1)]
        reps: usize,
        /// Output file; standard output if absent.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Zero-one check of the built-in networks, or of one dumped network.
    Verify {
        /// Network in dump format.
        #[arg(long)]
        network: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "merger")]
        mode: Mode,
        /// Length of the first run in merger mode (default: half).
        #[arg(long)]
        split: Option<usize>,
    },
    /// Print a network's stages and cost.
    Dump {
        /// oddevenN, bitonicN, sorter16, asym-v1 or asym-v2.
        name: String,
        /// Lane width (same as --lane-width).
        #[arg(conflicts_with = "lane_width")]
        lanes: Option<usize>,
        #[arg(long)]
        lane_width: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Sorter,
    Merger,
}

#[derive(Clone, Debug, Args)]
pub struct PipelineArgs {
    #[arg(long, default_value = "v1", value_parser = parse_variant)]
    pub variant: AsymVariant,
    #[arg(long, value_parser = parse_size, default_value_t = DEFAULT_CACHE_BLOCK)]
    pub block_size: usize,
    #[arg(long, default_value_t = 4)]
    pub lane_width: usize,
}

impl PipelineArgs {
    pub fn config(&self, threads: usize) -> SortConfig {
        SortConfig {
            variant: self.variant,
            block_size: self.block_size,
            lane_width: self.lane_width,
            threads,
            ..Default::default()
        }
    }
}

/// Parses a decimal count or `2^k`.
pub fn parse_size(s: &str) -> Result<usize, String> {
    let bad = || format!("invalid size `{s}`");
    match s.split_once('^') {
        Some(("2", k)) => {
            let k: u32 = k.parse().map_err(|_| bad())?;
            1usize.checked_shl(k).filter(|_| k < usize::BITS).ok_or_else(bad)
        }
        Some(_) => Err(bad()),
        None => s.parse().map_err(|_| bad()),
    }
}

fn parse_variant(s: &str) -> Result<AsymVariant, String> {
    AsymVariant::from_name(s).ok_or_else(|| format!("unknown variant `{s}` (expected v1, v2 or v3)"))
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Gen { size, seed, output } => cmd_gen(size, seed, &output, err),
        Command::Sort {
            input,
            output,
            threads,
            pipeline,
        } => cmd_sort(&input, &output, &pipeline.config(threads), err),
        Command::Bench {
            size,
            kernel,
            seed,
            threads,
            reps,
            csv,
            pipeline,
        } => cmd_bench(
            &size,
            &kernel,
            &seed,
            &threads,
            reps,
            csv.as_deref(),
            &pipeline,
            out,
            err,
        ),
        Command::Verify { network, mode, split } => cmd_verify(network.as_deref(), mode, split, out, err),
        Command::Dump {
            name,
            lanes,
            lane_width,
        } => cmd_dump(&name, lanes.or(lane_width).unwrap_or(4), out, err),
    }
}

pub fn encode(data: &[Element]) -> Vec<u8> {
    data.iter().flat_map(|x| x.to_le_bytes()).collect()
}

pub fn decode(bytes: &[u8]) -> Option<Vec<Element>> {
    if !bytes.len().is_multiple_of(4) {
        return None;
    }
    Some(
        bytes
            .chunks_exact(4)
            .map(|c| Element::from_le_bytes(c.try_into().expect("chunk of 4")))
            .collect(),
    )
}

pub fn cmd_gen(size: usize, seed: u64, output: &Path, err: &mut dyn Write) -> i32 {
    match fs::write(output, encode(&gen_data(size, seed))) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: cannot write {}: {e}", output.display());
            EXIT_WRITE
        }
    }
}

pub fn cmd_sort(input: &Path, output: &Path, cfg: &SortConfig, err: &mut dyn Write) -> i32 {
    let bytes = match fs::read(input) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", input.display());
            return EXIT_INPUT;
        }
    };
    let Some(mut data) = decode(&bytes) else {
        let _ = writeln!(
            err,
            "error: {} has {} bytes, not a whole number of 32-bit integers",
            input.display(),
            bytes.len()
        );
        return EXIT_INPUT;
    };
    if let Err(e) = sort_with(&mut data, cfg) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_INPUT;
    }
    match fs::write(output, encode(&data)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: cannot write {}: {e}", output.display());
            EXIT_WRITE
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_bench(
    sizes: &[usize],
    kernels: &[String],
    seeds: &[u64],
    threads: &[usize],
    reps: usize,
    csv: Option<&Path>,
    pipeline: &PipelineArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let mut ks = Vec::new();
    for name in kernels {
        match Kernel::from_name(name) {
            Some(k) => ks.push(k),
            None => {
                let names: Vec<&str> = Kernel::ALL.iter().map(|k| k.name()).collect();
                let _ = writeln!(
                    err,
                    "error: unknown kernel `{name}` (expected one of {})",
                    names.join(", ")
                );
                return EXIT_INPUT;
            }
        }
    }
    if let Some(&s) = sizes.iter().find(|&&s| s == 0) {
        let _ = writeln!(err, "error: size must be positive, got {s}");
        return EXIT_INPUT;
    }
    let mut rows = vec![CSV_HEADER.to_string()];
    for &size in sizes {
        for &k in &ks {
            for &seed in seeds {
                for &t in threads {
                    match bench_one(k, size, seed, &pipeline.config(t), reps) {
                        Ok(r) => rows.push(r.csv_row()),
                        Err(e @ BenchError::Config(_)) => {
                            let _ = writeln!(err, "error: {e}");
                            return EXIT_INPUT;
                        }
                        Err(e @ BenchError::Mismatch { .. }) => {
                            let _ = writeln!(err, "error: {e}");
                            return EXIT_FAILED;
                        }
                    }
                }
            }
        }
    }
    let text = rows.join("\n") + "\n";
    let written = match csv {
        Some(p) => fs::write(p, text).map_err(|e| (p.display().to_string(), e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| ("standard output".to_string(), e)),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err((what, e)) => {
            let _ = writeln!(err, "error: cannot write {what}: {e}");
            EXIT_WRITE
        }
    }
}

/// One row of the verification table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub mode: &'static str,
    pub passed: bool,
}

/// The built-in network suite: the 16-input sorter, both merge families at
/// widths 4 to 64, and the three 8+24 merges.
pub fn builtin_checks() -> Vec<Check> {
    let mut checks = Vec::new();
    let mut add = |name: String, mode: &'static str, passed: bool| checks.push(Check { name, mode, passed });
    let sorter = gen_column_sorter(16).expect("16-input sorter");
    add(
        "sorter16".into(),
        "sorter",
        verify_network(&sorter, VerifyMode::Sorter).unwrap_or(false),
    );
    for family in [MergeFamily::OddEven, MergeFamily::Bitonic] {
        for n in [4, 8, 16, 32, 64] {
            let net = family.generate(n).expect("power-of-two width");
            let name = match family {
                MergeFamily::OddEven => format!("oddeven{n}"),
                MergeFamily::Bitonic => format!("bitonic{n}"),
            };
            add(
                name,
                "merger",
                verify_network(&net, VerifyMode::Merger).unwrap_or(false),
            );
        }
    }
    for v in AsymVariant::ALL {
        let name = format!("asym-{}", v.name());
        let passed = match gen_asym_merge(v) {
            Ok(net) => verify_network(&net, VerifyMode::MergerSplit(8)).unwrap_or(false) && verify_asym(v),
            Err(_) => verify_asym(v),
        };
        add(name, "merger 8+24", passed);
    }
    checks
}

pub fn cmd_verify(
    network: Option<&Path>,
    mode: Mode,
    split: Option<usize>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let checks = match network {
        None => builtin_checks(),
        Some(path) => {
            let net: ComparatorNetwork = match fs::read_to_string(path)
                .map_err(|e| e.to_string())
                .and_then(|s| s.parse().map_err(|e: vmsort::Error| e.to_string()))
            {
                Ok(n) => n,
                Err(e) => {
                    let _ = writeln!(err, "error: cannot load {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            };
            let (vm, label) = match (mode, split) {
                (Mode::Sorter, _) => (VerifyMode::Sorter, "sorter"),
                (Mode::Merger, None) => (VerifyMode::Merger, "merger"),
                (Mode::Merger, Some(k)) => (VerifyMode::MergerSplit(k), "merger split"),
            };
            match verify_network(&net, vm) {
                Ok(passed) => vec![Check {
                    name: path.display().to_string(),
                    mode: label,
                    passed,
                }],
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_INPUT;
                }
            }
        }
    };
    let mut failed = 0;
    for c in &checks {
        failed += !c.passed as usize;
        let _ = writeln!(
            out,
            "{:<4}  {:<12}  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.mode,
            c.name
        );
    }
    let _ = writeln!(out, "{} checked, {} failed", checks.len(), failed);
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

pub fn cmd_dump(name: &str, lanes: usize, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if lanes == 0 || !lanes.is_power_of_two() {
        let _ = writeln!(err, "error: lane width must be a power of two, got {lanes}");
        return EXIT_INPUT;
    }
    let net = match by_name(name).and_then(|n| n.with_lanes(lanes)) {
        Ok(n) => n,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let _ = write!(out, "{net}");
    let _ = writeln!(out, "# {}", cost_report(&net, lanes));
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io;

    #[test]
    fn sizes() {
        assert_eq!(parse_size("4096"), Ok(4096));
        assert_eq!(parse_size("2^12"), Ok(4096));
        assert!(parse_size("3^2").is_err());
        assert!(parse_size("2^99").is_err());
        assert!(parse_size("x").is_err());
    }

    #[test]
    fn codec() {
        let v = vec![0, -1, i32::MIN, i32::MAX, 7];
        assert_eq!(decode(&encode(&v)).unwrap(), v);
        assert_eq!(encode(&[1]), [1, 0, 0, 0]);
        assert!(decode(&[0; 5]).is_none());
    }

    #[test]
    fn builtin_suite_passes() {
        let checks = builtin_checks();
        assert_eq!(checks.len(), 1 + 10 + 3);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn dump_reports_cost() {
        let mut out = Vec::new();
        assert_eq!(cmd_dump("oddeven16", 4, &mut out, &mut io::sink()), EXIT_OK);
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("intra_exchanges=4"), "{text}");
        assert_eq!(cmd_dump("quick8", 4, &mut Vec::new(), &mut io::sink()), EXIT_INPUT);
    }
}
