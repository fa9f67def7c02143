//! Text form of a network: one stage per line, `[inter]` or `[intra]`
//! followed by space-separated `i:j` comparators. An optional first line
//! `# width=N lanes=W` fixes the width; otherwise it is the largest index
//! plus one and the lane count is the default.

use std::fmt;
use std::str::FromStr;

use super::ComparatorNetwork;
use crate::error::Error;
use crate::lanes::DEFAULT_LANES;

impl ComparatorNetwork {
    /// Stage lines only, without the header.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for stage in self.stages() {
            out.push('[');
            out.push_str(stage.kind.label());
            out.push(']');
            for c in &stage.comparators {
                out.push_str(&format!(" {}:{}", c.i, c.j));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for ComparatorNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# width={} lanes={}", self.width(), self.lanes())?;
        f.write_str(&self.dump())
    }
}

impl FromStr for ComparatorNetwork {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut width = None;
        let mut lanes = DEFAULT_LANES;
        let mut stages = Vec::new();
        for (n, line) in s.lines().enumerate() {
            let line_no = n + 1;
            let bad = |reason: &str| Error::Parse {
                line: line_no,
                reason: reason.to_string(),
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                for kv in header.split_whitespace() {
                    match kv.split_once('=') {
                        Some(("width", v)) => width = Some(v.parse().map_err(|_| bad("bad width"))?),
                        Some(("lanes", v)) => lanes = v.parse().map_err(|_| bad("bad lanes"))?,
                        _ => {}
                    }
                }
                continue;
            }
            let rest = line
                .strip_prefix("[inter]")
                .or_else(|| line.strip_prefix("[intra]"))
                .ok_or_else(|| bad("expected [inter] or [intra]"))?;
            let stage = rest
                .split_whitespace()
                .map(|tok| {
                    let (i, j) = tok.split_once(':').ok_or_else(|| bad("expected i:j"))?;
                    Ok((
                        i.parse().map_err(|_| bad("bad index"))?,
                        j.parse().map_err(|_| bad("bad index"))?,
                    ))
                })
                .collect::<Result<Vec<(usize, usize)>, Error>>()?;
            stages.push(stage);
        }
        let width = width.unwrap_or_else(|| stages.iter().flatten().map(|&(_, j)| j + 1).max().unwrap_or(0));
        ComparatorNetwork::new(width, lanes, stages)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::networks::{gen_bitonic_merge, gen_column_sorter, gen_oddeven_merge};

    #[test]
    fn oddeven8_dump() {
        assert_eq!(
            gen_oddeven_merge(8).unwrap().dump(),
            "[inter] 0:4 1:5 2:6 3:7\n[intra] 2:4 3:5\n[intra] 1:2 3:4 5:6\n"
        );
    }

    #[test]
    fn round_trips() {
        for net in [
            gen_oddeven_merge(32).unwrap(),
            gen_bitonic_merge(16).unwrap().with_lanes(8).unwrap(),
            gen_column_sorter(16).unwrap(),
        ] {
            let parsed: ComparatorNetwork = net.to_string().parse().unwrap();
            assert_eq!(parsed, net);
        }
    }

    #[test]
    fn headerless_input_infers_width() {
        let net: ComparatorNetwork = "[inter] 0:1 2:3\n[intra] 1:2\n".parse().unwrap();
        assert_eq!(net.width(), 4);
        assert_eq!(net.comparator_count(), 3);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            "0:1".parse::<ComparatorNetwork>(),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            "[inter] 0-1".parse::<ComparatorNetwork>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            "[inter] 0:1 1:2".parse::<ComparatorNetwork>(),
            Err(Error::StageConflict { .. })
        ));
    }
}
