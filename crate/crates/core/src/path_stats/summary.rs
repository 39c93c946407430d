use serde::{Deserialize, Serialize};

use super::{DepthProfile, Stat};

/// The three scalar variants of one statistic at size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatSummary {
    pub value_at_n: u32,
    /// Max over nodes `1..=n`.
    pub max_1_to_n: u32,
    /// Min over nodes `ceil(n/2)..=n`.
    pub min_half_to_n: u32,
}

/// Up to fifteen scalar parameters of one realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSummary {
    pub n: u64,
    pub entries: [Option<StatSummary>; 5],
}

impl ParamSummary {
    pub fn get(&self, stat: Stat) -> Option<&StatSummary> {
        self.entries[stat as usize].as_ref()
    }

    /// `min_half_to_n <= value_at_n <= max_1_to_n` for each statistic and
    /// `min_half(S) <= min_half(X)` for every other statistic present.
    pub fn is_consistent(&self) -> bool {
        let ordered = self
            .entries
            .iter()
            .flatten()
            .all(|e| e.min_half_to_n <= e.value_at_n && e.value_at_n <= e.max_1_to_n);
        let s_floor = match self.get(Stat::S) {
            Some(s) => self
                .entries
                .iter()
                .flatten()
                .all(|e| s.min_half_to_n <= e.min_half_to_n && s.value_at_n <= e.value_at_n),
            None => true,
        };
        ordered && s_floor
    }
}

/// First node of the minimal-variant window `[ceil(n/2), n]`.
pub fn half_window_start(n: u64) -> u64 {
    n.div_ceil(2)
}

pub fn summarize(profile: &DepthProfile) -> ParamSummary {
    let n = profile.n() as usize;
    let lo = half_window_start(n as u64) as usize;
    let mut entries = [None; 5];
    for stat in Stat::ALL {
        if let Some(col) = profile.get(stat) {
            // n >= 1, so both ranges are non-empty.
            entries[stat as usize] = Some(StatSummary {
                value_at_n: col[n],
                max_1_to_n: *col[1..=n].iter().max().unwrap(),
                min_half_to_n: *col[lo..=n].iter().min().unwrap(),
            });
        }
    }
    ParamSummary {
        n: n as u64,
        entries,
    }
}
