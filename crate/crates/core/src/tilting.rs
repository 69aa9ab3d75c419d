//! Tilting status of `F^s_* O` on a quadric.
//!
//! The summands of `F^s_* O` come from the support windows at `a = 0`. Two
//! computable obstructions are checked: two consecutive spinor twists rule
//! out quasi-exceptionality (`Ext^1(S(t), S(t+1)) != 0`), and having fewer
//! than `n + 1` line bundles rules out generation, which happens exactly when
//! `n > q`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::decomposition::{support_window, Bundle};
use crate::error::{Error, Result};

/// Twists `t` with `O(t)` or `S(t)` a summand of `F^s_* O`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummandSet {
    #[serde(rename = "line")]
    pub line_twists: BTreeSet<i64>,
    #[serde(rename = "spinor")]
    pub spinor_twists: BTreeSet<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Obstruction {
    ConsecutiveSpinorTwists,
    InsufficientLineRange,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Obstruction::ConsecutiveSpinorTwists => "CONSECUTIVE_SPINOR_TWISTS",
            Obstruction::InsufficientLineRange => "INSUFFICIENT_LINE_RANGE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TiltingVerdict {
    pub n: u32,
    pub p: u64,
    pub s: u32,
    #[serde(rename = "tilting")]
    pub classified: bool,
    pub obstructions: Vec<Obstruction>,
    /// Not tilting, but neither implemented obstruction applies.
    pub unexplained: bool,
    /// Tilting with no obstruction, or not tilting with an obstruction or
    /// the `unexplained` flag.
    pub consistent: bool,
    pub summands: SummandSet,
}

fn check(n: u32, s: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::param("n", "need n >= 3"));
    }
    if s == 0 {
        return Err(Error::param("s", "need at least one Frobenius iteration"));
    }
    Ok(())
}

/// Summands of `F^s_* O`.
///
/// ```
/// use qfrob::tilting::summand_set;
///
/// let set = summand_set(4, 2, 2).unwrap();
/// assert_eq!(set.line_twists.into_iter().collect::<Vec<_>>(), [-3, -2, -1, 0]);
/// assert_eq!(set.spinor_twists.into_iter().collect::<Vec<_>>(), [-1]);
/// ```
pub fn summand_set(n: u32, p: u64, s: u32) -> Result<SummandSet> {
    check(n, s)?;
    let line = support_window(n, p, s, Bundle::O, Bundle::O)?;
    let spinor = support_window(n, p, s, Bundle::O, Bundle::S)?;
    let q = (p as i64).pow(s);
    let twists = |w: crate::decomposition::SupportWindow| -> BTreeSet<i64> {
        if w.is_empty() {
            BTreeSet::new()
        } else {
            w.twists(q, 0).collect()
        }
    };
    Ok(SummandSet {
        line_twists: twists(line),
        spinor_twists: twists(spinor),
    })
}

/// Whether `(n, p, s)` is one of the tilting cases: `s = 1` and `p > n`;
/// `s = 2`, `n = 4` and `p` is 2 or 3; `s >= 2`, `n` odd and `p >= n`.
pub fn is_tilting_classified(n: u32, p: u64, s: u32) -> bool {
    let n64 = u64::from(n);
    (s == 1 && p > n64) || (s == 2 && n == 4 && (p == 2 || p == 3)) || (s >= 2 && n % 2 == 1 && p >= n64)
}

/// Verdict with the obstructions found in the summand set.
///
/// ```
/// use qfrob::tilting::{obstruction_report, Obstruction};
///
/// let v = obstruction_report(3, 2, 2).unwrap();
/// assert!(!v.classified && v.consistent);
/// assert_eq!(v.obstructions, [Obstruction::ConsecutiveSpinorTwists]);
/// ```
pub fn obstruction_report(n: u32, p: u64, s: u32) -> Result<TiltingVerdict> {
    let summands = summand_set(n, p, s)?;
    let classified = is_tilting_classified(n, p, s);
    let mut obstructions = Vec::new();
    if summands.spinor_twists.iter().any(|t| summands.spinor_twists.contains(&(t + 1))) {
        obstructions.push(Obstruction::ConsecutiveSpinorTwists);
    }
    let q = p.checked_pow(s).unwrap_or(u64::MAX);
    if u64::from(n) > q {
        obstructions.push(Obstruction::InsufficientLineRange);
    }
    let unexplained = !classified && obstructions.is_empty();
    let consistent = if classified { obstructions.is_empty() } else { !obstructions.is_empty() || unexplained };
    Ok(TiltingVerdict {
        n,
        p,
        s,
        classified,
        obstructions,
        unexplained,
        consistent,
        summands,
    })
}
