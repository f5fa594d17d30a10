use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::analysis::{FileAnalysis, Status};

/// A percentage held in hundredths, rounded half-up from an exact ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Percent {
    hundredths: u64,
}

impl Percent {
    /// `100 * part / whole` rounded half-up to two decimals; `0.00` when
    /// `whole` is zero.
    pub fn of(part: u64, whole: u64) -> Self {
        if whole == 0 {
            return Self { hundredths: 0 };
        }
        // round(10_000 * part / whole) with halves rounded up, in integers.
        let hundredths = (20_000 * part + whole) / (2 * whole);
        Self { hundredths }
    }

    pub fn hundredths(self) -> u64 {
        self.hundredths
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.hundredths / 100, self.hundredths % 100)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Percent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Summary {
    pub total: u64,
    pub ok: u64,
    pub warnings: u64,
    pub exceptions: u64,
    pub pct_ok: Percent,
    pub pct_warnings: Percent,
    pub pct_exceptions: Percent,
}

impl Summary {
    pub fn from_counts(ok: u64, warnings: u64, exceptions: u64) -> Self {
        let total = ok + warnings + exceptions;
        Self {
            total,
            ok,
            warnings,
            exceptions,
            pct_ok: Percent::of(ok, total),
            pct_warnings: Percent::of(warnings, total),
            pct_exceptions: Percent::of(exceptions, total),
        }
    }
}

pub fn summarize(analyses: &[FileAnalysis]) -> Summary {
    let count = |s: Status| analyses.iter().filter(|a| a.status == s).count() as u64;
    Summary::from_counts(
        count(Status::Ok),
        count(Status::Warning),
        count(Status::Exception),
    )
}

pub fn render_summary(s: &Summary) -> String {
    format!(
        "total files: {}\nparsed ok: {} ({}%)\nwarnings: {} ({}%)\nexceptions: {} ({}%)\n",
        s.total, s.ok, s.pct_ok, s.warnings, s.pct_warnings, s.exceptions, s.pct_exceptions
    )
}

/// Before/after comparison of two corpus summaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Comparison {
    pub before: Summary,
    pub after: Summary,
    /// Negative when the second corpus has more failing files.
    pub fixed_count: i64,
    /// `None` when the first corpus had no exceptions.
    pub fix_rate: Option<Percent>,
}

impl Comparison {
    pub fn render(&self) -> String {
        let rate = match self.fix_rate {
            Some(p) => format!("{p}%"),
            None => String::from("n/a"),
        };
        format!("fixed: {}\nfix rate: {}\n", self.fixed_count, rate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("cannot compare corpora of different sizes ({before} files before, {after} after)")]
pub struct TotalMismatch {
    pub before: u64,
    pub after: u64,
}

pub fn compare_summaries(before: &Summary, after: &Summary) -> Result<Comparison, TotalMismatch> {
    if before.total != after.total {
        return Err(TotalMismatch {
            before: before.total,
            after: after.total,
        });
    }
    let fixed_count = before.exceptions as i64 - after.exceptions as i64;
    let fix_rate = (before.exceptions > 0 && fixed_count >= 0)
        .then(|| Percent::of(fixed_count as u64, before.exceptions));
    Ok(Comparison {
        before: *before,
        after: *after,
        fixed_count,
        fix_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn published_percentages() {
        assert_eq!(Percent::of(185, 1479).to_string(), "12.51");
        assert_eq!(Percent::of(0, 1479).to_string(), "0.00");
        assert_eq!(Percent::of(25, 1479).to_string(), "1.69");
        assert_eq!(Percent::of(160, 185).to_string(), "86.49");
    }

    #[test]
    fn half_rounds_up() {
        // 1/8 = 12.5% exactly; 1/800 = 0.125% -> 0.13
        assert_eq!(Percent::of(1, 8).to_string(), "12.50");
        assert_eq!(Percent::of(1, 800).to_string(), "0.13");
        assert_eq!(Percent::of(1, 1).to_string(), "100.00");
        assert_eq!(Percent::of(3, 0).to_string(), "0.00");
    }

    #[test]
    fn render_layout() {
        let s = Summary::from_counts(1294, 0, 185);
        assert_eq!(
            render_summary(&s),
            "total files: 1479\nparsed ok: 1294 (87.49%)\nwarnings: 0 (0.00%)\nexceptions: 185 (12.51%)\n"
        );
        let empty = Summary::from_counts(0, 0, 0);
        assert!(render_summary(&empty).starts_with("total files: 0\n"));
        assert_eq!(empty.pct_exceptions.to_string(), "0.00");
        assert!(
            render_summary(&Summary::from_counts(1454, 0, 25)).contains("exceptions: 25 (1.69%)\n")
        );
    }

    #[test]
    fn comparisons() {
        let c = compare_summaries(
            &Summary::from_counts(1294, 0, 185),
            &Summary::from_counts(1454, 0, 25),
        )
        .unwrap();
        assert_eq!(c.fixed_count, 160);
        assert_eq!(c.fix_rate.unwrap().to_string(), "86.49");

        let same = Summary::from_counts(0, 0, 10);
        let c = compare_summaries(&same, &same).unwrap();
        assert_eq!(
            (c.fixed_count, c.fix_rate.unwrap().to_string()),
            (0, "0.00".to_string())
        );

        let none = Summary::from_counts(4, 0, 0);
        let c = compare_summaries(&none, &none).unwrap();
        assert_eq!(c.fix_rate, None);
        assert_eq!(c.render(), "fixed: 0\nfix rate: n/a\n");

        assert!(compare_summaries(&none, &same).is_err());
    }
}
