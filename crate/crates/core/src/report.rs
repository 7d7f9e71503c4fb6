//! Verdict rows shared by every check and their text rendering.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    /// Holds, with a caveat: a semi-decision, a misprint, a replaced row.
    PassWithNote,
    /// Undecided within the budget; not counted as a falsification.
    Unresolved,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::PassWithNote => "PASS*",
            Verdict::Unresolved => "UNRESOLVED",
            Verdict::Fail => "FAIL",
        }
    }

    pub fn is_ok(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::PassWithNote)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub id: String,
    pub kind: String,
    pub verdict: Verdict,
    pub mode: String,
    pub details: Vec<String>,
}

impl Row {
    pub fn new(id: impl Into<String>, kind: &str, verdict: Verdict, mode: &str, details: Vec<String>) -> Self {
        Row { id: id.into(), kind: kind.to_string(), verdict, mode: mode.to_string(), details }
    }

    pub fn from_bool(id: impl Into<String>, kind: &str, ok: bool, mode: &str, details: Vec<String>) -> Self {
        Row::new(id, kind, if ok { Verdict::Pass } else { Verdict::Fail }, mode, details)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub rows: Vec<Row>,
}

impl Report {
    pub fn count(&self, v: Verdict) -> usize {
        self.rows.iter().filter(|r| r.verdict == v).count()
    }

    pub fn failures(&self) -> Vec<&Row> {
        self.rows.iter().filter(|r| r.verdict == Verdict::Fail).collect()
    }

    pub fn summary(&self) -> String {
        format!(
            "{} checks: {} pass, {} pass with note, {} unresolved, {} fail",
            self.rows.len(),
            self.count(Verdict::Pass),
            self.count(Verdict::PassWithNote),
            self.count(Verdict::Unresolved),
            self.count(Verdict::Fail)
        )
    }

    /// One line per row with indented details, then the summary.
    pub fn to_text(&self, verbose: bool) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&format!("{:<10} {:<16} {:<18} {}\n", r.verdict.as_str(), r.kind, r.id, r.mode));
            if verbose || r.verdict != Verdict::Pass {
                for d in &r.details {
                    out.push_str(&format!("    {d}\n"));
                }
            }
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }
}
