//! Machine-checked inequality chains.
//!
//! A [`ProofTranscript`] is an ordered list of named steps, each comparing a
//! left-hand value against a right-hand value under `<`, `≤` or `=`. Every
//! step stores its operands, so a reader (or a test) can recompute it from
//! the recorded numbers alone; `overall` is the conjunction of step passes.
//! Transcripts serialize to CSV and to a human-readable report.

use std::fmt;

/// Comparison relation of a transcript step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Less,
    LessEq,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Less => write!(f, "<"),
            Relation::LessEq => write!(f, "<="),
            Relation::Eq => write!(f, "="),
        }
    }
}

/// One checked comparison.
///
/// For `<` and `≤` the residual is the margin rhs − lhs (positive when the
/// step passes with room); for `=` it is |lhs − rhs|, compared against the
/// tolerance given at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub residual: f64,
    pub pass: bool,
}

impl Step {
    pub fn strict_less(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Step {
            name: name.into(),
            lhs,
            rhs,
            relation: Relation::Less,
            residual: rhs - lhs,
            pass: lhs < rhs,
        }
    }

    pub fn less_eq(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Step {
            name: name.into(),
            lhs,
            rhs,
            relation: Relation::LessEq,
            residual: rhs - lhs,
            pass: lhs <= rhs,
        }
    }

    pub fn equal(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let residual = (lhs - rhs).abs();
        Step {
            name: name.into(),
            lhs,
            rhs,
            relation: Relation::Eq,
            residual,
            pass: residual <= tol,
        }
    }

    /// Equality checked on the relative residual |lhs/rhs − 1|; falls back to
    /// the absolute residual when rhs is tiny.
    pub fn equal_rel(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let residual = if rhs.abs() > 1e-30 {
            (lhs / rhs - 1.0).abs()
        } else {
            (lhs - rhs).abs()
        };
        Step {
            name: name.into(),
            lhs,
            rhs,
            relation: Relation::Eq,
            residual,
            pass: residual <= tol,
        }
    }
}

/// Ordered list of checked steps; `overall()` is the conjunction.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProofTranscript {
    steps: Vec<Step>,
}

impl ProofTranscript {
    pub fn new() -> Self {
        ProofTranscript { steps: Vec::new() }
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn overall(&self) -> bool {
        self.steps.iter().all(|s| s.pass)
    }

    /// First failing step, if any.
    pub fn first_failure(&self) -> Option<&Step> {
        self.steps.iter().find(|s| !s.pass)
    }

    pub fn step(&self, name: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.name == name)
    }

    /// CSV with the fixed header `step,lhs,rhs,relation,residual,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,lhs,rhs,relation,residual,pass\n");
        for s in &self.steps {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.name, s.lhs, s.rhs, s.relation, s.residual, s.pass
            ));
        }
        out
    }
}

impl fmt::Display for ProofTranscript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.steps.iter().map(|s| s.name.len()).max().unwrap_or(4);
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "{:>2}. {:<width$}  {:>18.12} {} {:<18.12}  residual {:>12.3e}  [{}]",
                i + 1,
                s.name,
                s.lhs,
                s.relation,
                s.rhs,
                s.residual,
                if s.pass { "pass" } else { "FAIL" },
                width = width,
            )?;
        }
        write!(
            f,
            "overall: {}",
            if self.overall() { "pass" } else { "FAIL" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_is_conjunction() {
        let mut t = ProofTranscript::new();
        t.push(Step::strict_less("a < b", 1.0, 2.0));
        assert!(t.overall());
        t.push(Step::strict_less("b < a", 2.0, 1.0));
        assert!(!t.overall());
        assert_eq!(t.first_failure().unwrap().name, "b < a");
    }

    #[test]
    fn steps_reproducible_from_operands() {
        let s = Step::strict_less("x", 1.5, 2.5);
        assert_eq!(s.pass, s.lhs < s.rhs);
        assert!((s.residual - (s.rhs - s.lhs)).abs() < 1e-15);
        let e = Step::equal("y", 1.0, 1.0 + 1e-12, 1e-10);
        assert!(e.pass && (e.residual - 1e-12).abs() < 1e-15);
    }

    #[test]
    fn csv_has_fixed_header() {
        let mut t = ProofTranscript::new();
        t.push(Step::equal("id", 1.0, 1.0, 1e-10));
        let csv = t.to_csv();
        assert!(csv.starts_with("step,lhs,rhs,relation,residual,pass\n"));
        assert_eq!(csv.lines().count(), 2);
    }
}
