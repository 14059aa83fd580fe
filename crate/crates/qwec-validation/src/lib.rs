//! Pass/fail bookkeeping for the acceptance run.

use std::fmt::Write;
use std::time::Instant;

/// One sub-check inside a criterion.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    started: Instant,
}

impl Criterion {
    pub fn new(id: u8, title: &'static str) -> Self {
        Criterion { id, title, checks: Vec::new(), started: Instant::now() }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    /// Records a failure for an error that stopped the criterion early.
    pub fn fail_with(&mut self, name: impl Into<String>, err: impl std::fmt::Display) {
        self.check(name, false, format!("error: {err}"));
    }

    /// Adds a runtime bound on everything recorded so far.
    pub fn within_seconds(&mut self, limit: f64) {
        let t = self.started.elapsed().as_secs_f64();
        self.check("runtime", t < limit, format!("{t:.1} s (limit {limit} s)"));
    }

    pub fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    /// The one-line verdict followed by indented sub-check lines.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "criterion {}: {verdict} - {}", self.id, self.title);
        for c in &self.checks {
            let mark = if c.pass { "ok" } else { "FAILED" };
            let _ = writeln!(s, "    [{mark}] {}: {}", c.name, c.detail);
        }
        s
    }
}

/// Prints every criterion and returns the number that failed.
pub fn summarize(cs: &[Criterion]) -> usize {
    for c in cs {
        print!("{}", c.render());
    }
    let failed = cs.iter().filter(|c| !c.pass()).count();
    println!("acceptance: {}/{} criteria passed", cs.len() - failed, cs.len());
    failed
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_criterion_does_not_pass() {
        let mut c = Criterion::new(1, "x");
        assert!(!c.pass());
        c.check("a", true, "");
        assert!(c.pass());
        c.check("b", false, "no");
        assert!(c.render().starts_with("criterion 1: FAIL"));
    }
}
