//! Verification reports: named residuals with their tolerances.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
    pub max_residual: f64,
    pub pass: bool,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report {
            suite: suite.into(),
            checks: Vec::new(),
            max_residual: 0.0,
            pass: true,
        }
    }

    /// Records a residual check; the report fails if any check fails.
    pub fn push(&mut self, name: impl Into<String>, residual: f64, tol: f64) {
        let pass = residual.is_finite() && residual <= tol;
        self.checks.push(Check {
            name: name.into(),
            residual,
            tol,
            pass,
        });
        self.max_residual = self.max_residual.max(residual);
        self.pass &= pass;
    }

    /// Records a check that already carries its verdict, for conditions that
    /// are not naturally a residual (exact structural properties).
    pub fn push_bool(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push(Check {
            name: name.into(),
            residual: if ok { 0.0 } else { f64::INFINITY },
            tol: 0.0,
            pass: ok,
        });
        if !ok {
            self.max_residual = f64::INFINITY;
        }
        self.pass &= ok;
    }

    /// Names of the failed checks, for diagnostics.
    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn absorb(&mut self, other: Report) {
        self.max_residual = self.max_residual.max(other.max_residual);
        self.pass &= other.pass;
        self.checks.extend(other.checks);
    }
}
