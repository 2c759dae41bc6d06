//! Machine-readable outcome of one verification suite.

use serde::{Deserialize, Serialize};

/// One identity check: measured residual against its tolerance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub identity: String,
    pub inputs: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(
        identity: impl Into<String>,
        inputs: impl Into<String>,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Check {
            identity: identity.into(),
            inputs: inputs.into(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
        }
    }

    /// A check that could not even be evaluated.
    pub fn failed_to_run(identity: impl Into<String>, inputs: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Check {
            identity: identity.into(),
            inputs: format!("{} [error: {err}]", inputs.into()),
            residual: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
        }
    }
}

/// Suite outcome: conjunction of the individual checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl VerdictReport {
    pub fn new(suite: impl Into<String>, checks: Vec<Check>) -> Self {
        let overall = checks.iter().all(|c| c.pass);
        VerdictReport {
            suite: suite.into(),
            checks,
            overall,
        }
    }

    pub fn merged(suites: Vec<VerdictReport>) -> Self {
        let mut checks = Vec::new();
        for s in suites {
            for mut c in s.checks {
                c.identity = format!("{}::{}", s.suite, c.identity);
                checks.push(c);
            }
        }
        VerdictReport::new("all", checks)
    }

    /// One human-readable line per check plus a suite summary.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {} ({}): residual={:.3e} tol={:.3e}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.identity,
                c.inputs,
                c.residual,
                c.tolerance
            ));
        }
        out.push_str(&format!(
            "suite {}: {} ({}/{} checks)\n",
            self.suite,
            if self.overall { "PASS" } else { "FAIL" },
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_is_conjunction() {
        let good = Check::new("a", "x", 1e-12, 1e-10);
        let bad = Check::new("b", "y", 1e-3, 1e-10);
        assert!(good.pass);
        assert!(!bad.pass);
        let report = VerdictReport::new("demo", vec![good.clone(), bad]);
        assert!(!report.overall);
        let report = VerdictReport::new("demo", vec![good]);
        assert!(report.overall);
    }

    #[test]
    fn infinite_residual_fails() {
        let c = Check::failed_to_run("a", "x", "boom");
        assert!(!c.pass);
    }

    #[test]
    fn text_rendering_has_one_line_per_check() {
        let report = VerdictReport::new(
            "demo",
            vec![
                Check::new("first", "r=1", 0.0, 1e-10),
                Check::new("second", "r=2", 1.0, 1e-10),
            ],
        );
        let text = report.render_text();
        assert_eq!(text.lines().count(), 3);
        assert!(text.contains("[PASS] first"));
        assert!(text.contains("[FAIL] second"));
        assert!(text.contains("suite demo: FAIL (1/2 checks)"));
    }
}
