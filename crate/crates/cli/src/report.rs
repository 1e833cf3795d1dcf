use std::fmt::Write as _;

use serde_json::{json, Value};

/// One named identity or property checked during a run.
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
    pub residual: Option<Value>,
}

pub enum Artifact {
    Text(String),
    Json(Value),
    None,
}

pub struct Report {
    pub title: String,
    pub checks: Vec<CheckLine>,
    pub notes: Vec<String>,
    pub artifact: Artifact,
    /// Overall verdict; `false` maps to exit status 1.
    pub verdict: bool,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checks: Vec::new(), notes: Vec::new(), artifact: Artifact::None, verdict: true }
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.checks.push(CheckLine { name: name.into(), passed: true, detail: None, residual: None });
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>, residual: Option<Value>) {
        self.checks.push(CheckLine { name: name.into(), passed: false, detail: Some(detail.into()), residual });
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, "sides differ", None);
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render_text(&self, include_artifact: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.title);
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            match &c.detail {
                Some(d) => {
                    let _ = writeln!(out, "[{mark}] {} ({d})", c.name);
                }
                None => {
                    let _ = writeln!(out, "[{mark}] {} (residual 0)", c.name);
                }
            }
            if let Some(r) = &c.residual {
                let _ = writeln!(out, "       residual: {r}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        let _ = writeln!(out, "# verdict: {}", if self.verdict { "true" } else { "false" });
        if include_artifact {
            match &self.artifact {
                Artifact::Text(s) => out.push_str(s),
                Artifact::Json(v) => {
                    out.push_str(&serde_json::to_string_pretty(v).unwrap_or_default());
                    out.push('\n');
                }
                Artifact::None => {}
            }
        }
        out
    }

    pub fn render_json(&self, include_artifact: bool) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut v = json!({"name": c.name, "passed": c.passed});
                if let Some(d) = &c.detail {
                    v["detail"] = json!(d);
                }
                if let Some(r) = &c.residual {
                    v["residual"] = r.clone();
                }
                v
            })
            .collect();
        let mut v = json!({"title": self.title, "verdict": self.verdict, "checks": checks, "notes": self.notes});
        if include_artifact {
            match &self.artifact {
                Artifact::Text(s) => v["result"] = json!(s),
                Artifact::Json(a) => v["result"] = a.clone(),
                Artifact::None => {}
            }
        }
        v
    }

    /// The artifact alone, as written to an output file.
    pub fn artifact_text(&self) -> Option<String> {
        match &self.artifact {
            Artifact::Text(s) => Some(s.clone()),
            Artifact::Json(v) => Some(serde_json::to_string_pretty(v).unwrap_or_default() + "\n"),
            Artifact::None => None,
        }
    }
}
