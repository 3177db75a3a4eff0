use linmap::{LinMap, SpaceShape};
use serde::Serialize;

/// Outcome of one named identity or axiom.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

/// Multi-index of a flat basis position in a shape, e.g. `(1, 0, 2)`.
pub fn multi_index(shape: &SpaceShape, mut k: usize) -> String {
    let legs = shape.legs();
    if legs.is_empty() {
        return "()".into();
    }
    let mut d = vec![0; legs.len()];
    for i in (0..legs.len()).rev() {
        d[i] = k % legs[i];
        k /= legs[i];
    }
    let s: Vec<String> = d.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(", "))
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report { title: title.into(), checks: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_names(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn flag(&mut self, name: impl Into<String>, passed: bool, witness: Option<String>) {
        self.checks.push(Check { name: name.into(), passed, witness, source: None });
    }

    /// Records `lhs == rhs`; on failure the witness names the first differing
    /// input basis tensor and output coordinate.
    pub fn eq(&mut self, name: impl Into<String>, lhs: &LinMap, rhs: &LinMap) -> bool {
        let w = witness(lhs, rhs);
        let ok = w.is_none();
        self.checks.push(Check { name: name.into(), passed: ok, witness: w, source: None });
        ok
    }

    pub fn eq_src(&mut self, name: impl Into<String>, src: &str, lhs: &LinMap, rhs: &LinMap) -> bool {
        let ok = self.eq(name, lhs, rhs);
        self.checks.last_mut().unwrap().source = Some(src.to_string());
        ok
    }

    pub fn merge(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}: {}", c.name);
            self.checks.push(c);
        }
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{}\n", self.title);
        for c in &self.checks {
            s.push_str(&format!("  [{}] {}", if c.passed { "pass" } else { "FAIL" }, c.name));
            if let Some(w) = &c.witness {
                s.push_str(&format!("  ({w})"));
            }
            s.push('\n');
        }
        s
    }
}

pub fn witness(lhs: &LinMap, rhs: &LinMap) -> Option<String> {
    if lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() {
        return Some(format!("shapes differ: {}<-{} vs {}<-{}", lhs.cod(), lhs.dom(), rhs.cod(), rhs.dom()));
    }
    lhs.first_difference(rhs).map(|(i, j, a, b)| {
        format!(
            "input basis {} output {}: {} vs {}",
            multi_index(lhs.dom(), j),
            multi_index(lhs.cod(), i),
            a,
            b
        )
    })
}
