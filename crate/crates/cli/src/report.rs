//! Reports: one content tree, rendered either as indented text or as JSON.
//! Both renderings walk the same tree in the same order, and rationals are
//! always written as `p/q` strings.

use std::fmt::Write as _;

use catmeas_core::finban::IsoWitness;
use catmeas_core::linalg::Matrix;
use catmeas_core::rational::{format_rational, Rational};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Text(String),
    Int(usize),
    Bool(bool),
    Rational(Rational),
    Vector(Vec<Rational>),
    Matrix(Matrix),
    /// Both directions of an isomorphism.
    Witness { forward: Matrix, backward: Matrix, isometric: bool },
    List(Vec<Node>),
    Map(Vec<(String, Node)>),
}

impl Node {
    pub fn text(s: impl Into<String>) -> Node {
        Node::Text(s.into())
    }

    pub fn names<S: AsRef<str>>(names: &[S]) -> Node {
        Node::List(names.iter().map(|s| Node::text(s.as_ref())).collect())
    }

    pub fn witness(w: &IsoWitness) -> Node {
        Node::Witness {
            forward: w.forward().matrix().clone(),
            backward: w.backward().matrix().clone(),
            isometric: w.is_isometric().unwrap_or(false),
        }
    }

    fn to_json(&self) -> Value {
        let mat = |m: &Matrix| Value::Array(m.to_rows().iter().map(|r| vec_json(r)).collect());
        match self {
            Node::Text(s) => Value::String(s.clone()),
            Node::Int(n) => json!(n),
            Node::Bool(b) => json!(b),
            Node::Rational(r) => Value::String(format_rational(r)),
            Node::Vector(v) => vec_json(v),
            Node::Matrix(m) => mat(m),
            Node::Witness { forward, backward, isometric } => {
                json!({ "forward": mat(forward), "backward": mat(backward), "isometric": isometric })
            }
            Node::List(items) => Value::Array(items.iter().map(Node::to_json).collect()),
            Node::Map(entries) => Value::Object(entries.iter().map(|(k, v)| (k.clone(), v.to_json())).collect()),
        }
    }

    fn write_text(&self, out: &mut String, indent: usize) {
        let pad = "  ".repeat(indent);
        match self {
            Node::Map(entries) => {
                for (k, v) in entries {
                    if v.is_inline() {
                        let _ = writeln!(out, "{pad}{k}: {}", v.inline());
                    } else {
                        let _ = writeln!(out, "{pad}{k}:");
                        v.write_text(out, indent + 1);
                    }
                }
            }
            Node::List(items) => {
                for item in items {
                    if item.is_inline() {
                        let _ = writeln!(out, "{pad}- {}", item.inline());
                    } else {
                        let _ = writeln!(out, "{pad}-");
                        item.write_text(out, indent + 1);
                    }
                }
            }
            Node::Matrix(m) => write_matrix(out, &pad, m),
            Node::Witness { forward, backward, isometric } => {
                let _ = writeln!(out, "{pad}isometric: {isometric}");
                let _ = writeln!(out, "{pad}forward:");
                write_matrix(out, &format!("{pad}  "), forward);
                let _ = writeln!(out, "{pad}backward:");
                write_matrix(out, &format!("{pad}  "), backward);
            }
            other => {
                let _ = writeln!(out, "{pad}{}", other.inline());
            }
        }
    }

    fn is_inline(&self) -> bool {
        match self {
            Node::Text(_) | Node::Int(_) | Node::Bool(_) | Node::Rational(_) | Node::Vector(_) => true,
            Node::List(items) => items.iter().all(|i| matches!(i, Node::Text(_) | Node::Int(_) | Node::Rational(_))),
            _ => false,
        }
    }

    fn inline(&self) -> String {
        match self {
            Node::Text(s) => s.clone(),
            Node::Int(n) => n.to_string(),
            Node::Bool(b) => b.to_string(),
            Node::Rational(r) => format_rational(r),
            Node::Vector(v) => format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(", ")),
            Node::List(items) => format!("[{}]", items.iter().map(Node::inline).collect::<Vec<_>>().join(", ")),
            _ => String::new(),
        }
    }
}

fn vec_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_rational(x))).collect())
}

fn write_matrix(out: &mut String, pad: &str, m: &Matrix) {
    if m.rows() == 0 || m.cols() == 0 {
        let _ = writeln!(out, "{pad}({}x{} empty)", m.rows(), m.cols());
        return;
    }
    let cells: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(format_rational).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    for row in cells {
        let body: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{pad}[{}]", body.join(" "));
    }
}

/// A pass/fail verdict. A failing partition check names the partition.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
    pub partition: Option<Vec<Vec<String>>>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), passed, detail: None, partition: None }
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), json!(self.name));
        m.insert("passed".into(), json!(self.passed));
        if let Some(d) = &self.detail {
            m.insert("detail".into(), json!(d));
        }
        if let Some(p) = &self.partition {
            m.insert("partition".into(), json!(p));
        }
        Value::Object(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub model: String,
    pub seed: u64,
    pub exhaustive: bool,
    pub element: Option<String>,
    pub results: Vec<(String, Node)>,
    pub checks: Vec<Check>,
    pub elapsed_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str, model: &str, seed: u64, exhaustive: bool, element: Option<&str>) -> Self {
        Report {
            command: command.to_string(),
            model: model.to_string(),
            seed,
            exhaustive,
            element: element.map(str::to_string),
            results: Vec::new(),
            checks: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn result(&mut self, key: impl Into<String>, node: Node) {
        self.results.push((key.into(), node));
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    fn echo(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), json!(self.command));
        m.insert("model".into(), json!(self.model));
        m.insert("seed".into(), json!(self.seed));
        m.insert("exhaustive".into(), json!(self.exhaustive));
        if let Some(e) = &self.element {
            m.insert("element".into(), json!(e));
        }
        Value::Object(m)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), self.echo());
        m.insert("results".into(), Node::Map(self.results.clone()).to_json());
        m.insert("checks".into(), Value::Array(self.checks.iter().map(Check::to_json).collect()));
        m.insert(
            "summary".into(),
            json!({ "checks": self.checks.len(), "failed": self.failures(), "passed": self.passed() }),
        );
        if let Some(ms) = self.elapsed_ms {
            m.insert("timing".into(), json!({ "elapsed_ms": ms as u64 }));
        }
        Value::Object(m)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("values are plain JSON");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "command: {}\nmodel: {}\nseed: {}\nexhaustive: {}\n", self.command, self.model, self.seed, self.exhaustive);
        if let Some(e) = &self.element {
            let _ = writeln!(out, "element: {e}");
        }
        if !self.results.is_empty() {
            out.push_str("results:\n");
            Node::Map(self.results.clone()).write_text(&mut out, 1);
        }
        if !self.checks.is_empty() {
            out.push_str("checks:\n");
            for c in &self.checks {
                let _ = write!(out, "  [{}] {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
                if let Some(d) = &c.detail {
                    let _ = write!(out, ": {d}");
                }
                out.push('\n');
                if let Some(p) = &c.partition {
                    let blocks: Vec<String> = p.iter().map(|b| format!("{{{}}}", b.join(","))).collect();
                    let _ = writeln!(out, "      partition: {}", blocks.join(" "));
                }
            }
        }
        let _ = writeln!(out, "summary: {} checks, {} failed", self.checks.len(), self.failures());
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "elapsed: {ms} ms");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use catmeas_core::rational::{frac, int};

    fn sample() -> Report {
        let mut r = Report::new("variation", "m.json", 7, false, Some("a | b"));
        r.result("value", Node::Rational(frac(1, 3)));
        r.result("projection", Node::Matrix(Matrix::diagonal(&[int(1), int(0)])));
        let mut c = Check::new("cosheaf C", false).detail("partition map is not isometric");
        c.partition = Some(vec![vec!["a".into()], vec!["b".into()]]);
        r.check(c);
        r
    }

    #[test]
    fn structured_output_has_no_floats() {
        let s = sample().render(Format::Structured);
        assert!(s.contains("\"1/3\""));
        let v: Value = serde_json::from_str(&s).unwrap();
        fn no_floats(v: &Value) -> bool {
            match v {
                Value::Number(n) => n.is_u64() || n.is_i64(),
                Value::Array(a) => a.iter().all(no_floats),
                Value::Object(m) => m.values().all(no_floats),
                _ => true,
            }
        }
        assert!(no_floats(&v));
        assert_eq!(v["checks"][0]["partition"], json!([["a"], ["b"]]));
        assert_eq!(v["summary"]["passed"], json!(false));
    }

    #[test]
    fn renderings_agree_on_content() {
        let r = sample();
        let text = r.render(Format::Text);
        assert!(text.contains("value: 1/3"));
        assert!(text.contains("[FAIL] cosheaf C"));
        assert!(text.contains("partition: {a} {b}"));
        assert!(text.contains("[1 0]"));
    }

    #[test]
    fn witness_keeps_both_matrices() {
        let w = Node::Witness { forward: Matrix::identity(1), backward: Matrix::identity(1), isometric: true };
        let v = w.to_json();
        assert_eq!(v["forward"], json!([["1"]]));
        assert_eq!(v["backward"], json!([["1"]]));
    }
}
