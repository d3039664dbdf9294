//! Result and report documents.
//!
//! Struct fields are declared in alphabetical order so that serialized keys
//! come out sorted; id arrays are sorted before they are stored.

use serde::{Deserialize, Serialize};

use flipwide_core::flipwide::{FlipWideResult, FlipWideViolation, LevelTrace};
use flipwide_core::{Flip, Vertex, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipJson {
    pub a: Vec<Vertex>,
    pub b: Vec<Vertex>,
}

impl FlipJson {
    pub fn from_flip(f: &Flip) -> Self {
        Self { a: f.a.to_vec(), b: f.b.to_vec() }
    }

    pub fn to_flip(&self) -> Flip {
        Flip::new(self.a.iter().copied().collect::<VertexSet>(), self.b.iter().copied().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelJson {
    pub asymmetric_pairs: usize,
    pub flips_added: usize,
    pub parity: String,
    pub radius: usize,
    pub samples: Vec<Vertex>,
    pub surviving: Vec<Vertex>,
}

impl LevelJson {
    fn from_trace(t: &LevelTrace) -> Self {
        Self {
            asymmetric_pairs: t.asymmetric_pairs,
            flips_added: t.flips_added.len(),
            parity: t.parity.as_str().to_owned(),
            radius: t.radius,
            samples: sorted(t.samples.clone()),
            surviving: sorted(t.surviving.as_slice().to_vec()),
        }
    }
}

/// The flip-widen output document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultJson {
    pub b_set: Vec<Vertex>,
    pub flips: Vec<FlipJson>,
    pub radius: usize,
    #[serde(default)]
    pub trace: Vec<LevelJson>,
    pub verified: bool,
}

impl ResultJson {
    pub fn new(res: &FlipWideResult, radius: usize, verified: bool) -> Self {
        Self {
            b_set: sorted(res.b_set.as_slice().to_vec()),
            flips: res.flip_set.iter().map(FlipJson::from_flip).collect(),
            radius,
            trace: res.trace.iter().map(LevelJson::from_trace).collect(),
            verified,
        }
    }

    pub fn flips(&self) -> Vec<Flip> {
        self.flips.iter().map(FlipJson::to_flip).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationJson {
    Malformed { message: String },
    Pair { distance: usize, u: Vertex, v: Vertex },
}

impl ViolationJson {
    pub fn new(v: &FlipWideViolation) -> Self {
        match v {
            FlipWideViolation::Malformed(e) => Self::Malformed { message: e.to_string() },
            &FlipWideViolation::Pair { u, v, distance } => Self::Pair { distance, u, v },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub millis: f64,
    pub phase: String,
}

/// Metadata for one invocation, written with `--report`.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub exit_code: i32,
    pub graph_sha256: Option<String>,
    pub outputs: serde_json::Value,
    pub threads_hint: Option<String>,
    pub timings: Vec<Timing>,
    pub verdicts: serde_json::Map<String, serde_json::Value>,
}

pub fn sorted(mut v: Vec<Vertex>) -> Vec<Vertex> {
    v.sort_unstable();
    v
}

/// Pretty JSON with a trailing newline.
pub fn to_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted() {
        let r = ResultJson { b_set: vec![1, 4], flips: vec![FlipJson { a: vec![0], b: vec![2, 3] }], radius: 2, trace: vec![], verified: true };
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(text, r#"{"b_set":[1,4],"flips":[{"a":[0],"b":[2,3]}],"radius":2,"trace":[],"verified":true}"#);
        let back: ResultJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn flip_round_trip() {
        let f = Flip::new([3, 1].into_iter().collect(), [2].into_iter().collect());
        let j = FlipJson::from_flip(&f);
        assert_eq!(j.a, vec![1, 3]);
        assert_eq!(j.to_flip(), f);
    }
}
