//! Verdicts with replayable witnesses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Morphism};
use crate::factorisation::NCube;
use crate::format::{algebra_to_json, cube_to_json, morphism_to_json, AlgebraRef, CubeJson, MorphismJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

/// A serialised input that a suite can re-check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Instance {
    Object {
        object: AlgebraRef,
    },
    Morphism {
        morphism: MorphismJson,
    },
    /// `first` then `second`.
    Composable {
        first: MorphismJson,
        second: MorphismJson,
    },
    SplitSequence {
        kernel: MorphismJson,
        quotient: MorphismJson,
        section: MorphismJson,
    },
    /// A commuting square `b ∘ e = m ∘ a`.
    Square {
        e: MorphismJson,
        m: MorphismJson,
        a: MorphismJson,
        b: MorphismJson,
    },
    /// Two morphisms into the same codomain, `left` pulled back along `right`.
    Cospan {
        left: MorphismJson,
        right: MorphismJson,
    },
    Cube {
        cube: CubeJson,
    },
}

impl Instance {
    pub fn object(a: &Algebra) -> Self {
        Instance::Object { object: AlgebraRef::Inline(Box::new(algebra_to_json(a))) }
    }

    pub fn morphism(f: &Morphism) -> Self {
        Instance::Morphism { morphism: morphism_to_json(f) }
    }

    pub fn composable(f: &Morphism, g: &Morphism) -> Self {
        Instance::Composable { first: morphism_to_json(f), second: morphism_to_json(g) }
    }

    pub fn split_sequence(k: &Morphism, f: &Morphism, s: &Morphism) -> Self {
        Instance::SplitSequence {
            kernel: morphism_to_json(k),
            quotient: morphism_to_json(f),
            section: morphism_to_json(s),
        }
    }

    pub fn square(e: &Morphism, m: &Morphism, a: &Morphism, b: &Morphism) -> Self {
        Instance::Square {
            e: morphism_to_json(e),
            m: morphism_to_json(m),
            a: morphism_to_json(a),
            b: morphism_to_json(b),
        }
    }

    pub fn cospan(left: &Morphism, right: &Morphism) -> Self {
        Instance::Cospan { left: morphism_to_json(left), right: morphism_to_json(right) }
    }

    pub fn cube(c: &NCube) -> Self {
        Instance::Cube { cube: cube_to_json(c) }
    }

    /// Name of the algebra an object witness carries, if it has one.
    pub fn object_name(&self) -> Option<String> {
        match self {
            Instance::Object { object: AlgebraRef::Inline(j) } => j.name.clone(),
            Instance::Object { object: AlgebraRef::Spec(s) } => Some(s.clone()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub note: String,
    pub instance: Instance,
}

impl Witness {
    pub fn new(note: impl Into<String>, instance: Instance) -> Self {
        Witness { note: note.into(), instance }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub suite: String,
    pub reflector: String,
    pub corpus: String,
    pub seed: u64,
    pub verdict: Verdict,
    /// Always `corpus-restricted`: a pass is never a proof.
    pub scope: String,
    pub sample_size: usize,
    pub summary: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub witnesses: Vec<Witness>,
    /// Instances worth showing on a pass, e.g. both sides of an
    /// equivalence failing together.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub illustrations: Vec<Witness>,
}

impl Report {
    pub fn new(suite: &str, reflector: impl fmt::Display, corpus: &str, seed: u64) -> Self {
        Report {
            suite: suite.into(),
            reflector: reflector.to_string(),
            corpus: corpus.into(),
            seed,
            verdict: Verdict::Pass,
            scope: "corpus-restricted".into(),
            sample_size: 0,
            summary: String::new(),
            notes: Vec::new(),
            witnesses: Vec::new(),
            illustrations: Vec::new(),
        }
    }

    /// Sets the verdict from the collected witnesses.
    pub fn finish(mut self, sample_size: usize, witnesses: Vec<Witness>) -> Self {
        self.sample_size = sample_size;
        self.verdict = if witnesses.is_empty() { Verdict::Pass } else { Verdict::Fail };
        self.summary = match self.verdict {
            Verdict::Pass => format!("no counterexample in {sample_size} instances"),
            Verdict::Fail => format!("{} counterexample(s) in {sample_size} instances", witnesses.len()),
        };
        self.witnesses = witnesses;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn first_witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{} on {}]: {} ({}, {})",
            self.suite, self.reflector, self.corpus, self.verdict, self.summary, self.scope
        )?;
        for w in &self.witnesses {
            write!(f, "\n  witness: {}", w.note)?;
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}
