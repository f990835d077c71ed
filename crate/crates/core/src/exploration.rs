//! Attribute exploration as a resumable question/answer session.
//!
//! The session walks attribute sets in lectic order, restricted to sets closed
//! under the accepted implications. Whenever such a set `P` is not closed in
//! the working context, the expert is asked whether `P -> P''` holds. The
//! questions asked and accepted are exactly the Duquenne-Guigues base of the
//! final context.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{FcaError, Result};
use crate::implications::{implication_closure, next_closed, Implication, RuleJson};
use crate::io::ContextJson;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionState {
    AwaitingAnswer,
    Finished,
}

/// An expert's reply to the pending question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Accept,
    Counterexample { label: String, attributes: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub question: RuleJson,
    pub answer: Answer,
}

/// Whether an object description refutes an implication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ViolationCheck {
    pub has_premise: bool,
    pub has_conclusion: bool,
    pub violates: bool,
}

pub fn violation_check(question: &Implication, attributes: &BitSet) -> ViolationCheck {
    let has_premise = question.premise.is_subset(attributes);
    let has_conclusion = question.conclusion.is_subset(attributes);
    ViolationCheck {
        has_premise,
        has_conclusion,
        violates: has_premise && !has_conclusion,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SessionJson", try_from = "SessionJson")]
pub struct ExplorationSession {
    context: FormalContext,
    accepted: Vec<Implication>,
    /// Current lectic position; `None` once every closed set was visited.
    cursor: Option<BitSet>,
    pending: Option<Implication>,
    transcript: Vec<TranscriptEntry>,
}

impl ExplorationSession {
    /// Opens a session on the objects known so far (possibly none).
    pub fn start(context: FormalContext) -> Result<Self> {
        if context.n_attributes() == 0 {
            return Err(FcaError::Exploration("the context has no attributes".into()));
        }
        let mut s = ExplorationSession {
            cursor: Some(BitSet::empty(context.n_attributes())),
            context,
            accepted: Vec::new(),
            pending: None,
            transcript: Vec::new(),
        };
        s.settle();
        Ok(s)
    }

    pub fn context(&self) -> &FormalContext {
        &self.context
    }

    pub fn accepted(&self) -> &[Implication] {
        &self.accepted
    }

    pub fn transcript(&self) -> &[TranscriptEntry] {
        &self.transcript
    }

    pub fn cursor(&self) -> Option<&BitSet> {
        self.cursor.as_ref()
    }

    pub fn state(&self) -> SessionState {
        if self.pending.is_some() {
            SessionState::AwaitingAnswer
        } else {
            SessionState::Finished
        }
    }

    pub fn is_finished(&self) -> bool {
        self.state() == SessionState::Finished
    }

    /// The pending question, or `None` when the session is finished.
    pub fn next_question(&self) -> Option<&Implication> {
        self.pending.as_ref()
    }

    pub fn rule_json(&self, r: &Implication) -> RuleJson {
        RuleJson {
            premise: self.context.attribute_labels(&r.premise),
            conclusion: self.context.attribute_labels(&r.conclusion),
        }
    }

    /// Advances the cursor until it reaches a set that is not closed in the
    /// working context, or runs out.
    fn settle(&mut self) {
        self.pending = None;
        while let Some(p) = &self.cursor {
            let closed = self.context.close_attributes(p);
            if closed != *p {
                self.pending = Some(Implication::new(p.clone(), closed));
                return;
            }
            self.cursor = next_closed(p, |x| implication_closure(&self.accepted, x));
        }
    }

    pub fn answer(&mut self, answer: Answer) -> Result<()> {
        let question = self
            .pending
            .clone()
            .ok_or_else(|| FcaError::Exploration("the session is finished".into()))?;
        match &answer {
            Answer::Accept => {
                self.accepted.push(question.clone());
                let p = self.cursor.as_ref().expect("a pending question has a cursor");
                self.cursor = next_closed(p, |x| implication_closure(&self.accepted, x));
            }
            Answer::Counterexample { label, attributes } => {
                let attrs = self.context.attribute_set(attributes)?;
                let check = violation_check(&question, &attrs);
                if !check.violates {
                    return Err(FcaError::Exploration(format!(
                        "{label} does not violate {}: it {} the premise and {} the conclusion",
                        question.to_text(&self.context),
                        if check.has_premise { "has" } else { "lacks" },
                        if check.has_conclusion { "has" } else { "lacks" },
                    )));
                }
                if let Some(r) = self.accepted.iter().find(|r| !r.respected_by(&attrs)) {
                    return Err(FcaError::Exploration(format!(
                        "{label} violates the accepted implication {}",
                        r.to_text(&self.context)
                    )));
                }
                self.context = self.context.with_object(label, &attrs)?;
            }
        }
        self.transcript.push(TranscriptEntry {
            question: self.rule_json(&question),
            answer,
        });
        self.settle();
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        serde_json::from_value(value).map_err(|e| FcaError::Parse {
            line: 0,
            message: e.to_string(),
        })
    }
}

/// Wire format of a session.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionJson {
    pub context: ContextJson,
    pub accepted: Vec<RuleJson>,
    pub pending: Option<RuleJson>,
    pub state: SessionState,
    pub cursor: Option<Vec<String>>,
    pub transcript: Vec<TranscriptEntry>,
}

impl From<ExplorationSession> for SessionJson {
    fn from(s: ExplorationSession) -> Self {
        SessionJson {
            context: ContextJson::from(&s.context),
            accepted: s.accepted.iter().map(|r| s.rule_json(r)).collect(),
            pending: s.pending.as_ref().map(|r| s.rule_json(r)),
            state: s.state(),
            cursor: s.cursor.as_ref().map(|c| s.context.attribute_labels(c)),
            transcript: s.transcript,
        }
    }
}

impl TryFrom<SessionJson> for ExplorationSession {
    type Error = FcaError;

    fn try_from(j: SessionJson) -> Result<Self> {
        let context = FormalContext::try_from(j.context)?;
        let rule = |r: &RuleJson| -> Result<Implication> {
            Ok(Implication::new(
                context.attribute_set(&r.premise)?,
                context.attribute_set(&r.conclusion)?,
            ))
        };
        let accepted = j.accepted.iter().map(rule).collect::<Result<Vec<_>>>()?;
        if let Some(r) = accepted.iter().find(|r| context.rows().iter().any(|row| !r.respected_by(row))) {
            return Err(FcaError::Exploration(format!(
                "accepted implication {} fails in the context",
                r.to_text(&context)
            )));
        }
        let cursor = j.cursor.as_deref().map(|c| context.attribute_set(c)).transpose()?;
        let pending = j.pending.as_ref().map(rule).transpose()?;
        let mut s = ExplorationSession {
            context,
            accepted,
            cursor,
            pending: None,
            transcript: j.transcript,
        };
        s.settle();
        if s.pending != pending || s.state() != j.state {
            return Err(FcaError::Exploration("pending question does not match the cursor".into()));
        }
        Ok(s)
    }
}
