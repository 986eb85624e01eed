//! Symbolic state-sum layer: cobordisms are presented as generator words
//! between colored boundary objects, the action functional folds a word into
//! a diagram, and state sums over finite field sets land in the completion.

use thiserror::Error;

use crate::diagram::{ColoredObject, Diagram};
use crate::represent::{fold_word, GeneratorWord, RepresentError, Slice};
use crate::semiring::{chi, q_sum, QElement};

#[derive(Debug, Error)]
pub enum QuantizeError {
    #[error(transparent)]
    Represent(#[from] RepresentError),
    #[error("word ends at {got} but declares out boundary {declared}")]
    OutBoundaryMismatch { got: String, declared: String },
    #[error("gluing boundary mismatch: {out} vs {in_}")]
    GluingMismatch { out: String, in_: String },
}

/// A combinatorial cobordism presentation: declared boundaries and a slice
/// sequence running between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CobordismWord {
    pub in_boundary: ColoredObject,
    pub out_boundary: ColoredObject,
    pub slices: Vec<Slice>,
}

impl CobordismWord {
    pub fn new(
        in_boundary: ColoredObject,
        out_boundary: ColoredObject,
        slices: Vec<Slice>,
    ) -> Result<Self, QuantizeError> {
        let w = CobordismWord {
            in_boundary,
            out_boundary,
            slices,
        };
        w.validate()?;
        Ok(w)
    }

    fn word(&self) -> GeneratorWord {
        GeneratorWord::new(self.in_boundary.clone(), self.slices.clone())
    }

    fn validate(&self) -> Result<(), QuantizeError> {
        let end = self.word().end()?;
        if end != self.out_boundary {
            return Err(QuantizeError::OutBoundaryMismatch {
                got: end.to_string(),
                declared: self.out_boundary.to_string(),
            });
        }
        Ok(())
    }
}

/// The action functional: the diagram a cobordism word presents. Splits
/// multiplicatively under gluing and disjoint stacking.
pub fn action(w: &CobordismWord) -> Result<Diagram, QuantizeError> {
    w.validate()?;
    Ok(fold_word(&w.word())?)
}

/// A finite, user-supplied enumeration of fields sharing one boundary
/// condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSet {
    pub boundary_condition: (ColoredObject, ColoredObject),
    pub fields: Vec<CobordismWord>,
}

impl FieldSet {
    pub fn new(
        in_boundary: ColoredObject,
        out_boundary: ColoredObject,
        fields: Vec<CobordismWord>,
    ) -> Result<Self, QuantizeError> {
        for f in &fields {
            if f.in_boundary != in_boundary || f.out_boundary != out_boundary {
                return Err(QuantizeError::GluingMismatch {
                    out: f.in_boundary.to_string(),
                    in_: in_boundary.to_string(),
                });
            }
        }
        Ok(FieldSet {
            boundary_condition: (in_boundary, out_boundary),
            fields,
        })
    }
}

/// The idempotent sum of the characteristic elements of the field actions.
pub fn state_sum(fs: &FieldSet) -> Result<QElement, QuantizeError> {
    let mut terms = Vec::with_capacity(fs.fields.len());
    for f in &fs.fields {
        terms.push(chi(&action(f)?));
    }
    Ok(q_sum(terms.iter()))
}

/// Concatenate two cobordism words along a shared boundary.
pub fn glue(w1: &CobordismWord, w2: &CobordismWord) -> Result<CobordismWord, QuantizeError> {
    if w1.out_boundary != w2.in_boundary {
        return Err(QuantizeError::GluingMismatch {
            out: w1.out_boundary.to_string(),
            in_: w2.in_boundary.to_string(),
        });
    }
    let mut slices = w1.slices.clone();
    slices.extend(w2.slices.iter().copied());
    CobordismWord::new(w1.in_boundary.clone(), w2.out_boundary.clone(), slices)
}

/// Disjoint union of two cobordism words: run the first on the left strands,
/// then the second with positions shifted past the first's out boundary.
pub fn stack(w1: &CobordismWord, w2: &CobordismWord) -> Result<CobordismWord, QuantizeError> {
    let shift = w1.out_boundary.len();
    let mut slices = w1.slices.clone();
    slices.extend(w2.slices.iter().map(|s| Slice {
        event: s.event,
        pos: s.pos + shift,
    }));
    CobordismWord::new(
        w1.in_boundary.concat(&w2.in_boundary),
        w1.out_boundary.concat(&w2.out_boundary),
        slices,
    )
}
