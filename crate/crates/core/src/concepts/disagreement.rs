use serde::{Deserialize, Serialize};

use crate::domain::{Concept, Label, Point, PointKind, Sample};
use crate::error::{Error, Result};

/// `dis_{c,c'}(x) = 1[c(x) != c'(x)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisagreementConcept {
    c: Concept,
    c_prime: Concept,
}

impl DisagreementConcept {
    pub fn new(c: Concept, c_prime: Concept) -> Result<Self> {
        if c.kind() != c_prime.kind() {
            return Err(Error::KindMismatch {
                expected: c.kind(),
                found: c_prime.kind(),
            });
        }
        Ok(DisagreementConcept { c, c_prime })
    }

    pub fn c(&self) -> &Concept {
        &self.c
    }

    pub fn c_prime(&self) -> &Concept {
        &self.c_prime
    }

    pub fn kind(&self) -> PointKind {
        self.c.kind()
    }

    pub fn into_parts(self) -> (Concept, Concept) {
        (self.c, self.c_prime)
    }

    pub fn predict(&self, p: &Point) -> Result<Label> {
        Ok(Label::from_bool(self.c.predict(p)? != self.c_prime.predict(p)?))
    }

    pub fn predict_all(&self, sample: &Sample) -> Result<Vec<Label>> {
        sample.iter().map(|p| self.predict(p)).collect()
    }
}
