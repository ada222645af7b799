//! Total-domination certificates and the reduction budget ledger.

use serde::{Deserialize, Serialize};

use crate::embedding::{NearTriangulation, VertexId};

/// Budget `f(n) = floor(2n/5)` for an instance of order `n`.
pub fn budget(n: usize) -> usize {
    2 * n / 5
}

/// Which reduction rule a step applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseId {
    Reducible,
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    C12,
    Claim2,
    Lemma10I,
    Lemma10II,
    Lemma9,
    BaseMop,
    OracleFallback,
}

impl CaseId {
    /// Steps whose budget is certified by an absolute size check rather than
    /// the d/k ratio rule.
    pub fn absolute(self) -> bool {
        matches!(
            self,
            CaseId::C1
                | CaseId::C10
                | CaseId::Lemma9
                | CaseId::BaseMop
                | CaseId::OracleFallback
                | CaseId::Claim2
                | CaseId::Lemma10I
                | CaseId::Lemma10II
        )
    }
}

/// One applied reduction of the induction, with its budget ledger entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionStep {
    pub case_id: CaseId,
    /// Vertices removed from the instance by this step (parent ids).
    pub removed: Vec<VertexId>,
    /// Number of vertices this step accounts for.
    pub k: usize,
    /// Dominators spent by this step.
    pub d: usize,
    /// Marks a terminal assembly whose budget is certified by the absolute
    /// per-level size check instead of the d/k ratio rule.
    #[serde(default)]
    pub absolute: bool,
}

impl ReductionStep {
    pub fn ratio(case_id: CaseId, removed: Vec<VertexId>, k: usize, d: usize) -> ReductionStep {
        ReductionStep {
            case_id,
            removed,
            k,
            d,
            absolute: false,
        }
    }

    /// Ledger rule: a pass-through, a ratio step with `n-k >= 5` and
    /// `d/k <= 2/5`, or a step certified by an absolute size check.
    pub fn ledger_ok(&self, n_before: usize) -> bool {
        if self.absolute || self.case_id.absolute() {
            return true;
        }
        if self.k == 0 && self.d == 0 {
            return true;
        }
        n_before >= self.k + 5 && 5 * self.d <= 2 * self.k
    }
}

/// A vertex set claimed as a total dominating set, with its reduction trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TdsCertificate {
    pub n: usize,
    pub size: usize,
    pub bound: usize,
    pub vertices: Vec<VertexId>,
    pub trace: Vec<ReductionStep>,
}

impl TdsCertificate {
    pub fn new(n: usize, vertices: Vec<VertexId>, trace: Vec<ReductionStep>) -> Self {
        let mut vertices = vertices;
        vertices.sort_unstable();
        vertices.dedup();
        TdsCertificate {
            n,
            size: vertices.len(),
            bound: budget(n),
            vertices,
            trace,
        }
    }

    /// Standalone check that `vertices` totally dominates `t`.
    pub fn is_valid_for(&self, t: &NearTriangulation) -> bool {
        crate::oracle::is_tds_of(t, &self.vertices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_recurrence_holds() {
        for n in 5..=1000 {
            assert_eq!(budget(n - 5) + 2, budget(n));
        }
    }

    #[test]
    fn ratio_ledger_accepts_proof_arithmetic() {
        // k=5,d=2 and k=8,d=3 and k=15,d=6 all satisfy d/k <= 2/5
        for (k, d) in [(5usize, 2usize), (8, 3), (15, 6), (10, 4), (13, 5)] {
            let step = ReductionStep::ratio(CaseId::C3, vec![], k, d);
            assert!(step.ledger_ok(k + 5));
            assert!(!step.ledger_ok(k + 4));
        }
        let bad = ReductionStep::ratio(CaseId::C3, vec![], 5, 3);
        assert!(!bad.ledger_ok(100));
    }
}
