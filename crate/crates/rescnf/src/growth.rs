//! Saturation growth measurement: consequent counts per round, the
//! closed-form size ratio, and the S4 chain doubling trace.

use std::collections::BTreeSet;

use serde_json::json;
use thiserror::Error;

use crate::formula::{Clause, Formula, Variable};
use crate::resolution::{resolve, saturate, Budget};

/// 2^(k*c0) / (1 + 3*(2^k - 1)): the predicted ratio of resolution
/// consequents to instance size.
pub fn paper_ratio(k: u32, c0: f64) -> f64 {
    (k as f64 * c0).exp2() / moore_size(k) as f64
}

/// Node count of the degree-3 Moore graph of girth 2k+1: 1 + 3*(2^k - 1).
pub fn moore_size(k: u32) -> u64 {
    1 + 3 * ((1u64 << k) - 1)
}

/// What was measured: a label plus the generation parameters when the
/// instance came from the CCNF assembler.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceDescriptor {
    pub label: String,
    pub k: Option<u32>,
    pub c0: Option<f64>,
}

impl InstanceDescriptor {
    pub fn ad_hoc(label: impl Into<String>) -> InstanceDescriptor {
        InstanceDescriptor {
            label: label.into(),
            k: None,
            c0: None,
        }
    }

    pub fn ccnf(label: impl Into<String>, k: u32, c0: f64) -> InstanceDescriptor {
        InstanceDescriptor {
            label: label.into(),
            k: Some(k),
            c0: Some(c0),
        }
    }
}

/// Per-round growth record of one saturation run.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub descriptor: InstanceDescriptor,
    pub input_size: usize,
    pub per_round_new: Vec<usize>,
    /// Distinct non-tautological derived clauses, inputs excluded.
    pub total_consequents: usize,
    pub ratio: f64,
    pub rounds: usize,
    pub empty_clause_found: bool,
    pub truncated: bool,
    pub paper_ratio_at_k: Option<f64>,
}

impl GrowthReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "descriptor": self.descriptor.label,
            "k": self.descriptor.k,
            "c0": self.descriptor.c0,
            "input_size": self.input_size,
            "per_round_new": self.per_round_new,
            "total_consequents": self.total_consequents,
            "ratio": self.ratio,
            "rounds": self.rounds,
            "empty_clause_found": self.empty_clause_found,
            "truncated": self.truncated,
            "paper_ratio_at_k": self.paper_ratio_at_k,
        })
    }

    pub fn csv_header() -> &'static str {
        "descriptor,input_size,consequents,ratio,rounds,truncated"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.descriptor.label,
            self.input_size,
            self.total_consequents,
            self.ratio,
            self.rounds,
            self.truncated
        )
    }
}

/// Saturate `f` and report distinct-consequent growth. Tautologies are
/// never stored by saturation, so the consequent count is exactly the
/// non-input portion of the derived list.
pub fn measure_growth(f: &Formula, budget: &Budget, descriptor: InstanceDescriptor) -> GrowthReport {
    let result = saturate(f, budget);
    let total_consequents = result.derived.len() - result.input_count;
    let input_size = f.len();
    let paper_ratio_at_k = match (descriptor.k, descriptor.c0) {
        (Some(k), Some(c0)) => Some(paper_ratio(k, c0)),
        _ => None,
    };
    GrowthReport {
        descriptor,
        input_size,
        per_round_new: result.per_round_new,
        total_consequents,
        ratio: total_consequents as f64 / input_size as f64,
        rounds: result.rounds,
        empty_clause_found: result.empty_clause_found,
        truncated: result.truncated,
        paper_ratio_at_k,
    }
}

/// Frontier sizes along an S4 chain: the initial seed plus one entry per
/// gadget traversed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingTrace {
    pub frontier_sizes: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("chain link {position}: expected exactly one shared variable, found {found}")]
    BadLink { position: usize, found: usize },
}

fn variables_of(f: &Formula) -> BTreeSet<Variable> {
    f.clauses()
        .iter()
        .flat_map(|c| c.iter().map(|l| l.var()))
        .collect()
}

/// Push a resolution wave through a chain of gadgets. The frontier is
/// replaced (not accumulated) at each gadget: all resolvents of frontier
/// clauses against the gadget's clauses on the entering link variable,
/// deduplicated and tautology-filtered.
pub fn doubling_check(chain: &[Formula], seed: &Clause) -> Result<DoublingTrace, ChainError> {
    let seed_vars: BTreeSet<Variable> = seed.iter().map(|l| l.var()).collect();
    let mut frontier = vec![seed.clone()];
    let mut sizes = vec![frontier.len()];
    let mut prev_vars = seed_vars;

    for (position, gadget) in chain.iter().enumerate() {
        let gadget_vars = variables_of(gadget);
        let shared: Vec<Variable> = prev_vars.intersection(&gadget_vars).copied().collect();
        let link = match shared.as_slice() {
            [v] => *v,
            other => {
                return Err(ChainError::BadLink {
                    position,
                    found: other.len(),
                })
            }
        };
        let mut next = Vec::new();
        for wave in &frontier {
            for clause in gadget.clauses() {
                if let Ok((resolvent, joint, _)) = resolve(wave, clause) {
                    if joint == link && !next.contains(&resolvent) {
                        next.push(resolvent);
                    }
                }
            }
        }
        sizes.push(next.len());
        frontier = next;
        prev_vars = gadget_vars;
    }
    Ok(DoublingTrace {
        frontier_sizes: sizes,
    })
}
