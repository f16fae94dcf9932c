//! RCNF meta-encoding of resolution structure, plus the two-step Horn
//! reduction: width-3 clause splitting followed by per-clause gadget
//! templates over meta variables indexed by sub-clauses.
//!
//! In the meta formula every non-empty object-level clause is a variable,
//! input clauses are asserted as positive units, and each resolution step
//! becomes `(¬a ∨ ¬b ∨ r)` — or the goal `(¬a ∨ ¬b)` when the consequent
//! is the empty clause, which deliberately has no meta variable.

use std::collections::HashMap;

use serde_json::json;
use thiserror::Error;

use crate::formula::{Clause, ClauseKind, Formula, Literal, Variable};
use crate::resolution::{saturate, Budget, SaturationResult};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("formula is not Horn: clause {index} `{clause}` has two or more positive literals")]
    NotHorn { index: usize, clause: String },
    #[error("gadget template requires width <= 3, got clause `{clause}` of width {width}")]
    GadgetWidth { clause: String, width: usize },
}

/// First-use-order mapping from object-level clauses to meta variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MetaIndex {
    by_clause: HashMap<Clause, Variable>,
    order: Vec<Clause>,
}

impl MetaIndex {
    pub fn new() -> MetaIndex {
        MetaIndex::default()
    }

    /// Meta variable for `clause`, allocating the next id on first use.
    /// The empty clause is never given a variable.
    pub fn var_for(&mut self, clause: &Clause) -> Variable {
        assert!(
            !clause.is_empty(),
            "the empty clause has no meta variable"
        );
        if let Some(&v) = self.by_clause.get(clause) {
            return v;
        }
        let v = Variable::new(self.order.len() as u32 + 1);
        self.by_clause.insert(clause.clone(), v);
        self.order.push(clause.clone());
        v
    }

    pub fn get(&self, clause: &Clause) -> Option<Variable> {
        self.by_clause.get(clause).copied()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// (meta variable, object-level clause) pairs in id order.
    pub fn entries(&self) -> impl Iterator<Item = (Variable, &Clause)> {
        self.order
            .iter()
            .enumerate()
            .map(|(i, c)| (Variable::new(i as u32 + 1), c))
    }

    /// Sidecar document mapping meta ids back to object-level clauses.
    pub fn sidecar_json(&self) -> serde_json::Value {
        json!({
            "meta_vars": self.entries().map(|(v, c)| json!({
                "id": v.id(),
                "clause": c.iter().map(Literal::to_dimacs).collect::<Vec<i64>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// The RCNF meta-encoding of a formula's resolution closure.
#[derive(Clone, Debug)]
pub struct RcnfEncoding {
    /// Object-level clause to meta variable; no entry for the empty clause.
    pub meta: MetaIndex,
    /// One positive-unit meta clause per distinct input clause.
    pub unit_assertions: Vec<Clause>,
    /// One meta clause per resolution step.
    pub resolution_clauses: Vec<Clause>,
    /// Units followed by resolution clauses.
    pub formula: Formula,
    /// The saturation run the encoding serializes.
    pub saturation: SaturationResult,
    /// Set when saturation hit its budget; the encoding is then partial.
    pub truncated: bool,
}

/// Encode the resolution closure of `f` as a Horn meta formula.
pub fn rcnf_of(f: &Formula, budget: &Budget) -> RcnfEncoding {
    let saturation = saturate(f, budget);
    let mut meta = MetaIndex::new();
    for clause in &saturation.derived {
        if !clause.is_empty() {
            meta.var_for(clause);
        }
    }

    let mut unit_assertions = Vec::new();
    for clause in &saturation.derived[..saturation.input_count] {
        if clause.is_empty() {
            // An input ⊥ has no meta variable; assert contradiction directly.
            unit_assertions.push(Clause::empty());
        } else {
            unit_assertions.push(Clause::new([Literal::new(
                meta.var_for(clause),
                true,
            )]));
        }
    }

    let mut resolution_clauses = Vec::new();
    for step in &saturation.steps {
        let pos = meta
            .get(&saturation.derived[step.positive_antecedent])
            .expect("antecedents are never empty");
        let neg = meta
            .get(&saturation.derived[step.negative_antecedent])
            .expect("antecedents are never empty");
        let mut lits = vec![Literal::new(pos, false), Literal::new(neg, false)];
        let consequent = &saturation.derived[step.consequent];
        if !consequent.is_empty() {
            lits.push(Literal::new(meta.get(consequent).unwrap(), true));
        }
        resolution_clauses.push(Clause::new(lits));
    }

    let formula = Formula::new(
        meta.len() as u32,
        unit_assertions
            .iter()
            .chain(resolution_clauses.iter())
            .cloned(),
    )
    .expect("meta ids are allocated consecutively");
    let truncated = saturation.truncated;
    RcnfEncoding {
        meta,
        unit_assertions,
        resolution_clauses,
        formula,
        saturation,
        truncated,
    }
}

/// The clause literal filling the template's head role: the positive
/// literal when there is one, otherwise the first literal in canonical
/// order. The capital-letter roles are polarity-generic.
fn head_literal(c: &Clause) -> Literal {
    c.positive_literal().unwrap_or_else(|| c.literals()[0])
}

/// Split every Horn clause wider than 3 into a chain of width-≤3 clauses
/// linked by fresh variables numbered above the input's variable count.
/// Single pass over the clauses; the output is Horn and equisatisfiable.
pub fn split_horn3(g: &Formula) -> Result<Formula, ReduceError> {
    if let Some((index, clause)) = g.first_non_horn() {
        return Err(ReduceError::NotHorn {
            index,
            clause: clause.to_string(),
        });
    }
    let mut next_fresh = g.variable_count() + 1;
    let mut out = Vec::new();
    for clause in g.clauses() {
        if clause.width() <= 3 {
            out.push(clause.clone());
            continue;
        }
        let head = head_literal(clause);
        let tail: Vec<Literal> = clause.iter().filter(|&l| l != head).collect();
        let mut carry = head;
        for (i, &lit) in tail.iter().enumerate() {
            let last = i + 1 == tail.len();
            if last {
                out.push(Clause::new([carry, lit]));
            } else {
                let fresh = Variable::new(next_fresh);
                next_fresh += 1;
                out.push(Clause::new([carry, lit, Literal::new(fresh, false)]));
                carry = Literal::new(fresh, true);
            }
        }
    }
    Ok(Formula::new(next_fresh - 1, out).expect("fresh ids stay in range"))
}

fn unit(lit: Literal) -> Clause {
    Clause::new([lit])
}

fn pos(v: Variable) -> Literal {
    Literal::new(v, true)
}

fn neg(v: Variable) -> Literal {
    Literal::new(v, false)
}

/// Gadget clauses for one Horn clause of width ≤ 3, sharing `meta` so
/// identical sub-clauses unify across gadget instances.
fn gadget_clauses(c: &Clause, meta: &mut MetaIndex) -> Result<Vec<Clause>, ReduceError> {
    if c.classify() == ClauseKind::NonHorn {
        return Err(ReduceError::NotHorn {
            index: 0,
            clause: c.to_string(),
        });
    }
    if c.width() > 3 {
        return Err(ReduceError::GadgetWidth {
            clause: c.to_string(),
            width: c.width(),
        });
    }
    if c.is_empty() {
        // ⊥ has no meta variable; carry the contradiction through as is.
        return Ok(vec![Clause::empty()]);
    }

    let head = head_literal(c);
    let body: Vec<Literal> = c.iter().filter(|&l| l != head).collect();
    let m_full = meta.var_for(c);
    let m_head = meta.var_for(&unit(head));
    let m_head_bar = meta.var_for(&unit(head.negate()));

    let clauses = match body.as_slice() {
        [] => vec![
            unit(pos(m_full)),
            Clause::new([neg(m_head), neg(m_head_bar)]),
        ],
        [q] => {
            let m_q = meta.var_for(&unit(q.negate()));
            vec![
                unit(pos(m_full)),
                Clause::new([pos(m_head), neg(m_full), neg(m_q)]),
                Clause::new([neg(m_head), neg(m_head_bar)]),
            ]
        }
        [j, k] => {
            let m_head_k = meta.var_for(&Clause::new([head, *k]));
            let m_head_j = meta.var_for(&Clause::new([head, *j]));
            let m_j = meta.var_for(&unit(j.negate()));
            let m_k = meta.var_for(&unit(k.negate()));
            vec![
                unit(pos(m_full)),
                Clause::new([pos(m_head_k), neg(m_full), neg(m_j)]),
                Clause::new([pos(m_head_j), neg(m_full), neg(m_k)]),
                Clause::new([pos(m_head), neg(m_head_j), neg(m_j)]),
                Clause::new([pos(m_head), neg(m_head_k), neg(m_k)]),
                Clause::new([neg(m_head), neg(m_head_bar)]),
            ]
        }
        _ => unreachable!("width checked above"),
    };
    Ok(clauses)
}

/// The paper-template meta encoding of a single width-≤3 Horn clause,
/// with a private meta-variable index: 2, 3, or 6 clauses by width.
pub fn gadget_rcnf(c: &Clause) -> Result<Formula, ReduceError> {
    let mut meta = MetaIndex::new();
    let clauses = gadget_clauses(c, &mut meta)?;
    Ok(Formula::new(meta.len() as u32, clauses).expect("meta ids consecutive"))
}

/// Result of the full Horn-to-RCNF reduction.
#[derive(Clone, Debug)]
pub struct HornRcnf {
    /// The intermediate width-≤3 Horn formula.
    pub split: Formula,
    /// Meta variable table shared across all gadget instances.
    pub meta: MetaIndex,
    /// The assembled Horn meta formula, equisatisfiable with the input.
    pub formula: Formula,
}

/// Two-step reduction: split to width ≤ 3, then instantiate the gadget
/// template on every clause with a shared meta-variable table.
pub fn horn_to_rcnf(g: &Formula) -> Result<HornRcnf, ReduceError> {
    let split = split_horn3(g)?;
    let mut meta = MetaIndex::new();
    let mut clauses = Vec::new();
    for clause in split.clauses() {
        clauses.extend(gadget_clauses(clause, &mut meta)?);
    }
    let formula = Formula::new(meta.len() as u32, clauses).expect("meta ids consecutive");
    Ok(HornRcnf {
        split,
        meta,
        formula,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::{brute_force_sat, horn_sat, SatOutcome, DEFAULT_ORACLE_LIMIT};

    fn clause(lits: &[i64]) -> Clause {
        Clause::from_dimacs(lits.iter().copied())
    }

    fn formula(clauses: &[&[i64]]) -> Formula {
        Formula::from_clauses(clauses.iter().map(|c| clause(c)))
    }

    #[test]
    fn rcnf_of_complementary_units() {
        let enc = rcnf_of(&formula(&[&[1], &[-1]]), &Budget::default());
        assert_eq!(enc.unit_assertions.len(), 2);
        assert_eq!(enc.resolution_clauses, vec![clause(&[-1, -2])]);
        assert!(enc.formula.is_horn());
        assert_eq!(horn_sat(&enc.formula).unwrap(), SatOutcome::Unsat);
    }

    #[test]
    fn rcnf_of_single_step_shape() {
        // Two resolvable clauses: meta formula gets two units and one
        // definite resolution clause.
        let enc = rcnf_of(&formula(&[&[1, 2], &[-1, 3]]), &Budget::default());
        assert_eq!(enc.unit_assertions.len(), 2);
        assert_eq!(enc.resolution_clauses, vec![clause(&[-1, -2, 3])]);
        assert!(enc.formula.is_horn());
        assert!(horn_sat(&enc.formula).unwrap().is_sat());
    }

    #[test]
    fn rcnf_excludes_empty_clause_variable() {
        let enc = rcnf_of(&formula(&[&[1], &[-1]]), &Budget::default());
        assert!(enc.meta.entries().all(|(_, c)| !c.is_empty()));
    }

    #[test]
    fn rcnf_of_satisfiable_agrees_with_oracle() {
        let f = formula(&[&[1, 2], &[-2, 3], &[-1, -3]]);
        let enc = rcnf_of(&f, &Budget::default());
        assert!(!enc.truncated);
        assert_eq!(
            horn_sat(&enc.formula).unwrap().is_sat(),
            brute_force_sat(&f, DEFAULT_ORACLE_LIMIT).unwrap().is_sat()
        );
    }

    #[test]
    fn split_passes_narrow_clauses_through() {
        let g = formula(&[&[1, -2], &[-1, -2, -3]]);
        assert_eq!(split_horn3(&g).unwrap(), g);
    }

    #[test]
    fn split_wide_clause_matches_chain() {
        let g = Formula::new(4, [clause(&[1, -2, -3, -4])]).unwrap();
        let split = split_horn3(&g).unwrap();
        assert_eq!(
            split.clauses(),
            &[clause(&[1, -2, -5]), clause(&[5, -3, -6]), clause(&[6, -4])]
        );
        assert_eq!(split.variable_count(), 6);
    }

    #[test]
    fn split_rejects_non_horn() {
        let err = split_horn3(&formula(&[&[1, 2, 3]])).unwrap_err();
        assert!(matches!(err, ReduceError::NotHorn { index: 0, .. }));
    }

    #[test]
    fn split_is_equisatisfiable() {
        let g = formula(&[&[1, -2, -3, -4, -5], &[2], &[3], &[4], &[5], &[-1]]);
        let split = split_horn3(&g).unwrap();
        assert!(split.clauses().iter().all(|c| c.width() <= 3));
        assert_eq!(
            brute_force_sat(&g, DEFAULT_ORACLE_LIMIT).unwrap().is_sat(),
            brute_force_sat(&split, DEFAULT_ORACLE_LIMIT)
                .unwrap()
                .is_sat()
        );
    }

    #[test]
    fn gadget_clause_counts_by_width() {
        assert_eq!(gadget_rcnf(&clause(&[5])).unwrap().len(), 2);
        assert_eq!(gadget_rcnf(&clause(&[1, -2])).unwrap().len(), 3);
        assert_eq!(gadget_rcnf(&clause(&[1, -2, -3])).unwrap().len(), 6);
    }

    #[test]
    fn gadget_output_is_horn() {
        for c in [clause(&[5]), clause(&[-1]), clause(&[1, -2]), clause(&[-1, -2]),
                  clause(&[1, -2, -3]), clause(&[-1, -2, -3])] {
            assert!(gadget_rcnf(&c).unwrap().is_horn());
        }
    }

    #[test]
    fn gadget_rejects_wide_clause() {
        let err = gadget_rcnf(&clause(&[1, -2, -3, -4])).unwrap_err();
        assert!(matches!(err, ReduceError::GadgetWidth { width: 4, .. }));
    }

    #[test]
    fn gadget_rejects_non_horn() {
        assert!(matches!(
            gadget_rcnf(&clause(&[1, 2])),
            Err(ReduceError::NotHorn { .. })
        ));
    }

    #[test]
    fn horn_to_rcnf_unsat_pair() {
        let out = horn_to_rcnf(&formula(&[&[1], &[-1]])).unwrap();
        assert!(out.formula.is_horn());
        assert_eq!(horn_sat(&out.formula).unwrap(), SatOutcome::Unsat);
    }

    #[test]
    fn horn_to_rcnf_sat_goal() {
        let out = horn_to_rcnf(&formula(&[&[-1, -2]])).unwrap();
        assert!(horn_sat(&out.formula).unwrap().is_sat());
    }

    #[test]
    fn horn_to_rcnf_propagation_chain() {
        let out = horn_to_rcnf(&formula(&[&[1], &[-1, 2], &[-2]])).unwrap();
        assert_eq!(horn_sat(&out.formula).unwrap(), SatOutcome::Unsat);
    }

    #[test]
    fn meta_sidecar_shape() {
        let out = horn_to_rcnf(&formula(&[&[1]])).unwrap();
        let sidecar = out.meta.sidecar_json();
        let vars = sidecar["meta_vars"].as_array().unwrap();
        assert_eq!(vars.len(), out.meta.len());
        assert_eq!(vars[0]["id"], 1);
    }
}
