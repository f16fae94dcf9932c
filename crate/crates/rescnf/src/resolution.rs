//! The resolution rule, level saturation, unit propagation, Horn
//! satisfiability, and a brute-force oracle for cross-checking.

use std::collections::HashMap;
use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::formula::{Clause, Formula, Literal, Variable};

/// Default variable cap for the brute-force oracle.
pub const DEFAULT_ORACLE_LIMIT: u32 = 24;

/// Partial truth assignment indexed by variable id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn unassigned(variable_count: u32) -> Assignment {
        Assignment {
            values: vec![None; variable_count as usize],
        }
    }

    pub fn variable_count(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn get(&self, var: Variable) -> Option<bool> {
        self.values[(var.id() - 1) as usize]
    }

    pub fn set(&mut self, var: Variable, value: bool) {
        self.values[(var.id() - 1) as usize] = Some(value);
    }

    pub fn unset(&mut self, var: Variable) {
        self.values[(var.id() - 1) as usize] = None;
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// Truth value of a literal, `None` while its variable is unassigned.
    pub fn literal_value(&self, lit: Literal) -> Option<bool> {
        self.get(lit.var()).map(|v| v == lit.is_positive())
    }

    /// A clause is satisfied when some literal is true.
    pub fn satisfies_clause(&self, clause: &Clause) -> bool {
        clause.iter().any(|l| self.literal_value(l) == Some(true))
    }

    pub fn satisfies(&self, f: &Formula) -> bool {
        f.clauses().iter().all(|c| self.satisfies_clause(c))
    }

    /// Total assignment with unassigned variables filled in as false.
    pub fn complete_with_false(&self) -> Assignment {
        Assignment {
            values: self.values.iter().map(|v| Some(v.unwrap_or(false))).collect(),
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let id = i as i64 + 1;
            match v {
                Some(true) => write!(f, "{id}")?,
                Some(false) => write!(f, "{}", -id)?,
                None => write!(f, "?{id}")?,
            }
        }
        Ok(())
    }
}

/// Why a clause pair produces no resolvent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rejection {
    /// No joint variable between the antecedents.
    NoJoint,
    /// The merged clause would be tautological: two or more joint
    /// variables, or a tautological antecedent.
    Tautology,
}

/// One application of the resolution rule, identifiers indexing a
/// derived-clause list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResolutionStep {
    pub positive_antecedent: usize,
    pub negative_antecedent: usize,
    pub joint_variable: Variable,
    pub consequent: usize,
}

/// Variables occurring with one polarity in `a` and the opposite in `b`.
pub fn joint_variables(a: &Clause, b: &Clause) -> Vec<Variable> {
    let mut joint = Vec::new();
    for lit in a.iter() {
        if b.contains(lit.negate()) && !joint.contains(&lit.var()) {
            joint.push(lit.var());
        }
    }
    joint.sort();
    joint
}

/// Resolve two clauses. Succeeds only with exactly one joint variable;
/// zero rejects as `NoJoint`, two or more as `Tautology` since the merged
/// clause is a tautology. Returns the consequent together with the joint
/// variable and whether `a` is the positive antecedent.
pub fn resolve(a: &Clause, b: &Clause) -> Result<(Clause, Variable, bool), Rejection> {
    if a.is_tautology() || b.is_tautology() {
        return Err(Rejection::Tautology);
    }
    let joint = joint_variables(a, b);
    match joint.as_slice() {
        [] => Err(Rejection::NoJoint),
        [v] => {
            let v = *v;
            let a_positive = a.contains(Literal::new(v, true));
            let consequent = Clause::new(
                a.iter()
                    .chain(b.iter())
                    .filter(|l| l.var() != v),
            );
            Ok((consequent, v, a_positive))
        }
        _ => Err(Rejection::Tautology),
    }
}

/// Resource bounds for saturation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_clauses: usize,
    pub max_rounds: usize,
    /// `None` means unlimited width.
    pub max_clause_width: Option<usize>,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_clauses: 1_000_000,
            max_rounds: 64,
            max_clause_width: None,
        }
    }
}

/// Outcome of level saturation: all derived clauses (inputs first, then
/// discovery order), the steps that produced them, and round accounting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationResult {
    pub derived: Vec<Clause>,
    pub steps: Vec<ResolutionStep>,
    pub empty_clause_found: bool,
    pub rounds: usize,
    pub per_round_new: Vec<usize>,
    pub truncated: bool,
    /// Number of leading entries of `derived` that are input clauses.
    pub input_count: usize,
}

impl SaturationResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "derived": self.derived.iter()
                .map(|c| c.iter().map(Literal::to_dimacs).collect::<Vec<i64>>())
                .collect::<Vec<_>>(),
            "steps": self.steps.iter().map(|s| json!({
                "pos": s.positive_antecedent,
                "neg": s.negative_antecedent,
                "var": s.joint_variable.id(),
                "out": s.consequent,
            })).collect::<Vec<_>>(),
            "rounds": self.rounds,
            "empty_clause_found": self.empty_clause_found,
            "truncated": self.truncated,
            "per_round_new": self.per_round_new,
            "input_count": self.input_count,
        })
    }
}

/// Breadth-first resolution closure. Round `r` forms all resolvents with
/// at least one antecedent discovered in round `r - 1` (round 0 being the
/// inputs), deduplicated by canonical clause equality. Stops at fixpoint,
/// on the empty clause (finishing the round), or when the budget runs out.
pub fn saturate(f: &Formula, budget: &Budget) -> SaturationResult {
    let mut derived: Vec<Clause> = Vec::new();
    let mut index: HashMap<Clause, usize> = HashMap::new();
    for c in f.clauses() {
        if !index.contains_key(c) {
            index.insert(c.clone(), derived.len());
            derived.push(c.clone());
        }
    }
    let input_count = derived.len();

    let mut steps = Vec::new();
    let mut per_round_new = Vec::new();
    let mut truncated = false;
    let mut empty_clause_found = derived.iter().any(Clause::is_empty);
    let mut rounds = 0;

    let mut frontier = 0..derived.len();
    'outer: while !frontier.is_empty() && !empty_clause_found {
        if rounds >= budget.max_rounds {
            truncated = true;
            break;
        }
        rounds += 1;
        let round_start = derived.len();
        for j in frontier.clone() {
            for i in 0..j {
                let (consequent, joint, left_positive) = match resolve(&derived[i], &derived[j]) {
                    Ok(r) => r,
                    Err(_) => continue,
                };
                if let Some(w) = budget.max_clause_width {
                    if consequent.width() > w {
                        truncated = true;
                        continue;
                    }
                }
                let out = match index.get(&consequent) {
                    Some(&k) => k,
                    None => {
                        if derived.len() >= budget.max_clauses {
                            truncated = true;
                            per_round_new.push(derived.len() - round_start);
                            break 'outer;
                        }
                        let k = derived.len();
                        if consequent.is_empty() {
                            empty_clause_found = true;
                        }
                        index.insert(consequent.clone(), k);
                        derived.push(consequent);
                        k
                    }
                };
                let (pos, neg) = if left_positive { (i, j) } else { (j, i) };
                steps.push(ResolutionStep {
                    positive_antecedent: pos,
                    negative_antecedent: neg,
                    joint_variable: joint,
                    consequent: out,
                });
            }
        }
        per_round_new.push(derived.len() - round_start);
        if derived.len() == round_start {
            rounds -= 1;
            per_round_new.pop();
            break;
        }
        frontier = round_start..derived.len();
    }

    SaturationResult {
        derived,
        steps,
        empty_clause_found,
        rounds,
        per_round_new,
        truncated,
        input_count,
    }
}

/// Result of unit propagation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagation {
    /// Fixpoint reached; partial assignment of all forced literals.
    Fixpoint(Assignment),
    /// Some clause has every literal false under the forced assignment.
    Conflict { clause_index: usize },
}

/// Unit propagation in clause order, rescanning from the start after each
/// assertion so the result is deterministic.
pub fn unit_propagate(f: &Formula) -> Propagation {
    let mut assignment = Assignment::unassigned(f.variable_count());
    'scan: loop {
        for (idx, clause) in f.clauses().iter().enumerate() {
            if assignment.satisfies_clause(clause) {
                continue;
            }
            let unassigned: Vec<Literal> = clause
                .iter()
                .filter(|l| assignment.literal_value(*l).is_none())
                .collect();
            match unassigned.as_slice() {
                [] => return Propagation::Conflict { clause_index: idx },
                [unit] => {
                    assignment.set(unit.var(), unit.is_positive());
                    continue 'scan;
                }
                _ => {}
            }
        }
        return Propagation::Fixpoint(assignment);
    }
}

/// Satisfiability verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatOutcome {
    Sat(Assignment),
    Unsat,
}

impl SatOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatOutcome::Sat(_))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("formula is not Horn: clause {index} `{clause}` has two or more positive literals")]
    NotHorn { index: usize, clause: String },
    #[error("formula has {vars} variables, above the brute-force oracle limit {limit}")]
    OracleLimit { vars: u32, limit: u32 },
}

/// Horn satisfiability by unit propagation: UNSAT exactly when
/// propagation conflicts; otherwise the fixpoint extended by all-false
/// is the minimal model.
pub fn horn_sat(f: &Formula) -> Result<SatOutcome, SolveError> {
    if let Some((index, clause)) = f.first_non_horn() {
        return Err(SolveError::NotHorn {
            index,
            clause: clause.to_string(),
        });
    }
    match unit_propagate(f) {
        Propagation::Conflict { .. } => Ok(SatOutcome::Unsat),
        Propagation::Fixpoint(a) => Ok(SatOutcome::Sat(a.complete_with_false())),
    }
}

fn search(f: &Formula, assignment: &mut Assignment, next_var: u32) -> Option<Assignment> {
    // Prune on any clause with every literal already false; the empty
    // clause falsifies vacuously.
    for clause in f.clauses() {
        if clause
            .iter()
            .all(|l| assignment.literal_value(l) == Some(false))
        {
            return None;
        }
    }
    if next_var > f.variable_count() {
        let total = assignment.complete_with_false();
        return total.satisfies(f).then_some(total);
    }
    let var = Variable::new(next_var);
    for value in [false, true] {
        assignment.set(var, value);
        if let Some(model) = search(f, assignment, next_var + 1) {
            return Some(model);
        }
    }
    assignment.unset(var);
    None
}

/// Exhaustive backtracking satisfiability check, the independent oracle
/// behind every equisatisfiability property. The witness is re-verified
/// against every clause before being returned.
pub fn brute_force_sat(f: &Formula, limit: u32) -> Result<SatOutcome, SolveError> {
    if f.variable_count() > limit {
        return Err(SolveError::OracleLimit {
            vars: f.variable_count(),
            limit,
        });
    }
    let mut assignment = Assignment::unassigned(f.variable_count());
    match search(f, &mut assignment, 1) {
        Some(model) => {
            debug_assert!(model.satisfies(f));
            Ok(SatOutcome::Sat(model))
        }
        None => Ok(SatOutcome::Unsat),
    }
}

/// All total satisfying assignments, by full enumeration.
pub fn enumerate_models(f: &Formula, limit: u32) -> Result<Vec<Assignment>, SolveError> {
    let n = f.variable_count();
    if n > limit {
        return Err(SolveError::OracleLimit { vars: n, limit });
    }
    let mut models = Vec::new();
    for bits in 0u64..(1u64 << n) {
        let mut a = Assignment::unassigned(n);
        for v in 1..=n {
            a.set(Variable::new(v), bits >> (v - 1) & 1 == 1);
        }
        if a.satisfies(f) {
            models.push(a);
        }
    }
    Ok(models)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clause(lits: &[i64]) -> Clause {
        Clause::from_dimacs(lits.iter().copied())
    }

    fn formula(clauses: &[&[i64]]) -> Formula {
        Formula::from_clauses(clauses.iter().map(|c| clause(c)))
    }

    #[test]
    fn joint_variable_cases() {
        let ids = |a: &[i64], b: &[i64]| -> Vec<u32> {
            joint_variables(&clause(a), &clause(b))
                .into_iter()
                .map(Variable::id)
                .collect()
        };
        assert_eq!(ids(&[1, 2], &[-1, 3]), vec![1]);
        assert_eq!(ids(&[1, 2], &[-1, -2]), vec![1, 2]);
        assert_eq!(ids(&[1, 2], &[1, 3]), Vec::<u32>::new());
    }

    #[test]
    fn resolve_single_joint() {
        let (c, v, a_pos) = resolve(&clause(&[1, 2]), &clause(&[-1, 3])).unwrap();
        assert_eq!(c, clause(&[2, 3]));
        assert_eq!(v.id(), 1);
        assert!(a_pos);
    }

    #[test]
    fn resolve_rejects_two_joints_as_tautology() {
        assert_eq!(
            resolve(&clause(&[1, 2]), &clause(&[-1, -2])),
            Err(Rejection::Tautology)
        );
    }

    #[test]
    fn resolve_rejects_disjoint() {
        assert_eq!(
            resolve(&clause(&[1, 2]), &clause(&[1, 3])),
            Err(Rejection::NoJoint)
        );
    }

    #[test]
    fn resolve_units_to_empty_clause() {
        let (c, _, _) = resolve(&clause(&[1]), &clause(&[-1])).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn resolve_rejects_tautological_antecedent() {
        assert_eq!(
            resolve(&clause(&[1, -1]), &clause(&[-1, 2])),
            Err(Rejection::Tautology)
        );
    }

    #[test]
    fn saturate_refutes_complementary_units() {
        let r = saturate(&formula(&[&[1], &[-1]]), &Budget::default());
        assert!(r.empty_clause_found);
        assert_eq!(r.rounds, 1);
        assert_eq!(r.derived.len(), 3);
        assert!(r.derived[2].is_empty());
        assert_eq!(r.per_round_new, vec![1]);
        assert!(!r.truncated);
    }

    #[test]
    fn saturate_refutes_all_sign_patterns() {
        let r = saturate(
            &formula(&[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]),
            &Budget::default(),
        );
        assert!(r.empty_clause_found);
    }

    #[test]
    fn saturate_satisfiable_no_empty_clause() {
        let r = saturate(&formula(&[&[1, 2], &[-2, 3]]), &Budget::default());
        assert!(!r.empty_clause_found);
        assert!(!r.truncated);
    }

    #[test]
    fn saturate_is_deterministic() {
        let f = formula(&[&[1, 2], &[-1, 3], &[-2, -3], &[2, 3]]);
        let a = saturate(&f, &Budget::default());
        let b = saturate(&f, &Budget::default());
        assert_eq!(a, b);
    }

    #[test]
    fn saturate_steps_index_into_derived() {
        let f = formula(&[&[1, 2], &[-1, 3], &[-2, -3], &[2, 3]]);
        let r = saturate(&f, &Budget::default());
        for s in &r.steps {
            assert!(s.positive_antecedent < r.derived.len());
            assert!(s.negative_antecedent < r.derived.len());
            assert!(s.consequent < r.derived.len());
            let pos = &r.derived[s.positive_antecedent];
            let neg = &r.derived[s.negative_antecedent];
            assert!(pos.contains(Literal::new(s.joint_variable, true)));
            assert!(neg.contains(Literal::new(s.joint_variable, false)));
            assert!(!r.derived[s.consequent]
                .iter()
                .any(|l| l.var() == s.joint_variable));
        }
    }

    #[test]
    fn saturate_clause_budget_truncates() {
        let f = formula(&[&[1, 2], &[-1, 3], &[-2, -3], &[2, 3], &[-3, 1]]);
        let r = saturate(
            &f,
            &Budget {
                max_clauses: 6,
                ..Budget::default()
            },
        );
        assert!(r.truncated);
        assert!(r.derived.len() <= 6);
    }

    #[test]
    fn unit_propagation_conflict_chain() {
        let f = formula(&[&[1], &[-1, 2], &[-2]]);
        assert_eq!(unit_propagate(&f), Propagation::Conflict { clause_index: 2 });
    }

    #[test]
    fn unit_propagation_fixpoint_without_units() {
        let f = formula(&[&[-1, 2]]);
        match unit_propagate(&f) {
            Propagation::Fixpoint(a) => {
                assert_eq!(a.get(Variable::new(1)), None);
                assert_eq!(a.get(Variable::new(2)), None);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unit_propagation_forces_chain() {
        let f = formula(&[&[1], &[-1, 2]]);
        match unit_propagate(&f) {
            Propagation::Fixpoint(a) => {
                assert_eq!(a.get(Variable::new(1)), Some(true));
                assert_eq!(a.get(Variable::new(2)), Some(true));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn horn_sat_verdicts() {
        assert_eq!(
            horn_sat(&formula(&[&[1], &[-1, 2], &[-2]])).unwrap(),
            SatOutcome::Unsat
        );
        assert!(horn_sat(&formula(&[&[-1, -2]])).unwrap().is_sat());
    }

    #[test]
    fn horn_sat_rejects_non_horn_naming_clause() {
        let err = horn_sat(&formula(&[&[-1, 2], &[1, 2, 3]])).unwrap_err();
        match err {
            SolveError::NotHorn { index, .. } => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn brute_force_basic() {
        assert_eq!(
            brute_force_sat(&formula(&[&[1, 2], &[-1], &[-2]]), DEFAULT_ORACLE_LIMIT).unwrap(),
            SatOutcome::Unsat
        );
        match brute_force_sat(&formula(&[&[1, -2], &[2]]), DEFAULT_ORACLE_LIMIT).unwrap() {
            SatOutcome::Sat(model) => assert!(model.satisfies(&formula(&[&[1, -2], &[2]]))),
            SatOutcome::Unsat => panic!("expected SAT"),
        }
    }

    #[test]
    fn brute_force_respects_limit() {
        let f = Formula::new(30, []).unwrap();
        assert_eq!(
            brute_force_sat(&f, 24),
            Err(SolveError::OracleLimit { vars: 30, limit: 24 })
        );
    }

    #[test]
    fn saturation_json_shape() {
        let r = saturate(&formula(&[&[1], &[-1]]), &Budget::default());
        let v = r.to_json();
        assert_eq!(v["rounds"], 1);
        assert_eq!(v["empty_clause_found"], true);
        assert_eq!(v["derived"][2].as_array().unwrap().len(), 0);
        assert_eq!(v["steps"][0]["var"], 1);
    }
}
