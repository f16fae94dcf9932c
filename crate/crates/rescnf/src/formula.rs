//! CNF data model: variables, polarity-aware literals, canonically ordered
//! clauses, and formulas with a declared variable count.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A propositional variable, 1-based per the DIMACS convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(u32);

impl Variable {
    /// Construct a variable. Panics on id 0; ids are 1-based.
    pub fn new(id: u32) -> Variable {
        assert!(id >= 1, "variable ids are 1-based");
        Variable(id)
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A variable occurrence with polarity. `positive == true` means the
/// variable appears unnegated.
///
/// Ordering is (variable, polarity) with the negative occurrence first,
/// which fixes the canonical literal order inside a clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: Variable,
    positive: bool,
}

impl Literal {
    pub fn new(var: Variable, positive: bool) -> Literal {
        Literal { var, positive }
    }

    /// Positive literal on variable `id`.
    pub fn pos(id: u32) -> Literal {
        Literal::new(Variable::new(id), true)
    }

    /// Negative literal on variable `id`.
    pub fn neg(id: u32) -> Literal {
        Literal::new(Variable::new(id), false)
    }

    /// Build from a signed DIMACS integer. Panics on 0.
    pub fn from_dimacs(lit: i64) -> Literal {
        assert!(lit != 0, "DIMACS literal 0 is a clause terminator");
        Literal::new(Variable::new(lit.unsigned_abs() as u32), lit > 0)
    }

    pub fn to_dimacs(self) -> i64 {
        let id = self.var.id() as i64;
        if self.positive {
            id
        } else {
            -id
        }
    }

    pub fn var(self) -> Variable {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    /// Flip polarity. An involution: `l.negate().negate() == l`.
    pub fn negate(self) -> Literal {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if !self.positive {
            write!(f, "-")?;
        }
        write!(f, "{}", self.var.id())
    }
}

/// Structural classification of a clause by its positive-literal count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClauseKind {
    /// Exactly one literal, positive.
    PositiveUnit,
    /// Exactly one positive literal plus at least one negative.
    Definite,
    /// No positive literals (includes the empty clause).
    Goal,
    /// Two or more positive literals.
    NonHorn,
}

/// A disjunction of literals, stored duplicate-free in canonical order
/// (ascending variable id, negative before positive on equal ids).
///
/// The empty clause is a valid value and denotes contradiction. A clause
/// holding both polarities of one variable is representable and reported
/// tautological rather than rejected.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Build a clause, sorting into canonical order and dropping exact
    /// duplicate literals.
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Clause {
        let set: BTreeSet<Literal> = literals.into_iter().collect();
        Clause {
            literals: set.into_iter().collect(),
        }
    }

    /// The empty clause ⊥.
    pub fn empty() -> Clause {
        Clause { literals: vec![] }
    }

    /// Build from signed DIMACS integers.
    pub fn from_dimacs(lits: impl IntoIterator<Item = i64>) -> Clause {
        Clause::new(lits.into_iter().map(Literal::from_dimacs))
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn iter(&self) -> impl Iterator<Item = Literal> + '_ {
        self.literals.iter().copied()
    }

    pub fn width(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.literals.binary_search(&lit).is_ok()
    }

    pub fn max_var(&self) -> Option<Variable> {
        self.literals.iter().map(|l| l.var()).max()
    }

    /// True iff some variable occurs with both polarities.
    pub fn is_tautology(&self) -> bool {
        self.literals
            .windows(2)
            .any(|w| w[0].var() == w[1].var() && w[0].is_positive() != w[1].is_positive())
    }

    /// Classify by positive-literal count. The empty clause is a goal.
    pub fn classify(&self) -> ClauseKind {
        let positives = self.literals.iter().filter(|l| l.is_positive()).count();
        match (positives, self.literals.len()) {
            (0, _) => ClauseKind::Goal,
            (1, 1) => ClauseKind::PositiveUnit,
            (1, _) => ClauseKind::Definite,
            _ => ClauseKind::NonHorn,
        }
    }

    pub fn is_horn(&self) -> bool {
        self.classify() != ClauseKind::NonHorn
    }

    /// The positive literal of a Horn clause, if any.
    pub fn positive_literal(&self) -> Option<Literal> {
        self.literals.iter().copied().find(|l| l.is_positive())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.literals.is_empty() {
            return write!(f, "⊥");
        }
        write!(f, "(")?;
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("clause {clause_index} references variable {var} above declared count {declared}")]
    VariableOutOfRange {
        clause_index: usize,
        var: u32,
        declared: u32,
    },
}

/// A CNF formula: clauses in input order plus the declared variable count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    clauses: Vec<Clause>,
    variable_count: u32,
    comments: Vec<String>,
}

impl Formula {
    /// Build with an explicit variable count, checking every literal
    /// stays within it.
    pub fn new(
        variable_count: u32,
        clauses: impl IntoIterator<Item = Clause>,
    ) -> Result<Formula, FormulaError> {
        let clauses: Vec<Clause> = clauses.into_iter().collect();
        for (i, c) in clauses.iter().enumerate() {
            if let Some(v) = c.max_var() {
                if v.id() > variable_count {
                    return Err(FormulaError::VariableOutOfRange {
                        clause_index: i,
                        var: v.id(),
                        declared: variable_count,
                    });
                }
            }
        }
        Ok(Formula {
            clauses,
            variable_count,
            comments: vec![],
        })
    }

    /// Build with the variable count inferred as the maximum id referenced.
    pub fn from_clauses(clauses: impl IntoIterator<Item = Clause>) -> Formula {
        let clauses: Vec<Clause> = clauses.into_iter().collect();
        let variable_count = clauses
            .iter()
            .filter_map(|c| c.max_var())
            .map(|v| v.id())
            .max()
            .unwrap_or(0);
        Formula {
            clauses,
            variable_count,
            comments: vec![],
        }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn variable_count(&self) -> u32 {
        self.variable_count
    }

    /// Leading comment block carried through emit.
    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn set_comments(&mut self, comments: Vec<String>) {
        self.comments = comments;
    }

    pub fn is_horn(&self) -> bool {
        self.clauses.iter().all(Clause::is_horn)
    }

    /// Index and clause of the first non-Horn clause, if any.
    pub fn first_non_horn(&self) -> Option<(usize, &Clause)> {
        self.clauses
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_horn())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, " ∧ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clause(lits: &[i64]) -> Clause {
        Clause::from_dimacs(lits.iter().copied())
    }

    #[test]
    fn negation_is_involution() {
        let l = Literal::neg(7);
        assert_eq!(l.negate().negate(), l);
    }

    #[test]
    fn canonical_order_negative_first() {
        let c = clause(&[3, -3, 1, -2]);
        let lits: Vec<i64> = c.iter().map(Literal::to_dimacs).collect();
        assert_eq!(lits, vec![1, -2, -3, 3]);
    }

    #[test]
    fn duplicates_removed() {
        let c = clause(&[1, 1]);
        assert_eq!(c.width(), 1);
    }

    #[test]
    fn tautology_detection() {
        assert!(clause(&[1, -1]).is_tautology());
        assert!(clause(&[2, 3, -2, -3]).is_tautology());
        assert!(!Clause::empty().is_tautology());
        assert!(!clause(&[1, -2]).is_tautology());
    }

    #[test]
    fn classification() {
        assert_eq!(clause(&[-1, -2, 3]).classify(), ClauseKind::Definite);
        assert_eq!(clause(&[1, 2, 3]).classify(), ClauseKind::NonHorn);
        assert_eq!(clause(&[5]).classify(), ClauseKind::PositiveUnit);
        assert_eq!(clause(&[-1, -2]).classify(), ClauseKind::Goal);
        assert_eq!(Clause::empty().classify(), ClauseKind::Goal);
    }

    #[test]
    fn horn_check() {
        let s3_wide = Formula::from_clauses([clause(&[-1, -2]), clause(&[1, 2, 3])]);
        assert!(!s3_wide.is_horn());
        assert_eq!(s3_wide.first_non_horn().unwrap().0, 1);
        assert!(Formula::from_clauses([]).is_horn());
    }

    #[test]
    fn variable_count_enforced() {
        let err = Formula::new(2, [clause(&[1, -3])]).unwrap_err();
        assert_eq!(
            err,
            FormulaError::VariableOutOfRange {
                clause_index: 0,
                var: 3,
                declared: 2
            }
        );
    }
}
