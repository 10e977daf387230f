//! Finite Ext-algebras as explicit tables: a monoid carrier together with a
//! composition-closed set of unary operations containing all left and right
//! translations. Operations are stored extensionally as deduplicated
//! transformation tables; identity of ops is table equality.

use std::collections::HashMap;
use std::fmt;

use crate::error::Error;
use crate::Result;

/// One defect found by [`ExtAlgebra::validate`], with its first witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Dimensions(String),
    Associativity { a: String, b: String, c: String },
    Identity(String),
    IdentityOp(String),
    DuplicateOp { first: String, second: String },
    MissingTranslation { side: &'static str, element: String },
    NotComposed { outer: String, inner: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Dimensions(msg) => write!(f, "dimension mismatch: {msg}"),
            Violation::Associativity { a, b, c } => {
                write!(f, "associativity fails on ({a}·{b})·{c} vs {a}·({b}·{c})")
            }
            Violation::Identity(name) => write!(f, "identity is not neutral against {name}"),
            Violation::IdentityOp(msg) => write!(f, "identity operation: {msg}"),
            Violation::DuplicateOp { first, second } => {
                write!(f, "ops {first} and {second} share one table")
            }
            Violation::MissingTranslation { side, element } => {
                write!(f, "missing {side} translation by {element}")
            }
            Violation::NotComposed { outer, inner } => {
                write!(f, "composition {outer} ∘ {inner} is not in the op set")
            }
        }
    }
}

/// What the closure completion added on top of the declared tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AddedOp {
    LeftTranslation(String),
    RightTranslation(String),
    Composition(String, String),
}

impl fmt::Display for AddedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AddedOp::LeftTranslation(e) => write!(f, "left translation by {e}"),
            AddedOp::RightTranslation(e) => write!(f, "right translation by {e}"),
            AddedOp::Composition(o, i) => write!(f, "composition {o} ∘ {i}"),
        }
    }
}

/// Report of a closure completion run: names and provenance of every op the
/// completion appended. Declared rows are never altered.
#[derive(Debug, Clone, Default)]
pub struct ClosureReport {
    pub added: Vec<(String, AddedOp)>,
}

/// A finite Ext-algebra: carrier monoid (element names, identity, n×n
/// multiplication table) plus the operation monoid O(R) as transformation
/// tables over the carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtAlgebra {
    element_names: Vec<String>,
    identity: usize,
    mult: Vec<usize>,
    op_tables: Vec<Vec<usize>>,
    op_names: Vec<String>,
    identity_op: usize,
    op_lookup: HashMap<Vec<usize>, usize>,
}

impl ExtAlgebra {
    /// Assembles an algebra from raw tables. Dimensions are checked here;
    /// the algebraic laws are checked by [`ExtAlgebra::validate`].
    pub fn new(
        element_names: Vec<String>,
        identity: usize,
        mult: Vec<usize>,
        op_tables: Vec<Vec<usize>>,
        op_names: Vec<String>,
        identity_op: usize,
    ) -> Result<Self> {
        let n = element_names.len();
        if n == 0 {
            return Err(Error::MalformedTables("empty carrier".into()));
        }
        if mult.len() != n * n {
            return Err(Error::MalformedTables(format!(
                "mult table has {} entries, expected {}",
                mult.len(),
                n * n
            )));
        }
        if op_tables.len() != op_names.len() {
            return Err(Error::MalformedTables(format!(
                "{} op tables but {} op names",
                op_tables.len(),
                op_names.len()
            )));
        }
        if identity >= n {
            return Err(Error::MalformedTables("identity index out of range".into()));
        }
        if identity_op >= op_tables.len() {
            return Err(Error::MalformedTables(
                "identity op index out of range".into(),
            ));
        }
        if mult.iter().any(|&e| e >= n) {
            return Err(Error::MalformedTables("mult entry out of range".into()));
        }
        for (name, table) in op_names.iter().zip(&op_tables) {
            if table.len() != n {
                return Err(Error::MalformedTables(format!(
                    "op {name} has {} entries, expected {n}",
                    table.len()
                )));
            }
            if table.iter().any(|&e| e >= n) {
                return Err(Error::MalformedTables(format!(
                    "op {name} entry out of range"
                )));
            }
        }
        let mut op_lookup = HashMap::new();
        for (i, table) in op_tables.iter().enumerate() {
            op_lookup.entry(table.clone()).or_insert(i);
        }
        Ok(Self {
            element_names,
            identity,
            mult,
            op_tables,
            op_names,
            identity_op,
            op_lookup,
        })
    }

    pub fn size(&self) -> usize {
        self.element_names.len()
    }

    pub fn op_count(&self) -> usize {
        self.op_tables.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn identity_op(&self) -> usize {
        self.identity_op
    }

    pub fn element_name(&self, index: usize) -> &str {
        &self.element_names[index]
    }

    pub fn element_names(&self) -> &[String] {
        &self.element_names
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.element_names.iter().position(|n| n == name)
    }

    pub fn op_name(&self, index: usize) -> &str {
        &self.op_names[index]
    }

    pub fn op_names(&self) -> &[String] {
        &self.op_names
    }

    pub fn op_table(&self, index: usize) -> &[usize] {
        &self.op_tables[index]
    }

    pub fn op_index_of(&self, table: &[usize]) -> Option<usize> {
        self.op_lookup.get(table).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.size() + b]
    }

    pub fn apply(&self, op: usize, x: usize) -> usize {
        self.op_tables[op][x]
    }

    /// Table of the left translation x ↦ r·x.
    pub fn left_translation(&self, r: usize) -> Vec<usize> {
        (0..self.size()).map(|x| self.mul(r, x)).collect()
    }

    /// Table of the right translation x ↦ x·r.
    pub fn right_translation(&self, r: usize) -> Vec<usize> {
        (0..self.size()).map(|x| self.mul(x, r)).collect()
    }

    /// Table of outer ∘ inner (apply inner first).
    pub fn compose_tables(outer: &[usize], inner: &[usize]) -> Vec<usize> {
        inner.iter().map(|&x| outer[x]).collect()
    }

    /// The identity transformation table.
    pub fn identity_table(&self) -> Vec<usize> {
        (0..self.size()).collect()
    }

    /// Checks every Ext-algebra invariant; an empty report means valid.
    /// Each violation names its first witness.
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = Vec::new();
        let n = self.size();
        // Associativity, first witness only.
        'assoc: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        report.push(Violation::Associativity {
                            a: self.element_names[a].clone(),
                            b: self.element_names[b].clone(),
                            c: self.element_names[c].clone(),
                        });
                        break 'assoc;
                    }
                }
            }
        }
        for a in 0..n {
            if self.mul(self.identity, a) != a || self.mul(a, self.identity) != a {
                report.push(Violation::Identity(self.element_names[a].clone()));
                break;
            }
        }
        if self.op_tables[self.identity_op] != self.identity_table() {
            report.push(Violation::IdentityOp(format!(
                "op {} is not the identity transformation",
                self.op_names[self.identity_op]
            )));
        } else if self.op_index_of(&self.identity_table()).is_none() {
            report.push(Violation::IdentityOp(
                "identity transformation missing from op set".into(),
            ));
        }
        for i in 0..self.op_tables.len() {
            for j in i + 1..self.op_tables.len() {
                if self.op_tables[i] == self.op_tables[j] {
                    report.push(Violation::DuplicateOp {
                        first: self.op_names[i].clone(),
                        second: self.op_names[j].clone(),
                    });
                }
            }
        }
        for r in 0..n {
            if self.op_index_of(&self.left_translation(r)).is_none() {
                report.push(Violation::MissingTranslation {
                    side: "left",
                    element: self.element_names[r].clone(),
                });
            }
            if self.op_index_of(&self.right_translation(r)).is_none() {
                report.push(Violation::MissingTranslation {
                    side: "right",
                    element: self.element_names[r].clone(),
                });
            }
        }
        'closure: for i in 0..self.op_tables.len() {
            for j in 0..self.op_tables.len() {
                let composed = Self::compose_tables(&self.op_tables[i], &self.op_tables[j]);
                if self.op_index_of(&composed).is_none() {
                    report.push(Violation::NotComposed {
                        outer: self.op_names[i].clone(),
                        inner: self.op_names[j].clone(),
                    });
                    break 'closure;
                }
            }
        }
        report
    }

    /// Returns the validated algebra or the full violation report as an error.
    pub fn validated(self) -> Result<Self> {
        let report = self.validate();
        if report.is_empty() {
            Ok(self)
        } else {
            Err(Error::Validation(report))
        }
    }

    /// Closes the op set under translations and composition, appending new
    /// tables after the declared ones (which are never altered). Returns the
    /// completed algebra and a report of what was added.
    ///
    /// The paper's example tables list only distinguished ops; the definition
    /// demands translations and composition closure, so loaders call this.
    pub fn complete_closure(mut self, cap: usize) -> Result<(Self, ClosureReport)> {
        let mut report = ClosureReport::default();
        let add = |alg: &mut ExtAlgebra,
                       report: &mut ClosureReport,
                       table: Vec<usize>,
                       name: String,
                       what: AddedOp|
         -> bool {
            if alg.op_lookup.contains_key(&table) {
                return false;
            }
            let idx = alg.op_tables.len();
            alg.op_lookup.insert(table.clone(), idx);
            alg.op_tables.push(table);
            let name = alg.fresh_op_name(&name);
            alg.op_names.push(name.clone());
            report.added.push((name, what));
            true
        };
        for r in 0..self.size() {
            let element = self.element_names[r].clone();
            let table = self.left_translation(r);
            add(
                &mut self,
                &mut report,
                table,
                format!("lmul_{element}"),
                AddedOp::LeftTranslation(element.clone()),
            );
            let table = self.right_translation(r);
            add(
                &mut self,
                &mut report,
                table,
                format!("rmul_{element}"),
                AddedOp::RightTranslation(element),
            );
        }
        // Worklist composition closure over the growing table set.
        let mut next = 0;
        while next < self.op_tables.len() {
            if self.op_tables.len() > cap {
                return Err(Error::SizeCapExceeded(format!(
                    "op closure grew past {cap} tables"
                )));
            }
            let current = next;
            next += 1;
            for other in 0..self.op_tables.len() {
                for (i, j) in [(current, other), (other, current)] {
                    let composed =
                        Self::compose_tables(&self.op_tables[i], &self.op_tables[j]);
                    let name = format!("o{}", self.op_tables.len());
                    let provenance =
                        AddedOp::Composition(self.op_names[i].clone(), self.op_names[j].clone());
                    add(&mut self, &mut report, composed, name, provenance);
                }
            }
        }
        // The identity transformation is the translation by the identity
        // element, so it exists by now; repoint identity_op at it.
        self.identity_op = self
            .op_index_of(&self.identity_table())
            .expect("closure added the identity translation");
        Ok((self, report))
    }

    fn fresh_op_name(&self, base: &str) -> String {
        if !self.op_names.iter().any(|n| n == base) {
            return base.to_string();
        }
        let mut k = 2usize;
        loop {
            let candidate = format!("{base}{k}");
            if !self.op_names.iter().any(|n| n == &candidate) {
                return candidate;
            }
            k += 1;
        }
    }

    /// The one-element Ext-algebra.
    pub fn trivial() -> Self {
        ExtAlgebra::new(
            vec!["1".into()],
            0,
            vec![0],
            vec![vec![0]],
            vec!["id".into()],
            0,
        )
        .expect("trivial tables")
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The paper's three-element recognizer of {aⁿbⁿ}: elements 1, x, 0 with
    /// x·x = 0, ops {id, ext, lmul_x, zero}.
    pub fn example_one() -> ExtAlgebra {
        let names = vec!["1".to_string(), "x".to_string(), "0".to_string()];
        let mult = vec![
            0, 1, 2, //
            1, 2, 2, //
            2, 2, 2,
        ];
        let ops = vec![
            vec![0, 1, 2], // id
            vec![1, 1, 2], // ext_{a,b}
            vec![1, 2, 2], // ext_{x,1} = left translation by x
            vec![2, 2, 2], // ext_{x,x} = zero map
        ];
        let op_names = vec![
            "id".to_string(),
            "ext_ab".to_string(),
            "ext_x1".to_string(),
            "ext_xx".to_string(),
        ];
        ExtAlgebra::new(names, 0, mult, ops, op_names, 0).unwrap()
    }

    #[test]
    fn example_one_is_valid() {
        assert!(example_one().validate().is_empty());
    }

    #[test]
    fn broken_associativity_is_witnessed() {
        let mut alg = example_one();
        // x·0 := x breaks (x·0)·x = x·x = 0 against x·(0·x) = x·0 = x.
        alg.mult[1 * 3 + 2] = 1;
        let report = alg.validate();
        assert!(report
            .iter()
            .any(|v| matches!(v, Violation::Associativity { .. })));
    }

    #[test]
    fn missing_translation_is_witnessed() {
        let alg = example_one();
        let trimmed = ExtAlgebra::new(
            alg.element_names.clone(),
            0,
            alg.mult.clone(),
            vec![alg.op_tables[0].clone(), alg.op_tables[1].clone(), alg.op_tables[3].clone()],
            vec!["id".into(), "ext_ab".into(), "ext_xx".into()],
            0,
        )
        .unwrap();
        let report = trimmed.validate();
        assert!(report.iter().any(|v| matches!(
            v,
            Violation::MissingTranslation { element, .. } if element == "x"
        )));
    }

    #[test]
    fn duplicate_tables_are_witnessed() {
        let alg = example_one();
        let dup = ExtAlgebra::new(
            alg.element_names.clone(),
            0,
            alg.mult.clone(),
            vec![
                alg.op_tables[0].clone(),
                alg.op_tables[1].clone(),
                alg.op_tables[1].clone(),
                alg.op_tables[2].clone(),
                alg.op_tables[3].clone(),
            ],
            vec![
                "id".into(),
                "ext_ab".into(),
                "again".into(),
                "ext_x1".into(),
                "ext_xx".into(),
            ],
            0,
        )
        .unwrap();
        assert!(dup
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::DuplicateOp { .. })));
    }

    #[test]
    fn closure_completion_adds_only_missing_tables() {
        let alg = example_one();
        // Drop everything but the declared ext op; completion must rebuild
        // id (as lmul_1), the translations and the compositions.
        let partial = ExtAlgebra::new(
            alg.element_names.clone(),
            0,
            alg.mult.clone(),
            vec![alg.op_tables[1].clone()],
            vec!["ext_ab".into()],
            0,
        )
        .unwrap();
        let (completed, report) = partial.complete_closure(4096).unwrap();
        assert!(completed.validate().is_empty());
        assert_eq!(completed.op_count(), 4);
        assert_eq!(completed.op_table(0), alg.op_tables[1].as_slice());
        assert!(!report.added.is_empty());
        // Completing a complete algebra is a no-op.
        let (again, report) = completed.clone().complete_closure(4096).unwrap();
        assert!(report.added.is_empty());
        assert_eq!(again.op_count(), completed.op_count());
    }

    #[test]
    fn spec_noted_edit_stays_associative() {
        // Setting x·x = x keeps the table associative; validation still
        // passes because the needed translations coincide with declared
        // tables.
        let mut alg = example_one();
        alg.mult[1 * 3 + 1] = 1;
        let report = alg.validate();
        assert!(!report
            .iter()
            .any(|v| matches!(v, Violation::Associativity { .. })));
    }
}
