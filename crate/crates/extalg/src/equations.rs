//! Equation engines for the visibly counter classes. Both equations
//! quantify over pairs of contexts with equal height signature — exactly
//! the side condition making the cross contexts (u,v′) and (u′,v)
//! well-matched — and over elements of the morphism image.
//!
//! A counterexample is a machine-checkable certificate of non-membership
//! (the equations are sound for their classes); `Satisfied` is never a
//! membership proof.

use std::collections::{BTreeMap, HashMap};


use crate::error::Error;
use crate::morphism::{
    context_profile, enumerate_morphisms, profile_op_table, Morphism, RecognizerSpec,
};
use crate::profinite::{eval_with_morphism, idempotent_power_op, ProfiniteTerm};
use crate::words::{enumerate_contexts, Context};
use crate::Result;

/// Which class-defining equation to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationClass {
    /// Visibly counter languages:
    /// ext^ω_{u,v}(ext^ω_{u′,v′}(x)) = ext^ω_{u,v}(ext^ω_{u,v′}(ext^ω_{u′,v′}(x)))
    ///                               = ext^ω_{u,v}(ext^ω_{u′,v}(ext^ω_{u′,v′}(x))).
    Vcl,
    /// Threshold-zero visibly counter languages:
    /// ext^ω_{u,v}(ext^ω_{u,v′}(x)·y·ext^ω_{u′,v}(z)) = ext^ω_{u,v′}(x)·y·ext^ω_{u′,v}(z).
    ZeroVcl,
}

impl EquationClass {
    pub fn name(self) -> &'static str {
        match self {
            EquationClass::Vcl => "vcl",
            EquationClass::ZeroVcl => "vcl0",
        }
    }
}

/// Morphism quantification: the spec's own morphism, or every enumerable
/// morphism into the algebra (capped).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismMode {
    Canonical,
    All { cap: usize },
}

impl MorphismMode {
    pub fn name(self) -> &'static str {
        match self {
            MorphismMode::Canonical => "canonical",
            MorphismMode::All { .. } => "all",
        }
    }
}

/// A refuting instantiation: contexts, element assignment, and the two
/// profinite terms with their unequal values under `morphism`.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub class: EquationClass,
    /// The outer context (u, v).
    pub outer: Context,
    /// The inner context (u′, v′).
    pub inner: Context,
    pub assignment: BTreeMap<String, usize>,
    pub left_term: ProfiniteTerm,
    pub right_term: ProfiniteTerm,
    pub left_value: usize,
    pub right_value: usize,
    /// Which pair of the equation chain differs.
    pub which: &'static str,
    pub morphism: Morphism,
}

impl Counterexample {
    /// Re-evaluates both terms from scratch; a certificate must reproduce
    /// its stated unequal values.
    pub fn verify(&self) -> Result<()> {
        let left = eval_with_morphism(&self.morphism, &self.left_term, &self.assignment)?;
        let right = eval_with_morphism(&self.morphism, &self.right_term, &self.assignment)?;
        if left != self.left_value || right != self.right_value || left == right {
            return Err(Error::MalformedTables(format!(
                "certificate does not re-verify: stated {} ≠ {}, recomputed {} vs {}",
                self.left_value, self.right_value, left, right
            )));
        }
        Ok(())
    }
}

/// Quantification bounds of a successful (counterexample-free) check.
#[derive(Debug, Clone)]
pub struct SatisfiedReport {
    pub class: EquationClass,
    pub mode: MorphismMode,
    pub max_context_len: usize,
    /// Contexts enumerated before and after profile deduplication.
    pub contexts_enumerated: usize,
    pub contexts_deduped: usize,
    pub pairs_checked: usize,
    pub morphisms_checked: usize,
    /// Size of the evaluation domain (the morphism image) per morphism.
    pub domain_sizes: Vec<usize>,
}

/// Outcome of an equation check.
#[derive(Debug, Clone)]
pub enum EquationCheckResult {
    Satisfied(SatisfiedReport),
    Counterexample(Box<Counterexample>),
}

impl EquationCheckResult {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, EquationCheckResult::Satisfied(_))
    }
}

/// Checks the visibly counter equation (three-term chain).
pub fn check_vcl_equation(
    spec: &RecognizerSpec,
    max_context_len: usize,
    mode: MorphismMode,
) -> Result<EquationCheckResult> {
    check_equation(spec, EquationClass::Vcl, max_context_len, mode)
}

/// Checks the threshold-zero equation (absorption of the outer ω-power).
pub fn check_zero_vcl_equation(
    spec: &RecognizerSpec,
    max_context_len: usize,
    mode: MorphismMode,
) -> Result<EquationCheckResult> {
    check_equation(spec, EquationClass::ZeroVcl, max_context_len, mode)
}

pub fn check_equation(
    spec: &RecognizerSpec,
    class: EquationClass,
    max_context_len: usize,
    mode: MorphismMode,
) -> Result<EquationCheckResult> {
    let alphabet = spec.alphabet().clone();
    let contexts = enumerate_contexts(&alphabet, max_context_len);
    let morphisms: Vec<Morphism> = match mode {
        MorphismMode::Canonical => vec![spec.morphism.clone()],
        MorphismMode::All { cap } => enumerate_morphisms(spec.algebra(), &alphabet, cap)?,
    };
    let mut report = SatisfiedReport {
        class,
        mode,
        max_context_len,
        contexts_enumerated: contexts.len(),
        contexts_deduped: 0,
        pairs_checked: 0,
        morphisms_checked: 0,
        domain_sizes: Vec::new(),
    };
    for morphism in &morphisms {
        report.morphisms_checked += 1;
        if let Some(counterexample) =
            check_one_morphism(morphism, class, &contexts, &alphabet, &mut report)?
        {
            return Ok(EquationCheckResult::Counterexample(Box::new(counterexample)));
        }
    }
    Ok(EquationCheckResult::Satisfied(report))
}

/// Left or right half of a context's decomposition; contexts sharing both
/// halves are interchangeable in every pair, so later duplicates are
/// dropped (first representative wins).
type HalfProfile = (Vec<usize>, Vec<char>);

struct ContextEntry {
    ctx: Context,
    height: i64,
    op: usize,
    uprof: usize,
    vprof: usize,
}

fn check_one_morphism(
    morphism: &Morphism,
    class: EquationClass,
    contexts: &[Context],
    alphabet: &crate::alphabet::PushdownAlphabet,
    report: &mut SatisfiedReport,
) -> Result<Option<Counterexample>> {
    let algebra = morphism.algebra();
    let domain = morphism.image();
    report.domain_sizes.push(domain.len());

    // Intern the decomposition halves and deduplicate contexts.
    let mut uprofiles: Vec<(Vec<usize>, Vec<char>)> = Vec::new();
    let mut vprofiles: Vec<(Vec<usize>, Vec<char>)> = Vec::new();
    let mut uprof_ids: HashMap<HalfProfile, usize> = HashMap::new();
    let mut vprof_ids: HashMap<HalfProfile, usize> = HashMap::new();
    let mut seen_pairs: HashMap<(usize, usize), ()> = HashMap::new();
    let mut entries: Vec<ContextEntry> = Vec::new();
    for ctx in contexts {
        let profile = context_profile(morphism, ctx)?;
        let table = profile_op_table(morphism, &profile);
        let op = algebra.op_index_of(&table).ok_or_else(|| {
            Error::ClosureViolation(format!("op of ext_{ctx} missing from the op set"))
        })?;
        let uh: HalfProfile = (profile.left_blocks.clone(), profile.calls.clone());
        let vh: HalfProfile = (profile.right_blocks.clone(), profile.returns.clone());
        let next_u = uprofiles.len();
        let uprof = *uprof_ids.entry(uh.clone()).or_insert_with(|| {
            uprofiles.push(uh);
            next_u
        });
        let next_v = vprofiles.len();
        let vprof = *vprof_ids.entry(vh.clone()).or_insert_with(|| {
            vprofiles.push(vh);
            next_v
        });
        if seen_pairs.insert((uprof, vprof), ()).is_some() {
            continue;
        }
        entries.push(ContextEntry {
            ctx: ctx.clone(),
            height: ctx.height(alphabet)?,
            op,
            uprof,
            vprof,
        });
    }
    report.contexts_deduped = entries.len();

    // Same-height buckets in enumeration order.
    let mut buckets: HashMap<i64, Vec<usize>> = HashMap::new();
    for (i, entry) in entries.iter().enumerate() {
        buckets.entry(entry.height).or_default().push(i);
    }

    // Memoized machinery: cross ops, ω-powers, per-quadruple verdicts.
    let mut cross_memo: HashMap<(usize, usize), usize> = HashMap::new();
    let mut omega_memo: HashMap<usize, usize> = HashMap::new();
    let mut cross_op = |uprof: usize, vprof: usize| -> Result<usize> {
        if let Some(&op) = cross_memo.get(&(uprof, vprof)) {
            return Ok(op);
        }
        let (left_blocks, calls) = uprofiles[uprof].clone();
        let (right_blocks, returns) = vprofiles[vprof].clone();
        assert_eq!(calls.len(), returns.len(), "cross pairs share heights");
        let profile = crate::morphism::ContextProfile {
            left_blocks,
            calls,
            right_blocks,
            returns,
        };
        let table = profile_op_table(morphism, &profile);
        let op = algebra
            .op_index_of(&table)
            .ok_or_else(|| Error::ClosureViolation("cross op missing from the op set".into()))?;
        cross_memo.insert((uprof, vprof), op);
        Ok(op)
    };
    let omega = |op: usize, memo: &mut HashMap<usize, usize>| -> usize {
        if let Some(&o) = memo.get(&op) {
            return o;
        }
        let o = idempotent_power_op(algebra, op);
        memo.insert(op, o);
        o
    };

    match class {
        EquationClass::Vcl => {
            // verdict: (x, left, right, which)
            let mut verdicts: HashMap<(usize, usize, usize, usize), Option<(usize, usize, usize, &'static str)>> =
                HashMap::new();
            for i in 0..entries.len() {
                for &j in &buckets[&entries[i].height] {
                    report.pairs_checked += 1;
                    let e1 = entries[i].op;
                    let e2 = entries[j].op;
                    let e12 = cross_op(entries[i].uprof, entries[j].vprof)?;
                    let e21 = cross_op(entries[j].uprof, entries[i].vprof)?;
                    let verdict = *verdicts
                        .entry((e1, e2, e12, e21))
                        .or_insert_with(|| {
                            let w1 = omega(e1, &mut omega_memo);
                            let w2 = omega(e2, &mut omega_memo);
                            let w12 = omega(e12, &mut omega_memo);
                            let w21 = omega(e21, &mut omega_memo);
                            for &x in &domain {
                                let t = algebra.apply(w2, x);
                                let first = algebra.apply(w1, t);
                                let second = algebra.apply(w1, algebra.apply(w12, t));
                                if first != second {
                                    return Some((x, first, second, "first-second"));
                                }
                                let third = algebra.apply(w1, algebra.apply(w21, t));
                                if first != third {
                                    return Some((x, first, third, "first-third"));
                                }
                            }
                            None
                        });
                    if let Some((x, left_value, right_value, which)) = verdict {
                        let outer = entries[i].ctx.clone();
                        let inner = entries[j].ctx.clone();
                        let cross = |left: &Context, right: &Context| {
                            Context::new(alphabet, left.left().clone(), right.right().clone())
                                .expect("equal heights make the cross context valid")
                        };
                        let base = ProfiniteTerm::ext_omega(
                            inner.clone(),
                            ProfiniteTerm::var("x"),
                        );
                        let left_term = ProfiniteTerm::ext_omega(outer.clone(), base.clone());
                        let mid = match which {
                            "first-second" => cross(&outer, &inner),
                            _ => cross(&inner, &outer),
                        };
                        let right_term = ProfiniteTerm::ext_omega(
                            outer.clone(),
                            ProfiniteTerm::ext_omega(mid, base),
                        );
                        let counterexample = Counterexample {
                            class,
                            outer,
                            inner,
                            assignment: BTreeMap::from([("x".to_string(), x)]),
                            left_term,
                            right_term,
                            left_value,
                            right_value,
                            which,
                            morphism: morphism.clone(),
                        };
                        counterexample.verify()?;
                        return Ok(Some(counterexample));
                    }
                }
            }
        }
        EquationClass::ZeroVcl => {
            // verdict: (x, y, z, left, right)
            let mut verdicts: HashMap<(usize, usize, usize), Option<(usize, usize, usize, usize, usize)>> =
                HashMap::new();
            for i in 0..entries.len() {
                for &j in &buckets[&entries[i].height] {
                    report.pairs_checked += 1;
                    let e1 = entries[i].op;
                    let e_left = cross_op(entries[i].uprof, entries[j].vprof)?;
                    let e_right = cross_op(entries[j].uprof, entries[i].vprof)?;
                    let verdict = *verdicts
                        .entry((e1, e_left, e_right))
                        .or_insert_with(|| {
                            let w1 = omega(e1, &mut omega_memo);
                            let wl = omega(e_left, &mut omega_memo);
                            let wr = omega(e_right, &mut omega_memo);
                            for &x in &domain {
                                let p = algebra.apply(wl, x);
                                for &y in &domain {
                                    let py = algebra.mul(p, y);
                                    for &z in &domain {
                                        let rhs = algebra.mul(py, algebra.apply(wr, z));
                                        let lhs = algebra.apply(w1, rhs);
                                        if lhs != rhs {
                                            return Some((x, y, z, lhs, rhs));
                                        }
                                    }
                                }
                            }
                            None
                        });
                    if let Some((x, y, z, left_value, right_value)) = verdict {
                        let outer = entries[i].ctx.clone();
                        let inner = entries[j].ctx.clone();
                        let cross = |left: &Context, right: &Context| {
                            Context::new(alphabet, left.left().clone(), right.right().clone())
                                .expect("equal heights make the cross context valid")
                        };
                        let rhs_term = ProfiniteTerm::concat(
                            ProfiniteTerm::concat(
                                ProfiniteTerm::ext_omega(
                                    cross(&outer, &inner),
                                    ProfiniteTerm::var("x"),
                                ),
                                ProfiniteTerm::var("y"),
                            ),
                            ProfiniteTerm::ext_omega(
                                cross(&inner, &outer),
                                ProfiniteTerm::var("z"),
                            ),
                        );
                        let left_term =
                            ProfiniteTerm::ext_omega(outer.clone(), rhs_term.clone());
                        let counterexample = Counterexample {
                            class,
                            outer,
                            inner,
                            assignment: BTreeMap::from([
                                ("x".to_string(), x),
                                ("y".to_string(), y),
                                ("z".to_string(), z),
                            ]),
                            left_term,
                            right_term: rhs_term,
                            left_value,
                            right_value,
                            which: "lhs-rhs",
                            morphism: morphism.clone(),
                        };
                        counterexample.verify()?;
                        return Ok(Some(counterexample));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ExtAlgebra;
    use crate::morphism::tests::anbn_spec;
    use crate::profinite::tests::separation_spec;

    #[test]
    fn anbn_satisfies_both_equations() {
        let spec = anbn_spec();
        let result = check_vcl_equation(&spec, 6, MorphismMode::Canonical).unwrap();
        assert!(result.is_satisfied(), "{result:?}");
        let result = check_zero_vcl_equation(&spec, 6, MorphismMode::Canonical).unwrap();
        assert!(result.is_satisfied(), "{result:?}");
    }

    #[test]
    fn one_element_spec_satisfies_everything() {
        let alphabet =
            crate::alphabet::PushdownAlphabet::new(&['a'], &['b'], &['c']).unwrap();
        let algebra = ExtAlgebra::trivial();
        let morphism = Morphism::new(
            alphabet,
            algebra,
            BTreeMap::from([('c', 0)]),
            BTreeMap::from([(('a', 'b'), 0)]),
        )
        .unwrap();
        let spec =
            RecognizerSpec::new(morphism, std::collections::BTreeSet::from([0])).unwrap();
        assert!(check_vcl_equation(&spec, 4, MorphismMode::Canonical)
            .unwrap()
            .is_satisfied());
        assert!(check_zero_vcl_equation(&spec, 4, MorphismMode::Canonical)
            .unwrap()
            .is_satisfied());
    }

    #[test]
    fn separation_language_is_not_zero_vcl() {
        // The separation algebra's canonical morphism pairs each call with
        // one return type; the recognized language fails the absorption
        // equation at the crossed contexts (a,d), (c,b).
        let spec = separation_spec();
        let result = check_zero_vcl_equation(&spec, 2, MorphismMode::Canonical).unwrap();
        let EquationCheckResult::Counterexample(cex) = result else {
            panic!("expected a counterexample");
        };
        assert_eq!(cex.outer.to_string(), "(a,d)");
        assert_eq!(cex.inner.to_string(), "(c,b)");
        cex.verify().unwrap();
    }

    #[test]
    fn anbn_satisfies_vcl_equation_for_every_morphism() {
        let spec = anbn_spec();
        let result =
            check_vcl_equation(&spec, 6, MorphismMode::All { cap: 10_000 }).unwrap();
        assert!(result.is_satisfied(), "{result:?}");
        if let EquationCheckResult::Satisfied(report) = result {
            assert_eq!(report.morphisms_checked, 4);
        }
    }
}
