//! ω-power semantics on finite Ext-algebras, profinite term evaluation and
//! separation. In a finite monoid the sequence e^{n!} stabilizes to the
//! unique idempotent power of e; that idempotent is the image of the
//! profinite ω-power under any continuous extension.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::ExtAlgebra;
use crate::alphabet::PushdownAlphabet;
use crate::error::Error;
use crate::morphism::{context_op, enumerate_morphisms, Morphism};
use crate::morphism::RecognizerSpec;
use crate::words::{Context, Word};
use crate::Result;

/// The unique idempotent power r^k (k ≥ 1 minimal with r^k·r^k = r^k) of a
/// carrier element; equals lim r^{n!}.
pub fn idempotent_power_element(algebra: &ExtAlgebra, element: usize) -> usize {
    let mut power = element;
    loop {
        if algebra.mul(power, power) == power {
            return power;
        }
        power = algebra.mul(power, element);
    }
}

/// The unique idempotent power of an op under composition, as an op index;
/// composition closure keeps every power inside the op set.
pub fn idempotent_power_op(algebra: &ExtAlgebra, op: usize) -> usize {
    let mut power = algebra.op_table(op).to_vec();
    loop {
        let squared = ExtAlgebra::compose_tables(&power, &power);
        if squared == power {
            return algebra
                .op_index_of(&power)
                .expect("powers of an op stay in the closed op set");
        }
        power = ExtAlgebra::compose_tables(&power, algebra.op_table(op));
    }
}

/// Same computation on a raw table, for callers outside a closed op set.
pub fn idempotent_power_table(table: &[usize]) -> Vec<usize> {
    let mut power = table.to_vec();
    loop {
        let squared = ExtAlgebra::compose_tables(&power, &power);
        if squared == power {
            return power;
        }
        power = ExtAlgebra::compose_tables(&power, table);
    }
}

/// Abstract syntax of profinite terms: variables, letters, concatenation,
/// contexts and ω-powers of contexts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfiniteTerm {
    Var(String),
    EmptyWord,
    Letter(char),
    Concat(Box<ProfiniteTerm>, Box<ProfiniteTerm>),
    Ext(Context, Box<ProfiniteTerm>),
    ExtOmega(Context, Box<ProfiniteTerm>),
}

impl ProfiniteTerm {
    pub fn concat(left: ProfiniteTerm, right: ProfiniteTerm) -> ProfiniteTerm {
        ProfiniteTerm::Concat(Box::new(left), Box::new(right))
    }

    pub fn ext(ctx: Context, inner: ProfiniteTerm) -> ProfiniteTerm {
        ProfiniteTerm::Ext(ctx, Box::new(inner))
    }

    pub fn ext_omega(ctx: Context, inner: ProfiniteTerm) -> ProfiniteTerm {
        ProfiniteTerm::ExtOmega(ctx, Box::new(inner))
    }

    pub fn var(name: &str) -> ProfiniteTerm {
        ProfiniteTerm::Var(name.to_string())
    }
}

impl fmt::Display for ProfiniteTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfiniteTerm::Var(name) => write!(f, "{name}"),
            ProfiniteTerm::EmptyWord => write!(f, "-"),
            ProfiniteTerm::Letter(c) => write!(f, "{c}"),
            ProfiniteTerm::Concat(l, r) => write!(f, "{l}{r}"),
            ProfiniteTerm::Ext(ctx, t) => {
                write!(f, "ext[{},{}]({t})", ctx.left(), ctx.right())
            }
            ProfiniteTerm::ExtOmega(ctx, t) => {
                write!(f, "ext^w[{},{}]({t})", ctx.left(), ctx.right())
            }
        }
    }
}

/// Structural evaluation of ψ̂ on a term: ω-powers of contexts evaluate to
/// the idempotent power of the context's op.
pub fn eval_profinite_term(
    spec: &RecognizerSpec,
    term: &ProfiniteTerm,
    assignment: &BTreeMap<String, usize>,
) -> Result<usize> {
    eval_with_morphism(&spec.morphism, term, assignment)
}

/// Evaluation under an explicit morphism (used by the equation engines in
/// exhaustive morphism mode).
pub fn eval_with_morphism(
    morphism: &Morphism,
    term: &ProfiniteTerm,
    assignment: &BTreeMap<String, usize>,
) -> Result<usize> {
    let algebra = morphism.algebra();
    Ok(match term {
        ProfiniteTerm::Var(name) => *assignment
            .get(name)
            .ok_or_else(|| Error::UnboundVariable(name.clone()))?,
        ProfiniteTerm::EmptyWord => algebra.identity(),
        ProfiniteTerm::Letter(c) => {
            morphism.evaluate(&Word::from_letters(vec![*c]))?
        }
        ProfiniteTerm::Concat(l, r) => {
            let left = eval_with_morphism(morphism, l, assignment)?;
            let right = eval_with_morphism(morphism, r, assignment)?;
            algebra.mul(left, right)
        }
        ProfiniteTerm::Ext(ctx, t) => {
            let inner = eval_with_morphism(morphism, t, assignment)?;
            let op = context_op(morphism, ctx)?;
            algebra.apply(op, inner)
        }
        ProfiniteTerm::ExtOmega(ctx, t) => {
            let inner = eval_with_morphism(morphism, t, assignment)?;
            let op = idempotent_power_op(algebra, context_op(morphism, ctx)?);
            algebra.apply(op, inner)
        }
    })
}

/// Separation: R separates x and y when some morphism into R maps them to
/// different elements. Exhaustive over all morphisms by freeness; the count
/// |R|^internals · |O(R)|^(calls·returns) must stay under `cap`.
pub fn separates(
    algebra: &ExtAlgebra,
    alphabet: &PushdownAlphabet,
    x: &Word,
    y: &Word,
    cap: usize,
) -> Result<Option<Morphism>> {
    for morphism in enumerate_morphisms(algebra, alphabet, cap)? {
        if morphism.evaluate(x)? != morphism.evaluate(y)? {
            return Ok(Some(morphism));
        }
    }
    Ok(None)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::tests::example_one;
    use crate::alphabet::PushdownAlphabet;
    use crate::morphism::RecognizerSpec;
    use crate::words::enumerate_well_matched;
    use std::collections::BTreeSet;

    /// The two-element separation algebra: ops {id, const 0} with
    /// ext_{a,b} = ext_{c,d} = id and ext_{a,d} = ext_{c,b} = const 0.
    pub fn separation_spec() -> RecognizerSpec {
        let alphabet = PushdownAlphabet::new(&['a', 'c'], &['b', 'd'], &[]).unwrap();
        let algebra = ExtAlgebra::new(
            vec!["1".into(), "0".into()],
            0,
            vec![0, 1, 1, 1],
            vec![vec![0, 1], vec![1, 1]],
            vec!["ext_ab".into(), "ext_ad".into()],
            0,
        )
        .unwrap();
        assert!(algebra.validate().is_empty());
        let morphism = Morphism::new(
            alphabet,
            algebra,
            BTreeMap::new(),
            BTreeMap::from([
                (('a', 'b'), 0),
                (('c', 'd'), 0),
                (('a', 'd'), 1),
                (('c', 'b'), 1),
            ]),
        )
        .unwrap();
        RecognizerSpec::new(morphism, BTreeSet::from([0])).unwrap()
    }

    #[test]
    fn idempotent_power_examples() {
        let alg = example_one();
        // The ext op of Example-1 is already idempotent.
        assert_eq!(idempotent_power_op(&alg, 1), 1);
        // Identity op and identity element are fixed points.
        assert_eq!(idempotent_power_op(&alg, 0), 0);
        assert_eq!(idempotent_power_element(&alg, 0), 0);
        // x generates the zero: x² = 0 is idempotent.
        assert_eq!(idempotent_power_element(&alg, 1), 2);

        // The H⁺ negation op squares to the identity.
        let neg = vec![1usize, 0];
        assert_eq!(idempotent_power_table(&neg), vec![0, 1]);
    }

    #[test]
    fn idempotent_power_is_a_fixed_point_and_matches_factorials() {
        let alg = example_one();
        for op in 0..alg.op_count() {
            let omega = idempotent_power_op(&alg, op);
            assert_eq!(idempotent_power_op(&alg, omega), omega);
            // e^{n!} = e^ω for every n past the idempotent exponent.
            let table = alg.op_table(op).to_vec();
            let mut k = 1usize;
            let mut power = table.clone();
            while ExtAlgebra::compose_tables(&power, &power) != power {
                power = ExtAlgebra::compose_tables(&power, &table);
                k += 1;
            }
            for n in 1..=8usize {
                if n < k {
                    continue;
                }
                let factorial: usize = (1..=n).product();
                let mut accumulated = table.clone();
                for _ in 1..factorial {
                    accumulated = ExtAlgebra::compose_tables(&accumulated, &table);
                }
                assert_eq!(accumulated, alg.op_table(omega).to_vec(), "op {op}, n {n}");
            }
        }
    }

    #[test]
    fn omega_evaluation_on_separation_example() {
        let spec = separation_spec();
        let alpha = spec.alphabet().clone();
        let t_ad = ProfiniteTerm::ext_omega(
            Context::parse(&alpha, "a", "d").unwrap(),
            ProfiniteTerm::EmptyWord,
        );
        let t_ab = ProfiniteTerm::ext_omega(
            Context::parse(&alpha, "a", "b").unwrap(),
            ProfiniteTerm::EmptyWord,
        );
        let empty = BTreeMap::new();
        assert_eq!(eval_profinite_term(&spec, &t_ad, &empty).unwrap(), 1);
        assert_eq!(eval_profinite_term(&spec, &t_ab, &empty).unwrap(), 0);
        // Names: index 1 is "0", index 0 is "1" in this fixture.
        assert_eq!(spec.algebra().element_name(1), "0");
        assert_eq!(spec.algebra().element_name(0), "1");
    }

    #[test]
    fn variables_evaluate_by_assignment() {
        let spec = separation_spec();
        let term = ProfiniteTerm::var("x");
        for r in 0..spec.algebra().size() {
            let assignment = BTreeMap::from([("x".to_string(), r)]);
            assert_eq!(eval_profinite_term(&spec, &term, &assignment).unwrap(), r);
        }
        assert!(matches!(
            eval_profinite_term(&spec, &term, &BTreeMap::new()),
            Err(Error::UnboundVariable(_))
        ));
    }

    #[test]
    fn omega_free_terms_agree_with_evaluate() {
        // A term built structurally from a word evaluates to ψ(word).
        let spec = crate::morphism::tests::anbn_spec();
        let alpha = spec.alphabet().clone();
        fn term_of(alpha: &PushdownAlphabet, w: &Word) -> ProfiniteTerm {
            if w.is_empty() {
                return ProfiniteTerm::EmptyWord;
            }
            let letters = w.letters();
            match alpha.kind(letters[0]).unwrap() {
                crate::alphabet::LetterKind::Internal => ProfiniteTerm::concat(
                    ProfiniteTerm::Letter(letters[0]),
                    term_of(alpha, &w.slice(1..w.len())),
                ),
                crate::alphabet::LetterKind::Call => {
                    // Find the matching return.
                    let mut depth = 0usize;
                    let mut close = 0usize;
                    for (i, &c) in letters.iter().enumerate() {
                        match alpha.kind(c).unwrap() {
                            crate::alphabet::LetterKind::Call => depth += 1,
                            crate::alphabet::LetterKind::Return => {
                                depth -= 1;
                                if depth == 0 {
                                    close = i;
                                    break;
                                }
                            }
                            crate::alphabet::LetterKind::Internal => {}
                        }
                    }
                    let ctx = Context::new(
                        alpha,
                        Word::from_letters(vec![letters[0]]),
                        Word::from_letters(vec![letters[close]]),
                    )
                    .unwrap();
                    let inner = term_of(alpha, &w.slice(1..close));
                    let rest = term_of(alpha, &w.slice(close + 1..w.len()));
                    ProfiniteTerm::concat(ProfiniteTerm::ext(ctx, inner), rest)
                }
                crate::alphabet::LetterKind::Return => unreachable!("well-matched"),
            }
        }
        let empty = BTreeMap::new();
        for w in enumerate_well_matched(&alpha, 8) {
            let term = term_of(&alpha, &w);
            assert_eq!(
                eval_profinite_term(&spec, &term, &empty).unwrap(),
                spec.morphism.evaluate(&w).unwrap(),
                "word {w}"
            );
        }
    }

    #[test]
    fn separation_example_from_the_metric() {
        let spec = separation_spec();
        let alpha = spec.alphabet().clone();
        let long = alpha.word("aaaabbccdddd").unwrap();
        let short = alpha.word("aabbccdd").unwrap();
        let witness = separates(spec.algebra(), &alpha, &long, &short, 10_000)
            .unwrap()
            .expect("the two words are separable");
        let zero = spec.algebra().element_index("0").unwrap();
        let one = spec.algebra().element_index("1").unwrap();
        assert_eq!(witness.evaluate(&long).unwrap(), zero);
        assert_eq!(witness.evaluate(&short).unwrap(), one);
        // A word never separates from itself; the trivial algebra separates
        // nothing.
        assert!(separates(spec.algebra(), &alpha, &long, &long, 10_000)
            .unwrap()
            .is_none());
        let trivial = ExtAlgebra::trivial();
        assert!(separates(&trivial, &alpha, &long, &short, 10_000)
            .unwrap()
            .is_none());
    }
}
