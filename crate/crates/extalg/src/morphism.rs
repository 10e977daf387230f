//! Morphisms from the free Ext-algebra of well-matched words into a finite
//! Ext-algebra, and recognition. A morphism is determined freely by its
//! values on the internal letters and on ext_{a,b} for every call/return
//! pair, so a pair of total maps is a complete description.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::ExtAlgebra;
use crate::alphabet::{LetterKind, PushdownAlphabet};
use crate::error::Error;
use crate::words::{is_well_matched, Context, Word};
use crate::Result;

/// A morphism ψ : WM(A) → R given by generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    alphabet: PushdownAlphabet,
    algebra: ExtAlgebra,
    internal_image: BTreeMap<char, usize>,
    ext_image: BTreeMap<(char, char), usize>,
}

impl Morphism {
    pub fn new(
        alphabet: PushdownAlphabet,
        algebra: ExtAlgebra,
        internal_image: BTreeMap<char, usize>,
        ext_image: BTreeMap<(char, char), usize>,
    ) -> Result<Self> {
        for &c in alphabet.internals() {
            match internal_image.get(&c) {
                None => {
                    return Err(Error::IncompleteMorphism(format!(
                        "internal letter '{c}' has no image"
                    )))
                }
                Some(&e) if e >= algebra.size() => {
                    return Err(Error::MalformedTables(format!(
                        "image of '{c}' out of range"
                    )))
                }
                _ => {}
            }
        }
        for &a in alphabet.calls() {
            for &b in alphabet.returns() {
                match ext_image.get(&(a, b)) {
                    None => {
                        return Err(Error::IncompleteMorphism(format!(
                            "pair ({a},{b}) has no ext image"
                        )))
                    }
                    Some(&o) if o >= algebra.op_count() => {
                        return Err(Error::MalformedTables(format!(
                            "ext image of ({a},{b}) out of range"
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(Self {
            alphabet,
            algebra,
            internal_image,
            ext_image,
        })
    }

    pub fn alphabet(&self) -> &PushdownAlphabet {
        &self.alphabet
    }

    pub fn algebra(&self) -> &ExtAlgebra {
        &self.algebra
    }

    pub fn internal_image(&self, c: char) -> usize {
        self.internal_image[&c]
    }

    pub fn ext_image(&self, a: char, b: char) -> usize {
        self.ext_image[&(a, b)]
    }

    pub fn internal_images(&self) -> &BTreeMap<char, usize> {
        &self.internal_image
    }

    pub fn ext_images(&self) -> &BTreeMap<(char, char), usize> {
        &self.ext_image
    }

    /// Evaluates ψ(w) for a well-matched word by a single scan with a stack
    /// of (saved element, pending call letter) pairs.
    pub fn evaluate(&self, word: &Word) -> Result<usize> {
        if !is_well_matched(&self.alphabet, word)? {
            return Err(Error::NotWellMatched(word.to_string()));
        }
        let alg = &self.algebra;
        let mut current = alg.identity();
        let mut stack: Vec<(usize, char)> = Vec::new();
        for &letter in word.letters() {
            match self.alphabet.kind(letter)? {
                LetterKind::Internal => {
                    current = alg.mul(current, self.internal_image(letter));
                }
                LetterKind::Call => {
                    stack.push((current, letter));
                    current = alg.identity();
                }
                LetterKind::Return => {
                    let (saved, call) = stack.pop().expect("well-matched scan");
                    let op = self.ext_image(call, letter);
                    current = alg.mul(saved, alg.apply(op, current));
                }
            }
        }
        debug_assert!(stack.is_empty());
        Ok(current)
    }

    /// The image ψ(WM(A)) ⊆ R: the smallest subset containing the identity
    /// and the internal images, closed under products and ext applications.
    pub fn image(&self) -> Vec<usize> {
        let alg = &self.algebra;
        let mut seen = vec![false; alg.size()];
        let mut worklist = vec![alg.identity()];
        seen[alg.identity()] = true;
        for &e in self.internal_image.values() {
            if !seen[e] {
                seen[e] = true;
                worklist.push(e);
            }
        }
        let ops: Vec<usize> = self.ext_image.values().copied().collect();
        let mut members: Vec<usize> = worklist.clone();
        while let Some(x) = worklist.pop() {
            let mut candidates: Vec<usize> = Vec::new();
            for &y in &members {
                candidates.push(alg.mul(x, y));
                candidates.push(alg.mul(y, x));
            }
            for &op in &ops {
                candidates.push(alg.apply(op, x));
            }
            for c in candidates {
                if !seen[c] {
                    seen[c] = true;
                    members.push(c);
                    worklist.push(c);
                }
            }
        }
        let mut image: Vec<usize> = (0..alg.size()).filter(|&i| seen[i]).collect();
        image.sort_unstable();
        image
    }
}

/// A complete recognizer: a morphism plus the accepting subset P, so that
/// the language is ψ⁻¹(P).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognizerSpec {
    pub morphism: Morphism,
    pub accepting: BTreeSet<usize>,
}

impl RecognizerSpec {
    pub fn new(morphism: Morphism, accepting: BTreeSet<usize>) -> Result<Self> {
        if let Some(&e) = accepting.iter().find(|&&e| e >= morphism.algebra().size()) {
            return Err(Error::MalformedTables(format!(
                "accepting element {e} out of range"
            )));
        }
        Ok(Self {
            morphism,
            accepting,
        })
    }

    pub fn algebra(&self) -> &ExtAlgebra {
        self.morphism.algebra()
    }

    pub fn alphabet(&self) -> &PushdownAlphabet {
        self.morphism.alphabet()
    }

    /// Membership: evaluate and test against the accepting subset.
    pub fn accepts(&self, word: &Word) -> Result<bool> {
        Ok(self.accepting.contains(&self.morphism.evaluate(word)?))
    }
}

/// The decomposition of a context (u,v): u = w₀a₁w₁…a_kw_k with the aᵢ the
/// unmatched calls of u, v = w′_k b_k … b₁ w′₀ dually. Blocks are stored as
/// their ψ-images, so equal profiles act identically in every cross product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContextProfile {
    /// ψ(w₀), …, ψ(w_k)
    pub left_blocks: Vec<usize>,
    /// a₁, …, a_k
    pub calls: Vec<char>,
    /// ψ(w′₀), …, ψ(w′_k)
    pub right_blocks: Vec<usize>,
    /// b₁, …, b_k
    pub returns: Vec<char>,
}

impl ContextProfile {
    pub fn depth(&self) -> usize {
        self.calls.len()
    }
}

/// Computes the left/right decomposition profile of a context under ψ.
pub fn context_profile(morphism: &Morphism, ctx: &Context) -> Result<ContextProfile> {
    let alphabet = morphism.alphabet();
    // Unmatched call positions in u.
    let u = ctx.left();
    let mut depth_stack: Vec<usize> = Vec::new();
    for (i, &c) in u.letters().iter().enumerate() {
        match alphabet.kind(c)? {
            LetterKind::Call => depth_stack.push(i),
            LetterKind::Return => {
                depth_stack.pop();
            }
            LetterKind::Internal => {}
        }
    }
    let unmatched_calls = depth_stack;
    let mut left_blocks = Vec::new();
    let mut calls = Vec::new();
    let mut start = 0;
    for &pos in &unmatched_calls {
        left_blocks.push(morphism.evaluate(&u.slice(start..pos))?);
        calls.push(u.letters()[pos]);
        start = pos + 1;
    }
    left_blocks.push(morphism.evaluate(&u.slice(start..u.len()))?);

    // Unmatched return positions in v (pops of an empty stack).
    let v = ctx.right();
    let mut depth = 0usize;
    let mut unmatched_returns = Vec::new();
    for (i, &c) in v.letters().iter().enumerate() {
        match alphabet.kind(c)? {
            LetterKind::Call => depth += 1,
            LetterKind::Return => {
                if depth == 0 {
                    unmatched_returns.push(i);
                } else {
                    depth -= 1;
                }
            }
            LetterKind::Internal => {}
        }
    }
    // Scanning left to right meets b_k first; store b₁…b_k and w′₀…w′_k.
    let mut right_blocks_rev = Vec::new();
    let mut returns_rev = Vec::new();
    let mut start = 0;
    for &pos in &unmatched_returns {
        right_blocks_rev.push(morphism.evaluate(&v.slice(start..pos))?);
        returns_rev.push(v.letters()[pos]);
        start = pos + 1;
    }
    right_blocks_rev.push(morphism.evaluate(&v.slice(start..v.len()))?);
    right_blocks_rev.reverse();
    returns_rev.reverse();

    assert_eq!(
        calls.len(),
        returns_rev.len(),
        "context invariant: unmatched calls pair with unmatched returns"
    );
    Ok(ContextProfile {
        left_blocks,
        calls,
        right_blocks: right_blocks_rev,
        returns: returns_rev,
    })
}

/// The transformation table of ψ(ext_{u,v}) built from a decomposition
/// profile: Lmult(ψw₀)Rmult(ψw′₀) ∘ ψ(ext_{a₁,b₁}) ∘ … ∘ Lmult(ψw_k)Rmult(ψw′_k),
/// composed innermost-last.
pub fn profile_op_table(morphism: &Morphism, profile: &ContextProfile) -> Vec<usize> {
    let alg = morphism.algebra();
    let k = profile.depth();
    let sandwich = |l: usize, r: usize| -> Vec<usize> {
        (0..alg.size()).map(|x| alg.mul(alg.mul(l, x), r)).collect()
    };
    let mut table = sandwich(profile.left_blocks[k], profile.right_blocks[k]);
    for level in (0..k).rev() {
        let ext = morphism.ext_image(profile.calls[level], profile.returns[level]);
        table = ExtAlgebra::compose_tables(alg.op_table(ext), &table);
        let outer = sandwich(profile.left_blocks[level], profile.right_blocks[level]);
        table = ExtAlgebra::compose_tables(&outer, &table);
    }
    table
}

/// The index in O(R) of ψ(ext_{u,v}). The composed table must already be
/// present by closure; its absence signals an invalid algebra.
pub fn context_op(morphism: &Morphism, ctx: &Context) -> Result<usize> {
    let profile = context_profile(morphism, ctx)?;
    let table = profile_op_table(morphism, &profile);
    morphism.algebra().op_index_of(&table).ok_or_else(|| {
        Error::ClosureViolation(format!(
            "table of ext_{ctx} is missing from the op set"
        ))
    })
}

/// All morphisms from WM(A) into `algebra`, by freeness: every assignment of
/// elements to internal letters and ops to call/return pairs extends
/// uniquely. Deterministic order; errs if the count exceeds `cap`.
pub fn enumerate_morphisms(
    algebra: &ExtAlgebra,
    alphabet: &PushdownAlphabet,
    cap: usize,
) -> Result<Vec<Morphism>> {
    let n = algebra.size();
    let m = algebra.op_count();
    let internals = alphabet.internals().to_vec();
    let mut pairs = Vec::new();
    for &a in alphabet.calls() {
        for &b in alphabet.returns() {
            pairs.push((a, b));
        }
    }
    let mut count = 1usize;
    for _ in 0..internals.len() {
        count = count.saturating_mul(n);
    }
    for _ in 0..pairs.len() {
        count = count.saturating_mul(m);
    }
    if count > cap {
        return Err(Error::SizeCapExceeded(format!(
            "{count} candidate morphisms exceed the cap of {cap}"
        )));
    }
    let mut result = Vec::with_capacity(count);
    let mut digits = vec![0usize; internals.len() + pairs.len()];
    loop {
        let mut internal_image = BTreeMap::new();
        for (i, &c) in internals.iter().enumerate() {
            internal_image.insert(c, digits[i]);
        }
        let mut ext_image = BTreeMap::new();
        for (i, &(a, b)) in pairs.iter().enumerate() {
            ext_image.insert((a, b), digits[internals.len() + i]);
        }
        result.push(Morphism::new(
            alphabet.clone(),
            algebra.clone(),
            internal_image,
            ext_image,
        )?);
        // Odometer: internals count in base n, pairs in base m.
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return Ok(result);
            }
            pos -= 1;
            let base = if pos < internals.len() { n } else { m };
            if digits[pos] + 1 < base {
                digits[pos] += 1;
                for d in digits.iter_mut().skip(pos + 1) {
                    *d = 0;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::tests::example_one;
    use crate::words::{apply_context, enumerate_contexts, enumerate_well_matched};

    pub(crate) fn anbn_spec() -> RecognizerSpec {
        let alphabet = PushdownAlphabet::new(&['a'], &['b'], &[]).unwrap();
        let algebra = example_one();
        let morphism = Morphism::new(
            alphabet,
            algebra,
            BTreeMap::new(),
            BTreeMap::from([(('a', 'b'), 1)]),
        )
        .unwrap();
        RecognizerSpec::new(morphism, BTreeSet::from([0, 1])).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let spec = anbn_spec();
        let alpha = spec.alphabet().clone();
        let x = spec.algebra().element_index("x").unwrap();
        let one = spec.algebra().element_index("1").unwrap();
        let zero = spec.algebra().element_index("0").unwrap();
        assert_eq!(
            spec.morphism.evaluate(&alpha.word("aabb").unwrap()).unwrap(),
            x
        );
        assert_eq!(spec.morphism.evaluate(&Word::empty()).unwrap(), one);
        assert_eq!(
            spec.morphism.evaluate(&alpha.word("abab").unwrap()).unwrap(),
            zero
        );
        assert!(matches!(
            spec.morphism.evaluate(&alpha.word("ba").unwrap()),
            Err(Error::NotWellMatched(_))
        ));
    }

    #[test]
    fn accepts_examples() {
        let spec = anbn_spec();
        let alpha = spec.alphabet().clone();
        assert!(spec.accepts(&alpha.word("aabb").unwrap()).unwrap());
        assert!(!spec.accepts(&alpha.word("abab").unwrap()).unwrap());
        assert!(spec.accepts(&Word::empty()).unwrap());
    }

    #[test]
    fn context_op_examples() {
        let spec = anbn_spec();
        let alpha = spec.alphabet().clone();
        // (λ,λ) is the identity op.
        let id = context_op(&spec.morphism, &Context::parse(&alpha, "", "").unwrap()).unwrap();
        assert_eq!(id, spec.algebra().identity_op());
        // (ab, λ) is the left translation by x = ψ(ab).
        let op = context_op(&spec.morphism, &Context::parse(&alpha, "ab", "").unwrap()).unwrap();
        assert_eq!(spec.algebra().op_table(op), &[1, 2, 2]);
    }

    #[test]
    fn morphism_law_on_enumerated_contexts() {
        // apply(ψ(ext_{u,v}))(ψ(w)) = ψ(u w v) for all bounded ctx, w.
        let spec = anbn_spec();
        let alpha = spec.alphabet().clone();
        for ctx in enumerate_contexts(&alpha, 4) {
            let op = context_op(&spec.morphism, &ctx).unwrap();
            for w in enumerate_well_matched(&alpha, 4) {
                let lhs = spec
                    .algebra()
                    .apply(op, spec.morphism.evaluate(&w).unwrap());
                let rhs = spec
                    .morphism
                    .evaluate(&apply_context(&alpha, &ctx, &w).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs, "ctx {ctx}, word {w}");
            }
        }
    }

    #[test]
    fn image_of_anbn_morphism_is_everything() {
        let spec = anbn_spec();
        assert_eq!(spec.morphism.image(), vec![0, 1, 2]);
    }

    #[test]
    fn morphism_enumeration_counts() {
        let spec = anbn_spec();
        let all =
            enumerate_morphisms(spec.algebra(), spec.alphabet(), 1000).unwrap();
        // One call/return pair, no internals: one op choice per morphism.
        assert_eq!(all.len(), spec.algebra().op_count());
    }
}
