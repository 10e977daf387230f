//! Words over a visibly pushdown alphabet, well-matchedness, contexts and
//! the bounded enumerators used as quantification domains everywhere else.

use std::fmt;

use crate::alphabet::{LetterKind, PushdownAlphabet};
use crate::error::Error;
use crate::Result;

/// A finite sequence of letters. The empty word λ prints as `-`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<char>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<char>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[char] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    /// `self` repeated `n` times.
    pub fn power(&self, n: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            letters.extend_from_slice(&self.0);
        }
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "-")
        } else {
            for c in &self.0 {
                write!(f, "{c}")?;
            }
            Ok(())
        }
    }
}

/// The stack height Σᵢ h(wᵢ) of a word, with h(call) = +1, h(return) = −1,
/// h(internal) = 0.
pub fn stack_height(alphabet: &PushdownAlphabet, word: &Word) -> Result<i64> {
    let mut height = 0i64;
    for &c in word.letters() {
        height += letter_height(alphabet, c)?;
    }
    Ok(height)
}

fn letter_height(alphabet: &PushdownAlphabet, letter: char) -> Result<i64> {
    Ok(match alphabet.kind(letter)? {
        LetterKind::Call => 1,
        LetterKind::Return => -1,
        LetterKind::Internal => 0,
    })
}

/// A word is well-matched when its height ends at zero and no prefix dips
/// below zero.
pub fn is_well_matched(alphabet: &PushdownAlphabet, word: &Word) -> Result<bool> {
    let mut height = 0i64;
    for &c in word.letters() {
        height += letter_height(alphabet, c)?;
        if height < 0 {
            return Ok(false);
        }
    }
    Ok(height == 0)
}

/// A pair of words (u, v) whose concatenation uv is well-matched; the
/// carrier of the operation `ext_{u,v}: x ↦ uxv`.
///
/// Validity is checked eagerly at construction, so every downstream
/// operation may assume the invariant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    left: Word,
    right: Word,
}

impl Context {
    pub fn new(alphabet: &PushdownAlphabet, left: Word, right: Word) -> Result<Self> {
        let joined = left.concat(&right);
        if !is_well_matched(alphabet, &joined)? {
            return Err(Error::NotWellMatched(joined.to_string()));
        }
        Ok(Context { left, right })
    }

    /// Convenience constructor from string literals.
    pub fn parse(alphabet: &PushdownAlphabet, left: &str, right: &str) -> Result<Self> {
        Context::new(alphabet, alphabet.word(left)?, alphabet.word(right)?)
    }

    pub fn left(&self) -> &Word {
        &self.left
    }

    pub fn right(&self) -> &Word {
        &self.right
    }

    /// The height signature stack_height(u); equality of signatures is the
    /// exact criterion for cross-pairs (u,v′), (u′,v) to be valid contexts.
    pub fn height(&self, alphabet: &PushdownAlphabet) -> Result<i64> {
        stack_height(alphabet, &self.left)
    }

    /// Contexts compose as (u,v)·(u′,v′) = (uu′, v′v).
    pub fn compose(&self, alphabet: &PushdownAlphabet, inner: &Context) -> Result<Context> {
        Context::new(
            alphabet,
            self.left.concat(&inner.left),
            inner.right.concat(&self.right),
        )
    }

    pub fn total_len(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.left, self.right)
    }
}

/// Applies `ext_{u,v}` to a well-matched word: returns u·x·v.
///
/// The result is asserted (not assumed) to be well-matched; this is provable
/// from the context invariant.
pub fn apply_context(alphabet: &PushdownAlphabet, ctx: &Context, x: &Word) -> Result<Word> {
    if !is_well_matched(alphabet, x)? {
        return Err(Error::NotWellMatched(x.to_string()));
    }
    let result = ctx.left.concat(x).concat(&ctx.right);
    assert!(
        is_well_matched(alphabet, &result)?,
        "context application broke well-matchedness"
    );
    Ok(result)
}

/// All well-matched words of length ≤ `max_len`, in length-then-lexicographic
/// order under the declared letter ordering. Deterministic.
pub fn enumerate_well_matched(alphabet: &PushdownAlphabet, max_len: usize) -> Vec<Word> {
    let letters: Vec<(char, i64)> = alphabet
        .letters()
        .map(|c| {
            let h = match alphabet.kind(c).expect("own letter") {
                LetterKind::Call => 1,
                LetterKind::Return => -1,
                LetterKind::Internal => 0,
            };
            (c, h)
        })
        .collect();
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    for len in 0..=max_len {
        descend(&letters, len, 0, &mut prefix, &mut out);
    }
    out
}

fn descend(
    letters: &[(char, i64)],
    remaining: usize,
    height: i64,
    prefix: &mut Vec<char>,
    out: &mut Vec<Word>,
) {
    if remaining == 0 {
        if height == 0 {
            out.push(Word(prefix.clone()));
        }
        return;
    }
    // A prefix at this height completes within the budget only if the
    // height can still be paid down.
    if height > remaining as i64 {
        return;
    }
    for &(c, h) in letters {
        if height + h < 0 {
            continue;
        }
        prefix.push(c);
        descend(letters, remaining - 1, height + h, prefix, out);
        prefix.pop();
    }
}

/// All contexts (u,v) with |u|+|v| ≤ `max_total_len` and uv well-matched.
///
/// Order: total length ascending, then height of u descending, then |u|
/// descending, then u and v lexicographic under the declared letter order.
/// Deterministic; the equation engines and their certificates depend on it.
pub fn enumerate_contexts(alphabet: &PushdownAlphabet, max_total_len: usize) -> Vec<Context> {
    let words = enumerate_well_matched(alphabet, max_total_len);
    let mut out = Vec::new();
    let mut by_len: Vec<Vec<Context>> = vec![Vec::new(); max_total_len + 1];
    for w in &words {
        for split in 0..=w.len() {
            let left = w.slice(0..split);
            let right = w.slice(split..w.len());
            by_len[w.len()].push(Context { left, right });
        }
    }
    for group in &mut by_len {
        group.sort_by(|a, b| {
            let ha = stack_height(alphabet, &a.left).expect("enumerated letters");
            let hb = stack_height(alphabet, &b.left).expect("enumerated letters");
            hb.cmp(&ha)
                .then(b.left.len().cmp(&a.left.len()))
                .then_with(|| alphabet.cmp_words(&a.left, &b.left))
                .then_with(|| alphabet.cmp_words(&a.right, &b.right))
        });
        out.append(group);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> PushdownAlphabet {
        PushdownAlphabet::new(&['a'], &['b'], &[]).unwrap()
    }

    fn abcd() -> PushdownAlphabet {
        PushdownAlphabet::new(&['a', 'c'], &['b', 'd'], &[]).unwrap()
    }

    #[test]
    fn stack_height_examples() {
        let alpha = ab();
        assert_eq!(stack_height(&alpha, &alpha.word("aab").unwrap()).unwrap(), 1);
        assert_eq!(stack_height(&alpha, &Word::empty()).unwrap(), 0);
        let alpha4 = abcd();
        assert_eq!(
            stack_height(&alpha4, &alpha4.word("acbd").unwrap()).unwrap(),
            0
        );
        assert!(matches!(
            stack_height(&alpha, &Word::from_letters(vec!['z'])),
            Err(Error::InvalidLetter('z'))
        ));
    }

    #[test]
    fn well_matched_examples() {
        let alpha = ab();
        assert!(is_well_matched(&alpha, &alpha.word("abab").unwrap()).unwrap());
        assert!(!is_well_matched(&alpha, &alpha.word("ba").unwrap()).unwrap());
        assert!(is_well_matched(&alpha, &alpha.word("aabb").unwrap()).unwrap());
    }

    #[test]
    fn apply_context_examples() {
        let alpha = ab();
        let ctx = Context::parse(&alpha, "a", "b").unwrap();
        assert_eq!(
            apply_context(&alpha, &ctx, &Word::empty()).unwrap(),
            alpha.word("ab").unwrap()
        );
        let id = Context::parse(&alpha, "", "").unwrap();
        assert_eq!(
            apply_context(&alpha, &id, &alpha.word("ab").unwrap()).unwrap(),
            alpha.word("ab").unwrap()
        );
        // (ac, b) over calls {a,c}: "acb" has height 1, so the context
        // itself cannot be built.
        let alpha4 = abcd();
        assert!(matches!(
            Context::parse(&alpha4, "ac", "b"),
            Err(Error::NotWellMatched(_))
        ));
        // Applying to a non-well-matched argument is rejected.
        let ctx4 = Context::parse(&alpha4, "ac", "db").unwrap();
        assert!(matches!(
            apply_context(&alpha4, &ctx4, &alpha4.word("ba").unwrap()),
            Err(Error::NotWellMatched(_))
        ));
    }

    #[test]
    fn enumerate_well_matched_examples() {
        let alpha = ab();
        let words = enumerate_well_matched(&alpha, 4);
        let shown: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, vec!["-", "ab", "aabb", "abab"]);
        assert_eq!(words.len(), 4);

        assert_eq!(enumerate_well_matched(&alpha, 0), vec![Word::empty()]);

        let internal = PushdownAlphabet::new(&[], &[], &['c']).unwrap();
        let words = enumerate_well_matched(&internal, 2);
        let shown: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, vec!["-", "c", "cc"]);
    }

    #[test]
    fn enumeration_agrees_with_filter_oracle() {
        // Brute force over all strings of length ≤ 8.
        let alpha = ab();
        let mut expected = Vec::new();
        for len in 0..=8usize {
            for mask in 0..(1u32 << len) {
                let w = Word::from_letters(
                    (0..len)
                        .map(|i| if mask & (1 << i) != 0 { 'b' } else { 'a' })
                        .collect(),
                );
                if is_well_matched(&alpha, &w).unwrap() {
                    expected.push(w);
                }
            }
        }
        let enumerated = enumerate_well_matched(&alpha, 8);
        assert_eq!(enumerated.len(), expected.len());
        let mut sorted = enumerated.clone();
        sorted.sort();
        expected.sort();
        assert_eq!(sorted, expected);
    }

    #[test]
    fn enumerate_contexts_examples() {
        let alpha = ab();
        let ctxs = enumerate_contexts(&alpha, 2);
        let shown: Vec<String> = ctxs.iter().map(|c| c.to_string()).collect();
        assert_eq!(shown, vec!["(-,-)", "(a,b)", "(ab,-)", "(-,ab)"]);

        assert_eq!(enumerate_contexts(&alpha, 0).len(), 1);
        assert_eq!(enumerate_contexts(&alpha, 1).len(), 1);
    }

    #[test]
    fn context_closure_properties() {
        let alpha = abcd();
        let words = enumerate_well_matched(&alpha, 4);
        for u in &words {
            for v in &words {
                assert!(is_well_matched(&alpha, &u.concat(v)).unwrap());
            }
        }
        let ctxs = enumerate_contexts(&alpha, 3);
        for ctx in &ctxs {
            for w in &words {
                let applied = apply_context(&alpha, ctx, w).unwrap();
                assert!(is_well_matched(&alpha, &applied).unwrap());
            }
        }
        // Composability: (u,v)·(u′,v′) = (uu′, v′v) is always a context.
        for outer in &ctxs {
            for inner in &ctxs {
                outer.compose(&alpha, inner).unwrap();
            }
        }
    }

    #[test]
    fn cross_context_criterion() {
        // (u,v′) is a context iff stack_height(u) = stack_height(u′).
        let alpha = abcd();
        let ctxs = enumerate_contexts(&alpha, 4);
        for c1 in &ctxs {
            for c2 in &ctxs {
                let valid =
                    Context::new(&alpha, c1.left().clone(), c2.right().clone()).is_ok();
                let same_height =
                    c1.height(&alpha).unwrap() == c2.height(&alpha).unwrap();
                assert_eq!(valid, same_height, "cross of {c1} and {c2}");
            }
        }
    }
}
