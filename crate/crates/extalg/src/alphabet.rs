//! Visibly pushdown alphabets: finite letter sets partitioned into calls,
//! returns and internals. The partition alone decides the stack behaviour
//! of every machine and the height profile of every word.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::words::Word;
use crate::Result;

/// Characters that the file format and CLI reserve as separators.
pub const RESERVED: &[char] = &['#', ',', '=', '-', '>', '.'];

/// The role a letter plays: push, pop, or leave the stack alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LetterKind {
    Call,
    Return,
    Internal,
}

/// A finite alphabet partitioned into call, return and internal letters.
///
/// Letter order is the declaration order (calls, then returns, then
/// internals); every enumeration in the crate ties to this order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushdownAlphabet {
    calls: Vec<char>,
    returns: Vec<char>,
    internals: Vec<char>,
    kinds: BTreeMap<char, LetterKind>,
}

impl PushdownAlphabet {
    /// Builds an alphabet, checking disjointness and that every letter is a
    /// printable symbol distinct from the file-format separators.
    ///
    /// Empty call or return sets are legal: internal-only alphabets
    /// degenerate to ordinary free monoids.
    pub fn new(calls: &[char], returns: &[char], internals: &[char]) -> Result<Self> {
        let mut kinds = BTreeMap::new();
        for (set, kind) in [
            (calls, LetterKind::Call),
            (returns, LetterKind::Return),
            (internals, LetterKind::Internal),
        ] {
            for &c in set {
                if c.is_whitespace() || c.is_control() || RESERVED.contains(&c) {
                    return Err(Error::InvalidLetter(c));
                }
                if kinds.insert(c, kind).is_some() {
                    return Err(Error::MalformedTables(format!(
                        "letter '{c}' declared twice in the alphabet"
                    )));
                }
            }
        }
        Ok(Self {
            calls: calls.to_vec(),
            returns: returns.to_vec(),
            internals: internals.to_vec(),
            kinds,
        })
    }

    pub fn calls(&self) -> &[char] {
        &self.calls
    }

    pub fn returns(&self) -> &[char] {
        &self.returns
    }

    pub fn internals(&self) -> &[char] {
        &self.internals
    }

    pub fn kind(&self, letter: char) -> Result<LetterKind> {
        self.kinds
            .get(&letter)
            .copied()
            .ok_or(Error::InvalidLetter(letter))
    }

    pub fn contains(&self, letter: char) -> bool {
        self.kinds.contains_key(&letter)
    }

    /// All letters in the declared order: calls, returns, internals.
    pub fn letters(&self) -> impl Iterator<Item = char> + '_ {
        self.calls
            .iter()
            .chain(self.returns.iter())
            .chain(self.internals.iter())
            .copied()
    }

    /// Position of a letter in the declared order, for lexicographic ties.
    pub fn rank(&self, letter: char) -> Result<usize> {
        self.letters()
            .position(|c| c == letter)
            .ok_or(Error::InvalidLetter(letter))
    }

    /// Parses a word, checking every letter against the alphabet.
    pub fn word(&self, text: &str) -> Result<Word> {
        let letters: Vec<char> = text.chars().collect();
        for &c in &letters {
            if !self.contains(c) {
                return Err(Error::InvalidLetter(c));
            }
        }
        Ok(Word::from_letters(letters))
    }

    /// Parses a word as written on the command line, where `-` denotes λ.
    pub fn cli_word(&self, text: &str) -> Result<Word> {
        if text == "-" {
            Ok(Word::empty())
        } else {
            self.word(text)
        }
    }

    /// Compares two words length-first, then letter-by-letter in the
    /// declared order.
    pub fn cmp_words(&self, a: &Word, b: &Word) -> std::cmp::Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            for (&x, &y) in a.letters().iter().zip(b.letters()) {
                let r = self
                    .rank(x)
                    .unwrap_or(usize::MAX)
                    .cmp(&self.rank(y).unwrap_or(usize::MAX));
                if r != std::cmp::Ordering::Equal {
                    return r;
                }
            }
            std::cmp::Ordering::Equal
        })
    }
}

impl fmt::Display for PushdownAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &[char]| s.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        write!(
            f,
            "alphabet calls={} returns={} internals={}",
            join(&self.calls),
            join(&self.returns),
            join(&self.internals)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_must_be_disjoint() {
        assert!(PushdownAlphabet::new(&['a'], &['a'], &[]).is_err());
        assert!(PushdownAlphabet::new(&['a'], &['b'], &['c']).is_ok());
    }

    #[test]
    fn reserved_letters_rejected() {
        for &c in RESERVED {
            assert!(PushdownAlphabet::new(&[c], &[], &[]).is_err());
        }
        assert!(PushdownAlphabet::new(&[' '], &[], &[]).is_err());
    }

    #[test]
    fn letter_order_is_declaration_order() {
        let alpha = PushdownAlphabet::new(&['a', 'c'], &['b', 'd'], &['e']).unwrap();
        let order: Vec<char> = alpha.letters().collect();
        assert_eq!(order, vec!['a', 'c', 'b', 'd', 'e']);
        assert_eq!(alpha.rank('b').unwrap(), 2);
        assert_eq!(alpha.kind('c').unwrap(), LetterKind::Call);
    }

    #[test]
    fn words_check_membership() {
        let alpha = PushdownAlphabet::new(&['a'], &['b'], &[]).unwrap();
        assert!(alpha.word("ab").is_ok());
        assert!(matches!(alpha.word("ax"), Err(Error::InvalidLetter('x'))));
        assert_eq!(alpha.cli_word("-").unwrap(), Word::empty());
    }
}
