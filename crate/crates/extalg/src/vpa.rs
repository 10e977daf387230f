//! Visibly pushdown automata over well-matched words. Call transitions
//! push exactly one non-bottom symbol atop the read symbol, returns pop,
//! internals re-emit the read symbol; the stack of a well-matched run is
//! restored exactly.

use std::collections::{BTreeMap, BTreeSet};

use crate::alphabet::{LetterKind, PushdownAlphabet};
use crate::error::Error;
use crate::words::{is_well_matched, Word};
use crate::Result;

/// A deterministic visibly pushdown automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vpa {
    pub alphabet: PushdownAlphabet,
    pub states: Vec<String>,
    pub initial: usize,
    pub stack_symbols: Vec<String>,
    pub bottom: usize,
    /// (call letter, state, top) → (state, pushed symbol)
    pub call_delta: BTreeMap<(char, usize, usize), (usize, usize)>,
    /// (return letter, state, top ≠ bottom) → state
    pub return_delta: BTreeMap<(char, usize, usize), usize>,
    /// (internal letter, state, top) → state
    pub internal_delta: BTreeMap<(char, usize, usize), usize>,
    pub finals: BTreeSet<usize>,
}

impl Vpa {
    /// Checks the transition restrictions and totality on the domain:
    /// calls and internals are defined for every (state, top), returns for
    /// every (state, top) with a non-bottom top.
    pub fn validate(&self) -> Result<()> {
        let q = self.states.len();
        let g = self.stack_symbols.len();
        if self.initial >= q || self.bottom >= g {
            return Err(Error::MalformedAutomaton(
                "initial state or bottom symbol out of range".into(),
            ));
        }
        if let Some(&f) = self.finals.iter().find(|&&f| f >= q) {
            return Err(Error::MalformedAutomaton(format!(
                "final state {f} out of range"
            )));
        }
        for (&(a, s, top), &(dst, pushed)) in &self.call_delta {
            if self.alphabet.kind(a)? != LetterKind::Call {
                return Err(Error::MalformedAutomaton(format!(
                    "'{a}' used as a call letter"
                )));
            }
            if s >= q || top >= g || dst >= q || pushed >= g {
                return Err(Error::MalformedAutomaton("call transition out of range".into()));
            }
            if pushed == self.bottom {
                return Err(Error::MalformedAutomaton(format!(
                    "call '{a}' from {} pushes the bottom symbol",
                    self.states[s]
                )));
            }
        }
        for (&(b, s, top), &dst) in &self.return_delta {
            if self.alphabet.kind(b)? != LetterKind::Return {
                return Err(Error::MalformedAutomaton(format!(
                    "'{b}' used as a return letter"
                )));
            }
            if s >= q || top >= g || dst >= q {
                return Err(Error::MalformedAutomaton("return transition out of range".into()));
            }
            if top == self.bottom {
                return Err(Error::MalformedAutomaton(format!(
                    "return '{b}' from {} declared on the bottom symbol",
                    self.states[s]
                )));
            }
        }
        for (&(c, s, top), &dst) in &self.internal_delta {
            if self.alphabet.kind(c)? != LetterKind::Internal {
                return Err(Error::MalformedAutomaton(format!(
                    "'{c}' used as an internal letter"
                )));
            }
            if s >= q || top >= g || dst >= q {
                return Err(Error::MalformedAutomaton(
                    "internal transition out of range".into(),
                ));
            }
        }
        for &a in self.alphabet.calls() {
            for s in 0..q {
                for top in 0..g {
                    if !self.call_delta.contains_key(&(a, s, top)) {
                        return Err(Error::MalformedAutomaton(format!(
                            "missing call '{a}' from {} on {}",
                            self.states[s], self.stack_symbols[top]
                        )));
                    }
                }
            }
        }
        for &b in self.alphabet.returns() {
            for s in 0..q {
                for top in 0..g {
                    if top != self.bottom && !self.return_delta.contains_key(&(b, s, top)) {
                        return Err(Error::MalformedAutomaton(format!(
                            "missing return '{b}' from {} on {}",
                            self.states[s], self.stack_symbols[top]
                        )));
                    }
                }
            }
        }
        for &c in self.alphabet.internals() {
            for s in 0..q {
                for top in 0..g {
                    if !self.internal_delta.contains_key(&(c, s, top)) {
                        return Err(Error::MalformedAutomaton(format!(
                            "missing internal '{c}' from {} on {}",
                            self.states[s], self.stack_symbols[top]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Runs the extended transition function from (state, [.. stack]) over a
    /// word whose prefixes never pop below the given stack.
    pub fn run_from(
        &self,
        word: &Word,
        mut state: usize,
        stack: &mut Vec<usize>,
    ) -> Result<usize> {
        for &letter in word.letters() {
            let top = *stack.last().expect("stack never empties below bottom");
            match self.alphabet.kind(letter)? {
                LetterKind::Call => {
                    let &(dst, pushed) =
                        self.call_delta.get(&(letter, state, top)).ok_or_else(|| {
                            Error::MalformedAutomaton(format!(
                                "no call transition for '{letter}' from {}",
                                self.states[state]
                            ))
                        })?;
                    stack.push(pushed);
                    state = dst;
                }
                LetterKind::Return => {
                    if top == self.bottom {
                        return Err(Error::MalformedAutomaton(
                            "return would pop the stack bottom".into(),
                        ));
                    }
                    let &dst = self.return_delta.get(&(letter, state, top)).ok_or_else(|| {
                        Error::MalformedAutomaton(format!(
                            "no return transition for '{letter}' from {}",
                            self.states[state]
                        ))
                    })?;
                    stack.pop();
                    state = dst;
                }
                LetterKind::Internal => {
                    let &dst = self
                        .internal_delta
                        .get(&(letter, state, top))
                        .ok_or_else(|| {
                            Error::MalformedAutomaton(format!(
                                "no internal transition for '{letter}' from {}",
                                self.states[state]
                            ))
                        })?;
                    state = dst;
                }
            }
        }
        Ok(state)
    }

    /// Acceptance on a well-matched word: run from (q₀, #) and test the
    /// final state. The stack is asserted to return to exactly the bottom.
    pub fn accepts(&self, word: &Word) -> Result<bool> {
        if !is_well_matched(&self.alphabet, word)? {
            return Err(Error::NotWellMatched(word.to_string()));
        }
        let mut stack = vec![self.bottom];
        let state = self.run_from(word, self.initial, &mut stack)?;
        assert_eq!(
            stack,
            vec![self.bottom],
            "well-matched run must restore the stack"
        );
        Ok(self.finals.contains(&state))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The minimal machine for {aⁿbⁿ}: a clean state, a seen-return state,
    /// and a dead state entered on a call after a return.
    pub fn anbn_vpa() -> Vpa {
        let alphabet = PushdownAlphabet::new(&['a'], &['b'], &[]).unwrap();
        let states = vec!["s0".to_string(), "s1".to_string(), "sd".to_string()];
        let stack_symbols = vec!["#".to_string(), "A".to_string()];
        let mut call_delta = BTreeMap::new();
        let mut return_delta = BTreeMap::new();
        for top in 0..2 {
            call_delta.insert(('a', 0, top), (0, 1));
            call_delta.insert(('a', 1, top), (2, 1));
            call_delta.insert(('a', 2, top), (2, 1));
        }
        return_delta.insert(('b', 0, 1), 1);
        return_delta.insert(('b', 1, 1), 1);
        return_delta.insert(('b', 2, 1), 2);
        Vpa {
            alphabet,
            states,
            initial: 0,
            stack_symbols,
            bottom: 0,
            call_delta,
            return_delta,
            internal_delta: BTreeMap::new(),
            finals: BTreeSet::from([0, 1]),
        }
    }

    #[test]
    fn anbn_examples() {
        let vpa = anbn_vpa();
        vpa.validate().unwrap();
        let alpha = vpa.alphabet.clone();
        assert!(vpa.accepts(&alpha.word("aabb").unwrap()).unwrap());
        assert!(!vpa.accepts(&alpha.word("abab").unwrap()).unwrap());
        assert!(vpa.accepts(&Word::empty()).unwrap());
        assert!(matches!(
            vpa.accepts(&alpha.word("ba").unwrap()),
            Err(Error::NotWellMatched(_))
        ));
    }

    #[test]
    fn anbn_matches_direct_oracle_to_length_10() {
        let vpa = anbn_vpa();
        let alpha = vpa.alphabet.clone();
        // All 2^11 - 1 words over {a,b} up to length 10.
        let mut count = 0usize;
        for len in 0..=10usize {
            for mask in 0..(1u32 << len) {
                let word = Word::from_letters(
                    (0..len)
                        .map(|i| if mask & (1 << i) != 0 { 'b' } else { 'a' })
                        .collect(),
                );
                count += 1;
                let in_language = {
                    let letters = word.letters();
                    let n = letters.len();
                    n % 2 == 0
                        && letters[..n / 2].iter().all(|&c| c == 'a')
                        && letters[n / 2..].iter().all(|&c| c == 'b')
                };
                let accepted = is_well_matched(&alpha, &word).unwrap()
                    && vpa.accepts(&word).unwrap();
                assert_eq!(accepted, in_language, "word {word}");
            }
        }
        assert_eq!(count, 2047);
    }

    #[test]
    fn stack_is_restored() {
        let vpa = anbn_vpa();
        let alpha = vpa.alphabet.clone();
        let mut stack = vec![vpa.bottom, 1, 1];
        let state = vpa
            .run_from(&alpha.word("aabb").unwrap(), 0, &mut stack)
            .unwrap();
        assert_eq!(stack, vec![vpa.bottom, 1, 1]);
        assert_eq!(state, 1);
    }
}
