//! Visibly counter automata with threshold m: the counter tracks the stack
//! height, and transition tables δ₀…δ_m are selected by min(counter, m).
//! Includes the level functions r_{u,i} and stabilizing exponents from the
//! soundness argument for the visibly counter equation.

use std::collections::{BTreeMap, BTreeSet};

use crate::alphabet::{LetterKind, PushdownAlphabet};
use crate::error::Error;
use crate::vpa::Vpa;
use crate::words::{is_well_matched, stack_height, Word};
use crate::Result;

/// A visibly counter automaton with threshold `m = deltas.len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vca {
    pub alphabet: PushdownAlphabet,
    pub states: Vec<String>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    /// δ₀ … δ_m; each must be total on (letter, state).
    pub deltas: Vec<BTreeMap<(char, usize), usize>>,
}

impl Vca {
    pub fn threshold(&self) -> usize {
        self.deltas.len() - 1
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.states.len();
        if self.deltas.is_empty() {
            return Err(Error::MalformedAutomaton(
                "a threshold-m VCA carries m+1 transition tables".into(),
            ));
        }
        if self.initial >= q {
            return Err(Error::MalformedAutomaton("initial state out of range".into()));
        }
        if let Some(&f) = self.finals.iter().find(|&&f| f >= q) {
            return Err(Error::MalformedAutomaton(format!(
                "final state {f} out of range"
            )));
        }
        for (i, delta) in self.deltas.iter().enumerate() {
            for letter in self.alphabet.letters() {
                for s in 0..q {
                    match delta.get(&(letter, s)) {
                        None => {
                            return Err(Error::MalformedAutomaton(format!(
                                "delta {i} missing ('{letter}', {})",
                                self.states[s]
                            )))
                        }
                        Some(&dst) if dst >= q => {
                            return Err(Error::MalformedAutomaton(format!(
                                "delta {i} ('{letter}', {}) out of range",
                                self.states[s]
                            )))
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(())
    }

    fn step(&self, letter: char, state: usize, counter: usize) -> usize {
        let level = counter.min(self.threshold());
        self.deltas[level][&(letter, state)]
    }

    /// Acceptance on a well-matched word: simulate configurations (q, i)
    /// from (q₀, 0); the counter never goes negative on well-matched input
    /// (asserted) and the run accepts iff it ends in a final state.
    pub fn accepts(&self, word: &Word) -> Result<bool> {
        if !is_well_matched(&self.alphabet, word)? {
            return Err(Error::NotWellMatched(word.to_string()));
        }
        let mut state = self.initial;
        let mut counter = 0usize;
        for &letter in word.letters() {
            state = self.step(letter, state, counter);
            match self.alphabet.kind(letter)? {
                LetterKind::Call => counter += 1,
                LetterKind::Return => {
                    counter = counter
                        .checked_sub(1)
                        .expect("well-matched input keeps the counter non-negative");
                }
                LetterKind::Internal => {}
            }
        }
        Ok(self.finals.contains(&state))
    }

    /// The level function r_{u,i}: the state map of reading `u` starting at
    /// counter `i`. Undefined when some prefix would drive the counter
    /// negative; the counter path is state-independent, so the whole map is
    /// defined or undefined at once.
    pub fn level_function(&self, word: &Word, level: usize) -> Result<Vec<usize>> {
        let mut counter = level as i64;
        for &letter in word.letters() {
            match self.alphabet.kind(letter)? {
                LetterKind::Call => counter += 1,
                LetterKind::Return => counter -= 1,
                LetterKind::Internal => {}
            }
            if counter < 0 {
                return Err(Error::UndefinedRun {
                    word: word.to_string(),
                    level,
                });
            }
        }
        let mut map: Vec<usize> = (0..self.states.len()).collect();
        for q in 0..self.states.len() {
            let mut state = q;
            let mut counter = level;
            for &letter in word.letters() {
                state = self.step(letter, state, counter);
                match self.alphabet.kind(letter)? {
                    LetterKind::Call => counter += 1,
                    LetterKind::Return => counter -= 1,
                    LetterKind::Internal => {}
                }
            }
            map[q] = state;
        }
        Ok(map)
    }

    /// The state map of a word read entirely at or above the threshold,
    /// where every transition uses δ_m.
    fn top_level_map(&self, word: &Word) -> Vec<usize> {
        let m = self.threshold();
        (0..self.states.len())
            .map(|q| {
                let mut state = q;
                for &letter in word.letters() {
                    state = self.deltas[m][&(letter, state)];
                }
                state
            })
            .collect()
    }

    /// The smallest exponent of the constructed form — the least common
    /// multiple of per-word, per-level exponents — with
    /// r_{xˢ,i} = r_{x²ˢ,i} for all x in `words` and all levels
    /// i ≤ m + |x|·2s. Levels above that bound run entirely at the
    /// threshold table, where the exponent is covered by the pure-δ_m map.
    pub fn stabilizing_exponent(&self, words: &[Word]) -> Result<usize> {
        let m = self.threshold();
        let mut s = 1usize;
        for word in words {
            if word.is_empty() {
                continue;
            }
            let height = stack_height(&self.alphabet, word)?;
            // Idempotent exponent of the pure threshold map.
            s = lcm(s, idempotent_exponent_of_map(&self.top_level_map(word)));
            // Per-level exponents on every start level where the run can be
            // defined, up to where the run stays above the threshold.
            let deepest = m + word.len() * 2 + height.unsigned_abs() as usize * 2;
            for level in 0..=deepest {
                if let Some(e) = self.per_level_exponent(word, level)? {
                    s = lcm(s, e);
                }
            }
        }
        // Verify on the required level range; a failing level (possible for
        // descending words, whose verified range grows with s) folds its own
        // exponent into the least common multiple and the pass repeats. Each
        // fold absorbs one (index, period) constraint from the finite
        // transformation monoid, so this terminates.
        'verify: loop {
            for word in words {
                if word.is_empty() {
                    continue;
                }
                for level in 0..=(m + word.len() * 2 * s) {
                    let (Ok(lhs), Ok(rhs)) = (
                        self.level_function(&word.power(s), level),
                        self.level_function(&word.power(2 * s), level),
                    ) else {
                        continue;
                    };
                    if lhs != rhs {
                        let e = self
                            .per_level_exponent(word, level)?
                            .expect("defined doubled run has a level exponent");
                        assert_ne!(lcm(s, e), s, "fold must grow s");
                        s = lcm(s, e);
                        continue 'verify;
                    }
                }
            }
            return Ok(s);
        }
    }

    /// Smallest e ≥ 1 with r_{x^e,i} = r_{x^{2e},i}, or None when no power
    /// of x has a defined run from this level.
    fn per_level_exponent(&self, word: &Word, level: usize) -> Result<Option<usize>> {
        let bound = 2 * self.states.len().pow(self.states.len() as u32).max(4);
        for e in 1..=bound {
            let lhs = match self.level_function(&word.power(e), level) {
                Ok(map) => map,
                Err(_) => return Ok(None),
            };
            match self.level_function(&word.power(2 * e), level) {
                Ok(rhs) if lhs == rhs => return Ok(Some(e)),
                Ok(_) => continue,
                // The doubled power dips below zero: no level exponent here.
                Err(_) => return Ok(None),
            }
        }
        unreachable!("state maps repeat within the transformation monoid bound")
    }

    /// Encodes the counter in the states up to the threshold and in unary on
    /// the stack above it; language-equivalent to the counter automaton.
    pub fn to_vpa(&self) -> Vpa {
        let m = self.threshold();
        let q = self.states.len();
        let levels = m + 1;
        let state_of = |s: usize, k: usize| s * levels + k;
        let mut states = Vec::with_capacity(q * levels);
        for s in 0..q {
            for k in 0..levels {
                states.push(format!("{}@{k}", self.states[s]));
            }
        }
        // Stack symbol L_k records min(counter before the push, m).
        let mut stack_symbols = vec!["#".to_string()];
        for k in 0..levels {
            stack_symbols.push(format!("L{k}"));
        }
        let mut call_delta = BTreeMap::new();
        let mut return_delta = BTreeMap::new();
        let mut internal_delta = BTreeMap::new();
        for s in 0..q {
            for k in 0..levels {
                let from = state_of(s, k);
                for top in 0..stack_symbols.len() {
                    for &a in self.alphabet.calls() {
                        let dst = self.deltas[k][&(a, s)];
                        let next_level = (k + 1).min(m);
                        call_delta.insert((a, from, top), (state_of(dst, next_level), 1 + k));
                    }
                    for &c in self.alphabet.internals() {
                        let dst = self.deltas[k][&(c, s)];
                        internal_delta.insert((c, from, top), state_of(dst, k));
                    }
                    for &b in self.alphabet.returns() {
                        if top == 0 {
                            continue;
                        }
                        let dst = self.deltas[k][&(b, s)];
                        // The popped symbol restores min(counter − 1, m).
                        let restored = top - 1;
                        return_delta.insert((b, from, top), state_of(dst, restored));
                    }
                }
            }
        }
        let finals = self
            .finals
            .iter()
            .flat_map(|&f| (0..levels).map(move |k| state_of(f, k)))
            .collect();
        Vpa {
            alphabet: self.alphabet.clone(),
            states,
            initial: state_of(self.initial, 0),
            stack_symbols,
            bottom: 0,
            call_delta,
            return_delta,
            internal_delta,
            finals,
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Smallest e ≥ 1 with f^e = f^{2e} in the transformation monoid.
fn idempotent_exponent_of_map(map: &[usize]) -> usize {
    let compose = |f: &[usize], g: &[usize]| -> Vec<usize> {
        g.iter().map(|&x| f[x]).collect()
    };
    let mut power = map.to_vec();
    let mut e = 1usize;
    loop {
        let doubled = compose(&power, &power);
        if doubled == power {
            return e;
        }
        power = compose(&power, map);
        e += 1;
    }
}
