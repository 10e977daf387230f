//! Translations between the machine world and the algebra world: behaviour
//! algebras of visibly pushdown automata, the converse automaton built from
//! an algebra, and the monoid-generated algebras characterizing the
//! threshold-zero visibly counter languages.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::ExtAlgebra;
use crate::alphabet::PushdownAlphabet;
use crate::constructions::CLOSURE_CAP;
use crate::error::Error;
use crate::morphism::{Morphism, RecognizerSpec};
use crate::vpa::Vpa;
use crate::Result;

/// A finite monoid with a morphism from the free monoid given letter-wise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    pub element_names: Vec<String>,
    pub identity: usize,
    pub mult: Vec<usize>,
    pub letter_image: BTreeMap<char, usize>,
}

impl FiniteMonoid {
    pub fn size(&self) -> usize {
        self.element_names.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.size() + b]
    }

    /// Checks the monoid laws and the letter images.
    pub fn validate(&self, alphabet: &PushdownAlphabet) -> Result<()> {
        let n = self.size();
        if self.mult.len() != n * n {
            return Err(Error::MalformedTables(format!(
                "mult table has {} entries, expected {}",
                self.mult.len(),
                n * n
            )));
        }
        if self.identity >= n || self.mult.iter().any(|&e| e >= n) {
            return Err(Error::MalformedTables("monoid index out of range".into()));
        }
        for a in 0..n {
            if self.mul(self.identity, a) != a || self.mul(a, self.identity) != a {
                return Err(Error::MalformedTables(format!(
                    "identity is not neutral against {}",
                    self.element_names[a]
                )));
            }
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::MalformedTables(format!(
                            "associativity fails on ({}, {}, {})",
                            self.element_names[a], self.element_names[b], self.element_names[c]
                        )));
                    }
                }
            }
        }
        for letter in alphabet.letters() {
            match self.letter_image.get(&letter) {
                None => {
                    return Err(Error::IncompleteMorphism(format!(
                        "letter '{letter}' has no monoid image"
                    )))
                }
                Some(&e) if e >= n => {
                    return Err(Error::MalformedTables(format!(
                        "image of '{letter}' out of range"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// A behaviour element: per reachable stack symbol G, the state map
/// f_{w,G}(q) = π_Q(δ̂(w,q,G)), flattened to one vector for hashing.
type Behaviour = Vec<usize>;

struct BehaviourSpace<'a> {
    vpa: &'a Vpa,
    /// Reachable top symbols, sorted, bottom included.
    tops: Vec<usize>,
    states: usize,
}

impl<'a> BehaviourSpace<'a> {
    fn new(vpa: &'a Vpa) -> Self {
        // Prune the stack alphabet to tops that can ever be read: the
        // bottom plus everything pushable, iterated to a fixpoint.
        let mut reachable: BTreeSet<usize> = BTreeSet::from([vpa.bottom]);
        loop {
            let mut grew = false;
            for (&(_, _, top), &(_, pushed)) in &vpa.call_delta {
                if reachable.contains(&top) && reachable.insert(pushed) {
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        BehaviourSpace {
            vpa,
            tops: reachable.into_iter().collect(),
            states: vpa.states.len(),
        }
    }

    fn identity(&self) -> Behaviour {
        let mut b = Vec::with_capacity(self.tops.len() * self.states);
        for _ in &self.tops {
            b.extend(0..self.states);
        }
        b
    }

    fn map_of<'b>(&self, behaviour: &'b Behaviour, top_position: usize) -> &'b [usize] {
        &behaviour[top_position * self.states..(top_position + 1) * self.states]
    }

    fn internal_behaviour(&self, letter: char) -> Behaviour {
        let mut b = Vec::with_capacity(self.tops.len() * self.states);
        for &top in &self.tops {
            for q in 0..self.states {
                b.push(self.vpa.internal_delta[&(letter, q, top)]);
            }
        }
        b
    }

    /// Concatenation: f_{w₁w₂,G} = f_{w₂,G} ∘ f_{w₁,G}, per symbol.
    fn concat(&self, first: &Behaviour, second: &Behaviour) -> Behaviour {
        let mut b = Vec::with_capacity(first.len());
        for top_position in 0..self.tops.len() {
            let f = self.map_of(first, top_position);
            let g = self.map_of(second, top_position);
            b.extend(f.iter().map(|&q| g[q]));
        }
        b
    }

    /// The extension step: E_{a,b}(f_w) = f_{awb}. The pushed symbol may
    /// depend on the state, so each state is threaded with its own symbol.
    fn extend(&self, behaviour: &Behaviour, call: char, ret: char) -> Behaviour {
        let mut b = Vec::with_capacity(behaviour.len());
        for &top in &self.tops {
            for q in 0..self.states {
                let (after_call, pushed) = self.vpa.call_delta[&(call, q, top)];
                let pushed_position = self
                    .tops
                    .binary_search(&pushed)
                    .expect("pushed symbols are reachable tops");
                let inner = self.map_of(behaviour, pushed_position)[after_call];
                b.push(self.vpa.return_delta[&(ret, inner, pushed)]);
            }
        }
        b
    }
}

/// The behaviour algebra of a VPA: carrier generated from the identity and
/// the internal-letter behaviours by concatenation and the extension maps,
/// ops generated by the extensions and all translations. The recognizer
/// accepts exactly L(M) on well-matched words; minimization is a separate
/// explicit step.
pub fn vpa_to_ext_algebra(vpa: &Vpa) -> Result<RecognizerSpec> {
    vpa.validate()?;
    let space = BehaviourSpace::new(vpa);
    let alphabet = vpa.alphabet.clone();
    let mut pairs: Vec<(char, char)> = Vec::new();
    for &a in alphabet.calls() {
        for &b in alphabet.returns() {
            pairs.push((a, b));
        }
    }

    // Carrier closure.
    let mut elements: Vec<Behaviour> = Vec::new();
    let mut index: HashMap<Behaviour, usize> = HashMap::new();
    let insert = |elements: &mut Vec<Behaviour>,
                  index: &mut HashMap<Behaviour, usize>,
                  b: Behaviour|
     -> Result<usize> {
        if let Some(&i) = index.get(&b) {
            return Ok(i);
        }
        if elements.len() >= CLOSURE_CAP {
            return Err(Error::SizeCapExceeded(format!(
                "behaviour carrier grew past {CLOSURE_CAP}"
            )));
        }
        let i = elements.len();
        index.insert(b.clone(), i);
        elements.push(b);
        Ok(i)
    };
    let identity = insert(&mut elements, &mut index, space.identity())?;
    let mut internal_element: BTreeMap<char, usize> = BTreeMap::new();
    for &c in alphabet.internals() {
        let i = insert(&mut elements, &mut index, space.internal_behaviour(c))?;
        internal_element.insert(c, i);
    }
    let mut next = 0;
    while next < elements.len() {
        let current = next;
        next += 1;
        let mut fresh: Vec<Behaviour> = Vec::new();
        for other in 0..elements.len() {
            fresh.push(space.concat(&elements[current], &elements[other]));
            fresh.push(space.concat(&elements[other], &elements[current]));
        }
        for &(a, b) in &pairs {
            fresh.push(space.extend(&elements[current], a, b));
        }
        for b in fresh {
            insert(&mut elements, &mut index, b)?;
        }
    }

    let n = elements.len();
    let mut mult = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            mult[i * n + j] = index[&space.concat(&elements[i], &elements[j])];
        }
    }

    // Op monoid: extension maps and translations, closed under composition.
    let mut tables: Vec<Vec<usize>> = Vec::new();
    let mut table_index: HashMap<Vec<usize>, usize> = HashMap::new();
    let add_table = |tables: &mut Vec<Vec<usize>>,
                     table_index: &mut HashMap<Vec<usize>, usize>,
                     t: Vec<usize>|
     -> Result<usize> {
        if let Some(&i) = table_index.get(&t) {
            return Ok(i);
        }
        if tables.len() >= CLOSURE_CAP {
            return Err(Error::SizeCapExceeded(format!(
                "behaviour op set grew past {CLOSURE_CAP}"
            )));
        }
        let i = tables.len();
        table_index.insert(t.clone(), i);
        tables.push(t);
        Ok(i)
    };
    add_table(&mut tables, &mut table_index, (0..n).collect())?;
    let mut ext_op: BTreeMap<(char, char), usize> = BTreeMap::new();
    for &(a, b) in &pairs {
        let t: Vec<usize> = (0..n)
            .map(|i| index[&space.extend(&elements[i], a, b)])
            .collect();
        let op = add_table(&mut tables, &mut table_index, t)?;
        ext_op.insert((a, b), op);
    }
    for r in 0..n {
        let left: Vec<usize> = (0..n).map(|x| mult[r * n + x]).collect();
        add_table(&mut tables, &mut table_index, left)?;
        let right: Vec<usize> = (0..n).map(|x| mult[x * n + r]).collect();
        add_table(&mut tables, &mut table_index, right)?;
    }
    let mut next = 0;
    while next < tables.len() {
        let current = next;
        next += 1;
        let mut fresh: Vec<Vec<usize>> = Vec::new();
        for other in 0..tables.len() {
            fresh.push(ExtAlgebra::compose_tables(&tables[current], &tables[other]));
            fresh.push(ExtAlgebra::compose_tables(&tables[other], &tables[current]));
        }
        for t in fresh {
            add_table(&mut tables, &mut table_index, t)?;
        }
    }

    // Accepting behaviours send the initial state into a final state when
    // read over the bottom symbol.
    let bottom_position = space
        .tops
        .binary_search(&vpa.bottom)
        .expect("bottom is reachable");
    let accepting: BTreeSet<usize> = (0..n)
        .filter(|&i| {
            let state = space.map_of(&elements[i], bottom_position)[vpa.initial];
            vpa.finals.contains(&state)
        })
        .collect();

    let element_names: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
    let op_names: Vec<String> = (0..tables.len()).map(|i| format!("o{i}")).collect();
    let identity_op = table_index[&(0..n).collect::<Vec<usize>>()];
    let algebra = ExtAlgebra::new(
        element_names,
        identity,
        mult,
        tables,
        op_names,
        identity_op,
    )?;
    let morphism = Morphism::new(alphabet, algebra, internal_element, ext_op)?;
    RecognizerSpec::new(morphism, accepting)
}

/// The converse construction: a VPA whose states are the algebra elements.
/// A call pushes (current state, call letter) and resets to the identity;
/// the matching return applies ψ(ext_{a′,b}) to the inner value and
/// multiplies it back; internals multiply by their image.
pub fn ext_algebra_to_vpa(spec: &RecognizerSpec) -> Vpa {
    let algebra = spec.algebra();
    let alphabet = spec.alphabet().clone();
    let n = algebra.size();
    let states: Vec<String> = (0..n)
        .map(|i| algebra.element_name(i).to_string())
        .collect();
    // Γ = {#} ∪ (carrier × calls).
    let mut stack_symbols = vec!["#".to_string()];
    let mut symbol_of: BTreeMap<(usize, char), usize> = BTreeMap::new();
    for q in 0..n {
        for &a in alphabet.calls() {
            symbol_of.insert((q, a), stack_symbols.len());
            stack_symbols.push(format!("{}.{a}", algebra.element_name(q)));
        }
    }
    let mut call_delta = BTreeMap::new();
    let mut return_delta = BTreeMap::new();
    let mut internal_delta = BTreeMap::new();
    for q in 0..n {
        for top in 0..stack_symbols.len() {
            for &a in alphabet.calls() {
                call_delta.insert((a, q, top), (algebra.identity(), symbol_of[&(q, a)]));
            }
            for &c in alphabet.internals() {
                internal_delta.insert(
                    (c, q, top),
                    algebra.mul(q, spec.morphism.internal_image(c)),
                );
            }
        }
    }
    for q in 0..n {
        for (&(saved, call), &symbol) in &symbol_of {
            for &b in alphabet.returns() {
                let op = spec.morphism.ext_image(call, b);
                return_delta.insert((b, q, symbol), algebra.mul(saved, algebra.apply(op, q)));
            }
        }
    }
    Vpa {
        alphabet,
        states,
        initial: algebra.identity(),
        stack_symbols,
        bottom: 0,
        call_delta,
        return_delta,
        internal_delta,
        finals: spec.accepting.iter().copied().collect(),
    }
}

/// The monoid-generated Ext-algebra: carrier ψ(WM) ⊆ M, operations
/// x ↦ m·x·m′ over the closure of realizable context pairs. Recognizes
/// h⁻¹(accepting) ∩ WM; such algebras characterize the threshold-zero
/// visibly counter languages.
pub fn monoid_to_ext_algebra(
    monoid: &FiniteMonoid,
    alphabet: &PushdownAlphabet,
    accepting: &BTreeSet<usize>,
) -> Result<RecognizerSpec> {
    monoid.validate(alphabet)?;
    if let Some(&e) = accepting.iter().find(|&&e| e >= monoid.size()) {
        return Err(Error::MalformedTables(format!(
            "accepting monoid element {e} out of range"
        )));
    }
    let h = |c: char| monoid.letter_image[&c];

    // Carrier: closure of {1} under append-internal, wrap-call-return, and
    // pairwise products. This is exactly the image of the well-matched words.
    let mut carrier: Vec<usize> = vec![monoid.identity];
    let mut in_carrier: BTreeSet<usize> = carrier.iter().copied().collect();
    let mut next = 0;
    while next < carrier.len() {
        let x = carrier[next];
        next += 1;
        let mut candidates: Vec<usize> = Vec::new();
        for &c in alphabet.internals() {
            candidates.push(monoid.mul(x, h(c)));
        }
        for &a in alphabet.calls() {
            for &b in alphabet.returns() {
                candidates.push(monoid.mul(monoid.mul(h(a), x), h(b)));
            }
        }
        for &y in carrier.iter() {
            candidates.push(monoid.mul(x, y));
            candidates.push(monoid.mul(y, x));
        }
        for m in candidates {
            if in_carrier.insert(m) {
                carrier.push(m);
            }
        }
    }
    carrier.sort_unstable();
    let rank: HashMap<usize, usize> = carrier
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let n = carrier.len();

    // Context-pair closure: all (ψ(u), ψ(v)) over valid contexts (u,v).
    let mut pairs: Vec<(usize, usize)> = vec![(monoid.identity, monoid.identity)];
    let mut seen_pairs: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
    let mut next = 0;
    while next < pairs.len() {
        let (l, r) = pairs[next];
        next += 1;
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        for &c in alphabet.internals() {
            candidates.push((monoid.mul(l, h(c)), r));
            candidates.push((l, monoid.mul(h(c), r)));
        }
        for &a in alphabet.calls() {
            for &b in alphabet.returns() {
                candidates.push((monoid.mul(l, h(a)), monoid.mul(h(b), r)));
            }
        }
        for &x in &carrier {
            candidates.push((monoid.mul(l, x), r));
            candidates.push((l, monoid.mul(x, r)));
        }
        for p in candidates {
            if seen_pairs.insert(p) {
                pairs.push(p);
            }
        }
    }

    // Deduplicate the pairs into transformation tables on the carrier.
    let mut tables: Vec<Vec<usize>> = Vec::new();
    let mut table_index: HashMap<Vec<usize>, usize> = HashMap::new();
    for &(l, r) in &pairs {
        let table: Vec<usize> = carrier
            .iter()
            .map(|&x| rank[&monoid.mul(monoid.mul(l, x), r)])
            .collect();
        if !table_index.contains_key(&table) {
            table_index.insert(table.clone(), tables.len());
            tables.push(table);
        }
    }

    let mut mult = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            mult[i * n + j] = rank[&monoid.mul(carrier[i], carrier[j])];
        }
    }
    let element_names: Vec<String> = carrier
        .iter()
        .map(|&m| monoid.element_names[m].clone())
        .collect();
    let op_names: Vec<String> = (0..tables.len()).map(|i| format!("o{i}")).collect();
    let identity_op = table_index[&(0..n).collect::<Vec<usize>>()];

    let mut internal_image = BTreeMap::new();
    for &c in alphabet.internals() {
        internal_image.insert(c, rank[&h(c)]);
    }
    let mut ext_image = BTreeMap::new();
    for &a in alphabet.calls() {
        for &b in alphabet.returns() {
            let table: Vec<usize> = carrier
                .iter()
                .map(|&x| rank[&monoid.mul(monoid.mul(h(a), x), h(b))])
                .collect();
            ext_image.insert((a, b), table_index[&table]);
        }
    }
    let accepting_carrier: BTreeSet<usize> = carrier
        .iter()
        .enumerate()
        .filter(|(_, old)| accepting.contains(old))
        .map(|(new, _)| new)
        .collect();

    let algebra = ExtAlgebra::new(
        element_names,
        rank[&monoid.identity],
        mult,
        tables,
        op_names,
        identity_op,
    )?;
    let morphism = Morphism::new(alphabet.clone(), algebra, internal_image, ext_image)?;
    RecognizerSpec::new(morphism, accepting_carrier)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::tests::example_one;
    use crate::compare::are_isomorphic;
    use crate::constructions::syntactic_quotient;
    use crate::morphism::tests::anbn_spec;
    use crate::vpa::tests::anbn_vpa;
    use crate::words::{enumerate_well_matched, Word};

    #[test]
    fn anbn_vpa_behaviour_algebra_recognizes_and_minimizes() {
        let vpa = anbn_vpa();
        let spec = vpa_to_ext_algebra(&vpa).unwrap();
        assert!(spec.algebra().validate().is_empty());
        let alpha = vpa.alphabet.clone();
        for w in enumerate_well_matched(&alpha, 12) {
            assert_eq!(spec.accepts(&w).unwrap(), vpa.accepts(&w).unwrap());
        }
        let (min, _) = syntactic_quotient(&spec).unwrap();
        assert!(
            are_isomorphic(min.algebra(), &example_one(), 64)
                .unwrap()
                .is_some()
        );
    }

    #[test]
    fn all_accepting_vpa_minimizes_to_one_element() {
        let alphabet = PushdownAlphabet::new(&['a'], &['b'], &[]).unwrap();
        let mut call_delta = BTreeMap::new();
        call_delta.insert(('a', 0, 0), (0, 1));
        call_delta.insert(('a', 0, 1), (0, 1));
        let mut return_delta = BTreeMap::new();
        return_delta.insert(('b', 0, 1), 0);
        let vpa = Vpa {
            alphabet,
            states: vec!["q".into()],
            initial: 0,
            stack_symbols: vec!["#".into(), "A".into()],
            bottom: 0,
            call_delta,
            return_delta,
            internal_delta: BTreeMap::new(),
            finals: BTreeSet::from([0]),
        };
        let spec = vpa_to_ext_algebra(&vpa).unwrap();
        let (min, _) = syntactic_quotient(&spec).unwrap();
        assert_eq!(min.algebra().size(), 1);
    }

    #[test]
    fn example_one_to_vpa_shape_and_language() {
        let spec = anbn_spec();
        let vpa = ext_algebra_to_vpa(&spec);
        vpa.validate().unwrap();
        assert_eq!(vpa.states.len(), 3);
        assert_eq!(vpa.stack_symbols.len(), 1 + 3);
        let alpha = spec.alphabet().clone();
        for w in enumerate_well_matched(&alpha, 10) {
            assert_eq!(vpa.accepts(&w).unwrap(), spec.accepts(&w).unwrap());
        }
    }

    #[test]
    fn one_element_spec_to_vpa_accepts_all() {
        let alphabet = PushdownAlphabet::new(&['a'], &['b'], &['c']).unwrap();
        let algebra = ExtAlgebra::trivial();
        let morphism = Morphism::new(
            alphabet.clone(),
            algebra,
            BTreeMap::from([('c', 0)]),
            BTreeMap::from([(('a', 'b'), 0)]),
        )
        .unwrap();
        let spec = RecognizerSpec::new(morphism, BTreeSet::from([0])).unwrap();
        let vpa = ext_algebra_to_vpa(&spec);
        for w in enumerate_well_matched(&alphabet, 6) {
            assert!(vpa.accepts(&w).unwrap());
        }
    }

    #[test]
    fn converse_round_trip_preserves_language() {
        let spec = anbn_spec();
        let vpa = ext_algebra_to_vpa(&spec);
        let back = vpa_to_ext_algebra(&vpa).unwrap();
        let alpha = spec.alphabet().clone();
        for w in enumerate_well_matched(&alpha, 10) {
            assert_eq!(back.accepts(&w).unwrap(), spec.accepts(&w).unwrap());
        }
    }

    #[test]
    fn converse_runs_simulate_evaluation() {
        // δ̂(w, q, G) = (q · ψ(w), G) on the constructed machine.
        let spec = anbn_spec();
        let vpa = ext_algebra_to_vpa(&spec);
        let alpha = spec.alphabet().clone();
        for w in enumerate_well_matched(&alpha, 8) {
            let value = spec.morphism.evaluate(&w).unwrap();
            for q in 0..spec.algebra().size() {
                for top in 0..vpa.stack_symbols.len() {
                    let mut stack = vec![vpa.bottom, top];
                    let state = vpa.run_from(&w, q, &mut stack).unwrap();
                    assert_eq!(state, spec.algebra().mul(q, value));
                    assert_eq!(stack, vec![vpa.bottom, top]);
                }
            }
        }
    }

    /// Transition monoid of the three-state DFA for a*b*.
    pub fn astar_bstar_monoid() -> (FiniteMonoid, BTreeSet<usize>) {
        // Elements listed as their maps on (p0, p1, pd); x·y acts as
        // "apply x, then y".
        let maps: Vec<Vec<usize>> = vec![
            vec![0, 1, 2], // 1
            vec![0, 2, 2], // a
            vec![1, 1, 2], // b
            vec![1, 2, 2], // ab
            vec![2, 2, 2], // zero
            vec![2, 1, 2], // ba
        ];
        let index_of = |m: &Vec<usize>| maps.iter().position(|x| x == m).unwrap();
        let compose = |f: &Vec<usize>, g: &Vec<usize>| -> Vec<usize> {
            f.iter().map(|&q| g[q]).collect()
        };
        let n = maps.len();
        let mut mult = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                mult[i * n + j] = index_of(&compose(&maps[i], &maps[j]));
            }
        }
        let monoid = FiniteMonoid {
            element_names: vec![
                "1".into(),
                "a".into(),
                "b".into(),
                "ab".into(),
                "z".into(),
                "ba".into(),
            ],
            identity: 0,
            mult,
            letter_image: BTreeMap::from([('a', 1), ('b', 2)]),
        };
        // Accepting: maps sending p0 into {p0, p1}.
        let accepting = maps
            .iter()
            .enumerate()
            .filter(|(_, m)| m[0] <= 1)
            .map(|(i, _)| i)
            .collect();
        (monoid, accepting)
    }

    #[test]
    fn astar_bstar_monoid_is_closed() {
        let alphabet = PushdownAlphabet::new(&['a'], &['b'], &[]).unwrap();
        let (monoid, _) = astar_bstar_monoid();
        monoid.validate(&alphabet).unwrap();
    }

    #[test]
    fn monoid_generated_algebra_recognizes_anbn() {
        let alphabet = PushdownAlphabet::new(&['a'], &['b'], &[]).unwrap();
        let (monoid, accepting) = astar_bstar_monoid();
        let spec = monoid_to_ext_algebra(&monoid, &alphabet, &accepting).unwrap();
        assert!(spec.algebra().validate().is_empty());
        let oracle = anbn_spec();
        for w in enumerate_well_matched(&alphabet, 10) {
            assert_eq!(spec.accepts(&w).unwrap(), oracle.accepts(&w).unwrap());
        }
    }

    #[test]
    fn trivial_monoid_accepts_all_well_matched() {
        let alphabet = PushdownAlphabet::new(&['a'], &['b'], &['c']).unwrap();
        let monoid = FiniteMonoid {
            element_names: vec!["1".into()],
            identity: 0,
            mult: vec![0],
            letter_image: BTreeMap::from([('a', 0), ('b', 0), ('c', 0)]),
        };
        let spec =
            monoid_to_ext_algebra(&monoid, &alphabet, &BTreeSet::from([0])).unwrap();
        for w in enumerate_well_matched(&alphabet, 6) {
            assert!(spec.accepts(&w).unwrap());
        }
    }

    #[test]
    fn two_element_group_parity() {
        let alphabet = PushdownAlphabet::new(&['a'], &['b'], &[]).unwrap();
        let monoid = FiniteMonoid {
            element_names: vec!["1".into(), "g".into()],
            identity: 0,
            mult: vec![0, 1, 1, 0],
            letter_image: BTreeMap::from([('a', 1), ('b', 1)]),
        };
        let spec =
            monoid_to_ext_algebra(&monoid, &alphabet, &BTreeSet::from([0])).unwrap();
        // Every well-matched word has equal call and return counts, hence
        // even length and image 1.
        for w in enumerate_well_matched(&alphabet, 8) {
            assert!(spec.accepts(&w).unwrap(), "word {w}");
        }
        assert!(matches!(
            spec.accepts(&Word::from_letters(vec!['a'])),
            Err(Error::NotWellMatched(_))
        ));
    }
}
