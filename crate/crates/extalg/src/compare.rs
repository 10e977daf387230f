//! Isomorphism testing and bounded division search (quotient of a sub).

use std::collections::BTreeSet;

use crate::algebra::ExtAlgebra;
use crate::constructions::{generated_subalgebra, quotient};
use crate::error::Error;
use crate::Result;

/// Caps for the bounded searches in this module.
#[derive(Debug, Clone, Copy)]
pub struct SearchCaps {
    /// Largest carrier accepted by the isomorphism search.
    pub iso_carrier: usize,
    /// Largest number of (element subset, op subset) generator pairs the
    /// division search will enumerate exhaustively.
    pub division_subsets: usize,
    /// Largest subalgebra carrier for which all partitions are enumerated.
    pub congruence_carrier: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            iso_carrier: 64,
            division_subsets: 4096,
            congruence_carrier: 8,
        }
    }
}

/// Isomorphism-invariant fingerprint used to prune the bijection search.
fn signature(alg: &ExtAlgebra, x: usize) -> (bool, bool, usize, usize, usize) {
    let n = alg.size();
    let idempotent = alg.mul(x, x) == x;
    let occurrences = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| alg.mul(a, b) == x)
        .count();
    let fixed_by = (0..alg.op_count()).filter(|&e| alg.apply(e, x) == x).count();
    let hit_by = (0..alg.op_count())
        .map(|e| (0..n).filter(|&y| alg.apply(e, y) == x).count())
        .sum();
    (x == alg.identity(), idempotent, occurrences, fixed_by, hit_by)
}

/// Decides whether two algebras are isomorphic; returns the witness
/// bijection (index in `left` → index in `right`) when they are.
pub fn are_isomorphic(
    left: &ExtAlgebra,
    right: &ExtAlgebra,
    cap: usize,
) -> Result<Option<Vec<usize>>> {
    if left.size() > cap || right.size() > cap {
        return Err(Error::SizeCapExceeded(format!(
            "isomorphism search capped at carrier {cap}"
        )));
    }
    if left.size() != right.size() || left.op_count() != right.op_count() {
        return Ok(None);
    }
    let n = left.size();
    let left_sig: Vec<_> = (0..n).map(|x| signature(left, x)).collect();
    let right_sig: Vec<_> = (0..n).map(|x| signature(right, x)).collect();
    {
        let mut l = left_sig.clone();
        let mut r = right_sig.clone();
        l.sort_unstable();
        r.sort_unstable();
        if l != r {
            return Ok(None);
        }
    }
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    mapping[left.identity()] = right.identity();
    used[right.identity()] = true;
    if search(left, right, &left_sig, &right_sig, &mut mapping, &mut used, 0) {
        Ok(Some(mapping))
    } else {
        Ok(None)
    }
}

fn search(
    left: &ExtAlgebra,
    right: &ExtAlgebra,
    left_sig: &[(bool, bool, usize, usize, usize)],
    right_sig: &[(bool, bool, usize, usize, usize)],
    mapping: &mut Vec<usize>,
    used: &mut Vec<bool>,
    next: usize,
) -> bool {
    let n = left.size();
    let Some(x) = (next..n).find(|&x| mapping[x] == usize::MAX) else {
        return ops_correspond(left, right, mapping);
    };
    for y in 0..n {
        if used[y] || left_sig[x] != right_sig[y] {
            continue;
        }
        if !consistent(left, right, mapping, x, y) {
            continue;
        }
        mapping[x] = y;
        used[y] = true;
        if search(left, right, left_sig, right_sig, mapping, used, next) {
            return true;
        }
        mapping[x] = usize::MAX;
        used[y] = false;
    }
    false
}

/// Checks multiplication constraints among the elements assigned so far.
fn consistent(
    left: &ExtAlgebra,
    right: &ExtAlgebra,
    mapping: &[usize],
    x: usize,
    y: usize,
) -> bool {
    let assigned =
        |e: usize| -> Option<usize> { (mapping[e] != usize::MAX).then(|| mapping[e]) };
    let image = |e: usize| if e == x { Some(y) } else { assigned(e) };
    for u in 0..left.size() {
        let Some(fu) = image(u) else { continue };
        for (p, q, fp, fq) in [(x, u, y, fu), (u, x, fu, y)] {
            if let Some(fpq) = image(left.mul(p, q)) {
                if right.mul(fp, fq) != fpq {
                    return false;
                }
            }
        }
    }
    true
}

/// With the element bijection fixed, the op tables must correspond as sets.
fn ops_correspond(left: &ExtAlgebra, right: &ExtAlgebra, mapping: &[usize]) -> bool {
    let n = left.size();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for e in 0..left.op_count() {
        let mut conjugate = vec![0usize; n];
        for x in 0..n {
            conjugate[mapping[x]] = mapping[left.apply(e, x)];
        }
        if right.op_index_of(&conjugate).is_none() {
            return false;
        }
        seen.insert(conjugate);
    }
    seen.len() == right.op_count()
}

/// Witness that R divides S: generators of a subalgebra of S and a
/// congruence on it whose quotient is isomorphic to R.
#[derive(Debug, Clone)]
pub struct DivisionWitness {
    pub element_generators: BTreeSet<usize>,
    pub op_generators: BTreeSet<usize>,
    pub partition: Vec<usize>,
    pub isomorphism: Vec<usize>,
}

/// Result of the bounded division search. `exhaustive` reports whether the
/// whole space was covered: a missing witness is conclusive only then.
#[derive(Debug, Clone)]
pub struct DivisionOutcome {
    pub witness: Option<DivisionWitness>,
    pub exhaustive: bool,
}

/// Bounded exhaustive search for "R is the quotient of a sub of S".
pub fn divides(target: &ExtAlgebra, ambient: &ExtAlgebra, caps: SearchCaps) -> Result<DivisionOutcome> {
    let n = ambient.size();
    let m = ambient.op_count();
    let total_subsets = (1usize << n.min(20)).saturating_mul(1usize << m.min(20));
    let mut exhaustive = n < 20 && m < 20 && total_subsets <= caps.division_subsets;
    let mut seen_subs: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();

    let elem_masks: Vec<u64> = if exhaustive {
        (0..(1u64 << n)).collect()
    } else {
        vec![0, (1u64 << n.min(63)) - 1]
    };
    let op_masks: Vec<u64> = if exhaustive {
        (0..(1u64 << m)).collect()
    } else {
        vec![0, (1u64 << m.min(63)) - 1]
    };

    for &em in &elem_masks {
        for &om in &op_masks {
            let element_generators: BTreeSet<usize> =
                (0..n).filter(|&i| em & (1 << i) != 0).collect();
            let op_generators: BTreeSet<usize> =
                (0..m).filter(|&i| om & (1 << i) != 0).collect();
            let (sub, elem_embed, op_embed) =
                generated_subalgebra(ambient, &element_generators, &op_generators)?;
            if !seen_subs.insert((elem_embed.clone(), op_embed.clone())) {
                continue;
            }
            if sub.size() < target.size() {
                continue;
            }
            if sub.size() > caps.congruence_carrier {
                exhaustive = false;
                continue;
            }
            for partition in partitions(sub.size()) {
                let Ok((quo, _)) = quotient(&sub, &partition) else {
                    continue;
                };
                if let Some(iso) = are_isomorphic(&quo, target, caps.iso_carrier)? {
                    return Ok(DivisionOutcome {
                        witness: Some(DivisionWitness {
                            element_generators,
                            op_generators,
                            partition,
                            isomorphism: iso,
                        }),
                        exhaustive,
                    });
                }
            }
        }
    }
    Ok(DivisionOutcome {
        witness: None,
        exhaustive,
    })
}

/// All set partitions of {0..n} as restricted growth strings.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    fn grow(current: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for block in 0..=max_used + 1 {
            current[pos] = block;
            grow(current, pos + 1, max_used.max(block), out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    current[0] = 0;
    grow(&mut current, 1, 0, &mut out);
    out
}
