//! The pseudo-variety constructions: direct products, generated
//! subalgebras, quotients by congruences, and syntactic minimization.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::ExtAlgebra;
use crate::error::Error;
use crate::morphism::{Morphism, RecognizerSpec};
use crate::Result;

/// Default cap on carriers and op sets grown by fixpoint closures.
pub const CLOSURE_CAP: usize = 4096;

/// The direct product R × S: componentwise multiplication, with O(R × S)
/// generated by the maps f_e(r,s) = (e(r), s) and g_e(r,s) = (r, e(s)).
pub fn direct_product(left: &ExtAlgebra, right: &ExtAlgebra) -> Result<ExtAlgebra> {
    let n1 = left.size();
    let n2 = right.size();
    let n = n1 * n2;
    let pair = |r: usize, s: usize| r * n2 + s;
    let mut names = Vec::with_capacity(n);
    for r in 0..n1 {
        for s in 0..n2 {
            names.push(format!(
                "{}.{}",
                left.element_name(r),
                right.element_name(s)
            ));
        }
    }
    let mut mult = vec![0usize; n * n];
    for r1 in 0..n1 {
        for s1 in 0..n2 {
            for r2 in 0..n1 {
                for s2 in 0..n2 {
                    mult[pair(r1, s1) * n + pair(r2, s2)] =
                        pair(left.mul(r1, r2), right.mul(s1, s2));
                }
            }
        }
    }
    // Generator tables, then composition closure.
    let mut tables: Vec<Vec<usize>> = Vec::new();
    let mut lookup: HashMap<Vec<usize>, usize> = HashMap::new();
    let push = |tables: &mut Vec<Vec<usize>>,
                    lookup: &mut HashMap<Vec<usize>, usize>,
                    t: Vec<usize>| {
        if !lookup.contains_key(&t) {
            lookup.insert(t.clone(), tables.len());
            tables.push(t);
        }
    };
    for e in 0..left.op_count() {
        let t: Vec<usize> = (0..n)
            .map(|x| pair(left.apply(e, x / n2), x % n2))
            .collect();
        push(&mut tables, &mut lookup, t);
    }
    for e in 0..right.op_count() {
        let t: Vec<usize> = (0..n)
            .map(|x| pair(x / n2, right.apply(e, x % n2)))
            .collect();
        push(&mut tables, &mut lookup, t);
    }
    let mut next = 0;
    while next < tables.len() {
        if tables.len() > CLOSURE_CAP {
            return Err(Error::SizeCapExceeded(format!(
                "product op closure grew past {CLOSURE_CAP}"
            )));
        }
        let current = next;
        next += 1;
        for other in 0..tables.len() {
            let a = ExtAlgebra::compose_tables(&tables[current], &tables[other]);
            push(&mut tables, &mut lookup, a);
            let b = ExtAlgebra::compose_tables(&tables[other], &tables[current]);
            push(&mut tables, &mut lookup, b);
        }
    }
    let op_names: Vec<String> = (0..tables.len()).map(|i| format!("o{i}")).collect();
    let identity_table: Vec<usize> = (0..n).collect();
    let identity_op = lookup[&identity_table];
    ExtAlgebra::new(
        names,
        pair(left.identity(), right.identity()),
        mult,
        tables,
        op_names,
        identity_op,
    )
}

/// Pairs two recognizers over the same alphabet into a product recognizer;
/// with accepting = P₁ × P₂ it recognizes the intersection.
pub fn product_spec(left: &RecognizerSpec, right: &RecognizerSpec) -> Result<RecognizerSpec> {
    if left.alphabet() != right.alphabet() {
        return Err(Error::MalformedTables(
            "product of recognizers over different alphabets".into(),
        ));
    }
    let product = direct_product(left.algebra(), right.algebra())?;
    let n2 = right.algebra().size();
    let pair = |r: usize, s: usize| r * n2 + s;
    let mut internal_image = BTreeMap::new();
    for (&c, &e1) in left.morphism.internal_images() {
        let e2 = right.morphism.internal_image(c);
        internal_image.insert(c, pair(e1, e2));
    }
    let mut ext_image = BTreeMap::new();
    let n = product.size();
    for (&(a, b), &o1) in left.morphism.ext_images() {
        let o2 = right.morphism.ext_image(a, b);
        let table: Vec<usize> = (0..n)
            .map(|x| {
                pair(
                    left.algebra().apply(o1, x / n2),
                    right.algebra().apply(o2, x % n2),
                )
            })
            .collect();
        let op = product.op_index_of(&table).ok_or_else(|| {
            Error::ClosureViolation(format!("paired op for ({a},{b}) missing in product"))
        })?;
        ext_image.insert((a, b), op);
    }
    let mut accepting = BTreeSet::new();
    for &p in &left.accepting {
        for &q in &right.accepting {
            accepting.insert(pair(p, q));
        }
    }
    RecognizerSpec::new(
        Morphism::new(
            left.alphabet().clone(),
            product,
            internal_image,
            ext_image,
        )?,
        accepting,
    )
}

/// The smallest sub-Ext-algebra of `algebra` containing the given element
/// and op generators: contains the identity, is closed under mult, under
/// application of its ops, and contains left/right translations by all its
/// elements. Returns the sub plus embeddings (new index → old index).
pub fn generated_subalgebra(
    algebra: &ExtAlgebra,
    element_gens: &BTreeSet<usize>,
    op_gens: &BTreeSet<usize>,
) -> Result<(ExtAlgebra, Vec<usize>, Vec<usize>)> {
    let mut elements: BTreeSet<usize> = element_gens.clone();
    elements.insert(algebra.identity());
    let mut ops: BTreeSet<usize> = op_gens.clone();
    ops.insert(algebra.identity_op());
    // Fixpoint: alternate closing the carrier and the op set.
    loop {
        let before = (elements.len(), ops.len());
        let members: Vec<usize> = elements.iter().copied().collect();
        for &x in &members {
            for &y in &members {
                elements.insert(algebra.mul(x, y));
            }
            for &op in ops.iter() {
                elements.insert(algebra.apply(op, x));
            }
        }
        let mut new_ops: BTreeSet<usize> = ops.clone();
        for &x in &elements {
            for table in [algebra.left_translation(x), algebra.right_translation(x)] {
                if let Some(op) = algebra.op_index_of(&table) {
                    new_ops.insert(op);
                } else {
                    return Err(Error::ClosureViolation(format!(
                        "translation by {} missing from the ambient op set",
                        algebra.element_name(x)
                    )));
                }
            }
        }
        let op_list: Vec<usize> = new_ops.iter().copied().collect();
        for &o1 in &op_list {
            for &o2 in &op_list {
                let composed =
                    ExtAlgebra::compose_tables(algebra.op_table(o1), algebra.op_table(o2));
                if let Some(op) = algebra.op_index_of(&composed) {
                    new_ops.insert(op);
                } else {
                    return Err(Error::ClosureViolation(format!(
                        "composition {} ∘ {} missing from the ambient op set",
                        algebra.op_name(o1),
                        algebra.op_name(o2)
                    )));
                }
            }
        }
        ops = new_ops;
        if (elements.len(), ops.len()) == before {
            break;
        }
    }
    let element_embed: Vec<usize> = elements.iter().copied().collect();
    let rank: HashMap<usize, usize> = element_embed
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let n = element_embed.len();
    let names: Vec<String> = element_embed
        .iter()
        .map(|&e| algebra.element_name(e).to_string())
        .collect();
    let mut mult = vec![0usize; n * n];
    for (i, &x) in element_embed.iter().enumerate() {
        for (j, &y) in element_embed.iter().enumerate() {
            mult[i * n + j] = rank[&algebra.mul(x, y)];
        }
    }
    // Restrict the ops; distinct ambient ops may coincide on the sub.
    let mut tables: Vec<Vec<usize>> = Vec::new();
    let mut op_embed: Vec<usize> = Vec::new();
    let mut names_ops: Vec<String> = Vec::new();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    for &op in &ops {
        let table: Vec<usize> = element_embed
            .iter()
            .map(|&x| rank[&algebra.apply(op, x)])
            .collect();
        if !seen.contains_key(&table) {
            seen.insert(table.clone(), tables.len());
            tables.push(table);
            op_embed.push(op);
            names_ops.push(algebra.op_name(op).to_string());
        }
    }
    let identity_table: Vec<usize> = (0..n).collect();
    let identity_op = seen[&identity_table];
    let sub = ExtAlgebra::new(
        names,
        rank[&algebra.identity()],
        mult,
        tables,
        names_ops,
        identity_op,
    )?;
    Ok((sub, element_embed, op_embed))
}

/// Quotient by a congruence. The partition (element index → block id) must
/// cover all elements; compatibility with the multiplication on both sides
/// and with every op is verified, with the first witness reported.
pub fn quotient(
    algebra: &ExtAlgebra,
    partition: &[usize],
) -> Result<(ExtAlgebra, Vec<usize>)> {
    let n = algebra.size();
    if partition.len() != n {
        return Err(Error::MalformedTables(format!(
            "partition covers {} of {} elements",
            partition.len(),
            n
        )));
    }
    // Canonical block ids: order of first appearance.
    let mut block_of = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut remap: HashMap<usize, usize> = HashMap::new();
    for (x, &raw) in partition.iter().enumerate() {
        let id = *remap.entry(raw).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        block_of[x] = id;
        blocks[id].push(x);
    }
    // Congruence check: same block stays same block under every op and
    // under multiplication by any element on either side.
    for block in &blocks {
        let first = block[0];
        for &other in &block[1..] {
            for op in 0..algebra.op_count() {
                if block_of[algebra.apply(op, first)] != block_of[algebra.apply(op, other)] {
                    return Err(Error::NotACongruence {
                        op: algebra.op_name(op).to_string(),
                        x: algebra.element_name(first).to_string(),
                        y: algebra.element_name(other).to_string(),
                    });
                }
            }
            for r in 0..n {
                if block_of[algebra.mul(r, first)] != block_of[algebra.mul(r, other)] {
                    return Err(Error::NotACongruence {
                        op: format!("left multiplication by {}", algebra.element_name(r)),
                        x: algebra.element_name(first).to_string(),
                        y: algebra.element_name(other).to_string(),
                    });
                }
                if block_of[algebra.mul(first, r)] != block_of[algebra.mul(other, r)] {
                    return Err(Error::NotACongruence {
                        op: format!("right multiplication by {}", algebra.element_name(r)),
                        x: algebra.element_name(first).to_string(),
                        y: algebra.element_name(other).to_string(),
                    });
                }
            }
        }
    }
    let k = blocks.len();
    let names: Vec<String> = blocks
        .iter()
        .map(|b| algebra.element_name(b[0]).to_string())
        .collect();
    let mut mult = vec![0usize; k * k];
    for (i, bi) in blocks.iter().enumerate() {
        for (j, bj) in blocks.iter().enumerate() {
            mult[i * k + j] = block_of[algebra.mul(bi[0], bj[0])];
        }
    }
    // Induced op tables e([x]) = [e(x)], deduplicated.
    let mut tables: Vec<Vec<usize>> = Vec::new();
    let mut op_names: Vec<String> = Vec::new();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    for op in 0..algebra.op_count() {
        let table: Vec<usize> = blocks
            .iter()
            .map(|b| block_of[algebra.apply(op, b[0])])
            .collect();
        if !seen.contains_key(&table) {
            seen.insert(table.clone(), tables.len());
            tables.push(table);
            op_names.push(algebra.op_name(op).to_string());
        }
    }
    let identity_table: Vec<usize> = (0..k).collect();
    let identity_op = *seen.get(&identity_table).ok_or_else(|| {
        Error::ClosureViolation("quotient lost the identity op".into())
    })?;
    let quotient = ExtAlgebra::new(
        names,
        block_of[algebra.identity()],
        mult,
        tables,
        op_names,
        identity_op,
    )?;
    Ok((quotient, block_of))
}

/// Syntactic minimization: merges elements whose every op image lands in or
/// out of the accepting set together. The computed relation is always a
/// congruence because O(R) contains the translations and is closed under
/// composition; this is asserted at runtime. Idempotent up to isomorphism.
pub fn syntactic_quotient(spec: &RecognizerSpec) -> Result<(RecognizerSpec, Vec<usize>)> {
    let algebra = spec.algebra();
    let n = algebra.size();
    let mut signature_of: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut partition = vec![0usize; n];
    for x in 0..n {
        let signature: Vec<bool> = (0..algebra.op_count())
            .map(|op| spec.accepting.contains(&algebra.apply(op, x)))
            .collect();
        let next = signature_of.len();
        partition[x] = *signature_of.entry(signature).or_insert(next);
    }
    let (quotient_algebra, projection) =
        quotient(algebra, &partition).expect("syntactic relation is a congruence");
    let mut internal_image = BTreeMap::new();
    for (&c, &e) in spec.morphism.internal_images() {
        internal_image.insert(c, projection[e]);
    }
    let mut ext_image = BTreeMap::new();
    for (&(a, b), &op) in spec.morphism.ext_images() {
        // The induced table of the old op.
        let table: Vec<usize> = representative_per_block(&projection, quotient_algebra.size())
            .iter()
            .map(|&x| projection[algebra.apply(op, x)])
            .collect();
        let new_op = quotient_algebra
            .op_index_of(&table)
            .expect("induced op survives deduplication");
        ext_image.insert((a, b), new_op);
    }
    let accepting: BTreeSet<usize> = spec.accepting.iter().map(|&e| projection[e]).collect();
    // Accepting classes are unions of blocks: the identity op separates
    // accepting from non-accepting signatures.
    for x in 0..n {
        let accepted = spec.accepting.contains(&x);
        assert_eq!(
            accepting.contains(&partition_block(&projection, x)),
            accepted,
            "accepting set is a union of syntactic classes"
        );
    }
    let morphism = Morphism::new(
        spec.alphabet().clone(),
        quotient_algebra,
        internal_image,
        ext_image,
    )?;
    Ok((RecognizerSpec::new(morphism, accepting)?, projection))
}

fn representative_per_block(projection: &[usize], block_count: usize) -> Vec<usize> {
    let mut reps = vec![usize::MAX; block_count];
    for (x, &b) in projection.iter().enumerate() {
        if reps[b] == usize::MAX {
            reps[b] = x;
        }
    }
    reps
}

fn partition_block(projection: &[usize], x: usize) -> usize {
    projection[x]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::example_one;
    use crate::compare::are_isomorphic;
    use crate::morphism::tests::anbn_spec;
    use crate::words::enumerate_well_matched;

    #[test]
    fn product_carrier_sizes() {
        let r = example_one();
        let s = ExtAlgebra::trivial();
        let p = direct_product(&r, &s).unwrap();
        assert_eq!(p.size(), 3);
        assert!(p.validate().is_empty());
        assert!(are_isomorphic(&r, &p, 64).unwrap().is_some());
        let q = direct_product(&r, &r).unwrap();
        assert_eq!(q.size(), 9);
        assert!(q.validate().is_empty());
    }

    #[test]
    fn product_spec_recognizes_intersection() {
        let spec = anbn_spec();
        let paired = product_spec(&spec, &spec).unwrap();
        let alpha = spec.alphabet().clone();
        for w in enumerate_well_matched(&alpha, 10) {
            assert_eq!(
                paired.accepts(&w).unwrap(),
                spec.accepts(&w).unwrap(),
                "word {w}"
            );
        }
    }

    #[test]
    fn generated_subalgebra_examples() {
        let alg = example_one();
        // Trivial generation.
        let (sub, elems, _) = generated_subalgebra(
            &alg,
            &BTreeSet::from([alg.identity()]),
            &BTreeSet::from([alg.identity_op()]),
        )
        .unwrap();
        assert_eq!(sub.size(), 1);
        assert_eq!(elems, vec![0]);
        // The ext op alone reaches the whole algebra.
        let (sub, _, _) =
            generated_subalgebra(&alg, &BTreeSet::new(), &BTreeSet::from([1])).unwrap();
        assert_eq!(sub.size(), 3);
        assert!(sub.validate().is_empty());
        // Full generators reproduce the algebra.
        let (sub, _, _) = generated_subalgebra(
            &alg,
            &(0..alg.size()).collect(),
            &(0..alg.op_count()).collect(),
        )
        .unwrap();
        assert!(are_isomorphic(&alg, &sub, 64).unwrap().is_some());
    }

    #[test]
    fn quotient_examples() {
        let alg = example_one();
        // Discrete partition: isomorphic copy.
        let (copy, _) = quotient(&alg, &[0, 1, 2]).unwrap();
        assert!(are_isomorphic(&alg, &copy, 64).unwrap().is_some());
        // Total partition: one-element algebra.
        let (one, _) = quotient(&alg, &[0, 0, 0]).unwrap();
        assert_eq!(one.size(), 1);
        // {1,x},{0} is not a congruence: left translation by x separates
        // the first block (x·1 = x stays, x·x = 0 leaves).
        let err = quotient(&alg, &[0, 0, 1]).unwrap_err();
        assert!(matches!(err, Error::NotACongruence { .. }));
        // {1},{x,0} is a congruence (every op keeps the big block inside
        // itself); the quotient has two elements.
        let (two, _) = quotient(&alg, &[0, 1, 1]).unwrap();
        assert_eq!(two.size(), 2);
        assert!(two.validate().is_empty());
    }

    #[test]
    fn syntactic_quotient_examples() {
        let spec = anbn_spec();
        // Already syntactic: quotient is isomorphic to itself.
        let (min, _) = syntactic_quotient(&spec).unwrap();
        assert!(
            are_isomorphic(spec.algebra(), min.algebra(), 64)
                .unwrap()
                .is_some()
        );
        // Accepting everything collapses to one element.
        let all = RecognizerSpec::new(spec.morphism.clone(), (0..3).collect()).unwrap();
        let (one, _) = syntactic_quotient(&all).unwrap();
        assert_eq!(one.algebra().size(), 1);
        // Same language, idempotent.
        let alpha = spec.alphabet().clone();
        for w in enumerate_well_matched(&alpha, 10) {
            assert_eq!(min.accepts(&w).unwrap(), spec.accepts(&w).unwrap());
        }
        let (twice, _) = syntactic_quotient(&min).unwrap();
        assert!(
            are_isomorphic(min.algebra(), twice.algebra(), 64)
                .unwrap()
                .is_some()
        );
    }

    #[test]
    fn quotient_projection_is_a_morphism() {
        let alg = example_one();
        let (q, proj) = quotient(&alg, &[0, 1, 1]).unwrap();
        for x in 0..alg.size() {
            for y in 0..alg.size() {
                assert_eq!(
                    proj[alg.mul(x, y)],
                    q.mul(proj[x], proj[y]),
                    "projection respects mult"
                );
            }
        }
        for op in 0..alg.op_count() {
            // Induced table: the image of each op acts as [e(x)] on blocks.
            for x in 0..alg.size() {
                let induced: Vec<usize> = {
                    let mut reps = vec![usize::MAX; q.size()];
                    for (e, &b) in proj.iter().enumerate() {
                        if reps[b] == usize::MAX {
                            reps[b] = e;
                        }
                    }
                    reps.iter().map(|&r| proj[alg.apply(op, r)]).collect()
                };
                let found = q.op_index_of(&induced).expect("induced op present");
                assert_eq!(q.apply(found, proj[x]), proj[alg.apply(op, x)]);
            }
        }
    }
}
