use super::common::{change_value, Ctx};
use super::BuildError;
use crate::alphabet::SymId;
use crate::engine::{DynamicProgram, Initializer, Target, UpdateMap};
use crate::logic::{check_fragment, Atom, FragmentTag, Prenex, Schema, Var};
use crate::monoid::{Elem, Morphism};
use std::collections::{BTreeMap, BTreeSet};

/// A group recognition: letters evaluate into a finite group, acceptance is
/// a subset of group elements.
#[derive(Debug, Clone)]
pub struct GroupPresentation {
    pub morphism: Morphism,
    pub accepting: BTreeSet<Elem>,
}

/// Builds the quantifier-free maintenance program for a group language.
///
/// For every group element `g` the program keeps a bit `Qg` (the whole word
/// evaluates to `g`) and unary relations `Pg` (the prefix ending just before
/// a position evaluates to `g`), `Sg` (the suffix starting just after), and
/// `Vg` (the letter at the position evaluates to `g`, with epsilon counting
/// as the identity). After a change the infix between two positions is
/// recovered from these relations through the inverse identity
/// `g = gi⁻¹·gp⁻¹·gw·gs⁻¹·gj⁻¹`, which is what makes quantifier-free updates
/// possible in a group. All update formulas are positive except for order
/// atoms, so the same construction serves the positive-fragment builders.
pub fn build_group_program(gp: &GroupPresentation) -> Result<DynamicProgram, BuildError> {
    let g = &gp.morphism.target;
    if !g.is_group() {
        return Err(BuildError::NotAGroup);
    }
    for &e in &gp.accepting {
        if e >= g.size() {
            return Err(BuildError::BadElement(e));
        }
    }
    let inv = |x: Elem| g.inverse(x).expect("group elements have inverses");
    let size = g.size();
    let mut schema = Schema::new(gp.morphism.alphabet.clone());
    let mut rel_p = Vec::with_capacity(size);
    let mut rel_s = Vec::with_capacity(size);
    let mut rel_v = Vec::with_capacity(size);
    let mut bit_q = Vec::with_capacity(size);
    let mut intents = BTreeMap::new();
    for e in g.elems() {
        rel_p.push(schema.add_unary(format!("P{e}"))?);
        intents.insert(
            format!("P{e}"),
            format!("prefix before the position evaluates to {}", g.name(e)),
        );
    }
    for e in g.elems() {
        rel_s.push(schema.add_unary(format!("S{e}"))?);
        intents.insert(
            format!("S{e}"),
            format!("suffix after the position evaluates to {}", g.name(e)),
        );
    }
    for e in g.elems() {
        rel_v.push(schema.add_unary(format!("V{e}"))?);
        intents.insert(
            format!("V{e}"),
            format!("letter at the position evaluates to {}", g.name(e)),
        );
    }
    for e in g.elems() {
        bit_q.push(schema.add_bit(format!("Q{e}"))?);
        intents.insert(
            format!("Q{e}"),
            format!("whole word evaluates to {}", g.name(e)),
        );
    }
    let acc_bit = schema.add_bit("acc")?;
    intents.insert("acc".into(), "word evaluates into the accepting set".into());

    let mut ctx = Ctx::new();
    let x = Var::new("x");
    let y = Var::new("y");
    let mut updates: UpdateMap = BTreeMap::new();
    let mut syms: Vec<Option<SymId>> = vec![None];
    syms.extend(gp.morphism.alphabet.ids().map(Some));

    for &sym in &syms {
        let v = change_value(&gp.morphism, sym);
        // V relations: position y now evaluates to v, others keep.
        for e in g.elems() {
            let eq = ctx.f.atom(Atom::Eq(x.clone(), y.clone()));
            let here = if e == v { eq } else { ctx.f.bool_false() };
            let ne = ctx.f.ne(x.clone(), y.clone());
            let keep = ctx.f.atom(Atom::Aux(rel_v[e], x.clone()));
            let elsewhere = ctx.f.and(vec![ne, keep]);
            let m = ctx.f.or(vec![here, elsewhere]);
            insert_update(&mut updates, Target::Unary(rel_v[e]), sym, ctx.qf(m), &[&x, &y]);
        }
        // P relations: x ≤ y unchanged; y < x recomposed through the group.
        for e in g.elems() {
            let le = ctx.le(&x, &y);
            let keep = ctx.f.atom(Atom::Aux(rel_p[e], x.clone()));
            let unchanged = ctx.f.and(vec![le, keep]);
            let gt = ctx.lt(&y, &x);
            let mut cases = Vec::new();
            for p in g.elems() {
                for o in g.elems() {
                    // new prefix(x) = p·v·o⁻¹·p⁻¹·old prefix(x) = e
                    let factor = g.product([p, v, inv(o), inv(p)]);
                    let q = g.mul(inv(factor), e);
                    let pp = ctx.f.atom(Atom::Aux(rel_p[p], y.clone()));
                    let vo = ctx.f.atom(Atom::Aux(rel_v[o], y.clone()));
                    let pq = ctx.f.atom(Atom::Aux(rel_p[q], x.clone()));
                    cases.push(ctx.f.and(vec![pp, vo, pq]));
                }
            }
            let recomposed = ctx.f.or(cases);
            let changed = ctx.f.and(vec![gt, recomposed]);
            let m = ctx.f.or(vec![unchanged, changed]);
            insert_update(&mut updates, Target::Unary(rel_p[e]), sym, ctx.qf(m), &[&x, &y]);
        }
        // S relations mirror P.
        for e in g.elems() {
            let le = ctx.le(&y, &x);
            let keep = ctx.f.atom(Atom::Aux(rel_s[e], x.clone()));
            let unchanged = ctx.f.and(vec![le, keep]);
            let lt = ctx.lt(&x, &y);
            let mut cases = Vec::new();
            for s in g.elems() {
                for o in g.elems() {
                    // new suffix(x) = old suffix(x)·s⁻¹·o⁻¹·v·s = e
                    let tail = g.product([inv(s), inv(o), v, s]);
                    let q = g.mul(e, inv(tail));
                    let sq = ctx.f.atom(Atom::Aux(rel_s[q], x.clone()));
                    let ss = ctx.f.atom(Atom::Aux(rel_s[s], y.clone()));
                    let vo = ctx.f.atom(Atom::Aux(rel_v[o], y.clone()));
                    cases.push(ctx.f.and(vec![sq, ss, vo]));
                }
            }
            let recomposed = ctx.f.or(cases);
            let changed = ctx.f.and(vec![lt, recomposed]);
            let m = ctx.f.or(vec![unchanged, changed]);
            insert_update(&mut updates, Target::Unary(rel_s[e]), sym, ctx.qf(m), &[&x, &y]);
        }
        // Q bits: whole word = prefix(y)·v·suffix(y).
        let q_body = |ctx: &mut Ctx, e: Elem| {
            let mut cases = Vec::new();
            for p in g.elems() {
                let s = g.product([inv(v), inv(p), e]);
                let pp = ctx.f.atom(Atom::Aux(rel_p[p], y.clone()));
                let ss = ctx.f.atom(Atom::Aux(rel_s[s], y.clone()));
                cases.push(ctx.f.and(vec![pp, ss]));
            }
            ctx.f.or(cases)
        };
        for e in g.elems() {
            let m = q_body(&mut ctx, e);
            insert_update(&mut updates, Target::Bit(bit_q[e]), sym, ctx.qf(m), &[&y]);
        }
        let acc_cases: Vec<_> = gp.accepting.iter().map(|&e| q_body(&mut ctx, e)).collect();
        let m = ctx.f.or(acc_cases);
        insert_update(&mut updates, Target::Bit(acc_bit), sym, ctx.qf(m), &[&y]);
    }

    let one = g.identity();
    let init = Initializer {
        unary_full: (0..3 * size).map(|i| i % size == one).collect(),
        bits: {
            let mut bits: Vec<bool> = g.elems().map(|e| e == one).collect();
            bits.push(gp.accepting.contains(&one));
            bits
        },
    };
    let member_bits = g
        .elems()
        .map(|e| (e.to_string(), bit_q[e]))
        .collect();
    let program = DynamicProgram {
        name: "group".to_string(),
        schema,
        fragment: FragmentTag::Prop,
        updates,
        init,
        query_bit: acc_bit,
        member_bits,
        intents,
    };
    program.validate().map_err(BuildError::Program)?;
    // The construction is negation-free except on order atoms; keep that
    // invariant pinned since the positive builders depend on it.
    for formula in program.updates.values() {
        assert!(
            check_fragment(formula, FragmentTag::PropPlus).ok,
            "group update formulas must be positive quantifier-free"
        );
    }
    Ok(program)
}

fn insert_update(
    updates: &mut UpdateMap,
    target: Target,
    sym: Option<SymId>,
    piece: Prenex,
    free: &[&Var],
) {
    let formula = piece.into_formula(free.iter().map(|v| (*v).clone()).collect());
    updates.insert((target, sym), formula);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::engine::{Change, Runtime, WordState};
    use crate::lang::{compile_min_dfa, parse_regex};
    use crate::monoid::FiniteMonoid;
    use crate::verify::random_verify;

    fn z2_even_as() -> GroupPresentation {
        let z2 = FiniteMonoid::cyclic(2);
        GroupPresentation {
            morphism: Morphism::new(Alphabet::of_chars("a"), z2, vec![1]),
            accepting: BTreeSet::from([0]),
        }
    }

    #[test]
    fn rejects_non_groups() {
        let u1 = FiniteMonoid::u1();
        let gp = GroupPresentation {
            morphism: Morphism::new(Alphabet::of_chars("a"), u1, vec![1]),
            accepting: BTreeSet::from([0]),
        };
        assert!(matches!(build_group_program(&gp), Err(BuildError::NotAGroup)));
    }

    #[test]
    fn z2_maintains_even_number_of_as() {
        let p = build_group_program(&z2_even_as()).unwrap();
        let rt = Runtime::new(&p);
        let a = Some(SymId(0));
        let (_, _, bits) = rt
            .run_trace(4, &[Change { pos: 1, sym: a }, Change { pos: 2, sym: a }])
            .unwrap();
        assert_eq!(bits, vec![false, true]);
    }

    #[test]
    fn all_epsilon_init_has_identity_prefixes() {
        let p = build_group_program(&z2_even_as()).unwrap();
        let rt = Runtime::new(&p);
        let (_, aux) = rt.init_program(3, &WordState::empty(3)).unwrap();
        assert!(rt.query(&aux), "empty word is in (aa)*");
        // P0 = all positions (prefix evaluates to identity), P1 = empty.
        let p0 = p.schema.lookup_unary("P0").unwrap();
        let p1 = p.schema.lookup_unary("P1").unwrap();
        for pos in 1..=3 {
            assert!(aux.unary_at(p0, pos));
            assert!(!aux.unary_at(p1, pos));
        }
    }

    #[test]
    fn z2_program_is_oracle_correct() {
        let p = build_group_program(&z2_even_as()).unwrap();
        let oracle = compile_min_dfa(&parse_regex("(aa)*", &Alphabet::of_chars("a")).unwrap());
        let report = random_verify(&p, &oracle, 9, 80, 10, 0xface).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches.first());
    }

    #[test]
    fn s3_word_of_two_transpositions_evaluates_to_their_product() {
        let s3 = FiniteMonoid::symmetric(3);
        // Alphabet letters mapped to two transpositions.
        let perms: Vec<Elem> = s3
            .elems()
            .filter(|&e| e != s3.identity() && s3.mul(e, e) == s3.identity())
            .collect();
        assert!(perms.len() >= 2);
        let (t1, t2) = (perms[0], perms[1]);
        let gp = GroupPresentation {
            morphism: Morphism::new(Alphabet::of_chars("st"), s3.clone(), vec![t1, t2]),
            accepting: BTreeSet::from([s3.identity()]),
        };
        let p = build_group_program(&gp).unwrap();
        let rt = Runtime::new(&p);
        let (_, aux) = rt
            .init_program(
                2,
                &WordState::from_letters(vec![Some(SymId(0)), Some(SymId(1))]),
            )
            .unwrap();
        // Brute-force fold in S3 picks the Q bit that must be set.
        let product = s3.mul(t1, t2);
        for e in s3.elems() {
            let bit = p.schema.lookup_bit(&format!("Q{e}")).unwrap();
            assert_eq!(aux.bits[bit as usize], e == product, "Q{e}");
        }
    }
}
