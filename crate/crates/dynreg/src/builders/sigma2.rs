//! The Σ₂ builder: maintenance of arbitrary regular languages with unary
//! auxiliary relations and ∃*∀* update formulas.
//!
//! For a monoid `M` recognizing the language, the schema keeps four families
//! of window relations, one member per (J-class `J`, elements `y`, `x`):
//!
//! * `R_{≥J,y,x}(j)` — the longest window `w[j+1..g]` with
//!   `y·eval ≥_J J` evaluates to `x`;
//! * `Rb` — the variant whose window starts at `j` itself;
//! * `L_{≥J,y,x}(j)` — the longest window `w[g..j-1]` with
//!   `eval·y ≥_J J` evaluates to `x`;
//! * `Lb` — the variant whose window ends at `j` itself.
//!
//! Because multiplying can only descend the J-order these windows are
//! well-defined, and the J-class of a growing prefix falls at most |M| times.
//! The infix-evaluation formulas guess the fall positions existentially,
//! check each segment with one universal variable (the per-position condition
//! reads an `L` window and the letter there, transferring along Green's
//! lemma), land each fall in the next class of the guessed chain, and recover
//! the exact element inside the H-class via the right-multiplication
//! bijection between H-classes. Update formulas locate the new fall position
//! of each window with one more existential quantifier around the
//! change-adjusted infix formulas, and the membership bits decompose the
//! whole word at its minimum and maximum positions.

use super::common::{change_value, Ctx, End};
use super::BuildError;
use crate::alphabet::SymId;
use crate::engine::{DynamicProgram, Initializer, Target, UpdateMap};
use crate::logic::{Atom, BitId, Prenex, RelId, Schema, Var};
use crate::monoid::{Elem, FiniteMonoid, GreenData, JClass, Morphism};
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Fam {
    R,
    L,
    Rb,
    Lb,
}

/// Builds the Σ₂ maintenance program for the language recognized by
/// `(phi, accepting)`.
pub fn build_sigma2_program(
    phi: &Morphism,
    accepting: &BTreeSet<Elem>,
) -> Result<DynamicProgram, BuildError> {
    let mut b = S2::new(phi, accepting)?;
    b.build()
}

struct S2<'a> {
    phi: &'a Morphism,
    m: &'a FiniteMonoid,
    accepting: &'a BTreeSet<Elem>,
    green: GreenData,
    ctx: Ctx,
    rel_base: [u32; 4],
    bit_q: Vec<BitId>,
    acc_bit: BitId,
    schema: Schema,
    intents: BTreeMap<String, String>,
    /// Falling chains of J-classes starting at the top class, indexed by
    /// their final class.
    chains_to: Vec<Vec<Vec<JClass>>>,
    /// Canonical representative of each H-class (minimum member).
    h_rep: Vec<Elem>,
    psi_r_cache: HashMap<(usize, String, String), Prenex>,
    psi_l_cache: HashMap<(usize, String, String), Prenex>,
    psi_cache: HashMap<(Elem, String, String), Prenex>,
    after_cache: HashMap<(Elem, String, String, u16), Prenex>,
}

impl<'a> S2<'a> {
    fn new(phi: &'a Morphism, accepting: &'a BTreeSet<Elem>) -> Result<Self, BuildError> {
        let m = &phi.target;
        for &e in accepting {
            if e >= m.size() {
                return Err(BuildError::BadElement(e));
            }
        }
        let green = GreenData::compute(m);
        let top = green.j_class[m.identity()];
        let all_chains = green.falling_chains_from_top(top);
        let mut chains_to = vec![Vec::new(); green.j_count()];
        for chain in all_chains {
            chains_to[*chain.last().unwrap()].push(chain);
        }
        let h_rep: Vec<Elem> = m
            .elems()
            .map(|x| {
                m.elems()
                    .find(|&u| green.h_class[u] == green.h_class[x])
                    .unwrap()
            })
            .collect();
        // Verify the right-multiplication bijections between H-classes
        // (Green's lemma); a failure here is an algebra bug, not bad input.
        for x in m.elems() {
            for z in m.elems() {
                let xz = m.mul(x, z);
                if !green.j_equiv(xz, x) {
                    continue;
                }
                let mut image = BTreeSet::new();
                for u in green.h_members(x) {
                    let uz = m.mul(u, z);
                    if green.h_class[uz] != green.h_class[xz] {
                        return Err(BuildError::AlgebraBug(format!(
                            "H-class map by {z} is not well-defined at {u}"
                        )));
                    }
                    if !image.insert(uz) {
                        return Err(BuildError::AlgebraBug(format!(
                            "H-class map by {z} is not injective on H({x})"
                        )));
                    }
                }
            }
        }

        let size = m.size() as u32;
        let jc = green.j_count() as u32;
        let mut schema = Schema::new(phi.alphabet.clone());
        let mut intents = BTreeMap::new();
        let fam_meta = [
            ("R", "greatest k right of the position with y*w(pos+1..k) >=J the class; stored value is the window evaluation"),
            ("L", "least k left of the position with w(k..pos-1)*y >=J the class; stored value is the window evaluation"),
            ("Rb", "as R but the window includes the position itself"),
            ("Lb", "as L but the window includes the position itself"),
        ];
        let mut rel_base = [0u32; 4];
        for (fi, (prefix, desc)) in fam_meta.iter().enumerate() {
            rel_base[fi] = (fi as u32) * jc * size * size;
            for j in 0..jc {
                for y in 0..size {
                    for x in 0..size {
                        let name = format!("{prefix}{j}y{y}x{x}");
                        let id = schema.add_unary(&name)?;
                        debug_assert_eq!(id, rel_base[fi] + (j * size + y) * size + x);
                        intents.insert(name, format!("{desc}; J-class {j}, y={y}, value {x}"));
                    }
                }
            }
        }
        let mut bit_q = Vec::new();
        for x in m.elems() {
            bit_q.push(schema.add_bit(format!("Q{x}"))?);
            intents.insert(format!("Q{x}"), format!("word evaluates to {}", m.name(x)));
        }
        let acc_bit = schema.add_bit("acc")?;
        intents.insert("acc".into(), "word evaluates into the accepting set".into());

        Ok(Self {
            phi,
            m,
            accepting,
            green,
            ctx: Ctx::new(),
            rel_base,
            bit_q,
            acc_bit,
            schema,
            intents,
            chains_to,
            h_rep,
            psi_r_cache: HashMap::new(),
            psi_l_cache: HashMap::new(),
            psi_cache: HashMap::new(),
            after_cache: HashMap::new(),
        })
    }

    fn rel(&self, fam: Fam, j: JClass, y: Elem, x: Elem) -> RelId {
        let size = self.m.size() as u32;
        let fi = match fam {
            Fam::R => 0,
            Fam::L => 1,
            Fam::Rb => 2,
            Fam::Lb => 3,
        };
        self.rel_base[fi] + ((j as u32) * size + y as u32) * size + x as u32
    }

    fn ge_class(&self, e: Elem, j: JClass) -> bool {
        self.green.elem_ge_class(e, j)
    }

    /// "The prefix window extended by the letter at `v` stays inside class
    /// `j`": some `L_{≥j}` window value `u` and letter value `z` with `u·z`
    /// in `j`.
    fn stay_r(&mut self, j: JClass, v: &Var) -> std::rc::Rc<crate::logic::Matrix> {
        let mut cases = Vec::new();
        for u in self.m.elems() {
            for z in self.m.elems() {
                if self.green.j_class[self.m.mul(u, z)] != j {
                    continue;
                }
                let rel = self.rel(Fam::L, j, self.m.identity(), u);
                let ua = self.ctx.f.atom(Atom::Aux(rel, v.clone()));
                let za = self.ctx.val_is(self.phi, z, v);
                cases.push(self.ctx.f.and(vec![ua, za]));
            }
        }
        self.ctx.f.or(cases)
    }

    /// Mirror of [`Self::stay_r`] for suffix windows.
    fn stay_l(&mut self, j: JClass, v: &Var) -> std::rc::Rc<crate::logic::Matrix> {
        let mut cases = Vec::new();
        for z in self.m.elems() {
            for u in self.m.elems() {
                if self.green.j_class[self.m.mul(z, u)] != j {
                    continue;
                }
                let rel = self.rel(Fam::R, j, self.m.identity(), u);
                let za = self.ctx.val_is(self.phi, z, v);
                let ua = self.ctx.f.atom(Atom::Aux(rel, v.clone()));
                cases.push(self.ctx.f.and(vec![za, ua]));
            }
        }
        self.ctx.f.or(cases)
    }

    /// The prefix window falls from class `from` into class `to` at `v`.
    fn fall_r(&mut self, from: JClass, to: JClass, v: &Var) -> Prenex {
        let mut cases = Vec::new();
        for u in self.m.elems() {
            if !self.ge_class(u, from) {
                continue;
            }
            for z in self.m.elems() {
                if self.green.j_class[self.m.mul(u, z)] != to {
                    continue;
                }
                let rel = self.rel(Fam::L, from, self.m.identity(), u);
                let ua = self.ctx.f.atom(Atom::Aux(rel, v.clone()));
                let za = self.ctx.val_is(self.phi, z, v);
                cases.push(self.ctx.f.and(vec![ua, za]));
            }
        }
        let m = self.ctx.f.or(cases);
        self.ctx.qf(m)
    }

    fn fall_l(&mut self, from: JClass, to: JClass, v: &Var) -> Prenex {
        let mut cases = Vec::new();
        for z in self.m.elems() {
            for u in self.m.elems() {
                if !self.ge_class(u, from) || self.green.j_class[self.m.mul(z, u)] != to {
                    continue;
                }
                let rel = self.rel(Fam::R, from, self.m.identity(), u);
                let za = self.ctx.val_is(self.phi, z, v);
                let ua = self.ctx.f.atom(Atom::Aux(rel, v.clone()));
                cases.push(self.ctx.f.and(vec![za, ua]));
            }
        }
        let m = self.ctx.f.or(cases);
        self.ctx.qf(m)
    }

    /// An `R_{≥j,y}` value atom anchored at an endpoint. At the virtual left
    /// boundary the window starts at position 1, which is the barred relation
    /// at the minimum position (reached through one existential variable with
    /// a universal minimality guard).
    fn r_value_at(&mut self, j: JClass, y: Elem, x: Elem, end: &End) -> Prenex {
        match end {
            End::At(v) => {
                let m = self
                    .ctx
                    .f
                    .atom(Atom::Aux(self.rel(Fam::R, j, y, x), v.clone()));
                self.ctx.qf(m)
            }
            End::Start => {
                let pos = self.ctx.fresh_var("mn");
                let guard = self.ctx.fresh_var("mg");
                let gm = self.ctx.min_guard(&pos, &guard);
                let atom = self
                    .ctx
                    .f
                    .atom(Atom::Aux(self.rel(Fam::Rb, j, y, x), pos.clone()));
                let m = self.ctx.f.and(vec![gm, atom]);
                Prenex {
                    evars: vec![pos],
                    avars: vec![guard],
                    matrix: m,
                }
            }
            End::End => unreachable!("prefix windows are anchored on the left"),
        }
    }

    /// An `L_{≥j,y}` value atom anchored at an endpoint; the virtual right
    /// boundary uses the barred relation at the maximum position.
    fn l_value_at(&mut self, j: JClass, y: Elem, x: Elem, end: &End) -> Prenex {
        match end {
            End::At(v) => {
                let m = self
                    .ctx
                    .f
                    .atom(Atom::Aux(self.rel(Fam::L, j, y, x), v.clone()));
                self.ctx.qf(m)
            }
            End::End => {
                let pos = self.ctx.fresh_var("mx");
                let guard = self.ctx.fresh_var("xg");
                let gm = self.ctx.max_guard(&pos, &guard);
                let atom = self
                    .ctx
                    .f
                    .atom(Atom::Aux(self.rel(Fam::Lb, j, y, x), pos.clone()));
                let m = self.ctx.f.and(vec![gm, atom]);
                Prenex {
                    evars: vec![pos],
                    avars: vec![guard],
                    matrix: m,
                }
            }
            End::Start => unreachable!("suffix windows are anchored on the right"),
        }
    }

    /// ψ_R: the infix strictly between the endpoints evaluates into R-class
    /// `rcl`.
    fn psi_r(&mut self, rcl: usize, left: &End, right: &End) -> Prenex {
        let key = (rcl, left.key(), right.key());
        if let Some(hit) = self.psi_r_cache.get(&key) {
            return hit.clone();
        }
        let members: Vec<Elem> = self
            .m
            .elems()
            .filter(|&x| self.green.r_class[x] == rcl)
            .collect();
        let rj = self.green.j_class[members[0]];
        let chains = self.chains_to[rj].clone();
        let mut branches = Vec::new();
        for chain in &chains {
            for &x_m in &members {
                branches.push(self.psi_r_branch(chain, x_m, left, right));
            }
        }
        let piece = Prenex::or(&mut self.ctx.f, branches);
        self.psi_r_cache.insert(key, piece.clone());
        piece
    }

    fn psi_r_branch(&mut self, chain: &[JClass], x_m: Elem, left: &End, right: &End) -> Prenex {
        let falls: Vec<Var> = (1..chain.len()).map(|_| self.ctx.fresh_var("f")).collect();
        let seg_var = self.ctx.fresh_var("s");
        let mut pieces: Vec<Prenex> = Vec::new();
        // Endpoint sequence: left = e_0 < f_1 < ... < f_d < right = e_{d+1}.
        let mut ends: Vec<End> = vec![left.clone()];
        ends.extend(falls.iter().map(|v| End::At(v.clone())));
        ends.push(right.clone());
        for w in ends.windows(2) {
            let g = self.order_guard(&w[0], &w[1]);
            pieces.push(self.ctx.qf(g));
        }
        // Pin the final value through the functional prefix window.
        let pin = self.r_value_at(*chain.last().unwrap(), self.m.identity(), x_m, left);
        pieces.push(pin);
        for (s, fv) in falls.iter().enumerate() {
            let piece = self.fall_r(chain[s], chain[s + 1], fv);
            pieces.push(piece);
        }
        // Segment stays under one universal variable.
        let mut seg_conjuncts = Vec::new();
        for s in 0..chain.len() {
            let g_lo = self.ctx.gt_left(&ends[s], &seg_var);
            let g_hi = self.ctx.lt_right(&seg_var, &ends[s + 1]);
            let stay = self.stay_r(chain[s], &seg_var);
            let ng_lo = self.ctx.f.not(g_lo);
            let ng_hi = self.ctx.f.not(g_hi);
            seg_conjuncts.push(self.ctx.f.or(vec![ng_lo, ng_hi, stay]));
        }
        let seg_matrix = self.ctx.f.and(seg_conjuncts);
        pieces.push(Prenex {
            evars: vec![],
            avars: vec![seg_var],
            matrix: seg_matrix,
        });
        Prenex::and(&mut self.ctx.f, pieces).exists(falls)
    }

    fn order_guard(&mut self, lo: &End, hi: &End) -> std::rc::Rc<crate::logic::Matrix> {
        match (lo, hi) {
            (End::At(a), End::At(b)) => self.ctx.lt(a, b),
            (End::Start, _) | (_, End::End) => self.ctx.f.bool_true(),
            _ => self.ctx.f.bool_false(),
        }
    }

    fn psi_l(&mut self, lcl: usize, left: &End, right: &End) -> Prenex {
        let key = (lcl, left.key(), right.key());
        if let Some(hit) = self.psi_l_cache.get(&key) {
            return hit.clone();
        }
        let members: Vec<Elem> = self
            .m
            .elems()
            .filter(|&x| self.green.l_class[x] == lcl)
            .collect();
        let lj = self.green.j_class[members[0]];
        let chains = self.chains_to[lj].clone();
        let mut branches = Vec::new();
        for chain in &chains {
            for &y_m in &members {
                branches.push(self.psi_l_branch(chain, y_m, left, right));
            }
        }
        let piece = Prenex::or(&mut self.ctx.f, branches);
        self.psi_l_cache.insert(key, piece.clone());
        piece
    }

    fn psi_l_branch(&mut self, chain: &[JClass], y_m: Elem, left: &End, right: &End) -> Prenex {
        let falls: Vec<Var> = (1..chain.len()).map(|_| self.ctx.fresh_var("f")).collect();
        let seg_var = self.ctx.fresh_var("s");
        let mut pieces: Vec<Prenex> = Vec::new();
        // Mirrored endpoints: right = e_0 > f_1 > ... > f_d > left = e_{d+1}.
        let mut ends: Vec<End> = vec![right.clone()];
        ends.extend(falls.iter().map(|v| End::At(v.clone())));
        ends.push(left.clone());
        for w in ends.windows(2) {
            let g = self.order_guard(&w[1], &w[0]);
            pieces.push(self.ctx.qf(g));
        }
        let pin = self.l_value_at(*chain.last().unwrap(), self.m.identity(), y_m, right);
        pieces.push(pin);
        for (s, fv) in falls.iter().enumerate() {
            let piece = self.fall_l(chain[s], chain[s + 1], fv);
            pieces.push(piece);
        }
        let mut seg_conjuncts = Vec::new();
        for s in 0..chain.len() {
            // Segment s lies strictly between ends[s+1] (low) and ends[s] (high).
            let g_lo = self.ctx.gt_left(&ends[s + 1], &seg_var);
            let g_hi = self.ctx.lt_right(&seg_var, &ends[s]);
            let stay = self.stay_l(chain[s], &seg_var);
            let ng_lo = self.ctx.f.not(g_lo);
            let ng_hi = self.ctx.f.not(g_hi);
            seg_conjuncts.push(self.ctx.f.or(vec![ng_lo, ng_hi, stay]));
        }
        let seg_matrix = self.ctx.f.and(seg_conjuncts);
        pieces.push(Prenex {
            evars: vec![],
            avars: vec![seg_var],
            matrix: seg_matrix,
        });
        Prenex::and(&mut self.ctx.f, pieces).exists(falls)
    }

    /// Recovers the exact element within the H-class: the continuation window
    /// at the right endpoint together with the prefix window at the left pins
    /// `x` through the injective H-class map `u ↦ u·z`.
    fn pin_element(&mut self, x: Elem, left: &End, right: &End) -> Prenex {
        let j = self.green.j_class[x];
        let t = self.h_rep[x];
        let mut cases = Vec::new();
        for z in self.m.elems() {
            if self.green.j_class[self.m.mul(t, z)] != j {
                continue;
            }
            let image = self.m.mul(x, z);
            match right {
                End::At(v) => {
                    let za = self
                        .ctx
                        .f
                        .atom(Atom::Aux(self.rel(Fam::Rb, j, t, z), v.clone()));
                    let za = self.ctx.qf(za);
                    let left_pin = self.r_value_at(j, self.m.identity(), image, left);
                    cases.push(Prenex::and(&mut self.ctx.f, vec![za, left_pin]));
                }
                End::End => {
                    // The continuation window at n+1 is empty: z must be 1.
                    if z == self.m.identity() {
                        cases.push(self.r_value_at(j, self.m.identity(), image, left));
                    }
                }
                End::Start => unreachable!("right endpoint is never the left boundary"),
            }
        }
        Prenex::or(&mut self.ctx.f, cases)
    }

    /// ψ_x: the infix strictly between the endpoints evaluates to `x`.
    fn psi(&mut self, x: Elem, left: &End, right: &End) -> Prenex {
        let key = (x, left.key(), right.key());
        if let Some(hit) = self.psi_cache.get(&key) {
            return hit.clone();
        }
        let pr = self.psi_r(self.green.r_class[x], left, right);
        let pl = self.psi_l(self.green.l_class[x], left, right);
        let pin = self.pin_element(x, left, right);
        let piece = Prenex::and(&mut self.ctx.f, vec![pr, pl, pin]);
        self.psi_cache.insert(key, piece.clone());
        piece
    }

    /// ψ after a change at `y`: for a change inside the window the infix
    /// splits at `y` and the new letter enters as the split constant; for a
    /// change at or outside the endpoints the old infix formula still
    /// applies, since all stored relations describe the old word and the
    /// letter atoms strictly inside the window are unchanged.
    fn psi_after(&mut self, x: Elem, left: &End, right: &End, sym: Option<SymId>) -> Prenex {
        let sym_key = sym.map_or(u16::MAX, |s| s.0);
        let key = (x, left.key(), right.key(), sym_key);
        if let Some(hit) = self.after_cache.get(&key) {
            return hit.clone();
        }
        let y = Var::new("y");
        let v = change_value(self.phi, sym);
        let mut split_cases = Vec::new();
        for u in self.m.elems() {
            for w in self.m.elems() {
                if self.m.mul(self.m.mul(u, v), w) != x {
                    continue;
                }
                let pu = self.psi(u, left, &End::At(y.clone()));
                let pw = self.psi(w, &End::At(y.clone()), right);
                split_cases.push(Prenex::and(&mut self.ctx.f, vec![pu, pw]));
            }
        }
        let g_in_l = self.ctx.gt_left(left, &y);
        let g_in_r = self.ctx.lt_right(&y, right);
        let guards = self.ctx.f.and(vec![g_in_l, g_in_r]);
        let guards = self.ctx.qf(guards);
        let split = Prenex::or(&mut self.ctx.f, split_cases);
        let inside = Prenex::and(&mut self.ctx.f, vec![guards, split]);
        let g_out_l = self.ctx.le_left(&y, left);
        let g_out_r = self.ctx.ge_right(right, &y);
        let out_guard = self.ctx.f.or(vec![g_out_l, g_out_r]);
        let out_guard = self.ctx.qf(out_guard);
        let unchanged = self.psi(x, left, right);
        let outside = Prenex::and(&mut self.ctx.f, vec![out_guard, unchanged]);
        let piece = Prenex::or(&mut self.ctx.f, vec![inside, outside]);
        self.after_cache.insert(key, piece.clone());
        piece
    }

    /// Update body for a prefix-window value: either the window falls at some
    /// `k` (the infix up to `k` evaluates to `x` and the letter at `k` pushes
    /// `y0·x` below the class), or it extends to the end of the word.
    fn r_update_body(
        &mut self,
        j: JClass,
        y0: Elem,
        x: Elem,
        left: &End,
        sym: Option<SymId>,
    ) -> Option<Prenex> {
        if !self.ge_class(y0, j) || !self.ge_class(self.m.mul(y0, x), j) {
            return None;
        }
        let uk = Var::new("uk");
        let y0x = self.m.mul(y0, x);
        let mut fall_cases = Vec::new();
        for z in self.m.elems() {
            if self.ge_class(self.m.mul(y0x, z), j) {
                continue;
            }
            let infix = self.psi_after(x, left, &End::At(uk.clone()), sym);
            let za = self.ctx.val_is(self.phi, z, &uk);
            let za = self.ctx.qf(za);
            fall_cases.push(Prenex::and(&mut self.ctx.f, vec![infix, za]));
        }
        let guard = self.ctx.gt_left(left, &uk);
        let guard = self.ctx.qf(guard);
        let fall_any = Prenex::or(&mut self.ctx.f, fall_cases);
        let with_fall = Prenex::and(&mut self.ctx.f, vec![guard, fall_any]).exists(vec![uk]);
        let to_end = self.psi_after(x, left, &End::End, sym);
        Some(Prenex::or(&mut self.ctx.f, vec![with_fall, to_end]))
    }

    fn l_update_body(
        &mut self,
        j: JClass,
        y0: Elem,
        x: Elem,
        right: &End,
        sym: Option<SymId>,
    ) -> Option<Prenex> {
        if !self.ge_class(y0, j) || !self.ge_class(self.m.mul(x, y0), j) {
            return None;
        }
        let uk = Var::new("uk");
        let xy0 = self.m.mul(x, y0);
        let mut fall_cases = Vec::new();
        for z in self.m.elems() {
            if self.ge_class(self.m.mul(z, xy0), j) {
                continue;
            }
            let infix = self.psi_after(x, &End::At(uk.clone()), right, sym);
            let za = self.ctx.val_is(self.phi, z, &uk);
            let za = self.ctx.qf(za);
            fall_cases.push(Prenex::and(&mut self.ctx.f, vec![infix, za]));
        }
        let guard = self.ctx.lt_right(&uk, right);
        let guard = self.ctx.qf(guard);
        let fall_any = Prenex::or(&mut self.ctx.f, fall_cases);
        let with_fall = Prenex::and(&mut self.ctx.f, vec![guard, fall_any]).exists(vec![uk]);
        let to_start = self.psi_after(x, &End::Start, right, sym);
        Some(Prenex::or(&mut self.ctx.f, vec![with_fall, to_start]))
    }

    fn rb_update(&mut self, j: JClass, y0: Elem, x: Elem, sym: Option<SymId>) -> Prenex {
        let x_var = Var::new("x");
        if !self.ge_class(y0, j) {
            let f = self.ctx.f.bool_false();
            return Prenex::qf(f);
        }
        let one = self.m.identity();
        let mut cases = Vec::new();
        for t in self.m.elems() {
            let y0t = self.m.mul(y0, t);
            if !self.ge_class(y0t, j) {
                // Window cannot even absorb the position's letter: it is the
                // empty window with identity value.
                if x == one {
                    let ta = self.ctx.val_is(self.phi, t, &x_var);
                    cases.push(self.ctx.qf(ta));
                }
                continue;
            }
            for xr in self.m.elems() {
                if self.m.mul(t, xr) != x {
                    continue;
                }
                if let Some(body) = self.r_update_body(j, y0t, xr, &End::At(x_var.clone()), sym) {
                    let ta = self.ctx.val_is(self.phi, t, &x_var);
                    let ta = self.ctx.qf(ta);
                    cases.push(Prenex::and(&mut self.ctx.f, vec![ta, body]));
                }
            }
        }
        Prenex::or(&mut self.ctx.f, cases)
    }

    fn lb_update(&mut self, j: JClass, y0: Elem, x: Elem, sym: Option<SymId>) -> Prenex {
        let x_var = Var::new("x");
        if !self.ge_class(y0, j) {
            let f = self.ctx.f.bool_false();
            return Prenex::qf(f);
        }
        let one = self.m.identity();
        let mut cases = Vec::new();
        for t in self.m.elems() {
            let ty0 = self.m.mul(t, y0);
            if !self.ge_class(ty0, j) {
                if x == one {
                    let ta = self.ctx.val_is(self.phi, t, &x_var);
                    cases.push(self.ctx.qf(ta));
                }
                continue;
            }
            for xl in self.m.elems() {
                if self.m.mul(xl, t) != x {
                    continue;
                }
                if let Some(body) = self.l_update_body(j, ty0, xl, &End::At(x_var.clone()), sym) {
                    let ta = self.ctx.val_is(self.phi, t, &x_var);
                    let ta = self.ctx.qf(ta);
                    cases.push(Prenex::and(&mut self.ctx.f, vec![ta, body]));
                }
            }
        }
        Prenex::or(&mut self.ctx.f, cases)
    }

    /// The whole word evaluates to `x` after the change: decompose at the
    /// minimum and maximum positions, with a separate single-position branch.
    fn q_update_body(&mut self, x: Elem, sym: Option<SymId>) -> Prenex {
        let qa = Var::new("qa");
        let qb = Var::new("qb");
        let g1 = Var::new("qg1");
        let g2 = Var::new("qg2");
        let min_matrix = self.ctx.min_guard(&qa, &g1);
        let min_piece = Prenex {
            evars: vec![qa.clone()],
            avars: vec![g1],
            matrix: min_matrix,
        };
        let max_matrix = self.ctx.max_guard(&qb, &g2);
        let max_piece = Prenex {
            evars: vec![qb.clone()],
            avars: vec![g2],
            matrix: max_matrix,
        };
        let order = self.ctx.lt(&qa, &qb);
        let order = self.ctx.qf(order);
        let mut decomp = Vec::new();
        for u in self.m.elems() {
            for w in self.m.elems() {
                for v_mid in self.m.elems() {
                    if self.m.mul(self.m.mul(u, v_mid), w) != x {
                        continue;
                    }
                    let ua = self.ctx.val_is(self.phi, u, &qa);
                    let ua = self.ctx.qf(ua);
                    let wa = self.ctx.val_is(self.phi, w, &qb);
                    let wa = self.ctx.qf(wa);
                    let mid =
                        self.psi_after(v_mid, &End::At(qa.clone()), &End::At(qb.clone()), sym);
                    decomp.push(Prenex::and(&mut self.ctx.f, vec![ua, wa, mid]));
                }
            }
        }
        let decomp_any = Prenex::or(&mut self.ctx.f, decomp);
        let wide = Prenex::and(
            &mut self.ctx.f,
            vec![min_piece, max_piece, order, decomp_any],
        );
        // Single-position branch (n = 1): the word is exactly that letter.
        let qc = Var::new("qc");
        let g3 = Var::new("qg3");
        let g4 = Var::new("qg4");
        let mn = self.ctx.min_guard(&qc, &g3);
        let mx = self.ctx.max_guard(&qc, &g4);
        let va = self.ctx.val_is(self.phi, x, &qc);
        let single_matrix = self.ctx.f.and(vec![mn, mx, va]);
        let single = Prenex {
            evars: vec![qc],
            avars: vec![g3, g4],
            matrix: single_matrix,
        };
        Prenex::or(&mut self.ctx.f, vec![wide, single])
    }

    fn false_formula(&mut self, free: &[Var]) -> crate::logic::Formula {
        let f = self.ctx.f.bool_false();
        Prenex::qf(f).into_formula(free.to_vec())
    }

    fn build(&mut self) -> Result<DynamicProgram, BuildError> {
        let x_var = Var::new("x");
        let y_var = Var::new("y");
        let free_xy = [x_var.clone(), y_var.clone()];
        let free_y = [y_var];
        let mut updates: UpdateMap = BTreeMap::new();
        let mut syms: Vec<Option<SymId>> = vec![None];
        syms.extend(self.phi.alphabet.ids().map(Some));
        let size = self.m.size();
        let jc = self.green.j_count();
        let left_x = End::At(x_var);

        for &sym in &syms {
            for j in 0..jc {
                for y0 in 0..size {
                    for x in 0..size {
                        let formula = match self.r_update_body(j, y0, x, &left_x, sym) {
                            Some(p) => p.into_formula(free_xy.to_vec()),
                            None => self.false_formula(&free_xy),
                        };
                        updates.insert((Target::Unary(self.rel(Fam::R, j, y0, x)), sym), formula);
                        let formula = match self.l_update_body(j, y0, x, &left_x, sym) {
                            Some(p) => p.into_formula(free_xy.to_vec()),
                            None => self.false_formula(&free_xy),
                        };
                        updates.insert((Target::Unary(self.rel(Fam::L, j, y0, x)), sym), formula);
                        let formula = self.rb_update(j, y0, x, sym).into_formula(free_xy.to_vec());
                        updates.insert((Target::Unary(self.rel(Fam::Rb, j, y0, x)), sym), formula);
                        let formula = self.lb_update(j, y0, x, sym).into_formula(free_xy.to_vec());
                        updates.insert((Target::Unary(self.rel(Fam::Lb, j, y0, x)), sym), formula);
                    }
                }
            }
            let q_bodies: Vec<Prenex> = self
                .m
                .elems()
                .map(|x| self.q_update_body(x, sym))
                .collect();
            for (x, body) in q_bodies.iter().enumerate() {
                updates.insert(
                    (Target::Bit(self.bit_q[x]), sym),
                    body.clone().into_formula(free_y.to_vec()),
                );
            }
            let acc_cases: Vec<Prenex> = self
                .accepting
                .iter()
                .map(|&x| q_bodies[x].clone())
                .collect();
            let acc = Prenex::or(&mut self.ctx.f, acc_cases);
            updates.insert(
                (Target::Bit(self.acc_bit), sym),
                acc.into_formula(free_y.to_vec()),
            );
        }

        // All-epsilon initializer: every window is empty, so a relation is
        // full exactly when its anchor element clears the class and the
        // stored value is the identity.
        let one = self.m.identity();
        let mut unary_full = vec![false; self.schema.unary_count()];
        for fam in [Fam::R, Fam::L, Fam::Rb, Fam::Lb] {
            for j in 0..jc {
                for y0 in 0..size {
                    for x in 0..size {
                        let id = self.rel(fam, j, y0, x);
                        unary_full[id as usize] = self.ge_class(y0, j) && x == one;
                    }
                }
            }
        }
        let mut bits: Vec<bool> = self.m.elems().map(|x| x == one).collect();
        bits.push(self.accepting.contains(&one));

        let program = DynamicProgram {
            name: "sigma2".to_string(),
            schema: self.schema.clone(),
            fragment: crate::logic::FragmentTag::Sigma2,
            updates,
            init: Initializer { unary_full, bits },
            query_bit: self.acc_bit,
            member_bits: self
                .m
                .elems()
                .map(|x| (x.to_string(), self.bit_q[x]))
                .collect(),
            intents: self.intents.clone(),
        };
        program.validate().map_err(BuildError::Program)?;
        Ok(program)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::builders::common::recognition_dfa;
    use crate::lang::{compile_min_dfa, parse_regex, Dfa};
    use crate::logic::{check_fragment, FragmentTag};
    use crate::monoid::{transition_monoid_with_maps, Morphism};
    use crate::verify::random_verify;

    pub(crate) fn accepting_elements(dfa: &Dfa) -> (Morphism, BTreeSet<Elem>) {
        let (_, phi, maps) = transition_monoid_with_maps(dfa);
        let accepting = maps
            .iter()
            .enumerate()
            .filter(|(_, f)| dfa.accepting.contains(&f[dfa.start]))
            .map(|(i, _)| i)
            .collect();
        (phi, accepting)
    }

    fn program_for(regex: &str, alpha: &str) -> (DynamicProgram, Dfa) {
        let r = parse_regex(regex, &Alphabet::of_chars(alpha)).unwrap();
        let dfa = compile_min_dfa(&r);
        let (phi, accepting) = accepting_elements(&dfa);
        let p = build_sigma2_program(&phi, &accepting).unwrap();
        (p, dfa)
    }

    #[test]
    fn u1_program_verifies_against_oracle() {
        let (p, dfa) = program_for("(a+b)*a(a+b)*", "ab");
        assert_eq!(p.fragment, FragmentTag::Sigma2);
        for f in p.updates.values() {
            assert!(check_fragment(f, FragmentTag::Sigma2).ok);
        }
        let report = random_verify(&p, &dfa, 6, 40, 6, 0xabc).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches.first());
    }

    #[test]
    fn z2_program_verifies_against_oracle() {
        // Groups are the degenerate single-J-class case of the construction.
        let (p, dfa) = program_for("(aa)*", "a");
        let report = random_verify(&p, &dfa, 6, 40, 6, 0xabd).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches.first());
    }

    #[test]
    fn u2_program_verifies_against_oracle() {
        let (p, dfa) = program_for("(a+b)*a", "ab");
        let report = random_verify(&p, &dfa, 6, 60, 6, 0xabe).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches.first());
    }

    #[test]
    fn member_bits_recognize_arbitrary_subsets() {
        // Maintain Member(U1) through an explicit morphism and check the
        // query against the recognition DFA for the subset {a}.
        let alpha = Alphabet::of_chars("ab");
        let u1 = crate::monoid::FiniteMonoid::u1();
        let phi = Morphism::new(alpha, u1, vec![1, 0]);
        let accepting = BTreeSet::from([1]);
        let p = build_sigma2_program(&phi, &accepting).unwrap();
        let oracle = recognition_dfa(&phi, &accepting);
        let report = random_verify(&p, &oracle, 5, 40, 5, 77).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches.first());
    }
}
