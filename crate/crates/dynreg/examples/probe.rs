use dynreg::alphabet::{Alphabet, SymId};
use dynreg::builders::build_sigma2_program;
use dynreg::engine::{Change, Runtime, WordState};
use dynreg::lang::{compile_min_dfa, parse_regex};
use dynreg::monoid::transition_monoid_with_maps;
use std::collections::BTreeSet;
use std::time::Instant;

fn main() {
    for (regex, alpha, n, steps) in [
        ("(a+b)*a(a+b)*", "ab", 16usize, 100usize),
        ("(ab)*", "ab", 16, 60),
    ] {
        let r = parse_regex(regex, &Alphabet::of_chars(alpha)).unwrap();
        let dfa = compile_min_dfa(&r);
        let (_, phi, maps) = transition_monoid_with_maps(&dfa);
        let accepting: BTreeSet<usize> = maps
            .iter()
            .enumerate()
            .filter(|(_, f)| dfa.accepting.contains(&f[dfa.start]))
            .map(|(i, _)| i)
            .collect();
        let t0 = Instant::now();
        let p = build_sigma2_program(&phi, &accepting).unwrap();
        let built = t0.elapsed();
        let rt = Runtime::new(&p);
        let (mut w, mut aux) = rt.init_program(n, &WordState::empty(n)).unwrap();
        let mut rng = 12345u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 33) as usize
        };
        let t1 = Instant::now();
        let mut correct = true;
        for _ in 0..steps {
            let pos = 1 + next() % n;
            let pick = next() % (alpha.len() + 1);
            let sym = if pick == 0 { None } else { Some(SymId((pick - 1) as u16)) };
            let (w2, a2) = rt.apply_change(&w, &aux, Change { pos, sym }).unwrap();
            w = w2;
            aux = a2;
            if rt.query(&aux) != dfa.accepts(w.letters()) {
                correct = false;
            }
        }
        let per = t1.elapsed() / steps as u32;
        println!(
            "{regex}: monoid={} rels={} build={built:?} per-change={per:?} correct={correct}",
            phi.target.size(),
            p.schema.unary_count()
        );
    }
}
