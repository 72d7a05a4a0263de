#![allow(dead_code)]

use magari4::engine::{Member, TwelveSystem};
use magari4::preservation::{builtin_relation, preserves};
use magari4::{Element, FuncTable};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn seeded_rng(salt: u64) -> ChaCha8Rng {
    let base = std::env::var("MAGARI4_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(0x6d61_6761_7269);
    ChaCha8Rng::seed_from_u64(base ^ salt)
}

/// A random table of arity `n` preserving Δx = Δy: the Δ-class of the value
/// depends only on the Δ-classes of the arguments.
pub fn random_delta_preserving(rng: &mut impl Rng, n: usize) -> FuncTable {
    let classes: Vec<bool> = (0..1usize << n).map(|_| rng.gen()).collect();
    FuncTable::from_fn(n, |args| {
        let pattern = args
            .iter()
            .fold(0usize, |acc, x| (acc << 1) | usize::from(x.delta() == Element::One));
        let high = classes[pattern];
        let pick: bool = rng.gen();
        match (high, pick) {
            (false, false) => Element::Zero,
            (false, true) => Element::Rho,
            (true, false) => Element::Sigma,
            (true, true) => Element::One,
        }
    })
}

/// A random table of arity 1..=3 that violates R_i.
pub fn random_violator(rng: &mut impl Rng, i: usize) -> FuncTable {
    let r = builtin_relation(i).unwrap();
    loop {
        let n = rng.gen_range(1..=3);
        let t = random_delta_preserving(rng, n);
        if !preserves(&t, &r) {
            return t;
        }
    }
}

/// A random system F1..F12 given by tables; formulas are synthesized.
pub fn random_system(rng: &mut impl Rng) -> TwelveSystem {
    let members = (1..=12).map(|i| {
        let t = random_violator(rng, i);
        (i, Member::from_table(format!("F{i}"), t).unwrap())
    });
    TwelveSystem::new(members).unwrap()
}
