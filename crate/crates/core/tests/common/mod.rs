//! Shared fixtures for the integration suites: the test field and a
//! deterministic generator of desk-scale weighted systems.

use kcech::builder::WeightedSystem;
use kcech::linalg::PrimeField;
use kcech::monomial::{CyclicModule, Monomial, MonomialIdeal};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn field() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random weighted system with up to three elements of degree ≤ 4 over a
/// cyclic module in up to three variables.  The elements are products of
/// generators of q, so the weights are honest, but the system is *not*
/// required to be a system of parameters — zerodivisors and elements inside
/// the relations are all fair game for the structural oracles.
pub fn random_system(rng: &mut ChaCha8Rng) -> (WeightedSystem, CyclicModule) {
    loop {
        if let Some(pair) = try_random_system(rng) {
            return pair;
        }
    }
}

fn try_random_system(rng: &mut ChaCha8Rng) -> Option<(WeightedSystem, CyclicModule)> {
    let d: usize = rng.random_range(1..=3);
    let t: usize = rng.random_range(1..=3);

    let mut q_gens = Vec::new();
    for _ in 0..rng.random_range(1..=2) {
        let mut exps = vec![0u32; d];
        for _ in 0..rng.random_range(1..=2) {
            exps[rng.random_range(0..d)] += 1;
        }
        q_gens.push(Monomial::new(exps));
    }
    let q = MonomialIdeal::new(d, q_gens);
    if !q.is_proper_nonzero() {
        return None;
    }

    let mut elements = Vec::new();
    for _ in 0..t {
        let c: u32 = rng.random_range(1..=2);
        let mut a = Monomial::one(d);
        for _ in 0..c {
            a = a.mul(&q.gens()[rng.random_range(0..q.gens().len())]);
        }
        if a.degree() > 4 {
            return None;
        }
        elements.push((a, c));
    }

    let mut rel_gens = Vec::new();
    for _ in 0..rng.random_range(0..=2) {
        let mut exps = vec![0u32; d];
        for _ in 0..rng.random_range(1..=3) {
            exps[rng.random_range(0..d)] += 1;
        }
        rel_gens.push(Monomial::new(exps));
    }
    let module = CyclicModule::new(MonomialIdeal::new(d, rel_gens));

    let ws = WeightedSystem::new(q, elements).ok()?;
    Some((ws, module))
}
