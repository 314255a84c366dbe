//! Constructors for Koszul-type complexes over weighted element systems.
//!
//! A weighted system is a list of monomials a_1,…,a_t with weights c_i ≥ 1
//! satisfying a_i ∈ q^{c_i} for a fixed proper nonzero monomial ideal q.
//! From such a system the builders produce, over a cyclic module M = R/I:
//!
//! * `koszul` / `co_koszul` — the full (co)Koszul complex on the elements;
//! * `sub_koszul` — the chain subcomplex with coefficients q^{n−Σc}M;
//! * `quotient_L` — its quotient complex with terms M/q^{n−Σc}M;
//! * `sub_co_koszul` / `co_quotient_L` — the cochain analogues with
//!   coefficients q^{n+Σc}M and M/q^{n+Σc}M;
//! * `rees_slice_oracle` — an independently coded construction of the chain
//!   subcomplex used as an equality oracle in tests.
//!
//! Every slot carries the shift Σ deg a_{j_l} of its label, which makes all
//! differentials internal-degree preserving.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::complex::{ComplexSpec, DegreeCap, DiffEntry, Orientation, Slot};
use crate::error::{Error, Result};
use crate::monomial::{
    CyclicModule, InitialDegree, Monomial, MonomialIdeal, NegPowerConvention,
};

/// Elements a_i with weights c_i such that a_i ∈ q^{c_i}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSystem {
    q: MonomialIdeal,
    elements: Vec<(Monomial, u32)>,
}

impl WeightedSystem {
    pub fn new(q: MonomialIdeal, elements: Vec<(Monomial, u32)>) -> Result<Self> {
        if !q.is_proper_nonzero() {
            return Err(Error::InvalidParameter(
                "q must be a proper nonzero ideal".into(),
            ));
        }
        for (a, c) in &elements {
            if a.nvars() != q.nvars() {
                return Err(Error::ShapeMismatch(
                    "element arity differs from q".into(),
                ));
            }
            if *c == 0 {
                return Err(Error::InvalidParameter(format!(
                    "weight of {a} must be positive"
                )));
            }
            if !q.power(i64::from(*c), NegPowerConvention::Unit).contains(a) {
                return Err(Error::WeightTooLarge { element: a.to_string(), weight: *c });
            }
        }
        Ok(WeightedSystem { q, elements })
    }

    pub fn q(&self) -> &MonomialIdeal {
        &self.q
    }

    pub fn elements(&self) -> &[(Monomial, u32)] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.q.nvars()
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|(a, _)| a.clone()).collect()
    }

    /// The ideal (a_1, …, a_t).
    pub fn elements_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.nvars(), self.monomials())
    }

    /// Σ_{l ∈ label} c_l.
    pub fn weight_sum(&self, label: &[usize]) -> i64 {
        label.iter().map(|&l| i64::from(self.elements[l].1)).sum()
    }

    /// Σ deg a_i over the whole system.
    pub fn degree_sum(&self) -> i64 {
        self.elements.iter().map(|(a, _)| i64::from(a.degree())).sum()
    }

    /// The stage-k system (a_i^k, k·c_i); a_i^k ∈ q^{k c_i} automatically.
    pub fn power_system(&self, k: u32) -> Result<WeightedSystem> {
        if k == 0 {
            return Err(Error::InvalidParameter("power stage must be ≥ 1".into()));
        }
        let elements = self
            .elements
            .iter()
            .map(|(a, c)| (a.pow(k), c * k))
            .collect();
        Ok(WeightedSystem { q: self.q.clone(), elements })
    }

    /// The system of the first `len` elements, same q.
    pub fn prefix(&self, len: usize) -> WeightedSystem {
        WeightedSystem { q: self.q.clone(), elements: self.elements[..len].to_vec() }
    }

    /// The system reindexed by a permutation of 0..t.
    pub fn permuted(&self, perm: &[usize]) -> Result<WeightedSystem> {
        let t = self.elements.len();
        let mut seen = vec![false; t];
        if perm.len() != t || perm.iter().any(|&p| p >= t || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidParameter(format!(
                "{perm:?} is not a permutation of 0..{t}"
            )));
        }
        let elements = perm.iter().map(|&p| self.elements[p].clone()).collect();
        Ok(WeightedSystem { q: self.q.clone(), elements })
    }
}

/// The largest valid weight for a relative to q: the top power of q whose
/// stage still contains a.
pub fn max_weight(q: &MonomialIdeal, a: &Monomial) -> Result<u32> {
    let free = CyclicModule::free(q.nvars());
    match free.initial_degree(a, q)? {
        InitialDegree::Finite(n) => Ok(n),
        InitialDegree::Infinite => Err(Error::Invariant(format!(
            "initial degree of {a} is unbounded; q is not proper"
        ))),
    }
}

fn check_arity(a: &[Monomial], module: &CyclicModule) -> Result<()> {
    if a.iter().any(|m| m.nvars() != module.nvars()) {
        return Err(Error::ShapeMismatch(
            "element arity differs from module".into(),
        ));
    }
    Ok(())
}

fn chain_complex(
    module: &CyclicModule,
    quotient: bool,
    a: &[Monomial],
    coeff: impl Fn(&[usize]) -> MonomialIdeal,
) -> Result<ComplexSpec> {
    check_arity(a, module)?;
    let t = a.len();
    let mut components: BTreeMap<i64, Vec<Slot>> = BTreeMap::new();
    let mut diffs = Vec::new();
    for i in 0..=t {
        let mut slots = Vec::new();
        for label in (0..t).combinations(i) {
            let shift: i64 = label.iter().map(|&l| i64::from(a[l].degree())).sum();
            for (k, &l) in label.iter().enumerate() {
                let mut tgt = label.clone();
                tgt.remove(k);
                diffs.push(DiffEntry {
                    index: i as i64,
                    src: label.clone(),
                    tgt,
                    sign: if k % 2 == 0 { 1 } else { -1 },
                    mult: a[l].clone(),
                });
            }
            slots.push(Slot { coeff: coeff(&label), label, shift });
        }
        components.insert(i as i64, slots);
    }
    ComplexSpec::new(Orientation::Chain, module.clone(), quotient, components, diffs)
}

fn cochain_complex(
    module: &CyclicModule,
    quotient: bool,
    a: &[Monomial],
    coeff: impl Fn(&[usize]) -> MonomialIdeal,
) -> Result<ComplexSpec> {
    check_arity(a, module)?;
    let t = a.len();
    let mut components: BTreeMap<i64, Vec<Slot>> = BTreeMap::new();
    let mut diffs = Vec::new();
    for i in 0..=t {
        let mut slots = Vec::new();
        for label in (0..t).combinations(i) {
            let shift: i64 = label.iter().map(|&l| i64::from(a[l].degree())).sum();
            for j in (0..t).filter(|j| !label.contains(j)) {
                let mut tgt = label.clone();
                let pos = tgt.iter().position(|&l| l > j).unwrap_or(tgt.len());
                tgt.insert(pos, j);
                diffs.push(DiffEntry {
                    index: i as i64,
                    src: label.clone(),
                    tgt,
                    sign: if pos % 2 == 0 { 1 } else { -1 },
                    mult: a[j].clone(),
                });
            }
            slots.push(Slot { coeff: coeff(&label), label, shift });
        }
        components.insert(i as i64, slots);
    }
    ComplexSpec::new(Orientation::Cochain, module.clone(), quotient, components, diffs)
}

/// The full Koszul chain complex K•(a; M) on t ≥ 1 elements.
pub fn koszul(a: &[Monomial], module: &CyclicModule) -> Result<ComplexSpec> {
    if a.is_empty() {
        return Err(Error::EmptySystem);
    }
    let d = module.nvars();
    chain_complex(module, false, a, |_| MonomialIdeal::unit(d))
}

/// The truncated Koszul subcomplex with slot coefficients q^{n−Σc}.
pub fn sub_koszul(
    ws: &WeightedSystem,
    module: &CyclicModule,
    n: i64,
    convention: NegPowerConvention,
) -> Result<ComplexSpec> {
    let a = ws.monomials();
    chain_complex(module, false, &a, |label| {
        ws.q().power(n - ws.weight_sum(label), convention)
    })
}

/// The quotient complex with terms M / q^{n−Σc}M.
#[allow(non_snake_case)]
pub fn quotient_L(
    ws: &WeightedSystem,
    module: &CyclicModule,
    n: i64,
    convention: NegPowerConvention,
) -> Result<ComplexSpec> {
    let a = ws.monomials();
    chain_complex(module, true, &a, |label| {
        ws.q().power(n - ws.weight_sum(label), convention)
    })
}

/// The full co-Koszul cochain complex K^•(a; M) on t ≥ 1 elements.
pub fn co_koszul(a: &[Monomial], module: &CyclicModule) -> Result<ComplexSpec> {
    if a.is_empty() {
        return Err(Error::EmptySystem);
    }
    let d = module.nvars();
    cochain_complex(module, false, a, |_| MonomialIdeal::unit(d))
}

/// The truncated co-Koszul complex with slot coefficients q^{n+Σc}; n ≥ 0.
pub fn sub_co_koszul(ws: &WeightedSystem, module: &CyclicModule, n: i64) -> Result<ComplexSpec> {
    if n < 0 {
        return Err(Error::InvalidParameter(
            "cochain truncation requires n ≥ 0".into(),
        ));
    }
    let a = ws.monomials();
    cochain_complex(module, false, &a, |label| {
        ws.q().power(n + ws.weight_sum(label), NegPowerConvention::Unit)
    })
}

/// The cochain quotient complex with terms M / q^{n+Σc}M; n ≥ 0.
#[allow(non_snake_case)]
pub fn co_quotient_L(ws: &WeightedSystem, module: &CyclicModule, n: i64) -> Result<ComplexSpec> {
    if n < 0 {
        return Err(Error::InvalidParameter(
            "cochain truncation requires n ≥ 0".into(),
        ));
    }
    let a = ws.monomials();
    cochain_complex(module, true, &a, |label| {
        ws.q().power(n + ws.weight_sum(label), NegPowerConvention::Unit)
    })
}

/// Builds the truncated chain complex by a deliberately different route —
/// bitmask subset enumeration, iterated products for powers, and bit-count
/// signs — modelling each slot as the degree-(n−Σc) component of the graded
/// module ⊕_m q^m M, whose negative components vanish.  Used as an equality
/// oracle against `sub_koszul` with the `zero` convention.
pub fn rees_slice_oracle(
    ws: &WeightedSystem,
    module: &CyclicModule,
    n: i64,
) -> Result<ComplexSpec> {
    fn iterated_power(q: &MonomialIdeal, e: i64) -> MonomialIdeal {
        if e < 0 {
            return MonomialIdeal::zero(q.nvars());
        }
        let mut acc = MonomialIdeal::unit(q.nvars());
        for _ in 0..e {
            acc = acc.product(q);
        }
        acc
    }

    let a = ws.monomials();
    check_arity(&a, module)?;
    let t = a.len();
    let mut components: BTreeMap<i64, Vec<Slot>> = BTreeMap::new();
    let mut diffs = Vec::new();
    for mask in 0u32..(1 << t) {
        let label: Vec<usize> = (0..t).filter(|&l| mask & (1 << l) != 0).collect();
        let i = label.len() as i64;
        let shift: i64 = label.iter().map(|&l| i64::from(a[l].degree())).sum();
        let coeff = iterated_power(ws.q(), n - ws.weight_sum(&label));
        for &l in &label {
            let below = (mask & ((1 << l) - 1)).count_ones();
            let tgt: Vec<usize> = label.iter().copied().filter(|&m| m != l).collect();
            diffs.push(DiffEntry {
                index: i,
                src: label.clone(),
                tgt,
                sign: if below % 2 == 0 { 1 } else { -1 },
                mult: a[l].clone(),
            });
        }
        components.entry(i).or_default().push(Slot { label, coeff, shift });
    }
    ComplexSpec::new(Orientation::Chain, module.clone(), false, components, diffs)
}

/// Heuristic degree window for homology scans of complexes built from the
/// elements a over M, with truncation level n against q: the window is
/// 4 plus the top generator degree of (a)+I, and the degree cap covers three
/// pure-power spans of (a)+I plus the largest truncation ideal degree plus
/// the window itself.
pub fn default_cap(
    a: &[Monomial],
    q: Option<&MonomialIdeal>,
    module: &CyclicModule,
    n: i64,
) -> Result<DegreeCap> {
    let ambient = module
        .relations()
        .sum(&MonomialIdeal::new(module.nvars(), a.to_vec()));
    let Some(maxpp) = ambient.max_pure_power() else {
        return Err(Error::NotSop(format!(
            "(a) + relations = {ambient} is not m-primary; supply an explicit degree cap"
        )));
    };
    let window = 4 + ambient.max_gen_degree();
    let q_deg = q.map_or(0, |q| i64::from(q.max_gen_degree()));
    let e_max = 3 * i64::from(maxpp) + n.max(0) * q_deg + i64::from(window);
    Ok(DegreeCap { e_max, window })
}
