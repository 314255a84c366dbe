//! Monomials, monomial ideals, and cyclic modules over the localization of
//! k[x_1, …, x_d] at the maximal ideal m = (x_1, …, x_d).
//!
//! All data is exact integer combinatorics on exponent vectors: membership in
//! a monomial ideal is divisibility against the minimal generating antichain,
//! colon and intersection are gcd/lcm exchanges on generators, and lengths are
//! staircase point counts.  Units of the localization never show up as
//! generators, so a generating set of monomials loses no information.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on ideal power exponents, so that runaway parameters fail fast
/// instead of allocating combinatorially many generators.
pub const POWER_CAP: i64 = 4096;

/// How `q^j` is read for non-positive `j` when a truncation parameter drops
/// below the weight sum of a slot.
///
/// `Unit`: q^j = (1) for every j ≤ 0.  `Zero`: q^j = (0) for j < 0 while
/// q^0 = (1), matching the grading of the associated Rees module where
/// negative components vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NegPowerConvention {
    #[default]
    Unit,
    Zero,
}

/// Exponent vector in a fixed number of variables.  `Monomial::one(d)` is the
/// empty product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars] }
    }

    /// The variable x_i as a monomial.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        Monomial { exps }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        let exps = self
            .exps
            .iter()
            .map(|a| a.checked_mul(k).expect("exponent overflow"))
            .collect();
        Monomial { exps }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.min(b)).collect();
        Monomial { exps }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect();
        Monomial { exps }
    }

    /// self / gcd(self, other): the generator of (self) : (other).
    pub fn colon_by(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.saturating_sub(*b))
            .collect();
        Monomial { exps }
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        self.exps
            .iter()
            .enumerate()
            .filter_map(|(i, &e)| (e > 0).then_some(i))
            .collect()
    }

    /// The squarefree monomial on the same support.
    pub fn squarefree(&self) -> Monomial {
        Monomial { exps: self.exps.iter().map(|&e| u32::from(e > 0)).collect() }
    }

    /// Render with explicit variable names, `1` for the empty product.
    pub fn format(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 1 {
                parts.push(names[i].clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", names[i], e));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Default variable names: x, y, z when d ≤ 3, else x1, …, xd.
pub fn default_var_names(nvars: usize) -> Vec<String> {
    if nvars <= 3 {
        ["x", "y", "z"][..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format(&default_var_names(self.nvars())))
    }
}

/// All monomials of the given total degree, in lexicographic exponent order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    if nvars == 0 {
        return if degree == 0 { vec![Monomial::one(0)] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fill(&mut out, &mut cur, 0, degree);
    fn fill(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, pos: usize, rest: u32) {
        if pos + 1 == cur.len() {
            cur[pos] = rest;
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in 0..=rest {
            cur[pos] = e;
            fill(out, cur, pos + 1, rest - e);
        }
        cur[pos] = 0;
    }
    out
}

/// A monomial ideal held as its unique minimal generating antichain, sorted.
/// The zero ideal has no generators; the unit ideal is generated by 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(nvars: usize, gens: Vec<Monomial>) -> Self {
        for g in &gens {
            assert_eq!(g.nvars(), nvars, "generator arity mismatch");
        }
        MonomialIdeal { nvars, gens: minimalize(gens) }
    }

    pub fn zero(nvars: usize) -> Self {
        MonomialIdeal { nvars, gens: vec![] }
    }

    pub fn unit(nvars: usize) -> Self {
        MonomialIdeal { nvars, gens: vec![Monomial::one(nvars)] }
    }

    /// The maximal ideal (x_1, …, x_d).
    pub fn maximal(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            gens: (0..nvars).map(|i| Monomial::var(nvars, i)).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    /// Proper means neither (0) nor (1).
    pub fn is_proper_nonzero(&self) -> bool {
        !self.is_zero() && !self.is_unit()
    }

    pub fn contains(&self, f: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(f))
    }

    pub fn contains_ideal(&self, other: &MonomialIdeal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn max_gen_degree(&self) -> u32 {
        self.gens.iter().map(|g| g.degree()).max().unwrap_or(0)
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        MonomialIdeal::new(self.nvars, gens)
    }

    pub fn product(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        MonomialIdeal::new(self.nvars, gens)
    }

    pub fn intersection(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.lcm(b));
            }
        }
        MonomialIdeal::new(self.nvars, gens)
    }

    /// I^e, with the convention deciding what non-positive exponents mean.
    /// Generators of I^e for e ≥ 1 are the e-fold products of generators,
    /// enumerated as multisets.
    pub fn power(&self, e: i64, convention: NegPowerConvention) -> MonomialIdeal {
        if e > POWER_CAP {
            panic!("ideal power exponent {e} exceeds cap {POWER_CAP}");
        }
        if e == 0 {
            return MonomialIdeal::unit(self.nvars);
        }
        if e < 0 {
            return match convention {
                NegPowerConvention::Unit => MonomialIdeal::unit(self.nvars),
                NegPowerConvention::Zero => MonomialIdeal::zero(self.nvars),
            };
        }
        if self.is_zero() {
            return MonomialIdeal::zero(self.nvars);
        }
        // Multisets of size e over the generators, built by non-decreasing index.
        let mut gens = Vec::new();
        let mut stack: Vec<(usize, Monomial, i64)> = vec![(0, Monomial::one(self.nvars), e)];
        while let Some((start, acc, rest)) = stack.pop() {
            if rest == 0 {
                gens.push(acc);
                continue;
            }
            for i in start..self.gens.len() {
                stack.push((i, acc.mul(&self.gens[i]), rest - 1));
            }
        }
        MonomialIdeal::new(self.nvars, gens)
    }

    /// (I : f) for a monomial f.
    pub fn colon_monomial(&self, f: &Monomial) -> MonomialIdeal {
        MonomialIdeal::new(self.nvars, self.gens.iter().map(|g| g.colon_by(f)).collect())
    }

    /// (I : J) = ∩_{f ∈ gens J} (I : f).  For J = (0) this is the unit ideal.
    pub fn colon_ideal(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut acc = MonomialIdeal::unit(self.nvars);
        for f in &other.gens {
            acc = acc.intersection(&self.colon_monomial(f));
        }
        acc
    }

    /// Iterated colon (I : J : J : …) until it stops growing.  Returns the
    /// stable ideal together with the first iteration index at which the
    /// chain is stationary.
    pub fn saturation(&self, other: &MonomialIdeal) -> (MonomialIdeal, usize) {
        let mut cur = self.clone();
        let mut stage = 0usize;
        loop {
            let next = cur.colon_ideal(other);
            if next == cur {
                return (cur, stage);
            }
            cur = next;
            stage += 1;
        }
    }

    /// Whether every variable has a pure power among the generators, i.e.
    /// whether R/I has finite length.  Vacuously true when nvars = 0.
    pub fn is_m_primary(&self) -> bool {
        (0..self.nvars).all(|v| {
            self.gens
                .iter()
                .any(|g| g.support().iter().all(|&s| s == v))
        })
    }

    /// For each variable, the least pure-power exponent among the generators.
    /// None if some variable has no pure power (then R/I is not Artinian).
    pub fn pure_power_degrees(&self) -> Option<Vec<u32>> {
        (0..self.nvars)
            .map(|v| {
                self.gens
                    .iter()
                    .filter(|g| g.support().iter().all(|&s| s == v))
                    .map(|g| g.exponent(v))
                    .min()
            })
            .collect()
    }

    /// Largest pure-power exponent over all variables, 0 for the unit ideal
    /// in 0 variables.  None when not m-primary.
    pub fn max_pure_power(&self) -> Option<u32> {
        self.pure_power_degrees().map(|v| v.into_iter().max().unwrap_or(0))
    }

    /// Monomials of the given degree not lying in the ideal: the degree slice
    /// of the standard monomial basis of R/I.
    pub fn std_basis_slice(&self, degree: u32) -> Vec<Monomial> {
        monomials_of_degree(self.nvars, degree)
            .into_iter()
            .filter(|m| !self.contains(m))
            .collect()
    }

    /// dim_k R/I as a staircase point count.  Requires I m-primary.
    pub fn artinian_length(&self) -> Result<u64> {
        let pp = self
            .pure_power_degrees()
            .ok_or_else(|| Error::NotArtinian(format!("no pure power for some variable in {self}")))?;
        // Standard monomials satisfy exp_v ≤ pp_v - 1, so their degree is
        // bounded by Σ (pp_v - 1).
        let bound: u64 = pp.iter().map(|&p| (p.max(1) - 1) as u64).sum();
        let mut total = 0u64;
        for e in 0..=bound {
            total += self.std_basis_slice(e as u32).len() as u64;
        }
        Ok(total)
    }

    /// Number of monomials in self that are not in `inner`, i.e. the length of
    /// (self + inner)/inner when inner ⊆ self.  Finite exactly when
    /// (inner : self) is m-primary.
    pub fn quotient_length(&self, inner: &MonomialIdeal) -> Result<u64> {
        if self.is_zero() {
            return Ok(0);
        }
        let ann = inner.colon_ideal(self);
        let pp = ann.pure_power_degrees().ok_or_else(|| {
            Error::NotFiniteLength(format!("({inner} : {self}) is not m-primary"))
        })?;
        // Any w ∈ self with deg w ≥ k + maxdeg(gens) factors as w = u·g with
        // deg u ≥ k, so u ∈ m^k ⊆ (inner : self) and w ∈ inner.
        let k: u64 = pp.iter().map(|&p| (p.max(1) - 1) as u64).sum::<u64>() + 1;
        let bound = k + self.max_gen_degree() as u64;
        let mut total = 0u64;
        for e in 0..bound {
            total += monomials_of_degree(self.nvars, e as u32)
                .iter()
                .filter(|m| self.contains(m) && !inner.contains(m))
                .count() as u64;
        }
        Ok(total)
    }

    /// Radical by support reduction: each generator is replaced by its
    /// squarefree part.
    pub fn radical(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.nvars, self.gens.iter().map(|g| g.squarefree()).collect())
    }

    pub fn format(&self, names: &[String]) -> String {
        let inner = self.gens.iter().map(|g| g.format(names)).collect::<Vec<_>>().join(", ");
        format!("({inner})")
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format(&default_var_names(self.nvars)))
    }
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|g| (g.degree(), g.clone()));
    gens.dedup();
    let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
    'outer: for g in gens {
        // Earlier entries have lower or equal degree, so divisibility can only
        // run from kept to g.
        for k in &kept {
            if k.divides(&g) {
                continue 'outer;
            }
        }
        kept.push(g);
    }
    kept.sort();
    kept
}

/// A cyclic module M = R/I presented by its monomial relation ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicModule {
    relations: MonomialIdeal,
}

/// Result of an initial-degree scan: the largest n with f ∈ q^n M, or
/// `Infinite` when every power contains f (only possible for q = (1)).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialDegree {
    Finite(u32),
    Infinite,
}

impl CyclicModule {
    pub fn new(relations: MonomialIdeal) -> Self {
        CyclicModule { relations }
    }

    pub fn free(nvars: usize) -> Self {
        CyclicModule { relations: MonomialIdeal::zero(nvars) }
    }

    pub fn nvars(&self) -> usize {
        self.relations.nvars()
    }

    pub fn relations(&self) -> &MonomialIdeal {
        &self.relations
    }

    pub fn is_zero_module(&self) -> bool {
        self.relations.is_unit()
    }

    /// Standard monomials of M in the given degree.
    pub fn std_basis_slice(&self, degree: u32) -> Vec<Monomial> {
        self.relations.std_basis_slice(degree)
    }

    /// Total length of M; requires I m-primary.
    pub fn length(&self) -> Result<u64> {
        self.relations.artinian_length()
    }

    /// Krull dimension of R/I via the maximal-face test on the staircase:
    /// the largest coordinate subspace k[x_S] missing the ideal.  The zero
    /// module reports -1.
    pub fn krull_dim(&self) -> i64 {
        let d = self.nvars();
        let gens = self.relations.gens();
        for size in (0..=d).rev() {
            // Subsets of {0..d} of the given size.
            let mut found = false;
            let subset_ok = |s: &BTreeSet<usize>| {
                !gens.iter().any(|g| g.support().iter().all(|v| s.contains(v)))
            };
            for bits in 0u32..(1 << d) {
                if bits.count_ones() as usize != size {
                    continue;
                }
                let s: BTreeSet<usize> = (0..d).filter(|i| bits >> i & 1 == 1).collect();
                if subset_ok(&s) {
                    found = true;
                    break;
                }
            }
            if found {
                return size as i64;
            }
        }
        -1
    }

    /// ℓ(M / q^n M) = ℓ(R / (I + q^n)).  Requires I + q m-primary when n ≥ 1.
    pub fn hilbert_samuel(&self, q: &MonomialIdeal, n: i64) -> Result<u64> {
        let qn = q.power(n, NegPowerConvention::Unit);
        self.relations.sum(&qn).artinian_length()
    }

    /// Largest n ≥ 0 with f ∈ q^n M, for f whose image in M is nonzero.
    pub fn initial_degree(&self, f: &Monomial, q: &MonomialIdeal) -> Result<InitialDegree> {
        if self.relations.contains(f) {
            return Err(Error::InRelations);
        }
        if q.is_unit() {
            return Ok(InitialDegree::Infinite);
        }
        if q.is_zero() {
            return Ok(InitialDegree::Finite(0));
        }
        // Proper q sits inside m, so membership f ∈ q^n + I fails once
        // n > deg f.
        let mut best = 0u32;
        for n in 1..=f.degree() as i64 {
            let qn = q.power(n, NegPowerConvention::Unit).sum(&self.relations);
            if qn.contains(f) {
                best = n as u32;
            } else {
                break;
            }
        }
        Ok(InitialDegree::Finite(best))
    }
}
