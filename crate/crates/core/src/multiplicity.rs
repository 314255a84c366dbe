//! Hilbert–Samuel functions, multiplicities by finite differences, and the
//! Euler-characteristic identities that tie them to Koszul homology.
//!
//! The two identities verified here are
//!
//! * χ(K•(a; M)) = e₀((a); M) for a system of parameters a, and
//! * e₀((a); M) = c₁⋯c_t · e₀(q; M) + χ(K•(a, q, M; n)) for n ≫ 0,
//!
//! where e₀ is extracted as the stabilized (dim M)-th finite difference of
//! n ↦ ℓ(M/qⁿM).  A seeded corpus monitor gathers empirical evidence that
//! the stable χ value is never negative.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::builder::{default_cap, koszul, sub_koszul, WeightedSystem};
use crate::complex::DegreeCap;
use crate::error::{Error, Result};
use crate::linalg::PrimeField;
use crate::monomial::{CyclicModule, Monomial, MonomialIdeal, NegPowerConvention};

/// Scan bound for n when hunting for stabilized differences or χ windows.
const SCAN_BOUND: i64 = 40;
/// Confirmation window for the finite-difference extraction of e₀.
const E0_WINDOW: usize = 4;
/// Confirmation window for the stable χ value.
const CHI_WINDOW: usize = 5;

/// Values of n ↦ ℓ(M/qⁿM) together with the stabilized leading difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSamuelTable {
    values: Vec<u64>,
    dim: i64,
    e0: u64,
    stable_from: usize,
}

impl HilbertSamuelTable {
    /// ℓ(M/qⁿM) for n = 0, 1, … in order.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn dim(&self) -> i64 {
        self.dim
    }

    pub fn e0(&self) -> u64 {
        self.e0
    }

    /// First n at which the dim-th difference has entered its constant run.
    pub fn stable_from(&self) -> usize {
        self.stable_from
    }

    /// The k-th finite difference sequence of the values.
    pub fn differences(&self, k: usize) -> Vec<i64> {
        let mut diff: Vec<i64> = self.values.iter().map(|&v| v as i64).collect();
        for _ in 0..k {
            diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
        }
        diff
    }
}

/// Computes ℓ(M/qⁿM) for increasing n until the (dim M)-th finite difference
/// is constant over `window` consecutive values, up to n = `n_max`.
pub fn hilbert_table(
    module: &CyclicModule,
    q: &MonomialIdeal,
    n_max: i64,
    window: usize,
) -> Result<HilbertSamuelTable> {
    if module.is_zero_module() {
        return Ok(HilbertSamuelTable { values: vec![0; 2], dim: -1, e0: 0, stable_from: 0 });
    }
    let dim = module.krull_dim();
    let order = dim.max(0) as usize;
    let mut values: Vec<u64> = Vec::new();
    for n in 0..=n_max {
        values.push(module.hilbert_samuel(q, n)?);
        if values.len() > order + window {
            let mut diff: Vec<i64> = values.iter().map(|&v| v as i64).collect();
            for _ in 0..order {
                diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
            }
            let tail = &diff[diff.len() - window..];
            if tail.iter().all(|&v| v == tail[0]) {
                // Walk the constant run back to its true start.
                let target = tail[0];
                let start = diff
                    .iter()
                    .rposition(|&v| v != target)
                    .map_or(0, |p| p + 1);
                if target < 0 {
                    return Err(Error::Invariant(format!(
                        "negative leading difference {target} at n = {n}"
                    )));
                }
                return Ok(HilbertSamuelTable {
                    values,
                    dim,
                    e0: target as u64,
                    stable_from: start,
                });
            }
        }
    }
    Err(Error::Unstable(format!(
        "difference of order {order} not constant over a {window}-window by n = {n_max}"
    )))
}

/// Hilbert–Samuel multiplicity e₀(q; M): the stabilized (dim M)-th finite
/// difference of n ↦ ℓ(M/qⁿM).
pub fn e0(module: &CyclicModule, q: &MonomialIdeal) -> Result<u64> {
    Ok(hilbert_table(module, q, SCAN_BOUND, E0_WINDOW)?.e0())
}

fn require_sop(a: &[Monomial], module: &CyclicModule) -> Result<()> {
    let dim = module.krull_dim();
    if a.len() as i64 != dim {
        return Err(Error::NotSop(format!(
            "{} elements against dim M = {dim}",
            a.len()
        )));
    }
    let ambient = module
        .relations()
        .sum(&MonomialIdeal::new(module.nvars(), a.to_vec()));
    if !ambient.is_m_primary() {
        return Err(Error::NotSop(format!("(a) + relations = {ambient} is not m-primary")));
    }
    Ok(())
}

/// χ(K•(a; M)) for a system of parameters a, via slice homology.
pub fn chi_koszul(
    a: &[Monomial],
    module: &CyclicModule,
    field: PrimeField,
    cap: Option<DegreeCap>,
) -> Result<i64> {
    require_sop(a, module)?;
    let cap = match cap {
        Some(c) => c,
        None => default_cap(a, None, module, 0)?,
    };
    koszul(a, module)?.homology_dims(field, cap)?.euler_characteristic()
}

/// χ(L•(a, q, M; n)) as the alternating sum of termwise lengths
/// Σ_S (−1)^{|S|} ℓ(M / q^{n−Σc} M).
#[allow(non_snake_case)]
pub fn chi_L(
    ws: &WeightedSystem,
    module: &CyclicModule,
    n: i64,
    convention: NegPowerConvention,
) -> Result<i64> {
    let t = ws.len();
    let relations = module.relations();
    let mut chi = 0i64;
    for mask in 0u32..(1 << t) {
        let label: Vec<usize> = (0..t).filter(|&l| mask & (1 << l) != 0).collect();
        let coeff = ws.q().power(n - ws.weight_sum(&label), convention);
        let len = relations.sum(&coeff).artinian_length()? as i64;
        chi += if label.len() % 2 == 0 { len } else { -len };
    }
    Ok(chi)
}

/// The stable value of χ(K•(a, q, M; n)) for n ≫ 0, computed two ways per n
/// — directly from slice homology and as χ(K•(a;M)) − χ(L•(a,q,M;n)) — and
/// accepted once both routes agree and the value is constant over a window.
/// Returns (χ, first stable n).
#[allow(non_snake_case)]
pub fn chi_K_stable(
    ws: &WeightedSystem,
    module: &CyclicModule,
    field: PrimeField,
    convention: NegPowerConvention,
) -> Result<(i64, i64)> {
    let a = ws.monomials();
    require_sop(&a, module)?;
    let chi_full = chi_koszul(&a, module, field, None)?;
    let mut history: Vec<i64> = Vec::new();
    for n in 0..=SCAN_BOUND {
        let cap = default_cap(&a, Some(ws.q()), module, n)?;
        let direct = sub_koszul(ws, module, n, convention)?
            .homology_dims(field, cap)?
            .euler_characteristic()?;
        let formula = chi_full - chi_L(ws, module, n, convention)?;
        if direct != formula {
            return Err(Error::Disagreement(format!(
                "χ(K;{n}) = {direct} from homology but {formula} = χ(K) − χ(L)"
            )));
        }
        history.push(direct);
        if history.len() >= CHI_WINDOW {
            let tail = &history[history.len() - CHI_WINDOW..];
            if tail.iter().all(|&v| v == tail[0]) {
                let n_star = n - (CHI_WINDOW as i64) + 1;
                return Ok((tail[0], n_star));
            }
        }
    }
    Err(Error::Unstable(format!(
        "χ(K;n) not constant over a {CHI_WINDOW}-window by n = {SCAN_BOUND}"
    )))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mult1Report {
    pub chi: i64,
    pub e0: u64,
    pub ok: bool,
}

/// Checks χ(K•(a; M)) = e₀((a); M).
pub fn verify_mult1(
    a: &[Monomial],
    module: &CyclicModule,
    field: PrimeField,
) -> Result<Mult1Report> {
    let chi = chi_koszul(a, module, field, None)?;
    let ideal = MonomialIdeal::new(module.nvars(), a.to_vec());
    let e = e0(module, &ideal)?;
    Ok(Mult1Report { chi, e0: e, ok: chi == e as i64 })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mult2Report {
    pub e0_a: u64,
    pub e0_q: u64,
    pub weight_product: i64,
    pub chi: i64,
    pub n_star: i64,
    pub ok: bool,
}

/// Checks e₀((a); M) = (∏ cᵢ) · e₀(q; M) + χ(K•(a, q, M; n ≫ 0)).
pub fn verify_mult2(
    ws: &WeightedSystem,
    module: &CyclicModule,
    field: PrimeField,
    convention: NegPowerConvention,
) -> Result<Mult2Report> {
    let e0_a = e0(module, &ws.elements_ideal())?;
    let e0_q = e0(module, ws.q())?;
    let weight_product: i64 = ws.elements().iter().map(|(_, c)| i64::from(*c)).product();
    let (chi, n_star) = chi_K_stable(ws, module, field, convention)?;
    let ok = e0_a as i64 == weight_product * e0_q as i64 + chi;
    Ok(Mult2Report { e0_a, e0_q, weight_product, chi, n_star, ok })
}

/// One corpus instance outcome for the nonnegativity monitor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonitorRow {
    pub id: usize,
    pub nvars: usize,
    pub t: usize,
    pub weights: Vec<u32>,
    pub e0_a: Option<u64>,
    pub e0_q: Option<u64>,
    pub chi: Option<i64>,
    pub n_star: Option<i64>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonitorReport {
    pub rows: Vec<MonitorRow>,
    pub min_chi: Option<i64>,
    pub max_chi: Option<i64>,
    /// χ value → number of instances attaining it.
    pub histogram: std::collections::BTreeMap<i64, usize>,
    /// Instance ids with χ < 0 — each one is a reportable finding.
    pub negatives: Vec<usize>,
    /// Instance ids whose two χ routes disagreed — engine bugs, never math.
    pub disagreements: Vec<usize>,
}

/// Seeded random instance: an m-primary q, a monomial module with monomial
/// system of parameters built from pure powers of the surviving variables,
/// and validated weights.
pub fn random_sop_instance(seed: u64, id: usize) -> Result<(WeightedSystem, CyclicModule)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let d: usize = rng.random_range(1..=3);
    // dim M = t: the last `t` variables survive, the first d − t are killed
    // by pure powers in the relations.
    let t: usize = rng.random_range(1..=d);
    let killed = d - t;

    let mut q_gens: Vec<Monomial> = (0..d)
        .map(|v| Monomial::var(d, v).pow(rng.random_range(1..=3)))
        .collect();
    for _ in 0..rng.random_range(0..=2) {
        let exps: Vec<u32> = (0..d).map(|_| rng.random_range(0..=2)).collect();
        if exps.iter().any(|&e| e > 0) {
            q_gens.push(Monomial::new(exps));
        }
    }
    let q = MonomialIdeal::new(d, q_gens);

    let mut i_gens: Vec<Monomial> = (0..killed)
        .map(|v| Monomial::var(d, v).pow(rng.random_range(1..=3)))
        .collect();
    for _ in 0..rng.random_range(0..=2) {
        if killed == 0 {
            break;
        }
        // Extra relations stay inside the killed-variable locus so that the
        // last t variables still span a free face.
        let pivot = rng.random_range(0..killed);
        let mut exps: Vec<u32> = (0..d).map(|_| rng.random_range(0..=2)).collect();
        exps[pivot] = exps[pivot].max(1);
        i_gens.push(Monomial::new(exps));
    }
    let module = CyclicModule::new(MonomialIdeal::new(d, i_gens));

    let mut elements = Vec::new();
    for i in 0..t {
        let v = killed + i;
        let c: u32 = rng.random_range(1..=2);
        // The pure power x_v^{pp} lies in q, so exponent c·pp clears q^c.
        let pp = q
            .gens()
            .iter()
            .filter(|g| g.support() == [v])
            .map(|g| g.degree())
            .min()
            .ok_or_else(|| Error::Invariant("q lost its pure power".into()))?;
        let e = c * pp + rng.random_range(0..=1);
        elements.push((Monomial::var(d, v).pow(e), c));
    }
    let ws = WeightedSystem::new(q, elements)?;
    Ok((ws, module))
}

/// Runs `chi_K_stable` across a seeded random corpus and tallies the χ
/// values; negative values and route disagreements are surfaced as findings.
pub fn chi_nonneg_monitor(seed: u64, size: usize, field: PrimeField) -> MonitorReport {
    let rows: Vec<MonitorRow> = (0..size)
        .into_par_iter()
        .map(|id| {
            let (ws, module) = match random_sop_instance(seed, id) {
                Ok(pair) => pair,
                Err(err) => {
                    return MonitorRow {
                        id,
                        nvars: 0,
                        t: 0,
                        weights: vec![],
                        e0_a: None,
                        e0_q: None,
                        chi: None,
                        n_star: None,
                        status: format!("skipped: {err}"),
                    }
                }
            };
            let nvars = ws.nvars();
            let t = ws.len();
            let weights: Vec<u32> = ws.elements().iter().map(|(_, c)| *c).collect();
            match verify_mult2(&ws, &module, field, NegPowerConvention::Unit) {
                Ok(rep) => MonitorRow {
                    id,
                    nvars,
                    t,
                    weights,
                    e0_a: Some(rep.e0_a),
                    e0_q: Some(rep.e0_q),
                    chi: Some(rep.chi),
                    n_star: Some(rep.n_star),
                    status: if rep.ok { "ok".into() } else { "identity-failed".into() },
                },
                Err(err @ Error::Disagreement(_)) => MonitorRow {
                    id,
                    nvars,
                    t,
                    weights,
                    e0_a: None,
                    e0_q: None,
                    chi: None,
                    n_star: None,
                    status: format!("disagreement: {err}"),
                },
                Err(err) => MonitorRow {
                    id,
                    nvars,
                    t,
                    weights,
                    e0_a: None,
                    e0_q: None,
                    chi: None,
                    n_star: None,
                    status: format!("skipped: {err}"),
                },
            }
        })
        .collect();

    let mut histogram = std::collections::BTreeMap::new();
    let mut negatives = Vec::new();
    let mut disagreements = Vec::new();
    for row in &rows {
        if let Some(chi) = row.chi {
            *histogram.entry(chi).or_insert(0) += 1;
            if chi < 0 {
                negatives.push(row.id);
            }
        }
        if row.status.starts_with("disagreement") {
            disagreements.push(row.id);
        }
    }
    let min_chi = histogram.keys().next().copied();
    let max_chi = histogram.keys().next_back().copied();
    MonitorReport { rows, min_chi, max_chi, histogram, negatives, disagreements }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    fn mono(exps: &[u32]) -> Monomial {
        Monomial::new(exps.to_vec())
    }

    fn free2() -> CyclicModule {
        CyclicModule::free(2)
    }

    #[test]
    fn multiplicity_of_the_maximal_ideal_is_one() {
        assert_eq!(e0(&free2(), &MonomialIdeal::maximal(2)).unwrap(), 1);
    }

    #[test]
    fn multiplicity_by_difference_tables() {
        let q = MonomialIdeal::new(2, vec![mono(&[2, 0]), mono(&[0, 3])]);
        assert_eq!(e0(&free2(), &q).unwrap(), 6);
        let m2 = MonomialIdeal::new(2, vec![mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 2])]);
        assert_eq!(e0(&free2(), &m2).unwrap(), 4);
    }

    #[test]
    fn multiplicity_on_a_one_dimensional_module() {
        let module = CyclicModule::new(MonomialIdeal::new(2, vec![mono(&[2, 0]), mono(&[1, 1])]));
        assert_eq!(e0(&module, &MonomialIdeal::maximal(2)).unwrap(), 1);
        let table = hilbert_table(&module, &MonomialIdeal::maximal(2), 40, 4).unwrap();
        assert_eq!(table.dim(), 1);
        assert_eq!(&table.values()[..4], &[0, 1, 3, 4]);
        assert_eq!(table.stable_from(), 2);
    }

    #[test]
    fn zero_module_has_zero_multiplicity() {
        let zero = CyclicModule::new(MonomialIdeal::unit(2));
        assert_eq!(e0(&zero, &MonomialIdeal::maximal(2)).unwrap(), 0);
    }

    #[test]
    fn chi_equals_multiplicity_for_parameter_systems() {
        let a = [mono(&[2, 0]), mono(&[0, 3])];
        let rep = verify_mult1(&a, &free2(), field()).unwrap();
        assert!(rep.ok);
        assert_eq!((rep.chi, rep.e0), (6, 6));

        let module = CyclicModule::new(MonomialIdeal::new(2, vec![mono(&[2, 0]), mono(&[1, 1])]));
        let rep = verify_mult1(&[mono(&[0, 1])], &module, field()).unwrap();
        assert!(rep.ok);
        assert_eq!((rep.chi, rep.e0), (1, 1));
    }

    #[test]
    fn sop_validation_rejects_short_or_degenerate_systems() {
        assert!(matches!(
            chi_koszul(&[mono(&[1, 0])], &free2(), field(), None),
            Err(Error::NotSop(_))
        ));
        assert!(matches!(
            chi_koszul(&[mono(&[1, 0]), mono(&[2, 0])], &free2(), field(), None),
            Err(Error::NotSop(_))
        ));
    }

    #[test]
    fn termwise_chi_of_the_quotient_complex() {
        let ws = WeightedSystem::new(
            MonomialIdeal::maximal(2),
            vec![(mono(&[2, 0]), 2), (mono(&[0, 3]), 3)],
        )
        .unwrap();
        let u = NegPowerConvention::Unit;
        assert_eq!(chi_L(&ws, &free2(), 10, u).unwrap(), 6);
        assert_eq!(chi_L(&ws, &free2(), 12, u).unwrap(), 6);
        assert_eq!(chi_L(&ws, &free2(), 0, u).unwrap(), 0);
        // Against the complex-side route.
        let l = crate::builder::quotient_L(&ws, &free2(), 10, u).unwrap();
        assert_eq!(l.euler_by_terms().unwrap(), chi_L(&ws, &free2(), 10, u).unwrap());
    }

    #[test]
    fn stable_chi_of_weighted_truncations() {
        let u = NegPowerConvention::Unit;
        let ws = WeightedSystem::new(
            MonomialIdeal::maximal(2),
            vec![(mono(&[2, 0]), 2), (mono(&[0, 3]), 3)],
        )
        .unwrap();
        let (chi, _) = chi_K_stable(&ws, &free2(), field(), u).unwrap();
        assert_eq!(chi, 0);

        let m2 = MonomialIdeal::new(2, vec![mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 2])]);
        let ws = WeightedSystem::new(m2, vec![(mono(&[3, 0]), 1), (mono(&[0, 3]), 1)]).unwrap();
        let (chi, _) = chi_K_stable(&ws, &free2(), field(), u).unwrap();
        assert_eq!(chi, 5);
    }

    #[test]
    fn weighted_identity_holds_on_the_worked_instances() {
        let u = NegPowerConvention::Unit;
        let m2 = MonomialIdeal::new(2, vec![mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 2])]);
        let ws = WeightedSystem::new(m2, vec![(mono(&[4, 0]), 2), (mono(&[0, 6]), 3)]).unwrap();
        let rep = verify_mult2(&ws, &free2(), field(), u).unwrap();
        assert!(rep.ok, "{rep:?}");
        assert_eq!((rep.e0_a, rep.e0_q, rep.chi), (24, 4, 0));
    }

    #[test]
    fn weighted_identity_on_a_one_dimensional_module() {
        // ℓ(M/y^{2n}M) = 2n + 1 on M = R/(x², xy): e₀((y²); M) = 2 = 2·1 + 0.
        let u = NegPowerConvention::Unit;
        let module = CyclicModule::new(MonomialIdeal::new(2, vec![mono(&[2, 0]), mono(&[1, 1])]));
        let ws =
            WeightedSystem::new(MonomialIdeal::maximal(2), vec![(mono(&[0, 2]), 2)]).unwrap();
        let rep = verify_mult2(&ws, &module, field(), u).unwrap();
        assert!(rep.ok, "{rep:?}");
        assert_eq!((rep.e0_a, rep.e0_q, rep.chi), (2, 1, 0));
    }

    #[test]
    fn monitor_is_deterministic_and_tallies_chi() {
        let a = chi_nonneg_monitor(7, 12, field());
        let b = chi_nonneg_monitor(7, 12, field());
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 12);
        assert!(a.rows.iter().any(|r| r.status == "ok"));
        assert!(a.disagreements.is_empty());
        for row in &a.rows {
            assert_ne!(row.status, "identity-failed", "instance {}", row.id);
        }
    }
}
