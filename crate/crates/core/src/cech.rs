//! Direct systems of truncated co-Koszul complexes and their stabilized
//! slice cohomology.
//!
//! The k-th stage of a system is the complex built from the powered system
//! (a₁ᵏ, …, a_tᵏ) with weights k·cᵢ; the transition into stage k+1 multiplies
//! the slot labelled S by ∏_{l∈S} a_l.  Čech-style cohomology Ȟⁱ / Ľⁱ and
//! local cohomology H^i_{(a)} are read off as the ranks of composite
//! transition maps on slice cohomology once those ranks stop moving: a cell
//! is reported *stable* when the rank of the image of stage k in stage k+w
//! is constant over a trailing run of stages, and *unstable* otherwise.
//! Stability is evidence collected from finitely many stages, not a proof;
//! reports carry `k_max` and `window` so callers can see the evidence level.
//!
//! The second half of the module contains the ideal-theoretic side checks
//! that accompany the colimits: saturation chains ((qⁿ⁺ᶜˡ + I) : aˡ) with
//! their first stable stage, the star-identity search, the torsion part of
//! Ȟ⁰, Artin–Rees gaps, and radical invariance of Ľ.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::builder::{co_koszul, co_quotient_L, sub_co_koszul, WeightedSystem};
use crate::complex::ComplexSpec;
use crate::error::{Error, Result};
use crate::linalg::{PrimeField, SparseMatrix};
use crate::monomial::{
    monomials_of_degree, CyclicModule, Monomial, MonomialIdeal, NegPowerConvention,
};

/// Default number of stages scanned by the colimit routines.
pub const DEFAULT_K_MAX: u32 = 8;
/// Default width of the composite-rank window.
pub const DEFAULT_COLIMIT_WINDOW: u32 = 2;
/// Default number of colon stages scanned by [`saturation_power`].
pub const DEFAULT_L_MAX: u32 = 24;
/// Default run length that counts as a stable saturation chain.
pub const DEFAULT_SAT_WINDOW: u32 = 6;

/// Which truncation the stages of a direct system carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    /// Stages are Kᵏ = K^•(aᵏ, qᵏ, M; n) with submodule coefficients.
    Sub,
    /// Stages are Lᵏ = L^•(aᵏ, qᵏ, M; n) with quotient coefficients.
    Quotient,
    /// Stages are the plain co-Koszul complexes K^•(aᵏ; M).
    Plain,
}

/// Tuning knobs for the colimit scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColimitParams {
    /// Number of stages (≥ 2).
    pub k_max: u32,
    /// Composite-rank window width (≥ 1).
    pub window: u32,
    /// Internal-degree range; defaults to [−2·k_max, n + Σ deg aᵢ].
    pub e_range: Option<(i64, i64)>,
}

impl Default for ColimitParams {
    fn default() -> Self {
        ColimitParams { k_max: DEFAULT_K_MAX, window: DEFAULT_COLIMIT_WINDOW, e_range: None }
    }
}

/// Verdict for one cell (i, e) of a colimit scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColimitEntry {
    /// The composite rank held the value `dim` from stage `first_stable_stage`
    /// through the end of the scan.
    Stable { dim: u64, first_stable_stage: u32 },
    /// The trailing composite ranks were still moving at stage k_max − window.
    Unstable,
}

/// Stabilized slice cohomology of a direct system, one entry per scanned cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColimitReport {
    cells: BTreeMap<(i64, i64), ColimitEntry>,
    index_range: (i64, i64),
    e_range: (i64, i64),
    k_max: u32,
    window: u32,
}

impl ColimitReport {
    pub fn get(&self, index: i64, e: i64) -> Option<&ColimitEntry> {
        self.cells.get(&(index, e))
    }

    /// Stable dimension of a cell: `None` when the cell is unstable or was
    /// not scanned.
    pub fn stable_dim(&self, index: i64, e: i64) -> Option<u64> {
        match self.cells.get(&(index, e)) {
            Some(ColimitEntry::Stable { dim, .. }) => Some(*dim),
            _ => None,
        }
    }

    /// All stable cells with nonzero dimension, as (index, e, dim).
    pub fn nonzero(&self) -> Vec<(i64, i64, u64)> {
        self.cells
            .iter()
            .filter_map(|(&(i, e), entry)| match entry {
                ColimitEntry::Stable { dim, .. } if *dim > 0 => Some((i, e, *dim)),
                _ => None,
            })
            .collect()
    }

    pub fn unstable_cells(&self) -> Vec<(i64, i64)> {
        self.cells
            .iter()
            .filter_map(|(&k, entry)| (*entry == ColimitEntry::Unstable).then_some(k))
            .collect()
    }

    /// Whether every scanned cell at the given index is stably zero.
    pub fn all_zero_at(&self, index: i64) -> bool {
        self.cells.iter().filter(|(&(i, _), _)| i == index).all(|(_, entry)| {
            matches!(entry, ColimitEntry::Stable { dim: 0, .. })
        })
    }

    /// Whether no scanned cell is unstable.
    pub fn is_stable(&self) -> bool {
        self.cells.values().all(|entry| !matches!(entry, ColimitEntry::Unstable))
    }

    pub fn cells(&self) -> &BTreeMap<(i64, i64), ColimitEntry> {
        &self.cells
    }

    pub fn index_range(&self) -> (i64, i64) {
        self.index_range
    }

    pub fn e_range(&self) -> (i64, i64) {
        self.e_range
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn window(&self) -> u32 {
        self.window
    }
}

/// A direct system of co-Koszul-type complexes over one weighted system.
#[derive(Debug, Clone)]
pub struct DirectSystemSpec {
    ws: WeightedSystem,
    module: CyclicModule,
    n: i64,
    kind: SystemKind,
    stages: Vec<ComplexSpec>,
}

impl DirectSystemSpec {
    pub fn ws(&self) -> &WeightedSystem {
        &self.ws
    }

    pub fn module(&self) -> &CyclicModule {
        &self.module
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn stages(&self) -> &[ComplexSpec] {
        &self.stages
    }

    /// The transition multiplier of a slot: ∏_{l ∈ label} a_l.
    fn transition_multiplier(&self, label: &[usize]) -> Monomial {
        let mut m = Monomial::one(self.ws.nvars());
        for &l in label {
            m = m.mul(&self.ws.elements()[l].0);
        }
        m
    }

    /// Matrix of the stage-k → stage-(k+1) transition on the degree-e slice
    /// of index i (k is 1-based, 1 ≤ k < number of stages).
    pub fn transition_matrix(
        &self,
        field: PrimeField,
        k: usize,
        index: i64,
        e: i64,
    ) -> Result<SparseMatrix> {
        if k == 0 || k >= self.stages.len() {
            return Err(Error::InvalidParameter(format!(
                "transition stage {k} out of range 1..{}",
                self.stages.len()
            )));
        }
        let src_spec = &self.stages[k - 1];
        let tgt_spec = &self.stages[k];
        let src = src_spec.slice(index, e);
        let tgt = tgt_spec.slice(index, e);
        let src_slots = src_spec.slots(index);
        let tgt_slots = tgt_spec.slots(index);
        if src_slots.len() != tgt_slots.len() {
            return Err(Error::Invariant(format!(
                "stage {k} and {} disagree on the slots of index {index}",
                k + 1
            )));
        }
        let relations = self.module.relations();
        let quotient = matches!(self.kind, SystemKind::Quotient);
        let mut triplets = Vec::new();
        for (sp, (src_slot, tgt_slot)) in src_slots.iter().zip(tgt_slots).enumerate() {
            if src_slot.label != tgt_slot.label {
                return Err(Error::Invariant(format!(
                    "slot labels of index {index} differ between stages {k} and {}",
                    k + 1
                )));
            }
            let mult = self.transition_multiplier(&src_slot.label);
            let lookup: std::collections::HashMap<&Monomial, usize> = tgt.per_slot[sp]
                .iter()
                .enumerate()
                .map(|(j, m)| (m, j))
                .collect();
            for (j, m) in src.per_slot[sp].iter().enumerate() {
                let w = m.mul(&mult);
                if relations.contains(&w) {
                    continue;
                }
                if quotient {
                    if tgt_slot.coeff.contains(&w) {
                        continue;
                    }
                } else if !tgt_slot.coeff.contains(&w) {
                    return Err(Error::Invariant(format!(
                        "transition image {w} escapes the stage-{} coefficient ideal {}",
                        k + 1,
                        tgt_slot.coeff
                    )));
                }
                let Some(&row) = lookup.get(&w) else {
                    return Err(Error::Invariant(format!(
                        "transition image {w} missing from the stage-{} slice basis",
                        k + 1
                    )));
                };
                triplets.push((tgt.offsets[sp] + row, src.offsets[sp] + j, 1));
            }
        }
        SparseMatrix::from_triplets(field, tgt.dim, src.dim, &triplets)
    }
}

/// Build the direct system of stages k = 1, …, k_max for a weighted system,
/// checking symbolically that every transition commutes with the stage
/// differentials.
pub fn build_system(
    ws: &WeightedSystem,
    module: &CyclicModule,
    n: i64,
    kind: SystemKind,
    k_max: u32,
) -> Result<DirectSystemSpec> {
    if k_max < 2 {
        return Err(Error::InvalidParameter(format!(
            "a direct system needs at least two stages, got k_max = {k_max}"
        )));
    }
    if n < 0 && !matches!(kind, SystemKind::Plain) {
        return Err(Error::InvalidParameter(format!(
            "truncated cochain stages need n ≥ 0, got n = {n}"
        )));
    }
    let mut stages = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let powered = ws.power_system(k)?;
        let stage = match kind {
            SystemKind::Sub => sub_co_koszul(&powered, module, n)?,
            SystemKind::Quotient => co_quotient_L(&powered, module, n)?,
            SystemKind::Plain => co_koszul(&powered.monomials(), module)?,
        };
        stages.push(stage);
    }
    let sys = DirectSystemSpec { ws: ws.clone(), module: module.clone(), n, kind, stages };
    check_symbolic_commutation(&sys)?;
    Ok(sys)
}

/// T ∘ d = d ∘ T on labels and multipliers: for every differential entry,
/// mult_k · ∏_{l∈tgt} a_l must equal ∏_{l∈src} a_l · mult_{k+1} with the same
/// sign.  Canonical diff ordering makes consecutive stages zip cleanly.
fn check_symbolic_commutation(sys: &DirectSystemSpec) -> Result<()> {
    for (k, pair) in sys.stages.windows(2).enumerate() {
        let (cur, next) = (&pair[0], &pair[1]);
        if cur.diffs().len() != next.diffs().len() {
            return Err(Error::Invariant(format!(
                "stages {} and {} have different differential supports",
                k + 1,
                k + 2
            )));
        }
        for (a, b) in cur.diffs().iter().zip(next.diffs()) {
            if a.index != b.index || a.src != b.src || a.tgt != b.tgt || a.sign != b.sign {
                return Err(Error::Invariant(format!(
                    "differential entries of stages {} and {} are misaligned",
                    k + 1,
                    k + 2
                )));
            }
            let lhs = a.mult.mul(&sys.transition_multiplier(&a.tgt));
            let rhs = sys.transition_multiplier(&a.src).mul(&b.mult);
            if lhs != rhs {
                return Err(Error::Invariant(format!(
                    "transition fails to commute with d on {:?} → {:?}: {lhs} ≠ {rhs}",
                    a.src, a.tgt
                )));
            }
        }
    }
    Ok(())
}

fn sorted_entries(m: &SparseMatrix) -> Vec<(usize, usize, u64)> {
    let mut v: Vec<_> = m.entries().collect();
    v.sort_unstable();
    v
}

fn same_matrix(a: &SparseMatrix, b: &SparseMatrix) -> bool {
    a.rows() == b.rows() && a.cols() == b.cols() && sorted_entries(a) == sorted_entries(b)
}

/// Longest trailing run of equal values: Some((value, 1-based start)) when the
/// run has length ≥ 2.
fn trailing_run(rs: &[u64]) -> Option<(u64, u32)> {
    let last = *rs.last()?;
    let run = rs.iter().rev().take_while(|&&r| r == last).count();
    (run >= 2).then(|| (last, (rs.len() - run + 1) as u32))
}

/// Stabilized cohomology of a direct system over a degree window.
///
/// For each cell (i, e) and each stage k ≤ k_max − window, the rank of the
/// image of the stage-k cohomology in stage k + window is computed as
/// rank([d_in | T∘…∘T·Z]) − rank(d_in), where Z is a kernel basis of the
/// outgoing differential at stage k and d_in the incoming differential at
/// stage k + window.  A trailing constant run of length ≥ 2 is reported as
/// the stable dimension; anything else is unstable.  Per slice, d∘d = 0 and
/// numeric commutation of the transitions are checked on the way.
pub fn colimit_cohomology(
    sys: &DirectSystemSpec,
    field: PrimeField,
    window: u32,
    e_range: Option<(i64, i64)>,
) -> Result<ColimitReport> {
    if window < 1 {
        return Err(Error::InvalidParameter("the colimit window must be ≥ 1".into()));
    }
    let k_max = sys.stages.len();
    let w = window as usize;
    let (lo, hi) = e_range.unwrap_or((-2 * k_max as i64, sys.n + sys.ws.degree_sum()));
    if lo > hi {
        return Err(Error::InvalidParameter(format!("empty degree range [{lo}, {hi}]")));
    }
    let (ilo, ihi) = sys.stages[0].index_range();

    let per_degree: Vec<Vec<((i64, i64), ColimitEntry)>> = (lo..=hi)
        .into_par_iter()
        .map(|e| -> Result<Vec<((i64, i64), ColimitEntry)>> {
            // Outgoing differentials per stage and index, plus d∘d = 0.
            let douts: Vec<Vec<SparseMatrix>> = sys
                .stages
                .iter()
                .map(|c| {
                    (ilo..=ihi)
                        .map(|i| c.differential_matrix(field, i, e))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            for (k, mats) in douts.iter().enumerate() {
                for i in 0..mats.len() - 1 {
                    if !mats[i + 1].mul(&mats[i])?.is_zero() {
                        return Err(Error::Invariant(format!(
                            "d∘d ≠ 0 at stage {} index {i} degree {e}",
                            k + 1
                        )));
                    }
                }
            }
            // Transitions per stage boundary and index, plus commutation.
            let mut trans: Vec<Vec<SparseMatrix>> = Vec::with_capacity(k_max - 1);
            for k in 1..k_max {
                trans.push(
                    (ilo..=ihi)
                        .map(|i| sys.transition_matrix(field, k, i, e))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            for k in 0..k_max - 1 {
                for i in 0..(ihi - ilo) as usize {
                    let lhs = trans[k][i + 1].mul(&douts[k][i])?;
                    let rhs = douts[k + 1][i].mul(&trans[k][i])?;
                    if !same_matrix(&lhs, &rhs) {
                        return Err(Error::Invariant(format!(
                            "transition {k} does not commute with d at index {i} degree {e}",
                        )));
                    }
                }
            }
            // Composite image ranks per index.
            let mut out = Vec::new();
            for (pos, i) in (ilo..=ihi).enumerate() {
                let mut rs = Vec::new();
                for k in 1..=k_max.saturating_sub(w) {
                    let z = douts[k - 1][pos].kernel_basis();
                    let mut moved =
                        SparseMatrix::from_dense_columns(field, douts[k - 1][pos].cols(), &z);
                    for j in k..k + w {
                        moved = trans[j - 1][pos].mul(&moved)?;
                    }
                    let boundary;
                    let d_in = if pos > 0 {
                        &douts[k + w - 1][pos - 1]
                    } else {
                        boundary = SparseMatrix::zero(field, moved.rows(), 0);
                        &boundary
                    };
                    let r = d_in.augment(&moved)?.rank() - d_in.rank();
                    rs.push(r as u64);
                }
                let entry = match trailing_run(&rs) {
                    Some((dim, first_stable_stage)) => {
                        ColimitEntry::Stable { dim, first_stable_stage }
                    }
                    None => ColimitEntry::Unstable,
                };
                out.push(((i, e), entry));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut cells = BTreeMap::new();
    for chunk in per_degree {
        cells.extend(chunk);
    }
    Ok(ColimitReport {
        cells,
        index_range: (ilo, ihi),
        e_range: (lo, hi),
        k_max: k_max as u32,
        window,
    })
}

/// Stabilized Ȟ^•(a, q, M; n): colimit of the truncated co-Koszul stages.
#[allow(non_snake_case)]
pub fn cech_H(
    ws: &WeightedSystem,
    module: &CyclicModule,
    n: i64,
    field: PrimeField,
    params: &ColimitParams,
) -> Result<ColimitReport> {
    let sys = build_system(ws, module, n, SystemKind::Sub, params.k_max)?;
    colimit_cohomology(&sys, field, params.window, params.e_range)
}

/// Stabilized Ľ^•(a, q, M; n): colimit of the truncated quotient stages.
#[allow(non_snake_case)]
pub fn cech_L(
    ws: &WeightedSystem,
    module: &CyclicModule,
    n: i64,
    field: PrimeField,
    params: &ColimitParams,
) -> Result<ColimitReport> {
    let sys = build_system(ws, module, n, SystemKind::Quotient, params.k_max)?;
    colimit_cohomology(&sys, field, params.window, params.e_range)
}

/// Stabilized local cohomology H^•_{(a)}(M) via plain co-Koszul stages.
pub fn local_cohomology(
    a: &[Monomial],
    module: &CyclicModule,
    field: PrimeField,
    params: &ColimitParams,
) -> Result<ColimitReport> {
    let d = module.nvars();
    let q = MonomialIdeal::new(d, a.to_vec());
    let ws = WeightedSystem::new(q, a.iter().map(|m| (m.clone(), 1)).collect())?;
    let sys = build_system(&ws, module, 0, SystemKind::Plain, params.k_max)?;
    colimit_cohomology(&sys, field, params.window, params.e_range)
}

/// The ascending colon chain U_l = ((q^{n+c·l} + I) : aˡ) and its first
/// stable stage: the smallest l from which the chain holds one value for
/// `window` consecutive stages.  The chain is checked to be ascending.
pub fn saturation_power(
    module: &CyclicModule,
    q: &MonomialIdeal,
    a: &Monomial,
    c: u32,
    n: i64,
    l_max: u32,
    window: u32,
) -> Result<(MonomialIdeal, u32)> {
    if !q.is_proper_nonzero() {
        return Err(Error::InvalidParameter("q must be a proper nonzero ideal".into()));
    }
    if c < 1 {
        return Err(Error::InvalidParameter("the weight c must be ≥ 1".into()));
    }
    if n < 0 {
        return Err(Error::InvalidParameter(format!("saturation chains need n ≥ 0, got {n}")));
    }
    if window < 1 || l_max < window {
        return Err(Error::InvalidParameter(format!(
            "need 1 ≤ window ≤ l_max, got window = {window}, l_max = {l_max}"
        )));
    }
    if !q.power(i64::from(c), NegPowerConvention::Unit).contains(a) {
        return Err(Error::WeightTooLarge { element: a.to_string(), weight: c });
    }
    let relations = module.relations();
    let mut prev: Option<MonomialIdeal> = None;
    let mut run_start = 0u32;
    let mut run_len = 0u32;
    for l in 0..=l_max {
        let exponent = n + i64::from(c) * i64::from(l);
        let stage = q
            .power(exponent, NegPowerConvention::Unit)
            .sum(relations)
            .colon_monomial(&a.pow(l));
        match &prev {
            Some(p) if *p == stage => {
                run_len += 1;
            }
            Some(p) => {
                if !stage.contains_ideal(p) {
                    return Err(Error::Invariant(format!(
                        "saturation chain is not ascending at stage {l}"
                    )));
                }
                run_start = l;
                run_len = 1;
            }
            None => {
                run_start = 0;
                run_len = 1;
            }
        }
        if run_len >= window {
            return Ok((stage, run_start));
        }
        prev = Some(stage);
    }
    Err(Error::NoStabilization(format!(
        "saturation chain still moving after {l_max} stages"
    )))
}

/// One row of a [`nonv_equivalence_check`]: fullness of the saturation versus
/// vanishing of the stabilized Ľ¹ at the same n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonvRow {
    pub n: i64,
    /// Whether ((q^{n+c·l} + I) : aˡ) stabilizes at the unit ideal.
    pub full: bool,
    /// First stable stage of the saturation chain.
    pub sat_stage: u32,
    /// Whether every scanned Ľ¹ cell is stably zero.
    pub l1_zero: bool,
    /// Whether some Ľ¹ cell was still unstable.
    pub l1_unstable: bool,
}

impl NonvRow {
    pub fn agrees(&self) -> bool {
        !self.l1_unstable && self.full == self.l1_zero
    }
}

/// Report of [`nonv_equivalence_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonvReport {
    pub rows: Vec<NonvRow>,
}

impl NonvReport {
    pub fn consistent(&self) -> bool {
        self.rows.iter().all(NonvRow::agrees)
    }
}

/// For a single weighted element, compare the two sides of the vanishing
/// criterion at each n: the saturation chain reaches the unit ideal exactly
/// when the stabilized Ľ¹(a, q, M; n) vanishes.
pub fn nonv_equivalence_check(
    module: &CyclicModule,
    q: &MonomialIdeal,
    a: &Monomial,
    c: u32,
    n_list: &[i64],
    field: PrimeField,
    params: &ColimitParams,
) -> Result<NonvReport> {
    let ws = WeightedSystem::new(q.clone(), vec![(a.clone(), c)])?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let (ideal, sat_stage) =
            saturation_power(module, q, a, c, n, DEFAULT_L_MAX, DEFAULT_SAT_WINDOW)?;
        let report = cech_L(&ws, module, n, field, params)?;
        let l1_unstable = report.unstable_cells().iter().any(|&(i, _)| i == 1);
        rows.push(NonvRow {
            n,
            full: ideal.is_unit(),
            sat_stage,
            l1_zero: !l1_unstable && report.all_zero_at(1),
            l1_unstable,
        });
    }
    Ok(NonvReport { rows })
}

/// Verdict of the star-identity search for one element of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarVerdict {
    pub element: usize,
    /// The lexicographically first (l, k) for which
    /// ((q^{n+cᵢ} + Iᵢ) : aᵢ) ∩ (qˡ + Iᵢ) = qⁿ + Iᵢ holds for all
    /// n ∈ [k, k + n_span], or None when no scanned pair works.
    pub witness: Option<(u32, u32)>,
}

/// Report of [`star_check`]: one verdict per element of the system, taken
/// over the successive quotients Mᵢ = M / (a₁, …, a_{i−1})M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarReport {
    pub verdicts: Vec<StarVerdict>,
}

impl StarReport {
    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.witness.is_some())
    }
}

/// Search for star-identity witnesses: for each element aᵢ, the smallest
/// (l, k) in lexicographic order such that
/// ((q^{n+cᵢ} + Iᵢ) : aᵢ) ∩ (qˡ + Iᵢ) = qⁿ + Iᵢ for every n ∈ [k, k+n_span],
/// where Iᵢ adds the earlier elements to the relations.
pub fn star_check(
    ws: &WeightedSystem,
    module: &CyclicModule,
    n_span: u32,
    l_max: u32,
    k_max: u32,
) -> Result<StarReport> {
    if ws.is_empty() {
        return Err(Error::EmptySystem);
    }
    if k_max < 1 {
        return Err(Error::InvalidParameter("the star search needs k_max ≥ 1".into()));
    }
    let q = ws.q();
    let mut relations = module.relations().clone();
    let mut verdicts = Vec::with_capacity(ws.len());
    for (i, (a, c)) in ws.elements().iter().enumerate() {
        let mut witness = None;
        'search: for l in 0..=l_max {
            let outer = q.power(i64::from(l), NegPowerConvention::Unit).sum(&relations);
            for k in 0..=k_max {
                let mut holds = true;
                for n in i64::from(k)..=i64::from(k) + i64::from(n_span) {
                    let colon = q
                        .power(n + i64::from(*c), NegPowerConvention::Unit)
                        .sum(&relations)
                        .colon_monomial(a);
                    let lhs = colon.intersection(&outer);
                    let rhs = q.power(n, NegPowerConvention::Unit).sum(&relations);
                    if lhs != rhs {
                        holds = false;
                        break;
                    }
                }
                if holds {
                    witness = Some((l, k));
                    break 'search;
                }
            }
        }
        verdicts.push(StarVerdict { element: i, witness });
        relations = relations.sum(&MonomialIdeal::new(ws.nvars(), vec![a.clone()]));
    }
    Ok(StarReport { verdicts })
}

/// Slice dimensions of the (a)-torsion inside qⁿM, computed purely from
/// ideals: the count of degree-e monomials in (I : (a)^∞) ∩ (qⁿ + I) ∖ I for
/// 0 ≤ e ≤ e_max.  Zero entries are omitted.
#[allow(non_snake_case)]
pub fn torsion_H0(
    ws: &WeightedSystem,
    module: &CyclicModule,
    n: i64,
    e_max: i64,
) -> Result<BTreeMap<i64, u64>> {
    if ws.is_empty() {
        return Err(Error::EmptySystem);
    }
    let relations = module.relations();
    let (saturated, _) = relations.saturation(&ws.elements_ideal());
    let qn = ws.q().power(n, NegPowerConvention::Unit);
    let mut table = BTreeMap::new();
    for e in 0..=e_max.max(0) {
        let count = monomials_of_degree(ws.nvars(), e as u32)
            .into_iter()
            .filter(|m| saturated.contains(m) && qn.contains(m) && !relations.contains(m))
            .count() as u64;
        if count > 0 {
            table.insert(e, count);
        }
    }
    Ok(table)
}

/// Lengths of the Artin–Rees gaps ℓ(N/D) with N = ((a) + I) ∩ (qⁿ + I) and
/// D = (a)·q^{n−c} + I, per n in the given range.  `None` marks an infinite
/// gap.
pub fn artin_rees_gap(
    a: &Monomial,
    c: u32,
    q: &MonomialIdeal,
    module: &CyclicModule,
    n_range: (i64, i64),
) -> Result<Vec<(i64, Option<u64>)>> {
    if !q.is_proper_nonzero() {
        return Err(Error::InvalidParameter("q must be a proper nonzero ideal".into()));
    }
    if !q.power(i64::from(c), NegPowerConvention::Unit).contains(a) {
        return Err(Error::WeightTooLarge { element: a.to_string(), weight: c });
    }
    let d = module.nvars();
    let relations = module.relations();
    let principal = MonomialIdeal::new(d, vec![a.clone()]);
    let mut rows = Vec::new();
    for n in n_range.0..=n_range.1 {
        let numerator = principal
            .sum(relations)
            .intersection(&q.power(n, NegPowerConvention::Unit).sum(relations));
        let denominator = principal
            .product(&q.power(n - i64::from(c), NegPowerConvention::Unit))
            .sum(relations);
        if !numerator.contains_ideal(&denominator) {
            return Err(Error::Invariant(format!(
                "Artin–Rees numerator fails to contain the denominator at n = {n}"
            )));
        }
        let gap = match numerator.quotient_length(&denominator) {
            Ok(len) => Some(len),
            Err(Error::NotFiniteLength(_)) => None,
            Err(e) => return Err(e),
        };
        rows.push((n, gap));
    }
    Ok(rows)
}

/// Report of [`radical_invariance_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalReport {
    /// Cells stable in both reports with different dimensions: (i, e, dim_a, dim_b).
    pub mismatches: Vec<(i64, i64, u64, u64)>,
    /// Cells stable in exactly one report.
    pub one_sided: Vec<(i64, i64)>,
    /// Cells unstable in both reports.
    pub both_unstable: Vec<(i64, i64)>,
    /// Number of cells stable in both reports.
    pub compared: usize,
    /// No stable-versus-stable mismatch was found.
    pub ok: bool,
}

/// Compare the stabilized Ľ of two systems whose element ideals share a
/// radical; cells outside a report's index range count as stably zero.
pub fn radical_invariance_check(
    ws_a: &WeightedSystem,
    ws_b: &WeightedSystem,
    module: &CyclicModule,
    n: i64,
    field: PrimeField,
    params: &ColimitParams,
) -> Result<RadicalReport> {
    if ws_a.elements_ideal().radical() != ws_b.elements_ideal().radical() {
        return Err(Error::RadicalMismatch);
    }
    let k_max = i64::from(params.k_max);
    let e_range = params
        .e_range
        .unwrap_or((-2 * k_max, n + ws_a.degree_sum().max(ws_b.degree_sum())));
    let shared = ColimitParams { e_range: Some(e_range), ..*params };
    let rep_a = cech_L(ws_a, module, n, field, &shared)?;
    let rep_b = cech_L(ws_b, module, n, field, &shared)?;

    let (ilo, ihi) = (
        rep_a.index_range().0.min(rep_b.index_range().0),
        rep_a.index_range().1.max(rep_b.index_range().1),
    );
    let stable_zero = ColimitEntry::Stable { dim: 0, first_stable_stage: 1 };
    let mut mismatches = Vec::new();
    let mut one_sided = Vec::new();
    let mut both_unstable = Vec::new();
    let mut compared = 0;
    for i in ilo..=ihi {
        for e in e_range.0..=e_range.1 {
            let a = rep_a.get(i, e).copied().unwrap_or(stable_zero);
            let b = rep_b.get(i, e).copied().unwrap_or(stable_zero);
            match (a, b) {
                (ColimitEntry::Stable { dim: da, .. }, ColimitEntry::Stable { dim: db, .. }) => {
                    compared += 1;
                    if da != db {
                        mismatches.push((i, e, da, db));
                    }
                }
                (ColimitEntry::Unstable, ColimitEntry::Unstable) => both_unstable.push((i, e)),
                _ => one_sided.push((i, e)),
            }
        }
    }
    let ok = mismatches.is_empty();
    Ok(RadicalReport { mismatches, one_sided, both_unstable, compared, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::default_var_names;
    use crate::parse::parse_ideal;

    fn field() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    fn var(d: usize, i: usize, e: u32) -> Monomial {
        Monomial::var(d, i).pow(e)
    }

    fn params(e_lo: i64, e_hi: i64) -> ColimitParams {
        ColimitParams { e_range: Some((e_lo, e_hi)), ..ColimitParams::default() }
    }

    #[test]
    fn local_cohomology_of_the_plane_lives_in_top_degree() {
        let free = CyclicModule::free(2);
        let a = vec![var(2, 0, 1), var(2, 1, 1)];
        let report = local_cohomology(&a, &free, field(), &params(-5, 1)).unwrap();

        assert!(report.is_stable());
        assert!(report.all_zero_at(0));
        assert!(report.all_zero_at(1));
        for e in -5..=1 {
            let expected = (-e - 1).max(0) as u64;
            assert_eq!(report.stable_dim(2, e), Some(expected), "H² at degree {e}");
        }
    }

    #[test]
    fn torsion_module_concentrates_in_cohomological_degree_zero() {
        let names = default_var_names(2);
        let module = CyclicModule::new(parse_ideal("[x]", &names).unwrap());
        let a = vec![var(2, 0, 1)];
        let report = local_cohomology(&a, &module, field(), &params(-2, 3)).unwrap();

        assert!(report.is_stable());
        assert!(report.all_zero_at(1));
        for e in 0..=3 {
            assert_eq!(report.stable_dim(0, e), Some(1), "H⁰ at degree {e}");
        }
        assert_eq!(report.stable_dim(0, -1), Some(0));
    }

    #[test]
    fn quotient_truncation_splits_full_from_proper_saturation() {
        // Fully saturating: M = R/(x³), a = x — Ľ¹ vanishes everywhere.
        let names = default_var_names(1);
        let module = CyclicModule::new(parse_ideal("[x^3]", &names).unwrap());
        let q = parse_ideal("[x]", &names).unwrap();
        let ws = WeightedSystem::new(q.clone(), vec![(var(1, 0, 1), 1)]).unwrap();
        let report = cech_L(&ws, &module, 1, field(), &params(-4, 3)).unwrap();
        assert!(report.is_stable());
        assert!(report.all_zero_at(1));

        // Properly saturating: M = R, a = x² of weight 2 — Ľ¹ survives below 0.
        let free = CyclicModule::free(1);
        let ws = WeightedSystem::new(q, vec![(var(1, 0, 2), 2)]).unwrap();
        let report = cech_L(&ws, &free, 1, field(), &params(-4, 3)).unwrap();
        assert!(report.is_stable());
        assert_eq!(report.stable_dim(1, -1), Some(1));
        assert_eq!(report.stable_dim(1, -2), Some(1));
        assert_eq!(report.stable_dim(1, 0), Some(0));
        assert!(!report.nonzero().is_empty());
    }

    #[test]
    fn saturation_chains_pause_and_then_jump() {
        let names = default_var_names(1);
        let x = var(1, 0, 1);

        // M = R/(x³): the chain sits at (x) for three stages, then jumps to (1).
        let module = CyclicModule::new(parse_ideal("[x^3]", &names).unwrap());
        let q = parse_ideal("[x]", &names).unwrap();
        let (ideal, stage) = saturation_power(&module, &q, &x, 1, 1, 24, 6).unwrap();
        assert!(ideal.is_unit());
        assert_eq!(stage, 3);

        // M = R, a = x² of weight 2: the chain is (x) from the start.
        let free = CyclicModule::free(1);
        let (ideal, stage) = saturation_power(&free, &q, &x.pow(2), 2, 1, 24, 6).unwrap();
        assert_eq!(ideal, parse_ideal("[x]", &names).unwrap());
        assert_eq!(stage, 0);

        // n = 0 collapses the chain to the unit ideal immediately.
        let (ideal, stage) = saturation_power(&free, &q, &x, 1, 0, 24, 6).unwrap();
        assert!(ideal.is_unit());
        assert_eq!(stage, 0);
    }

    #[test]
    fn vanishing_criterion_agrees_with_saturation_fullness() {
        let names = default_var_names(1);
        let q = parse_ideal("[x]", &names).unwrap();
        let x = var(1, 0, 1);
        let p = params(-4, 4);

        let module = CyclicModule::new(parse_ideal("[x^3]", &names).unwrap());
        let report =
            nonv_equivalence_check(&module, &q, &x, 1, &[1, 2, 3], field(), &p).unwrap();
        assert!(report.consistent());
        assert!(report.rows.iter().all(|r| r.full && r.l1_zero));

        let free = CyclicModule::free(1);
        let report =
            nonv_equivalence_check(&free, &q, &x.pow(2), 2, &[1, 2, 3], field(), &p).unwrap();
        assert!(report.consistent());
        assert!(report.rows.iter().all(|r| !r.full && !r.l1_zero));
    }

    #[test]
    fn star_witnesses_move_past_failing_intersections() {
        let names = default_var_names(2);
        let m = MonomialIdeal::maximal(2);
        let free = CyclicModule::free(2);

        // A parameter pair on R: the identity already holds with l = 0 and
        // from n = 0 on (both sides degenerate to the unit ideal there).
        let ws = WeightedSystem::new(m.clone(), vec![(var(2, 0, 1), 1), (var(2, 1, 1), 1)])
            .unwrap();
        let report = star_check(&ws, &free, 4, 4, 4).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.verdicts[0].witness, Some((0, 0)));

        // Torsion in M = R/(x², xy) pushes the witness for a = y out to
        // l = 2 (the torsion monomial x must be cut away) and k = 2 (at
        // n = 1 the colon swallows all of m).
        let module =
            CyclicModule::new(parse_ideal("[x^2, x*y]", &names).unwrap());
        let ws = WeightedSystem::new(m.clone(), vec![(var(2, 1, 1), 1)]).unwrap();
        let report = star_check(&ws, &module, 4, 4, 4).unwrap();
        assert_eq!(report.verdicts[0].witness, Some((2, 2)));

        // The zerodivisor a = x on the same module admits no witness at all.
        let ws = WeightedSystem::new(m, vec![(var(2, 0, 1), 1)]).unwrap();
        let report = star_check(&ws, &module, 4, 4, 4).unwrap();
        assert_eq!(report.verdicts[0].witness, None);
        assert!(!report.all_hold());
    }

    #[test]
    fn torsion_slices_count_the_saturation_between_truncations() {
        let names = default_var_names(2);
        let module =
            CyclicModule::new(parse_ideal("[x^2, x*y]", &names).unwrap());
        let ws = WeightedSystem::new(MonomialIdeal::maximal(2), vec![(var(2, 1, 1), 1)]).unwrap();

        // The torsion of M at (y) is spanned by x, which sits in m¹ ∖ m².
        let table = torsion_H0(&ws, &module, 1, 6).unwrap();
        assert_eq!(table, BTreeMap::from([(1, 1)]));
        let table = torsion_H0(&ws, &module, 2, 6).unwrap();
        assert!(table.is_empty());

        // A free module has no torsion at all.
        let free = CyclicModule::free(2);
        let table = torsion_H0(&ws, &free, 1, 6).unwrap();
        assert!(table.is_empty());
    }

    #[test]
    fn artin_rees_gaps_vanish_for_principal_monomial_data() {
        let free = CyclicModule::free(2);
        let m = MonomialIdeal::maximal(2);
        let rows = artin_rees_gap(&var(2, 0, 2), 2, &m, &free, (0, 8)).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows.iter().all(|&(_, gap)| gap == Some(0)));

        let names = default_var_names(2);
        let module =
            CyclicModule::new(parse_ideal("[x^2, x*y]", &names).unwrap());
        let rows = artin_rees_gap(&var(2, 1, 1), 1, &m, &module, (0, 6)).unwrap();
        assert!(rows.iter().all(|&(_, gap)| gap == Some(0)));
    }

    #[test]
    fn radically_equal_systems_share_their_quotient_cohomology() {
        let free = CyclicModule::free(2);
        let m = MonomialIdeal::maximal(2);
        let ws_a = WeightedSystem::new(m.clone(), vec![(var(2, 0, 1), 1), (var(2, 1, 1), 1)])
            .unwrap();
        let ws_b = WeightedSystem::new(m.clone(), vec![(var(2, 0, 2), 2), (var(2, 1, 3), 3)])
            .unwrap();
        let p = params(-4, 4);
        let report = radical_invariance_check(&ws_a, &ws_b, &free, 2, field(), &p).unwrap();
        assert!(report.ok);
        assert!(report.compared > 0);

        // Systems with different radicals are rejected outright.
        let names = default_var_names(2);
        let q = parse_ideal("[x]", &names).unwrap();
        let ws_c = WeightedSystem::new(q, vec![(var(2, 0, 1), 1)]).unwrap();
        let err = radical_invariance_check(&ws_a, &ws_c, &free, 2, field(), &p).unwrap_err();
        assert!(matches!(err, Error::RadicalMismatch));
    }

    #[test]
    fn direct_systems_validate_their_stage_counts() {
        let free = CyclicModule::free(2);
        let ws = WeightedSystem::new(
            MonomialIdeal::maximal(2),
            vec![(var(2, 0, 1), 1), (var(2, 1, 1), 1)],
        )
        .unwrap();
        assert!(matches!(
            build_system(&ws, &free, 1, SystemKind::Sub, 1),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            build_system(&ws, &free, -1, SystemKind::Sub, 4),
            Err(Error::InvalidParameter(_))
        ));
        let sys = build_system(&ws, &free, 1, SystemKind::Sub, 4).unwrap();
        assert_eq!(sys.stages().len(), 4);
    }
}
