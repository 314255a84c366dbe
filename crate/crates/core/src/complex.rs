//! Graded complexes of monomial-ideal slots and their slice-wise homology.
//!
//! A complex here is a finite diagram of modules J·M (or M/J·M when the
//! quotient flag is set) indexed by subsets of an element list, with
//! differential entries "multiply by a monomial, with a sign".  Every map is
//! homogeneous once each slot is given an integer shift: an element of
//! poly-degree p in a slot with shift s has internal degree p + s in a chain
//! complex and p - s in a cochain complex.  Homology therefore splits into
//! finite slices, one per internal degree, and each slice is plain linear
//! algebra over F_p.

use std::collections::BTreeMap;
use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{PrimeField, SparseMatrix};
use crate::monomial::{CyclicModule, Monomial, MonomialIdeal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Differentials lower the index: d_i : C_i → C_{i-1}.
    Chain,
    /// Differentials raise the index: d^i : C^i → C^{i+1}.
    Cochain,
}

/// One summand of a complex term: the module J·M (or M/J·M), tagged by the
/// subset of element indices it came from and its internal-degree shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    /// Strictly increasing element indices (empty for the base slot).
    pub label: Vec<usize>,
    /// The coefficient ideal J.
    pub coeff: MonomialIdeal,
    /// Internal degree offset of the slot.
    pub shift: i64,
}

/// A differential entry: the map from the source slot to the target slot is
/// `sign · (multiply by mult)`.  Slots are addressed by label, which is
/// unique within an index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffEntry {
    /// Homological index of the source slot.
    pub index: i64,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub sign: i8,
    pub mult: Monomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexSpec {
    orientation: Orientation,
    module: CyclicModule,
    quotient: bool,
    components: BTreeMap<i64, Vec<Slot>>,
    diffs: Vec<DiffEntry>,
}

/// Degree window for homology scans: slices are computed for internal degrees
/// up to `e_max`, and a table counts as stable when the last `window` slices
/// of every index are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeCap {
    pub e_max: i64,
    pub window: u32,
}

/// Basis of one slice of one complex term, kept per slot so that offsets into
/// the concatenated basis are reproducible.
#[derive(Debug, Clone)]
pub struct SliceBasis {
    pub per_slot: Vec<Vec<Monomial>>,
    pub offsets: Vec<usize>,
    pub dim: usize,
}

impl SliceBasis {
    fn empty() -> Self {
        SliceBasis { per_slot: vec![], offsets: vec![], dim: 0 }
    }
}

impl ComplexSpec {
    pub fn new(
        orientation: Orientation,
        module: CyclicModule,
        quotient: bool,
        components: BTreeMap<i64, Vec<Slot>>,
        diffs: Vec<DiffEntry>,
    ) -> Result<Self> {
        let mut spec = ComplexSpec { orientation, module, quotient, components, diffs };
        spec.canonicalize();
        spec.validate()?;
        Ok(spec)
    }

    fn canonicalize(&mut self) {
        for slots in self.components.values_mut() {
            slots.sort_by(|a, b| a.label.cmp(&b.label));
        }
        self.diffs.sort_by(|a, b| {
            (a.index, &a.src, &a.tgt).cmp(&(b.index, &b.src, &b.tgt))
        });
    }

    fn validate(&self) -> Result<()> {
        let d = self.module.nvars();
        for (i, slots) in &self.components {
            for pair in slots.windows(2) {
                if pair[0].label == pair[1].label {
                    return Err(Error::ShapeMismatch(format!(
                        "duplicate slot label {:?} at index {i}",
                        pair[0].label
                    )));
                }
            }
            for slot in slots {
                if slot.coeff.nvars() != d {
                    return Err(Error::ShapeMismatch(
                        "slot coefficient arity differs from module".into(),
                    ));
                }
                if slot.label.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::ShapeMismatch(format!(
                        "label {:?} is not strictly increasing",
                        slot.label
                    )));
                }
            }
        }
        for entry in &self.diffs {
            if entry.sign != 1 && entry.sign != -1 {
                return Err(Error::ShapeMismatch(format!("sign {} not ±1", entry.sign)));
            }
            if entry.mult.nvars() != d {
                return Err(Error::ShapeMismatch("multiplier arity mismatch".into()));
            }
            let tgt_index = match self.orientation {
                Orientation::Chain => entry.index - 1,
                Orientation::Cochain => entry.index + 1,
            };
            let src = self
                .slot(entry.index, &entry.src)
                .ok_or_else(|| Error::ShapeMismatch(format!(
                    "missing source slot {:?} at index {}",
                    entry.src, entry.index
                )))?;
            let tgt = self
                .slot(tgt_index, &entry.tgt)
                .ok_or_else(|| Error::ShapeMismatch(format!(
                    "missing target slot {:?} at index {tgt_index}",
                    entry.tgt
                )))?;
            // Internal degree preservation pins the multiplier degree to the
            // shift difference.
            let expected = match self.orientation {
                Orientation::Chain => src.shift - tgt.shift,
                Orientation::Cochain => tgt.shift - src.shift,
            };
            if i64::from(entry.mult.degree()) != expected {
                return Err(Error::ShapeMismatch(format!(
                    "multiplier {} has degree {}, shifts demand {expected}",
                    entry.mult,
                    entry.mult.degree()
                )));
            }
        }
        Ok(())
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn module(&self) -> &CyclicModule {
        &self.module
    }

    pub fn is_quotient(&self) -> bool {
        self.quotient
    }

    pub fn index_range(&self) -> (i64, i64) {
        let lo = self.components.keys().next().copied().unwrap_or(0);
        let hi = self.components.keys().next_back().copied().unwrap_or(0);
        (lo, hi)
    }

    pub fn slots(&self, index: i64) -> &[Slot] {
        self.components.get(&index).map_or(&[], |v| v.as_slice())
    }

    pub fn diffs(&self) -> &[DiffEntry] {
        &self.diffs
    }

    fn slot(&self, index: i64, label: &[usize]) -> Option<&Slot> {
        self.slots(index).iter().find(|s| s.label == label)
    }

    /// Smallest internal degree at which any slot can have a basis element.
    pub fn min_internal_degree(&self) -> i64 {
        self.components
            .values()
            .flatten()
            .map(|s| match self.orientation {
                Orientation::Chain => s.shift,
                Orientation::Cochain => -s.shift,
            })
            .min()
            .unwrap_or(0)
    }

    fn slot_poly_degree(&self, slot: &Slot, e: i64) -> Option<u32> {
        let p = match self.orientation {
            Orientation::Chain => e - slot.shift,
            Orientation::Cochain => e + slot.shift,
        };
        (0..=i64::from(u32::MAX)).contains(&p).then_some(p as u32)
    }

    fn slot_basis(&self, slot: &Slot, e: i64) -> Vec<Monomial> {
        let Some(p) = self.slot_poly_degree(slot, e) else {
            return vec![];
        };
        let relations = self.module.relations();
        crate::monomial::monomials_of_degree(self.module.nvars(), p)
            .into_iter()
            .filter(|m| {
                if self.quotient {
                    !relations.contains(m) && !slot.coeff.contains(m)
                } else {
                    slot.coeff.contains(m) && !relations.contains(m)
                }
            })
            .collect()
    }

    /// Basis of the degree-e slice of the index-i term, slot by slot.
    pub fn slice(&self, index: i64, e: i64) -> SliceBasis {
        let Some(slots) = self.components.get(&index) else {
            return SliceBasis::empty();
        };
        let per_slot: Vec<Vec<Monomial>> = slots.iter().map(|s| self.slot_basis(s, e)).collect();
        let mut offsets = Vec::with_capacity(per_slot.len());
        let mut dim = 0;
        for b in &per_slot {
            offsets.push(dim);
            dim += b.len();
        }
        SliceBasis { per_slot, offsets, dim }
    }

    /// Whether a product monomial dies in the stated slot: it is zero in M,
    /// or (for quotient slots) it falls into the coefficient ideal.
    fn vanishes_in(&self, slot: &Slot, w: &Monomial) -> Result<bool> {
        if self.module.relations().contains(w) {
            return Ok(true);
        }
        if self.quotient {
            Ok(slot.coeff.contains(w))
        } else if slot.coeff.contains(w) {
            Ok(false)
        } else {
            Err(Error::Invariant(format!(
                "image {w} escapes the target coefficient ideal {}",
                slot.coeff
            )))
        }
    }

    /// Matrix of the differential leaving index i in the degree-e slice
    /// (chain: d_i into index i-1; cochain: d^i into index i+1).
    pub fn differential_matrix(&self, field: PrimeField, index: i64, e: i64) -> Result<SparseMatrix> {
        let tgt_index = match self.orientation {
            Orientation::Chain => index - 1,
            Orientation::Cochain => index + 1,
        };
        let src = self.slice(index, e);
        let tgt = self.slice(tgt_index, e);
        let src_slots = self.slots(index);
        let tgt_slots = self.slots(tgt_index);
        let tgt_pos: HashMap<&[usize], usize> = tgt_slots
            .iter()
            .enumerate()
            .map(|(k, s)| (s.label.as_slice(), k))
            .collect();
        let tgt_lookup: Vec<HashMap<&Monomial, usize>> = tgt
            .per_slot
            .iter()
            .map(|b| b.iter().enumerate().map(|(k, m)| (m, k)).collect())
            .collect();
        let src_pos: HashMap<&[usize], usize> = src_slots
            .iter()
            .enumerate()
            .map(|(k, s)| (s.label.as_slice(), k))
            .collect();

        let mut triplets = Vec::new();
        for entry in self.diffs.iter().filter(|en| en.index == index) {
            let (Some(&sp), Some(&tp)) = (
                src_pos.get(entry.src.as_slice()),
                tgt_pos.get(entry.tgt.as_slice()),
            ) else {
                continue;
            };
            let tgt_slot = &tgt_slots[tp];
            for (j, m) in src.per_slot[sp].iter().enumerate() {
                let w = m.mul(&entry.mult);
                if self.vanishes_in(tgt_slot, &w)? {
                    continue;
                }
                let Some(&k) = tgt_lookup[tp].get(&w) else {
                    return Err(Error::Invariant(format!(
                        "image {w} missing from target slice basis"
                    )));
                };
                triplets.push((tgt.offsets[tp] + k, src.offsets[sp] + j, i64::from(entry.sign)));
            }
        }
        SparseMatrix::from_triplets(field, tgt.dim, src.dim, &triplets)
    }

    /// Matrix of multiplication by b from slice (i, e) to slice (i, e + deg b).
    pub fn multiplication_matrix(
        &self,
        field: PrimeField,
        index: i64,
        e: i64,
        b: &Monomial,
    ) -> Result<SparseMatrix> {
        let src = self.slice(index, e);
        let tgt = self.slice(index, e + i64::from(b.degree()));
        let slots = self.slots(index);
        let mut triplets = Vec::new();
        for (sp, slot) in slots.iter().enumerate() {
            let lookup: HashMap<&Monomial, usize> = tgt.per_slot[sp]
                .iter()
                .enumerate()
                .map(|(k, m)| (m, k))
                .collect();
            for (j, m) in src.per_slot[sp].iter().enumerate() {
                let w = m.mul(b);
                if self.vanishes_in(slot, &w)? {
                    continue;
                }
                let Some(&k) = lookup.get(&w) else {
                    return Err(Error::Invariant(format!(
                        "product {w} missing from shifted slice basis"
                    )));
                };
                triplets.push((tgt.offsets[sp] + k, src.offsets[sp] + j, 1));
            }
        }
        SparseMatrix::from_triplets(field, tgt.dim, src.dim, &triplets)
    }

    /// All differential matrices of one slice, keyed by index, with the
    /// composite-vanishing check d∘d = 0 applied.
    fn slice_matrices(&self, field: PrimeField, e: i64) -> Result<BTreeMap<i64, SparseMatrix>> {
        let (lo, hi) = self.index_range();
        let mut mats = BTreeMap::new();
        for i in lo..=hi {
            mats.insert(i, self.differential_matrix(field, i, e)?);
        }
        for i in lo..=hi {
            let next = i + 1;
            if next > hi {
                continue;
            }
            // Chain: d_i ∘ d_{i+1}; cochain: d^{i+1} ∘ d^i.
            let prod = match self.orientation {
                Orientation::Chain => mats[&i].mul(&mats[&next])?,
                Orientation::Cochain => mats[&next].mul(&mats[&i])?,
            };
            if !prod.is_zero() {
                return Err(Error::Invariant(format!(
                    "d∘d ≠ 0 between indices {i} and {next} in degree {e}"
                )));
            }
        }
        Ok(mats)
    }

    /// Homology dimensions of every slice with internal degree up to
    /// `cap.e_max`, computed independently per degree.
    pub fn homology_dims(&self, field: PrimeField, cap: DegreeCap) -> Result<HomologyTable> {
        let e_min = self.min_internal_degree();
        let (lo, hi) = self.index_range();
        let degrees: Vec<i64> = (e_min..=cap.e_max).collect();
        let per_degree: Vec<Result<Vec<((i64, i64), u64)>>> = degrees
            .par_iter()
            .map(|&e| {
                let mats = self.slice_matrices(field, e)?;
                let mut out = Vec::new();
                for i in lo..=hi {
                    let outgoing = &mats[&i];
                    let incoming = match self.orientation {
                        Orientation::Chain => mats.get(&(i + 1)),
                        Orientation::Cochain => mats.get(&(i - 1)),
                    };
                    let cycles = outgoing.kernel_dim();
                    let boundaries = incoming.map_or(0, |m| m.rank());
                    if boundaries > cycles {
                        return Err(Error::Invariant(format!(
                            "boundary rank exceeds cycle dimension at ({i}, {e})"
                        )));
                    }
                    let dim = (cycles - boundaries) as u64;
                    if dim > 0 {
                        out.push(((i, e), dim));
                    }
                }
                Ok(out)
            })
            .collect();
        let mut dims = BTreeMap::new();
        for chunk in per_degree {
            for (key, dim) in chunk? {
                dims.insert(key, dim);
            }
        }
        Ok(HomologyTable::assemble(dims, (lo, hi), (e_min, cap.e_max), cap.window))
    }

    /// Alternating sum of termwise lengths; every slot module must have
    /// finite length.
    pub fn euler_by_terms(&self) -> Result<i64> {
        let rel = self.module.relations();
        let mut chi = 0i64;
        for (&i, slots) in &self.components {
            for slot in slots {
                let len = if self.quotient {
                    rel.sum(&slot.coeff).artinian_length().map_err(|_| {
                        Error::NotFiniteLength(format!(
                            "quotient slot {:?} at index {i}",
                            slot.label
                        ))
                    })?
                } else {
                    slot.coeff.quotient_length(rel).map_err(|_| {
                        Error::NotFiniteLength(format!("slot {:?} at index {i}", slot.label))
                    })?
                };
                chi += if i.rem_euclid(2) == 0 { len as i64 } else { -(len as i64) };
            }
        }
        Ok(chi)
    }

    /// Verify that multiplication by b sends every cycle to a boundary in all
    /// scanned slices.
    pub fn annihilation_check(
        &self,
        field: PrimeField,
        b: &Monomial,
        cap: DegreeCap,
    ) -> Result<AnnihilationReport> {
        let e_min = self.min_internal_degree();
        let (lo, hi) = self.index_range();
        let db = i64::from(b.degree());
        let degrees: Vec<i64> = (e_min..=cap.e_max - db).collect();
        let per_degree: Vec<Result<Vec<(i64, i64)>>> = degrees
            .par_iter()
            .map(|&e| {
                let mut violations = Vec::new();
                for i in lo..=hi {
                    let outgoing = self.differential_matrix(field, i, e)?;
                    let kernel = outgoing.kernel_basis();
                    if kernel.is_empty() {
                        continue;
                    }
                    let mult = self.multiplication_matrix(field, i, e, b)?;
                    let cycles = SparseMatrix::from_dense_columns(field, mult.cols(), &kernel);
                    let moved = mult.mul(&cycles)?;
                    let incoming_index = match self.orientation {
                        Orientation::Chain => i + 1,
                        Orientation::Cochain => i - 1,
                    };
                    let incoming = if (lo..=hi).contains(&incoming_index) {
                        self.differential_matrix_into(field, i, e + db, incoming_index)?
                    } else {
                        SparseMatrix::zero(field, moved.rows(), 0)
                    };
                    if incoming.augment(&moved)?.rank() != incoming.rank() {
                        violations.push((i, e));
                    }
                }
                Ok(violations)
            })
            .collect();
        let mut violations = Vec::new();
        for chunk in per_degree {
            violations.extend(chunk?);
        }
        violations.sort_unstable();
        Ok(AnnihilationReport { ok: violations.is_empty(), violations })
    }

    /// The differential arriving at index `into` in degree e, i.e. the map
    /// leaving `from_index`.
    fn differential_matrix_into(
        &self,
        field: PrimeField,
        into: i64,
        e: i64,
        from_index: i64,
    ) -> Result<SparseMatrix> {
        debug_assert_eq!(
            match self.orientation {
                Orientation::Chain => from_index - 1,
                Orientation::Cochain => from_index + 1,
            },
            into
        );
        self.differential_matrix(field, from_index, e)
    }
}

/// Slice-wise homology dimensions keyed by (index, internal degree); zero
/// entries are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyTable {
    dims: BTreeMap<(i64, i64), u64>,
    index_range: (i64, i64),
    e_range: (i64, i64),
    window: u32,
    stable: bool,
}

impl HomologyTable {
    fn assemble(
        dims: BTreeMap<(i64, i64), u64>,
        index_range: (i64, i64),
        e_range: (i64, i64),
        window: u32,
    ) -> Self {
        let tail_start = e_range.1 - i64::from(window) + 1;
        let stable = tail_start > e_range.0
            && dims.keys().all(|&(_, e)| e < tail_start);
        HomologyTable { dims, index_range, e_range, window, stable }
    }

    pub fn dims(&self) -> &BTreeMap<(i64, i64), u64> {
        &self.dims
    }

    pub fn dim(&self, index: i64, e: i64) -> u64 {
        self.dims.get(&(index, e)).copied().unwrap_or(0)
    }

    pub fn index_range(&self) -> (i64, i64) {
        self.index_range
    }

    pub fn e_range(&self) -> (i64, i64) {
        self.e_range
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn is_stable(&self) -> bool {
        self.stable
    }

    /// Total length of the homology at one index.  Only meaningful when the
    /// trailing window of slices is zero.
    pub fn total_length(&self, index: i64) -> Result<u64> {
        if !self.stable {
            return Err(Error::Unstable(format!(
                "nonzero slice within the trailing window (e ≤ {})",
                self.e_range.1
            )));
        }
        Ok(self
            .dims
            .iter()
            .filter(|((i, _), _)| *i == index)
            .map(|(_, &d)| d)
            .sum())
    }

    /// Alternating sum of total lengths over the index range.
    pub fn euler_characteristic(&self) -> Result<i64> {
        let (lo, hi) = self.index_range;
        let mut chi = 0i64;
        for i in lo..=hi {
            let len = self.total_length(i)? as i64;
            chi += if i.rem_euclid(2) == 0 { len } else { -len };
        }
        Ok(chi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnihilationReport {
    pub ok: bool,
    pub violations: Vec<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SesReport {
    pub termwise_ok: bool,
    /// (index, degree, dim sub, dim mid, dim quot) for every failing slice.
    pub violations: Vec<(i64, i64, usize, usize, usize)>,
    /// (χ sub, χ mid, χ quot) when all three homology tables were stable.
    pub chis: Option<(i64, i64, i64)>,
    pub euler_ok: Option<bool>,
}

/// Check slice-wise termwise additivity dim(sub) + dim(quot) = dim(mid), and
/// the Euler identity χ(mid) = χ(sub) + χ(quot) when all three complexes have
/// stable homology tables.
pub fn ses_check(
    sub: &ComplexSpec,
    mid: &ComplexSpec,
    quot: &ComplexSpec,
    field: PrimeField,
    cap: DegreeCap,
) -> Result<SesReport> {
    if sub.orientation() != mid.orientation() || quot.orientation() != mid.orientation() {
        return Err(Error::ShapeMismatch("orientations differ".into()));
    }
    if sub.index_range() != mid.index_range() || quot.index_range() != mid.index_range() {
        return Err(Error::ShapeMismatch("index ranges differ".into()));
    }
    let (lo, hi) = mid.index_range();
    for i in lo..=hi {
        let labels = |c: &ComplexSpec| -> Vec<(Vec<usize>, i64)> {
            c.slots(i).iter().map(|s| (s.label.clone(), s.shift)).collect()
        };
        if labels(sub) != labels(mid) || labels(quot) != labels(mid) {
            return Err(Error::ShapeMismatch(format!(
                "slot labels or shifts differ at index {i}"
            )));
        }
    }
    let e_min = mid.min_internal_degree().min(sub.min_internal_degree()).min(quot.min_internal_degree());
    let mut violations = Vec::new();
    for e in e_min..=cap.e_max {
        for i in lo..=hi {
            let ds = sub.slice(i, e).dim;
            let dm = mid.slice(i, e).dim;
            let dq = quot.slice(i, e).dim;
            if ds + dq != dm {
                violations.push((i, e, ds, dm, dq));
            }
        }
    }
    let chis = {
        let ts = sub.homology_dims(field, cap)?;
        let tm = mid.homology_dims(field, cap)?;
        let tq = quot.homology_dims(field, cap)?;
        match (
            ts.euler_characteristic(),
            tm.euler_characteristic(),
            tq.euler_characteristic(),
        ) {
            (Ok(a), Ok(b), Ok(c)) => Some((a, b, c)),
            _ => None,
        }
    };
    let euler_ok = chis.map(|(s, m, q)| m == s + q);
    Ok(SesReport { termwise_ok: violations.is_empty(), violations, chis, euler_ok })
}

/// Mapping cone of multiplication by b between two structurally aligned
/// complexes (same labels and shifts; coefficients may differ).
///
/// Chain: cone_i = from_{i-1} ⊕ to_i with ∂(x, y) = (dx, dy + (-1)^{i-1} b·x).
/// Cochain: cone^i = from^i ⊕ to^{i-1} with ∂(x, y) = (dx, (-1)^i b·x + dy).
/// The slots of the doubled-up complex acquire the next free element index
/// and their shift grows by deg b, which reproduces the complex of the
/// extended element list exactly.
pub fn mapping_cone(b: &Monomial, from: &ComplexSpec, to: &ComplexSpec) -> Result<ComplexSpec> {
    if from.orientation() != to.orientation() {
        return Err(Error::ShapeMismatch("orientations differ".into()));
    }
    if from.module() != to.module() || from.is_quotient() != to.is_quotient() {
        return Err(Error::ShapeMismatch("modules or quotient flags differ".into()));
    }
    if from.index_range() != to.index_range() {
        return Err(Error::ShapeMismatch("index ranges differ".into()));
    }
    let (lo, hi) = to.index_range();
    for i in lo..=hi {
        let keys = |c: &ComplexSpec| -> Vec<(Vec<usize>, i64)> {
            c.slots(i).iter().map(|s| (s.label.clone(), s.shift)).collect()
        };
        if keys(from) != keys(to) {
            return Err(Error::ShapeMismatch(format!(
                "slot labels or shifts differ at index {i}"
            )));
        }
    }
    let fresh = to
        .components
        .values()
        .flatten()
        .flat_map(|s| s.label.iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    let db = i64::from(b.degree());
    let relabel = |s: &Slot| -> Slot {
        let mut label = s.label.clone();
        label.push(fresh);
        Slot { label, coeff: s.coeff.clone(), shift: s.shift + db }
    };

    let mut components: BTreeMap<i64, Vec<Slot>> = BTreeMap::new();
    let mut diffs: Vec<DiffEntry> = Vec::new();
    let parity = |k: i64| -> i8 {
        if k.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    };
    match to.orientation() {
        Orientation::Chain => {
            for i in lo..=hi + 1 {
                let mut slots: Vec<Slot> = to.slots(i).to_vec();
                slots.extend(from.slots(i - 1).iter().map(relabel));
                components.insert(i, slots);
            }
            diffs.extend(to.diffs().iter().cloned());
            for en in from.diffs() {
                let mut src = en.src.clone();
                src.push(fresh);
                let mut tgt = en.tgt.clone();
                tgt.push(fresh);
                diffs.push(DiffEntry { index: en.index + 1, src, tgt, sign: en.sign, mult: en.mult.clone() });
            }
            for i in lo..=hi + 1 {
                for slot in from.slots(i - 1) {
                    let mut src = slot.label.clone();
                    src.push(fresh);
                    diffs.push(DiffEntry {
                        index: i,
                        src,
                        tgt: slot.label.clone(),
                        sign: parity(i - 1),
                        mult: b.clone(),
                    });
                }
            }
        }
        Orientation::Cochain => {
            for i in lo..=hi + 1 {
                let mut slots: Vec<Slot> = from.slots(i).to_vec();
                slots.extend(to.slots(i - 1).iter().map(relabel));
                components.insert(i, slots);
            }
            diffs.extend(from.diffs().iter().cloned());
            for en in to.diffs() {
                let mut src = en.src.clone();
                src.push(fresh);
                let mut tgt = en.tgt.clone();
                tgt.push(fresh);
                diffs.push(DiffEntry { index: en.index + 1, src, tgt, sign: en.sign, mult: en.mult.clone() });
            }
            for i in lo..=hi {
                for slot in from.slots(i) {
                    let mut tgt = slot.label.clone();
                    tgt.push(fresh);
                    diffs.push(DiffEntry {
                        index: i,
                        src: slot.label.clone(),
                        tgt,
                        sign: parity(i),
                        mult: b.clone(),
                    });
                }
            }
        }
    }
    ComplexSpec::new(to.orientation(), to.module().clone(), to.is_quotient(), components, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    /// Hand-built two-term chain complex R --b--> R over M = R/I.
    fn two_term(module: CyclicModule, b: Monomial) -> ComplexSpec {
        let d = module.nvars();
        let mut components = BTreeMap::new();
        components.insert(
            0,
            vec![Slot { label: vec![], coeff: MonomialIdeal::unit(d), shift: 0 }],
        );
        components.insert(
            1,
            vec![Slot {
                label: vec![0],
                coeff: MonomialIdeal::unit(d),
                shift: i64::from(b.degree()),
            }],
        );
        ComplexSpec::new(
            Orientation::Chain,
            module,
            false,
            components,
            vec![DiffEntry { index: 1, src: vec![0], tgt: vec![], sign: 1, mult: b }],
        )
        .unwrap()
    }

    #[test]
    fn two_term_homology_of_a_zerodivisor() {
        // M = R/(x^2, xy), b = y: H_0 = M/yM has length 2, H_1 = (0 : y) has
        // length 1 (the class of x).
        let i = MonomialIdeal::new(
            2,
            vec![Monomial::new(vec![2, 0]), Monomial::new(vec![1, 1])],
        );
        let c = two_term(CyclicModule::new(i), Monomial::new(vec![0, 1]));
        let table = c.homology_dims(field(), DegreeCap { e_max: 10, window: 4 }).unwrap();
        assert!(table.is_stable());
        assert_eq!(table.total_length(0).unwrap(), 2);
        assert_eq!(table.total_length(1).unwrap(), 1);
        assert_eq!(table.euler_characteristic().unwrap(), 1);
        assert_eq!(table.dim(1, 2), 1);
    }

    #[test]
    fn annihilation_depends_on_the_multiplier() {
        let i = MonomialIdeal::new(
            2,
            vec![Monomial::new(vec![2, 0]), Monomial::new(vec![1, 1])],
        );
        let c = two_term(CyclicModule::new(i), Monomial::new(vec![0, 1]));
        let cap = DegreeCap { e_max: 10, window: 4 };
        // y annihilates both homology modules.
        let rep_y = c.annihilation_check(field(), &Monomial::new(vec![0, 1]), cap).unwrap();
        assert!(rep_y.ok, "violations: {:?}", rep_y.violations);
        // x does not: x·[1] ≠ 0 in H_0 = M/yM.
        let rep_x = c.annihilation_check(field(), &Monomial::new(vec![1, 0]), cap).unwrap();
        assert!(!rep_x.ok);
        assert!(rep_x.violations.contains(&(0, 0)));
    }

    #[test]
    fn unstable_table_refuses_totals() {
        // M = R/(x): homology of the zero map R -> 0 is all of M, which never
        // tails off, so the window test must fail.
        let i = MonomialIdeal::new(2, vec![Monomial::new(vec![1, 0])]);
        let mut components = BTreeMap::new();
        components.insert(
            0,
            vec![Slot { label: vec![], coeff: MonomialIdeal::unit(2), shift: 0 }],
        );
        let c = ComplexSpec::new(Orientation::Chain, CyclicModule::new(i), false, components, vec![])
            .unwrap();
        let table = c.homology_dims(field(), DegreeCap { e_max: 8, window: 4 }).unwrap();
        assert!(!table.is_stable());
        assert!(table.total_length(0).is_err());
        assert!(matches!(table.euler_characteristic(), Err(Error::Unstable(_))));
    }

    #[test]
    fn degree_bookkeeping_is_enforced() {
        let mut components = BTreeMap::new();
        components.insert(
            0,
            vec![Slot { label: vec![], coeff: MonomialIdeal::unit(1), shift: 0 }],
        );
        components.insert(
            1,
            vec![Slot { label: vec![0], coeff: MonomialIdeal::unit(1), shift: 5 }],
        );
        let res = ComplexSpec::new(
            Orientation::Chain,
            CyclicModule::free(1),
            false,
            components,
            vec![DiffEntry {
                index: 1,
                src: vec![0],
                tgt: vec![],
                sign: 1,
                mult: Monomial::new(vec![1]),
            }],
        );
        assert!(matches!(res, Err(Error::ShapeMismatch(_))));
    }
}
