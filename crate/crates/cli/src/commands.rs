//! One function per subcommand.  Each builds the objects it needs from the
//! validated instance, runs the computation, prints a `Report`, and returns
//! the process exit code (0 pass, 1 check failed; validation and instability
//! errors surface as `CliError` upstream).

use kcech::builder::{
    co_quotient_L, default_cap, quotient_L, sub_co_koszul, sub_koszul, WeightedSystem,
};
use kcech::cech::{
    cech_H, cech_L, local_cohomology, saturation_power, star_check as star_witness_search,
    ColimitEntry, ColimitParams, ColimitReport,
};
use kcech::complex::{mapping_cone, ComplexSpec, DegreeCap, Orientation};
use kcech::linalg::PrimeField;
use kcech::multiplicity::{self, chi_nonneg_monitor};
use serde_json::Value;

use crate::instance::{Instance, Resolved, MAX_CORPUS_SIZE, N_MAX};
use crate::report::{opt, Report};
use crate::{CliError, Kind, Which};

/// Standard parameter echoes carried by every table, `null` where unused.
fn echo(r: &mut Report, p: &Resolved, n: Value, e: Value, w: Value, k_max: Value) {
    r.meta("n", n);
    r.meta("E", e);
    r.meta("w", w);
    r.meta("k_max", k_max);
    r.meta("p", p.field.modulus());
    r.meta("convention", p.convention_name());
}

pub fn hilbert(inst: &Instance, json: bool) -> Result<u8, CliError> {
    let q = inst.q_ideal()?;
    let n_max = inst.params.n_or(10);
    if !(0..=N_MAX).contains(&n_max) {
        return Err(CliError::validation(format!(
            "params.n: table bound {n_max} must lie in [0, {N_MAX}]"
        )));
    }
    let mut values: Vec<u64> = Vec::new();
    for n in 0..=n_max {
        values.push(inst.module.hilbert_samuel(q, n)?);
    }
    let dim = inst.module.krull_dim();
    let order = dim.max(0) as usize;
    let mut diffs: Vec<Vec<i64>> = Vec::new();
    let mut cur: Vec<i64> = values.iter().map(|&v| v as i64).collect();
    for _ in 0..order {
        cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
        diffs.push(cur.clone());
    }

    let mut r = Report::new("hilbert");
    echo(&mut r, &inst.params, n_max.into(), Value::Null, Value::Null, Value::Null);
    let mut cols = vec!["n".to_string(), "len".to_string()];
    cols.extend((1..=order).map(|k| format!("d{k}")));
    r.columns(cols);
    for (n, &len) in values.iter().enumerate() {
        let mut row = vec![Value::from(n), Value::from(len)];
        for (k, diff) in diffs.iter().enumerate() {
            row.push(if n > k { Value::from(diff[n - k - 1]) } else { Value::Null });
        }
        r.row(row);
    }
    r.footer("dim", dim);
    r.footer("e0", multiplicity::e0(&inst.module, q)?);
    r.print(json);
    Ok(0)
}

pub fn verify_mult1(inst: &Instance, json: bool) -> Result<u8, CliError> {
    let a = inst.monomials()?;
    let report = multiplicity::verify_mult1(&a, &inst.module, inst.params.field)?;
    let mut r = Report::new("verify-mult1");
    echo(&mut r, &inst.params, Value::Null, Value::Null, Value::Null, Value::Null);
    r.columns(["quantity", "value"]);
    r.row(vec!["chi_koszul".into(), report.chi.into()]);
    r.row(vec!["e0".into(), report.e0.into()]);
    r.footer("verdict", if report.ok { "PASS" } else { "FAIL" });
    r.print(json);
    Ok(u8::from(!report.ok))
}

pub fn verify_mult2(inst: &Instance, json: bool) -> Result<u8, CliError> {
    let ws = inst.weighted_system()?;
    let report =
        multiplicity::verify_mult2(&ws, &inst.module, inst.params.field, inst.params.convention)?;
    let mut r = Report::new("verify-mult2");
    echo(&mut r, &inst.params, report.n_star.into(), Value::Null, Value::Null, Value::Null);
    r.columns(["quantity", "value"]);
    r.row(vec!["e0_a".into(), report.e0_a.into()]);
    r.row(vec!["weight_product".into(), report.weight_product.into()]);
    r.row(vec!["e0_q".into(), report.e0_q.into()]);
    r.row(vec!["chi_stable".into(), report.chi.into()]);
    r.row(vec!["n_star".into(), report.n_star.into()]);
    r.footer("verdict", if report.ok { "PASS" } else { "FAIL" });
    r.print(json);
    Ok(u8::from(!report.ok))
}

pub fn complex_report(inst: &Instance, which: Which, json: bool) -> Result<u8, CliError> {
    let ws = inst.weighted_system()?;
    let module = &inst.module;
    let n = inst.params.n_or(1);
    let conv = inst.params.convention;
    let field = inst.params.field;
    let build = |w: &WeightedSystem, n: i64| -> kcech::Result<ComplexSpec> {
        match which {
            Which::K => sub_koszul(w, module, n, conv),
            Which::L => quotient_L(w, module, n, conv),
            Which::CoK => sub_co_koszul(w, module, n),
            Which::CoL => co_quotient_L(w, module, n),
        }
    };
    let spec = build(&ws, n)?;
    let cap = match inst.params.e {
        Some(e_max) => DegreeCap { e_max, window: inst.params.w_or(2) },
        None => default_cap(&ws.monomials(), Some(ws.q()), module, n).map_err(|e| {
            CliError::validation(format!("cannot derive a degree cap ({e}); pass --max-degree"))
        })?,
    };
    let table = spec.homology_dims(field, cap)?;

    let d_squared = check_d_squared(&spec, field, cap.e_max)?;
    let permutation = {
        let perm: Vec<usize> = (0..ws.len()).rev().collect();
        let moved = build(&ws.permuted(&perm)?, n)?.homology_dims(field, cap)?;
        moved.dims() == table.dims()
    };
    let mut annihilation = true;
    for (a, _) in ws.elements() {
        annihilation &= spec.annihilation_check(field, a, cap)?.ok;
    }
    let cone = if ws.len() >= 2 {
        let (b, c_b) = ws.elements().last().expect("nonempty system").clone();
        let head = ws.prefix(ws.len() - 1);
        let c_b = i64::from(c_b);
        let (from_n, to_n) = match spec.orientation() {
            Orientation::Chain => (n - c_b, n),
            Orientation::Cochain => (n, n + c_b),
        };
        let rebuilt = mapping_cone(&b, &build(&head, from_n)?, &build(&head, to_n)?)?;
        Some(rebuilt == spec)
    } else {
        None
    };

    let mut r = Report::new("complex-report");
    r.meta("which", which.name());
    echo(&mut r, &inst.params, n.into(), cap.e_max.into(), cap.window.into(), Value::Null);
    let (lo, hi) = spec.index_range();
    r.meta("index_range", format!("{lo}..{hi}"));
    let (e_lo, e_hi) = table.e_range();
    r.meta("e_range", format!("{e_lo}..{e_hi}"));
    r.columns(["i", "e", "dim"]);
    for (&(i, e), &dim) in table.dims() {
        r.row(vec![i.into(), e.into(), dim.into()]);
    }
    r.footer("stable", table.is_stable());
    if let Ok(chi) = spec.euler_by_terms() {
        r.footer("chi_terms", chi);
    }
    if let Ok(chi) = table.euler_characteristic() {
        r.footer("chi_homology", chi);
    }
    let verdict_text = |ok: bool| if ok { "ok" } else { "fail" };
    r.footer("check_d_squared", verdict_text(d_squared));
    r.footer("check_permutation", verdict_text(permutation));
    r.footer("check_annihilation", verdict_text(annihilation));
    r.footer("check_cone", cone.map_or("skipped", verdict_text));
    let ok = d_squared && permutation && annihilation && cone.unwrap_or(true);
    r.footer("verdict", if ok { "PASS" } else { "FAIL" });
    r.print(json);
    Ok(u8::from(!ok))
}

/// Composes consecutive differentials on every slice up to `e_max`.
fn check_d_squared(spec: &ComplexSpec, field: PrimeField, e_max: i64) -> Result<bool, CliError> {
    let (lo, hi) = spec.index_range();
    let p = field.modulus();
    for e in spec.min_internal_degree()..=e_max {
        for i in lo..=hi {
            let j = match spec.orientation() {
                Orientation::Chain => i - 1,
                Orientation::Cochain => i + 1,
            };
            if !(lo..=hi).contains(&j) {
                continue;
            }
            let first = spec.differential_matrix(field, i, e)?;
            let second = spec.differential_matrix(field, j, e)?;
            if second.mul(&first)?.entries().any(|(_, _, v)| v % p != 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn cech(inst: &Instance, kind: Kind, json: bool) -> Result<u8, CliError> {
    let field = inst.params.field;
    let colimit = ColimitParams {
        k_max: inst.params.k_max,
        window: inst.params.w_or(2),
        e_range: inst.params.e.map(|e| (-e, e)),
    };
    let (report, n_echo): (ColimitReport, Value) = match kind {
        Kind::H => {
            let ws = inst.weighted_system()?;
            let n = inst.params.n_or(1);
            (cech_H(&ws, &inst.module, n, field, &colimit)?, n.into())
        }
        Kind::L => {
            let ws = inst.weighted_system()?;
            let n = inst.params.n_or(1);
            (cech_L(&ws, &inst.module, n, field, &colimit)?, n.into())
        }
        Kind::Local => {
            let a = inst.monomials()?;
            (local_cohomology(&a, &inst.module, field, &colimit)?, Value::Null)
        }
    };

    let mut r = Report::new("cech");
    r.meta("kind", kind.name());
    echo(
        &mut r,
        &inst.params,
        n_echo,
        opt(inst.params.e),
        report.window().into(),
        report.k_max().into(),
    );
    let (e_lo, e_hi) = report.e_range();
    r.meta("e_range", format!("{e_lo}..{e_hi}"));
    r.columns(["i", "e", "dim", "k_star", "status"]);
    let mut unstable = 0u64;
    let mut nonzero = 0u64;
    for (&(i, e), entry) in report.cells() {
        match entry {
            ColimitEntry::Stable { dim, first_stable_stage } => {
                if *dim > 0 {
                    nonzero += 1;
                }
                r.row(vec![
                    i.into(),
                    e.into(),
                    (*dim).into(),
                    (*first_stable_stage).into(),
                    "stable".into(),
                ]);
            }
            ColimitEntry::Unstable => {
                unstable += 1;
                r.row(vec![i.into(), e.into(), Value::Null, Value::Null, "unstable".into()]);
            }
        }
    }
    r.footer("nonzero_cells", nonzero);
    r.footer("unstable_cells", unstable);
    r.print(json);
    Ok(0)
}

pub fn star_check(inst: &Instance, json: bool) -> Result<u8, CliError> {
    let ws = inst.weighted_system()?;
    let p = &inst.params;
    let report = star_witness_search(&ws, &inst.module, p.n_span, p.l_max, p.k_max)?;
    let mut r = Report::new("star-check");
    echo(&mut r, p, Value::Null, Value::Null, Value::Null, p.k_max.into());
    r.meta("n_span", p.n_span);
    r.meta("l_max", p.l_max);
    r.columns(["element", "monomial", "c", "l", "k", "holds"]);
    for verdict in &report.verdicts {
        let (a, c) = &ws.elements()[verdict.element];
        let (l, k) = match verdict.witness {
            Some((l, k)) => (Value::from(l), Value::from(k)),
            None => (Value::Null, Value::Null),
        };
        r.row(vec![
            verdict.element.into(),
            a.to_string().into(),
            (*c).into(),
            l,
            k,
            verdict.witness.is_some().into(),
        ]);
    }
    let ok = report.all_hold();
    r.footer("verdict", if ok { "PASS" } else { "FAIL" });
    r.print(json);
    Ok(u8::from(!ok))
}

pub fn sat(inst: &Instance, json: bool) -> Result<u8, CliError> {
    let q = inst.q_ideal()?;
    if inst.elements.is_empty() {
        return Err(CliError::validation("a: at least one element is required"));
    }
    let p = &inst.params;
    let n = p.n_or(1);
    let window = p.w_or(6).min(p.l_max);
    let mut r = Report::new("sat");
    echo(&mut r, p, n.into(), Value::Null, window.into(), Value::Null);
    r.meta("l_max", p.l_max);
    r.columns(["element", "monomial", "c", "stage", "status", "ideal"]);
    for (i, (a, c)) in inst.elements.iter().enumerate() {
        let (ideal, stage) = saturation_power(&inst.module, q, a, *c, n, p.l_max, window)?;
        r.row(vec![
            i.into(),
            a.to_string().into(),
            (*c).into(),
            stage.into(),
            if ideal.is_unit() { "full" } else { "proper" }.into(),
            ideal.to_string().into(),
        ]);
    }
    r.print(json);
    Ok(0)
}

pub fn corpus(size: usize, seed: u64, field: PrimeField, json: bool) -> Result<u8, CliError> {
    if size == 0 || size > MAX_CORPUS_SIZE {
        return Err(CliError::validation(format!(
            "size: {size} is outside the supported range [1, {MAX_CORPUS_SIZE}]"
        )));
    }
    let report = chi_nonneg_monitor(seed, size, field);
    let mut r = Report::new("corpus");
    r.meta("seed", seed);
    r.meta("size", size);
    r.meta("p", field.modulus());
    r.columns(["id", "nvars", "t", "weights", "e0_a", "e0_q", "chi", "n_star", "status"]);
    for row in &report.rows {
        let weights: Vec<String> = row.weights.iter().map(u32::to_string).collect();
        r.row(vec![
            row.id.into(),
            row.nvars.into(),
            row.t.into(),
            weights.join(",").into(),
            opt(row.e0_a),
            opt(row.e0_q),
            opt(row.chi),
            opt(row.n_star),
            row.status.clone().into(),
        ]);
    }
    r.footer("min_chi", opt(report.min_chi));
    r.footer("max_chi", opt(report.max_chi));
    let histogram: Vec<String> =
        report.histogram.iter().map(|(chi, count)| format!("{chi}:{count}")).collect();
    r.footer("histogram", histogram.join(","));
    let id_list = |ids: &[usize]| -> Value {
        if ids.is_empty() {
            Value::Null
        } else {
            ids.iter().map(usize::to_string).collect::<Vec<_>>().join(",").into()
        }
    };
    r.footer("negatives", id_list(&report.negatives));
    r.footer("disagreements", id_list(&report.disagreements));
    let ok = report.negatives.is_empty() && report.disagreements.is_empty();
    r.footer("verdict", if ok { "PASS" } else { "FAIL" });
    r.print(json);
    Ok(u8::from(!ok))
}
