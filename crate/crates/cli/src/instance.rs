//! Instance files: one UTF-8 JSON document per instance describing the ring,
//! the cyclic module, the ideal q, the weighted elements, and default
//! parameters.  Command-line flags override file parameters; everything is
//! validated here with field context before any computation starts.

use std::fs;
use std::path::Path;

use kcech::builder::WeightedSystem;
use kcech::linalg::PrimeField;
use kcech::monomial::{CyclicModule, Monomial, MonomialIdeal, NegPowerConvention};
use kcech::parse::parse_monomial;
use serde::Deserialize;

use crate::{CliError, Overrides};

pub const MAX_VARS: usize = 4;
pub const MAX_GENERATORS: usize = 64;
pub const MAX_MONOMIAL_DEGREE: u32 = 64;
pub const MAX_WEIGHT: u32 = 32;
pub const N_MIN: i64 = -64;
pub const N_MAX: i64 = 128;
pub const MAX_N_SPAN: u32 = 16;
pub const MAX_E: i64 = 64;
pub const MAX_WINDOW: u32 = 16;
pub const MIN_K_MAX: u32 = 2;
pub const MAX_K_MAX: u32 = 32;
pub const MAX_L_MAX: u32 = 64;
pub const MAX_CORPUS_SIZE: usize = 5000;
pub const DEFAULT_PRIME: u64 = 32003;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    ring: RingSection,
    #[serde(default)]
    module: ModuleSection,
    #[serde(default)]
    q: Vec<String>,
    #[serde(default)]
    a: Vec<ElementEntry>,
    #[serde(default)]
    params: ParamsSection,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RingSection {
    vars: Vec<String>,
    #[serde(default)]
    prime: Option<u64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ModuleSection {
    #[serde(default)]
    relations: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementEntry {
    monomial: String,
    #[serde(default = "default_weight")]
    c: u32,
}

fn default_weight() -> u32 {
    1
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ParamsSection {
    n: Option<i64>,
    n_span: Option<u32>,
    #[serde(rename = "E")]
    e: Option<i64>,
    w: Option<u32>,
    k_max: Option<u32>,
    l_max: Option<u32>,
    convention: Option<String>,
}

/// Merged parameters: file values overridden by flags, then range-checked.
pub struct Resolved {
    pub n: Option<i64>,
    pub n_span: u32,
    pub e: Option<i64>,
    pub w: Option<u32>,
    pub k_max: u32,
    pub l_max: u32,
    pub convention: NegPowerConvention,
    pub field: PrimeField,
}

impl Resolved {
    pub fn n_or(&self, default: i64) -> i64 {
        self.n.unwrap_or(default)
    }

    pub fn w_or(&self, default: u32) -> u32 {
        self.w.unwrap_or(default)
    }

    pub fn convention_name(&self) -> &'static str {
        match self.convention {
            NegPowerConvention::Unit => "unit",
            NegPowerConvention::Zero => "zero",
        }
    }
}

pub struct Instance {
    pub module: CyclicModule,
    pub q: Option<MonomialIdeal>,
    pub elements: Vec<(Monomial, u32)>,
    pub params: Resolved,
}

impl Instance {
    /// The weighted system (q, a, c); errors name the missing field.
    pub fn weighted_system(&self) -> Result<WeightedSystem, CliError> {
        let q = self.q_ideal()?;
        if self.elements.is_empty() {
            return Err(CliError::validation("a: at least one element is required"));
        }
        WeightedSystem::new(q.clone(), self.elements.clone())
            .map_err(|e| CliError::validation(format!("a: {e}")))
    }

    pub fn q_ideal(&self) -> Result<&MonomialIdeal, CliError> {
        self.q
            .as_ref()
            .ok_or_else(|| CliError::validation("q: at least one generator is required"))
    }

    pub fn monomials(&self) -> Result<Vec<Monomial>, CliError> {
        if self.elements.is_empty() {
            return Err(CliError::validation("a: at least one element is required"));
        }
        Ok(self.elements.iter().map(|(m, _)| m.clone()).collect())
    }
}

fn check_range<T: PartialOrd + std::fmt::Display>(
    field: &str,
    value: T,
    lo: T,
    hi: T,
) -> Result<T, CliError> {
    if value < lo || value > hi {
        return Err(CliError::validation(format!(
            "{field}: {value} is outside the supported range [{lo}, {hi}]"
        )));
    }
    Ok(value)
}

fn parse_entry(field: &str, text: &str, names: &[String]) -> Result<Monomial, CliError> {
    let m = parse_monomial(text, names)
        .map_err(|e| CliError::validation(format!("{field}: {e}")))?;
    if m.degree() > MAX_MONOMIAL_DEGREE {
        return Err(CliError::validation(format!(
            "{field}: degree {} exceeds the cap {MAX_MONOMIAL_DEGREE}",
            m.degree()
        )));
    }
    Ok(m)
}

/// Loads, validates, and resolves an instance file against the flag overrides.
pub fn load(path: &Path, ov: &Overrides) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    parse_instance(&text, ov)
        .map_err(|e| CliError { message: format!("{}: {}", path.display(), e.message), code: e.code })
}

/// Parses and validates one instance document; flag overrides win over file
/// parameters.  Error messages carry the offending field.
pub fn parse_instance(text: &str, ov: &Overrides) -> Result<Instance, CliError> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| CliError::validation(e.to_string()))?;

    let names = file.ring.vars;
    if names.is_empty() || names.len() > MAX_VARS {
        return Err(CliError::validation(format!(
            "ring.vars: expected between 1 and {MAX_VARS} variables, got {}",
            names.len()
        )));
    }
    for (i, name) in names.iter().enumerate() {
        let mut chars = name.chars();
        let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic());
        if !head_ok || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(CliError::validation(format!(
                "ring.vars[{i}]: `{name}` is not a valid variable name"
            )));
        }
        if names[..i].contains(name) {
            return Err(CliError::validation(format!(
                "ring.vars[{i}]: duplicate variable `{name}`"
            )));
        }
    }
    let d = names.len();

    if file.module.relations.len() > MAX_GENERATORS {
        return Err(CliError::validation(format!(
            "module.relations: more than {MAX_GENERATORS} generators"
        )));
    }
    let mut relations = Vec::with_capacity(file.module.relations.len());
    for (i, text) in file.module.relations.iter().enumerate() {
        relations.push(parse_entry(&format!("module.relations[{i}]"), text, &names)?);
    }
    let module = CyclicModule::new(MonomialIdeal::new(d, relations));

    if file.q.len() > MAX_GENERATORS {
        return Err(CliError::validation(format!("q: more than {MAX_GENERATORS} generators")));
    }
    let q = if file.q.is_empty() {
        None
    } else {
        let mut gens = Vec::with_capacity(file.q.len());
        for (i, text) in file.q.iter().enumerate() {
            gens.push(parse_entry(&format!("q[{i}]"), text, &names)?);
        }
        let ideal = MonomialIdeal::new(d, gens);
        if !ideal.is_proper_nonzero() {
            return Err(CliError::validation("q: must be a proper nonzero ideal"));
        }
        Some(ideal)
    };

    if file.a.len() > MAX_GENERATORS {
        return Err(CliError::validation(format!("a: more than {MAX_GENERATORS} elements")));
    }
    let mut elements = Vec::with_capacity(file.a.len());
    for (i, entry) in file.a.iter().enumerate() {
        let m = parse_entry(&format!("a[{i}].monomial"), &entry.monomial, &names)?;
        check_range(&format!("a[{i}].c"), entry.c, 1, MAX_WEIGHT)?;
        elements.push((m, entry.c));
    }

    let p = file.params;
    let n = match ov.n.or(p.n) {
        Some(n) => Some(check_range("params.n", n, N_MIN, N_MAX)?),
        None => None,
    };
    let n_span = check_range("params.n_span", ov.n_span.or(p.n_span).unwrap_or(4), 0, MAX_N_SPAN)?;
    let e = match ov.max_degree.or(p.e) {
        Some(e) => Some(check_range("params.E", e, 0, MAX_E)?),
        None => None,
    };
    let w = match ov.window.or(p.w) {
        Some(w) => Some(check_range("params.w", w, 1, MAX_WINDOW)?),
        None => None,
    };
    let k_max =
        check_range("params.k_max", ov.k_max.or(p.k_max).unwrap_or(8), MIN_K_MAX, MAX_K_MAX)?;
    let l_max = check_range("params.l_max", ov.l_max.or(p.l_max).unwrap_or(24), 1, MAX_L_MAX)?;
    let convention = match ov.convention.map(|c| c.as_str()).or(p.convention.as_deref()) {
        None | Some("unit") => NegPowerConvention::Unit,
        Some("zero") => NegPowerConvention::Zero,
        Some(other) => {
            return Err(CliError::validation(format!(
                "params.convention: `{other}` is neither `unit` nor `zero`"
            )))
        }
    };
    let field = resolve_field(ov.prime.or(file.ring.prime))?;

    Ok(Instance {
        module,
        q,
        elements,
        params: Resolved { n, n_span, e, w, k_max, l_max, convention, field },
    })
}

pub fn resolve_field(prime: Option<u64>) -> Result<PrimeField, CliError> {
    PrimeField::new(prime.unwrap_or(DEFAULT_PRIME))
        .map_err(|e| CliError::validation(format!("ring.prime: {e}")))
}
