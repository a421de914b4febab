//! Catalog of the simple monogerms and multigerms `(C^3,0) -> (C^3,0)` of
//! corank one, with their 𝒜ₑ-codimensions, and machinery to re-derive every
//! codimension with the tangent engine.
//!
//! Normal forms are stored as text templates in the germ syntax, with
//! placeholders `<k>`, `<mu+1>`, `<h>` and `<P*z>`. Real-form sign choices
//! (`±`) are all taken as `+`.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dsl::parse_multigerm;
use crate::error::{Error, Result};
use crate::germ::{AType, MultiGerm};
use crate::ring::StabilizationPolicy;
use crate::tangent::ae_codim;
use crate::Q;

/// Version of the exported catalog document.
pub const EXPORT_VERSION: &str = "1";

/// Simple function germs in two variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SimpleFunction {
    /// `y^2 + x^{m+1}`, `m ≥ 1`.
    A(u32),
    /// `x^2 y + y^{m-1}`, `m ≥ 4`.
    D(u32),
    E6,
    E7,
    E8,
}

impl SimpleFunction {
    pub fn milnor(&self) -> u32 {
        match *self {
            SimpleFunction::A(m) | SimpleFunction::D(m) => m,
            SimpleFunction::E6 => 6,
            SimpleFunction::E7 => 7,
            SimpleFunction::E8 => 8,
        }
    }

    fn valid(&self) -> bool {
        match *self {
            SimpleFunction::A(m) => m >= 1,
            SimpleFunction::D(m) => m >= 4,
            _ => true,
        }
    }

    /// Monomials of the normal form in `x, y`, as germ-syntax text.
    pub fn monomials(&self) -> Vec<String> {
        match *self {
            SimpleFunction::A(m) => vec!["y^2".into(), format!("x^{}", m + 1)],
            SimpleFunction::D(m) => vec!["x^2*y".into(), format!("y^{}", m - 1)],
            SimpleFunction::E6 => vec!["x^3".into(), "y^4".into()],
            SimpleFunction::E7 => vec!["x^3".into(), "x*y^3".into()],
            SimpleFunction::E8 => vec!["x^3".into(), "y^5".into()],
        }
    }

    /// Normal form text, e.g. `y^2+x^3`.
    pub fn text(&self) -> String {
        self.monomials().join("+")
    }

    /// All simple functions with Milnor number at most `mu`, in a fixed
    /// order (A series, then D, then E).
    pub fn up_to_milnor(mu: u32) -> Vec<SimpleFunction> {
        let mut out: Vec<SimpleFunction> = (1..=mu).map(SimpleFunction::A).collect();
        out.extend((4..=mu).map(SimpleFunction::D));
        out.extend(
            [SimpleFunction::E6, SimpleFunction::E7, SimpleFunction::E8]
                .into_iter()
                .filter(|e| e.milnor() <= mu),
        );
        out
    }
}

impl fmt::Display for SimpleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleFunction::A(m) => write!(f, "A{m}"),
            SimpleFunction::D(m) => write!(f, "D{m}"),
            SimpleFunction::E6 => f.write_str("E6"),
            SimpleFunction::E7 => f.write_str("E7"),
            SimpleFunction::E8 => f.write_str("E8"),
        }
    }
}

impl std::str::FromStr for SimpleFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGerm(format!("unknown simple function {s:?}"));
        let t = s.trim().replace('_', "");
        let (series, rest) = t.split_at(t.chars().next().map(char::len_utf8).unwrap_or(0));
        let m: u32 = rest.parse().map_err(|_| bad())?;
        let f = match (series.to_ascii_uppercase().as_str(), m) {
            ("A", m) => SimpleFunction::A(m),
            ("D", m) => SimpleFunction::D(m),
            ("E", 6) => SimpleFunction::E6,
            ("E", 7) => SimpleFunction::E7,
            ("E", 8) => SimpleFunction::E8,
            _ => return Err(bad()),
        };
        if f.valid() {
            Ok(f)
        } else {
            Err(bad())
        }
    }
}

impl From<SimpleFunction> for String {
    fn from(f: SimpleFunction) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for SimpleFunction {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// The parameter a catalog row depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamSpec {
    None,
    /// An integer `k` or `mu` with a lower bound.
    Int { name: &'static str, min: u32 },
    /// A simple function germ in two variables.
    Function { name: &'static str },
}

/// A concrete value for a [`ParamSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    None,
    Int(u32),
    Function(SimpleFunction),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::None => f.write_str("-"),
            ParamValue::Int(k) => write!(f, "{k}"),
            ParamValue::Function(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Monogerm,
    Multigerm,
}

/// One normal-form row of the classification.
#[derive(Clone, Copy, Debug)]
pub struct AtlasEntry {
    pub name: &'static str,
    /// 𝒦-orbit label of the row group.
    pub orbit: &'static str,
    pub kind: EntryKind,
    pub param: ParamSpec,
    pub template: &'static str,
    pub codim_formula: &'static str,
    codim: fn(u32) -> u32,
    pub provenance: &'static str,
}

impl AtlasEntry {
    /// Expected 𝒜ₑ-codimension at the given parameter.
    pub fn expected_codim(&self, value: &ParamValue) -> Result<usize> {
        self.check(value)?;
        let x = match *value {
            ParamValue::None => 0,
            ParamValue::Int(k) => k,
            ParamValue::Function(f) => f.milnor(),
        };
        Ok((self.codim)(x) as usize)
    }

    fn check(&self, value: &ParamValue) -> Result<()> {
        let err = |message: String| Error::ParamOutOfRange {
            entry: self.name.to_string(),
            message,
        };
        match (self.param, value) {
            (ParamSpec::None, ParamValue::None) => Ok(()),
            (ParamSpec::Int { name, min }, ParamValue::Int(k)) => {
                if *k >= min {
                    Ok(())
                } else {
                    Err(err(format!("{name} = {k} is below the lower bound {min}")))
                }
            }
            (ParamSpec::Function { name }, ParamValue::Function(f)) => {
                if f.valid() {
                    Ok(())
                } else {
                    Err(err(format!("{name} = {f} is not a simple function")))
                }
            }
            (ParamSpec::None, v) => Err(err(format!("takes no parameter, got {v}"))),
            (ParamSpec::Int { name, .. }, v) => Err(err(format!("expects an integer {name}, got {v}"))),
            (ParamSpec::Function { name }, v) => {
                Err(err(format!("expects a simple function {name}, got {v}")))
            }
        }
    }

    /// Template text with the parameter substituted.
    pub fn instance_text(&self, value: &ParamValue) -> Result<String> {
        self.check(value)?;
        let mut text = self.template.to_string();
        match *value {
            ParamValue::None => {}
            ParamValue::Int(k) => {
                text = text
                    .replace("<k>", &k.to_string())
                    .replace("<mu+1>", &(k + 1).to_string());
            }
            ParamValue::Function(f) => {
                let times_z: Vec<String> = f.monomials().iter().map(|m| format!("{m}*z")).collect();
                text = text.replace("<h>", &f.text()).replace("<P*z>", &times_z.join("+"));
            }
        }
        Ok(text)
    }

    pub fn instantiate(&self, value: &ParamValue) -> Result<MultiGerm<Q>> {
        let text = self.instance_text(value)?;
        parse_multigerm(&text).map_err(|e| Error::Internal(format!("template {}: {e}", self.name)))
    }

    /// Parameter values with "size" at most `cap`: integers from the lower
    /// bound up to `cap` (at least the lower bound itself), simple functions
    /// of Milnor number at most `cap`.
    pub fn params_up_to(&self, cap: u32) -> Vec<ParamValue> {
        match self.param {
            ParamSpec::None => vec![ParamValue::None],
            ParamSpec::Int { min, .. } => (min..=cap.max(min)).map(ParamValue::Int).collect(),
            ParamSpec::Function { .. } => SimpleFunction::up_to_milnor(cap.max(1))
                .into_iter()
                .map(ParamValue::Function)
                .collect(),
        }
    }
}

const fn int(name: &'static str, min: u32) -> ParamSpec {
    ParamSpec::Int { name, min }
}

const K1: ParamSpec = int("k", 1);
const MU: ParamSpec = int("mu", 1);

const MONO: &str = "simple monogerms (C^3,0) -> (C^3,0)";
const MULTI: &str = "simple multigerms (C^3,0) -> (C^3,0)";

macro_rules! entry {
    ($name:expr, $orbit:expr, $kind:ident, $param:expr, $tpl:expr, $formula:expr, $codim:expr, $prov:expr) => {
        AtlasEntry {
            name: $name,
            orbit: $orbit,
            kind: EntryKind::$kind,
            param: $param,
            template: $tpl,
            codim_formula: $formula,
            codim: $codim,
            provenance: $prov,
        }
    };
}

static ENTRIES: &[AtlasEntry] = &[
    entry!("A1", "A1", Monogerm, ParamSpec::None, "(x, y, z^2)", "0", |_| 0, MONO),
    entry!(
        "3_mu", "A2", Monogerm, ParamSpec::Function { name: "P" },
        "(x, y, z^3+<P*z>)", "mu(P)", |mu| mu, MONO
    ),
    entry!("4_1^k", "A3", Monogerm, K1, "(x, y, z^4+x*z+y^<k>*z^2)", "k-1", |k| k - 1, MONO),
    entry!(
        "4_2^k", "A3", Monogerm, int("k", 2),
        "(x, y, z^4+y^2*z+x^<k>*z+x*z^2)", "k", |k| k, MONO
    ),
    entry!("5_1", "A4", Monogerm, ParamSpec::None, "(x, y, z^5+x*z+y*z^2)", "1", |_| 1, MONO),
    entry!(
        "5_2", "A4", Monogerm, ParamSpec::None,
        "(x, y, z^5+x*z+y^2*z^2+y*z^3)", "2", |_| 2, MONO
    ),
    entry!(
        "A1A1", "A1A1", Multigerm, ParamSpec::Function { name: "h" },
        "{(x, y, z^2); (x, y, z^2+<h>)}", "mu(h)", |mu| mu, MULTI
    ),
    entry!(
        "A1A2-a", "A1A2", Multigerm, K1,
        "{(x^3+y*x, y, z); (x, y^2+z^<k>, z)}", "k-1", |k| k - 1, MULTI
    ),
    entry!(
        "A1A2-b", "A1A2", Multigerm, K1,
        "{(x^3+y*x, y, z); (x^2+z^<k>, y, z)}", "2*(k-1)", |k| 2 * (k - 1), MULTI
    ),
    entry!(
        "A1A3", "A1A3", Multigerm, K1,
        "{(x^4+y*x+z*x^2, y, z); (x, y^2+z^<k>, z)}", "k", |k| k, MULTI
    ),
    // The generic binary concatenation of two cusps. The variant with
    // z*x in the first branch places that branch's cuspidal edge inside
    // the limiting tangent plane of the second one, which is a contact of
    // codimension 2, not 1.
    entry!(
        "A2A2-a", "A2A2", Multigerm, ParamSpec::None,
        "{(x^3+y*x, y, z); (x, y, z^3+y*z)}", "1", |_| 1, MULTI
    ),
    entry!(
        "A2A2-b", "A2A2", Multigerm, ParamSpec::None,
        "{(x^3+y^2*x+z*x, y, z); (x, y, z^3+y*z)}", "2", |_| 2, MULTI
    ),
    entry!(
        "A2A2-c", "A2A2", Multigerm, ParamSpec::None,
        "{(x^3+y*x, y, z); (x^3+z*x+x^2*y, y, z)}", "3", |_| 3, MULTI
    ),
    entry!(
        "A2A2-d", "A2A2", Multigerm, ParamSpec::None,
        "{(x^3+y*x, y, z); (x^3+z*x, y, z)}", "4", |_| 4, MULTI
    ),
    entry!(
        "3_muA1-a", "A2A1", Multigerm, MU,
        "{(x^3+y^2*x+z^<mu+1>*x, y, z); (x, y, z^2)}", "mu+1", |mu| mu + 1, MULTI
    ),
    entry!(
        "3_muA1-b", "A2A1", Multigerm, MU,
        "{(x^3+y^2*x+z^<mu+1>*x, y, z); (x, y^2, z)}", "2*mu", |mu| 2 * mu, MULTI
    ),
    entry!(
        "4_1^kA1", "A3A1", Multigerm, K1,
        "{(x^4+y*x+z^<k>*x^2, y, z); (x, y, z^2)}", "k", |k| k, MULTI
    ),
    entry!(
        "3_muA2", "A2A2", Multigerm, MU,
        "{(x^3+y^2*x+z^<mu+1>*x, y, z); (x, y, z^3+y*z)}", "mu+2", |mu| mu + 2, MULTI
    ),
    entry!(
        "A1A1A1-a", "A1A1A1", Multigerm, K1,
        "{(x^2, y, z); (x^2+y+z^<k>, y, z); (x, y^2, z)}", "k-1", |k| k - 1, MULTI
    ),
    entry!(
        "A1A1A1-b", "A1A1A1", Multigerm, K1,
        "{(x^2, y, z); (x^2+y^<k>+z^2, y, z); (x, y^2, z)}", "k", |k| k, MULTI
    ),
    entry!(
        "A1A1A1-c", "A1A1A1", Multigerm, int("k", 2),
        "{(x^2, y, z); (x^2+y*z+z^<k>, y, z); (x, y^2, z)}", "k", |k| k, MULTI
    ),
    entry!(
        "A1A1A1-d", "A1A1A1", Multigerm, ParamSpec::None,
        "{(x^2, y, z); (x^2+y^2+z^3, y, z); (x, y^2, z)}", "4", |_| 4, MULTI
    ),
    entry!(
        "A1A1A2-a", "A1A1A2", Multigerm, K1,
        "{(x, y, z^2); (x, y, z^2+y^2+x^<k>); (x^3+y*x, y, z)}", "k+1", |k| k + 1, MULTI
    ),
    entry!(
        "A1A1A2-b", "A1A1A2", Multigerm, K1,
        "{(x, y, z^2); (x, y^2+z^<k>, z); (x^3+y*x, y, z)}", "k", |k| k, MULTI
    ),
    entry!(
        "3_muA1A1", "A2A1A1", Multigerm, MU,
        "{(x^3+y^2*x+z^<mu+1>*x, y, z); (x, y, z^2); (x, y, z^2+y)}", "mu+2", |mu| mu + 2, MULTI
    ),
    entry!(
        "A1A1A1A1", "A1A1A1A1", Multigerm, K1,
        "{(x^2, y, z); (x, y^2, z); (x^2+y+z^<k>, y, z); (x, y, z^2)}", "k", |k| k, MULTI
    ),
];

/// The full fixed catalog, in table order.
pub fn entries() -> &'static [AtlasEntry] {
    ENTRIES
}

pub fn entry(name: &str) -> Result<&'static AtlasEntry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

pub fn instantiate(name: &str, value: &ParamValue) -> Result<MultiGerm<Q>> {
    entry(name)?.instantiate(value)
}

/// Outcome of re-deriving one catalog codimension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyRow {
    pub entry: String,
    pub params: ParamValue,
    pub germ: String,
    pub computed: Option<usize>,
    pub expected: usize,
    #[serde(rename = "match")]
    pub matched: bool,
    pub degree_used: Option<u32>,
    pub millis: u128,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.matched)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &VerifyRow> {
        self.rows.iter().filter(|r| !r.matched)
    }
}

/// Computes the 𝒜ₑ-codimension of one instance and compares it with the
/// catalog value. Failure to stabilize is reported as a mismatch.
pub fn verify(name: &str, value: &ParamValue, policy: &StabilizationPolicy) -> Result<VerifyRow> {
    let e = entry(name)?;
    let expected = e.expected_codim(value)?;
    let germ = e.instantiate(value)?;
    let start = Instant::now();
    let result = ae_codim(&germ, policy);
    let millis = start.elapsed().as_millis();
    let (computed, degree_used, reason) = match result {
        Ok(r) => (Some(r.value), Some(r.degree_used), None),
        Err(err @ Error::NotStabilized { .. }) => (None, None, Some(err.to_string())),
        Err(other) => return Err(other),
    };
    Ok(VerifyRow {
        entry: name.to_string(),
        params: *value,
        germ: e.instance_text(value)?,
        computed,
        expected,
        matched: computed == Some(expected),
        degree_used,
        millis,
        reason,
    })
}

/// Verifies every entry at every parameter value up to `param_cap`, in
/// catalog order.
pub fn verify_all(param_cap: u32, policy: &StabilizationPolicy) -> Result<VerifyReport> {
    if param_cap == 0 {
        return Err(Error::InvalidPolicy("param_cap must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for e in ENTRIES {
        for v in e.params_up_to(param_cap) {
            rows.push(verify(e.name, &v, policy)?);
        }
    }
    Ok(VerifyReport { rows })
}

/// A catalog row that fits a germ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtlasMatch {
    pub entry: String,
    pub params: ParamValue,
    pub expected_codim: usize,
    pub computed_codim: usize,
    /// The germ is literally the catalog normal form (up to the order of
    /// branches and the names of variables).
    pub exact: bool,
}

impl AtlasMatch {
    pub fn codim_agrees(&self) -> bool {
        self.expected_codim == self.computed_codim
    }
}

/// Invariants used for matching against the catalog.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Invariants {
    pub n: usize,
    pub p: usize,
    pub r: usize,
    pub atype: AType,
    pub m0: usize,
    pub ae_codim: usize,
}

fn same_branches(a: &MultiGerm<Q>, b: &MultiGerm<Q>) -> bool {
    if a.r() != b.r() || a.n() != b.n() || a.p() != b.p() {
        return false;
    }
    let mut used = vec![false; b.r()];
    a.branches().iter().all(|x| {
        match (0..b.r()).find(|&j| !used[j] && *b.branch(j) == *x) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

fn max_degree(f: &MultiGerm<Q>) -> u32 {
    f.branches()
        .iter()
        .flat_map(|b| b.components())
        .filter_map(|c| c.degree())
        .max()
        .unwrap_or(0)
}

/// Catalog rows compatible with `f`.
///
/// A row is a candidate when some parameter value reproduces the invariant
/// tuple `(n, p, r, type, m0, 𝒜ₑ-codim)`, or when `f` is literally one of
/// its instances. Several candidates may be returned; deciding
/// 𝒜-equivalence between them is not attempted.
pub fn lookup(f: &MultiGerm<Q>, policy: &StabilizationPolicy) -> Result<(Invariants, Vec<AtlasMatch>)> {
    let atype = f.recognize_type(policy)?;
    let m0 = f.multiplicity(policy)?;
    let codim = ae_codim(f, policy)?.value;
    let inv = Invariants {
        n: f.n(),
        p: f.p(),
        r: f.r(),
        atype,
        m0,
        ae_codim: codim,
    };
    let mut out: Vec<AtlasMatch> = Vec::new();
    if (inv.n, inv.p) != (3, 3) {
        return Ok((inv, out));
    }
    // parameter values large enough for both the codimension formulas and
    // literal matches
    let cap = (codim as u32 + 2).max(max_degree(f) + 1);
    for e in ENTRIES {
        for v in e.params_up_to(cap) {
            let expected = e.expected_codim(&v)?;
            let g = e.instantiate(&v)?;
            if g.r() != inv.r {
                break;
            }
            let exact = same_branches(f, &g);
            let fits = expected == codim
                && g.multiplicity(policy)? == inv.m0
                && g.recognize_type(policy)? == inv.atype;
            if exact || fits {
                out.push(AtlasMatch {
                    entry: e.name.to_string(),
                    params: v,
                    expected_codim: expected,
                    computed_codim: codim,
                    exact,
                });
            }
        }
    }
    Ok((inv, out))
}

/// Serializable description of one catalog row.
#[derive(Clone, Debug, Serialize)]
pub struct ExportEntry {
    pub name: &'static str,
    pub orbit: &'static str,
    pub kind: EntryKind,
    pub source_dim: usize,
    pub target_dim: usize,
    pub parameter: ParamSpec,
    pub template: &'static str,
    pub codim: &'static str,
    pub signs: &'static str,
    pub provenance: &'static str,
}

/// The whole catalog as a self-describing document.
#[derive(Clone, Debug, Serialize)]
pub struct AtlasExport {
    pub format: &'static str,
    pub version: &'static str,
    pub placeholders: Vec<(&'static str, &'static str)>,
    pub entries: Vec<ExportEntry>,
}

pub fn export() -> AtlasExport {
    AtlasExport {
        format: "germcalc-atlas",
        version: EXPORT_VERSION,
        placeholders: vec![
            ("<k>", "the integer parameter k"),
            ("<mu+1>", "one more than the integer parameter mu"),
            ("<h>", "a simple function germ h(x,y) in normal form"),
            ("<P*z>", "each monomial of a simple function P(x,y), times z"),
        ],
        entries: ENTRIES
            .iter()
            .map(|e| ExportEntry {
                name: e.name,
                orbit: e.orbit,
                kind: e.kind,
                source_dim: 3,
                target_dim: 3,
                parameter: e.param,
                template: e.template,
                codim: e.codim_formula,
                signs: "complex normal form: every real sign choice taken as +",
                provenance: e.provenance,
            })
            .collect(),
    }
}
