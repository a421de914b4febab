//! Semi-decision procedures for 𝒜-simplicity.
//!
//! Every gate either proves non-simplicity from a known necessary
//! condition, certifies simplicity from a known sufficient one, or abstains.
//! Hypotheses that cannot be checked mechanically (primitivity,
//! transversality, ...) are never assumed: they must be asserted by the
//! caller and are echoed back in the verdict.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::atlas;
use crate::error::{Error, Result};
use crate::germ::{stratum_dim, AType, MultiGerm};
use crate::ring::{is_quasi_homogeneous, Poly, StabilizationPolicy};
use crate::tangent::ae_codim;
use crate::Q;

/// An exact number reported as evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Num {
    Int(BigInt),
    Rational(Q),
}

impl Num {
    pub fn int(v: impl Into<BigInt>) -> Self {
        Num::Int(v.into())
    }

    pub fn as_rational(&self) -> Q {
        match self {
            Num::Int(i) => Q::from_integer(i.clone()),
            Num::Rational(q) => q.clone(),
        }
    }
}

impl From<usize> for Num {
    fn from(v: usize) -> Self {
        Num::Int(BigInt::from(v))
    }
}

impl From<Q> for Num {
    fn from(q: Q) -> Self {
        if q.is_integer() {
            Num::Int(q.to_integer())
        } else {
            Num::Rational(q)
        }
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Int(i) => write!(f, "{i}"),
            Num::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(i) => s.serialize_i64(i),
        None => s.serialize_str(&v.to_string()),
    }
}

struct BigIntRef<'a>(&'a BigInt);

impl Serialize for BigIntRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_bigint(self.0, s)
    }
}

impl Serialize for Num {
    /// Integers as JSON numbers, other rationals as `{"num": .., "den": ..}`.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Num::Int(i) => serialize_bigint(i, s),
            Num::Rational(q) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("num", &BigIntRef(q.numer()))?;
                m.serialize_entry("den", &BigIntRef(q.denom()))?;
                m.end()
            }
        }
    }
}

/// The two sides of the inequality behind a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub lhs_label: String,
    pub lhs: Num,
    pub relation: &'static str,
    pub rhs_label: String,
    pub rhs: Num,
}

impl Inequality {
    fn new(lhs_label: &str, lhs: Num, relation: &'static str, rhs_label: &str, rhs: Num) -> Self {
        Inequality {
            lhs_label: lhs_label.into(),
            lhs,
            relation,
            rhs_label: rhs_label.into(),
            rhs,
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {} {} {} = {}",
            self.lhs_label, self.lhs, self.relation, self.rhs_label, self.rhs
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    Simple,
    NotSimple,
    Unknown,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Simple => "Simple",
            VerdictKind::NotSimple => "NotSimple",
            VerdictKind::Unknown => "Unknown",
        })
    }
}

/// Outcome of a gate.
///
/// A `NotSimple` verdict always carries its inequality; an `Unknown` one
/// always lists at least one hypothesis that would have been needed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub rule: String,
    pub evidence: BTreeMap<String, Num>,
    pub inequality: Option<Inequality>,
    pub unverified_hypotheses: Vec<String>,
}

impl Verdict {
    fn not_simple(rule: &str, inequality: Inequality, assumed: Vec<String>) -> Self {
        Verdict {
            kind: VerdictKind::NotSimple,
            rule: rule.into(),
            evidence: BTreeMap::new(),
            inequality: Some(inequality),
            unverified_hypotheses: assumed,
        }
    }

    fn simple(rule: &str, assumed: Vec<String>) -> Self {
        Verdict {
            kind: VerdictKind::Simple,
            rule: rule.into(),
            evidence: BTreeMap::new(),
            inequality: None,
            unverified_hypotheses: assumed,
        }
    }

    fn unknown(rule: &str, missing: impl Into<String>) -> Self {
        Verdict {
            kind: VerdictKind::Unknown,
            rule: rule.into(),
            evidence: BTreeMap::new(),
            inequality: None,
            unverified_hypotheses: vec![missing.into()],
        }
    }

    fn with(mut self, key: &str, value: impl Into<Num>) -> Self {
        self.evidence.insert(key.into(), value.into());
        self
    }

    fn with_inequality(mut self, inequality: Inequality) -> Self {
        self.inequality = Some(inequality);
        self
    }

    pub fn is_not_simple(&self) -> bool {
        self.kind == VerdictKind::NotSimple
    }
}

/// Hypotheses that only the caller can vouch for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    /// The germ is primitive (not an augmentation).
    Primitive,
    /// The germ is an augmentation of a stable one-parameter unfolding.
    Augmentation,
    /// The condition on the evaluation of liftable fields needed for the
    /// augmentation-concatenation simplicity theorem.
    DzCondition,
    /// The augmentation entering the construction is simple.
    AugmentationSimple,
    /// The transversality hypothesis of the converse statement.
    Transversality,
    /// The unfolding is the best possible one for the base germ.
    BestPossible,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 6] = [
        Hypothesis::Primitive,
        Hypothesis::Augmentation,
        Hypothesis::DzCondition,
        Hypothesis::AugmentationSimple,
        Hypothesis::Transversality,
        Hypothesis::BestPossible,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Hypothesis::Primitive => "primitive",
            Hypothesis::Augmentation => "augmentation",
            Hypothesis::DzCondition => "dz-condition",
            Hypothesis::AugmentationSimple => "augmentation-simple",
            Hypothesis::Transversality => "transversality",
            Hypothesis::BestPossible => "best-possible",
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Hypothesis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Hypothesis::ALL
            .into_iter()
            .find(|h| h.name() == s.trim())
            .ok_or_else(|| {
                let known: Vec<&str> = Hypothesis::ALL.iter().map(Hypothesis::name).collect();
                Error::InvalidArgument(format!(
                    "unknown hypothesis {s:?} (known: {})",
                    known.join(", ")
                ))
            })
    }
}

/// Set of hypotheses asserted by the caller.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assertions(BTreeSet<Hypothesis>);

impl Assertions {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn with(mut self, h: Hypothesis) -> Self {
        self.0.insert(h);
        self
    }

    pub fn has(&self, h: Hypothesis) -> bool {
        self.0.contains(&h)
    }

    /// Parses a comma-separated list such as `primitive,transversality`.
    pub fn parse_list(text: &str) -> Result<Self> {
        let mut out = Self::default();
        for part in text.split(',').filter(|s| !s.trim().is_empty()) {
            out.0.insert(part.parse()?);
        }
        Ok(out)
    }

    fn names(&self, hs: &[Hypothesis]) -> Vec<String> {
        hs.iter().filter(|h| self.has(**h)).map(|h| h.to_string()).collect()
    }
}

pub const RULE_NISHIMURA: &str = "Nishimura bound";
pub const RULE_TAU_PAIRING: &str = "zero-dimensional stratum paired with a stratum of dimension p-2";
pub const RULE_STABLE_PARTNER: &str =
    "zero-dimensional stratum paired with a stable germ other than a fold prism or immersion";
pub const RULE_BRANCH_COUNT: &str = "branch count bound r <= n - k1 + 2";
pub const RULE_PRIMITIVE_MORSE: &str = "primitive codimension-one germ plus a fold prism or immersion";
pub const RULE_AUGCONC: &str = "augmentation and concatenation of a codimension-one germ";
pub const RULE_AUG_CUSP: &str = "augmentation with a cuspidal or double partner";
pub const RULE_ATLAS: &str = "atlas";

/// Upper bound `(p² + (n−1)r) / (n(p−n) + n − 1)` on the multiplicity of
/// a simple multigerm of minimal corank, with `n ≤ p`.
pub fn nishimura_bound(n: usize, p: usize, r: usize) -> Result<Q> {
    if n > p {
        return Err(Error::UnsupportedDimensions {
            n,
            p,
            reason: "the multiplicity bound needs n <= p".into(),
        });
    }
    let den = n * (p - n) + n;
    if n * p == 1 || den <= 1 {
        return Err(Error::BoundUndefined { n, p });
    }
    let num = p * p + (n - 1) * r;
    Ok(Q::new(BigInt::from(num), BigInt::from(den - 1)))
}

fn corank_ok(f: &MultiGerm<Q>) -> bool {
    f.coranks().iter().all(|&c| c <= 1)
}

pub fn gate_nishimura(f: &MultiGerm<Q>, policy: &StabilizationPolicy) -> Result<Verdict> {
    let (n, p, r) = (f.n(), f.p(), f.r());
    if !corank_ok(f) {
        return Ok(Verdict::unknown(RULE_NISHIMURA, "corank at most one"));
    }
    let bound = match nishimura_bound(n, p, r) {
        Ok(b) => b,
        Err(Error::UnsupportedDimensions { .. }) | Err(Error::BoundUndefined { .. }) => {
            return Ok(Verdict::unknown(RULE_NISHIMURA, "dimensions with 1 < n <= p"))
        }
        Err(e) => return Err(e),
    };
    let m0 = f.multiplicity(policy)?;
    let ineq = Inequality::new("m0", m0.into(), ">", "bound", bound.clone().into());
    let v = if Q::from_integer(BigInt::from(m0)) > bound {
        Verdict::not_simple(RULE_NISHIMURA, ineq, vec![])
    } else {
        Verdict::unknown(RULE_NISHIMURA, "simplicity within the multiplicity bound")
    };
    Ok(v.with("m0", m0).with("bound", bound))
}

/// Type and stability of a sub-multigerm, `None` when it is not stable or
/// its invariants cannot be settled.
fn stable_type(g: &MultiGerm<Q>, policy: &StabilizationPolicy) -> Result<Option<AType>> {
    match ae_codim(g, policy) {
        Ok(c) if c.value == 0 => {}
        Ok(_) | Err(Error::NotStabilized { .. }) => return Ok(None),
        Err(e) => return Err(e),
    }
    match g.recognize_type(policy) {
        Ok(t) => Ok(Some(t)),
        Err(Error::NotCorankOne { .. }) | Err(Error::NotStabilized { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub const TAU_PAIRING_MAX_BRANCHES: usize = 8;

/// Searches every splitting `f = {f_s, g_s}` into two stable parts with
/// `dim τ̃(f_s) = 0`. Then `g_s` must be a fold prism (`n = p`) or an
/// immersion (`n = p − 1`); the special case `dim τ̃(g_s) = p − 2` is
/// reported under its own rule.
pub fn gate_tau_pairing(f: &MultiGerm<Q>, policy: &StabilizationPolicy) -> Result<Verdict> {
    let (n, p, r) = (f.n(), f.p(), f.r());
    if !(n == p && n > 2 || n + 1 == p) {
        return Ok(Verdict::unknown(RULE_TAU_PAIRING, "dimensions n = p > 2 or n = p - 1"));
    }
    if r < 2 {
        return Ok(Verdict::unknown(RULE_TAU_PAIRING, "at least two branches"));
    }
    if r > TAU_PAIRING_MAX_BRANCHES {
        return Ok(Verdict::unknown(RULE_TAU_PAIRING, "bipartition search limited to r <= 8"));
    }
    // stratum dimension of every stable sub-multigerm, indexed by bitmask
    let full = (1usize << r) - 1;
    let mut dims: Vec<Option<usize>> = vec![None; full + 1];
    for (mask, slot) in dims.iter_mut().enumerate().take(full).skip(1) {
        let idx: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
        let sub = f.select(&idx)?;
        if let Some(t) = stable_type(&sub, policy)? {
            *slot = stratum_dim(&t, n, p).ok();
        }
    }
    let mut best: Option<Verdict> = None;
    for mask in 1..full {
        let rest = full ^ mask;
        let (Some(0), Some(dg)) = (dims[mask], dims[rest]) else {
            continue;
        };
        if dg + 1 >= p {
            continue;
        }
        let rule = if dg + 2 == p { RULE_TAU_PAIRING } else { RULE_STABLE_PARTNER };
        let v = Verdict::not_simple(
            rule,
            Inequality::new("dim stratum(g)", dg.into(), "<", "p - 1", (p - 1).into()),
            vec![],
        )
        .with("dim stratum(f)", 0usize)
        .with("dim stratum(g)", dg)
        .with("f branches", mask.count_ones() as usize)
        .with("g branches", rest.count_ones() as usize);
        // prefer the sharper rule when both apply
        let sharper = rule == RULE_TAU_PAIRING;
        if best.is_none() || sharper {
            best = Some(v);
            if sharper {
                break;
            }
        }
    }
    Ok(best.unwrap_or_else(|| {
        Verdict::unknown(RULE_TAU_PAIRING, "no splitting into a zero-dimensional stratum and a small partner")
    }))
}

/// Equidimensional corank-one multigerms with `r > n − k₁ + 2` branches are
/// not simple, `k₁` being the largest Morin index.
pub fn gate_branch_count(f: &MultiGerm<Q>, policy: &StabilizationPolicy) -> Result<Verdict> {
    let (n, p, r) = (f.n(), f.p(), f.r());
    if n != p {
        return Ok(Verdict::unknown(RULE_BRANCH_COUNT, "equidimensional germ"));
    }
    if r < 2 {
        return Ok(Verdict::unknown(RULE_BRANCH_COUNT, "at least two branches"));
    }
    let t = match f.recognize_type(policy) {
        Ok(t) => t,
        Err(Error::NotCorankOne { .. }) => {
            return Ok(Verdict::unknown(RULE_BRANCH_COUNT, "corank at most one"))
        }
        Err(e) => return Err(e),
    };
    let k1 = t.top();
    let allowed = (n + 2).saturating_sub(k1);
    let ineq = Inequality::new("r", r.into(), ">", "n - k1 + 2", allowed.into());
    let v = if r > allowed {
        Verdict::not_simple(RULE_BRANCH_COUNT, ineq, vec![])
    } else {
        Verdict::unknown(RULE_BRANCH_COUNT, "simplicity within the branch count bound")
    };
    Ok(v.with("r", r).with("k1", k1))
}

/// Whether branch `i` alone is a fold prism (`n = p`) or an immersion
/// (`n = p − 1`).
fn is_morse_partner(f: &MultiGerm<Q>, i: usize, policy: &StabilizationPolicy) -> Result<bool> {
    let (n, p) = (f.n(), f.p());
    let want = if n == p {
        1
    } else if n + 1 == p {
        0
    } else {
        return Ok(false);
    };
    let b = f.branch(i);
    if b.corank() > 1 {
        return Ok(false);
    }
    Ok(b.multiplicity(policy)? == want + 1)
}

/// `{f₀, g}` with `f₀` primitive of 𝒜ₑ-codimension one and `g` a fold prism
/// (`n = p > 2`) or an immersion (`n = p − 1 > 3`) is not simple.
/// Primitivity has to be asserted; the codimension is computed.
pub fn gate_primitive_plus_morse(
    f: &MultiGerm<Q>,
    policy: &StabilizationPolicy,
    primitive: bool,
) -> Result<Verdict> {
    let (n, p, r) = (f.n(), f.p(), f.r());
    let threshold = if n == p {
        2
    } else if n + 1 == p {
        3
    } else {
        return Ok(Verdict::unknown(RULE_PRIMITIVE_MORSE, "dimensions n = p or n = p - 1"));
    };
    if r < 2 {
        return Ok(Verdict::unknown(RULE_PRIMITIVE_MORSE, "a fold prism or immersion branch"));
    }
    for i in (0..r).rev() {
        if !is_morse_partner(f, i, policy)? {
            continue;
        }
        let others: Vec<usize> = (0..r).filter(|&j| j != i).collect();
        let f0 = f.select(&others)?;
        let cod = match ae_codim(&f0, policy) {
            Ok(c) => c.value,
            Err(Error::NotStabilized { .. }) => continue,
            Err(e) => return Err(e),
        };
        if cod != 1 {
            continue;
        }
        let base = Verdict::unknown(RULE_PRIMITIVE_MORSE, Hypothesis::Primitive.name())
            .with("codim(f0)", 1usize)
            .with("n", n);
        if !primitive {
            return Ok(base);
        }
        let ineq = Inequality::new("n", n.into(), ">", "threshold", threshold.into());
        if n > threshold {
            let mut v = Verdict::not_simple(RULE_PRIMITIVE_MORSE, ineq, vec![Hypothesis::Primitive.to_string()]);
            v.evidence = base.evidence;
            return Ok(v);
        }
        let mut v = Verdict::unknown(RULE_PRIMITIVE_MORSE, "dimension above the threshold");
        v.evidence = base.evidence;
        v.unverified_hypotheses.push(Hypothesis::Primitive.to_string());
        return Ok(v.with_inequality(ineq));
    }
    Ok(Verdict::unknown(
        RULE_PRIMITIVE_MORSE,
        "a codimension-one germ plus a fold prism or immersion",
    ))
}

/// Verdict of the augmentation-and-concatenation theorem for `{A_{F,φ}(f), g}`
/// where `f` has 𝒜ₑ-codimension `base_cod`.
pub fn gate_augconc(base_cod: usize, phi: &Poly<Q>, assertions: &Assertions) -> Verdict {
    if !is_quasi_homogeneous(phi) {
        return Verdict::unknown(RULE_AUGCONC, "phi quasi-homogeneous").with("codim(f)", base_cod);
    }
    let needed = [Hypothesis::DzCondition, Hypothesis::AugmentationSimple];
    let v = match base_cod {
        0 => Verdict::unknown(RULE_AUGCONC, "a base germ of positive codimension"),
        1 => {
            let missing: Vec<String> = needed
                .iter()
                .filter(|h| !assertions.has(**h))
                .map(|h| h.to_string())
                .collect();
            if missing.is_empty() {
                Verdict::simple(RULE_AUGCONC, assertions.names(&needed))
            } else {
                let mut v = Verdict::unknown(RULE_AUGCONC, missing[0].clone());
                v.unverified_hypotheses = missing;
                v
            }
        }
        c => {
            let ineq = Inequality::new("codim(f)", c.into(), ">", "1", 1usize.into());
            if assertions.has(Hypothesis::Transversality) {
                Verdict::not_simple(RULE_AUGCONC, ineq, vec![Hypothesis::Transversality.to_string()])
            } else {
                Verdict::unknown(RULE_AUGCONC, Hypothesis::Transversality.name()).with_inequality(ineq)
            }
        }
    };
    v.with("codim(f)", base_cod)
}

/// Stable partners for [`gate_aug_cusp`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartnerKind {
    /// A cuspidal edge (equidimensional).
    Cusp,
    /// Two transverse fold prisms (equidimensional).
    TwoFolds,
    /// Two transverse immersions (`n = p − 1`).
    TwoImmersions,
}

/// `{A_{F,φ}(f), g}` with `g` a cusp or two folds (`n = p`), or two
/// immersions (`n = p − 1`), is not simple once the multiplicity of the
/// augmentation exceeds `(n²−n+1)/(n−1)`, respectively `(n²+n)/(2n−1)`.
pub fn gate_aug_cusp(
    f_aug: &MultiGerm<Q>,
    partner: PartnerKind,
    policy: &StabilizationPolicy,
) -> Result<Verdict> {
    let (n, p) = (f_aug.n(), f_aug.p());
    let big = |v: usize| BigInt::from(v);
    let bound = match partner {
        PartnerKind::Cusp | PartnerKind::TwoFolds if n == p && n >= 2 => {
            Q::new(big(n * n - n + 1), big(n - 1))
        }
        PartnerKind::TwoImmersions if n + 1 == p && n >= 1 => Q::new(big(n * n + n), big(2 * n - 1)),
        _ => {
            return Ok(Verdict::unknown(
                RULE_AUG_CUSP,
                "partner kind compatible with the dimensions",
            ))
        }
    };
    let m0 = f_aug.multiplicity(policy)?;
    let ineq = Inequality::new("m0(augmentation)", m0.into(), ">", "bound", bound.clone().into());
    let v = if Q::from_integer(big(m0)) > bound {
        Verdict::not_simple(RULE_AUG_CUSP, ineq, vec![])
    } else {
        Verdict::unknown(RULE_AUG_CUSP, "simplicity within the multiplicity bound")
    };
    Ok(v.with("m0", m0).with("bound", bound))
}

/// Recognises `f = {f_aug, g}` with `g` one of the partners of
/// [`gate_aug_cusp`]; returns the index of `f_aug`.
fn split_aug_cusp(f: &MultiGerm<Q>, policy: &StabilizationPolicy) -> Result<Option<(usize, PartnerKind)>> {
    let (n, p, r) = (f.n(), f.p(), f.r());
    if r != 2 && r != 3 {
        return Ok(None);
    }
    for i in 0..r {
        let rest: Vec<usize> = (0..r).filter(|&j| j != i).collect();
        let g = f.select(&rest)?;
        let Some(t) = stable_type(&g, policy)? else {
            continue;
        };
        let kind = match (t.ks(), n == p, n + 1 == p) {
            ([2], true, _) => PartnerKind::Cusp,
            ([1, 1], true, _) => PartnerKind::TwoFolds,
            ([0, 0], _, true) => PartnerKind::TwoImmersions,
            _ => continue,
        };
        return Ok(Some((i, kind)));
    }
    Ok(None)
}

/// Data describing `f` as `{A_{F,φ}(f₀), g}` for the augmentation and
/// concatenation gate.
#[derive(Clone, Debug)]
pub struct AugConcData {
    pub base_codim: usize,
    pub phi: Poly<Q>,
}

/// One line of the report trace.
#[derive(Clone, Debug, Serialize)]
pub struct TraceEntry {
    pub gate: &'static str,
    pub verdict: Verdict,
}

/// Final verdict plus the verdict of every gate that ran.
#[derive(Clone, Debug, Serialize)]
pub struct SimplicityReport {
    pub verdict: Verdict,
    pub trace: Vec<TraceEntry>,
    pub atlas_matches: Vec<atlas::AtlasMatch>,
}

fn atlas_verdict(
    f: &MultiGerm<Q>,
    policy: &StabilizationPolicy,
) -> Result<(Verdict, Vec<atlas::AtlasMatch>)> {
    if !corank_ok(f) {
        return Ok((Verdict::unknown(RULE_ATLAS, "corank at most one"), vec![]));
    }
    let (inv, matches) = atlas::lookup(f, policy)?;
    let confirmed = matches.iter().find(|m| m.exact && m.codim_agrees());
    let v = if let Some(m) = confirmed {
        Verdict::simple(&format!("{RULE_ATLAS}: {} ({})", m.entry, m.params), vec![])
            .with("ae_codim", inv.ae_codim)
    } else if let Some(m) = matches.iter().find(|m| m.codim_agrees()) {
        Verdict::unknown(
            &format!("{RULE_ATLAS}: {} ({})", m.entry, m.params),
            format!("A-equivalence to the normal form {} ({})", m.entry, m.params),
        )
        .with("ae_codim", inv.ae_codim)
    } else if let Some(m) = matches.first() {
        Verdict::unknown(
            &format!("{RULE_ATLAS}: {} ({})", m.entry, m.params),
            format!(
                "catalog codimension {} of {} ({}) disagrees with the computed {}",
                m.expected_codim, m.entry, m.params, m.computed_codim
            ),
        )
        .with("ae_codim", inv.ae_codim)
    } else {
        Verdict::unknown(RULE_ATLAS, "membership in the atlas").with("ae_codim", inv.ae_codim)
    };
    Ok((v.with("m0", inv.m0), matches))
}

/// Runs every gate and the atlas lookup.
///
/// The first `NotSimple` verdict (in gate order) is the answer; otherwise
/// `Simple` comes only from an atlas match or the augmentation and
/// concatenation gate; otherwise `Unknown`, with the union of the missing
/// hypotheses.
pub fn simplicity_report(
    f: &MultiGerm<Q>,
    policy: &StabilizationPolicy,
    assertions: &Assertions,
    augconc: Option<&AugConcData>,
) -> Result<SimplicityReport> {
    let mut trace = vec![
        TraceEntry {
            gate: "nishimura",
            verdict: gate_nishimura(f, policy)?,
        },
        TraceEntry {
            gate: "branch-count",
            verdict: gate_branch_count(f, policy)?,
        },
        TraceEntry {
            gate: "tau-pairing",
            verdict: gate_tau_pairing(f, policy)?,
        },
        TraceEntry {
            gate: "primitive-plus-morse",
            verdict: gate_primitive_plus_morse(f, policy, assertions.has(Hypothesis::Primitive))?,
        },
    ];
    let aug_cusp = match split_aug_cusp(f, policy)? {
        Some((i, kind)) => {
            let fa = f.select(&[i])?;
            let v = gate_aug_cusp(&fa, kind, policy)?;
            if v.is_not_simple() && !assertions.has(Hypothesis::Augmentation) {
                let mut u = Verdict::unknown(RULE_AUG_CUSP, Hypothesis::Augmentation.name());
                u.evidence = v.evidence;
                u.inequality = v.inequality;
                u
            } else if v.is_not_simple() {
                let mut v = v;
                v.unverified_hypotheses.push(Hypothesis::Augmentation.to_string());
                v
            } else {
                v
            }
        }
        None => Verdict::unknown(RULE_AUG_CUSP, "a cusp, two folds or two immersions as partner"),
    };
    trace.push(TraceEntry {
        gate: "aug-cusp",
        verdict: aug_cusp,
    });
    if let Some(data) = augconc {
        trace.push(TraceEntry {
            gate: "augconc",
            verdict: gate_augconc(data.base_codim, &data.phi, assertions),
        });
    }
    let (atlas_v, matches) = atlas_verdict(f, policy)?;
    trace.push(TraceEntry {
        gate: "atlas",
        verdict: atlas_v,
    });

    let verdict = if let Some(t) = trace.iter().find(|t| t.verdict.kind == VerdictKind::NotSimple) {
        t.verdict.clone()
    } else if let Some(t) = trace.iter().find(|t| t.verdict.kind == VerdictKind::Simple) {
        t.verdict.clone()
    } else {
        let mut hyps: Vec<String> = Vec::new();
        for t in &trace {
            for h in &t.verdict.unverified_hypotheses {
                if !hyps.contains(h) {
                    hyps.push(h.clone());
                }
            }
        }
        Verdict {
            kind: VerdictKind::Unknown,
            rule: "no gate decided".into(),
            evidence: BTreeMap::new(),
            inequality: None,
            unverified_hypotheses: hyps,
        }
    };
    debug_assert!(verdict.kind != VerdictKind::NotSimple || verdict.inequality.is_some());
    debug_assert!(verdict.kind != VerdictKind::Unknown || !verdict.unverified_hypotheses.is_empty());
    Ok(SimplicityReport {
        verdict,
        trace,
        atlas_matches: matches,
    })
}
