//! Dimensions of local algebras by jet truncation.
//!
//! `dim O_n / I` is computed as `dim O_n / (I + m^{d+1})` for increasing `d`
//! until the sequence settles. For an ideal the truncated sequence is the
//! Hilbert-Samuel function of the quotient, so one repeat already means it
//! has stabilized; the window is still honoured for uniformity with the
//! tangent-space engine.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::linalg::{Echelon, SparseRow};
use super::monomial::Monomial;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::Q;

/// Truncation schedule shared by every dimension computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationPolicy {
    /// Starting degree; `None` picks a per-computation default.
    pub d0: Option<u32>,
    /// Number of consecutive equal values that count as stable.
    pub window: u32,
    /// Hard cap on the truncation degree.
    pub d_max: u32,
}

impl Default for StabilizationPolicy {
    fn default() -> Self {
        StabilizationPolicy {
            d0: None,
            window: 2,
            d_max: 16,
        }
    }
}

impl StabilizationPolicy {
    pub fn with_max_degree(d_max: u32) -> Self {
        StabilizationPolicy {
            d_max,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.window < 1 {
            return Err(Error::InvalidPolicy("window must be at least 1".into()));
        }
        if self.d_max < 1 {
            return Err(Error::InvalidPolicy("d_max must be at least 1".into()));
        }
        if let Some(d0) = self.d0 {
            if d0 < 1 || d0 > self.d_max {
                return Err(Error::InvalidPolicy(format!(
                    "d0 = {d0} outside 1..={}",
                    self.d_max
                )));
            }
        }
        Ok(())
    }

    /// First degree to try given a computation-specific default.
    pub fn start(&self, default_d0: u32) -> u32 {
        let latest = self.d_max.saturating_sub(self.window - 1).max(1);
        self.d0.unwrap_or(default_d0).clamp(1, latest)
    }
}

/// Outcome of a stabilized truncated computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilized<T> {
    pub value: usize,
    pub degree_used: u32,
    pub history: Vec<(u32, usize)>,
    pub payload: T,
}

/// Runs `step(d)` for `d = start, start+1, ...` until `window` consecutive
/// values agree. The payload of the first degree of the stable run is kept.
pub fn stabilize<T>(
    policy: &StabilizationPolicy,
    default_d0: u32,
    mut step: impl FnMut(u32) -> Result<(usize, T)>,
) -> Result<Stabilized<T>> {
    policy.validate()?;
    let mut history = Vec::new();
    let mut run = 0u32;
    let mut run_start: Option<(u32, usize, T)> = None;
    let mut d = policy.start(default_d0);
    while d <= policy.d_max {
        let (value, payload) = step(d)?;
        history.push((d, value));
        match &run_start {
            Some((_, v, _)) if *v == value => run += 1,
            _ => {
                run = 1;
                run_start = Some((d, value, payload));
            }
        }
        if run >= policy.window {
            let (deg, value, payload) = run_start.expect("run has a start");
            return Ok(Stabilized {
                value,
                degree_used: deg,
                history,
                payload,
            });
        }
        d += 1;
    }
    Err(Error::NotStabilized {
        d_max: policy.d_max,
        last: history.iter().map(|&(_, v)| v).collect(),
    })
}

/// Index of all monomials up to a degree, ascending graded-lex.
#[derive(Clone, Debug)]
pub struct MonomialTable {
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialTable {
    pub fn new(nvars: usize, deg: u32) -> Self {
        let monomials = Monomial::up_to_degree(nvars, deg);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialTable { monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Truncated quotient dimension at one degree, with the standard monomials.
pub fn truncated_quotient<F: Field>(generators: &[Poly<F>], nvars: usize, d: u32) -> Vec<Monomial> {
    let table = MonomialTable::new(nvars, d);
    let mut ech = Echelon::<F>::new(table.len());
    for g in generators {
        let Some(ord) = g.order() else { continue };
        if ord > d {
            continue;
        }
        for shift in Monomial::up_to_degree(nvars, d - ord) {
            let row: SparseRow<F> = g
                .mul_monomial(&shift, &F::one())
                .terms()
                .filter_map(|(m, c)| table.index_of(m).map(|i| (i, c.clone())))
                .collect();
            ech.insert(row);
        }
    }
    ech.free_columns()
        .into_iter()
        .map(|c| table.monomials[c].clone())
        .collect()
}

/// `dim O_n / <generators>`, or `NotStabilized`.
pub fn quotient_dim<F: Field>(
    generators: &[Poly<F>],
    nvars: usize,
    policy: &StabilizationPolicy,
) -> Result<usize> {
    let gens = checked_generators(generators, nvars)?;
    let res = stabilize(policy, 1, |d| {
        Ok((truncated_quotient(&gens, nvars, d).len(), ()))
    })?;
    Ok(res.value)
}

/// Standard monomial basis of `O_n / <generators>` (graded-lex least).
pub fn quotient_basis<F: Field>(
    generators: &[Poly<F>],
    nvars: usize,
    policy: &StabilizationPolicy,
) -> Result<Vec<Monomial>> {
    let gens = checked_generators(generators, nvars)?;
    let res = stabilize(policy, 1, |d| {
        let basis = truncated_quotient(&gens, nvars, d);
        Ok((basis.len(), basis))
    })?;
    Ok(res.payload)
}

fn checked_generators<F: Field>(generators: &[Poly<F>], nvars: usize) -> Result<Vec<Poly<F>>> {
    let mut gens = Vec::new();
    for g in generators {
        if g.nvars() != nvars {
            return Err(Error::ArityMismatch {
                expected: nvars,
                got: g.nvars(),
            });
        }
        if !g.is_zero() {
            gens.push(g.clone());
        }
    }
    if gens.is_empty() {
        return Err(Error::NotStabilized {
            d_max: 0,
            last: Vec::new(),
        });
    }
    Ok(gens)
}

/// Milnor number: colength of the Jacobian ideal.
pub fn milnor<F: Field>(p: &Poly<F>, policy: &StabilizationPolicy) -> Result<usize> {
    if !p.vanishes_at_origin() {
        return Err(Error::NotVanishing {
            what: p.to_string(),
        });
    }
    quotient_dim(&p.gradient(), p.nvars(), policy)
}

/// Tjurina number: colength of `<P, dP/dx_1, ..., dP/dx_n>`.
pub fn tjurina<F: Field>(p: &Poly<F>, policy: &StabilizationPolicy) -> Result<usize> {
    if !p.vanishes_at_origin() {
        return Err(Error::NotVanishing {
            what: p.to_string(),
        });
    }
    let mut gens = vec![p.clone()];
    gens.extend(p.gradient());
    quotient_dim(&gens, p.nvars(), policy)
}

/// Positive rational weights `w` with `sum_i w_i a_i = 1` for every
/// monomial `x^a` of `p`, if such weights exist in the given coordinates.
///
/// When the linear system leaves weights free (a variable that never
/// occurs, or too few distinct monomials), a short list of common values is
/// tried for the free weights.
pub fn quasi_homogeneous_weights(p: &Poly<Q>) -> Option<Vec<Q>> {
    let n = p.nvars();
    if p.is_zero() || !p.vanishes_at_origin() {
        return None;
    }
    // augmented rows [a_1 .. a_n | 1]
    let mut rows: Vec<Vec<Q>> = p
        .terms()
        .map(|(m, _)| {
            let mut r: Vec<Q> = m
                .exponents()
                .iter()
                .map(|&e| Q::from_integer((e as i64).into()))
                .collect();
            r.push(Q::one());
            r
        })
        .collect();
    // reduced row echelon form
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = rows[r][c].recip();
        for k in 0..=n {
            rows[r][k] = &rows[r][k] * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..=n {
                    let v = &rows[r][k] * &f;
                    rows[i][k] = &rows[i][k] - &v;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    // inconsistent: a zero row with nonzero right-hand side
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let candidates: Vec<Q> = if free.is_empty() {
        vec![Q::zero()]
    } else {
        let mut v: Vec<Q> = (2..=12).map(|d| Q::new(1.into(), d.into())).collect();
        v.push(Q::one());
        v
    };
    for t in candidates {
        let mut w = vec![Q::zero(); n];
        for &f in &free {
            w[f] = t.clone();
        }
        for (i, &c) in pivot_cols.iter().enumerate() {
            let mut v = rows[i][n].clone();
            for &f in &free {
                v -= &rows[i][f] * &t;
            }
            w[c] = v;
        }
        if w.iter().all(|x| x.is_positive()) {
            return Some(w);
        }
    }
    None
}

pub fn is_quasi_homogeneous(p: &Poly<Q>) -> bool {
    quasi_homogeneous_weights(p).is_some()
}
