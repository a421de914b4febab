//! Codimension of the extended and plain `A`-tangent spaces.
//!
//! For a truncation degree `d` the engine builds, as sparse rows over the
//! jet space `theta(f) / m^{d+1} theta(f)`, the generators
//!
//! * `tf`: `x^a * df_i/dx_j` placed in branch `i` only;
//! * `wf`: `(y^b o f_i) e_l` placed in every branch at once, since a target
//!   vector field acts on all branches simultaneously;
//!
//! and reports the number of columns left without a pivot. Columns are
//! numbered by (monomial, component, branch) with monomials in ascending
//! graded-lex order, and rows are reduced by their largest column, so the
//! free columns are the graded-lex least representatives of the normal
//! space.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::germ::MultiGerm;
use crate::ring::local::{stabilize, MonomialTable};
use crate::ring::{Echelon, Monomial, Poly, SparseRow, StabilizationPolicy};
use crate::scalar::{Field, Scalar};

/// Offset added to the multiplicity to get the default starting degree.
pub const JET_MARGIN: u32 = 4;

/// Which tangent space is being measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TangentKind {
    /// `theta(f) / (tf(theta_n) + wf(theta_p))`.
    Extended,
    /// `m_n theta(f) / (tf(m_n theta_n) + wf(m_p theta_p))`.
    Plain,
}

/// An element of `theta(f)`: one `p`-tuple of polynomials per branch.
#[derive(Clone, Debug, PartialEq)]
pub struct Section<T: Scalar> {
    pub entries: Vec<Vec<Poly<T>>>,
}

impl<T: Scalar> Section<T> {
    pub fn zero(r: usize, p: usize, n: usize) -> Self {
        Section {
            entries: vec![vec![Poly::zero(n); p]; r],
        }
    }

    /// The section `m e_component` in `branch`, zero elsewhere.
    pub fn unit(r: usize, p: usize, branch: usize, component: usize, m: Monomial) -> Self {
        let n = m.nvars();
        let mut s = Section::zero(r, p, n);
        s.entries[branch][component] = Poly::term(m, T::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Poly::is_zero)
    }
}

/// Result of a codimension computation.
#[derive(Clone, Debug)]
pub struct CodimResult<T: Scalar> {
    pub value: usize,
    pub degree_used: u32,
    /// Graded-lex least monomial sections spanning the normal space.
    pub basis: Vec<Section<T>>,
    /// `(degree, truncated value)` for every degree tried.
    pub history: Vec<(u32, usize)>,
}

/// Column bookkeeping for one truncation degree.
struct Layout {
    table: MonomialTable,
    r: usize,
    p: usize,
}

impl Layout {
    fn col(&self, mono: usize, component: usize, branch: usize) -> usize {
        (mono * self.p + component) * self.r + branch
    }

    fn ncols(&self) -> usize {
        self.table.len() * self.p * self.r
    }

    fn decode(&self, col: usize) -> (usize, usize, usize) {
        let branch = col % self.r;
        let rest = col / self.r;
        (rest / self.p, rest % self.p, branch)
    }
}

/// The truncated tangent space at one degree, kept for membership queries.
pub struct TruncatedTangent<F> {
    layout: Layout,
    echelon: Echelon<F>,
    kind: TangentKind,
    degree: u32,
}

impl<F: Field> TruncatedTangent<F> {
    pub fn build(f: &MultiGerm<F>, d: u32, kind: TangentKind) -> Self {
        let (n, p, r) = (f.n(), f.p(), f.r());
        let layout = Layout {
            table: MonomialTable::new(n, d),
            r,
            p,
        };
        let mut echelon = Echelon::new(layout.ncols());
        let min_shift = match kind {
            TangentKind::Extended => 0,
            TangentKind::Plain => 1,
        };

        // tf rows
        for (i, b) in f.branches().iter().enumerate() {
            for j in 0..n {
                let dcol: Vec<Poly<F>> = b.components().iter().map(|c| c.derivative(j)).collect();
                let Some(ord) = dcol.iter().filter_map(Poly::order).min() else {
                    continue;
                };
                if ord > d {
                    continue;
                }
                for shift in Monomial::up_to_degree(n, d - ord) {
                    if shift.degree() < min_shift {
                        continue;
                    }
                    let mut row: SparseRow<F> = Vec::new();
                    for (l, poly) in dcol.iter().enumerate() {
                        for (m, c) in poly.terms() {
                            let mm = m.mul(&shift);
                            if let Some(mi) = layout.table.index_of(&mm) {
                                row.push((layout.col(mi, l, i), c.clone()));
                            }
                        }
                    }
                    row.sort_unstable_by_key(|e| e.0);
                    echelon.insert(row);
                }
            }
        }

        // wf rows: compositions y^b o f_i, cached per branch
        let target_monos = Monomial::up_to_degree(p, d);
        let mut cache: Vec<HashMap<Monomial, Poly<F>>> = vec![HashMap::new(); r];
        for (i, b) in f.branches().iter().enumerate() {
            for beta in &target_monos {
                let value = match beta.exponents().iter().position(|&e| e > 0) {
                    None => Poly::one(n),
                    Some(c) => {
                        let mut prev = beta.exponents().to_vec();
                        prev[c] -= 1;
                        let prev = &cache[i][&Monomial::new(prev)];
                        prev.mul_trunc(b.component(c), d)
                    }
                };
                cache[i].insert(beta.clone(), value);
            }
        }
        for beta in &target_monos {
            if beta.degree() < min_shift {
                continue;
            }
            for l in 0..p {
                let mut row: SparseRow<F> = Vec::new();
                for (i, c) in cache.iter().enumerate() {
                    for (m, coeff) in c[beta].terms() {
                        if let Some(mi) = layout.table.index_of(m) {
                            row.push((layout.col(mi, l, i), coeff.clone()));
                        }
                    }
                }
                row.sort_unstable_by_key(|e| e.0);
                echelon.insert(row);
            }
        }

        TruncatedTangent {
            layout,
            echelon,
            kind,
            degree: d,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn counted(&self, col: usize) -> bool {
        match self.kind {
            TangentKind::Extended => true,
            TangentKind::Plain => self.layout.table.monomials[self.layout.decode(col).0].degree() > 0,
        }
    }

    /// Dimension of the truncated quotient.
    pub fn codim(&self) -> usize {
        self.free_columns().len()
    }

    fn free_columns(&self) -> Vec<usize> {
        self.echelon
            .free_columns()
            .into_iter()
            .filter(|&c| self.counted(c))
            .collect()
    }

    pub fn basis(&self) -> Vec<Section<F>> {
        self.free_columns()
            .into_iter()
            .map(|c| {
                let (mi, l, i) = self.layout.decode(c);
                Section::unit(
                    self.layout.r,
                    self.layout.p,
                    i,
                    l,
                    self.layout.table.monomials[mi].clone(),
                )
            })
            .collect()
    }

    fn section_row(&self, s: &Section<F>) -> SparseRow<F> {
        let mut row = Vec::new();
        for (i, comps) in s.entries.iter().enumerate() {
            for (l, poly) in comps.iter().enumerate() {
                for (m, c) in poly.terms() {
                    if let Some(mi) = self.layout.table.index_of(m) {
                        row.push((self.layout.col(mi, l, i), c.clone()));
                    }
                }
            }
        }
        row.sort_unstable_by_key(|e| e.0);
        row
    }

    /// Whether `s` lies in the tangent space modulo `m^{d+1} theta(f)`.
    pub fn contains(&self, s: &Section<F>) -> bool {
        self.echelon.contains(self.section_row(s))
    }

    /// Rank after adjoining `extra` sections; equals the number of counted
    /// columns exactly when they span the normal space.
    pub fn spans_with(&self, extra: &[Section<F>]) -> bool {
        let mut e = self.echelon.clone();
        for s in extra {
            e.insert(self.section_row(s));
        }
        e.free_columns().into_iter().all(|c| !self.counted(c))
    }
}

fn codim_of_kind<F: Field>(
    f: &MultiGerm<F>,
    policy: &StabilizationPolicy,
    kind: TangentKind,
) -> Result<CodimResult<F>> {
    let m0 = f.multiplicity(policy)? as u32;
    let res = stabilize(policy, m0 + JET_MARGIN, |d| {
        let t = TruncatedTangent::build(f, d, kind);
        Ok((t.codim(), t.basis()))
    })?;
    if res.payload.len() != res.value {
        return Err(Error::Internal("basis length differs from codimension".into()));
    }
    Ok(CodimResult {
        value: res.value,
        degree_used: res.degree_used,
        basis: res.payload,
        history: res.history,
    })
}

/// `A_e`-codimension.
pub fn ae_codim<F: Field>(f: &MultiGerm<F>, policy: &StabilizationPolicy) -> Result<CodimResult<F>> {
    codim_of_kind(f, policy, TangentKind::Extended)
}

/// `A`-codimension.
pub fn a_codim<F: Field>(f: &MultiGerm<F>, policy: &StabilizationPolicy) -> Result<CodimResult<F>> {
    codim_of_kind(f, policy, TangentKind::Plain)
}

pub fn is_stable<F: Field>(f: &MultiGerm<F>, policy: &StabilizationPolicy) -> Result<bool> {
    Ok(ae_codim(f, policy)?.value == 0)
}

/// Outcome of comparing both codimensions through Wilson's formula
/// `A_e-cod = A-cod + r(p - n) - p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WilsonCheck {
    Consistent { ae_codim: usize, a_codim: usize },
    Inconsistent { ae_codim: usize, a_codim: usize, predicted_ae: i64 },
    /// The formula only applies to germs of nonzero `A_e`-codimension.
    NotApplicable,
}

/// The `A_e`-codimension predicted from an `A`-codimension.
pub fn wilson_predicted_ae(a_codim: usize, r: usize, n: usize, p: usize) -> i64 {
    a_codim as i64 + r as i64 * (p as i64 - n as i64) - p as i64
}

pub fn wilson_check<F: Field>(f: &MultiGerm<F>, policy: &StabilizationPolicy) -> Result<WilsonCheck> {
    let ae = ae_codim(f, policy)?.value;
    if ae == 0 {
        return Ok(WilsonCheck::NotApplicable);
    }
    let a = a_codim(f, policy)?.value;
    let predicted = wilson_predicted_ae(a, f.r(), f.n(), f.p());
    if predicted == ae as i64 {
        Ok(WilsonCheck::Consistent {
            ae_codim: ae,
            a_codim: a,
        })
    } else {
        Ok(WilsonCheck::Inconsistent {
            ae_codim: ae,
            a_codim: a,
            predicted_ae: predicted,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Q, QPoly};

    fn vars3() -> (QPoly, QPoly, QPoly) {
        (Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2))
    }

    fn policy() -> StabilizationPolicy {
        StabilizationPolicy::default()
    }

    #[test]
    fn fold_is_stable() {
        let (x, y, z) = vars3();
        let f = MultiGerm::mono(3, vec![x, y, z.pow(2)]).unwrap();
        let res = ae_codim(&f, &policy()).unwrap();
        assert_eq!(res.value, 0);
        assert!(res.basis.is_empty());
        assert_eq!(wilson_check(&f, &policy()).unwrap(), WilsonCheck::NotApplicable);
    }

    #[test]
    fn five_one_has_codim_one() {
        let (x, y, z) = vars3();
        let g = &(&z.pow(5) + &(&x * &z)) + &(&y * &z.pow(2));
        let f = MultiGerm::mono(3, vec![x, y, g]).unwrap();
        assert_eq!(ae_codim(&f, &policy()).unwrap().value, 1);
        assert!(matches!(
            wilson_check(&f, &policy()).unwrap(),
            WilsonCheck::Consistent { ae_codim: 1, a_codim: 4 }
        ));
    }

    #[test]
    fn plane_curves() {
        let t = Poly::<Q>::var(1, 0);
        let cusp = MultiGerm::mono(1, vec![t.pow(2), t.pow(3)]).unwrap();
        assert_eq!(ae_codim(&cusp, &policy()).unwrap().value, 1);
        let b = MultiGerm::mono(1, vec![t.pow(2), t.pow(5)]).unwrap();
        assert_eq!(ae_codim(&b, &policy()).unwrap().value, 2);
        assert_eq!(a_codim(&b, &policy()).unwrap().value, 3);
    }

    #[test]
    fn basis_completes_the_tangent_space() {
        let t = Poly::<Q>::var(1, 0);
        let b = MultiGerm::mono(1, vec![t.pow(2), t.pow(5)]).unwrap();
        let res = ae_codim(&b, &policy()).unwrap();
        let tt = TruncatedTangent::build(&b, res.degree_used, TangentKind::Extended);
        assert!(tt.spans_with(&res.basis));
        assert!(!tt.spans_with(&res.basis[1..]));
        for s in &res.basis {
            assert!(!tt.contains(s));
        }
    }
}
