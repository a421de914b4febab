//! Multigerm data model and first-order invariants.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::linalg::dense_rank;
use crate::ring::{default_var_names, quotient_dim, Poly, StabilizationPolicy};
use crate::scalar::{Field, Scalar};

/// One branch `f_i : (K^n, 0) -> (K^p, 0)` of a multigerm.
///
/// Branches are stored translated to the origin in source and target; the
/// constructor refuses components with a constant term.
#[derive(Clone, Debug)]
pub struct Branch<T: Scalar> {
    n: usize,
    components: Vec<Poly<T>>,
    pub label: Option<String>,
}

impl<T: Scalar> PartialEq for Branch<T> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.components == other.components
    }
}

impl<T: Scalar> Branch<T> {
    pub fn new(n: usize, components: Vec<Poly<T>>) -> Result<Self> {
        Self::labelled(n, components, None)
    }

    pub fn labelled(n: usize, components: Vec<Poly<T>>, label: Option<String>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidGerm("a branch needs at least one component".into()));
        }
        for (i, c) in components.iter().enumerate() {
            if c.nvars() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    got: c.nvars(),
                });
            }
            if !c.vanishes_at_origin() {
                return Err(Error::NonzeroConstant {
                    branch: 0,
                    component: i,
                });
            }
        }
        Ok(Branch {
            n,
            components,
            label,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly<T>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Poly<T> {
        &self.components[i]
    }

    /// Precomposes with a source map given by one polynomial per variable.
    pub fn compose_source(&self, assignment: &[Poly<T>]) -> Result<Branch<T>> {
        let comps = self
            .components
            .iter()
            .map(|c| c.substitute(assignment))
            .collect::<Result<Vec<_>>>()?;
        let n = assignment.first().map(Poly::nvars).unwrap_or(0);
        Branch::labelled(n, comps, self.label.clone())
    }

    /// Postcomposes with a target map `K^p -> K^q` given by `q` polynomials
    /// in `p` variables.
    pub fn compose_target(&self, target_map: &[Poly<T>]) -> Result<Branch<T>> {
        let comps = target_map
            .iter()
            .map(|g| g.substitute(&self.components))
            .collect::<Result<Vec<_>>>()?;
        Branch::labelled(self.n, comps, self.label.clone())
    }

    /// Jacobian matrix at the origin, `p x n`.
    pub fn linear_part(&self) -> Vec<Vec<T>> {
        self.components
            .iter()
            .map(|c| (0..self.n).map(|v| c.linear_coeff(v)).collect())
            .collect()
    }
}

impl<T: Field> Branch<T> {
    pub fn corank(&self) -> usize {
        let r = dense_rank(self.linear_part());
        self.n.min(self.p()) - r
    }

    /// `dim O_n / f^*(m_p)`.
    pub fn multiplicity(&self, policy: &StabilizationPolicy) -> Result<usize> {
        quotient_dim(&self.components, self.n, policy)
    }
}

/// A multigerm `f = {f_1, ..., f_r} : (K^n, S) -> (K^p, 0)`.
///
/// Every branch uses its own copy of the `n` source variables; the target
/// is shared. Variable names are carried for printing only and do not take
/// part in equality.
#[derive(Clone, Debug)]
pub struct MultiGerm<T: Scalar> {
    branches: Vec<Branch<T>>,
    var_names: Vec<String>,
}

impl<T: Scalar> PartialEq for MultiGerm<T> {
    fn eq(&self, other: &Self) -> bool {
        self.branches == other.branches
    }
}

impl<T: Scalar> MultiGerm<T> {
    pub fn new(branches: Vec<Branch<T>>) -> Result<Self> {
        let n = branches.first().map(Branch::n).unwrap_or(0);
        Self::with_names(branches, default_var_names(n))
    }

    pub fn with_names(branches: Vec<Branch<T>>, var_names: Vec<String>) -> Result<Self> {
        let Some(first) = branches.first() else {
            return Err(Error::InvalidGerm("a multigerm needs at least one branch".into()));
        };
        let (n, p) = (first.n(), first.p());
        for b in &branches {
            if b.n() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    got: b.n(),
                });
            }
            if b.p() != p {
                return Err(Error::ArityMismatch {
                    expected: p,
                    got: b.p(),
                });
            }
        }
        if n + 1 < p {
            return Err(Error::UnsupportedDimensions {
                n,
                p,
                reason: "source dimension must be at least p - 1".into(),
            });
        }
        if var_names.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: var_names.len(),
            });
        }
        Ok(MultiGerm {
            branches,
            var_names,
        })
    }

    /// Monogerm from its components.
    pub fn mono(n: usize, components: Vec<Poly<T>>) -> Result<Self> {
        MultiGerm::new(vec![Branch::new(n, components)?])
    }

    /// Multigerm from per-branch component lists; reports the offending
    /// branch index on constant terms.
    pub fn from_components(n: usize, branches: Vec<Vec<Poly<T>>>) -> Result<Self> {
        let bs = branches
            .into_iter()
            .enumerate()
            .map(|(i, comps)| {
                Branch::new(n, comps).map_err(|e| match e {
                    Error::NonzeroConstant { component, .. } => Error::NonzeroConstant {
                        branch: i,
                        component,
                    },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MultiGerm::new(bs)
    }

    pub fn n(&self) -> usize {
        self.branches[0].n()
    }

    pub fn p(&self) -> usize {
        self.branches[0].p()
    }

    pub fn r(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[Branch<T>] {
        &self.branches
    }

    pub fn branch(&self, i: usize) -> &Branch<T> {
        &self.branches[i]
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn into_branches(self) -> Vec<Branch<T>> {
        self.branches
    }

    /// Sub-multigerm on the given branch indices (in that order).
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let bs = indices.iter().map(|&i| self.branches[i].clone()).collect();
        MultiGerm::with_names(bs, self.var_names.clone())
    }

    /// Branches of `self` followed by those of `other`.
    pub fn join(&self, other: &MultiGerm<T>) -> Result<Self> {
        let mut bs = self.branches.clone();
        bs.extend(other.branches.iter().cloned());
        MultiGerm::with_names(bs, self.var_names.clone())
    }

    /// Applies one common target map to every branch.
    pub fn compose_target(&self, target_map: &[Poly<T>]) -> Result<Self> {
        let bs = self
            .branches
            .iter()
            .map(|b| b.compose_target(target_map))
            .collect::<Result<Vec<_>>>()?;
        MultiGerm::new(bs)
    }

    /// Applies a source map to branch `i` only.
    pub fn compose_source(&self, i: usize, assignment: &[Poly<T>]) -> Result<Self> {
        let mut bs = self.branches.clone();
        bs[i] = bs[i].compose_source(assignment)?;
        MultiGerm::with_names(bs, self.var_names.clone())
    }
}

impl<T: Field> MultiGerm<T> {
    /// Sum of the branch multiplicities.
    pub fn multiplicity(&self, policy: &StabilizationPolicy) -> Result<usize> {
        let mut total = 0;
        for b in &self.branches {
            total += b.multiplicity(policy)?;
        }
        Ok(total)
    }

    pub fn coranks(&self) -> Vec<usize> {
        self.branches.iter().map(Branch::corank).collect()
    }

    /// Type `A_{k_1,...,k_r}` with `k_i = m_0(f_i) - 1`.
    pub fn recognize_type(&self, policy: &StabilizationPolicy) -> Result<AType> {
        let mut ks = Vec::with_capacity(self.r());
        for (i, b) in self.branches.iter().enumerate() {
            let c = b.corank();
            if c > 1 {
                return Err(Error::NotCorankOne {
                    branch: i,
                    corank: c,
                });
            }
            ks.push(b.multiplicity(policy)? - 1);
        }
        Ok(AType::new(ks))
    }
}

/// Label `A_{k_1,...,k_r}` of a corank-1 multigerm, sorted descending.
/// Serializes as its label, e.g. `"A_{2,1}"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AType {
    ks: Vec<usize>,
}

impl AType {
    pub fn new(mut ks: Vec<usize>) -> Self {
        ks.sort_unstable_by(|a, b| b.cmp(a));
        AType { ks }
    }

    pub fn ks(&self) -> &[usize] {
        &self.ks
    }

    pub fn branch_count(&self) -> usize {
        self.ks.len()
    }

    /// `sum k_i + r`, the multiplicity of any germ of this type.
    pub fn multiplicity(&self) -> usize {
        self.ks.iter().sum::<usize>() + self.ks.len()
    }

    /// Largest `k`, the `k_1` of the canonical ordering.
    pub fn top(&self) -> usize {
        self.ks.first().copied().unwrap_or(0)
    }

    /// Codimension of the analytic stratum of a stable germ of this type.
    ///
    /// Equidimensional branches contribute `k`; in `(n, n+1)` an `A_0`
    /// contributes 1 and `A_k` with `k >= 1` contributes `2k + 1`.
    pub fn stratum_codim(&self, n: usize, p: usize) -> Result<usize> {
        if n == p {
            Ok(self.ks.iter().sum())
        } else if n + 1 == p {
            Ok(self
                .ks
                .iter()
                .map(|&k| if k == 0 { 1 } else { 2 * k + 1 })
                .sum())
        } else {
            Err(Error::UnsupportedDimensions {
                n,
                p,
                reason: "stratum dimension is only known for n = p and n = p - 1".into(),
            })
        }
    }
}

impl fmt::Display for AType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ks.iter().map(|k| k.to_string()).collect();
        if parts.len() == 1 {
            write!(f, "A_{}", parts[0])
        } else {
            write!(f, "A_{{{}}}", parts.join(","))
        }
    }
}

impl Serialize for AType {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Dimension of the analytic stratum of the stable multigerm of type `t`.
pub fn stratum_dim(t: &AType, n: usize, p: usize) -> Result<usize> {
    let codim = t.stratum_codim(n, p)?;
    if codim > p {
        return Err(Error::NotStableType {
            label: t.to_string(),
            n,
            p,
        });
    }
    Ok(p - codim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Q, QPoly};

    fn v(n: usize, i: usize) -> QPoly {
        Poly::var(n, i)
    }

    fn fold() -> MultiGerm<Q> {
        MultiGerm::mono(3, vec![v(3, 0), v(3, 1), v(3, 2).pow(2)]).unwrap()
    }

    fn cusp_edge() -> MultiGerm<Q> {
        let (y, z) = (v(3, 1), v(3, 2));
        MultiGerm::mono(3, vec![v(3, 0), y.clone(), &z.pow(3) + &(&y * &z)]).unwrap()
    }

    fn policy() -> StabilizationPolicy {
        StabilizationPolicy::default()
    }

    #[test]
    fn corank_examples() {
        assert_eq!(fold().branch(0).corank(), 1);
        let imm = Branch::new(2, vec![v(2, 0), v(2, 1), Poly::zero(2)]).unwrap();
        assert_eq!(imm.corank(), 0);
        let b = Branch::new(2, vec![v(2, 0).pow(2), v(2, 1).pow(2)]).unwrap();
        assert_eq!(b.corank(), 2);
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(fold().multiplicity(&policy()).unwrap(), 2);
        let t = v(1, 0);
        let curve = MultiGerm::mono(1, vec![t.pow(2), t.pow(3)]).unwrap();
        assert_eq!(curve.multiplicity(&policy()).unwrap(), 2);
        let bigerm = cusp_edge().join(&fold()).unwrap();
        assert_eq!(bigerm.multiplicity(&policy()).unwrap(), 5);
    }

    #[test]
    fn recognize_examples() {
        assert_eq!(cusp_edge().recognize_type(&policy()).unwrap(), AType::new(vec![2]));
        let imm = MultiGerm::mono(2, vec![v(2, 0), v(2, 1), Poly::zero(2)]).unwrap();
        assert_eq!(imm.recognize_type(&policy()).unwrap(), AType::new(vec![0]));
        let (x, y, z) = (v(3, 0), v(3, 1), v(3, 2));
        let two_folds = MultiGerm::from_components(
            3,
            vec![
                vec![x.clone(), y.clone(), z.pow(2)],
                vec![x.clone(), y.clone(), &z.pow(2) + &x],
            ],
        )
        .unwrap();
        assert_eq!(two_folds.recognize_type(&policy()).unwrap(), AType::new(vec![1, 1]));
    }

    #[test]
    fn corank_two_is_rejected() {
        let g = MultiGerm::mono(2, vec![v(2, 0).pow(2), v(2, 1).pow(2)]).unwrap();
        assert!(matches!(
            g.recognize_type(&policy()),
            Err(Error::NotCorankOne { branch: 0, corank: 2 })
        ));
    }

    #[test]
    fn stratum_dims() {
        assert_eq!(stratum_dim(&AType::new(vec![2]), 3, 3).unwrap(), 1);
        assert_eq!(stratum_dim(&AType::new(vec![1, 1, 1]), 3, 3).unwrap(), 0);
        assert_eq!(stratum_dim(&AType::new(vec![1]), 2, 3).unwrap(), 0);
        assert_eq!(stratum_dim(&AType::new(vec![0]), 2, 3).unwrap(), 2);
        assert!(matches!(
            stratum_dim(&AType::new(vec![2, 2]), 3, 3),
            Err(Error::NotStableType { .. })
        ));
        assert!(matches!(
            stratum_dim(&AType::new(vec![1]), 3, 2),
            Err(Error::UnsupportedDimensions { .. })
        ));
    }

    #[test]
    fn constant_terms_are_rejected() {
        let one = Poly::<Q>::one(2);
        let err = MultiGerm::from_components(2, vec![vec![v(2, 0), v(2, 1)], vec![v(2, 0), &v(2, 1) + &one]])
            .unwrap_err();
        assert_eq!(err, Error::NonzeroConstant { branch: 1, component: 1 });
    }

    #[test]
    fn mismatched_branches_are_rejected() {
        let b1 = Branch::new(2, vec![v(2, 0), v(2, 1)]).unwrap();
        let b2 = Branch::new(2, vec![v(2, 0), v(2, 1), Poly::zero(2)]).unwrap();
        assert!(MultiGerm::new(vec![b1, b2]).is_err());
    }

    #[test]
    fn atype_display_and_order() {
        let t = AType::new(vec![1, 3, 2]);
        assert_eq!(t.ks(), &[3, 2, 1]);
        assert_eq!(t.to_string(), "A_{3,2,1}");
        assert_eq!(AType::new(vec![2]).to_string(), "A_2");
        assert_eq!(t.multiplicity(), 9);
    }
}
