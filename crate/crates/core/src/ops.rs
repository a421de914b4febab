//! Constructions that build new multigerms out of stable unfoldings:
//! augmentation, the three concatenations, and the simultaneous
//! augmentation-and-concatenation.
//!
//! Coordinate conventions are fixed here once and for all: unfolding
//! parameters are the *last* `s` source variables and the *last* `s` target
//! coordinates, pass-through blocks come first and freshly adjoined
//! variables come last.

use crate::error::{Error, Result};
use crate::germ::{Branch, MultiGerm};
use crate::ring::{default_var_names, Poly, StabilizationPolicy};
use crate::scalar::{Field, Scalar};
use crate::tangent::ae_codim;

/// An `s`-parameter unfolding `F(x, λ) = (f_λ(x), λ)` of a multigerm `f`.
#[derive(Clone, Debug)]
pub struct Unfolding<T: Scalar> {
    base: MultiGerm<T>,
    total: MultiGerm<T>,
    s: usize,
    verified: bool,
}

impl<T: Scalar> Unfolding<T> {
    /// Wraps `total` without checking that it is stable. The parameters
    /// must already be the last `s` coordinates.
    pub fn unchecked(total: MultiGerm<T>, s: usize) -> Result<Self> {
        let (n_tot, p_tot) = (total.n(), total.p());
        if s == 0 || s > n_tot || s > p_tot {
            return Err(Error::InvalidUnfolding(format!(
                "{s} parameters do not fit a germ ({n_tot},{p_tot})"
            )));
        }
        let (n, p) = (n_tot - s, p_tot - s);
        for (i, b) in total.branches().iter().enumerate() {
            for j in 0..s {
                if *b.component(p + j) != Poly::var(n_tot, n + j) {
                    return Err(Error::InvalidUnfolding(format!(
                        "branch {i}: target coordinate {} is not the parameter {}",
                        p + j,
                        total.var_names()[n + j]
                    )));
                }
            }
        }
        // base: drop the pass-through block and set the parameters to zero
        let assignment: Vec<Poly<T>> = (0..n_tot)
            .map(|v| if v < n { Poly::var(n, v) } else { Poly::zero(n) })
            .collect();
        let branches = total
            .branches()
            .iter()
            .map(|b| {
                let comps = b.components()[..p]
                    .iter()
                    .map(|c| c.substitute(&assignment))
                    .collect::<Result<Vec<_>>>()?;
                Branch::labelled(n, comps, b.label.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        let base = MultiGerm::with_names(branches, total.var_names()[..n].to_vec())?;
        Ok(Unfolding {
            base,
            total,
            s,
            verified: false,
        })
    }

    /// Unfolding whose parameters sit at arbitrary positions; they are
    /// moved to the end before wrapping.
    pub fn unchecked_with_params(
        total: MultiGerm<T>,
        source_params: &[usize],
        target_params: &[usize],
    ) -> Result<Self> {
        let (n_tot, p_tot) = (total.n(), total.p());
        if source_params.len() != target_params.len()
            || source_params.iter().any(|&v| v >= n_tot)
            || target_params.iter().any(|&c| c >= p_tot)
        {
            return Err(Error::InvalidUnfolding("parameter indices out of range".into()));
        }
        let src_order = move_to_end(n_tot, source_params)?;
        let tgt_order = move_to_end(p_tot, target_params)?;
        // new variable k is old variable src_order[k]
        let mut old_to_new = vec![0; n_tot];
        for (new, &old) in src_order.iter().enumerate() {
            old_to_new[old] = new;
        }
        let branches = total
            .branches()
            .iter()
            .map(|b| {
                let comps = tgt_order
                    .iter()
                    .map(|&c| b.component(c).remap(&old_to_new, n_tot))
                    .collect();
                Branch::labelled(n_tot, comps, b.label.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        let names = src_order.iter().map(|&v| total.var_names()[v].clone()).collect();
        Self::unchecked(MultiGerm::with_names(branches, names)?, source_params.len())
    }

    pub fn base(&self) -> &MultiGerm<T> {
        &self.base
    }

    pub fn total(&self) -> &MultiGerm<T> {
        &self.total
    }

    pub fn params(&self) -> usize {
        self.s
    }

    /// Whether stability of the total germ was verified by the engine.
    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// `f_λ` as polynomials in `(x, λ)`: the total germ without its
    /// pass-through block.
    fn family(&self) -> Vec<Vec<Poly<T>>> {
        let p = self.base.p();
        self.total
            .branches()
            .iter()
            .map(|b| b.components()[..p].to_vec())
            .collect()
    }
}

impl<F: Field> Unfolding<F> {
    /// Wraps `total` after checking that it is 𝒜ₑ-stable.
    pub fn new(total: MultiGerm<F>, s: usize, policy: &StabilizationPolicy) -> Result<Self> {
        let mut u = Self::unchecked(total, s)?;
        u.verify(policy)?;
        Ok(u)
    }

    /// Checks stability of the total germ, marking the unfolding verified.
    pub fn verify(&mut self, policy: &StabilizationPolicy) -> Result<()> {
        let codim = ae_codim(&self.total, policy)?.value;
        if codim != 0 {
            return Err(Error::UnstableUnfolding { codim });
        }
        self.verified = true;
        Ok(())
    }
}

fn move_to_end(len: usize, moved: &[usize]) -> Result<Vec<usize>> {
    let mut seen = vec![false; len];
    for &i in moved {
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidUnfolding(format!("index {i} listed twice")));
        }
    }
    let mut order: Vec<usize> = (0..len).filter(|&i| !seen[i]).collect();
    order.extend_from_slice(moved);
    Ok(order)
}

fn fresh_names(existing: &[String], q: usize) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(q);
    let taken = |c: &str, out: &[String]| existing.iter().chain(out).any(|e| e == c);
    let mut candidates = ["z", "w", "v", "u", "t"].iter().map(|s| s.to_string());
    let mut k = 1;
    while out.len() < q {
        let c = candidates.next().unwrap_or_else(|| {
            k += 1;
            format!("z{}", k - 1)
        });
        if !taken(&c, &out) {
            out.push(c);
        }
    }
    out
}

/// Names for a germ whose first `keep` variables come from `names`.
fn extended_names(names: &[String], keep: usize, q: usize) -> Vec<String> {
    let n = keep + q;
    if names[..keep] == default_var_names(keep)[..] && n <= 3 {
        return default_var_names(n);
    }
    let mut out = names[..keep].to_vec();
    let extra = fresh_names(&out, q);
    out.extend(extra);
    out
}

/// The stable partner adjoined by the concatenations: on `K^nn -> K^pp`,
/// identity into the first `pp - 1` targets and `Σ v²` over the remaining
/// source variables (a prism on a Morse function) into the last target, or
/// the immersion `X ↦ (X, 0)` when `nn = pp - 1`.
pub fn fold_partner<T: Scalar>(nn: usize, pp: usize) -> Result<Branch<T>> {
    if pp == 0 || nn + 1 < pp {
        return Err(Error::UnsupportedDimensions {
            n: nn,
            p: pp,
            reason: "no prism or immersion partner in these dimensions".into(),
        });
    }
    let mut comps: Vec<Poly<T>> = (0..pp - 1).map(|i| Poly::var(nn, i)).collect();
    let mut last = Poly::zero(nn);
    for v in pp - 1..nn {
        last = &last + &Poly::var(nn, v).pow(2);
    }
    comps.push(last);
    Branch::labelled(nn, comps, Some(if nn >= pp { "fold" } else { "immersion" }.into()))
}

/// Augmentation `(x, z) ↦ (f_{g(z)}(x), z)` of a one-parameter unfolding by
/// `g` in `q` fresh variables.
pub fn augment<T: Scalar>(u: &Unfolding<T>, g: &Poly<T>) -> Result<MultiGerm<T>> {
    if u.params() != 1 {
        return Err(Error::InvalidUnfolding(format!(
            "augmentation needs a one-parameter unfolding, got {}",
            u.params()
        )));
    }
    if !g.vanishes_at_origin() {
        return Err(Error::NonzeroConstant {
            branch: 0,
            component: 0,
        });
    }
    let (n, q) = (u.base().n(), g.nvars());
    let nn = n + q;
    // x_i ↦ x_i, λ ↦ g(z)
    let mut assignment: Vec<Poly<T>> = (0..n).map(|v| Poly::var(nn, v)).collect();
    let shift: Vec<usize> = (n..nn).collect();
    assignment.push(g.remap(&shift, nn));
    let branches = u
        .family()
        .iter()
        .zip(u.total().branches())
        .map(|(comps, b)| {
            let mut out = comps
                .iter()
                .map(|c| c.substitute(&assignment))
                .collect::<Result<Vec<_>>>()?;
            out.extend((n..nn).map(|v| Poly::var(nn, v)));
            Branch::labelled(nn, out, b.label.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    MultiGerm::with_names(branches, extended_names(u.total().var_names(), n, q))
}

/// Monic concatenation `{F, g}` with `g` the prism on a Morse function, or
/// the immersion when the total germ has `n = p - 1`.
pub fn monic_concat<T: Scalar>(u: &Unfolding<T>) -> Result<MultiGerm<T>> {
    if u.params() != 1 {
        return Err(Error::InvalidUnfolding(
            "monic concatenation needs a one-parameter unfolding".into(),
        ));
    }
    let total = u.total();
    let partner = fold_partner(total.n(), total.p())?;
    total.join(&MultiGerm::with_names(vec![partner], total.var_names().to_vec())?)
}

/// Binary concatenation of one-parameter unfoldings of `f: (a,b)` and
/// `g: (c,d)` with `a - b = c - d`:
/// `(y, u, X) ↦ (f_u(y), u, X)` and `(Y, u, x) ↦ (Y, u, g_u(x))`.
///
/// Each branch has its own source, so the variables are numbered per branch
/// in the order in which they first appear in its components.
pub fn binary_concat<T: Scalar>(u: &Unfolding<T>, v: &Unfolding<T>) -> Result<MultiGerm<T>> {
    if u.params() != 1 || v.params() != 1 {
        return Err(Error::InvalidUnfolding(
            "binary concatenation needs one-parameter unfoldings".into(),
        ));
    }
    let (a, b) = (u.base().n(), u.base().p());
    let (c, d) = (v.base().n(), v.base().p());
    if a + d != b + c {
        return Err(Error::UnsupportedDimensions {
            n: a + d + 1,
            p: b + c + 1,
            reason: format!("f is ({a},{b}) and g is ({c},{d}); n - p must agree"),
        });
    }
    let nn = a + d + 1;
    // first branch: source (y in K^a, u, X in K^d)
    let asg_f: Vec<Poly<T>> = (0..=a).map(|i| Poly::var(nn, i)).collect();
    let mut first = Vec::with_capacity(b + d + 1);
    for comp in &u.family()[0] {
        first.push(comp.substitute(&asg_f)?);
    }
    first.push(Poly::var(nn, a));
    first.extend((0..d).map(|i| Poly::var(nn, a + 1 + i)));
    // second branch: source (Y in K^b, u, x in K^c)
    let asg_g: Vec<Poly<T>> = (0..c)
        .map(|i| Poly::var(nn, b + 1 + i))
        .chain(std::iter::once(Poly::var(nn, b)))
        .collect();
    let mut second: Vec<Poly<T>> = (0..=b).map(|i| Poly::var(nn, i)).collect();
    for comp in &v.family()[0] {
        second.push(comp.substitute(&asg_g)?);
    }
    if u.base().r() != 1 || v.base().r() != 1 {
        return Err(Error::InvalidUnfolding(
            "binary concatenation is defined for monogerms".into(),
        ));
    }
    MultiGerm::new(vec![Branch::new(nn, first)?, Branch::new(nn, second)?])
}

/// Generalised concatenation `{F, Id × ḡ}` of an `s`-parameter unfolding
/// with a stable germ `ḡ : (n - p + s, s)`; the identity block comes first.
pub fn generalised_concat<T: Scalar>(
    u: &Unfolding<T>,
    gbar: &MultiGerm<T>,
) -> Result<MultiGerm<T>> {
    let total = u.total();
    let (nn, pp, s) = (total.n(), total.p(), u.params());
    if s >= pp {
        return Err(Error::UnsupportedDimensions {
            n: nn,
            p: pp,
            reason: format!("{s} parameters leave no identity block"),
        });
    }
    let id = pp - s;
    if gbar.p() != s || gbar.n() + id != nn {
        return Err(Error::ArityMismatch {
            expected: nn - id,
            got: gbar.n(),
        });
    }
    let shift: Vec<usize> = (id..nn).collect();
    let partners = gbar
        .branches()
        .iter()
        .map(|g| {
            let mut comps: Vec<Poly<T>> = (0..id).map(|i| Poly::var(nn, i)).collect();
            comps.extend(g.components().iter().map(|c| c.remap(&shift, nn)));
            Branch::labelled(nn, comps, g.label.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    total.join(&MultiGerm::with_names(partners, total.var_names().to_vec())?)
}

/// `{A_{F,φ}(f), g}`: the augmentation by `φ` together with the fold (or
/// immersion) partner acting on the augmenting coordinates.
pub fn sim_aug_concat<T: Scalar>(u: &Unfolding<T>, phi: &Poly<T>) -> Result<MultiGerm<T>> {
    let aug = augment(u, phi)?;
    let partner = fold_partner(aug.n(), aug.p())?;
    aug.join(&MultiGerm::with_names(vec![partner], aug.var_names().to_vec())?)
}

/// `cod(f)·(τ(φ)+1)`: a lower bound for the 𝒜ₑ-codimension of
/// `sim_aug_concat`, attained when `φ` is quasi-homogeneous and the base
/// has codimension one.
pub fn predicted_codim_augconc(cod_f: usize, tau_phi: usize) -> usize {
    cod_f * (tau_phi + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{format_multigerm, parse_multigerm, parse_poly};
    use crate::Q;

    fn pol() -> StabilizationPolicy {
        StabilizationPolicy::default()
    }

    fn unf(text: &str, s: usize) -> Unfolding<Q> {
        Unfolding::new(parse_multigerm(text).unwrap(), s, &pol()).unwrap()
    }

    fn z(q: usize, k: u32) -> Poly<Q> {
        Poly::var(q, 0).pow(k)
    }

    #[test]
    fn unfolding_recovers_base() {
        let u = unf("(x^3+y^4*x+z*x, y, z)", 1);
        assert_eq!(format_multigerm(u.base()), "(x*y^4+x^3, y)");
        assert!(u.is_verified());
    }

    #[test]
    fn unfolding_rejects_non_pass_through() {
        let g = parse_multigerm("(x^3+y*x, y^2)").unwrap();
        assert!(matches!(
            Unfolding::unchecked(g, 1),
            Err(Error::InvalidUnfolding(_))
        ));
    }

    #[test]
    fn unstable_unfolding_is_rejected() {
        let g = parse_multigerm("(x^3+y^2*x, y)").unwrap();
        assert_eq!(
            Unfolding::new(g, 1, &pol()).unwrap_err(),
            Error::UnstableUnfolding { codim: 1 }
        );
    }

    #[test]
    fn augment_by_quartic() {
        let u = unf("(x^3+y^4*x+z*x, y, z)", 1);
        let a = augment(&u, &z(1, 4)).unwrap();
        let expected = parse_multigerm("(x^3+y^4*x+z^4*x, y, z)").unwrap();
        assert_eq!(a, expected);
    }

    #[test]
    fn augment_by_identity_recovers_total() {
        let u = unf("(x^3+y^4*x+z*x, y, z)", 1);
        assert_eq!(augment(&u, &z(1, 1)).unwrap(), *u.total());
    }

    #[test]
    fn augment_space_curve() {
        // (y^2, y^3) unfolded by λy in the second component
        let total = parse_multigerm("(y^2, y^3+x*y, x)").unwrap();
        let u = Unfolding::new(total, 1, &pol()).unwrap();
        let a = augment(&u, &z(1, 3)).unwrap();
        let expected = MultiGerm::from_components(
            2,
            vec![vec![
                Poly::var(2, 0).pow(2),
                &Poly::var(2, 0).pow(3) + &(&Poly::var(2, 1).pow(3) * &Poly::var(2, 0)),
                Poly::var(2, 1),
            ]],
        )
        .unwrap();
        assert_eq!(a, expected);
    }

    #[test]
    fn params_moved_to_the_end() {
        let g = parse_multigerm("(z, x^3+z*x, y)").unwrap();
        let u = Unfolding::unchecked_with_params(g, &[0], &[0]).unwrap();
        assert_eq!(format_multigerm(u.total()), "(x^3+x*z, y, z)");
        assert_eq!(format_multigerm(u.base()), "(x^3, y)");
    }

    #[test]
    fn monic_concatenations() {
        let u = unf("(x^4+y*x+z*x^2, y, z)", 1);
        let m = monic_concat(&u).unwrap();
        assert_eq!(m, parse_multigerm("{(x^4+y*x+z*x^2, y, z); (x, y, z^2)}").unwrap());

        let total = parse_multigerm("(y^2, y^3+x*y, x)").unwrap();
        let u = Unfolding::new(total, 1, &pol()).unwrap();
        let m = monic_concat(&u).unwrap();
        assert_eq!(m.r(), 2);
        assert_eq!(format_multigerm(&m), "{(y^2, y^3+y*x, x); (y, x, 0)}");
    }

    #[test]
    fn binary_concat_of_two_cusps() {
        let u = unf("(x^3+y*x, y)", 1);
        let h = binary_concat(&u, &u).unwrap();
        assert_eq!(format_multigerm(&h), "{(x^3+x*y, y, z); (x, y, z^3+y*z)}");
        assert_eq!(ae_codim(&h, &pol()).unwrap().value, 1);
    }

    #[test]
    fn generalised_with_morse_is_monic() {
        let u = unf("(x^4+y*x+z*x^2, y, z)", 1);
        let morse = MultiGerm::mono(1, vec![z(1, 2)]).unwrap();
        assert_eq!(generalised_concat(&u, &morse).unwrap(), monic_concat(&u).unwrap());
    }

    #[test]
    fn generalised_with_cusp() {
        // the first branch is itself of codimension one, so skip the check
        let total = parse_multigerm("(x^3+y^2*x+z^2*x, y, z)").unwrap();
        let u = Unfolding::unchecked(total, 2).unwrap();
        assert!(!u.is_verified());
        let cusp = parse_multigerm("(x, y^3+x*y)").unwrap();
        let h = generalised_concat(&u, &cusp).unwrap();
        assert_eq!(h, parse_multigerm("{(x^3+y^2*x+z^2*x, y, z); (x, y, z^3+y*z)}").unwrap());
        assert_eq!(ae_codim(&h, &pol()).unwrap().value, 3);
    }

    #[test]
    fn sim_aug_concat_of_bigerm() {
        let u = unf("{(x^2, y, z); (x^2+y^3+z, y, z)}", 1);
        let (phi, _) = parse_poly("z^2").unwrap();
        let h = sim_aug_concat(&u, &phi).unwrap();
        assert_eq!(
            h,
            parse_multigerm("{(x^2,y,z); (x^2+y^3+z^2,y,z); (x,y,z^2)}").unwrap()
        );
        assert_eq!(ae_codim(&h, &pol()).unwrap().value, predicted_codim_augconc(2, 1));
    }

    #[test]
    fn sim_aug_concat_by_linear_phi_is_stable() {
        let u = unf("{(x^2, y, z); (x^2+y+z, y, z)}", 1);
        let (phi, _) = parse_poly("z").unwrap();
        let h = sim_aug_concat(&u, &phi).unwrap();
        assert!(crate::tangent::is_stable(&h, &pol()).unwrap());
    }

    #[test]
    fn predicted_codims() {
        assert_eq!(predicted_codim_augconc(1, 2), 3);
        assert_eq!(predicted_codim_augconc(2, 1), 4);
        assert_eq!(predicted_codim_augconc(0, 7), 0);
    }
}
