use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial in a fixed number of variables.
///
/// Ordered graded-lexicographically: total degree first, then the first
/// variable with a differing exponent decides (larger exponent is larger).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.exps[var]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Exponent vector reordered into a new ambient: variable `i` moves to
    /// position `map[i]`.
    pub fn remap(&self, map: &[usize], new_nvars: usize) -> Monomial {
        let mut exps = vec![0; new_nvars];
        for (i, &e) in self.exps.iter().enumerate() {
            exps[map[i]] += e;
        }
        Monomial { exps }
    }

    /// All monomials in `nvars` variables of total degree exactly `deg`, in
    /// ascending graded-lex order.
    pub fn of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fill_degree(&mut cur, 0, deg, &mut out);
        // fill_degree emits in descending lex order
        out.reverse();
        out
    }

    /// All monomials of degree at most `deg`, ascending.
    pub fn up_to_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
        (0..=deg)
            .flat_map(|d| Monomial::of_degree(nvars, d))
            .collect()
    }
}

fn fill_degree(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    let n = cur.len();
    if n == 0 {
        if remaining == 0 {
            out.push(Monomial { exps: Vec::new() });
        }
        return;
    }
    if pos == n - 1 {
        cur[pos] = remaining;
        out.push(Monomial { exps: cur.clone() });
        cur[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        fill_degree(cur, pos + 1, remaining - e, out);
    }
    cur[pos] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{:?}", self.exps)
    }
}

/// Number of monomials of degree at most `deg` in `nvars` variables.
pub fn count_up_to(nvars: usize, deg: u32) -> usize {
    // binomial(deg + nvars, nvars)
    let mut acc: u128 = 1;
    for i in 1..=nvars as u128 {
        acc = acc * (deg as u128 + i) / i;
    }
    acc as usize
}
