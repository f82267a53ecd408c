//! Multi-indices and the graded monomial ordering shared by every polynomial.

use std::fmt;
use std::sync::OnceLock;

/// Largest ambient dimension a [`crate::poly::Poly`] may have.
pub const MAX_DIM: usize = 4;
/// Largest total degree a [`crate::poly::Poly`] may have.
pub const MAX_DEGREE: usize = 24;

/// Exponent tuple `(α_1, …, α_n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(exponents: Vec<usize>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// Unit index `e_i` in dimension `dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total order `|α|`.
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[usize] {
        &self.0
    }

    /// `α!` = ∏ α_i!
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a)).product()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }
}

impl AsRef<[usize]> for MultiIndex {
    fn as_ref(&self) -> &[usize] {
        &self.0
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of monomials of total degree `<= degree` in `dim` variables.
pub fn monomial_count(dim: usize, degree: usize) -> usize {
    binomial(degree + dim, dim)
}

/// All exponent tuples of exactly order `order` in `dim` variables, in
/// descending lexicographic order (`x_1` powers first).
pub fn indices_of_order(dim: usize, order: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0; dim];
    fill_order(dim, order, 0, &mut current, &mut out);
    out
}

fn fill_order(
    dim: usize,
    remaining: usize,
    pos: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<MultiIndex>,
) {
    if dim == 0 {
        if remaining == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    if pos == dim - 1 {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for a in (0..=remaining).rev() {
        current[pos] = a;
        fill_order(dim, remaining - a, pos + 1, current, out);
    }
    current[pos] = 0;
}

/// All multi-indices of order `<= m` in graded lexicographic order.
///
/// The count is `C(m+n, n)`.
pub fn basis_multiindices(n: usize, m: usize) -> Vec<MultiIndex> {
    (0..=m).flat_map(|k| indices_of_order(n, k)).collect()
}

/// Graded ordering table for one ambient dimension, up to [`MAX_DEGREE`].
///
/// The ordering is graded, so the monomials of degree `<= d` are always a
/// prefix of the table; polynomials of any degree share it.
pub(crate) struct MonomialTable {
    dim: usize,
    exps: Vec<Vec<usize>>,
    lookup: Vec<u32>,
}

impl MonomialTable {
    fn build(dim: usize) -> Self {
        let exps: Vec<Vec<usize>> = basis_multiindices(dim, MAX_DEGREE)
            .into_iter()
            .map(|a| a.0)
            .collect();
        let stride = MAX_DEGREE + 1;
        let mut lookup = vec![u32::MAX; stride.pow(dim as u32)];
        for (i, e) in exps.iter().enumerate() {
            lookup[Self::key(e, stride)] = i as u32;
        }
        MonomialTable { dim, exps, lookup }
    }

    fn key(e: &[usize], stride: usize) -> usize {
        e.iter().rev().fold(0, |acc, &a| acc * stride + a)
    }

    #[inline]
    pub(crate) fn exps(&self, i: usize) -> &[usize] {
        &self.exps[i]
    }

    #[inline]
    pub(crate) fn index(&self, e: &[usize]) -> usize {
        debug_assert_eq!(e.len(), self.dim);
        let i = self.lookup[Self::key(e, MAX_DEGREE + 1)];
        debug_assert!(i != u32::MAX, "exponent {e:?} exceeds the degree table");
        i as usize
    }
}

pub(crate) fn table(dim: usize) -> &'static MonomialTable {
    static TABLES: [OnceLock<MonomialTable>; MAX_DIM + 1] =
        [const { OnceLock::new() }; MAX_DIM + 1];
    assert!(
        dim <= MAX_DIM,
        "polynomial dimension {dim} exceeds {MAX_DIM}"
    );
    TABLES[dim].get_or_init(|| MonomialTable::build(dim))
}
