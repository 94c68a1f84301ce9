//! Tuples, integer chains, face maps and the degenerate relator subgroups.
//!
//! A tuple of degree `n` has `n + 2` entries `(x0, …, x_{n+1})`. Degree `-2`
//! is the empty tuple, which spans the augmentation group `C_{-2} = Z`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use crate::algebra::{Element, OpTable, TernaryQuasigroup};
use crate::error::{ChainError, ParseError};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DTuple(Vec<Element>);

impl DTuple {
    pub fn new(entries: Vec<Element>) -> Self {
        Self(entries)
    }

    pub fn degree(&self) -> isize {
        self.0.len() as isize - 2
    }

    pub fn entries(&self) -> &[Element] {
        &self.0
    }

    pub fn reversed(&self) -> DTuple {
        DTuple(self.0.iter().rev().copied().collect())
    }

    /// Position of this tuple in the lexicographic basis of its degree.
    pub fn index(&self, order: usize) -> usize {
        self.0.iter().fold(0, |acc, &e| acc * order + e as usize)
    }

    pub fn from_index(mut index: usize, order: usize, degree: isize) -> DTuple {
        let len = (degree + 2) as usize;
        let mut entries = vec![0; len];
        for slot in entries.iter_mut().rev() {
            *slot = (index % order) as Element;
            index /= order;
        }
        DTuple(entries)
    }

    pub fn check_range(&self, order: usize) -> Result<(), ChainError> {
        match self.0.iter().find(|&&e| e as usize >= order) {
            Some(&e) => Err(ChainError::EntryOutOfRange { value: e as usize, order }),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for DTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl From<&[Element]> for DTuple {
    fn from(v: &[Element]) -> Self {
        DTuple(v.to_vec())
    }
}

impl<const N: usize> From<[Element; N]> for DTuple {
    fn from(v: [Element; N]) -> Self {
        DTuple(v.to_vec())
    }
}

/// Number of tuples of the given degree over an algebra of the given order.
pub fn tuple_count(order: usize, degree: isize) -> usize {
    order.pow((degree + 2) as u32)
}

/// All tuples of one degree, in lexicographic order.
pub fn tuples(order: usize, degree: isize) -> impl Iterator<Item = DTuple> {
    assert!(degree >= -2);
    (0..tuple_count(order, degree)).map(move |i| DTuple::from_index(i, order, degree))
}

/// A finite integer combination of tuples of a single degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    degree: isize,
    terms: BTreeMap<DTuple, i64>,
}

impl Chain {
    pub fn zero(degree: isize) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    pub fn from_tuple(t: DTuple) -> Self {
        let mut c = Chain::zero(t.degree());
        c.add_term(t, 1);
        c
    }

    pub fn from_terms(degree: isize, terms: impl IntoIterator<Item = (DTuple, i64)>) -> Self {
        let mut c = Chain::zero(degree);
        for (t, k) in terms {
            c.add_term(t, k);
        }
        c
    }

    pub fn degree(&self) -> isize {
        self.degree
    }

    pub fn add_term(&mut self, t: DTuple, coeff: i64) {
        assert_eq!(t.degree(), self.degree, "tuple {t:?} does not have degree {}", self.degree);
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(t);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, t: &DTuple) -> i64 {
        self.terms.get(t).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DTuple, i64)> {
        self.terms.iter().map(|(t, &k)| (t, k))
    }

    pub fn scaled(&self, k: i64) -> Chain {
        Chain::from_terms(self.degree, self.iter().map(|(t, c)| (t.clone(), c * k)))
    }

    pub fn reversed(&self) -> Chain {
        Chain::from_terms(self.degree, self.iter().map(|(t, c)| (t.reversed(), c)))
    }

    /// Coefficient vector in the lexicographic tuple basis.
    pub fn to_vector(&self, order: usize) -> Vec<i64> {
        let mut v = vec![0; tuple_count(order, self.degree)];
        for (t, c) in self.iter() {
            v[t.index(order)] = c;
        }
        v
    }

    /// One term per line, `<coeff> <x0> <x1> …`, tuples in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (t, c) in self.iter() {
            out.push_str(&c.to_string());
            for e in t.entries() {
                out.push(' ');
                out.push_str(&e.to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of [`Chain::to_text`]. An empty text is the zero chain of
    /// `default_degree`.
    pub fn parse(text: &str, default_degree: isize) -> Result<Chain, ParseError> {
        let mut chain: Option<Chain> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut words = line.split_whitespace();
            let coeff: i64 = words
                .next()
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| ParseError::new(idx + 1, "expected an integer coefficient"))?;
            let entries = words
                .map(|w| w.parse::<Element>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| ParseError::new(idx + 1, "tuple entries must be small nonnegative integers"))?;
            let t = DTuple::new(entries);
            let c = chain.get_or_insert_with(|| Chain::zero(t.degree()));
            if t.degree() != c.degree {
                return Err(ParseError::new(idx + 1, "all tuples of a chain must have the same length"));
            }
            c.add_term(t, coeff);
        }
        Ok(chain.unwrap_or_else(|| Chain::zero(default_degree)))
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0[deg {}]", self.degree);
        }
        for (i, (t, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if c < 0 {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "{t:?}")?;
        }
        Ok(())
    }
}

impl AddAssign<&Chain> for Chain {
    fn add_assign(&mut self, rhs: &Chain) {
        assert_eq!(self.degree, rhs.degree);
        for (t, c) in rhs.iter() {
            self.add_term(t.clone(), c);
        }
    }
}

impl Add<&Chain> for &Chain {
    type Output = Chain;
    fn add(self, rhs: &Chain) -> Chain {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Chain> for &Chain {
    type Output = Chain;
    fn sub(self, rhs: &Chain) -> Chain {
        let mut out = self.clone();
        out += &rhs.scaled(-1);
        out
    }
}

impl Neg for &Chain {
    type Output = Chain;
    fn neg(self) -> Chain {
        self.scaled(-1)
    }
}

/// Which part of the differential `∂ = ∂^L − ∂^R` to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiffKind {
    Left,
    Right,
    Full,
}

fn check_face(i: usize, x: &DTuple) -> Result<(), ChainError> {
    let degree = x.degree();
    if degree < 0 || i as isize > degree {
        return Err(ChainError::FaceIndex { index: i, degree });
    }
    Ok(())
}

/// `d_i^{n,L}` by tuple rewriting: `d_0` drops the first entry and `d_i`
/// replaces `x_i` by `x_{i-1} x_i x_{i+1} T` before applying `d_{i-1}`.
pub fn face_left_rewriting(t: &OpTable, i: usize, x: &DTuple) -> Result<DTuple, ChainError> {
    check_face(i, x)?;
    fn go(t: &OpTable, i: usize, mut y: Vec<Element>) -> Vec<Element> {
        if i == 0 {
            y.remove(0);
            return y;
        }
        y[i] = t.apply(y[i - 1], y[i], y[i + 1]);
        go(t, i - 1, y)
    }
    Ok(DTuple(go(t, i, x.0.clone())))
}

/// `d_i^{n,L}` coordinate-wise, computed from right to left:
/// `d_{i,k} = x_{k-1} x_k d_{i,k+1} T` for `k ≤ i`, and `x_k` otherwise.
pub fn face_left_coordinates(t: &OpTable, i: usize, x: &DTuple) -> Result<DTuple, ChainError> {
    check_face(i, x)?;
    let xs = &x.0;
    let top = xs.len() - 1;
    let mut out = vec![0; top];
    for k in (1..=top).rev() {
        out[k - 1] = if k <= i { t.apply(xs[k - 1], xs[k], out[k]) } else { xs[k] };
    }
    Ok(DTuple(out))
}

/// `d_i^{n,R}` by rewriting: `d_0` is `(z_0, …, z_n)` with `z_0 = x_0` and
/// `z_k = z_{k-1} x_k x_{k+1} T`; `d_i` is obtained from `d_{i-1}` by putting
/// `x_i` back in position `i` and recomputing the later coordinates.
pub fn face_right_rewriting(t: &OpTable, i: usize, x: &DTuple) -> Result<DTuple, ChainError> {
    check_face(i, x)?;
    fn go(t: &OpTable, i: usize, xs: &[Element]) -> Vec<Element> {
        let n = xs.len() - 2;
        let mut z = if i == 0 {
            let mut z = vec![xs[0]; n + 1];
            for k in 1..=n {
                z[k] = t.apply(z[k - 1], xs[k], xs[k + 1]);
            }
            return z;
        } else {
            go(t, i - 1, xs)
        };
        z[i] = xs[i];
        for k in i + 1..=n {
            z[k] = t.apply(z[k - 1], xs[k], xs[k + 1]);
        }
        z
    }
    Ok(DTuple(go(t, i, &x.0)))
}

/// `d_i^{n,R}` coordinate-wise, computed from left to right:
/// `d_{i,k} = d_{i,k-1} x_k x_{k+1} T` for `k > i`, and `x_k` otherwise.
pub fn face_right_coordinates(t: &OpTable, i: usize, x: &DTuple) -> Result<DTuple, ChainError> {
    check_face(i, x)?;
    let xs = &x.0;
    let n = xs.len() - 2;
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let v = if k > i { t.apply(out[k - 1], xs[k], xs[k + 1]) } else { xs[k] };
        out.push(v);
    }
    Ok(DTuple(out))
}

pub fn face_left(t: &OpTable, i: usize, x: &DTuple) -> Result<DTuple, ChainError> {
    let y = face_left_coordinates(t, i, x)?;
    debug_assert_eq!(Ok(&y), face_left_rewriting(t, i, x).as_ref());
    Ok(y)
}

pub fn face_right(t: &OpTable, i: usize, x: &DTuple) -> Result<DTuple, ChainError> {
    let y = face_right_coordinates(t, i, x)?;
    debug_assert_eq!(Ok(&y), face_right_rewriting(t, i, x).as_ref());
    Ok(y)
}

/// Boundary of a single tuple. Degree `-1` tuples map to zero in `C_{-2}`.
pub fn boundary_tuple(t: &OpTable, x: &DTuple, kind: DiffKind) -> Chain {
    let n = x.degree();
    assert!(n >= -1, "boundary is defined from degree -1 upward");
    let mut out = Chain::zero(n - 1);
    if n == -1 {
        return out;
    }
    for i in 0..=n as usize {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        if kind != DiffKind::Right {
            out.add_term(face_left(t, i, x).expect("face index in range"), sign);
        }
        if kind != DiffKind::Left {
            out.add_term(face_right(t, i, x).expect("face index in range"), -sign);
        }
    }
    out
}

pub fn boundary(t: &OpTable, c: &Chain, kind: DiffKind) -> Chain {
    let mut out = Chain::zero(c.degree() - 1);
    for (x, k) in c.iter() {
        out += &boundary_tuple(t, x, kind).scaled(k);
    }
    out
}

/// Replaces `x_j` by `x_{j-1} x_j x_{j+1} T`.
pub fn substitute_middle(t: &OpTable, x: &DTuple, j: usize) -> Result<DTuple, ChainError> {
    let degree = x.degree();
    if j == 0 || j as isize > degree {
        return Err(ChainError::SubstitutionIndex { index: j, degree });
    }
    let mut y = x.0.clone();
    y[j] = t.apply(y[j - 1], y[j], y[j + 1]);
    Ok(DTuple(y))
}

/// Which degeneracy conditions hold at the first degenerate window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Degeneracy {
    /// Index `j` of the middle entry of the window `(x_{j-1}, x_j, x_{j+1})`.
    pub window: usize,
    /// The window reads `a, b, abbR`.
    pub d1: bool,
    /// The window reads `bbaL, b, a`.
    pub d2: bool,
}

/// First window where `x_{j-1} x_j x_{j+1} T = x_j`. In a quasigroup this
/// is exactly where the window has the shape `(a, b, abbR)`, equivalently
/// `(bbaL, b, a)`.
pub fn d_degeneracy(x: &TernaryQuasigroup, t: &DTuple) -> Result<Option<Degeneracy>, ChainError> {
    let div = x.require_quasigroup()?;
    let e = t.entries();
    if e.len() < 3 {
        return Ok(None);
    }
    for j in 1..e.len() - 1 {
        if x.apply(e[j - 1], e[j], e[j + 1]) == e[j] {
            return Ok(Some(Degeneracy {
                window: j,
                d1: e[j + 1] == div.right.apply(e[j - 1], e[j], e[j]),
                d2: e[j - 1] == div.left.apply(e[j], e[j], e[j + 1]),
            }));
        }
    }
    Ok(None)
}

pub fn is_d_degenerate(x: &TernaryQuasigroup, t: &DTuple) -> Result<bool, ChainError> {
    Ok(d_degeneracy(x, t)?.is_some())
}

/// The literal window conditions, searched independently of the unified
/// test: the first window of shape `(a, b, abbR)` and of shape `(bbaL, b, a)`.
pub fn literal_degeneracy_windows(
    x: &TernaryQuasigroup,
    t: &DTuple,
) -> Result<(Option<usize>, Option<usize>), ChainError> {
    let div = x.require_quasigroup()?;
    let e = t.entries();
    if e.len() < 3 {
        return Ok((None, None));
    }
    let d1 = (1..e.len() - 1).find(|&j| e[j + 1] == div.right.apply(e[j - 1], e[j], e[j]));
    let d2 = (1..e.len() - 1).find(|&j| e[j - 1] == div.left.apply(e[j], e[j], e[j + 1]));
    Ok((d1, d2))
}

/// `x + x[j]`, the generator of the involutory relator subgroup.
pub fn i_relator(x: &TernaryQuasigroup, t: &DTuple, j: usize) -> Result<Chain, ChainError> {
    x.require_iktq()?;
    let mut c = Chain::from_tuple(t.clone());
    c.add_term(substitute_middle(x.table(), t, j)?, 1);
    Ok(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelatorVariant {
    D,
    I,
    ID,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorSet {
    pub variant: RelatorVariant,
    pub degree: isize,
    pub generators: Vec<Chain>,
}

/// Generators of the relator subgroup in one degree: degenerate tuples for
/// `D`, every `x + x[j]` for `I`, and both (degenerate tuples first) for
/// `ID`. Empty below degree 1.
pub fn relator_generators(
    x: &TernaryQuasigroup,
    degree: isize,
    variant: RelatorVariant,
) -> Result<RelatorSet, ChainError> {
    match variant {
        RelatorVariant::D => {
            x.require_quasigroup()?;
        }
        RelatorVariant::I | RelatorVariant::ID => {
            x.require_iktq()?;
        }
    }
    let mut generators = Vec::new();
    if degree >= 1 {
        if matches!(variant, RelatorVariant::D | RelatorVariant::ID) {
            for t in tuples(x.order(), degree) {
                if is_d_degenerate(x, &t)? {
                    generators.push(Chain::from_tuple(t));
                }
            }
        }
        if matches!(variant, RelatorVariant::I | RelatorVariant::ID) {
            for t in tuples(x.order(), degree) {
                for j in 1..=degree as usize {
                    generators.push(i_relator(x, &t, j)?);
                }
            }
        }
    }
    Ok(RelatorSet { variant, degree, generators })
}
