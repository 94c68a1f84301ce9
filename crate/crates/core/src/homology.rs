//! Homology of the ternary chain complex and of its relator sub- and
//! quotient complexes, degree-2 cocycles with coefficients in `Z_m`, and
//! homology-class comparison of degree-1 cycles.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{Element, TernaryQuasigroup};
use crate::chain::{
    boundary, boundary_tuple, is_d_degenerate, relator_generators, tuple_count, tuples, Chain, DTuple, DiffKind,
    RelatorVariant,
};
use crate::error::{ChainError, HomologyError, ParseError};
use crate::linalg::{cokernel, hermite_normal_form, invariant_factors, kernel_mod, AbelianGroup, HermiteForm, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Relators {
    #[default]
    None,
    D,
    I,
    ID,
}

impl Relators {
    pub fn variant(self) -> Option<RelatorVariant> {
        match self {
            Relators::None => None,
            Relators::D => Some(RelatorVariant::D),
            Relators::I => Some(RelatorVariant::I),
            Relators::ID => Some(RelatorVariant::ID),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    Subcomplex,
    #[default]
    Quotient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HomologyVariant {
    pub relators: Relators,
    pub mode: Mode,
    pub diff: DiffKind,
}

impl HomologyVariant {
    pub fn new(relators: Relators, mode: Mode, diff: DiffKind) -> Self {
        Self { relators, mode, diff }
    }

    /// Homology of the full complex with the combined differential.
    pub fn plain() -> Self {
        Self::new(Relators::None, Mode::Quotient, DiffKind::Full)
    }

    /// Quotient by degenerate tuples (`H^N`).
    pub fn normalized() -> Self {
        Self::new(Relators::D, Mode::Quotient, DiffKind::Full)
    }

    /// Quotient by the involutory relators (`H^NI`).
    pub fn normalized_involutory() -> Self {
        Self::new(Relators::I, Mode::Quotient, DiffKind::Full)
    }

    /// Quotient by both relator families (`H^NID`).
    pub fn normalized_involutory_degenerate() -> Self {
        Self::new(Relators::ID, Mode::Quotient, DiffKind::Full)
    }
}

impl fmt::Display for HomologyVariant {
    /// The conventional name, e.g. `H^N`, `H^LD`, `H^RNID`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.diff {
            DiffKind::Left => "L",
            DiffKind::Right => "R",
            DiffKind::Full => "",
        };
        let rel = match (self.relators, self.mode) {
            (Relators::None, _) => "",
            (Relators::D, Mode::Subcomplex) => "D",
            (Relators::D, Mode::Quotient) => "N",
            (Relators::I, Mode::Subcomplex) => "I",
            (Relators::I, Mode::Quotient) => "NI",
            (Relators::ID, Mode::Subcomplex) => "ID",
            (Relators::ID, Mode::Quotient) => "NID",
        };
        if side.is_empty() && rel.is_empty() {
            write!(f, "H")
        } else {
            write!(f, "H^{side}{rel}")
        }
    }
}

/// Upper bounds on the highest chain degree that gets materialized, by
/// algebra order. Computing `H_n` needs chain degree `n + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub up_to_order_3: isize,
    pub up_to_order_5: isize,
    pub larger: isize,
}

impl Default for Caps {
    fn default() -> Self {
        Self { up_to_order_3: 4, up_to_order_5: 3, larger: 2 }
    }
}

impl Caps {
    pub fn unlimited() -> Self {
        Self { up_to_order_3: isize::MAX, up_to_order_5: isize::MAX, larger: isize::MAX }
    }

    pub fn max_chain_degree(&self, order: usize) -> isize {
        match order {
            0..=3 => self.up_to_order_3,
            4..=5 => self.up_to_order_5,
            _ => self.larger,
        }
    }

    pub fn check(&self, order: usize, degree: isize) -> Result<(), ChainError> {
        let cap = self.max_chain_degree(order);
        if degree > cap {
            return Err(ChainError::DegreeCapExceeded { degree, cap, order });
        }
        Ok(())
    }
}

fn chain_column(c: &Chain, order: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); tuple_count(order, c.degree())];
    for (t, k) in c.iter() {
        v[t.index(order)] = BigInt::from(k);
    }
    v
}

fn columns_to_matrix(rows: usize, cols: &[Chain], order: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (t, k) in c.iter() {
            m.set(t.index(order), j, k);
        }
    }
    m
}

/// Matrix of `∂_n : C_n → C_{n-1}` in the lexicographic tuple bases.
pub fn boundary_matrix(x: &TernaryQuasigroup, degree: isize, kind: DiffKind) -> IntMatrix {
    assert!(degree >= -1);
    let order = x.order();
    let cols: Vec<Chain> = tuples(order, degree).map(|t| boundary_tuple(x.table(), &t, kind)).collect();
    columns_to_matrix(tuple_count(order, degree - 1), &cols, order)
}

/// Relator generators of one degree as the columns of a matrix over `C_n`.
pub fn relator_matrix(
    x: &TernaryQuasigroup,
    degree: isize,
    relators: Relators,
) -> Result<IntMatrix, HomologyError> {
    let order = x.order();
    let rows = tuple_count(order, degree);
    match relators.variant() {
        None => Ok(IntMatrix::zeros(rows, 0)),
        Some(v) => {
            let set = relator_generators(x, degree, v)?;
            Ok(columns_to_matrix(rows, &set.generators, order))
        }
    }
}

/// `ker a / im b` for a chain complex with free groups, `a` the outgoing and
/// `b` the incoming differential at a group of rank `dim`.
fn free_complex_homology(dim: usize, a: &IntMatrix, b: &IntMatrix) -> AbelianGroup {
    let rank_a = invariant_factors(a).len();
    let factors = invariant_factors(b);
    AbelianGroup {
        free_rank: dim - rank_a - factors.len(),
        torsion: factors.into_iter().filter(|d| *d != BigInt::from(1)).collect(),
    }
}

fn restrict(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> IntMatrix {
    let mut out = IntMatrix::zeros(rows.len(), cols.len());
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            let v = m.get(r, c);
            if !v.is_zero() {
                out.set(i, j, v.clone());
            }
        }
    }
    out
}

/// Degree `n` homology of the requested variant, with the default caps.
pub fn homology(x: &TernaryQuasigroup, degree: isize, variant: HomologyVariant) -> Result<AbelianGroup, HomologyError> {
    homology_with_caps(x, degree, variant, &Caps::default())
}

pub fn homology_with_caps(
    x: &TernaryQuasigroup,
    degree: isize,
    variant: HomologyVariant,
    caps: &Caps,
) -> Result<AbelianGroup, HomologyError> {
    check_preconditions(x, degree, variant, caps)?;
    match variant.relators {
        Relators::None => {
            let a = boundary_matrix(x, degree, variant.diff);
            let b = boundary_matrix(x, degree + 1, variant.diff);
            Ok(free_complex_homology(tuple_count(x.order(), degree), &a, &b))
        }
        Relators::D => degenerate_basis_homology(x, degree, variant),
        Relators::I | Relators::ID => presentation_homology(x, degree, variant),
    }
}

fn check_preconditions(
    x: &TernaryQuasigroup,
    degree: isize,
    variant: HomologyVariant,
    caps: &Caps,
) -> Result<(), HomologyError> {
    x.require_ktq()?;
    if matches!(variant.relators, Relators::I | Relators::ID) {
        x.require_iktq()?;
    }
    if degree < -1 {
        return Err(HomologyError::DegreeTooLow(degree));
    }
    caps.check(x.order(), degree + 1)?;
    Ok(())
}

/// Same result as [`homology_with_caps`], but always through relator
/// presentation matrices, even when the relators are basis tuples. Kept as
/// an independent path for cross-checking.
pub fn homology_by_presentation(
    x: &TernaryQuasigroup,
    degree: isize,
    variant: HomologyVariant,
    caps: &Caps,
) -> Result<AbelianGroup, HomologyError> {
    check_preconditions(x, degree, variant, caps)?;
    presentation_homology(x, degree, variant)
}

/// Degenerate tuples form a sub-basis, so both the subcomplex and the
/// quotient are free on explicit tuple sets.
fn degenerate_basis_homology(
    x: &TernaryQuasigroup,
    n: isize,
    variant: HomologyVariant,
) -> Result<AbelianGroup, HomologyError> {
    let order = x.order();
    let want_degenerate = variant.mode == Mode::Subcomplex;
    let select = |d: isize| -> Result<Vec<usize>, HomologyError> {
        let mut keep = Vec::new();
        for (i, t) in tuples(order, d).enumerate() {
            if is_d_degenerate(x, &t)? == want_degenerate {
                keep.push(i);
            }
        }
        Ok(keep)
    };
    let (below, here, above) = (select(n - 1)?, select(n)?, select(n + 1)?);
    let a = boundary_matrix(x, n, variant.diff);
    let b = boundary_matrix(x, n + 1, variant.diff);
    if want_degenerate {
        for (m, d, rows, cols) in [(&a, n, &below, &here), (&b, n + 1, &here, &above)] {
            let leaks = cols
                .iter()
                .any(|&c| (0..m.rows()).any(|r| !m.get(r, c).is_zero() && rows.binary_search(&r).is_err()));
            if leaks {
                return Err(HomologyError::NotClosed(d));
            }
        }
    }
    Ok(free_complex_homology(here.len(), &restrict(&a, &below, &here), &restrict(&b, &here, &above)))
}

fn presentation_homology(
    x: &TernaryQuasigroup,
    n: isize,
    variant: HomologyVariant,
) -> Result<AbelianGroup, HomologyError> {
    let a = boundary_matrix(x, n, variant.diff);
    let b = boundary_matrix(x, n + 1, variant.diff);
    let r_below = relator_matrix(x, n - 1, variant.relators)?;
    let r_here = relator_matrix(x, n, variant.relators)?;
    match variant.mode {
        Mode::Quotient => quotient_homology(n, &a, &b, &r_below, &r_here),
        Mode::Subcomplex => {
            let r_above = relator_matrix(x, n + 1, variant.relators)?;
            subcomplex_homology(n, &a, &b, &r_below, &r_here, &r_above)
        }
    }
}

/// `{c : a·c ∈ span r_below} / (im b + span r_here)`.
fn quotient_homology(
    n: isize,
    a: &IntMatrix,
    b: &IntMatrix,
    r_below: &IntMatrix,
    r_here: &IntMatrix,
) -> Result<AbelianGroup, HomologyError> {
    let dim = a.cols();
    let kernel = hermite_normal_form(&a.hstack(r_below)).kernel_basis();
    let cycles = hermite_normal_form(&kernel.top_rows(dim));
    let targets = b.hstack(r_here);
    let mut coords = IntMatrix::zeros(cycles.rank(), targets.cols());
    for j in 0..targets.cols() {
        let y = cycles.solve_in_basis(&targets.column(j)).ok_or(HomologyError::NotClosed(n))?;
        for (i, v) in y.into_iter().enumerate() {
            coords.set(i, j, v);
        }
    }
    Ok(cokernel(&coords))
}

/// Homology of the subcomplex spanned by the relators, written in lattice
/// bases of the relator spans.
fn subcomplex_homology(
    n: isize,
    a: &IntMatrix,
    b: &IntMatrix,
    r_below: &IntMatrix,
    r_here: &IntMatrix,
    r_above: &IntMatrix,
) -> Result<AbelianGroup, HomologyError> {
    let below = hermite_normal_form(r_below);
    let here = hermite_normal_form(r_here);
    let above = hermite_normal_form(r_above);
    let restricted = |d: &IntMatrix, from: &HermiteForm, to: &HermiteForm, degree: isize| {
        let image = d.mul(&from.basis());
        let mut out = IntMatrix::zeros(to.rank(), from.rank());
        for j in 0..image.cols() {
            let y = to.solve_in_basis(&image.column(j)).ok_or(HomologyError::NotClosed(degree))?;
            for (i, v) in y.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Ok::<_, HomologyError>(out)
    };
    let a_sub = restricted(a, &here, &below, n)?;
    let b_sub = restricted(b, &above, &here, n + 1)?;
    Ok(free_complex_homology(here.rank(), &a_sub, &b_sub))
}

/// A `Z_m`-valued function on degree-1 tuples. Absent triples are 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    modulus: u64,
    values: BTreeMap<[Element; 3], u64>,
}

impl Cochain {
    pub fn zero(modulus: u64) -> Self {
        Self { modulus, values: BTreeMap::new() }
    }

    /// Builds a cochain from values listed in lexicographic triple order.
    pub fn from_vector(order: usize, modulus: u64, values: &[u64]) -> Self {
        let mut c = Cochain::zero(modulus);
        for (t, &v) in tuples(order, 1).zip(values) {
            let e = t.entries();
            c.set([e[0], e[1], e[2]], v);
        }
        c
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn set(&mut self, triple: [Element; 3], value: u64) {
        let v = value % self.modulus;
        if v == 0 {
            self.values.remove(&triple);
        } else {
            self.values.insert(triple, v);
        }
    }

    pub fn value(&self, a: Element, b: Element, c: Element) -> u64 {
        self.values.get(&[a, b, c]).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = ([Element; 3], u64)> + '_ {
        self.values.iter().map(|(k, v)| (*k, *v))
    }

    pub fn to_vector(&self, order: usize) -> Vec<u64> {
        tuples(order, 1)
            .map(|t| {
                let e = t.entries();
                self.value(e[0], e[1], e[2])
            })
            .collect()
    }

    /// `φ(c)` for a degree-1 chain, reduced into `[0, m)`.
    pub fn evaluate(&self, c: &Chain) -> u64 {
        assert_eq!(c.degree(), 1, "cochains pair with degree-1 chains");
        let m = self.modulus as i128;
        let total: i128 = c
            .iter()
            .map(|(t, k)| {
                let e = t.entries();
                k as i128 * self.value(e[0], e[1], e[2]) as i128
            })
            .sum();
        total.rem_euclid(m) as u64
    }

    /// Largest element mentioned, if any; used to check against an algebra.
    pub fn max_element(&self) -> Option<Element> {
        self.values.keys().flat_map(|k| k.iter().copied()).max()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("cocycle {}\n", self.modulus);
        for ([a, b, c], v) in &self.values {
            out.push_str(&format!("{a} {b} {c} -> {v}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Cochain, ParseError> {
        let mut cochain: Option<Cochain> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some(c) = cochain.as_mut() else {
                let words: Vec<&str> = line.split_whitespace().collect();
                let m = match words.as_slice() {
                    ["cocycle", m] => m.parse::<u64>().ok().filter(|&m| m >= 2),
                    _ => None,
                };
                let m = m.ok_or_else(|| ParseError::new(line_no, "expected header `cocycle <m>` with m >= 2"))?;
                cochain = Some(Cochain::zero(m));
                continue;
            };
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| ParseError::new(line_no, "expected `a b c -> v`"))?;
            let triple: Vec<Element> = lhs
                .split_whitespace()
                .map(|w| w.parse::<Element>())
                .collect::<Result<_, _>>()
                .map_err(|_| ParseError::new(line_no, "triple entries must be integers in 0..=255"))?;
            let [a, b, cc] = triple[..] else {
                return Err(ParseError::new(line_no, format!("expected 3 entries, found {}", triple.len())));
            };
            let v: u64 = rhs
                .trim()
                .parse()
                .map_err(|_| ParseError::new(line_no, format!("`{}` is not a nonnegative integer", rhs.trim())))?;
            if v >= c.modulus {
                return Err(ParseError::new(line_no, format!("value {v} is not a residue mod {}", c.modulus)));
            }
            if c.values.contains_key(&[a, b, cc]) {
                return Err(ParseError::new(line_no, format!("duplicate entry for ({a},{b},{cc})")));
            }
            c.set([a, b, cc], v);
        }
        cochain.ok_or_else(|| ParseError::new(1, "missing header `cocycle <m>`"))
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain(mod {}) {{", self.modulus)?;
        for (i, ([a, b, c], v)) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " ({a},{b},{c}) -> {v}")?;
        }
        write!(f, " }}")
    }
}

fn check_cocycle_variant(x: &TernaryQuasigroup, variant: HomologyVariant) -> Result<(), HomologyError> {
    if variant.mode != Mode::Quotient || variant.diff != DiffKind::Full {
        return Err(HomologyError::UnsupportedVariant(variant.to_string()));
    }
    x.require_ktq()?;
    if matches!(variant.relators, Relators::I | Relators::ID) {
        x.require_iktq()?;
    }
    Ok(())
}

/// The rows a degree-2 cocycle must annihilate: `∂₂ t` for every degree-2
/// tuple, then each degree-1 relator generator.
pub fn cocycle_constraints(x: &TernaryQuasigroup, variant: HomologyVariant) -> Result<IntMatrix, HomologyError> {
    check_cocycle_variant(x, variant)?;
    let boundaries = boundary_matrix(x, 2, DiffKind::Full).transpose();
    let relators = relator_matrix(x, 1, variant.relators)?.transpose();
    Ok(boundaries.vstack(&relators))
}

/// Generators of the `Z_m`-module of 2-cocycles for the variant, which
/// must be a quotient variant with the full differential.
pub fn two_cocycles(x: &TernaryQuasigroup, modulus: u64, variant: HomologyVariant) -> Result<Vec<Cochain>, HomologyError> {
    let constraints = cocycle_constraints(x, variant)?;
    let gens = kernel_mod(&constraints, modulus)?;
    Ok(gens.iter().map(|g| Cochain::from_vector(x.order(), modulus, g)).collect())
}

/// Checks `φ(∂₂ t) = 0` for every degree-2 tuple and `φ(r) = 0` for every
/// degree-1 relator, reporting the first failing tuple.
pub fn check_cocycle(x: &TernaryQuasigroup, phi: &Cochain, variant: HomologyVariant) -> Result<(), HomologyError> {
    check_cocycle_variant(x, variant)?;
    if let Some(e) = phi.max_element() {
        if e as usize >= x.order() {
            return Err(ChainError::EntryOutOfRange { value: e as usize, order: x.order() }.into());
        }
    }
    for t in tuples(x.order(), 2) {
        if phi.evaluate(&boundary_tuple(x.table(), &t, DiffKind::Full)) != 0 {
            return Err(HomologyError::NotACocycle(t.entries().to_vec()));
        }
    }
    if let Some(v) = variant.relators.variant() {
        for r in relator_generators(x, 1, v)?.generators {
            if phi.evaluate(&r) != 0 {
                let (t, _) = r.iter().next().expect("relators are nonzero");
                return Err(HomologyError::NotACocycle(t.entries().to_vec()));
            }
        }
    }
    Ok(())
}

/// Decides equality of homology classes of degree-1 cycles in a quotient
/// variant. Builds the boundary-plus-relator lattice once.
pub struct CycleClassifier<'a> {
    algebra: &'a TernaryQuasigroup,
    variant: HomologyVariant,
    lattice: HermiteForm,
}

impl<'a> CycleClassifier<'a> {
    pub fn new(x: &'a TernaryQuasigroup, variant: HomologyVariant) -> Result<Self, HomologyError> {
        if variant.mode != Mode::Quotient {
            return Err(HomologyError::UnsupportedVariant(variant.to_string()));
        }
        x.require_ktq()?;
        let b = boundary_matrix(x, 2, variant.diff);
        let r = relator_matrix(x, 1, variant.relators)?;
        Ok(Self { algebra: x, variant, lattice: hermite_normal_form(&b.hstack(&r)) })
    }

    pub fn variant(&self) -> HomologyVariant {
        self.variant
    }

    /// A degree-1 chain is a cycle when its boundary vanishes; there are no
    /// relators in degree 0.
    pub fn is_cycle(&self, c: &Chain) -> Result<bool, HomologyError> {
        if c.degree() != 1 {
            return Err(HomologyError::WrongDegree { expected: 1, found: c.degree() });
        }
        Ok(boundary(self.algebra.table(), c, self.variant.diff).is_zero())
    }

    /// Whether `c` is homologous to zero.
    pub fn is_boundary(&self, c: &Chain) -> Result<bool, HomologyError> {
        if !self.is_cycle(c)? {
            return Err(HomologyError::NotACycle { which: "given" });
        }
        Ok(self.lattice.solve_in_basis(&chain_column(c, self.algebra.order())).is_some())
    }

    pub fn class_equal(&self, c1: &Chain, c2: &Chain) -> Result<bool, HomologyError> {
        if !self.is_cycle(c1)? {
            return Err(HomologyError::NotACycle { which: "first" });
        }
        if !self.is_cycle(c2)? {
            return Err(HomologyError::NotACycle { which: "second" });
        }
        let diff = c1 - c2;
        Ok(self.lattice.solve_in_basis(&chain_column(&diff, self.algebra.order())).is_some())
    }
}

pub fn class_equal(
    x: &TernaryQuasigroup,
    c1: &Chain,
    c2: &Chain,
    variant: HomologyVariant,
) -> Result<bool, HomologyError> {
    CycleClassifier::new(x, variant)?.class_equal(c1, c2)
}

/// The tuple `t` as a chain of its degree; convenience for callers building
/// cycles by hand.
pub fn tuple_chain(entries: &[Element]) -> Chain {
    Chain::from_tuple(DTuple::from(entries))
}
