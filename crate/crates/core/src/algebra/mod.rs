//! Finite ternary quasigroups stored as operation tables.
//!
//! A table of order `n` holds `T(x, y, z)` for every triple of elements
//! `0..n`, flattened in lexicographic order of `(x, y, z)`. The three
//! divisions are tables of the same shape, so every query is an index
//! computation.

mod enumerate;
mod io;

use std::fmt;

pub use enumerate::{enumerate_ktqs, EnumerateOptions, Filter};
pub use io::{format_algebra, parse_algebra};

use crate::error::AlgebraError;

/// An element of a finite algebra, identified by its 0-based index.
pub type Element = u8;

/// Largest order a table can have (elements are stored as bytes).
pub const MAX_ORDER: usize = 255;

/// A quadruple `(x1, x2, x3, x0)` with `x0 = x1 x2 x3 T`.
pub type Quadruple = [Element; 4];

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpTable {
    order: usize,
    values: Vec<Element>,
}

impl OpTable {
    pub fn new(order: usize, values: Vec<Element>) -> Result<Self, AlgebraError> {
        if order == 0 || order > MAX_ORDER {
            return Err(AlgebraError::InvalidOrder(order));
        }
        let expected = order * order * order;
        if values.len() != expected {
            return Err(AlgebraError::WrongLength { expected, found: values.len() });
        }
        if let Some(position) = values.iter().position(|&v| v as usize >= order) {
            return Err(AlgebraError::EntryOutOfRange {
                position,
                value: values[position] as usize,
                order,
            });
        }
        Ok(Self { order, values })
    }

    /// Builds a table from a closure; results are reduced modulo the order.
    pub fn from_fn(
        order: usize,
        f: impl Fn(usize, usize, usize) -> usize,
    ) -> Result<Self, AlgebraError> {
        if order == 0 || order > MAX_ORDER {
            return Err(AlgebraError::InvalidOrder(order));
        }
        let mut values = Vec::with_capacity(order * order * order);
        for x in 0..order {
            for y in 0..order {
                for z in 0..order {
                    values.push((f(x, y, z) % order) as Element);
                }
            }
        }
        Ok(Self { order, values })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    #[inline]
    fn index(&self, x: Element, y: Element, z: Element) -> usize {
        (x as usize * self.order + y as usize) * self.order + z as usize
    }

    #[inline]
    pub fn apply(&self, x: Element, y: Element, z: Element) -> Element {
        self.values[self.index(x, y, z)]
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + Clone {
        (0..self.order).map(|e| e as Element)
    }

    /// The outer-slot swap `xyz T̂ = zyx T`.
    pub fn hat(&self) -> OpTable {
        let mut values = vec![0; self.values.len()];
        for x in self.elements() {
            for y in self.elements() {
                for z in self.elements() {
                    values[self.index(x, y, z)] = self.apply(z, y, x);
                }
            }
        }
        OpTable { order: self.order, values }
    }

    /// The table transported along the relabeling `e ↦ perm[e]`.
    pub fn relabel(&self, perm: &[Element]) -> OpTable {
        assert_eq!(perm.len(), self.order);
        let mut values = vec![0; self.values.len()];
        for x in self.elements() {
            for y in self.elements() {
                for z in self.elements() {
                    let v = self.apply(x, y, z);
                    let i = self.index(perm[x as usize], perm[y as usize], perm[z as usize]);
                    values[i] = perm[v as usize];
                }
            }
        }
        OpTable { order: self.order, values }
    }
}

impl fmt::Debug for OpTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OpTable(order {}, {:?})", self.order, self.values)
    }
}

/// `T(x, y, z) = (αx + βy + γz) mod n`. The result is not validated.
pub fn affine_table(n: usize, alpha: i64, beta: i64, gamma: i64) -> Result<OpTable, AlgebraError> {
    let m = n as i64;
    let (a, b, c) = (alpha.rem_euclid(m.max(1)), beta.rem_euclid(m.max(1)), gamma.rem_euclid(m.max(1)));
    OpTable::from_fn(n, |x, y, z| {
        ((a * x as i64 + b * y as i64 + c * z as i64).rem_euclid(m)) as usize
    })
}

/// The input position that is varied while the other two are held fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Left,
    Middle,
    Right,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slot::Left => "left",
            Slot::Middle => "middle",
            Slot::Right => "right",
        })
    }
}

/// Two quadruples that agree in every position except `slot` yet share the
/// same output, witnessing that `slot` is not injective.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlotViolation {
    pub slot: Slot,
    pub first: Quadruple,
    pub second: Quadruple,
}

pub fn validate_quasigroup(t: &OpTable) -> Result<(), SlotViolation> {
    let n = t.order;
    for slot in [Slot::Left, Slot::Middle, Slot::Right] {
        for p in t.elements() {
            for q in t.elements() {
                let mut seen: Vec<Option<Element>> = vec![None; n];
                for v in t.elements() {
                    let (x, y, z) = match slot {
                        Slot::Left => (v, p, q),
                        Slot::Middle => (p, v, q),
                        Slot::Right => (p, q, v),
                    };
                    let out = t.apply(x, y, z);
                    if let Some(prev) = seen[out as usize] {
                        let quad = |w: Element| match slot {
                            Slot::Left => [w, p, q, out],
                            Slot::Middle => [p, w, q, out],
                            Slot::Right => [p, q, w, out],
                        };
                        return Err(SlotViolation { slot, first: quad(prev), second: quad(v) });
                    }
                    seen[out as usize] = Some(v);
                }
            }
        }
    }
    Ok(())
}

/// Left, middle and right divisions of a quasigroup table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisions {
    pub left: OpTable,
    pub middle: OpTable,
    pub right: OpTable,
}

/// Inverts each slot of `t`: `x0 x2 x3 L = x1`, `x1 x0 x3 M = x2` and
/// `x1 x2 x0 R = x3` whenever `x1 x2 x3 T = x0`.
pub fn derive_divisions(t: &OpTable) -> Result<Divisions, AlgebraError> {
    validate_quasigroup(t).map_err(|v| AlgebraError::NotQuasigroup { slot: v.slot })?;
    let size = t.values.len();
    let (mut l, mut m, mut r) = (vec![0; size], vec![0; size], vec![0; size]);
    for x1 in t.elements() {
        for x2 in t.elements() {
            for x3 in t.elements() {
                let x0 = t.apply(x1, x2, x3);
                l[t.index(x0, x2, x3)] = x1;
                m[t.index(x1, x0, x3)] = x2;
                r[t.index(x1, x2, x0)] = x3;
            }
        }
    }
    let order = t.order;
    Ok(Divisions {
        left: OpTable { order, values: l },
        middle: OpTable { order, values: m },
        right: OpTable { order, values: r },
    })
}

/// Outcome of checking the two third-move axioms; counterexamples are
/// `(a, b, c, d)` quadruples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct A3Report {
    pub a3l_counterexample: Option<[Element; 4]>,
    pub a3r_counterexample: Option<[Element; 4]>,
}

impl A3Report {
    pub fn a3l(&self) -> bool {
        self.a3l_counterexample.is_none()
    }

    pub fn a3r(&self) -> bool {
        self.a3r_counterexample.is_none()
    }
}

/// Checks `(abcT)cdT = [ab(bcdT)T](bcdT)dT` (A3L) and
/// `ab(bcdT)T = a(abcT)[(abcT)cdT]T` (A3R) over all of `X⁴`.
pub fn check_a3(t: &OpTable) -> A3Report {
    let mut report = A3Report::default();
    for a in t.elements() {
        for b in t.elements() {
            for c in t.elements() {
                let abc = t.apply(a, b, c);
                for d in t.elements() {
                    let bcd = t.apply(b, c, d);
                    let abc_cd = t.apply(abc, c, d);
                    let ab_bcd = t.apply(a, b, bcd);
                    if report.a3l_counterexample.is_none() && abc_cd != t.apply(ab_bcd, bcd, d) {
                        report.a3l_counterexample = Some([a, b, c, d]);
                    }
                    if report.a3r_counterexample.is_none() && ab_bcd != t.apply(a, abc, abc_cd) {
                        report.a3r_counterexample = Some([a, b, c, d]);
                    }
                    if report.a3l_counterexample.is_some() && report.a3r_counterexample.is_some() {
                        return report;
                    }
                }
            }
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Flags {
    pub is_quasigroup: bool,
    pub satisfies_a3l: bool,
    pub satisfies_a3r: bool,
    /// `T` equals its middle division.
    pub is_involutory: bool,
}

impl Flags {
    pub fn is_ktq(&self) -> bool {
        self.is_quasigroup && self.satisfies_a3l && self.satisfies_a3r
    }

    pub fn is_iktq(&self) -> bool {
        self.is_ktq() && self.is_involutory
    }

    pub fn label(&self) -> &'static str {
        if self.is_iktq() {
            "IKTQ"
        } else if self.is_ktq() {
            "KTQ"
        } else if self.is_quasigroup {
            "quasigroup"
        } else {
            "not a quasigroup"
        }
    }
}

/// A classified ternary algebra: the table, its divisions when it is a
/// quasigroup, and the axiom flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryQuasigroup {
    table: OpTable,
    divisions: Option<Divisions>,
    flags: Flags,
    quasigroup_violation: Option<SlotViolation>,
    a3: A3Report,
}

pub fn classify(t: &OpTable) -> TernaryQuasigroup {
    let violation = validate_quasigroup(t).err();
    let divisions = match violation {
        None => Some(derive_divisions(t).expect("validated table has divisions")),
        Some(_) => None,
    };
    let a3 = check_a3(t);
    let flags = Flags {
        is_quasigroup: violation.is_none(),
        satisfies_a3l: a3.a3l(),
        satisfies_a3r: a3.a3r(),
        is_involutory: divisions.as_ref().is_some_and(|d| d.middle == *t),
    };
    TernaryQuasigroup { table: t.clone(), divisions, flags, quasigroup_violation: violation, a3 }
}

impl TernaryQuasigroup {
    pub fn table(&self) -> &OpTable {
        &self.table
    }

    pub fn order(&self) -> usize {
        self.table.order
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn divisions(&self) -> Option<&Divisions> {
        self.divisions.as_ref()
    }

    pub fn quasigroup_violation(&self) -> Option<SlotViolation> {
        self.quasigroup_violation
    }

    pub fn a3_report(&self) -> A3Report {
        self.a3
    }

    pub fn is_quasigroup(&self) -> bool {
        self.flags.is_quasigroup
    }

    pub fn is_ktq(&self) -> bool {
        self.flags.is_ktq()
    }

    pub fn is_iktq(&self) -> bool {
        self.flags.is_iktq()
    }

    pub fn require_quasigroup(&self) -> Result<&Divisions, AlgebraError> {
        match (&self.divisions, self.quasigroup_violation) {
            (Some(d), _) => Ok(d),
            (None, Some(v)) => Err(AlgebraError::NotQuasigroup { slot: v.slot }),
            (None, None) => unreachable!("divisions exist exactly when the table is a quasigroup"),
        }
    }

    pub fn require_ktq(&self) -> Result<&Divisions, AlgebraError> {
        let d = self.require_quasigroup()?;
        if !self.flags.satisfies_a3l {
            return Err(AlgebraError::AxiomFails("A3L"));
        }
        if !self.flags.satisfies_a3r {
            return Err(AlgebraError::AxiomFails("A3R"));
        }
        Ok(d)
    }

    pub fn require_iktq(&self) -> Result<&Divisions, AlgebraError> {
        let d = self.require_ktq()?;
        if !self.flags.is_involutory {
            return Err(AlgebraError::NotInvolutory);
        }
        Ok(d)
    }

    #[inline]
    pub fn apply(&self, x: Element, y: Element, z: Element) -> Element {
        self.table.apply(x, y, z)
    }
}
