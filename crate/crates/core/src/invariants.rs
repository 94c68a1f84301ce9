//! Cocycle state sums and side-by-side invariant reports for diagram pairs.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Element, TernaryQuasigroup};
use crate::chain::Chain;
use crate::diagram::{Correspondence, Diagram, DiagramKind};
use crate::error::{DiagramError, HomologyError};
use crate::homology::{check_cocycle, two_cocycles, Cochain, CycleClassifier, HomologyVariant, Relators};

/// An element of the group ring `Z[Z_m]`, stored as residue → coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    modulus: u64,
    coefficients: BTreeMap<u64, i64>,
}

impl GroupRingElement {
    pub fn zero(modulus: u64) -> Self {
        Self { modulus, coefficients: BTreeMap::new() }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn add_term(&mut self, residue: u64, coefficient: i64) {
        let r = residue % self.modulus;
        let entry = self.coefficients.entry(r).or_insert(0);
        *entry += coefficient;
        if *entry == 0 {
            self.coefficients.remove(&r);
        }
    }

    pub fn coefficient(&self, residue: u64) -> i64 {
        self.coefficients.get(&(residue % self.modulus)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.coefficients.iter().map(|(r, c)| (*r, *c))
    }

    /// Sum of all coefficients (the augmentation).
    pub fn augmentation(&self) -> i64 {
        self.coefficients.values().sum()
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coefficients.iter().map(|(r, c)| format!("{c}*[{r}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.modulus)
    }
}

/// The quotient variant whose cocycles suit the diagram: `N` for classical
/// diagrams, `NID` for flat ones, plain when the diagram has no crossings.
pub fn default_variant(kind: Option<DiagramKind>) -> HomologyVariant {
    match kind {
        Some(DiagramKind::Classical) => HomologyVariant::normalized(),
        Some(DiagramKind::Flat) => HomologyVariant::normalized_involutory_degenerate(),
        None => HomologyVariant::plain(),
    }
}

fn check_variant_kind(d: &Diagram, variant: HomologyVariant) -> Result<(), DiagramError> {
    if d.kind() == Some(DiagramKind::Classical) && matches!(variant.relators, Relators::I | Relators::ID) {
        return Err(HomologyError::UnsupportedVariant(format!("{variant} for a classical diagram")).into());
    }
    Ok(())
}

/// `Φ(D) = Σ_colorings [Σ_crossings ε·φ(a, b, c)]`, after checking that `φ`
/// is a cocycle for `variant`.
pub fn state_sum(
    d: &Diagram,
    x: &TernaryQuasigroup,
    phi: &Cochain,
    variant: HomologyVariant,
) -> Result<GroupRingElement, DiagramError> {
    check_variant_kind(d, variant)?;
    check_cocycle(x, phi, variant)?;
    let colorings = d.colorings(x)?;
    Ok(state_sum_over(d, phi, &colorings))
}

/// State sum over precomputed colorings, without cocycle checks.
pub fn state_sum_over(d: &Diagram, phi: &Cochain, colorings: &[Vec<Element>]) -> GroupRingElement {
    let m = phi.modulus() as i64;
    let mut out = GroupRingElement::zero(phi.modulus());
    for col in colorings {
        let mut s = 0i64;
        for c in d.crossings() {
            let [a, b, cc, _] = c.corners;
            s += c.kind.sign() * phi.value(col[a], col[b], col[cc]) as i64;
        }
        out.add_term(s.rem_euclid(m) as u64, 1);
    }
    out
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    /// Variant used for class comparison and for generating cocycles;
    /// chosen from the diagram kind when absent.
    pub variant: Option<HomologyVariant>,
    pub modulus: u64,
    pub correspondence: Option<Correspondence>,
    /// Cocycles for the state sums; the generators from [`two_cocycles`]
    /// when absent.
    pub cocycles: Option<Vec<Cochain>>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { variant: None, modulus: 3, correspondence: None, cocycles: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassComparison {
    /// Matched colorings via a correspondence; `equal` of `matched` pairs
    /// have equal classes.
    Matched { matched: usize, equal: usize },
    /// Class multisets of all colorings compared without a correspondence.
    Multiset { classes: (usize, usize), equal: bool },
}

impl ClassComparison {
    pub fn all_equal(&self) -> bool {
        match *self {
            ClassComparison::Matched { matched, equal } => matched == equal,
            ClassComparison::Multiset { equal, .. } => equal,
        }
    }
}

#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub algebra: String,
    pub variant: HomologyVariant,
    pub modulus: u64,
    pub counts: (usize, usize),
    pub classes: Option<ClassComparison>,
    pub state_sums: Vec<(GroupRingElement, GroupRingElement)>,
}

impl InvariantReport {
    pub fn counts_equal(&self) -> bool {
        self.counts.0 == self.counts.1
    }

    pub fn state_sums_equal(&self) -> bool {
        self.state_sums.iter().all(|(a, b)| a == b)
    }

    pub fn consistent(&self) -> bool {
        self.counts_equal() && self.classes.as_ref().is_none_or(ClassComparison::all_equal) && self.state_sums_equal()
    }

    pub fn verdict(&self) -> &'static str {
        if self.consistent() {
            "consistent with invariance"
        } else {
            "distinguished"
        }
    }

    /// `key: value` lines, one fact per line.
    pub fn to_text(&self) -> String {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let mut out = String::new();
        out.push_str(&format!("algebra: {}\n", self.algebra));
        out.push_str(&format!("variant: {}\n", self.variant));
        out.push_str(&format!("modulus: {}\n", self.modulus));
        out.push_str(&format!("colorings: {} {}\n", self.counts.0, self.counts.1));
        out.push_str(&format!("colorings_equal: {}\n", yn(self.counts_equal())));
        match &self.classes {
            Some(ClassComparison::Matched { matched, equal }) => {
                out.push_str("classes_by: correspondence\n");
                out.push_str(&format!("classes_matched: {matched}\n"));
                out.push_str(&format!("classes_agreeing: {equal}\n"));
                out.push_str(&format!("classes_equal: {}\n", yn(matched == equal)));
            }
            Some(ClassComparison::Multiset { classes, equal }) => {
                out.push_str("classes_by: multiset\n");
                out.push_str(&format!("distinct_classes: {} {}\n", classes.0, classes.1));
                out.push_str(&format!("classes_equal: {}\n", yn(*equal)));
            }
            None => out.push_str("classes_by: skipped\n"),
        }
        out.push_str(&format!("cocycles: {}\n", self.state_sums.len()));
        for (i, (a, b)) in self.state_sums.iter().enumerate() {
            out.push_str(&format!("statesum.{i}: {a} | {b}\n"));
        }
        out.push_str(&format!("statesums_equal: {}\n", yn(self.state_sums_equal())));
        out.push_str(&format!("verdict: {}\n", self.verdict()));
        out
    }
}

/// Compares two diagrams: coloring counts, homology classes of associated
/// cycles and cocycle state sums.
pub fn invariant_report(
    d1: &Diagram,
    d2: &Diagram,
    x: &TernaryQuasigroup,
    options: &ReportOptions,
) -> Result<InvariantReport, DiagramError> {
    if !d1.compatible_with(d2) {
        return Err(DiagramError::KindMismatch);
    }
    let kind = d1.kind().or(d2.kind());
    let variant = options.variant.unwrap_or_else(|| default_variant(kind));
    check_variant_kind(d1, variant)?;
    check_variant_kind(d2, variant)?;
    let cols1 = d1.colorings(x)?;
    let cols2 = d2.colorings(x)?;

    let classes = if x.is_ktq() {
        let classifier = CycleClassifier::new(x, variant)?;
        let chains1 = cols1.iter().map(|c| d1.associated_chain(x, c)).collect::<Result<Vec<_>, _>>()?;
        let chains2 = cols2.iter().map(|c| d2.associated_chain(x, c)).collect::<Result<Vec<_>, _>>()?;
        Some(match &options.correspondence {
            Some(corr) => {
                corr.check(d1, d2)?;
                let pairs = corr.match_colorings(&cols1, &cols2)?;
                let mut equal = 0;
                for &(i, j) in &pairs {
                    if classifier.class_equal(&chains1[i], &chains2[j])? {
                        equal += 1;
                    }
                }
                ClassComparison::Matched { matched: pairs.len(), equal }
            }
            None => compare_class_multisets(&classifier, &chains1, &chains2)?,
        })
    } else {
        None
    };

    let cocycles = match &options.cocycles {
        Some(c) => {
            for phi in c {
                if phi.modulus() != options.modulus {
                    return Err(HomologyError::ModulusMismatch { expected: options.modulus, found: phi.modulus() }.into());
                }
                check_cocycle(x, phi, variant)?;
            }
            c.clone()
        }
        None if x.is_ktq() => two_cocycles(x, options.modulus, variant)?,
        None => Vec::new(),
    };
    let state_sums = cocycles
        .iter()
        .map(|phi| (state_sum_over(d1, phi, &cols1), state_sum_over(d2, phi, &cols2)))
        .collect();

    Ok(InvariantReport {
        algebra: format!("{} of order {}", x.flags().label(), x.order()),
        variant,
        modulus: options.modulus,
        counts: (cols1.len(), cols2.len()),
        classes,
        state_sums,
    })
}

/// Partitions all cycles into homology classes and compares how many
/// cycles of each diagram fall into each class.
fn compare_class_multisets(
    classifier: &CycleClassifier<'_>,
    first: &[Chain],
    second: &[Chain],
) -> Result<ClassComparison, HomologyError> {
    let mut reps: Vec<Chain> = Vec::new();
    let mut tally: Vec<(usize, usize)> = Vec::new();
    for (side, chains) in [first, second].into_iter().enumerate() {
        for c in chains {
            let mut slot = None;
            for (k, r) in reps.iter().enumerate() {
                if classifier.class_equal(c, r)? {
                    slot = Some(k);
                    break;
                }
            }
            let k = slot.unwrap_or_else(|| {
                reps.push(c.clone());
                tally.push((0, 0));
                reps.len() - 1
            });
            if side == 0 {
                tally[k].0 += 1;
            } else {
                tally[k].1 += 1;
            }
        }
    }
    let distinct = (tally.iter().filter(|t| t.0 > 0).count(), tally.iter().filter(|t| t.1 > 0).count());
    Ok(ClassComparison::Multiset { classes: distinct, equal: tally.iter().all(|(a, b)| a == b) })
}
