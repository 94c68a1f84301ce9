//! Region model of link, flat-link and marked-vertex diagrams.
//!
//! A diagram is a region count plus a list of crossings, each naming the
//! regions at its four corners by role. For a classical or flat crossing
//! `(a, b, c, d)` a coloring must satisfy `d = T(a, b, c)`; for a marker
//! `(p, q, p2, q2)` opposite corners share a color.
//!
//! Text format:
//!
//! ```text
//! # trefoil as a closed 3-braid
//! diagram 5
//! P 0 4 1 2
//! P 0 2 1 3
//! P 0 3 1 4
//! ```

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{Element, TernaryQuasigroup};
use crate::chain::{boundary, Chain, DTuple, DiffKind};
use crate::error::{DiagramError, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrossingKind {
    Positive,
    Negative,
    Flat,
    Marker,
}

impl CrossingKind {
    pub fn letter(self) -> char {
        match self {
            CrossingKind::Positive => 'P',
            CrossingKind::Negative => 'N',
            CrossingKind::Flat => 'F',
            CrossingKind::Marker => 'M',
        }
    }

    /// Orientation of the crossing's term in associated chains and state sums.
    pub fn sign(self) -> i64 {
        match self {
            CrossingKind::Positive | CrossingKind::Flat => 1,
            CrossingKind::Negative => -1,
            CrossingKind::Marker => 0,
        }
    }
}

impl FromStr for CrossingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "P" => Ok(CrossingKind::Positive),
            "N" => Ok(CrossingKind::Negative),
            "F" => Ok(CrossingKind::Flat),
            "M" => Ok(CrossingKind::Marker),
            other => Err(format!("unknown crossing kind `{other}` (expected P, N, F or M)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub kind: CrossingKind,
    pub corners: [usize; 4],
}

impl Crossing {
    pub fn new(kind: CrossingKind, corners: [usize; 4]) -> Self {
        Self { kind, corners }
    }

    /// The coloring constraint holds for `col`.
    fn satisfied(&self, x: &TernaryQuasigroup, col: &[Element]) -> bool {
        let [a, b, c, d] = self.corners.map(|r| col[r]);
        match self.kind {
            CrossingKind::Marker => a == c && b == d,
            _ => x.apply(a, b, c) == d,
        }
    }
}

/// Whether a diagram is read with classical or flat semantics. Diagrams
/// with no classical or flat crossings are compatible with both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagramKind {
    Classical,
    Flat,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    num_regions: usize,
    crossings: Vec<Crossing>,
}

impl Diagram {
    pub fn new(num_regions: usize, crossings: Vec<Crossing>) -> Result<Self, DiagramError> {
        for c in &crossings {
            if let Some(&region) = c.corners.iter().find(|&&r| r >= num_regions) {
                return Err(DiagramError::RegionOutOfRange { region, num_regions });
            }
        }
        let d = Self { num_regions, crossings };
        d.kind_checked()?;
        Ok(d)
    }

    pub fn num_regions(&self) -> usize {
        self.num_regions
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn kind(&self) -> Option<DiagramKind> {
        self.kind_checked().expect("validated at construction")
    }

    fn kind_checked(&self) -> Result<Option<DiagramKind>, DiagramError> {
        let classical = self.crossings.iter().any(|c| matches!(c.kind, CrossingKind::Positive | CrossingKind::Negative));
        let flat = self.crossings.iter().any(|c| c.kind == CrossingKind::Flat);
        match (classical, flat) {
            (true, true) => Err(DiagramError::KindMismatch),
            (true, false) => Ok(Some(DiagramKind::Classical)),
            (false, true) => Ok(Some(DiagramKind::Flat)),
            (false, false) => Ok(None),
        }
    }

    pub fn is_flat(&self) -> bool {
        self.kind() == Some(DiagramKind::Flat)
    }

    /// Both diagrams can be read under the same semantics.
    pub fn compatible_with(&self, other: &Diagram) -> bool {
        match (self.kind(), other.kind()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    fn require_algebra(&self, x: &TernaryQuasigroup) -> Result<(), DiagramError> {
        if self.is_flat() {
            x.require_iktq()?;
        } else {
            x.require_quasigroup()?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Diagram, ParseError> {
        let mut num_regions: Option<usize> = None;
        let mut crossings = Vec::new();
        let mut seen_classical: Option<usize> = None;
        let mut seen_flat: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let Some(n) = num_regions else {
                num_regions = match words.as_slice() {
                    ["diagram", n] => n.parse::<usize>().ok(),
                    _ => None,
                };
                if num_regions.is_none() {
                    return Err(ParseError::new(line_no, "expected header `diagram <num_regions>`"));
                }
                continue;
            };
            if words.len() != 5 {
                return Err(ParseError::new(line_no, format!("expected a kind and 4 regions, found {} fields", words.len())));
            }
            let kind: CrossingKind = words[0].parse().map_err(|e: String| ParseError::new(line_no, e))?;
            let mut corners = [0usize; 4];
            for (slot, w) in corners.iter_mut().zip(&words[1..]) {
                let r: usize = w
                    .parse()
                    .map_err(|_| ParseError::new(line_no, format!("`{w}` is not a region index")))?;
                if r >= n {
                    return Err(ParseError::new(
                        line_no,
                        DiagramError::RegionOutOfRange { region: r, num_regions: n }.to_string(),
                    ));
                }
                *slot = r;
            }
            match kind {
                CrossingKind::Positive | CrossingKind::Negative => seen_classical = Some(line_no),
                CrossingKind::Flat => seen_flat = Some(line_no),
                CrossingKind::Marker => {}
            }
            if seen_classical.is_some() && seen_flat.is_some() {
                return Err(ParseError::new(line_no, DiagramError::KindMismatch.to_string()));
            }
            crossings.push(Crossing::new(kind, corners));
        }
        let n = num_regions.ok_or_else(|| ParseError::new(1, "missing header `diagram <num_regions>`"))?;
        Ok(Diagram { num_regions: n, crossings })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("diagram {}\n", self.num_regions);
        for c in &self.crossings {
            let [a, b, cc, d] = c.corners;
            out.push_str(&format!("{} {a} {b} {cc} {d}\n", c.kind.letter()));
        }
        out
    }

    pub fn is_valid_coloring(&self, x: &TernaryQuasigroup, col: &[Element]) -> Result<bool, DiagramError> {
        self.require_algebra(x)?;
        self.check_length(col)?;
        if col.iter().any(|&e| e as usize >= x.order()) {
            return Ok(false);
        }
        Ok(self.crossings.iter().all(|c| c.satisfied(x, col)))
    }

    fn check_length(&self, col: &[Element]) -> Result<(), DiagramError> {
        if col.len() != self.num_regions {
            return Err(DiagramError::ColoringLength { expected: self.num_regions, found: col.len() });
        }
        Ok(())
    }

    /// Every valid coloring, in lexicographic order.
    pub fn colorings(&self, x: &TernaryQuasigroup) -> Result<Vec<Vec<Element>>, DiagramError> {
        self.require_algebra(x)?;
        let mut solver = Solver::new(self, x);
        solver.search(0);
        let mut out = solver.found;
        out.sort_unstable();
        Ok(out)
    }

    pub fn count_colorings(&self, x: &TernaryQuasigroup) -> Result<usize, DiagramError> {
        Ok(self.colorings(x)?.len())
    }

    /// Generators and relations of the algebra presented by the diagram.
    pub fn presentation(&self) -> String {
        let gens: Vec<String> = (0..self.num_regions).map(|r| format!("r{r}")).collect();
        let mut out = format!("generators: {}\n", gens.join(", "));
        for c in &self.crossings {
            let [a, b, cc, d] = c.corners;
            match c.kind {
                CrossingKind::Marker => {
                    out.push_str(&format!("r{a} = r{cc}\n"));
                    out.push_str(&format!("r{b} = r{d}\n"));
                }
                _ => out.push_str(&format!("T(r{a}, r{b}, r{cc}) = r{d}\n")),
            }
        }
        out
    }

    /// The degree-1 chain `Σ ±(a, b, c)` over classical and flat crossings.
    pub fn associated_chain(&self, x: &TernaryQuasigroup, col: &[Element]) -> Result<Chain, DiagramError> {
        if !self.is_valid_coloring(x, col)? {
            let bad = self.crossings.iter().position(|c| !c.satisfied(x, col)).unwrap_or(0);
            return Err(DiagramError::InvalidColoring(bad));
        }
        let mut chain = Chain::zero(1);
        for c in &self.crossings {
            if c.kind == CrossingKind::Marker {
                continue;
            }
            let [a, b, cc, _] = c.corners;
            chain.add_term(DTuple::from([col[a], col[b], col[cc]]), c.kind.sign());
        }
        if !boundary(x.table(), &chain, DiffKind::Full).is_zero() {
            return Err(DiagramError::NotACycle);
        }
        Ok(chain)
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Backtracking over regions with propagation through single unknown corners.
struct Solver<'a> {
    diagram: &'a Diagram,
    algebra: &'a TernaryQuasigroup,
    order: Vec<usize>,
    incident: Vec<Vec<usize>>,
    colors: Vec<Option<Element>>,
    found: Vec<Vec<Element>>,
}

impl<'a> Solver<'a> {
    fn new(diagram: &'a Diagram, algebra: &'a TernaryQuasigroup) -> Self {
        let n = diagram.num_regions;
        let mut incident = vec![Vec::new(); n];
        for (i, c) in diagram.crossings.iter().enumerate() {
            for &r in &c.corners {
                if !incident[r].contains(&i) {
                    incident[r].push(i);
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&r| (std::cmp::Reverse(incident[r].len()), r));
        Self { diagram, algebra, order, incident, colors: vec![None; n], found: Vec::new() }
    }

    fn search(&mut self, depth: usize) {
        if depth == self.order.len() {
            let col: Vec<Element> = self.colors.iter().map(|c| c.expect("all regions assigned")).collect();
            self.found.push(col);
            return;
        }
        let region = self.order[depth];
        if self.colors[region].is_some() {
            self.search(depth + 1);
            return;
        }
        for v in 0..self.algebra.order() as Element {
            let mut trail = Vec::new();
            if self.assign(region, v, &mut trail) {
                self.search(depth + 1);
            }
            for r in trail {
                self.colors[r] = None;
            }
        }
    }

    /// Assigns and propagates; records every region it colors in `trail`.
    /// Returns false on a contradiction.
    fn assign(&mut self, region: usize, value: Element, trail: &mut Vec<usize>) -> bool {
        let mut queue = vec![(region, value)];
        while let Some((r, v)) = queue.pop() {
            match self.colors[r] {
                Some(existing) if existing == v => continue,
                Some(_) => return false,
                None => {
                    self.colors[r] = Some(v);
                    trail.push(r);
                }
            }
            for &ci in &self.incident[r] {
                let c = &self.diagram.crossings[ci];
                match self.forced(c) {
                    Forced::Contradiction => return false,
                    Forced::Value(slot_region, val) => queue.push((slot_region, val)),
                    Forced::Nothing => {}
                }
            }
        }
        true
    }

    fn forced(&self, c: &Crossing) -> Forced {
        let known = c.corners.map(|r| self.colors[r]);
        if c.kind == CrossingKind::Marker {
            for (i, j) in [(0, 2), (1, 3)] {
                match (known[i], known[j]) {
                    (Some(a), Some(b)) if a != b => return Forced::Contradiction,
                    (Some(a), None) => return Forced::Value(c.corners[j], a),
                    (None, Some(b)) => return Forced::Value(c.corners[i], b),
                    _ => {}
                }
            }
            return Forced::Nothing;
        }
        let unknown: Vec<usize> = (0..4).filter(|&i| known[i].is_none()).collect();
        match unknown.as_slice() {
            [] => {
                let [a, b, cc, d] = known.map(|k| k.unwrap());
                if self.algebra.apply(a, b, cc) == d {
                    Forced::Nothing
                } else {
                    Forced::Contradiction
                }
            }
            [slot] => {
                let div = self.algebra.divisions().expect("quasigroup checked before solving");
                let k = |i: usize| known[i].unwrap();
                let v = match slot {
                    0 => div.left.apply(k(3), k(1), k(2)),
                    1 => div.middle.apply(k(0), k(3), k(2)),
                    2 => div.right.apply(k(0), k(1), k(3)),
                    _ => self.algebra.apply(k(0), k(1), k(2)),
                };
                Forced::Value(c.corners[*slot], v)
            }
            _ => Forced::Nothing,
        }
    }
}

enum Forced {
    Nothing,
    Contradiction,
    Value(usize, Element),
}

/// Region pairs `(i, j)` relating a region of one diagram to a region of
/// another. Several regions of the first may map to the same region of the
/// second.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Correspondence {
    pub pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Self { pairs }
    }

    pub fn parse(text: &str) -> Result<Correspondence, ParseError> {
        let mut header = false;
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header {
                if line != "correspondence" {
                    return Err(ParseError::new(line_no, "expected header `correspondence`"));
                }
                header = true;
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| ParseError::new(line_no, "expected two region indices"))?;
            let [i, j] = nums[..] else {
                return Err(ParseError::new(line_no, "expected two region indices"));
            };
            pairs.push((i, j));
        }
        if !header {
            return Err(ParseError::new(1, "missing header `correspondence`"));
        }
        Ok(Correspondence { pairs })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("correspondence\n");
        for (i, j) in &self.pairs {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }

    pub fn check(&self, first: &Diagram, second: &Diagram) -> Result<(), DiagramError> {
        for &(i, j) in &self.pairs {
            if i >= first.num_regions() {
                return Err(DiagramError::RegionOutOfRange { region: i, num_regions: first.num_regions() });
            }
            if j >= second.num_regions() {
                return Err(DiagramError::RegionOutOfRange { region: j, num_regions: second.num_regions() });
            }
        }
        Ok(())
    }

    /// For each coloring of `first` (by index), the index of the unique
    /// coloring of `second` agreeing with it on every listed pair.
    pub fn match_colorings(
        &self,
        first: &[Vec<Element>],
        second: &[Vec<Element>],
    ) -> Result<Vec<(usize, usize)>, DiagramError> {
        let targets: Vec<usize> = self.pairs.iter().map(|&(_, j)| j).collect();
        let mut index: HashMap<Vec<Element>, Vec<usize>> = HashMap::new();
        for (k, col) in second.iter().enumerate() {
            index.entry(targets.iter().map(|&j| col[j]).collect()).or_default().push(k);
        }
        let mut out = Vec::with_capacity(first.len());
        for (k, col) in first.iter().enumerate() {
            let key: Vec<Element> = self.pairs.iter().map(|&(i, _)| col[i]).collect();
            // Regions merged by the map must already agree.
            let consistent = self.pairs.iter().zip(&key).all(|(&(_, j), &v)| {
                self.pairs.iter().zip(&key).all(|(&(_, j2), &v2)| j != j2 || v == v2)
            });
            let hits = if consistent { index.get(&key).map_or(&[][..], |v| &v[..]) } else { &[] };
            if hits.len() != 1 {
                return Err(DiagramError::Correspondence { index: k, found: hits.len() });
            }
            out.push((k, hits[0]));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{affine_table, classify};

    fn z3() -> TernaryQuasigroup {
        classify(&affine_table(3, 1, 2, 1).unwrap())
    }

    const EXAMPLE: &str = "diagram 3\nP 1 0 1 2\nP 0 1 0 1\nP 1 2 1 0\n";

    fn brute_force(d: &Diagram, x: &TernaryQuasigroup) -> Vec<Vec<Element>> {
        let n = x.order();
        let total = n.pow(d.num_regions() as u32);
        let mut out = Vec::new();
        for idx in 0..total {
            let col: Vec<Element> =
                (0..d.num_regions()).rev().map(|p| ((idx / n.pow(p as u32)) % n) as Element).collect();
            if d.is_valid_coloring(x, &col).unwrap() {
                out.push(col);
            }
        }
        out
    }

    #[test]
    fn example_diagram() {
        let d = Diagram::parse(EXAMPLE).unwrap();
        assert_eq!(d.to_text(), EXAMPLE);
        let x = z3();
        let cols = d.colorings(&x).unwrap();
        assert_eq!(cols, vec![vec![0, 0, 0], vec![1, 1, 1], vec![2, 2, 2]]);
        assert!(!d.is_valid_coloring(&x, &[0, 1, 0]).unwrap());
        assert_eq!(d.presentation(), "generators: r0, r1, r2\nT(r1, r0, r1) = r2\nT(r0, r1, r0) = r1\nT(r1, r2, r1) = r0\n");
        let c = d.associated_chain(&x, &[2, 2, 2]).unwrap();
        assert_eq!(c, Chain::from_terms(1, [(DTuple::from([2u8, 2, 2]), 3)]));
    }

    #[test]
    fn unknot_and_kink() {
        let x = z3();
        let unknot = Diagram::parse("diagram 2\n").unwrap();
        assert_eq!(unknot.count_colorings(&x).unwrap(), 9);
        assert_eq!(unknot.presentation(), "generators: r0, r1\n");
        assert!(unknot.associated_chain(&x, &[0, 1]).unwrap().is_zero());
        let kink = Diagram::parse("diagram 3\nP 0 1 2 1\n").unwrap();
        assert_eq!(kink.count_colorings(&x).unwrap(), 9);
        assert_eq!(kink.colorings(&x).unwrap(), brute_force(&kink, &x));
        assert_eq!(kink.presentation(), "generators: r0, r1, r2\nT(r0, r1, r2) = r1\n");
        for col in kink.colorings(&x).unwrap() {
            let c = kink.associated_chain(&x, &col).unwrap();
            let (t, k) = c.iter().next().unwrap();
            assert_eq!(k, 1);
            let e = t.entries();
            assert_eq!(x.apply(e[0], e[1], e[2]), e[1]);
        }
    }

    #[test]
    fn parse_errors() {
        assert_eq!(Diagram::parse("diagram 2\nP 0 1 2 1\n").unwrap_err().line, 2);
        assert_eq!(Diagram::parse("diagram 3\nP 0 1 2 1\nF 0 1 2 1\n").unwrap_err().line, 3);
        assert!(Diagram::parse("diagram 3\nQ 0 1 2 1\n").is_err());
        assert!(Diagram::parse("diagram 3\nP 0 1 2\n").is_err());
        assert!(Diagram::parse("# nothing\n").is_err());
        assert!(Diagram::parse("diagram 4\nF 0 1 2 3\nM 0 1 0 1\n").is_ok());
    }

    #[test]
    fn flat_requires_involutory() {
        let z5 = classify(&affine_table(5, 2, 3, 1).unwrap());
        let flat = Diagram::parse("diagram 3\nF 0 1 2 1\n").unwrap();
        assert!(flat.colorings(&z5).is_err());
        assert_eq!(flat.count_colorings(&z3()).unwrap(), 9);
    }

    #[test]
    fn markers_identify_opposite_corners() {
        let x = z3();
        let d = Diagram::parse("diagram 4\nM 0 1 2 3\n").unwrap();
        let cols = d.colorings(&x).unwrap();
        assert_eq!(cols.len(), 9);
        assert!(cols.iter().all(|c| c[0] == c[2] && c[1] == c[3]));
        assert!(d.associated_chain(&x, &[0, 1, 0, 1]).unwrap().is_zero());
    }

    #[test]
    fn correspondence_matching() {
        let x = z3();
        let kink = Diagram::parse("diagram 3\nP 0 1 2 1\n").unwrap();
        let unknot = Diagram::parse("diagram 2\n").unwrap();
        let corr = Correspondence::parse("correspondence\n1 0\n2 1\n").unwrap();
        corr.check(&kink, &unknot).unwrap();
        let a = kink.colorings(&x).unwrap();
        let b = unknot.colorings(&x).unwrap();
        let m = corr.match_colorings(&a, &b).unwrap();
        assert_eq!(m.len(), 9);
        for (i, j) in m {
            assert_eq!(a[i][1], b[j][0]);
            assert_eq!(a[i][2], b[j][1]);
        }
        let partial = Correspondence::new(vec![(1, 0)]);
        assert!(matches!(partial.match_colorings(&a, &b), Err(DiagramError::Correspondence { found: 3, .. })));
        assert_eq!(Correspondence::parse(&corr.to_text()).unwrap(), corr);
    }
}
