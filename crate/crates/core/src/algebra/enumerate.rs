use itertools::Itertools;

use super::{check_a3, derive_divisions, Element, OpTable};
use crate::error::AlgebraError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Filter {
    #[default]
    AllQuasigroups,
    Ktq,
    Iktq,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub order: usize,
    pub filter: Filter,
    /// Keep only the lexicographically least table of each relabeling orbit.
    pub dedup: bool,
    pub max_order: usize,
}

impl EnumerateOptions {
    pub const DEFAULT_MAX_ORDER: usize = 4;

    pub fn new(order: usize) -> Self {
        Self { order, filter: Filter::AllQuasigroups, dedup: false, max_order: Self::DEFAULT_MAX_ORDER }
    }

    pub fn filter(mut self, filter: Filter) -> Self {
        self.filter = filter;
        self
    }

    pub fn dedup(mut self, dedup: bool) -> Self {
        self.dedup = dedup;
        self
    }

    pub fn max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order;
        self
    }
}

/// Every table of the given order whose three slot maps are bijections
/// (a Latin cube), filtered by the requested axioms, in lexicographic order
/// of the flattened value sequence.
pub fn enumerate_ktqs(options: EnumerateOptions) -> Result<Vec<OpTable>, AlgebraError> {
    let n = options.order;
    if n > options.max_order {
        return Err(AlgebraError::OrderCapExceeded { order: n, cap: options.max_order });
    }
    if n == 0 || n > 16 {
        return Err(AlgebraError::InvalidOrder(n));
    }
    let perms: Vec<Vec<Element>> = if options.dedup {
        (0..n as Element).permutations(n).collect()
    } else {
        Vec::new()
    };
    let mut search = Search {
        n,
        values: vec![0; n * n * n],
        // used[slot][line] bitmask of values already placed on that line
        used: [vec![0u16; n * n], vec![0u16; n * n], vec![0u16; n * n]],
        out: Vec::new(),
        filter: options.filter,
        perms,
    };
    search.fill(0);
    Ok(search.out)
}

struct Search {
    n: usize,
    values: Vec<Element>,
    used: [Vec<u16>; 3],
    out: Vec<OpTable>,
    filter: Filter,
    perms: Vec<Vec<Element>>,
}

impl Search {
    fn lines(&self, pos: usize) -> [usize; 3] {
        let n = self.n;
        let (i, j, k) = (pos / (n * n), (pos / n) % n, pos % n);
        [j * n + k, i * n + k, i * n + j]
    }

    fn fill(&mut self, pos: usize) {
        if pos == self.values.len() {
            self.emit();
            return;
        }
        let lines = self.lines(pos);
        let taken = self.used[0][lines[0]] | self.used[1][lines[1]] | self.used[2][lines[2]];
        for v in 0..self.n {
            let bit = 1u16 << v;
            if taken & bit != 0 {
                continue;
            }
            self.values[pos] = v as Element;
            for (slot, &line) in lines.iter().enumerate() {
                self.used[slot][line] |= bit;
            }
            self.fill(pos + 1);
            for (slot, &line) in lines.iter().enumerate() {
                self.used[slot][line] &= !bit;
            }
        }
    }

    fn emit(&mut self) {
        let table = OpTable { order: self.n, values: self.values.clone() };
        let keep = match self.filter {
            Filter::AllQuasigroups => true,
            Filter::Ktq | Filter::Iktq => {
                let a3 = check_a3(&table);
                a3.a3l()
                    && a3.a3r()
                    && (self.filter == Filter::Ktq
                        || derive_divisions(&table).map(|d| d.middle == table).unwrap_or(false))
            }
        };
        if keep && (self.perms.is_empty() || is_orbit_minimal(&table, &self.perms)) {
            self.out.push(table);
        }
    }
}

/// True when no relabeling yields a lexicographically smaller table.
fn is_orbit_minimal(t: &OpTable, perms: &[Vec<Element>]) -> bool {
    let n = t.order();
    let mut inv = vec![0 as Element; n];
    for perm in perms {
        for (i, &p) in perm.iter().enumerate() {
            inv[p as usize] = i as Element;
        }
        // Relabeled entry at (x, y, z) is perm[T(inv x, inv y, inv z)];
        // compare in flattened order and stop at the first difference.
        'cmp: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let v = perm[t.apply(inv[x], inv[y], inv[z]) as usize];
                    let w = t.values[(x * n + y) * n + z];
                    if v < w {
                        return false;
                    }
                    if v > w {
                        break 'cmp;
                    }
                }
            }
        }
    }
    true
}
