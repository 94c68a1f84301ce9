//! Exact integer matrix algorithms: Smith and Hermite normal forms, lattice
//! membership, cokernels and kernels modulo `m`.
//!
//! All arithmetic is on [`BigInt`]; intermediate entries of unimodular
//! transforms grow well past 64 bits on the boundary matrices we feed in.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::LinalgError;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = v.into();
            }
        }
        m
    }

    /// Builds a `rows × columns.len()` matrix from column vectors.
    pub fn from_columns<T: Into<BigInt> + Clone>(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has the wrong length");
            for (i, v) in col.iter().enumerate() {
                m.data[i * columns.len() + j] = v.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: impl Into<BigInt>) {
        self.data[i * self.cols + j] = v.into();
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut out = IntMatrix::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * cols + j] = self.get(i, j).clone();
            }
            for j in 0..other.cols {
                out.data[i * cols + self.cols + j] = other.get(i, j).clone();
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// The submatrix of the first `rows` rows.
    pub fn top_rows(&self, rows: usize) -> IntMatrix {
        IntMatrix { rows, cols: self.cols, data: self.data[..rows * self.cols].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free elimination (Bareiss).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * prev
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]` restricted to columns `from..`.
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt, from: usize) {
        if k.is_zero() {
            return;
        }
        let c = self.cols;
        for j in from..c {
            let s = &self.data[src * c + j];
            if !s.is_zero() {
                let add = k * s;
                self.data[dst * c + j] += add;
            }
        }
    }

    /// `col[dst] += k * col[src]` restricted to rows `from..`.
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt, from: usize) {
        if k.is_zero() {
            return;
        }
        let c = self.cols;
        for i in from..self.rows {
            let s = &self.data[i * c + src];
            if !s.is_zero() {
                let add = k * s;
                self.data[i * c + dst] += add;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `D = U · M · V` with `U`, `V` unimodular and `D` diagonal, each diagonal
/// entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        diagonal(&self.d)
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn diagonal(d: &IntMatrix) -> Vec<BigInt> {
    (0..d.rows.min(d.cols)).map(|i| d.get(i, i).clone()).take_while(|v| !v.is_zero()).collect()
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (d, u, v) = smith_impl(m, true);
    SmithDecomposition { u: u.unwrap(), d, v: v.unwrap() }
}

/// Nonzero invariant factors only, skipping the transforms.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    diagonal(&smith_impl(m, false).0)
}

pub fn rank(m: &IntMatrix) -> usize {
    invariant_factors(m).len()
}

/// Position of a minimal-magnitude nonzero entry in rows and columns
/// `t..`, scanning rows first.
fn min_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let mag = v.abs();
            if best.as_ref().is_none_or(|(_, b)| mag < *b) {
                let one = mag.is_one();
                best = Some(((i, j), mag));
                if one {
                    return best.map(|(p, _)| p);
                }
            }
        }
    }
    best.map(|(p, _)| p)
}

fn smith_impl(m: &IntMatrix, track: bool) -> (IntMatrix, Option<IntMatrix>, Option<IntMatrix>) {
    let mut a = m.clone();
    let mut u = track.then(|| IntMatrix::identity(m.rows));
    let mut v = track.then(|| IntMatrix::identity(m.cols));
    let limit = a.rows.min(a.cols);
    for t in 0..limit {
        let Some((pi, pj)) = min_entry(&a, t) else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..a.rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -(a.get(i, t) / a.get(t, t));
                a.add_row_multiple(i, t, &q, t);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, t, &q, 0);
                }
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..a.cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -(a.get(t, j) / a.get(t, t));
                a.add_col_multiple(j, t, &q, t);
                if let Some(v) = v.as_mut() {
                    v.add_col_multiple(j, t, &q, 0);
                }
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // Move the smallest remainder in the pivot row or column into place.
                let mut best = (t, t);
                let mut mag = a.get(t, t).abs();
                for i in t + 1..a.rows {
                    let x = a.get(i, t);
                    if !x.is_zero() && x.abs() < mag {
                        mag = x.abs();
                        best = (i, t);
                    }
                }
                for j in t + 1..a.cols {
                    let x = a.get(t, j);
                    if !x.is_zero() && x.abs() < mag {
                        mag = x.abs();
                        best = (t, j);
                    }
                }
                a.swap_rows(t, best.0);
                a.swap_cols(t, best.1);
                if let Some(u) = u.as_mut() {
                    u.swap_rows(t, best.0);
                }
                if let Some(v) = v.as_mut() {
                    v.swap_cols(t, best.1);
                }
                continue;
            }
            break;
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
    }
    enforce_divisibility(&mut a, u.as_mut(), v.as_mut());
    (a, u, v)
}

/// Turns a diagonal matrix with positive leading entries into one whose
/// entries form a divisibility chain, replacing each offending pair
/// `diag(a, b)` by `diag(gcd, lcm)` through a 2×2 unimodular transform.
fn enforce_divisibility(a: &mut IntMatrix, mut u: Option<&mut IntMatrix>, mut v: Option<&mut IntMatrix>) {
    let r = diagonal(a).len();
    for i in 0..r {
        for j in i + 1..r {
            let (da, db) = (a.get(i, i).clone(), a.get(j, j).clone());
            if db.is_multiple_of(&da) {
                continue;
            }
            let e = da.extended_gcd(&db);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let (a_g, b_g) = (&da / &g, &db / &g);
            if let Some(u) = u.as_deref_mut() {
                for c in 0..u.cols {
                    let (ri, rj) = (u.get(i, c).clone(), u.get(j, c).clone());
                    u.set(i, c, &x * &ri + &y * &rj);
                    u.set(j, c, -&b_g * &ri + &a_g * &rj);
                }
            }
            if let Some(v) = v.as_deref_mut() {
                let (yb, xa) = (&y * &b_g, &x * &a_g);
                for rr in 0..v.rows {
                    let (ci, cj) = (v.get(rr, i).clone(), v.get(rr, j).clone());
                    v.set(rr, i, &ci + &cj);
                    v.set(rr, j, -&yb * &ci + &xa * &cj);
                }
            }
            a.set(j, j, &da * &b_g);
            a.set(i, i, g);
        }
    }
}

/// Column-style Hermite normal form `H = M · W` with `W` unimodular. The
/// nonzero columns of `H` come first, are lower echelon with positive
/// pivots, and entries left of each pivot are reduced into `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub w: IntMatrix,
    /// Pivot row of each nonzero column of `h`.
    pub pivot_rows: Vec<usize>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// The nonzero columns of `H`: a basis of the column lattice.
    pub fn basis(&self) -> IntMatrix {
        let r = self.rank();
        let mut b = IntMatrix::zeros(self.h.rows, r);
        for i in 0..self.h.rows {
            for j in 0..r {
                b.set(i, j, self.h.get(i, j).clone());
            }
        }
        b
    }

    /// Columns of `W` beyond the rank: a lattice basis of the kernel of `M`.
    pub fn kernel_basis(&self) -> IntMatrix {
        let (n, r) = (self.w.rows, self.rank());
        let mut k = IntMatrix::zeros(n, n - r);
        for i in 0..n {
            for j in r..n {
                k.set(i, j - r, self.w.get(i, j).clone());
            }
        }
        k
    }

    /// Coordinates `y` with `basis() · y = v`, if `v` lies in the lattice.
    pub fn solve_in_basis(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.h.rows);
        let mut r = v.to_vec();
        let mut y = Vec::with_capacity(self.rank());
        for (k, &p) in self.pivot_rows.iter().enumerate() {
            let (q, rem) = r[p].div_rem(self.h.get(p, k));
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (i, ri) in r.iter_mut().enumerate().skip(p) {
                    let h = self.h.get(i, k);
                    if !h.is_zero() {
                        *ri -= &q * h;
                    }
                }
            }
            y.push(q);
        }
        r.iter().all(Zero::is_zero).then_some(y)
    }

    /// Some `c` with `M · c = v`, if one exists.
    pub fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.solve_in_basis(v)?;
        let cols = self.w.rows;
        Some(
            (0..cols)
                .map(|i| y.iter().enumerate().map(|(k, yk)| self.w.get(i, k) * yk).sum())
                .collect(),
        )
    }
}

pub fn hermite_normal_form(m: &IntMatrix) -> HermiteForm {
    let mut h = m.clone();
    let mut w = IntMatrix::identity(m.cols);
    let mut pivot_rows = Vec::new();
    let mut k = 0;
    for i in 0..h.rows {
        if k == h.cols {
            break;
        }
        loop {
            // Smallest nonzero entry of row i among columns k.. becomes the pivot.
            let mut best: Option<(usize, BigInt)> = None;
            for j in k..h.cols {
                let x = h.get(i, j);
                if !x.is_zero() && best.as_ref().is_none_or(|(_, b)| x.abs() < *b) {
                    best = Some((j, x.abs()));
                }
            }
            let Some((j, _)) = best else { break };
            h.swap_cols(k, j);
            w.swap_cols(k, j);
            let mut done = true;
            for j in k + 1..h.cols {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let q = -(h.get(i, j) / h.get(i, k));
                h.add_col_multiple(j, k, &q, i);
                w.add_col_multiple(j, k, &q, 0);
                if !h.get(i, j).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if k < h.cols && !h.get(i, k).is_zero() {
            if h.get(i, k).is_negative() {
                h.negate_col(k);
                w.negate_col(k);
            }
            let p = h.get(i, k).clone();
            for j in 0..k {
                let q = -h.get(i, j).div_floor(&p);
                h.add_col_multiple(j, k, &q, i);
                w.add_col_multiple(j, k, &q, 0);
            }
            pivot_rows.push(i);
            k += 1;
        }
    }
    HermiteForm { h, w, pivot_rows }
}

/// Decides whether `v` lies in the integer column span of `m`, returning a
/// coefficient vector `c` with `m · c = v` when it does.
pub fn lattice_membership(v: &[BigInt], m: &IntMatrix) -> Result<Option<Vec<BigInt>>, LinalgError> {
    if v.len() != m.rows {
        return Err(LinalgError::DimensionMismatch { expected: m.rows, found: v.len() });
    }
    Ok(hermite_normal_form(m).solve(v))
}

/// A lattice basis (as columns) of the integer kernel of `m`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let mut k = IntMatrix::zeros(m.cols, m.cols - r);
    for i in 0..m.cols {
        for j in r..m.cols {
            k.set(i, j - r, snf.v.get(i, j).clone());
        }
    }
    k
}

/// Generators of `{x ∈ Z_m^cols : M·x ≡ 0 (mod m)}`, reduced into `[0, m)`.
///
/// With `D = U M V`, `x = V y` solves the system iff `d_i y_i ≡ 0` for every
/// diagonal entry, so the solutions are generated by `(m / gcd(d_i, m))·v_i`
/// and by the columns of `V` beyond the rank. Works for composite `m`.
pub fn kernel_mod(m: &IntMatrix, modulus: u64) -> Result<Vec<Vec<u64>>, LinalgError> {
    if modulus < 2 {
        return Err(LinalgError::InvalidModulus(modulus));
    }
    let modulus_big = BigInt::from(modulus);
    let snf = smith_normal_form(m);
    let factors = snf.invariant_factors();
    let mut out = Vec::new();
    for j in 0..m.cols {
        let scale = match factors.get(j) {
            Some(d) => {
                let g = d.gcd(&modulus_big);
                &modulus_big / g
            }
            None => BigInt::one(),
        };
        if scale.mod_floor(&modulus_big).is_zero() {
            continue;
        }
        let gen: Vec<u64> = (0..m.cols)
            .map(|i| (snf.v.get(i, j) * &scale).mod_floor(&modulus_big).to_u64().unwrap())
            .collect();
        if gen.iter().any(|&x| x != 0) {
            out.push(gen);
        }
    }
    Ok(out)
}

/// A finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with
/// `d_1 | d_2 | … | d_k` and every `d_i ≥ 2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of torsion summands whose order is divisible by `p`.
    pub fn p_torsion_count(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.torsion.iter().filter(|d| d.is_multiple_of(&p)).count()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Structure of `Z^rows / colspan(m)`.
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    let factors = invariant_factors(m);
    AbelianGroup {
        free_rank: m.rows - factors.len(),
        torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}
