//! Exact integer linear algebra: dense integer matrices, the Smith normal
//! form, and finite abelian quotients of lattices.
//!
//! Everything here is exact. Floating point never enters this module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

/// Errors raised by lattice computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("quotient is infinite: sublattice has rank {rank} in an ambient lattice of rank {ambient} (free part of rank {free})")]
    InfiniteQuotient {
        rank: usize,
        ambient: usize,
        free: usize,
    },
}

/// A dense rectangular matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    /// The zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    /// The `n × n` identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// A diagonal matrix with the given entries.
    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = BigInt::from(e);
        }
        m
    }

    /// Builds a matrix from machine-integer rows. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(LatticeError::Dimension {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Builds an `rows × cols` matrix from arbitrary-precision entries in row-major order.
    pub fn from_entries(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, LatticeError> {
        if data.len() != rows * cols {
            return Err(LatticeError::Dimension {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
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

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    /// Row `i` as a vector.
    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::Dimension {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self · v`.
    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        if v.len() != self.cols {
            return Err(LatticeError::Dimension {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect())
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Panics if the matrix is not square.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
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
        sign * a.get(n - 1, n - 1)
    }

    /// True when the matrix is square with determinant ±1.
    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    /// True when every off-diagonal entry vanishes.
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
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

    /// row[dst] += f · row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * f;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += f · col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * f;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Result of a Smith normal form computation: `U · M · V = D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The diagonal entries of `D` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

/// Computes unimodular `U`, `V` and a diagonal `D = U·M·V` whose nonnegative
/// diagonal entries form a divisibility chain `d₁ | d₂ | …` (zeros last).
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    for k in 0..r.min(c) {
        loop {
            // Pivot: entry of smallest absolute value in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in k..r {
                for j in k..c {
                    let e = d.get(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| e.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v);
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let mut dirty = false;
            for i in k + 1..r {
                let (q, rem) = d.get(i, k).div_mod_floor(d.get(k, k));
                if !q.is_zero() {
                    let f = -q;
                    d.add_row(i, k, &f);
                    u.add_row(i, k, &f);
                }
                dirty |= !rem.is_zero();
            }
            for j in k + 1..c {
                let (q, rem) = d.get(k, j).div_mod_floor(d.get(k, k));
                if !q.is_zero() {
                    let f = -q;
                    d.add_col(j, k, &f);
                    v.add_col(j, k, &f);
                }
                dirty |= !rem.is_zero();
            }
            if dirty {
                continue;
            }
            // Pivot row and column are clear; enforce divisibility of the block.
            let pivot = d.get(k, k).clone();
            let offender = (k + 1..r).find(|&i| (k + 1..c).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(k, i, &one);
                    u.add_row(k, i, &one);
                }
                None => break,
            }
        }
        if d.get(k, k).is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }
    finish(u, d, v)
}

fn finish(mut u: IntMatrix, mut d: IntMatrix, v: IntMatrix) -> SmithForm {
    for k in 0..d.rows().min(d.cols()) {
        if d.get(k, k).is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }
    SmithForm { u, d, v }
}

/// A finite abelian group `ℤⁿ / L` in invariant-factor form, together with
/// the projection from ambient vectors to residue tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    ambient_rank: usize,
    /// Invariant factors `d₁ | d₂ | …`, each `> 1`.
    invariant_factors: Vec<BigInt>,
    /// Rows of the change of basis that carry the ambient lattice onto the
    /// Smith basis, restricted to the nontrivial factors.
    projection: Vec<Vec<BigInt>>,
}

impl FiniteAbelianGroup {
    /// The trivial group on an ambient lattice of the given rank.
    pub fn trivial(ambient_rank: usize) -> Self {
        Self {
            ambient_rank,
            invariant_factors: Vec::new(),
            projection: Vec::new(),
        }
    }

    /// The cyclic group `ℤ/n` viewed as a quotient of `ℤ`.
    pub fn cyclic(n: u64) -> Self {
        quotient_group(1, &IntMatrix::diagonal(&[n as i64])).expect("n ≥ 1 gives a finite quotient")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    /// Invariant factors as machine integers.
    pub fn invariant_factors_u64(&self) -> Vec<u64> {
        self.invariant_factors
            .iter()
            .map(|d| d.to_u64().expect("invariant factor fits in u64"))
            .collect()
    }

    /// Group order `∏ dᵢ`.
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Group order as a machine integer.
    pub fn order_u64(&self) -> u64 {
        self.order().to_u64().expect("group order fits in u64")
    }

    /// Maps an ambient vector to its residue tuple, entries in `[0, dᵢ)`.
    pub fn project(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.ambient_rank, "projection of a vector of the wrong rank");
        self.projection
            .iter()
            .zip(&self.invariant_factors)
            .map(|(row, d)| {
                let s: BigInt = row.iter().zip(x).map(|(a, b)| a * b).sum();
                s.mod_floor(d)
            })
            .collect()
    }

    /// Projection of a machine-integer vector.
    pub fn project_i64(&self, x: &[i64]) -> Vec<BigInt> {
        let big: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        self.project(&big)
    }

    /// Sum of two residue tuples.
    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter()
            .zip(b)
            .zip(&self.invariant_factors)
            .map(|((x, y), d)| (x + y).mod_floor(d))
            .collect()
    }

    /// Lists all elements as residue tuples in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
        for d in &self.invariant_factors {
            let mut next = Vec::new();
            for prefix in &out {
                let mut k = BigInt::zero();
                while &k < d {
                    let mut e = prefix.clone();
                    e.push(k.clone());
                    next.push(e);
                    k += 1;
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// The quotient of `ℤ^ambient_rank` by the sublattice spanned by the rows of
/// `generators`.
///
/// Fails with [`LatticeError::InfiniteQuotient`] when the sublattice does not
/// have full rank.
pub fn quotient_group(ambient_rank: usize, generators: &IntMatrix) -> Result<FiniteAbelianGroup, LatticeError> {
    if generators.cols() != ambient_rank {
        return Err(LatticeError::Dimension {
            expected: ambient_rank,
            found: generators.cols(),
        });
    }
    // Columns of M are the generators; U·M·V = D means that in the coordinates
    // y = U·x the sublattice becomes ⊕ dᵢℤ.
    let m = generators.transpose();
    let snf = smith_normal_form(&m);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    if rank < ambient_rank {
        return Err(LatticeError::InfiniteQuotient {
            rank,
            ambient: ambient_rank,
            free: ambient_rank - rank,
        });
    }
    let mut invariant_factors = Vec::new();
    let mut projection = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if !d.is_one() {
            invariant_factors.push(d.clone());
            projection.push(snf.u.row(i));
        }
    }
    Ok(FiniteAbelianGroup {
        ambient_rank,
        invariant_factors,
        projection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_is_its_own_normal_form() {
        let i2 = IntMatrix::identity(2);
        let snf = smith_normal_form(&i2);
        assert_eq!(snf.u, i2);
        assert_eq!(snf.d, i2);
        assert_eq!(snf.v, i2);
    }

    #[test]
    fn diagonal_chain_is_preserved() {
        let m = IntMatrix::diagonal(&[2, 4]);
        assert_eq!(smith_normal_form(&m).diagonal(), big(&[2, 4]));
    }

    #[test]
    fn divisibility_is_enforced() {
        let m = IntMatrix::diagonal(&[4, 6]);
        assert_eq!(smith_normal_form(&m).diagonal(), big(&[2, 12]));
    }

    #[test]
    fn recomposes_a_dense_matrix() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
        let snf = smith_normal_form(&m);
        assert_eq!(snf.u.mul(&m).unwrap().mul(&snf.v).unwrap(), snf.d);
        assert!(snf.u.is_unimodular() && snf.v.is_unimodular());
        assert_eq!(snf.diagonal(), big(&[2, 6, 12]));
    }

    #[test]
    fn determinant_matches_hand_values() {
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(m.determinant(), BigInt::from(-1));
        let m = IntMatrix::from_rows(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]).unwrap();
        assert_eq!(m.determinant(), BigInt::from(6));
        let m = IntMatrix::from_rows(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]).unwrap();
        assert_eq!(m.determinant(), BigInt::from(0));
    }

    #[test]
    fn elementary_two_group() {
        let g = quotient_group(2, &IntMatrix::diagonal(&[2, 2])).unwrap();
        assert_eq!(g.invariant_factors_u64(), vec![2, 2]);
        assert_eq!(g.order_u64(), 4);
        assert_eq!(g.elements().len(), 4);
    }

    #[test]
    fn rank_one_quotient() {
        let g = quotient_group(1, &IntMatrix::diagonal(&[2])).unwrap();
        assert_eq!(g.invariant_factors_u64(), vec![2]);
    }

    #[test]
    fn half_weights_modulo_root_lattice_of_sl2_dual() {
        // ½ℤ / 2ℤ, rescaled by 2: ℤ / 4ℤ.
        let g = quotient_group(1, &IntMatrix::diagonal(&[4])).unwrap();
        assert_eq!(g.invariant_factors_u64(), vec![4]);
        assert_eq!(g.to_string(), "Z/4");
    }

    #[test]
    fn infinite_quotient_is_reported() {
        let gens = IntMatrix::from_rows(&[vec![1, 1]]).unwrap();
        assert_eq!(
            quotient_group(2, &gens),
            Err(LatticeError::InfiniteQuotient {
                rank: 1,
                ambient: 2,
                free: 1
            })
        );
    }

    #[test]
    fn projection_kills_generators_and_is_additive() {
        let gens = IntMatrix::from_rows(&[vec![2, 1], vec![0, 3]]).unwrap();
        let g = quotient_group(2, &gens).unwrap();
        assert_eq!(g.order_u64(), 6);
        for r in 0..2 {
            assert!(g.project(&gens.row(r)).iter().all(Zero::is_zero));
        }
        let a = big(&[1, 2]);
        let b = big(&[-3, 5]);
        let s: Vec<BigInt> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        assert_eq!(g.project(&s), g.add(&g.project(&a), &g.project(&b)));
    }
}
