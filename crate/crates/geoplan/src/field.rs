//! Prime-field arithmetic and the small dense matrices built on it.

use crate::Error;

/// A prime field GF(p); elements are residues in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
}

impl FieldSpec {
    pub const GF2: FieldSpec = FieldSpec { p: 2 };

    pub fn new(p: u64) -> Result<Self, Error> {
        if !is_prime(p) {
            return Err(Error::Parse(format!("field characteristic {p} is not prime")));
        }
        Ok(FieldSpec { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        // p fits in u32 in practice; widen to avoid overflow anyway
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "division by zero in GF({})", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        base %= self.p;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn smallest_prime_above(n: u64) -> u64 {
    let mut p = n + 1;
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// Dense row-major matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    pub field: FieldSpec,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl FieldMatrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<u64>>) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix".into()));
        }
        let p = field.characteristic();
        Ok(FieldMatrix {
            field,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().map(|x| x % p).collect(),
        })
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.field.characteristic();
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).collect())
            .collect()
    }

    /// Sub-matrix formed by the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> FieldMatrix {
        let mut m = FieldMatrix::zero(self.field, self.rows, cols.len());
        for (ci, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                m.set(r, ci, self.get(r, c));
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(None).0
    }

    /// Solves `self · x = target` for any one solution, or `None` when
    /// the target is outside the column span.
    pub fn solve(&self, target: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(target.len(), self.rows);
        let (_, solution) = self.clone().eliminate(Some(target));
        solution
    }

    /// Gaussian elimination; returns rank and, when a target is given,
    /// a solution of the augmented system if consistent.
    fn eliminate(mut self, target: Option<&[u64]>) -> (usize, Option<Vec<u64>>) {
        let f = self.field;
        let mut aug: Vec<u64> = target.map(|t| t.to_vec()).unwrap_or_default();
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(pivot) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            for c in 0..self.cols {
                let (a, b) = (self.get(row, c), self.get(pivot, c));
                self.set(row, c, b);
                self.set(pivot, c, a);
            }
            if !aug.is_empty() {
                aug.swap(row, pivot);
            }
            let inv = f.inv(self.get(row, col));
            for c in 0..self.cols {
                let v = f.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            if !aug.is_empty() {
                aug[row] = f.mul(aug[row], inv);
            }
            for r in 0..self.rows {
                if r != row && self.get(r, col) != 0 {
                    let factor = self.get(r, col);
                    for c in 0..self.cols {
                        let v = f.sub(self.get(r, c), f.mul(factor, self.get(row, c)));
                        self.set(r, c, v);
                    }
                    if !aug.is_empty() {
                        aug[r] = f.sub(aug[r], f.mul(factor, aug[row]));
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        let rank = row;
        let solution = target.map(|_| {
            // inconsistent iff a zero row has a nonzero augmented entry
            for r in rank..self.rows {
                if aug[r] != 0 {
                    return None;
                }
            }
            let mut x = vec![0u64; self.cols];
            for (r, &c) in pivot_cols.iter().enumerate() {
                x[c] = aug[r];
            }
            Some(x)
        });
        (rank, solution.flatten())
    }

    /// Matrix-vector product `self · x`.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(0u64, |acc, c| f.add(acc, f.mul(self.get(r, c), x[c])))
            })
            .collect()
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> u64 {
        assert_eq!(self.rows, self.cols);
        let f = self.field;
        let mut m = self.clone();
        let mut det = 1u64;
        for col in 0..m.cols {
            let Some(pivot) = (col..m.rows).find(|&r| m.get(r, col) != 0) else {
                return 0;
            };
            if pivot != col {
                for c in 0..m.cols {
                    let (a, b) = (m.get(col, c), m.get(pivot, c));
                    m.set(col, c, b);
                    m.set(pivot, c, a);
                }
                det = f.neg(det);
            }
            det = f.mul(det, m.get(col, col));
            let inv = f.inv(m.get(col, col));
            for r in (col + 1)..m.rows {
                let factor = f.mul(m.get(r, col), inv);
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        det
    }
}

pub fn unit_vector(len: usize, index: usize) -> Vec<u64> {
    let mut v = vec![0; len];
    v[index] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primes_accepted_composites_rejected() {
        for p in [2, 3, 5, 7, 11] {
            assert!(FieldSpec::new(p).is_ok());
        }
        for p in [0, 1, 4, 6, 9] {
            assert!(FieldSpec::new(p).is_err());
        }
        assert_eq!(smallest_prime_above(6), 7);
        assert_eq!(smallest_prime_above(7), 11);
    }

    #[test]
    fn solve_finds_combination() {
        let f = FieldSpec::new(2).unwrap();
        // columns e1, e2, e4, e1+e2+e4 (k = 4)
        let g = FieldMatrix::from_rows(
            f,
            vec![
                vec![1, 0, 0, 1],
                vec![0, 1, 0, 1],
                vec![0, 0, 0, 0],
                vec![0, 0, 1, 1],
            ],
        )
        .unwrap();
        // e3 is outside the span
        assert!(g.solve(&unit_vector(4, 2)).is_none());
        // e2 = col1
        let x = g.solve(&unit_vector(4, 1)).unwrap();
        assert_eq!(g.apply(&x), unit_vector(4, 1));
    }

    #[test]
    fn rank_and_determinant() {
        let f = FieldSpec::new(7).unwrap();
        let m = FieldMatrix::from_rows(f, vec![vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.determinant(), 0);
        let id = FieldMatrix::from_rows(f, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(id.rank(), 2);
        assert_eq!(id.determinant(), 1);
    }

    proptest! {
        #[test]
        fn field_axioms_hold(p_idx in 0usize..5, a in 0u64..100, b in 0u64..100, c in 0u64..100) {
            let p = [2u64, 3, 5, 7, 11][p_idx];
            let f = FieldSpec::new(p).unwrap();
            let (a, b, c) = (a % p, b % p, c % p);
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
            prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
        }

        #[test]
        fn solve_solutions_verify(seed in 0u64..500) {
            // random small systems over GF(5)
            let f = FieldSpec::new(5).unwrap();
            let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
            let mut next = move || { s ^= s << 13; s ^= s >> 7; s ^= s << 17; s };
            let rows = 2 + (next() % 3) as usize;
            let cols = 2 + (next() % 3) as usize;
            let m = FieldMatrix::from_rows(
                f,
                (0..rows).map(|_| (0..cols).map(|_| next() % 5).collect()).collect(),
            ).unwrap();
            let target: Vec<u64> = (0..rows).map(|_| next() % 5).collect();
            if let Some(x) = m.solve(&target) {
                prop_assert_eq!(m.apply(&x), target);
            }
        }
    }
}
