//! Exact dense linear algebra over F_q: rank and a canonical nullspace basis
//! by Gaussian elimination.

use thiserror::Error;

use crate::field::FieldSpec;

/// Hard cap on rows * cols; fail loudly rather than thrash.
pub const MATRIX_CAP: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinError {
    #[error("matrix of {0} x {1} entries exceeds the cap of {MATRIX_CAP}")]
    CapExceeded(usize, usize),
    #[error("row {0} has {1} entries, expected {2}")]
    RowLength(usize, usize, usize),
}

/// Dense row-major matrix over F_q. Entries are canonical residues.
#[derive(Debug, Clone)]
pub struct MatrixGF {
    rows: usize,
    cols: usize,
    spec: FieldSpec,
    data: Vec<u32>,
}

/// The canonical nullspace of a matrix: one basis vector per free column,
/// ordered by increasing free-column index.
#[derive(Debug, Clone)]
pub struct Nullspace {
    pub rank: usize,
    /// (free column index, vector) pairs.
    pub basis: Vec<(usize, Vec<u32>)>,
}

impl MatrixGF {
    pub fn zero(rows: usize, cols: usize, spec: FieldSpec) -> Result<Self, LinError> {
        if rows as u64 * cols as u64 > MATRIX_CAP {
            return Err(LinError::CapExceeded(rows, cols));
        }
        Ok(MatrixGF {
            rows,
            cols,
            spec,
            data: vec![0; rows * cols],
        })
    }

    pub fn from_rows(spec: FieldSpec, cols: usize, rows: &[Vec<u32>]) -> Result<Self, LinError> {
        let mut m = Self::zero(rows.len(), cols, spec)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LinError::RowLength(i, row.len(), cols));
            }
            m.data[i * cols..(i + 1) * cols].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.spec.q();
    }

    pub fn mat_vec(&self, v: &[u32]) -> Vec<u32> {
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u32;
                for c in 0..self.cols {
                    acc = self
                        .spec
                        .add_raw(acc, self.spec.mul_raw(self.get(r, c), v[c] % self.spec.q()));
                }
                acc
            })
            .collect()
    }

    /// Rank and canonical nullspace basis.
    ///
    /// Rows are folded into a reduced echelon set in input order (so the
    /// pivot for each column comes from the lowest-index row that can supply
    /// it), and elimination stops early once the rank reaches `cols`, at
    /// which point the nullspace is trivial no matter what rows remain.
    pub fn nullspace_basis(&self) -> Nullspace {
        let spec = self.spec;
        let cols = self.cols;
        // pivot rows kept fully reduced; pivot_col[i] is the pivot of pivots[i]
        let mut pivots: Vec<Vec<u32>> = Vec::new();
        let mut pivot_cols: Vec<usize> = Vec::new();

        for r in 0..self.rows {
            if pivots.len() == cols {
                break;
            }
            let mut row = self.data[r * cols..(r + 1) * cols].to_vec();
            // reduce against existing pivots
            for (p, &pc) in pivots.iter().zip(&pivot_cols) {
                let factor = row[pc];
                if factor != 0 {
                    for c in pc..cols {
                        row[c] = spec.sub_raw(row[c], spec.mul_raw(factor, p[c]));
                    }
                }
            }
            let Some(lead) = row.iter().position(|&v| v != 0) else {
                continue;
            };
            // normalize
            let inv = spec.inv_raw(row[lead]).unwrap();
            for c in lead..cols {
                row[c] = spec.mul_raw(row[c], inv);
            }
            // back-eliminate the new pivot column from existing pivot rows
            for p in pivots.iter_mut() {
                let factor = p[lead];
                if factor != 0 {
                    for c in lead..cols {
                        p[c] = spec.sub_raw(p[c], spec.mul_raw(factor, row[c]));
                    }
                }
            }
            // keep pivots sorted by pivot column
            let at = pivot_cols.partition_point(|&pc| pc < lead);
            pivot_cols.insert(at, lead);
            pivots.insert(at, row);
        }

        let rank = pivots.len();
        let mut basis = Vec::with_capacity(cols - rank);
        let mut next_pivot = 0usize;
        for free in 0..cols {
            if next_pivot < rank && pivot_cols[next_pivot] == free {
                next_pivot += 1;
                continue;
            }
            // free column: set v[free] = 1, pivot coordinates from the RREF
            let mut v = vec![0u32; cols];
            v[free] = 1;
            for (p, &pc) in pivots.iter().zip(&pivot_cols) {
                v[pc] = spec.neg_raw(p[free]);
            }
            debug_assert!(self.mat_vec(&v).iter().all(|&x| x == 0));
            basis.push((free, v));
        }
        Nullspace { rank, basis }
    }

    /// Rank only, with the same early exit.
    pub fn rank(&self) -> usize {
        self.nullspace_basis().rank
    }
}
