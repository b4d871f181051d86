//! Gaussian elimination over a finite field, specialized to producing one
//! canonical kernel vector.

use crate::error::{Error, Result};
use crate::field::Field;

/// Returns a nonzero vector v with rows * v = 0, or None when the kernel is
/// trivial. The choice is deterministic: elimination pivots on the first
/// nonzero entry in column order, the free variable of lowest index is set
/// to 1 and all other free variables to 0.
pub fn nullspace_vector(
    field: Field,
    rows: &[Vec<u64>],
    num_cols: usize,
) -> Result<Option<Vec<u64>>> {
    for r in rows {
        if r.len() != num_cols {
            return Err(Error::format(format!(
                "ragged rows: expected {num_cols} columns, found {}",
                r.len()
            )));
        }
    }
    if num_cols == 0 {
        return Ok(None);
    }

    let mut mat: Vec<Vec<u64>> = rows.to_vec();
    let m = mat.len();
    // pivot_cols[i] = column of the pivot in row i (rows above `rank`)
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    let mut free_col: Option<usize> = None;

    for col in 0..num_cols {
        let pivot_row = (rank..m).find(|&r| mat[r][col] != 0);
        let Some(pr) = pivot_row else {
            if free_col.is_none() {
                free_col = Some(col);
            }
            continue;
        };
        mat.swap(rank, pr);
        let inv = field.inv(mat[rank][col])?;
        for v in &mut mat[rank][col..] {
            *v = field.mul(*v, inv);
        }
        for r in 0..m {
            if r != rank && mat[r][col] != 0 {
                let factor = mat[r][col];
                // the pivot row is read while row r is rewritten
                #[allow(clippy::needless_range_loop)]
                for j in col..num_cols {
                    let sub = field.mul(factor, mat[rank][j]);
                    mat[r][j] = field.sub(mat[r][j], sub);
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }

    let Some(free) = free_col else {
        return Ok(None); // full column rank
    };

    // Reduced row-echelon form: pivot variables read straight off the rows.
    let mut v = vec![0u64; num_cols];
    v[free] = 1;
    for (row, &pc) in pivot_cols.iter().enumerate() {
        // pivot_col value = -(coefficient of the free column in this row)
        v[pc] = field.neg(mat[row][free]);
    }
    debug_assert!(is_in_kernel(field, rows, &v));
    Ok(Some(v))
}

pub fn is_in_kernel(field: Field, rows: &[Vec<u64>], v: &[u64]) -> bool {
    rows.iter().all(|row| {
        let mut acc = 0u64;
        for (a, b) in row.iter().zip(v) {
            acc = field.add(acc, field.mul(*a, *b));
        }
        acc == 0
    })
}
