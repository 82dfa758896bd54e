//! Integer row reduction to Hermite normal form.

use crate::{Error, Result};

fn sub_multiple(target: &mut [i64], src: &[i64], q: i64) -> Result<()> {
    if q == 0 {
        return Ok(());
    }
    for (t, s) in target.iter_mut().zip(src) {
        let prod = s.checked_mul(q).ok_or(Error::Overflow)?;
        *t = t.checked_sub(prod).ok_or(Error::Overflow)?;
    }
    Ok(())
}

/// Brings `rows` to row Hermite normal form using unimodular row operations,
/// mirroring every operation on `transform` when given.
///
/// On return the first `pivots.len()` rows are nonzero with strictly
/// increasing pivot columns, positive pivots, and entries above each pivot
/// reduced into `[0, pivot)`. The remaining rows are zero. The returned
/// vector lists the pivot columns.
pub(crate) fn hermite_rows(
    rows: &mut [Vec<i64>],
    mut transform: Option<&mut [Vec<i64>]>,
) -> Result<Vec<usize>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        loop {
            // smallest nonzero |entry| among rows r.. becomes the pivot row
            let best = (r..nrows)
                .filter(|&i| rows[i][col] != 0)
                .min_by_key(|&i| rows[i][col].unsigned_abs());
            let Some(best) = best else { break };
            rows.swap(r, best);
            if let Some(t) = transform.as_deref_mut() {
                t.swap(r, best);
            }
            let mut done = true;
            for i in r + 1..nrows {
                if rows[i][col] == 0 {
                    continue;
                }
                let q = rows[i][col] / rows[r][col];
                let (head, tail) = rows.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[r], q)?;
                if let Some(t) = transform.as_deref_mut() {
                    let (th, tt) = t.split_at_mut(i);
                    sub_multiple(&mut tt[0], &th[r], q)?;
                }
                if rows[i][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][col] == 0 {
            continue;
        }
        if rows[r][col] < 0 {
            for x in rows[r].iter_mut() {
                *x = -*x;
            }
            if let Some(t) = transform.as_deref_mut() {
                for x in t[r].iter_mut() {
                    *x = -*x;
                }
            }
        }
        let p = rows[r][col];
        for i in 0..r {
            let q = rows[i][col].div_euclid(p);
            let (head, tail) = rows.split_at_mut(r);
            sub_multiple(&mut head[i], &tail[0], q)?;
            if let Some(t) = transform.as_deref_mut() {
                let (th, tt) = t.split_at_mut(r);
                sub_multiple(&mut th[i], &tt[0], q)?;
            }
        }
        pivots.push(col);
        r += 1;
    }
    Ok(pivots)
}

/// Canonical Hermite basis of the lattice spanned by `vectors`.
pub fn hermite_basis(vectors: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let mut rows = vectors.to_vec();
    let rank = hermite_rows(&mut rows, None)?.len();
    rows.truncate(rank);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_canonical_form() {
        let b = hermite_basis(&[vec![2, 4, 6], vec![3, 6, 9], vec![0, 1, 5]]).unwrap();
        assert_eq!(b, vec![vec![1, 0, -7], vec![0, 1, 5]]);
    }

    #[test]
    fn same_lattice_same_form() {
        let a = hermite_basis(&[vec![-1, 0, 5, 0], vec![0, 5, 0, -1]]).unwrap();
        let b = hermite_basis(&[vec![-1, 5, 5, -1], vec![1, -10, -5, 2]]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn transform_tracks_operations() {
        let mut rows = vec![vec![4, 6], vec![6, 9], vec![1, 1]];
        let orig = rows.clone();
        let mut t: Vec<Vec<i64>> = (0..3)
            .map(|i| (0..3).map(|j| i64::from(i == j)).collect())
            .collect();
        hermite_rows(&mut rows, Some(&mut t)).unwrap();
        for i in 0..3 {
            for c in 0..2 {
                let v: i64 = (0..3).map(|j| t[i][j] * orig[j][c]).sum();
                assert_eq!(v, rows[i][c]);
            }
        }
    }
}
