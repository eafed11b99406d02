//! Exact Gaussian elimination over a `Coeff` field.

use super::Coeff;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solve {
    /// Rank below the number of unknowns.
    Underdetermined { rank: usize, unknowns: usize },
    /// The augmented system is inconsistent; carries the first failing row.
    Inconsistent { row: usize },
}

/// Solve `a · x = b` exactly. `a` is row-major with `rows >= cols`.
pub fn solve<C: Coeff>(a: &[Vec<C>], b: &[C]) -> Result<Vec<C>, Solve> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot must be a unit");
        for k in c..=cols {
            m[r][k] = m[r][k].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..=cols {
                    let t = m[r][k].mul(&f);
                    m[i][k] = m[i][k].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if let Some(row) = (r..rows).find(|&i| !m[i][cols].is_zero()) {
        return Err(Solve::Inconsistent { row });
    }
    if pivots.len() < cols {
        return Err(Solve::Underdetermined { rank: pivots.len(), unknowns: cols });
    }
    let mut x = vec![C::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Ok(x)
}
