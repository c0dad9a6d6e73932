//! Smith normal form over the integers.

use crate::error::TopologyError;

pub type IntMatrix = Vec<Vec<i128>>;

/// `u · a · v = d` with `u`, `v` unimodular and `d` diagonal, `d[i][i] | d[i+1][i+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> Vec<i128> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k).map(|i| self.d[i][i]).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().filter(|&&x| x != 0).count()
    }
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn matmul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix, TopologyError> {
    let m = a.len();
    let k = b.len();
    let n = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0i128; n]; m];
    for i in 0..m {
        for j in 0..n {
            let mut s = 0i128;
            for l in 0..k {
                let t = a[i][l].checked_mul(b[l][j]).ok_or(TopologyError::Overflow)?;
                s = s.checked_add(t).ok_or(TopologyError::Overflow)?;
            }
            out[i][j] = s;
        }
    }
    Ok(out)
}

// row_dst -= q * row_src
fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: i128) -> Result<(), TopologyError> {
    if q == 0 {
        return Ok(());
    }
    for c in 0..m[dst].len() {
        let t = m[src][c].checked_mul(q).ok_or(TopologyError::Overflow)?;
        m[dst][c] = m[dst][c].checked_sub(t).ok_or(TopologyError::Overflow)?;
    }
    Ok(())
}

fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: i128) -> Result<(), TopologyError> {
    if q == 0 {
        return Ok(());
    }
    for row in m.iter_mut() {
        let t = row[src].checked_mul(q).ok_or(TopologyError::Overflow)?;
        row[dst] = row[dst].checked_sub(t).ok_or(TopologyError::Overflow)?;
    }
    Ok(())
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

// Quotient rounded to nearest keeps the remainders small.
fn round_div(a: i128, b: i128) -> i128 {
    let q = a.div_euclid(b);
    let r = a.rem_euclid(b);
    if 2 * r > b.abs() {
        q + b.signum()
    } else {
        q
    }
}

pub fn smith_normal_form(a: &[Vec<i64>]) -> Result<SmithForm, TopologyError> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != n) {
        return Err(TopologyError::Invalid("ragged integer matrix".into()));
    }
    let mut d: IntMatrix = a.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let mut u = identity(m);
    let mut v = identity(n);

    for t in 0..m.min(n) {
        loop {
            // smallest non-zero pivot in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j] != 0 && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let p = d[t][t];
            let mut dirty = false;
            for i in t + 1..m {
                let q = round_div(d[i][t], p);
                row_axpy(&mut d, i, t, q)?;
                row_axpy(&mut u, i, t, q)?;
                dirty |= d[i][t] != 0;
            }
            for j in t + 1..n {
                let q = round_div(d[t][j], p);
                col_axpy(&mut d, j, t, q)?;
                col_axpy(&mut v, j, t, q)?;
                dirty |= d[t][j] != 0;
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| d[i][j] % p != 0));
            match offender {
                Some(i) => {
                    row_axpy(&mut d, t, i, -1)?;
                    row_axpy(&mut u, t, i, -1)?;
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for c in 0..n {
                d[t][c] = -d[t][c];
            }
            for c in 0..m {
                u[t][c] = -u[t][c];
            }
        }
    }
    finish(u, d, v)
}

fn finish(mut u: IntMatrix, mut d: IntMatrix, v: IntMatrix) -> Result<SmithForm, TopologyError> {
    // pivots found before an all-zero block are already normalised; flip any stragglers
    let k = d.len().min(d.first().map_or(0, Vec::len));
    for t in 0..k {
        if d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    Ok(SmithForm { u, d, v })
}

/// Greatest common divisor of an integer row, through its Smith form.
pub fn row_gcd(row: &[i64]) -> Result<i128, TopologyError> {
    let snf = smith_normal_form(&[row.to_vec()])?;
    Ok(snf.invariant_factors().first().copied().unwrap_or(0))
}
