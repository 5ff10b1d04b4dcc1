//! Exact and high-precision linear solves.

use super::poly::ZPoly;
use super::Field;

/// Solves `A X = B` by Gauss-Jordan elimination with best-score pivoting.
///
/// Returns `None` when `A` is singular.
pub fn solve<F: Field>(mut a: Vec<Vec<F>>, mut b: Vec<Vec<F>>) -> Option<Vec<Vec<F>>> {
    let n = a.len();
    for col in 0..n {
        let mut best = None;
        let mut best_score = f64::NEG_INFINITY;
        for (r, row) in a.iter().enumerate().skip(col) {
            if row[col].is_zero() {
                continue;
            }
            let s = row[col].pivot_score();
            if best.is_none() || s > best_score {
                best = Some(r);
                best_score = s;
            }
        }
        let piv = best?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].one_like().fdiv(&a[col][col]).ok()?;
        for j in col..n {
            a[col][j] = a[col][j].fmul(&inv);
        }
        for x in b[col].iter_mut() {
            *x = x.fmul(&inv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in col..n {
                let v = a[col][j].fmul(&f);
                a[r][j] = a[r][j].fsub(&v);
            }
            for j in 0..b[r].len() {
                let v = b[col][j].fmul(&f);
                b[r][j] = b[r][j].fsub(&v);
            }
        }
    }
    Some(b)
}

/// Fraction-free solve of `A x = b` over `Z[q]`.
///
/// Returns `(x~, d)` with `x = x~ / d`; `d` is the determinant of `A` up to
/// sign. Pivots are chosen with the smallest degree to slow coefficient
/// growth. `None` when `A` is singular.
pub fn bareiss_solve(mut a: Vec<Vec<ZPoly>>, mut b: Vec<ZPoly>) -> Option<(Vec<ZPoly>, ZPoly)> {
    let n = a.len();
    if n == 0 {
        return Some((Vec::new(), ZPoly::one()));
    }
    let mut prev = ZPoly::one();
    for k in 0..n {
        let piv = (k..n)
            .filter(|&r| !a[r][k].is_zero())
            .min_by_key(|&r| (a[r][k].degree(), a[r][k].coeffs().iter().map(|c| c.bits()).sum::<u64>()))?;
        a.swap(k, piv);
        b.swap(k, piv);
        let akk = a[k][k].clone();
        for i in k + 1..n {
            let aik = a[i][k].clone();
            for j in k + 1..n {
                let v = &(&akk * &a[i][j]) - &(&aik * &a[k][j]);
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            let v = &(&akk * &b[i]) - &(&aik * &b[k]);
            b[i] = v.div_exact(&prev).expect("Bareiss division is exact");
            a[i][k] = ZPoly::zero();
        }
        prev = akk;
    }
    let det = a[n - 1][n - 1].clone();
    if det.is_zero() {
        return None;
    }
    let mut x = vec![ZPoly::zero(); n];
    for i in (0..n).rev() {
        let mut acc = &det * &b[i];
        for j in i + 1..n {
            acc = &acc - &(&a[i][j] * &x[j]);
        }
        x[i] = acc.div_exact(&a[i][i]).expect("back substitution is exact");
    }
    Some((x, det))
}
