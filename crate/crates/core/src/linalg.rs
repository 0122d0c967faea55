//! Gauss-Jordan elimination over [`Scalar`] rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// Reduces `rows` in place to reduced row-echelon form with leading ones,
/// dropping zero rows. Returns the pivot column of each remaining row.
pub(crate) fn rref(rows: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        for x in rows[r].iter_mut().skip(c) {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : row . x = 0 for every row}` given rows already in RREF.
pub(crate) fn null_space(rref_rows: &[Vec<Scalar>], pivots: &[usize], ncols: usize, zero: &Scalar, one: &Scalar) -> Vec<Vec<Scalar>> {
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero.clone(); ncols];
            v[f] = one.clone();
            for (row, &pc) in rref_rows.iter().zip(pivots) {
                v[pc] = -&row[f];
            }
            v
        })
        .collect()
}

/// Rational rows in RREF get their denominators cleared and are divided by
/// the gcd of their entries, so keys hash on small integers. The leading
/// entry stays positive because it starts at 1.
pub(crate) fn clear_denominators(row: &mut [Scalar]) {
    let rationals: Option<Vec<&BigRational>> = row.iter().map(Scalar::as_rational).collect();
    let Some(rationals) = rationals else {
        return;
    };
    let lcm = rationals
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rationals
        .iter()
        .map(|r| r.numer() * (&lcm / r.denom()))
        .collect();
    let gcd = ints
        .iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if gcd.is_zero() {
        return;
    }
    for (x, v) in row.iter_mut().zip(ints) {
        debug_assert!(!gcd.is_negative());
        *x = Scalar::Rational(BigRational::from_integer(v / &gcd));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn rows(field: FieldSpec, data: &[&[i64]]) -> Vec<Vec<Scalar>> {
        data.iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect()
    }

    #[test]
    fn rank_deficient_rows_drop() {
        let f = FieldSpec::Rational;
        let mut m = rows(f, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let piv = rref(&mut m);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(m, rows(f, &[&[1, 0, 1], &[0, 1, 1]]));
    }

    #[test]
    fn null_space_annihilates() {
        let f = FieldSpec::prime(7).unwrap();
        let mut m = rows(f, &[&[1, 2, 3], &[0, 1, 4]]);
        let piv = rref(&mut m);
        let ns = null_space(&m, &piv, 3, &f.zero(), &f.one());
        assert_eq!(ns.len(), 1);
        for r in rows(f, &[&[1, 2, 3], &[0, 1, 4]]) {
            let dot = r.iter().zip(&ns[0]).fold(f.zero(), |acc, (a, b)| &acc + &(a * b));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn denominators_cleared() {
        let f = FieldSpec::Rational;
        let mut row = vec![f.one(), f.ratio(2, 3).unwrap(), f.ratio(-1, 2).unwrap()];
        clear_denominators(&mut row);
        assert_eq!(row, rows(f, &[&[6, 4, -3]])[0]);
    }
}
