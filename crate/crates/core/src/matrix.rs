//! Small dense integer matrix helpers. Everything is exact.

pub type IntMatrix = Vec<Vec<i64>>;

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Leading principal minors `det(m[..k][..k])` for `k = 1..=n`.
pub fn leading_minors(m: &[Vec<i64>]) -> Vec<i128> {
    (1..=m.len())
        .map(|k| {
            let sub: IntMatrix = m[..k].iter().map(|r| r[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}

/// Sylvester's criterion: minors alternate in sign starting negative.
pub fn is_negative_definite(m: &[Vec<i64>]) -> bool {
    leading_minors(m)
        .iter()
        .enumerate()
        .all(|(k, &d)| if k % 2 == 0 { d < 0 } else { d > 0 })
}

/// `u^T m v`.
pub fn bilinear(m: &[Vec<i64>], u: &[i64], v: &[i64]) -> i64 {
    m.iter()
        .zip(u)
        .filter(|(_, &ui)| ui != 0)
        .map(|(row, &ui)| ui * row.iter().zip(v).map(|(a, b)| a * b).sum::<i64>())
        .sum()
}

pub fn is_symmetric(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    m.iter().all(|r| r.len() == n) && (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}
