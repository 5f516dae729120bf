//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library beyond its plain data types.

#![allow(dead_code)]

/// Proximity rules checked directly on 1-based lists.
pub fn valid(prox: &[Vec<usize>]) -> bool {
    for (idx, p) in prox.iter().enumerate() {
        let i = idx + 1;
        if p.len() > 2 || p.iter().any(|&j| j == 0 || j >= i) {
            return false;
        }
        if p.len() == 2 && p[0] == p[1] {
            return false;
        }
        if p.len() == 2 {
            let (j, k) = (p[0].min(p[1]), p[0].max(p[1]));
            if !prox[k - 1].contains(&j) {
                return false;
            }
        }
    }
    for a in 0..prox.len() {
        for b in a + 1..prox.len() {
            if prox[a].len() == 2 && prox[b].len() == 2 {
                let mut x = prox[a].clone();
                let mut y = prox[b].clone();
                x.sort_unstable();
                y.sort_unstable();
                if x == y {
                    return false;
                }
            }
        }
    }
    true
}

/// Every assignment of at most two earlier points to each point, kept when valid.
pub fn brute_force_forests(s: usize) -> Vec<Vec<Vec<usize>>> {
    let choices: Vec<Vec<Vec<usize>>> = (1..=s)
        .map(|i| {
            let mut c = vec![vec![]];
            for j in 1..i {
                c.push(vec![j]);
                for k in j + 1..i {
                    c.push(vec![j, k]);
                }
            }
            c
        })
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; s];
    loop {
        let prox: Vec<Vec<usize>> = (0..s).map(|i| choices[i][pick[i]].clone()).collect();
        if valid(&prox) {
            out.push(prox);
        }
        let mut i = 0;
        loop {
            if i == s {
                return out;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// Strict transforms in total-transform coordinates:
/// `e_i = E_i - sum of E_m over points m proximate to i`.
pub fn strict_in_total(prox: &[Vec<usize>]) -> Vec<Vec<i64>> {
    let s = prox.len();
    let mut rows = vec![vec![0i64; s]; s];
    for i in 0..s {
        rows[i][i] = 1;
    }
    for (m, p) in prox.iter().enumerate() {
        for &i in p {
            rows[i - 1][m] -= 1;
        }
    }
    rows
}

/// Gram matrix of the strict transforms, using `E_i.E_j = -delta_ij`.
pub fn gram(prox: &[Vec<usize>]) -> Vec<Vec<i64>> {
    let r = strict_in_total(prox);
    let s = prox.len();
    (0..s)
        .map(|a| (0..s).map(|b| -(0..s).map(|k| r[a][k] * r[b][k]).sum::<i64>()).collect())
        .collect()
}

/// `K.e_i`, from `K.E_i = -1`.
pub fn k_degrees(prox: &[Vec<usize>]) -> Vec<i64> {
    strict_in_total(prox)
        .iter()
        .map(|row| -row.iter().sum::<i64>())
        .collect()
}

pub fn form(g: &[Vec<i64>], a: &[i64], b: &[i64]) -> i64 {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| a[i] * g[i][j] * b[j]).sum::<i64>())
        .sum()
}

/// Every vector with `0 <= x_i <= cap`, in no particular order.
pub fn box_vectors(s: usize, cap: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..s {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=cap).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}
