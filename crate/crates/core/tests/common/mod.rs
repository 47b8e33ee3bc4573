//! Helpers shared by the integration test targets.

#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use pvcoh::abelian::{GroupPresentation, IntMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Textbook elimination: pivot on the first nonzero entry, repeat Euclid steps
/// on the first row and column, then fix divisibility at the end by a gcd
/// sweep over the diagonal.
pub fn oracle_invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let rows = m.rows();
    let cols = m.cols();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                while !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    for j in t..cols {
                        let v = &a[i][j] - &q * &a[t][j];
                        a[i][j] = v;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                    }
                    changed = true;
                }
            }
            for j in t + 1..cols {
                while !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    for row in a.iter_mut().skip(t) {
                        let v = &row[j] - &q * &row[t];
                        row[j] = v;
                    }
                    if !a[t][j].is_zero() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    // diag(a, b) ~ diag(gcd, lcm); bubble until the chain divides
    let n = diag.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

pub fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let r = rng.gen_range(1..=8);
    let c = rng.gen_range(1..=8);
    let density: f64 = rng.gen_range(0.2..=1.0);
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|_| {
            (0..c)
                .map(|_| if rng.gen_bool(density) { rng.gen_range(-9..=9) } else { 0 })
                .collect()
        })
        .collect();
    IntMatrix::from_rows(&rows)
}

fn cyclic_orders(g: &GroupPresentation) -> Vec<BigInt> {
    let mut v = g.torsion.clone();
    v.extend(std::iter::repeat_n(BigInt::from(0), g.rank));
    v
}

/// `H^n(X × Y) = ⊕_{p+q=n} H^p ⊗ H^q ⊕ ⊕_{p+q=n+1} Tor(H^p, H^q)`.
pub fn kunneth(x: &[GroupPresentation], y: &[GroupPresentation]) -> Vec<GroupPresentation> {
    let top = x.len() + y.len() - 1;
    (0..top)
        .map(|n| {
            let mut orders = Vec::new();
            for (p, gx) in x.iter().enumerate() {
                for (q, gy) in y.iter().enumerate() {
                    for a in cyclic_orders(gx) {
                        for b in cyclic_orders(gy) {
                            let tensor = p + q == n;
                            let tor = p + q == n + 1 && !a.is_zero() && !b.is_zero();
                            if tensor || tor {
                                orders.push(a.gcd(&b));
                            }
                        }
                    }
                }
            }
            GroupPresentation::from_cyclic_orders(&orders)
        })
        .collect()
}
