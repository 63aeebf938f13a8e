#![allow(dead_code)]

use toric_core::{cartier_data, BigInt, Fan, SupportFunction, TorusDivisor};

pub fn p1() -> Fan {
    Fan::from_i64(1, &[&[1], &[-1]], &[&[0], &[1]]).unwrap()
}

pub fn p2() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]]).unwrap()
}

pub fn p1xp1() -> Fan {
    Fan::from_i64(
        2,
        &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
    )
    .unwrap()
}

/// Hirzebruch surface `F_a`.
pub fn hirzebruch(a: i64) -> Fan {
    Fan::from_i64(
        2,
        &[&[1, 0], &[0, 1], &[-1, a], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
    )
    .unwrap()
}

pub fn p3() -> Fan {
    Fan::from_i64(
        3,
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]],
        &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
    )
    .unwrap()
}

pub fn phi(fan: &Fan, a: &[i64]) -> SupportFunction {
    cartier_data(fan, &TorusDivisor::from_i64s(a)).unwrap()
}

/// Integer rays as i64, for oracles that do their own arithmetic.
pub fn rays_i64(fan: &Fan) -> Vec<Vec<i64>> {
    fan.rays().iter().map(|r| r.to_i64s().unwrap()).collect()
}

/// Brute-force `dP_D ∩ Z^n` over the box `[-bound, bound]^n`, lexicographic.
pub fn box_oracle(rays: &[Vec<i64>], a: &[i64], d: i64, bound: i64) -> Vec<Vec<i64>> {
    let n = rays[0].len();
    let mut out = Vec::new();
    let mut cur = vec![-bound; n];
    loop {
        let ok = rays
            .iter()
            .zip(a)
            .all(|(v, ai)| v.iter().zip(&cur).map(|(p, q)| p * q).sum::<i64>() >= -d * ai);
        if ok {
            out.push(cur.clone());
        }
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < bound {
                cur[k] += 1;
                for c in cur.iter_mut().skip(k + 1) {
                    *c = -bound;
                }
                break;
            }
        }
    }
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}
