//! Even-index Bernoulli numbers as exact rationals, derived from the tangent
//! numbers (integer-only recurrence) and cached process-wide.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Float, Integer, Rational};

static CACHE: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Number of even Bernoulli numbers kept in the per-precision float tables.
pub(crate) const TABLE_LEN: usize = 240;

fn tangent_numbers(n: usize) -> Vec<Integer> {
    let mut t = vec![Integer::new(); n + 1];
    if n == 0 {
        return t;
    }
    t[1] = Integer::from(1);
    for k in 2..=n {
        t[k] = Integer::from(&t[k - 1] * (k as u32 - 1));
    }
    for k in 2..=n {
        for j in k..=n {
            let a = Integer::from(&t[j - 1] * (j - k) as u32);
            let b = Integer::from(&t[j] * (j - k + 2) as u32);
            t[j] = a + b;
        }
    }
    t
}

/// `B_{2j}` for `j = 0..=jmax` (so `B_0 = 1`, `B_2 = 1/6`, `B_4 = −1/30`, …).
pub fn bernoulli_even(jmax: usize) -> Vec<Rational> {
    let mut cache = CACHE.lock().expect("bernoulli cache poisoned");
    if cache.len() <= jmax {
        let n = (jmax + 1).max(2 * cache.len()).max(32);
        let tan = tangent_numbers(n);
        let mut out = Vec::with_capacity(n + 1);
        out.push(Rational::from(1));
        for (j, tj) in tan.iter().enumerate().skip(1) {
            // B_{2j} = (−1)^{j−1}·2j·T_j / (4^j(4^j − 1))
            let four_j = Integer::from(1) << (2 * j as u32);
            let den = Integer::from(&four_j - 1u32) * four_j;
            let mut r = Rational::from((Integer::from(tj * (2 * j as u32)), den));
            if j % 2 == 0 {
                r = -r;
            }
            out.push(r);
        }
        *cache = out;
    }
    cache[..=jmax].to_vec()
}

pub fn bernoulli_even_float(jmax: usize, prec: u32) -> Vec<Float> {
    bernoulli_even(jmax)
        .into_iter()
        .map(|r| Float::with_val(prec, r))
        .collect()
}

/// `B_{2j}` for `j < TABLE_LEN` as floats at `prec` bits, cached per precision.
pub(crate) fn bernoulli_table(prec: u32) -> Arc<Vec<Float>> {
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<Vec<Float>>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().expect("bernoulli table poisoned").get(&prec) {
        return Arc::clone(t);
    }
    let t = Arc::new(bernoulli_even_float(TABLE_LEN - 1, prec));
    tables
        .lock()
        .expect("bernoulli table poisoned")
        .entry(prec)
        .or_insert(t)
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let b = bernoulli_even(6);
        let expect = [(1, 1), (1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730)];
        for (r, (n, d)) in b.iter().zip(expect) {
            assert_eq!(*r, Rational::from((n, d)));
        }
    }

    #[test]
    fn matches_classical_recurrence() {
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0 with B_1 = −1/2 and odd B_j = 0 otherwise
        let even = bernoulli_even(20);
        for m in 1..40u32 {
            let mut acc = Rational::new();
            let mut binom = Integer::from(1);
            for j in 0..=m {
                let bj = if j == 1 {
                    Rational::from((-1, 2))
                } else if j % 2 == 1 {
                    Rational::new()
                } else {
                    even[(j / 2) as usize].clone()
                };
                acc += Rational::from(&binom * &bj);
                binom = binom * (m + 1 - j) / (j + 1);
            }
            assert_eq!(acc, 0, "m = {m}");
        }
    }
}
