//! Hermite normal form for small integer lattices in ℤ².
//!
//! Generators are rows. The reduction keeps a unimodular transform so that
//! callers can recover integer combinations of the original generators.

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub(crate) fn gcd(a: i128, b: i128) -> i128 {
    ext_gcd(a, b).0
}

/// Modular inverse of `a` modulo `m > 0`, reduced into `[0, m)`.
pub(crate) fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (g, s, _) = ext_gcd(a.rem_euclid(m), m);
    (g == 1).then(|| s.rem_euclid(m))
}

/// Upper-triangular basis `[[h00, h01], [0, h11]]` of a rank-2 lattice in ℤ²,
/// with `h00 > 0`, `h11 > 0`, `0 <= h01 < h11`, plus the transform rows
/// expressing each basis vector in the input generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf2 {
    pub basis: [[i128; 2]; 2],
    pub transform: [Vec<i128>; 2],
}

impl Hnf2 {
    pub fn index(&self) -> i128 {
        self.basis[0][0] * self.basis[1][1]
    }

    /// Reduces `v` into the canonical box `[0, h00) × [0, h11)` modulo the lattice.
    pub fn reduce(&self, v: [i128; 2]) -> [i128; 2] {
        let [[h00, h01], [_, h11]] = self.basis;
        let q0 = v[0].div_euclid(h00);
        let y = v[1] - q0 * h01;
        [v[0] - q0 * h00, y.rem_euclid(h11)]
    }
}

/// Hermite normal form of the lattice spanned by `gens`. Returns `None` when
/// the generators do not span a rank-2 lattice.
pub fn hnf2(gens: &[[i128; 2]]) -> Option<Hnf2> {
    let m = gens.len();
    let mut rows: Vec<[i128; 2]> = gens.to_vec();
    let mut u: Vec<Vec<i128>> = (0..m)
        .map(|i| (0..m).map(|j| i128::from(i == j)).collect())
        .collect();

    let combine = |rows: &mut Vec<[i128; 2]>, u: &mut Vec<Vec<i128>>, p: usize, i: usize, col: usize| {
        let (a, b) = (rows[p][col], rows[i][col]);
        if b == 0 {
            return;
        }
        let (g, s, t) = ext_gcd(a, b);
        let (ag, bg) = (a / g, b / g);
        let rp = rows[p];
        let ri = rows[i];
        rows[p] = [s * rp[0] + t * ri[0], s * rp[1] + t * ri[1]];
        rows[i] = [ag * ri[0] - bg * rp[0], ag * ri[1] - bg * rp[1]];
        let up = u[p].clone();
        let ui = u[i].clone();
        for k in 0..up.len() {
            u[p][k] = s * up[k] + t * ui[k];
            u[i][k] = ag * ui[k] - bg * up[k];
        }
    };

    for i in 1..m {
        combine(&mut rows, &mut u, 0, i, 0);
    }
    if m < 2 {
        return None;
    }
    for i in 2..m {
        combine(&mut rows, &mut u, 1, i, 1);
    }
    let mut r0 = rows[0];
    let mut r1 = rows[1];
    let mut u0 = u[0].clone();
    let mut u1 = u[1].clone();
    if r0[0] == 0 || r1[1] == 0 {
        return None;
    }
    if r0[0] < 0 {
        r0 = [-r0[0], -r0[1]];
        u0.iter_mut().for_each(|x| *x = -*x);
    }
    if r1[1] < 0 {
        r1 = [0, -r1[1]];
        u1.iter_mut().for_each(|x| *x = -*x);
    }
    let q = r0[1].div_euclid(r1[1]);
    r0[1] -= q * r1[1];
    for k in 0..u0.len() {
        u0[k] -= q * u1[k];
    }
    Some(Hnf2 {
        basis: [r0, r1],
        transform: [u0, u1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_identity_generators() {
        let h = hnf2(&[[2, 0], [0, 3], [1, 1]]).unwrap();
        assert_eq!(h.index(), 1);
    }

    #[test]
    fn transform_reproduces_basis() {
        let gens = [[4, 6], [2, -2], [6, 10], [0, 8]];
        let h = hnf2(&gens).unwrap();
        for r in 0..2 {
            let mut acc = [0i128; 2];
            for (c, g) in h.transform[r].iter().zip(gens.iter()) {
                acc[0] += c * g[0];
                acc[1] += c * g[1];
            }
            assert_eq!(acc, h.basis[r]);
        }
        assert_eq!(h.basis[0][0] * h.basis[1][1], h.index());
        assert!(h.basis[0][1] >= 0 && h.basis[0][1] < h.basis[1][1]);
    }

    #[test]
    fn rank_deficient_is_none() {
        assert!(hnf2(&[[1, 2], [2, 4]]).is_none());
    }

    #[test]
    fn mod_inverse_small() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(6, 9), None);
        assert_eq!(mod_inverse(-3, 7), Some(2));
    }
}
