//! Expansion of the symbol of H^{−z} through φ_z(u) = (artanh u/u)^{z−1}(1−u²)^{(n−2)/2}.
//!
//! With φ_z(u) = Σ_m c_m(z) u^m, the symbol is Q^{−z} Σ_m c_m(z)(z)_m Q^{−m},
//! so the term of relative degree −j carries h_j(z) = c_{j/2}(z)·(z)_{j/2}
//! for even j and vanishes for odd j.

use crate::symcore::scalar::C64;

/// Truncated power series in u, complex coefficients.
#[derive(Clone, Debug)]
struct Series(Vec<C64>);

impl Series {
    fn len(&self) -> usize {
        self.0.len()
    }

    fn scale(&self, c: C64) -> Series {
        Series(self.0.iter().map(|x| x * c).collect())
    }

    /// log f for f(0) = 1, via f·(log f)' = f'.
    fn log(&self) -> Series {
        let l = self.len();
        let f = &self.0;
        assert!((f[0] - 1.0).norm() < 1e-14);
        // g' coefficients: d[m] for u^m of (log f)'
        let mut d = vec![C64::new(0.0, 0.0); l];
        for m in 0..l.saturating_sub(1) {
            let mut acc = f[m + 1] * (m as f64 + 1.0);
            for k in 0..m {
                acc -= d[k] * f[m - k];
            }
            d[m] = acc;
        }
        let mut g = vec![C64::new(0.0, 0.0); l];
        for m in 1..l {
            g[m] = d[m - 1] / m as f64;
        }
        Series(g)
    }

    /// exp g for g(0) = 0, via f' = g' f.
    fn exp(&self) -> Series {
        let l = self.len();
        let g = &self.0;
        let mut f = vec![C64::new(0.0, 0.0); l];
        f[0] = C64::new(1.0, 0.0);
        for m in 1..l {
            let mut acc = C64::new(0.0, 0.0);
            for k in 1..=m {
                acc += g[k] * k as f64 * f[m - k];
            }
            f[m] = acc / m as f64;
        }
        Series(f)
    }
}

/// Coefficients c_0..c_{len−1} of φ_z(u) as a full series in u.
pub fn phi_series(z: C64, n: usize, len: usize) -> Vec<C64> {
    let len = len.max(2);
    // artanh(u)/u = Σ u^{2k}/(2k+1)
    let at = Series(
        (0..len)
            .map(|m| {
                if m % 2 == 0 {
                    C64::new(1.0 / (m as f64 + 1.0), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect(),
    );
    let one_minus_u2 = Series(
        (0..len)
            .map(|m| match m {
                0 => C64::new(1.0, 0.0),
                2 => C64::new(-1.0, 0.0),
                _ => C64::new(0.0, 0.0),
            })
            .collect(),
    );
    let e = at
        .log()
        .scale(z - 1.0)
        .0
        .iter()
        .zip(one_minus_u2.log().scale(C64::new((n as f64 - 2.0) / 2.0, 0.0)).0.iter())
        .map(|(a, b)| a + b)
        .collect();
    Series(e).exp().0
}

/// a_k(z): coefficients of φ_z in u², k = 0..=kmax.
pub fn hz_coefficients(z: C64, n: usize, kmax: usize) -> Vec<C64> {
    let c = phi_series(z, n, 2 * kmax + 1);
    (0..=kmax).map(|k| c[2 * k]).collect()
}

/// (z)_m = z(z+1)···(z+m−1).
pub fn pochhammer(z: C64, m: usize) -> C64 {
    (0..m).fold(C64::new(1.0, 0.0), |acc, k| acc * (z + k as f64))
}

/// h_j(z) for j = 0..=jmax.
pub fn hz_terms(z: C64, n: usize, jmax: usize) -> Vec<C64> {
    let c = phi_series(z, n, jmax / 2 + 1);
    (0..=jmax)
        .map(|j| {
            if j % 2 == 1 {
                C64::new(0.0, 0.0)
            } else {
                c[j / 2] * pochhammer(z, j / 2)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_coefficient_and_parity() {
        for z in [C64::new(0.3, 0.0), C64::new(1.0, 1.0), C64::new(2.5, 0.0)] {
            for n in 1..=3 {
                let c = phi_series(z, n, 12);
                assert!((c[0] - 1.0).norm() < 1e-15);
                for m in (1..12).step_by(2) {
                    assert!(c[m].norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn first_coefficient_closed_form() {
        // a₁(z) = (z−1)/3 − (n−2)/2
        let z = C64::new(0.7, -0.4);
        for n in 1..=3 {
            let a = hz_coefficients(z, n, 2);
            let want = (z - 1.0) / 3.0 - (n as f64 - 2.0) / 2.0;
            assert!((a[1] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn square_of_oscillator() {
        // H² has symbol Q#Q = Q² − 1 for n = 1, so h₄(−2) = −1.
        let h = hz_terms(C64::new(-2.0, 0.0), 1, 8);
        assert!((h[4] + 1.0).norm() < 1e-14);
        assert!(h[8].norm() < 1e-14);
    }
}
