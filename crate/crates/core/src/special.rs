//! Riemann zeta on the real line and the periodic cosine series
//! `sum_{k>=1} cos(2 pi k x) / k^s` used by the Korobov kernel.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

/// Riemann zeta function for real `s != 1`.
pub fn zeta(s: f64) -> f64 {
    if s == 1.0 {
        return f64::INFINITY;
    }
    if s == 0.0 {
        return -0.5;
    }
    if s > 60.0 {
        return 1.0 + 2f64.powf(-s) + 3f64.powf(-s);
    }
    if s >= 0.5 {
        return zeta_borwein(s);
    }
    // Reflection: zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s).
    let sine = (PI * s / 2.0).sin();
    if s < 0.0 && s.fract() == 0.0 && (s as i64) % 2 == 0 {
        return 0.0;
    }
    2f64.powf(s) * PI.powf(s - 1.0) * sine * gamma(1.0 - s) * zeta_borwein(1.0 - s)
}

/// Borwein's accelerated alternating series, valid for `s > 0`, `s != 1`.
fn zeta_borwein(s: f64) -> f64 {
    const N: usize = 40;
    // d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), built incrementally.
    let n = N as f64;
    let mut d = [0.0f64; N + 1];
    let mut term = 1.0 / n; // i = 0: (n-1)!/n! = 1/n
    let mut acc = term;
    d[0] = n * acc;
    for (i, slot) in d.iter_mut().enumerate().skip(1) {
        let fi = i as f64;
        term *= (n + fi - 1.0) * (n - fi + 1.0) * 4.0 / ((2.0 * fi - 1.0) * (2.0 * fi));
        acc += term;
        *slot = n * acc;
    }
    let dn = d[N];
    let mut sum = 0.0;
    for (k, dk) in d[..N].iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (dk - dn) / ((k + 1) as f64).powf(s);
    }
    -sum / (dn * (1.0 - 2f64.powf(1.0 - s)))
}

/// Precomputed expansion of `C_s(x) = sum_{k>=1} cos(2 pi k x) / k^s` for `s > 1`.
///
/// Uses the expansion of the polylogarithm `Li_s(e^{mu})` in powers of `mu`
/// around `mu = 0`, evaluated at `mu = 2 pi i x` with `x` folded into `[0, 1/2]`,
/// where it converges like `2^{-k}`.
#[derive(Debug, Clone)]
pub struct PeriodicZeta {
    s: f64,
    zeta_s: f64,
    /// Coefficients of `omega^{2q}` in the regular part.
    coeffs: Vec<f64>,
    singular: Singular,
}

#[derive(Debug, Clone)]
enum Singular {
    /// `Re[Gamma(1-s) (-i omega)^{s-1}] = c * omega^{s-1}`.
    Power { c: f64 },
    /// Integer `s = n`: `omega^{n-1} (re * (H_{n-1} - ln omega) - im * pi / 2)`.
    Log { re: f64, im: f64, harmonic: f64, n: i32 },
}

const TERMS: usize = 48;

impl PeriodicZeta {
    pub fn new(s: f64) -> Self {
        assert!(s > 1.0, "periodic zeta series needs s > 1");
        let rounded = s.round();
        let is_integer = (s - rounded).abs() == 0.0;
        let mut coeffs = Vec::with_capacity(TERMS);
        let mut factorial = 1.0f64;
        for q in 0..TERMS {
            let k = 2 * q;
            if k > 0 {
                factorial *= (k - 1) as f64 * k as f64;
            }
            let skip = is_integer && (k as f64 - (rounded - 1.0)).abs() < 0.5;
            let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
            let c = if skip { 0.0 } else { sign * zeta(s - k as f64) / factorial };
            coeffs.push(c);
        }
        let singular = if is_integer {
            let n = rounded as i32;
            let mut fact = 1.0;
            let mut harmonic = 0.0;
            for i in 1..n {
                fact *= i as f64;
                harmonic += 1.0 / i as f64;
            }
            // i^{n-1} / (n-1)!
            let (re, im) = match (n - 1).rem_euclid(4) {
                0 => (1.0, 0.0),
                1 => (0.0, 1.0),
                2 => (-1.0, 0.0),
                _ => (0.0, -1.0),
            };
            Singular::Log { re: re / fact, im: im / fact, harmonic, n }
        } else {
            Singular::Power { c: gamma(1.0 - s) * (PI * (s - 1.0) / 2.0).cos() }
        };
        Self { s, zeta_s: zeta(s), coeffs, singular }
    }

    pub fn exponent(&self) -> f64 {
        self.s
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut t = x - x.floor();
        if t > 0.5 {
            t = 1.0 - t;
        }
        if t == 0.0 {
            return self.zeta_s;
        }
        let omega = 2.0 * PI * t;
        let w2 = omega * omega;
        let mut regular = 0.0;
        for &c in self.coeffs.iter().rev() {
            regular = regular * w2 + c;
        }
        let singular = match self.singular {
            Singular::Power { c } => c * omega.powf(self.s - 1.0),
            Singular::Log { re, im, harmonic, n } => {
                omega.powi(n - 1) * (re * (harmonic - omega.ln()) - im * PI / 2.0)
            }
        };
        regular + singular
    }
}
