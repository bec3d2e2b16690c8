//! Closed forms for the extremal quantities of H_n:
//!
//! * `g_k(m)`, the largest n whose interval hypergraph has a k-SCF coloring
//!   with m colors;
//! * `f_{H_n}(k)`, the fewest colors of a k-SCF coloring of H_n;
//! * `chi_kcf(H_n)`, the fewest colors of a k-CF coloring of H_n;
//! * two-sided real bounds on `f_{H_n}(k)` for every k >= 2.

use crate::error::{Error, Result};

/// Fibonacci numbers with `F_1 = F_2 = 1`. Exact for `j <= 93`.
pub fn fibonacci(j: u32) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..j {
        (a, b) = (b, a + b);
    }
    a
}

/// Least even integer `>= x`.
pub fn ceil_even(x: f64) -> i64 {
    let c = x.ceil() as i64;
    if c % 2 == 0 {
        c
    } else {
        c + 1
    }
}

/// Least odd integer `>= x`.
pub fn ceil_odd(x: f64) -> i64 {
    let c = x.ceil() as i64;
    if c.rem_euclid(2) == 1 {
        c
    } else {
        c + 1
    }
}

/// `g_k(m)` for k in {2, 3}: `F_{m+2} - 1` for k = 2; `3 * 2^(p-1) - 1` at
/// m = 2p and `2^(p+1) - 1` at m = 2p + 1 for k = 3.
pub fn g_scf_closed(m: u32, k: usize) -> Result<u64> {
    if m == 0 {
        return Err(Error::domain("color budget m must be at least 1"));
    }
    match k {
        2 => {
            if m > 90 {
                return Err(Error::domain(format!("g_2({m}) overflows u64")));
            }
            Ok(fibonacci(m + 2) - 1)
        }
        3 => {
            let p = m / 2;
            if p > 60 {
                return Err(Error::domain(format!("g_3({m}) overflows u64")));
            }
            if m % 2 == 0 {
                Ok(3 * (1u64 << (p - 1)) - 1)
            } else {
                Ok((1u64 << (p + 1)) - 1)
            }
        }
        _ => Err(Error::domain(format!("no closed form for g_k with k = {k}"))),
    }
}

/// `g_k(k + l(p+1)) = 2^l (k+1) - 1` for odd `k = 2p + 1`.
pub fn gk_odd_closed(k: usize, l: u32) -> Result<u64> {
    if k % 2 == 0 {
        return Err(Error::domain(format!("k = {k} is not odd")));
    }
    if l > 50 {
        return Err(Error::domain(format!("level {l} overflows u64")));
    }
    Ok((1u64 << l) * (k as u64 + 1) - 1)
}

/// Color count reached at level `l` of the odd-k recursion: `k + l(p+1)`.
pub fn odd_level_colors(k: usize, l: u32) -> usize {
    k + l as usize * (k / 2 + 1)
}

/// `min { m : g(m) >= n }` by walking the recurrence values upward.
pub fn f_scf_from_g(n: u64, k: usize) -> Result<u32> {
    if n == 0 {
        return Err(Error::EmptyDomain("H_0 has no points"));
    }
    let mut m = 1;
    loop {
        if g_scf_closed(m, k)? >= n {
            return Ok(m);
        }
        m += 1;
    }
}

/// Exact `f_{H_n}(k)` for k in {2, 3} from the logarithmic closed forms.
///
/// For k = 3 the even/odd ceilings are taken as "least even/odd integer
/// `>= x`"; the strict reading gives `f_{H_3}(3) = 4`, which is false.
pub fn f_scf_closed(n: u64, k: usize) -> Result<u32> {
    if n == 0 {
        return Err(Error::EmptyDomain("H_0 has no points"));
    }
    let n = n as f64;
    match k {
        2 => {
            let phi = (1.0 + 5f64.sqrt()) / 2.0;
            let x = (5f64.sqrt() * (n + 0.5)).ln() / phi.ln();
            Ok((x.floor() as i64 - 1) as u32)
        }
        3 => {
            let even = ceil_even(2.0 * (1.0 + ((n + 1.0) / 3.0).log2()));
            let odd = ceil_odd(2.0 * (n + 1.0).log2() - 1.0);
            Ok(even.min(odd) as u32)
        }
        _ => Err(Error::domain(format!("no closed form for f_H_n(k) with k = {k}"))),
    }
}

/// Strict real bounds `(lower, upper)` with `lower < f_{H_n}(k) < upper`.
///
/// Odd k needs `n >= k + 1`; even k needs `n >= k + 2`.
pub fn f_scf_bounds(n: u64, k: usize) -> Result<(f64, f64)> {
    if k < 2 {
        return Err(Error::domain(format!("bounds need k >= 2, got {k}")));
    }
    let nf = n as f64;
    let kf = k as f64;
    if k % 2 == 1 {
        if n < k as u64 + 1 {
            return Err(Error::domain(format!("odd k = {k} needs n >= {}", k + 1)));
        }
        let lg = ((nf + 1.0) / (kf + 1.0)).log2();
        let half = (kf + 1.0) / 2.0;
        Ok((kf + half * (lg - 1.0), kf + half * (1.0 + lg)))
    } else {
        if n < k as u64 + 2 {
            return Err(Error::domain(format!("even k = {k} needs n >= {}", k + 2)));
        }
        let lower = kf - 1.0 + kf / 2.0 * (((nf + 1.0) / kf).log2() - 1.0);
        let upper = 1.0 + kf + (kf + 2.0) / 2.0 * (1.0 + ((nf + 1.0) / (kf + 2.0)).log2());
        Ok((lower, upper))
    }
}

/// `chi_kcf(H_n) = floor(log_{k+1} n) + 1`, in exact integer arithmetic.
pub fn chi_kcf_closed(n: u64, k: usize) -> Result<u32> {
    if n == 0 {
        return Err(Error::EmptyDomain("H_0 has no points"));
    }
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let base = k as u64 + 1;
    let mut m = 1;
    let mut power = base;
    while power <= n {
        m += 1;
        power = match power.checked_mul(base) {
            Some(p) => p,
            None => break,
        };
    }
    Ok(m)
}
