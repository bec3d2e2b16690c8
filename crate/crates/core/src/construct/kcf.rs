//! k-CF colorings with `floor(log_{k+1} n) + 1` colors.

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::formulas::chi_kcf_closed;

/// `(k+1)^m - 1` points with `m` colors: `k + 1` blocks colored recursively
/// with `m - 1` colors, separated by `k` points of color `m`.
fn separator_block(k: usize, m: u32, out: &mut Vec<Color>) {
    if m == 0 {
        return;
    }
    for sep in 0..=k {
        if sep > 0 {
            out.push(m);
        }
        separator_block(k, m - 1, out);
    }
}

/// A k-CF coloring of H_n with exactly `chi_kcf(H_n)` colors: the length-`n`
/// prefix of the separator construction.
pub fn construct_kcf(n: usize, k: usize) -> Result<Coloring> {
    if n == 0 {
        return Err(Error::EmptyDomain("H_0 has no points"));
    }
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let m = chi_kcf_closed(n as u64, k)?;
    let full = (k + 1)
        .checked_pow(m)
        .ok_or_else(|| Error::domain(format!("(k+1)^{m} overflows")))?
        - 1;
    let mut out = Vec::with_capacity(full);
    separator_block(k, m, &mut out);
    out.truncate(n);
    Ok(Coloring::from_vec_unchecked(out))
}

/// CF coloring with `floor(log2 n) + 1` colors: the middle point gets the
/// top color and both halves recurse with one color fewer.
pub fn construct_cf_midpoint(n: usize) -> Result<Coloring> {
    if n == 0 {
        return Err(Error::EmptyDomain("H_0 has no points"));
    }
    fn fill(out: &mut [Color], color: Color) {
        if out.is_empty() {
            return;
        }
        let mid = (out.len() - 1) / 2;
        out[mid] = color;
        let (left, right) = out.split_at_mut(mid);
        fill(left, color - 1);
        fill(&mut right[1..], color - 1);
    }
    let levels = usize::BITS - n.leading_zeros();
    let mut out = vec![0; n];
    fill(&mut out, levels);
    Ok(Coloring::from_vec_unchecked(out))
}
