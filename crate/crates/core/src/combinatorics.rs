//! Small exact tables shared by the decomposition and scattering code.

/// `C(n, r)` from Pascal's rule. Exact for every `n` this crate admits.
pub(crate) fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut row = vec![0u128; r + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=r.min(i)).rev() {
            row[j] += row[j - 1];
        }
    }
    row[r]
}

pub(crate) fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}
