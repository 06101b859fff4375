//! Type-class (multinomial outcome grouping) enumeration for product
//! distributions. A product distribution `p^⊗n` over an alphabet of size `m`
//! is constant on each type class, so linear programs over the `m^n`
//! outcomes collapse to the `C(n+m−1, m−1)` classes.

use crate::real::Real;

/// One type class of sequences of length `n`: occupation counts per symbol,
/// the log multiplicity, and per-outcome log probabilities under `p`/`q`
/// (`-∞` when a zero-probability symbol occurs).
#[derive(Debug, Clone)]
pub struct TypeClass<T: Real> {
    pub counts: Vec<usize>,
    pub ln_multiplicity: T,
    pub ln_p_outcome: T,
    pub ln_q_outcome: T,
}

impl<T: Real> TypeClass<T> {
    pub fn p_mass(&self) -> T {
        if self.ln_p_outcome == T::neg_infinity() {
            T::zero()
        } else {
            (self.ln_multiplicity + self.ln_p_outcome).exp()
        }
    }

    pub fn q_mass(&self) -> T {
        if self.ln_q_outcome == T::neg_infinity() {
            T::zero()
        } else {
            (self.ln_multiplicity + self.ln_q_outcome).exp()
        }
    }

    /// log likelihood ratio of a single outcome in this class.
    pub fn ln_ratio(&self) -> T {
        if self.ln_p_outcome == T::neg_infinity() {
            T::neg_infinity()
        } else if self.ln_q_outcome == T::neg_infinity() {
            T::infinity()
        } else {
            self.ln_p_outcome - self.ln_q_outcome
        }
    }
}

/// `C(n+m−1, m−1)` as f64, for capping enumeration size.
pub fn class_count(n: usize, m: usize) -> f64 {
    let mut c = 1.0f64;
    for i in 0..(m - 1) {
        c *= (n + m - 1 - i) as f64;
        c /= (i + 1) as f64;
        if c > 1e15 {
            return c;
        }
    }
    c
}

fn ln_factorials<T: Real>(n: usize) -> Vec<T> {
    let mut table = vec![T::zero(); n + 1];
    for i in 2..=n {
        table[i] = table[i - 1] + T::cast(i as f64).ln();
    }
    table
}

/// Enumerate every type class of length-`n` sequences over the shared
/// alphabet of `p` and `q` (slices of per-symbol probabilities).
pub fn enumerate_type_classes<T: Real>(p: &[T], q: &[T], n: usize) -> Vec<TypeClass<T>> {
    let m = p.len();
    debug_assert_eq!(m, q.len());
    let ln_fact = ln_factorials::<T>(n);
    let ln_p: Vec<T> = p
        .iter()
        .map(|&x| if x > T::zero() { x.ln() } else { T::neg_infinity() })
        .collect();
    let ln_q: Vec<T> = q
        .iter()
        .map(|&x| if x > T::zero() { x.ln() } else { T::neg_infinity() })
        .collect();

    let mut classes = Vec::new();
    let mut counts = vec![0usize; m];
    enumerate_rec(n, 0, &mut counts, &mut |counts: &[usize]| {
        let mut ln_mult = ln_fact[n];
        let mut lp = T::zero();
        let mut lq = T::zero();
        for (i, &k) in counts.iter().enumerate() {
            if k == 0 {
                continue;
            }
            ln_mult -= ln_fact[k];
            lp = if ln_p[i] == T::neg_infinity() {
                T::neg_infinity()
            } else {
                lp + T::cast(k as f64) * ln_p[i]
            };
            lq = if ln_q[i] == T::neg_infinity() {
                T::neg_infinity()
            } else {
                lq + T::cast(k as f64) * ln_q[i]
            };
        }
        classes.push(TypeClass {
            counts: counts.to_vec(),
            ln_multiplicity: ln_mult,
            ln_p_outcome: lp,
            ln_q_outcome: lq,
        });
    });
    classes
}

fn enumerate_rec(remaining: usize, sym: usize, counts: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    let m = counts.len();
    if sym == m - 1 {
        counts[sym] = remaining;
        f(counts);
        counts[sym] = 0;
        return;
    }
    for k in 0..=remaining {
        counts[sym] = k;
        enumerate_rec(remaining - k, sym + 1, counts, f);
    }
    counts[sym] = 0;
}
