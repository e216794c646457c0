//! Cantor pairing of numbers and interleaving of sets.

use std::collections::BTreeSet;

use num_integer::Roots;

use super::ArithError;

/// `π(n, m) = ((n+m)² + 3n + m) / 2`.
pub fn cantor_pair(n: u64, m: u64) -> Result<u64, ArithError> {
    let s = n.checked_add(m).ok_or(ArithError::Overflow)?;
    let tri = s
        .checked_mul(s.checked_add(1).ok_or(ArithError::Overflow)?)
        .ok_or(ArithError::Overflow)?
        / 2;
    tri.checked_add(n).ok_or(ArithError::Overflow)
}

pub fn cantor_unpair(z: u64) -> (u64, u64) {
    // largest w with w(w+1)/2 ≤ z
    let mut w = ((8u128 * z as u128 + 1).sqrt() as u64 - 1) / 2;
    while (w as u128) * (w as u128 + 1) / 2 > z as u128 {
        w -= 1;
    }
    let t = ((w as u128) * (w as u128 + 1) / 2) as u64;
    let n = z - t;
    (n, w - n)
}

/// `π^(ℓ)`: `π^(1)(n) = n`, `π^(ℓ)(n_1..n_ℓ) = π(π^(ℓ−1)(n_1..n_{ℓ−1}), n_ℓ)`.
pub fn cantor_tuple(tuple: &[u64]) -> Result<u64, ArithError> {
    let (first, rest) = tuple
        .split_first()
        .ok_or_else(|| ArithError::Unsupported("empty tuple".into()))?;
    rest.iter().try_fold(*first, |acc, &x| cantor_pair(acc, x))
}

pub fn cantor_untuple(len: usize, z: u64) -> Vec<u64> {
    let mut out = vec![0; len.max(1)];
    let mut cur = z;
    for i in (1..out.len()).rev() {
        let (a, b) = cantor_unpair(cur);
        out[i] = b;
        cur = a;
    }
    out[0] = cur;
    out
}

/// `Π(A_1..A_k) = ⋃_i { k·n + (i−1) : n ∈ A_i }`.
pub fn set_pair(sets: &[BTreeSet<u64>]) -> Result<BTreeSet<u64>, ArithError> {
    let k = sets.len() as u64;
    let mut out = BTreeSet::new();
    for (i, s) in sets.iter().enumerate() {
        for &n in s {
            let v = k
                .checked_mul(n)
                .and_then(|v| v.checked_add(i as u64))
                .ok_or(ArithError::Overflow)?;
            out.insert(v);
        }
    }
    Ok(out)
}

pub fn set_unpair(k: usize, b: &BTreeSet<u64>) -> Vec<BTreeSet<u64>> {
    let mut out = vec![BTreeSet::new(); k];
    if k == 0 {
        return out;
    }
    for &m in b {
        out[(m % k as u64) as usize].insert(m / k as u64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(cantor_pair(0, 0).unwrap(), 0);
        assert_eq!(cantor_pair(0, 1).unwrap(), 1);
        assert_eq!(cantor_pair(1, 0).unwrap(), 2);
        assert_eq!(cantor_unpair(2), (1, 0));
        assert!(cantor_pair(u64::MAX, 1).is_err());
    }

    #[test]
    fn tuples_round_trip() {
        let t = [3, 1, 4];
        let z = cantor_tuple(&t).unwrap();
        assert_eq!(cantor_untuple(3, z), t);
        assert_eq!(cantor_tuple(&[7]).unwrap(), 7);
    }

    #[test]
    fn set_pairing() {
        let a: BTreeSet<u64> = [0, 2].into();
        let b: BTreeSet<u64> = [1].into();
        let p = set_pair(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(p, [0, 3, 4].into());
        assert_eq!(set_unpair(2, &p), vec![a, b]);
    }
}
