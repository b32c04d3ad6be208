//! Scalar arithmetic on machine integers.

/// `base^exp mod modulus`.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `modulus`, if `gcd(a, modulus) = 1`.
pub fn mod_inv(a: u64, modulus: u64) -> Option<u64> {
    let (mut old_r, mut r) = ((a % modulus) as i128, modulus as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(modulus as i128) as u64)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest generator of the multiplicative group of `F_p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let phi = p - 1;
    let mut factors = Vec::new();
    let mut rest = phi;
    let mut d = 2;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            factors.push(d);
            while rest.is_multiple_of(d) {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        factors.push(rest);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, phi / q, p) != 1))
        .expect("every prime field has a primitive root")
}

/// Exponent `e` with `value = p^e`, if `value` is a power of `p`.
pub fn exact_log(value: u64, p: u64) -> Option<u32> {
    if value == 0 {
        return None;
    }
    let mut v = value;
    let mut e = 0;
    while v.is_multiple_of(p) {
        v /= p;
        e += 1;
    }
    (v == 1).then_some(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_mod_prime_powers() {
        assert_eq!(mod_inv(2, 5), Some(3));
        assert_eq!(mod_inv(2, 7), Some(4));
        assert_eq!(mod_inv(5, 25), None);
        for a in 1..125u64 {
            match mod_inv(a, 125) {
                Some(b) => assert_eq!(a * b % 125, 1),
                None => assert_eq!(a % 5, 0),
            }
        }
    }

    #[test]
    fn primes_and_roots() {
        let primes: Vec<u64> = (0..40).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(11), 2);
        assert_eq!(primitive_root(23), 5);
    }

    #[test]
    fn logs() {
        assert_eq!(exact_log(1, 5), Some(0));
        assert_eq!(exact_log(125, 5), Some(3));
        assert_eq!(exact_log(120, 5), None);
        assert_eq!(exact_log(0, 5), None);
    }
}
