//! Arithmetic in prime fields.

use crate::error::{Error, Result};

/// Largest modulus accepted; keeps products of two elements inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 32;

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= q {
        if q.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Smallest prime `>= lo`.
pub fn next_prime(lo: u64) -> u64 {
    (lo.max(2)..).find(|&q| is_prime(q)).expect("primes are unbounded")
}

/// `F_q` for a prime `q`. Elements are `u64` values in `0..q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self> {
        if q >= MAX_MODULUS || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(PrimeField { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn reduce(&self, x: u64) -> u64 {
        x % self.q
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.q
    }

    pub fn sub(&self, x: u64, y: u64) -> u64 {
        (x + self.q - y) % self.q
    }

    pub fn neg(&self, x: u64) -> u64 {
        (self.q - x) % self.q
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        x * y % self.q
    }

    pub fn pow(&self, mut x: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.q;
        x %= self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: u64) -> Result<u64> {
        if x.is_multiple_of(self.q) {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(x, self.q - 2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.mul(3, 4), 2);
        assert_eq!(f5.inv(2).unwrap(), 3);
        assert_eq!(f5.neg(0), 0);
        assert_eq!(f5.sub(1, 3), 3);
        assert!(matches!(f5.inv(0), Err(Error::ZeroInverse)));
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.pow(3, 6), 1);
    }

    #[test]
    fn rejects_composites() {
        for q in [0, 1, 4, 9, 15, 10_000] {
            assert!(matches!(PrimeField::new(q), Err(Error::NotPrime(_))));
        }
        assert_eq!(next_prime(24), 29);
        assert_eq!(next_prime(29), 29);
    }

    #[test]
    fn inverses_in_f101() {
        let f = PrimeField::new(101).unwrap();
        for x in 1..101 {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
        }
    }
}
