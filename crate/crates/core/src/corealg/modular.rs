//! Arithmetic modulo a word-sized prime, extended by `i` where possible.

use num_bigint::BigInt;

use super::scalar::{GaussianRational, Rational};

/// Mersenne prime `2^61 − 1`; `≡ 3 (mod 4)`, so `𝔽_p[i]` is a field.
pub const LARGE_PRIME: u64 = (1 << 61) - 1;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue (extended Euclid).
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    assert!(new_r != 0, "inverse of zero mod {p}");
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i128) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Residue ring `ℤ[i]/(p)` viewed as a field.
///
/// For `p ≡ 3 (mod 4)` elements are pairs `(re, im)` of `𝔽_{p²}`; for
/// `p ≡ 1 (mod 4)` the imaginary unit is sent to a fixed square root of `−1`
/// and every element has `im = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModField {
    pub p: u64,
    sqrt_minus_one: Option<u64>,
}

pub type ModElem = (u64, u64);

impl ModField {
    /// `None` unless `p` is a prime greater than 5.
    pub fn new(p: u64) -> Option<Self> {
        if p <= 5 || !is_prime(p) {
            return None;
        }
        let sqrt_minus_one = if p % 4 == 1 {
            (2..p).find_map(|a| {
                let r = pow_mod(a, (p - 1) / 4, p);
                (mul_mod(r, r, p) == p - 1).then_some(r)
            })
        } else {
            None
        };
        Some(ModField { p, sqrt_minus_one })
    }

    pub fn zero(&self) -> ModElem {
        (0, 0)
    }

    pub fn one(&self) -> ModElem {
        (1, 0)
    }

    pub fn is_zero(&self, a: &ModElem) -> bool {
        a.0 == 0 && a.1 == 0
    }

    pub fn from_u64(&self, a: u64) -> ModElem {
        (a % self.p, 0)
    }

    pub fn from_i64(&self, a: i64) -> ModElem {
        ((a as i128).rem_euclid(self.p as i128) as u64, 0)
    }

    pub fn add(&self, a: &ModElem, b: &ModElem) -> ModElem {
        (add_mod(a.0, b.0, self.p), add_mod(a.1, b.1, self.p))
    }

    pub fn sub(&self, a: &ModElem, b: &ModElem) -> ModElem {
        (sub_mod(a.0, b.0, self.p), sub_mod(a.1, b.1, self.p))
    }

    pub fn neg(&self, a: &ModElem) -> ModElem {
        self.sub(&(0, 0), a)
    }

    pub fn mul(&self, a: &ModElem, b: &ModElem) -> ModElem {
        let p = self.p;
        if a.1 == 0 && b.1 == 0 {
            return (mul_mod(a.0, b.0, p), 0);
        }
        let re = sub_mod(mul_mod(a.0, b.0, p), mul_mod(a.1, b.1, p), p);
        let im = add_mod(mul_mod(a.0, b.1, p), mul_mod(a.1, b.0, p), p);
        (re, im)
    }

    pub fn inv(&self, a: &ModElem) -> ModElem {
        let p = self.p;
        if a.1 == 0 {
            return (inv_mod(a.0, p), 0);
        }
        // (re − im·i)/(re² + im²); the norm is nonzero in 𝔽_{p²} for p ≡ 3 mod 4.
        let norm = add_mod(mul_mod(a.0, a.0, p), mul_mod(a.1, a.1, p), p);
        let ninv = inv_mod(norm, p);
        (mul_mod(a.0, ninv, p), mul_mod(sub_mod(0, a.1, p), ninv, p))
    }

    pub fn reduce_rational(&self, r: &Rational) -> Option<u64> {
        r.to_mod(self.p)
    }

    /// Image of a Gaussian rational, or `None` if `p` divides a denominator.
    pub fn reduce(&self, z: &GaussianRational) -> Option<ModElem> {
        let re = z.re.to_mod(self.p)?;
        let im = z.im.to_mod(self.p)?;
        Some(match self.sqrt_minus_one {
            Some(r) => (add_mod(re, mul_mod(im, r, self.p), self.p), 0),
            None => (re, im),
        })
    }

    /// Lift back to `ℚ(i)` by rational reconstruction of each component.
    /// Only meaningful for `p ≡ 3 (mod 4)`.
    pub fn reconstruct(&self, a: &ModElem) -> Option<GaussianRational> {
        Some(GaussianRational::new(
            rational_reconstruct(a.0, self.p)?,
            rational_reconstruct(a.1, self.p)?,
        ))
    }
}

/// Find `n/d ≡ a (mod p)` with `|n|, d ≤ sqrt(p/2)`.
pub fn rational_reconstruct(a: u64, p: u64) -> Option<Rational> {
    let bound = ((p / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    Some(Rational::from_bigints(BigInt::from(n), BigInt::from(d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(1_000_003));
        assert!(is_prime(LARGE_PRIME));
        assert!(!is_prime(1_000_001));
        assert!(ModField::new(5).is_none());
        assert!(ModField::new(9).is_none());
    }

    #[test]
    fn gaussian_field_inverse() {
        let f = ModField::new(1_000_003).unwrap();
        let z = f.reduce(&GaussianRational::gauss(3, -7)).unwrap();
        assert_eq!(f.mul(&z, &f.inv(&z)), f.one());
        let i = f.reduce(&GaussianRational::i()).unwrap();
        assert_eq!(f.mul(&i, &i), f.neg(&f.one()));
    }

    #[test]
    fn split_prime_maps_i_to_root() {
        let f = ModField::new(13).unwrap();
        let i = f.reduce(&GaussianRational::i()).unwrap();
        assert_eq!(i.1, 0);
        assert_eq!(f.mul(&i, &i), f.neg(&f.one()));
    }

    #[test]
    fn reconstruction() {
        let p = LARGE_PRIME;
        for (n, d) in [(1, 4), (-3, 7), (123456, 789), (0, 1)] {
            let r = Rational::new(n, d);
            let a = r.to_mod(p).unwrap();
            assert_eq!(rational_reconstruct(a, p), Some(r));
        }
    }
}
