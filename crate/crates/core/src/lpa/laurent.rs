use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Integer Laurent polynomial in one variable `u`; no zero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Laurent(BTreeMap<i64, BigInt>);

impl Laurent {
    pub fn zero() -> Self {
        Laurent(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(c, 0)
    }

    pub fn u_pow(k: i64) -> Self {
        Self::term(1, k)
    }

    pub fn term(c: impl Into<BigInt>, k: i64) -> Self {
        let c = c.into();
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(k, c);
        }
        Laurent(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.0.iter().map(|(&k, c)| (k, c))
    }

    pub fn exponents(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.keys().copied()
    }

    pub fn coefficient(&self, k: i64) -> BigInt {
        self.0.get(&k).cloned().unwrap_or_default()
    }

    /// The integer value when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.0.len() {
            0 => Some(BigInt::zero()),
            1 => self.0.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, k: i64, c: &BigInt) {
        let entry = self.0.entry(k).or_default();
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&k);
        }
    }

    /// `u ↦ u⁻¹`.
    pub fn conj(&self) -> Self {
        Laurent(self.0.iter().map(|(&k, c)| (-k, c.clone())).collect())
    }

    /// `u ↦ u^p`; `p = 0` evaluates at `u = 1`.
    pub fn substitute_power(&self, p: i64) -> Self {
        let mut out = Laurent::zero();
        for (k, c) in self.terms() {
            out.add_term(k * p, c);
        }
        out
    }

    pub fn shift(&self, k: i64) -> Self {
        Laurent(self.0.iter().map(|(&e, c)| (e + k, c.clone())).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent(self.0.iter().map(|(&k, x)| (k, x * c)).collect())
    }
}

impl Add for &Laurent {
    type Output = Laurent;

    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, c);
        }
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;

    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &-rhs
    }
}

impl Neg for &Laurent {
    type Output = Laurent;

    fn neg(self) -> Laurent {
        Laurent(self.0.iter().map(|(&k, c)| (k, -c)).collect())
    }
}

impl Mul for &Laurent {
    type Output = Laurent;

    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // Highest power first.
        for (i, (&k, c)) in self.0.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("u")?,
                (1, false) => write!(f, "{mag}*u")?,
                (_, true) => write!(f, "u^{k}")?,
                (_, false) => write!(f, "{mag}*u^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_cancels() {
        let a = &Laurent::u_pow(1) + &Laurent::constant(2);
        let b = &a - &Laurent::u_pow(1);
        assert_eq!(b, Laurent::constant(2));
        assert!((&a - &a).is_zero());
        let p = &Laurent::u_pow(2) * &Laurent::u_pow(-2);
        assert_eq!(p, Laurent::one());
    }

    #[test]
    fn conjugation_and_display() {
        let a = &Laurent::term(2, 3) - &Laurent::u_pow(-1);
        assert_eq!(a.to_string(), "2*u^3 - u^-1");
        assert_eq!(a.conj().to_string(), "-u + 2*u^-3");
        assert_eq!(a.substitute_power(0), Laurent::constant(1));
    }
}
