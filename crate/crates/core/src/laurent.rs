//! Integer Laurent polynomials in the variable `v`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Sparse integer Laurent polynomial; no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LaurentPoly(pub BTreeMap<i64, i64>);

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut m = BTreeMap::new();
        if coeff != 0 {
            m.insert(exp, coeff);
        }
        LaurentPoly(m)
    }

    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.0.get(&exp).copied().unwrap_or(0)
    }

    pub fn add_assign_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.0.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.0.remove(&exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, &c) in &other.0 {
            out.add_assign_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, &c) in &other.0 {
            out.add_assign_term(e, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (e, -c)).collect())
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        LaurentPoly(self.0.iter().map(|(&e, &k)| (e, c * k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&e1, &c1) in &self.0 {
            for (&e2, &c2) in &other.0 {
                out.add_assign_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// Shift by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (e + k, c)).collect())
    }

    /// The bar involution `v -> v^{-1}`.
    pub fn bar(&self) -> Self {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (-e, c)).collect())
    }

    pub fn eval_at_one(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.0.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }

    /// True if every exponent is >= 1 (i.e. the polynomial lies in v Z[v]).
    pub fn in_v_z_v(&self) -> bool {
        self.0.keys().all(|&e| e >= 1)
    }

    pub fn is_monomial(&self) -> bool {
        self.0.len() == 1 && *self.0.values().next().unwrap() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in &self.0 {
            if !first {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            } else {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            }
            let a = c.abs();
            match e {
                0 => write!(f, "{a}")?,
                1 if a == 1 => write!(f, "v")?,
                1 => write!(f, "{a}v")?,
                _ if a == 1 => write!(f, "v^{e}")?,
                _ => write!(f, "{a}v^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = LaurentPoly::v().add(&LaurentPoly::monomial(-1, 1)); // v + v^-1
        let q = p.mul(&p);
        assert_eq!(q.coeff(2), 1);
        assert_eq!(q.coeff(0), 2);
        assert_eq!(q.coeff(-2), 1);
        assert_eq!(q.eval_at_one(), 4);
        assert_eq!(p.bar(), p);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn no_zero_coefficients_survive() {
        let p = LaurentPoly::monomial(3, 5).sub(&LaurentPoly::monomial(3, 5));
        assert!(p.is_zero());
        assert!(p.0.is_empty());
    }

    #[test]
    fn display() {
        let p = LaurentPoly::monomial(2, 1).add(&LaurentPoly::monomial(0, -3));
        assert_eq!(p.to_string(), "-3 + v^2");
    }
}
