//! Multivariate polynomials over the coefficient fields, with the monomial
//! bookkeeping used for degree-truncated section computations.
//!
//! The symmetric algebra S has its variables in internal degree 2, so a
//! monomial of variable-degree m sits in internal degree 2m.

use crate::scalar::{FieldSpec, Scalar};
use std::collections::BTreeMap;

/// Sparse polynomial; exponent vectors have one entry per variable and no
/// zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u16>, Scalar>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize, field: FieldSpec) -> Self {
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, field.one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Vec<u16>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k.mul(c))).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2));
            }
        }
        out
    }

    pub fn mul_var(&self, i: usize) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[i] += 1;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Variable-degree of a monomial times 2 = internal degree.
    pub fn max_internal_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| 2 * e.iter().map(|&x| x as u32).sum::<u32>()).max()
    }
}

/// All exponent vectors in `nvars` variables of total variable-degree
/// exactly `deg`, in lexicographic order (deterministic matrix columns).
pub fn monomials(nvars: usize, deg: u16) -> Vec<Vec<u16>> {
    fn rec(nvars: usize, deg: u16, prefix: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if prefix.len() + 1 == nvars {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for d in 0..=deg {
            prefix.push(d);
            rec(nvars, deg - d, prefix, out);
            prefix.pop();
        }
    }
    if nvars == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(nvars, deg, &mut Vec::new(), &mut out);
    out
}

/// The substitution realizing S -> S/(l)S for a nonzero linear form l:
/// the lowest-index variable with nonzero coefficient is eliminated,
/// x_j = -(sum over i != j of l_i x_i) / l_j.
#[derive(Debug, Clone)]
pub struct QuotientSubst {
    pub nvars: usize,
    pub eliminated: usize,
    /// replacement linear form for the eliminated variable (entry for the
    /// eliminated index is zero)
    pub rhs: Vec<Scalar>,
}

impl QuotientSubst {
    /// `label` must be nonzero.
    pub fn new(label: &[Scalar]) -> Option<Self> {
        let j = label.iter().position(|c| !c.is_zero())?;
        let inv_neg = label[j].inv().neg();
        let rhs: Vec<Scalar> = label
            .iter()
            .enumerate()
            .map(|(i, c)| if i == j { c.field().zero() } else { c.mul(&inv_neg) })
            .collect();
        Some(QuotientSubst { nvars: label.len(), eliminated: j, rhs })
    }

    /// Image of a polynomial in the quotient, written on the monomials that
    /// omit the eliminated variable.
    pub fn apply(&self, p: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        let rhs_poly = {
            let mut r = MPoly::zero(self.nvars);
            for (i, c) in self.rhs.iter().enumerate() {
                if !c.is_zero() {
                    let mut e = vec![0u16; self.nvars];
                    e[i] = 1;
                    r.add_term(e, c.clone());
                }
            }
            r
        };
        for (e, c) in &p.terms {
            let k = e[self.eliminated];
            let mut base = vec![0u16; self.nvars];
            base.clone_from_slice(e);
            base[self.eliminated] = 0;
            let mut term = MPoly::zero(self.nvars);
            term.add_term(base, c.clone());
            for _ in 0..k {
                term = term.mul(&rhs_poly);
            }
            out = out.add(&term);
        }
        out
    }
}
