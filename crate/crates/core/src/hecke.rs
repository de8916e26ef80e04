//! The affine Hecke algebra in the H-basis (Soergel normalization) and the
//! Kazhdan-Lusztig basis.
//!
//! The T-basis exists only through the two defining relations; everything
//! here is phrased via `H_x H_s = H_{xs}` if the length goes up and
//! `H_{xs} + (v^{-1} - v) H_x` otherwise.

use crate::laurent::LaurentPoly;
use crate::weyl::{AffineWeyl, AffineWeylElt};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

/// Element of the Hecke algebra as a finite H-basis combination.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HeckeElt(pub BTreeMap<AffineWeylElt, LaurentPoly>);

impl HeckeElt {
    pub fn zero() -> Self {
        HeckeElt(BTreeMap::new())
    }

    pub fn basis(w: AffineWeylElt) -> Self {
        let mut m = BTreeMap::new();
        m.insert(w, LaurentPoly::one());
        HeckeElt(m)
    }

    pub fn coeff(&self, w: &AffineWeylElt) -> LaurentPoly {
        self.0.get(w).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn add_assign_scaled(&mut self, other: &HeckeElt, scale: &LaurentPoly) {
        for (w, c) in &other.0 {
            let term = c.mul(scale);
            let entry = self.0.entry(w.clone()).or_insert_with(LaurentPoly::zero);
            *entry = entry.add(&term);
            if entry.is_zero() {
                self.0.remove(w);
            }
        }
    }

    pub fn add_assign_term(&mut self, w: AffineWeylElt, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(w.clone()).or_insert_with(LaurentPoly::zero);
        *entry = entry.add(c);
        if entry.is_zero() {
            self.0.remove(&w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &AffineWeylElt> {
        self.0.keys()
    }
}

/// Kazhdan-Lusztig computation context with a per-group memo table.
pub struct KlContext<'a> {
    pub group: &'a AffineWeyl,
    kl_memo: RefCell<HashMap<AffineWeylElt, HeckeElt>>,
    bar_memo: RefCell<HashMap<AffineWeylElt, HeckeElt>>,
}

impl<'a> KlContext<'a> {
    pub fn new(group: &'a AffineWeyl) -> Self {
        KlContext {
            group,
            kl_memo: RefCell::new(HashMap::new()),
            bar_memo: RefCell::new(HashMap::new()),
        }
    }

    /// Pre-seeds the KL memo, e.g. from a disk cache.
    pub fn seed(&self, w: AffineWeylElt, elt: HeckeElt) {
        self.kl_memo.borrow_mut().insert(w, elt);
    }

    pub fn memo_snapshot(&self) -> Vec<(AffineWeylElt, HeckeElt)> {
        let mut v: Vec<_> = self
            .kl_memo
            .borrow()
            .iter()
            .map(|(k, e)| (k.clone(), e.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Right multiplication by the generator `H_s`.
    pub fn mul_gen_right(&self, a: &HeckeElt, s: usize) -> HeckeElt {
        let g = self.group;
        let mut out = HeckeElt::zero();
        for (x, c) in &a.0 {
            let xs = g.compose(x, g.gen(s));
            if g.length(&xs) > g.length(x) {
                out.add_assign_term(xs, c);
            } else {
                out.add_assign_term(xs, c);
                let corr = LaurentPoly::monomial(-1, 1).sub(&LaurentPoly::v());
                out.add_assign_term(x.clone(), &c.mul(&corr));
            }
        }
        out
    }

    /// Left multiplication by the generator `H_s`.
    pub fn mul_gen_left(&self, s: usize, a: &HeckeElt) -> HeckeElt {
        let g = self.group;
        let mut out = HeckeElt::zero();
        for (x, c) in &a.0 {
            let sx = g.compose(g.gen(s), x);
            if g.length(&sx) > g.length(x) {
                out.add_assign_term(sx, c);
            } else {
                out.add_assign_term(sx, c);
                let corr = LaurentPoly::monomial(-1, 1).sub(&LaurentPoly::v());
                out.add_assign_term(x.clone(), &c.mul(&corr));
            }
        }
        out
    }

    /// Product in the Hecke algebra; bilinear, associative, `H_e` is the unit.
    pub fn multiply(&self, a: &HeckeElt, b: &HeckeElt) -> HeckeElt {
        let g = self.group;
        let mut out = HeckeElt::zero();
        for (y, c) in &b.0 {
            let word = g.reduced_word(y);
            let mut acc = a.clone();
            for &s in &word {
                acc = self.mul_gen_right(&acc, s);
            }
            out.add_assign_scaled(&acc, c);
        }
        out
    }

    /// Image of `H_x` under the bar involution, memoized by reduced word:
    /// `bar(H_x) = bar(H_{x'}) * (H_s + (v - v^{-1}) H_e)` for `x = x' s`.
    fn bar_basis(&self, x: &AffineWeylElt) -> HeckeElt {
        if let Some(r) = self.bar_memo.borrow().get(x) {
            return r.clone();
        }
        let g = self.group;
        let result = if x.is_identity() {
            HeckeElt::basis(g.identity())
        } else {
            let s = (0..g.num_gens())
                .find(|&s| g.right_descent(x, s))
                .expect("descent exists");
            let xp = g.compose(x, g.gen(s));
            let prev = self.bar_basis(&xp);
            // right multiply by bar(H_s) = H_s + (v - v^{-1}) H_e
            let mut out = self.mul_gen_right(&prev, s);
            let corr = LaurentPoly::v().sub(&LaurentPoly::monomial(-1, 1));
            out.add_assign_scaled(&prev, &corr);
            out
        };
        self.bar_memo.borrow_mut().insert(x.clone(), result.clone());
        result
    }

    /// The bar involution on a Hecke element.
    pub fn bar(&self, a: &HeckeElt) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (x, c) in &a.0 {
            out.add_assign_scaled(&self.bar_basis(x), &c.bar());
        }
        out
    }

    /// The Kazhdan-Lusztig basis element `underline H_w`.
    pub fn kl_basis_element(&self, w: &AffineWeylElt) -> HeckeElt {
        if let Some(r) = self.kl_memo.borrow().get(w) {
            return r.clone();
        }
        let g = self.group;
        let result = if w.is_identity() {
            HeckeElt::basis(g.identity())
        } else {
            // Leftmost letter of the canonical reduced word is a left descent.
            let s = g.reduced_word(w)[0];
            let sw = g.compose(g.gen(s), w);
            let lower = self.kl_basis_element(&sw);
            // underline H_s * underline H_{sw} = (H_s + v H_e) * lower
            let mut c = self.mul_gen_left(s, &lower);
            c.add_assign_scaled(&lower, &LaurentPoly::v());
            // Strip constant terms at lower elements, longest first.
            loop {
                let mut targets: Vec<(AffineWeylElt, i64)> = c
                    .0
                    .iter()
                    .filter(|(x, poly)| *x != w && poly.coeff(0) != 0)
                    .map(|(x, poly)| (x.clone(), poly.coeff(0)))
                    .collect();
                if targets.is_empty() {
                    break;
                }
                targets.sort_by_key(|(x, _)| std::cmp::Reverse((g.length(x), x.clone())));
                let (x, m) = targets.into_iter().next().unwrap();
                let lower_kl = self.kl_basis_element(&x);
                let scale = LaurentPoly::monomial(0, -m);
                c.add_assign_scaled(&lower_kl, &scale);
            }
            c
        };
        self.kl_memo.borrow_mut().insert(w.clone(), result.clone());
        result
    }

    /// The polynomial `h_{x,w}`; zero unless `x <= w`.
    pub fn kl_poly(&self, x: &AffineWeylElt, w: &AffineWeylElt) -> LaurentPoly {
        self.kl_basis_element(w).coeff(x)
    }

    /// Coefficient of `v` in `h_{x,y}`.
    pub fn mu(&self, x: &AffineWeylElt, y: &AffineWeylElt) -> i64 {
        self.kl_poly(x, y).coeff(1)
    }

    /// Checks bar-invariance of `underline H_w` by direct recomputation.
    pub fn is_bar_invariant(&self, w: &AffineWeylElt) -> bool {
        let e = self.kl_basis_element(w);
        self.bar(&e) == e
    }

    /// Checks the degree condition: `h_{x,w} in v Z[v]` for `x != w`, and
    /// `h_{w,w} = 1`, non-negative coefficients and support inside `[e, w]`.
    pub fn check_kl_element(&self, w: &AffineWeylElt) -> bool {
        let e = self.kl_basis_element(w);
        for (x, poly) in &e.0 {
            if x == w {
                if poly != &LaurentPoly::one() {
                    return false;
                }
            } else {
                if !poly.in_v_z_v() {
                    return false;
                }
                if !self.group.bruhat_leq(x, w) {
                    return false;
                }
            }
            if poly.terms().any(|(_, c)| c < 0) {
                // Negative KL coefficients at this scale would indicate an
                // implementation bug, not new mathematics.
                return false;
            }
        }
        true
    }
}
