//! Alcove polynomial families: the w0-twisted h-polynomials, the generic
//! polynomials q_{A,B} obtained by translation stabilization, the order on
//! alcoves, the periodic polynomials p_{A,B} defined through the signed
//! inversion identity, and the Kato identity verifier.
//!
//! Alcoves are identified with group elements (A_w = w(A+)) throughout.

use crate::error::Error;
use crate::hecke::KlContext;
use crate::laurent::LaurentPoly;
use crate::weyl::{AffineWeyl, AffineWeylElt};
use crate::Result;
use std::collections::HashMap;

pub const DEFAULT_STABILIZATION_CAP: usize = 6;

pub struct PeriodicContext<'a> {
    pub group: &'a AffineWeyl,
    pub kl: &'a KlContext<'a>,
    pub cap: usize,
    w0: AffineWeylElt,
    two_rho_rt: Vec<i64>,
}

/// A finite set of alcoves closed enough for the window's solves; built
/// from a length ball around the fundamental alcove.
#[derive(Debug, Clone)]
pub struct AlcoveWindow {
    pub alcoves: Vec<AffineWeylElt>,
    pub radius: usize,
}

pub fn window_ball(group: &AffineWeyl, radius: usize) -> AlcoveWindow {
    AlcoveWindow { alcoves: group.ball(radius), radius }
}

#[derive(Debug, Clone)]
pub struct PeriodicTable {
    pub window: AlcoveWindow,
    /// q_tw[(b, a)] = q_{w0 A_b, w0 A_a} on window index pairs
    pub q_twisted: HashMap<(usize, usize), LaurentPoly>,
    /// p[(b, c)] = p_{A_b, A_c}
    pub p: HashMap<(usize, usize), LaurentPoly>,
    /// the solve order (a linear extension of the twisted generic order)
    pub order: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub mismatches: Vec<String>,
    pub notes: Vec<String>,
}

impl<'a> PeriodicContext<'a> {
    pub fn new(group: &'a AffineWeyl, kl: &'a KlContext<'a>) -> Self {
        let two_rho_rt: Vec<i64> = group.datum.positive_roots.iter().fold(
            vec![0i64; group.datum.rank],
            |mut acc, r| {
                for (a, &c) in acc.iter_mut().zip(&r.root_coords) {
                    *a += c;
                }
                acc
            },
        );
        PeriodicContext {
            group,
            kl,
            cap: DEFAULT_STABILIZATION_CAP,
            w0: group.longest_finite(),
            two_rho_rt,
        }
    }

    /// h_{A,B} = h_{w0 w_A, w0 w_B}.
    pub fn h_alcove(&self, a: &AffineWeylElt, b: &AffineWeylElt) -> LaurentPoly {
        let ta = self.group.compose(&self.w0, a);
        let tb = self.group.compose(&self.w0, b);
        self.kl.kl_poly(&ta, &tb)
    }

    fn translate(&self, m: usize, w: &AffineWeylElt) -> AffineWeylElt {
        let eta: Vec<i64> = self.two_rho_rt.iter().map(|&c| c * m as i64).collect();
        self.group.compose(&self.group.translation(&eta), w)
    }

    /// Smallest translate count putting the alcove strictly inside the
    /// dominant cone; shallow translates can agree by accident, so
    /// stabilization must not start before this.
    fn depth(&self, w: &AffineWeylElt) -> usize {
        (0..)
            .find(|&m| {
                self.group.in_dominant_cone(&self.group.sample_point(&self.translate(m, w)))
            })
            .unwrap()
    }

    fn stabilize<T: Eq + Clone>(
        &self,
        m0: usize,
        f: impl Fn(usize) -> T,
        pair: String,
    ) -> Result<(T, usize)> {
        let mut prev: Option<T> = None;
        for m in (m0 + 1)..=(m0 + 2 * self.cap) {
            let cur = f(m);
            if prev.as_ref() == Some(&cur) {
                return Ok((cur, m));
            }
            prev = Some(cur);
        }
        Err(Error::NoStabilization { pair, cap: 2 * self.cap })
    }

    /// q_{A,B}: the stabilized value of the alcove-reparametrized
    /// h_{t(A), t(B)} = h_{w0 w_{t(A)}, w0 w_{t(B)}} for deep dominant
    /// translates t.
    pub fn generic_poly(&self, a: &AffineWeylElt, b: &AffineWeylElt) -> Result<LaurentPoly> {
        let m0 = self.depth(a).max(self.depth(b));
        let (val, _m) = self.stabilize(
            m0,
            |m| {
                self.kl.kl_poly(
                    &self.group.compose(&self.w0, &self.translate(m, a)),
                    &self.group.compose(&self.w0, &self.translate(m, b)),
                )
            },
            format!("q({}, {})", self.group.word_string(a), self.group.word_string(b)),
        )?;
        Ok(val)
    }

    /// The generic order: A <= B iff deep translates are Bruhat comparable.
    pub fn generic_order_leq(&self, a: &AffineWeylElt, b: &AffineWeylElt) -> Result<bool> {
        let m0 = self.depth(a).max(self.depth(b));
        let (val, _m) = self.stabilize(
            m0,
            |m| self.group.bruhat_leq(&self.translate(m, a), &self.translate(m, b)),
            format!("order({}, {})", self.group.word_string(a), self.group.word_string(b)),
        )?;
        Ok(val)
    }

    fn sign(&self, a: &AffineWeylElt, b: &AffineWeylElt) -> i64 {
        if (self.group.length(a) + self.group.length(b)) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Solve the signed inversion identity
    /// sum_B (-1)^{d(A,B)} q_{w0 B, w0 A} p_{B,C} = delta_{A,C}
    /// on the window, then re-verify by substitution.
    pub fn periodic_table(&self, window: AlcoveWindow) -> Result<PeriodicTable> {
        let n = window.alcoves.len();
        let mut q_twisted: HashMap<(usize, usize), LaurentPoly> = HashMap::new();
        for b in 0..n {
            for a in 0..n {
                let tw_b = self.group.compose(&self.w0, &window.alcoves[b]);
                let tw_a = self.group.compose(&self.w0, &window.alcoves[a]);
                let q = self.generic_poly(&tw_b, &tw_a)?;
                if !q.is_zero() {
                    q_twisted.insert((b, a), q);
                }
            }
        }
        // topological order: b must precede a whenever q_{w0 b, w0 a} != 0
        let mut order: Vec<usize> = Vec::new();
        let mut placed = vec![false; n];
        while order.len() < n {
            let before = order.len();
            for a in 0..n {
                if placed[a] {
                    continue;
                }
                let ready = (0..n).all(|b| b == a || placed[b] || !q_twisted.contains_key(&(b, a)));
                if ready {
                    placed[a] = true;
                    order.push(a);
                }
            }
            if order.len() == before {
                return Err(Error::NonTriangular(
                    "twisted generic supports contain a cycle on the window".into(),
                ));
            }
        }
        for a in 0..n {
            let diag = q_twisted.get(&(a, a)).cloned().unwrap_or_else(LaurentPoly::zero);
            if diag != LaurentPoly::one() {
                return Err(Error::NonTriangular(format!(
                    "diagonal generic polynomial is {diag}, expected 1"
                )));
            }
        }
        // forward substitution per column C
        let mut p: HashMap<(usize, usize), LaurentPoly> = HashMap::new();
        for &c in &order {
            for &a in &order {
                let mut acc = if a == c { LaurentPoly::one() } else { LaurentPoly::zero() };
                for &b in &order {
                    if b == a {
                        continue;
                    }
                    if let (Some(q), Some(pb)) = (q_twisted.get(&(b, a)), p.get(&(b, c))) {
                        let s = self.sign(&window.alcoves[a], &window.alcoves[b]);
                        acc = acc.sub(&q.mul(pb).scale(s));
                    }
                }
                // the diagonal coefficient is (+1)*q_{w0 a, w0 a} = 1
                if !acc.is_zero() {
                    p.insert((a, c), acc);
                }
            }
        }
        // exact re-substitution
        for a in 0..n {
            for c in 0..n {
                let mut acc = LaurentPoly::zero();
                for b in 0..n {
                    if let (Some(q), Some(pb)) = (q_twisted.get(&(b, a)), p.get(&(b, c))) {
                        let s = self.sign(&window.alcoves[a], &window.alcoves[b]);
                        acc = acc.add(&q.mul(pb).scale(s));
                    }
                }
                let expect =
                    if a == c { LaurentPoly::one() } else { LaurentPoly::zero() };
                if acc != expect {
                    return Err(Error::Internal(format!(
                        "re-substitution failed at ({a}, {c}): got {acc}"
                    )));
                }
            }
        }
        Ok(PeriodicTable { window, q_twisted, p, order })
    }

    /// h_{w0 x, w0 w}(1) = p_{A_x, A_w}(1), checked on the pairs where the
    /// identity holds: x dominant in the lower interval of the antidominant
    /// box top and w in the restricted box. On arbitrary pairs the identity
    /// is false; already in rank one, x = e and w at position 2 give
    /// h(1) = 1 but p(1) = 0 since p-columns have exactly two terms.
    pub fn verify_h_equals_p_at_one(&self, table: &PeriodicTable) -> Result<CheckReport> {
        let boxes = self.group.box_sets()?;
        let index: HashMap<&AffineWeylElt, usize> =
            table.window.alcoves.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut mismatches = Vec::new();
        let mut notes = Vec::new();
        let mut compared = 0usize;
        for xw in &boxes.circ_plus {
            for ww in &boxes.res_plus {
                let (Some(&x), Some(&w)) = (index.get(xw), index.get(ww)) else {
                    notes.push(format!(
                        "pair ({}, {}) outside window, skipped",
                        self.group.word_string(xw),
                        self.group.word_string(ww)
                    ));
                    continue;
                };
                compared += 1;
                let h1 = self
                    .h_alcove(&table.window.alcoves[x], &table.window.alcoves[w])
                    .eval_at_one();
                let p1 = table
                    .p
                    .get(&(x, w))
                    .map(LaurentPoly::eval_at_one)
                    .unwrap_or(0);
                if h1 != p1 {
                    mismatches.push(format!(
                        "({}, {}): h(1) = {h1}, p(1) = {p1}",
                        self.group.word_string(xw),
                        self.group.word_string(ww)
                    ));
                }
            }
        }
        if compared == 0 {
            return Err(Error::WindowTooSmall(
                "no dominant-box pair fits inside the window".into(),
            ));
        }
        notes.push(format!("compared {compared} pairs"));
        Ok(CheckReport {
            name: "h-eq-p".into(),
            pass: mismatches.is_empty(),
            mismatches,
            notes,
        })
    }

    /// All ways of writing `target` (root coordinates) as a nonnegative
    /// combination of positive roots; returns the multiset of total part
    /// counts (sum of n_alpha per solution).
    fn vector_partitions(&self, target: &[i64]) -> Vec<usize> {
        fn rec(
            roots: &[Vec<i64>],
            idx: usize,
            remaining: &mut Vec<i64>,
            parts: usize,
            out: &mut Vec<usize>,
        ) {
            if remaining.iter().all(|&c| c == 0) {
                out.push(parts);
                // keep exploring further roots only if they could be zero;
                // (they cannot: positive roots are nonzero) so stop here
                return;
            }
            if idx == roots.len() {
                return;
            }
            // try n copies of roots[idx]
            let mut n = 0usize;
            loop {
                if n > 0 {
                    for (r, &c) in remaining.iter_mut().zip(&roots[idx]) {
                        *r -= c;
                    }
                    if remaining.iter().any(|&c| c < 0) {
                        // restore and stop raising n
                        for (r, &c) in remaining.iter_mut().zip(&roots[idx]) {
                            *r += c;
                        }
                        break;
                    }
                }
                rec(roots, idx + 1, remaining, parts + n, out);
                n += 1;
                if n > 64 {
                    break;
                }
            }
            // restore remaining
            for _ in 1..n {
                for (r, &c) in remaining.iter_mut().zip(&roots[idx]) {
                    *r += c;
                }
            }
        }
        if target.iter().any(|&c| c < 0) {
            return vec![];
        }
        let roots: Vec<Vec<i64>> = self
            .group
            .datum
            .positive_roots
            .iter()
            .map(|r| r.root_coords.clone())
            .collect();
        let mut out = Vec::new();
        rec(&roots, 0, &mut target.to_vec(), 0, &mut out);
        out
    }

    /// Coefficient of the alcove C in eta(A) where
    /// eta = prod_alpha (id + v^2 t_{-alpha} + v^4 t_{-2 alpha} + ...):
    /// the generating function of vector partitions of the offset.
    fn eta_kernel(&self, a: &AffineWeylElt, c: &AffineWeylElt) -> LaurentPoly {
        let diff = self.group.compose(c, &self.group.inverse(a));
        if !diff.is_translation() {
            return LaurentPoly::zero();
        }
        let mu: Vec<i64> = diff.translation_part().iter().map(|&x| -x).collect();
        let mut out = LaurentPoly::zero();
        for parts in self.vector_partitions(&mu) {
            out.add_assign_term(2 * parts as i64, 1);
        }
        out
    }

    /// Kato's identity eta(P_B) = Q_B, compared coefficientwise on the
    /// translates of supp(P_B) reachable within `radius` eta-steps.
    pub fn verify_kato(&self, table: &PeriodicTable, radius: usize) -> Result<CheckReport> {
        let n = table.window.alcoves.len();
        let max_len = table
            .window
            .alcoves
            .iter()
            .map(|w| self.group.length(w))
            .max()
            .unwrap_or(0);
        let index: HashMap<&AffineWeylElt, usize> =
            table.window.alcoves.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut mismatches = Vec::new();
        let mut notes = Vec::new();
        let mut compared_bases = 0usize;
        for b in 0..n {
            let supp: Vec<usize> =
                (0..n).filter(|&a| table.p.contains_key(&(a, b))).collect();
            // support completeness: a nonzero value on the window boundary
            // means the true support may leak out, so that base is skipped
            if supp
                .iter()
                .any(|&a| self.group.length(&table.window.alcoves[a]) == max_len)
            {
                notes.push(format!(
                    "B = {}: skipped, supp P_B touches the window boundary",
                    self.group.word_string(&table.window.alcoves[b])
                ));
                continue;
            }
            // candidate comparison alcoves: t_{-mu}(A) for A in supp with
            // at most `radius` total eta-steps
            let mut candidates: Vec<AffineWeylElt> = Vec::new();
            for &a in &supp {
                let mut frontier = vec![table.window.alcoves[a].clone()];
                for _ in 0..radius {
                    let mut next = Vec::new();
                    for w in &frontier {
                        for root in &self.group.datum.positive_roots {
                            let eta: Vec<i64> =
                                root.root_coords.iter().map(|&c| -c).collect();
                            let t = self.group.compose(&self.group.translation(&eta), w);
                            if !candidates.contains(&t) && !next.contains(&t) {
                                next.push(t);
                            }
                        }
                    }
                    candidates.extend(next.clone());
                    frontier = next;
                }
                if !candidates.contains(&table.window.alcoves[a]) {
                    candidates.push(table.window.alcoves[a].clone());
                }
            }
            if candidates.iter().any(|c| index.get(c).is_none()) {
                notes.push(format!(
                    "B = {}: skipped, eta-image leaves the window at radius {radius}",
                    self.group.word_string(&table.window.alcoves[b])
                ));
                continue;
            }
            compared_bases += 1;
            for c in &candidates {
                let mut lhs = LaurentPoly::zero();
                for &a in &supp {
                    let k = self.eta_kernel(&table.window.alcoves[a], c);
                    if !k.is_zero() {
                        lhs = lhs.add(&k.mul(&table.p[&(a, b)]));
                    }
                }
                let rhs = self.generic_poly(c, &table.window.alcoves[b])?;
                if lhs != rhs {
                    mismatches.push(format!(
                        "B = {}, C = {}: eta(P_B) = {lhs}, Q_B = {rhs}",
                        self.group.word_string(&table.window.alcoves[b]),
                        self.group.word_string(c)
                    ));
                }
            }
            notes.push(format!(
                "B = {}: compared {} alcoves",
                self.group.word_string(&table.window.alcoves[b]),
                candidates.len()
            ));
        }
        if compared_bases == 0 {
            return Err(Error::WindowTooSmall(format!(
                "no base alcove fits radius {radius} inside the window"
            )));
        }
        Ok(CheckReport { name: "kato".into(), pass: mismatches.is_empty(), mismatches, notes })
    }
}
