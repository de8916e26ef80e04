//! The affine Weyl group in the internally normalized (p = 1) model.
//!
//! Elements are pairs (finite part, root-lattice translation) stored as
//! integer matrices; reflection hyperplanes sit at integer levels
//! `<v, alpha^vee> = n`. Lengths are counted by separating hyperplanes
//! against the rational sample point `x0 = rho / h`, which lies in the
//! interior of the fundamental alcove. The prime `p` enters only through
//! the dot action.

use crate::rootdata::{Root, RootDatum, Weight};
use crate::{Error, Result};
use num::rational::Ratio;
use num::{One, Zero};
use std::cell::RefCell;
use std::collections::{HashMap, HashSet};

pub type Rat = Ratio<i64>;

/// Element of the affine Weyl group: `lambda -> mat(lambda) + C * trans`
/// on weight coordinates, with `trans` in simple-root coordinates.
#[derive(Debug, Clone, Eq)]
pub struct AffineWeylElt {
    rank: usize,
    /// Finite part acting on weight coordinates (row-major rank x rank).
    mat: Vec<i64>,
    /// The same finite part acting on simple-root coordinates.
    mat_rt: Vec<i64>,
    /// Translation in simple-root coordinates.
    trans: Vec<i64>,
}

impl PartialEq for AffineWeylElt {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat && self.trans == other.trans
    }
}

impl std::hash::Hash for AffineWeylElt {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mat.hash(state);
        self.trans.hash(state);
    }
}

impl PartialOrd for AffineWeylElt {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AffineWeylElt {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.mat, &self.trans).cmp(&(&other.mat, &other.trans))
    }
}

impl AffineWeylElt {
    pub fn is_identity(&self) -> bool {
        self.trans.iter().all(|&t| t == 0)
            && (0..self.rank).all(|i| {
                (0..self.rank).all(|j| self.mat[i * self.rank + j] == i64::from(i == j))
            })
    }

    pub fn translation_part(&self) -> &[i64] {
        &self.trans
    }

    pub fn is_translation(&self) -> bool {
        (0..self.rank)
            .all(|i| (0..self.rank).all(|j| self.mat[i * self.rank + j] == i64::from(i == j)))
    }
}

fn mat_mul(rank: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; rank * rank];
    for i in 0..rank {
        for k in 0..rank {
            let av = a[i * rank + k];
            if av == 0 {
                continue;
            }
            for j in 0..rank {
                out[i * rank + j] += av * b[k * rank + j];
            }
        }
    }
    out
}

fn mat_vec(rank: usize, a: &[i64], v: &[i64]) -> Vec<i64> {
    (0..rank)
        .map(|i| (0..rank).map(|j| a[i * rank + j] * v[j]).sum())
        .collect()
}

/// Integer matrix inverse for matrices of determinant +-1.
fn mat_inv(rank: usize, a: &[i64]) -> Vec<i64> {
    // Gauss-Jordan over the rationals, then clear denominators (all entries
    // come out integral because det = +-1).
    let mut m: Vec<Vec<Rat>> = (0..rank)
        .map(|i| {
            let mut row: Vec<Rat> = (0..rank).map(|j| Rat::from(a[i * rank + j])).collect();
            row.extend((0..rank).map(|j| Rat::from(i64::from(i == j))));
            row
        })
        .collect();
    for col in 0..rank {
        let piv = (col..rank)
            .find(|&r| !m[r][col].is_zero())
            .expect("invertible group matrix");
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..rank {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                for j in 0..2 * rank {
                    let sub = f * m[col][j];
                    m[r][j] -= sub;
                }
            }
        }
    }
    let mut out = vec![0i64; rank * rank];
    for i in 0..rank {
        for j in 0..rank {
            let e = m[i][rank + j];
            assert!(e.is_integer(), "non-integral inverse of a group matrix");
            out[i * rank + j] = e.to_integer();
        }
    }
    out
}

/// The affine Weyl group context: root datum, generators, and memo caches.
pub struct AffineWeyl {
    pub datum: RootDatum,
    /// Generators; index 0 is the affine reflection `s_{gamma,1}`, indices
    /// 1..=rank are the finite simple reflections.
    gens: Vec<AffineWeylElt>,
    /// Interior point of the fundamental alcove: rho / h, weight coordinates.
    x0: Vec<Rat>,
    len_cache: RefCell<HashMap<AffineWeylElt, usize>>,
    bruhat_cache: RefCell<HashMap<(AffineWeylElt, AffineWeylElt), bool>>,
}

/// An alcove `A_w = w(A+)`, carried by its group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alcove(pub AffineWeylElt);

/// The restricted box sets and the interval they generate.
#[derive(Debug, Clone)]
pub struct BoxSets {
    pub res_plus: Vec<AffineWeylElt>,
    pub res_minus: Vec<AffineWeylElt>,
    pub w_hat_zero: AffineWeylElt,
    pub circ: Vec<AffineWeylElt>,
    pub circ_plus: Vec<AffineWeylElt>,
}

/// One moment-graph style reflection edge: `upper = s_{alpha,n} * lower`.
#[derive(Debug, Clone)]
pub struct ReflectionEdge {
    pub lower: AffineWeylElt,
    pub upper: AffineWeylElt,
    pub root_index: usize,
    pub level: i64,
}

impl AffineWeyl {
    pub fn new(datum: RootDatum) -> Self {
        let rank = datum.rank;
        let h = datum.coxeter_number;
        let x0: Vec<Rat> = datum.rho.0.iter().map(|&c| Rat::new(c, h)).collect();

        let reflection = |root: &Root, n: i64| -> AffineWeylElt {
            let mut mat = vec![0i64; rank * rank];
            let mut mat_rt = vec![0i64; rank * rank];
            for k in 0..rank {
                for j in 0..rank {
                    mat[k * rank + j] =
                        i64::from(k == j) - root.weight_coords[k] * root.coroot_coords[j];
                    // <alpha_j, alpha^vee> = sum_i coroot_i * cartan[i][j]
                    let pair_j: i64 = (0..rank)
                        .map(|i| root.coroot_coords[i] * datum.cartan[i][j])
                        .sum();
                    mat_rt[k * rank + j] = i64::from(k == j) - pair_j * root.root_coords[k];
                }
            }
            let trans: Vec<i64> = root.root_coords.iter().map(|&c| n * c).collect();
            AffineWeylElt { rank, mat, mat_rt, trans }
        };

        let mut gens = Vec::with_capacity(rank + 1);
        gens.push(reflection(datum.highest_coroot(), 1));
        for i in 0..rank {
            gens.push(reflection(datum.simple_root(i), 0));
        }

        AffineWeyl {
            datum,
            gens,
            x0,
            len_cache: RefCell::new(HashMap::new()),
            bruhat_cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    pub fn identity(&self) -> AffineWeylElt {
        let rank = self.rank();
        let mut mat = vec![0i64; rank * rank];
        for i in 0..rank {
            mat[i * rank + i] = 1;
        }
        AffineWeylElt { rank, mat: mat.clone(), mat_rt: mat, trans: vec![0; rank] }
    }

    /// Number of generators, including the affine one.
    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    /// Generator by index: 0 is affine, 1..=rank finite.
    pub fn gen(&self, i: usize) -> &AffineWeylElt {
        &self.gens[i]
    }

    pub fn compose(&self, a: &AffineWeylElt, b: &AffineWeylElt) -> AffineWeylElt {
        let rank = self.rank();
        let mut trans = mat_vec(rank, &a.mat_rt, &b.trans);
        for (t, u) in trans.iter_mut().zip(&a.trans) {
            *t += u;
        }
        AffineWeylElt {
            rank,
            mat: mat_mul(rank, &a.mat, &b.mat),
            mat_rt: mat_mul(rank, &a.mat_rt, &b.mat_rt),
            trans,
        }
    }

    pub fn inverse(&self, a: &AffineWeylElt) -> AffineWeylElt {
        let rank = self.rank();
        let mat = mat_inv(rank, &a.mat);
        let mat_rt = mat_inv(rank, &a.mat_rt);
        let trans = mat_vec(rank, &mat_rt, &a.trans).iter().map(|&t| -t).collect();
        AffineWeylElt { rank, mat, mat_rt, trans }
    }

    /// The pure translation `t_eta`, with `eta` in simple-root coordinates.
    pub fn translation(&self, eta: &[i64]) -> AffineWeylElt {
        let mut e = self.identity();
        e.trans = eta.to_vec();
        e
    }

    /// Reflection `s_{alpha,n}` for the positive root at `root_index`.
    pub fn reflection(&self, root_index: usize, n: i64) -> AffineWeylElt {
        let rank = self.rank();
        let root = &self.datum.positive_roots[root_index];
        let mut mat = vec![0i64; rank * rank];
        let mut mat_rt = vec![0i64; rank * rank];
        for k in 0..rank {
            for j in 0..rank {
                mat[k * rank + j] =
                    i64::from(k == j) - root.weight_coords[k] * root.coroot_coords[j];
                let pair_j: i64 = (0..rank)
                    .map(|i| root.coroot_coords[i] * self.datum.cartan[i][j])
                    .sum();
                mat_rt[k * rank + j] = i64::from(k == j) - pair_j * root.root_coords[k];
            }
        }
        let trans = root.root_coords.iter().map(|&c| n * c).collect();
        AffineWeylElt { rank, mat, mat_rt, trans }
    }

    /// Image of a rational point (weight coordinates) under `w`.
    pub fn act_point(&self, w: &AffineWeylElt, pt: &[Rat]) -> Vec<Rat> {
        let rank = self.rank();
        (0..rank)
            .map(|i| {
                let lin: Rat = (0..rank)
                    .map(|j| Rat::from(w.mat[i * rank + j]) * pt[j])
                    .sum();
                // weight coordinates of the translation: Cartan * trans
                let tw: i64 = (0..rank)
                    .map(|j| self.datum.cartan[i][j] * w.trans[j])
                    .sum();
                lin + Rat::from(tw)
            })
            .collect()
    }

    /// The cached interior sample point of `A_w`, `w(x0)`.
    pub fn sample_point(&self, w: &AffineWeylElt) -> Vec<Rat> {
        self.act_point(w, &self.x0)
    }

    pub fn fundamental_point(&self) -> &[Rat] {
        &self.x0
    }

    fn pair_rat(&self, pt: &[Rat], coroot: &[i64]) -> Rat {
        pt.iter().zip(coroot).map(|(a, &b)| *a * Rat::from(b)).sum()
    }

    /// Coxeter length, counted as the number of hyperplanes `H_{alpha,n}`
    /// separating the fundamental alcove from `A_w`.
    pub fn length(&self, w: &AffineWeylElt) -> usize {
        if let Some(&l) = self.len_cache.borrow().get(w) {
            return l;
        }
        let pt = self.sample_point(w);
        let mut count = 0usize;
        for root in &self.datum.positive_roots {
            let t = self.pair_rat(&pt, &root.coroot_coords);
            debug_assert!(!t.is_integer(), "sample point on a hyperplane");
            count += t.floor().to_integer().unsigned_abs() as usize;
        }
        self.len_cache.borrow_mut().insert(w.clone(), count);
        count
    }

    pub fn right_descent(&self, w: &AffineWeylElt, s: usize) -> bool {
        self.length(&self.compose(w, &self.gens[s])) < self.length(w)
    }

    pub fn left_descent(&self, w: &AffineWeylElt, s: usize) -> bool {
        self.length(&self.compose(&self.gens[s], w)) < self.length(w)
    }

    /// Canonical reduced word (generator indices), built by stripping the
    /// smallest-index right descent.
    pub fn reduced_word(&self, w: &AffineWeylElt) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = w.clone();
        while !cur.is_identity() {
            let s = (0..self.gens.len())
                .find(|&s| self.right_descent(&cur, s))
                .expect("non-identity element has a descent");
            word.push(s);
            cur = self.compose(&cur, &self.gens[s]);
        }
        word.reverse();
        word
    }

    pub fn from_word(&self, word: &[usize]) -> AffineWeylElt {
        let mut cur = self.identity();
        for &s in word {
            cur = self.compose(&cur, &self.gens[s]);
        }
        cur
    }

    /// Renders an element as a space-separated reduced word, `e` for the identity.
    pub fn word_string(&self, w: &AffineWeylElt) -> String {
        let word = self.reduced_word(w);
        if word.is_empty() {
            "e".to_string()
        } else {
            word.iter()
                .map(|s| format!("s{s}"))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    /// Parses `e` or a space-separated word in `s0..s<rank>`.
    pub fn parse_word(&self, text: &str) -> Result<AffineWeylElt> {
        let text = text.trim();
        if text.is_empty() || text == "e" {
            return Ok(self.identity());
        }
        let mut cur = self.identity();
        for tok in text.split_whitespace() {
            let idx: usize = tok
                .strip_prefix('s')
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("bad generator token `{tok}`"))
                })?;
            if idx >= self.gens.len() {
                return Err(Error::InvalidArgument(format!(
                    "generator `{tok}` out of range for rank {}",
                    self.rank()
                )));
            }
            cur = self.compose(&cur, &self.gens[idx]);
        }
        Ok(cur)
    }

    /// Bruhat order, by the descent recursion.
    pub fn bruhat_leq(&self, x: &AffineWeylElt, w: &AffineWeylElt) -> bool {
        if x == w {
            return true;
        }
        let (lx, lw) = (self.length(x), self.length(w));
        if lx >= lw {
            return false;
        }
        let key = (x.clone(), w.clone());
        if let Some(&r) = self.bruhat_cache.borrow().get(&key) {
            return r;
        }
        let s = (0..self.gens.len())
            .find(|&s| self.left_descent(w, s))
            .expect("non-identity element has a left descent");
        let sw = self.compose(&self.gens[s], w);
        let sx = self.compose(&self.gens[s], x);
        let xm = if self.length(&sx) < lx { sx } else { x.clone() };
        let r = self.bruhat_leq(&xm, &sw);
        self.bruhat_cache.borrow_mut().insert(key, r);
        r
    }

    /// All elements of length at most `max_len`, sorted canonically.
    pub fn ball(&self, max_len: usize) -> Vec<AffineWeylElt> {
        let mut seen: HashSet<AffineWeylElt> = HashSet::new();
        let e = self.identity();
        seen.insert(e.clone());
        let mut frontier = vec![e];
        for depth in 1..=max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for g in &self.gens {
                    let n = self.compose(w, g);
                    if !seen.contains(&n) {
                        debug_assert_eq!(self.length(&n), depth);
                        seen.insert(n.clone());
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort_by(|a, b| {
            (self.length(a), a.clone()).cmp(&(self.length(b), b.clone()))
        });
        out
    }

    /// The Bruhat interval `{x : x <= w}`, sorted canonically.
    pub fn lower_interval(&self, w: &AffineWeylElt) -> Vec<AffineWeylElt> {
        self.ball(self.length(w))
            .into_iter()
            .filter(|x| self.bruhat_leq(x, w))
            .collect()
    }

    /// The p-scaled dot action `w . lambda = wbar(lambda + rho) + p eta - rho`.
    pub fn dot_action(&self, w: &AffineWeylElt, lambda: &Weight, p: i64) -> Weight {
        let rank = self.rank();
        let shifted: Vec<i64> = lambda.0.iter().zip(&self.datum.rho.0).map(|(a, b)| a + b).collect();
        let moved = mat_vec(rank, &w.mat, &shifted);
        Weight(
            (0..rank)
                .map(|i| {
                    let tw: i64 = (0..rank)
                        .map(|j| self.datum.cartan[i][j] * w.trans[j])
                        .sum();
                    moved[i] + p * tw - self.datum.rho.0[i]
                })
                .collect(),
        )
    }

    fn in_box(&self, pt: &[Rat]) -> bool {
        self.datum.simple_indices.iter().all(|&si| {
            let t = self.pair_rat(pt, &self.datum.positive_roots[si].coroot_coords);
            t > Rat::zero() && t < Rat::one()
        })
    }

    pub(crate) fn in_dominant_cone(&self, pt: &[Rat]) -> bool {
        self.datum.simple_indices.iter().all(|&si| {
            self.pair_rat(pt, &self.datum.positive_roots[si].coroot_coords) > Rat::zero()
        })
    }

    /// Longest element of the finite Weyl group, as an affine element.
    pub fn longest_finite(&self) -> AffineWeylElt {
        let mut seen: HashSet<AffineWeylElt> = HashSet::new();
        let e = self.identity();
        seen.insert(e.clone());
        let mut frontier = vec![e];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for g in &self.gens[1..] {
                    let n = self.compose(w, g);
                    if !seen.contains(&n) {
                        seen.insert(n.clone());
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        seen.into_iter()
            .max_by_key(|w| (self.length(w), std::cmp::Reverse(w.clone())))
            .expect("finite Weyl group nonempty")
    }

    /// The full finite Weyl group with lengths, sorted canonically.
    pub fn finite_weyl_group(&self) -> Vec<(AffineWeylElt, usize)> {
        let mut seen: HashSet<AffineWeylElt> = HashSet::new();
        let e = self.identity();
        seen.insert(e.clone());
        let mut frontier = vec![e];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for g in &self.gens[1..] {
                    let n = self.compose(w, g);
                    if !seen.contains(&n) {
                        seen.insert(n.clone());
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<_> = seen.into_iter().map(|w| {
            let l = self.length(&w);
            (w, l)
        }).collect();
        out.sort_by(|a, b| (a.1, a.0.clone()).cmp(&(b.1, b.0.clone())));
        out
    }

    /// The restricted box sets. `res_plus` is computed p-independently as the
    /// alcoves inside the unit box `0 < <v, alpha^vee> < 1` for simple alpha;
    /// the box is convex, so a wall-crossing search from the fundamental
    /// alcove finds every alcove in it.
    pub fn box_sets(&self) -> Result<BoxSets> {
        let e = self.identity();
        let mut res_plus: HashSet<AffineWeylElt> = HashSet::new();
        res_plus.insert(e.clone());
        let mut frontier = vec![e];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for g in &self.gens {
                    let n = self.compose(w, g);
                    if !res_plus.contains(&n) && self.in_box(&self.sample_point(&n)) {
                        res_plus.insert(n.clone());
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        let mut res_plus: Vec<_> = res_plus.into_iter().collect();
        res_plus.sort_by(|a, b| (self.length(a), a.clone()).cmp(&(self.length(b), b.clone())));

        let w0 = self.longest_finite();
        let res_minus: Vec<_> = res_plus.iter().map(|w| self.compose(&w0, w)).collect();
        let max_len = res_minus.iter().map(|w| self.length(w)).max().unwrap();
        let longest: Vec<_> = res_minus
            .iter()
            .filter(|w| self.length(w) == max_len)
            .cloned()
            .collect();
        if longest.len() != 1 {
            return Err(Error::Internal(
                "antidominant restricted set has no unique longest element".into(),
            ));
        }
        let w_hat_zero = longest[0].clone();
        let circ = self.lower_interval(&w_hat_zero);
        let circ_plus: Vec<_> = circ
            .iter()
            .filter(|w| self.in_dominant_cone(&self.sample_point(w)))
            .cloned()
            .collect();
        let mut res_minus = res_minus;
        res_minus.sort_by(|a, b| (self.length(a), a.clone()).cmp(&(self.length(b), b.clone())));
        Ok(BoxSets { res_plus, res_minus, w_hat_zero, circ, circ_plus })
    }

    /// Every reflection edge with both endpoints in `{x : x <= bound_w}`.
    ///
    /// For each positive root the level window is derived from the extreme
    /// pairings of the interval's sample points, which makes the scan
    /// provably exhaustive.
    pub fn reflections_between(&self, bound_w: &AffineWeylElt) -> Vec<ReflectionEdge> {
        let interval = self.lower_interval(bound_w);
        let member: HashSet<&AffineWeylElt> = interval.iter().collect();
        let pts: Vec<Vec<Rat>> = interval.iter().map(|w| self.sample_point(w)).collect();
        let mut edges = Vec::new();
        for (ri, root) in self.datum.positive_roots.iter().enumerate() {
            let vals: Vec<Rat> = pts
                .iter()
                .map(|pt| self.pair_rat(pt, &root.coroot_coords))
                .collect();
            let tmin = *vals.iter().min().unwrap();
            let tmax = *vals.iter().max().unwrap();
            for (x, &t) in interval.iter().zip(&vals) {
                // 2n - t must land in [tmin, tmax]
                let lo = ((tmin + t) / Rat::from(2)).ceil().to_integer();
                let hi = ((tmax + t) / Rat::from(2)).floor().to_integer();
                for n in lo..=hi {
                    let refl = self.reflection(ri, n);
                    let y = self.compose(&refl, x);
                    if self.length(&y) > self.length(x) && member.contains(&y) {
                        edges.push(ReflectionEdge {
                            lower: x.clone(),
                            upper: y,
                            root_index: ri,
                            level: n,
                        });
                    }
                }
            }
        }
        edges.sort_by(|a, b| {
            (self.length(&a.lower), &a.lower, self.length(&a.upper), &a.upper, a.root_index)
                .cmp(&(self.length(&b.lower), &b.lower, self.length(&b.upper), &b.upper, b.root_index))
        });
        edges
    }

    /// Alcove containing a regular rational point, if the point is regular.
    pub fn alcove_of_point(&self, pt: &[Rat]) -> Option<AffineWeylElt> {
        // Walk from A+ towards the point: repeatedly cross the wall of the
        // current alcove that separates it from the target.
        for root in &self.datum.positive_roots {
            if self.pair_rat(pt, &root.coroot_coords).is_integer() {
                return None;
            }
        }
        let mut cur = self.identity();
        loop {
            let cpt = self.sample_point(&cur);
            let mut crossed = false;
            for g in &self.gens {
                let cand = self.compose(&cur, g);
                // The wall between A_cur and A_cand; cross it if that
                // strictly reduces the number of separating hyperplanes.
                if self.separations(&self.sample_point(&cand), pt)
                    < self.separations(&cpt, pt)
                {
                    cur = cand;
                    crossed = true;
                    break;
                }
            }
            if !crossed {
                return Some(cur);
            }
        }
    }

    /// Number of hyperplanes separating two regular points.
    pub fn separations(&self, a: &[Rat], b: &[Rat]) -> usize {
        let mut count = 0usize;
        for root in &self.datum.positive_roots {
            let ta = self.pair_rat(a, &root.coroot_coords);
            let tb = self.pair_rat(b, &root.coroot_coords);
            count += (ta.floor().to_integer() - tb.floor().to_integer()).unsigned_abs() as usize;
        }
        count
    }
}
