//! The Braden-MacPherson intersection sheaf on an affine moment graph,
//! built top-down by degree-truncated exact linear algebra.
//!
//! All degrees are internal degrees (the symmetric algebra's variables sit
//! in degree 2), so every module in sight lives in even degrees. A
//! generator of internal degree d contributes v^{-d} to the graded rank,
//! which makes the expected identity rk B(w)^x = v^{l(x)-l(w)} h_{x,w}
//! literal.

use crate::error::Error;
use crate::hecke::KlContext;
use crate::laurent::LaurentPoly;
use crate::linalg::{kernel_basis, RowSpace};
use crate::momentgraph::{build_affine_graph, gkm_check, MomentGraph};
use crate::mpoly::{monomials, MPoly, QuotientSubst};
use crate::scalar::{FieldSpec, Scalar};
use crate::weyl::{AffineWeyl, AffineWeylElt};
use crate::Result;
use rayon::prelude::*;

/// Graded free module, recorded as its multiset of generator degrees
/// (even, non-negative, internal grading).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedFree {
    pub gen_degrees: Vec<u32>,
}

impl GradedFree {
    pub fn rank_poly(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for &d in &self.gen_degrees {
            p.add_assign_term(-(d as i64), 1);
        }
        p
    }
}

/// Degree-bound policy: the per-vertex retained degree is
/// multiplier * 2 * ceil((l(w) - l(x) + 1) / 2).
#[derive(Debug, Clone, Copy)]
pub struct DegreePolicy {
    pub multiplier: u32,
}

impl Default for DegreePolicy {
    fn default() -> Self {
        DegreePolicy { multiplier: 1 }
    }
}

/// Which linear extension of decreasing Bruhat order to process; the result
/// must not depend on it (uniqueness of the sheaf).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessingOrder {
    Standard,
    Reversed,
}

#[derive(Debug, Clone)]
struct VertexData {
    stalk: GradedFree,
    flagged: bool,
    /// rho[up-edge slot][own generator][upper-vertex generator]: the image
    /// polynomial in the edge quotient's representation (eliminated
    /// variable absent).
    rho: Vec<Vec<Vec<MPoly>>>,
}

#[derive(Debug)]
pub struct BMSheaf {
    pub graph: MomentGraph,
    pub stalks: Vec<GradedFree>,
    pub flagged: Vec<bool>,
    pub degree_bounds: Vec<u32>,
    pub top: usize,
    #[allow(dead_code)] // retained for inspection in debug builds
    data: Vec<VertexData>,
}

/// One element of the direct sum over the upward edges of a vertex:
/// per edge, per upper-vertex generator, a polynomial in the edge
/// quotient's representation.
type EdgeSumElt = Vec<Vec<MPoly>>;

fn degree_bound(policy: DegreePolicy, lw: usize, lx: usize) -> u32 {
    let k = (lw - lx + 1) as u32;
    policy.multiplier * 2 * k.div_ceil(2)
}

struct EdgeCtx {
    subst: QuotientSubst,
    /// quotient monomials by variable-degree: qmons[m] lists the degree-m
    /// exponent vectors omitting the eliminated variable
    qmons: Vec<Vec<Vec<u16>>>,
}

impl EdgeCtx {
    fn new(label: &[Scalar], max_vardeg: u16) -> Result<Self> {
        let subst = QuotientSubst::new(label)
            .ok_or_else(|| Error::ZeroLabel(format!("{label:?}")))?;
        let nvars = label.len();
        let qmons: Vec<Vec<Vec<u16>>> = (0..=max_vardeg)
            .map(|m| {
                monomials(nvars, m)
                    .into_iter()
                    .filter(|mo| mo[subst.eliminated] == 0)
                    .collect()
            })
            .collect();
        Ok(EdgeCtx { subst, qmons })
    }
}

/// Build the sheaf on a prepared moment graph. The graph must be the full
/// interval below its unique top vertex and must satisfy GKM.
pub fn build_bm_sheaf_on(
    graph: MomentGraph,
    policy: DegreePolicy,
    order: ProcessingOrder,
) -> Result<BMSheaf> {
    let rep = gkm_check(&graph);
    if !rep.pass {
        let w = rep.witness.unwrap();
        return Err(Error::GkmFailure(format!(
            "at vertex {} labels {:?} and {:?} are dependent over {}",
            w.vertex, w.label1, w.label2, graph.field
        )));
    }
    let n = graph.vertices.len();
    let top = (0..n)
        .find(|&t| (0..n).all(|x| graph.leq[x][t]))
        .ok_or_else(|| Error::Internal("graph has no top vertex".into()))?;
    let lw = graph.lengths[top];
    let field = graph.field;
    let nvars = graph.nvars;
    let max_bound = degree_bound(policy, lw, 0);
    let edge_ctx: Vec<EdgeCtx> = graph
        .edges
        .iter()
        .map(|e| EdgeCtx::new(&e.label, (max_bound / 2) as u16 + 1))
        .collect::<Result<_>>()?;
    let up_edges: Vec<Vec<usize>> = (0..n).map(|v| graph.upward_edges(v)).collect();

    let mut data: Vec<Option<VertexData>> = vec![None; n];
    data[top] = Some(VertexData {
        stalk: GradedFree { gen_degrees: vec![0] },
        flagged: false,
        rho: vec![],
    });

    // strata by decreasing length; vertices are sorted by (length, elt)
    let mut strata: Vec<Vec<usize>> = Vec::new();
    {
        let mut by_len: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..n {
            if v != top {
                by_len.entry(graph.lengths[v]).or_default().push(v);
            }
        }
        for (_, mut layer) in by_len.into_iter().rev() {
            if order == ProcessingOrder::Reversed {
                layer.reverse();
            }
            strata.push(layer);
        }
    }

    for layer in strata {
        let results: Vec<(usize, VertexData)> = layer
            .par_iter()
            .map(|&x| {
                let vd = process_vertex(
                    &graph, &edge_ctx, &up_edges, &data, x, lw, policy, field, nvars,
                )?;
                Ok((x, vd))
            })
            .collect::<Result<Vec<_>>>()?;
        for (x, vd) in results {
            data[x] = Some(vd);
        }
    }

    let data: Vec<VertexData> = data.into_iter().map(Option::unwrap).collect();
    Ok(BMSheaf {
        stalks: data.iter().map(|d| d.stalk.clone()).collect(),
        flagged: data.iter().map(|d| d.flagged).collect(),
        degree_bounds: (0..n)
            .map(|x| degree_bound(policy, lw, graph.lengths[x]))
            .collect(),
        top,
        data,
        graph,
    })
}

#[allow(clippy::too_many_arguments)]
fn process_vertex(
    graph: &MomentGraph,
    edge_ctx: &[EdgeCtx],
    up_edges: &[Vec<usize>],
    data: &[Option<VertexData>],
    x: usize,
    lw: usize,
    policy: DegreePolicy,
    field: FieldSpec,
    nvars: usize,
) -> Result<VertexData> {
    let n = graph.vertices.len();
    let dx = degree_bound(policy, lw, graph.lengths[x]);
    // the open upper set {y : y > x}
    let upper: Vec<usize> = (0..n).filter(|&y| y != x && graph.leq[x][y]).collect();
    let upper_slot: Vec<Option<usize>> = {
        let mut v = vec![None; n];
        for (s, &y) in upper.iter().enumerate() {
            v[y] = Some(s);
        }
        v
    };
    let mut flagged = upper.iter().any(|&y| data[y].as_ref().unwrap().flagged);
    // edges inside the upper set
    let inner: Vec<usize> = (0..graph.edges.len())
        .filter(|&ei| {
            let e = &graph.edges[ei];
            upper_slot[e.lower].is_some() && upper_slot[e.upper].is_some()
        })
        .collect();
    let my_up = &up_edges[x];

    let mut gen_degrees: Vec<u32> = Vec::new();
    let mut rho: Vec<Vec<Vec<MPoly>>> = vec![Vec::new(); my_up.len()];
    // projected basis of B^{delta x} per degree, kept as edge-sum elements
    let mut prev_proj: Vec<EdgeSumElt> = Vec::new();

    let mut d = 0u32;
    while d <= dx {
        // ---- unknown layout for Gamma({> x})_d ----
        // blocks of (vertex slot, generator, monomials)
        struct Block {
            y: usize,
            gen: usize,
            gen_deg: u32,
            mons: Vec<Vec<u16>>,
            offset: usize,
        }
        let mut blocks: Vec<Block> = Vec::new();
        let mut ncols = 0usize;
        for (s, &y) in upper.iter().enumerate() {
            let _ = s;
            let st = &data[y].as_ref().unwrap().stalk;
            for (gi, &gd) in st.gen_degrees.iter().enumerate() {
                if gd > d {
                    continue;
                }
                let mons = monomials(nvars, ((d - gd) / 2) as u16);
                let len = mons.len();
                blocks.push(Block { y, gen: gi, gen_deg: gd, mons, offset: ncols });
                ncols += len;
            }
        }
        let block_of = |y: usize, gen: usize| -> Option<&Block> {
            blocks.iter().find(|b| b.y == y && b.gen == gen)
        };

        // ---- congruence equations on inner edges ----
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for &ei in &inner {
            let e = &graph.edges[ei];
            let ctx = &edge_ctx[ei];
            let y1 = e.lower;
            let y2 = e.upper;
            let st2 = &data[y2].as_ref().unwrap().stalk;
            // equation coordinates: per generator g2 of B^{y2} with degree
            // <= d, quotient monomials of vardeg (d - deg g2)/2
            let mut eq_offsets: Vec<(usize, usize)> = Vec::new(); // (g2, offset)
            let mut neq = 0usize;
            for (g2, &gd2) in st2.gen_degrees.iter().enumerate() {
                if gd2 > d {
                    continue;
                }
                eq_offsets.push((g2, neq));
                neq += ctx.qmons[((d - gd2) / 2) as usize].len();
            }
            let qidx = |g2: usize, mon: &Vec<u16>, gd2: u32| -> usize {
                let base = eq_offsets.iter().find(|(g, _)| *g == g2).unwrap().1;
                let list = &ctx.qmons[((d - gd2) / 2) as usize];
                base + list.iter().position(|m| m == mon).unwrap()
            };
            let mut block_rows = vec![vec![field.zero(); ncols]; neq];
            // rho_{y2,E}: canonical quotient of B^{y2}
            for b in blocks.iter().filter(|b| b.y == y2) {
                for (mi, mon) in b.mons.iter().enumerate() {
                    let mut p = MPoly::zero(nvars);
                    p.add_term(mon.clone(), field.one());
                    let img = ctx.subst.apply(&p);
                    for (em, c) in &img.terms {
                        let r = qidx(b.gen, em, b.gen_deg);
                        let slot = &mut block_rows[r][b.offset + mi];
                        *slot = slot.sub(c); // minus: rho1(z) - rho2(z) = 0
                    }
                }
            }
            // rho_{y1,E}: recorded generator images
            let d1 = data[y1].as_ref().unwrap();
            let e_slot = up_edges[y1].iter().position(|&f| f == ei).unwrap();
            for b in blocks.iter().filter(|b| b.y == y1) {
                let images = &d1.rho[e_slot][b.gen]; // per g2: MPoly
                for (mi, mon) in b.mons.iter().enumerate() {
                    let mut p = MPoly::zero(nvars);
                    p.add_term(mon.clone(), field.one());
                    let mon_img = ctx.subst.apply(&p);
                    for (g2, base_img) in images.iter().enumerate() {
                        if base_img.is_zero() {
                            continue;
                        }
                        let gd2 = st2.gen_degrees[g2];
                        let prod = mon_img.mul(base_img);
                        for (em, c) in &prod.terms {
                            let r = qidx(g2, em, gd2);
                            let slot = &mut block_rows[r][b.offset + mi];
                            *slot = slot.add(c);
                        }
                    }
                }
            }
            rows.extend(block_rows);
        }
        let sections = kernel_basis(field, ncols, &rows);

        // ---- project to the upward-edge direct sum ----
        // coordinate layout of the projection space at degree d
        let mut proj_coords = 0usize;
        let mut proj_layout: Vec<(usize, Vec<(usize, u32, usize)>)> = Vec::new();
        // per up-edge slot: list of (g2, gd2, offset)
        for (slot, &ei) in my_up.iter().enumerate() {
            let e = &graph.edges[ei];
            let ctx = &edge_ctx[ei];
            let st2 = &data[e.upper].as_ref().unwrap().stalk;
            let mut comps = Vec::new();
            for (g2, &gd2) in st2.gen_degrees.iter().enumerate() {
                if gd2 > d {
                    continue;
                }
                comps.push((g2, gd2, proj_coords));
                proj_coords += ctx.qmons[((d - gd2) / 2) as usize].len();
            }
            proj_layout.push((slot, comps));
        }
        let to_coords = |elt: &EdgeSumElt| -> Vec<Scalar> {
            let mut v = vec![field.zero(); proj_coords];
            for (slot, comps) in &proj_layout {
                let ei = my_up[*slot];
                let ctx = &edge_ctx[ei];
                for &(g2, gd2, off) in comps {
                    let p = &elt[*slot][g2];
                    let list = &ctx.qmons[((d - gd2) / 2) as usize];
                    for (em, c) in &p.terms {
                        let k = list.iter().position(|m| m == em).unwrap();
                        v[off + k] = v[off + k].add(c);
                    }
                }
            }
            v
        };
        let project = |sec: &[Scalar]| -> EdgeSumElt {
            my_up
                .iter()
                .map(|&ei| {
                    let e = &graph.edges[ei];
                    let ctx = &edge_ctx[ei];
                    let y = e.upper;
                    let st = &data[y].as_ref().unwrap().stalk;
                    let mut comps = vec![MPoly::zero(nvars); st.gen_degrees.len()];
                    for b in blocks.iter().filter(|b| b.y == y) {
                        let mut p = MPoly::zero(nvars);
                        for (mi, mon) in b.mons.iter().enumerate() {
                            p.add_term(mon.clone(), sec[b.offset + mi].clone());
                        }
                        comps[b.gen] = comps[b.gen].add(&ctx.subst.apply(&p));
                    }
                    comps
                })
                .collect()
        };
        let _ = block_of;

        // span of V-hat * B^{delta x}_{d-2}
        let mut span = RowSpace::new(field, proj_coords);
        for prev in &prev_proj {
            for i in 0..nvars {
                let shifted: EdgeSumElt = my_up
                    .iter()
                    .enumerate()
                    .map(|(slot, &ei)| {
                        let ctx = &edge_ctx[ei];
                        let var = MPoly::var(nvars, i, field);
                        let var_img = ctx.subst.apply(&var);
                        prev[slot].iter().map(|p| p.mul(&var_img)).collect()
                    })
                    .collect();
                span.insert(to_coords(&shifted));
            }
        }

        // minimal generators in degree d: section images outside the span
        let mut proj_basis: Vec<EdgeSumElt> = Vec::new();
        for sec in &sections {
            let img = project(sec);
            let coords = to_coords(&img);
            let is_new = span.insert(coords);
            if is_new {
                gen_degrees.push(d);
                if d == dx {
                    flagged = true;
                }
                for (slot, comp) in img.iter().cloned().enumerate() {
                    rho[slot].push(comp);
                }
            }
            proj_basis.push(img);
        }
        // keep a spanning set of B^{delta x}_d for the next degree
        prev_proj = proj_basis;
        d += 2;
    }

    Ok(VertexData { stalk: GradedFree { gen_degrees }, flagged, rho })
}

/// Build the sheaf for the interval below `w` over the given field.
pub fn build_bm_sheaf(
    group: &AffineWeyl,
    w: &AffineWeylElt,
    field: FieldSpec,
    policy: DegreePolicy,
    order: ProcessingOrder,
) -> Result<BMSheaf> {
    let graph = build_affine_graph(group, w, field)?;
    build_bm_sheaf_on(graph, policy, order)
}

impl BMSheaf {
    pub fn graded_rank(&self, x: &AffineWeylElt) -> Result<LaurentPoly> {
        match self.graph.vertex_index(x) {
            None => Ok(LaurentPoly::zero()),
            Some(i) => {
                if self.flagged[i] {
                    return Err(Error::IndeterminateStalk(self.graph.words[i].clone()));
                }
                Ok(self.stalks[i].rank_poly())
            }
        }
    }

    pub fn any_flagged(&self) -> bool {
        self.flagged.iter().any(|&f| f)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyPair {
    pub x: String,
    pub got: LaurentPoly,
    pub expected: LaurentPoly,
    pub pass: bool,
    pub indeterminate: bool,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub w: String,
    pub field: String,
    pub pairs: Vec<VerifyPair>,
    pub pass: bool,
    pub indeterminate: bool,
}

/// Compare graded ranks of B(w) with v^{l(x)-l(w)} h_{x,w} for every
/// x <= w.
pub fn verify_momconj(
    group: &AffineWeyl,
    ctx: &KlContext,
    w: &AffineWeylElt,
    field: FieldSpec,
    policy: DegreePolicy,
) -> Result<VerifyReport> {
    let sheaf = build_bm_sheaf(group, w, field, policy, ProcessingOrder::Standard)?;
    let lw = group.length(w) as i64;
    let mut pairs = Vec::new();
    let mut pass = true;
    let mut indet = false;
    for (i, x) in sheaf.graph.vertices.iter().enumerate() {
        let expected = ctx.kl_poly(x, w).shift(sheaf.graph.lengths[i] as i64 - lw);
        if sheaf.flagged[i] {
            indet = true;
            pairs.push(VerifyPair {
                x: sheaf.graph.words[i].clone(),
                got: LaurentPoly::zero(),
                expected,
                pass: false,
                indeterminate: true,
            });
            continue;
        }
        let got = sheaf.stalks[i].rank_poly();
        let ok = got == expected;
        pass &= ok;
        pairs.push(VerifyPair {
            x: sheaf.graph.words[i].clone(),
            got,
            expected,
            pass: ok,
            indeterminate: false,
        });
    }
    Ok(VerifyReport {
        w: group.word_string(w),
        field: field.to_string(),
        pairs,
        pass: pass && !indet,
        indeterminate: indet,
    })
}

/// Check the biconditional: rk B(w)^x = 1 iff h_{x,w} is the extremal
/// monomial v^{l(w)-l(x)}.
pub fn verify_multiplicity_one(
    group: &AffineWeyl,
    ctx: &KlContext,
    w: &AffineWeylElt,
    field: FieldSpec,
    policy: DegreePolicy,
) -> Result<VerifyReport> {
    let sheaf = build_bm_sheaf(group, w, field, policy, ProcessingOrder::Standard)?;
    let lw = group.length(w) as i64;
    let mut pairs = Vec::new();
    let mut pass = true;
    let mut indet = false;
    for (i, x) in sheaf.graph.vertices.iter().enumerate() {
        let h = ctx.kl_poly(x, w);
        let monomial = h == LaurentPoly::monomial(lw - sheaf.graph.lengths[i] as i64, 1);
        if sheaf.flagged[i] {
            indet = true;
            pairs.push(VerifyPair {
                x: sheaf.graph.words[i].clone(),
                got: LaurentPoly::zero(),
                expected: h,
                pass: false,
                indeterminate: true,
            });
            continue;
        }
        let rank_one = sheaf.stalks[i].rank_poly() == LaurentPoly::one();
        let ok = rank_one == monomial;
        pass &= ok;
        pairs.push(VerifyPair {
            x: sheaf.graph.words[i].clone(),
            got: sheaf.stalks[i].rank_poly(),
            expected: h,
            pass: ok,
            indeterminate: false,
        });
    }
    Ok(VerifyReport {
        w: group.word_string(w),
        field: field.to_string(),
        pairs,
        pass: pass && !indet,
        indeterminate: indet,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::build_root_datum;

    fn group(label: &str) -> AffineWeyl {
        AffineWeyl::new(build_root_datum(label).unwrap())
    }

    #[test]
    fn top_stalk_is_free_of_rank_one() {
        let g = group("A2");
        let w = g.from_word(&[1, 2, 0]);
        let sheaf =
            build_bm_sheaf(&g, &w, FieldSpec::Q, DegreePolicy::default(), ProcessingOrder::Standard)
                .unwrap();
        assert_eq!(sheaf.stalks[sheaf.top].gen_degrees, vec![0]);
        assert_eq!(sheaf.graded_rank(&w).unwrap(), LaurentPoly::one());
        assert!(!sheaf.any_flagged());
    }

    #[test]
    fn a1_single_edge_stalk() {
        let g = group("A1");
        let s1 = g.gen(1).clone();
        let sheaf = build_bm_sheaf(
            &g,
            &s1,
            FieldSpec::Q,
            DegreePolicy::default(),
            ProcessingOrder::Standard,
        )
        .unwrap();
        let e = g.identity();
        assert_eq!(sheaf.graded_rank(&e).unwrap(), LaurentPoly::one());
        // off-interval stalk vanishes
        let s0 = g.gen(0).clone();
        assert_eq!(sheaf.graded_rank(&s0).unwrap(), LaurentPoly::zero());
    }

    #[test]
    fn a1_length3_all_rank_one_over_q() {
        let g = group("A1");
        let w = g.from_word(&[1, 0, 1]);
        let sheaf = build_bm_sheaf(
            &g,
            &w,
            FieldSpec::Q,
            DegreePolicy::default(),
            ProcessingOrder::Standard,
        )
        .unwrap();
        assert!(!sheaf.any_flagged());
        for x in &sheaf.graph.vertices {
            assert_eq!(sheaf.graded_rank(x).unwrap(), LaurentPoly::one());
        }
    }

    #[test]
    fn gkm_failure_is_an_error() {
        let g = group("A1");
        let w = g.from_word(&[1, 0, 1]);
        let err = build_bm_sheaf(
            &g,
            &w,
            FieldSpec::Fp(2),
            DegreePolicy::default(),
            ProcessingOrder::Standard,
        );
        assert!(matches!(err, Err(Error::GkmFailure(_))));
    }

    #[test]
    fn momconj_a2_small() {
        let g = group("A2");
        let ctx = KlContext::new(&g);
        let w = g.from_word(&[0, 1, 2]);
        let rep =
            verify_momconj(&g, &ctx, &w, FieldSpec::Q, DegreePolicy::default()).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn order_independence() {
        let g = group("A2");
        let w = g.from_word(&[0, 1, 2, 1]);
        let a = build_bm_sheaf(
            &g,
            &w,
            FieldSpec::Q,
            DegreePolicy::default(),
            ProcessingOrder::Standard,
        )
        .unwrap();
        let b = build_bm_sheaf(
            &g,
            &w,
            FieldSpec::Q,
            DegreePolicy::default(),
            ProcessingOrder::Reversed,
        )
        .unwrap();
        assert_eq!(a.stalks, b.stalks);
    }

    #[test]
    fn larger_degree_bound_is_stable() {
        let g = group("A1");
        let w = g.from_word(&[0, 1, 0]);
        let a = build_bm_sheaf(
            &g,
            &w,
            FieldSpec::Q,
            DegreePolicy::default(),
            ProcessingOrder::Standard,
        )
        .unwrap();
        let b = build_bm_sheaf(
            &g,
            &w,
            FieldSpec::Q,
            DegreePolicy { multiplier: 2 },
            ProcessingOrder::Standard,
        )
        .unwrap();
        assert_eq!(a.stalks, b.stalks);
    }

    #[test]
    fn mult_one_a1_f2_on_box_interval() {
        let g = group("A1");
        let ctx = KlContext::new(&g);
        let bs = g.box_sets().unwrap();
        let rep = verify_multiplicity_one(
            &g,
            &ctx,
            &bs.w_hat_zero,
            FieldSpec::Fp(2),
            DegreePolicy::default(),
        )
        .unwrap();
        assert!(rep.pass);
    }
}
