//! Moment graphs attached to an affine Weyl group interval, the GKM test,
//! and degree-truncated structure-algebra sections.
//!
//! Vertices are the elements of a Bruhat interval; an edge joins x < y
//! whenever y = s_{alpha,n} x, labeled by the affine coroot
//! alpha^vee_n = alpha^vee - n delta^vee in Z^{rank+1}, reduced into the
//! coefficient field.

use crate::error::Error;
use crate::linalg::kernel_basis;
use crate::mpoly::{monomials, MPoly, QuotientSubst};
use crate::scalar::{FieldSpec, Scalar};
use crate::weyl::{AffineWeyl, AffineWeylElt};
use crate::Result;
use serde_json::json;

#[derive(Debug, Clone)]
pub struct GraphEdge {
    pub lower: usize,
    pub upper: usize,
    /// integer label (coroot coordinates of alpha^vee, then -n)
    pub label_int: Vec<i64>,
    /// the label reduced into the coefficient field
    pub label: Vec<Scalar>,
}

/// A finite moment graph over k^{rank+1}. Carries the Bruhat order of its
/// vertex interval so downstream algorithms need no group handle.
#[derive(Debug, Clone)]
pub struct MomentGraph {
    pub field: FieldSpec,
    pub nvars: usize,
    pub vertices: Vec<AffineWeylElt>,
    pub words: Vec<String>,
    pub lengths: Vec<usize>,
    /// leq[i][j] iff vertices[i] <= vertices[j] in Bruhat order
    pub leq: Vec<Vec<bool>>,
    pub edges: Vec<GraphEdge>,
    pub type_label: String,
}

impl MomentGraph {
    pub fn vertex_index(&self, w: &AffineWeylElt) -> Option<usize> {
        self.vertices.iter().position(|v| v == w)
    }

    /// Edge indices incident to vertex `v`.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.lower == v || e.upper == v)
            .map(|(i, _)| i)
            .collect()
    }

    /// Edges whose lower endpoint is `v` (the set E_{delta v}).
    pub fn upward_edges(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.lower == v)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph moment {\n");
        for (i, w) in self.words.iter().enumerate() {
            s.push_str(&format!("  v{i} [label=\"{w}\"];\n"));
        }
        for e in &self.edges {
            s.push_str(&format!(
                "  v{} -- v{} [label=\"{:?}\"];\n",
                e.lower, e.upper, e.label_int
            ));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "schema_version": 1,
            "type": self.type_label,
            "field": self.field.to_string(),
            "vertices": self.words.iter().zip(&self.lengths)
                .map(|(w, &l)| json!({"word": w, "length": l}))
                .collect::<Vec<_>>(),
            "edges": self.edges.iter()
                .map(|e| json!({
                    "lower": self.words[e.lower],
                    "upper": self.words[e.upper],
                    "label": e.label_int,
                }))
                .collect::<Vec<_>>(),
        })
    }
}

/// The affine moment graph on the interval {x : x <= bound_w}.
pub fn build_affine_graph(
    group: &AffineWeyl,
    bound_w: &AffineWeylElt,
    field: FieldSpec,
) -> Result<MomentGraph> {
    let rank = group.datum.rank;
    let nvars = rank + 1;
    let vertices = group.lower_interval(bound_w);
    let words: Vec<String> = vertices.iter().map(|w| group.word_string(w)).collect();
    let lengths: Vec<usize> = vertices.iter().map(|w| group.length(w)).collect();
    let leq: Vec<Vec<bool>> = vertices
        .iter()
        .map(|x| vertices.iter().map(|y| group.bruhat_leq(x, y)).collect())
        .collect();
    let mut edges = Vec::new();
    let mut seen_pairs = std::collections::HashSet::new();
    for re in group.reflections_between(bound_w) {
        let lower = vertices.iter().position(|v| *v == re.lower).unwrap();
        let upper = vertices.iter().position(|v| *v == re.upper).unwrap();
        if !seen_pairs.insert((lower, upper)) {
            return Err(Error::Internal(format!(
                "double edge between {} and {}",
                words[lower], words[upper]
            )));
        }
        debug_assert!(leq[lower][upper]);
        let mut label_int: Vec<i64> =
            group.datum.positive_roots[re.root_index].coroot_coords.clone();
        label_int.push(-re.level);
        let label: Vec<Scalar> = label_int.iter().map(|&c| field.from_i64(c)).collect();
        if label.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroLabel(format!(
                "{} -- {} label {:?} over {}",
                words[lower], words[upper], label_int, field
            )));
        }
        edges.push(GraphEdge { lower, upper, label_int, label });
    }
    Ok(MomentGraph {
        field,
        nvars,
        vertices,
        words,
        lengths,
        leq,
        edges,
        type_label: group.datum.label.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkmWitness {
    pub vertex: String,
    pub label1: Vec<i64>,
    pub label2: Vec<i64>,
}

#[derive(Debug, Clone)]
pub struct GkmReport {
    pub pass: bool,
    pub witness: Option<GkmWitness>,
}

/// Pairwise linear independence of incident labels at every vertex,
/// decided by 2x2 minors over the coefficient field.
pub fn gkm_check(g: &MomentGraph) -> GkmReport {
    for v in 0..g.vertices.len() {
        let inc = g.incident(v);
        for (a, &ei) in inc.iter().enumerate() {
            for &ej in &inc[a + 1..] {
                let l1 = &g.edges[ei].label;
                let l2 = &g.edges[ej].label;
                let dependent = (0..g.nvars).all(|i| {
                    (i + 1..g.nvars).all(|j| {
                        l1[i].mul(&l2[j]).sub(&l1[j].mul(&l2[i])).is_zero()
                    })
                });
                if dependent {
                    return GkmReport {
                        pass: false,
                        witness: Some(GkmWitness {
                            vertex: g.words[v].clone(),
                            label1: g.edges[ei].label_int.clone(),
                            label2: g.edges[ej].label_int.clone(),
                        }),
                    };
                }
            }
        }
    }
    GkmReport { pass: true, witness: None }
}

/// Per-degree bases of the structure algebra (trivial stalks S at each
/// vertex), computed as exact kernels of the edge-congruence maps.
#[derive(Debug, Clone)]
pub struct SectionSpace {
    pub degree_bound: u32,
    /// (internal degree, basis vectors); coordinates run over
    /// vertex-major, then monomials of the matching variable-degree in
    /// lexicographic order.
    pub per_degree: Vec<(u32, Vec<Vec<Scalar>>)>,
}

impl SectionSpace {
    pub fn dim(&self, degree: u32) -> Option<usize> {
        self.per_degree.iter().find(|(d, _)| *d == degree).map(|(_, b)| b.len())
    }
}

/// Sections of the constant sheaf S over `vertex_subset`, degree by degree
/// up to the (even) bound.
pub fn sections(
    g: &MomentGraph,
    vertex_subset: &[usize],
    degree_bound: u32,
) -> Result<SectionSpace> {
    if degree_bound % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "degree bound {degree_bound} must be even"
        )));
    }
    let field = g.field;
    let nvars = g.nvars;
    let in_subset: Vec<Option<usize>> = {
        let mut v = vec![None; g.vertices.len()];
        for (slot, &vi) in vertex_subset.iter().enumerate() {
            v[vi] = Some(slot);
        }
        v
    };
    let inner_edges: Vec<&GraphEdge> = g
        .edges
        .iter()
        .filter(|e| in_subset[e.lower].is_some() && in_subset[e.upper].is_some())
        .collect();
    let mut per_degree = Vec::new();
    for m in 0..=(degree_bound / 2) {
        let mons = monomials(nvars, m as u16);
        let ncoords = mons.len();
        let ncols = vertex_subset.len() * ncoords;
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for e in &inner_edges {
            let subst = QuotientSubst::new(&e.label).ok_or_else(|| {
                Error::ZeroLabel(format!(
                    "{} -- {} label {:?} over {}",
                    g.words[e.lower], g.words[e.upper], e.label_int, field
                ))
            })?;
            // quotient coordinates: monomials omitting the eliminated var
            let qmons: Vec<&Vec<u16>> =
                mons.iter().filter(|mo| mo[subst.eliminated] == 0).collect();
            let qindex: std::collections::HashMap<&Vec<u16>, usize> =
                qmons.iter().enumerate().map(|(i, m)| (*m, i)).collect();
            // images of each source monomial at the two endpoints
            let lo = in_subset[e.lower].unwrap();
            let hi = in_subset[e.upper].unwrap();
            let mut block = vec![vec![field.zero(); ncols]; qmons.len()];
            for (mi, mon) in mons.iter().enumerate() {
                let mut p = MPoly::zero(nvars);
                p.add_term(mon.clone(), field.one());
                let img = subst.apply(&p);
                for (em, c) in &img.terms {
                    let qi = qindex[em];
                    let col_lo = lo * ncoords + mi;
                    let col_hi = hi * ncoords + mi;
                    block[qi][col_lo] = block[qi][col_lo].add(c);
                    block[qi][col_hi] = block[qi][col_hi].sub(c);
                }
            }
            rows.extend(block);
        }
        let basis = kernel_basis(field, ncols, &rows);
        // re-verify every congruence exactly
        for b in &basis {
            for r in &rows {
                if !crate::linalg::dot_is_zero(r, b) {
                    return Err(Error::Internal("section fails a congruence".into()));
                }
            }
        }
        per_degree.push((2 * m, basis));
    }
    Ok(SectionSpace { degree_bound, per_degree })
}
