//! Finite root-system data in exact integer coordinates.
//!
//! Weights live in fundamental-weight coordinates and coroots in
//! simple-coroot coordinates, so the pairing between them is a plain dot
//! product. Roots additionally carry their simple-root coordinates, which
//! is the lattice the affine Weyl group translates by.

use crate::{Error, Result};
use serde::Serialize;

/// Integer weight in fundamental-weight coordinates (length = rank).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: i64) -> Weight {
        Weight(self.0.iter().map(|a| c * a).collect())
    }
}

/// A positive root together with all three coordinate systems we use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Root {
    /// Coordinates in the simple-root basis.
    pub root_coords: Vec<i64>,
    /// Coordinates in the fundamental-weight basis.
    pub weight_coords: Vec<i64>,
    /// Coordinates of the coroot in the simple-coroot basis.
    pub coroot_coords: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.root_coords.iter().sum()
    }

    pub fn coroot_height(&self) -> i64 {
        self.coroot_coords.iter().sum()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RootDatum {
    pub label: String,
    pub rank: usize,
    /// `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots, sorted by (height, lexicographic root coordinates).
    pub positive_roots: Vec<Root>,
    /// Indices into `positive_roots` of the simple roots.
    pub simple_indices: Vec<usize>,
    /// Half-sum of positive roots; equals (1,...,1) in weight coordinates.
    pub rho: Weight,
    /// Index into `positive_roots` of the root whose coroot is the highest coroot.
    pub highest_coroot_index: usize,
    pub coxeter_number: i64,
}

fn cartan_matrix(label: &str) -> Result<Vec<Vec<i64>>> {
    // cartan[i][j] = <alpha_j, alpha_i^vee>
    let m = |rows: &[&[i64]]| rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
    Ok(match label {
        "A1" => m(&[&[2]]),
        "A2" => m(&[&[2, -1], &[-1, 2]]),
        "A3" => m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]),
        "A4" => m(&[
            &[2, -1, 0, 0],
            &[-1, 2, -1, 0],
            &[0, -1, 2, -1],
            &[0, 0, -1, 2],
        ]),
        // B_n: alpha_n is the short simple root.
        "B2" => m(&[&[2, -1], &[-2, 2]]),
        "B3" => m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -2, 2]]),
        "B4" => m(&[
            &[2, -1, 0, 0],
            &[-1, 2, -1, 0],
            &[0, -1, 2, -1],
            &[0, 0, -2, 2],
        ]),
        // C_n: alpha_n is the long simple root.
        "C3" => m(&[&[2, -1, 0], &[-1, 2, -2], &[0, -1, 2]]),
        "C4" => m(&[
            &[2, -1, 0, 0],
            &[-1, 2, -1, 0],
            &[0, -1, 2, -2],
            &[0, 0, -1, 2],
        ]),
        "D4" => m(&[
            &[2, -1, 0, 0],
            &[-1, 2, -1, -1],
            &[0, -1, 2, 0],
            &[0, -1, 0, 2],
        ]),
        "F4" => m(&[
            &[2, -1, 0, 0],
            &[-1, 2, -1, 0],
            &[0, -2, 2, -1],
            &[0, 0, -1, 2],
        ]),
        "G2" => m(&[&[2, -1], &[-3, 2]]),
        other => return Err(Error::UnknownType(other.to_string())),
    })
}

/// Builds the root datum for one of the supported finite types.
///
/// Positive roots are enumerated by reflection closure of the simple roots;
/// the enumeration is deterministic and the datum immutable afterwards.
pub fn build_root_datum(label: &str) -> Result<RootDatum> {
    let cartan = cartan_matrix(label)?;
    let rank = cartan.len();

    // Closure of the simple roots under simple reflections, tracked in the
    // simple-root basis for the root and the simple-coroot basis for the
    // coroot. s_i acts on root coords by modifying row i and on coroot
    // coords by the transpose rule.
    let mut all: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    for i in 0..rank {
        let mut rc = vec![0; rank];
        rc[i] = 1;
        let mut cc = vec![0; rank];
        cc[i] = 1;
        all.push((rc, cc));
    }
    let mut frontier = all.clone();
    let cap = 1 << 12; // any finite type of rank <= 4 has far fewer roots
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (rc, cc) in &frontier {
            for i in 0..rank {
                let mut nrc = rc.clone();
                nrc[i] = rc[i] - (0..rank).map(|j| cartan[i][j] * rc[j]).sum::<i64>();
                let mut ncc = cc.clone();
                ncc[i] = cc[i] - (0..rank).map(|j| cartan[j][i] * cc[j]).sum::<i64>();
                let cand = (nrc, ncc);
                if !all.contains(&cand) {
                    all.push(cand.clone());
                    next.push(cand);
                }
            }
        }
        if all.len() > cap {
            return Err(Error::InvalidArgument(format!(
                "Cartan matrix for `{label}` is not of finite type"
            )));
        }
        frontier = next;
    }

    let mut positives: Vec<(Vec<i64>, Vec<i64>)> = all
        .into_iter()
        .filter(|(rc, _)| rc.iter().all(|&c| c >= 0))
        .collect();
    positives.sort_by_key(|(rc, _)| (rc.iter().sum::<i64>(), rc.clone()));

    let weight_coords = |rc: &[i64]| -> Vec<i64> {
        (0..rank)
            .map(|k| (0..rank).map(|j| cartan[k][j] * rc[j]).sum())
            .collect()
    };
    let positive_roots: Vec<Root> = positives
        .iter()
        .map(|(rc, cc)| Root {
            root_coords: rc.clone(),
            weight_coords: weight_coords(rc),
            coroot_coords: cc.clone(),
        })
        .collect();

    let simple_indices: Vec<usize> = (0..rank)
        .map(|i| {
            positive_roots
                .iter()
                .position(|r| {
                    r.root_coords.iter().enumerate().all(|(j, &c)| c == i64::from(j == i))
                })
                .expect("simple root present in closure")
        })
        .collect();

    let rho = Weight(vec![1; rank]);
    let coxeter_number = positive_roots
        .iter()
        .map(|r| r.coroot_height())
        .max()
        .expect("nonempty root system")
        + 1;

    // Highest coroot: the unique coroot maximal in dominance order.
    let mut best: Option<usize> = None;
    for (i, r) in positive_roots.iter().enumerate() {
        if best.map_or(true, |b| r.coroot_height() > positive_roots[b].coroot_height()) {
            best = Some(i);
        }
    }
    let hc = best.expect("nonempty root system");
    for r in &positive_roots {
        let diff: Vec<i64> = positive_roots[hc]
            .coroot_coords
            .iter()
            .zip(&r.coroot_coords)
            .map(|(a, b)| a - b)
            .collect();
        if diff.iter().any(|&d| d < 0) {
            return Err(Error::Internal(format!(
                "highest coroot not dominant-maximal in type {label}"
            )));
        }
    }

    let datum = RootDatum {
        label: label.to_string(),
        rank,
        cartan,
        positive_roots,
        simple_indices,
        rho,
        highest_coroot_index: hc,
        coxeter_number,
    };
    datum.check_invariants()?;
    Ok(datum)
}

impl RootDatum {
    fn check_invariants(&self) -> Result<()> {
        for i in 0..self.rank {
            if self.cartan[i][i] != 2 {
                return Err(Error::Internal("Cartan diagonal != 2".into()));
            }
            for j in 0..self.rank {
                if i != j && self.cartan[i][j] > 0 {
                    return Err(Error::Internal("positive off-diagonal Cartan entry".into()));
                }
            }
        }
        for &si in &self.simple_indices {
            if pairing(&self.rho, &self.positive_roots[si].coroot_coords)? != 1 {
                return Err(Error::Internal("<rho, alpha^vee> != 1 for simple alpha".into()));
            }
        }
        let n_pos = self.positive_roots.len() as i64;
        if 2 * n_pos != self.coxeter_number * self.rank as i64 {
            return Err(Error::Internal(format!(
                "|R+| = {} inconsistent with h = {} in type {}",
                n_pos, self.coxeter_number, self.label
            )));
        }
        Ok(())
    }

    pub fn simple_root(&self, i: usize) -> &Root {
        &self.positive_roots[self.simple_indices[i]]
    }

    pub fn highest_coroot(&self) -> &Root {
        &self.positive_roots[self.highest_coroot_index]
    }

    /// Sum of all positive roots (= 2 rho), in simple-root coordinates.
    pub fn two_rho_root_coords(&self) -> Vec<i64> {
        let mut out = vec![0; self.rank];
        for r in &self.positive_roots {
            for (o, c) in out.iter_mut().zip(&r.root_coords) {
                *o += c;
            }
        }
        out
    }

    pub fn is_dominant(&self, lambda: &Weight) -> bool {
        lambda.0.iter().all(|&c| c >= 0)
    }
}

/// The natural pairing of a weight (fundamental-weight coordinates) with a
/// coroot (simple-coroot coordinates).
pub fn pairing(lambda: &Weight, coroot: &[i64]) -> Result<i64> {
    if lambda.0.len() != coroot.len() {
        return Err(Error::DimensionMismatch(format!(
            "weight has rank {}, coroot has rank {}",
            lambda.0.len(),
            coroot.len()
        )));
    }
    Ok(lambda.0.iter().zip(coroot).map(|(a, b)| a * b).sum())
}
