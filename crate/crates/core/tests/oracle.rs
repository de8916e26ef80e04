//! Cross-checks the library's KL computation against the independent oracle
//! in `common` and against the dihedral closed form.

mod common;

use common::KlOracle;
use mgw_core::hecke::KlContext;
use mgw_core::laurent::LaurentPoly;
use mgw_core::rootdata::build_root_datum;
use mgw_core::weyl::AffineWeyl;

fn group(label: &str) -> AffineWeyl {
    AffineWeyl::new(build_root_datum(label).unwrap())
}

#[test]
fn oracle_matches_library_a1() {
    let g = group("A1");
    let kl = KlContext::new(&g);
    let mut oracle = KlOracle::new(&g);
    for w in g.ball(7) {
        let lib = kl.kl_basis_element(&w);
        let ora = oracle.kl_element(&w);
        for x in g.lower_interval(&w) {
            assert_eq!(
                lib.coeff(&x),
                ora.get(&x).cloned().unwrap_or_else(LaurentPoly::zero),
                "h_{{{}, {}}} disagrees",
                g.word_string(&x),
                g.word_string(&w)
            );
        }
    }
}

#[test]
fn oracle_matches_library_a2() {
    let g = group("A2");
    let kl = KlContext::new(&g);
    let mut oracle = KlOracle::new(&g);
    for w in g.ball(5) {
        let lib = kl.kl_basis_element(&w);
        let ora = oracle.kl_element(&w);
        for x in g.lower_interval(&w) {
            assert_eq!(
                lib.coeff(&x),
                ora.get(&x).cloned().unwrap_or_else(LaurentPoly::zero),
                "h_{{{}, {}}} disagrees",
                g.word_string(&x),
                g.word_string(&w)
            );
        }
    }
}

#[test]
fn dihedral_closed_form() {
    // In the infinite dihedral group every h_{x,w} with x <= w is the pure
    // monomial v^{l(w) - l(x)}.
    let g = group("A1");
    let kl = KlContext::new(&g);
    let ball = g.ball(10);
    for w in &ball {
        for x in &ball {
            let h = kl.kl_poly(x, w);
            if g.bruhat_leq(x, w) {
                let d = (g.length(w) - g.length(x)) as i64;
                assert_eq!(h, LaurentPoly::monomial(d, 1));
            } else {
                assert!(h.is_zero());
            }
        }
    }
}

#[test]
fn oracle_dihedral_closed_form() {
    // The oracle itself reproduces the closed form, so the two independent
    // computations and the formula agree three ways.
    let g = group("A1");
    let mut oracle = KlOracle::new(&g);
    for w in g.ball(6) {
        let elt = oracle.kl_element(&w);
        for (x, h) in &elt {
            let d = (g.length(&w) - g.length(x)) as i64;
            assert_eq!(*h, LaurentPoly::monomial(d, 1));
        }
        // lower interval size: lengths 1..n-1 contribute two elements each,
        // plus the identity and w itself
        let n = g.length(&w);
        assert_eq!(elt.len(), if n == 0 { 1 } else { 2 * n });
    }
}
