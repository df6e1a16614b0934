//! Arithmetic in the finite-dimensional algebra `F_p[x] / I` for a
//! zero-dimensional ideal `I`.

use rustc_hash::FxHashMap;

use super::groebner::GroebnerBasis;
use super::matrix::Matrix;
use super::monomial::Monomial;
use super::poly::MultiPoly;
use crate::error::{Error, Result};

/// Monomials not divisible by any leading monomial of `gb`, in increasing
/// grevlex order. Fails unless every variable has a pure power among the
/// leading monomials.
pub fn standard_monomials(gb: &GroebnerBasis) -> Result<Vec<Monomial>> {
    let nvars = gb.nvars();
    if gb.is_unit() {
        return Ok(Vec::new());
    }
    let mut bounds = vec![u32::MAX; nvars];
    for lm in gb.leading_monomials() {
        if let Some(v) = lm.pure_power_var() {
            bounds[v] = bounds[v].min(lm.exponent(v));
        }
    }
    if bounds.iter().any(|&b| b == u32::MAX) {
        return Err(Error::NotZeroDimensional);
    }
    let lms: Vec<Monomial> = gb.leading_monomials().copied().collect();
    let mut out = Vec::new();
    // Depth-first over exponent vectors; divisibility is monotone so a
    // rejected monomial prunes its whole branch in the current variable.
    fn walk(
        var: usize,
        current: Monomial,
        bounds: &[u32],
        lms: &[Monomial],
        out: &mut Vec<Monomial>,
    ) {
        if var == bounds.len() {
            out.push(current);
            return;
        }
        let mut m = current;
        for e in 0..bounds[var] {
            m.set(var, e);
            if lms.iter().any(|l| l.divides(&m)) {
                break;
            }
            walk(var + 1, m, bounds, lms, out);
        }
    }
    walk(0, Monomial::one(), &bounds, &lms, &mut out);
    out.sort();
    Ok(out)
}

/// Matrix of multiplication by `x_{var+1}` on the standard monomial basis.
/// Column `c` holds the coordinates of `x * basis[c]`.
pub fn multiplication_matrix(
    gb: &GroebnerBasis,
    basis: &[Monomial],
    var: usize,
) -> Matrix {
    let f = gb.modulus();
    let n = basis.len();
    let index: FxHashMap<Monomial, usize> =
        basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let x = Monomial::var(var);
    let mut m = Matrix::zeros(n, n);
    for (c, b) in basis.iter().enumerate() {
        let prod = b.mul(&x);
        if let Some(&r) = index.get(&prod) {
            m[(r, c)] = 1;
            continue;
        }
        let p = MultiPoly::from_sorted_terms(f, gb.nvars(), vec![(prod, 1)]);
        for (t, coeff) in gb.normal_form(&p).terms() {
            let r = index[t];
            m[(r, c)] = *coeff;
        }
    }
    m
}

/// Matrix of multiplication by an arbitrary polynomial `g`.
pub fn multiplication_matrix_by(gb: &GroebnerBasis, basis: &[Monomial], g: &MultiPoly) -> Matrix {
    let n = basis.len();
    let index: FxHashMap<Monomial, usize> =
        basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut m = Matrix::zeros(n, n);
    for (c, b) in basis.iter().enumerate() {
        for (t, coeff) in gb.normal_form(&g.mul_term(b, 1)).terms() {
            m[(index[t], c)] = *coeff;
        }
    }
    m
}
