use super::field::{FieldElem, PrimeModulus};
use super::upoly::UniPoly;

/// Dense row-major matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix, f: PrimeModulus) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = f.mul_add(out[(i, j)], a, other[(k, j)]);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, f: PrimeModulus) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self[(i, c)] != 0) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = f.inv(self[(r, c)]);
            for j in c..self.cols {
                self[(r, j)] = f.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                let factor = self[(i, c)];
                if i == r || factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for j in c..self.cols {
                    let v = self[(r, j)];
                    self[(i, j)] = f.mul_add(self[(i, j)], nf, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: PrimeModulus) -> usize {
        self.clone().rref(f).len()
    }

    pub fn det(&self, f: PrimeModulus) -> FieldElem {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| a[(i, c)] != 0) else {
                return 0;
            };
            if p != c {
                a.swap_rows(p, c);
                det = f.neg(det);
            }
            let pivot = a[(c, c)];
            det = f.mul(det, pivot);
            let inv = f.inv(pivot);
            for i in c + 1..n {
                let factor = f.mul(a[(i, c)], inv);
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for j in c..n {
                    let v = a[(c, j)];
                    a[(i, j)] = f.mul_add(a[(i, j)], nf, v);
                }
            }
        }
        det
    }

    /// Basis of the right kernel, one column vector per returned `Vec`.
    pub fn nullspace(&self, f: PrimeModulus) -> Vec<Vec<FieldElem>> {
        let mut a = self.clone();
        let pivots = a.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(a[(r, fc)]);
                }
                v
            })
            .collect()
    }

    /// Characteristic polynomial `det(xI - A)` via reduction to upper
    /// Hessenberg form.
    pub fn char_poly(&self, f: PrimeModulus) -> UniPoly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(p) = (j + 1..n).find(|&i| h[(i, j)] != 0) else {
                continue;
            };
            if p != j + 1 {
                h.swap_rows(p, j + 1);
                for r in 0..n {
                    h.data.swap(r * n + p, r * n + j + 1);
                }
            }
            let inv = f.inv(h[(j + 1, j)]);
            for r in j + 2..n {
                let u = f.mul(h[(r, j)], inv);
                if u == 0 {
                    continue;
                }
                let nu = f.neg(u);
                for c in 0..n {
                    let v = h[(j + 1, c)];
                    h[(r, c)] = f.mul_add(h[(r, c)], nu, v);
                }
                for row in 0..n {
                    let v = h[(row, r)];
                    h[(row, j + 1)] = f.mul_add(h[(row, j + 1)], u, v);
                }
            }
        }

        // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{i<l<=m} h_{l,l-1}) p_{i-1}
        let mut polys: Vec<UniPoly> = vec![UniPoly::one(f)];
        for m in 0..n {
            let mut pm = UniPoly::new(f, vec![f.neg(h[(m, m)]), 1]).mul(&polys[m]);
            let mut prod = 1;
            for i in (0..m).rev() {
                prod = f.mul(prod, h[(i + 1, i)]);
                if prod == 0 {
                    break;
                }
                let c = f.mul(h[(i, m)], prod);
                if c != 0 {
                    pm = pm.sub(&polys[i].mul(&UniPoly::new(f, vec![c])));
                }
            }
            polys.push(pm);
        }
        polys.pop().unwrap()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = FieldElem;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f() -> PrimeModulus {
        PrimeModulus::new(1009).unwrap()
    }

    fn matrix(n: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec(0u32..1009, n * n)
            .prop_map(move |d| Matrix { rows: n, cols: n, data: d })
    }

    #[test]
    fn companion_char_poly() {
        let f = f();
        // Companion matrix of x^3 - 2x + 5.
        let a = Matrix::from_rows(vec![
            vec![0, 0, f.neg(5)],
            vec![1, 0, 2],
            vec![0, 1, 0],
        ]);
        assert_eq!(a.char_poly(f), UniPoly::new(f, vec![5, f.neg(2), 0, 1]));
    }

    proptest! {
        #[test]
        fn char_poly_matches_determinant(a in (1usize..7).prop_flat_map(matrix), x in 0u32..1009) {
            let f = f();
            let n = a.rows();
            let mut shifted = a.clone();
            for i in 0..n {
                for j in 0..n {
                    shifted[(i, j)] = f.neg(a[(i, j)]);
                }
                shifted[(i, i)] = f.add(shifted[(i, i)], x);
            }
            prop_assert_eq!(a.char_poly(f).evaluate(x), shifted.det(f));
        }

        #[test]
        fn nullspace_vectors_are_killed(rows in 1usize..5, cols in 1usize..7, seed in prop::collection::vec(0u32..5, 35)) {
            let f = f();
            let data: Vec<u32> = seed.into_iter().take(rows * cols).collect();
            prop_assume!(data.len() == rows * cols);
            let a = Matrix { rows, cols, data };
            let ns = a.nullspace(f);
            prop_assert_eq!(ns.len() + a.rank(f), cols);
            for v in ns {
                let col = Matrix { rows: cols, cols: 1, data: v };
                prop_assert!(a.mul(&col, f).data.iter().all(|&x| x == 0));
            }
        }
    }
}
