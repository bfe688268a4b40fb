//! Dense matrices over a [`Ring`], with Smith normal form and exact solving
//! over the chain rings `W(F_q)/p^N`.

use std::fmt;

use serde_json::Value;

use crate::arith::{ArithError, Ring, WittElem, WittRing};

#[derive(Clone, PartialEq)]
pub struct Matrix<R: Ring> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.ring.render(self.get(i, j))).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(ring: &R, rows: usize, cols: usize) -> Self {
        Self { ring: ring.clone(), rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(ring: &R, rows: Vec<Vec<R::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { ring: ring.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Build from integer entries.
    pub fn from_ints(ring: &R, rows: &[&[i64]]) -> Self {
        Self::from_rows(ring, rows.iter().map(|r| r.iter().map(|&x| ring.from_int(x)).collect()).collect())
    }

    pub fn from_fn<F: FnMut(usize, usize) -> R::Elem>(ring: &R, rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { ring: ring.clone(), rows, cols, data }
    }

    pub fn column(ring: &R, v: Vec<R::Elem>) -> Self {
        let n = v.len();
        Self { ring: ring.clone(), rows: n, cols: 1, data: v }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<R::Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<R::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.ring.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let r = &self.ring;
        let mut out = Self::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if r.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = r.add(out.get(i, j), &r.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).fold(self.ring.zero(), |acc, j| self.ring.add(&acc, &self.ring.mul(self.get(i, j), &v[j]))))
            .collect()
    }

    /// Row vector times matrix.
    pub fn apply_left(&self, w: &[R::Elem]) -> Vec<R::Elem> {
        self.transpose().apply(w)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            data: self.data.iter().zip(&other.data).map(|(a, b)| self.ring.add(a, b)).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { data: self.data.iter().map(|a| self.ring.neg(a)).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Self { data: self.data.iter().map(|a| self.ring.mul(c, a)).collect(), ..self.clone() }
    }

    pub fn map<F: Fn(&R::Elem) -> R::Elem>(&self, f: F) -> Self {
        Self { data: self.data.iter().map(f).collect(), ..self.clone() }
    }

    /// Kronecker product; row index `(i, k) ↦ i·rows(B) + k`.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(&self.ring, self.rows * other.rows, self.cols * other.cols, |i, j| {
            self.ring.mul(self.get(i / other.rows, j / other.cols), other.get(i % other.rows, j % other.cols))
        })
    }

    pub fn hstack(blocks: &[&Self]) -> Self {
        let first = blocks[0];
        assert!(blocks.iter().all(|b| b.rows == first.rows));
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(&first.ring, first.rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(i, off + j, b.get(i, j).clone());
                }
            }
            off += b.cols;
        }
        out
    }

    pub fn vstack(blocks: &[&Self]) -> Self {
        let ts: Vec<Self> = blocks.iter().map(|b| b.transpose()).collect();
        Self::hstack(&ts.iter().collect::<Vec<_>>()).transpose()
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(&self.ring, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Rows as JSON arrays of element encodings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array((0..self.cols).map(|j| self.ring.elem_to_json(self.get(i, j))).collect()))
                .collect(),
        )
    }

    pub fn from_json(ring: &R, v: &Value, rows: usize, cols: usize) -> Result<Self, ArithError> {
        let bad = || ArithError::Parse(format!("expected {rows}x{cols} matrix"));
        let arr = v.as_array().ok_or_else(bad)?;
        if arr.len() != rows {
            return Err(bad());
        }
        let mut out = Self::zeros(ring, rows, cols);
        for (i, row) in arr.iter().enumerate() {
            let row = row.as_array().filter(|r| r.len() == cols).ok_or_else(bad)?;
            for (j, x) in row.iter().enumerate() {
                out.set(i, j, ring.elem_from_json(x)?);
            }
        }
        Ok(out)
    }
}

/// Result of row reduction over a field: rank and a basis of the left kernel.
#[derive(Debug, Clone)]
pub struct FieldRank<R: Ring> {
    pub rank: usize,
    pub left_kernel: Vec<Vec<R::Elem>>,
}

/// Rank over a field (every nonzero element is assumed invertible).
pub fn field_rank<R: Ring>(a: &Matrix<R>) -> FieldRank<R> {
    let r = a.ring();
    // reduce [A | I] by rows; zero rows of the left block give left-kernel vectors
    let aug = Matrix::hstack(&[a, &Matrix::identity(r, a.rows())]);
    let mut m = aug;
    let mut rank = 0;
    for col in 0..a.cols() {
        let Some(piv) = (rank..m.rows()).find(|&i| !r.is_zero(m.get(i, col))) else {
            continue;
        };
        swap_rows(&mut m, rank, piv);
        let inv = r.inv(m.get(rank, col)).expect("field element invertible");
        for j in 0..m.cols() {
            let v = r.mul(&inv, m.get(rank, j));
            m.set(rank, j, v);
        }
        for i in 0..m.rows() {
            if i != rank && !r.is_zero(m.get(i, col)) {
                let f = m.get(i, col).clone();
                for j in 0..m.cols() {
                    let v = r.sub(m.get(i, j), &r.mul(&f, m.get(rank, j)));
                    m.set(i, j, v);
                }
            }
        }
        rank += 1;
    }
    let left_kernel = (rank..m.rows()).map(|i| m.row(i)[a.cols()..].to_vec()).collect();
    FieldRank { rank, left_kernel }
}

fn swap_rows<R: Ring>(m: &mut Matrix<R>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        m.data.swap(a * m.cols + j, b * m.cols + j);
    }
}

fn swap_cols<R: Ring>(m: &mut Matrix<R>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        m.data.swap(i * m.cols + a, i * m.cols + b);
    }
}

/// `U·A·V = D` with `D` diagonal, entries `p^{v_i}` then zeros.
#[derive(Debug, Clone)]
pub struct Snf {
    pub diag: Vec<WittElem>,
    pub u: Matrix<WittRing>,
    pub v: Matrix<WittRing>,
    pub rank: usize,
}

impl Snf {
    /// Exponents `v_i` of the nonzero invariant factors.
    pub fn exponents(&self) -> Vec<u32> {
        let ring = self.u.ring();
        self.diag[..self.rank].iter().map(|d| ring.valuation(d).expect("nonzero pivot")).collect()
    }
}

/// Smith normal form over `W(F_q)/p^N`, a principal ideal chain ring.
pub fn smith_normal_form(a: &Matrix<WittRing>) -> Snf {
    let r = a.ring().clone();
    let (nr, nc) = (a.rows(), a.cols());
    let mut m = a.clone();
    let mut u = Matrix::identity(&r, nr);
    let mut v = Matrix::identity(&r, nc);
    let mut rank = 0;
    for t in 0..nr.min(nc) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if let Some(val) = r.valuation(m.get(i, j)) {
                    if best.map_or(true, |(bv, _, _)| val < bv) {
                        best = Some((val, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        swap_rows(&mut m, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut m, t, pj);
        swap_cols(&mut v, t, pj);
        // normalize the pivot to p^v
        let (_, unit) = r.unit_part(m.get(t, t)).expect("nonzero pivot");
        let uinv = r.inv(&unit).expect("unit part invertible");
        for j in 0..nc {
            let x = r.mul(&uinv, m.get(t, j));
            m.set(t, j, x);
        }
        for j in 0..nr {
            let x = r.mul(&uinv, u.get(t, j));
            u.set(t, j, x);
        }
        let piv = m.get(t, t).clone();
        for i in t + 1..nr {
            let f = r.div_exact(m.get(i, t), &piv).expect("minimal valuation pivot divides");
            if r.is_zero(&f) {
                continue;
            }
            for j in 0..nc {
                let x = r.sub(m.get(i, j), &r.mul(&f, m.get(t, j)));
                m.set(i, j, x);
            }
            for j in 0..nr {
                let x = r.sub(u.get(i, j), &r.mul(&f, u.get(t, j)));
                u.set(i, j, x);
            }
        }
        for j in t + 1..nc {
            let f = r.div_exact(m.get(t, j), &piv).expect("minimal valuation pivot divides");
            if r.is_zero(&f) {
                continue;
            }
            for i in 0..nr {
                let x = r.sub(m.get(i, j), &r.mul(&f, m.get(i, t)));
                m.set(i, j, x);
            }
            for i in 0..nc {
                let x = r.sub(v.get(i, j), &r.mul(&f, v.get(i, t)));
                v.set(i, j, x);
            }
        }
        rank += 1;
    }
    let diag = (0..nr.min(nc)).map(|i| m.get(i, i).clone()).collect();
    debug_assert_eq!(u.mul(a).mul(&v), m);
    Snf { diag, u, v, rank }
}

/// Some `X` with `A·X = B`, or the index of a column of `B` that is not in
/// the image of `A`.
pub fn solve(a: &Matrix<WittRing>, b: &Matrix<WittRing>) -> Result<Matrix<WittRing>, usize> {
    assert_eq!(a.rows(), b.rows());
    let r = a.ring();
    let snf = smith_normal_form(a);
    let ub = snf.u.mul(b);
    let mut y = Matrix::zeros(r, a.cols(), b.cols());
    for col in 0..b.cols() {
        for i in 0..a.rows() {
            let target = ub.get(i, col);
            if i < snf.rank {
                match r.div_exact(target, &snf.diag[i]) {
                    Some(q) => y.set(i, col, q),
                    None => return Err(col),
                }
            } else if !r.is_zero(target) {
                return Err(col);
            }
        }
    }
    let x = snf.v.mul(&y);
    debug_assert_eq!(&a.mul(&x), b);
    Ok(x)
}

/// Generators of `ker(A) ⊆ R^cols`, as columns.
pub fn kernel(a: &Matrix<WittRing>) -> Matrix<WittRing> {
    let r = a.ring();
    let snf = smith_normal_form(a);
    let n = r.precision();
    let mut gens = Vec::new();
    for i in 0..a.cols() {
        let vi = snf.v.col(i);
        let scale = if i < snf.rank {
            let e = r.valuation(&snf.diag[i]).expect("nonzero pivot");
            r.p_power(n - e)
        } else {
            r.one()
        };
        if r.is_zero(&scale) {
            continue;
        }
        gens.push(vi.iter().map(|x| r.mul(&scale, x)).collect::<Vec<_>>());
    }
    if gens.is_empty() {
        return Matrix::zeros(r, a.cols(), 0);
    }
    Matrix::from_rows(r, gens).transpose()
}

/// Residue-field rank (reduction mod `p` followed by field elimination).
pub fn residue_rank(a: &Matrix<WittRing>) -> FieldRank<WittRing> {
    let k = a.ring().residue_field();
    let reduced = Matrix::from_fn(&k, a.rows(), a.cols(), |i, j| k.reduce(a.get(i, j)).expect("same ring family"));
    field_rank(&reduced)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_of_small_matrix() {
        let r = WittRing::prime_field(2, 4).unwrap();
        let a = Matrix::from_ints(&r, &[&[2, 4], &[6, 8]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.u.mul(&a).mul(&snf.v), {
            let mut d = Matrix::zeros(&r, 2, 2);
            d.set(0, 0, snf.diag[0].clone());
            d.set(1, 1, snf.diag[1].clone());
            d
        });
        assert_eq!(snf.exponents(), vec![1, 2]);
    }

    #[test]
    fn solve_and_kernel() {
        let r = WittRing::prime_field(3, 3).unwrap();
        let a = Matrix::from_ints(&r, &[&[1, 3, 0], &[0, 9, 3]]);
        let b = Matrix::from_ints(&r, &[&[4], &[6]]);
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul(&x), b);
        let bad = Matrix::from_ints(&r, &[&[0], &[1]]);
        assert_eq!(solve(&a, &bad).unwrap_err(), 0);
        let k = kernel(&a);
        assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn residue_rank_with_witness() {
        let r = WittRing::prime_field(2, 3).unwrap();
        let a = Matrix::from_ints(&r, &[&[2]]);
        let fr = residue_rank(&a);
        assert_eq!(fr.rank, 0);
        assert_eq!(fr.left_kernel.len(), 1);
    }

    #[test]
    fn kronecker_dimensions() {
        let r = WittRing::prime_field(2, 3).unwrap();
        let a = Matrix::from_ints(&r, &[&[1, 2], &[3, 4]]);
        let i = Matrix::identity(&r, 3);
        let k = a.kron(&i);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert_eq!(k.get(3, 0), &r.int(3));
    }
}
