//! Complex LU factorizations: dense, and banded for the Kasteleyn matrix.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn det(&self) -> C64 {
        assert_eq!(self.rows, self.cols);
        let mut buf = self.data.clone();
        det_in_place(&mut buf, self.rows)
    }

    pub fn lu(&self) -> Result<DenseLu> {
        DenseLu::new(self.clone())
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        let lu = self.lu()?;
        let n = self.rows;
        let mut inv = DenseMatrix::zeros(n, n);
        let mut e = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
            e[j] = C64::new(1.0, 0.0);
            let x = lu.solve(&e);
            for i in 0..n {
                inv[(i, j)] = x[i];
            }
        }
        Ok(inv)
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Determinant of the row-major `n × n` matrix in `a`, destroying it. `n = 0` gives 1.
pub fn det_in_place(a: &mut [C64], n: usize) -> C64 {
    let mut det = C64::new(1.0, 0.0);
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].norm();
        for r in k + 1..n {
            let v = a[r * n + k].norm();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if p != k {
            for j in k..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let piv = a[k * n + k];
        det *= piv;
        let inv = 1.0 / piv;
        for r in k + 1..n {
            let l = a[r * n + k] * inv;
            if l == C64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let t = a[k * n + j];
                a[r * n + j] -= l * t;
            }
        }
    }
    det
}

/// Determinant of `[f(i, j)]_{0 ≤ i, j < n}`.
pub fn det_from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> C64 {
    let mut buf = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            buf.push(f(i, j));
        }
    }
    det_in_place(&mut buf, n)
}

/// Dense LU with partial pivoting.
#[derive(Debug, Clone)]
pub struct DenseLu {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
    sign: f64,
}

impl DenseLu {
    pub fn new(m: DenseMatrix) -> Result<Self> {
        assert_eq!(m.rows, m.cols);
        let n = m.rows;
        let mut a = m.data;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let mut p = k;
            let mut best = a[k * n + k].norm();
            for r in k + 1..n {
                let v = a[r * n + k].norm();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 {
                return Err(Error::Singular(format!("zero pivot at column {k}")));
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let inv = 1.0 / a[k * n + k];
            for r in k + 1..n {
                let l = a[r * n + k] * inv;
                a[r * n + k] = l;
                for j in k + 1..n {
                    let t = a[k * n + j];
                    a[r * n + j] -= l * t;
                }
            }
        }
        Ok(DenseLu { n, lu: a, perm, sign })
    }

    pub fn det(&self) -> C64 {
        (0..self.n).fold(C64::new(self.sign, 0.0), |acc, k| acc * self.lu[k * self.n + k])
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[i * n + k];
                x[i] = x[i] - l * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu[i * n + k];
                x[i] = x[i] - u * x[k];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }
}

/// Square banded matrix with `kl` sub- and `ku` super-diagonals.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    pub n: usize,
    pub kl: usize,
    pub ku: usize,
    width: usize,
    rows: Vec<C64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandMatrix {
            n,
            kl,
            ku,
            width,
            rows: vec![C64::new(0.0, 0.0); n * width],
        }
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let off = i as isize - self.kl as isize;
        let d = j as isize - off;
        if d < 0 || d >= self.width as isize {
            None
        } else {
            Some(i * self.width + d as usize)
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.slot(i, j).map(|k| self.rows[k]).unwrap_or(C64::new(0.0, 0.0))
    }

    /// Sets an entry inside the declared band.
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "entry ({i}, {j}) outside band");
        let k = self.slot(i, j).expect("inside band");
        self.rows[k] = v;
    }
}

/// Banded LU with partial pivoting; fill-in is confined to `kl + ku` super-diagonals.
#[derive(Debug, Clone)]
pub struct BandLu {
    a: BandMatrix,
    mult: Vec<C64>,
    perm: Vec<usize>,
    det: C64,
    singular: bool,
}

impl BandLu {
    pub fn new(mut a: BandMatrix) -> Self {
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        let mut mult = vec![C64::new(0.0, 0.0); n * kl.max(1)];
        let mut perm = vec![0; n];
        let mut det = C64::new(1.0, 0.0);
        let mut singular = false;
        let mut tmp_k = vec![C64::new(0.0, 0.0); kl + ku + 1];
        let mut tmp_r = vec![C64::new(0.0, 0.0); kl + ku + 1];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = a.get(k, k).norm();
            for r in k + 1..=last {
                let v = a.get(r, k).norm();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            perm[k] = p;
            if best == 0.0 {
                singular = true;
                det = C64::new(0.0, 0.0);
                continue;
            }
            let jmax = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    tmp_k[j - k] = a.get(k, j);
                    tmp_r[j - k] = a.get(p, j);
                }
                for j in k..=jmax {
                    if let Some(s) = a.slot(k, j) {
                        a.rows[s] = tmp_r[j - k];
                    }
                    if let Some(s) = a.slot(p, j) {
                        a.rows[s] = tmp_k[j - k];
                    }
                }
                det = -det;
            }
            let piv = a.get(k, k);
            det *= piv;
            let inv = 1.0 / piv;
            for r in k + 1..=last {
                let l = a.get(r, k) * inv;
                mult[k * kl.max(1) + (r - k - 1)] = l;
                if let Some(s) = a.slot(r, k) {
                    a.rows[s] = C64::new(0.0, 0.0);
                }
                if l == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..=jmax {
                    let t = a.get(k, j);
                    if t == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let s = a.slot(r, j).expect("fill-in inside band");
                    a.rows[s] -= l * t;
                }
            }
        }
        BandLu {
            a,
            mult,
            perm,
            det,
            singular,
        }
    }

    pub fn det(&self) -> C64 {
        self.det
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        if self.singular {
            return Err(Error::Singular("banded matrix has a zero pivot".into()));
        }
        let (n, kl, ku) = (self.a.n, self.a.kl, self.a.ku);
        let mut x = b.to_vec();
        for k in 0..n {
            let p = self.perm[k];
            if p != k {
                x.swap(k, p);
            }
            let last = (k + kl).min(n - 1);
            for r in k + 1..=last {
                let l = self.mult[k * kl.max(1) + (r - k - 1)];
                let xk = x[k];
                x[r] -= l * xk;
            }
        }
        for k in (0..n).rev() {
            let jmax = (k + kl + ku).min(n - 1);
            let mut acc = x[k];
            for j in k + 1..=jmax {
                acc -= self.a.get(k, j) * x[j];
            }
            x[k] = acc / self.a.get(k, k);
        }
        Ok(x)
    }
}
