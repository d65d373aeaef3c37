//! Dense symmetric linear algebra in MPFR floating point.
//!
//! Just enough for the eigenvalue pipeline: Cholesky factorisation,
//! congruence by a triangular factor, and the symmetric eigenproblem via
//! Householder tridiagonalisation followed by implicit QL.

use rug::{Assign, Float};

use crate::error::{Error, Result};

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FMat {
    n: usize,
    bits: u32,
    data: Vec<Float>,
}

impl FMat {
    pub fn zeros(n: usize, bits: u32) -> Self {
        FMat {
            n,
            bits,
            data: vec![Float::new(bits); n * n],
        }
    }

    pub fn identity(n: usize, bits: u32) -> Self {
        let mut m = Self::zeros(n, bits);
        for i in 0..n {
            m[(i, i)].assign(1);
        }
        m
    }

    pub fn from_fn(n: usize, bits: u32, mut f: impl FnMut(usize, usize) -> Float) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(Float::with_val(bits, f(i, j)));
            }
        }
        FMat { n, bits, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn row(&self, i: usize) -> &[Float] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        Self::from_fn(n, self.bits, |i, j| self[(j, i)].clone())
    }

    pub fn mul_vec(&self, v: &[Float]) -> Vec<Float> {
        let mut out = Vec::with_capacity(self.n);
        let mut t = Float::new(self.bits);
        for i in 0..self.n {
            let mut acc = Float::new(self.bits);
            for (a, x) in self.row(i).iter().zip(v) {
                t.assign(a * x);
                acc += &t;
            }
            out.push(acc);
        }
        out
    }

    /// `v^T M v`.
    pub fn quadratic_form(&self, v: &[Float]) -> Float {
        let mv = self.mul_vec(v);
        dot(&mv, v, self.bits)
    }

    /// Combination `self + c * other`.
    pub fn add_scaled(&self, other: &FMat, c: i64) -> FMat {
        let mut out = self.clone();
        let mut t = Float::new(self.bits);
        for (o, x) in out.data.iter_mut().zip(&other.data) {
            t.assign(x * c);
            *o += &t;
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for FMat {
    type Output = Float;
    fn index(&self, (i, j): (usize, usize)) -> &Float {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Float {
        &mut self.data[i * self.n + j]
    }
}

pub fn dot(a: &[Float], b: &[Float], bits: u32) -> Float {
    let mut acc = Float::new(bits);
    let mut t = Float::new(bits);
    for (x, y) in a.iter().zip(b) {
        t.assign(x * y);
        acc += &t;
    }
    acc
}

/// Lower-triangular `L` with `A = L L^T`.
pub fn cholesky(a: &FMat) -> Result<FMat> {
    let n = a.n;
    let bits = a.bits;
    let mut l = FMat::zeros(n, bits);
    let mut t = Float::new(bits);
    for j in 0..n {
        let mut s = a[(j, j)].clone();
        for k in 0..j {
            t.assign(l[(j, k)].square_ref());
            s -= &t;
        }
        if !s.is_sign_positive() || s.is_zero() {
            return Err(Error::Consistency(format!(
                "Gram matrix is not positive definite at pivot {j} ({bits} bits)"
            )));
        }
        s.sqrt_mut();
        for i in j + 1..n {
            let mut v = a[(i, j)].clone();
            for k in 0..j {
                t.assign(&l[(i, k)] * &l[(j, k)]);
                v -= &t;
            }
            v /= &s;
            l[(i, j)] = v;
        }
        l[(j, j)] = s;
    }
    Ok(l)
}

/// Solves `L X = B` for lower-triangular `L`, overwriting `B` column by column.
fn solve_lower_in_place(l: &FMat, b: &mut FMat) {
    let n = l.n;
    let mut t = Float::new(l.bits);
    for c in 0..n {
        for i in 0..n {
            let mut v = b[(i, c)].clone();
            for k in 0..i {
                t.assign(&l[(i, k)] * &b[(k, c)]);
                v -= &t;
            }
            v /= &l[(i, i)];
            b[(i, c)] = v;
        }
    }
}

/// `L^{-1} B L^{-T}` for symmetric `B`, symmetrised.
pub fn congruence(l: &FMat, b: &FMat) -> FMat {
    let mut x = b.clone();
    solve_lower_in_place(l, &mut x);
    let mut y = x.transpose();
    solve_lower_in_place(l, &mut y);
    let n = l.n;
    for i in 0..n {
        for j in i + 1..n {
            let mut avg = Float::with_val(l.bits, &y[(i, j)] + &y[(j, i)]);
            avg /= 2u32;
            y[(j, i)].assign(&avg);
            y[(i, j)] = avg;
        }
    }
    y
}

/// `L v` for lower-triangular `L`.
pub fn lower_mul_vec(l: &FMat, v: &[Float]) -> Vec<Float> {
    let mut t = Float::new(l.bits);
    (0..l.n)
        .map(|i| {
            let mut acc = Float::new(l.bits);
            for k in 0..=i {
                t.assign(&l[(i, k)] * &v[k]);
                acc += &t;
            }
            acc
        })
        .collect()
}

/// Eigen-decomposition of a symmetric matrix.
///
/// Returns eigenvalues in ascending order and the matrix whose row `i` is
/// the unit eigenvector belonging to eigenvalue `i`.
pub fn symmetric_eigen(a: &FMat) -> Result<(Vec<Float>, FMat)> {
    let n = a.n;
    let bits = a.bits;
    if n == 0 {
        return Ok((Vec::new(), FMat::zeros(0, bits)));
    }
    let mut v = a.clone();
    let mut d = vec![Float::new(bits); n];
    let mut e = vec![Float::new(bits); n];
    tred2(&mut v, &mut d, &mut e);
    // tql2 rotates columns of V; work on the transpose so rotations touch rows.
    let mut vt = v.transpose();
    tql2(&mut vt, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("NaN eigenvalue"));
    let values = order.iter().map(|&i| d[i].clone()).collect();
    let mut vectors = FMat::zeros(n, bits);
    for (r, &i) in order.iter().enumerate() {
        for c in 0..n {
            vectors[(r, c)].assign(&vt[(i, c)]);
        }
    }
    Ok((values, vectors))
}

/// Householder reduction to tridiagonal form (EISPACK tred2 ordering).
fn tred2(v: &mut FMat, d: &mut [Float], e: &mut [Float]) {
    let n = v.n;
    let bits = v.bits;
    let mut f = Float::new(bits);
    let mut g = Float::new(bits);
    let mut h = Float::new(bits);
    let mut t = Float::new(bits);
    let mut scale = Float::new(bits);

    for j in 0..n {
        d[j].assign(&v[(n - 1, j)]);
    }
    for i in (1..n).rev() {
        scale.assign(0);
        h.assign(0);
        for dk in d.iter().take(i) {
            t.assign(dk.abs_ref());
            scale += &t;
        }
        if scale.is_zero() {
            e[i].assign(&d[i - 1]);
            for j in 0..i {
                d[j].assign(&v[(i - 1, j)]);
                v[(i, j)].assign(0);
                v[(j, i)].assign(0);
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= &scale;
                t.assign(dk.square_ref());
                h += &t;
            }
            f.assign(&d[i - 1]);
            g.assign(h.sqrt_ref());
            if f.is_sign_positive() && !f.is_zero() {
                g = -g;
            }
            e[i].assign(&scale * &g);
            t.assign(&f * &g);
            h -= &t;
            d[i - 1].assign(&f - &g);
            for ej in e.iter_mut().take(i) {
                ej.assign(0);
            }
            for j in 0..i {
                f.assign(&d[j]);
                v[(j, i)].assign(&f);
                g.assign(&v[(j, j)] * &f);
                g += &e[j];
                for k in j + 1..i {
                    t.assign(&v[(k, j)] * &d[k]);
                    g += &t;
                    t.assign(&v[(k, j)] * &f);
                    e[k] += &t;
                }
                e[j].assign(&g);
            }
            f.assign(0);
            for j in 0..i {
                e[j] /= &h;
                t.assign(&e[j] * &d[j]);
                f += &t;
            }
            let mut hh = Float::with_val(bits, &f / &h);
            hh /= 2u32;
            for j in 0..i {
                t.assign(&hh * &d[j]);
                e[j] -= &t;
            }
            for j in 0..i {
                f.assign(&d[j]);
                g.assign(&e[j]);
                for k in j..i {
                    t.assign(f.mul_add_mul_ref(&e[k], &g, &d[k]));
                    v[(k, j)] -= &t;
                }
                d[j].assign(&v[(i - 1, j)]);
                v[(i, j)].assign(0);
            }
        }
        d[i].assign(&h);
    }

    for i in 0..n - 1 {
        let diag = v[(i, i)].clone();
        v[(n - 1, i)].assign(&diag);
        v[(i, i)].assign(1);
        h.assign(&d[i + 1]);
        if !h.is_zero() {
            for k in 0..=i {
                d[k].assign(&v[(k, i + 1)] / &h);
            }
            for j in 0..=i {
                g.assign(0);
                for k in 0..=i {
                    t.assign(&v[(k, i + 1)] * &v[(k, j)]);
                    g += &t;
                }
                for k in 0..=i {
                    t.assign(&g * &d[k]);
                    v[(k, j)] -= &t;
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)].assign(0);
        }
    }
    for j in 0..n {
        d[j].assign(&v[(n - 1, j)]);
        v[(n - 1, j)].assign(0);
    }
    v[(n - 1, n - 1)].assign(1);
    e[0].assign(0);
}

/// Implicit QL on the tridiagonal matrix `(d, e)`; `vt` holds the
/// transposed accumulated transform and is rotated in place.
fn tql2(vt: &mut FMat, d: &mut [Float], e: &mut [Float]) -> Result<()> {
    let n = vt.n;
    let bits = vt.bits;
    for i in 1..n {
        let x = e[i].clone();
        e[i - 1] = x;
    }
    e[n - 1].assign(0);

    let eps = Float::with_val(bits, Float::i_exp(1, 2 - bits as i32));
    let mut f = Float::new(bits);
    let mut tst1 = Float::new(bits);
    let mut g = Float::new(bits);
    let mut p = Float::new(bits);
    let mut r = Float::new(bits);
    let mut h = Float::new(bits);
    let mut c = Float::new(bits);
    let mut c2 = Float::new(bits);
    let mut c3 = Float::new(bits);
    let mut s = Float::new(bits);
    let mut s2 = Float::new(bits);
    let mut t = Float::new(bits);
    let mut thresh = Float::new(bits);

    for l in 0..n {
        t.assign(d[l].abs_ref());
        t += Float::with_val(bits, e[l].abs_ref());
        if t > tst1 {
            tst1.assign(&t);
        }
        thresh.assign(&eps * &tst1);
        let mut m = l;
        while m < n {
            if e[m].cmp_abs(&thresh) != Some(std::cmp::Ordering::Greater) {
                break;
            }
            m += 1;
        }
        if m == n {
            return Err(Error::Consistency("QL iteration lost its tridiagonal structure".into()));
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::Consistency(format!(
                        "QL iteration did not converge for eigenvalue {l}"
                    )));
                }
                g.assign(&d[l]);
                p.assign(&d[l + 1] - &g);
                t.assign(&e[l] * 2u32);
                p /= &t;
                r.assign(p.hypot_ref(&Float::with_val(bits, 1)));
                if p.is_sign_negative() {
                    r = -r;
                }
                t.assign(&p + &r);
                d[l].assign(&e[l] / &t);
                d[l + 1].assign(&e[l] * &t);
                let dl1 = d[l + 1].clone();
                h.assign(&g - &d[l]);
                for di in d.iter_mut().skip(l + 2) {
                    *di -= &h;
                }
                f += &h;

                p.assign(&d[m]);
                c.assign(1);
                c2.assign(1);
                c3.assign(1);
                let el1 = e[l + 1].clone();
                s.assign(0);
                s2.assign(0);
                for i in (l..m).rev() {
                    c3.assign(&c2);
                    c2.assign(&c);
                    s2.assign(&s);
                    g.assign(&c * &e[i]);
                    h.assign(&c * &p);
                    r.assign(p.hypot_ref(&e[i]));
                    e[i + 1].assign(&s * &r);
                    s.assign(&e[i] / &r);
                    c.assign(&p / &r);
                    p.assign(c.mul_sub_mul_ref(&d[i], &s, &g));
                    t.assign(c.mul_add_mul_ref(&g, &s, &d[i]));
                    t *= &s;
                    t += &h;
                    d[i + 1].assign(&t);
                    rotate_rows(vt, i, &c, &s, &mut t);
                }
                t.assign(&s * &s2);
                t *= &c3;
                t *= &el1;
                t *= &e[l];
                t /= &dl1;
                p.assign(-&t);
                e[l].assign(&s * &p);
                d[l].assign(&c * &p);
                if e[l].cmp_abs(&thresh) != Some(std::cmp::Ordering::Greater) {
                    break;
                }
            }
        }
        d[l] += &f;
        e[l].assign(0);
    }
    Ok(())
}

/// Rows `i` and `i + 1` of `vt`: `(x, y) -> (c x - s y, s x + c y)`.
fn rotate_rows(vt: &mut FMat, i: usize, c: &Float, s: &Float, t: &mut Float) {
    let n = vt.n;
    let (lo, hi) = vt.data.split_at_mut((i + 1) * n);
    let row_i = &mut lo[i * n..];
    let row_next = &mut hi[..n];
    for (x, y) in row_i.iter_mut().zip(row_next.iter_mut()) {
        t.assign(s.mul_add_mul_ref(x, c, y));
        x.mul_sub_mul_mut(c, s, y);
        std::mem::swap(y, t);
    }
}
