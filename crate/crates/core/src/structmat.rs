//! Dense exact matrices with structured constructors and the brute-force
//! oracles: fraction-free determinant, exact Gauss-Jordan inverse,
//! permutation parity and floating-point spectral norm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numeric::Rational;
use crate::sequence::{self, HoradamParams};
use crate::{Error, Result};

/// Iteration cap for the power-iteration norm oracle.
const POWER_ITERATION_CAP: usize = 100_000;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<Rational>,
}

/// Specification of a g-circulant matrix over one k-Horadam sequence.
///
/// Subscript arithmetic is modulo n, so entry (r, c) is
/// H_{((c - r*g) mod n) + 1}.
#[derive(Clone, Debug)]
pub struct GCircSpec {
    pub params: HoradamParams,
    pub n: usize,
    pub g: usize,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::Argument("empty matrix".into()));
        }
        let n_cols = rows[0].len();
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Argument("ragged rows".into()));
        }
        let n_rows = rows.len();
        Ok(Matrix {
            n_rows,
            n_cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zero(n_rows: usize, n_cols: usize) -> Self {
        Matrix {
            n_rows,
            n_cols,
            entries: vec![Rational::zero(); n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.n_cols + c]
    }

    fn at_mut(&mut self, r: usize, c: usize) -> &mut Rational {
        &mut self.entries[r * self.n_cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.n_cols..(r + 1) * self.n_cols]
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.n_rows)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.n_cols, self.n_rows);
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                *out.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        out
    }
}

/// Classical circulant matrix (each row is the previous one shifted right
/// by one) determined by its first row.
pub fn circulant(first_row: &[Rational]) -> Result<Matrix> {
    if first_row.is_empty() {
        return Err(Error::Argument("empty first row".into()));
    }
    let n = first_row.len();
    let mut m = Matrix::zero(n, n);
    for r in 0..n {
        for c in 0..n {
            *m.at_mut(r, c) = first_row[(n + c - r) % n].clone();
        }
    }
    Ok(m)
}

fn mod_index(c: usize, r: usize, g: usize, n: usize) -> usize {
    let v = (c as i128 - r as i128 * g as i128).rem_euclid(n as i128);
    v as usize
}

/// g-circulant matrix with first row (H_1, ..., H_n); each row is the
/// previous one shifted right by g positions.
pub fn g_circulant(spec: &GCircSpec) -> Result<Matrix> {
    if spec.n == 0 {
        return Err(Error::Argument("n must be at least 1".into()));
    }
    let first = sequence::terms(&spec.params, 1, spec.n as u64)?;
    let n = spec.n;
    let mut m = Matrix::zero(n, n);
    for r in 0..n {
        for c in 0..n {
            *m.at_mut(r, c) = first[mod_index(c, r, spec.g, n)].clone();
        }
    }
    Ok(m)
}

/// The g-circulant matrix with first row (1, 0, ..., 0): entry (r, c) is 1
/// iff c = r*g (mod n). A permutation matrix exactly when gcd(n, g) = 1.
pub fn q_matrix(n: usize, g: usize) -> Matrix {
    let mut m = Matrix::zero(n, n);
    for r in 0..n {
        *m.at_mut(r, (r * g) % n) = Rational::one();
    }
    m
}

/// det Q_g as the sign of the permutation r -> r*g mod n, via cycle
/// decomposition. Requires gcd(n, g) = 1.
pub fn permutation_parity(n: usize, g: usize) -> Result<Rational> {
    if n.gcd(&g) != 1 {
        return Err(Error::Singular(format!(
            "Q_g singular: gcd({n},{g}) != 1"
        )));
    }
    let mut visited = vec![false; n];
    let mut transpositions = 0usize;
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut len = 0usize;
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            i = (i * g) % n;
            len += 1;
        }
        transpositions += len - 1;
    }
    Ok(if transpositions % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    })
}

/// Exact matrix product.
pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.n_cols != b.n_rows {
        return Err(Error::Argument(format!(
            "dimension mismatch: {}x{} * {}x{}",
            a.n_rows, a.n_cols, b.n_rows, b.n_cols
        )));
    }
    let mut out = Matrix::zero(a.n_rows, b.n_cols);
    for r in 0..a.n_rows {
        for c in 0..b.n_cols {
            let mut acc = Rational::zero();
            for k in 0..a.n_cols {
                acc = acc + a.at(r, k) * b.at(k, c);
            }
            *out.at_mut(r, c) = acc;
        }
    }
    Ok(out)
}

/// Exact determinant via Bareiss fraction-free elimination with row
/// pivoting. Rational entries are first cleared to integers row by row.
pub fn det_bareiss(a: &Matrix) -> Result<Rational> {
    if !a.is_square() {
        return Err(Error::Argument("determinant of a non-square matrix".into()));
    }
    let n = a.n_rows;

    // Scale row i by the lcm of its denominators; the determinant of the
    // integer matrix is the true determinant times the product of scales.
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut scale = BigInt::one();
    for r in 0..n {
        let mut l = BigInt::one();
        for c in 0..n {
            l = l.lcm(a.at(r, c).denom());
        }
        m.push(
            (0..n)
                .map(|c| {
                    let e = a.at(r, c);
                    e.numer() * (&l / e.denom())
                })
                .collect(),
        );
        scale *= l;
    }

    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot_row = match (k..n).find(|&r| !m[r][k].is_zero()) {
            Some(r) => r,
            None => return Ok(Rational::zero()),
        };
        if pivot_row != k {
            m.swap(k, pivot_row);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                debug_assert!((&num % &prev).is_zero());
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det_int = if sign < 0 { -&m[n - 1][n - 1] } else { m[n - 1][n - 1].clone() };
    Rational::new(det_int, scale)
}

/// Exact inverse via Gauss-Jordan with first-nonzero pivot selection.
pub fn inverse_exact(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::Argument("inverse of a non-square matrix".into()));
    }
    let n = a.n_rows;
    let mut work = a.clone();
    let mut inv = Matrix::identity(n);
    for k in 0..n {
        let pivot_row = (k..n)
            .find(|&r| !work.at(r, k).is_zero())
            .ok_or_else(|| Error::Singular("zero determinant".into()))?;
        if pivot_row != k {
            for c in 0..n {
                work.entries.swap(k * n + c, pivot_row * n + c);
                inv.entries.swap(k * n + c, pivot_row * n + c);
            }
        }
        let pivot = work.at(k, k).clone();
        for c in 0..n {
            *work.at_mut(k, c) = work.at(k, c) / &pivot;
            *inv.at_mut(k, c) = inv.at(k, c) / &pivot;
        }
        for r in 0..n {
            if r == k || work.at(r, k).is_zero() {
                continue;
            }
            let factor = work.at(r, k).clone();
            for c in 0..n {
                *work.at_mut(r, c) = work.at(r, c) - &(&factor * work.at(k, c));
                *inv.at_mut(r, c) = inv.at(r, c) - &(&factor * inv.at(k, c));
            }
        }
    }
    Ok(inv)
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// One power-iteration run on the Gram matrix; `Ok(None)` means the iterate
/// collapsed to the zero vector.
fn power_iterate(gram: &[Vec<f64>], start: Vec<f64>, tol: f64) -> Result<Option<f64>> {
    let nrm = norm2(&start);
    if nrm == 0.0 {
        return Ok(None);
    }
    let mut v: Vec<f64> = start.iter().map(|x| x / nrm).collect();
    let mut prev_lambda: Option<f64> = None;
    for _ in 0..POWER_ITERATION_CAP {
        let w: Vec<f64> = gram.iter().map(|row| dot(row, &v)).collect();
        let lambda = dot(&v, &w);
        let wn = norm2(&w);
        if wn == 0.0 {
            return Ok(None);
        }
        v = w.iter().map(|x| x / wn).collect();
        if let Some(lp) = prev_lambda {
            if (lambda - lp).abs() <= tol * lambda.abs().max(f64::MIN_POSITIVE) {
                return Ok(Some(lambda.max(0.0)));
            }
        }
        prev_lambda = Some(lambda);
    }
    Err(Error::Numeric(format!(
        "power iteration did not converge within {POWER_ITERATION_CAP} iterations"
    )))
}

/// Largest singular value by power iteration on A^T A in double precision.
///
/// Starts from the all-ones vector, restarting once from (1, 2, ..., n) if
/// the iterate collapses to zero. Makes no normality assumption about A.
pub fn spectral_norm_float(a: &Matrix, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Argument("tol must be positive".into()));
    }
    let m = a.n_rows;
    let n = a.n_cols;
    let af: Vec<Vec<f64>> = (0..m)
        .map(|r| (0..n).map(|c| a.at(r, c).to_f64()).collect())
        .collect();
    // Gram matrix A^T A.
    let mut gram = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = (0..m).map(|r| af[r][i] * af[r][j]).sum();
        }
    }
    let first = power_iterate(&gram, vec![1.0; n], tol)?;
    let lambda = match first {
        Some(l) => Some(l),
        None => power_iterate(&gram, (1..=n).map(|i| i as f64).collect(), tol)?,
    };
    Ok(lambda.unwrap_or(0.0).sqrt())
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    data: Vec<Vec<String>>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = MatrixWire {
            rows: self.n_rows,
            cols: self.n_cols,
            data: (0..self.n_rows)
                .map(|r| self.row(r).iter().map(|e| e.to_string()).collect())
                .collect(),
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(deserializer)?;
        if wire.data.len() != wire.rows {
            return Err(D::Error::custom("row count mismatch"));
        }
        let rows: std::result::Result<Vec<Vec<Rational>>, D::Error> = wire
            .data
            .iter()
            .map(|row| {
                if row.len() != wire.cols {
                    return Err(D::Error::custom("column count mismatch"));
                }
                row.iter()
                    .map(|s| s.parse().map_err(|e| D::Error::custom(format!("{e}"))))
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows?).map_err(|e| D::Error::custom(format!("{e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::Preset;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn row(vals: &[&str]) -> Vec<Rational> {
        vals.iter().map(|s| r(s)).collect()
    }

    fn fib_spec(n: usize, g: usize) -> GCircSpec {
        GCircSpec {
            params: Preset::Fibonacci.params(),
            n,
            g,
        }
    }

    #[test]
    fn circulant_examples() {
        let m = circulant(&row(&["1", "1", "2"])).unwrap();
        assert_eq!(m.row(0), row(&["1", "1", "2"]).as_slice());
        assert_eq!(m.row(1), row(&["2", "1", "1"]).as_slice());
        assert_eq!(m.row(2), row(&["1", "2", "1"]).as_slice());

        let single = circulant(&row(&["5"])).unwrap();
        assert_eq!(single.row(0), row(&["5"]).as_slice());

        let swap = circulant(&row(&["0", "1"])).unwrap();
        assert_eq!(swap.row(0), row(&["0", "1"]).as_slice());
        assert_eq!(swap.row(1), row(&["1", "0"]).as_slice());

        assert!(circulant(&[]).is_err());
    }

    #[test]
    fn g_circulant_examples() {
        let m = g_circulant(&fib_spec(3, 1)).unwrap();
        assert_eq!(m, circulant(&row(&["1", "1", "2"])).unwrap());

        let m = g_circulant(&fib_spec(3, 2)).unwrap();
        assert_eq!(m.row(0), row(&["1", "1", "2"]).as_slice());
        assert_eq!(m.row(1), row(&["1", "2", "1"]).as_slice());
        assert_eq!(m.row(2), row(&["2", "1", "1"]).as_slice());

        let m = g_circulant(&fib_spec(1, 0)).unwrap();
        assert_eq!(m.row(0), row(&["1"]).as_slice());
    }

    #[test]
    fn q_matrix_examples() {
        let q = q_matrix(3, 2);
        assert_eq!(q.row(0), row(&["1", "0", "0"]).as_slice());
        assert_eq!(q.row(1), row(&["0", "0", "1"]).as_slice());
        assert_eq!(q.row(2), row(&["0", "1", "0"]).as_slice());

        assert!(q_matrix(4, 1).is_identity());

        let s = q_matrix(4, 2);
        for rr in 0..4 {
            assert_eq!(*s.at(rr, (rr * 2) % 4), r("1"));
        }
        assert_eq!(det_bareiss(&s).unwrap(), r("0"));
    }

    #[test]
    fn permutation_parity_examples() {
        assert_eq!(permutation_parity(3, 2).unwrap(), r("-1"));
        assert_eq!(permutation_parity(5, 1).unwrap(), r("1"));
        assert!(permutation_parity(4, 2).is_err());
        // n=1, g=0: the empty-shift permutation on one element.
        assert_eq!(permutation_parity(1, 0).unwrap(), r("1"));
    }

    #[test]
    fn parity_matches_bareiss_det_of_q() {
        for n in 1..=12usize {
            for g in 0..n {
                if n.gcd(&g) != 1 {
                    continue;
                }
                assert_eq!(
                    permutation_parity(n, g).unwrap(),
                    det_bareiss(&q_matrix(n, g)).unwrap(),
                    "n={n} g={g}"
                );
            }
        }
    }

    #[test]
    fn matmul_examples() {
        let x = circulant(&row(&["1", "4", "9"])).unwrap();
        assert_eq!(matmul(&Matrix::identity(3), &x).unwrap(), x);

        let lhs = Matrix::from_rows(vec![row(&["1", "2"]), row(&["3", "4"])]).unwrap();
        let swap = circulant(&row(&["0", "1"])).unwrap();
        let prod = matmul(&lhs, &swap).unwrap();
        assert_eq!(prod.row(0), row(&["2", "1"]).as_slice());
        assert_eq!(prod.row(1), row(&["4", "3"]).as_slice());

        // Lemma-3 style factorization instance.
        let c = circulant(&row(&["1", "1", "2"])).unwrap();
        assert_eq!(
            matmul(&q_matrix(3, 2), &c).unwrap(),
            g_circulant(&fib_spec(3, 2)).unwrap()
        );

        assert!(matmul(&lhs, &Matrix::identity(3)).is_err());
    }

    #[test]
    fn transpose_examples() {
        let q = q_matrix(3, 2);
        assert!(matmul(&q.transpose(), &q).unwrap().is_identity());
        assert!(Matrix::identity(4).transpose().is_identity());
        let m = Matrix::from_rows(vec![row(&["1", "2"])]).unwrap();
        let t = m.transpose();
        assert_eq!((t.n_rows(), t.n_cols()), (2, 1));
        assert_eq!(*t.at(0, 0), r("1"));
        assert_eq!(*t.at(1, 0), r("2"));
    }

    #[test]
    fn det_bareiss_examples() {
        assert_eq!(
            det_bareiss(&circulant(&row(&["1", "1", "2"])).unwrap()).unwrap(),
            r("4")
        );
        assert_eq!(
            det_bareiss(&circulant(&row(&["1", "1", "2", "3"])).unwrap()).unwrap(),
            r("-35")
        );
        assert_eq!(det_bareiss(&Matrix::identity(6)).unwrap(), r("1"));
    }

    #[test]
    fn det_bareiss_rational_entries() {
        // Scaling a 3x3 matrix by 1/2 scales the determinant by 1/8.
        let m = Matrix::from_rows(vec![
            row(&["1/2", "1/2", "1"]),
            row(&["1", "1/2", "1/2"]),
            row(&["1/2", "1", "1/2"]),
        ])
        .unwrap();
        assert_eq!(det_bareiss(&m).unwrap(), r("1/2"));
    }

    #[test]
    fn inverse_exact_examples() {
        let c = circulant(&row(&["1", "1", "2"])).unwrap();
        let inv = inverse_exact(&c).unwrap();
        assert_eq!(inv, circulant(&row(&["-1/4", "3/4", "-1/4"])).unwrap());
        assert!(matmul(&c, &inv).unwrap().is_identity());

        let c4 = circulant(&row(&["1", "1", "2", "3"])).unwrap();
        let inv4 = inverse_exact(&c4).unwrap();
        assert_eq!(
            inv4,
            circulant(&row(&["-11/35", "17/35", "-4/35", "3/35"])).unwrap()
        );
        assert!(matmul(&c4, &inv4).unwrap().is_identity());

        assert!(matches!(
            inverse_exact(&q_matrix(4, 2)),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn spectral_norm_examples() {
        let c = circulant(&row(&["1", "1", "2"])).unwrap();
        let nrm = spectral_norm_float(&c, 1e-12).unwrap();
        assert!((nrm - 4.0).abs() <= 1e-9, "got {nrm}");

        let z = Matrix::zero(3, 3);
        assert_eq!(spectral_norm_float(&z, 1e-12).unwrap(), 0.0);

        let q = q_matrix(5, 2);
        let nrm = spectral_norm_float(&q, 1e-12).unwrap();
        assert!((nrm - 1.0).abs() <= 1e-9, "got {nrm}");

        assert!(spectral_norm_float(&c, 0.0).is_err());
    }

    #[test]
    fn norm_sandwich() {
        // max column 2-norm <= spectral norm <= Frobenius norm
        let c = circulant(&row(&["1", "1", "2", "3", "5"])).unwrap();
        let nrm = spectral_norm_float(&c, 1e-12).unwrap();
        let n = c.n_rows();
        let mut max_col: f64 = 0.0;
        let mut frob = 0.0;
        for j in 0..n {
            let mut col = 0.0;
            for i in 0..n {
                let v = c.at(i, j).to_f64();
                col += v * v;
                frob += v * v;
            }
            max_col = max_col.max(col.sqrt());
        }
        let frob = frob.sqrt();
        assert!(max_col <= nrm * (1.0 + 1e-6));
        assert!(nrm <= frob * (1.0 + 1e-6));
    }

    #[test]
    fn json_round_trip() {
        let m = circulant(&row(&["-11/35", "17/35", "-4/35", "3/35"])).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.starts_with(r#"{"rows":4,"cols":4,"data":[["#));
        let back: Matrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
