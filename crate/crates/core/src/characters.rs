//! Generalized Rademacher and Vilenkin functions.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::group::{GroupSpec, NatDigits, Point};

/// Per-level tables of `exp(2 pi i j / m_k)`.
#[derive(Debug, Clone)]
pub struct RootTables {
    tables: Vec<Vec<Complex64>>,
}

impl RootTables {
    pub fn new(g: &GroupSpec) -> Self {
        let tables = g.radices().iter().map(|&m| roots_of_unity(m)).collect();
        Self { tables }
    }

    /// `exp(2 pi i e / m_k)` for `e` taken modulo `m_k`.
    #[inline]
    pub fn root(&self, k: usize, e: usize) -> Complex64 {
        let t = &self.tables[k];
        t[e % t.len()]
    }

    pub fn level(&self, k: usize) -> &[Complex64] {
        &self.tables[k]
    }

    /// `psi_n(x)` for flat indices `n` and `x` at resolution `res`.
    #[inline]
    pub fn psi_index(&self, g: &GroupSpec, n: usize, x: usize, res: usize) -> Complex64 {
        let (mut n, mut x) = (n, x);
        let mut value = Complex64::new(1.0, 0.0);
        for k in 0..res {
            if n == 0 {
                break;
            }
            let m = g.radix(k);
            let e = (n % m) * (x % m);
            if e % m != 0 {
                value *= self.tables[k][e % m];
            }
            n /= m;
            x /= m;
        }
        value
    }
}

/// `exp(2 pi i j / m)` for `j = 0..m`, with the real quarter points exact.
pub fn roots_of_unity(m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|j| {
            if 4 * j % m == 0 {
                match 4 * j / m {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                }
            } else {
                Complex64::from_polar(1.0, TAU * j as f64 / m as f64)
            }
        })
        .collect()
}

/// `r_k(x) = exp(2 pi i x_k / m_k)`.
pub fn rademacher(g: &GroupSpec, k: usize, x: &Point) -> Result<Complex64> {
    g.check_point(x)?;
    if k >= x.resolution() {
        return Err(Error::Range(format!(
            "r_{k} needs a point of resolution above {k}"
        )));
    }
    Ok(roots_of_unity(g.radix(k))[x.digits[k]])
}

/// `psi_n(x) = prod r_k(x)^{n_k}`.
pub fn vilenkin_psi(g: &GroupSpec, n: &NatDigits, x: &Point) -> Result<Complex64> {
    g.check_point(x)?;
    if n.n != 0 && n.hi >= x.resolution() {
        return Err(Error::Shape(format!(
            "psi_{} needs resolution above {}",
            n.n, n.hi
        )));
    }
    let mut value = Complex64::new(1.0, 0.0);
    for (k, &d) in n.digits.iter().enumerate() {
        if d != 0 {
            let m = g.radix(k);
            value *= roots_of_unity(m)[(d * x.digits[k]) % m];
        }
    }
    Ok(value)
}

/// Walsh function `w_n(x)` on the dyadic group.
pub fn walsh(g: &GroupSpec, n: &NatDigits, x: &Point) -> Result<f64> {
    if !g.is_dyadic() {
        return Err(Error::Domain("Walsh functions need m = 2 at every level".into()));
    }
    g.check_point(x)?;
    if n.n != 0 && n.hi >= x.resolution() {
        return Err(Error::Shape(format!("w_{} needs resolution above {}", n.n, n.hi)));
    }
    let parity: usize = n
        .digits
        .iter()
        .zip(&x.digits)
        .map(|(&a, &b)| a * b)
        .sum();
    Ok(if parity % 2 == 0 { 1.0 } else { -1.0 })
}
