//! Mixed-radix arithmetic of a bounded Vilenkin group and of the natural
//! numbers written in the matching generalized number system.
//!
//! A point of the group is stored through its first `N` digits (its
//! *resolution*); grid functions of resolution `N` are indexed by the flat
//! little-endian index `sum x_j M_j`, so [`GroupSpec::digits_of`] and point
//! indexing share one code path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bounded Vilenkin group truncated to a finite number of levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    radices: Vec<usize>,
    powers: Vec<usize>,
    lambda: usize,
}

impl GroupSpec {
    /// Builds the group from a radix list. A list shorter than `levels` is
    /// repeated cyclically; a longer one is truncated.
    pub fn new(radices: &[usize], levels: usize) -> Result<Self> {
        if radices.is_empty() {
            return Err(Error::InvalidGroup("empty radix list".into()));
        }
        if levels == 0 {
            return Err(Error::InvalidGroup("levels must be at least 1".into()));
        }
        if let Some(bad) = radices.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidGroup(format!("radix {bad} is below 2")));
        }
        let radices: Vec<usize> = radices.iter().copied().cycle().take(levels).collect();
        let mut powers = Vec::with_capacity(levels + 1);
        powers.push(1usize);
        for (k, &m) in radices.iter().enumerate() {
            let next = powers[k].checked_mul(m).ok_or_else(|| {
                Error::Overflow(format!("M_{} does not fit in a machine integer", k + 1))
            })?;
            powers.push(next);
        }
        let lambda = radices.iter().copied().max().unwrap_or(2);
        Ok(Self {
            radices,
            powers,
            lambda,
        })
    }

    /// The Walsh (dyadic) group with `levels` levels.
    pub fn walsh(levels: usize) -> Result<Self> {
        Self::new(&[2], levels)
    }

    /// Smallest number of levels of the cyclic pattern `radices` whose top
    /// power exceeds `n`.
    pub fn covering(radices: &[usize], n: usize) -> Result<Self> {
        if radices.iter().any(|&m| m < 2) || radices.is_empty() {
            return Self::new(radices, 1);
        }
        let mut levels = 1;
        let mut power = radices[0];
        while power <= n {
            let m = radices[levels % radices.len()];
            power = power
                .checked_mul(m)
                .ok_or_else(|| Error::Overflow(format!("cannot cover {n}")))?;
            levels += 1;
        }
        Self::new(radices, levels)
    }

    pub fn levels(&self) -> usize {
        self.radices.len()
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn radix(&self, k: usize) -> usize {
        self.radices[k]
    }

    /// `M_0, ..., M_L`.
    pub fn powers(&self) -> &[usize] {
        &self.powers
    }

    /// `M_k` for `k <= levels`.
    pub fn power(&self, k: usize) -> usize {
        self.powers[k]
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn is_dyadic(&self) -> bool {
        self.radices.iter().all(|&m| m == 2)
    }

    /// Number of grid points at resolution `res`, i.e. `M_res`.
    pub fn size(&self, res: usize) -> Result<usize> {
        self.check_resolution(res)?;
        Ok(self.powers[res])
    }

    pub fn check_resolution(&self, res: usize) -> Result<()> {
        if res > self.levels() {
            Err(Error::Range(format!(
                "resolution {res} exceeds the {} stored levels",
                self.levels()
            )))
        } else {
            Ok(())
        }
    }

    /// The same radix sequence truncated or cyclically extended to `levels`.
    pub fn with_levels(&self, levels: usize) -> Result<Self> {
        Self::new(&self.radices, levels)
    }

    /// Vilenkin digit expansion of `n`.
    pub fn digits_of(&self, n: usize) -> Result<NatDigits> {
        let top = *self.powers.last().unwrap();
        if n >= top {
            return Err(Error::Overflow(format!(
                "{n} is not below M_{} = {top}",
                self.levels()
            )));
        }
        let mut digits = Vec::new();
        let mut rest = n;
        let mut k = 0;
        while rest > 0 {
            digits.push(rest % self.radices[k]);
            rest /= self.radices[k];
            k += 1;
        }
        Ok(NatDigits::from_parts(n, digits, &self.radices))
    }

    /// Reassembles `sum n_j M_j`.
    pub fn from_digits(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() > self.levels() {
            return Err(Error::Overflow("more digits than levels".into()));
        }
        let mut n = 0usize;
        for (j, &d) in digits.iter().enumerate() {
            if d >= self.radices[j] {
                return Err(Error::Range(format!("digit {d} at position {j} exceeds radix")));
            }
            n += d * self.powers[j];
        }
        Ok(n)
    }

    /// `n +^ k`: digitwise sum modulo `m_i`, reassembled with weights `M_i`.
    pub fn hat_add(&self, n: usize, k: usize) -> Result<usize> {
        self.hat_combine(n, k, |a, b, m| (a + b) % m)
    }

    /// `n -^ k`: digitwise difference modulo `m_i`.
    pub fn hat_sub(&self, n: usize, k: usize) -> Result<usize> {
        self.hat_combine(n, k, |a, b, m| (a + m - b) % m)
    }

    fn hat_combine(&self, n: usize, k: usize, op: impl Fn(usize, usize, usize) -> usize) -> Result<usize> {
        let top = *self.powers.last().unwrap();
        if n >= top || k >= top {
            return Err(Error::Overflow(format!("operands must be below {top}")));
        }
        let (mut a, mut b, mut out) = (n, k, 0usize);
        for j in 0..self.levels() {
            if a == 0 && b == 0 {
                break;
            }
            let m = self.radices[j];
            out += op(a % m, b % m, m) * self.powers[j];
            a /= m;
            b /= m;
        }
        Ok(out)
    }

    /// The point with flat index `index` at resolution `res`.
    pub fn point(&self, index: usize, res: usize) -> Result<Point> {
        let size = self.size(res)?;
        if index >= size {
            return Err(Error::Range(format!("index {index} outside grid of size {size}")));
        }
        let mut digits = Vec::with_capacity(res);
        let mut rest = index;
        for j in 0..res {
            digits.push(rest % self.radices[j]);
            rest /= self.radices[j];
        }
        Ok(Point { digits })
    }

    pub fn index_of(&self, x: &Point) -> Result<usize> {
        self.check_point(x)?;
        Ok(x
            .digits
            .iter()
            .enumerate()
            .map(|(j, &d)| d * self.powers[j])
            .sum())
    }

    /// `e_k` at resolution `res`.
    pub fn unit(&self, k: usize, res: usize) -> Result<Point> {
        if k >= res {
            return Err(Error::Range(format!("e_{k} needs resolution above {k}")));
        }
        self.check_resolution(res)?;
        let mut digits = vec![0; res];
        digits[k] = 1;
        Ok(Point { digits })
    }

    pub fn check_point(&self, x: &Point) -> Result<()> {
        self.check_resolution(x.resolution())?;
        for (j, &d) in x.digits.iter().enumerate() {
            if d >= self.radices[j] {
                return Err(Error::Range(format!("digit {d} at position {j} exceeds radix")));
            }
        }
        Ok(())
    }

    /// Group addition `x + y`.
    pub fn add(&self, x: &Point, y: &Point) -> Result<Point> {
        self.combine(x, y, |a, b, m| (a + b) % m)
    }

    /// Group subtraction `x - y`.
    pub fn sub(&self, x: &Point, y: &Point) -> Result<Point> {
        self.combine(x, y, |a, b, m| (a + m - b) % m)
    }

    pub fn neg(&self, x: &Point) -> Result<Point> {
        self.sub(&Point::zero(x.resolution()), x)
    }

    fn combine(&self, x: &Point, y: &Point, op: impl Fn(usize, usize, usize) -> usize) -> Result<Point> {
        if x.resolution() != y.resolution() {
            return Err(Error::Shape(format!(
                "resolutions {} and {} differ",
                x.resolution(),
                y.resolution()
            )));
        }
        self.check_point(x)?;
        self.check_point(y)?;
        let digits = x
            .digits
            .iter()
            .zip(&y.digits)
            .enumerate()
            .map(|(j, (&a, &b))| op(a, b, self.radices[j]))
            .collect();
        Ok(Point { digits })
    }

    /// Flat-index form of `x + y` at resolution `res` (no range checks).
    #[inline]
    pub fn index_add(&self, x: usize, y: usize, res: usize) -> usize {
        self.index_combine(x, y, res, |a, b, m| {
            let s = a + b;
            if s >= m {
                s - m
            } else {
                s
            }
        })
    }

    /// Flat-index form of `x - y` at resolution `res` (no range checks).
    #[inline]
    pub fn index_sub(&self, x: usize, y: usize, res: usize) -> usize {
        self.index_combine(x, y, res, |a, b, m| if a >= b { a - b } else { a + m - b })
    }

    #[inline]
    fn index_combine(&self, mut x: usize, mut y: usize, res: usize, op: impl Fn(usize, usize, usize) -> usize) -> usize {
        let mut out = 0;
        for j in 0..res {
            if x == 0 && y == 0 {
                break;
            }
            let m = self.radices[j];
            out += op(x % m, y % m, m) * self.powers[j];
            x /= m;
            y /= m;
        }
        out
    }

    /// `|x| = sum x_k / M_{k+1}` over the stored digits.
    pub fn point_norm(&self, x: &Point) -> Result<f64> {
        self.check_point(x)?;
        Ok(x
            .digits
            .iter()
            .enumerate()
            .map(|(k, &d)| d as f64 / self.powers[k + 1] as f64)
            .sum())
    }

    /// Partition of the complement of `I_N` into the shells `I_N^{k,l}`.
    pub fn coset_partition(&self, res: usize) -> Result<Vec<CosetShell>> {
        self.check_resolution(res)?;
        let mut shells = Vec::new();
        for k in 0..res {
            for l in k + 1..res {
                shells.push(CosetShell { k, l, resolution: res });
            }
            shells.push(CosetShell {
                k,
                l: res,
                resolution: res,
            });
        }
        Ok(shells)
    }
}

/// A point of the group, truncated to its first `N` digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub digits: Vec<usize>,
}

impl Point {
    pub fn zero(res: usize) -> Self {
        Self { digits: vec![0; res] }
    }

    pub fn resolution(&self) -> usize {
        self.digits.len()
    }

    /// Index of the first nonzero digit, i.e. the `s` with `x in I_s \ I_{s+1}`.
    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.digits.iter().position(|&d| d != 0)
    }
}

/// Digits of a natural number together with the derived statistics
/// `|n|`, `<n>` and `rho(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NatDigits {
    pub n: usize,
    /// `n_0, ..., n_{|n|}`; empty for `n = 0`.
    pub digits: Vec<usize>,
    radices: Vec<usize>,
    /// `|n|`, position of the highest nonzero digit.
    pub hi: usize,
    /// `<n>`, position of the lowest nonzero digit.
    pub lo: usize,
    pub rho: usize,
}

impl NatDigits {
    fn from_parts(n: usize, digits: Vec<usize>, radices: &[usize]) -> Self {
        // |0| = <0> = rho(0) = 0
        let hi = digits.len().saturating_sub(1);
        let lo = digits.iter().position(|&d| d != 0).unwrap_or(0);
        Self {
            n,
            radices: radices[..digits.len()].to_vec(),
            digits,
            hi,
            lo,
            rho: hi - lo,
        }
    }

    pub fn digit(&self, j: usize) -> usize {
        self.digits.get(j).copied().unwrap_or(0)
    }

    fn delta(&self, j: usize) -> usize {
        usize::from(self.digit(j) != 0)
    }

    /// `v(n) = sum_{j>=1} |delta_{j+1} - delta_j| + delta_0`.
    pub fn variation_v(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        let top = self.digits.len();
        (1..=top).map(|j| self.delta(j + 1).abs_diff(self.delta(j))).sum::<usize>() + self.delta(0)
    }

    /// Variant of [`variation_v`](Self::variation_v) whose sum also
    /// compares `delta_1` with `delta_0`.
    pub fn variation_v_from_zero(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        let top = self.digits.len();
        (0..=top).map(|j| self.delta(j + 1).abs_diff(self.delta(j))).sum::<usize>() + self.delta(0)
    }

    /// `v*(n) = sum_j |(-n_j) - 1| delta_j`, with `-n_j = (m_j - n_j) mod m_j`.
    pub fn variation_vstar(&self) -> usize {
        self.digits
            .iter()
            .zip(&self.radices)
            .filter(|(&d, _)| d != 0)
            .map(|(&d, &m)| ((m - d) % m).abs_diff(1))
            .sum()
    }
}

/// One shell `I_N^{k,l}` of the partition of the complement of `I_N`.
///
/// For `l < N` the shell holds the points with `x_0 = .. = x_{k-1} = 0`,
/// `x_k != 0`, `x_{k+1} = .. = x_{l-1} = 0`, `x_l != 0`; for `l = N` it holds
/// the points whose only nonzero digit below `N` is `x_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CosetShell {
    pub k: usize,
    pub l: usize,
    pub resolution: usize,
}

impl CosetShell {
    pub fn contains(&self, g: &GroupSpec, index: usize) -> bool {
        let mut rest = index;
        let mut nonzero = Vec::with_capacity(2);
        for j in 0..self.resolution {
            let d = rest % g.radix(j);
            rest /= g.radix(j);
            if d != 0 {
                nonzero.push(j);
                if self.l < self.resolution && nonzero.len() == 2 {
                    return nonzero[0] == self.k && nonzero[1] == self.l;
                }
                if self.l == self.resolution && nonzero.len() > 1 {
                    return false;
                }
            }
        }
        self.l == self.resolution && nonzero.len() == 1 && nonzero[0] == self.k
    }

    /// Flat indices of the grid points in the shell, at the shell's resolution.
    pub fn indices(&self, g: &GroupSpec) -> Vec<usize> {
        (0..g.power(self.resolution))
            .filter(|&i| self.contains(g, i))
            .collect()
    }

    /// Haar measure of the shell.
    pub fn measure(&self, g: &GroupSpec) -> f64 {
        let mk = g.radix(self.k) as f64;
        if self.l == self.resolution {
            (mk - 1.0) / g.power(self.resolution) as f64
        } else {
            let ml = g.radix(self.l) as f64;
            (mk - 1.0) * (ml - 1.0) / g.power(self.l + 1) as f64
        }
    }
}
