//! Summability means as weighted combinations of partial sums.
//!
//! Every mean is stored as weights `w_0..w_n` with `mean_n f = sum_k w_k S_k f`
//! and applied through the Fourier multiplier `j -> sum_{k>j} w_k`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{dirichlet_weights_to_multiplier, harmonic};
use crate::spectral::{apply_multiplier, GridFunction};

/// Monotonicity of a weight sequence on its cached range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Nonincreasing,
    Nondecreasing,
    General,
}

/// Nörlund / T weights `q_0, q_1, ...` with partial sums `Q_n = sum_{k<n} q_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSequence {
    label: String,
    q: Vec<f64>,
    partial: Vec<f64>,
    class: Monotonicity,
}

impl WeightSequence {
    /// Evaluates `f(k)` for `k < len`.
    pub fn from_fn(label: &str, len: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::explicit(label, (0..len).map(f).collect())
    }

    pub fn explicit(label: &str, q: Vec<f64>) -> Result<Self> {
        if let Some((k, v)) = q.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::DegenerateWeights(format!("q_{k} = {v} is not a nonnegative number")));
        }
        let mut partial = Vec::with_capacity(q.len() + 1);
        // Neumaier compensated running sum
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        partial.push(0.0);
        for &v in &q {
            let t = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - t) + v;
            } else {
                comp += (v - t) + sum;
            }
            sum = t;
            partial.push(sum + comp);
        }
        let class = if q.windows(2).all(|w| w[1] <= w[0]) {
            Monotonicity::Nonincreasing
        } else if q.windows(2).all(|w| w[1] >= w[0]) {
            Monotonicity::Nondecreasing
        } else {
            Monotonicity::General
        };
        Ok(Self {
            label: label.to_string(),
            q,
            partial,
            class,
        })
    }

    /// `q_k = 1`.
    pub fn ones(len: usize) -> Self {
        Self::explicit("ones", vec![1.0; len]).expect("unit weights are valid")
    }

    /// `q_0 = 1`, `q_k = k^{alpha-1}`.
    pub fn power(alpha: f64, len: usize) -> Result<Self> {
        Self::from_fn(&format!("power({alpha})"), len, |k| {
            if k == 0 {
                1.0
            } else {
                (k as f64).powf(alpha - 1.0)
            }
        })
    }

    /// `q_k = 1 / (k + 1)`.
    pub fn harmonic(len: usize) -> Self {
        Self::from_fn("harmonic", len, |k| 1.0 / (k + 1) as f64).expect("harmonic weights are valid")
    }

    /// `q_k = log(k + 2)`.
    pub fn log(len: usize) -> Self {
        Self::from_fn("log", len, |k| ((k + 2) as f64).ln()).expect("log weights are valid")
    }

    /// Checks a declared class against the cached values.
    pub fn with_class(self, declared: Monotonicity) -> Result<Self> {
        let ok = match declared {
            Monotonicity::General => true,
            Monotonicity::Nonincreasing => self.q.windows(2).all(|w| w[1] <= w[0]),
            Monotonicity::Nondecreasing => self.q.windows(2).all(|w| w[1] >= w[0]),
        };
        if !ok {
            return Err(Error::InvalidParams(format!(
                "weights `{}` are not {declared:?}",
                self.label
            )));
        }
        Ok(Self { class: declared, ..self })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn class(&self) -> Monotonicity {
        self.class
    }

    pub fn values(&self) -> &[f64] {
        &self.q
    }

    pub fn q(&self, k: usize) -> Result<f64> {
        self.q
            .get(k)
            .copied()
            .ok_or_else(|| Error::Range(format!("q_{k} beyond the {} cached weights", self.q.len())))
    }

    /// `Q_n = sum_{k<n} q_k`.
    pub fn big_q(&self, n: usize) -> Result<f64> {
        self.partial
            .get(n)
            .copied()
            .ok_or_else(|| Error::Range(format!("Q_{n} beyond the {} cached weights", self.q.len())))
    }

    fn positive_q(&self, n: usize) -> Result<f64> {
        let qn = self.big_q(n)?;
        if qn <= 0.0 {
            return Err(Error::DegenerateWeights(format!("Q_{n} = 0")));
        }
        Ok(qn)
    }
}

/// Binomial-type coefficients `A_n^alpha = (alpha+1)...(alpha+n)/n!`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CesaroCoeffs {
    pub alpha: f64,
    pub table: Vec<f64>,
}

impl CesaroCoeffs {
    /// `A_0^alpha .. A_{n_max}^alpha` with `A_0^alpha = 1`.
    pub fn new(alpha: f64, n_max: usize) -> Result<Self> {
        if !alpha.is_finite() || (alpha < 0.0 && alpha.fract() == 0.0) {
            return Err(Error::Domain(format!("alpha = {alpha} is a negative integer")));
        }
        let mut table = Vec::with_capacity(n_max + 1);
        table.push(1.0);
        for n in 1..=n_max {
            let prev = table[n - 1];
            table.push(prev * (alpha + n as f64) / n as f64);
        }
        Ok(Self { alpha, table })
    }

    pub fn get(&self, n: usize) -> Result<f64> {
        self.table
            .get(n)
            .copied()
            .ok_or_else(|| Error::Range(format!("A_{n} beyond the cached table")))
    }
}

/// A summability method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MeanKind {
    /// `S_n` itself.
    Partial,
    Fejer,
    Cesaro { alpha: f64 },
    /// `U_n^alpha = (1/A_n^alpha) sum_{k<n} A_k^{alpha-1} S_k`.
    U { alpha: f64 },
    /// `V_n^alpha = (1/Q_n) sum_{k<n} q_k S_k` with `q_0 = 1`, `q_k = k^{alpha-1}`.
    V { alpha: f64 },
    RieszLog,
    NorlundLog,
    Norlund(WeightSequence),
    T(WeightSequence),
}

impl MeanKind {
    pub fn name(&self) -> String {
        match self {
            MeanKind::Partial => "partial".into(),
            MeanKind::Fejer => "fejer".into(),
            MeanKind::Cesaro { alpha } => format!("cesaro({alpha})"),
            MeanKind::U { alpha } => format!("u({alpha})"),
            MeanKind::V { alpha } => format!("v({alpha})"),
            MeanKind::RieszLog => "riesz_log".into(),
            MeanKind::NorlundLog => "norlund_log".into(),
            MeanKind::Norlund(q) => format!("norlund({})", q.label()),
            MeanKind::T(q) => format!("t({})", q.label()),
        }
    }

    /// Whether the mean maps constants to themselves at every index.
    pub fn is_regular_on_constants(&self) -> bool {
        !matches!(self, MeanKind::U { .. } | MeanKind::V { .. } | MeanKind::T(_))
    }

    /// Smallest admissible index.
    pub fn min_index(&self) -> usize {
        match self {
            MeanKind::RieszLog | MeanKind::NorlundLog => 2,
            MeanKind::Partial => 0,
            _ => 1,
        }
    }

    /// Weights `w_0..w_n` with `mean_n = sum_k w_k S_k`.
    pub fn weights(&self, n: usize) -> Result<Vec<f64>> {
        if n < self.min_index() {
            return Err(Error::Range(format!(
                "{} needs n >= {}",
                self.name(),
                self.min_index()
            )));
        }
        let mut w = vec![0.0; n + 1];
        match self {
            MeanKind::Partial => w[n] = 1.0,
            MeanKind::Fejer => {
                for wk in &mut w[1..] {
                    *wk = 1.0 / n as f64;
                }
            }
            MeanKind::Cesaro { alpha } => {
                let lower = CesaroCoeffs::new(alpha - 1.0, n)?;
                let upper = CesaroCoeffs::new(*alpha, n)?;
                let norm = upper.get(n - 1)?;
                for (k, wk) in w.iter_mut().enumerate().skip(1) {
                    *wk = lower.get(n - k)? / norm;
                }
            }
            MeanKind::U { alpha } => {
                let lower = CesaroCoeffs::new(alpha - 1.0, n)?;
                let norm = CesaroCoeffs::new(*alpha, n)?.get(n)?;
                for (k, wk) in w.iter_mut().enumerate().take(n).skip(1) {
                    *wk = lower.get(k)? / norm;
                }
            }
            MeanKind::V { alpha } => {
                let q = WeightSequence::power(*alpha, n + 1)?;
                let qn = q.positive_q(n)?;
                for (k, wk) in w.iter_mut().enumerate().take(n).skip(1) {
                    *wk = q.q(k)? / qn;
                }
            }
            MeanKind::RieszLog => {
                let l = harmonic(n);
                for (k, wk) in w.iter_mut().enumerate().take(n).skip(1) {
                    *wk = 1.0 / (k as f64 * l);
                }
            }
            MeanKind::NorlundLog => {
                let l = harmonic(n);
                for (k, wk) in w.iter_mut().enumerate().take(n).skip(1) {
                    *wk = 1.0 / ((n - k) as f64 * l);
                }
            }
            MeanKind::Norlund(q) => {
                if q.q(0)? <= 0.0 {
                    return Err(Error::DegenerateWeights("Nörlund means need q_0 > 0".into()));
                }
                let qn = q.positive_q(n)?;
                for (k, wk) in w.iter_mut().enumerate().skip(1) {
                    *wk = q.q(n - k)? / qn;
                }
            }
            MeanKind::T(q) => {
                let qn = q.positive_q(n)?;
                for (k, wk) in w.iter_mut().enumerate().take(n).skip(1) {
                    *wk = q.q(k)? / qn;
                }
            }
        }
        Ok(w)
    }

    /// `mean_n f` through its Fourier multiplier.
    pub fn apply(&self, f: &GridFunction, n: usize) -> Result<GridFunction> {
        if n > f.len() {
            return Err(Error::Range(format!(
                "index {n} exceeds the grid rank M_N = {}",
                f.len()
            )));
        }
        let w = self.weights(n)?;
        Ok(apply_multiplier(f, &dirichlet_weights_to_multiplier(&w)))
    }
}

pub fn fejer_mean(f: &GridFunction, n: usize) -> Result<GridFunction> {
    MeanKind::Fejer.apply(f, n)
}

pub fn cesaro_mean(f: &GridFunction, n: usize, alpha: f64) -> Result<GridFunction> {
    MeanKind::Cesaro { alpha }.apply(f, n)
}

pub fn u_mean(f: &GridFunction, n: usize, alpha: f64) -> Result<GridFunction> {
    MeanKind::U { alpha }.apply(f, n)
}

pub fn v_mean(f: &GridFunction, n: usize, alpha: f64) -> Result<GridFunction> {
    MeanKind::V { alpha }.apply(f, n)
}

pub fn riesz_log_mean(f: &GridFunction, n: usize) -> Result<GridFunction> {
    MeanKind::RieszLog.apply(f, n)
}

pub fn norlund_log_mean(f: &GridFunction, n: usize) -> Result<GridFunction> {
    MeanKind::NorlundLog.apply(f, n)
}

pub fn norlund_mean(f: &GridFunction, n: usize, q: &WeightSequence) -> Result<GridFunction> {
    MeanKind::Norlund(q.clone()).apply(f, n)
}

pub fn t_mean(f: &GridFunction, n: usize, q: &WeightSequence) -> Result<GridFunction> {
    MeanKind::T(q.clone()).apply(f, n)
}

/// Fejér means `sigma_1 .. sigma_n` as grid functions.
fn fejer_table(f: &GridFunction, n: usize) -> Result<Vec<GridFunction>> {
    let mut out = vec![GridFunction::zeros(&f.group, f.resolution)?];
    for j in 1..=n {
        out.push(fejer_mean(f, j)?);
    }
    Ok(out)
}

/// Nörlund mean from Fejér means:
/// `(1/Q_n)(sum_{j=1}^{n-1} (q_{n-j} - q_{n-j-1}) j sigma_j + q_0 n sigma_n)`.
pub fn norlund_mean_abel(f: &GridFunction, n: usize, q: &WeightSequence) -> Result<GridFunction> {
    let sigma = fejer_table(f, n)?;
    let qn = q.positive_q(n)?;
    let mut acc = sigma[n].scale(q.q(0)? * n as f64);
    for (j, s) in sigma.iter().enumerate().take(n).skip(1) {
        let c = (q.q(n - j)? - q.q(n - j - 1)?) * j as f64;
        acc = acc.add(&s.scale(c))?;
    }
    Ok(acc.scale(1.0 / qn))
}

/// T mean from Fejér means:
/// `(1/Q_n)(sum_{j=0}^{n-2} (q_j - q_{j+1}) j sigma_j + q_{n-1}(n-1) sigma_{n-1})`.
pub fn t_mean_abel(f: &GridFunction, n: usize, q: &WeightSequence) -> Result<GridFunction> {
    if n == 0 {
        return Err(Error::Range("T_n needs n >= 1".into()));
    }
    let sigma = fejer_table(f, n.saturating_sub(1).max(1))?;
    let qn = q.positive_q(n)?;
    let mut acc = GridFunction::zeros(&f.group, f.resolution)?;
    for j in 1..n.saturating_sub(1) {
        let c = (q.q(j)? - q.q(j + 1)?) * j as f64;
        acc = acc.add(&sigma[j].scale(c))?;
    }
    if n >= 2 {
        acc = acc.add(&sigma[n - 1].scale(q.q(n - 1)? * (n - 1) as f64))?;
    }
    Ok(acc.scale(1.0 / qn))
}

/// One row of a regularity table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityRow {
    pub n: usize,
    pub ratio: f64,
    pub scaled: f64,
    pub envelope_ok: Option<bool>,
}

/// `q_{n-1}/Q_n` and `n q_{n-1}/Q_n`, with the monotone envelope
/// `n q_{n-1} <= Q_n <= n q_0` (nonincreasing) or its mirror (nondecreasing).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub label: String,
    pub class: Monotonicity,
    pub rows: Vec<RegularityRow>,
}

pub fn regularity_report(q: &WeightSequence, n_max: usize) -> Result<RegularityReport> {
    let q0 = q.q(0)?;
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let qn = q.big_q(n)?;
        let last = q.q(n - 1)?;
        let ratio = if qn > 0.0 { last / qn } else { f64::INFINITY };
        let slack = 1e-12 * qn.abs().max(1.0);
        let envelope_ok = match q.class() {
            Monotonicity::Nonincreasing => {
                Some(n as f64 * last <= qn + slack && qn <= n as f64 * q0 + slack)
            }
            Monotonicity::Nondecreasing => {
                Some(n as f64 * q0 <= qn + slack && qn <= n as f64 * last + slack)
            }
            Monotonicity::General => None,
        };
        rows.push(RegularityRow {
            n,
            ratio,
            scaled: n as f64 * ratio,
            envelope_ok,
        });
    }
    Ok(RegularityReport {
        label: q.label().to_string(),
        class: q.class(),
        rows,
    })
}

/// `sup_{n in indices} |mean_n f(x)| / w(n)` pointwise.
pub fn weighted_maximal(
    f: &GridFunction,
    kind: &MeanKind,
    indices: &[usize],
    weight: impl Fn(usize) -> f64 + Sync,
) -> Result<GridFunction> {
    if indices.is_empty() {
        return Err(Error::Range("empty index range".into()));
    }
    let means: Vec<Vec<f64>> = indices
        .par_iter()
        .map(|&n| -> Result<Vec<f64>> {
            let w = weight(n);
            Ok(kind.apply(f, n)?.values.iter().map(|v| v.norm() / w).collect())
        })
        .collect::<Result<_>>()?;
    let mut sup = vec![0.0f64; f.len()];
    for row in &means {
        for (s, &v) in sup.iter_mut().zip(row) {
            *s = s.max(v);
        }
    }
    GridFunction::from_real(&f.group, f.resolution, &sup)
}

/// `M_0, M_1, ..., M_N` for the restricted maximal operators.
pub fn power_indices(f: &GridFunction) -> Vec<usize> {
    f.group.powers()[..=f.resolution].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::kernels::summation_kernel;
    use crate::spectral::{convolve, partial_sum};
    use num_complex::Complex64;

    /// `sum_k w_k S_k f` with each partial sum computed separately.
    fn literal(f: &GridFunction, w: &[f64]) -> GridFunction {
        let mut acc = GridFunction::zeros(&f.group, f.resolution).unwrap();
        for (k, &wk) in w.iter().enumerate() {
            if wk != 0.0 {
                acc = acc.add(&partial_sum(f, k).unwrap().scale(wk)).unwrap();
            }
        }
        acc
    }

    fn kinds() -> Vec<MeanKind> {
        vec![
            MeanKind::Partial,
            MeanKind::Fejer,
            MeanKind::Cesaro { alpha: 0.5 },
            MeanKind::U { alpha: 0.5 },
            MeanKind::V { alpha: 0.5 },
            MeanKind::RieszLog,
            MeanKind::NorlundLog,
            MeanKind::Norlund(WeightSequence::log(80)),
            MeanKind::T(WeightSequence::harmonic(80)),
        ]
    }

    #[test]
    fn multiplier_matches_literal_and_kernel() {
        let g = GroupSpec::new(&[2, 3], 5).unwrap();
        let f = GridFunction::random(&g, 4, 21).unwrap();
        for kind in kinds() {
            for n in kind.min_index().max(1)..=f.len().min(24) {
                let fast = kind.apply(&f, n).unwrap();
                let slow = literal(&f, &kind.weights(n).unwrap());
                assert!(fast.max_diff(&slow).unwrap() < 1e-10, "{} n={n}", kind.name());
                let kern = summation_kernel(&kind, n, &g, 4).unwrap();
                let conv = convolve(&f, &kern).unwrap();
                assert!(fast.max_diff(&conv).unwrap() < 1e-10, "{} n={n}", kind.name());
            }
        }
    }

    #[test]
    fn fejer_examples() {
        let w = GroupSpec::walsh(3).unwrap();
        let f = GridFunction::random(&w, 3, 2).unwrap();
        let s1 = fejer_mean(&f, 1).unwrap();
        let c0 = f.integral();
        assert!(s1.values.iter().all(|v| (v - c0).norm() < 1e-12));
        let direct = (1..=5)
            .map(|k| partial_sum(&f, k).unwrap())
            .reduce(|a, b| a.add(&b).unwrap())
            .unwrap()
            .scale(0.2);
        assert!(fejer_mean(&f, 5).unwrap().max_diff(&direct).unwrap() < 1e-12);
    }

    #[test]
    fn cesaro_coefficients() {
        let a1 = CesaroCoeffs::new(1.0, 10).unwrap();
        for n in 0..=10 {
            assert!((a1.get(n).unwrap() - (n + 1) as f64).abs() < 1e-12);
        }
        let h = CesaroCoeffs::new(0.5, 6).unwrap();
        assert!((h.get(2).unwrap() - 15.0 / 8.0).abs() < 1e-15);
        let lower = CesaroCoeffs::new(-0.5, 6).unwrap();
        let sum: f64 = (0..=6).map(|k| lower.get(6 - k).unwrap()).sum();
        assert!((sum - h.get(6).unwrap()).abs() < 1e-12);
        assert!(matches!(CesaroCoeffs::new(-2.0, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn cesaro_one_is_fejer() {
        let g = GroupSpec::new(&[3], 3).unwrap();
        let f = GridFunction::random(&g, 3, 8).unwrap();
        for n in 1..=27 {
            let a = cesaro_mean(&f, n, 1.0).unwrap();
            assert!(a.max_diff(&fejer_mean(&f, n).unwrap()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn constants() {
        let g = GroupSpec::walsh(4).unwrap();
        let c = Complex64::new(2.0, -1.0);
        let f = GridFunction::constant(&g, 4, c).unwrap();
        for kind in kinds() {
            for n in kind.min_index().max(1)..=16 {
                let out = kind.apply(&f, n).unwrap();
                let w = kind.weights(n).unwrap();
                let expected = c * w[1..].iter().sum::<f64>();
                assert!(out.values.iter().all(|v| (v - expected).norm() < 1e-12));
                if kind.is_regular_on_constants() {
                    assert!((expected - c).norm() < 1e-12, "{} n={n}", kind.name());
                }
            }
        }
        assert!(u_mean(&f, 1, 0.5).unwrap().sup_norm() < 1e-15);
        let r2 = riesz_log_mean(&GridFunction::random(&g, 4, 1).unwrap(), 2).unwrap();
        let s1 = partial_sum(&GridFunction::random(&g, 4, 1).unwrap(), 1).unwrap();
        assert!(r2.max_diff(&s1).unwrap() < 1e-12);
    }

    #[test]
    fn abel_forms() {
        let w = GroupSpec::walsh(4).unwrap();
        let f = GridFunction::random(&w, 4, 13).unwrap();
        for q in [WeightSequence::log(20), WeightSequence::harmonic(20), WeightSequence::power(0.3, 20).unwrap()] {
            for n in 1..=12 {
                let a = norlund_mean(&f, n, &q).unwrap();
                assert!(a.max_diff(&norlund_mean_abel(&f, n, &q).unwrap()).unwrap() < 1e-10);
                let t = t_mean(&f, n, &q).unwrap();
                assert!(t.max_diff(&t_mean_abel(&f, n, &q).unwrap()).unwrap() < 1e-10);
            }
        }
        let ones = WeightSequence::ones(20);
        for n in 1..=16 {
            let a = norlund_mean(&f, n, &ones).unwrap();
            assert!(a.max_diff(&fejer_mean(&f, n).unwrap()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn degenerate_weights() {
        let w = GroupSpec::walsh(3).unwrap();
        let f = GridFunction::random(&w, 3, 1).unwrap();
        let zero = WeightSequence::explicit("zero", vec![0.0; 8]).unwrap();
        assert!(matches!(norlund_mean(&f, 3, &zero), Err(Error::DegenerateWeights(_))));
        assert!(matches!(t_mean(&f, 3, &zero), Err(Error::DegenerateWeights(_))));
        assert!(WeightSequence::explicit("neg", vec![1.0, -1.0]).is_err());
        assert!(matches!(fejer_mean(&f, 9), Err(Error::Range(_))));
    }

    #[test]
    fn regularity_tables() {
        let r = regularity_report(&WeightSequence::ones(10), 10).unwrap();
        for row in &r.rows {
            assert!((row.ratio - 1.0 / row.n as f64).abs() < 1e-15);
            assert_eq!(row.envelope_ok, Some(true));
        }
        let p = regularity_report(&WeightSequence::power(0.5, 400).unwrap(), 400).unwrap();
        assert!(p.rows[399].ratio < p.rows[9].ratio);
        assert!(p.rows.iter().all(|r| r.envelope_ok == Some(true)));
        let lg = WeightSequence::from_fn("log k^0.5", 300, |k| if k == 0 { 0.0 } else { 0.5 * (k as f64).ln() }).unwrap();
        let rep = regularity_report(&lg, 300).unwrap();
        assert!(rep.rows[299].scaled < 2.0);
    }

    #[test]
    fn maximal_operators() {
        let w = GroupSpec::walsh(4).unwrap();
        let f = GridFunction::random(&w, 4, 4).unwrap();
        let restricted = weighted_maximal(&f, &MeanKind::Partial, &power_indices(&f), |_| 1.0).unwrap();
        for (s, v) in restricted.values.iter().zip(&f.values) {
            assert!(s.re + 1e-12 >= v.norm());
        }
        let c = GridFunction::constant(&w, 4, Complex64::new(3.0, 0.0)).unwrap();
        let star = weighted_maximal(&c, &MeanKind::Fejer, &(1..=16).collect::<Vec<_>>(), |_| 1.0).unwrap();
        assert!(star.values.iter().all(|v| (v.re - 3.0).abs() < 1e-12));
        let p = 0.4f64;
        let idx: Vec<usize> = (1..=8).collect();
        let fast = weighted_maximal(&f, &MeanKind::Fejer, &idx, |n| ((n + 1) as f64).powf(1.0 / p - 2.0)).unwrap();
        for x in 0..f.len() {
            let brute = idx
                .iter()
                .map(|&n| fejer_mean(&f, n).unwrap().values[x].norm() / ((n + 1) as f64).powf(1.0 / p - 2.0))
                .fold(0.0, f64::max);
            assert!((fast.values[x].re - brute).abs() < 1e-12);
        }
        assert!(weighted_maximal(&f, &MeanKind::Fejer, &[], |_| 1.0).is_err());
    }
}
