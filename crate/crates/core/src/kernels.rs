//! Dirichlet, Fejér and weighted summation kernels, Lebesgue constants.
//!
//! Closed forms are evaluated pointwise from the digits of `x`; every kernel
//! also has an independent evaluator (direct character sums or Fourier
//! multipliers) so the two can be compared.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characters::RootTables;
use crate::error::{Error, Result};
use crate::group::{GroupSpec, NatDigits};
use crate::means::MeanKind;
use crate::spectral::{transform_inverse, GridFunction, Spectrum};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Checks that every character `psi_k`, `k < n`, is constant on rank-`res`
/// cosets.
pub fn check_kernel_resolution(g: &GroupSpec, n: usize, res: usize) -> Result<()> {
    g.check_resolution(res)?;
    if n > g.power(res) {
        return Err(Error::Shape(format!(
            "kernel index {n} needs a resolution with M_N >= {n}, got M_{res} = {}",
            g.power(res)
        )));
    }
    Ok(())
}

/// Pointwise closed-form evaluator for `D_n`, `K_{M_a}` and `n K_n`.
#[derive(Debug, Clone)]
pub struct KernelEval {
    group: GroupSpec,
    roots: RootTables,
    res: usize,
}

impl KernelEval {
    pub fn new(g: &GroupSpec, res: usize) -> Result<Self> {
        g.check_resolution(res)?;
        Ok(Self {
            group: g.clone(),
            roots: RootTables::new(g),
            res,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn resolution(&self) -> usize {
        self.res
    }

    /// Digits of the grid point with flat index `x`.
    pub fn digits(&self, x: usize) -> Vec<usize> {
        let mut rest = x;
        (0..self.res)
            .map(|j| {
                let d = rest % self.group.radix(j);
                rest /= self.group.radix(j);
                d
            })
            .collect()
    }

    fn first_nonzero(xd: &[usize]) -> usize {
        xd.iter().position(|&d| d != 0).unwrap_or(xd.len())
    }

    /// `r_k(x)`, taking digits at or above the resolution as zero.
    #[inline]
    fn rad(&self, k: usize, xd: &[usize]) -> Complex64 {
        match xd.get(k) {
            Some(&d) if d != 0 => self.roots.root(k, d),
            _ => ONE,
        }
    }

    fn psi(&self, n: usize, xd: &[usize]) -> Complex64 {
        let mut rest = n;
        let mut value = ONE;
        let mut k = 0;
        while rest > 0 && k < xd.len() {
            let m = self.group.radix(k);
            let e = (rest % m) * xd[k];
            if e % m != 0 {
                value *= self.roots.root(k, e);
            }
            rest /= m;
            k += 1;
        }
        value
    }

    /// `D_{M_a}(x)`.
    pub fn dirichlet_power_at(&self, a: usize, xd: &[usize]) -> f64 {
        if Self::first_nonzero(xd) >= a {
            self.group.power(a) as f64
        } else {
            0.0
        }
    }

    /// `D_n(x)` via `psi_n(x) sum_j D_{M_j}(x) sum_{k=m_j-n_j}^{m_j-1} r_j(x)^k`.
    pub fn dirichlet_at(&self, n: usize, xd: &[usize]) -> Complex64 {
        if n == 0 {
            return ZERO;
        }
        let s = Self::first_nonzero(xd);
        if s == xd.len() {
            return Complex64::new(n as f64, 0.0);
        }
        let mut sum = ZERO;
        let mut rest = n;
        let mut j = 0;
        while rest > 0 && j <= s {
            let m = self.group.radix(j);
            let nj = rest % m;
            if j < s {
                sum += self.group.power(j) as f64 * nj as f64;
            } else if nj > 0 {
                let inner: Complex64 = (m - nj..m).map(|k| self.roots.root(s, k * xd[s])).sum();
                sum += inner * self.group.power(s) as f64;
            }
            rest /= m;
            j += 1;
        }
        self.psi(n, xd) * sum
    }

    /// `K_{M_a}(x)` by its case analysis.
    pub fn fejer_power_at(&self, a: usize, xd: &[usize]) -> Complex64 {
        let t = Self::first_nonzero(xd);
        if t >= a {
            return Complex64::new((self.group.power(a) as f64 + 1.0) / 2.0, 0.0);
        }
        if xd[t + 1..a].iter().any(|&d| d != 0) {
            return ZERO;
        }
        self.group.power(t) as f64 / (ONE - self.roots.root(t, xd[t]))
    }

    /// `s M_a K_{s M_a}(x)` composed from `D_{M_a}` and `K_{M_a}`.
    pub fn fejer_multiple_sum_at(&self, s: usize, a: usize, xd: &[usize]) -> Complex64 {
        let r = self.rad(a, xd);
        let (mut geo, mut acc, mut pow) = (ZERO, ZERO, ONE);
        for _ in 0..s {
            acc += geo;
            geo += pow;
            pow *= r;
        }
        let ma = self.group.power(a) as f64;
        acc * ma * self.dirichlet_power_at(a, xd) + geo * ma * self.fejer_power_at(a, xd)
    }

    /// `n K_n(x) = sum_{k=1}^{n} D_k(x)` by peeling off the top digit.
    pub fn fejer_sum_at(&self, n: usize, xd: &[usize]) -> Complex64 {
        if n == 0 {
            return ZERO;
        }
        let powers = self.group.powers();
        let a = powers.iter().rposition(|&p| p <= n).unwrap_or(0);
        let s = n / powers[a];
        let rest = n % powers[a];
        let r = self.rad(a, xd);
        let head = self.fejer_multiple_sum_at(s, a, xd);
        if rest == 0 {
            return head;
        }
        let geo: Complex64 = (0..s).map(|i| r.powu(i as u32)).sum();
        let d_sma = geo * self.dirichlet_power_at(a, xd);
        head + d_sma * rest as f64 + r.powu(s as u32) * self.fejer_sum_at(rest, xd)
    }

    /// `K_n(x)`.
    pub fn fejer_at(&self, n: usize, xd: &[usize]) -> Complex64 {
        self.fejer_sum_at(n, xd) / n as f64
    }

    /// Samples a pointwise formula over the grid.
    pub fn grid(&self, f: impl Fn(&[usize]) -> Complex64) -> GridFunction {
        let size = self.group.power(self.res);
        let values = (0..size).map(|x| f(&self.digits(x))).collect();
        GridFunction {
            group: self.group.clone(),
            resolution: self.res,
            values,
        }
    }
}

/// `D_n` from its closed form.
pub fn dirichlet(g: &GroupSpec, n: usize, res: usize) -> Result<GridFunction> {
    check_kernel_resolution(g, n, res)?;
    let ev = KernelEval::new(g, res)?;
    Ok(ev.grid(|xd| ev.dirichlet_at(n, xd)))
}

/// `sum_j c_j psi_j` by direct character sums.
pub fn character_sum(g: &GroupSpec, coeffs: &[Complex64], res: usize) -> Result<GridFunction> {
    check_kernel_resolution(g, coeffs.len(), res)?;
    let t = RootTables::new(g);
    GridFunction::from_fn(g, res, |x| {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(|(j, &c)| c * t.psi_index(g, j, x, res))
            .sum()
    })
}

/// `D_n = sum_{k<n} psi_k` by direct summation.
pub fn dirichlet_naive(g: &GroupSpec, n: usize, res: usize) -> Result<GridFunction> {
    character_sum(g, &vec![ONE; n], res)
}

/// `K_n = (1/n) sum_{k=1}^{n} D_k` from the closed-form composition.
pub fn fejer(g: &GroupSpec, n: usize, res: usize) -> Result<GridFunction> {
    if n == 0 {
        return Err(Error::Range("K_n needs n >= 1".into()));
    }
    check_kernel_resolution(g, n, res)?;
    let ev = KernelEval::new(g, res)?;
    Ok(ev.grid(|xd| ev.fejer_at(n, xd)))
}

/// `K_n` as `sum_{j<n} (1 - j/n) psi_j` by direct summation.
pub fn fejer_naive(g: &GroupSpec, n: usize, res: usize) -> Result<GridFunction> {
    if n == 0 {
        return Err(Error::Range("K_n needs n >= 1".into()));
    }
    let coeffs: Vec<Complex64> = (0..n)
        .map(|j| Complex64::new((n - j) as f64 / n as f64, 0.0))
        .collect();
    character_sum(g, &coeffs, res)
}

/// Fourier multiplier of `sum_{k} w_k D_k`: entry `j` is `sum_{k>j} w_k`.
pub fn dirichlet_weights_to_multiplier(w: &[f64]) -> Vec<f64> {
    let n = w.len().saturating_sub(1);
    let mut mult = vec![0.0; n];
    let mut acc = 0.0;
    for j in (0..n).rev() {
        acc += w[j + 1];
        mult[j] = acc;
    }
    mult
}

/// `sum_{k=0}^{n} w_k D_k` through its Fourier multiplier.
pub fn weighted_dirichlet(g: &GroupSpec, w: &[f64], res: usize) -> Result<GridFunction> {
    let mult = dirichlet_weights_to_multiplier(w);
    check_kernel_resolution(g, mult.len(), res)?;
    let size = g.power(res);
    let mut coeffs = vec![ZERO; size];
    for (c, &m) in coeffs.iter_mut().zip(&mult) {
        *c = Complex64::new(m, 0.0);
    }
    Ok(transform_inverse(&Spectrum {
        group: g.clone(),
        resolution: res,
        coeffs,
    }))
}

/// `sum_{k=0}^{n} w_k D_k` summed term by term from closed-form `D_k`.
pub fn weighted_dirichlet_literal(g: &GroupSpec, w: &[f64], res: usize) -> Result<GridFunction> {
    check_kernel_resolution(g, w.len().saturating_sub(1), res)?;
    let ev = KernelEval::new(g, res)?;
    Ok(ev.grid(|xd| {
        w.iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &wk)| wk != 0.0)
            .map(|(k, &wk)| ev.dirichlet_at(k, xd) * wk)
            .sum()
    }))
}

/// Kernel of the mean `kind` at index `n`.
pub fn summation_kernel(kind: &MeanKind, n: usize, g: &GroupSpec, res: usize) -> Result<GridFunction> {
    let w = kind.weights(n)?;
    weighted_dirichlet(g, &w, res)
}

/// Nörlund kernel `A_n = (1/Q_n) sum_{k=1}^{n} q_{n-k} D_k`.
pub fn norlund_kernel(q: &crate::means::WeightSequence, n: usize, g: &GroupSpec, res: usize) -> Result<GridFunction> {
    summation_kernel(&MeanKind::Norlund(q.clone()), n, g, res)
}

/// T-mean kernel `F_n = (1/Q_n) sum_{k=1}^{n-1} q_k D_k`.
pub fn tmean_kernel(q: &crate::means::WeightSequence, n: usize, g: &GroupSpec, res: usize) -> Result<GridFunction> {
    summation_kernel(&MeanKind::T(q.clone()), n, g, res)
}

/// Riesz logarithmic kernel `Y_n = (1/l_n) sum_{k=1}^{n-1} D_k / k`.
pub fn riesz_log_kernel(n: usize, g: &GroupSpec, res: usize) -> Result<GridFunction> {
    summation_kernel(&MeanKind::RieszLog, n, g, res)
}

/// Nörlund logarithmic kernel `P_n = (1/l_n) sum_{k=1}^{n-1} D_k / (n - k)`.
pub fn norlund_log_kernel(n: usize, g: &GroupSpec, res: usize) -> Result<GridFunction> {
    summation_kernel(&MeanKind::NorlundLog, n, g, res)
}

/// `l_n = sum_{k=1}^{n-1} 1/k`.
pub fn harmonic(n: usize) -> f64 {
    (1..n).map(|k| 1.0 / k as f64).sum()
}

/// Smallest resolution on which `D_n` is determined, `|n| + 1`.
pub fn min_resolution(g: &GroupSpec, n: usize) -> Result<usize> {
    let res = g.digits_of(n)?.hi + 1;
    g.check_resolution(res)?;
    Ok(res)
}

/// `L_n = ||D_n||_1` at resolution `|n| + 1`.
pub fn lebesgue_constant(g: &GroupSpec, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let res = min_resolution(g, n)?;
    let ev = KernelEval::new(g, res)?;
    let size = g.power(res);
    let total: f64 = (0..size).map(|x| ev.dirichlet_at(n, &ev.digits(x)).norm()).sum();
    Ok(total / size as f64)
}

/// Exact `L_n` on the dyadic group as a fraction `num / den`; `D_n` takes
/// integer values there.
pub fn lebesgue_constant_dyadic_exact(g: &GroupSpec, n: usize) -> Result<(u64, u64)> {
    if !g.is_dyadic() {
        return Err(Error::Domain("exact Lebesgue constants need m = 2".into()));
    }
    if n == 0 {
        return Ok((0, 1));
    }
    let res = min_resolution(g, n)?;
    let ev = KernelEval::new(g, res)?;
    let size = g.power(res);
    let num: u64 = (0..size)
        .map(|x| ev.dirichlet_at(n, &ev.digits(x)).re.round().abs() as u64)
        .sum();
    Ok((num, size as u64))
}

/// Two-sided digit-variation bound for `L_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LebesgueBounds {
    pub v: usize,
    pub vstar: usize,
    pub lower: f64,
    pub upper: f64,
}

/// Which sum defines `v(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariationForm {
    /// Sum from `j = 1`, plus `delta_0`.
    #[default]
    Literal,
    /// Sum from `j = 0`, plus `delta_0`.
    FromZero,
}

impl std::str::FromStr for VariationForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(VariationForm::Literal),
            "from-zero" => Ok(VariationForm::FromZero),
            _ => Err(Error::InvalidParams(format!("unknown variation form `{s}`"))),
        }
    }
}

/// `v/(4 lambda) + v*/lambda^2 <= L_n <= v + v*` with the literal `v`.
pub fn lebesgue_bounds(g: &GroupSpec, n: &NatDigits) -> LebesgueBounds {
    lebesgue_bounds_with(g, n, VariationForm::Literal)
}

pub fn lebesgue_bounds_with(g: &GroupSpec, n: &NatDigits, form: VariationForm) -> LebesgueBounds {
    let v = match form {
        VariationForm::Literal => n.variation_v(),
        VariationForm::FromZero => n.variation_v_from_zero(),
    };
    let vstar = n.variation_vstar();
    let lambda = g.lambda() as f64;
    LebesgueBounds {
        v,
        vstar,
        lower: v as f64 / (4.0 * lambda) + vstar as f64 / (lambda * lambda),
        upper: (v + vstar) as f64,
    }
}

/// `M_{2k} + M_{2k-2} + ... + M_0`.
pub fn lacunary_index(g: &GroupSpec, k: usize) -> Result<usize> {
    if 2 * k > g.levels() {
        return Err(Error::Range(format!("M_{} is beyond the stored levels", 2 * k)));
    }
    Ok((0..=k).map(|i| g.power(2 * i)).sum())
}

/// `int_{I_N} |G(x - t)| dmu(t)` for a kernel sampled at resolution `R >= N`.
pub fn local_integral(kernel: &GridFunction, x: usize, coset_level: usize) -> Result<f64> {
    let g = &kernel.group;
    if coset_level > kernel.resolution {
        return Err(Error::Range("coset level above kernel resolution".into()));
    }
    let step = g.power(coset_level);
    let base = x % step;
    let total: f64 = (base..kernel.len()).step_by(step).map(|i| kernel.values[i].norm()).sum();
    Ok(total / kernel.len() as f64)
}

/// Identifies a kernel grid in a [`KernelCache`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KernelKey {
    pub kind: String,
    pub n: usize,
    pub resolution: usize,
    pub radices: Vec<usize>,
}

/// Shared memo of kernel grids; many readers, one writer per insertion.
#[derive(Debug, Default)]
pub struct KernelCache {
    map: RwLock<HashMap<KernelKey, Arc<GridFunction>>>,
}

impl KernelCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_try_insert(
        &self,
        key: KernelKey,
        build: impl FnOnce() -> Result<GridFunction>,
    ) -> Result<Arc<GridFunction>> {
        if let Some(hit) = self.map.read().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let value = Arc::new(build()?);
        let mut map = self.map.write().expect("cache lock");
        Ok(map.entry(key).or_insert(value).clone())
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::means::WeightSequence;

    fn groups() -> Vec<GroupSpec> {
        vec![
            GroupSpec::walsh(6).unwrap(),
            GroupSpec::new(&[3], 4).unwrap(),
            GroupSpec::new(&[2, 3, 4], 4).unwrap(),
            GroupSpec::new(&[3, 2], 4).unwrap(),
        ]
    }

    fn res_for(g: &GroupSpec, n: usize) -> usize {
        (0..=g.levels()).find(|&r| g.power(r) > n).unwrap_or(g.levels()).min(g.levels())
    }

    #[test]
    fn dirichlet_examples() {
        let w = GroupSpec::walsh(3).unwrap();
        let d3 = dirichlet(&w, 3, 2).unwrap();
        let want = [3.0, 1.0, 1.0, -1.0];
        for (v, e) in d3.values.iter().zip(want) {
            assert!((v - e).norm() < 1e-12);
        }
        assert!(dirichlet(&w, 1, 3).unwrap().values.iter().all(|v| (v - 1.0).norm() < 1e-15));
        let d4 = dirichlet(&w, 4, 3).unwrap();
        for (x, v) in d4.values.iter().enumerate() {
            let e = if x % 4 == 0 { 4.0 } else { 0.0 };
            assert!((v - e).norm() < 1e-12);
        }
        assert!(matches!(dirichlet(&w, 5, 2), Err(Error::Shape(_))));
    }

    #[test]
    fn dirichlet_closed_form_matches_naive() {
        for g in groups() {
            for n in 0..=g.power(3).min(60) {
                let res = res_for(&g, n);
                let a = dirichlet(&g, n, res).unwrap();
                let b = dirichlet_naive(&g, n, res).unwrap();
                assert!(a.max_diff(&b).unwrap() < 1e-10, "n={n} m={:?}", g.radices());
            }
        }
    }

    #[test]
    fn fejer_examples() {
        let w = GroupSpec::walsh(3).unwrap();
        let k2 = fejer(&w, 2, 2).unwrap();
        for (x, v) in k2.values.iter().enumerate() {
            let e = if x % 2 == 0 { 1.5 } else { 0.5 };
            assert!((v - e).norm() < 1e-12);
        }
        assert!(fejer(&w, 1, 2).unwrap().values.iter().all(|v| (v - 1.0).norm() < 1e-15));
        let g = GroupSpec::new(&[3, 2], 3).unwrap();
        let ev = KernelEval::new(&g, 2).unwrap();
        let k3 = fejer_naive(&g, 3, 2).unwrap();
        for x in 0..6 {
            let xd = ev.digits(x);
            assert!((ev.fejer_power_at(1, &xd) - k3.values[x]).norm() < 1e-12);
        }
    }

    #[test]
    fn fejer_closed_form_matches_naive() {
        for g in groups() {
            for n in 1..=g.power(3).min(60) {
                let res = res_for(&g, n);
                let a = fejer(&g, n, res).unwrap();
                let b = fejer_naive(&g, n, res).unwrap();
                assert!(a.max_diff(&b).unwrap() < 1e-10, "n={n} m={:?}", g.radices());
            }
        }
    }

    #[test]
    fn weighted_forms_agree() {
        let g = GroupSpec::new(&[2, 3], 4).unwrap();
        let q = WeightSequence::power(0.5, 64).unwrap();
        for kind in [
            MeanKind::Fejer,
            MeanKind::Norlund(q.clone()),
            MeanKind::T(q.clone()),
            MeanKind::RieszLog,
            MeanKind::NorlundLog,
        ] {
            for n in 2..=20 {
                let w = kind.weights(n).unwrap();
                let a = weighted_dirichlet(&g, &w, 4).unwrap();
                let b = weighted_dirichlet_literal(&g, &w, 4).unwrap();
                assert!(a.max_diff(&b).unwrap() < 1e-10);
            }
        }
        let k = summation_kernel(&MeanKind::Fejer, 11, &g, 4).unwrap();
        assert!(k.max_diff(&fejer(&g, 11, 4).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn norlund_with_unit_weights_is_fejer() {
        let g = GroupSpec::walsh(5).unwrap();
        let q = WeightSequence::ones(40);
        for n in 1..=30 {
            let a = norlund_kernel(&q, n, &g, 5).unwrap();
            assert!(a.max_diff(&fejer(&g, n, 5).unwrap()).unwrap() < 1e-12);
        }
        let a1 = norlund_kernel(&q, 1, &g, 5).unwrap();
        assert!(a1.values.iter().all(|v| (v - 1.0).norm() < 1e-12));
    }

    #[test]
    fn log_kernels() {
        assert!((harmonic(4) - 11.0 / 6.0).abs() < 1e-15);
        let w = GroupSpec::walsh(3).unwrap();
        let y2 = riesz_log_kernel(2, &w, 3).unwrap();
        assert!(y2.values.iter().all(|v| (v - 1.0).norm() < 1e-12));
        let y4 = riesz_log_kernel(4, &w, 3).unwrap();
        let l4 = harmonic(4);
        let d = |k| dirichlet(&w, k, 3).unwrap();
        let want = d(1).scale(1.0 / l4).add(&d(2).scale(0.5 / l4)).unwrap().add(&d(3).scale(1.0 / 3.0 / l4)).unwrap();
        assert!(y4.max_diff(&want).unwrap() < 1e-12);
        assert!(matches!(riesz_log_kernel(1, &w, 3), Err(Error::Range(_))));
        assert!(matches!(norlund_log_kernel(1, &w, 3), Err(Error::Range(_))));
    }

    #[test]
    fn lebesgue_examples() {
        let w = GroupSpec::walsh(8).unwrap();
        assert!((lebesgue_constant(&w, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!((lebesgue_constant(&w, 3).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(lebesgue_constant_dyadic_exact(&w, 3).unwrap(), (6, 4));
        for g in groups() {
            for k in 0..g.levels() {
                assert!((lebesgue_constant(&g, g.power(k)).unwrap() - 1.0).abs() < 1e-12);
            }
        }
        let b = lebesgue_bounds(&w, &w.digits_of(3).unwrap());
        assert_eq!((b.lower, b.upper), (0.25, 2.0));
        let b = lebesgue_bounds(&w, &w.digits_of(1).unwrap());
        assert_eq!((b.lower, b.upper), (0.125, 1.0));
    }

    #[test]
    fn local_integral_matches_direct_sum() {
        let g = GroupSpec::new(&[2, 3], 4).unwrap();
        let k = fejer(&g, 7, 4).unwrap();
        for x in 0..g.power(4) {
            let direct: f64 = (0..g.power(4))
                .filter(|t| t % g.power(2) == 0)
                .map(|t| k.values[g.index_sub(x, t, 4)].norm())
                .sum::<f64>()
                / g.power(4) as f64;
            assert!((local_integral(&k, x, 2).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn cache_reuses_entries() {
        let g = GroupSpec::walsh(4).unwrap();
        let cache = KernelCache::new();
        let key = KernelKey {
            kind: "fejer".into(),
            n: 5,
            resolution: 4,
            radices: g.radices().to_vec(),
        };
        let a = cache.get_or_try_insert(key.clone(), || fejer(&g, 5, 4)).unwrap();
        let b = cache
            .get_or_try_insert(key, || Err(Error::Unsupported("rebuilt".into())))
            .unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(cache.len(), 1);
    }
}
