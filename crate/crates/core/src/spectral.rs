//! Grid functions, Fourier coefficients and the fast Vilenkin transform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::{roots_of_unity, RootTables};
use crate::error::{Error, Result};
use crate::group::GroupSpec;

const PAR_THRESHOLD: usize = 1 << 14;

/// A function on the group that is constant on the cosets of `I_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub group: GroupSpec,
    pub resolution: usize,
    pub values: Vec<Complex64>,
}

/// Fourier coefficients `f^(0), ..., f^(M_N - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub group: GroupSpec,
    pub resolution: usize,
    pub coeffs: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(group: &GroupSpec, resolution: usize, values: Vec<Complex64>) -> Result<Self> {
        let size = group.size(resolution)?;
        if values.len() != size {
            return Err(Error::Shape(format!(
                "expected {size} values, got {}",
                values.len()
            )));
        }
        Ok(Self {
            group: group.clone(),
            resolution,
            values,
        })
    }

    pub fn from_fn(group: &GroupSpec, resolution: usize, f: impl Fn(usize) -> Complex64) -> Result<Self> {
        let size = group.size(resolution)?;
        Self::new(group, resolution, (0..size).map(f).collect())
    }

    pub fn from_real(group: &GroupSpec, resolution: usize, values: &[f64]) -> Result<Self> {
        Self::new(
            group,
            resolution,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn zeros(group: &GroupSpec, resolution: usize) -> Result<Self> {
        Self::constant(group, resolution, Complex64::new(0.0, 0.0))
    }

    pub fn constant(group: &GroupSpec, resolution: usize, c: Complex64) -> Result<Self> {
        Self::from_fn(group, resolution, |_| c)
    }

    /// `M_N` times the indicator of `I_N`, i.e. `D_{M_N}`.
    pub fn delta(group: &GroupSpec, resolution: usize) -> Result<Self> {
        let size = group.size(resolution)? as f64;
        Self::from_fn(group, resolution, |i| {
            Complex64::new(if i == 0 { size } else { 0.0 }, 0.0)
        })
    }

    /// The character `psi_n` sampled on the grid.
    pub fn character(group: &GroupSpec, resolution: usize, n: usize) -> Result<Self> {
        let size = group.size(resolution)?;
        if n >= size {
            return Err(Error::Range(format!("psi_{n} is not constant on rank-{resolution} cosets")));
        }
        let t = RootTables::new(group);
        Self::from_fn(group, resolution, |x| t.psi_index(group, n, x, resolution))
    }

    /// Complex values with real and imaginary parts uniform in `[-1, 1)`.
    pub fn random(group: &GroupSpec, resolution: usize, seed: u64) -> Result<Self> {
        let size = group.size(resolution)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..size)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Self::new(group, resolution, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.len() as f64
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            group: self.group.clone(),
            resolution: self.resolution,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            group: self.group.clone(),
            resolution: self.resolution,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Largest pointwise distance to `other`.
    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn abs_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn check_same(&self, other: &Self) -> Result<()> {
        if self.resolution != other.resolution
            || self.group.radices()[..self.resolution] != other.group.radices()[..other.resolution]
        {
            return Err(Error::Shape(format!(
                "grids differ: resolution {} vs {}",
                self.resolution, other.resolution
            )));
        }
        Ok(())
    }

    /// The same function sampled on a finer grid.
    pub fn refine(&self, resolution: usize) -> Result<Self> {
        if resolution < self.resolution {
            return Err(Error::Range("refine needs a finer resolution".into()));
        }
        let coarse = self.group.power(self.resolution);
        Self::from_fn(&self.group, resolution, |i| self.values[i % coarse])
    }

    pub fn to_file(&self) -> GridFile {
        GridFile {
            m: self.group.radices()[..self.resolution.max(1)].to_vec(),
            resolution: self.resolution,
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
        }
    }

    pub fn from_file(file: &GridFile) -> Result<Self> {
        if file.m.is_empty() {
            return Err(Error::Format("radix list is empty".into()));
        }
        let levels = file.m.len().max(file.resolution).max(1);
        let g = GroupSpec::new(&file.m, levels)?;
        let values = file
            .values
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        Self::new(&g, file.resolution, values)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("grid files always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GridFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_file(&file)
    }
}

/// On-disk form of a grid function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFile {
    pub m: Vec<usize>,
    pub resolution: usize,
    pub values: Vec<[f64; 2]>,
}

/// `f^(n) = int f conj(psi_n)` by direct summation.
pub fn fourier_coeff(f: &GridFunction, n: usize) -> Complex64 {
    let size = f.len();
    if n >= size {
        return Complex64::new(0.0, 0.0);
    }
    let t = RootTables::new(&f.group);
    f.values
        .iter()
        .enumerate()
        .map(|(x, &v)| v * t.psi_index(&f.group, n, x, f.resolution).conj())
        .sum::<Complex64>()
        / size as f64
}

/// All coefficients by direct `O(M_N^2)` summation.
pub fn transform_naive(f: &GridFunction) -> Spectrum {
    let coeffs = (0..f.len()).map(|n| fourier_coeff(f, n)).collect();
    Spectrum {
        group: f.group.clone(),
        resolution: f.resolution,
        coeffs,
    }
}

/// One pass of per-level DFTs over `data`, conjugated when `forward`.
fn butterflies(g: &GroupSpec, res: usize, data: &mut [Complex64], forward: bool) {
    for k in 0..res {
        let m = g.radix(k);
        let stride = g.power(k);
        let block = g.power(k + 1);
        let mut roots = roots_of_unity(m);
        if forward {
            for r in roots.iter_mut() {
                *r = r.conj();
            }
        }
        let stage = |chunk: &mut [Complex64]| {
            let mut buf = vec![Complex64::new(0.0, 0.0); m];
            for o in 0..stride {
                for (j, b) in buf.iter_mut().enumerate() {
                    *b = chunk[o + j * stride];
                }
                for q in 0..m {
                    let mut acc = buf[0];
                    for (j, &b) in buf.iter().enumerate().skip(1) {
                        acc += b * roots[(q * j) % m];
                    }
                    chunk[o + q * stride] = acc;
                }
            }
        };
        if data.len() >= PAR_THRESHOLD {
            data.par_chunks_mut(block).for_each(stage);
        } else {
            data.chunks_mut(block).for_each(stage);
        }
    }
}

/// Fast forward transform, `O(M_N sum m_k)`.
pub fn transform_forward(f: &GridFunction) -> Spectrum {
    let mut data = f.values.clone();
    butterflies(&f.group, f.resolution, &mut data, true);
    let scale = 1.0 / data.len() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
    Spectrum {
        group: f.group.clone(),
        resolution: f.resolution,
        coeffs: data,
    }
}

/// Inverse of [`transform_forward`].
pub fn transform_inverse(s: &Spectrum) -> GridFunction {
    let mut data = s.coeffs.clone();
    butterflies(&s.group, s.resolution, &mut data, false);
    GridFunction {
        group: s.group.clone(),
        resolution: s.resolution,
        values: data,
    }
}

/// `S_n f = sum_{k<n} f^(k) psi_k`.
pub fn partial_sum(f: &GridFunction, n: usize) -> Result<GridFunction> {
    if n > f.len() {
        return Err(Error::Range(format!(
            "S_{n} exceeds the grid rank M_N = {}",
            f.len()
        )));
    }
    let mut s = transform_forward(f);
    for c in s.coeffs[n..].iter_mut() {
        *c = Complex64::new(0.0, 0.0);
    }
    Ok(transform_inverse(&s))
}

/// Applies the Fourier multiplier `w` to `f`; missing entries count as zero.
pub fn apply_multiplier(f: &GridFunction, w: &[f64]) -> GridFunction {
    let mut s = transform_forward(f);
    for (j, c) in s.coeffs.iter_mut().enumerate() {
        *c *= w.get(j).copied().unwrap_or(0.0);
    }
    transform_inverse(&s)
}

/// `(f * g)(x) = int f(x - t) g(t) dt`.
pub fn convolve(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.check_same(g)?;
    let a = transform_forward(f);
    let mut b = transform_forward(g);
    for (c, &d) in b.coeffs.iter_mut().zip(&a.coeffs) {
        *c *= d;
    }
    Ok(transform_inverse(&b))
}

/// Direct double-sum convolution.
pub fn convolve_naive(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.check_same(g)?;
    let size = f.len();
    let grp = &f.group;
    GridFunction::from_fn(grp, f.resolution, |x| {
        (0..size)
            .map(|t| f.values[grp.index_sub(x, t, f.resolution)] * g.values[t])
            .sum::<Complex64>()
            / size as f64
    })
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p <= 0.0 {
        Err(Error::Domain(format!("exponent p = {p} must be positive")))
    } else {
        Ok(())
    }
}

/// `||f||_p` by grid quadrature; `p = inf` gives the sup norm.
pub fn lp_norm(f: &GridFunction, p: f64) -> Result<f64> {
    lp_norm_abs(&f.abs_values(), p)
}

/// `L_p` norm of a nonnegative sample vector with uniform weights.
pub fn lp_norm_abs(values: &[f64], p: f64) -> Result<f64> {
    check_p(p)?;
    if values.is_empty() {
        return Ok(0.0);
    }
    if p.is_infinite() {
        return Ok(values.iter().copied().fold(0.0, f64::max));
    }
    let mean = values.iter().map(|v| v.powf(p)).sum::<f64>() / values.len() as f64;
    Ok(mean.powf(1.0 / p))
}

/// Weak-`L_p` quasi-norm `sup_l l mu(|f| > l)^{1/p}`.
pub fn weak_lp(f: &GridFunction, p: f64) -> Result<f64> {
    weak_lp_abs(&f.abs_values(), p)
}

pub fn weak_lp_abs(values: &[f64], p: f64) -> Result<f64> {
    check_p(p)?;
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let size = sorted.len() as f64;
    if p.is_infinite() {
        return Ok(sorted.first().copied().unwrap_or(0.0));
    }
    let mut best = 0.0f64;
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == v {
            j += 1;
        }
        best = best.max(v * (j as f64 / size).powf(1.0 / p));
        i = j;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn character_coefficients() {
        let w = GroupSpec::walsh(3).unwrap();
        let f = GridFunction::character(&w, 3, 5).unwrap();
        for n in 0..8 {
            let want = if n == 5 { 1.0 } else { 0.0 };
            assert!((fourier_coeff(&f, n) - want).norm() < 1e-12);
        }
        let k = GridFunction::constant(&w, 3, c(2.5)).unwrap();
        assert!((fourier_coeff(&k, 0) - 2.5).norm() < 1e-12);
    }

    #[test]
    fn coefficients_above_rank_vanish() {
        let g = GroupSpec::new(&[2, 3], 3).unwrap();
        let f = GridFunction::random(&g, 2, 3).unwrap();
        assert_eq!(fourier_coeff(&f, 7), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn fast_matches_naive() {
        for radices in [&[2usize][..], &[2, 3], &[3, 5, 2], &[4]] {
            let g = GroupSpec::new(radices, 4).unwrap();
            let res = if g.power(4) > 600 { 3 } else { 4 };
            let f = GridFunction::random(&g, res, 11).unwrap();
            let fast = transform_forward(&f);
            let slow = transform_naive(&f);
            for (a, b) in fast.coeffs.iter().zip(&slow.coeffs) {
                assert!((a - b).norm() < 1e-10);
            }
            let back = transform_inverse(&fast);
            assert!(back.max_diff(&f).unwrap() < 1e-12);
        }
    }

    #[test]
    fn delta_has_flat_spectrum() {
        let g = GroupSpec::new(&[2, 3], 2).unwrap();
        let d = GridFunction::delta(&g, 2).unwrap();
        for c in transform_forward(&d).coeffs {
            assert!((c - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_sums() {
        let w = GroupSpec::walsh(3).unwrap();
        let f = GridFunction::random(&w, 3, 1).unwrap();
        assert!(partial_sum(&f, 8).unwrap().max_diff(&f).unwrap() < 1e-12);
        assert!(partial_sum(&f, 0).unwrap().sup_norm() < 1e-15);
        assert!(matches!(partial_sum(&f, 9), Err(Error::Range(_))));
        let psi = GridFunction::character(&w, 3, 4).unwrap();
        assert!(partial_sum(&psi, 5).unwrap().max_diff(&psi).unwrap() < 1e-12);
        assert!(partial_sum(&psi, 4).unwrap().sup_norm() < 1e-12);
        let spec = Spectrum {
            group: w.clone(),
            resolution: 3,
            coeffs: [1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0].map(c).to_vec(),
        };
        let h = transform_inverse(&spec);
        let d3 = GridFunction::character(&w, 3, 0)
            .unwrap()
            .add(&GridFunction::character(&w, 3, 1).unwrap())
            .unwrap()
            .add(&GridFunction::character(&w, 3, 2).unwrap())
            .unwrap();
        assert!(partial_sum(&h, 3).unwrap().max_diff(&d3).unwrap() < 1e-12);
    }

    #[test]
    fn convolution() {
        let g = GroupSpec::new(&[2, 3], 3).unwrap();
        let f = GridFunction::random(&g, 3, 5).unwrap();
        let h = GridFunction::random(&g, 3, 6).unwrap();
        let fast = convolve(&f, &h).unwrap();
        let slow = convolve_naive(&f, &h).unwrap();
        assert!(fast.max_diff(&slow).unwrap() < 1e-12);
        let id = GridFunction::delta(&g, 3).unwrap();
        assert!(convolve(&f, &id).unwrap().max_diff(&f).unwrap() < 1e-12);
        let a = GridFunction::character(&g, 3, 4).unwrap();
        let b = GridFunction::character(&g, 3, 5).unwrap();
        assert!(convolve(&a, &b).unwrap().sup_norm() < 1e-12);
        assert!(convolve(&a, &a).unwrap().max_diff(&a).unwrap() < 1e-12);
        let other = GridFunction::random(&g, 2, 1).unwrap();
        assert!(matches!(convolve(&f, &other), Err(Error::Shape(_))));
    }

    #[test]
    fn norms() {
        let w = GroupSpec::walsh(3).unwrap();
        let one = GridFunction::constant(&w, 3, c(1.0)).unwrap();
        for p in [0.5, 1.0, 2.0, f64::INFINITY] {
            assert!((lp_norm(&one, p).unwrap() - 1.0).abs() < 1e-15);
        }
        let ind = GridFunction::from_fn(&w, 1, |i| c(if i == 0 { 3.0 } else { 0.0 })).unwrap();
        for p in [0.5, 1.0, 2.0] {
            let want = 3.0 * 0.5f64.powf(1.0 / p);
            assert!((lp_norm(&ind, p).unwrap() - want).abs() < 1e-12);
            assert!((weak_lp(&ind, p).unwrap() - want).abs() < 1e-12);
        }
        assert!(matches!(lp_norm(&one, 0.0), Err(Error::Domain(_))));
        assert!(matches!(weak_lp(&one, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn json_round_trip() {
        let g = GroupSpec::new(&[2, 3], 2).unwrap();
        let f = GridFunction::random(&g, 2, 9).unwrap();
        let back = GridFunction::from_json(&f.to_json()).unwrap();
        assert_eq!(back.values, f.values);
        assert!(GridFunction::from_json("{\"m\":[2],\"resolution\":2,\"values\":[[1,0]]}").is_err());
    }
}
