//! Step martingales, p-atoms, maximal functions and Hardy quasi-norms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{AtomViolation, Error, Result};
use crate::group::GroupSpec;
use crate::kernels::dirichlet;
use crate::spectral::{lp_norm, transform_forward, GridFile, GridFunction};

/// Average of `f` over each `I_n` coset, kept at the resolution of `f`.
pub fn conditional_expectation(f: &GridFunction, n: usize) -> Result<GridFunction> {
    if n > f.resolution {
        return Err(Error::Range(format!(
            "level {n} is finer than the resolution {}",
            f.resolution
        )));
    }
    let step = f.group.power(n);
    let mut sums = vec![Complex64::new(0.0, 0.0); step];
    for (i, v) in f.values.iter().enumerate() {
        sums[i % step] += v;
    }
    let count = (f.len() / step) as f64;
    for s in sums.iter_mut() {
        *s /= count;
    }
    GridFunction::from_fn(&f.group, f.resolution, |i| sums[i % step])
}

/// The same function sampled at resolution `n <= f.resolution`, assuming it
/// is constant on `I_n` cosets (otherwise coset averages are taken).
pub fn coarsen(f: &GridFunction, n: usize) -> Result<GridFunction> {
    let e = conditional_expectation(f, n)?;
    let size = f.group.power(n);
    GridFunction::new(&f.group, n, e.values[..size].to_vec())
}

/// A finite martingale `f^(n_0), f^(n_1), ...` with `f^(n_i)` at resolution `n_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepMartingale {
    pub group: GroupSpec,
    pub levels: Vec<usize>,
    pub entries: Vec<GridFunction>,
}

/// Largest tolerated violation of the martingale law in constructors.
pub const CONSISTENCY_TOL: f64 = 1e-9;

impl StepMartingale {
    /// Validates strictly increasing levels, resolutions and consistency.
    pub fn new(entries: Vec<GridFunction>) -> Result<Self> {
        let first = entries
            .first()
            .ok_or_else(|| Error::InvalidParams("a martingale needs at least one entry".into()))?;
        let group = first.group.clone();
        let levels: Vec<usize> = entries.iter().map(|e| e.resolution).collect();
        if levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParams("levels must increase strictly".into()));
        }
        let m = StepMartingale { group, levels, entries };
        let worst = m.consistency_defect()?;
        if worst > CONSISTENCY_TOL {
            return Err(Error::InvalidParams(format!(
                "martingale law violated by {worst:e}"
            )));
        }
        Ok(m)
    }

    /// `f^(n) = E_n f` for `n = 0..=N`.
    pub fn regular(f: &GridFunction) -> Result<Self> {
        let entries = (0..=f.resolution)
            .map(|n| coarsen(f, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(StepMartingale {
            group: f.group.clone(),
            levels: (0..=f.resolution).collect(),
            entries,
        })
    }

    pub fn finest(&self) -> &GridFunction {
        self.entries.last().expect("martingales are nonempty")
    }

    pub fn finest_resolution(&self) -> usize {
        *self.levels.last().expect("martingales are nonempty")
    }

    /// Largest `|E_{n_i} f^(n_j) - f^(n_i)|` over all pairs `i < j`.
    pub fn consistency_defect(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (j, fj) in self.entries.iter().enumerate() {
            for (i, fi) in self.entries.iter().enumerate().take(j) {
                let c = coarsen(fj, self.levels[i])?;
                worst = worst.max(c.max_diff(fi)?);
            }
        }
        Ok(worst)
    }

    /// Entries refined to the finest resolution.
    pub fn refined(&self) -> Result<Vec<GridFunction>> {
        let top = self.finest_resolution();
        self.entries.iter().map(|e| e.refine(top)).collect()
    }

    pub fn to_file(&self) -> MartingaleFile {
        MartingaleFile {
            m: self.group.radices()[..self.finest_resolution().max(1)].to_vec(),
            levels: self.levels.clone(),
            entries: self.entries.iter().map(|e| e.to_file()).collect(),
        }
    }

    pub fn from_file(file: &MartingaleFile) -> Result<Self> {
        let entries = file
            .entries
            .iter()
            .map(|e| {
                let mut e = e.clone();
                e.m = file.m.clone();
                GridFunction::from_file(&e)
            })
            .collect::<Result<Vec<_>>>()?;
        if entries.iter().map(|e| e.resolution).ne(file.levels.iter().copied()) {
            return Err(Error::Format("levels do not match entry resolutions".into()));
        }
        Self::new(entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("martingale files always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MartingaleFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_file(&file)
    }
}

/// On-disk form of a martingale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MartingaleFile {
    pub m: Vec<usize>,
    pub levels: Vec<usize>,
    pub entries: Vec<GridFile>,
}

/// `f* = sup_n |f^(n)|` at the finest resolution.
pub fn maximal_function(mart: &StepMartingale) -> Result<GridFunction> {
    let refined = mart.refined()?;
    let size = refined[0].len();
    let sup: Vec<f64> = (0..size)
        .map(|i| refined.iter().map(|e| e.values[i].norm()).fold(0.0, f64::max))
        .collect();
    GridFunction::from_real(&mart.group, mart.finest_resolution(), &sup)
}

/// `||f||_{H_p} = ||f*||_p`.
pub fn hardy_quasinorm(mart: &StepMartingale, p: f64) -> Result<f64> {
    lp_norm(&maximal_function(mart)?, p)
}

/// `omega_p(1/M_n, f) = sup_{h in I_n} ||f(. - h) - f||_p`.
pub fn modulus(f: &GridFunction, p: f64, n: usize) -> Result<f64> {
    if n > f.resolution {
        return Err(Error::Range(format!("level {n} above resolution {}", f.resolution)));
    }
    let g = &f.group;
    let res = f.resolution;
    let step = g.power(n);
    let mut best = 0.0f64;
    for h in (step..f.len()).step_by(step) {
        let diff: Vec<f64> = (0..f.len())
            .map(|x| (f.values[g.index_sub(x, h, res)] - f.values[x]).norm())
            .collect();
        best = best.max(crate::spectral::lp_norm_abs(&diff, p)?);
    }
    Ok(best)
}

/// Tail martingale `(f - S_{M_n} f)^(k)`, zero for `k <= n`.
pub fn tail_martingale(mart: &StepMartingale, n: usize) -> Result<StepMartingale> {
    let entries = mart
        .entries
        .iter()
        .zip(&mart.levels)
        .map(|(e, &k)| {
            if k <= n {
                GridFunction::zeros(&e.group, e.resolution)
            } else {
                e.sub(&conditional_expectation(e, n)?)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StepMartingale {
        group: mart.group.clone(),
        levels: mart.levels.clone(),
        entries,
    })
}

/// `omega_{H_p}(1/M_n, f) = ||f - S_{M_n} f||_{H_p}`.
pub fn modulus_hp(mart: &StepMartingale, p: f64, n: usize) -> Result<f64> {
    hardy_quasinorm(&tail_martingale(mart, n)?, p)
}

/// `E_n(f, L_2) = (sum_{k>=n} |f^(k)|^2)^{1/2}`.
pub fn best_approx_l2(f: &GridFunction, n: usize) -> Result<f64> {
    if n > f.len() {
        return Err(Error::Range(format!("n = {n} exceeds M_N = {}", f.len())));
    }
    let s = transform_forward(f);
    Ok(s.coeffs[n..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
}

/// Bracket for the best approximation `E_n(f, L_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxBracket {
    pub lower: f64,
    pub upper: f64,
}

/// Exact for `p = 2`; for other `p` and `n = M_j` the bracket
/// `[||f - S_{M_j} f||_p / 2, ||f - S_{M_j} f||_p]`.
pub fn best_approx_bounds(f: &GridFunction, p: f64, n: usize) -> Result<ApproxBracket> {
    if p == 2.0 {
        let e = best_approx_l2(f, n)?;
        return Ok(ApproxBracket { lower: e, upper: e });
    }
    let j = f.group.powers()[..=f.resolution]
        .iter()
        .position(|&m| m == n)
        .ok_or_else(|| Error::Unsupported(format!("L_p bracket needs n = M_j, got {n}")))?;
    let tail = f.sub(&conditional_expectation(f, j)?)?;
    let t = lp_norm(&tail, p)?;
    Ok(ApproxBracket {
        lower: t / 2.0,
        upper: t,
    })
}

/// A validated p-atom supported on the coset `I_level(x0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub p: f64,
    pub level: usize,
    pub anchor: usize,
    pub values: GridFunction,
}

impl Atom {
    pub fn measure(&self) -> f64 {
        1.0 / self.values.group.power(self.level) as f64
    }
}

/// Validates the three atom clauses, reporting the first one violated.
pub fn make_atom(p: f64, level: usize, anchor: usize, values: GridFunction) -> Result<Atom> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("atom exponent p = {p} must lie in (0, 1]")));
    }
    if level > values.resolution {
        return Err(Error::Range("support level above the grid resolution".into()));
    }
    let step = values.group.power(level);
    let anchor = anchor % step;
    if values
        .values
        .iter()
        .enumerate()
        .any(|(i, v)| i % step != anchor && *v != Complex64::new(0.0, 0.0))
    {
        return Err(Error::InvalidAtom(AtomViolation::SupportLeak));
    }
    let sup = values.sup_norm();
    let mean = values.integral().norm();
    if mean > 1e-12 * sup.max(1.0) {
        return Err(Error::InvalidAtom(AtomViolation::NonzeroMean));
    }
    let bound = (step as f64).powf(1.0 / p);
    if sup > bound * (1.0 + 1e-12) {
        return Err(Error::InvalidAtom(AtomViolation::SupBound));
    }
    Ok(Atom {
        p,
        level,
        anchor,
        values,
    })
}

/// `f^(n) = sum_k lambda_k S_{M_n} a_k` for `n = 0..=R`, with `sum |lambda_k|^p`.
pub fn atom_martingale(coeffs: &[(f64, Atom)]) -> Result<(StepMartingale, f64)> {
    let (_, first) = coeffs
        .first()
        .ok_or_else(|| Error::InvalidParams("no atoms supplied".into()))?;
    let mut total = GridFunction::zeros(&first.values.group, first.values.resolution)?;
    let mut budget = 0.0;
    for (lambda, atom) in coeffs {
        total = total.add(&atom.values.scale(*lambda))?;
        budget += lambda.abs().powf(atom.p);
    }
    Ok((StepMartingale::regular(&total)?, budget))
}

/// Counterexample martingale families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CounterexampleKind {
    /// Blocks `[M_a, 2M_a)` with height `phi(2M_a)^{1/2} / log^{1/2} M_a`.
    StrongPartialSums,
    /// Blocks `[M_a, 2M_a)` with height `M_a phi(2M_a) / log M_a`.
    StrongFejer,
    /// Blocks `[M_a, M_{a+1})` with height `M_a^{1/p-1} / a`.
    HpBlocks,
    /// Blocks `[M_{|a|}, M_{|a|+1})` with height
    /// `M_{|a|}^{1/(2p)} M_{<a>}^{(1/p-2)/2} Phi(a)^{1/2}`.
    FejerSubsequence,
}

impl std::str::FromStr for CounterexampleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strong-partial-sums" => Ok(Self::StrongPartialSums),
            "strong-fejer" => Ok(Self::StrongFejer),
            "hp-blocks" => Ok(Self::HpBlocks),
            "fejer-subsequence" => Ok(Self::FejerSubsequence),
            _ => Err(Error::InvalidParams(format!("unknown counterexample kind `{s}`"))),
        }
    }
}

/// Parameters of a counterexample construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleParams {
    pub kind: CounterexampleKind,
    pub alpha: Vec<usize>,
    pub resolution: usize,
    /// Exponent for the Hardy-space families.
    pub p: f64,
}

/// `phi(n) = max(1, log log n)`.
pub fn default_phi(n: usize) -> f64 {
    (n.max(3) as f64).ln().ln().max(1.0)
}

/// One block of a block-constant spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumBlock {
    pub start: usize,
    pub end: usize,
    pub height: f64,
}

/// A counterexample martingale with its atomic description.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub params: CounterexampleParams,
    pub martingale: StepMartingale,
    pub blocks: Vec<SpectrumBlock>,
    pub lambdas: Vec<f64>,
    /// `sum |lambda_k|^p` with the atom exponent.
    pub atom_budget: f64,
    pub atom_p: f64,
    /// Largest deviation of the spectrum from the block formula.
    pub spectrum_defect: f64,
}

/// Builds the martingale from validated atoms and checks its spectrum
/// against the block formula.
pub fn counterexample(g: &GroupSpec, params: &CounterexampleParams) -> Result<Counterexample> {
    counterexample_with(g, params, &default_phi, &|_| 1.0)
}

/// As [`counterexample`] with explicit `phi` (strong families) and `Phi`
/// (subsequence family).
pub fn counterexample_with(
    g: &GroupSpec,
    params: &CounterexampleParams,
    phi: &dyn Fn(usize) -> f64,
    big_phi: &dyn Fn(usize) -> f64,
) -> Result<Counterexample> {
    use CounterexampleKind::*;
    let alpha = &params.alpha;
    let res = params.resolution;
    if alpha.is_empty() {
        return Err(Error::InvalidParams("alpha list is empty".into()));
    }
    if alpha.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams("alpha must increase strictly".into()));
    }
    g.check_resolution(res)?;
    let p = params.p;
    if matches!(params.kind, HpBlocks | FejerSubsequence) && !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParams(format!("p = {p} must lie in (0, 1)")));
    }
    let lambda = g.lambda() as f64;
    let mut coeffs = Vec::new();
    let mut blocks = Vec::new();
    let mut lambdas = Vec::new();
    let mut prev_top = 0usize;
    for &a in alpha {
        // (level of the block, block end, lambda_k, atom scale, atom exponent)
        let (lev, end, lam, scale, atom_p) = match params.kind {
            StrongPartialSums | StrongFejer => {
                if a == 0 {
                    return Err(Error::InvalidParams("alpha must be positive".into()));
                }
                let ma = g.power(a) as f64;
                let log_m = ma.ln();
                let end = 2 * g.power(a);
                if params.kind == StrongPartialSums {
                    (a, end, (phi(end) / log_m).sqrt(), 1.0, 1.0)
                } else {
                    (a, end, phi(end) / log_m, ma, 0.5)
                }
            }
            HpBlocks => {
                if a == 0 {
                    return Err(Error::InvalidParams("alpha must be positive".into()));
                }
                let ma = g.power(a) as f64;
                (a, g.power((a + 1).min(g.levels())), lambda / a as f64, ma.powf(1.0 / p - 1.0) / lambda, p)
            }
            FejerSubsequence => {
                let nd = g.digits_of(a)?;
                let (hi, lo) = (nd.hi, nd.lo);
                let e = (1.0 / p - 2.0) / 2.0;
                let lam = lambda * (g.power(lo) as f64).powf(e) * big_phi(a).sqrt() / (g.power(hi) as f64).powf(e);
                let scale = (g.power(hi) as f64).powf(1.0 / p - 1.0) / lambda;
                (hi, g.power((hi + 1).min(g.levels())), lam, scale, p)
            }
        };
        if lev >= res || end > g.power(res) {
            return Err(Error::InvalidParams(format!(
                "block for alpha = {a} does not fit at resolution {res}"
            )));
        }
        let start = g.power(lev);
        if start < prev_top {
            return Err(Error::InvalidParams("spectral blocks overlap".into()));
        }
        prev_top = end;
        let d = dirichlet(g, end, res)?.sub(&dirichlet(g, start, res)?)?;
        let atom = make_atom(atom_p, lev, 0, d.scale(scale))?;
        blocks.push(SpectrumBlock {
            start,
            end,
            height: lam * scale,
        });
        lambdas.push(lam);
        coeffs.push((lam, atom));
    }
    let atom_p = coeffs[0].1.p;
    let (martingale, atom_budget) = atom_martingale(&coeffs)?;
    let spec = transform_forward(martingale.finest());
    let mut expected = vec![0.0; spec.coeffs.len()];
    for b in &blocks {
        for e in &mut expected[b.start..b.end] {
            *e = b.height;
        }
    }
    let spectrum_defect = spec
        .coeffs
        .iter()
        .zip(&expected)
        .map(|(c, &e)| (c - e).norm() / e.abs().max(1.0))
        .fold(0.0, f64::max);
    Ok(Counterexample {
        params: params.clone(),
        martingale,
        blocks,
        lambdas,
        atom_budget,
        atom_p,
        spectrum_defect,
    })
}

/// One printed gap condition evaluated at one index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapCheck {
    pub condition: String,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluates the growth conditions the constructions assume on `alpha`,
/// for the supplied indices only.
pub fn gap_conditions(g: &GroupSpec, params: &CounterexampleParams) -> Vec<GapCheck> {
    use CounterexampleKind::*;
    let lambda = g.lambda() as f64;
    let p = params.p;
    let alpha = &params.alpha;
    let mut out = Vec::new();
    let m = |a: usize| g.power(a.min(g.levels())) as f64;
    match params.kind {
        HpBlocks => {
            let sum: f64 = alpha.iter().map(|&a| 1.0 / (a as f64).powf(p)).sum();
            out.push(GapCheck {
                condition: "summable-inverse-powers".into(),
                k: alpha.len(),
                lhs: sum,
                rhs: f64::INFINITY,
                holds: true,
            });
            for k in 1..alpha.len() {
                let lhs: f64 = lambda
                    * alpha[..k]
                        .iter()
                        .map(|&a| m(a).powf(1.0 / p) / a as f64)
                        .sum::<f64>();
                let rhs = m(alpha[k]).powf(1.0 / p) / alpha[k] as f64;
                out.push(GapCheck {
                    condition: "dominating-block".into(),
                    k,
                    lhs,
                    rhs,
                    holds: lhs < rhs,
                });
                let lhs = 32.0 * lambda * m(alpha[k - 1]).powf(1.0 / p) / alpha[k - 1] as f64;
                let rhs = m(alpha[k]).powf(1.0 / p - 2.0) / alpha[k] as f64;
                out.push(GapCheck {
                    condition: "separated-blocks".into(),
                    k,
                    lhs,
                    rhs,
                    holds: lhs < rhs,
                });
            }
        }
        StrongPartialSums | StrongFejer => {
            let mut acc = 0.0;
            for (k, &a) in alpha.iter().enumerate() {
                acc += (default_phi(2 * m(a) as usize) / m(a).ln()).sqrt();
                out.push(GapCheck {
                    condition: "summable-heights".into(),
                    k,
                    lhs: acc,
                    rhs: f64::INFINITY,
                    holds: true,
                });
            }
        }
        FejerSubsequence => {
            let mut acc = 0.0;
            for (k, &a) in alpha.iter().enumerate() {
                let (hi, lo) = match g.digits_of(a) {
                    Ok(nd) => (nd.hi, nd.lo),
                    Err(_) => continue,
                };
                acc += (m(lo).powf((1.0 - 2.0 * p) / 2.0)) / m(hi).powf((1.0 - 2.0 * p) / 2.0);
                out.push(GapCheck {
                    condition: "summable-subsequence".into(),
                    k,
                    lhs: acc,
                    rhs: f64::INFINITY,
                    holds: true,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{fourier_coeff, partial_sum, GridFunction};

    #[test]
    fn expectation_examples() {
        let w = GroupSpec::walsh(3).unwrap();
        let f = GridFunction::random(&w, 3, 7).unwrap();
        assert_eq!(conditional_expectation(&f, 3).unwrap(), f);
        let c = conditional_expectation(&f, 0).unwrap();
        assert!(c.values.iter().all(|v| (v - f.integral()).norm() < 1e-12));
        let e1 = conditional_expectation(&f, 1).unwrap();
        for x in 0..8 {
            let same: Vec<_> = (0..8).filter(|y| y % 2 == x % 2).map(|y| f.values[y]).collect();
            let avg = same.iter().sum::<Complex64>() / same.len() as f64;
            assert!((e1.values[x] - avg).norm() < 1e-12);
        }
        for n in 0..=3 {
            let s = partial_sum(&f, w.power(n)).unwrap();
            assert!(conditional_expectation(&f, n).unwrap().max_diff(&s).unwrap() < 1e-10);
        }
        assert!(conditional_expectation(&f, 4).is_err());
    }

    #[test]
    fn maximal_function_examples() {
        let g = GroupSpec::new(&[2, 3], 3).unwrap();
        let f = GridFunction::random(&g, 3, 3).unwrap();
        let single = StepMartingale::new(vec![f.clone()]).unwrap();
        assert!((hardy_quasinorm(&single, 0.7).unwrap() - lp_norm(&f, 0.7).unwrap()).abs() < 1e-12);
        let mart = StepMartingale::regular(&f).unwrap();
        let star = maximal_function(&mart).unwrap();
        for x in 0..f.len() {
            let brute = (0..=3)
                .map(|n| conditional_expectation(&f, n).unwrap().values[x].norm())
                .fold(0.0, f64::max);
            assert!((star.values[x].re - brute).abs() < 1e-12);
        }
        let bad = vec![
            GridFunction::constant(&g, 0, Complex64::new(1.0, 0.0)).unwrap(),
            GridFunction::constant(&g, 1, Complex64::new(2.0, 0.0)).unwrap(),
        ];
        assert!(StepMartingale::new(bad).is_err());
        let back = StepMartingale::from_json(&mart.to_json()).unwrap();
        assert_eq!(back, mart);
    }

    #[test]
    fn modulus_examples() {
        let w = GroupSpec::walsh(3).unwrap();
        let psi1 = GridFunction::character(&w, 3, 1).unwrap();
        for p in [1.0, 2.0, 0.5] {
            assert!(modulus(&psi1, p, 1).unwrap() < 1e-15);
            assert!((modulus(&psi1, p, 0).unwrap() - 2.0).abs() < 1e-12);
        }
        let f = GridFunction::random(&w, 3, 5).unwrap();
        let mut prev = f64::INFINITY;
        for n in 0..=3 {
            let om = modulus(&f, 1.0, n).unwrap();
            assert!(om <= prev + 1e-12);
            prev = om;
        }
    }

    #[test]
    fn best_approximation() {
        let w = GroupSpec::walsh(3).unwrap();
        let f = GridFunction::random(&w, 3, 8).unwrap();
        assert!(best_approx_l2(&f, 8).unwrap() < 1e-15);
        let psi5 = GridFunction::character(&w, 3, 5).unwrap();
        assert!((best_approx_l2(&psi5, 4).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(best_approx_bounds(&f, 1.0, 3), Err(Error::Unsupported(_))));
        // on a two-point grid the rank-M_1 approximants are the constants
        let tiny = GridFunction::from_real(&w, 1, &[0.3, -1.7]).unwrap();
        let b = best_approx_bounds(&tiny, 1.0, 1).unwrap();
        let exhaustive = (0..=20000)
            .map(|i| -2.0 + 4.0 * i as f64 / 20000.0)
            .map(|c| ((0.3 - c).abs() + (-1.7 - c).abs()) / 2.0)
            .fold(f64::INFINITY, f64::min);
        assert!(b.lower <= exhaustive + 1e-12 && exhaustive <= b.upper + 1e-12);
    }

    #[test]
    fn atoms() {
        let w = GroupSpec::walsh(4).unwrap();
        let n = 2;
        let a = GridFunction::character(&w, 3, w.power(n))
            .unwrap()
            .mul(&dirichlet(&w, w.power(n), 3).unwrap())
            .unwrap();
        let atom = make_atom(1.0, n, 0, a.clone()).unwrap();
        assert!((atom.measure() - 0.25).abs() < 1e-15);
        let c = GridFunction::from_fn(&w, 3, |i| Complex64::new(if i % 4 == 0 { 1.0 } else { 0.0 }, 0.0)).unwrap();
        assert_eq!(make_atom(1.0, 2, 0, c), Err(Error::InvalidAtom(AtomViolation::NonzeroMean)));
        assert_eq!(
            make_atom(1.0, 2, 0, a.scale(2.0)),
            Err(Error::InvalidAtom(AtomViolation::SupBound))
        );
        assert_eq!(make_atom(1.0, 2, 1, a.clone()), Err(Error::InvalidAtom(AtomViolation::SupportLeak)));
        let (mart, budget) = atom_martingale(&[(1.0, atom.clone())]).unwrap();
        assert_eq!(budget, 1.0);
        for (k, e) in mart.entries.iter().enumerate() {
            let s = coarsen(&partial_sum(&a, w.power(k)).unwrap(), k).unwrap();
            assert!(e.max_diff(&s).unwrap() < 1e-12);
        }
        let hp = hardy_quasinorm(&mart, 1.0).unwrap();
        assert!(hp * atom.measure().powf(1.0 / atom.p) <= 1.0 + 1e-10);
    }

    #[test]
    fn counterexample_spectra() {
        let w = GroupSpec::walsh(8).unwrap();
        for kind in [
            CounterexampleKind::StrongPartialSums,
            CounterexampleKind::StrongFejer,
            CounterexampleKind::HpBlocks,
        ] {
            let params = CounterexampleParams {
                kind,
                alpha: vec![1, 2, 3],
                resolution: 8,
                p: 0.4,
            };
            let ce = counterexample(&w, &params).unwrap();
            assert!(ce.spectrum_defect < 1e-10, "{kind:?}");
            let f = ce.martingale.finest();
            for b in &ce.blocks {
                assert!((fourier_coeff(f, b.start) - b.height).norm() < 1e-9 * b.height.max(1.0));
            }
        }
        let hp = CounterexampleParams {
            kind: CounterexampleKind::HpBlocks,
            alpha: vec![1, 3],
            resolution: 8,
            p: 0.4,
        };
        let ce = counterexample(&w, &hp).unwrap();
        assert!((ce.blocks[1].height - 8f64.powf(1.5) / 3.0).abs() < 1e-9);
        let empty = CounterexampleParams { alpha: vec![], ..hp.clone() };
        assert!(matches!(counterexample(&w, &empty), Err(Error::InvalidParams(_))));
        let dec = CounterexampleParams { alpha: vec![3, 1], ..hp };
        assert!(matches!(counterexample(&w, &dec), Err(Error::InvalidParams(_))));
        let sub = CounterexampleParams {
            kind: CounterexampleKind::FejerSubsequence,
            alpha: vec![5, 18, 84],
            resolution: 8,
            p: 0.4,
        };
        let ce = counterexample(&w, &sub).unwrap();
        assert!(ce.spectrum_defect < 1e-10);
    }
}
