//! Batch verification suites, strong-summability tables and divergence probes.
//!
//! Every suite returns [`VerificationRecord`]s tagged with a claim id from
//! [`IN_SCOPE`]. Claims with explicit constants are checks, claims with
//! unspecified constants are reported as empirical suprema (or infima), and
//! asymptotic claims become monotone trends over finite checkpoints.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::RootTables;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::hardy::{
    atom_martingale, best_approx_bounds, conditional_expectation, counterexample, gap_conditions,
    hardy_quasinorm, make_atom, maximal_function, modulus, tail_martingale, Atom, CounterexampleKind,
    CounterexampleParams, StepMartingale,
};
use crate::kernels::{
    dirichlet, fejer, harmonic, lacunary_index, lebesgue_bounds_with, lebesgue_constant,
    min_resolution, norlund_log_kernel, riesz_log_kernel, tmean_kernel, weighted_dirichlet,
    weighted_dirichlet_literal, KernelEval, VariationForm,
};
use crate::means::{
    norlund_mean_abel, regularity_report, t_mean, t_mean_abel, weighted_maximal, CesaroCoeffs, MeanKind,
    WeightSequence,
};
pub use crate::report::{ClaimKind, Status, VerificationRecord};
use crate::report::sort_records;
use crate::spectral::{
    convolve, convolve_naive, lp_norm, partial_sum, transform_forward, transform_inverse,
    transform_naive, weak_lp, GridFunction,
};

type Rec = VerificationRecord;

/// Claim ids emitted by the suites.
pub const IN_SCOPE: &[&str] = &[
    "atomic-martingale",
    "cesaro-difference",
    "cesaro-growth",
    "cesaro-sum",
    "character-multiplicative",
    "character-orthonormal",
    "convolution-theorem",
    "counterexample-gap-conditions",
    "counterexample-spectrum",
    "digit-statistics",
    "dirichlet-digit-expansion",
    "dirichlet-local-integral",
    "dirichlet-multiple",
    "dirichlet-power-indicator",
    "dirichlet-power-l1",
    "dirichlet-reflection",
    "dirichlet-shift",
    "fejer-decomposition",
    "fejer-dyadic-domination",
    "fejer-l1-bounded",
    "fejer-local-integral",
    "fejer-local-integral-large",
    "fejer-lower-blocks",
    "fejer-lower-digit",
    "fejer-multiple",
    "fejer-multiple-lower",
    "fejer-multiple-vanishing",
    "fejer-power-closed-form",
    "fejer-power-l1-bounded",
    "fejer-power-sup",
    "fejer-power-vanishing",
    "fejer-subsequence-divergence",
    "fejer-walsh-bound",
    "group-digits",
    "group-metric",
    "hardy-quasinorm",
    "hat-arithmetic",
    "lacunary-fejer-lower",
    "lebesgue-lacunary-bounds",
    "lebesgue-log-growth",
    "lebesgue-variation-bounds",
    "lebesgue-walsh-variation",
    "martingale-consistency",
    "maximal-function",
    "mean-kernel-consistency",
    "modulus-monotone",
    "norlund-abel",
    "norlund-fejer-equality",
    "norlund-log-local-integral",
    "norlund-log-maximal",
    "norlund-log-power",
    "norlund-log-power-bounded",
    "norlund-regularity",
    "partial-sum-convolution",
    "partial-sum-exact",
    "plancherel",
    "riesz-log-kernel-abel",
    "riesz-log-kernel-bounded",
    "riesz-log-local-integral",
    "riesz-log-strong-sum",
    "strong-fejer-bounded",
    "strong-fejer-divergence",
    "strong-partial-sums-bounded",
    "strong-partial-sums-divergence",
    "strong-partial-sums-power",
    "tail-martingale",
    "tmean-abel",
    "tmean-dirichlet-tail",
    "tmean-dirichlet-tail-scaled",
    "tmean-kernel-abel",
    "tmean-kernel-bounded",
    "tmean-kernel-domination",
    "tmean-kernel-local-integral",
    "tmean-kernel-local-integral-large",
    "tmean-strong-log-sum",
    "tmean-strong-sum",
    "tmean-tail-local-integral",
    "tmean-tail-local-integral-large",
    "tmean-weak-divergence",
    "tmean-weight-sum",
    "transform-naive",
    "transform-roundtrip",
    "walsh-lebesgue-exact",
    "watari-best-approximation",
    "watari-modulus",
    "weighted-maximal",
    "young-inequality",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Structure,
    Identities,
    Inequalities,
    Lemmas,
    Means,
    Martingales,
    Strong,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Structure,
        Suite::Identities,
        Suite::Inequalities,
        Suite::Lemmas,
        Suite::Means,
        Suite::Martingales,
        Suite::Strong,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Structure => "structure",
            Suite::Identities => "identities",
            Suite::Inequalities => "inequalities",
            Suite::Lemmas => "lemmas",
            Suite::Means => "means",
            Suite::Martingales => "martingales",
            Suite::Strong => "strong",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown suite `{s}`")))
    }
}

/// Group, index range and sampling for a suite run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub group: GroupSpec,
    pub n_max: usize,
    pub tol: f64,
    pub seed: u64,
    /// Random functions per sampled claim.
    pub samples: usize,
}

impl SuiteConfig {
    pub fn new(group: GroupSpec, n_max: usize) -> Self {
        SuiteConfig {
            group,
            n_max,
            tol: 1e-10,
            seed: 0,
            samples: 20,
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<Rec>> {
    if cfg.n_max == 0 {
        return Err(Error::InvalidParams("n_max must be positive".into()));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidParams("tolerance must be positive".into()));
    }
    let mut out = match suite {
        Suite::Structure => structure_suite(cfg),
        Suite::Identities => identity_suite(cfg),
        Suite::Inequalities => inequality_suite(cfg),
        Suite::Lemmas => lemma_suite(cfg),
        Suite::Means => means_suite(cfg),
        Suite::Martingales => martingale_suite(cfg),
        Suite::Strong => strong_suite(cfg),
    }?;
    sort_records(&mut out);
    Ok(out)
}

/// Runs `suites` concurrently and returns the sorted union of their records.
pub fn run_suites(suites: &[Suite], cfg: &SuiteConfig) -> Result<Vec<Rec>> {
    let parts = suites
        .par_iter()
        .map(|&s| run_suite(s, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<Rec> = parts.into_iter().flatten().collect();
    sort_records(&mut out);
    Ok(out)
}

pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<Rec>> {
    run_suites(&Suite::ALL, cfg)
}

// ---------------------------------------------------------------- helpers

/// `m=<shortest period of the radix list>`.
pub fn group_tag(g: &GroupSpec) -> String {
    let r = g.radices();
    let period = (1..=r.len())
        .find(|&p| (p..r.len()).all(|i| r[i] == r[i - p]))
        .unwrap_or(r.len());
    let list: Vec<String> = r[..period].iter().map(|m| m.to_string()).collect();
    format!("m={}", list.join(","))
}

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    g: &'a GroupSpec,
    tag: String,
    suite: &'static str,
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a SuiteConfig, suite: Suite) -> Self {
        Ctx {
            cfg,
            g: &cfg.group,
            tag: group_tag(&cfg.group),
            suite: suite.name(),
        }
    }

    fn p(&self, extra: impl std::fmt::Display) -> String {
        let e = extra.to_string();
        if e.is_empty() {
            self.tag.clone()
        } else {
            format!("{};{}", self.tag, e)
        }
    }

    fn tol(&self) -> f64 {
        self.cfg.tol
    }

    fn residual(&self, claim: &str, extra: impl std::fmt::Display, r: f64) -> Rec {
        Rec::residual(self.suite, claim, self.p(extra), r, self.tol())
    }

    fn upper(&self, claim: &str, extra: impl std::fmt::Display, value: f64, bound: f64) -> Rec {
        Rec::upper(self.suite, claim, self.p(extra), value, bound, self.tol())
    }

    fn lower(&self, claim: &str, extra: impl std::fmt::Display, value: f64, bound: f64) -> Rec {
        Rec::lower(self.suite, claim, self.p(extra), value, bound, self.tol())
    }

    fn report(&self, claim: &str, extra: impl std::fmt::Display, value: f64) -> Rec {
        Rec::report(self.suite, claim, self.p(extra), value, self.tol())
    }

    fn trend(&self, claim: &str, extra: impl std::fmt::Display, values: &[f64]) -> Rec {
        Rec::trend(self.suite, claim, self.p(extra), values, self.tol())
    }

    fn levels(&self) -> usize {
        self.g.levels()
    }

    fn m(&self, k: usize) -> f64 {
        self.g.power(k) as f64
    }

    /// Smallest resolution with `M_r >= n`, capped at the stored levels.
    fn res_covering(&self, n: usize) -> usize {
        (0..=self.levels())
            .find(|&r| self.g.power(r) >= n)
            .unwrap_or(self.levels())
    }

    /// Largest resolution with `M_r <= cap`, at least 1.
    fn res_capped(&self, cap: usize) -> usize {
        (1..=self.levels())
            .rev()
            .find(|&r| self.g.power(r) <= cap)
            .unwrap_or(1)
    }
}

fn digits(g: &GroupSpec, x: usize, res: usize) -> Vec<usize> {
    let mut rest = x;
    (0..res)
        .map(|k| {
            let d = rest % g.radix(k);
            rest /= g.radix(k);
            d
        })
        .collect()
}

fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `D_0..=D_upto` and `K_0..=K_upto` summed directly from characters.
struct KernelTable {
    d: Vec<Vec<Complex64>>,
    k: Vec<Vec<Complex64>>,
    digits: Vec<Vec<usize>>,
    roots: RootTables,
}

impl KernelTable {
    fn new(g: &GroupSpec, res: usize, upto: usize) -> Self {
        let roots = RootTables::new(g);
        let size = g.power(res);
        let zero = vec![Complex64::new(0.0, 0.0); size];
        let mut d = vec![zero.clone()];
        for j in 0..upto {
            let next: Vec<Complex64> = (0..size)
                .map(|x| d[j][x] + roots.psi_index(g, j, x, res))
                .collect();
            d.push(next);
        }
        let mut k = vec![zero.clone()];
        let mut acc = zero;
        for j in 1..=upto {
            for (a, v) in acc.iter_mut().zip(&d[j]) {
                *a += v;
            }
            k.push(acc.iter().map(|v| v / j as f64).collect());
        }
        let digits = (0..size).map(|x| self::digits(g, x, res)).collect();
        KernelTable { d, k, digits, roots }
    }

    fn r(&self, level: usize, x: usize) -> Complex64 {
        self.roots.root(level, self.digits[x][level])
    }
}

/// `int_{I_N} |G(x - t)| dmu(t)` for every class `x mod M_N`.
fn coset_integrals(kernel: &[Complex64], step: usize) -> Vec<f64> {
    let mut acc = vec![0.0; step];
    for (i, v) in kernel.iter().enumerate() {
        acc[i % step] += v.norm();
    }
    let len = kernel.len() as f64;
    acc.iter_mut().for_each(|a| *a /= len);
    acc
}

/// `(k, l)` with `x in I_N^{k,l}` for `x mod M_N != 0`; `l = N` for a single digit.
fn shell_of(xd: &[usize], level: usize) -> Option<(usize, usize)> {
    let mut nz = xd[..level].iter().enumerate().filter(|(_, &d)| d != 0).map(|(j, _)| j);
    let k = nz.next()?;
    Some((k, nz.next().unwrap_or(level)))
}

fn lowest_nonzero(xd: &[usize]) -> Option<usize> {
    xd.iter().position(|&d| d != 0)
}

/// Nonincreasing weights with `1/Q_n = O(1/n)`.
fn nonincreasing_weights(len: usize) -> Vec<WeightSequence> {
    vec![
        WeightSequence::ones(len),
        WeightSequence::from_fn("one-plus-harmonic", len, |k| 1.0 + 1.0 / (k + 1) as f64)
            .expect("positive weights"),
    ]
}

/// Nondecreasing weights with `q_{n-1}/Q_n = O(1/n)`.
fn nondecreasing_weights(len: usize) -> Vec<WeightSequence> {
    vec![
        WeightSequence::log(len),
        WeightSequence::power(1.5, len).expect("positive weights"),
    ]
}

fn random_functions(g: &GroupSpec, res: usize, seed: u64, count: usize) -> Result<Vec<GridFunction>> {
    (0..count as u64)
        .map(|i| GridFunction::random(g, res, seed.wrapping_mul(1_000_003).wrapping_add(i)))
        .collect()
}

/// A random p-atom supported on `I_level(anchor)` with sup norm `M_level^{1/p}`.
pub fn random_atom(g: &GroupSpec, res: usize, p: f64, level: usize, seed: u64) -> Result<Atom> {
    if level > res {
        return Err(Error::Range("atom level above resolution".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = g.power(level);
    let anchor = rng.gen_range(0..step);
    let size = g.power(res);
    let mut vals = vec![Complex64::new(0.0, 0.0); size];
    for i in (anchor..size).step_by(step) {
        vals[i] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let count = (size / step) as f64;
    let mean: Complex64 = vals.iter().sum::<Complex64>() / count;
    for i in (anchor..size).step_by(step) {
        vals[i] -= mean;
    }
    let sup = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let target = (step as f64).powf(1.0 / p);
    let scale = if sup > 0.0 { target / sup } else { 0.0 };
    let f = GridFunction::new(g, res, vals.iter().map(|v| v * scale).collect())?;
    make_atom(p, level, anchor, f)
}

// ---------------------------------------------------------------- structure

fn structure_suite(cfg: &SuiteConfig) -> Result<Vec<Rec>> {
    let c = Ctx::new(cfg, Suite::Structure);
    let g = c.g;
    let mut out = Vec::new();
    let top = g.power(g.levels()).min(4096);

    let mut bad = 0usize;
    let mut stats_bad = 0usize;
    for n in 0..top {
        let nd = g.digits_of(n)?;
        if g.from_digits(&nd.digits)? != n || nd.digits.iter().enumerate().any(|(j, &d)| d >= g.radix(j)) {
            bad += 1;
        }
        let in_range = n == 0 || (g.power(nd.hi) <= n && n < g.power(nd.hi + 1));
        let lo_ok = n == 0 || (nd.digit(nd.lo) != 0 && nd.digits[..nd.lo].iter().all(|&d| d == 0));
        if !in_range || !lo_ok || nd.rho != nd.hi - nd.lo {
            stats_bad += 1;
        }
    }
    out.push(c.residual("group-digits", format!("n<{top}"), bad as f64));
    out.push(c.residual("digit-statistics", format!("n<{top}"), stats_bad as f64));

    let hat_top = top.min(128);
    let mut bad = 0usize;
    for n in 0..hat_top {
        for k in 0..hat_top {
            let s = g.hat_add(n, k)?;
            if g.hat_sub(s, k)? != n || g.hat_add(k, n)? != s {
                bad += 1;
            }
        }
        if g.hat_sub(n, n)? != 0 {
            bad += 1;
        }
    }
    out.push(c.residual("hat-arithmetic", format!("n<{hat_top}"), bad as f64));

    // I_n is the open ball of radius 1/M_n around 0
    let res = c.res_capped(1024);
    let mut bad = 0usize;
    for x in 0..g.power(res) {
        let pt = g.point(x, res)?;
        let norm = g.point_norm(&pt)?;
        if !(0.0..1.0).contains(&norm) {
            bad += 1;
        }
        for n in 0..=res {
            let in_coset = x % g.power(n) == 0;
            if in_coset != (norm < 1.0 / c.m(n)) {
                bad += 1;
            }
        }
    }
    out.push(c.residual("group-metric", format!("res={res}"), bad as f64));

    let res = c.res_capped(256);
    let size = g.power(res);
    let t = RootTables::new(g);
    let mut worst = 0.0f64;
    for n in 0..size {
        for x in (0..size).step_by(3) {
            for y in (0..size).step_by(7) {
                let lhs = t.psi_index(g, n, g.index_add(x, y, res), res);
                let rhs = t.psi_index(g, n, x, res) * t.psi_index(g, n, y, res);
                worst = worst.max((lhs - rhs).norm());
            }
        }
        for k in (0..size).step_by(5) {
            let s = g.hat_add(n, k)?;
            for x in 0..size {
                let lhs = t.psi_index(g, s, x, res);
                let rhs = t.psi_index(g, n, x, res) * t.psi_index(g, k, x, res);
                worst = worst.max((lhs - rhs).norm());
            }
        }
    }
    out.push(c.residual("character-multiplicative", format!("res={res}"), worst));

    let res_o = c.res_capped(64);
    let size_o = g.power(res_o);
    let mut worst = 0.0f64;
    for n in 0..size_o {
        for k in 0..size_o {
            let ip: Complex64 = (0..size_o)
                .map(|x| t.psi_index(g, n, x, res_o) * t.psi_index(g, k, x, res_o).conj())
                .sum::<Complex64>()
                / size_o as f64;
            let want = if n == k { 1.0 } else { 0.0 };
            worst = worst.max((ip - want).norm());
        }
    }
    out.push(c.residual("character-orthonormal", format!("res={res_o}"), worst));

    let fs = random_functions(g, res, cfg.seed, cfg.samples)?;
    let mut round = 0.0f64;
    let mut planch = 0.0f64;
    let mut naive = 0.0f64;
    for f in &fs {
        let s = transform_forward(f);
        round = round.max(transform_inverse(&s).max_diff(f)?);
        let energy: f64 = s.coeffs.iter().map(|c| c.norm_sqr()).sum();
        planch = planch.max((energy - lp_norm(f, 2.0)?.powi(2)).abs());
        let sn = transform_naive(f);
        naive = naive.max(max_abs_diff(&s.coeffs, &sn.coeffs));
    }
    let sp = format!("res={res};samples={}", cfg.samples);
    out.push(c.residual("transform-roundtrip", &sp, round));
    out.push(c.residual("plancherel", &sp, planch));
    out.push(c.residual("transform-naive", &sp, naive));

    let res_c = c.res_capped(128);
    let fs = random_functions(g, res_c, cfg.seed ^ 0x5eed, cfg.samples.min(10) * 2)?;
    let mut ps = 0.0f64;
    let mut conv = 0.0f64;
    for pair in fs.chunks(2) {
        let (f, h) = (&pair[0], &pair[1]);
        for n in (0..=g.power(res_c)).step_by(((g.power(res_c)) / 16).max(1)) {
            let s = partial_sum(f, n)?;
            let d = dirichlet(g, n, res_c)?;
            ps = ps.max(s.max_diff(&convolve_naive(f, &d)?)?);
        }
        let fh = transform_forward(&convolve_naive(f, h)?);
        let (sf, sh) = (transform_forward(f), transform_forward(h));
        for j in 0..fh.coeffs.len() {
            conv = conv.max((fh.coeffs[j] - sf.coeffs[j] * sh.coeffs[j]).norm());
        }
    }
    out.push(c.residual("partial-sum-convolution", format!("res={res_c}"), ps));
    out.push(c.residual("convolution-theorem", format!("res={res_c}"), conv));
    Ok(out)
}

// ---------------------------------------------------------------- identities

fn identity_suite(cfg: &SuiteConfig) -> Result<Vec<Rec>> {
    let c = Ctx::new(cfg, Suite::Identities);
    let g = c.g;
    let res = c.res_covering(2 * cfg.n_max);
    let size = g.power(res);
    let n_top = cfg.n_max.min(size);
    let tab = KernelTable::new(g, res, size);
    let d = &tab.d;
    let k = &tab.k;
    let mut out = Vec::new();
    let zero = Complex64::new(0.0, 0.0);

    for n in 0..=res {
        let mn = g.power(n);
        let want: Vec<Complex64> = (0..size)
            .map(|x| if x % mn == 0 { Complex64::new(mn as f64, 0.0) } else { zero })
            .collect();
        out.push(c.residual("dirichlet-power-indicator", format!("n={n}"), max_abs_diff(&d[mn], &want)));
    }

    for n in 0..res {
        let mn = g.power(n);
        let mut worst = 0.0f64;
        for j in 0..=(g.radix(n) - 1) * mn {
            let rhs: Vec<Complex64> = (0..size).map(|x| d[mn][x] + tab.r(n, x) * d[j][x]).collect();
            worst = worst.max(max_abs_diff(&d[j + mn], &rhs));
        }
        out.push(c.residual("dirichlet-shift", format!("n={n}"), worst));

        let mut worst = 0.0f64;
        for s in 1..g.radix(n) {
            let rhs: Vec<Complex64> = (0..size)
                .map(|x| d[mn][x] * (0..s).map(|q| tab.r(n, x).powu(q as u32)).sum::<Complex64>())
                .collect();
            worst = worst.max(max_abs_diff(&d[s * mn], &rhs));
        }
        out.push(c.residual("dirichlet-multiple", format!("n={n}"), worst));

        let mut worst = 0.0f64;
        for s in 1..g.radix(n) {
            let r = |x: usize| tab.r(n, x);
            let rhs: Vec<Complex64> = (0..size)
                .map(|x| {
                    let head: Complex64 = (0..s)
                        .map(|l| (0..l).map(|i| r(x).powu(i as u32)).sum::<Complex64>())
                        .sum();
                    let tail: Complex64 = (0..s).map(|l| r(x).powu(l as u32)).sum();
                    (head * d[mn][x] + tail * k[mn][x]) / s as f64
                })
                .collect();
            // both sides divided by s M_n
            worst = worst.max(max_abs_diff(&k[s * mn], &rhs));
        }
        out.push(c.residual("fejer-multiple", format!("n={n}"), worst));
    }

    for n in 0..=res {
        let mn = g.power(n);
        let mut worst = 0.0f64;
        for j in 0..mn {
            let rhs: Vec<Complex64> = (0..size)
                .map(|x| d[mn][x] - tab.roots.psi_index(g, mn - 1, x, res) * d[j][x].conj())
                .collect();
            worst = worst.max(max_abs_diff(&d[mn - j], &rhs));
        }
        out.push(c.residual("dirichlet-reflection", format!("n={n}"), worst));

        let rhs: Vec<Complex64> = (0..size)
            .map(|x| {
                let xd = &tab.digits[x];
                match lowest_nonzero(xd) {
                    None => Complex64::new((mn as f64 + 1.0) / 2.0, 0.0),
                    Some(t) if t >= n => Complex64::new((mn as f64 + 1.0) / 2.0, 0.0),
                    Some(t) if xd[t + 1..n].iter().all(|&v| v == 0) => {
                        Complex64::new(g.power(t) as f64, 0.0) / (Complex64::new(1.0, 0.0) - tab.r(t, x))
                    }
                    Some(_) => zero,
                }
            })
            .collect();
        out.push(c.residual("fejer-power-closed-form", format!("n={n}"), max_abs_diff(&k[mn], &rhs)));
    }

    for n in 0..=n_top {
        let nd = g.digits_of(n)?;
        let rhs: Vec<Complex64> = (0..size)
            .map(|x| {
                let mut acc = zero;
                for (j, &nj) in nd.digits.iter().enumerate() {
                    if nj == 0 {
                        continue;
                    }
                    let m = g.radix(j);
                    let inner: Complex64 = (m - nj..m).map(|q| tab.r(j, x).powu(q as u32)).sum();
                    acc += d[g.power(j)][x] * inner;
                }
                tab.roots.psi_index(g, n, x, res) * acc
            })
            .collect();
        out.push(c.residual("dirichlet-digit-expansion", format!("n={n}"), max_abs_diff(&d[n], &rhs)));
    }

    for n in 1..=n_top {
        let nd = g.digits_of(n)?;
        let blocks: Vec<(usize, usize)> = (0..nd.digits.len())
            .rev()
            .filter(|&j| nd.digits[j] != 0)
            .map(|j| (j, nd.digits[j]))
            .collect();
        let rhs: Vec<Complex64> = (0..size)
            .map(|x| {
                let mut acc = zero;
                let mut prod = Complex64::new(1.0, 0.0);
                let mut rest = n;
                for (i, &(pos, s)) in blocks.iter().enumerate() {
                    let sm = s * g.power(pos);
                    acc += prod * k[sm][x] * sm as f64;
                    rest -= sm;
                    if i + 1 < blocks.len() {
                        acc += prod * d[sm][x] * rest as f64;
                    }
                    prod *= tab.r(pos, x).powu(s as u32);
                }
                acc
            })
            .collect();
        let lhs: Vec<Complex64> = k[n].iter().map(|v| v * n as f64).collect();
        out.push(c.residual("fejer-decomposition", format!("n={n}"), max_abs_diff(&lhs, &rhs)));
    }

    let len = n_top + 2;
    let mut seqs = nonincreasing_weights(len);
    seqs.extend(nondecreasing_weights(len));
    seqs.push(WeightSequence::harmonic(len));
    let f = GridFunction::random(g, res, cfg.seed)?;
    for q in &seqs {
        let label = q.label().to_string();
        for n in 2..=n_top {
            let abel_weight: f64 = (0..n - 1)
                .map(|j| (q.q(j).unwrap() - q.q(j + 1).unwrap()) * j as f64)
                .sum::<f64>()
                + q.q(n - 1)? * (n - 1) as f64;
            let qn = q.big_q(n)?;
            out.push(c.residual(
                "tmean-weight-sum",
                format!("q={label};form=exact;n={n}"),
                (abel_weight - (qn - q.q(0)?)).abs(),
            ));
            out.push(c.report(
                "tmean-weight-sum",
                format!("q={label};form=printed;n={n}"),
                (abel_weight - qn).abs(),
            ));

            let literal: Vec<Complex64> = (0..size)
                .map(|x| (1..n).map(|j| d[j][x] * q.q(j).unwrap()).sum::<Complex64>() / qn)
                .collect();
            let abel: Vec<Complex64> = (0..size)
                .map(|x| {
                    let s: Complex64 = (1..n - 1)
                        .map(|j| k[j][x] * ((q.q(j).unwrap() - q.q(j + 1).unwrap()) * j as f64))
                        .sum();
                    (s + k[n - 1][x] * (q.q(n - 1).unwrap() * (n - 1) as f64)) / qn
                })
                .collect();
            out.push(c.residual(
                "tmean-kernel-abel",
                format!("q={label};n={n}"),
                max_abs_diff(&literal, &abel),
            ));
            let direct = tmean_kernel(q, n, g, res)?;
            out.push(c.residual(
                "tmean-kernel-abel",
                format!("q={label};form=multiplier;n={n}"),
                max_abs_diff(&direct.values, &literal),
            ));

            let tm = t_mean(&f, n, q)?;
            let ta = t_mean_abel(&f, n, q)?;
            out.push(c.residual("tmean-abel", format!("q={label};n={n}"), tm.max_diff(&ta)?));
        }
    }

    for n in 2..=n_top {
        let l = harmonic(n);
        let literal: Vec<Complex64> = (0..size)
            .map(|x| (1..n).map(|j| d[j][x] / j as f64).sum::<Complex64>() / l)
            .collect();
        let printed: Vec<Complex64> = (0..size)
            .map(|x| ((1..n).map(|j| k[j][x] / (j + 1) as f64).sum::<Complex64>() + k[n][x]) / l)
            .collect();
        let exact: Vec<Complex64> = (0..size)
            .map(|x| ((1..n - 1).map(|j| k[j][x] / (j + 1) as f64).sum::<Complex64>() + k[n - 1][x]) / l)
            .collect();
        out.push(c.report(
            "riesz-log-kernel-abel",
            format!("form=printed;n={n}"),
            max_abs_diff(&literal, &printed),
        ));
        out.push(c.residual(
            "riesz-log-kernel-abel",
            format!("form=exact;n={n}"),
            max_abs_diff(&literal, &exact),
        ));
    }

    for n in 1..=res {
        let mn = g.power(n);
        if mn < 2 {
            continue;
        }
        let l = harmonic(mn);
        let p: Vec<Complex64> = (0..size)
            .map(|x| (1..mn).map(|j| d[j][x] / (mn - j) as f64).sum::<Complex64>() / l)
            .collect();
        let rhs: Vec<Complex64> = (0..size)
            .map(|x| {
                let y: Complex64 = (1..mn).map(|j| d[j][x] / j as f64).sum::<Complex64>() / l;
                d[mn][x] - tab.roots.psi_index(g, mn - 1, x, res) * y.conj()
            })
            .collect();
        out.push(c.residual("norlund-log-power", format!("n={n}"), max_abs_diff(&p, &rhs)));
    }
    Ok(out)
}

// ---------------------------------------------------------------- inequalities

fn inequality_suite(cfg: &SuiteConfig) -> Result<Vec<Rec>> {
    let c = Ctx::new(cfg, Suite::Inequalities);
    let g = c.g;
    let lam = g.lambda() as f64;
    let mut out = Vec::new();
    let n_cap = cfg.n_max.min(g.power(g.levels()) - 1);

    for n in 0..=g.levels() {
        let res = n.max(1).min(g.levels());
        let l1 = lp_norm(&dirichlet(g, g.power(n), res)?, 1.0)?;
        out.push(c.residual("dirichlet-power-l1", format!("n={n}"), (l1 - 1.0).abs()));
    }

    let mut fejer_sup = 0.0f64;
    for n in 1..=n_cap {
        let res = min_resolution(g, n)?;
        fejer_sup = fejer_sup.max(lp_norm(&fejer(g, n, res)?, 1.0)?);
    }
    out.push(c.report("fejer-l1-bounded", format!("n<={n_cap}"), fejer_sup));
    if g.is_dyadic() {
        out.push(c.upper("fejer-walsh-bound", format!("n<={n_cap}"), fejer_sup, 2.0));
    }

    let lebesgue: Vec<(usize, f64)> = (1..=n_cap)
        .into_par_iter()
        .map(|n| lebesgue_constant(g, n).map(|l| (n, l)))
        .collect::<Result<_>>()?;
    let mut log_ratio = 0.0f64;
    let mut literal_margin = f64::INFINITY;
    for &(n, l) in &lebesgue {
        let nd = g.digits_of(n)?;
        let b = lebesgue_bounds_with(g, &nd, VariationForm::FromZero);
        out.push(c.lower("lebesgue-variation-bounds", format!("side=lower;n={n}"), l, b.lower));
        out.push(c.upper("lebesgue-variation-bounds", format!("side=upper;n={n}"), l, b.upper));
        let lit = lebesgue_bounds_with(g, &nd, VariationForm::Literal);
        literal_margin = literal_margin.min((l - lit.lower).min(lit.upper - l));
        if g.is_dyadic() {
            let v = nd.variation_v_from_zero() as f64;
            out.push(c.lower("lebesgue-walsh-variation", format!("side=lower;n={n}"), l, v / 8.0));
            out.push(c.upper("lebesgue-walsh-variation", format!("side=upper;n={n}"), l, v));
        }
        if n >= 2 {
            log_ratio = log_ratio.max(l / (n as f64).ln());
        }
    }
    if g.is_dyadic() {
        for &n in &[1usize, 3] {
            if let Some(&(_, l)) = lebesgue.iter().find(|(m, _)| *m == n) {
                let want = if n == 1 { 1.0 } else { 1.5 };
                out.push(c.residual("walsh-lebesgue-exact", format!("n={n}"), (l - want).abs()));
            }
        }
    }
    out.push(c.report(
        "lebesgue-variation-bounds",
        format!("form=literal;n<={n_cap}"),
        literal_margin,
    ));
    out.push(c.report("lebesgue-log-growth", format!("2<=n<={n_cap}"), log_ratio));

    let mut k = 1;
    while let Ok(q) = lacunary_index(g, k) {
        if q >= g.power(g.levels()) {
            break;
        }
        let l = lebesgue_constant(g, q)?;
        out.push(c.lower("lebesgue-lacunary-bounds", format!("side=lower;k={k}"), l, k as f64 / (2.0 * lam)));
        out.push(c.upper("lebesgue-lacunary-bounds", format!("side=upper;k={k}"), l, lam * k as f64));
        k += 1;
    }

    let mut riesz = 0.0f64;
    for n in 2..=n_cap {
        let res = min_resolution(g, n)?;
        riesz = riesz.max(lp_norm(&riesz_log_kernel(n, g, res)?, 1.0)?);
    }
    out.push(c.report("riesz-log-kernel-bounded", format!("2<=n<={n_cap}"), riesz));

    let len = n_cap + 2;
    let mut seqs = nonincreasing_weights(len);
    seqs.extend(nondecreasing_weights(len));
    for q in &seqs {
        let mut sup = 0.0f64;
        for n in 1..=n_cap {
            let res = min_resolution(g, n)?;
            sup = sup.max(lp_norm(&tmean_kernel(q, n, g, res)?, 1.0)?);
        }
        out.push(c.report("tmean-kernel-bounded", format!("q={};n<={n_cap}", q.label()), sup));
    }

    let mut nl = 0.0f64;
    let mut kp = 0.0f64;
    for n in 0..=g.levels() {
        let mn = g.power(n);
        let res = n.max(1).min(g.levels());
        kp = kp.max(lp_norm(&fejer(g, mn, res)?, 1.0)?);
        if mn >= 2 && n <= 12 {
            nl = nl.max(lp_norm(&norlund_log_kernel(mn, g, res)?, 1.0)?);
        }
    }
    out.push(c.report("fejer-power-l1-bounded", format!("n<={}", g.levels()), kp));
    out.push(c.report("norlund-log-power-bounded", format!("n<={}", g.levels().min(12)), nl));

    let res = c.res_capped(256);
    let fs = random_functions(g, res, cfg.seed ^ 0xa11ce, 2 * cfg.samples)?;
    for p in [1.0, 2.0, f64::INFINITY] {
        let mut margin = f64::INFINITY;
        let mut worst = (0.0, 0.0);
        for pair in fs.chunks(2) {
            let (f, h) = (&pair[0], &pair[1]);
            let lhs = lp_norm(&convolve(f, h)?, p)?;
            let rhs = lp_norm(f, p)? * lp_norm(h, 1.0)?;
            if rhs - lhs < margin {
                margin = rhs - lhs;
                worst = (lhs, rhs);
            }
        }
        out.push(c.upper(
            "young-inequality",
            format!("p={p};samples={}", cfg.samples),
            worst.0,
            worst.1,
        ));
    }

    let fs = random_functions(g, res, cfg.seed ^ 0x3a7a, cfg.samples)?;
    for p in [1.0, 2.0] {
        let mut lo = (f64::INFINITY, 0.0, 0.0);
        let mut hi = (f64::INFINITY, 0.0, 0.0);
        let mut best_lo = (f64::INFINITY, 0.0, 0.0);
        let mut best_hi = (f64::INFINITY, 0.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xbe57);
        for f in &fs {
            for n in 0..=res {
                let om = modulus(f, p, n)?;
                let sm = conditional_expectation(f, n)?;
                let dist = lp_norm(&f.sub(&sm)?, p)?;
                if dist - om / 2.0 < lo.0 {
                    lo = (dist - om / 2.0, dist, om / 2.0);
                }
                if om - dist < hi.0 {
                    hi = (om - dist, dist, om);
                }
                let bracket = best_approx_bounds(f, p, g.power(n))?;
                // any polynomial of degree < M_n is at least as far as the lower bracket
                let mut nearest = bracket.upper;
                let size = f.len();
                for _ in 0..4 {
                    let mut spec = transform_forward(&sm);
                    for cf in spec.coeffs.iter_mut().take(g.power(n)) {
                        *cf += Complex64::new(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2));
                    }
                    let poly = transform_inverse(&spec);
                    nearest = nearest.min(lp_norm(&f.sub(&poly)?, p)?);
                    debug_assert_eq!(poly.len(), size);
                }
                if nearest - bracket.lower < best_lo.0 {
                    best_lo = (nearest - bracket.lower, nearest, bracket.lower);
                }
                if bracket.upper - dist < best_hi.0 {
                    best_hi = (bracket.upper - dist, dist, bracket.upper);
                }
            }
        }
        let sp = format!("p={p};samples={}", cfg.samples);
        out.push(c.lower("watari-modulus", format!("{sp};side=lower"), lo.1, lo.2));
        out.push(c.upper("watari-modulus", format!("{sp};side=upper"), hi.1, hi.2));
        out.push(c.lower("watari-best-approximation", format!("{sp};side=lower"), best_lo.1, best_lo.2));
        out.push(c.upper("watari-best-approximation", format!("{sp};side=upper"), best_hi.1, best_hi.2));
    }
    Ok(out)
}

// ---------------------------------------------------------------- lemmas

/// Largest ratio, tracked with the instance that produced it.
#[derive(Default)]
struct Sup {
    value: f64,
}

impl Sup {
    fn push(&mut self, v: f64) {
        if v > self.value || v.is_nan() {
            self.value = v;
        }
    }
}

fn lemma_suite(cfg: &SuiteConfig) -> Result<Vec<Rec>> {
    let c = Ctx::new(cfg, Suite::Lemmas);
    let g = c.g;
    let res = c.res_capped(1024);
    let size = g.power(res);
    let n_top = cfg.n_max.min(size);
    let lam = g.lambda() as f64;
    let ev = KernelEval::new(g, res)?;
    let xds: Vec<Vec<usize>> = (0..size).map(|x| digits(g, x, res)).collect();
    let mut out = Vec::new();

    let kp: Vec<Vec<Complex64>> = (0..=res).map(|j| fejer(g, g.power(j), res).map(|k| k.values)).collect::<Result<_>>()?;
    // sum_{j<=h} M_j |K_{M_j}(x)|
    let dyadic_sum = |lo: usize, hi: usize, x: usize| -> f64 {
        (lo..=hi).map(|j| c.m(j) * kp[j][x].norm()).sum()
    };

    let (mut dn, mut fl_in, mut fl_out, mut fl_large) = (Sup::default(), Sup::default(), Sup::default(), Sup::default());
    let mut dom = Sup::default();
    for n in 1..=n_top {
        let dk = dirichlet(g, n, res)?.values;
        let kk = fejer(g, n, res)?.values;
        let nd = g.digits_of(n)?;
        for x in 0..size {
            let num = n as f64 * kk[x].norm();
            let den = dyadic_sum(nd.lo, nd.hi, x);
            if den > 1e-9 {
                dom.push(num / den);
            } else if num > 1e-9 {
                dom.push(f64::INFINITY);
            }
        }
        for level in 1..=res {
            let step = g.power(level);
            let di = coset_integrals(&dk, step);
            let ki = coset_integrals(&kk, step);
            let mn = c.m(level);
            for x in 1..step {
                let xd = &xds[x];
                if let Some(s) = lowest_nonzero(&xd[..level]) {
                    dn.push(di[x] * mn / c.m(s));
                }
                if let Some((k, l)) = shell_of(xd, level) {
                    if l < level {
                        fl_in.push(ki[x] * n as f64 * mn / (c.m(l) * c.m(k)));
                    } else {
                        fl_out.push(ki[x] * mn / c.m(k));
                    }
                    if n >= step {
                        fl_large.push(ki[x] * mn * mn / (c.m(l) * c.m(k)));
                    }
                }
            }
        }
    }
    let sp = format!("res={res};n<={n_top}");
    out.push(c.report("dirichlet-local-integral", &sp, dn.value));
    out.push(c.report("fejer-local-integral", format!("{sp};part=inner"), fl_in.value));
    out.push(c.report("fejer-local-integral", format!("{sp};part=outer"), fl_out.value));
    out.push(c.report("fejer-local-integral-large", &sp, fl_large.value));
    out.push(c.report("fejer-dyadic-domination", &sp, dom.value));

    let mut vanish = 0.0f64;
    let mut power_sup = Sup::default();
    for n in 0..=res {
        for x in 1..size {
            let xd = &xds[x];
            let k = lowest_nonzero(xd).expect("x is nonzero");
            power_sup.push(kp[n][x].norm() / c.m(k));
            if let Some(l) = xd.iter().enumerate().skip(k + 1).find(|(_, &v)| v != 0).map(|(j, _)| j) {
                if n > l {
                    vanish = vanish.max(kp[n][x].norm());
                }
            }
        }
    }
    out.push(c.residual("fejer-power-vanishing", format!("res={res}"), vanish));
    out.push(c.report("fejer-power-sup", format!("res={res}"), power_sup.value));

    for n in 1..res {
        let mut margin = (f64::INFINITY, 0.0, 0.0);
        let mut vanish = 0.0f64;
        for s in 1..g.radix(n) {
            let sm = s * g.power(n);
            let x = g.power(n - 1) + g.power(n);
            let v = ev.fejer_at(sm, &xds[x]).norm();
            let bound = c.m(n) / (2.0 * PI * s as f64);
            if v - bound < margin.0 {
                margin = (v - bound, v, bound);
            }
            for (y, yd) in xds.iter().enumerate().skip(1) {
                let t = lowest_nonzero(yd).expect("nonzero");
                if n > t && yd[t + 1..n].iter().any(|&v| v != 0) {
                    vanish = vanish.max(ev.fejer_at(sm, &xds[y]).norm());
                }
            }
        }
        out.push(c.lower("fejer-multiple-lower", format!("n={n}"), margin.1, margin.2));
        out.push(c.residual("fejer-multiple-vanishing", format!("n={n}"), vanish));
    }

    let mut blocks_inf = f64::INFINITY;
    for n in 1..=n_top.min(size - 1) {
        let nd = g.digits_of(n)?;
        let kn = |m: usize, x: usize| ev.fejer_at(m, &xds[x]) * m as f64;
        if nd.lo != nd.hi && nd.lo >= 1 {
            let x = g.power(nd.lo - 1) + g.power(nd.lo);
            let lhs = kn(n, x).norm();
            let exact = n - nd.digit(nd.hi) * g.power(nd.hi);
            out.push(c.residual(
                "fejer-lower-digit",
                format!("form=exact;n={n}"),
                (lhs - kn(exact, x).norm()).abs(),
            ));
            let printed = n - g.power(nd.hi);
            out.push(c.report(
                "fejer-lower-digit",
                format!("form=printed;n={n}"),
                (lhs - kn(printed, x).norm()).abs(),
            ));
            out.push(c.lower(
                "fejer-lower-digit",
                format!("form=bound;n={n}"),
                lhs,
                c.m(nd.lo).powi(2) / (2.0 * PI * lam),
            ));
        }
        let mut prev_zero = true;
        for (j, &dj) in nd.digits.iter().enumerate() {
            if dj != 0 && prev_zero && j >= 1 {
                let x = g.power(j - 1) + g.power(j);
                blocks_inf = blocks_inf.min(kn(n, x).norm() / c.m(j).powi(2));
            }
            prev_zero = dj == 0;
        }
    }
    out.push(c.report("fejer-lower-blocks", format!("n<={n_top}"), blocks_inf));

    let mut nn = 3;
    while let Ok(q) = lacunary_index(g, nn - 1) {
        if q > size {
            break;
        }
        let mut margin = (f64::INFINITY, 0.0, 0.0);
        for k in 1..nn {
            if 2 * k >= res {
                break;
            }
            let x = g.power(2 * k - 1) + g.power(2 * k);
            let v = ev.fejer_at(q, &xds[x]).norm() * q as f64;
            let bound = c.m(2 * k).powi(2) / 144.0;
            if v - bound < margin.0 {
                margin = (v - bound, v, bound);
            }
        }
        if margin.0.is_finite() {
            out.push(c.lower("lacunary-fejer-lower", format!("n={nn}"), margin.1, margin.2));
        }
        nn += 1;
    }

    // T-mean tails (1/Q_n) sum_{j=M_N}^{n-1} q_j D_j and kernels F_n
    let len = n_top + 2;
    for q in nonincreasing_weights(len) {
        let (mut tail, mut tail_scaled) = (Sup::default(), Sup::default());
        let (mut li_in, mut li_out, mut li_large) = (Sup::default(), Sup::default(), Sup::default());
        for level in 0..res {
            let step = g.power(level);
            for n in step + 1..=n_top {
                let qn = q.big_q(n)?;
                let mut w = vec![0.0; n];
                for (j, wj) in w.iter_mut().enumerate().skip(step) {
                    *wj = q.q(j)? / qn;
                }
                let gk = weighted_dirichlet(g, &w, res)?.values;
                let hi = g.digits_of(n)?.hi;
                for x in 0..size {
                    let den = dyadic_sum(0, hi, x);
                    tail.push(gk[x].norm() * step as f64 / den);
                    tail_scaled.push(gk[x].norm() * n as f64 / den);
                }
                let ints = coset_integrals(&gk, step);
                for x in 1..step {
                    if let Some((k, l)) = shell_of(&xds[x], level) {
                        let mlmk = c.m(l) * c.m(k);
                        if l < level {
                            li_in.push(ints[x] * n as f64 * step as f64 / mlmk);
                        } else {
                            li_out.push(ints[x] * step as f64 / c.m(k));
                        }
                        li_large.push(ints[x] * (step * step) as f64 / mlmk);
                    }
                }
            }
        }
        let sp = format!("q={};res={res};n<={n_top}", q.label());
        out.push(c.report("tmean-dirichlet-tail", &sp, tail.value));
        out.push(c.report("tmean-dirichlet-tail-scaled", &sp, tail_scaled.value));
        out.push(c.report("tmean-tail-local-integral", format!("{sp};part=inner"), li_in.value));
        out.push(c.report("tmean-tail-local-integral", format!("{sp};part=outer"), li_out.value));
        out.push(c.report("tmean-tail-local-integral-large", &sp, li_large.value));
    }
    for q in nondecreasing_weights(len) {
        let mut dom = Sup::default();
        let (mut li_in, mut li_out, mut li_large) = (Sup::default(), Sup::default(), Sup::default());
        for n in 1..=n_top {
            let fk = tmean_kernel(&q, n, g, res)?.values;
            let hi = g.digits_of(n)?.hi;
            for x in 0..size {
                dom.push(fk[x].norm() * n as f64 / dyadic_sum(0, hi, x));
            }
            for level in 1..=res {
                let step = g.power(level);
                let ints = coset_integrals(&fk, step);
                for x in 1..step {
                    if let Some((k, l)) = shell_of(&xds[x], level) {
                        let mlmk = c.m(l) * c.m(k);
                        if l < level {
                            li_in.push(ints[x] * n as f64 * step as f64 / mlmk);
                        } else {
                            li_out.push(ints[x] * step as f64 / c.m(k));
                        }
                        if n >= step {
                            li_large.push(ints[x] * (step * step) as f64 / mlmk);
                        }
                    }
                }
            }
        }
        let sp = format!("q={};res={res};n<={n_top}", q.label());
        out.push(c.report("tmean-kernel-domination", &sp, dom.value));
        out.push(c.report("tmean-kernel-local-integral", format!("{sp};part=inner"), li_in.value));
        out.push(c.report("tmean-kernel-local-integral", format!("{sp};part=outer"), li_out.value));
        out.push(c.report("tmean-kernel-local-integral-large", &sp, li_large.value));
    }

    // sum_{j=M_N+1}^{n} |K_j| / (j + 1) over I_N cosets, and Nörlund-log kernels
    let fejer_abs: Vec<Vec<f64>> = (0..=n_top)
        .map(|j| {
            if j == 0 {
                Ok(vec![0.0; size])
            } else {
                fejer(g, j, res).map(|k| k.values.iter().map(|v| v.norm()).collect())
            }
        })
        .collect::<Result<_>>()?;
    let (mut l2_in, mut l2_out, mut dn7) = (Sup::default(), Sup::default(), Sup::default());
    for level in 1..=res {
        let step = g.power(level);
        if step >= n_top {
            break;
        }
        let mut acc = vec![0.0; size];
        for n in step + 1..=n_top {
            for (a, v) in acc.iter_mut().zip(&fejer_abs[n]) {
                *a += v / (n + 1) as f64;
            }
            let as_c: Vec<Complex64> = acc.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            let ints = coset_integrals(&as_c, step);
            for x in 1..step {
                if let Some((k, l)) = shell_of(&xds[x], level) {
                    if l < level {
                        l2_in.push(ints[x] * (step * step) as f64 / (c.m(k) * c.m(l)));
                    } else {
                        l2_out.push(ints[x] * step as f64 / (c.m(k) * harmonic(n)));
                    }
                }
            }
        }
    }
    for n in 2..=n_top {
        let pk = norlund_log_kernel(n, g, res)?.values;
        for level in 1..=res {
            let step = g.power(level);
            let ints = coset_integrals(&pk, step);
            for x in 1..step {
                if let Some(s) = lowest_nonzero(&xds[x][..level]) {
                    dn7.push(ints[x] * step as f64 / c.m(s));
                }
            }
        }
    }
    out.push(c.report("riesz-log-local-integral", format!("{sp};part=inner"), l2_in.value));
    out.push(c.report("riesz-log-local-integral", format!("{sp};part=outer"), l2_out.value));
    out.push(c.report("norlund-log-local-integral", &sp, dn7.value));
    Ok(out)
}

// ---------------------------------------------------------------- means

fn means_suite(cfg: &SuiteConfig) -> Result<Vec<Rec>> {
    let c = Ctx::new(cfg, Suite::Means);
    let g = c.g;
    let res = c.res_covering(cfg.n_max);
    let n_top = cfg.n_max.min(g.power(res));
    let len = n_top + 2;
    let mut out = Vec::new();
    let f = GridFunction::random(g, res, cfg.seed)?;

    let kinds = vec![
        MeanKind::Partial,
        MeanKind::Fejer,
        MeanKind::Cesaro { alpha: 0.25 },
        MeanKind::Cesaro { alpha: 0.5 },
        MeanKind::Cesaro { alpha: 1.0 },
        MeanKind::U { alpha: 0.5 },
        MeanKind::V { alpha: 0.5 },
        MeanKind::RieszLog,
        MeanKind::NorlundLog,
        MeanKind::Norlund(WeightSequence::ones(len)),
        MeanKind::Norlund(WeightSequence::harmonic(len)),
        MeanKind::Norlund(WeightSequence::log(len)),
        MeanKind::T(WeightSequence::ones(len)),
        MeanKind::T(WeightSequence::harmonic(len)),
        MeanKind::T(WeightSequence::log(len)),
    ];
    let stride = (n_top / 16).max(1);
    let rows: Vec<Rec> = kinds
        .par_iter()
        .map(|kind| -> Result<Rec> {
            let mut worst = 0.0f64;
            let mut n = kind.min_index().max(1);
            while n <= n_top {
                let kernel = weighted_dirichlet_literal(g, &kind.weights(n)?, res)?;
                let via_kernel = convolve_naive(&f, &kernel)?;
                worst = worst.max(kind.apply(&f, n)?.max_diff(&via_kernel)?);
                n += if n < 8 { 1 } else { stride };
            }
            Ok(c.residual("mean-kernel-consistency", format!("kind={};n<={n_top}", kind.name()), worst))
        })
        .collect::<Result<_>>()?;
    out.extend(rows);

    let ones = WeightSequence::ones(len);
    let mut worst = 0.0f64;
    let mut abel = 0.0f64;
    for n in 1..=n_top {
        let a = MeanKind::Norlund(ones.clone()).apply(&f, n)?;
        worst = worst.max(a.max_diff(&MeanKind::Fejer.apply(&f, n)?)?);
    }
    out.push(c.residual("norlund-fejer-equality", format!("n<={n_top}"), worst));
    for q in [WeightSequence::harmonic(len), WeightSequence::log(len), WeightSequence::power(0.5, len)?] {
        for n in 1..=n_top {
            let a = norlund_mean_abel(&f, n, &q)?;
            abel = abel.max(a.max_diff(&MeanKind::Norlund(q.clone()).apply(&f, n)?)?);
        }
    }
    out.push(c.residual("norlund-abel", format!("n<={n_top}"), abel));

    for alpha in [0.25, 0.5, 1.0] {
        let a = CesaroCoeffs::new(alpha, n_top)?;
        let am = CesaroCoeffs::new(alpha - 1.0, n_top)?;
        let mut sum_res = 0.0f64;
        let mut diff_res = 0.0f64;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for n in 0..=n_top {
            let s: f64 = (0..=n).map(|k| am.get(n - k).unwrap()).sum();
            sum_res = sum_res.max((a.get(n)? - s).abs());
            if n >= 1 {
                diff_res = diff_res.max((a.get(n)? - a.get(n - 1)? - am.get(n)?).abs());
            }
            if n >= 8 {
                let r = a.get(n)? / (n as f64).powf(alpha);
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        out.push(c.residual("cesaro-sum", format!("alpha={alpha}"), sum_res));
        out.push(c.residual("cesaro-difference", format!("alpha={alpha}"), diff_res));
        if n_top >= 8 {
            out.push(c.lower("cesaro-growth", format!("alpha={alpha};side=lower"), lo, 0.5));
            out.push(c.upper("cesaro-growth", format!("alpha={alpha};side=upper"), hi, 2.0));
        }
    }

    for q in [WeightSequence::ones(len), WeightSequence::harmonic(len)] {
        let rep = regularity_report(&q, n_top)?;
        let growth: Vec<f64> = rep.rows.iter().map(|r| 1.0 / r.ratio).collect();
        out.push(c.trend("norlund-regularity", format!("q={};n<={n_top}", q.label()), &growth));
        let broken = rep.rows.iter().filter(|r| r.envelope_ok == Some(false)).count();
        out.push(c.residual("norlund-regularity", format!("q={};envelope", q.label()), broken as f64));
    }
    for q in [WeightSequence::log(len), WeightSequence::power(1.5, len)?] {
        let rep = regularity_report(&q, n_top)?;
        let last = rep.rows.last().map(|r| r.scaled).unwrap_or(f64::NAN);
        out.push(c.report("norlund-regularity", format!("q={};scaled-ratio", q.label()), last));
    }

    let res_w = c.res_covering(cfg.n_max.min(64));
    let n_w = cfg.n_max.min(64).min(g.power(res_w));
    let fs = random_functions(g, res_w, cfg.seed ^ 0x7a5, cfg.samples)?;
    let indices: Vec<usize> = (1..=n_w).collect();
    for q in nonincreasing_weights(n_w + 2).into_iter().chain([WeightSequence::harmonic(n_w + 2)]) {
        let mut worst = (f64::INFINITY, 0.0, 0.0);
        for f in &fs {
            let t_star = weighted_maximal(f, &MeanKind::T(q.clone()), &indices, |_| 1.0)?;
            let s_star = weighted_maximal(f, &MeanKind::Fejer, &indices, |_| 1.0)?;
            for (t, s) in t_star.values.iter().zip(&s_star.values) {
                if s.re - t.re < worst.0 {
                    worst = (s.re - t.re, t.re, s.re);
                }
            }
        }
        out.push(c.upper(
            "weighted-maximal",
            format!("q={};n<={n_w};samples={}", q.label(), cfg.samples),
            worst.1,
            worst.2,
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------- martingales

fn martingale_suite(cfg: &SuiteConfig) -> Result<Vec<Rec>> {
    let c = Ctx::new(cfg, Suite::Martingales);
    let g = c.g;
    let res = c.res_capped(512);
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa70);

    for p in [0.5, 1.0] {
        let mut consist = 0.0f64;
        let mut cond = 0.0f64;
        let mut budget_margin = (f64::INFINITY, 0.0, 0.0);
        let mut single = (f64::INFINITY, 0.0);
        for s in 0..cfg.samples {
            let count = 1 + s % 3;
            let mut coeffs = Vec::new();
            for _ in 0..count {
                let level = rng.gen_range(0..res);
                let atom = random_atom(g, res, p, level, rng.gen())?;
                coeffs.push((rng.gen_range(-1.0..1.0), atom));
            }
            let (mart, budget) = atom_martingale(&coeffs)?;
            consist = consist.max(mart.consistency_defect()?);
            for (n, e) in mart.entries.iter().enumerate() {
                let mut sum = GridFunction::zeros(g, res)?;
                for (lam, a) in &coeffs {
                    sum = sum.add(&partial_sum(&a.values, g.power(n))?.scale(*lam))?;
                }
                cond = cond.max(e.refine(res)?.max_diff(&sum)?);
            }
            let hp = hardy_quasinorm(&mart, p)?.powf(p);
            if budget - hp < budget_margin.0 {
                budget_margin = (budget - hp, hp, budget);
            }
            let (m1, _) = atom_martingale(&coeffs[..1].iter().map(|(_, a)| (1.0, a.clone())).collect::<Vec<_>>())?;
            let h1 = hardy_quasinorm(&m1, p)?;
            if 1.0 - h1 < single.0 {
                single = (1.0 - h1, h1);
            }
        }
        let sp = format!("p={p};res={res};samples={}", cfg.samples);
        out.push(c.residual("martingale-consistency", format!("{sp};law"), consist));
        out.push(c.residual("martingale-consistency", format!("{sp};atomic-sum"), cond));
        out.push(c.upper("atomic-martingale", &sp, budget_margin.1, budget_margin.2));
        out.push(c.upper("hardy-quasinorm", format!("{sp};single-atom"), single.1, 1.0));
    }

    let fs = random_functions(g, res, cfg.seed ^ 0x3a1, cfg.samples)?;
    let (mut maxf, mut exact, mut tail, mut mono) = (0.0f64, 0.0f64, 0.0f64, 0usize);
    let mut dominance = f64::INFINITY;
    for f in &fs {
        let mart = StepMartingale::regular(f)?;
        let star = maximal_function(&mart)?;
        let sums = (0..=res)
            .map(|n| partial_sum(f, g.power(n)))
            .collect::<Result<Vec<_>>>()?;
        for x in 0..f.len() {
            let brute = sums.iter().map(|s| s.values[x].norm()).fold(0.0, f64::max);
            maxf = maxf.max((star.values[x].re - brute).abs());
        }
        dominance = dominance.min(hardy_quasinorm(&mart, 1.0)? - lp_norm(f, 1.0)?);
        exact = exact.max(partial_sum(f, g.power(res))?.max_diff(f)?);
        for n in 0..=res {
            let t = tail_martingale(&mart, n)?;
            let direct = StepMartingale::regular(&f.sub(&conditional_expectation(f, n)?)?)?;
            for (a, b) in t.entries.iter().zip(&direct.entries) {
                tail = tail.max(a.max_diff(b)?);
            }
        }
        for p in [1.0, 2.0] {
            for n in 0..res {
                if modulus(f, p, n + 1)? > modulus(f, p, n)? + 1e-12 {
                    mono += 1;
                }
            }
        }
    }
    let sp = format!("res={res};samples={}", cfg.samples);
    out.push(c.residual("maximal-function", &sp, maxf));
    out.push(c.lower("hardy-quasinorm", format!("{sp};dominates-l1"), dominance, 0.0));
    out.push(c.residual("partial-sum-exact", &sp, exact));
    out.push(c.residual("tail-martingale", &sp, tail));
    out.push(c.residual("modulus-monotone", &sp, mono as f64));
    Ok(out)
}

// ---------------------------------------------------------------- strong sums

/// Norm used for the terms of a strong sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermNorm {
    /// `||g||_p^p`
    Lp,
    /// `||g||_{H_p}^p` of the regular martingale of `g`
    Hp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongSumRow {
    pub n: usize,
    pub term: f64,
    pub cumulative: f64,
    /// `cumulative / ||f||_{H_p}^p`
    pub ratio: f64,
}

/// `sum_{k=1}^{n} weight(k) ||mean_k f||^p` for `n = 1..=n_max`.
pub fn strong_sum(
    f: &GridFunction,
    kind: &MeanKind,
    p: f64,
    norm: TermNorm,
    weight: &(dyn Fn(usize) -> f64 + Sync),
    n_max: usize,
) -> Result<Vec<StrongSumRow>> {
    if n_max > f.len() {
        return Err(Error::Range(format!("n_max = {n_max} exceeds M_N = {}", f.len())));
    }
    let hp = hardy_quasinorm(&StepMartingale::regular(f)?, p)?.powf(p);
    let start = kind.min_index().max(1);
    let terms: Vec<(usize, f64)> = (start..=n_max)
        .into_par_iter()
        .map(|k| -> Result<(usize, f64)> {
            let mk = kind.apply(f, k)?;
            let v = match norm {
                TermNorm::Lp => lp_norm(&mk, p)?.powf(p),
                TermNorm::Hp => hardy_quasinorm(&StepMartingale::regular(&mk)?, p)?.powf(p),
            };
            Ok((k, weight(k) * v))
        })
        .collect::<Result<_>>()?;
    let mut acc = 0.0;
    Ok(terms
        .into_iter()
        .map(|(n, term)| {
            acc += term;
            StrongSumRow {
                n,
                term,
                cumulative: acc,
                ratio: if hp > 0.0 { acc / hp } else { f64::NAN },
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub index: usize,
    /// `||mean_index f||_{weak-L_p} / weight(index)`
    pub measured: f64,
    pub lower_bound: Option<f64>,
}

/// Weak-`L_p` norms of `mean_n f` at the finest level, for `n` in `indices`.
pub fn divergence_probe(
    mart: &StepMartingale,
    kind: &MeanKind,
    p: f64,
    indices: &[usize],
    weight: &dyn Fn(usize) -> f64,
) -> Result<Vec<ProbeRow>> {
    let f = mart.finest();
    indices
        .iter()
        .map(|&n| {
            let v = weak_lp(&kind.apply(f, n)?, p)? / weight(n);
            Ok(ProbeRow {
                index: n,
                measured: v,
                lower_bound: None,
            })
        })
        .collect()
}

/// Probe of the block martingale: weak-`L_p` norm of `T_{M_a + 2} f` with
/// unit weights next to `M_a^{1/p-2} / (16 a)`.
pub fn tmean_block_probe(g: &GroupSpec, alpha: &[usize], resolution: usize, p: f64) -> Result<Vec<ProbeRow>> {
    let params = CounterexampleParams {
        kind: CounterexampleKind::HpBlocks,
        alpha: alpha.to_vec(),
        resolution,
        p,
    };
    let ce = counterexample(g, &params)?;
    let indices: Vec<usize> = alpha.iter().map(|&a| g.power(a) + 2).collect();
    let q = WeightSequence::ones(g.power(resolution) + 2);
    let mut rows = divergence_probe(&ce.martingale, &MeanKind::T(q), p, &indices, &|_| 1.0)?;
    for (row, &a) in rows.iter_mut().zip(alpha) {
        row.lower_bound = Some((g.power(a) as f64).powf(1.0 / p - 2.0) / (16.0 * a as f64));
    }
    Ok(rows)
}

fn strong_suite(cfg: &SuiteConfig) -> Result<Vec<Rec>> {
    let c = Ctx::new(cfg, Suite::Strong);
    let g = c.g;
    let res = c.res_capped(512).min(8);
    let size = g.power(res);
    let mut out = Vec::new();
    let top_alpha: Vec<usize> = (res.saturating_sub(3)..res).filter(|&a| a >= 1).collect();
    let samples = cfg.samples.min(4).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x57);
    let atoms = |p: f64, rng: &mut ChaCha8Rng| -> Result<Vec<GridFunction>> {
        (0..samples)
            .map(|_| {
                let level = rng.gen_range(0..res);
                random_atom(g, res, p, level, rng.gen()).map(|a| a.values)
            })
            .collect()
    };
    let sp = format!("res={res};samples={samples}");

    let mut sup = Sup::default();
    for f in atoms(1.0, &mut rng)? {
        for row in strong_sum(&f, &MeanKind::Partial, 1.0, TermNorm::Lp, &|_| 1.0, size)? {
            if row.n >= 2 {
                sup.push(row.ratio / (row.n as f64 * (row.n as f64).ln()));
            }
        }
    }
    out.push(c.report("strong-partial-sums-bounded", &sp, sup.value));

    let p = 0.5;
    let mut sup = Sup::default();
    for f in atoms(p, &mut rng)? {
        let rows = strong_sum(&f, &MeanKind::Partial, p, TermNorm::Lp, &|k| 1.0 / (k as f64).powf(2.0 - p), size)?;
        sup.push(rows.last().map(|r| r.ratio).unwrap_or(0.0));
    }
    out.push(c.report("strong-partial-sums-power", format!("{sp};p={p}"), sup.value));

    let mut sup = Sup::default();
    for f in atoms(0.5, &mut rng)? {
        for row in strong_sum(&f, &MeanKind::Fejer, 0.5, TermNorm::Lp, &|_| 1.0, size)? {
            if row.n >= 2 {
                sup.push(row.ratio / (row.n as f64 * (row.n as f64).ln()));
            }
        }
    }
    out.push(c.report("strong-fejer-bounded", &sp, sup.value));

    let p = 0.4;
    let q = WeightSequence::ones(size + 2);
    let (mut tsum, mut tlog, mut rsum) = (Sup::default(), Sup::default(), Sup::default());
    for f in atoms(p, &mut rng)? {
        let rows = strong_sum(&f, &MeanKind::T(q.clone()), p, TermNorm::Lp, &|k| 1.0 / (k as f64).powf(2.0 - 2.0 * p), size)?;
        tsum.push(rows.last().map(|r| r.ratio).unwrap_or(0.0));
        let rows = strong_sum(&f, &MeanKind::T(q.clone()), 0.5, TermNorm::Lp, &|k| 1.0 / k as f64, size)?;
        for row in rows.iter().filter(|r| r.n >= 2) {
            tlog.push(row.ratio / (row.n as f64).ln());
        }
        let n_r = size.min(64);
        let rows = strong_sum(
            &f,
            &MeanKind::RieszLog,
            p,
            TermNorm::Hp,
            &|k| (k as f64).ln().powf(p) / (k as f64).powf(2.0 - 2.0 * p),
            n_r,
        )?;
        rsum.push(rows.last().map(|r| r.ratio).unwrap_or(0.0));
    }
    out.push(c.report("tmean-strong-sum", format!("{sp};p={p};q=ones"), tsum.value));
    out.push(c.report("tmean-strong-log-sum", format!("{sp};p=0.5;q=ones"), tlog.value));
    out.push(c.report("riesz-log-strong-sum", format!("{sp};p={p};n<={}", size.min(64)), rsum.value));

    let p = 0.5;
    let mut sup = Sup::default();
    let indices: Vec<usize> = (2..=size).collect();
    for f in atoms(p, &mut rng)? {
        let hp = hardy_quasinorm(&StepMartingale::regular(&f)?, p)?;
        let star = weighted_maximal(&f, &MeanKind::NorlundLog, &indices, |n| ((n + 1) as f64).powf(1.0 / p - 1.0))?;
        sup.push(lp_norm(&star, p)? / hp);
    }
    out.push(c.report("norlund-log-maximal", format!("{sp};p={p}"), sup.value));

    if top_alpha.is_empty() {
        return Ok(out);
    }
    let alpha_tag = top_alpha.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
    let ce_params = |kind: CounterexampleKind, alpha: Vec<usize>, p: f64| CounterexampleParams {
        kind,
        alpha,
        resolution: res,
        p,
    };

    for (kind, p) in [
        (CounterexampleKind::StrongPartialSums, 1.0),
        (CounterexampleKind::StrongFejer, 0.5),
        (CounterexampleKind::HpBlocks, 0.4),
    ] {
        let params = ce_params(kind, top_alpha.clone(), p);
        let ce = counterexample(g, &params)?;
        let tag = format!("kind={};alpha={alpha_tag}", enum_tag(&kind));
        out.push(c.residual("counterexample-spectrum", &tag, ce.spectrum_defect));
        for gc in gap_conditions(g, &params) {
            out.push(c.report(
                "counterexample-gap-conditions",
                format!("{tag};condition={};k={}", gc.condition, gc.k),
                gap_value(&gc),
            ));
        }
        let f = ce.martingale.finest();
        let phi = |n: usize| crate::hardy::default_phi(n);
        match kind {
            CounterexampleKind::StrongPartialSums => {
                let checkpoints: Vec<usize> = top_alpha.iter().map(|&a| 2 * g.power(a)).collect();
                let rows = strong_sum(f, &MeanKind::Partial, 1.0, TermNorm::Lp, &|_| 1.0, *checkpoints.last().unwrap())?;
                let vals: Vec<f64> = checkpoints
                    .iter()
                    .map(|&n| rows[n - 1].cumulative / (n as f64 * phi(n)))
                    .collect();
                out.push(c.trend("strong-partial-sums-divergence", &tag, &vals));
            }
            CounterexampleKind::StrongFejer => {
                let checkpoints: Vec<usize> = top_alpha.iter().map(|&a| 2 * g.power(a)).collect();
                let rows = strong_sum(f, &MeanKind::Fejer, 0.5, TermNorm::Lp, &|_| 1.0, *checkpoints.last().unwrap())?;
                let vals: Vec<f64> = checkpoints
                    .iter()
                    .map(|&n| rows[n - 1].cumulative / (n as f64 * phi(n)))
                    .collect();
                out.push(c.trend("strong-fejer-divergence", &tag, &vals));
            }
            _ => {
                let rows = tmean_block_probe(g, &top_alpha, res, p)?;
                for (row, &a) in rows.iter().zip(&top_alpha) {
                    out.push(c.lower(
                        "tmean-weak-divergence",
                        format!("{tag};k={a}"),
                        row.measured,
                        row.lower_bound.unwrap_or(f64::NAN),
                    ));
                }
                let bounds: Vec<f64> = rows.iter().filter_map(|r| r.lower_bound).collect();
                out.push(c.trend("tmean-weak-divergence", format!("{tag};series=bound"), &bounds));
            }
        }
    }

    let sub_alpha: Vec<usize> = (1..res).map(|h| g.power(h) + 1).collect();
    let params = ce_params(CounterexampleKind::FejerSubsequence, sub_alpha.clone(), 0.4);
    let ce = counterexample(g, &params)?;
    let tag = format!(
        "kind=fejer-subsequence;alpha={}",
        sub_alpha.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
    );
    out.push(c.residual("counterexample-spectrum", &tag, ce.spectrum_defect));
    for gc in gap_conditions(g, &params) {
        out.push(c.report(
            "counterexample-gap-conditions",
            format!("{tag};condition={};k={}", gc.condition, gc.k),
            gap_value(&gc),
        ));
    }
    let rows = divergence_probe(&ce.martingale, &MeanKind::Fejer, 0.4, &sub_alpha, &|_| 1.0)?;
    // the first block starts at the bottom of the spectrum; checkpoints from the second on
    let vals: Vec<f64> = rows.iter().skip(1).map(|r| r.measured).collect();
    out.push(c.trend("fejer-subsequence-divergence", &tag, &vals));
    Ok(out)
}

/// Margin `rhs - lhs`, or the partial sum itself when the bound is infinite.
fn gap_value(gc: &crate::hardy::GapCheck) -> f64 {
    if gc.rhs.is_finite() {
        gc.rhs - gc.lhs
    } else {
        gc.lhs
    }
}

fn enum_tag<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nosuch".parse::<Suite>().is_err());
    }

    #[test]
    fn group_tags() {
        assert_eq!(group_tag(&GroupSpec::walsh(5).unwrap()), "m=2");
        assert_eq!(group_tag(&GroupSpec::new(&[2, 3, 4], 7).unwrap()), "m=2,3,4");
    }

    #[test]
    fn in_scope_is_sorted_and_unique() {
        assert!(IN_SCOPE.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn shells() {
        assert_eq!(shell_of(&[0, 1, 0, 1], 4), Some((1, 3)));
        assert_eq!(shell_of(&[0, 1, 0, 1], 3), Some((1, 3)));
        assert_eq!(shell_of(&[0, 0, 0, 1], 3), None);
    }

    #[test]
    fn trivial_probe_is_zero() {
        let w = GroupSpec::walsh(4).unwrap();
        let f = GridFunction::constant(&w, 4, Complex64::new(0.0, 0.0)).unwrap();
        let mart = StepMartingale::regular(&f).unwrap();
        let rows = divergence_probe(&mart, &MeanKind::Fejer, 0.5, &[1, 2, 5], &|_| 1.0).unwrap();
        assert!(rows.iter().all(|r| r.measured == 0.0));
    }

    #[test]
    fn constant_strong_sum_is_flat() {
        let w = GroupSpec::walsh(4).unwrap();
        let f = GridFunction::constant(&w, 4, Complex64::new(1.0, 0.0)).unwrap();
        let rows = strong_sum(&f, &MeanKind::Partial, 1.0, TermNorm::Lp, &|_| 1.0, 16).unwrap();
        assert!(rows.iter().all(|r| (r.term - 1.0).abs() < 1e-12));
    }
}
