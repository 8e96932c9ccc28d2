//! Second moments of characteristic-polynomial coefficients.
//!
//! Three routes to `<|a_n|^2>_k`: the diagonal approximation (self pairs of
//! pseudo orbits only), the exact k-average for rationally independent edge
//! lengths (pseudo orbits interfere only when they traverse every edge the
//! same number of times) and a Monte-Carlo average over sampled wavenumbers.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::debruijn::{self, edge_multiplicities, EdgeMultiplicityVector};
use crate::error::{Error, Result};
use crate::quantum::{
    char_poly_direct, evolution_operator, pseudo_orbit_amplitude, SpectralInstance,
    DEFAULT_DIM_CAP,
};
use crate::scalar::Real;
use crate::words::{self, Count};

/// Diagonal approximation from the pseudo-orbit count alone:
/// `Str_q(n) q^(-n)`, which is `(q - 1) / q` for `n >= 2`.
pub fn diagonal_variance<T: Real>(q: u32, n: usize) -> Result<T> {
    if q < 2 {
        return Err(Error::arg("q-nary graphs need q >= 2"));
    }
    if n >= 2 {
        let q = T::from_usize_lossy(q as usize);
        return Ok((q - T::one()) / q);
    }
    let count = words::str_count(q, n)?;
    let qn = T::from_usize_lossy(q as usize).powi(n as i32);
    Ok(T::from_f64_lossy(count as f64) / qn)
}

fn check_index<T: Real>(inst: &SpectralInstance<T>, n: usize) -> Result<()> {
    if n > inst.dimension() {
        return Err(Error::arg(format!(
            "coefficient index {n} outside 0..={}",
            inst.dimension()
        )));
    }
    Ok(())
}

/// `sum_{po : E_po = n} |A_po|^2` over the enumerated pseudo orbits.
pub fn diagonal_variance_from_orbits<T: Real>(
    inst: &SpectralInstance<T>,
    n: usize,
    budget: u64,
) -> Result<T> {
    check_index(inst, n)?;
    let mut total = NeumaierSum::default();
    for po in debruijn::enumerate_primitive_pseudo_orbits(inst.graph().q(), n, budget)? {
        total.add(pseudo_orbit_amplitude(&po, inst.sigma())?.norm_sqr());
    }
    Ok(total.value())
}

/// Compensated summation; plain accumulation over `q^n` terms drifts past `1e-12`.
#[derive(Clone, Copy, Debug, Default)]
struct NeumaierSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> NeumaierSum<T> {
    fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    fn value(&self) -> T {
        self.sum + self.carry
    }
}

/// Pseudo orbits of length `n` grouped by edge-multiplicity vector; each
/// value is the signed amplitude sum `sum (-1)^(m_po) A_po` of one group.
pub fn degeneracy_groups<T: Real>(
    inst: &SpectralInstance<T>,
    n: usize,
    budget: u64,
) -> Result<BTreeMap<EdgeMultiplicityVector, (usize, Complex<T>)>> {
    check_index(inst, n)?;
    let mut groups: BTreeMap<EdgeMultiplicityVector, (usize, Complex<T>)> = BTreeMap::new();
    for po in debruijn::enumerate_primitive_pseudo_orbits(inst.graph().q(), n, budget)? {
        let key = edge_multiplicities(&po, inst.graph())?;
        let mut amp = pseudo_orbit_amplitude(&po, inst.sigma())?;
        if po.orbit_count() % 2 == 1 {
            amp = -amp;
        }
        let slot = groups.entry(key).or_insert((0, Complex::zero()));
        slot.0 += 1;
        slot.1 = slot.1 + amp;
    }
    Ok(groups)
}

/// Exact `<|a_n|^2>_k` for rationally independent edge lengths:
/// `sum over groups |sum_{po in group} (-1)^(m_po) A_po|^2`.
pub fn exact_grouped_variance<T: Real>(
    inst: &SpectralInstance<T>,
    n: usize,
    budget: u64,
) -> Result<T> {
    let mut total = NeumaierSum::default();
    for (_, amp) in degeneracy_groups(inst, n, budget)?.values() {
        total.add(amp.norm_sqr());
    }
    Ok(total.value())
}

/// Sample moments of one coefficient over sampled wavenumbers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoefficientMoments {
    pub n: usize,
    /// Mean of `|a_n|^2`.
    pub variance: f64,
    pub variance_std_error: f64,
    pub mean_re: f64,
    pub mean_im: f64,
    /// Standard error of the complex mean, `sqrt(mean |a_n - mean|^2 / (S - 1))`.
    pub mean_std_error: f64,
}

/// Samples `k` uniform on `[0, k_max]` and records moments of every
/// coefficient `a_0 … a_E` computed from direct determinants.
///
/// Wavenumbers are drawn up front from ChaCha8 seeded with `seed`; the
/// determinants run in parallel and are reduced in sample order, so the
/// result does not depend on scheduling.
pub fn monte_carlo_moments<T: Real>(
    inst: &SpectralInstance<T>,
    samples: usize,
    k_max: f64,
    seed: u64,
) -> Result<Vec<CoefficientMoments>> {
    if samples < 2 {
        return Err(Error::arg("Monte-Carlo averaging needs at least 2 samples"));
    }
    if !(k_max.is_finite() && k_max > 0.0) {
        return Err(Error::arg("k_max must be finite and positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ks: Vec<f64> = (0..samples).map(|_| rng.gen::<f64>() * k_max).collect();
    let rows: Vec<Vec<Complex<f64>>> = ks
        .par_iter()
        .map(|&k| {
            let u = evolution_operator(inst, T::from_f64_lossy(k))?;
            let a = char_poly_direct(&u, DEFAULT_DIM_CAP)?;
            Ok(a.coeffs()
                .iter()
                .map(|c| Complex::new(c.re.to_f64_lossy(), c.im.to_f64_lossy()))
                .collect())
        })
        .collect::<Result<_>>()?;

    let s = samples as f64;
    let dim = inst.dimension();
    Ok((0..=dim)
        .map(|n| {
            let mean = rows.iter().fold(Complex::zero(), |acc, r| acc + r[n]) / s;
            let sq: Vec<f64> = rows.iter().map(|r| r[n].norm_sqr()).collect();
            let variance = sq.iter().sum::<f64>() / s;
            let var_of_sq = sq.iter().map(|x| (x - variance).powi(2)).sum::<f64>() / (s - 1.0);
            let spread = rows.iter().map(|r| (r[n] - mean).norm_sqr()).sum::<f64>() / (s - 1.0);
            CoefficientMoments {
                n,
                variance,
                variance_std_error: (var_of_sq / s).sqrt(),
                mean_re: mean.re,
                mean_im: mean.im,
                mean_std_error: (spread / s).sqrt(),
            }
        })
        .collect())
}

/// Monte-Carlo estimate of `<|a_n|^2>_k` and its standard error.
pub fn monte_carlo_variance<T: Real>(
    inst: &SpectralInstance<T>,
    n: usize,
    samples: usize,
    k_max: f64,
    seed: u64,
) -> Result<(f64, f64)> {
    check_index(inst, n)?;
    let m = monte_carlo_moments(inst, samples, k_max, seed)?[n];
    Ok((m.variance, m.variance_std_error))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Ensemble {
    Coe,
    Cue,
}

/// Random-matrix variance of `a_n` for `E x E` circular ensembles.
pub fn rmt_reference(ensemble: Ensemble, n: usize, dim: usize) -> Result<f64> {
    if n > dim {
        return Err(Error::arg(format!("index {n} exceeds dimension {dim}")));
    }
    Ok(match ensemble {
        Ensemble::Cue => 1.0,
        Ensemble::Coe => 1.0 + (n * (dim - n)) as f64 / (dim + 1) as f64,
    })
}

/// Everything known about `<|a_n|^2>` for one graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VarianceReport {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub dimension: usize,
    pub seed: u64,
    pub pseudo_orbit_count: Count,
    pub degeneracy_groups: usize,
    pub diag: f64,
    pub diag_from_orbits: f64,
    pub exact_grouped: f64,
    pub cue_ref: f64,
    pub coe_ref: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
}

/// Builds the seeded instance and collects every variance figure; the
/// Monte-Carlo fields are filled only when `samples > 0`.
pub fn variance_report(
    q: u32,
    m: usize,
    n: usize,
    seed: u64,
    samples: usize,
    k_max: f64,
    budget: u64,
) -> Result<VarianceReport> {
    let inst = SpectralInstance::<f64>::new(q, m, seed, budget)?;
    check_index(&inst, n)?;
    let groups = degeneracy_groups(&inst, n, budget)?;
    let pseudo_orbit_count: usize = groups.values().map(|(c, _)| *c).sum();
    let exact_grouped = groups.values().map(|(_, a)| a.norm_sqr()).sum();
    let mc = if samples > 0 {
        Some(monte_carlo_variance(&inst, n, samples, k_max, seed)?)
    } else {
        None
    };
    Ok(VarianceReport {
        q,
        m,
        n,
        dimension: inst.dimension(),
        seed,
        pseudo_orbit_count: pseudo_orbit_count as Count,
        degeneracy_groups: groups.len(),
        diag: diagonal_variance(q, n)?,
        diag_from_orbits: diagonal_variance_from_orbits(&inst, n, budget)?,
        exact_grouped,
        cue_ref: rmt_reference(Ensemble::Cue, n, inst.dimension())?,
        coe_ref: rmt_reference(Ensemble::Coe, n, inst.dimension())?,
        samples: mc.map(|_| samples),
        k_max: mc.map(|_| k_max),
        mc_estimate: mc.map(|(e, _)| e),
        std_error: mc.map(|(_, s)| s),
    })
}
