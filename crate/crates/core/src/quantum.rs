//! Quantized q-nary graphs.
//!
//! Every vertex scatters with the `q x q` discrete Fourier transform matrix.
//! At vertex `w = a_1 … a_m` the incoming edge `b a_1 … a_m` is the column
//! index `b` and the outgoing edge `a_1 … a_m c` the row index `c`, so
//!
//! ```text
//! Sigma[e, e'] = omega^(b c) / sqrt(q)   when t(e') = o(e), else 0
//! ```
//!
//! with `omega = exp(2 pi i / q)`. The evolution operator is
//! `U(k) = diag(exp(i k l_e)) Sigma`, and `a_n` denotes the coefficient of
//! `xi^(E - n)` in `det(xi I - U(k))`.

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::debruijn::{self, PeriodicOrbit, PseudoOrbit, QNaryGraph};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{root_of_unity, Real};

/// Largest matrix dimension accepted by [`char_poly_direct`] by default.
pub const DEFAULT_DIM_CAP: usize = 64;

/// `q x q` DFT matrix, entry `(j, k) = omega^(j k) / sqrt(q)`.
pub fn dft_matrix<T: Real>(q: usize) -> CMatrix<T> {
    let mut m = CMatrix::zeros(q);
    if q == 0 {
        return m;
    }
    let norm = T::from_usize_lossy(q).sqrt().recip();
    for j in 0..q {
        for k in 0..q {
            m[(j, k)] = root_of_unity::<T>(j * k, q) * norm;
        }
    }
    m
}

/// The global `E x E` scattering matrix of a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringMatrix<T> {
    q: u32,
    m: usize,
    matrix: CMatrix<T>,
}

impl<T: Real> ScatteringMatrix<T> {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    /// Transition amplitude from edge `from` into edge `to`.
    pub fn entry(&self, to: usize, from: usize) -> Complex<T> {
        self.matrix[(to, from)]
    }
}

pub fn assemble_sigma<T: Real>(g: &QNaryGraph) -> ScatteringMatrix<T> {
    let q = g.q() as usize;
    let dft = dft_matrix::<T>(q);
    let mut sigma = CMatrix::zeros(g.edge_count());
    for v in 0..g.vertex_count() {
        for incoming in g.in_edges(v) {
            let b = g.first_letter(incoming) as usize;
            for outgoing in g.out_edges(v) {
                let c = g.last_letter(outgoing) as usize;
                sigma[(outgoing, incoming)] = dft[(b, c)];
            }
        }
    }
    ScatteringMatrix {
        q: g.q(),
        m: g.order(),
        matrix: sigma,
    }
}

/// Edge lengths drawn i.i.d. uniform on `[1, 2)` from ChaCha8 seeded with
/// `seed`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeLengths<T> {
    lengths: Vec<T>,
    seed: u64,
}

impl<T: Real> EdgeLengths<T> {
    /// Explicit lengths; every entry must be finite and positive.
    pub fn from_values(lengths: Vec<T>, seed: u64) -> Result<Self> {
        if lengths.iter().any(|l| !l.is_finite() || *l <= T::zero()) {
            return Err(Error::arg("edge lengths must be finite and positive"));
        }
        Ok(EdgeLengths { lengths, seed })
    }

    pub fn lengths(&self) -> &[T] {
        &self.lengths
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }
}

pub fn sample_edge_lengths<T: Real>(g: &QNaryGraph, seed: u64) -> EdgeLengths<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = T::one() + T::one();
    let lengths = (0..g.edge_count())
        .map(|_| {
            let u: f64 = rng.gen();
            let l = T::from_f64_lossy(1.0 + u);
            // Narrow types can round 1 + u up to 2.
            if l >= two {
                two - T::epsilon()
            } else {
                l
            }
        })
        .collect();
    EdgeLengths { lengths, seed }
}

/// A quantum graph: topology, scattering matrix and edge lengths.
#[derive(Clone, Debug)]
pub struct SpectralInstance<T> {
    graph: QNaryGraph,
    sigma: ScatteringMatrix<T>,
    lengths: EdgeLengths<T>,
}

impl<T: Real> SpectralInstance<T> {
    /// DFT-scattering graph of order `m` over `q` letters with seeded lengths.
    pub fn new(q: u32, m: usize, seed: u64, budget: u64) -> Result<Self> {
        let graph = debruijn::build_graph(q, m, budget)?;
        let sigma = assemble_sigma(&graph);
        let lengths = sample_edge_lengths(&graph, seed);
        Ok(SpectralInstance {
            graph,
            sigma,
            lengths,
        })
    }

    pub fn from_parts(
        graph: QNaryGraph,
        sigma: ScatteringMatrix<T>,
        lengths: EdgeLengths<T>,
    ) -> Result<Self> {
        let e = graph.edge_count();
        if sigma.matrix.dim() != e || lengths.len() != e {
            return Err(Error::arg(format!(
                "dimension mismatch: graph has {e} edges, sigma is {}, lengths has {}",
                sigma.matrix.dim(),
                lengths.len()
            )));
        }
        if sigma.q != graph.q() || sigma.m != graph.order() {
            return Err(Error::arg("scattering matrix built for a different graph"));
        }
        Ok(SpectralInstance {
            graph,
            sigma,
            lengths,
        })
    }

    pub fn graph(&self) -> &QNaryGraph {
        &self.graph
    }

    pub fn sigma(&self) -> &ScatteringMatrix<T> {
        &self.sigma
    }

    pub fn lengths(&self) -> &EdgeLengths<T> {
        &self.lengths
    }

    pub fn dimension(&self) -> usize {
        self.graph.edge_count()
    }
}

fn phase<T: Real>(k: T, length: T) -> Complex<T> {
    Complex::from_polar(T::one(), k * length)
}

pub fn evolution_operator<T: Real>(inst: &SpectralInstance<T>, k: T) -> Result<CMatrix<T>> {
    if !k.is_finite() {
        return Err(Error::arg("wavenumber k must be finite"));
    }
    let phases: Vec<Complex<T>> = inst
        .lengths
        .lengths
        .iter()
        .map(|&l| phase(k, l))
        .collect();
    Ok(inst.sigma.matrix.scale_rows(&phases))
}

/// Coefficients of `det(xi I - U) = sum_n a_n xi^(N - n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPolyCoefficients<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> CharPolyCoefficients<T> {
    pub fn from_coeffs(coeffs: Vec<Complex<T>>) -> Self {
        CharPolyCoefficients { coeffs }
    }

    /// Matrix dimension `N`.
    pub fn dimension(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn get(&self, n: usize) -> Complex<T> {
        self.coeffs[n]
    }

    /// `max_n |a_(N-n) - a_N conj(a_n)|`; zero for exact unitary input.
    pub fn self_inversive_residual(&self) -> T {
        let n = self.dimension();
        let last = self.coeffs[n];
        (0..=n)
            .map(|i| (self.coeffs[n - i] - last * self.coeffs[i].conj()).norm())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "dimension mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }
}

/// Interpolation radius for [`char_poly_direct`]. On the unit circle
/// `|det(xi I - U)| <= 2^N` for unitary `U`.
const SAMPLE_RADIUS: f64 = 1.0;

/// Characteristic polynomial coefficients from determinants of
/// `xi_s I - U` at `xi_s = R exp(2 pi i s / (N + 1))`, `s = 0..=N`, followed
/// by an inverse DFT and division by `R^j`.
pub fn char_poly_direct<T: Real>(u: &CMatrix<T>, dim_cap: usize) -> Result<CharPolyCoefficients<T>> {
    let n = u.dim();
    if n > dim_cap {
        return Err(Error::BudgetExceeded {
            what: "characteristic polynomial dimension",
            required: n as u128,
            budget: dim_cap as u64,
        });
    }
    let points = n + 1;
    let radius = T::from_f64_lossy(SAMPLE_RADIUS);
    let values: Vec<Complex<T>> = (0..points)
        .map(|s| {
            let xi = root_of_unity::<T>(s, points) * radius;
            let mut shifted = u.clone();
            for i in 0..n {
                shifted[(i, i)] = xi - u[(i, i)];
            }
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        shifted[(i, j)] = -u[(i, j)];
                    }
                }
            }
            shifted.determinant()
        })
        .collect();

    let inv_points = T::from_usize_lossy(points).recip();
    let mut coeffs = vec![Complex::zero(); points];
    let mut scale = T::one();
    for j in 0..points {
        // c_j = coefficient of xi^j, stored at a_(N - j).
        let mut acc = Complex::<T>::zero();
        for (s, &v) in values.iter().enumerate() {
            acc = acc + v * root_of_unity::<T>((points - (j * s) % points) % points, points);
        }
        coeffs[n - j] = acc * inv_points / scale;
        scale = scale * radius;
    }
    // monic
    coeffs[0] = Complex::new(T::one(), T::zero());
    Ok(CharPolyCoefficients { coeffs })
}

/// Cyclic product of scattering amplitudes along the orbit,
/// `Sigma[e_2, e_1] Sigma[e_3, e_2] … Sigma[e_1, e_l]`.
pub fn orbit_amplitude<T: Real>(o: &PeriodicOrbit, s: &ScatteringMatrix<T>) -> Result<Complex<T>> {
    if o.word().q() != s.q {
        return Err(Error::arg("orbit and scattering matrix use different alphabets"));
    }
    let edges = o.edge_sequence(s.m);
    let l = edges.len();
    Ok((0..l).fold(Complex::one(), |acc, i| {
        acc * s.entry(edges[(i + 1) % l], edges[i])
    }))
}

pub fn pseudo_orbit_amplitude<T: Real>(
    po: &PseudoOrbit,
    s: &ScatteringMatrix<T>,
) -> Result<Complex<T>> {
    po.orbits()
        .iter()
        .try_fold(Complex::one(), |acc, o| Ok(acc * orbit_amplitude(o, s)?))
}

/// Metric length: total length of all edges traversed by the members.
pub fn pseudo_orbit_length<T: Real>(
    po: &PseudoOrbit,
    lengths: &EdgeLengths<T>,
    g: &QNaryGraph,
) -> Result<T> {
    if po.q() != g.q() || lengths.len() != g.edge_count() {
        return Err(Error::arg("pseudo orbit, lengths and graph do not match"));
    }
    Ok(po
        .orbits()
        .iter()
        .flat_map(|o| o.edge_sequence(g.order()))
        .fold(T::zero(), |acc, e| acc + lengths.lengths[e]))
}

fn sign<T: Real>(orbit_count: usize) -> T {
    if orbit_count % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// One pseudo orbit's contribution `(-1)^(m_po) A_po` and its metric length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionTerm<T> {
    pub weight: Complex<T>,
    pub length: T,
}

/// Pseudo-orbit terms for `a_0 … a_max_n`, precomputed so the expansion can
/// be evaluated at many wavenumbers.
#[derive(Clone, Debug)]
pub struct PseudoOrbitExpansion<T> {
    terms: Vec<Vec<ExpansionTerm<T>>>,
}

impl<T: Real> PseudoOrbitExpansion<T> {
    pub fn new(inst: &SpectralInstance<T>, max_n: usize, budget: u64) -> Result<Self> {
        if max_n > inst.dimension() {
            return Err(Error::arg(format!(
                "coefficient index {max_n} exceeds dimension {}",
                inst.dimension()
            )));
        }
        let q = inst.graph.q();
        let terms = (0..=max_n)
            .map(|n| {
                debruijn::enumerate_primitive_pseudo_orbits(q, n, budget)?
                    .iter()
                    .map(|po| {
                        Ok(ExpansionTerm {
                            weight: pseudo_orbit_amplitude(po, &inst.sigma)?
                                * sign::<T>(po.orbit_count()),
                            length: pseudo_orbit_length(po, &inst.lengths, &inst.graph)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PseudoOrbitExpansion { terms })
    }

    pub fn max_n(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self, n: usize) -> &[ExpansionTerm<T>] {
        &self.terms[n]
    }

    /// `a_n(k) = sum (-1)^(m_po) A_po exp(i k l_po)`.
    pub fn coefficient(&self, n: usize, k: T) -> Complex<T> {
        self.terms[n]
            .iter()
            .fold(Complex::zero(), |acc, t| acc + t.weight * phase(k, t.length))
    }

    pub fn coefficients(&self, k: T) -> Result<CharPolyCoefficients<T>> {
        if !k.is_finite() {
            return Err(Error::arg("wavenumber k must be finite"));
        }
        Ok(CharPolyCoefficients {
            coeffs: (0..self.terms.len()).map(|n| self.coefficient(n, k)).collect(),
        })
    }
}

/// `a_n(k)` as a finite sum over the primitive pseudo orbits of length `n`.
pub fn coeff_from_pseudo_orbits<T: Real>(
    n: usize,
    inst: &SpectralInstance<T>,
    k: T,
    budget: u64,
) -> Result<Complex<T>> {
    if n > inst.dimension() {
        return Err(Error::arg(format!(
            "coefficient index {n} outside 0..={}",
            inst.dimension()
        )));
    }
    if !k.is_finite() {
        return Err(Error::arg("wavenumber k must be finite"));
    }
    let mut acc = Complex::zero();
    for po in debruijn::enumerate_primitive_pseudo_orbits(inst.graph.q(), n, budget)? {
        let weight = pseudo_orbit_amplitude(&po, &inst.sigma)? * sign::<T>(po.orbit_count());
        let length = pseudo_orbit_length(&po, &inst.lengths, &inst.graph)?;
        acc = acc + weight * phase(k, length);
    }
    Ok(acc)
}
