//! Expected spectral measures and quadrature against them.
//!
//! A [`SpectralMeasure`] is a probability measure on the nonnegative reals:
//! a continuous density on `[lower, upper]` plus optional point masses.
//! Supported families are the Marchenko-Pastur law, the uniform density,
//! and purely atomic (empirical) spectra. [`Quadrature`] discretizes a
//! measure so that integrals of the form `∫ f dμ` become weighted sums;
//! the continuous part uses affine-mapped Gauss-Legendre nodes with the
//! density folded into the weights, and atoms are kept as exact point
//! evaluations.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A point mass: `mass` concentrated at `location`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// Continuous density families supported on `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
enum Density {
    /// `sqrt((L-λ)(λ-ℓ)) / (2 π σ² r λ)` on `[ℓ, L]`.
    MarchenkoPastur { sigma: f64, ratio: f64 },
    /// Constant `1 / (upper - lower)`.
    Uniform,
    /// Purely atomic measure; the density is identically zero.
    None,
}

/// A probability measure on the nonnegative reals with continuous support
/// `[lower, upper]` and optional atoms.
///
/// Immutable after construction; all invariants (normalization, positive
/// density, `lower > 0` for the continuous part) are established by the
/// named constructors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    lower: f64,
    upper: f64,
    density: Density,
    atoms: Vec<Atom>,
}

impl SpectralMeasure {
    /// Marchenko-Pastur measure with entry variance `sigma²` and aspect
    /// ratio `r`. The continuous support is `[σ²(1-√r)², σ²(1+√r)²]`; for
    /// `r > 1` a point mass `1 - 1/r` sits at zero.
    ///
    /// `r = 1` is rejected: it collapses the left edge to zero and the
    /// measure leaves the strongly convex regime.
    pub fn marchenko_pastur(sigma: f64, ratio: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
        }
        if !ratio.is_finite() || ratio <= 0.0 {
            return Err(Error::domain(format!("ratio must be positive, got {ratio}")));
        }
        if ratio == 1.0 {
            return Err(Error::domain(
                "ratio = 1 puts the left edge at zero (not strongly convex)",
            ));
        }
        let s2 = sigma * sigma;
        let sq = ratio.sqrt();
        let lower = s2 * (1.0 - sq) * (1.0 - sq);
        let upper = s2 * (1.0 + sq) * (1.0 + sq);
        let mut atoms = Vec::new();
        if ratio > 1.0 {
            atoms.push(Atom {
                location: 0.0,
                mass: 1.0 - 1.0 / ratio,
            });
        }
        Ok(Self {
            lower,
            upper,
            density: Density::MarchenkoPastur { sigma, ratio },
            atoms,
        })
    }

    /// Uniform density `1/(upper-lower)` on `[lower, upper]`, no atoms.
    pub fn uniform(lower: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() || lower <= 0.0 {
            return Err(Error::domain(format!("lower edge must be positive, got {lower}")));
        }
        if !upper.is_finite() || upper <= lower {
            return Err(Error::domain(format!(
                "upper edge must exceed lower, got [{lower}, {upper}]"
            )));
        }
        Ok(Self {
            lower,
            upper,
            density: Density::Uniform,
            atoms: Vec::new(),
        })
    }

    /// Purely atomic measure from a list of eigenvalues: one atom per
    /// distinct value with mass `multiplicity / d`. `lower`/`upper` are the
    /// extreme positive eigenvalues; zeros are kept as an atom at zero.
    pub fn empirical(eigenvalues: &[f64]) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::domain("empirical measure needs at least one eigenvalue"));
        }
        if let Some(bad) = eigenvalues.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::domain(format!("eigenvalues must be finite and >= 0, got {bad}")));
        }
        let mut sorted = eigenvalues.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        let d = sorted.len() as f64;
        let mut atoms: Vec<Atom> = Vec::new();
        for &v in &sorted {
            match atoms.last_mut() {
                Some(a) if a.location == v => a.mass += 1.0 / d,
                _ => atoms.push(Atom {
                    location: v,
                    mass: 1.0 / d,
                }),
            }
        }
        let positive: Vec<f64> = atoms
            .iter()
            .map(|a| a.location)
            .filter(|&l| l > 0.0)
            .collect();
        let (&lower, &upper) = match (positive.first(), positive.last()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => {
                return Err(Error::domain(
                    "empirical measure needs at least one positive eigenvalue",
                ))
            }
        };
        Ok(Self {
            lower,
            upper,
            density: Density::None,
            atoms,
        })
    }

    /// Left edge of the continuous support (or the smallest positive atom
    /// for purely atomic measures).
    pub fn lower(&self) -> f64 {
        self.lower
    }

    /// Right edge of the continuous support.
    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// True when the measure carries a continuous density.
    pub fn has_continuous_part(&self) -> bool {
        !matches!(self.density, Density::None)
    }

    /// Probability density at `lambda`; zero outside `[lower, upper]` and
    /// identically zero for purely atomic measures. Atoms do not show up
    /// here — they live in [`Self::atoms`].
    pub fn density(&self, lambda: f64) -> f64 {
        if lambda < self.lower || lambda > self.upper {
            return 0.0;
        }
        match self.density {
            Density::MarchenkoPastur { sigma, ratio } => {
                let s2 = sigma * sigma;
                // clamp: roundoff can push the product slightly negative at the edges
                let prod = ((self.upper - lambda) * (lambda - self.lower)).max(0.0);
                prod.sqrt() / (2.0 * PI * s2 * ratio * lambda)
            }
            Density::Uniform => 1.0 / (self.upper - self.lower),
            Density::None => 0.0,
        }
    }

    /// The unnormalized weight `λ dμ(λ)`: density `λ·p(λ)`, atoms rescaled
    /// by their location. An atom at zero vanishes.
    pub fn lambda_weighted(&self) -> LambdaWeight {
        let atoms = self
            .atoms
            .iter()
            .filter(|a| a.location > 0.0)
            .map(|a| Atom {
                location: a.location,
                mass: a.mass * a.location,
            })
            .collect();
        LambdaWeight {
            source: self.clone(),
            atoms,
        }
    }
}

/// The weight `λ dμ(λ)` induced by a [`SpectralMeasure`]. Positive but not
/// normalized; its total mass is the first moment of the source measure.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaWeight {
    source: SpectralMeasure,
    atoms: Vec<Atom>,
}

impl LambdaWeight {
    pub fn lower(&self) -> f64 {
        self.source.lower()
    }

    pub fn upper(&self) -> f64 {
        self.source.upper()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn has_continuous_part(&self) -> bool {
        self.source.has_continuous_part()
    }

    /// Weight density `λ · p(λ)` at `lambda`.
    pub fn weight(&self, lambda: f64) -> f64 {
        lambda * self.source.density(lambda)
    }
}

/// Discretization of a measure (or weight) for numerical integration:
/// Gauss-Legendre nodes on the continuous support with the density folded
/// into the weights, plus atoms carried verbatim.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    atom_nodes: Vec<f64>,
    atom_weights: Vec<f64>,
}

/// Minimum node count accepted by [`Quadrature::for_measure`] and friends.
pub const MIN_QUADRATURE_NODES: usize = 16;

impl Quadrature {
    /// Discretize a probability measure with `n_nodes` Gauss-Legendre nodes
    /// on its continuous support. Purely atomic measures take no continuous
    /// nodes at all.
    pub fn for_measure(measure: &SpectralMeasure, n_nodes: usize) -> Result<Self> {
        Self::build(
            measure.has_continuous_part(),
            measure.lower(),
            measure.upper(),
            |x| measure.density(x),
            measure.atoms(),
            n_nodes,
        )
    }

    /// Discretize the `λ dμ` weight of a measure.
    pub fn for_weight(weight: &LambdaWeight, n_nodes: usize) -> Result<Self> {
        Self::build(
            weight.has_continuous_part(),
            weight.lower(),
            weight.upper(),
            |x| weight.weight(x),
            weight.atoms(),
            n_nodes,
        )
    }

    /// Assemble a quadrature from explicit nodes and weights. Intended for
    /// weights that are not spectral measures, e.g. closed-form test
    /// weights on `[-1, 1]`.
    pub fn from_parts(
        nodes: Vec<f64>,
        weights: Vec<f64>,
        atom_nodes: Vec<f64>,
        atom_weights: Vec<f64>,
    ) -> Result<Self> {
        if nodes.len() != weights.len() || atom_nodes.len() != atom_weights.len() {
            return Err(Error::domain("node/weight length mismatch"));
        }
        Ok(Self {
            nodes,
            weights,
            atom_nodes,
            atom_weights,
        })
    }

    fn build(
        continuous: bool,
        lower: f64,
        upper: f64,
        density: impl Fn(f64) -> f64,
        atoms: &[Atom],
        n_nodes: usize,
    ) -> Result<Self> {
        let (mut nodes, mut weights) = (Vec::new(), Vec::new());
        if continuous {
            if n_nodes < MIN_QUADRATURE_NODES {
                return Err(Error::domain(format!(
                    "need at least {MIN_QUADRATURE_NODES} quadrature nodes, got {n_nodes}"
                )));
            }
            let (ref_nodes, ref_weights) = gauss_legendre(n_nodes);
            let mid = 0.5 * (lower + upper);
            let half = 0.5 * (upper - lower);
            nodes.reserve(n_nodes);
            weights.reserve(n_nodes);
            for (&x, &w) in ref_nodes.iter().zip(&ref_weights) {
                let lambda = mid + half * x;
                nodes.push(lambda);
                weights.push(half * w * density(lambda));
            }
        }
        let atom_nodes = atoms.iter().map(|a| a.location).collect();
        let atom_weights = atoms.iter().map(|a| a.mass).collect();
        Ok(Self {
            nodes,
            weights,
            atom_nodes,
            atom_weights,
        })
    }

    /// Continuous nodes (ascending).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn atom_nodes(&self) -> &[f64] {
        &self.atom_nodes
    }

    pub fn atom_weights(&self) -> &[f64] {
        &self.atom_weights
    }

    /// Number of continuous nodes (atoms excluded).
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn atom_count(&self) -> usize {
        self.atom_nodes.len()
    }

    /// Total discretized mass: `Σ wᵢ + Σ massⱼ`.
    pub fn total_mass(&self) -> f64 {
        let c: f64 = self.weights.iter().sum();
        let a: f64 = self.atom_weights.iter().sum();
        c + a
    }

    /// `∫ f dμ ≈ Σ wᵢ f(λᵢ) + Σ massⱼ f(locⱼ)`. Non-finite values of `f`
    /// at any node are reported as a numeric error.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        let mut acc = 0.0;
        for (&x, &w) in self
            .nodes
            .iter()
            .zip(&self.weights)
            .chain(self.atom_nodes.iter().zip(&self.atom_weights))
        {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::numeric(format!("integrand is {v} at node {x}")));
            }
            acc += w * v;
        }
        Ok(acc)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
///
/// Nodes are Newton-refined roots of the degree-`n` Legendre polynomial;
/// weights are `2 / ((1 - x²) P_n'(x)²)`. Exact for polynomials of degree
/// `2n - 1`. Rules are cached per degree; the same `n` always returns the
/// same bits.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    type Rule = Arc<(Vec<f64>, Vec<f64>)>;
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let rule = {
        let mut guard = cache.lock().expect("gauss-legendre cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(compute_gauss_legendre(n)))
            .clone()
    };
    (rule.0.clone(), rule.1.clone())
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "gauss_legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // root in (0, 1], counted from the largest
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        if n % 2 == 1 && i == half - 1 {
            x = 0.0; // odd degree: middle root is exactly zero
        } else {
            for _ in 0..64 {
                let (p, dp) = legendre_pair(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= 1e-15 * x.abs().max(1e-3) {
                    break;
                }
            }
        }
        let (_, dp) = legendre_pair(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term Legendre recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    debug_assert!(n >= 1);
    let mut prev = 1.0;
    let mut cur = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * cur - (kf - 1.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    let dp = if x.abs() == 1.0 {
        // limit value; not reached by interior roots but kept total
        let nf = n as f64;
        x.powi(n as i32 + 1) * nf * (nf + 1.0) / 2.0
    } else {
        n as f64 * (x * cur - prev) / (x * x - 1.0)
    };
    (cur, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_low_orders_match_closed_forms() {
        let (n2, w2) = gauss_legendre(2);
        assert_abs_diff_eq!(n2[1], 1.0 / 3.0_f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(w2[0], 1.0, epsilon = 1e-15);
        let (n3, w3) = gauss_legendre(3);
        assert_eq!(n3[1], 0.0);
        assert_abs_diff_eq!(n3[2], (3.0_f64 / 5.0).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(w3[1], 8.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w3[0], 5.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn gauss_legendre_integrates_monomials_exactly() {
        let (nodes, weights) = gauss_legendre(12);
        for k in 0..=23 {
            let got: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(&x, &w)| w * x.powi(k))
                .sum();
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert_abs_diff_eq!(got, exact, epsilon = 1e-14);
        }
    }

    #[test]
    fn mp_edges_and_atom() {
        let mp = SpectralMeasure::marchenko_pastur(1.0, 0.5).unwrap();
        assert_abs_diff_eq!(mp.lower(), 0.0857864376269049, epsilon = 1e-12);
        assert_abs_diff_eq!(mp.upper(), 2.914213562373095, epsilon = 1e-12);
        assert!(mp.atoms().is_empty());

        let mp4 = SpectralMeasure::marchenko_pastur(1.0, 4.0).unwrap();
        assert_eq!(mp4.atoms().len(), 1);
        assert_eq!(mp4.atoms()[0].location, 0.0);
        assert_abs_diff_eq!(mp4.atoms()[0].mass, 0.75, epsilon = 1e-15);
    }

    #[test]
    fn mp_edge_identities() {
        for (sigma, r) in [(1.0, 0.5), (2.0, 0.25), (1.0, 4.0), (0.7, 9.0)] {
            let mp = SpectralMeasure::marchenko_pastur(sigma, r).unwrap();
            let s2 = sigma * sigma;
            assert_abs_diff_eq!(
                mp.lower() * mp.upper(),
                s2 * s2 * (1.0 - r) * (1.0 - r),
                epsilon = 1e-12 * s2 * s2
            );
            assert_abs_diff_eq!(
                mp.lower() + mp.upper(),
                2.0 * s2 * (1.0 + r),
                epsilon = 1e-12 * s2
            );
        }
    }

    #[test]
    fn mp_rejects_bad_parameters() {
        assert!(SpectralMeasure::marchenko_pastur(0.0, 0.5).is_err());
        assert!(SpectralMeasure::marchenko_pastur(-1.0, 0.5).is_err());
        assert!(SpectralMeasure::marchenko_pastur(1.0, 1.0).is_err());
        assert!(SpectralMeasure::marchenko_pastur(1.0, 0.0).is_err());
        assert!(SpectralMeasure::marchenko_pastur(1.0, -2.0).is_err());
    }

    #[test]
    fn mp_normalizes() {
        let mp = SpectralMeasure::marchenko_pastur(1.0, 0.5).unwrap();
        let quad = Quadrature::for_measure(&mp, 4000).unwrap();
        let mass = quad.integrate(|_| 1.0).unwrap();
        assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-6);
        // discretized continuous mass holds to 1e-10 relative at the
        // default node count despite the square-root edges
        assert_abs_diff_eq!(quad.total_mass(), 1.0, epsilon = 1e-10);
        // with the zero atom, mass still sums to one
        let mp4 = SpectralMeasure::marchenko_pastur(1.0, 4.0).unwrap();
        let quad4 = Quadrature::for_measure(&mp4, 4000).unwrap();
        assert_abs_diff_eq!(quad4.integrate(|_| 1.0).unwrap(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn mp_first_two_moments() {
        let mp = SpectralMeasure::marchenko_pastur(1.0, 0.5).unwrap();
        let quad = Quadrature::for_measure(&mp, 4000).unwrap();
        assert_abs_diff_eq!(quad.integrate(|x| x).unwrap(), 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(quad.integrate(|x| x * x).unwrap(), 1.5, epsilon = 1e-6);
    }

    #[test]
    fn uniform_rejects_bad_edges() {
        assert!(SpectralMeasure::uniform(0.0, 1.0).is_err());
        assert!(SpectralMeasure::uniform(-1.0, 1.0).is_err());
        assert!(SpectralMeasure::uniform(2.0, 2.0).is_err());
        assert!(SpectralMeasure::uniform(2.0, 1.0).is_err());
    }

    #[test]
    fn uniform_moments_closed_form() {
        let u = SpectralMeasure::uniform(1.0, 2.0).unwrap();
        assert_eq!(u.density(1.5), 1.0);
        assert_eq!(u.density(0.5), 0.0);
        let quad = Quadrature::for_measure(&u, 64).unwrap();
        assert_abs_diff_eq!(quad.integrate(|x| x).unwrap(), 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(quad.integrate(|x| x * x).unwrap(), 7.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn uniform_quadrature_is_exact_for_high_monomials() {
        let u = SpectralMeasure::uniform(1.0, 2.0).unwrap();
        let quad = Quadrature::for_measure(&u, 64).unwrap();
        for k in 0..=20 {
            let exact = (2.0_f64.powi(k + 1) - 1.0) / (k as f64 + 1.0);
            let got = quad.integrate(|x| x.powi(k)).unwrap();
            assert!(
                (got - exact).abs() <= 1e-12 * exact.abs(),
                "k={k}: got {got}, want {exact}"
            );
        }
    }

    #[test]
    fn empirical_counts_multiplicities() {
        let m = SpectralMeasure::empirical(&[1.0, 1.0, 2.0, 4.0]).unwrap();
        let atoms = m.atoms();
        assert_eq!(atoms.len(), 3);
        assert_eq!(atoms[0], Atom { location: 1.0, mass: 0.5 });
        assert_eq!(atoms[1], Atom { location: 2.0, mass: 0.25 });
        assert_eq!(atoms[2], Atom { location: 4.0, mass: 0.25 });
        assert_eq!(m.lower(), 1.0);
        assert_eq!(m.upper(), 4.0);
        assert!(!m.has_continuous_part());
    }

    #[test]
    fn empirical_single_atom() {
        let m = SpectralMeasure::empirical(&[3.0]).unwrap();
        assert_eq!(m.atoms(), &[Atom { location: 3.0, mass: 1.0 }]);
    }

    #[test]
    fn empirical_rejects_bad_input() {
        assert!(SpectralMeasure::empirical(&[]).is_err());
        assert!(SpectralMeasure::empirical(&[1.0, -0.5]).is_err());
        assert!(SpectralMeasure::empirical(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn empirical_atoms_integrate_exactly() {
        let m = SpectralMeasure::empirical(&[1.0, 2.0]).unwrap();
        let quad = Quadrature::for_measure(&m, 64).unwrap();
        assert_eq!(quad.node_count(), 0);
        assert_eq!(quad.integrate(|x| x).unwrap(), 1.5);
    }

    #[test]
    fn lambda_weight_uniform_mass() {
        let u = SpectralMeasure::uniform(1.0, 2.0).unwrap();
        let w = u.lambda_weighted();
        let quad = Quadrature::for_weight(&w, 64).unwrap();
        assert_abs_diff_eq!(quad.integrate(|_| 1.0).unwrap(), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn lambda_weight_drops_zero_atom() {
        let mp4 = SpectralMeasure::marchenko_pastur(1.0, 4.0).unwrap();
        let w = mp4.lambda_weighted();
        assert!(w.atoms().is_empty());
        // integrals agree with the same measure sans atom for any integrand
        let quad = Quadrature::for_weight(&w, 256).unwrap();
        let direct = quad.integrate(|x| x.cos()).unwrap();
        assert!(direct.is_finite());
        assert_eq!(quad.atom_count(), 0);
    }

    #[test]
    fn lambda_weight_of_mp_is_scaled_semicircle() {
        // λ · mp-density = sqrt((L-λ)(λ-ℓ)) / (2πσ²r)
        let mp = SpectralMeasure::marchenko_pastur(1.0, 0.5).unwrap();
        let w = mp.lambda_weighted();
        let (l, u) = (mp.lower(), mp.upper());
        for frac in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let lam = l + frac * (u - l);
            let expect = ((u - lam) * (lam - l)).sqrt() / (2.0 * PI * 0.5);
            assert_abs_diff_eq!(w.weight(lam), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn quadrature_rejects_too_few_nodes() {
        let u = SpectralMeasure::uniform(1.0, 2.0).unwrap();
        assert!(Quadrature::for_measure(&u, 8).is_err());
    }

    #[test]
    fn integrate_reports_non_finite_integrand() {
        let u = SpectralMeasure::uniform(1.0, 2.0).unwrap();
        let quad = Quadrature::for_measure(&u, 64).unwrap();
        assert!(quad.integrate(|x| (x - x) / (x - x)).is_err());
    }
}
