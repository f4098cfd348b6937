//! Perron roots of nonnegative matrices and the exponent `β` at which the
//! entry-wise powered transient block has spectral radius one.
//!
//! The radius of a reducible matrix is the maximum over the diagonal blocks
//! of its normal form, i.e. over strongly connected components. Each block is
//! handled in closed form when it is a single vertex or a single ring, and by
//! power iteration on `(B + I) / 2` otherwise. The shift makes every
//! irreducible block primitive; the Collatz–Wielandt quotients of the iterate
//! bracket the Perron root from both sides, which is what the stopping rule
//! and the bisection on `β` use.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::graph::{strongly_connected_components, ComponentTag, Condensation, DirectedGraph};

/// Numerical settings for the spectral routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    pub max_iterations: usize,
    /// Accepted `‖A y − r y‖∞ / ‖y‖∞`.
    pub residual_tolerance: f64,
    /// `|r(P_H(β)) − 1|` at or below this marks a component critical.
    pub criticality_tolerance: f64,
    pub bisection_steps: u32,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            max_iterations: 1_000_000,
            residual_tolerance: 1e-10,
            criticality_tolerance: 1e-9,
            bisection_steps: 64,
        }
    }
}

/// The matrix `(p_ij^ψ)` with `0^ψ = 0`.
#[derive(Debug, Clone)]
pub struct PoweredMatrix<'a> {
    base: &'a DMatrix<f64>,
    exponent: f64,
}

impl<'a> PoweredMatrix<'a> {
    pub fn new(base: &'a DMatrix<f64>, exponent: f64) -> Self {
        PoweredMatrix { base, exponent }
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        power_entry(self.base[(i, j)], self.exponent)
    }

    pub fn materialize(&self) -> DMatrix<f64> {
        self.base.map(|p| power_entry(p, self.exponent))
    }
}

#[inline]
fn power_entry(p: f64, exponent: f64) -> f64 {
    if p > 0.0 {
        p.powf(exponent)
    } else {
        0.0
    }
}

/// Which eigenvector accompanies the radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    pub radius: f64,
    /// Nonnegative eigenvector normalized to unit maximum entry.
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    /// Minimal and maximal row sums.
    pub row_sum_bounds: (f64, f64),
}

/// Perron root (and normalized Perron vector) of one irreducible block.
#[derive(Debug, Clone)]
struct BlockRoot {
    radius: f64,
    vector: Vec<f64>,
    iterations: usize,
}

fn block_root(
    m: &DMatrix<f64>,
    members: &[usize],
    tag: ComponentTag,
    cfg: &SpectralConfig,
) -> Result<BlockRoot> {
    let k = members.len();
    match tag {
        ComponentTag::Trivial => {
            return Ok(BlockRoot {
                radius: 0.0,
                vector: vec![1.0],
                iterations: 0,
            });
        }
        ComponentTag::Cycle if k == 1 => {
            let v = members[0];
            return Ok(BlockRoot {
                radius: m[(v, v)],
                vector: vec![1.0],
                iterations: 0,
            });
        }
        ComponentTag::Cycle => return Ok(ring_root(m, members)),
        ComponentTag::Complex => {}
    }

    let b = DMatrix::from_fn(k, k, |i, j| m[(members[i], members[j])]);
    let shifted = (&b + DMatrix::identity(k, k)) * 0.5;
    let mut y = DVector::from_element(k, 1.0);
    // Floating noise floor of the Collatz–Wielandt gap.
    let floor = 16.0 * (k.max(4) as f64) * f64::EPSILON;
    let mut best_gap = f64::INFINITY;
    let mut stalled = 0usize;
    let mut lo = 0.0;
    let mut hi = f64::INFINITY;
    let mut iterations = 0;
    for it in 1..=cfg.max_iterations {
        iterations = it;
        let z = &shifted * &y;
        lo = f64::INFINITY;
        hi = 0.0;
        for i in 0..k {
            let q = z[i] / y[i];
            lo = lo.min(q);
            hi = hi.max(q);
        }
        let scale = z.max();
        y = z / scale;
        let gap = hi - lo;
        if gap <= floor * hi {
            break;
        }
        if gap < best_gap * 0.999 {
            best_gap = gap;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled > 1000 {
                break;
            }
        }
    }
    let shifted_radius = 0.5 * (lo + hi);
    let radius = (2.0 * shifted_radius - 1.0).max(0.0);
    let residual = (&b * &y - &y * radius).amax();
    if residual > cfg.residual_tolerance * radius.max(1.0) {
        return Err(Error::NoConvergence {
            iterations,
            residual,
        });
    }
    Ok(BlockRoot {
        radius,
        vector: y.iter().copied().collect(),
        iterations,
    })
}

/// A block that is one ring `v_1 → v_2 → … → v_k → v_1`.
fn ring_root(m: &DMatrix<f64>, members: &[usize]) -> BlockRoot {
    let k = members.len();
    let local = |v: usize| members.iter().position(|&x| x == v);
    let next: Vec<(usize, f64)> = members
        .iter()
        .map(|&u| {
            members
                .iter()
                .find(|&&v| m[(u, v)] > 0.0)
                .map(|&v| (local(v).expect("member"), m[(u, v)]))
                .expect("ring arc")
        })
        .collect();
    let product: f64 = next.iter().map(|&(_, p)| p).product();
    let radius = product.powf(1.0 / k as f64);
    // y_u = p_{u,next(u)} y_next / r, walking the ring backwards from vertex 0.
    let mut vector = vec![0.0; k];
    let mut order = Vec::with_capacity(k);
    let mut at = 0;
    for _ in 0..k {
        order.push(at);
        at = next[at].0;
    }
    vector[0] = 1.0;
    for &u in order.iter().skip(1).rev() {
        let (v, p) = next[u];
        vector[u] = if radius > 0.0 {
            p * vector[v] / radius
        } else {
            0.0
        };
    }
    let max = vector.iter().cloned().fold(0.0, f64::max);
    if max > 0.0 {
        vector.iter_mut().for_each(|x| *x /= max);
    }
    BlockRoot {
        radius,
        vector,
        iterations: 0,
    }
}

/// Per-component Perron roots of a nonnegative matrix.
#[derive(Debug, Clone)]
pub struct BlockSpectrum {
    pub condensation: Condensation,
    pub radii: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    iterations: usize,
}

impl BlockSpectrum {
    pub fn new(m: &DMatrix<f64>, cfg: &SpectralConfig) -> Result<Self> {
        let cond = strongly_connected_components(&DirectedGraph::from_matrix(m));
        Self::with_condensation(m, cond, cfg)
    }

    fn with_condensation(
        m: &DMatrix<f64>,
        cond: Condensation,
        cfg: &SpectralConfig,
    ) -> Result<Self> {
        let mut radii = Vec::with_capacity(cond.len());
        let mut vectors = Vec::with_capacity(cond.len());
        let mut iterations = 0;
        for (members, &tag) in cond.members.iter().zip(&cond.tags) {
            let root = block_root(m, members, tag, cfg)?;
            iterations += root.iterations;
            radii.push(root.radius);
            vectors.push(root.vector);
        }
        Ok(BlockSpectrum {
            condensation: cond,
            radii,
            vectors,
            iterations,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radii.iter().cloned().fold(0.0, f64::max)
    }
}

fn row_sum_bounds(m: &DMatrix<f64>) -> (f64, f64) {
    let sums: Vec<f64> = m.row_iter().map(|r| r.sum()).collect();
    let s = sums.iter().cloned().fold(f64::INFINITY, f64::min);
    let big_s = sums.iter().cloned().fold(0.0, f64::max);
    (s, big_s)
}

/// Nonnegative eigenvector of `m` for `radius`, supported on the components
/// that can reach one of `roots`.
///
/// Each root must be a component whose Perron root equals `radius` and no
/// other such component may reach a root; the remaining components in the
/// support then satisfy `r(B_KK) < radius` and are solved for directly.
fn assemble_eigenvector(
    m: &DMatrix<f64>,
    spectrum: &BlockSpectrum,
    radius: f64,
    roots: &[usize],
) -> Result<Vec<f64>> {
    let cond = &spectrum.condensation;
    let size = m.nrows();
    let mut y = vec![0.0; size];
    let mut in_support = vec![false; cond.len()];
    for &h in roots {
        in_support[h] = true;
        for (v, &x) in cond.members[h].iter().zip(&spectrum.vectors[h]) {
            y[*v] = x;
        }
    }
    // Ancestors have larger ids; successors of an id are already final.
    let lowest = roots.iter().copied().min().unwrap_or(cond.len());
    for c in lowest..cond.len() {
        if in_support[c] {
            continue;
        }
        if !cond.dag[c].iter().any(|&d| in_support[d]) {
            continue;
        }
        in_support[c] = true;
        let members = &cond.members[c];
        let k = members.len();
        let system = DMatrix::from_fn(k, k, |i, j| {
            let diag = if i == j { radius } else { 0.0 };
            diag - m[(members[i], members[j])]
        });
        let rhs = DVector::from_fn(k, |i, _| {
            (0..size)
                .filter(|&j| cond.component[j] != c)
                .map(|j| m[(members[i], j)] * y[j])
                .sum::<f64>()
        });
        let sol = system.lu().solve(&rhs).ok_or(Error::NoConvergence {
            iterations: 0,
            residual: f64::INFINITY,
        })?;
        for (i, &v) in members.iter().enumerate() {
            y[v] = sol[i].max(0.0);
        }
    }
    let max = y.iter().cloned().fold(0.0, f64::max);
    if max > 0.0 {
        y.iter_mut().for_each(|x| *x /= max);
    }
    Ok(y)
}

fn residual(m: &DMatrix<f64>, radius: f64, y: &[f64]) -> f64 {
    let v = DVector::from_column_slice(y);
    (m * &v - &v * radius).amax()
}

/// Spectral radius of a nonnegative square matrix, with a nonnegative
/// eigenvector on the requested side.
pub fn spectral_radius(m: &DMatrix<f64>, side: Side) -> Result<SpectralResult> {
    spectral_radius_with(m, side, &SpectralConfig::default())
}

pub fn spectral_radius_with(
    m: &DMatrix<f64>,
    side: Side,
    cfg: &SpectralConfig,
) -> Result<SpectralResult> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "{}x{} matrix is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::InvalidArgument(
            "matrix has negative or NaN entries".into(),
        ));
    }
    if m.nrows() == 0 {
        return Ok(SpectralResult {
            radius: 0.0,
            vector: Vec::new(),
            iterations: 0,
            residual: 0.0,
            row_sum_bounds: (0.0, 0.0),
        });
    }
    let a = match side {
        Side::Right => m.clone(),
        Side::Left => m.transpose(),
    };
    let spectrum = BlockSpectrum::new(&a, cfg)?;
    let radius = spectrum.radius();
    let (s, big_s) = row_sum_bounds(m);
    let slack = 1e-12 * big_s.max(1.0);
    if radius < s - slack || radius > big_s + slack {
        return Err(Error::BracketViolation {
            radius,
            lower: s,
            upper: big_s,
        });
    }
    // The highest-id block attaining the radius has no such block upstream.
    let tol = cfg.criticality_tolerance * radius.max(1.0);
    let root = (0..spectrum.radii.len())
        .rev()
        .find(|&c| spectrum.radii[c] >= radius - tol)
        .expect("at least one block");
    let vector = assemble_eigenvector(&a, &spectrum, radius, &[root])?;
    let res = residual(&a, radius, &vector);
    Ok(SpectralResult {
        radius,
        vector,
        iterations: spectrum.iterations,
        residual: res,
        row_sum_bounds: (s, big_s),
    })
}

/// `r(P(ψ))` for a nonnegative matrix.
pub fn powered_radius(p: &DMatrix<f64>, psi: f64, cfg: &SpectralConfig) -> Result<f64> {
    let cond = strongly_connected_components(&DirectedGraph::from_matrix(p));
    powered_radius_in(p, &cond, psi, cfg)
}

fn powered_radius_in(
    p: &DMatrix<f64>,
    cond: &Condensation,
    psi: f64,
    cfg: &SpectralConfig,
) -> Result<f64> {
    let powered = PoweredMatrix::new(p, psi).materialize();
    let mut r: f64 = 0.0;
    for (members, &tag) in cond.members.iter().zip(&cond.tags) {
        let root = if psi == 0.0 && tag == ComponentTag::Cycle {
            // A ring or a loop has every entry equal to one at ψ = 0.
            1.0
        } else {
            block_root(&powered, members, tag, cfg)?.radius
        };
        r = r.max(root);
    }
    Ok(r)
}

/// The unique `β ∈ [0, 1)` with `r(P(β)) = 1`, by bisection on the
/// decreasing function `ψ ↦ r(P(ψ))`.
pub fn solve_beta(p: &DMatrix<f64>) -> Result<f64> {
    solve_beta_with(p, &SpectralConfig::default())
}

pub fn solve_beta_with(p: &DMatrix<f64>, cfg: &SpectralConfig) -> Result<f64> {
    if !p.is_square() {
        return Err(Error::Dimension(format!(
            "{}x{} matrix is not square",
            p.nrows(),
            p.ncols()
        )));
    }
    let cond = strongly_connected_components(&DirectedGraph::from_matrix(p));
    if !cond.tags.iter().any(|t| t.has_cycle()) {
        return Err(Error::Acyclic);
    }
    let at_one = powered_radius_in(p, &cond, 1.0, cfg)?;
    if at_one >= 1.0 {
        return Err(Error::NotTransient { radius: at_one });
    }
    if !cond.tags.contains(&ComponentTag::Complex) {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..cfg.bisection_steps {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if powered_radius_in(p, &cond, mid, cfg)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Per-component radii of `P(β)` and the critical components.
#[derive(Debug, Clone)]
pub struct CriticalSet {
    pub spectrum: BlockSpectrum,
    pub critical: Vec<usize>,
}

impl CriticalSet {
    pub fn is_critical(&self, c: usize) -> bool {
        self.critical.binary_search(&c).is_ok()
    }

    /// Whether some path of the condensation meets two critical components.
    pub fn path_meets_two(&self) -> bool {
        let marked: Vec<bool> = (0..self.spectrum.radii.len())
            .map(|c| self.is_critical(c))
            .collect();
        self.spectrum.condensation.path_meets_two(&marked)
    }
}

/// Components `H` with `|r(P_H(β)) − 1|` within the criticality tolerance.
pub fn critical_components(
    p: &DMatrix<f64>,
    beta: f64,
    cfg: &SpectralConfig,
) -> Result<CriticalSet> {
    let powered = PoweredMatrix::new(p, beta).materialize();
    let cond = strongly_connected_components(&DirectedGraph::from_matrix(p));
    let mut spectrum = BlockSpectrum::with_condensation(&powered, cond, cfg)?;
    if beta == 0.0 {
        for (c, tag) in spectrum.condensation.tags.iter().enumerate() {
            if *tag == ComponentTag::Cycle {
                spectrum.radii[c] = 1.0;
            }
        }
    }
    let critical: Vec<usize> = spectrum
        .radii
        .iter()
        .enumerate()
        .filter(|(_, &r)| (r - 1.0).abs() <= cfg.criticality_tolerance)
        .map(|(c, _)| c)
        .collect();
    debug_assert!(
        beta == 0.0
            || critical
                .iter()
                .all(|&c| spectrum.condensation.tags[c] == ComponentTag::Complex),
        "critical component without a vertex on two cycles"
    );
    Ok(CriticalSet { spectrum, critical })
}

/// Structural test for a strictly positive left eigenvector of `P(β)` for
/// the eigenvalue one: the critical components must be exactly the source
/// components of the condensation. When the test passes the eigenvector is
/// assembled and checked.
pub fn positive_left_eigenvector(
    p: &DMatrix<f64>,
    beta: f64,
    cfg: &SpectralConfig,
) -> Result<Option<Vec<f64>>> {
    if beta <= 0.0 {
        return Err(Error::InvalidArgument(
            "positive eigenvector criterion needs beta > 0".into(),
        ));
    }
    let set = critical_components(p, beta, cfg)?;
    let sources = set.spectrum.condensation.sources();
    if sources != set.critical {
        return Ok(None);
    }
    // Left eigenvector of P(β) = right eigenvector of its transpose, whose
    // condensation is the reversed one. Build it block by block there.
    let transposed = PoweredMatrix::new(p, beta).materialize().transpose();
    let spectrum = BlockSpectrum::new(&transposed, cfg)?;
    let roots: Vec<usize> = (0..spectrum.radii.len())
        .filter(|&c| (spectrum.radii[c] - 1.0).abs() <= cfg.criticality_tolerance)
        .collect();
    let y = assemble_eigenvector(&transposed, &spectrum, 1.0, &roots)?;
    let res = residual(&transposed, 1.0, &y);
    if res > cfg.residual_tolerance || y.iter().any(|&x| x <= 0.0) {
        return Err(Error::NoConvergence {
            iterations: spectrum.iterations,
            residual: res,
        });
    }
    Ok(Some(y))
}

/// Spectral summary of a chain, restricted to the states reachable from the
/// initial support.
#[derive(Debug, Clone, Serialize)]
pub struct BetaAnalysis {
    pub beta: f64,
    pub components: Vec<ComponentRadius>,
    /// `None` when `β = 0`, where the criterion does not apply.
    pub positive_left_eigenvector: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvector: Option<Vec<f64>>,
    /// Chain states indexing `eigenvector`.
    pub states: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentRadius {
    pub states: Vec<usize>,
    pub tag: ComponentTag,
    pub radius: f64,
    pub critical: bool,
}

/// Substochastic block over the reachable transient states, with the chain
/// state of each row.
pub fn reachable_block(spec: &ChainSpec) -> (DMatrix<f64>, Vec<usize>) {
    let states = spec.reachable_states();
    let k = states.len();
    let m = DMatrix::from_fn(k, k, |i, j| spec.prob(states[i], states[j]));
    (m, states)
}

pub fn analyze_beta(spec: &ChainSpec, cfg: &SpectralConfig) -> Result<BetaAnalysis> {
    spec.ensure_valid()?;
    let (p, states) = reachable_block(spec);
    let beta = solve_beta_with(&p, cfg)?;
    let set = critical_components(&p, beta, cfg)?;
    let cond = &set.spectrum.condensation;
    let components = (0..cond.len())
        .map(|c| ComponentRadius {
            states: cond.members[c].iter().map(|&v| states[v]).collect(),
            tag: cond.tags[c],
            radius: set.spectrum.radii[c],
            critical: set.is_critical(c),
        })
        .collect();
    let (verdict, eigenvector) = if beta > 0.0 {
        let v = positive_left_eigenvector(&p, beta, cfg)?;
        (Some(v.is_some()), v)
    } else {
        (None, None)
    };
    Ok(BetaAnalysis {
        beta,
        components,
        positive_left_eigenvector: verdict,
        eigenvector,
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures;

    fn cfg() -> SpectralConfig {
        SpectralConfig::default()
    }

    #[test]
    fn all_halves_has_unit_radius() {
        let r = spectral_radius(&DMatrix::from_element(2, 2, 0.5), Side::Right).unwrap();
        assert!((r.radius - 1.0).abs() < 1e-14);
        assert!(r.residual <= 1e-10);
    }

    #[test]
    fn three_cycle_permutation() {
        let m = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        let r = spectral_radius(&m, Side::Right).unwrap();
        assert_eq!(r.radius, 1.0);
        assert_eq!(r.vector, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn shared_vertex_radius_at_one() {
        let p = figures::shared_vertex().transient_block();
        let r = spectral_radius(&p, Side::Right).unwrap();
        // root of λ² − λ/2 − 1/4
        let expected = (1.0 + 5f64.sqrt()) / 4.0;
        assert!((r.radius - expected).abs() < 1e-14, "{}", r.radius);
        assert!(r.residual <= 1e-10);
        let l = spectral_radius(&p, Side::Left).unwrap();
        assert!((l.radius - expected).abs() < 1e-14);
    }

    #[test]
    fn reducible_eigenvector_has_small_residual() {
        // Upstream block radius 0.5, downstream block radius 0.9.
        let m = DMatrix::from_row_slice(3, 3, &[0.5, 0.3, 0.0, 0.0, 0.4, 0.5, 0.0, 0.5, 0.4]);
        let r = spectral_radius(&m, Side::Right).unwrap();
        assert!((r.radius - 0.9).abs() < 1e-13);
        assert!(r.residual < 1e-12);
        assert!(r.vector.iter().all(|&x| x >= 0.0));
        let l = spectral_radius(&m, Side::Left).unwrap();
        assert!((l.radius - 0.9).abs() < 1e-13);
        assert!(l.residual < 1e-12);
    }

    #[test]
    fn nilpotent_radius_is_zero() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.0, 0.0]);
        let r = spectral_radius(&m, Side::Right).unwrap();
        assert_eq!(r.radius, 0.0);
        assert!(r.residual == 0.0);
    }

    #[test]
    fn beta_closed_forms() {
        let b = solve_beta(&figures::shared_vertex().transient_block()).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((b - golden.log2()).abs() < 1e-10, "{b}");
        let b2 = solve_beta(&figures::coupled_pairs().transient_block()).unwrap();
        assert!((b2 - 2f64.ln() / 3f64.ln()).abs() < 1e-10, "{b2}");
        assert_eq!(
            solve_beta(&figures::two_cycle().transient_block()).unwrap(),
            0.0
        );
    }

    #[test]
    fn beta_residual_is_tiny() {
        let p = figures::shared_vertex().transient_block();
        let b = solve_beta(&p).unwrap();
        assert!((powered_radius(&p, b, &cfg()).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn beta_for_letter_chain() {
        let spec = crate::chain::from_letter_probabilities(&[0.2, 0.4, 0.4]).unwrap();
        let b = solve_beta(&spec.transient_block()).unwrap();
        assert!((b - 2f64.ln() / 2.5f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn acyclic_has_no_beta() {
        assert!(matches!(
            solve_beta(&figures::acyclic().transient_block()),
            Err(Error::Acyclic)
        ));
    }

    #[test]
    fn recurrent_block_is_rejected() {
        let p = DMatrix::from_element(2, 2, 0.5);
        assert!(matches!(solve_beta(&p), Err(Error::NotTransient { .. })));
    }

    #[test]
    fn critical_sets() {
        let p = figures::shared_vertex().transient_block();
        let b = solve_beta(&p).unwrap();
        let set = critical_components(&p, b, &cfg()).unwrap();
        assert_eq!(set.critical.len(), 1);
        assert!(!set.path_meets_two());

        let p2 = figures::coupled_pairs().transient_block();
        let b2 = solve_beta(&p2).unwrap();
        let set2 = critical_components(&p2, b2, &cfg()).unwrap();
        assert_eq!(set2.critical.len(), 2);
        assert!(set2.path_meets_two());
    }

    #[test]
    fn critical_set_of_parallel_with_subcritical_part() {
        // shared_vertex next to a single loop of weight 1/2
        let spec = crate::chain::compose_parallel(
            &[figures::shared_vertex(), figures::loop_chain()],
            &[0.5, 0.5],
        )
        .unwrap();
        let (p, states) = reachable_block(&spec);
        let b = solve_beta(&p).unwrap();
        let set = critical_components(&p, b, &cfg()).unwrap();
        let crit: Vec<Vec<usize>> = set
            .critical
            .iter()
            .map(|&c| {
                set.spectrum.condensation.members[c]
                    .iter()
                    .map(|&v| states[v])
                    .collect()
            })
            .collect();
        assert_eq!(crit, vec![vec![1, 2]]);
    }

    #[test]
    fn positive_eigenvector_verdicts() {
        let p = figures::shared_vertex().transient_block();
        let b = solve_beta(&p).unwrap();
        let v = positive_left_eigenvector(&p, b, &cfg())
            .unwrap()
            .expect("positive vector");
        assert!(v.iter().all(|&x| x > 0.0));

        let p2 = figures::coupled_pairs().transient_block();
        let b2 = solve_beta(&p2).unwrap();
        assert!(positive_left_eigenvector(&p2, b2, &cfg())
            .unwrap()
            .is_none());
    }

    #[test]
    fn analyze_coupled_pairs() {
        let a = analyze_beta(&figures::coupled_pairs(), &cfg()).unwrap();
        assert_eq!(a.positive_left_eigenvector, Some(false));
        assert_eq!(a.components.iter().filter(|c| c.critical).count(), 2);
    }
}
