//! Kraus models of the amplitude-damping qubit channel, with and without
//! correlation between consecutive uses, plus the two channel actions that
//! matter for capacity work: the output state and the conjugate (environment)
//! output.
//!
//! Basis convention used throughout: the basis state that damps is the FIRST
//! basis vector, and the input occupation parameter `p` sits on that damped
//! slot. All analytic spectra in the `spectra` module assume this ordering.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, MAX_DIM};

/// Channel parameters: damping angle `chi` (the decay amplitude is `sin chi`)
/// and memory coefficient `mu` (probability that two consecutive uses share
/// one collective damping event instead of damping independently).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DampingParams {
    chi: f64,
    mu: f64,
}

impl DampingParams {
    pub fn new(chi: f64, mu: f64) -> Result<Self> {
        if !chi.is_finite() || !(0.0..=std::f64::consts::FRAC_PI_2).contains(&chi) {
            return Err(Error::Domain(format!(
                "damping angle {chi} outside [0, pi/2]"
            )));
        }
        if !mu.is_finite() || !(0.0..=1.0).contains(&mu) {
            return Err(Error::Domain(format!(
                "memory coefficient {mu} outside [0, 1]"
            )));
        }
        Ok(Self { chi, mu })
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

/// Quantum state: Hermitian, positive semidefinite, unit trace.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates all state invariants, including positivity through a full
    /// eigendecomposition. For large diagonal states prefer the dedicated
    /// constructors, which skip the eigensolve.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let herm = matrix.hermiticity_error();
        if herm > 1e-12 {
            return Err(Error::Contract(format!(
                "density operator not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::Contract(format!(
                "density operator trace {} + {}i, expected 1",
                tr.re, tr.im
            )));
        }
        let eig = crate::linalg::eig_hermitian(&matrix)?;
        let smallest = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if smallest < -1e-10 {
            return Err(Error::Contract(format!(
                "density operator has negative eigenvalue {smallest:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Diagonal state from a probability vector.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let mut sum = 0.0;
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::Domain(format!("probability {p} at index {i}")));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("probabilities sum to {sum}, expected 1")));
        }
        let diag: Vec<Complex64> = probs.iter().map(|&p| Complex64::new(p, 0.0)).collect();
        Ok(Self {
            matrix: ComplexMatrix::from_diagonal(&diag)?,
        })
    }

    /// Single-qubit diagonal state with occupation `p` on the damped slot.
    pub fn qubit(p: f64) -> Result<Self> {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("occupation {p} outside [0, 1]")));
        }
        Self::diagonal(&[p, 1.0 - p])
    }

    /// The n-fold product of `qubit(p)` with itself: entry at basis index `x`
    /// is `p^(zeros in x) * (1-p)^(ones in x)`.
    pub fn qubit_product(p: f64, n: usize) -> Result<Self> {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("occupation {p} outside [0, 1]")));
        }
        if n == 0 || (1usize << n.min(63)) > MAX_DIM {
            return Err(Error::Size(format!("qubit count {n} outside 1..=12")));
        }
        let dim = 1usize << n;
        let probs: Vec<f64> = (0..dim)
            .map(|x| {
                let ones = x.count_ones() as i32;
                p.powi(n as i32 - ones) * (1.0 - p).powi(ones)
            })
            .collect();
        // Rounding in the powers can nudge the sum a hair off 1; the products
        // of exact binomial factors stay well inside the diagonal() tolerance.
        Self::diagonal(&probs)
    }

    /// Constructor for matrices produced by a channel action. Trace and
    /// Hermiticity are rechecked (failure means a bug in the channel code,
    /// hence the internal error flavor); positivity is guaranteed by the
    /// Kraus form and not re-verified.
    pub(crate) fn from_channel_output(matrix: ComplexMatrix) -> Result<Self> {
        let herm = matrix.hermiticity_error();
        let tr = matrix.trace();
        if herm > 1e-10 {
            return Err(Error::Internal(format!(
                "channel output lost Hermiticity (deviation {herm:.3e})"
            )));
        }
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::Internal(format!(
                "channel output trace drifted to {} + {}i",
                tr.re, tr.im
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// One group of Kraus operators sharing a probability weight. The mixture
/// channel keeps its uncorrelated and correlated operators in separate
/// groups so the matrices themselves stay weight-free.
#[derive(Clone, Debug)]
pub struct KrausGroup {
    pub weight: f64,
    pub operators: Vec<ComplexMatrix>,
}

/// A complete channel description: one or more weighted operator groups
/// satisfying `sum_g w_g sum_k A_k' A_k = I` (completeness).
#[derive(Clone, Debug)]
pub struct KrausSet {
    dim: usize,
    groups: Vec<KrausGroup>,
}

impl KrausSet {
    pub fn new(groups: Vec<KrausGroup>) -> Result<Self> {
        let dim = groups
            .first()
            .and_then(|g| g.operators.first())
            .map(|a| a.dim())
            .ok_or_else(|| Error::Contract("kraus set has no operators".into()))?;
        for (gi, g) in groups.iter().enumerate() {
            if !g.weight.is_finite() || g.weight < 0.0 {
                return Err(Error::Contract(format!(
                    "group {gi} has weight {}",
                    g.weight
                )));
            }
            if g.operators.is_empty() {
                return Err(Error::Contract(format!("group {gi} has no operators")));
            }
            for a in &g.operators {
                if a.dim() != dim {
                    return Err(Error::Contract(format!(
                        "operator dimension {} in group {gi}, expected {dim}",
                        a.dim()
                    )));
                }
            }
        }
        let set = Self { dim, groups };
        let err = set.completeness_error();
        if err > 1e-12 {
            return Err(Error::Contract(format!(
                "kraus completeness violated by {err:.3e}"
            )));
        }
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn groups(&self) -> &[KrausGroup] {
        &self.groups
    }

    pub fn operator_count(&self) -> usize {
        self.groups.iter().map(|g| g.operators.len()).sum()
    }

    /// Largest entry of `sum_g w_g sum_k A_k' A_k - I`.
    pub fn completeness_error(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.dim).expect("dim already validated");
        for g in &self.groups {
            let w = Complex64::new(g.weight, 0.0);
            for a in &g.operators {
                let ada = a.dagger().matmul(a).expect("dims already validated");
                acc.add_assign(&ada.scaled(w));
            }
        }
        let id = ComplexMatrix::identity(self.dim).expect("dim already validated");
        acc.max_abs_diff(&id)
    }
}

fn check_chi(chi: f64) -> Result<()> {
    if !chi.is_finite() || !(0.0..=std::f64::consts::FRAC_PI_2).contains(&chi) {
        return Err(Error::Domain(format!(
            "damping angle {chi} outside [0, pi/2]"
        )));
    }
    Ok(())
}

fn single_use_operators(chi: f64) -> Result<Vec<ComplexMatrix>> {
    let (s, c) = chi.sin_cos();
    let a0 = ComplexMatrix::from_diagonal(&[Complex64::new(c, 0.0), Complex64::new(1.0, 0.0)])?;
    let mut a1 = ComplexMatrix::zeros(2)?;
    a1.set(1, 0, Complex64::new(s, 0.0));
    Ok(vec![a0, a1])
}

/// Kraus pair of one amplitude-damping use: a no-jump operator that shrinks
/// the damped slot by `cos chi`, and a jump operator moving it to the ground
/// slot with amplitude `sin chi`.
pub fn single_use_kraus(chi: f64) -> Result<KrausSet> {
    check_chi(chi)?;
    KrausSet::new(vec![KrausGroup {
        weight: 1.0,
        operators: single_use_operators(chi)?,
    }])
}

fn correlated_pair(n: usize, chi: f64) -> Result<Vec<ComplexMatrix>> {
    let (s, c) = chi.sin_cos();
    let dim = 1usize << n;
    let mut b0 = ComplexMatrix::identity(dim)?;
    b0.set(0, 0, Complex64::new(c, 0.0));
    let mut b1 = ComplexMatrix::zeros(dim)?;
    b1.set(dim - 1, 0, Complex64::new(s, 0.0));
    Ok(vec![b0, b1])
}

/// Two channel uses with Markov-correlated damping: with probability `1-mu`
/// the uses damp independently (all four Kronecker pairs of the single-use
/// operators), with probability `mu` they share a single collective damping
/// event (two operators acting on the doubly-damped basis state only). Both
/// groups are always present; `mu = 0` or `mu = 1` just zeroes a weight.
pub fn two_use_kraus(params: DampingParams) -> Result<KrausSet> {
    let singles = single_use_operators(params.chi())?;
    let mut uncorrelated = Vec::with_capacity(4);
    for i in 0..2 {
        for j in 0..2 {
            uncorrelated.push(kron(&singles[i], &singles[j])?);
        }
    }
    KrausSet::new(vec![
        KrausGroup {
            weight: 1.0 - params.mu(),
            operators: uncorrelated,
        },
        KrausGroup {
            weight: params.mu(),
            operators: correlated_pair(2, params.chi())?,
        },
    ])
}

/// The fully correlated n-use channel: one collective damping event across
/// all n uses. Two operators on the 2^n-dimensional space, acting
/// nontrivially only on the all-damped basis state.
pub fn n_use_perfect_memory_kraus(n: usize, chi: f64) -> Result<KrausSet> {
    if !(2..=12).contains(&n) {
        return Err(Error::Size(format!("use count {n} outside 2..=12")));
    }
    check_chi(chi)?;
    KrausSet::new(vec![KrausGroup {
        weight: 1.0,
        operators: correlated_pair(n, chi)?,
    }])
}

/// Channel action `rho -> sum_g w_g sum_k A_k rho A_k'`.
pub fn apply(k: &KrausSet, rho: &DensityOperator) -> Result<DensityOperator> {
    if k.dim() != rho.dim() {
        return Err(Error::Contract(format!(
            "channel dimension {} does not match state dimension {}",
            k.dim(),
            rho.dim()
        )));
    }
    let mut out = ComplexMatrix::zeros(k.dim())?;
    for g in k.groups() {
        let w = Complex64::new(g.weight, 0.0);
        for a in &g.operators {
            let term = a.matmul(rho.matrix())?.matmul(&a.dagger())?;
            out.add_assign(&term.scaled(w));
        }
    }
    DensityOperator::from_channel_output(out)
}

/// Gram matrix `G[a][b] = w * Tr(A_a rho A_b')` of one operator group,
/// computed without forming the trace products: with `S_a = A_a rho`,
/// `Tr(A_a rho A_b') = sum_ij S_a[i][j] * conj(A_b[i][j])`.
fn group_gram(g: &KrausGroup, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = g.operators.len();
    let products: Vec<ComplexMatrix> = g
        .operators
        .iter()
        .map(|a| a.matmul(rho))
        .collect::<Result<_>>()?;
    let dim = rho.dim();
    let w = Complex64::new(g.weight, 0.0);
    let mut gram = ComplexMatrix::zeros(n)?;
    for a in 0..n {
        for b in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..dim {
                for j in 0..dim {
                    acc += products[a].get(i, j) * g.operators[b].get(i, j).conj();
                }
            }
            gram.set(a, b, w * acc);
        }
    }
    Ok(gram)
}

/// State left on the environment after the channel acts: entry (a, b) is
/// `w * Tr(A_a rho A_b')` over an orthonormal environment basis.
///
/// For a single operator group this is the canonical conjugate-channel Gram
/// matrix (dimension = operator count). For the two-group memory mixture the
/// collective-damping operators write onto the same two environment basis
/// vectors as their independent-damping counterparts (the no-jump pair and
/// the both-jump pair), so their Gram contribution is added into the first
/// and last slots of the independent group's basis rather than appended as
/// extra dimensions. That shared-basis form is what keeps the environment
/// pure at chi = 0 for every mu and reproduces the analytic environment
/// spectra.
pub fn environment_output(k: &KrausSet, rho: &DensityOperator) -> Result<DensityOperator> {
    if k.dim() != rho.dim() {
        return Err(Error::Contract(format!(
            "channel dimension {} does not match state dimension {}",
            k.dim(),
            rho.dim()
        )));
    }
    let groups = k.groups();
    match groups {
        [only] => DensityOperator::from_channel_output(group_gram(only, rho.matrix())?),
        [base, overlay] => {
            if overlay.operators.len() != 2 || base.operators.len() < 2 {
                return Err(Error::Contract(format!(
                    "mixture environment needs a 2-operator overlay group \
                     (got {} base, {} overlay operators)",
                    base.operators.len(),
                    overlay.operators.len()
                )));
            }
            let mut w = group_gram(base, rho.matrix())?;
            let o = group_gram(overlay, rho.matrix())?;
            // Overlay slots: operator 0 shares the no-jump basis vector
            // (index 0), operator 1 the all-jump basis vector (last index).
            let slots = [0, base.operators.len() - 1];
            for a in 0..2 {
                for b in 0..2 {
                    let prev = w.get(slots[a], slots[b]);
                    w.set(slots[a], slots[b], prev + o.get(a, b));
                }
            }
            DensityOperator::from_channel_output(w)
        }
        _ => Err(Error::Contract(format!(
            "environment output supports one or two operator groups, got {}",
            groups.len()
        ))),
    }
}
