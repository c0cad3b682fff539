//! Stationary states of the equal-block dynamics.
//!
//! Two independent routes:
//!
//! - closed form: the maximal-rank reference state ρ̂₀ built from the
//!   parameters M, N, R in the principal frame, the τ-indexed equilibrium
//!   components, and the projector map ρ(0) ↦ ρ̂ through the singlet/triplet
//!   sectors;
//! - numerical: the affine null space of the 15-dimensional component
//!   generator, solved by SVD.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use crate::bath::{principal_frame, KossakowskiBlock, PrincipalFrame};
use crate::generator::{lindblad_operators, rhs_components};
use crate::linalg::{self, commutator, max_abs, re};
use crate::pauli::{basis, ComplexMatrix4, DensityMatrix, PauliCoefficients};
use crate::{Error, Result};

/// Relative singular-value cutoff for the null-space solver.
pub const RANK_TOL: f64 = 1e-10;
/// Minimum eigenvalue required of the full-rank stationary member.
pub const FULL_RANK_TOL: f64 = 1e-8;
const TAU_TOL: f64 = 1e-12;

/// The parameters M, N, R and the reference stationary state ρ̂₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryFamily {
    pub m: f64,
    pub n: f64,
    pub r: f64,
    /// ρ̂₀ in the input frame.
    pub rho0_hat: DensityMatrix,
    pub frame: PrincipalFrame,
    /// B² = λ₁λ₂: ρ̂₀ may lose rank and the projector map may degenerate.
    pub boundary: bool,
}

/// Frame-to-input rotation of a coefficient set written in the principal frame.
fn to_input_frame(frame: &PrincipalFrame, r0: Vector3<f64>, r1: Vector3<f64>, rr: Matrix3<f64>) -> PauliCoefficients {
    let r0 = frame.vector_to_input(&r0);
    let r1 = frame.vector_to_input(&r1);
    let rr = frame.tensor_to_input(&rr);
    PauliCoefficients {
        r0i: [r0[0], r0[1], r0[2]],
        ri0: [r1[0], r1[1], r1[2]],
        rij: std::array::from_fn(|i| std::array::from_fn(|j| rr[(i, j)])),
    }
}

/// Closed-form stationary family of an applicable bath.
pub fn stationary_family(block: &KossakowskiBlock) -> Result<StationaryFamily> {
    let frame = principal_frame(block);
    if !frame.closed_form_applicable {
        return Err(Error::NotApplicable(
            "B is not along a principal axis of A; use the null-space solver".into(),
        ));
    }
    let [l1, l2, l3] = frame.lambda;
    let b = frame.b3();
    let (m, n, r) = if b == 0.0 {
        (0.0, 0.0, 0.0)
    } else {
        let s = l1 + l2;
        let pairs = l1 * l2 + l1 * l3 + l2 * l3;
        let b2 = b * b;
        (
            2.0 * b / s,
            (l1 - l2) * b2 / (2.0 * s * pairs),
            (l1 + l2 + 4.0 * l3) * b2 / (2.0 * s * pairs),
        )
    };
    let rr = Matrix3::from_diagonal(&Vector3::new(-2.0 * n, 2.0 * n, 2.0 * r));
    let axis = Vector3::new(0.0, 0.0, m);
    let coeffs = to_input_frame(&frame, axis, axis, rr);
    Ok(StationaryFamily {
        m,
        n,
        r,
        rho0_hat: DensityMatrix::from_pauli(&coeffs),
        frame,
        boundary: frame.boundary,
    })
}

impl StationaryFamily {
    /// Δ of the closed-form concurrence.
    pub fn delta(&self) -> f64 {
        ((1.0 - 2.0 * self.r).powi(2) + 4.0 * (2.0 * self.r - self.m * self.m))
            .max(0.0)
            .sqrt()
    }

    /// The three inequalities 0 ≤ 2R ≤ 1, M² ≤ 2R, M² + 4N² ≤ 1, each as a
    /// slack (non-negative when satisfied).
    pub fn constraint_slacks(&self) -> [f64; 4] {
        let (m, n, r) = (self.m, self.n, self.r);
        [2.0 * r, 1.0 - 2.0 * r, 2.0 * r - m * m, 1.0 - m * m - 4.0 * n * n]
    }
}

/// An equilibrium state, with its τ and the four nonvanishing components in
/// the principal frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumState {
    pub tau: f64,
    pub rho3: f64,
    pub rho11: f64,
    pub rho22: f64,
    pub rho33: f64,
    /// Coefficients in the input frame.
    pub state: PauliCoefficients,
    /// Largest coefficient difference between the projector map and the
    /// component formulas; zero when built from the formulas directly.
    pub cross_check_residual: f64,
}

impl EquilibriumState {
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pauli(&self.state)
    }
}

/// Equilibrium reached from any initial state with the given τ.
pub fn equilibrium_components(tau: f64, family: &StationaryFamily) -> Result<EquilibriumState> {
    if !(-3.0 - TAU_TOL..=1.0 + TAU_TOL).contains(&tau) {
        return Err(Error::InvalidParameter(format!("tau = {tau} outside [-3, 1]")));
    }
    let (m, n, r) = (family.m, family.n, family.r);
    let den = 3.0 + 2.0 * r;
    let rho3 = (3.0 + tau) / den * m;
    // The N terms carry the sign that reproduces ρ̂₀ at τ = 2R, where ρ̂₁₁ = −N
    // and ρ̂₂₂ = +N; see `printed_n_sign_contradicts_reference_state` below.
    let rho11 = ((1.0 - 2.0 * n) * tau - 2.0 * (3.0 * n + r)) / (2.0 * den);
    let rho22 = ((1.0 + 2.0 * n) * tau + 2.0 * (3.0 * n - r)) / (2.0 * den);
    let rho33 = (4.0 * r + (1.0 + 2.0 * r) * tau) / (2.0 * den);
    // Symmetric ansatz: ρ_0i = ρ_i0 = ρ̂_i and ρ_ij = 2ρ̂_ij (S_ij counts both orders).
    let axis = Vector3::new(0.0, 0.0, rho3);
    let rr = Matrix3::from_diagonal(&Vector3::new(2.0 * rho11, 2.0 * rho22, 2.0 * rho33));
    Ok(EquilibriumState {
        tau,
        rho3,
        rho11,
        rho22,
        rho33,
        state: to_input_frame(&family.frame, axis, axis, rr),
        cross_check_residual: 0.0,
    })
}

/// Concurrence of the equilibrium at τ, from its X-state structure. Agrees
/// with [`crate::entanglement::concurrence_closed`] whenever N = 0 or τ is
/// below the pair-branch onset; see [`pair_branch_onset`].
pub fn asymptotic_concurrence(tau: f64, family: &StationaryFamily) -> Result<f64> {
    let eq = equilibrium_components(tau, family)?;
    Ok(crate::entanglement::x_state_concurrence(
        eq.rho3, eq.rho11, eq.rho22, eq.rho33,
    ))
}

/// τ above which the |00⟩⟨11| coherence of the equilibrium carries
/// entanglement: (3 − 2R − 12|N|)/(1 + 2R + 4|N|). At N = 0 this is ≥ 1 and
/// never reached.
pub fn pair_branch_onset(family: &StationaryFamily) -> f64 {
    let (n, r) = (family.n.abs(), family.r);
    (3.0 - 2.0 * r - 12.0 * n) / (1.0 + 2.0 * r + 4.0 * n)
}

/// Long-time limit of `initial` through the singlet/triplet projector map
/// ρ̂ = Pρ̂₀P/Tr[Pρ̂₀P]·Tr[Pρ(0)] + Qρ̂₀Q/Tr[Qρ̂₀Q]·Tr[Qρ(0)],
/// cross-checked against [`equilibrium_components`].
pub fn asymptotic_state(initial: &PauliCoefficients, family: &StationaryFamily) -> Result<EquilibriumState> {
    let b = basis();
    let (p, q) = (&b.singlet, &b.triplet);
    let rho0 = family.rho0_hat.matrix();
    let p_sector = p * rho0 * p;
    let q_sector = q * rho0 * q;
    let p_norm = p_sector.trace().re;
    let q_norm = q_sector.trace().re;
    if p_norm < TAU_TOL || q_norm < TAU_TOL {
        return Err(Error::NotApplicable(
            "reference state has an empty singlet or triplet sector (boundary bath)".into(),
        ));
    }
    let init = initial.to_matrix();
    let wp = (p * init).trace().re;
    let wq = (q * init).trace().re;
    let limit: ComplexMatrix4 = p_sector * re(wp / p_norm) + q_sector * re(wq / q_norm);
    let coeffs = PauliCoefficients::from_matrix(&limit);

    let formulas = equilibrium_components(initial.tau(), family)?;
    Ok(EquilibriumState {
        state: coeffs,
        cross_check_residual: coeffs.max_abs_diff(&formulas.state),
        ..formulas
    })
}

/// Affine set of stationary coefficient vectors, x = particular + span(basis).
#[derive(Debug, Clone, PartialEq)]
pub struct NullSpace {
    pub dimension: usize,
    pub basis: Vec<[f64; 15]>,
    pub particular: PauliCoefficients,
    /// ‖L x + b‖∞ at the particular solution.
    pub residual: f64,
    pub full_rank_member: Option<DensityMatrix>,
    /// Lowest eigenvalue at the best point found by the search.
    pub best_min_eigenvalue: f64,
}

impl NullSpace {
    pub fn require_full_rank(&self) -> Result<&DensityMatrix> {
        self.full_rank_member
            .as_ref()
            .ok_or(Error::NoFullRankMember {
                best: self.best_min_eigenvalue,
            })
    }

    /// Point particular + Σ_k c_k basis_k.
    pub fn point(&self, c: &[f64]) -> PauliCoefficients {
        let mut x = self.particular.to_array();
        for (ck, v) in c.iter().zip(&self.basis) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += ck * vi;
            }
        }
        PauliCoefficients::from_array(&x)
    }
}

/// The 15×15 linear part L and the constant b of the component generator,
/// dx/dt = L x + b.
pub fn affine_generator(block: &KossakowskiBlock) -> (DMatrix<f64>, DVector<f64>) {
    let b0 = rhs_components(&PauliCoefficients::zero(), block).to_array();
    let mut l = DMatrix::zeros(15, 15);
    for k in 0..15 {
        let mut e = [0.0; 15];
        e[k] = 1.0;
        let col = rhs_components(&PauliCoefficients::from_array(&e), block).to_array();
        for i in 0..15 {
            l[(i, k)] = col[i] - b0[i];
        }
    }
    (l, DVector::from_row_slice(&b0))
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..100 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Numerical stationary set of the equal-block dynamics.
///
/// The full-rank member is found by maximizing the lowest eigenvalue (a
/// concave function) along the null directions, starting from the point of
/// the set closest to the maximally mixed state.
pub fn liouvillian_null_space(block: &KossakowskiBlock) -> NullSpace {
    let (l, b) = affine_generator(block);
    let svd = l.clone().svd(true, true);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let s_max = svd.singular_values.max();
    let cutoff = RANK_TOL * s_max;

    let mut x = DVector::<f64>::zeros(15);
    let mut basis_vecs = Vec::new();
    for k in 0..15 {
        let sigma = svd.singular_values[k];
        let vk = v_t.row(k).transpose();
        if s_max == 0.0 || sigma <= cutoff {
            basis_vecs.push(std::array::from_fn(|i| vk[i]));
        } else {
            x -= vk * (u.column(k).dot(&b) / sigma);
        }
    }
    let residual = (&l * &x + &b).amax();
    let mut space = NullSpace {
        dimension: basis_vecs.len(),
        basis: basis_vecs,
        particular: PauliCoefficients::from_array(&std::array::from_fn(|i| x[i])),
        residual,
        full_rank_member: None,
        best_min_eigenvalue: f64::NEG_INFINITY,
    };

    let min_eig = |c: &[f64]| DensityMatrix::from_pauli(&space.point(c)).min_eigenvalue();
    let p = space.particular.to_array();
    let mut c: Vec<f64> = space
        .basis
        .iter()
        .map(|v| -v.iter().zip(&p).map(|(a, b)| a * b).sum::<f64>())
        .collect();
    let sweeps = if space.dimension > 1 { 4 } else { 1 };
    for _ in 0..sweeps {
        for k in 0..space.dimension {
            let center = c[k];
            let best = golden_max(
                |t| {
                    let mut trial = c.clone();
                    trial[k] = t;
                    min_eig(&trial)
                },
                center - 4.0,
                center + 4.0,
            );
            c[k] = best;
        }
    }
    let best = min_eig(&c);
    space.best_min_eigenvalue = best;
    if best > FULL_RANK_TOL {
        space.full_rank_member = Some(DensityMatrix::from_pauli(&space.point(&c)));
    }
    space
}

/// Whether S = Σ_i S_ii commutes with every V_i and V_i†.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutantReport {
    pub contains_s: bool,
    /// ‖[S, V_i]‖ for i = 1..3 followed by ‖[S, V_i†]‖.
    pub residuals: [f64; 6],
}

pub const COMMUTANT_TOL: f64 = 1e-12;

pub fn commutant_check(block: &KossakowskiBlock) -> CommutantReport {
    let s = basis().sym_total;
    let v = lindblad_operators(block);
    let residuals: [f64; 6] = std::array::from_fn(|k| {
        let op = if k < 3 { v[k] } else { v[k - 3].adjoint() };
        max_abs(&commutator(&s, &op))
    });
    CommutantReport {
        contains_s: residuals.iter().all(|&r| r < COMMUTANT_TOL),
        residuals,
    }
}

/// Largest commutator of `op` with the V_i and V_i†.
pub fn commutator_residual(op: &ComplexMatrix4, block: &KossakowskiBlock) -> f64 {
    lindblad_operators(block)
        .iter()
        .flat_map(|v| [commutator(op, v), commutator(op, &v.adjoint())])
        .fold(0.0, |m, c| f64::max(m, linalg::max_abs(&c)))
}
