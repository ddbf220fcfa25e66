//! Geometric measures of quantum correlation.
//!
//! For a single qubit `k` of a three-qubit state, the discord-like measure is
//! the squared Hilbert-Schmidt distance from the state to the nearest state
//! left invariant by a projective measurement on `k`. In the Pauli expansion
//! the distance along measurement direction `e` is
//! `(1/8) * (norm_sum - e^T G e)`, where `norm_sum` collects the squared
//! norms of every Bloch block touching qubit `k` and `G` is a symmetric 3x3
//! matrix; minimizing over `e` picks the top eigenvector of `G`.
//!
//! The total measure for the three-qubit state applies measurements in the
//! fixed order qubit 1, then 2, then 3, accumulating the per-step minima
//! while the state collapses.

use crate::error::{Error, Result};
use crate::linalg::{eig_sym3, SymMat3};
use crate::qstate::{
    bit, bloch_parts, coeff_tensor, BlochDecomposition, CoefficientTensor, DensityMatrix4,
    DensityMatrix8, Qubit, QubitPair,
};
use crate::C64;

/// Unit-norm tolerance accepted by [`MeasurementAxis::new`].
pub const AXIS_NORM_TOL: f64 = 1e-12;
/// Discord values in (-1e-10, 0) are treated as rounding noise and clamped.
pub const DISCORD_CLAMP_TOL: f64 = -1e-10;

/// Unit vector on the Bloch sphere selecting a projective measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementAxis {
    e: [f64; 3],
}

impl MeasurementAxis {
    /// Requires the components to be finite with unit norm within
    /// [`AXIS_NORM_TOL`].
    pub fn new(e: [f64; 3]) -> Result<Self> {
        if e.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite axis component".into()));
        }
        let n = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
        if (n - 1.0).abs() > AXIS_NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "axis norm {n} differs from 1 beyond {AXIS_NORM_TOL:.0e}"
            )));
        }
        Ok(MeasurementAxis { e })
    }

    /// Normalizes a non-zero vector onto the sphere.
    pub fn from_direction(v: [f64; 3]) -> Result<Self> {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite axis component".into()));
        }
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n < 1e-300 {
            return Err(Error::InvalidInput("zero direction vector".into()));
        }
        Ok(MeasurementAxis {
            e: [v[0] / n, v[1] / n, v[2] / n],
        })
    }

    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        MeasurementAxis {
            e: [
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ],
        }
    }

    pub fn components(&self) -> [f64; 3] {
        self.e
    }
}

impl std::fmt::Display for MeasurementAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.e[0], self.e[1], self.e[2])
    }
}

/// Grid used to seed the brute-force minimization over measurement axes.
#[derive(Clone, Copy, Debug)]
pub struct GridResolution {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for GridResolution {
    fn default() -> Self {
        GridResolution {
            n_theta: 64,
            n_phi: 128,
        }
    }
}

/// Outcome of the sequential three-qubit correlation computation.
#[derive(Clone, Debug)]
pub struct DiscordReport {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    /// d1 + d2 + d3.
    pub q: f64,
    /// Optimal axes in measurement order (qubit 1, 2, 3).
    pub axes: [MeasurementAxis; 3],
    /// Coefficients after the qubit-1 measurement.
    pub c_after_first: CoefficientTensor,
    /// Coefficients after the qubit-1 and qubit-2 measurements.
    pub c_after_second: CoefficientTensor,
}

/// The symmetric matrix whose top eigenvalue closes the measured-qubit
/// minimization. Its free indices live on qubit `k`: transposed pair blocks
/// are contracted so that the surviving row/column index is always `k`'s.
pub fn g_matrix(b: &BlochDecomposition, k: Qubit) -> SymMat3 {
    let ki = k.index();
    let s = b.s[ki];
    let t3v = |slots: [usize; 3]| b.t3[slots[0]][slots[1]][slots[2]];
    let mut diag = [0.0; 3];
    let mut off = [0.0; 3]; // (0,1), (0,2), (1,2)
    let mut add = |a: usize, bb: usize, v: f64| {
        if a == bb {
            diag[a] += v;
        } else {
            let (lo, hi) = if a < bb { (a, bb) } else { (bb, a) };
            off[lo + hi - 1] += v;
        }
    };
    for a in 0..3 {
        for bb in a..3 {
            let mut v = s[a] * s[bb];
            for other in 0..3 {
                if other == ki {
                    continue;
                }
                let pair = match (ki.min(other), ki.max(other)) {
                    (0, 1) => b.t12,
                    (0, 2) => b.t13,
                    _ => b.t23,
                };
                for j in 0..3 {
                    // Row index of the stored block belongs to the
                    // lower-numbered qubit; pick the side that leaves k free.
                    v += if ki < other {
                        pair[a][j] * pair[bb][j]
                    } else {
                        pair[j][a] * pair[j][bb]
                    };
                }
            }
            for p in 0..3 {
                for q in 0..3 {
                    let mut sa = [0usize; 3];
                    let mut sb = [0usize; 3];
                    let (o1, o2) = k.others();
                    sa[ki] = a;
                    sb[ki] = bb;
                    sa[o1] = p;
                    sb[o1] = p;
                    sa[o2] = q;
                    sb[o2] = q;
                    v += t3v(sa) * t3v(sb);
                }
            }
            add(a, bb, v);
        }
    }
    SymMat3::from_upper(diag, off)
}

/// Sum of squared Bloch-block norms entering the qubit-`k` measure: the
/// local vector, both pair blocks containing `k`, and the three-way tensor.
pub fn norm_sum(b: &BlochDecomposition, k: Qubit) -> f64 {
    let pairs = match k {
        Qubit::Q1 => [QubitPair::Q12, QubitPair::Q13],
        Qubit::Q2 => [QubitPair::Q12, QubitPair::Q23],
        Qubit::Q3 => [QubitPair::Q13, QubitPair::Q23],
    };
    b.s_norm_sq(k) + b.pair_norm_sq(pairs[0]) + b.pair_norm_sq(pairs[1]) + b.t3_norm_sq()
}

/// Discord-like measure for qubit `k` together with its optimal axis.
///
/// Values in `(DISCORD_CLAMP_TOL, 0)` are clamped to zero; anything lower
/// indicates an internal contradiction and is reported as an error.
pub fn gqd_k(b: &BlochDecomposition, k: Qubit) -> Result<(f64, MeasurementAxis)> {
    let g = g_matrix(b, k);
    let eig = eig_sym3(&g)?;
    let axis = MeasurementAxis::from_direction(eig.vectors[0])?;
    let d = (norm_sum(b, k) - eig.values[0]) / 8.0;
    if d < DISCORD_CLAMP_TOL {
        return Err(Error::InternalConsistency(format!(
            "negative discord {d:.3e} for qubit {k}"
        )));
    }
    Ok((d.max(0.0), axis))
}

/// Applies the optimal-measurement projector to the coefficient tensor: in
/// qubit `k`'s slot the identity component is kept and the Pauli components
/// are projected onto the measurement axis.
pub fn project_measure(
    c: &CoefficientTensor,
    axis: &MeasurementAxis,
    k: Qubit,
) -> CoefficientTensor {
    let e = axis.components();
    let ki = k.index();
    let mut out = *c;
    let arr = &mut out.c;
    for p in 0..4 {
        for q in 0..4 {
            let at = |slot_val: usize, arr: &[[[f64; 4]; 4]; 4]| {
                let mut s = [0usize; 3];
                let (o1, o2) = k.others();
                s[ki] = slot_val;
                s[o1] = p;
                s[o2] = q;
                arr[s[0]][s[1]][s[2]]
            };
            let w = e[0] * at(1, arr) + e[1] * at(2, arr) + e[2] * at(3, arr);
            for (a, ea) in e.iter().enumerate() {
                let mut s = [0usize; 3];
                let (o1, o2) = k.others();
                s[ki] = a + 1;
                s[o1] = p;
                s[o2] = q;
                arr[s[0]][s[1]][s[2]] = ea * w;
            }
        }
    }
    out
}

/// Total correlation of a three-qubit state under sequential optimal
/// measurements of qubit 1, then qubit 2, then qubit 3.
pub fn tqc(rho: &DensityMatrix8) -> Result<DiscordReport> {
    let c0 = coeff_tensor(rho)?;
    let b0 = bloch_parts(&c0);
    let (d1, ax1) = gqd_k(&b0, Qubit::Q1)?;
    let c1 = project_measure(&c0, &ax1, Qubit::Q1);
    let b1 = bloch_parts(&c1);
    let (d2, ax2) = gqd_k(&b1, Qubit::Q2)?;
    let c2 = project_measure(&c1, &ax2, Qubit::Q2);
    let b2 = bloch_parts(&c2);
    let (d3, ax3) = gqd_k(&b2, Qubit::Q3)?;
    Ok(DiscordReport {
        d1,
        d2,
        d3,
        q: d1 + d2 + d3,
        axes: [ax1, ax2, ax3],
        c_after_first: c1,
        c_after_second: c2,
    })
}

fn bit2(a: usize, slot: usize) -> usize {
    (a >> (1 - slot)) & 1
}

/// Two-qubit analogue measured on the first qubit of the pair:
/// `(1/4) * (|x|^2 + |T|^2 - eta_max)` with `G = x x^T + T T^T`.
pub fn gqd_two_qubit(rho: &DensityMatrix4) -> Result<f64> {
    use crate::qstate::PAULI;
    let m = rho.entries();
    let mut x = [0.0; 3];
    let mut t = [[0.0; 3]; 3];
    for a in 0..3 {
        let mut acc_x = C64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                acc_x += m[i][j]
                    * PAULI[a + 1][bit2(j, 0)][bit2(i, 0)]
                    * PAULI[0][bit2(j, 1)][bit2(i, 1)];
            }
        }
        if acc_x.im.abs() > crate::qstate::COEFF_IMAG_TOL {
            return Err(Error::CorruptedState(format!(
                "pair coefficient x_{a} has imaginary residue {:.3e}",
                acc_x.im
            )));
        }
        x[a] = acc_x.re;
        for bb in 0..3 {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    acc += m[i][j]
                        * PAULI[a + 1][bit2(j, 0)][bit2(i, 0)]
                        * PAULI[bb + 1][bit2(j, 1)][bit2(i, 1)];
                }
            }
            if acc.im.abs() > crate::qstate::COEFF_IMAG_TOL {
                return Err(Error::CorruptedState(format!(
                    "pair coefficient T_{a}{bb} has imaginary residue {:.3e}",
                    acc.im
                )));
            }
            t[a][bb] = acc.re;
        }
    }
    let mut diag = [0.0; 3];
    let mut off = [0.0; 3];
    for a in 0..3 {
        for bb in a..3 {
            let mut v = x[a] * x[bb];
            for j in 0..3 {
                v += t[a][j] * t[bb][j];
            }
            if a == bb {
                diag[a] = v;
            } else {
                off[a + bb - 1] = v;
            }
        }
    }
    let eig = eig_sym3(&SymMat3::from_upper(diag, off))?;
    let norms: f64 = x.iter().map(|v| v * v).sum::<f64>()
        + t.iter().flatten().map(|v| v * v).sum::<f64>();
    let d = (norms - eig.values[0]) / 4.0;
    if d < DISCORD_CLAMP_TOL {
        return Err(Error::InternalConsistency(format!(
            "negative pair discord {d:.3e}"
        )));
    }
    Ok(d.max(0.0))
}

fn set_bit(a: usize, slot: usize, v: usize) -> usize {
    let sh = 2 - slot;
    (a & !(1 << sh)) | (v << sh)
}

fn sigma_along(e: [f64; 3]) -> [[C64; 2]; 2] {
    [
        [C64::new(-e[2], 0.0), C64::new(e[0], e[1])],
        [C64::new(e[0], -e[1]), C64::new(e[2], 0.0)],
    ]
}

fn disturbance_raw(rho: &DensityMatrix8, e: [f64; 3], k: Qubit) -> f64 {
    let s = sigma_along(e);
    let ki = k.index();
    let m = rho.entries();
    let mut dist = 0.0;
    for a in 0..8 {
        for b in 0..8 {
            let mut conj_term = C64::new(0.0, 0.0);
            for x in 0..2 {
                for y in 0..2 {
                    conj_term +=
                        s[bit(a, ki)][x] * m[set_bit(a, ki, x)][set_bit(b, ki, y)] * s[y][bit(b, ki)];
                }
            }
            // Projector pair along e: (rho + E rho E)/2 with E = e.sigma on k.
            let diff = 0.5 * (m[a][b] - conj_term);
            dist += diff.norm_sqr();
        }
    }
    dist
}

/// Squared Hilbert-Schmidt distance between `rho` and its dephased image
/// under the axis-`e` projective measurement of qubit `k`. Computed directly
/// on the dense matrix, independent of the coefficient-tensor route.
pub fn measurement_disturbance(rho: &DensityMatrix8, axis: &MeasurementAxis, k: Qubit) -> f64 {
    disturbance_raw(rho, axis.components(), k)
}

/// Dense projective measurement of qubit `k` along `axis`:
/// `(rho + E rho E) / 2` with `E` the axis Pauli operator on slot `k`.
pub fn apply_measurement_dense(
    rho: &DensityMatrix8,
    axis: &MeasurementAxis,
    k: Qubit,
) -> DensityMatrix8 {
    let s = sigma_along(axis.components());
    let ki = k.index();
    let m = rho.entries();
    let mut out = [[C64::new(0.0, 0.0); 8]; 8];
    for a in 0..8 {
        for b in 0..8 {
            let mut conj_term = C64::new(0.0, 0.0);
            for x in 0..2 {
                for y in 0..2 {
                    conj_term +=
                        s[bit(a, ki)][x] * m[set_bit(a, ki, x)][set_bit(b, ki, y)] * s[y][bit(b, ki)];
                }
            }
            out[a][b] = 0.5 * (m[a][b] + conj_term);
        }
    }
    DensityMatrix8::from_raw(out)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn tangent_basis(e: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let seed = if e[0].abs() <= e[1].abs() && e[0].abs() <= e[2].abs() {
        [1.0, 0.0, 0.0]
    } else if e[1].abs() <= e[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let t1 = normalize3(cross(e, seed));
    let t2 = cross(e, t1);
    (t1, t2)
}

fn golden_min(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Minimizes the dense measurement disturbance of qubit `k` over all axes:
/// a midpoint theta/phi grid seeds a tangent-plane golden-section descent.
/// Serves as the independent check of [`gqd_k`]; agreement is expected to
/// about 1e-6 in the value.
pub fn gqd_brute_force(rho: &DensityMatrix8, k: Qubit, grid: GridResolution) -> f64 {
    assert!(
        grid.n_theta >= 2 && grid.n_phi >= 2,
        "grid must have at least 2 points per angle"
    );
    let mut best = f64::INFINITY;
    let mut e = [0.0, 0.0, 1.0];
    for i in 0..grid.n_theta {
        let theta = (i as f64 + 0.5) * std::f64::consts::PI / grid.n_theta as f64;
        for j in 0..grid.n_phi {
            let phi = j as f64 * std::f64::consts::TAU / grid.n_phi as f64;
            let cand = [
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ];
            let v = disturbance_raw(rho, cand, k);
            if v < best {
                best = v;
                e = cand;
            }
        }
    }
    let mut w = 0.1_f64;
    for _ in 0..14 {
        let (t1, t2) = tangent_basis(e);
        for t in [t1, t2] {
            let u = golden_min(
                |u| {
                    disturbance_raw(
                        rho,
                        normalize3([e[0] + u * t[0], e[1] + u * t[1], e[2] + u * t[2]]),
                        k,
                    )
                },
                -w,
                w,
                20,
            );
            e = normalize3([e[0] + u * t[0], e[1] + u * t[1], e[2] + u * t[2]]);
        }
        w *= 0.35;
    }
    disturbance_raw(rho, e, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{hs_distance_sq, random_density8, reduce_two_qubit, rho_from_coeff};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const ANALYTIC_TOL: f64 = 1e-12;
    const BRUTE_TOL: f64 = 1e-5;

    fn ghz(alpha: f64) -> DensityMatrix8 {
        let beta = (1.0 - alpha * alpha).sqrt();
        let mut amps = [C64::new(0.0, 0.0); 8];
        amps[7] = C64::new(alpha, 0.0);
        amps[0] = C64::new(beta, 0.0);
        DensityMatrix8::pure(&amps).unwrap()
    }

    #[test]
    fn ghz_g_matrix_is_twice_identity() {
        let b = bloch_parts(&coeff_tensor(&ghz(std::f64::consts::FRAC_1_SQRT_2)).unwrap());
        let gm = g_matrix(&b, Qubit::Q1);
        let g = gm.entries();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 2.0 } else { 0.0 };
                assert!((g[i][j] - expect).abs() < 1e-13, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn ghz_sequential_values() {
        let report = tqc(&ghz(std::f64::consts::FRAC_1_SQRT_2)).unwrap();
        assert!((report.d1 - 0.5).abs() < 1e-12);
        assert!((report.d2 - 0.25).abs() < 1e-12);
        assert!(report.d3.abs() < 1e-12);
        assert!((report.q - 0.75).abs() < 1e-12);
        assert!((report.q - (report.d1 + report.d2 + report.d3)).abs() < 1e-15);
    }

    #[test]
    fn ghz_biased_superposition() {
        // alpha^2 != 1/2 drops the degeneracy: the first measure is along z
        // with value 2 alpha^2 beta^2 and nothing survives for the rest.
        let alpha_sq = 0.3_f64;
        let report = tqc(&ghz(alpha_sq.sqrt())).unwrap();
        let expect = 2.0 * alpha_sq * (1.0 - alpha_sq);
        assert!((report.d1 - expect).abs() < 1e-12);
        assert!(report.d2.abs() < 1e-12);
        assert!(report.d3.abs() < 1e-12);
        let ax = report.axes[0].components();
        assert!(ax[2].abs() > 1.0 - 1e-10);
    }

    #[test]
    fn ground_state_has_no_correlation() {
        let mut amps = [C64::new(0.0, 0.0); 8];
        amps[7] = C64::new(1.0, 0.0);
        let rho = DensityMatrix8::pure(&amps).unwrap();
        let b = bloch_parts(&coeff_tensor(&rho).unwrap());
        let gm = g_matrix(&b, Qubit::Q1);
        let g = gm.entries();
        assert!((g[2][2] - 4.0).abs() < 1e-13);
        assert!(g[0][0].abs() < 1e-13 && g[1][1].abs() < 1e-13);
        let report = tqc(&rho).unwrap();
        assert!(report.q.abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_has_no_correlation() {
        let report = tqc(&DensityMatrix8::maximally_mixed()).unwrap();
        assert_eq!(report.q, 0.0);
    }

    #[test]
    fn classical_quantum_states_have_zero_first_measure() {
        // p |e><e| x rho_a + (1-p) |g><g| x rho_b is undisturbed by the
        // z measurement of qubit 1.
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..25 {
            let p: f64 = rng.gen_range(0.05..0.95);
            let ra = reduce_two_qubit(&random_density8(&mut rng), QubitPair::Q23);
            let rb = reduce_two_qubit(&random_density8(&mut rng), QubitPair::Q23);
            let mut m = [[C64::new(0.0, 0.0); 8]; 8];
            for i in 0..4 {
                for j in 0..4 {
                    m[i][j] = p * ra[(i, j)];
                    m[4 + i][4 + j] = (1.0 - p) * rb[(i, j)];
                }
            }
            let rho = DensityMatrix8::new(m).unwrap();
            let b = bloch_parts(&coeff_tensor(&rho).unwrap());
            let (d1, axis) = gqd_k(&b, Qubit::Q1).unwrap();
            assert!(d1 < 1e-12, "d1 = {d1:.3e}");
            assert!(axis.components()[2].abs() > 1.0 - 1e-8);
        }
    }

    #[test]
    fn bell_pair_measure_is_half() {
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        m[0][0] = C64::new(0.5, 0.0);
        m[0][3] = C64::new(0.5, 0.0);
        m[3][0] = C64::new(0.5, 0.0);
        m[3][3] = C64::new(0.5, 0.0);
        let bell = DensityMatrix4::new(m).unwrap();
        let d = gqd_two_qubit(&bell).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
        assert!((d - brute_force_pair(&bell)).abs() < BRUTE_TOL);
    }

    #[test]
    fn pair_measure_matches_brute_force_on_random_reductions() {
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..10 {
            let rho = random_density8(&mut rng);
            for pair in QubitPair::ALL {
                let red = reduce_two_qubit(&rho, pair);
                let d = gqd_two_qubit(&red).unwrap();
                let bf = brute_force_pair(&red);
                assert!((d - bf).abs() < BRUTE_TOL, "pair {pair}: {d} vs {bf}");
            }
        }
    }

    /// Independent minimizer for the two-qubit measure: dense projector
    /// sandwich on the first qubit over a fine axis grid plus refinement.
    fn brute_force_pair(rho: &DensityMatrix4) -> f64 {
        let disturb = |e: [f64; 3]| -> f64 {
            let s = sigma_along(e);
            let m = rho.entries();
            let mut dist = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    let mut conj_term = C64::new(0.0, 0.0);
                    for x in 0..2 {
                        for y in 0..2 {
                            let ai = (x << 1) | (a & 1);
                            let bi = (y << 1) | (b & 1);
                            conj_term += s[a >> 1][x] * m[ai][bi] * s[y][b >> 1];
                        }
                    }
                    dist += (0.5 * (m[a][b] - conj_term)).norm_sqr();
                }
            }
            dist
        };
        let mut best = f64::INFINITY;
        let mut e = [0.0, 0.0, 1.0];
        for i in 0..64 {
            let theta = (i as f64 + 0.5) * std::f64::consts::PI / 64.0;
            for j in 0..128 {
                let phi = j as f64 * std::f64::consts::TAU / 128.0;
                let cand = [
                    theta.sin() * phi.cos(),
                    theta.sin() * phi.sin(),
                    theta.cos(),
                ];
                let v = disturb(cand);
                if v < best {
                    best = v;
                    e = cand;
                }
            }
        }
        let mut w = 0.1;
        for _ in 0..14 {
            let (t1, t2) = tangent_basis(e);
            for t in [t1, t2] {
                let u = golden_min(
                    |u| disturb(normalize3([e[0] + u * t[0], e[1] + u * t[1], e[2] + u * t[2]])),
                    -w,
                    w,
                    20,
                );
                e = normalize3([e[0] + u * t[0], e[1] + u * t[1], e[2] + u * t[2]]);
            }
            w *= 0.35;
        }
        disturb(e)
    }

    #[test]
    fn dense_and_coefficient_measurements_agree() {
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..60 {
            let rho = random_density8(&mut rng);
            let axis = MeasurementAxis::from_direction([
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ])
            .unwrap();
            for k in Qubit::ALL {
                let dense = apply_measurement_dense(&rho, &axis, k);
                let projected = project_measure(&coeff_tensor(&rho).unwrap(), &axis, k);
                let rebuilt = rho_from_coeff(&projected).unwrap();
                assert!(hs_distance_sq(&dense, &rebuilt.rho).sqrt() < ANALYTIC_TOL);
                // The distance identity ties the two routes together.
                let lhs = measurement_disturbance(&rho, &axis, k);
                let rhs = hs_distance_sq(&rho, &dense);
                assert!((lhs - rhs).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn disturbance_expands_as_quadratic_form() {
        // Independent check of the closed form behind gqd_k: for any axis,
        // 8 * disturbance = norm_sum - e^T G e.
        let mut rng = StdRng::seed_from_u64(43);
        for _ in 0..40 {
            let rho = random_density8(&mut rng);
            let c = coeff_tensor(&rho).unwrap();
            let b = bloch_parts(&c);
            let axis = MeasurementAxis::from_direction([
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ])
            .unwrap();
            for k in Qubit::ALL {
                let lhs = 8.0 * measurement_disturbance(&rho, &axis, k);
                let g = g_matrix(&b, k);
                let rhs = norm_sum(&b, k) - g.quad_form(axis.components());
                assert!((lhs - rhs).abs() < 1e-11, "qubit {k}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn measurement_is_idempotent() {
        let mut rng = StdRng::seed_from_u64(57);
        for _ in 0..20 {
            let rho = random_density8(&mut rng);
            let axis = MeasurementAxis::from_spherical(
                rng.gen_range(0.0..std::f64::consts::PI),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            for k in Qubit::ALL {
                let once = apply_measurement_dense(&rho, &axis, k);
                let twice = apply_measurement_dense(&once, &axis, k);
                assert!(hs_distance_sq(&once, &twice).sqrt() < 1e-14);
            }
        }
    }

    #[test]
    fn measured_qubit_has_zero_residual_measure() {
        let mut rng = StdRng::seed_from_u64(71);
        for _ in 0..20 {
            let rho = random_density8(&mut rng);
            let c = coeff_tensor(&rho).unwrap();
            let b = bloch_parts(&c);
            for k in Qubit::ALL {
                let (_, axis) = gqd_k(&b, k).unwrap();
                let after = project_measure(&c, &axis, k);
                let (d_after, _) = gqd_k(&bloch_parts(&after), k).unwrap();
                assert!(d_after < 1e-12, "qubit {k}: residual {d_after:.3e}");
            }
        }
    }

    #[test]
    fn first_measure_invariant_under_local_unitaries() {
        let mut rng = StdRng::seed_from_u64(83);
        for _ in 0..30 {
            let rho = random_density8(&mut rng);
            let us: Vec<[[C64; 2]; 2]> = (0..3)
                .map(|_| crate::qstate::random_unitary2(&mut rng))
                .collect();
            let u = crate::qstate::kron3(&us[0], &us[1], &us[2]);
            let mut udag = [[C64::new(0.0, 0.0); 8]; 8];
            for i in 0..8 {
                for j in 0..8 {
                    udag[i][j] = u[j][i].conj();
                }
            }
            let rot = DensityMatrix8::from_raw(crate::qstate::matmul8(
                &crate::qstate::matmul8(&u, rho.entries()),
                &udag,
            ));
            for k in Qubit::ALL {
                let (d0, _) = gqd_k(&bloch_parts(&coeff_tensor(&rho).unwrap()), k).unwrap();
                let (d1, _) = gqd_k(&bloch_parts(&coeff_tensor(&rot).unwrap()), k).unwrap();
                assert!((d0 - d1).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn analytic_matches_brute_force_on_random_states() {
        let mut rng = StdRng::seed_from_u64(97);
        for _ in 0..8 {
            let rho = random_density8(&mut rng);
            let b = bloch_parts(&coeff_tensor(&rho).unwrap());
            for k in Qubit::ALL {
                let (d, _) = gqd_k(&b, k).unwrap();
                let bf = gqd_brute_force(&rho, k, GridResolution::default());
                assert!((d - bf).abs() < BRUTE_TOL, "qubit {k}: {d} vs {bf}");
            }
        }
    }

    #[test]
    fn axis_validation() {
        assert!(MeasurementAxis::new([1.0, 0.0, 0.0]).is_ok());
        assert!(MeasurementAxis::new([1.0, 1e-5, 0.0]).is_err());
        assert!(MeasurementAxis::new([f64::NAN, 0.0, 0.0]).is_err());
        assert!(MeasurementAxis::from_direction([0.0, 0.0, 0.0]).is_err());
        let ax = MeasurementAxis::from_direction([3.0, 4.0, 0.0]).unwrap();
        assert!((ax.components()[0] - 0.6).abs() < 1e-15);
    }
}
