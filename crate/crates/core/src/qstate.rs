//! Three-qubit density matrices and their expansion over the orthonormal
//! operator basis {I/sqrt2, sigma_x/sqrt2, sigma_y/sqrt2, sigma_z/sqrt2} per
//! qubit.
//!
//! Basis ordering: the product basis lists the excited state first for every
//! qubit, i.e. |111>, |110>, |101>, |100>, |011>, |010>, |001>, |000>, with
//! qubit 1 the leftmost tensor factor. Row index a in 0..8 therefore encodes
//! qubit k's state in bit (2-k) of a, with bit value 0 = excited.

use crate::error::{Error, Result};
use crate::linalg::min_eig_herm;
use crate::C64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Hermiticity / trace tolerance for accepting external matrices as states.
pub const STATE_TOL: f64 = 1e-12;
/// A reconstructed matrix with min eigenvalue below this is flagged unphysical.
pub const NOT_A_STATE_TOL: f64 = -1e-8;
/// Largest imaginary residue tolerated in a basis coefficient.
pub const COEFF_IMAG_TOL: f64 = 1e-9;
/// Significant digits written by the text format (round-trips f64 exactly).
pub const TEXT_SIG_DIGITS: usize = 17;

const fn c(re: f64, im: f64) -> C64 {
    C64 { re, im }
}

/// Pauli matrices (index 0 = identity, 1..4 = x, y, z) in the excited-first
/// single-qubit basis. sigma_z keeps its standard action (+1 on the ground
/// state), so its matrix here is diag(-1, +1).
pub(crate) const PAULI: [[[C64; 2]; 2]; 4] = [
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
    [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
    [[c(0.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(0.0, 0.0)]],
    [[c(-1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
];

/// Scale relating raw basis coefficients to Bloch components: (2 sqrt2) C = t.
#[inline]
pub(crate) fn sqrt8() -> f64 {
    8.0_f64.sqrt()
}

/// One of the three qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Qubit {
    Q1,
    Q2,
    Q3,
}

impl Qubit {
    pub const ALL: [Qubit; 3] = [Qubit::Q1, Qubit::Q2, Qubit::Q3];

    /// Zero-based slot index.
    pub fn index(self) -> usize {
        match self {
            Qubit::Q1 => 0,
            Qubit::Q2 => 1,
            Qubit::Q3 => 2,
        }
    }

    /// The other two slots, in ascending order.
    pub fn others(self) -> (usize, usize) {
        match self {
            Qubit::Q1 => (1, 2),
            Qubit::Q2 => (0, 2),
            Qubit::Q3 => (0, 1),
        }
    }
}

impl std::fmt::Display for Qubit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

/// An ordered pair of qubits surviving a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QubitPair {
    Q12,
    Q13,
    Q23,
}

impl QubitPair {
    pub const ALL: [QubitPair; 3] = [QubitPair::Q12, QubitPair::Q13, QubitPair::Q23];

    /// (kept, kept, traced-out) slot indices.
    pub fn slots(self) -> (usize, usize, usize) {
        match self {
            QubitPair::Q12 => (0, 1, 2),
            QubitPair::Q13 => (0, 2, 1),
            QubitPair::Q23 => (1, 2, 0),
        }
    }
}

impl std::fmt::Display for QubitPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (a, b, _) = self.slots();
        write!(f, "{}{}", a + 1, b + 1)
    }
}

/// Qubit k's bit of basis index `a` (0 = excited, 1 = ground).
#[inline]
pub(crate) fn bit(a: usize, slot: usize) -> usize {
    (a >> (2 - slot)) & 1
}

/// Basis index with the given per-qubit bits.
#[inline]
pub(crate) fn idx(b1: usize, b2: usize, b3: usize) -> usize {
    (b1 << 2) | (b2 << 1) | b3
}

/// Three-qubit density matrix in the excited-first product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix8 {
    m: [[C64; 8]; 8],
}

impl DensityMatrix8 {
    /// Validating constructor: Hermitian and unit trace within
    /// [`STATE_TOL`], positive semidefinite within 1e-10.
    pub fn new(m: [[C64; 8]; 8]) -> Result<Self> {
        let rho = DensityMatrix8 { m };
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps entries without validation. For matrices that are states by
    /// construction (channel outputs, convex mixtures of states).
    pub fn from_raw(m: [[C64; 8]; 8]) -> Self {
        DensityMatrix8 { m }
    }

    /// Pure state from eight amplitudes (must be normalized within 1e-12).
    pub fn pure(amps: &[C64; 8]) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "state vector norm^2 = {norm_sq} is not 1"
            )));
        }
        let mut m = [[c(0.0, 0.0); 8]; 8];
        for a in 0..8 {
            for b in 0..8 {
                m[a][b] = amps[a] * amps[b].conj();
            }
        }
        Ok(DensityMatrix8 { m })
    }

    pub fn maximally_mixed() -> Self {
        let mut m = [[c(0.0, 0.0); 8]; 8];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = c(0.125, 0.0);
        }
        DensityMatrix8 { m }
    }

    pub fn entries(&self) -> &[[C64; 8]; 8] {
        &self.m
    }

    pub fn trace(&self) -> C64 {
        (0..8).map(|i| self.m[i][i]).sum()
    }

    /// Largest deviation from Hermitian symmetry, max_ij |m_ij - conj(m_ji)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..8 {
            for j in 0..8 {
                d = d.max((self.m[i][j] - self.m[j][i].conj()).norm());
            }
        }
        d
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        min_eig_herm(&self.m)
    }

    /// Tr(rho^2).
    pub fn purity(&self) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..8 {
            for j in 0..8 {
                acc += self.m[i][j] * self.m[j][i];
            }
        }
        acc.re
    }

    pub fn validate(&self) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "Hermiticity defect {defect:.3e} exceeds {STATE_TOL:.0e}"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "trace {tr} differs from 1 beyond {STATE_TOL:.0e}"
            )));
        }
        let min = self.min_eigenvalue()?;
        if min < -1e-10 {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min:.3e} below -1e-10"
            )));
        }
        Ok(())
    }

    /// Serializes as 8 lines of 8 whitespace-separated `a+bi` entries with
    /// 17 significant digits (exact f64 round trip), LF line endings.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.m {
            let mut first = true;
            for z in row {
                if !first {
                    out.push(' ');
                }
                first = false;
                out.push_str(&format_c64(*z));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format written by [`Self::to_text`] and validates the
    /// result as a state.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut m = [[c(0.0, 0.0); 8]; 8];
        let mut row = 0usize;
        for (line_no, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            if row >= 8 {
                return Err(Error::Parse {
                    line: line_no + 1,
                    column: 1,
                    message: "more than 8 matrix rows".into(),
                });
            }
            let mut col_count = 0usize;
            let mut search_from = 0usize;
            for tok in line.split_whitespace() {
                let col = line[search_from..].find(tok).map(|p| search_from + p).unwrap_or(0);
                search_from = col + tok.len();
                if col_count >= 8 {
                    return Err(Error::Parse {
                        line: line_no + 1,
                        column: col + 1,
                        message: "more than 8 entries in row".into(),
                    });
                }
                m[row][col_count] = parse_c64(tok, line_no + 1, col + 1)?;
                col_count += 1;
            }
            if col_count != 8 {
                return Err(Error::Parse {
                    line: line_no + 1,
                    column: line.len() + 1,
                    message: format!("row has {col_count} entries, expected 8"),
                });
            }
            row += 1;
        }
        if row != 8 {
            return Err(Error::Parse {
                line: text.lines().count() + 1,
                column: 1,
                message: format!("found {row} matrix rows, expected 8"),
            });
        }
        DensityMatrix8::new(m)
    }
}

impl std::ops::Index<(usize, usize)> for DensityMatrix8 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.m[i][j]
    }
}

/// Two-qubit density matrix (basis |11>, |10>, |01>, |00>).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix4 {
    m: [[C64; 4]; 4],
}

impl DensityMatrix4 {
    pub fn new(m: [[C64; 4]; 4]) -> Result<Self> {
        let rho = DensityMatrix4 { m };
        let mut defect: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                defect = defect.max((rho.m[i][j] - rho.m[j][i].conj()).norm());
            }
        }
        if defect > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "Hermiticity defect {defect:.3e} exceeds {STATE_TOL:.0e}"
            )));
        }
        let tr: C64 = (0..4).map(|i| rho.m[i][i]).sum();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        if min_eig_herm(&rho.m)? < -1e-10 {
            return Err(Error::InvalidState("negative eigenvalue".into()));
        }
        Ok(rho)
    }

    pub fn from_raw(m: [[C64; 4]; 4]) -> Self {
        DensityMatrix4 { m }
    }

    pub fn entries(&self) -> &[[C64; 4]; 4] {
        &self.m
    }
}

impl std::ops::Index<(usize, usize)> for DensityMatrix4 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.m[i][j]
    }
}

fn format_c64(z: C64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

fn parse_c64(tok: &str, line: usize, column: usize) -> Result<C64> {
    let err = |message: String| Error::Parse { line, column, message };
    let body = tok
        .strip_suffix(['i', 'I'])
        .ok_or_else(|| err(format!("'{tok}' does not end in 'i'")))?;
    let bytes = body.as_bytes();
    let mut split = None;
    for (i, &b) in bytes.iter().enumerate().skip(1) {
        if (b == b'+' || b == b'-') && bytes[i - 1] != b'e' && bytes[i - 1] != b'E' {
            split = Some(i);
        }
    }
    let split = split.ok_or_else(|| err(format!("'{tok}' has no imaginary part")))?;
    let re: f64 = body[..split]
        .parse()
        .map_err(|e| err(format!("bad real part '{}': {e}", &body[..split])))?;
    let im: f64 = body[split..]
        .parse()
        .map_err(|e| err(format!("bad imaginary part '{}': {e}", &body[split..])))?;
    Ok(c(re, im))
}

/// Real expansion coefficients C[i][j][k] = Tr(rho X_i x X_j x X_k) over the
/// normalized operator basis; index 0 is the identity slot, 1..4 follow
/// sigma_x, sigma_y, sigma_z. The (0,0,0) entry equals 1/sqrt8 for any state,
/// and the squared Frobenius norm equals the purity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientTensor {
    pub(crate) c: [[[f64; 4]; 4]; 4],
}

impl CoefficientTensor {
    pub fn from_array(c: [[[f64; 4]; 4]; 4]) -> Self {
        CoefficientTensor { c }
    }

    pub fn as_array(&self) -> &[[[f64; 4]; 4]; 4] {
        &self.c
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[i][j][k]
    }

    /// Squared Frobenius norm; equals Tr(rho^2) of the represented state.
    pub fn norm_sq(&self) -> f64 {
        let mut acc = 0.0;
        for plane in &self.c {
            for row in plane {
                for x in row {
                    acc += x * x;
                }
            }
        }
        acc
    }

    /// Value every state has at (0,0,0): 1/sqrt8.
    pub fn trace_component() -> f64 {
        1.0 / sqrt8()
    }
}

/// Bloch-level pieces extracted from a [`CoefficientTensor`]: local vectors
/// s[k], pairwise correlation matrices (rows indexed by the lower-numbered
/// qubit of the pair) and the three-way correlation tensor.
#[derive(Clone, Copy, Debug)]
pub struct BlochDecomposition {
    pub s: [[f64; 3]; 3],
    pub t12: [[f64; 3]; 3],
    pub t13: [[f64; 3]; 3],
    pub t23: [[f64; 3]; 3],
    pub t3: [[[f64; 3]; 3]; 3],
}

impl BlochDecomposition {
    pub fn s_norm_sq(&self, k: Qubit) -> f64 {
        self.s[k.index()].iter().map(|x| x * x).sum()
    }

    pub fn pair(&self, pair: QubitPair) -> &[[f64; 3]; 3] {
        match pair {
            QubitPair::Q12 => &self.t12,
            QubitPair::Q13 => &self.t13,
            QubitPair::Q23 => &self.t23,
        }
    }

    pub fn pair_norm_sq(&self, pair: QubitPair) -> f64 {
        self.pair(pair).iter().flatten().map(|x| x * x).sum()
    }

    pub fn t3_norm_sq(&self) -> f64 {
        self.t3.iter().flatten().flatten().map(|x| x * x).sum()
    }
}

/// Expands a state over the normalized Pauli basis.
///
/// Every coefficient is a trace of rho against a Hermitian operator and so
/// must be real; an imaginary residue above [`COEFF_IMAG_TOL`] means the
/// input was corrupted.
pub fn coeff_tensor(rho: &DensityMatrix8) -> Result<CoefficientTensor> {
    let scale = 1.0 / sqrt8();
    let mut c3 = [[[0.0; 4]; 4]; 4];
    for (i, c3i) in c3.iter_mut().enumerate() {
        for (j, c3ij) in c3i.iter_mut().enumerate() {
            for (k, out) in c3ij.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for a in 0..8 {
                    for b in 0..8 {
                        let basis = PAULI[i][bit(b, 0)][bit(a, 0)]
                            * PAULI[j][bit(b, 1)][bit(a, 1)]
                            * PAULI[k][bit(b, 2)][bit(a, 2)];
                        acc += rho.m[a][b] * basis;
                    }
                }
                if acc.im.abs() > COEFF_IMAG_TOL {
                    return Err(Error::CorruptedState(format!(
                        "coefficient ({i},{j},{k}) has imaginary residue {:.3e}",
                        acc.im
                    )));
                }
                *out = acc.re * scale;
            }
        }
    }
    Ok(CoefficientTensor { c: c3 })
}

/// Splits a coefficient tensor into Bloch vectors and correlation blocks
/// (plain Pauli normalization, i.e. entries are Tr(rho sigma x sigma x ...)).
pub fn bloch_parts(c: &CoefficientTensor) -> BlochDecomposition {
    let f = sqrt8();
    let mut b = BlochDecomposition {
        s: [[0.0; 3]; 3],
        t12: [[0.0; 3]; 3],
        t13: [[0.0; 3]; 3],
        t23: [[0.0; 3]; 3],
        t3: [[[0.0; 3]; 3]; 3],
    };
    for a in 0..3 {
        b.s[0][a] = f * c.c[a + 1][0][0];
        b.s[1][a] = f * c.c[0][a + 1][0];
        b.s[2][a] = f * c.c[0][0][a + 1];
        for bb in 0..3 {
            b.t12[a][bb] = f * c.c[a + 1][bb + 1][0];
            b.t13[a][bb] = f * c.c[a + 1][0][bb + 1];
            b.t23[a][bb] = f * c.c[0][a + 1][bb + 1];
            for g in 0..3 {
                b.t3[a][bb][g] = f * c.c[a + 1][bb + 1][g + 1];
            }
        }
    }
    b
}

/// Result of rebuilding a matrix from coefficients. Projective-measurement
/// intermediates must flow through even when slightly unphysical, so instead
/// of failing this reports the minimum eigenvalue and leaves the judgement to
/// the caller.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub rho: DensityMatrix8,
    pub min_eigenvalue: f64,
}

impl Reconstruction {
    /// None if positive semidefinite within [`NOT_A_STATE_TOL`].
    pub fn not_a_state_warning(&self) -> Option<String> {
        (self.min_eigenvalue < NOT_A_STATE_TOL).then(|| {
            format!(
                "reconstructed matrix has eigenvalue {:.3e} below {NOT_A_STATE_TOL:.0e}",
                self.min_eigenvalue
            )
        })
    }
}

/// Inverse of [`coeff_tensor`]: rho = sum C[i][j][k] X_i x X_j x X_k.
///
/// The tensor must be finite with the mandatory trace component 1/sqrt8; the
/// output is Hermitian with unit trace by construction.
pub fn rho_from_coeff(c3: &CoefficientTensor) -> Result<Reconstruction> {
    for plane in &c3.c {
        for row in plane {
            for x in row {
                if !x.is_finite() {
                    return Err(Error::InvalidInput("non-finite coefficient".into()));
                }
            }
        }
    }
    if (c3.c[0][0][0] - CoefficientTensor::trace_component()).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "trace component {} differs from 1/sqrt8",
            c3.c[0][0][0]
        )));
    }
    let scale = 1.0 / sqrt8();
    let mut m = [[c(0.0, 0.0); 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let w = c3.c[i][j][k] * scale;
                if w == 0.0 {
                    continue;
                }
                for a in 0..8 {
                    for b_ in 0..8 {
                        let basis = PAULI[i][bit(a, 0)][bit(b_, 0)]
                            * PAULI[j][bit(a, 1)][bit(b_, 1)]
                            * PAULI[k][bit(a, 2)][bit(b_, 2)];
                        m[a][b_] += w * basis;
                    }
                }
            }
        }
    }
    let rho = DensityMatrix8 { m };
    let min_eigenvalue = rho.min_eigenvalue()?;
    Ok(Reconstruction { rho, min_eigenvalue })
}

/// Traces out one qubit, keeping `pair` in order.
pub fn reduce_two_qubit(rho: &DensityMatrix8, pair: QubitPair) -> DensityMatrix4 {
    let (ka, kb, out_slot) = pair.slots();
    let mut m = [[c(0.0, 0.0); 4]; 4];
    for xa in 0..2 {
        for xb in 0..2 {
            for ya in 0..2 {
                for yb in 0..2 {
                    let mut acc = C64::new(0.0, 0.0);
                    for z in 0..2 {
                        let mut abits = [0usize; 3];
                        let mut bbits = [0usize; 3];
                        abits[ka] = xa;
                        abits[kb] = xb;
                        abits[out_slot] = z;
                        bbits[ka] = ya;
                        bbits[kb] = yb;
                        bbits[out_slot] = z;
                        acc += rho.m[idx(abits[0], abits[1], abits[2])]
                            [idx(bbits[0], bbits[1], bbits[2])];
                    }
                    m[2 * xa + xb][2 * ya + yb] = acc;
                }
            }
        }
    }
    DensityMatrix4 { m }
}

/// Squared Hilbert-Schmidt distance between two 8x8 matrices.
pub fn hs_distance_sq(a: &DensityMatrix8, b: &DensityMatrix8) -> f64 {
    let mut acc = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            acc += (a.m[i][j] - b.m[i][j]).norm_sqr();
        }
    }
    acc
}

/// Kronecker product of three single-qubit operators, qubit 1 leftmost.
pub(crate) fn kron3(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2], d: &[[C64; 2]; 2]) -> [[C64; 8]; 8] {
    let mut out = [[c(0.0, 0.0); 8]; 8];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, z) in row.iter_mut().enumerate() {
            *z = a[bit(i, 0)][bit(j, 0)] * b[bit(i, 1)][bit(j, 1)] * d[bit(i, 2)][bit(j, 2)];
        }
    }
    out
}

pub(crate) fn matmul8(a: &[[C64; 8]; 8], b: &[[C64; 8]; 8]) -> [[C64; 8]; 8] {
    let mut out = [[c(0.0, 0.0); 8]; 8];
    for i in 0..8 {
        for k in 0..8 {
            let aik = a[i][k];
            if aik == c(0.0, 0.0) {
                continue;
            }
            for j in 0..8 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Random state from the Hilbert-Schmidt (Ginibre) ensemble: G G^dag
/// normalized to unit trace, with G an 8x8 matrix of standard complex
/// Gaussians. Seed the generator for reproducible draws.
pub fn random_density8<R: Rng>(rng: &mut R) -> DensityMatrix8 {
    let mut g = [[c(0.0, 0.0); 8]; 8];
    for row in &mut g {
        for z in row.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *z = c(re, im);
        }
    }
    let mut m = [[c(0.0, 0.0); 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..8 {
                acc += g[i][k] * g[j][k].conj();
            }
            m[i][j] = acc;
        }
    }
    let tr: f64 = (0..8).map(|i| m[i][i].re).sum();
    for row in &mut m {
        for z in row.iter_mut() {
            *z /= tr;
        }
    }
    DensityMatrix8 { m }
}

/// Rotation `exp(-i theta/2 n.sigma)` about a random axis, for covariance
/// tests across the crate.
#[cfg(test)]
pub(crate) fn random_unitary2<R: Rng>(rng: &mut R) -> [[C64; 2]; 2] {
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).sqrt();
    let n = [r * phi.cos(), r * phi.sin(), z];
    let (s, co) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    let mut u = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut ns = C64::new(0.0, 0.0);
            for (a, na) in n.iter().enumerate() {
                ns += *na * PAULI[a + 1][i][j];
            }
            u[i][j] = PAULI[0][i][j] * co - C64::new(0.0, 1.0) * s * ns;
        }
    }
    u
}
