//! Generators of the orthogonal-symplectic group acting on Kraus vectors and
//! the angle-parameterized channels built from them.
//!
//! Every generator `J` satisfies `Jᵀ = -J`, `[S, J] = 0`, `Tr(SᵀJ) = 0` and
//! `J³ = -J`, so `exp(θJ) = I + (cos θ - 1) P_J + sin θ J` with `P_J = -J²`.
//! The basis is the real embedding of the traceless anti-Hermitian matrices on
//! `C^{d_k/2}`, using the same interleaved `(x, y)` layout as the Kraus vectors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    build_symplectic_form, frame_to_kraus, identity_frame, relabel_to_kraus, KrausFrame, KrausSet, FRAME_LOOSE_TOL,
};
use crate::linalg::RealMatrix;

/// Tolerance for `[S, J] = 0`, `Tr(SᵀJ) = 0` in [`Generator::from_matrix`].
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Tolerance for `J³ = -J` in [`Generator::from_matrix`].
pub const POWER_TOL: f64 = 1e-10;

/// Sparse square real matrix as sorted `(row, col, value)` triplets.
#[derive(Clone, Debug, PartialEq)]
struct Sparse {
    dim: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl Sparse {
    fn from_dense(m: &RealMatrix) -> Self {
        let mut entries = Vec::new();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let x = m.get(r, c);
                if x != 0.0 {
                    entries.push((r, c, x));
                }
            }
        }
        Self { dim: m.rows(), entries }
    }

    fn to_dense(&self) -> RealMatrix {
        let mut m = RealMatrix::zeros(self.dim, self.dim);
        for &(r, c, x) in &self.entries {
            m.set(r, c, m.get(r, c) + x);
        }
        m
    }

    fn mul(&self, rhs: &Sparse) -> Sparse {
        let mut dense = RealMatrix::zeros(self.dim, self.dim);
        for &(r, k, a) in &self.entries {
            for &(_, c, b) in rhs.entries.iter().filter(|e| e.0 == k) {
                dense.set(r, c, dense.get(r, c) + a * b);
            }
        }
        Sparse::from_dense(&dense)
    }

    fn scale(&self, s: f64) -> Sparse {
        Sparse { dim: self.dim, entries: self.entries.iter().map(|&(r, c, x)| (r, c, x * s)).collect() }
    }

    /// `out += s · A v`
    #[inline]
    fn mul_vec_acc(&self, v: &[f64], s: f64, out: &mut [f64]) {
        for &(r, c, x) in &self.entries {
            out[r] += s * x * v[c];
        }
    }
}

/// One element of the constraint-preserving Lie algebra, with its projector `P_J = -J²`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    j: Sparse,
    projector: Sparse,
}

impl Generator {
    /// Embeds an anti-Hermitian matrix given by its nonzero entries `(row, col, value)`.
    fn from_anti_hermitian(n: usize, entries: &[(usize, usize, Complex64)]) -> Self {
        let mut dense = RealMatrix::zeros(2 * n, 2 * n);
        for &(r, c, z) in entries {
            dense.set(2 * r, 2 * c, z.re);
            dense.set(2 * r, 2 * c + 1, -z.im);
            dense.set(2 * r + 1, 2 * c, z.im);
            dense.set(2 * r + 1, 2 * c + 1, z.re);
        }
        let j = Sparse::from_dense(&dense);
        let projector = j.mul(&j).scale(-1.0);
        Self { j, projector }
    }

    /// Accepts an arbitrary real matrix after checking every algebra and power-structure invariant.
    pub fn from_matrix(j: RealMatrix) -> Result<Self> {
        let dk = j.rows();
        if dk != j.cols() {
            return Err(Error::NotSquare { rows: dk, cols: j.cols() });
        }
        let s = build_symplectic_form(dk)?;
        let s = s.matrix();
        let violation = |deviation: f64| Err(Error::Config(format!("not a valid generator (deviation {deviation:e})")));
        let anti = j.max_abs_diff(&j.transpose().scale(-1.0));
        if anti != 0.0 {
            return violation(anti);
        }
        let comm = (&(s * &j) - &(&j * s)).max_abs();
        if comm > ALGEBRA_TOL {
            return violation(comm);
        }
        let tr = (&s.transpose() * &j).trace().abs();
        if tr > ALGEBRA_TOL {
            return violation(tr);
        }
        let j2 = &j * &j;
        let cube = (&(&j2 * &j) + &j).max_abs();
        if cube > POWER_TOL {
            return violation(cube);
        }
        Ok(Self { j: Sparse::from_dense(&j), projector: Sparse::from_dense(&j2.scale(-1.0)) })
    }

    pub fn dim(&self) -> usize {
        self.j.dim
    }

    /// Dense `J`.
    pub fn matrix(&self) -> RealMatrix {
        self.j.to_dense()
    }

    /// Dense `P_J = -J²`.
    pub fn projector(&self) -> RealMatrix {
        self.projector.to_dense()
    }

    /// `v ← M(θ) v` without forming `M(θ)`.
    fn rotate(&self, v: &mut [f64], cos_minus_one: f64, sin: f64, scratch: &mut [f64]) {
        scratch.fill(0.0);
        self.projector.mul_vec_acc(v, cos_minus_one, scratch);
        self.j.mul_vec_acc(v, sin, scratch);
        for (x, dx) in v.iter_mut().zip(scratch.iter()) {
            *x += dx;
        }
    }
}

/// `M(θ) = I + (cos θ - 1) P_J + sin θ J`.
pub fn finite_transform(g: &Generator, theta: f64) -> RealMatrix {
    let n = g.dim();
    let mut m = RealMatrix::identity(n);
    for &(r, c, x) in &g.projector.entries {
        m.set(r, c, m.get(r, c) + (theta.cos() - 1.0) * x);
    }
    for &(r, c, x) in &g.j.entries {
        m.set(r, c, m.get(r, c) + theta.sin() * x);
    }
    m
}

/// The `(d_k/2)² - 1` generators acting on Kraus vectors of length `d_k`.
#[derive(Clone, Debug)]
pub struct GeneratorBasis {
    dk: usize,
    generators: Vec<Generator>,
}

impl GeneratorBasis {
    pub fn vector_dim(&self) -> usize {
        self.dk
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }
}

/// Ordered basis: symmetric imaginary pairs `i(E_jk + E_kj)`, then real
/// antisymmetric pairs `E_jk - E_kj` (both `j < k`, lexicographic), then the
/// diagonal differences `i(E_jj - E_{j+1,j+1})`.
pub fn generator_basis(dk: usize) -> Result<GeneratorBasis> {
    if dk < 4 || !dk.is_multiple_of(2) {
        return Err(Error::BadSymplecticDimension { got: dk, min: 4 });
    }
    let n = dk / 2;
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let mut generators = Vec::with_capacity(n * n - 1);
    for j in 0..n {
        for k in j + 1..n {
            generators.push(Generator::from_anti_hermitian(n, &[(j, k, i), (k, j, i)]));
        }
    }
    for j in 0..n {
        for k in j + 1..n {
            generators.push(Generator::from_anti_hermitian(n, &[(j, k, one), (k, j, -one)]));
        }
    }
    for j in 0..n - 1 {
        generators.push(Generator::from_anti_hermitian(n, &[(j, j, i), (j + 1, j + 1, -i)]));
    }
    Ok(GeneratorBasis { dk, generators })
}

/// Rotation angles in radians, one per basis generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngleVector(Vec<f64>);

impl AngleVector {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(angles))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Applies `M_n ⋯ M_1` (ascending basis order) to every vector of the frame in place.
fn rotate_frame(basis: &GeneratorBasis, angles: &[f64], frame: &mut KrausFrame) {
    let mut scratch = vec![0.0; basis.dk];
    for v in frame.vectors_mut() {
        for (g, &theta) in basis.generators.iter().zip(angles) {
            if theta == 0.0 {
                continue;
            }
            g.rotate(v, theta.cos() - 1.0, theta.sin(), &mut scratch);
        }
    }
}

pub fn apply_angles(basis: &GeneratorBasis, angles: &AngleVector, frame: &KrausFrame) -> Result<KrausFrame> {
    if angles.len() != basis.len() {
        return Err(Error::AngleCount { expected: basis.len(), found: angles.len() });
    }
    if frame.vector_dim() != basis.dk {
        return Err(Error::DimensionMismatch { expected: basis.dk, found: frame.vector_dim() });
    }
    frame.validate(FRAME_LOOSE_TOL)?;
    let mut out = frame.clone();
    rotate_frame(basis, angles.as_slice(), &mut out);
    out.validate(FRAME_LOOSE_TOL)?;
    Ok(out)
}

/// Channels with `m` Kraus operators on a `d`-dimensional space, reached from
/// the identity frame by angle-parameterized transformations.
#[derive(Clone, Debug)]
pub struct ChannelAnsatz {
    d: usize,
    m: usize,
    basis: GeneratorBasis,
}

impl ChannelAnsatz {
    pub fn new(d: usize, m: usize) -> Result<Self> {
        identity_frame(d, m)?;
        let dk = 2 * m * d;
        if dk < 4 {
            return Err(Error::BadSymplecticDimension { got: dk, min: 4 });
        }
        Ok(Self { d, m, basis: generator_basis(dk)? })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn count(&self) -> usize {
        self.m
    }

    /// Number of angles, `(m·d)² - 1`.
    pub fn angle_count(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &GeneratorBasis {
        &self.basis
    }

    pub fn frame(&self, angles: &AngleVector) -> Result<KrausFrame> {
        apply_angles(&self.basis, angles, &identity_frame(self.d, self.m)?)
    }

    pub fn channel(&self, angles: &AngleVector) -> Result<KrausSet> {
        frame_to_kraus(&self.frame(angles)?)
    }

    /// Same as [`channel`](Self::channel) without the frame invariant checks.
    /// The caller guarantees `angles.len() == self.angle_count()`.
    pub(crate) fn channel_unchecked(&self, angles: &[f64]) -> KrausSet {
        debug_assert_eq!(angles.len(), self.angle_count());
        let mut frame = identity_frame(self.d, self.m).expect("validated in new");
        rotate_frame(&self.basis, angles, &mut frame);
        relabel_to_kraus(&frame)
    }
}

/// `E_θ = 𝓜(M_θ K_I)`: the channel reached from the identity frame.
pub fn channel_from_angles(d: usize, m: usize, angles: &AngleVector) -> Result<KrausSet> {
    let ansatz = ChannelAnsatz::new(d, m)?;
    if angles.len() != ansatz.angle_count() {
        return Err(Error::AngleCount { expected: ansatz.angle_count(), found: angles.len() });
    }
    ansatz.channel(angles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{completeness_gram, kraus_to_frame};
    use crate::linalg::{matrix_exp_oracle, ComplexMatrix};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn basis_counts() {
        assert_eq!(generator_basis(4).unwrap().len(), 3);
        assert_eq!(generator_basis(16).unwrap().len(), 63);
        assert!(generator_basis(2).is_err());
        assert!(generator_basis(5).is_err());
        for (d, m) in [(2, 1), (2, 2), (2, 4), (4, 1)] {
            assert_eq!(ChannelAnsatz::new(d, m).unwrap().angle_count(), (m * d) * (m * d) - 1);
        }
    }

    #[test]
    fn generators_satisfy_algebra() {
        for dk in [4, 8, 16] {
            let s = build_symplectic_form(dk).unwrap();
            let s = s.matrix();
            for g in generator_basis(dk).unwrap().generators() {
                let j = g.matrix();
                assert_eq!(j.transpose(), j.scale(-1.0));
                assert!((&(s * &j) - &(&j * s)).max_abs() <= 1e-12);
                assert!((&s.transpose() * &j).trace().abs() <= 1e-12);
                let j2 = &j * &j;
                assert!((&(&j2 * &j) + &j).max_abs() <= 1e-10);
                let p = g.projector();
                assert!(p.max_abs_diff(&j2.scale(-1.0)) == 0.0);
                assert!((&p * &p).max_abs_diff(&p) <= 1e-10);
                assert!(Generator::from_matrix(j).is_ok());
            }
        }
    }

    #[test]
    fn from_matrix_rejects_phase_and_symmetric() {
        // S itself commutes with S but is the excluded global-phase direction
        let s = build_symplectic_form(4).unwrap().matrix().clone();
        assert!(Generator::from_matrix(s).is_err());
        let mut sym = RealMatrix::zeros(4, 4);
        sym.set(0, 1, 1.0);
        sym.set(1, 0, 1.0);
        assert!(Generator::from_matrix(sym).is_err());
    }

    #[test]
    fn transform_at_zero_and_full_turn() {
        for g in generator_basis(8).unwrap().generators() {
            assert_eq!(finite_transform(g, 0.0), RealMatrix::identity(8));
            assert!(finite_transform(g, 2.0 * PI).max_abs_diff(&RealMatrix::identity(8)) <= 1e-12);
        }
    }

    #[test]
    fn transform_matches_series_and_is_orthosymplectic() {
        let s = build_symplectic_form(16).unwrap();
        let s = s.matrix();
        for g in generator_basis(16).unwrap().generators() {
            for theta in [0.1, 1.0, PI, 5.0] {
                let m = finite_transform(g, theta);
                let oracle = matrix_exp_oracle(&g.matrix(), theta).unwrap();
                assert!(m.max_abs_diff(&oracle) <= 1e-10);
                assert!((&m.transpose() * &m).max_abs_diff(&RealMatrix::identity(16)) <= 1e-10);
                assert!((&(&m.transpose() * s) * &m).max_abs_diff(s) <= 1e-10);
            }
        }
    }

    #[test]
    fn one_parameter_subgroup() {
        for g in generator_basis(8).unwrap().generators() {
            let lhs = &finite_transform(g, 0.4) * &finite_transform(g, 1.9);
            assert!(lhs.max_abs_diff(&finite_transform(g, 2.3)) <= 1e-10);
        }
    }

    #[test]
    fn brackets_commute_with_s() {
        let s = build_symplectic_form(8).unwrap();
        let s = s.matrix();
        let dense: Vec<_> = generator_basis(8).unwrap().generators().iter().map(Generator::matrix).collect();
        for a in &dense {
            for b in &dense {
                let bracket = &(a * b) - &(b * a);
                assert!((&(s * &bracket) - &(&bracket * s)).max_abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn zero_angles_leave_frame_unchanged() {
        let basis = generator_basis(16).unwrap();
        let f = identity_frame(2, 4).unwrap();
        assert_eq!(apply_angles(&basis, &AngleVector::zeros(63), &f).unwrap(), f);
    }

    #[test]
    fn single_angle_keeps_gram_identity() {
        let basis = generator_basis(16).unwrap();
        let f = identity_frame(2, 4).unwrap();
        for a in 0..basis.len() {
            let mut angles = vec![0.0; basis.len()];
            angles[a] = 0.83;
            let out = apply_angles(&basis, &AngleVector::new(angles).unwrap(), &f).unwrap();
            assert!(completeness_gram(&out).max_abs_diff(&ComplexMatrix::identity(2)) <= 1e-8);
        }
    }

    #[test]
    fn sparse_rotation_matches_dense_product() {
        let basis = generator_basis(8).unwrap();
        let angles: Vec<f64> = (0..basis.len()).map(|a| 0.3 * a as f64 - 1.1).collect();
        let f = identity_frame(2, 2).unwrap();
        let out = apply_angles(&basis, &AngleVector::new(angles.clone()).unwrap(), &f).unwrap();
        let mut m = RealMatrix::identity(8);
        for (g, &t) in basis.generators().iter().zip(&angles) {
            m = &finite_transform(g, t) * &m;
        }
        for (v, w) in f.vectors().iter().zip(out.vectors()) {
            let expected = m.mul_vec(v);
            let dev = expected.iter().zip(w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(dev < 1e-13);
        }
    }

    #[test]
    fn pauli_x_direction() {
        // first generator for N = 2 is i·X; exp(π/2 · iX) = iX
        let mut angles = vec![0.0; 3];
        angles[0] = FRAC_PI_2;
        let k = channel_from_angles(2, 1, &AngleVector::new(angles).unwrap()).unwrap();
        let u = &k.operators()[0];
        let ix = ComplexMatrix::from_rows(&[&[(0.0, 0.0), (0.0, 1.0)], &[(0.0, 1.0), (0.0, 0.0)]]);
        assert!(u.max_abs_diff(&ix) < 1e-15);
        // X|0⟩⟨0|X = |1⟩⟨1|
        let rho = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let out = &(u * &rho) * &u.dagger();
        assert!(out.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn zero_angles_give_identity_channel() {
        let k = channel_from_angles(2, 4, &AngleVector::zeros(63)).unwrap();
        assert_eq!(k, KrausSet::identity(2, 4).unwrap());
        assert_eq!(kraus_to_frame(&k).unwrap(), identity_frame(2, 4).unwrap());
    }

    #[test]
    fn angle_count_mismatch() {
        assert!(matches!(
            channel_from_angles(2, 4, &AngleVector::zeros(3)),
            Err(Error::AngleCount { expected: 63, found: 3 })
        ));
        let basis = generator_basis(16).unwrap();
        assert!(apply_angles(&basis, &AngleVector::zeros(62), &identity_frame(2, 4).unwrap()).is_err());
        assert!(AngleVector::new(vec![f64::NAN]).is_err());
    }
}
