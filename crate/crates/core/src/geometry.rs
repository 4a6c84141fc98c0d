//! Kraus operator sets and their Kraus frames.
//!
//! A channel on a `d`-dimensional space with `m` Kraus operators is encoded as
//! `d` real vectors of length `2·m·d`, one per column index `i`. Vector `v_i`
//! lists, for `α = 1..m` then `k = 1..d`, the pair `(Re K^α_{ki}, Im K^α_{ki})`.
//! With that layout the completeness relation `Σ K†K = I` becomes
//! `v_i·v_j + i(v_i·S v_j) = δ_ij` where `S = I ⊗ [[0, 1], [-1, 0]]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, RealMatrix};

/// Completeness tolerance for a [`KrausSet`] entering [`kraus_to_frame`].
pub const COMPLETENESS_TOL: f64 = 1e-8;
/// Frame tolerance for [`KrausFrame::validate`] at construction.
pub const FRAME_TOL: f64 = 1e-8;
/// Looser frame tolerance accepted by [`frame_to_kraus`].
pub const FRAME_LOOSE_TOL: f64 = 1e-6;

/// An ordered set of `m` Kraus operators, each `d×d`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    d: usize,
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    /// Checks shapes only. Completeness is checked by consumers that need it.
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators.first().ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let d = first.rows();
        for op in &operators {
            if op.rows() != op.cols() {
                return Err(Error::NotSquare { rows: op.rows(), cols: op.cols() });
            }
            if op.rows() != d {
                return Err(Error::DimensionMismatch { expected: d, found: op.rows() });
            }
        }
        if operators.len() > d * d {
            return Err(Error::BadKrausCount { m: operators.len(), max: d * d });
        }
        Ok(Self { d, operators })
    }

    /// `{I, 0, …, 0}` with `m` operators.
    pub fn identity(d: usize, m: usize) -> Result<Self> {
        check_count(d, m)?;
        let mut ops = vec![ComplexMatrix::zeros(d, d); m];
        ops[0] = ComplexMatrix::identity(d);
        Self::new(ops)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn count(&self) -> usize {
        self.operators.len()
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn into_operators(self) -> Vec<ComplexMatrix> {
        self.operators
    }

    /// `Σ (K^α)† K^α`.
    pub fn completeness_sum(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.d, self.d);
        for k in &self.operators {
            acc = &acc + &(&k.dagger() * k);
        }
        acc
    }

    /// Max entrywise deviation of `Σ K†K` from the identity.
    pub fn completeness_deviation(&self) -> f64 {
        self.completeness_sum().max_abs_diff(&ComplexMatrix::identity(self.d))
    }

    pub fn check_complete(&self, tol: f64) -> Result<()> {
        let deviation = self.completeness_deviation();
        if deviation > tol || deviation.is_nan() {
            return Err(Error::Incomplete { deviation });
        }
        Ok(())
    }

    pub fn to_json(&self) -> KrausSetJson {
        KrausSetJson {
            d: self.d,
            m: self.count(),
            operators: self.operators.iter().map(|op| op.entries().to_vec()).collect(),
        }
    }
}

fn check_count(d: usize, m: usize) -> Result<()> {
    if m == 0 || m > d * d {
        return Err(Error::BadKrausCount { m, max: d * d });
    }
    Ok(())
}

/// On-disk form of a [`KrausSet`]: each operator is a row-major list of `[re, im]` pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrausSetJson {
    pub d: usize,
    pub m: usize,
    pub operators: Vec<Vec<Complex64>>,
}

impl TryFrom<KrausSetJson> for KrausSet {
    type Error = Error;

    fn try_from(raw: KrausSetJson) -> Result<Self> {
        if raw.operators.len() != raw.m {
            return Err(Error::InvalidChannel(format!(
                "declared m = {} but {} operators present",
                raw.m,
                raw.operators.len()
            )));
        }
        let ops = raw
            .operators
            .into_iter()
            .map(|entries| ComplexMatrix::new(raw.d, raw.d, entries))
            .collect::<Result<Vec<_>>>()?;
        let set = KrausSet::new(ops)?;
        if set.dim() != raw.d {
            return Err(Error::DimensionMismatch { expected: raw.d, found: set.dim() });
        }
        Ok(set)
    }
}

impl Serialize for KrausSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for KrausSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = KrausSetJson::deserialize(deserializer)?;
        KrausSet::try_from(raw).map_err(serde::de::Error::custom)
    }
}

/// The real antisymmetric form `I_{d_k/2} ⊗ [[0, 1], [-1, 0]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticForm {
    matrix: RealMatrix,
}

impl SymplecticForm {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    /// `v · S w`, computed blockwise without forming `S`.
    pub fn pairing(v: &[f64], w: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), w.len());
        v.chunks_exact(2).zip(w.chunks_exact(2)).map(|(a, b)| a[0] * b[1] - a[1] * b[0]).sum()
    }
}

pub fn build_symplectic_form(dk: usize) -> Result<SymplecticForm> {
    if dk < 2 || !dk.is_multiple_of(2) {
        return Err(Error::BadSymplecticDimension { got: dk, min: 2 });
    }
    let mut matrix = RealMatrix::zeros(dk, dk);
    for b in 0..dk / 2 {
        matrix.set(2 * b, 2 * b + 1, 1.0);
        matrix.set(2 * b + 1, 2 * b, -1.0);
    }
    Ok(SymplecticForm { matrix })
}

/// `d` orthonormal, mutually symplectic-orthogonal real vectors of length `2·m·d`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausFrame {
    d: usize,
    m: usize,
    vectors: Vec<Vec<f64>>,
}

impl KrausFrame {
    /// Builds a frame and checks its invariants at `tol`.
    pub fn new(d: usize, m: usize, vectors: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let frame = Self::from_raw(d, m, vectors)?;
        frame.validate(tol)?;
        Ok(frame)
    }

    /// Builds a frame checking only its shape.
    pub fn from_raw(d: usize, m: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        check_count(d, m)?;
        if vectors.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: vectors.len() });
        }
        let dk = 2 * m * d;
        if let Some(v) = vectors.iter().find(|v| v.len() != dk) {
            return Err(Error::DimensionMismatch { expected: dk, found: v.len() });
        }
        if vectors.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { d, m, vectors })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn count(&self) -> usize {
        self.m
    }

    /// Length of each Kraus vector, `2·m·d`.
    pub fn vector_dim(&self) -> usize {
        2 * self.m * self.d
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub(crate) fn vectors_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.vectors
    }

    /// Largest violation over unit norm, Euclidean orthogonality and symplectic orthogonality.
    pub fn invariant_deviation(&self) -> f64 {
        completeness_gram(self).max_abs_diff(&ComplexMatrix::identity(self.d))
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let deviation = self.invariant_deviation();
        if deviation > tol || deviation.is_nan() {
            return Err(Error::InvalidFrame { deviation });
        }
        Ok(())
    }

    pub fn to_json(&self) -> KrausFrameJson {
        KrausFrameJson { d: self.d, m: self.m, vectors: self.vectors.clone() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrausFrameJson {
    pub d: usize,
    pub m: usize,
    pub vectors: Vec<Vec<f64>>,
}

impl Serialize for KrausFrame {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for KrausFrame {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = KrausFrameJson::deserialize(deserializer)?;
        KrausFrame::from_raw(raw.d, raw.m, raw.vectors).map_err(serde::de::Error::custom)
    }
}

#[inline]
fn slot(d: usize, alpha: usize, k: usize) -> usize {
    2 * (alpha * d + k)
}

pub fn kraus_to_frame(set: &KrausSet) -> Result<KrausFrame> {
    set.check_complete(COMPLETENESS_TOL)?;
    Ok(relabel_to_frame(set))
}

pub(crate) fn relabel_to_frame(set: &KrausSet) -> KrausFrame {
    let (d, m) = (set.dim(), set.count());
    let vectors = (0..d)
        .map(|i| {
            let mut v = vec![0.0; 2 * m * d];
            for (alpha, op) in set.operators().iter().enumerate() {
                for k in 0..d {
                    let z = op.get(k, i);
                    let s = slot(d, alpha, k);
                    v[s] = z.re;
                    v[s + 1] = z.im;
                }
            }
            v
        })
        .collect();
    KrausFrame { d, m, vectors }
}

pub fn frame_to_kraus(frame: &KrausFrame) -> Result<KrausSet> {
    frame.validate(FRAME_LOOSE_TOL)?;
    Ok(relabel_to_kraus(frame))
}

pub(crate) fn relabel_to_kraus(frame: &KrausFrame) -> KrausSet {
    let (d, m) = (frame.d, frame.m);
    let operators = (0..m)
        .map(|alpha| {
            ComplexMatrix::from_fn(d, d, |k, i| {
                let s = slot(d, alpha, k);
                let v = &frame.vectors[i];
                Complex64::new(v[s], v[s + 1])
            })
        })
        .collect();
    KrausSet { d, operators }
}

/// `G_ij = v_i·v_j + i(v_i·S v_j)`; equals `Σ K†K` of the frame's channel.
pub fn completeness_gram(frame: &KrausFrame) -> ComplexMatrix {
    let v = &frame.vectors;
    ComplexMatrix::from_fn(frame.d, frame.d, |i, j| {
        let dot: f64 = v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum();
        Complex64::new(dot, SymplecticForm::pairing(&v[i], &v[j]))
    })
}

/// Frame of the identity channel `{I, 0, …, 0}`.
pub fn identity_frame(d: usize, m: usize) -> Result<KrausFrame> {
    check_count(d, m)?;
    let dk = 2 * m * d;
    let vectors = (0..d)
        .map(|i| {
            let mut v = vec![0.0; dk];
            v[slot(d, 0, i)] = 1.0;
            v
        })
        .collect();
    Ok(KrausFrame { d, m, vectors })
}
