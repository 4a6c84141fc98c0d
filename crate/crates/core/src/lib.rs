//! Geometric parameterization of CPTP quantum channels on the Kraus sphere,
//! and gradient-based learning of quasi-inverse channels.
//!
//! A channel with `m` Kraus operators on a `d`-dimensional space is a
//! [`KrausFrame`]: `d` unit vectors in `R^{2md}` that are mutually orthogonal
//! and symplectically orthogonal. Orthogonal-symplectic rotations generated by
//! [`generator_basis`] move frames without leaving the set of valid channels,
//! so every angle vector names a CPTP map ([`channel_from_angles`]).
//! [`learn_quasi_inverse`] descends the mean-fidelity loss over those angles.
//!
//! The `examples/` directory of this crate has one runnable program per
//! capability; the `kraus-sphere` binary wraps [`experiment`] for batch runs.

pub mod channels;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod lie;
pub mod linalg;
pub mod optimizer;
pub mod sampling;

pub use channels::{
    apply_channel, build_depolarizing, build_flip_channel, build_tensor_channel, ChannelKind, ChannelSpec,
};
pub use error::{Error, Result};
pub use geometry::{
    build_symplectic_form, completeness_gram, frame_to_kraus, identity_frame, kraus_to_frame, KrausFrame, KrausSet,
    SymplecticForm,
};
pub use lie::{
    apply_angles, channel_from_angles, finite_transform, generator_basis, AngleVector, ChannelAnsatz, Generator,
    GeneratorBasis,
};
pub use linalg::{hermitian_eig, matrix_exp_oracle, psd_sqrt, uhlmann_fidelity, ComplexMatrix, DensityMatrix, RealMatrix};
pub use optimizer::{
    average_fidelity, central_difference, dominant_kraus_report, learn_quasi_inverse, loss, Init, KrausReport,
    OptimizerConfig, QuasiInverseResult, RecoveryProblem, TrainingRecord,
};
pub use sampling::{sample_bloch_ball, sample_bures, sample_states, Measure, SampleConfig};
