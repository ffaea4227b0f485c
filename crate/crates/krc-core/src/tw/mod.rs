//! Distance-labeling algorithms on tree decompositions: the exact program
//! and the approximation scheme, both supporting irrelevant vertices.

pub mod approx;
pub mod engine;
pub mod exact;
pub mod labels;

pub use approx::{
    approx_cw, approx_tw, approx_tw_with, ApproxCenter, ApproxConfig, ApproxMode, ApproxOutcome, ApproxReport,
    CertificateMethod, CwApproxConfig, CwApproxReport, NoCenterCertificate, RunInfo,
};
pub use engine::{run_engine, EngineConfig, EngineOutcome, EngineStats, JoinMode, INF_COST};
pub use exact::{run_exact, solve_tw_auto, solve_tw_exact, solve_tw_exact_with, tw_min_centers, ExactOptions};
pub use labels::{
    build_delta_labels, build_delta_labels_with_floor, delta_for_height, delta_labels, DeltaLabelSet, DeltaSpace,
    ExactLabels, LabelSpace,
};
