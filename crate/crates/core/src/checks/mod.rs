//! Structural checks on finite quotients: filtrations, self-similarity
//! certificates, fixed-point propagation and the related group-theoretic
//! properties.

mod filtration;
mod fpf;
mod gs;
mod similarity;
mod theorem1;
mod transfer;

pub use filtration::{
    check_filtration, power_filtration, AutRegime, CertificateReport, FactorGroup, Filtration,
    Verdict,
};
pub use fpf::{
    derived_length_survey, fpf_check, fpf_search, property_iv_check, SurveyLevel, SurveyRow,
    SurveyTable,
};
pub use gs::{frattini_rank, gs_check, gs_report, GsReport};
pub use similarity::{
    automorphisms_for, check_self_similarity, SimilarityStructure, ENUMERATION_CAP,
};
pub use theorem1::{theorem1_engine, LevelRecord, Theorem1Outcome, Theorem1Report, TrailEntry};
pub use transfer::{property_v_check, transfer_map, TransferReport, SUBGROUP_CAP};
