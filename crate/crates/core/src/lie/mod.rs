//! Explicit Lie-algebra embeddings and their certificates.

pub mod embeddings;
pub mod g2;
pub mod intertwiner;
pub mod so8;

pub use embeddings::{
    cross3, h_map, hat3, lift_g2, lift_gtilde, m_embed, sl3_embed, so6_to_so7, MVector, Sl3Param,
};
pub use g2::{certify_embeddings, g2_basis, EmbeddingCertificate, G2Basis, ReductivePair};
pub use intertwiner::{intertwiner_solve, IntertwinerSummary, Intertwiners};
pub use so8::{
    gamma_matrices, so7_canonical_basis, so8_intersection_report, spin7_basis, So8Report,
};
