//! Finite graphs of groups: labels, validation, collapse, refinement and
//! the predicates used on JSJ-type splittings.

mod collapse;
mod equivalent;
mod graph;
mod label;
mod predicates;
mod refine;


pub use collapse::{collapse, fundamental_presentation, fundamental_presentation_with_layout, subgraph, PresentationLayout};
pub use equivalent::{edge_span_index, equivalent};
pub use graph::{
    check_map, relations_hold, require_valid, validate, Diagnostic, DiagnosticKind, Edge, End, GraphOfGroups, Severity,
    Vertex,
};
pub use label::{express, injective, surjective, Element, GroupLabel, TriState, IDENTITY_TOKEN};
pub use predicates::{end_surjective, find_redundant_vertices, is_minimal, is_reduced};
pub use refine::{collapse_refinement, refine, trivial_amalgam, Attachment, Marking, RefinementData};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GogError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("group {0} has no finite presentation")]
    Unpresentable(String),
    #[error("attachment undecidable: {0}")]
    AttachmentUndecidable(String),
    #[error("attachment failed: {0}")]
    AttachmentFailed(String),
    #[error("invalid marking: {0}")]
    InvalidMarking(String),
}

impl GogError {
    pub fn code(&self) -> &'static str {
        match self {
            GogError::InvalidInput(_) => "INVALID_INPUT",
            GogError::Unpresentable(_) => "UNPRESENTABLE",
            GogError::AttachmentUndecidable(_) => "ATTACHMENT_UNDECIDABLE",
            GogError::AttachmentFailed(_) => "ATTACHMENT_FAILED",
            GogError::InvalidMarking(_) => "INVALID_MARKING",
        }
    }
}
