//! Pattern-based repair of common formatting defects.
//!
//! Each rule targets a set of diagnostic categories and only runs on a file
//! whose analysis contains one of them. The exception is encoding
//! normalization, which is file-scoped and always safe.

mod apply;
mod names;
mod rules;

pub use apply::{
    apply_rules, fix_file, replay_changes, ChangeRecord, FixOptions, FixOutcome, FixedFile,
};
pub use names::{
    extract_feature_name, resolve_collisions, resolve_collisions_with, sanitize_identifier,
    RenameMap, Unfixable,
};
pub use rules::{builtin_rules, FixRule, RuleId, RuleScope, UnknownRule};
