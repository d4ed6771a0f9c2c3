use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A formula was evaluated outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("topology error: {0}")]
    Topology(String),

    #[error("RU {0} is not assigned to any cloud")]
    Unassigned(usize),

    #[error("no RU is assigned; the min-max objective is undefined")]
    NoAssignedRu,

    /// The exhaustive solver refuses instances whose enumeration space is too large.
    #[error("search space of {} assignments exceeds the limit of {limit}", space(*size))]
    SearchSpace {
        /// Saturates at `u128::MAX`.
        size: u128,
        limit: u128,
    },

    #[error("placement failed for seed {seed}: {reason}")]
    Placement { seed: u64, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("toml decode: {0}")]
    TomlDecode(#[from] toml::de::Error),

    #[error("toml encode: {0}")]
    TomlEncode(#[from] toml::ser::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn space(size: u128) -> String {
    if size == u128::MAX {
        "at least 2^128".into()
    } else {
        size.to_string()
    }
}
