use crate::{Error, Result};

/// A named tensor factor with its Hilbert-space dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsystemLabel {
    name: String,
    dim: usize,
}

impl SubsystemLabel {
    pub fn new(name: impl Into<String>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self { name: name.into(), dim })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl std::fmt::Display for SubsystemLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.name, self.dim)
    }
}
