//! Prioritised default logic over a finite propositional vocabulary, its
//! translation into structured argumentation, and differential checks
//! between the two.

pub mod args;
pub mod dung;
pub mod fixtures;
pub mod format;
pub mod logic;
pub mod pdl;
pub mod pdt;
pub mod random;
pub mod sp;
pub mod verify;

use crate::args::ArgError;
use crate::format::{FormatError, InputError};
use crate::logic::LogicError;
use crate::pdt::{CapacityError, InvalidTheory, OrderError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Invalid(#[from] InvalidTheory),
    #[error(transparent)]
    Syntax(#[from] FormatError),
}

impl Error {
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity(_))
    }
}

impl From<ArgError> for Error {
    fn from(e: ArgError) -> Self {
        match e {
            ArgError::Capacity(c) => Error::Capacity(c),
            ArgError::Logic(l) => Error::Logic(l),
        }
    }
}

impl From<InputError> for Error {
    fn from(e: InputError) -> Self {
        match e {
            InputError::Syntax(s) => Error::Syntax(s),
            InputError::Invalid(i) => Error::Invalid(i),
        }
    }
}
