//! Synchronous multi-tape automata, automatic presentations of Cayley graphs,
//! the transducers built from them, and their growth, Følner and average
//! length characteristics, checked against exact group arithmetic.

pub mod automata;
pub mod characteristics;
pub mod error;
pub mod oracles;
pub mod presentations;
pub mod series;
pub mod transducer;

pub use automata::{Alphabet, Symbol, SyncAutomaton, TapeVector, Word, WordTuple, PAD};
pub use error::{Error, Result};
pub use presentations::GraphPresentation;
pub use transducer::{ClassTTransducer, Translation};
