//! Exact computation of how much a Boolean function of uniform bits reveals
//! about a BSC-corrupted copy of those bits.
//!
//! The crate covers explicit truth tables and their information measures,
//! lexicographic compressions and the compressed family `S_n`, the lex-set
//! functional `T_alpha` evaluated at dyadic points, the recursive chord
//! check that certifies `T_alpha(p) >= f(p) H(alpha)`, and drivers that
//! assemble these into verification reports.

pub mod chordcheck;
pub mod compression;
pub mod entropy;
pub mod error;
pub mod format;
pub mod infomeasure;
pub mod talpha;
pub mod table;
pub mod verify;

pub use chordcheck::{check_chord, sweep, test_inequality, ChordCertificate, ChordRecord, ChordStatus};
pub use compression::{
    compress, enumerate_sn, is_compressed, section, two_compress_fixpoint, CoordSet,
    DominancePoset,
};
pub use entropy::{binary_entropy, entropy_f};
pub use error::{Error, Result};
pub use infomeasure::{
    cond_entropy, edge_boundary, mutual_info, mutual_info_single, posterior_naive,
    posterior_transform, sum_single_mi, PosteriorField,
};
pub use table::{initial_segment, is_lex, lex_of, ChannelParam, LexSpec, TruthTable};
pub use talpha::{t_alpha, t_alpha_dense, takagi};
pub use verify::{Outcome, VerificationReport};
