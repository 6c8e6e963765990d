//! Compression-style codecs: encode a winning run as a short pointer into
//! its own transcript, decode by replaying the algorithm without the
//! oracle.  The audit layer turns round-trip rates into incompressibility
//! bounds.

mod audit;
mod dl;
mod encoding;
mod games;
mod gap;
mod mdl;
mod omdl;
mod unknown_order;

pub use audit::{
    audit_compression, audit_root_repeated, AuditSpec, CodecReport, DynAlg, RootRepeatedKind,
};
pub use dl::{decode_dl, encode_dl};
pub use unknown_order::{
    decode_unknown_order, encode_unknown_order, nbit_primes, OrderMessage, OrderVariant,
};
pub use omdl::{decode_omdl, encode_omdl};
pub use gap::{decode_gap_cdh, decode_gap_dl, encode_gap_cdh, encode_gap_dl};
pub use encoding::{BitReader, BitWriter, Encoding, Layout, Shape};
pub use games::{
    CheckedDl, CheckedGapCdh, CheckedGapDl, CheckedMdl, CheckedOmdl, CheckedOrderClaim,
    CheckedRepeatSq, CheckedRoot,
};
pub use mdl::{decode_mdl, encode_mdl};
