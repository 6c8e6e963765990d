//! The encodings themselves: one enum across all codecs, plus the bit-exact
//! serialization that makes the length accounting honest.  Every payload
//! field is a minimal-width integer; the widths come from a [`Layout`]
//! computed per transcript (candidate count, group order, divisor-list
//! lengths).  ⊥ is the one-bit codeword `0`; every other codeword starts
//! with a `1` tag bit.

use serde::{Deserialize, Serialize};

use crate::algebra::ceil_log2;
use crate::error::Error;
use crate::Result;

/// A codec output.  Gate indices are candidate ordinals: positions in the
/// transcript's merged equality/DDH/DL query sequence.  Divisor indices are
/// 1-based, matching the paper's p_ℓ convention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    Bot,
    Dl {
        ordinal: u64,
    },
    Mdl {
        ordinals: Vec<u64>,
    },
    GapDl {
        ordinal: u64,
        root_bit: bool,
    },
    GapCdh {
        ordinal: u64,
        revealed: u64,
        guess_bit: bool,
    },
    Omdl {
        ordinals: Vec<u64>,
        dl_answers: Vec<u64>,
        reveals: Vec<u64>,
    },
    Order {
        ordinal: u64,
        divisor_index: u64,
    },
    RsaOrder {
        ordinals: Vec<u64>,
        divisor_indices: (u64, u64),
    },
}

/// Variant selector a deserializer needs before any payload bits make
/// sense: vector lengths are configuration, not data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Dl,
    Mdl { m: usize },
    GapDl,
    GapCdh,
    Omdl { n: usize, q: usize, reveals: usize },
    Order,
    Rsa { collisions: usize },
}

/// Field widths for one transcript's codewords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    ordinal_bits: u32,
    exponent_bits: u32,
    divisor_bits: Vec<u32>,
}

fn width_for(count: u64) -> u32 {
    ceil_log2(count.max(1))
}

impl Layout {
    /// `candidates` is the transcript's merged query count; ordinals index
    /// into it.
    pub fn new(candidates: u64) -> Self {
        Self { ordinal_bits: width_for(candidates), exponent_bits: 0, divisor_bits: Vec::new() }
    }

    /// Enables exponent fields (revealed values, DL answers) mod `p`.
    pub fn with_modulus(mut self, p: u64) -> Self {
        self.exponent_bits = width_for(p);
        self
    }

    /// Enables divisor-index fields, one per payload index in order.
    pub fn with_divisor_lists(mut self, lens: &[u64]) -> Self {
        self.divisor_bits = lens.iter().map(|&l| width_for(l)).collect();
        self
    }

    pub fn ordinal_bits(&self) -> u32 {
        self.ordinal_bits
    }
}

impl Encoding {
    pub fn is_bot(&self) -> bool {
        matches!(self, Encoding::Bot)
    }

    /// Exact codeword length in bits under `layout`.
    pub fn bit_length(&self, layout: &Layout) -> u64 {
        let ord = layout.ordinal_bits as u64;
        let exp = layout.exponent_bits as u64;
        1 + match self {
            Encoding::Bot => 0,
            Encoding::Dl { .. } => ord,
            Encoding::Mdl { ordinals } => ordinals.len() as u64 * ord,
            Encoding::GapDl { .. } => ord + 1,
            Encoding::GapCdh { .. } => ord + exp + 1,
            Encoding::Omdl { ordinals, dl_answers, reveals } => {
                (ordinals.len() as u64) * ord + (dl_answers.len() + reveals.len()) as u64 * exp
            }
            Encoding::Order { .. } => ord + layout.divisor_bits[0] as u64,
            Encoding::RsaOrder { ordinals, .. } => {
                ordinals.len() as u64 * ord
                    + layout.divisor_bits[0] as u64
                    + layout.divisor_bits[1] as u64
            }
        }
    }

    /// Serialized codeword and its exact bit count.
    pub fn to_bits(&self, layout: &Layout) -> (Vec<u8>, u64) {
        let mut w = BitWriter::new();
        w.push(u64::from(!self.is_bot()), 1);
        match self {
            Encoding::Bot => {}
            Encoding::Dl { ordinal } => w.push(*ordinal, layout.ordinal_bits),
            Encoding::Mdl { ordinals } => {
                for &o in ordinals {
                    w.push(o, layout.ordinal_bits);
                }
            }
            Encoding::GapDl { ordinal, root_bit } => {
                w.push(*ordinal, layout.ordinal_bits);
                w.push(u64::from(*root_bit), 1);
            }
            Encoding::GapCdh { ordinal, revealed, guess_bit } => {
                w.push(*ordinal, layout.ordinal_bits);
                w.push(*revealed, layout.exponent_bits);
                w.push(u64::from(*guess_bit), 1);
            }
            Encoding::Omdl { ordinals, dl_answers, reveals } => {
                for &o in ordinals {
                    w.push(o, layout.ordinal_bits);
                }
                for &z in dl_answers {
                    w.push(z, layout.exponent_bits);
                }
                for &v in reveals {
                    w.push(v, layout.exponent_bits);
                }
            }
            Encoding::Order { ordinal, divisor_index } => {
                w.push(*ordinal, layout.ordinal_bits);
                w.push(divisor_index - 1, layout.divisor_bits[0]);
            }
            Encoding::RsaOrder { ordinals, divisor_indices } => {
                for &o in ordinals {
                    w.push(o, layout.ordinal_bits);
                }
                w.push(divisor_indices.0 - 1, layout.divisor_bits[0]);
                w.push(divisor_indices.1 - 1, layout.divisor_bits[1]);
            }
        }
        w.finish()
    }

    pub fn from_bits(bytes: &[u8], shape: Shape, layout: &Layout) -> Result<Encoding> {
        let mut r = BitReader::new(bytes);
        if r.take(1)? == 0 {
            return Ok(Encoding::Bot);
        }
        let enc = match shape {
            Shape::Dl => Encoding::Dl { ordinal: r.take(layout.ordinal_bits)? },
            Shape::Mdl { m } => Encoding::Mdl {
                ordinals: (0..m).map(|_| r.take(layout.ordinal_bits)).collect::<Result<_>>()?,
            },
            Shape::GapDl => Encoding::GapDl {
                ordinal: r.take(layout.ordinal_bits)?,
                root_bit: r.take(1)? == 1,
            },
            Shape::GapCdh => Encoding::GapCdh {
                ordinal: r.take(layout.ordinal_bits)?,
                revealed: r.take(layout.exponent_bits)?,
                guess_bit: r.take(1)? == 1,
            },
            Shape::Omdl { n, q, reveals } => Encoding::Omdl {
                ordinals: (0..n).map(|_| r.take(layout.ordinal_bits)).collect::<Result<_>>()?,
                dl_answers: (0..q).map(|_| r.take(layout.exponent_bits)).collect::<Result<_>>()?,
                reveals: (0..reveals)
                    .map(|_| r.take(layout.exponent_bits))
                    .collect::<Result<_>>()?,
            },
            Shape::Order => Encoding::Order {
                ordinal: r.take(layout.ordinal_bits)?,
                divisor_index: r.take(layout.divisor_bits[0])? + 1,
            },
            Shape::Rsa { collisions } => Encoding::RsaOrder {
                ordinals: (0..collisions)
                    .map(|_| r.take(layout.ordinal_bits))
                    .collect::<Result<_>>()?,
                divisor_indices: (
                    r.take(layout.divisor_bits[0])? + 1,
                    r.take(layout.divisor_bits[1])? + 1,
                ),
            },
        };
        Ok(enc)
    }
}

/// MSB-first bit packer.
pub struct BitWriter {
    bytes: Vec<u8>,
    bits: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self { bytes: Vec::new(), bits: 0 }
    }

    pub fn push(&mut self, value: u64, width: u32) {
        assert!(width <= 64, "contract violation: field width above 64 bits");
        assert!(
            width == 64 || value < (1u64 << width),
            "contract violation: value {value} does not fit in {width} bits"
        );
        for i in (0..width).rev() {
            let bit = (value >> i) & 1;
            if self.bits % 8 == 0 {
                self.bytes.push(0);
            }
            let last = self.bytes.last_mut().unwrap();
            *last |= (bit as u8) << (7 - (self.bits % 8));
            self.bits += 1;
        }
    }

    pub fn finish(self) -> (Vec<u8>, u64) {
        (self.bytes, self.bits)
    }
}

/// MSB-first bit reader; runs past the end only with an error.
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: u64,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub fn take(&mut self, width: u32) -> Result<u64> {
        let mut v = 0u64;
        for _ in 0..width {
            let byte = self
                .bytes
                .get((self.pos / 8) as usize)
                .ok_or_else(|| Error::DecodeFailure("codeword ran out of bits".into()))?;
            let bit = (byte >> (7 - (self.pos % 8))) & 1;
            v = (v << 1) | bit as u64;
            self.pos += 1;
        }
        Ok(v)
    }
}
