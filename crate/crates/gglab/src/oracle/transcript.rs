//! Transcript records: the decoder-side view of a session.
//!
//! A transcript never contains hidden exponents.  Label records carry the
//! value the algorithm supplied (it chose it, so it is public); equality,
//! DDH and DL records carry the oracle's answer; challenge records only the
//! fresh wire id.  For unknown-order sessions the modulus itself is hidden
//! and `InstanceDesc::modulus` is `None`.

use serde::{Deserialize, Serialize};
use std::io::Write;

use super::{ProblemKind, WireId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    Label,
    GroupOp,
    Equality,
    Ddh,
    Dl,
    Chal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Add,
    Sub,
}

/// One gate or oracle query.  `inputs` holds wire ids, except for Label
/// where it holds the supplied bit pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateRecord {
    pub seq: u64,
    pub kind: GateKind,
    pub inputs: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sign: Option<Sign>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub output: Option<WireId>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub answer: Option<u64>,
}

/// How an input wire relates to the hidden instance: the generator holds
/// exponent one; instance wires hold hidden variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WireInit {
    One,
    Var(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDesc {
    pub problem: ProblemKind,
    /// `Some(N)` in known-order sessions; hidden otherwise.
    pub modulus: Option<u64>,
    /// Public bit bound n: the order is below 2^n.
    pub bit_length: u32,
    /// Hidden scalars the tracker must treat as variables.
    pub nvars: usize,
    /// Input wires, in wire-id order starting at 0.
    pub inputs: Vec<WireInit>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tallies {
    pub labelings: u64,
    pub group_ops: u64,
    pub equalities: u64,
    pub ddh_queries: u64,
    pub dl_queries: u64,
    pub chal_queries: u64,
}

impl Tallies {
    /// The metered cost T: labeling plus group-operation gates.
    pub fn element_ops(&self) -> u64 {
        self.labelings + self.group_ops
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub instance: InstanceDesc,
    pub records: Vec<GateRecord>,
    pub tallies: Tallies,
    pub wire_count: usize,
    pub truncated: bool,
    pub invalid: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub output: Option<serde_json::Value>,
}

impl Transcript {
    /// Line-delimited JSON: one header line with the instance description,
    /// one line per gate record, one trailer line with tallies and output.
    pub fn write_json_lines<W: Write>(&self, mut w: W) -> crate::Result<()> {
        #[derive(Serialize)]
        struct Header<'a> {
            instance: &'a InstanceDesc,
        }
        #[derive(Serialize)]
        struct Trailer<'a> {
            tallies: &'a Tallies,
            wire_count: usize,
            truncated: bool,
            invalid: bool,
            output: &'a Option<serde_json::Value>,
        }
        serde_json::to_writer(&mut w, &Header { instance: &self.instance })?;
        writeln!(w)?;
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            writeln!(w)?;
        }
        serde_json::to_writer(
            &mut w,
            &Trailer {
                tallies: &self.tallies,
                wire_count: self.wire_count,
                truncated: self.truncated,
                invalid: self.invalid,
                output: &self.output,
            },
        )?;
        writeln!(w)?;
        Ok(())
    }
}
