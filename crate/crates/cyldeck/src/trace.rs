//! Pipeline traces: an ordered list of (operation, parameters, resulting
//! diagram hash) enabling golden-file regression of deformation sequences.
//!
//! The hash is FNV-1a over the canonical encoding, so isomorphic results
//! hash identically regardless of labels or word anchors.

use crate::canonical::canonical_encoding;
use crate::diagram::CylinderDiagram;
use std::fmt;

/// Stable 64-bit hash of the diagram's canonical form.
pub fn diagram_hash(diagram: &CylinderDiagram) -> u64 {
    let enc = canonical_encoding(diagram);
    let mut h: u64 = 0xcbf29ce484222325;
    for b in enc.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[derive(Clone, Debug)]
pub struct TraceStep {
    pub operation: String,
    pub parameters: String,
    pub hash: u64,
}

#[derive(Clone, Debug, Default)]
pub struct PipelineTrace {
    pub steps: Vec<TraceStep>,
}

impl PipelineTrace {
    pub fn new() -> Self {
        PipelineTrace { steps: Vec::new() }
    }

    pub fn record(&mut self, operation: &str, parameters: &str, diagram: &CylinderDiagram) {
        self.steps.push(TraceStep {
            operation: operation.to_string(),
            parameters: parameters.to_string(),
            hash: diagram_hash(diagram),
        });
    }
}

impl fmt::Display for PipelineTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "step {i}: {}({}) -> {:016x}", s.operation, s.parameters, s.hash)?;
        }
        Ok(())
    }
}
