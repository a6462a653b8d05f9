use std::fmt;

/// Where a codeword came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodewordKind {
    High,
    Low,
    EscapeResidual,
    RescaleBit,
    Uncompressed,
    Flush,
    TailAccumulator,
}

/// A variable-length bit string.
///
/// `bits` holds the code right-aligned: the bit that enters the stream first
/// is bit `len - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Codeword {
    pub bits: u64,
    pub len: u8,
    pub kind: CodewordKind,
}

impl Codeword {
    pub const MAX_LEN: u32 = 64;

    /// # Panics
    /// If `len` is outside `1..=64` or `bits` has bits above `len`.
    pub fn new(bits: u64, len: u32, kind: CodewordKind) -> Self {
        assert!((1..=Self::MAX_LEN).contains(&len), "codeword length {len}");
        assert!(
            len == 64 || bits >> len == 0,
            "{bits:#x} wider than {len} bits"
        );
        Self {
            bits,
            len: len as u8,
            kind,
        }
    }

    pub fn len(&self) -> u32 {
        self.len as u32
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn with_kind(mut self, kind: CodewordKind) -> Self {
        self.kind = kind;
        self
    }

    /// Bits as a `0`/`1` string, first-emitted bit leftmost.
    pub fn to_bit_string(&self) -> String {
        (0..self.len())
            .rev()
            .map(|i| if self.bits >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Verilog-style `<len>'h<hex>` notation.
    pub fn to_verilog(&self) -> String {
        format!("{}'h{:X}", self.len, self.bits)
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self.kind, self.to_verilog())
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_verilog())
    }
}
