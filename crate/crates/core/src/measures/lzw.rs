//! GIF-flavoured LZW over bytes.
//!
//! * 256 literal codes, `CLEAR = 256`, `END = 257`, first free code 258.
//! * Codes are written LSB-first. The width of each code is the bit length of
//!   the table size the encoder holds when it writes it (9 bits at 258
//!   entries, 10 at 512, ...), capped at 12. The decoder derives the same
//!   width from the number of codes read since the last `CLEAR`, so both
//!   sides agree without a lookahead rule.
//! * When the table reaches 4096 entries the encoder writes `CLEAR` and both
//!   sides reset. Every stream starts with `CLEAR` and ends with `END`.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub const CLEAR: u16 = 256;
pub const END: u16 = 257;
const FIRST_FREE: u32 = 258;
const MAX_WIDTH: u32 = 12;
const TABLE_LIMIT: u32 = 1 << MAX_WIDTH;

/// Width of the `n`-th code after a reset, given `n - 1` codes already written.
fn code_width(codes_since_clear: u32) -> u32 {
    let table = FIRST_FREE + codes_since_clear;
    (u32::BITS - table.leading_zeros()).clamp(9, MAX_WIDTH)
}

#[derive(Default)]
struct BitWriter {
    out: Vec<u8>,
    acc: u64,
    bits: u32,
}

impl BitWriter {
    fn push(&mut self, code: u16, width: u32) {
        self.acc |= (code as u64) << self.bits;
        self.bits += width;
        while self.bits >= 8 {
            self.out.push(self.acc as u8);
            self.acc >>= 8;
            self.bits -= 8;
        }
    }

    fn finish(mut self) -> Vec<u8> {
        if self.bits > 0 {
            self.out.push(self.acc as u8);
        }
        self.out
    }
}

struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
    acc: u64,
    bits: u32,
}

impl<'a> BitReader<'a> {
    fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0, acc: 0, bits: 0 }
    }

    fn read(&mut self, width: u32) -> Option<u16> {
        while self.bits < width {
            let byte = *self.data.get(self.pos)?;
            self.pos += 1;
            self.acc |= (byte as u64) << self.bits;
            self.bits += 8;
        }
        let code = (self.acc & ((1 << width) - 1)) as u16;
        self.acc >>= width;
        self.bits -= width;
        Some(code)
    }
}

pub fn encode(input: &[u8]) -> Result<Vec<u8>> {
    if input.is_empty() {
        return Err(Error::Parameter("LZW input must be non-empty".into()));
    }
    let mut writer = BitWriter::default();
    let mut table: HashMap<(u16, u8), u16> = HashMap::with_capacity(TABLE_LIMIT as usize);
    let mut next = FIRST_FREE;
    let mut written = 0u32;

    writer.push(CLEAR, code_width(0));
    let mut prefix = input[0] as u16;
    for &byte in &input[1..] {
        if let Some(&code) = table.get(&(prefix, byte)) {
            prefix = code;
            continue;
        }
        writer.push(prefix, code_width(written));
        written += 1;
        table.insert((prefix, byte), next as u16);
        next += 1;
        if next == TABLE_LIMIT {
            writer.push(CLEAR, code_width(written));
            table.clear();
            next = FIRST_FREE;
            written = 0;
        }
        prefix = byte as u16;
    }
    writer.push(prefix, code_width(written));
    written += 1;
    writer.push(END, code_width(written));
    Ok(writer.finish())
}

pub fn decode(stream: &[u8]) -> Result<Vec<u8>> {
    let mut reader = BitReader::new(stream);
    // Entry i >= 258 is (prefix code, last byte); literals are implicit.
    let mut table: Vec<(u16, u8)> = Vec::with_capacity(TABLE_LIMIT as usize);
    let mut out = Vec::new();
    let mut read = 0u32;
    let mut prev: Option<u16> = None;
    let mut scratch = Vec::new();

    let expand = |code: u16, table: &[(u16, u8)], scratch: &mut Vec<u8>| {
        scratch.clear();
        let mut c = code;
        while c >= FIRST_FREE as u16 {
            let (p, b) = table[(c as u32 - FIRST_FREE) as usize];
            scratch.push(b);
            c = p;
        }
        scratch.push(c as u8);
        scratch.reverse();
    };

    loop {
        let code = reader
            .read(code_width(read))
            .ok_or_else(|| Error::Malformed("LZW stream ended without END code".into()))?;
        match code {
            CLEAR => {
                table.clear();
                read = 0;
                prev = None;
                continue;
            }
            END => return Ok(out),
            _ => {}
        }
        read += 1;
        let next = FIRST_FREE + table.len() as u32;
        match prev {
            None => {
                if code >= FIRST_FREE as u16 {
                    return Err(Error::Malformed(format!("LZW code {code} before any table entry")));
                }
                out.push(code as u8);
            }
            Some(p) => {
                if (code as u32) < next {
                    expand(code, &table, &mut scratch);
                    if next < TABLE_LIMIT {
                        table.push((p, scratch[0]));
                    }
                } else if code as u32 == next {
                    expand(p, &table, &mut scratch);
                    let first = scratch[0];
                    scratch.push(first);
                    table.push((p, first));
                } else {
                    return Err(Error::Malformed(format!("LZW code {code} beyond table size {next}")));
                }
                out.extend_from_slice(&scratch);
            }
        }
        prev = Some(code);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn golden_abababa() {
        // Codes CLEAR, 'A', 'B', 258 (AB), 260 (ABA), END, all 9 bits wide,
        // packed LSB-first: derived by hand from the dictionary trace.
        let codes = [256u16, 65, 66, 258, 260, 257];
        let mut bits: Vec<bool> = Vec::new();
        for c in codes {
            for i in 0..9 {
                bits.push(c >> i & 1 == 1);
            }
        }
        let expected: Vec<u8> = bits
            .chunks(8)
            .map(|chunk| chunk.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | ((b as u8) << i)))
            .collect();
        assert_eq!(encode(b"ABABABA").unwrap(), expected);
        assert_eq!(decode(&expected).unwrap(), b"ABABABA");
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(encode(&[]), Err(Error::Parameter(_))));
    }

    #[test]
    fn truncated_stream_is_malformed() {
        let enc = encode(&[1, 2, 3, 4, 5, 6, 7, 8, 9]).unwrap();
        assert!(matches!(decode(&enc[..enc.len() - 3]), Err(Error::Malformed(_))));
    }

    #[test]
    fn repetitive_input_compresses_well() {
        let data = vec![42u8; 10_000];
        let enc = encode(&data).unwrap();
        assert!(enc.len() * 20 < data.len(), "{} bytes", enc.len());
        assert_eq!(decode(&enc).unwrap(), data);
    }

    #[test]
    fn long_inputs_cross_table_resets() {
        // Enough distinct pairs to fill the table several times.
        let data: Vec<u8> = (0..200_000u32).map(|i| (i.wrapping_mul(2_654_435_761) >> 13) as u8).collect();
        let enc = encode(&data).unwrap();
        assert_eq!(decode(&enc).unwrap(), data);
    }

    proptest! {
        #[test]
        fn round_trip(data in proptest::collection::vec(any::<u8>(), 1..4096)) {
            prop_assert_eq!(decode(&encode(&data).unwrap()).unwrap(), data);
        }

        #[test]
        fn round_trip_low_entropy(data in proptest::collection::vec(0u8..3, 1..20_000)) {
            prop_assert_eq!(decode(&encode(&data).unwrap()).unwrap(), data);
        }
    }
}
