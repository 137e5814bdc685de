//! SHA3-256 digests and the quad-to-angle encoding.

use alloc::string::String;
use core::f64::consts::FRAC_PI_8;
use core::fmt;

use sha3::{Digest, Sha3_256};

use crate::error::{Error, Result};

/// Bytes in a SHA3-256 digest.
pub const DIGEST_LEN: usize = 32;

/// One rotation angle per 4-bit quad of a 256-bit digest.
pub const ANGLE_COUNT: usize = 64;

/// Angle granularity: quad value k encodes k·π/8.
pub const ANGLE_STEP: f64 = FRAC_PI_8;

/// A 256-bit SHA3 digest. Renders as 64 lowercase hex characters.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Digest256(pub [u8; DIGEST_LEN]);

impl Digest256 {
    pub const ZERO: Digest256 = Digest256([0; DIGEST_LEN]);

    pub fn as_bytes(&self) -> &[u8; DIGEST_LEN] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    /// Parses exactly 64 hex characters. Uppercase is accepted on input.
    pub fn from_hex(s: &str) -> Result<Self> {
        if s.len() != 2 * DIGEST_LEN {
            return Err(Error::InvalidHex("expected 64 hex characters"));
        }
        let mut bytes = [0u8; DIGEST_LEN];
        hex::decode_to_slice(s, &mut bytes).map_err(|_| Error::InvalidHex("non-hex character"))?;
        Ok(Digest256(bytes))
    }

    /// Number of leading `'0'` characters in the hex rendering.
    pub fn leading_zero_nibbles(&self) -> u32 {
        let mut count = 0;
        for &b in &self.0 {
            if b == 0 {
                count += 2;
            } else {
                if b >> 4 == 0 {
                    count += 1;
                }
                break;
            }
        }
        count
    }
}

impl fmt::Display for Digest256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Digest256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest256({self})")
    }
}

impl From<[u8; DIGEST_LEN]> for Digest256 {
    fn from(bytes: [u8; DIGEST_LEN]) -> Self {
        Digest256(bytes)
    }
}

/// FIPS 202 SHA3-256.
pub fn sha3_256(data: &[u8]) -> Digest256 {
    Digest256(Sha3_256::digest(data).into())
}

/// The 64 circuit parameters derived from a digest.
///
/// Stored as quad values (0..=15) so every angle stays an exact multiple of π/8.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct AngleVector {
    quads: [u8; ANGLE_COUNT],
}

impl AngleVector {
    pub fn from_quads(quads: [u8; ANGLE_COUNT]) -> Result<Self> {
        if let Some(&bad) = quads.iter().find(|&&q| q > 15) {
            return Err(Error::QuadOutOfRange(bad));
        }
        Ok(AngleVector { quads })
    }

    pub fn quads(&self) -> &[u8; ANGLE_COUNT] {
        &self.quads
    }

    /// Angle `i` in radians.
    pub fn angle(&self, i: usize) -> f64 {
        f64::from(self.quads[i]) * ANGLE_STEP
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.quads.iter().map(|&q| f64::from(q) * ANGLE_STEP)
    }

    pub fn len(&self) -> usize {
        ANGLE_COUNT
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Debug for AngleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.quads.iter()).finish()
    }
}

/// Splits a digest into quads, high nibble of each byte first, and maps quad k to k·π/8.
pub fn encode_angles(digest: &Digest256) -> AngleVector {
    let mut quads = [0u8; ANGLE_COUNT];
    for (i, b) in digest.0.iter().enumerate() {
        quads[2 * i] = b >> 4;
        quads[2 * i + 1] = b & 0x0f;
    }
    AngleVector { quads }
}
