//! Exact finite-length zero-error codes.
//!
//! Input blocks are confusable when some pair of admissible noise
//! patterns maps them to a common output; maximum independent sets of the
//! confusability graph are exactly the maximum zero-error codebooks.

mod codebook;
mod confusability;
mod maximin;
mod mis;
mod patterns;

pub use codebook::{
    codebook_from_json, codebook_to_json, decode_nse, decode_nss, max_codebook,
    repetition_codebook, verify_zero_error, Codebook, VerifyReport,
};
pub use confusability::{adjacent, build_confusability, ConfusabilityGraph};
pub use maximin::{
    c0_via_maximin, channel_joint_range, taxicab_partition, JointRange, MaximinPoint,
    TaxicabPartition,
};
pub use mis::{max_independent_set, MisResult};
pub use patterns::{
    enumerate_supports_from, enumerate_value_patterns_from, max_errors_in_horizon,
    support_admissible, support_admissible_from,
};

/// A length-`t` input word over the channel alphabet.
pub type Word = Vec<u8>;

/// Encode a word as a base-`base` integer (last symbol least significant).
pub fn encode_word(word: &[u8], base: usize) -> u64 {
    word.iter().fold(0u64, |acc, &s| acc * base as u64 + s as u64)
}

/// Inverse of [`encode_word`].
pub fn decode_word(mut code: u64, base: usize, len: usize) -> Word {
    let mut word = vec![0u8; len];
    for slot in word.iter_mut().rev() {
        *slot = (code % base as u64) as u8;
        code /= base as u64;
    }
    word
}

/// Word as a base-q digit string (`*` marks an NSE erasure encoded as the
/// sentinel value `q`).
pub fn word_string(word: &[u8], q: usize) -> String {
    word.iter()
        .map(|&s| {
            if s as usize == q {
                '*'
            } else {
                char::from_digit(s as u32, 36).unwrap()
            }
        })
        .collect()
}

/// Parse a base-q digit string.
pub fn word_from_string(s: &str, q: usize) -> crate::Result<Word> {
    s.chars()
        .map(|c| {
            if c == '*' {
                return Ok(q as u8);
            }
            let v = c
                .to_digit(36)
                .ok_or_else(|| crate::Error::Format(format!("bad symbol {c:?}")))?;
            if v as usize >= q {
                return Err(crate::Error::Format(format!(
                    "symbol {c:?} out of range for q = {q}"
                )));
            }
            Ok(v as u8)
        })
        .collect()
}
