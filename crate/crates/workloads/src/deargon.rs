//! Argon2 secret-recovery workload: exhaustively verifies lowercase
//! candidate strings against a PHC-encoded Argon2 hash until the digest
//! matches. Argon2 is memory-hard and RNG-free, so every verification costs
//! the same amount of deterministic work — useful for comparing runtimes.

use base64::engine::general_purpose::{GeneralPurpose, GeneralPurposeConfig, STANDARD_NO_PAD};
use base64::engine::DecodePaddingMode;
use base64::{alphabet, Engine};

/// Outer wrapper decoding accepts both padded and unpadded standard base64.
const B64_WRAPPER: GeneralPurpose = GeneralPurpose::new(
    &alphabet::STANDARD,
    GeneralPurposeConfig::new().with_decode_padding_mode(DecodePaddingMode::Indifferent),
);

#[derive(Debug, thiserror::Error)]
pub enum DeargonError {
    #[error("invalid base64 input: {0}")]
    InvalidBase64(#[from] base64::DecodeError),
    #[error("decoded input is not valid UTF-8")]
    NotUtf8,
    #[error("malformed PHC string: {0}")]
    MalformedPhc(String),
    #[error("unknown algorithm '{0}'")]
    UnknownAlgorithm(String),
    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),
    #[error("candidate index {index} out of range for a space of {total} candidates")]
    IndexOutOfRange { index: u64, total: u128 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhcAlgorithm {
    Argon2d,
    Argon2i,
    Argon2id,
}

impl PhcAlgorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            PhcAlgorithm::Argon2d => "argon2d",
            PhcAlgorithm::Argon2i => "argon2i",
            PhcAlgorithm::Argon2id => "argon2id",
        }
    }

    fn parse(text: &str) -> Result<Self, DeargonError> {
        match text {
            "argon2d" => Ok(PhcAlgorithm::Argon2d),
            "argon2i" => Ok(PhcAlgorithm::Argon2i),
            "argon2id" => Ok(PhcAlgorithm::Argon2id),
            other => Err(DeargonError::UnknownAlgorithm(other.to_string())),
        }
    }
}

/// A decoded PHC hash string, e.g.
/// `$argon2i$v=19$m=4096,t=3,p=1$<salt-b64>$<digest-b64>`.
/// All parameters come from the string itself, so the hash is self-describing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhcHash {
    pub algorithm: PhcAlgorithm,
    pub version: u32,
    pub memory_kib: u32,
    pub time_cost: u32,
    pub parallelism: u32,
    pub salt: Vec<u8>,
    pub digest: Vec<u8>,
}

/// Accepts either a raw `$argon2...` PHC string or the same string wrapped in
/// standard base64 (padded or not). Whitespace around and inside a wrapped
/// input is ignored, so line-broken base64 from shell pipelines decodes too.
pub fn decode_input(text: &str) -> Result<PhcHash, DeargonError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(DeargonError::MalformedPhc("empty input".to_string()));
    }
    if trimmed.starts_with('$') {
        return parse_phc(trimmed);
    }
    let compact: String = trimmed
        .chars()
        .filter(|c| !c.is_ascii_whitespace())
        .collect();
    let decoded = B64_WRAPPER.decode(compact.as_bytes())?;
    let inner = String::from_utf8(decoded).map_err(|_| DeargonError::NotUtf8)?;
    if !inner.starts_with('$') {
        return Err(DeargonError::MalformedPhc(
            "decoded input is not a PHC string".to_string(),
        ));
    }
    parse_phc(&inner)
}

fn parse_phc(text: &str) -> Result<PhcHash, DeargonError> {
    // the leading '$' produces an empty first field
    let fields: Vec<&str> = text.split('$').collect();
    if fields.len() != 6 {
        return Err(DeargonError::MalformedPhc(format!(
            "expected 5 '$'-separated fields (algorithm, version, parameters, salt, digest), got {}",
            fields.len().saturating_sub(1)
        )));
    }
    let algorithm = PhcAlgorithm::parse(fields[1])?;
    let version: u32 = fields[2]
        .strip_prefix("v=")
        .ok_or_else(|| DeargonError::MalformedPhc("missing version field".to_string()))?
        .parse()
        .map_err(|_| DeargonError::MalformedPhc("version is not an integer".to_string()))?;

    let (mut memory_kib, mut time_cost, mut parallelism) = (None, None, None);
    for pair in fields[3].split(',') {
        let (key, value) = pair.split_once('=').ok_or_else(|| {
            DeargonError::MalformedPhc(format!("parameter '{pair}' is not of the form key=value"))
        })?;
        let value: u32 = value.parse().map_err(|_| {
            DeargonError::MalformedPhc(format!("parameter '{key}' is not an integer"))
        })?;
        match key {
            "m" => memory_kib = Some(value),
            "t" => time_cost = Some(value),
            "p" => parallelism = Some(value),
            other => {
                return Err(DeargonError::MalformedPhc(format!(
                    "unexpected parameter '{other}'"
                )))
            }
        }
    }
    let memory_kib =
        memory_kib.ok_or_else(|| DeargonError::MalformedPhc("missing parameter m".to_string()))?;
    let time_cost =
        time_cost.ok_or_else(|| DeargonError::MalformedPhc("missing parameter t".to_string()))?;
    let parallelism =
        parallelism.ok_or_else(|| DeargonError::MalformedPhc("missing parameter p".to_string()))?;

    let salt = STANDARD_NO_PAD
        .decode(fields[4])
        .map_err(|_| DeargonError::MalformedPhc("salt is not valid unpadded base64".to_string()))?;
    let digest = STANDARD_NO_PAD.decode(fields[5]).map_err(|_| {
        DeargonError::MalformedPhc("digest is not valid unpadded base64".to_string())
    })?;
    if salt.is_empty() {
        return Err(DeargonError::MalformedPhc("empty salt".to_string()));
    }
    if digest.is_empty() {
        return Err(DeargonError::MalformedPhc("empty digest".to_string()));
    }

    Ok(PhcHash {
        algorithm,
        version,
        memory_kib,
        time_cost,
        parallelism,
        salt,
        digest,
    })
}

/// The space of candidate secrets: fixed-length strings over an ordered
/// alphabet, enumerated lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSpace {
    alphabet: Vec<char>,
    length: usize,
}

impl CandidateSpace {
    /// The a-z space the CLI uses.
    pub fn lowercase(length: usize) -> Self {
        CandidateSpace {
            alphabet: ('a'..='z').collect(),
            length,
        }
    }

    /// Space over a custom alphabet; enumeration follows alphabet order.
    pub fn with_alphabet(alphabet: &str, length: usize) -> Self {
        let alphabet: Vec<char> = alphabet.chars().collect();
        assert!(!alphabet.is_empty(), "alphabet must be non-empty");
        CandidateSpace { alphabet, length }
    }

    /// Total candidate count, saturating at u128::MAX for absurd lengths.
    pub fn len(&self) -> u128 {
        (self.alphabet.len() as u128)
            .checked_pow(self.length as u32)
            .unwrap_or(u128::MAX)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }
}

/// The (index+1)-th string of the space in lexicographic order: base-N
/// positional decoding with the first alphabet symbol as digit zero.
pub fn candidate(index: u64, space: &CandidateSpace) -> Result<String, DeargonError> {
    let total = space.len();
    if u128::from(index) >= total {
        return Err(DeargonError::IndexOutOfRange { index, total });
    }
    let radix = space.alphabet.len() as u64;
    let mut digits = vec![space.alphabet[0]; space.length];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = space.alphabet[(rest % radix) as usize];
        rest /= radix;
    }
    Ok(digits.into_iter().collect())
}

/// True iff Argon2 with the hash's parameters and salt maps the candidate to
/// exactly the stored digest. Plain byte comparison: this is a benchmark
/// workload, not an authentication path, so constant-time equality is not
/// needed.
pub fn verify(candidate: &str, hash: &PhcHash) -> Result<bool, DeargonError> {
    let argon = argon2_instance(hash)?;
    let mut computed = vec![0u8; hash.digest.len()];
    argon
        .hash_password_into(candidate.as_bytes(), &hash.salt, &mut computed)
        .map_err(|e| DeargonError::UnsupportedParams(e.to_string()))?;
    Ok(computed == hash.digest)
}

fn argon2_instance(hash: &PhcHash) -> Result<argon2::Argon2<'static>, DeargonError> {
    let algorithm = match hash.algorithm {
        PhcAlgorithm::Argon2d => argon2::Algorithm::Argon2d,
        PhcAlgorithm::Argon2i => argon2::Algorithm::Argon2i,
        PhcAlgorithm::Argon2id => argon2::Algorithm::Argon2id,
    };
    let version = match hash.version {
        16 => argon2::Version::V0x10,
        19 => argon2::Version::V0x13,
        other => return Err(DeargonError::UnsupportedParams(format!("version {other}"))),
    };
    let params = argon2::Params::new(
        hash.memory_kib,
        hash.time_cost,
        hash.parallelism,
        Some(hash.digest.len()),
    )
    .map_err(|e| DeargonError::UnsupportedParams(e.to_string()))?;
    Ok(argon2::Argon2::new(algorithm, version, params))
}

/// Verifies candidates in lexicographic order. Returns the first match (or
/// None once the space is exhausted) together with the number of
/// verifications performed; for a secret at index i that count is i+1.
pub fn search(
    hash: &PhcHash,
    space: &CandidateSpace,
) -> Result<(Option<String>, u64), DeargonError> {
    let argon = argon2_instance(hash)?;
    let total = space.len();
    let mut computed = vec![0u8; hash.digest.len()];
    let mut index: u64 = 0;
    let mut count: u64 = 0;
    while u128::from(index) < total {
        let text = candidate(index, space).expect("index is in range");
        count += 1;
        argon
            .hash_password_into(text.as_bytes(), &hash.salt, &mut computed)
            .map_err(|e| DeargonError::UnsupportedParams(e.to_string()))?;
        if computed == hash.digest {
            return Ok((Some(text), count));
        }
        index += 1;
    }
    Ok((None, count))
}

const USAGE: &str = "usage: deargon [--stats] <phc-or-base64-hash> <secret-length>";

/// CLI driver: prints the recovered secret (or "not found") to stdout; with
/// --stats the verification count goes to stderr.
///
/// Exit codes: 0 secret found, 1 not found, 2 usage or input error.
pub fn deargon_main(args: &[String]) -> i32 {
    let mut positional = Vec::new();
    let mut stats = false;
    for arg in args {
        match arg.as_str() {
            "--stats" => stats = true,
            other => positional.push(other),
        }
    }
    let [hash_text, length_text] = positional[..] else {
        eprintln!("{USAGE}");
        return 2;
    };
    let length: usize = match length_text.parse() {
        Ok(n) if n >= 1 => n,
        _ => {
            eprintln!("secret length must be a positive integer, got '{length_text}'");
            eprintln!("{USAGE}");
            return 2;
        }
    };
    let hash = match decode_input(hash_text) {
        Ok(hash) => hash,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("{USAGE}");
            return 2;
        }
    };
    match search(&hash, &CandidateSpace::lowercase(length)) {
        Ok((Some(secret), count)) => {
            println!("{secret}");
            if stats {
                eprintln!("verifications: {count}");
            }
            0
        }
        Ok((None, count)) => {
            println!("not found");
            if stats {
                eprintln!("verifications: {count}");
            }
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
