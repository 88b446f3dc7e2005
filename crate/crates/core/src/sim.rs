//! Seeded Monte-Carlo AWGN bit-error-rate harness.
//!
//! Noise convention: unit-amplitude chips over `m` rows give `E_b = m`
//! per user, and `sigma^2 = m / (2 * 10^(EbN0_dB / 10))`. Under it a
//! fully-loaded Hadamard system with per-user matched filtering performs
//! exactly like binary PSK, which anchors every comparison here.
//!
//! Determinism: trials run in fixed-size batches, batch `b` of sweep
//! point `i` is seeded with `base_seed ^ (i << 32) ^ b`, and results
//! commit in batch order regardless of how many workers ran them, so a
//! record is bit-identical for any thread count.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use thiserror::Error;

use crate::construct::{CodeDescriptor, Structure};
use crate::decoder::{
    self, DecodeError, DecoderTables, OpticalDecoder, TensorDecoder, DEFAULT_ML_LIMIT,
};
use crate::matrix::{Alphabet, CodeMatrix, IntMatrix};

const BATCH_TRIALS: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderKind {
    Tensor,
    Ml,
    HadamardBaseline,
}

impl DecoderKind {
    pub fn token(self) -> &'static str {
        match self {
            DecoderKind::Tensor => "tensor",
            DecoderKind::Ml => "ml",
            DecoderKind::HadamardBaseline => "hadamard",
        }
    }

    pub fn from_token(tok: &str) -> Option<Self> {
        Some(match tok {
            "tensor" => DecoderKind::Tensor,
            "ml" => DecoderKind::Ml,
            "hadamard" | "hadamard_baseline" => DecoderKind::HadamardBaseline,
            _ => return None,
        })
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("decoder `{decoder}` cannot drive code `{code}`: {reason}")]
    IncompatibleDecoder {
        decoder: &'static str,
        code: String,
        reason: String,
    },
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

/// One Monte-Carlo run: a code, a decoder, the Eb/N0 grid, stopping
/// rules, and the base seed.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub code: CodeDescriptor,
    pub decoder: DecoderKind,
    pub eb_n0_db: Vec<f64>,
    /// Hard cap on transmitted vectors per point.
    pub max_trials: u64,
    /// Early-stop threshold: stop once this many bit errors are in.
    pub min_bit_errors: u64,
    pub base_seed: u64,
}

impl SimConfig {
    pub fn new(code: CodeDescriptor, decoder: DecoderKind, eb_n0_db: Vec<f64>) -> Self {
        SimConfig {
            code,
            decoder,
            eb_n0_db,
            max_trials: 100_000,
            min_bit_errors: 100,
            base_seed: 1,
        }
    }
}

/// One measured point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub code: String,
    pub decoder: DecoderKind,
    pub eb_n0_db: f64,
    /// Transmitted vectors.
    pub trials: u64,
    /// `trials * users`.
    pub bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub wall_seconds: f64,
}

/// Per-chip noise standard deviation for an Eb/N0 and a chip count.
pub fn noise_sigma(eb_n0_db: f64, m: usize) -> f64 {
    (m as f64 / (2.0 * 10f64.powf(eb_n0_db / 10.0))).sqrt()
}

/// Gaussian tail `Q(x)` via the complementary error function.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Binary PSK error rate `Q(sqrt(2 Eb/N0))`; the analytic curve a
/// fully-loaded Hadamard system follows.
pub fn bpsk_theoretical(eb_n0_db: f64) -> f64 {
    q_function((2.0 * 10f64.powf(eb_n0_db / 10.0)).sqrt())
}

/// Matched-filter decoding for an orthogonal (Hadamard) code: user `j`
/// decides by the sign of its signature's correlation with the received
/// vector. Exact ML for orthogonal signatures.
pub fn hadamard_baseline_decode(h: &IntMatrix, y: &[f64]) -> Vec<i8> {
    (0..h.cols())
        .map(|j| {
            let mut acc = 0.0;
            for i in 0..h.rows() {
                acc += h.get(i, j) as f64 * y[i];
            }
            if acc >= 0.0 {
                1
            } else {
                -1
            }
        })
        .collect()
}

enum Detector {
    Tensor(TensorDecoder),
    Block(DecoderTables),
    Ml(CodeMatrix),
    Hadamard(IntMatrix),
    OpticalEngine(OpticalDecoder),
    OpticalMl {
        code: CodeMatrix,
        row_sums: Vec<f64>,
    },
}

impl Detector {
    fn prepare(cfg: &SimConfig) -> Result<Detector, SimError> {
        let desc = &cfg.code;
        let incompatible = |decoder: &'static str, reason: String| SimError::IncompatibleDecoder {
            decoder,
            code: desc.name.clone(),
            reason,
        };
        match (cfg.decoder, desc.alphabet()) {
            (DecoderKind::Tensor, Alphabet::Pm1) => match &desc.structure {
                Structure::Kronecker { .. } => Ok(Detector::Tensor(TensorDecoder::build(desc)?)),
                Structure::Partitioned { .. } => Ok(Detector::Block(DecoderTables::build(desc)?)),
                Structure::Plain => Err(incompatible(
                    "tensor",
                    "code has neither kronecker nor partitioned structure".into(),
                )),
            },
            (DecoderKind::Tensor, Alphabet::ZeroOne) => match &desc.structure {
                Structure::Plain => Err(incompatible(
                    "tensor",
                    "code has neither kronecker nor partitioned structure".into(),
                )),
                _ => Ok(Detector::OpticalEngine(OpticalDecoder::build(desc)?)),
            },
            (DecoderKind::Ml, Alphabet::Pm1) => {
                if desc.cols() > DEFAULT_ML_LIMIT {
                    Err(incompatible(
                        "ml",
                        format!("{} users exceed the exhaustive limit", desc.cols()),
                    ))
                } else {
                    Ok(Detector::Ml(desc.matrix.clone()))
                }
            }
            (DecoderKind::Ml, Alphabet::ZeroOne) => {
                if desc.cols() > DEFAULT_ML_LIMIT {
                    Err(incompatible(
                        "ml",
                        format!("{} users exceed the exhaustive limit", desc.cols()),
                    ))
                } else {
                    let m = desc.matrix.as_int();
                    let row_sums = (0..m.rows())
                        .map(|i| m.row(i).iter().sum::<i64>() as f64)
                        .collect();
                    Ok(Detector::OpticalMl {
                        code: desc.matrix.clone(),
                        row_sums,
                    })
                }
            }
            (DecoderKind::HadamardBaseline, Alphabet::Pm1) => match &desc.matrix {
                CodeMatrix::Sign(s) if s.is_hadamard() => {
                    Ok(Detector::Hadamard(s.as_int().clone()))
                }
                _ => Err(incompatible(
                    "hadamard",
                    "matched filtering needs a square Hadamard code".into(),
                )),
            },
            (DecoderKind::HadamardBaseline, Alphabet::ZeroOne) => Err(incompatible(
                "hadamard",
                "matched filtering needs a +/-1 Hadamard code".into(),
            )),
        }
    }

    fn decode(&self, y: &[f64]) -> Result<Vec<i8>, DecodeError> {
        Ok(match self {
            Detector::Tensor(t) => decoder::decode_tensor(t, y)?.bits,
            Detector::Block(t) => decoder::decode_block(t, y)?.bits,
            Detector::Ml(code) => decoder::ml_exhaustive(code, y)?.bits,
            Detector::Hadamard(h) => hadamard_baseline_decode(h, y),
            Detector::OpticalEngine(d) => d.decode(y)?.bits,
            Detector::OpticalMl { code, row_sums } => {
                let shifted: Vec<f64> = y.iter().zip(row_sums).map(|(v, w)| 2.0 * v - w).collect();
                decoder::ml_exhaustive(code, &shifted)?
                    .bits
                    .iter()
                    .map(|&b| (b + 1) / 2)
                    .collect()
            }
        })
    }
}

/// Runs one batch of trials with its own counter-derived generator; the
/// draw order (word bits, then noise) is part of the seed contract.
fn run_batch(
    code: &IntMatrix,
    alphabet: Alphabet,
    detector: &Detector,
    sigma: f64,
    seed: u64,
    trials: u64,
) -> Result<u64, DecodeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rows, cols) = (code.rows(), code.cols());
    let mut x = vec![0i8; cols];
    let mut y = vec![0.0f64; rows];
    let mut errors = 0u64;
    for _ in 0..trials {
        for b in x.iter_mut() {
            *b = match alphabet {
                Alphabet::Pm1 => {
                    if rng.random::<bool>() {
                        1
                    } else {
                        -1
                    }
                }
                Alphabet::ZeroOne => rng.random::<bool>() as i8,
            };
        }
        for (i, slot) in y.iter_mut().enumerate() {
            let row = code.row(i);
            let mut acc = 0.0;
            for (c, &b) in row.iter().zip(&x) {
                acc += *c as f64 * b as f64;
            }
            let z: f64 = StandardNormal.sample(&mut rng);
            *slot = acc + sigma * z;
        }
        let decoded = detector.decode(&y)?;
        errors += decoded.iter().zip(&x).filter(|(a, b)| a != b).count() as u64;
    }
    Ok(errors)
}

/// Simulates one Eb/N0 point. Batches are processed in waves sized to the
/// worker pool but committed strictly in batch order, stopping at the
/// first batch that reaches `min_bit_errors` (or at `max_trials`).
pub fn run_point(
    cfg: &SimConfig,
    point_index: usize,
    eb_n0_db: f64,
) -> Result<BerRecord, SimError> {
    let start = Instant::now();
    let detector = Detector::prepare(cfg)?;
    let code = cfg.code.matrix.as_int();
    let alphabet = cfg.code.alphabet();
    let sigma = noise_sigma(eb_n0_db, code.rows());
    let point_seed = cfg.base_seed ^ ((point_index as u64) << 32);

    let batch_trials = |b: u64| -> u64 {
        let done = b * BATCH_TRIALS;
        BATCH_TRIALS.min(cfg.max_trials.saturating_sub(done))
    };

    let wave = rayon::current_num_threads().max(1) as u64;
    let mut trials = 0u64;
    let mut bit_errors = 0u64;
    let mut next_batch = 0u64;
    'outer: loop {
        let batches: Vec<u64> = (next_batch..)
            .take(wave as usize)
            .take_while(|&b| batch_trials(b) > 0)
            .collect();
        if batches.is_empty() {
            break;
        }
        let results: Vec<Result<u64, DecodeError>> = batches
            .par_iter()
            .map(|&b| {
                run_batch(
                    code,
                    alphabet,
                    &detector,
                    sigma,
                    point_seed ^ b,
                    batch_trials(b),
                )
            })
            .collect();
        for (b, res) in batches.iter().zip(results) {
            bit_errors += res?;
            trials += batch_trials(*b);
            next_batch = b + 1;
            if bit_errors >= cfg.min_bit_errors || trials >= cfg.max_trials {
                break 'outer;
            }
        }
    }

    let bits = trials * code.cols() as u64;
    Ok(BerRecord {
        code: cfg.code.name.clone(),
        decoder: cfg.decoder,
        eb_n0_db,
        trials,
        bits,
        bit_errors,
        ber: if bits == 0 {
            0.0
        } else {
            bit_errors as f64 / bits as f64
        },
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs every Eb/N0 point in grid order.
pub fn run_sweep(cfg: &SimConfig) -> Result<Vec<BerRecord>, SimError> {
    cfg.eb_n0_db
        .iter()
        .enumerate()
        .map(|(i, &db)| run_point(cfg, i, db))
        .collect()
}

/// CSV table: `code,decoder,ebn0_db,trials,bits,bit_errors,ber,seconds`.
pub fn records_to_csv(records: &[BerRecord]) -> String {
    let mut out = String::from("code,decoder,ebn0_db,trials,bits,bit_errors,ber,seconds\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{:.3}\n",
            r.code,
            r.decoder.token(),
            r.eb_n0_db,
            r.trials,
            r.bits,
            r.bit_errors,
            r.ber,
            r.wall_seconds
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::builtin;
    use crate::matrix::hadamard;

    fn hadamard_desc(k: usize) -> CodeDescriptor {
        CodeDescriptor::new(
            format!("H{k}"),
            CodeMatrix::Sign(hadamard(k).unwrap()),
            Structure::Partitioned {
                basis: (0..k).collect(),
            },
        )
        .unwrap()
    }

    #[test]
    fn sigma_convention_anchors() {
        assert!((noise_sigma(0.0, 1).powi(2) - 0.5).abs() < 1e-12);
        assert!((noise_sigma(0.0, 64).powi(2) - 32.0).abs() < 1e-12);
        assert!((noise_sigma(10.0, 64).powi(2) - 3.2).abs() < 1e-12);
    }

    #[test]
    fn bpsk_curve_values() {
        // Q(sqrt(2)) at 0 dB
        assert!((bpsk_theoretical(0.0) - 0.0786496035251426).abs() < 1e-12);
        // deep-noise limit is a coin flip
        assert!((bpsk_theoretical(-100.0) - 0.5).abs() < 1e-3);
        // ~1e-5 near 9.6 dB
        let p = bpsk_theoretical(9.6);
        assert!(p > 5e-6 && p < 2e-5, "p = {p}");
    }

    #[test]
    fn hadamard_baseline_noiseless_and_single_user() {
        let h = hadamard(8).unwrap();
        let x: Vec<i8> = vec![1, -1, -1, 1, 1, 1, -1, 1];
        let y: Vec<f64> = h
            .as_int()
            .mul_ivec(&x.iter().map(|&b| b as i64).collect::<Vec<_>>())
            .iter()
            .map(|&v| v as f64)
            .collect();
        assert_eq!(hadamard_baseline_decode(h.as_int(), &y), x);
        // single user: plain sign detection
        let h1 = IntMatrix::from_rows(vec![vec![1]]);
        assert_eq!(hadamard_baseline_decode(&h1, &[0.3]), vec![1]);
        assert_eq!(hadamard_baseline_decode(&h1, &[-0.3]), vec![-1]);
        assert_eq!(hadamard_baseline_decode(&h1, &[0.0]), vec![1]);
    }

    #[test]
    fn incompatibility_is_reported_before_any_trial() {
        // ml on 104 users is refused
        let cfg = SimConfig::new(builtin("D64x104").unwrap(), DecoderKind::Ml, vec![4.0]);
        assert!(matches!(
            run_point(&cfg, 0, 4.0),
            Err(SimError::IncompatibleDecoder { .. })
        ));
        // hadamard baseline on a non-orthogonal code is refused
        let cfg = SimConfig::new(
            builtin("C4x5").unwrap(),
            DecoderKind::HadamardBaseline,
            vec![4.0],
        );
        assert!(matches!(
            run_point(&cfg, 0, 4.0),
            Err(SimError::IncompatibleDecoder { .. })
        ));
    }

    #[test]
    fn single_trial_point() {
        let mut cfg = SimConfig::new(hadamard_desc(4), DecoderKind::HadamardBaseline, vec![0.0]);
        cfg.max_trials = 1;
        cfg.min_bit_errors = 1;
        let r = run_point(&cfg, 0, 0.0).unwrap();
        assert_eq!(r.trials, 1);
        assert_eq!(r.bits, 4);
    }

    #[test]
    fn noiseless_tensor_point_has_zero_errors() {
        let mut cfg = SimConfig::new(builtin("D64x104").unwrap(), DecoderKind::Tensor, Vec::new());
        cfg.max_trials = 10_000;
        cfg.min_bit_errors = 1;
        // -inf dB is not representable through the sigma formula; use a
        // direct zero-noise run via a huge Eb/N0 instead
        let r = run_point(&cfg, 0, 500.0).unwrap();
        assert_eq!(r.bit_errors, 0);
        assert_eq!(r.trials, 10_000);
        assert_eq!(r.bits, 1_040_000);
    }

    #[test]
    fn duplicated_column_code_keeps_an_error_floor_without_noise() {
        // a deliberately non-injective 4x6 code saturates: even at zero
        // noise, ML cannot split the duplicated users
        let h4 = hadamard(4).unwrap().into_int();
        let dup = h4.with_column(&h4.column(0)).with_column(&h4.column(1));
        let desc = CodeDescriptor::new(
            "dup4x6",
            CodeMatrix::try_from_int(dup, Alphabet::Pm1).unwrap(),
            Structure::Plain,
        )
        .unwrap();
        let mut cfg = SimConfig::new(desc, DecoderKind::Ml, Vec::new());
        cfg.max_trials = 400;
        cfg.min_bit_errors = u64::MAX; // never stop early
        let r = run_point(&cfg, 0, 500.0).unwrap();
        assert!(r.bit_errors > 0, "non-injective code decoded cleanly");
    }

    #[test]
    fn records_identical_for_any_worker_count() {
        let run_with_threads = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                let mut cfg =
                    SimConfig::new(hadamard_desc(8), DecoderKind::HadamardBaseline, vec![2.0]);
                cfg.max_trials = 5000;
                cfg.min_bit_errors = 200;
                cfg.base_seed = 99;
                run_point(&cfg, 0, 2.0).unwrap()
            })
        };
        let a = run_with_threads(1);
        let b = run_with_threads(4);
        assert_eq!(a.trials, b.trials);
        assert_eq!(a.bit_errors, b.bit_errors);
        assert_eq!(a.bits, b.bits);
        assert_eq!(a.ber, b.ber);
    }

    #[test]
    fn gaussian_generator_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let n = 10_000_000usize;
        let mut sum = 0.0f64;
        let mut sumsq = 0.0f64;
        for _ in 0..n {
            let z: f64 = StandardNormal.sample(&mut rng);
            sum += z;
            sumsq += z * z;
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        assert!(mean.abs() < 5.0 / (n as f64).sqrt(), "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn baseline_tracks_bpsk_at_moderate_snr() {
        let mut cfg = SimConfig::new(hadamard_desc(64), DecoderKind::HadamardBaseline, vec![4.0]);
        cfg.max_trials = 40_000;
        cfg.min_bit_errors = 400;
        cfg.base_seed = 7;
        let r = run_point(&cfg, 0, 4.0).unwrap();
        let p = bpsk_theoretical(4.0);
        let se = (p * (1.0 - p) / r.bits as f64).sqrt();
        assert!(
            (r.ber - p).abs() < 3.0 * se,
            "ber {} vs bpsk {p} (se {se})",
            r.ber
        );
    }

    #[test]
    fn csv_shape() {
        let rec = BerRecord {
            code: "H4".into(),
            decoder: DecoderKind::HadamardBaseline,
            eb_n0_db: 4.0,
            trials: 10,
            bits: 40,
            bit_errors: 2,
            ber: 0.05,
            wall_seconds: 0.25,
        };
        let csv = records_to_csv(&[rec]);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "code,decoder,ebn0_db,trials,bits,bit_errors,ber,seconds"
        );
        assert_eq!(lines.next().unwrap(), "H4,hadamard,4,10,40,2,0.05,0.250");
    }

    #[test]
    fn empty_grid_gives_empty_output() {
        let cfg = SimConfig::new(hadamard_desc(4), DecoderKind::HadamardBaseline, Vec::new());
        let records = run_sweep(&cfg).unwrap();
        assert!(records.is_empty());
        assert_eq!(records_to_csv(&records).lines().count(), 1); // header only
    }

    #[test]
    fn optical_code_simulates_without_errors_at_zero_noise() {
        let geo = crate::construct::optical_geometric(8).unwrap();
        let mut cfg = SimConfig::new(geo, DecoderKind::Tensor, Vec::new());
        cfg.max_trials = 300;
        cfg.min_bit_errors = 1;
        let r = run_point(&cfg, 0, 500.0).unwrap();
        assert_eq!(r.bit_errors, 0);
        assert_eq!(r.bits, 300 * 10);
    }
}
