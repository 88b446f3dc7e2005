//! Multiuser detection: exhaustive maximum-likelihood decoding and the
//! low-complexity tensor decoder.
//!
//! The tensor decoder splits a Kronecker code `P (x) C` into `k`
//! independent block problems by applying `P^-1` per chip block, then
//! solves each block over a partitioned code `C = [A | B]`: for every
//! candidate free block `X2` it measures how far `A^-1 y - A^-1 B X2`
//! sits from the nearest +/-1 vector and keeps the minimizer, reading
//! `X1` off the sign pattern. With Hadamard `P` and `A` this is exact ML
//! at `2^(n-m)` distance evaluations per block instead of `2^n` overall.
//!
//! Conventions fixed project-wide: `sign(0) = +1`, and distance ties
//! break to the smallest candidate index in counter order.

use thiserror::Error;

use crate::construct::{CodeDescriptor, Structure};
use crate::exact::{self, rational_to_f64};
use crate::matrix::{Alphabet, CodeMatrix, IntMatrix};

/// Exhaustive ML refuses beyond this many users.
pub const DEFAULT_ML_LIMIT: usize = 20;
/// Candidate tables refuse beyond this many precomputed floats.
pub const DEFAULT_TABLE_CAP: usize = 1 << 24;

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("candidate table needs {entries} entries, over the cap of {cap}")]
    TableCap { entries: u128, cap: usize },
    #[error("code has row rank {rank} < {rows}; block decoding needs an invertible column basis")]
    NotFullRowRank { rank: usize, rows: usize },
    #[error("exhaustive ML refused: {n} users exceeds the limit of {limit}")]
    MlOverLimit { n: usize, limit: usize },
    #[error("tensor decoding needs a kronecker-structured descriptor; use block or ml decoding")]
    MissingStructure,
    #[error("kronecker factor is singular; cannot invert the block transform")]
    SingularFactor,
    #[error("optical decoding requires a {{0,1}} code")]
    NotOptical,
    #[error("received vector has length {got}, code expects {want}")]
    LengthMismatch { got: usize, want: usize },
}

/// A decoded user word with its squared Euclidean residual against the
/// received vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedWord {
    /// One entry per user: +/-1, or 0/1 for optical decodes.
    pub bits: Vec<i8>,
    pub score: f64,
}

#[inline]
fn sign_pm1(t: f64) -> f64 {
    if t >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

fn as_f64(m: &IntMatrix) -> Vec<f64> {
    m.data().iter().map(|&v| v as f64).collect()
}

fn residual_sq(code_f: &[f64], rows: usize, cols: usize, y: &[f64], bits: &[i8]) -> f64 {
    let mut acc = 0.0;
    for i in 0..rows {
        let row = &code_f[i * cols..(i + 1) * cols];
        let mut s = 0.0;
        for (c, &b) in row.iter().zip(bits) {
            s += c * b as f64;
        }
        let e = y[i] - s;
        acc += e * e;
    }
    acc
}

/// Per-block lookup decoder for a partitioned code `[A | B]`: `A^-1`,
/// `A^-1 B`, and all `2^(n-m)` candidate projections, precomputed once.
pub struct DecoderTables {
    rows: usize,
    cols: usize,
    basis: Vec<usize>,
    nonbasis: Vec<usize>,
    /// `rows x rows`, row-major.
    a_inv: Vec<f64>,
    /// `2^(n-m)` rows of length `rows`: `A^-1 B x2` per candidate.
    proj: Vec<f64>,
    code_f: Vec<f64>,
}

/// Candidate index -> free-block entry: bit 0 of the counter is the last
/// free column, an unset bit means +1. Index order is the tie order.
#[inline]
fn candidate_entry(idx: usize, free: usize, j: usize) -> i8 {
    if idx >> (free - 1 - j) & 1 == 0 {
        1
    } else {
        -1
    }
}

impl DecoderTables {
    pub fn build(desc: &CodeDescriptor) -> Result<Self, DecodeError> {
        Self::build_with_cap(desc, DEFAULT_TABLE_CAP)
    }

    pub fn build_with_cap(desc: &CodeDescriptor, cap: usize) -> Result<Self, DecodeError> {
        let m = desc.matrix.as_int();
        let rows = m.rows();
        let basis: Vec<usize> = match desc.partition_basis() {
            Some(b) => b.to_vec(),
            None => {
                let (rank, basis) = exact::rank_and_basis_columns(m);
                if rank != rows {
                    return Err(DecodeError::NotFullRowRank { rank, rows });
                }
                basis
            }
        };
        let nonbasis: Vec<usize> = (0..m.cols()).filter(|c| !basis.contains(c)).collect();
        let free = nonbasis.len();
        let entries = (1u128 << free) * rows as u128;
        if entries > cap as u128 {
            return Err(DecodeError::TableCap { entries, cap });
        }
        let a = m.select_columns(&basis);
        let a_inv_exact = exact::invert_exact(&a).map_err(|_| DecodeError::NotFullRowRank {
            rank: basis.len().saturating_sub(1),
            rows,
        })?;
        let a_inv = a_inv_exact.to_f64();
        // A^-1 B, exact then floated once
        let b = m.select_columns(&nonbasis);
        let r_exact = a_inv_exact.mul_int(&b);
        let mut r = vec![0.0f64; rows * free];
        for i in 0..rows {
            for j in 0..free {
                r[i * free + j] = rational_to_f64(r_exact.get(i, j));
            }
        }
        let cands = 1usize << free;
        let mut proj = vec![0.0f64; cands * rows];
        for idx in 0..cands {
            for i in 0..rows {
                let mut acc = 0.0;
                for j in 0..free {
                    let x = candidate_entry(idx, free, j) as f64;
                    acc += r[i * free + j] * x;
                }
                proj[idx * rows + i] = acc;
            }
        }
        Ok(DecoderTables {
            rows,
            cols: m.cols(),
            basis,
            nonbasis,
            a_inv,
            proj,
            code_f: as_f64(m),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Exactly `2^(n - m)`.
    pub fn candidate_count(&self) -> usize {
        self.proj.len() / self.rows
    }
}

/// Decodes one chip block against the candidate table. Ties break to the
/// smallest candidate index; the sign of zero is +1.
pub fn decode_block(t: &DecoderTables, y: &[f64]) -> Result<DecodedWord, DecodeError> {
    if y.len() != t.rows {
        return Err(DecodeError::LengthMismatch {
            got: y.len(),
            want: t.rows,
        });
    }
    let m = t.rows;
    let mut v = vec![0.0f64; m];
    for (i, vi) in v.iter_mut().enumerate() {
        let row = &t.a_inv[i * m..(i + 1) * m];
        *vi = row.iter().zip(y).map(|(a, b)| a * b).sum();
    }
    let mut best_idx = 0usize;
    let mut best_d2 = f64::INFINITY;
    for idx in 0..t.candidate_count() {
        let proj = &t.proj[idx * m..(idx + 1) * m];
        let mut d2 = 0.0;
        for (vi, pi) in v.iter().zip(proj) {
            let tv = vi - pi;
            let e = tv - sign_pm1(tv);
            d2 += e * e;
        }
        if d2 < best_d2 {
            best_d2 = d2;
            best_idx = idx;
        }
    }
    let proj = &t.proj[best_idx * m..(best_idx + 1) * m];
    let mut bits = vec![0i8; t.cols];
    for (i, &col) in t.basis.iter().enumerate() {
        bits[col] = if v[i] - proj[i] >= 0.0 { 1 } else { -1 };
    }
    let free = t.nonbasis.len();
    for (j, &col) in t.nonbasis.iter().enumerate() {
        bits[col] = candidate_entry(best_idx, free, j);
    }
    let score = residual_sq(&t.code_f, t.rows, t.cols, y, &bits);
    Ok(DecodedWord { bits, score })
}

/// Block-decoupling decoder for `P (x) C` codes: applies `P^-1` per chip
/// block, then runs [`decode_block`] on each of the `k` sub-problems.
pub struct TensorDecoder {
    k: usize,
    /// `k x k`, row-major.
    p_inv: Vec<f64>,
    block: DecoderTables,
    code_f: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl TensorDecoder {
    pub fn build(desc: &CodeDescriptor) -> Result<Self, DecodeError> {
        Self::build_with_cap(desc, DEFAULT_TABLE_CAP)
    }

    pub fn build_with_cap(desc: &CodeDescriptor, cap: usize) -> Result<Self, DecodeError> {
        let Structure::Kronecker { p, c } = &desc.structure else {
            return Err(DecodeError::MissingStructure);
        };
        let k = p.rows();
        // Hadamard factors invert as P^T / k exactly; anything else goes
        // through the exact rational inverse, floated once.
        let p_inv = match p {
            CodeMatrix::Sign(s) if s.is_hadamard() => {
                let mut out = vec![0.0f64; k * k];
                for i in 0..k {
                    for j in 0..k {
                        out[i * k + j] = s.as_int().get(j, i) as f64 / k as f64;
                    }
                }
                out
            }
            _ => exact::invert_exact(p.as_int())
                .map_err(|_| DecodeError::SingularFactor)?
                .to_f64(),
        };
        let block = DecoderTables::build_with_cap(c, cap)?;
        Ok(TensorDecoder {
            k,
            p_inv,
            block,
            code_f: as_f64(desc.matrix.as_int()),
            rows: desc.rows(),
            cols: desc.cols(),
        })
    }

    pub fn block_tables(&self) -> &DecoderTables {
        &self.block
    }

    pub fn factor_order(&self) -> usize {
        self.k
    }
}

/// Full tensor decode: `Y' = (P^-1 (x) I) Y`, one block decode per chip
/// block, outputs concatenated in block order.
pub fn decode_tensor(t: &TensorDecoder, y: &[f64]) -> Result<DecodedWord, DecodeError> {
    if y.len() != t.rows {
        return Err(DecodeError::LengthMismatch {
            got: y.len(),
            want: t.rows,
        });
    }
    let (k, m, n) = (t.k, t.block.rows(), t.block.cols());
    let mut bits = vec![0i8; t.cols];
    let mut yb = vec![0.0f64; m];
    for i in 0..k {
        for (r, slot) in yb.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..k {
                acc += t.p_inv[i * k + j] * y[j * m + r];
            }
            *slot = acc;
        }
        let word = decode_block(&t.block, &yb)?;
        bits[i * n..(i + 1) * n].copy_from_slice(&word.bits);
    }
    let score = residual_sq(&t.code_f, t.rows, t.cols, y, &bits);
    Ok(DecodedWord { bits, score })
}

/// Brute-force ML over all 2^n words; the oracle the fast decoders are
/// measured against. Ties break to the lexicographically smallest word
/// with +1 ordered before -1.
pub fn ml_exhaustive(code: &CodeMatrix, y: &[f64]) -> Result<DecodedWord, DecodeError> {
    ml_exhaustive_with_limit(code, y, DEFAULT_ML_LIMIT)
}

pub fn ml_exhaustive_with_limit(
    code: &CodeMatrix,
    y: &[f64],
    limit: usize,
) -> Result<DecodedWord, DecodeError> {
    let m = code.as_int();
    let (rows, n) = (m.rows(), m.cols());
    if n > limit {
        return Err(DecodeError::MlOverLimit { n, limit });
    }
    if y.len() != rows {
        return Err(DecodeError::LengthMismatch {
            got: y.len(),
            want: rows,
        });
    }
    let code_f = as_f64(m);
    let mut best = DecodedWord {
        bits: Vec::new(),
        score: f64::INFINITY,
    };
    let mut bits = vec![0i8; n];
    for idx in 0..(1usize << n) {
        for (j, b) in bits.iter_mut().enumerate() {
            *b = candidate_entry(idx, n, j);
        }
        let d2 = residual_sq(&code_f, rows, n, y, &bits);
        if d2 < best.score {
            best.score = d2;
            best.bits = bits.clone();
        }
    }
    Ok(best)
}

/// Either decoder behind one interface, picked from the descriptor's
/// structure: tensor for Kronecker codes, block tables otherwise.
pub enum Engine {
    Tensor(TensorDecoder),
    Block(DecoderTables),
}

impl Engine {
    pub fn build(desc: &CodeDescriptor) -> Result<Self, DecodeError> {
        Self::build_with_cap(desc, DEFAULT_TABLE_CAP)
    }

    pub fn build_with_cap(desc: &CodeDescriptor, cap: usize) -> Result<Self, DecodeError> {
        Ok(match &desc.structure {
            Structure::Kronecker { .. } => {
                Engine::Tensor(TensorDecoder::build_with_cap(desc, cap)?)
            }
            _ => Engine::Block(DecoderTables::build_with_cap(desc, cap)?),
        })
    }

    pub fn decode(&self, y: &[f64]) -> Result<DecodedWord, DecodeError> {
        match self {
            Engine::Tensor(t) => decode_tensor(t, y),
            Engine::Block(t) => decode_block(t, y),
        }
    }
}

/// Optical decoder: shifts the received vector by the code's row sums
/// (`2Y - W`), runs the +/-1 machinery against the {0,1} matrix, and maps
/// the word back to {0,1}. The reported score is measured in the original
/// optical domain.
pub struct OpticalDecoder {
    engine: Engine,
    row_sums: Vec<f64>,
    code_f: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl OpticalDecoder {
    pub fn build(desc: &CodeDescriptor) -> Result<Self, DecodeError> {
        Self::build_with_cap(desc, DEFAULT_TABLE_CAP)
    }

    pub fn build_with_cap(desc: &CodeDescriptor, cap: usize) -> Result<Self, DecodeError> {
        if desc.alphabet() != Alphabet::ZeroOne {
            return Err(DecodeError::NotOptical);
        }
        let m = desc.matrix.as_int();
        let row_sums = (0..m.rows())
            .map(|i| m.row(i).iter().sum::<i64>() as f64)
            .collect();
        Ok(OpticalDecoder {
            engine: Engine::build_with_cap(desc, cap)?,
            row_sums,
            code_f: as_f64(m),
            rows: m.rows(),
            cols: m.cols(),
        })
    }

    pub fn decode(&self, y: &[f64]) -> Result<DecodedWord, DecodeError> {
        if y.len() != self.rows {
            return Err(DecodeError::LengthMismatch {
                got: y.len(),
                want: self.rows,
            });
        }
        let shifted: Vec<f64> = y
            .iter()
            .zip(&self.row_sums)
            .map(|(v, w)| 2.0 * v - w)
            .collect();
        let word = self.engine.decode(&shifted)?;
        let bits: Vec<i8> = word.bits.iter().map(|&b| (b + 1) / 2).collect();
        let score = residual_sq(&self.code_f, self.rows, self.cols, y, &bits);
        Ok(DecodedWord { bits, score })
    }
}

/// One-shot optical decode; builds the tables and forwards.
pub fn decode_optical(desc: &CodeDescriptor, y: &[f64]) -> Result<DecodedWord, DecodeError> {
    OpticalDecoder::build(desc)?.decode(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{builtin, cow_to_coo, kronecker_lift, optical_geometric};
    use crate::matrix::hadamard;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn h2_kron_c4x5() -> CodeDescriptor {
        let p = CodeMatrix::Sign(hadamard(2).unwrap());
        kronecker_lift("H2xC4x5", p, &builtin("C4x5").unwrap()).unwrap()
    }

    fn encode(m: &IntMatrix, bits: &[i8]) -> Vec<f64> {
        m.mul_ivec(&bits.iter().map(|&b| b as i64).collect::<Vec<_>>())
            .iter()
            .map(|&v| v as f64)
            .collect()
    }

    fn bits_from_index(idx: usize, n: usize) -> Vec<i8> {
        (0..n).map(|j| candidate_entry(idx, n, j)).collect()
    }

    #[test]
    fn block_tables_candidate_count() {
        let c8 = builtin("C8x13").unwrap();
        let t = DecoderTables::build(&c8).unwrap();
        assert_eq!(t.candidate_count(), 32); // 2^(13-8)
        let c4 = builtin("C4x5").unwrap();
        assert_eq!(DecoderTables::build(&c4).unwrap().candidate_count(), 2);
    }

    #[test]
    fn table_cap_enforced() {
        let d64 = builtin("D64x104").unwrap();
        // flattening the kronecker code forces a 2^40-row table
        let plain = CodeDescriptor::new("flat", d64.matrix.clone(), Structure::Plain).unwrap();
        assert!(matches!(
            DecoderTables::build(&plain),
            Err(DecodeError::TableCap { .. })
        ));
    }

    #[test]
    fn noiseless_block_decode_is_exact_exhaustively() {
        for desc in [builtin("C4x5").unwrap(), builtin("C8x13").unwrap()] {
            let t = DecoderTables::build(&desc).unwrap();
            let n = desc.cols();
            for idx in 0..(1usize << n) {
                let x = bits_from_index(idx, n);
                let y = encode(desc.matrix.as_int(), &x);
                let out = decode_block(&t, &y).unwrap();
                assert_eq!(out.bits, x, "{} idx {idx}", desc.name);
                assert!(out.score < 1e-18);
            }
        }
    }

    #[test]
    fn noiseless_tensor_decode_is_exact_exhaustively() {
        let desc = h2_kron_c4x5();
        let t = TensorDecoder::build(&desc).unwrap();
        for idx in 0..(1usize << 10) {
            let x = bits_from_index(idx, 10);
            let y = encode(desc.matrix.as_int(), &x);
            let out = decode_tensor(&t, &y).unwrap();
            assert_eq!(out.bits, x);
        }
    }

    #[test]
    fn ml_tie_breaks_lexicographically() {
        let h2 = CodeMatrix::Sign(hadamard(2).unwrap());
        let out = ml_exhaustive(&h2, &[0.0, 0.0]).unwrap();
        assert_eq!(out.bits, vec![1, 1]);
    }

    #[test]
    fn ml_limit_refusal() {
        let d64 = builtin("D64x104").unwrap();
        let y = vec![0.0; 64];
        assert!(matches!(
            ml_exhaustive(&d64.matrix, &y),
            Err(DecodeError::MlOverLimit { n: 104, limit: 20 })
        ));
    }

    #[test]
    fn ml_matches_independent_brute_force() {
        // second oracle: direct re-implementation with a different loop shape
        let desc = builtin("C4x5").unwrap();
        let m = desc.matrix.as_int();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let x = bits_from_index(rng.random::<u32>() as usize % 32, 5);
            let mut y = encode(m, &x);
            for v in y.iter_mut() {
                let z: f64 = StandardNormal.sample(&mut rng);
                *v += 0.5 * z;
            }
            let ours = ml_exhaustive(&desc.matrix, &y).unwrap();
            let mut best = (f64::INFINITY, Vec::new());
            for idx in 0..32 {
                let cand = bits_from_index(idx, 5);
                let cy = encode(m, &cand);
                let d2: f64 = cy.iter().zip(&y).map(|(a, b)| (b - a) * (b - a)).sum();
                if d2 < best.0 {
                    best = (d2, cand);
                }
            }
            assert_eq!(ours.bits, best.1);
            assert!((ours.score - best.0).abs() <= 1e-9 * best.0.max(1.0));
        }
    }

    #[test]
    fn block_equals_ml_when_basis_is_hadamard() {
        // A = H_4 inside the 4x5 code: the lookup decoder is exact ML
        let desc = builtin("C4x5").unwrap();
        let t = DecoderTables::build(&desc).unwrap();
        let m = desc.matrix.as_int();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &sigma in &[0.3, 0.6] {
            for _ in 0..250 {
                let x = bits_from_index(rng.random::<u32>() as usize % 32, 5);
                let mut y = encode(m, &x);
                for v in y.iter_mut() {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    *v += sigma * z;
                }
                let fast = decode_block(&t, &y).unwrap();
                let ml = ml_exhaustive(&desc.matrix, &y).unwrap();
                assert_eq!(fast.bits, ml.bits, "sigma {sigma}");
            }
        }
    }

    #[test]
    fn tensor_degenerates_to_block_for_unit_factor() {
        let one =
            CodeMatrix::try_from_int(IntMatrix::from_rows(vec![vec![1]]), Alphabet::Pm1).unwrap();
        let desc = kronecker_lift("1xC4x5", one, &builtin("C4x5").unwrap()).unwrap();
        let t = TensorDecoder::build(&desc).unwrap();
        let bt = DecoderTables::build(&builtin("C4x5").unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let y: Vec<f64> = (0..4)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    3.0 * z
                })
                .collect();
            assert_eq!(
                decode_tensor(&t, &y).unwrap().bits,
                decode_block(&bt, &y).unwrap().bits
            );
        }
    }

    #[test]
    fn all_zero_input_is_deterministic() {
        let desc = builtin("C8x13").unwrap();
        let t = DecoderTables::build(&desc).unwrap();
        let a = decode_block(&t, &[0.0; 8]).unwrap();
        let b = decode_block(&t, &[0.0; 8]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn score_matches_independent_recount() {
        let desc = h2_kron_c4x5();
        let t = TensorDecoder::build(&desc).unwrap();
        let m = desc.matrix.as_int();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let y: Vec<f64> = (0..8)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    4.0 * z
                })
                .collect();
            let out = decode_tensor(&t, &y).unwrap();
            let recount: f64 = {
                let cy = encode(m, &out.bits);
                cy.iter().zip(&y).map(|(a, b)| (b - a) * (b - a)).sum()
            };
            assert!((out.score - recount).abs() <= 1e-9 * recount.max(1.0));
        }
    }

    #[test]
    fn consistent_block_rescaling_preserves_decisions() {
        // carrying a sqrt(k) factor through both the block input and the
        // basis inverse scales every candidate distance uniformly
        let desc = builtin("C4x5").unwrap();
        let t = DecoderTables::build(&desc).unwrap();
        for s in [std::f64::consts::SQRT_2, 2.0] {
            let scaled = DecoderTables {
                rows: t.rows,
                cols: t.cols,
                basis: t.basis.clone(),
                nonbasis: t.nonbasis.clone(),
                a_inv: t.a_inv.iter().map(|v| v / s).collect(),
                proj: t.proj.clone(),
                code_f: t.code_f.clone(),
            };
            let m = desc.matrix.as_int();
            let mut rng = ChaCha8Rng::seed_from_u64(47);
            for _ in 0..200 {
                let x = bits_from_index(rng.random::<u32>() as usize % 32, 5);
                let mut y = encode(m, &x);
                for v in y.iter_mut() {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    *v += 0.6 * z;
                }
                let plain = decode_block(&t, &y).unwrap();
                let ys: Vec<f64> = y.iter().map(|v| v * s).collect();
                let rescaled = decode_block(&scaled, &ys).unwrap();
                assert_eq!(plain.bits, rescaled.bits);
            }
        }
    }

    #[test]
    fn optical_decode_recovers_noiseless_words() {
        // bridge image of the 4x5 anchor, exhaustively
        let coo = cow_to_coo(&builtin("C4x5").unwrap()).unwrap();
        let dec = OpticalDecoder::build(&coo).unwrap();
        let m = coo.matrix.as_int();
        for idx in 0..32usize {
            let x: Vec<i8> = (0..5).map(|j| (idx >> (4 - j) & 1) as i8).collect();
            let y = encode(m, &x);
            let out = dec.decode(&y).unwrap();
            assert_eq!(out.bits, x);
            assert!(out.score < 1e-18);
        }
        // all-zeros word comes back as all zeros
        let out = dec.decode(&[0.0; 4]).unwrap();
        assert_eq!(out.bits, vec![0; 5]);

        // geometric optical code, random noiseless words over the block path
        let geo = optical_geometric(8).unwrap();
        let dec = OpticalDecoder::build(&geo).unwrap();
        let gm = geo.matrix.as_int();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let x: Vec<i8> = (0..10).map(|_| rng.random::<bool>() as i8).collect();
            let y = encode(gm, &x);
            assert_eq!(dec.decode(&y).unwrap().bits, x);
        }
        // rejects the wrong alphabet
        assert!(matches!(
            OpticalDecoder::build(&builtin("C4x5").unwrap()),
            Err(DecodeError::NotOptical)
        ));
    }

    #[test]
    fn engine_selects_by_structure() {
        assert!(matches!(
            Engine::build(&h2_kron_c4x5()).unwrap(),
            Engine::Tensor(_)
        ));
        assert!(matches!(
            Engine::build(&builtin("C8x13").unwrap()).unwrap(),
            Engine::Block(_)
        ));
    }
}
