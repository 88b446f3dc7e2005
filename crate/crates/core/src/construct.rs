//! Code constructions: the built-in codes, alphabet bridges, Kronecker
//! lifts, the geometric optical family, and greedy column augmentation.
//!
//! A [`CodeDescriptor`] carries the algebraic structure a code was built
//! with (Kronecker factors, or an invertible column basis) because the
//! tensor decoder and the structural verifier both consume it.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact::{self, ScaledInt};
use crate::matrix::{hadamard, Alphabet, CodeMatrix, IntMatrix, MatrixError};
use crate::verify::{self, VerifyError, VerifyOptions};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("operation requires alphabet {expected}, code `{name}` uses {found}")]
    AlphabetMismatch {
        name: String,
        expected: Alphabet,
        found: Alphabet,
    },
    #[error("unknown built-in code `{0}` (available: C4x5, C8x13, D64x104)")]
    UnknownBuiltin(String),
    #[error("built-in self-check failed: {0}")]
    SelfCheck(String),
    #[error("no all-ones row; the optical-to-wireless substitution requires one")]
    NoAllOnesRow,
    #[error("geometric optical construction requires m >= 4 (got {m})")]
    OpticalTooSmall { m: usize },
    #[error(
        "kronecker factor is singular (rank {rank}); the lift theorem needs an invertible factor"
    )]
    SingularFactor { rank: usize },
    #[error("invalid descriptor structure: {0}")]
    BadStructure(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("descriptor parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How a code was built; consumed by the structural verifier and the
/// tensor decoder.
#[derive(Debug, Clone, PartialEq)]
pub enum Structure {
    Plain,
    /// The code is `P (x) C` for an invertible square factor `P`.
    Kronecker {
        p: CodeMatrix,
        c: Box<CodeDescriptor>,
    },
    /// The listed columns form an invertible square block `A`; the rest
    /// is the free block `B`. A contiguous prefix `0..m` is the common
    /// case, but some codes (the 8x13 built-in among them) only have an
    /// invertible basis off-prefix, so the full index list is kept.
    Partitioned {
        basis: Vec<usize>,
    },
}

/// A code matrix plus its construction structure and a display name.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeDescriptor {
    pub name: String,
    pub matrix: CodeMatrix,
    pub structure: Structure,
}

impl CodeDescriptor {
    /// Validates the structural invariants: a partition basis must select
    /// an exactly invertible square block, a Kronecker structure must
    /// expand to the stored matrix over a single alphabet.
    pub fn new(
        name: impl Into<String>,
        matrix: CodeMatrix,
        structure: Structure,
    ) -> Result<Self, ConstructError> {
        let name = name.into();
        match &structure {
            Structure::Plain => {}
            Structure::Partitioned { basis } => {
                let m = matrix.rows();
                if basis.len() != m {
                    return Err(ConstructError::BadStructure(format!(
                        "partition basis has {} columns, need {m}",
                        basis.len()
                    )));
                }
                if basis.windows(2).any(|w| w[0] >= w[1])
                    || basis.iter().any(|&c| c >= matrix.cols())
                {
                    return Err(ConstructError::BadStructure(
                        "partition basis must be strictly ascending valid column indices".into(),
                    ));
                }
                let sub = matrix.as_int().select_columns(basis);
                let (rank, _) = exact::rank_and_basis_columns(&sub);
                if rank != m {
                    return Err(ConstructError::BadStructure(format!(
                        "partition basis is singular (rank {rank} of {m})"
                    )));
                }
            }
            Structure::Kronecker { p, c } => {
                if p.alphabet() != matrix.alphabet() || c.matrix.alphabet() != matrix.alphabet() {
                    return Err(ConstructError::BadStructure(
                        "kronecker factors must share the code's alphabet".into(),
                    ));
                }
                let expanded = p.as_int().kronecker(c.matrix.as_int());
                if &expanded != matrix.as_int() {
                    return Err(ConstructError::BadStructure(
                        "kronecker structure does not reproduce the stored matrix".into(),
                    ));
                }
            }
        }
        Ok(CodeDescriptor {
            name,
            matrix,
            structure,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.matrix.alphabet()
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// The partition basis if one is recorded.
    pub fn partition_basis(&self) -> Option<&[usize]> {
        match &self.structure {
            Structure::Partitioned { basis } => Some(basis),
            _ => None,
        }
    }
}

fn parse_sign_rows(rows: &[&str]) -> IntMatrix {
    IntMatrix::from_rows(
        rows.iter()
            .map(|r| {
                r.chars()
                    .map(|c| match c {
                        '+' => 1,
                        '-' => -1,
                        other => panic!("bad sign char {other:?}"),
                    })
                    .collect()
            })
            .collect(),
    )
}

// The two anchor codes, embedded as literal data.
const C4X5_ROWS: [&str; 4] = ["+++++", "+-+-+", "++--+", "+--+-"];
const C8X13_ROWS: [&str; 8] = [
    "+++++++++++++",
    "+-+-++-+-++-+",
    "++--+++--+-+-",
    "+--+-+--+--++",
    "+++++-----+-+",
    "+-+-+-+-+----",
    "++--+--++---+",
    "+--+--++-++--",
];

fn sign_matrix(rows: &[&str]) -> CodeMatrix {
    CodeMatrix::try_from_int(parse_sign_rows(rows), Alphabet::Pm1).expect("literal code data")
}

fn partitioned_on_lex_basis(
    name: &str,
    matrix: CodeMatrix,
) -> Result<CodeDescriptor, ConstructError> {
    let red = exact::reduce(matrix.as_int());
    let structure = if red.rank == matrix.rows() {
        Structure::Partitioned { basis: red.basis }
    } else {
        Structure::Plain
    };
    CodeDescriptor::new(name, matrix, structure)
}

fn builtin_selfcheck() -> Result<(), String> {
    for (name, rows) in [("C4x5", &C4X5_ROWS[..]), ("C8x13", &C8X13_ROWS[..])] {
        let m = sign_matrix(rows);
        let v = verify::verify_fast(&m).map_err(|e| format!("{name}: {e}"))?;
        if !v.is_errorless {
            return Err(format!("{name} failed its errorless check"));
        }
    }
    let h8 = hadamard(8).expect("8 is a power of two");
    if !h8.is_hadamard() {
        return Err("H_8 generator lost orthogonality".into());
    }
    Ok(())
}

static SELFCHECK: OnceLock<Result<(), String>> = OnceLock::new();

/// Returns a built-in code: the 4x5 and 8x13 anchor matrices, or the
/// 64x104 Kronecker product of the order-8 Hadamard with the 8x13 code.
/// The embedded data is re-verified once per process before first use.
pub fn builtin(name: &str) -> Result<CodeDescriptor, ConstructError> {
    SELFCHECK
        .get_or_init(builtin_selfcheck)
        .clone()
        .map_err(ConstructError::SelfCheck)?;
    match name.to_ascii_lowercase().as_str() {
        "c4x5" => partitioned_on_lex_basis("C4x5", sign_matrix(&C4X5_ROWS)),
        "c8x13" => partitioned_on_lex_basis("C8x13", sign_matrix(&C8X13_ROWS)),
        "d64x104" => {
            let p = CodeMatrix::Sign(hadamard(8).expect("power of two"));
            let c = builtin("C8x13")?;
            kronecker_lift("D64x104", p, &c)
        }
        _ => Err(ConstructError::UnknownBuiltin(name.to_string())),
    }
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 3] = ["C4x5", "C8x13", "D64x104"];

fn require_alphabet(desc: &CodeDescriptor, expected: Alphabet) -> Result<(), ConstructError> {
    if desc.alphabet() != expected {
        return Err(ConstructError::AlphabetMismatch {
            name: desc.name.clone(),
            expected,
            found: desc.alphabet(),
        });
    }
    Ok(())
}

/// Row/column negations bringing the first row and first column to all
/// +1; an equivalent code (errorless status and |column dot| multiset are
/// preserved). Kronecker structure is dropped when negations actually
/// fire, since the factorization need not survive them.
pub fn normalize_first_row_col(desc: &CodeDescriptor) -> Result<CodeDescriptor, ConstructError> {
    require_alphabet(desc, Alphabet::Pm1)?;
    let m = desc.matrix.as_int();
    let (rows, cols) = (m.rows(), m.cols());
    let col_sign: Vec<i64> = (0..cols).map(|j| m.get(0, j)).collect();
    let mut out = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out.set(i, j, m.get(i, j) * col_sign[j]);
        }
    }
    let row_sign: Vec<i64> = (0..rows).map(|i| out.get(i, 0)).collect();
    for i in 0..rows {
        if row_sign[i] == -1 {
            for j in 0..cols {
                out.set(i, j, -out.get(i, j));
            }
        }
    }
    if &out == m {
        return Ok(desc.clone());
    }
    let structure = match &desc.structure {
        Structure::Partitioned { basis } => Structure::Partitioned {
            basis: basis.clone(),
        },
        _ => Structure::Plain,
    };
    CodeDescriptor::new(
        desc.name.clone(),
        CodeMatrix::try_from_int(out, Alphabet::Pm1)?,
        structure,
    )
}

/// Wireless-to-optical bridge: after normalizing the first row to all +1
/// (column negations only), maps entries by `(J + C) / 2`.
pub fn cow_to_coo(desc: &CodeDescriptor) -> Result<CodeDescriptor, ConstructError> {
    require_alphabet(desc, Alphabet::Pm1)?;
    let m = desc.matrix.as_int();
    let (rows, cols) = (m.rows(), m.cols());
    let col_sign: Vec<i64> = (0..cols).map(|j| m.get(0, j)).collect();
    let mut out = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out.set(i, j, (1 + m.get(i, j) * col_sign[j]) / 2);
        }
    }
    let matrix = CodeMatrix::try_from_int(out, Alphabet::ZeroOne)?;
    partitioned_on_lex_basis(&format!("{}_coo", desc.name), matrix)
}

/// Optical-to-wireless bridge `2D - J`; requires an all-ones row, which
/// the underlying argument needs.
pub fn coo_to_cow(desc: &CodeDescriptor) -> Result<CodeDescriptor, ConstructError> {
    require_alphabet(desc, Alphabet::ZeroOne)?;
    let m = desc.matrix.as_int();
    let (rows, cols) = (m.rows(), m.cols());
    if !(0..rows).any(|i| (0..cols).all(|j| m.get(i, j) == 1)) {
        return Err(ConstructError::NoAllOnesRow);
    }
    let mut out = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out.set(i, j, 2 * m.get(i, j) - 1);
        }
    }
    let matrix = CodeMatrix::try_from_int(out, Alphabet::Pm1)?;
    partitioned_on_lex_basis(&format!("{}_cow", desc.name), matrix)
}

/// Geometric optical code: `[A | B]` with `A = J - I` of order `m` and
/// `B = [V_0 .. V_d]`, `V_i` holding `2^i` leading ones,
/// `d = ceil(log2 m) - 2`. Yields an `m x (m + d + 1)` errorless optical
/// code for `m >= 4`.
pub fn optical_geometric(m: usize) -> Result<CodeDescriptor, ConstructError> {
    if m < 4 {
        return Err(ConstructError::OpticalTooSmall { m });
    }
    let d = (usize::BITS - (m - 1).leading_zeros()) as usize - 2; // ceil(log2 m) - 2
    debug_assert!((1usize << (d + 1)) - 1 < m - 1 || m == 4);
    let n = m + d + 1;
    let mut out = IntMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..m {
            out.set(i, j, if i == j { 0 } else { 1 });
        }
    }
    for (k, j) in (m..n).enumerate() {
        for i in 0..(1usize << k) {
            out.set(i, j, 1);
        }
    }
    let matrix = CodeMatrix::try_from_int(out, Alphabet::ZeroOne)?;
    CodeDescriptor::new(
        format!("O{m}x{n}"),
        matrix,
        Structure::Partitioned {
            basis: (0..m).collect(),
        },
    )
}

/// Kronecker lift `P (x) C`: errorless status is inherited from `C` when
/// `P` is exactly invertible, so the factor structure is recorded rather
/// than any enumeration being run.
pub fn kronecker_lift(
    name: impl Into<String>,
    p: CodeMatrix,
    c: &CodeDescriptor,
) -> Result<CodeDescriptor, ConstructError> {
    if p.alphabet() != c.alphabet() {
        return Err(ConstructError::AlphabetMismatch {
            name: c.name.clone(),
            expected: p.alphabet(),
            found: c.alphabet(),
        });
    }
    let (rank, _) = exact::rank_and_basis_columns(p.as_int());
    if p.rows() != p.cols() || rank < p.rows() {
        return Err(ConstructError::SingularFactor { rank });
    }
    let matrix = CodeMatrix::try_from_int(p.as_int().kronecker(c.matrix.as_int()), p.alphabet())?;
    CodeDescriptor::new(
        name,
        matrix,
        Structure::Kronecker {
            p,
            c: Box::new(c.clone()),
        },
    )
}

/// Guaranteed number of appendable columns when doubling an m-row
/// errorless code: `ceil((m - 1) log_3 2)`.
pub fn augment_floor(m: usize) -> usize {
    (((m - 1) as f64) * (2f64.ln() / 3f64.ln())).ceil() as usize
}

/// Outcome of [`augment_columns`].
#[derive(Debug, Clone)]
pub struct Augmented {
    pub descriptor: CodeDescriptor,
    /// Columns of the doubled base the search started from.
    pub base_cols: usize,
    /// Columns accepted within budget.
    pub added: usize,
    /// Set when the draw budget ran out (the added count may still meet
    /// the floor).
    pub budget_exhausted: bool,
    /// Candidate draws consumed.
    pub draws: u64,
}

/// Incremental acceptance test for column augmentation over a fixed
/// invertible row basis: a candidate is accepted exactly when the fast
/// errorless check passes on the augmented matrix, at the usual
/// `(3^(free) - 1)/2` cost.
struct AugmentState {
    matrix: IntMatrix,
    basis: Vec<usize>,
    /// Rows of the reduced free block, common denominator `den`.
    reduced_num: Vec<Vec<i128>>,
    den: i128,
    /// `adj(A) = den_a * A^-1` rows and its scale, for candidate coords.
    a_adj: ScaledInt,
    /// Multiplier rescaling candidate coords into the `den` scale.
    cand_scale: i128,
}

impl AugmentState {
    fn new(base: &IntMatrix) -> Option<AugmentState> {
        let red = exact::reduce(base);
        if red.rank != base.rows() {
            return None; // row-rank-deficient bases take the generic path
        }
        let a = base.select_columns(&red.basis);
        let a_inv = exact::invert_exact(&a).ok()?;
        let a_adj = ScaledInt::from_rational(&a_inv)?;
        let r0 = ScaledInt::from_rational(&red.reduced)?;
        let den = num_integer::lcm(r0.den(), a_adj.den());
        let r0_scale = den / r0.den();
        let cand_scale = den / a_adj.den();
        let rows = base.rows();
        let mut reduced_num = vec![Vec::new(); rows];
        for (i, row) in reduced_num.iter_mut().enumerate() {
            for j in 0..r0.cols() {
                row.push(r0.row(i)[j].checked_mul(r0_scale)?);
            }
        }
        Some(AugmentState {
            matrix: base.clone(),
            basis: red.basis,
            reduced_num,
            den,
            a_adj,
            cand_scale,
        })
    }

    fn free_cols(&self) -> usize {
        self.matrix.cols() - self.basis.len()
    }

    /// Tests `[current | z]` with the fast check; appends and returns
    /// true when it stays errorless.
    fn try_append(&mut self, z: &[i64]) -> Option<bool> {
        let m = self.basis.len();
        let mut z_coord = vec![0i128; m];
        for (i, zc) in z_coord.iter_mut().enumerate() {
            let mut acc = 0i128;
            for (j, &zj) in z.iter().enumerate() {
                acc = acc.checked_add(self.a_adj.row(i)[j].checked_mul(zj as i128)?)?;
            }
            *zc = acc.checked_mul(self.cand_scale)?;
        }
        let free = self.free_cols() + 1;
        let mut x1_ok = true;
        let mut x = vec![0i8; free];
        let mut witness_found = false;
        // canonical ternary scan over the free block plus the candidate
        let (_, stopped) = crate::verify::scan_canonical(free, |x2| {
            x.copy_from_slice(x2);
            for i in 0..m {
                let mut dot = 0i128;
                for (j, &xv) in x2[..free - 1].iter().enumerate() {
                    if xv != 0 {
                        dot += self.reduced_num[i][j] * xv as i128;
                    }
                }
                let zc = x2[free - 1];
                if zc != 0 {
                    dot += z_coord[i] * zc as i128;
                }
                if dot != 0 && dot != self.den && dot != -self.den {
                    x1_ok = false;
                    break;
                }
            }
            if x1_ok {
                witness_found = true;
                true
            } else {
                x1_ok = true;
                false
            }
        });
        let _ = stopped;
        if witness_found {
            return Some(false);
        }
        self.matrix = self.matrix.with_column(z);
        for (i, row) in self.reduced_num.iter_mut().enumerate() {
            row.push(z_coord[i]);
        }
        Some(true)
    }
}

/// Doubles an errorless wireless code via `H_2 (x) C`, then greedily
/// appends random +/-1 columns (first entry pinned to +1 by negation
/// symmetry), accepting a candidate exactly when the fast errorless check
/// passes on the augmented matrix. Deterministic given the seed. At least
/// [`augment_floor`] columns are known to exist; finding them within
/// `budget` draws is best-effort, reported via `budget_exhausted`.
pub fn augment_columns(
    desc: &CodeDescriptor,
    budget: u64,
    seed: u64,
) -> Result<Augmented, ConstructError> {
    require_alphabet(desc, Alphabet::Pm1)?;
    let h2 = hadamard(2).expect("power of two");
    let base = h2.as_int().kronecker(desc.matrix.as_int());
    let rows = base.rows();
    let base_cols = base.cols();

    let mut fast_state = AugmentState::new(&base);
    let mut generic_matrix = base.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = 0u64;
    let mut added = 0usize;
    let opts = VerifyOptions::default();

    while draws < budget {
        draws += 1;
        let mut z = vec![0i64; rows];
        z[0] = 1;
        for v in z.iter_mut().skip(1) {
            *v = if rng.random::<bool>() { 1 } else { -1 };
        }
        let accepted = match fast_state.as_mut() {
            Some(state) => match state.try_append(&z) {
                Some(ok) => {
                    if ok {
                        generic_matrix = state.matrix.clone();
                    }
                    ok
                }
                None => {
                    // integer headroom exceeded; fall back for good
                    fast_state = None;
                    try_append_generic(&mut generic_matrix, &z, &opts)?
                }
            },
            None => try_append_generic(&mut generic_matrix, &z, &opts)?,
        };
        if accepted {
            added += 1;
        }
    }

    let matrix = CodeMatrix::try_from_int(generic_matrix, Alphabet::Pm1)?;
    let descriptor = partitioned_on_lex_basis(&format!("{}_aug{added}", desc.name), matrix)?;
    Ok(Augmented {
        descriptor,
        base_cols,
        added,
        budget_exhausted: added < augment_floor(desc.rows()),
        draws,
    })
}

fn try_append_generic(
    current: &mut IntMatrix,
    z: &[i64],
    opts: &VerifyOptions,
) -> Result<bool, ConstructError> {
    let candidate = current.with_column(z);
    let code = CodeMatrix::try_from_int(candidate.clone(), Alphabet::Pm1)?;
    let verdict = verify::verify_fast_with(&code, opts)?;
    if verdict.is_errorless {
        *current = candidate;
        Ok(true)
    } else {
        Ok(false)
    }
}

// ---------------------------------------------------------------------------
// Descriptor files
// ---------------------------------------------------------------------------

/// Writes `<stem>.mat` plus `<stem>.desc` (and, for Kronecker codes,
/// `<stem>.P.mat` with a nested `<stem>.C.desc`) into `dir`. Returns the
/// files written, descriptor first.
pub fn save_descriptor(
    desc: &CodeDescriptor,
    dir: &Path,
    stem: &str,
) -> Result<Vec<PathBuf>, ConstructError> {
    let mut written = Vec::new();
    let mat_name = format!("{stem}.mat");
    fs::write(dir.join(&mat_name), desc.matrix.to_text())?;
    let mut text = String::new();
    let _ = writeln!(text, "name {}", desc.name);
    let _ = writeln!(text, "matrix {mat_name}");
    match &desc.structure {
        Structure::Plain => {
            let _ = writeln!(text, "structure plain");
        }
        Structure::Partitioned { basis } => {
            let split = basis.len();
            if basis.iter().copied().eq(0..split) {
                let _ = writeln!(text, "structure part {split}");
            } else {
                let list: Vec<String> = basis.iter().map(|c| c.to_string()).collect();
                let _ = writeln!(text, "structure part-cols {}", list.join(" "));
            }
        }
        Structure::Kronecker { p, c } => {
            let p_name = format!("{stem}.P.mat");
            let c_stem = format!("{stem}.C");
            fs::write(dir.join(&p_name), p.to_text())?;
            written.push(dir.join(&p_name));
            let mut nested = save_descriptor(c, dir, &c_stem)?;
            written.append(&mut nested);
            let _ = writeln!(text, "structure kron {p_name} {c_stem}.desc");
        }
    }
    let desc_path = dir.join(format!("{stem}.desc"));
    fs::write(&desc_path, text)?;
    written.insert(0, desc_path);
    written.insert(1, dir.join(mat_name));
    Ok(written)
}

/// Reads a matrix text file.
pub fn load_matrix(path: &Path) -> Result<CodeMatrix, ConstructError> {
    Ok(CodeMatrix::from_text(&fs::read_to_string(path)?)?)
}

/// Reads a descriptor file; `matrix`/`kron` paths resolve relative to the
/// descriptor's directory. Structural invariants are re-validated.
pub fn load_descriptor(path: &Path) -> Result<CodeDescriptor, ConstructError> {
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let text = fs::read_to_string(path)?;
    let mut name: Option<String> = None;
    let mut matrix: Option<CodeMatrix> = None;
    let mut structure: Option<Structure> = None;
    for (lno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let key = toks.next().unwrap();
        let err = |msg: &str| ConstructError::Parse {
            line: lno + 1,
            msg: msg.to_string(),
        };
        match key {
            "name" => name = Some(toks.collect::<Vec<_>>().join(" ")),
            "matrix" => {
                let rel = toks.next().ok_or_else(|| err("matrix needs a path"))?;
                matrix = Some(load_matrix(&dir.join(rel))?);
            }
            "structure" => {
                let kind = toks.next().ok_or_else(|| err("structure needs a kind"))?;
                structure = Some(match kind {
                    "plain" => Structure::Plain,
                    "part" => {
                        let split: usize = toks
                            .next()
                            .and_then(|t| t.parse().ok())
                            .ok_or_else(|| err("part needs a split index"))?;
                        Structure::Partitioned {
                            basis: (0..split).collect(),
                        }
                    }
                    "part-cols" => {
                        let basis: Option<Vec<usize>> =
                            toks.by_ref().map(|t| t.parse().ok()).collect();
                        Structure::Partitioned {
                            basis: basis.ok_or_else(|| err("part-cols needs indices"))?,
                        }
                    }
                    "kron" => {
                        let p_rel = toks.next().ok_or_else(|| err("kron needs a P path"))?;
                        let c_rel = toks
                            .next()
                            .ok_or_else(|| err("kron needs a C descriptor path"))?;
                        let p = load_matrix(&dir.join(p_rel))?;
                        let c = load_descriptor(&dir.join(c_rel))?;
                        Structure::Kronecker { p, c: Box::new(c) }
                    }
                    other => return Err(err(&format!("unknown structure `{other}`"))),
                });
            }
            other => return Err(err(&format!("unknown key `{other}`"))),
        }
    }
    let matrix = matrix.ok_or(ConstructError::Parse {
        line: 0,
        msg: "descriptor missing `matrix` line".into(),
    })?;
    CodeDescriptor::new(
        name.unwrap_or_else(|| "unnamed".into()),
        matrix,
        structure.unwrap_or(Structure::Plain),
    )
}
