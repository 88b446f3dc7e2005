//! Dense exact-integer matrices and the primitive algebra shared by the
//! whole toolkit: Hadamard generation, Kronecker products, and the
//! project-wide matrix text format.
//!
//! Everything that feeds an errorless verdict works in exact arithmetic;
//! floating point only appears downstream in the decoder, capacity, and
//! simulation modules.

use std::fmt;

use thiserror::Error;

/// Entry alphabet of a code matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alphabet {
    /// Antipodal entries {+1, -1} (wireless signatures).
    Pm1,
    /// On-off entries {0, 1} (optical signatures).
    ZeroOne,
}

impl Alphabet {
    /// Token used in the matrix text format header.
    pub fn token(self) -> &'static str {
        match self {
            Alphabet::Pm1 => "pm1",
            Alphabet::ZeroOne => "01",
        }
    }

    pub fn from_token(tok: &str) -> Option<Self> {
        match tok {
            "pm1" => Some(Alphabet::Pm1),
            "01" => Some(Alphabet::ZeroOne),
            _ => None,
        }
    }

    fn contains(self, v: i64) -> bool {
        match self {
            Alphabet::Pm1 => v == 1 || v == -1,
            Alphabet::ZeroOne => v == 0 || v == 1,
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix must be non-empty ({rows}x{cols})")]
    EmptyShape { rows: usize, cols: usize },
    #[error("entry {value} at ({row},{col}) is outside alphabet {alphabet}")]
    BadEntry {
        row: usize,
        col: usize,
        value: i64,
        alphabet: Alphabet,
    },
    #[error("Hadamard order {0} is not a power of two")]
    UnsupportedHadamardOrder(usize),
    #[error("Kronecker factors use different alphabets ({left} vs {right})")]
    AlphabetMismatch { left: Alphabet, right: Alphabet },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Dense row-major integer matrix. The workhorse behind both alphabets;
/// sizes in scope are small enough that sparse storage never pays off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    /// Appends one column on the right.
    pub fn with_column(&self, col: &[i64]) -> IntMatrix {
        assert_eq!(col.len(), self.rows);
        let mut out = IntMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            out.set(i, self.cols, col[i]);
        }
        out
    }

    /// Exact integer matrix-vector product.
    pub fn mul_ivec(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![0i64; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = 0i64;
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            y[i] = acc;
        }
        y
    }

    /// Matrix-vector product over f64 (decoder/simulator side).
    pub fn mul_fvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![0.0f64; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x) {
                acc += *a as f64 * b;
            }
            y[i] = acc;
        }
        y
    }

    /// Kronecker product; block (i, j) of the result is `self[i][j] * other`.
    pub fn kronecker(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let s = self.get(i, j);
                if s == 0 {
                    continue;
                }
                for r in 0..other.rows {
                    for c in 0..other.cols {
                        out.set(i * other.rows + r, j * other.cols + c, s * other.get(r, c));
                    }
                }
            }
        }
        out
    }
}

/// A {+1, -1} signature matrix: rows are chips, columns are users.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix(IntMatrix);

/// A {0, 1} signature matrix for optical systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix(IntMatrix);

impl SignMatrix {
    pub fn try_from_int(m: IntMatrix) -> Result<Self, MatrixError> {
        check_alphabet(&m, Alphabet::Pm1)?;
        Ok(SignMatrix(m))
    }

    pub fn as_int(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_int(self) -> IntMatrix {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    /// True iff the matrix is square with mutually orthogonal rows,
    /// i.e. `H * H^T = k * I`.
    pub fn is_hadamard(&self) -> bool {
        let k = self.rows();
        if self.cols() != k {
            return false;
        }
        for i in 0..k {
            for j in i..k {
                let dot: i64 = self
                    .0
                    .row(i)
                    .iter()
                    .zip(self.0.row(j))
                    .map(|(a, b)| a * b)
                    .sum();
                let want = if i == j { k as i64 } else { 0 };
                if dot != want {
                    return false;
                }
            }
        }
        true
    }
}

impl BinaryMatrix {
    pub fn try_from_int(m: IntMatrix) -> Result<Self, MatrixError> {
        check_alphabet(&m, Alphabet::ZeroOne)?;
        Ok(BinaryMatrix(m))
    }

    pub fn as_int(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_int(self) -> IntMatrix {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }
}

fn check_alphabet(m: &IntMatrix, alphabet: Alphabet) -> Result<(), MatrixError> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(MatrixError::EmptyShape {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m.get(i, j);
            if !alphabet.contains(v) {
                return Err(MatrixError::BadEntry {
                    row: i,
                    col: j,
                    value: v,
                    alphabet,
                });
            }
        }
    }
    Ok(())
}

/// A code matrix together with its alphabet tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeMatrix {
    Sign(SignMatrix),
    Binary(BinaryMatrix),
}

impl CodeMatrix {
    pub fn try_from_int(m: IntMatrix, alphabet: Alphabet) -> Result<Self, MatrixError> {
        match alphabet {
            Alphabet::Pm1 => SignMatrix::try_from_int(m).map(CodeMatrix::Sign),
            Alphabet::ZeroOne => BinaryMatrix::try_from_int(m).map(CodeMatrix::Binary),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            CodeMatrix::Sign(_) => Alphabet::Pm1,
            CodeMatrix::Binary(_) => Alphabet::ZeroOne,
        }
    }

    pub fn as_int(&self) -> &IntMatrix {
        match self {
            CodeMatrix::Sign(m) => m.as_int(),
            CodeMatrix::Binary(m) => m.as_int(),
        }
    }

    pub fn rows(&self) -> usize {
        self.as_int().rows()
    }

    pub fn cols(&self) -> usize {
        self.as_int().cols()
    }

    /// Serializes to the shared text format:
    /// `<m> <n> <alphabet>` then one line per row. Round-trips bit-exactly.
    pub fn to_text(&self) -> String {
        let m = self.as_int();
        let mut out = format!("{} {} {}\n", m.rows(), m.cols(), self.alphabet().token());
        for i in 0..m.rows() {
            let mut line = String::new();
            for j in 0..m.cols() {
                if j > 0 {
                    line.push(' ');
                }
                let v = m.get(i, j);
                match self.alphabet() {
                    Alphabet::Pm1 => line.push_str(if v == 1 { "+1" } else { "-1" }),
                    Alphabet::ZeroOne => line.push_str(if v == 1 { "1" } else { "0" }),
                }
            }
            line.push('\n');
            out.push_str(&line);
        }
        out
    }

    /// Parses the shared text format. `#` starts a comment line.
    pub fn from_text(text: &str) -> Result<Self, MatrixError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or(MatrixError::Parse {
            line: 0,
            msg: "missing header line".into(),
        })?;
        let mut parts = header.split_whitespace();
        let parse_dim = |tok: Option<&str>, line: usize| -> Result<usize, MatrixError> {
            tok.and_then(|t| t.parse::<usize>().ok())
                .ok_or(MatrixError::Parse {
                    line,
                    msg: "header must be `<m> <n> <alphabet>`".into(),
                })
        };
        let rows = parse_dim(parts.next(), hline)?;
        let cols = parse_dim(parts.next(), hline)?;
        let alphabet = parts
            .next()
            .and_then(Alphabet::from_token)
            .ok_or(MatrixError::Parse {
                line: hline,
                msg: "alphabet must be `pm1` or `01`".into(),
            })?;
        if parts.next().is_some() {
            return Err(MatrixError::Parse {
                line: hline,
                msg: "trailing tokens after header".into(),
            });
        }

        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (lno, line) = lines.next().ok_or(MatrixError::Parse {
                line: hline,
                msg: format!("expected {rows} rows"),
            })?;
            let mut count = 0;
            for tok in line.split_whitespace() {
                let v = match (alphabet, tok) {
                    (Alphabet::Pm1, "+1" | "1") => 1,
                    (Alphabet::Pm1, "-1") => -1,
                    (Alphabet::ZeroOne, "0") => 0,
                    (Alphabet::ZeroOne, "1") => 1,
                    _ => {
                        return Err(MatrixError::Parse {
                            line: lno,
                            msg: format!("bad entry `{tok}` for alphabet {alphabet}"),
                        })
                    }
                };
                data.push(v);
                count += 1;
            }
            if count != cols {
                return Err(MatrixError::Parse {
                    line: lno,
                    msg: format!("expected {cols} entries, found {count}"),
                });
            }
        }
        if let Some((lno, _)) = lines.next() {
            return Err(MatrixError::Parse {
                line: lno,
                msg: "trailing content after matrix rows".into(),
            });
        }
        CodeMatrix::try_from_int(IntMatrix { rows, cols, data }, alphabet)
    }
}

/// A {-1, 0, +1} vector; nonzero ones witness that a code is not errorless.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryVector(Vec<i8>);

impl TernaryVector {
    pub fn new(entries: Vec<i8>) -> Self {
        assert!(
            entries.iter().all(|&e| (-1..=1).contains(&e)),
            "entries must lie in {{-1, 0, 1}}"
        );
        TernaryVector(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn as_ivec(&self) -> Vec<i64> {
        self.0.iter().map(|&e| e as i64).collect()
    }
}

/// Sylvester Hadamard matrix of order `k` (a power of two). The first row
/// and column are all +1 and `H * H^T = k * I`.
pub fn hadamard(k: usize) -> Result<SignMatrix, MatrixError> {
    if k == 0 || !k.is_power_of_two() {
        return Err(MatrixError::UnsupportedHadamardOrder(k));
    }
    let h2 = IntMatrix::from_rows(vec![vec![1, 1], vec![1, -1]]);
    let mut h = IntMatrix::from_rows(vec![vec![1]]);
    while h.rows() < k {
        h = h2.kronecker(&h);
    }
    Ok(SignMatrix(h))
}

/// Kronecker product of two code matrices over the same alphabet.
pub fn kronecker(p: &CodeMatrix, c: &CodeMatrix) -> Result<CodeMatrix, MatrixError> {
    if p.alphabet() != c.alphabet() {
        return Err(MatrixError::AlphabetMismatch {
            left: p.alphabet(),
            right: c.alphabet(),
        });
    }
    CodeMatrix::try_from_int(p.as_int().kronecker(c.as_int()), p.alphabet())
}
