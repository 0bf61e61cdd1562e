//! Multivariate polynomials over [`Scalar`] in up to three variables,
//! with the exact operations the analysis pipeline is built from:
//! ring arithmetic, linear substitution, triangular substitution,
//! partial derivatives and the symbolic Hessian determinant.

use super::scalar::Scalar;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Inputs above this total degree are rejected at parse time.
pub const MAX_INPUT_DEGREE: u32 = 64;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("syntax error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("total degree {0} exceeds the input cap of {MAX_INPUT_DEGREE}")]
    DegreeCap(u32),
    #[error("variable x{0} outside the declared variable set")]
    VariableRange(usize),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
}

/// Exponent triple; unused trailing variables carry exponent 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn one() -> Self {
        Monomial([0, 0, 0])
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0u32; 3];
        e[i] = 1;
        Monomial(e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }
}

// Canonical term order: by total degree, then lexicographically descending,
// so iteration yields e.g. x1^3, x1^2*x2, x1^4*x3 in that sequence.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact polynomial with canonical (graded) term order and no stored zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: u8,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: u8) -> Self {
        assert!((1..=3).contains(&nvars));
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar, nvars: u8) -> Self {
        let mut p = Polynomial::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(i: usize, nvars: u8) -> Self {
        assert!(i < nvars as usize);
        Polynomial::monomial(Monomial::var(i), Scalar::one(), nvars)
    }

    pub fn monomial(m: Monomial, c: Scalar, nvars: u8) -> Self {
        for v in nvars as usize..3 {
            assert_eq!(m.0[v], 0, "exponent on variable outside nvars");
        }
        let mut p = Polynomial::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: u8, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> u8 {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one())
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Largest exponent of `var` across terms.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Smallest exponent of `var` across terms (0 for the zero polynomial).
    pub fn min_degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).min().unwrap_or(0)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    pub fn vars_used(&self) -> Vec<usize> {
        (0..self.nvars as usize).filter(|&v| self.depends_on(v)).collect()
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::constant(Scalar::one(), self.nvars);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Exact partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut me = *m;
            me.0[var] -= 1;
            out.add_term(me, c * &Scalar::from_int(e as i64));
        }
        out
    }

    /// Substitutes `var := repl` (which may itself mention `var`).
    pub fn substitute(&self, var: usize, repl: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, repl.nvars, "nvars mismatch");
        let max_pow = self.degree_in(var);
        let powers = power_table(repl, max_pow);
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut rest = *m;
            let e = rest.0[var];
            rest.0[var] = 0;
            let base = Polynomial::monomial(rest, c.clone(), self.nvars);
            out = out.add(&base.mul(&powers[e as usize]));
        }
        out
    }

    /// Computes φ(A·x) for an invertible 3×3 matrix (nvars must be 3).
    pub fn compose_linear(&self, map: &LinearMap3) -> Polynomial {
        assert_eq!(self.nvars, 3, "compose_linear needs a trivariate polynomial");
        // linear forms L_i(x) = sum_j A[i][j] x_j replace each variable
        let forms: Vec<Polynomial> = (0..3)
            .map(|i| {
                let mut f = Polynomial::zero(3);
                for (j, form) in map.entries[i].iter().enumerate() {
                    f.add_term(Monomial::var(j), form.clone());
                }
                f
            })
            .collect();
        let tables: Vec<Vec<Polynomial>> = (0..3)
            .map(|i| power_table(&forms[i], self.degree_in(i)))
            .collect();
        let mut out = Polynomial::zero(3);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(c.clone(), 3);
            for v in 0..3 {
                if m.0[v] > 0 {
                    t = t.mul(&tables[v][m.0[v] as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Relabels variables by a permutation `perm` (new index `i` reads `perm[i]`).
    pub fn permute_vars(&self, perm: [usize; 3]) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = [0u32; 3];
            for (i, &p) in perm.iter().enumerate() {
                e[p] = m.0[i];
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Exact evaluation at a scalar point.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert!(point.len() >= self.nvars as usize);
        let tables: Vec<Vec<Scalar>> = (0..self.nvars as usize)
            .map(|v| scalar_power_table(&point[v], self.degree_in(v)))
            .collect();
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in 0..self.nvars as usize {
                if m.0[v] > 0 {
                    t = &t * &tables[v][m.0[v] as usize];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// The symbolic 3×3 Hessian determinant det(D²φ).
    pub fn hessian_det(&self) -> Polynomial {
        assert_eq!(self.nvars, 3, "hessian_det needs a trivariate polynomial");
        let h = self.hessian();
        // expand along the first row using 2x2 minors
        let m11 = h[1][1].mul(&h[2][2]).sub(&h[1][2].mul(&h[1][2]));
        let m12 = h[0][1].mul(&h[2][2]).sub(&h[1][2].mul(&h[0][2]));
        let m13 = h[0][1].mul(&h[1][2]).sub(&h[1][1].mul(&h[0][2]));
        h[0][0]
            .mul(&m11)
            .sub(&h[0][1].mul(&m12))
            .add(&h[0][2].mul(&m13))
    }

    /// Matrix of second partials (symmetric; only the upper triangle is distinct).
    pub fn hessian(&self) -> [[Polynomial; 3]; 3] {
        let d: Vec<Polynomial> = (0..3).map(|i| self.derivative(i)).collect();
        std::array::from_fn(|i| std::array::from_fn(|j| d[i].derivative(j)))
    }

    /// Dense coefficients when the polynomial involves only `var`.
    pub fn univariate_in(&self, var: usize) -> Option<Vec<Scalar>> {
        let mut coeffs = vec![Scalar::zero(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            for v in 0..3 {
                if v != var && m.0[v] != 0 {
                    return None;
                }
            }
            coeffs[m.0[var] as usize] = c.clone();
        }
        Some(coeffs)
    }

    pub fn from_univariate(coeffs: &[Scalar], var: usize, nvars: u8) -> Polynomial {
        let mut p = Polynomial::zero(nvars);
        for (e, c) in coeffs.iter().enumerate() {
            let mut m = Monomial::one();
            m.0[var] = e as u32;
            p.add_term(m, c.clone());
        }
        p
    }

    /// Reinterprets with a larger variable count (embedding).
    pub fn with_nvars(&self, nvars: u8) -> Polynomial {
        assert!(nvars >= self.nvars);
        Polynomial { nvars, terms: self.terms.clone() }
    }

    /// Drops unused trailing variables from the declared count.
    pub fn shrink_nvars(&self, nvars: u8) -> Polynomial {
        for v in nvars as usize..3 {
            assert!(!self.depends_on(v), "polynomial depends on dropped variable");
        }
        Polynomial { nvars, terms: self.terms.clone() }
    }

    /// Terms as float coefficient/exponent pairs for numeric evaluation.
    pub fn to_f64_terms(&self) -> Vec<(f64, [u32; 3])> {
        self.terms.iter().map(|(m, c)| (c.to_f64(), m.0)).collect()
    }
}

fn power_table(p: &Polynomial, n: u32) -> Vec<Polynomial> {
    let mut t = Vec::with_capacity(n as usize + 1);
    t.push(Polynomial::constant(Scalar::one(), p.nvars));
    for k in 1..=n as usize {
        let next = t[k - 1].mul(p);
        t.push(next);
    }
    t
}

fn scalar_power_table(x: &Scalar, n: u32) -> Vec<Scalar> {
    let mut t = Vec::with_capacity(n as usize + 1);
    t.push(Scalar::one());
    for k in 1..=n as usize {
        let next = &t[k - 1] * x;
        t.push(next);
    }
    t
}

/// Invertible 3×3 matrix of exact scalars; `entries[i][j]` multiplies `x_j`
/// in the i-th coordinate of `A·x`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearMap3 {
    entries: [[Scalar; 3]; 3],
    det: Scalar,
}

impl LinearMap3 {
    pub fn new(entries: [[Scalar; 3]; 3]) -> Result<Self, AlgebraError> {
        let det = det3(&entries);
        if det.is_zero() {
            return Err(AlgebraError::SingularMatrix);
        }
        Ok(LinearMap3 { entries, det })
    }

    pub fn identity() -> Self {
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { Scalar::one() } else { Scalar::zero() })
        });
        LinearMap3 { entries, det: Scalar::one() }
    }

    pub fn from_columns(cols: [[Scalar; 3]; 3]) -> Result<Self, AlgebraError> {
        let entries = std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone()));
        LinearMap3::new(entries)
    }

    pub fn from_i64(entries: [[i64; 3]; 3]) -> Result<Self, AlgebraError> {
        LinearMap3::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| Scalar::from_int(entries[i][j]))
        }))
    }

    /// Permutation matrix swapping variables `i` and `j`.
    pub fn swap(i: usize, j: usize) -> Self {
        let mut entries: [[Scalar; 3]; 3] = std::array::from_fn(|r| {
            std::array::from_fn(|c| if r == c { Scalar::one() } else { Scalar::zero() })
        });
        entries[i][i] = Scalar::zero();
        entries[j][j] = Scalar::zero();
        entries[i][j] = Scalar::one();
        entries[j][i] = Scalar::one();
        LinearMap3 { entries, det: -Scalar::one() }
    }

    pub fn det(&self) -> &Scalar {
        &self.det
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[[Scalar; 3]; 3] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> [Scalar; 3] {
        std::array::from_fn(|i| self.entries[i][j].clone())
    }

    /// Matrix product `self · rhs` (composition: x ↦ self·(rhs·x)).
    pub fn mul(&self, rhs: &LinearMap3) -> LinearMap3 {
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut s = Scalar::zero();
                for k in 0..3 {
                    s = &s + &(&self.entries[i][k] * &rhs.entries[k][j]);
                }
                s
            })
        });
        LinearMap3 { entries, det: &self.det * &rhs.det }
    }

    /// Swaps columns `i` and `j` (right-multiplication by a transposition).
    pub fn with_swapped_columns(&self, i: usize, j: usize) -> LinearMap3 {
        let mut entries = self.entries.clone();
        for row in entries.iter_mut() {
            row.swap(i, j);
        }
        LinearMap3 { entries, det: -self.det.clone() }
    }

    /// Applies the map to a vector of scalars.
    pub fn apply_vec(&self, v: &[Scalar; 3]) -> [Scalar; 3] {
        std::array::from_fn(|i| {
            let mut s = Scalar::zero();
            for j in 0..3 {
                s = &s + &(&self.entries[i][j] * &v[j]);
            }
            s
        })
    }
}

fn det3(m: &[[Scalar; 3]; 3]) -> Scalar {
    let t1 = &m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1]));
    let t2 = &m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]));
    let t3 = &m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]));
    &(&t1 - &t2) + &t3
}

impl fmt::Debug for LinearMap3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..3 {
            writeln!(
                f,
                "  [{}, {}, {}]",
                self.entries[i][0], self.entries[i][1], self.entries[i][2]
            )?;
        }
        write!(f, "]")
    }
}

// ---------------------------------------------------------------------------
// Text grammar
// ---------------------------------------------------------------------------

impl Polynomial {
    /// Parses the ASCII polynomial grammar: terms joined by `+`/`-`, each an
    /// optional rational coefficient and `*`-separated `xN^k` powers.
    pub fn parse(text: &str, nvars: u8) -> Result<Polynomial, AlgebraError> {
        assert!((1..=3).contains(&nvars));
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let mut out = Polynomial::zero(nvars);

        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };

        skip_ws(&mut pos);
        if pos == bytes.len() {
            return Err(AlgebraError::Parse { offset: 0, msg: "empty input".into() });
        }

        let mut first = true;
        while pos < bytes.len() {
            skip_ws(&mut pos);
            if pos == bytes.len() {
                break;
            }
            // sign
            let mut negative = false;
            match bytes[pos] {
                b'+' => {
                    pos += 1;
                }
                b'-' => {
                    negative = true;
                    pos += 1;
                }
                _ if first => {}
                other => {
                    return Err(AlgebraError::Parse {
                        offset: pos,
                        msg: format!("expected `+` or `-`, found `{}`", other as char),
                    });
                }
            }
            first = false;
            skip_ws(&mut pos);
            let (mono, coeff) = parse_term(bytes, &mut pos, nvars)?;
            let coeff = if negative { -coeff } else { coeff };
            out.add_term(mono, coeff);
            skip_ws(&mut pos);
        }

        let deg = out.degree();
        if deg > MAX_INPUT_DEGREE {
            return Err(AlgebraError::DegreeCap(deg));
        }
        Ok(out)
    }
}

fn parse_term(
    bytes: &[u8],
    pos: &mut usize,
    nvars: u8,
) -> Result<(Monomial, Scalar), AlgebraError> {
    let mut coeff = num_rational::BigRational::from_integer(num_bigint::BigInt::from(1));
    let mut mono = Monomial::one();
    let mut saw_factor = false;

    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos >= bytes.len() {
            break;
        }
        match bytes[*pos] {
            b'0'..=b'9' => {
                let r = parse_number(bytes, pos)?;
                coeff *= r;
                saw_factor = true;
            }
            b'x' => {
                let start = *pos;
                *pos += 1;
                if *pos >= bytes.len() || !bytes[*pos].is_ascii_digit() {
                    return Err(AlgebraError::Parse {
                        offset: start,
                        msg: "variable must be x1, x2 or x3".into(),
                    });
                }
                let mut idx = 0usize;
                while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                    idx = idx * 10 + (bytes[*pos] - b'0') as usize;
                    *pos += 1;
                }
                if idx == 0 || idx > nvars as usize {
                    return Err(AlgebraError::VariableRange(idx));
                }
                let mut exp = 1u32;
                if *pos < bytes.len() && bytes[*pos] == b'^' {
                    *pos += 1;
                    if *pos >= bytes.len() || !bytes[*pos].is_ascii_digit() {
                        return Err(AlgebraError::Parse {
                            offset: *pos,
                            msg: "expected exponent digits after `^`".into(),
                        });
                    }
                    let mut e = 0u64;
                    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                        e = e * 10 + (bytes[*pos] - b'0') as u64;
                        if e > MAX_INPUT_DEGREE as u64 {
                            return Err(AlgebraError::DegreeCap(e.min(u32::MAX as u64) as u32));
                        }
                        *pos += 1;
                    }
                    exp = e as u32;
                }
                mono.0[idx - 1] += exp;
                saw_factor = true;
            }
            b'.' => {
                return Err(AlgebraError::Parse {
                    offset: *pos,
                    msg: "non-rational literal; write p/q instead".into(),
                });
            }
            other => {
                if !saw_factor {
                    return Err(AlgebraError::Parse {
                        offset: *pos,
                        msg: format!("expected a coefficient or variable, found `{}`", other as char),
                    });
                }
                break;
            }
        }
        // optional `*` between factors
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'*' {
            *pos += 1;
        } else {
            break;
        }
    }

    if !saw_factor {
        return Err(AlgebraError::Parse {
            offset: *pos,
            msg: "empty term".into(),
        });
    }
    Ok((mono, Scalar::from_rational(coeff)))
}

fn parse_number(
    bytes: &[u8],
    pos: &mut usize,
) -> Result<num_rational::BigRational, AlgebraError> {
    use num_bigint::BigInt;
    let start = *pos;
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos < bytes.len() && bytes[*pos] == b'.' {
        return Err(AlgebraError::Parse {
            offset: *pos,
            msg: "non-rational literal; write p/q instead".into(),
        });
    }
    let numer: BigInt = std::str::from_utf8(&bytes[start..*pos])
        .unwrap()
        .parse()
        .map_err(|_| AlgebraError::Parse { offset: start, msg: "bad integer".into() })?;
    let mut denom = BigInt::from(1);
    // lookahead for `/digits` (a fraction, as opposed to any other use of `/`)
    let save = *pos;
    let mut ws = *pos;
    while ws < bytes.len() && bytes[ws].is_ascii_whitespace() {
        ws += 1;
    }
    if ws < bytes.len() && bytes[ws] == b'/' {
        let mut p = ws + 1;
        while p < bytes.len() && bytes[p].is_ascii_whitespace() {
            p += 1;
        }
        let dstart = p;
        while p < bytes.len() && bytes[p].is_ascii_digit() {
            p += 1;
        }
        if dstart == p {
            return Err(AlgebraError::Parse { offset: ws, msg: "expected digits after `/`".into() });
        }
        denom = std::str::from_utf8(&bytes[dstart..p])
            .unwrap()
            .parse()
            .map_err(|_| AlgebraError::Parse { offset: dstart, msg: "bad integer".into() })?;
        if denom == BigInt::from(0) {
            return Err(AlgebraError::Parse { offset: dstart, msg: "zero denominator".into() });
        }
        *pos = p;
    } else {
        *pos = save;
    }
    Ok(num_rational::BigRational::new(numer, denom))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let is_const = m.degree() == 0;
            let (sign_neg, body) = if c.is_rational() {
                let neg = c.is_negative();
                let abs = c.abs();
                let coeff_str = if abs.is_one() && !is_const { None } else { Some(abs.to_string()) };
                (neg, render_term(coeff_str, m))
            } else {
                // quadratic coefficients carry their own sign in parentheses
                (false, render_term(Some(format!("({c})")), m))
            };
            if first {
                if sign_neg {
                    write!(f, "-")?;
                }
                write!(f, "{body}")?;
                first = false;
            } else if sign_neg {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

fn render_term(coeff: Option<String>, m: &Monomial) -> String {
    let mut parts: Vec<String> = Vec::new();
    if let Some(c) = coeff {
        parts.push(c);
    }
    for (i, &e) in m.0.iter().enumerate() {
        if e == 1 {
            parts.push(format!("x{}", i + 1));
        } else if e > 1 {
            parts.push(format!("x{}^{}", i + 1, e));
        }
    }
    if parts.is_empty() {
        parts.push("1".into());
    }
    parts.join("*")
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3(s: &str) -> Polynomial {
        Polynomial::parse(s, 3).unwrap()
    }

    #[test]
    fn parse_single_monomial() {
        let p = p3("x1^2*x2");
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coeff(&Monomial([2, 1, 0])), Scalar::one());
    }

    #[test]
    fn parse_three_terms() {
        let p = p3("x1^3 + x1^2*x2 + x1^4*x3");
        assert_eq!(p.num_terms(), 3);
        for m in [[3, 0, 0], [2, 1, 0], [4, 0, 1]] {
            assert_eq!(p.coeff(&Monomial(m)), Scalar::one());
        }
    }

    #[test]
    fn parse_cancellation() {
        let p = p3("2/3*x1 - x1");
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coeff(&Monomial([1, 0, 0])), Scalar::from_ratio(-1, 3));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Polynomial::parse("x4", 3),
            Err(AlgebraError::VariableRange(4))
        ));
        assert!(matches!(
            Polynomial::parse("1.5*x1", 3),
            Err(AlgebraError::Parse { .. })
        ));
        assert!(matches!(
            Polynomial::parse("x1^70", 3),
            Err(AlgebraError::DegreeCap(_))
        ));
        let err = Polynomial::parse("x1 + @", 3).unwrap_err();
        match err {
            AlgebraError::Parse { offset, .. } => assert_eq!(offset, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ring_ops() {
        let a = p3("x1+x2");
        let b = p3("x1-x2");
        assert_eq!(a.mul(&b), p3("x1^2-x2^2"));
        assert!(a.add(&a.neg()).is_zero());
        let sq = p3("x2-x1^2").pow(2);
        assert_eq!(sq, p3("x2^2-2*x1^2*x2+x1^4"));
    }

    #[test]
    fn compose_linear_cases() {
        let phi = p3("x1^2");
        assert_eq!(phi.compose_linear(&LinearMap3::identity()), phi);
        assert_eq!(phi.compose_linear(&LinearMap3::swap(0, 1)), p3("x2^2"));
        // shear x1 -> x1, x2 -> x2 + x1
        let shear = LinearMap3::from_i64([[1, 0, 0], [1, 1, 0], [0, 0, 1]]).unwrap();
        assert_eq!(p3("x1*x2").compose_linear(&shear), p3("x1*x2+x1^2"));
    }

    #[test]
    fn substitution() {
        let phi = p3("x2-x1^2").pow(2);
        let repl = p3("x2+x1^2");
        assert_eq!(phi.substitute(1, &repl), p3("x2^2"));
        assert_eq!(p3("x1").substitute(1, &repl), p3("x1"));
        assert_eq!(p3("x1^2*x2").substitute(1, &p3("x2+x1")), p3("x1^2*x2+x1^3"));
    }

    #[test]
    fn derivatives() {
        assert_eq!(p3("x1^3").derivative(0), p3("3*x1^2"));
        assert!(p3("x1^2*x2").derivative(2).is_zero());
        assert_eq!(p3("x1^2*x2^2").derivative(1), p3("2*x1^2*x2"));
        // mixed partials commute
        let q = p3("x1^3*x2 + x2^2*x3 - 5*x1*x2*x3");
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(q.derivative(i).derivative(j), q.derivative(j).derivative(i));
            }
        }
    }

    #[test]
    fn hessian_determinants() {
        assert_eq!(p3("x1^2+x2^2+x3^2").hessian_det(), p3("8"));
        assert!(p3("x1^2*x2^2").hessian_det().is_zero());
        assert!(p3("x1^3+x1^2*x2+x1^4*x3").hessian_det().is_zero());
    }

    #[test]
    fn hessian_chain_rule() {
        // det D²(φ∘A) = det(A)² · (det D²φ)∘A
        let phi = p3("x1^3 + 2*x1*x2*x3 - x2^4 + x3^2");
        let a = LinearMap3::from_i64([[1, 2, 0], [0, 1, 1], [1, 0, 1]]).unwrap();
        let lhs = phi.compose_linear(&a).hessian_det();
        let det2 = &(a.det() * a.det());
        let rhs = phi.hessian_det().compose_linear(&a).scale(det2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn printer_roundtrip() {
        for s in [
            "x1^3 + x1^2*x2 + x1^4*x3",
            "x2^2 - 2*x1^2*x2 + x1^4",
            "1/2*x1 - 7/3*x2^5 + x3",
        ] {
            let p = p3(s);
            let q = Polynomial::parse(&p.to_string(), 3).unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn printer_order_matches_grammar() {
        assert_eq!(p3("x1^4*x3 + x1^2*x2 + x1^3").to_string(), "x1^3 + x1^2*x2 + x1^4*x3");
        assert_eq!(p3("-x2^2+x1^2").to_string(), "x1^2 - x2^2");
    }

    #[test]
    fn compose_associativity() {
        let phi = p3("x1^2*x2 - x3^3 + x1*x2*x3");
        let a = LinearMap3::from_i64([[1, 1, 0], [0, 1, 0], [2, 0, 1]]).unwrap();
        let b = LinearMap3::from_i64([[1, 0, 1], [1, 1, 0], [0, 0, 1]]).unwrap();
        let lhs = phi.compose_linear(&a).compose_linear(&b);
        let rhs = phi.compose_linear(&a.mul(&b));
        assert_eq!(lhs, rhs);
    }
}
