//! Hecke operators on q-expansions.
//!
//! The coefficient-level action `T_n` works on any series over the integer
//! exponent grid, including Laurent series such as `j`.  On top of it sit
//! exact operator matrices on the level-1 cusp bases, eigenform data with
//! exact eigenvalues through degree 2 (Sturm-isolated numerical roots
//! beyond), the classical polynomial action on `j`, Euler-product
//! reconstruction of coefficient tables, and numerical Fricke-involution
//! checks for level-`N` forms.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::gcd;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{divisors, factorize, is_prime, moebius, KroneckerLabel};
use crate::dims::dim_sk_level1;
use crate::error::{Error, Result};
use crate::forms::{mk_basis, sk_basis, to_basis, FormDesc, NamedForm};
use crate::numeric::{eval_form, BigFloat, BigFloatC, EvalContext};
use crate::qexp::QExp;
use crate::rat::{rat, rat_from_str, rat_i, rat_to_str};
use crate::Rational;

/// `d^e` as an exact rational, with negative exponents allowed (the
/// weight-0 action uses `d^{−1}`).
fn dpow(d: u64, e: i64) -> Rational {
    let p = BigInt::from(d).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// The Hecke operator `T_n` in weight `k` on level `level`, acting on
/// coefficients as
///
/// `b(m) = Σ_{d | gcd(m,n), gcd(d,level)=1} d^{k−1} a(mn/d²)`,
///
/// where every `d | n` contributes at `m = 0`.  Weight 0 gives the action
/// on modular functions (each divisor weighted by `d^{−1}`).
///
/// The input must live on the integer exponent grid.  The output carries
/// the largest window the input determines: exponents from `n·offset`
/// (Laurent series) or `⌈offset/n⌉` up to `⌊(end−1)/n⌋`, where `end` is the
/// input's exclusive window end.  An input too short to determine even one
/// output coefficient is reported as `InsufficientPrecision`.
pub fn hecke_action(f: &QExp, k: i64, n: u64, level: u64) -> Result<QExp> {
    if n == 0 {
        return Err(Error::BadN(0));
    }
    if f.offset_den() != 1 {
        return Err(Error::BadInput(
            "Hecke action needs a series on the integer exponent grid".into(),
        ));
    }
    let off = f.offset_num();
    let end = off + f.prec() as i64;
    if end < 1 {
        return Err(Error::InsufficientPrecision { needed: (1 - off) as usize, have: f.prec() });
    }
    let n_i = n as i64;
    let m_lo = if off < 0 { off * n_i } else { (off + n_i - 1) / n_i };
    let m_hi = (end - 1).div_euclid(n_i);
    if m_hi < m_lo {
        let needed = (m_lo * n_i + 1 - off).max(1) as usize;
        return Err(Error::InsufficientPrecision { needed, have: f.prec() });
    }
    let divs = divisors(n);
    let mut coeffs = Vec::with_capacity((m_hi - m_lo + 1) as usize);
    for m in m_lo..=m_hi {
        let mut b = Rational::zero();
        for &d in &divs {
            if (m != 0 && m % (d as i64) != 0) || gcd(d, level) != 1 {
                continue;
            }
            let idx = m * n_i / (d * d) as i64;
            if idx < off {
                continue; // structurally zero, below the leading exponent
            }
            let a = &f.coeffs()[(idx - off) as usize];
            if !a.is_zero() {
                b += dpow(d, k - 1) * a;
            }
        }
        coeffs.push(b);
    }
    QExp::from_parts(m_lo, 1, coeffs)
}

/// Verifies the composition law
///
/// `T_n T_m = Σ_{d | gcd(n,m)} d^{k−1} T_{nm/d²}`
///
/// on every monomial of the weight-`k` level-1 basis, comparing exact
/// coefficients over the common output window.
pub fn hecke_compose_check(n: u64, m: u64, k: i64, prec: usize) -> Result<bool> {
    if n == 0 || m == 0 {
        return Err(Error::BadN(n.min(m)));
    }
    for f in mk_basis(k, prec)? {
        let lhs = hecke_action(&hecke_action(&f.series, k, m, 1)?, k, n, 1)?;
        let mut rhs: Option<QExp> = None;
        for d in divisors(gcd(n, m)) {
            let term = hecke_action(&f.series, k, n / d * (m / d), 1)?.scale(&dpow(d, k - 1));
            rhs = Some(match rhs {
                None => term,
                Some(acc) => acc.add(&term),
            });
        }
        let rhs = rhs.expect("gcd has at least the divisor 1");
        let shared = lhs.prec().min(rhs.prec());
        if shared == 0 {
            return Err(Error::InsufficientPrecision { needed: n as usize * m as usize, have: prec });
        }
        if !lhs.truncated(shared).sub(&rhs.truncated(shared)).is_zero_series() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dense matrix over the rationals, row-major.
///
/// Serializes as a JSON array of rows, each entry a `"num/den"` string
/// (plain integers when the denominator is 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::BadInput(format!(
                "matrix wants {}x{} = {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        RatMatrix { rows: n, cols: n, entries }
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::BadInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut s = Rational::zero();
                for t in 0..self.cols {
                    s += self.at(i, t) * other.at(t, j);
                }
                entries.push(s);
            }
        }
        Ok(RatMatrix { rows: self.rows, cols: other.cols, entries })
    }

    pub fn trace(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "trace needs a square matrix");
        (0..self.rows).map(|i| self.at(i, i)).sum()
    }

    /// Monic characteristic polynomial `det(xI − A)` in ascending powers,
    /// via the Faddeev–LeVerrier recurrence (exact rational arithmetic).
    pub fn charpoly(&self) -> Vec<Rational> {
        assert_eq!(self.rows, self.cols, "characteristic polynomial needs a square matrix");
        let n = self.rows;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut m = RatMatrix::identity(n);
        for i in 1..=n {
            m = self.mul(&m).expect("square times square");
            let c = -(m.trace() / rat_i(i as i64));
            for j in 0..n {
                let idx = j * n + j;
                m.entries[idx] = &m.entries[idx] + &c;
            }
            coeffs[n - i] = c;
        }
        coeffs
    }

    pub fn det(&self) -> Rational {
        let n = self.rows;
        let c0 = self.charpoly().swap_remove(0);
        if n % 2 == 0 {
            c0
        } else {
            -c0
        }
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| rat_to_str(self.at(i, j))).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Deserialize::deserialize(deserializer)?;
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(D::Error::custom("ragged matrix rows"));
            }
            for s in row {
                entries.push(rat_from_str(s).map_err(D::Error::custom)?);
            }
        }
        Ok(RatMatrix { rows: r, cols: c, entries })
    }
}

/// The matrix of `T_n` on the cusp space `S_k` of level 1, in the
/// `sk_basis` ordering; column `j` holds the coordinates of the image of
/// the `j`-th basis form.
pub fn hecke_matrix(k: i64, n: u64) -> Result<RatMatrix> {
    let dim = dim_sk_level1(k)? as usize;
    if dim == 0 {
        return RatMatrix::new(0, 0, vec![]);
    }
    let prec = n as usize * (dim + 6) + 8;
    let basis = sk_basis(k, prec)?;
    let mut entries = vec![Rational::zero(); dim * dim];
    for (j, f) in basis.iter().enumerate() {
        let image = hecke_action(&f.series, k, n, 1)?;
        let image = NamedForm::new("hecke image", FormDesc::level1(2 * k, true), image);
        let coords = to_basis(&image, &basis)?;
        for (i, c) in coords.into_iter().enumerate() {
            entries[i * dim + j] = c;
        }
    }
    RatMatrix::new(dim, dim, entries)
}

/// Eigenvalue of a Hecke operator, kept exact through degree 2.
#[derive(Debug, Clone, PartialEq)]
pub enum Eigenvalue {
    Rational(Rational),
    /// `a + b√d` with `d > 1` squarefree.
    Quadratic { a: Rational, b: Rational, d: i64 },
    /// Bisected real root of the exact characteristic polynomial, used
    /// when the eigenvalue degree exceeds 2.
    Approximate(f64),
}

/// One normalized Hecke eigenform, described through the operator `T_2`.
///
/// Scalars attached to the form live in `Q(√d)` and are encoded as pairs
/// `(u, v) = u + v√d`; the second component is zero whenever the
/// eigenvalue is rational.  For eigenvalues of degree ≥ 3 only the exact
/// characteristic polynomial and a numerical eigenvalue are reported, and
/// the coordinate/coefficient lists stay empty.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenData {
    /// Characteristic polynomial of `T_2` on `S_k`, monic, ascending powers.
    pub charpoly: Vec<Rational>,
    pub eigenvalue: Eigenvalue,
    /// Coordinates of the eigenform in the `sk_basis` ordering.
    pub coordinates: Vec<(Rational, Rational)>,
    /// Coefficients `a(1), a(2), …` of the normalized eigenform.
    pub coefficients: Vec<(Rational, Rational)>,
}

/// Number of leading eigenform coefficients reported by [`eigenforms`].
const EIGEN_COEFFS: usize = 16;

/// `√x` when `x` is the square of a rational.
fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let rn = x.numer().sqrt();
    let rd = x.denom().sqrt();
    (&rn * &rn == *x.numer() && &rd * &rd == *x.denom()).then(|| Rational::new(rn, rd))
}

/// Writes a positive non-square rational as `x = b²·d` with `d > 1` a
/// squarefree integer, returning `(b, d)`.  Fails when the factorization
/// does not fit the machine-word factorizer.
fn split_squarefree(x: &Rational) -> Result<(Rational, i64)> {
    let t = (x.numer() * x.denom())
        .to_u64()
        .ok_or_else(|| Error::BadInput("discriminant too large for exact root splitting".into()))?;
    let mut square = BigInt::one();
    let mut free: u64 = 1;
    for (p, e) in factorize(t) {
        square *= BigInt::from(p).pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
    }
    // √(n/m) = √(nm)/m = (square·√free)/m
    Ok((Rational::new(square, x.denom().clone()), free as i64))
}

// --- exact univariate polynomials (ascending coefficients) ---

fn poly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_eval(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

fn poly_derive(p: &[Rational]) -> Vec<Rational> {
    let d: Vec<Rational> =
        p.iter().enumerate().skip(1).map(|(i, c)| c * rat_i(i as i64)).collect();
    poly_trim(if d.is_empty() { vec![Rational::zero()] } else { d })
}

fn poly_is_zero(p: &[Rational]) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Quotient and remainder of `a / b` for `b ≠ 0`.
fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![Rational::zero(); a.len().saturating_sub(db)];
    while r.len() > db {
        if r.last().is_some_and(Zero::is_zero) {
            if r.len() == 1 {
                break;
            }
            r.pop();
            continue;
        }
        let shift = r.len() - 1 - db;
        let factor = r.last().expect("nonempty") / &b[db];
        for i in 0..=db {
            let t = &b[i] * &factor;
            r[shift + i] = &r[shift + i] - &t;
        }
        q[shift] = factor;
        r.pop(); // the leading term cancelled exactly
        if r.is_empty() {
            r.push(Rational::zero());
        }
    }
    if q.is_empty() {
        q.push(Rational::zero());
    }
    (poly_trim(q), poly_trim(r))
}

fn poly_monic(p: Vec<Rational>) -> Vec<Rational> {
    let lead = p.last().expect("nonempty polynomial").clone();
    if lead.is_zero() || lead.is_one() {
        return p;
    }
    p.into_iter().map(|c| c / &lead).collect()
}

fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = poly_trim(a.to_vec());
    let mut y = poly_trim(b.to_vec());
    while !poly_is_zero(&y) {
        let (_, r) = poly_divmod(&x, &y);
        x = y;
        y = r;
    }
    poly_monic(x)
}

/// Sturm chain of a squarefree polynomial.
fn sturm_chain(p: &[Rational]) -> Vec<Vec<Rational>> {
    let mut chain = vec![poly_trim(p.to_vec()), poly_derive(p)];
    loop {
        let last = &chain[chain.len() - 1];
        if last.len() == 1 {
            break;
        }
        let (_, r) = poly_divmod(&chain[chain.len() - 2], last);
        if poly_is_zero(&r) {
            break;
        }
        chain.push(r.iter().map(|c| -c).collect());
    }
    chain
}

fn sign_variations(chain: &[Vec<Rational>], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in chain {
        let v = poly_eval(p, x);
        let s = if v.is_zero() {
            0
        } else if v.is_negative() {
            -1
        } else {
            1
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// All distinct real roots of `p`, Sturm-isolated and then bisected down to
/// `f64` resolution.  Roots are returned in ascending order.
fn real_roots_f64(p: &[Rational]) -> Vec<f64> {
    let p = poly_trim(p.to_vec());
    if p.len() <= 1 {
        return vec![];
    }
    let deriv = poly_derive(&p);
    let g = poly_gcd(&p, &deriv);
    let sf = if g.len() > 1 { poly_divmod(&p, &g).0 } else { p };
    let chain = sturm_chain(&sf);
    let lead = sf.last().expect("nonempty").clone();
    let bound = sf
        .iter()
        .map(|c| (c / &lead).abs())
        .fold(Rational::zero(), |m, v| if v > m { v } else { m })
        + Rational::one();
    let neg = -bound.clone();
    let v_lo = sign_variations(&chain, &neg);
    let v_hi = sign_variations(&chain, &bound);
    let mut isolated = Vec::new();
    let mut stack = vec![(neg, bound, v_lo, v_hi)];
    while let Some((a, b, va, vb)) = stack.pop() {
        match va - vb {
            0 => {}
            1 => isolated.push((a, b, vb)),
            _ => {
                let mid = &(&a + &b) / &rat_i(2);
                let vm = sign_variations(&chain, &mid);
                stack.push((a, mid.clone(), va, vm));
                stack.push((mid, b, vm, vb));
            }
        }
    }
    let mut roots: Vec<f64> = isolated
        .into_iter()
        .map(|(mut a, mut b, vb)| {
            for _ in 0..140 {
                let mid = &(&a + &b) / &rat_i(2);
                if sign_variations(&chain, &mid) == vb {
                    b = mid; // the root lies in (a, mid]
                } else {
                    a = mid;
                }
            }
            b.to_f64().expect("root bounded by the coefficient bound")
        })
        .collect();
    roots.sort_by(|x, y| x.partial_cmp(y).expect("finite roots"));
    roots
}

/// Normalized Hecke eigenforms of the level-1 cusp space `S_k`, described
/// through `T_2`.  Eigenvalues of degree ≤ 2 come out exact (rational, or
/// `a + b√d` with squarefree `d`); higher degree falls back to the exact
/// characteristic polynomial plus numerical roots.  Quadratic conjugate
/// pairs are listed `+√d` first.
pub fn eigenforms(k: i64) -> Result<Vec<EigenData>> {
    let m = hecke_matrix(k, 2)?;
    let dim = m.rows;
    if dim == 0 {
        return Ok(vec![]);
    }
    let cp = m.charpoly();
    let basis = sk_basis(k, EIGEN_COEFFS + dim + 4)?;
    match dim {
        1 => {
            let f = &basis[0].series;
            let coefficients = (1..=EIGEN_COEFFS as i64)
                .map(|i| Ok((f.coeff_int(i)?, Rational::zero())))
                .collect::<Result<_>>()?;
            Ok(vec![EigenData {
                charpoly: cp,
                eigenvalue: Eigenvalue::Rational(m.at(0, 0).clone()),
                coordinates: vec![(Rational::one(), Rational::zero())],
                coefficients,
            }])
        }
        2 => {
            let disc = &(&cp[1] * &cp[1]) - &(rat_i(4) * &cp[0]);
            if let Some(r) = rational_sqrt(&disc) {
                let half = rat(1, 2);
                let lam_hi = (&r - &cp[1]) * &half;
                let lam_lo = (-&r - &cp[1]) * &half;
                let mut out = Vec::new();
                for lam in [lam_hi, lam_lo] {
                    out.push(rational_eigen_data(&m, &basis, &cp, lam)?);
                }
                Ok(out)
            } else {
                match split_squarefree(&disc) {
                    Ok((s, d)) => quadratic_eigen_pair(&m, &basis, &cp, s, d),
                    Err(_) => Ok(approximate_eigen_data(&cp)),
                }
            }
        }
        _ => Ok(approximate_eigen_data(&cp)),
    }
}

fn approximate_eigen_data(cp: &[Rational]) -> Vec<EigenData> {
    real_roots_f64(cp)
        .into_iter()
        .map(|r| EigenData {
            charpoly: cp.to_vec(),
            eigenvalue: Eigenvalue::Approximate(r),
            coordinates: vec![],
            coefficients: vec![],
        })
        .collect()
}

/// Eigenform data for a rational eigenvalue of a 2×2 Hecke matrix.
fn rational_eigen_data(
    m: &RatMatrix,
    basis: &[NamedForm],
    cp: &[Rational],
    lam: Rational,
) -> Result<EigenData> {
    // null vector of M − λI from whichever row is nonzero
    let r0 = (m.at(0, 0) - &lam, m.at(0, 1).clone());
    let r1 = (m.at(1, 0).clone(), m.at(1, 1) - &lam);
    let w = if !r0.0.is_zero() || !r0.1.is_zero() {
        (-r0.1, r0.0)
    } else if !r1.0.is_zero() || !r1.1.is_zero() {
        (-r1.1, r1.0)
    } else {
        (Rational::one(), Rational::zero()) // scalar matrix: basis vectors work
    };
    let g = basis[0].series.scale(&w.0).add(&basis[1].series.scale(&w.1));
    let lead = g.coeff_int(1)?;
    if lead.is_zero() {
        return Err(Error::InternalInconsistency(
            "eigenform has vanishing leading coefficient".into(),
        ));
    }
    let g = g.scale(&lead.recip());
    let coefficients = (1..=EIGEN_COEFFS as i64)
        .map(|i| Ok((g.coeff_int(i)?, Rational::zero())))
        .collect::<Result<_>>()?;
    Ok(EigenData {
        charpoly: cp.to_vec(),
        eigenvalue: Eigenvalue::Rational(lam),
        coordinates: vec![(&w.0 / &lead, Rational::zero()), (&w.1 / &lead, Rational::zero())],
        coefficients,
    })
}

/// The conjugate pair of eigenforms for an irreducible quadratic
/// characteristic polynomial `x² + c₁x + c₀` with discriminant `(2s)²…`,
/// written over `Q(√d)`: eigenvalues `a ± b√d` with `a = −c₁/2`, `b = s/2`.
fn quadratic_eigen_pair(
    m: &RatMatrix,
    basis: &[NamedForm],
    cp: &[Rational],
    s: Rational,
    d: i64,
) -> Result<Vec<EigenData>> {
    let a = -&cp[1] * rat(1, 2);
    let b = s * rat(1, 2);
    let mut out = Vec::new();
    for sign in [1i64, -1] {
        let bs = &b * rat_i(sign);
        // eigenvector (M₀₁, λ − M₀₀); M₀₁ ≠ 0 since the eigenvalue is irrational
        let w0 = (m.at(0, 1).clone(), Rational::zero());
        let w1 = (&a - m.at(0, 0), bs.clone());
        let gu = basis[0].series.scale(&w0.0).add(&basis[1].series.scale(&w1.0));
        let gv = basis[1].series.scale(&w1.1);
        let cu = gu.coeff_int(1)?;
        let cv = gv.coeff_int(1)?;
        // divide u + v√d through by cu + cv√d
        let den = &(&cu * &cu) - &(rat_i(d) * &cv * &cv);
        if den.is_zero() {
            return Err(Error::InternalInconsistency(
                "eigenform has vanishing leading coefficient".into(),
            ));
        }
        let inv = den.recip();
        let up = gu.scale(&cu).sub(&gv.scale(&(rat_i(d) * &cv))).scale(&inv);
        let vp = gv.scale(&cu).sub(&gu.scale(&cv)).scale(&inv);
        let divide = |(u, v): (Rational, Rational)| {
            ((&(&u * &cu) - &(rat_i(d) * &v * &cv)) * &inv, (&(&v * &cu) - &(&u * &cv)) * &inv)
        };
        let coefficients = (1..=EIGEN_COEFFS as i64)
            .map(|i| Ok((up.coeff_int(i)?, vp.coeff_int(i)?)))
            .collect::<Result<_>>()?;
        out.push(EigenData {
            charpoly: cp.to_vec(),
            eigenvalue: Eigenvalue::Quadratic { a: a.clone(), b: bs, d },
            coordinates: vec![divide(w0), divide(w1)],
            coefficients,
        });
    }
    Ok(out)
}

/// Tests whether the characteristic polynomial of `T_n` on `S_k` is
/// irreducible over `Q` (the Maeda property).  Dimensions 0 and 1 are
/// trivially irreducible; above dimension 2 exact factoring is out of
/// scope and the call reports `UnsupportedDimension`.
pub fn maeda_check(k: i64, n: u64) -> Result<bool> {
    let m = hecke_matrix(k, n)?;
    match m.rows {
        0 | 1 => Ok(true),
        2 => {
            let cp = m.charpoly();
            let disc = &(&cp[1] * &cp[1]) - &(rat_i(4) * &cp[0]);
            Ok(rational_sqrt(&disc).is_none())
        }
        dim => Err(Error::UnsupportedDimension(dim)),
    }
}

/// Writes `f` as a polynomial `Σ cᵢ gⁱ` of degree `deg` in a Laurent
/// series `g` with leading term `q^{−1}`, by eliminating principal parts.
/// Every further coefficient inside the shared window must then vanish;
/// a nonzero residual means `f` is not such a polynomial and reports
/// `InternalInconsistency`.  Coefficients come back in ascending powers.
pub fn laurent_to_polynomial(f: &QExp, g: &QExp, deg: usize) -> Result<Vec<Rational>> {
    if f.offset_den() != 1 || g.offset_den() != 1 {
        return Err(Error::BadInput("polynomial reduction needs integer exponent grids".into()));
    }
    if g.offset_num() != -1 || g.coeffs().first().is_none_or(Zero::is_zero) {
        return Err(Error::BadInput("base series must start with q^{-1}".into()));
    }
    let mut powers: Vec<QExp> = vec![QExp::one(g.prec())];
    for _ in 0..deg {
        powers.push(powers.last().expect("nonempty").mul(g));
    }
    let mut r = f.clone();
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for i in (1..=deg).rev() {
        let c = r.coeff_int(-(i as i64))?;
        if !c.is_zero() {
            r = r.sub(&powers[i].scale(&c));
        }
        coeffs[i] = c;
    }
    let end = r.offset_num() + r.prec() as i64;
    if end < 2 {
        return Err(Error::InsufficientPrecision { needed: deg + 3, have: f.prec() });
    }
    coeffs[0] = r.coeff_int(0)?;
    for (idx, v) in r.coeffs().iter().enumerate() {
        let e = r.offset_num() + idx as i64;
        if e != 0 && !v.is_zero() {
            return Err(Error::InternalInconsistency(format!(
                "residual q^{e} term after eliminating powers of the base"
            )));
        }
    }
    Ok(coeffs)
}

/// The weight-0 Hecke action on the modular invariant: `T_n(j)` expanded as
/// a degree-`n` polynomial in `j`, ascending coefficients.  The classical
/// examples are `T_2(j) = j²/2 − 744j + 81000` and
/// `T_3(j) = j³/3 − 744j² + 356652j − 12288000`.
pub fn tn_on_j(n: u64) -> Result<Vec<Rational>> {
    if n == 0 {
        return Err(Error::BadN(0));
    }
    let deg = n as usize;
    let prec = n as usize * (deg + 6) + 4;
    let j = crate::forms::jfunction(prec);
    let image = hecke_action(&j.series, 0, n, 1)?;
    laurent_to_polynomial(&image, &j.series, deg)
}

/// Local Euler factor `1 − a_p X + χ(p) p^{k−1} X²` of a weight-`k` form of
/// the given level and Kronecker character, as its coefficient triple.  At
/// primes dividing the level the quadratic term drops out.
pub fn euler_factor(
    a_p: &Rational,
    p: u64,
    k: i64,
    level: u64,
    character: KroneckerLabel,
) -> Result<(Rational, Rational, Rational)> {
    if !is_prime(p) {
        return Err(Error::BadInput(format!("{p} is not prime")));
    }
    let last = if level % p == 0 {
        Rational::zero()
    } else {
        rat_i(character.eval(p as i64) as i64) * dpow(p, k - 1)
    };
    Ok((Rational::one(), -a_p.clone(), last))
}

/// Rebuilds the coefficients `a(1), …, a(nmax)` of a normalized eigenform
/// from its prime table via the Euler product: prime powers through
/// `a(p^{e+1}) = a_p a(p^e) − χ(p) p^{k−1} a(p^{e−1})` and multiplicativity
/// across coprime factors.  A prime `≤ nmax` missing from the table is
/// reported as `MissingPrime`.
pub fn coefficients_from_euler(
    aps: &[(u64, Rational)],
    k: i64,
    level: u64,
    character: KroneckerLabel,
    nmax: u64,
) -> Result<Vec<Rational>> {
    if nmax == 0 {
        return Err(Error::BadN(0));
    }
    let table: HashMap<u64, &Rational> = aps.iter().map(|(p, a)| (*p, a)).collect();
    let mut a = vec![Rational::zero(); nmax as usize + 1];
    a[1] = Rational::one();
    for p in 2..=nmax {
        if !is_prime(p) {
            continue;
        }
        let ap = *table.get(&p).ok_or(Error::MissingPrime(p))?;
        let chi_pk = if level % p == 0 {
            Rational::zero()
        } else {
            rat_i(character.eval(p as i64) as i64) * dpow(p, k - 1)
        };
        let mut prev = Rational::one();
        let mut cur = ap.clone();
        let mut pe = p;
        loop {
            a[pe as usize] = cur.clone();
            match pe.checked_mul(p) {
                Some(next) if next <= nmax => {
                    let t = &(ap * &cur) - &(&chi_pk * &prev);
                    prev = cur;
                    cur = t;
                    pe = next;
                }
                _ => break,
            }
        }
    }
    for n in 2..=nmax as usize {
        let p = (2..).find(|p| n % p == 0).expect("composite has a prime factor");
        let mut pe = p;
        while (n / pe) % p == 0 {
            pe *= p;
        }
        if pe != n {
            a[n] = &a[pe] * &a[n / pe];
        }
    }
    Ok(a[1..].to_vec())
}

/// Numerically reads off the Fricke eigenvalue of a level-`N` form: the
/// involution `W_N` acts as `F ↦ N^{−k/2} τ^{−k} F(−1/(Nτ))`, and for an
/// eigenvector the value at `τ₀ = 1.2i/√N` pins the sign.  Returns `+1` or
/// `−1` when the ratio sits within `10^{−digits/2}` of one of them, and
/// `Inconclusive` otherwise.  The form's stored series must be long enough
/// to evaluate at height `im τ₀ / 1.44`.
pub fn fricke_sign(f: &NamedForm, prec_digits: u32) -> Result<i32> {
    let ctx = EvalContext::new(prec_digits.max(15))?;
    if f.desc.weight2 % 2 != 0 || f.desc.weight2 < 0 {
        return Err(Error::BadInput("Fricke sign needs a nonnegative integer weight".into()));
    }
    let k = f.desc.weight2 / 2;
    let level = f.desc.level;
    let sqrt_level = BigFloat::from_i64(level as i64, &ctx).sqrt();
    let y0 = &BigFloat::from_rat(&rat(6, 5), &ctx) / &sqrt_level;
    let tau0 = BigFloatC::new(BigFloat::zero(&ctx), y0.clone());
    // −1/(N·τ₀) for purely imaginary τ₀ is again purely imaginary
    let tau1 = BigFloatC::new(BigFloat::zero(&ctx), y0.mul_i64(level as i64).recip());
    let val0 = eval_form(f, &tau0, &ctx)?;
    let val1 = eval_form(f, &tau1, &ctx)?;
    if val0.is_zero() {
        return Err(Error::Inconclusive);
    }
    let scale = tau0.powi(k).mul_bf(&sqrt_level.powi(k as u32));
    let ratio = &(&val1 * &scale.recip()) * &val0.recip();
    let one = BigFloatC::from_re(BigFloat::one(&ctx));
    let tol = -((prec_digits / 2) as i64);
    if (&ratio - &one).abs().abs_lt_pow10(tol) {
        Ok(1)
    } else if (&ratio + &one).abs().abs_lt_pow10(tol) {
        Ok(-1)
    } else {
        Err(Error::Inconclusive)
    }
}

/// Checks numerically that the Möbius-weighted level-raising combination
///
/// `G(τ) = Σ_{d|N} μ(d) d^{k/2} F(dτ)`
///
/// of a level-1 weight-`k` form `F` is a Fricke eigenvector on `Γ₀(N)` with
/// eigenvalue `μ(N)`, for squarefree `N`.  The identity holds even for the
/// quasimodular `E₂`, whose anomaly cancels in the combination.  Two
/// sample points are tested against an absolute tolerance of
/// `10^{−(digits−12)}`; the supplied series should carry a couple hundred
/// coefficients at the default precision.
pub fn fricke_eta_identity_check(
    level: u64,
    k: i64,
    f: &NamedForm,
    ctx: &EvalContext,
) -> Result<bool> {
    if level == 0 || moebius(level) == 0 {
        return Err(Error::BadN(level));
    }
    if k <= 0 || k % 2 != 0 {
        return Err(Error::BadInput("the combination needs a positive even weight".into()));
    }
    let weight = |d: u64| -> Result<i64> {
        (d as i64)
            .checked_pow((k / 2) as u32)
            .map(|p| moebius(d) as i64 * p)
            .ok_or_else(|| Error::BadInput(format!("d^{{k/2}} overflows for d = {d}")))
    };
    let combo = |tau: &BigFloatC| -> Result<BigFloatC> {
        let mut acc = BigFloatC::zero(ctx);
        for d in divisors(level) {
            let v = eval_form(f, &tau.mul_i64(d as i64), ctx)?;
            acc = &acc + &v.mul_i64(weight(d)?);
        }
        Ok(acc)
    };
    let lk2 = (level as i64)
        .checked_pow((k / 2) as u32)
        .ok_or_else(|| Error::BadInput(format!("N^{{k/2}} overflows for N = {level}")))?;
    let nk2 = BigFloat::from_i64(lk2, ctx);
    let mu_level = moebius(level) as i64;
    let tol = -(ctx.precision_digits as i64 - 12);
    for (x, y) in [(rat(31, 100), rat(9, 10)), (rat(-1, 5), rat(13, 10))] {
        let tau = BigFloatC::from_rat_pair(&x, &y, ctx);
        let here = combo(&tau)?;
        let there = combo(&(-&tau.mul_i64(level as i64).recip()))?;
        let lhs = &there * &tau.powi(k).mul_bf(&nk2).recip();
        let rhs = here.mul_i64(mu_level);
        if !(&lhs - &rhs).abs().abs_lt_pow10(tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{delta, eisenstein_e, eisenstein_e2, DeltaMethod};
    use crate::qexp::eta_quotient;
    use crate::tau::{tau_table, TauMethod};

    fn level11_form(prec: usize) -> NamedForm {
        let series = eta_quotient(&[(1, 2), (11, 2)], prec).expect("valid quotient");
        let desc =
            FormDesc { weight2: 4, level: 11, character: KroneckerLabel(0), cuspidal: true };
        NamedForm::new("eta1^2 eta11^2", desc, series)
    }

    #[test]
    fn action_on_delta_and_identity_operator() {
        let d = delta(40, DeltaMethod::Eta24);
        let t1 = hecke_action(&d.series, 12, 1, 1).unwrap();
        assert_eq!(t1, d.series);
        let t2 = hecke_action(&d.series, 12, 2, 1).unwrap();
        assert_eq!(t2.prec(), 20);
        assert_eq!(t2, d.series.scale(&rat_i(-24)).truncated(20));
        // T(6) = T(2)∘T(3) on a coprime pair
        let t6 = hecke_action(&d.series, 12, 6, 1).unwrap();
        let t23 = hecke_action(&hecke_action(&d.series, 12, 3, 1).unwrap(), 12, 2, 1).unwrap();
        let shared = t6.prec().min(t23.prec());
        assert!(t6.truncated(shared).sub(&t23.truncated(shared)).is_zero_series());
        assert_eq!(t6.coeff_int(1).unwrap(), rat_i(-6048));
    }

    #[test]
    fn action_needs_integer_grid_and_enough_terms() {
        let eta = crate::qexp::pentagonal_eta(8);
        assert!(matches!(hecke_action(&eta, 1, 2, 1), Err(Error::BadInput(_))));
        let short = delta(3, DeltaMethod::Eta24);
        assert!(matches!(
            hecke_action(&short.series, 12, 5, 1),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn composition_law_on_weight12_basis() {
        assert!(hecke_compose_check(2, 3, 12, 72).unwrap());
        assert!(hecke_compose_check(2, 2, 12, 72).unwrap());
        assert!(hecke_compose_check(4, 6, 12, 150).unwrap());
    }

    #[test]
    fn matrices_and_characteristic_polynomials() {
        let m12 = hecke_matrix(12, 2).unwrap();
        assert_eq!((m12.rows, m12.cols), (1, 1));
        assert_eq!(*m12.at(0, 0), rat_i(-24));
        let m16 = hecke_matrix(16, 2).unwrap();
        assert_eq!(*m16.at(0, 0), rat_i(216));

        let m24 = hecke_matrix(24, 2).unwrap();
        assert_eq!(m24.trace(), rat_i(1080));
        assert_eq!(m24.det(), rat_i(-20468736));
        assert_eq!(m24.charpoly(), vec![rat_i(-20468736), rat_i(-1080), rat_i(1)]);
        // discriminant 1080² + 4·20468736 = 24²·144169
        let disc = rat_i(1080 * 1080 + 4 * 20468736);
        assert_eq!(disc, rat_i(576 * 144169));

        let m24_3 = hecke_matrix(24, 3).unwrap();
        assert_eq!(m24_3.trace(), rat_i(339480));
        assert_eq!(m24_3.det(), rat_i(-19020146544));

        // T(2) and T(3) commute exactly on S_24
        assert_eq!(m24.mul(&m24_3).unwrap(), m24_3.mul(&m24).unwrap());
    }

    #[test]
    fn matrix_serde_round_trip() {
        let m = hecke_matrix(24, 2).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        let back: RatMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        let scaled = RatMatrix::new(1, 2, vec![rat(1, 2), rat_i(-7)]).unwrap();
        assert_eq!(serde_json::to_string(&scaled).unwrap(), r#"[["1/2","-7"]]"#);
        assert!(serde_json::from_str::<RatMatrix>(r#"[["1","2"],["3"]]"#).is_err());
    }

    #[test]
    fn eigenforms_in_dimension_one() {
        let tab = tau_table(EIGEN_COEFFS as u64, TauMethod::Hybrid);
        let e12 = eigenforms(12).unwrap();
        assert_eq!(e12.len(), 1);
        assert_eq!(e12[0].eigenvalue, Eigenvalue::Rational(rat_i(-24)));
        for (i, (u, v)) in e12[0].coefficients.iter().enumerate() {
            assert_eq!(u, &Rational::from(tab.tau(i as u64 + 1).clone()));
            assert!(v.is_zero());
        }
        assert!(eigenforms(14).unwrap().is_empty());
        for (k, a2) in [(16, 216), (18, -528), (20, 456), (22, -288), (26, -48)] {
            let e = eigenforms(k).unwrap();
            assert_eq!(e.len(), 1, "S_{k} has dimension 1");
            assert_eq!(e[0].eigenvalue, Eigenvalue::Rational(rat_i(a2)));
            assert_eq!(e[0].coefficients[0], (Rational::one(), Rational::zero()));
            assert_eq!(e[0].coefficients[1], (rat_i(a2), Rational::zero()));
        }
    }

    #[test]
    fn eigenforms_on_s24_are_conjugate_quadratics() {
        let pair = eigenforms(24).unwrap();
        assert_eq!(pair.len(), 2);
        for (e, sign) in pair.iter().zip([1i64, -1]) {
            assert_eq!(
                e.eigenvalue,
                Eigenvalue::Quadratic { a: rat_i(540), b: rat_i(12 * sign), d: 144169 }
            );
            assert_eq!(e.charpoly, vec![rat_i(-20468736), rat_i(-1080), rat_i(1)]);
            assert_eq!(e.coefficients[0], (Rational::one(), Rational::zero()));
            assert_eq!(e.coefficients[1], (rat_i(540), rat_i(12 * sign)));
            // the √-parts of a(2) and a(3) anti-align on this eigenform
            assert_eq!(e.coefficients[2], (rat_i(169740), rat_i(-576 * sign)));
        }
    }

    /// `T_n f = a(n) f` for every eigenform and `n ≤ 50`, checked as exact
    /// series identities.  Quadratic eigenforms `f = u + v√d` split into the
    /// two rational components: `T_n u = u_n u + d v_n v` and
    /// `T_n v = u_n v + v_n u`.
    #[test]
    fn eigenform_coefficients_are_eigenvalues() {
        const NMAX: u64 = 50;
        let prec = (NMAX as usize) * 5 + 6;
        for k in [12i64, 16, 18, 20, 22, 26] {
            let f = &sk_basis(k, prec).unwrap()[0].series;
            for n in 1..=NMAX {
                let lhs = hecke_action(f, k, n, 1).unwrap();
                let an = f.coeff_int(n as i64).unwrap();
                let rhs = f.scale(&an).truncated(lhs.prec());
                assert!(lhs.sub(&rhs).is_zero_series(), "k={k} n={n}");
            }
        }
        // S_24: rebuild the eigenform components from the reported coordinates
        let pair = eigenforms(24).unwrap();
        let basis = sk_basis(24, prec).unwrap();
        let e = &pair[0];
        let d = 144169i64;
        let u = basis[0]
            .series
            .scale(&e.coordinates[0].0)
            .add(&basis[1].series.scale(&e.coordinates[1].0));
        let v = basis[0]
            .series
            .scale(&e.coordinates[0].1)
            .add(&basis[1].series.scale(&e.coordinates[1].1));
        for n in 1..=NMAX {
            let tu = hecke_action(&u, 24, n, 1).unwrap();
            let tv = hecke_action(&v, 24, n, 1).unwrap();
            let un = tu.coeff_int(1).unwrap();
            let vn = tv.coeff_int(1).unwrap();
            let p = tu.prec();
            let ru = u.scale(&un).add(&v.scale(&(rat_i(d) * &vn))).truncated(p);
            let rv = v.scale(&un).add(&u.scale(&vn)).truncated(p);
            assert!(tu.truncated(p).sub(&ru).is_zero_series(), "u component, n={n}");
            assert!(tv.truncated(p).sub(&rv).is_zero_series(), "v component, n={n}");
        }
    }

    #[test]
    fn maeda_property_in_low_weight() {
        assert!(maeda_check(12, 2).unwrap());
        assert!(maeda_check(24, 2).unwrap());
        assert!(maeda_check(24, 3).unwrap());
        assert_eq!(maeda_check(36, 2), Err(Error::UnsupportedDimension(3)));
    }

    #[test]
    fn approximate_eigenvalues_in_dimension_three() {
        let e = eigenforms(36).unwrap();
        assert_eq!(e.len(), 3);
        let trace: f64 = match hecke_matrix(36, 2).unwrap().trace().to_f64() {
            Some(t) => t,
            None => unreachable!(),
        };
        let sum: f64 = e
            .iter()
            .map(|x| match x.eigenvalue {
                Eigenvalue::Approximate(r) => r,
                _ => panic!("dimension 3 must fall back to numerical roots"),
            })
            .sum();
        assert!((sum - trace).abs() <= trace.abs() * 1e-9);
        // each root satisfies the exact characteristic polynomial to f64 scale
        let cp: Vec<f64> = e[0].charpoly.iter().map(|c| c.to_f64().unwrap()).collect();
        for x in e.iter() {
            let r = match x.eigenvalue {
                Eigenvalue::Approximate(r) => r,
                _ => unreachable!(),
            };
            let value = cp.iter().rev().fold(0.0, |acc, c| acc * r + c);
            let scale: f64 = cp.iter().enumerate().map(|(i, c)| (c * r.powi(i as i32)).abs()).sum();
            assert!(value.abs() <= scale * 1e-12, "root {r} misses the charpoly");
            assert!(x.coordinates.is_empty() && x.coefficients.is_empty());
        }
    }

    #[test]
    fn sturm_root_isolation_on_a_known_cubic() {
        // (x−1)(x−2)(x+3) = x³ − 7x + 6
        let p = vec![rat_i(6), rat_i(-7), rat_i(0), rat_i(1)];
        let roots = real_roots_f64(&p);
        assert_eq!(roots.len(), 3);
        for (r, want) in roots.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((r - want).abs() < 1e-12);
        }
        // repeated roots collapse to their distinct set
        let sq = vec![rat_i(1), rat_i(-2), rat_i(1)]; // (x−1)²
        assert_eq!(real_roots_f64(&sq).len(), 1);
    }

    #[test]
    fn action_on_j_gives_the_classical_polynomials() {
        assert_eq!(tn_on_j(2).unwrap(), vec![rat_i(81000), rat_i(-744), rat(1, 2)]);
        assert_eq!(
            tn_on_j(3).unwrap(),
            vec![rat_i(-12288000), rat_i(356652), rat_i(-744), rat(1, 3)]
        );
        // constant terms of the next few, with denominators dividing n
        for (n, c0) in [(4i64, rat_i(2126857500)), (5, rat_i(-392642297856)), (6, rat_i(75506614380000))]
        {
            let poly = tn_on_j(n as u64).unwrap();
            assert_eq!(poly[0], c0);
            for c in &poly {
                assert!((rat_i(n) * c).is_integer(), "denominator of {c} exceeds n={n}");
            }
        }
    }

    #[test]
    fn action_on_shifted_j_loses_its_linear_term() {
        // J = j − 744 satisfies T₂(J) = J²/2 − 196884
        let j = crate::forms::jfunction(40);
        let shifted = j.series.sub(&QExp::constant(rat_i(744), 40));
        let image = hecke_action(&shifted, 0, 2, 1).unwrap();
        let poly = laurent_to_polynomial(&image, &shifted, 2).unwrap();
        assert_eq!(poly, vec![rat_i(-196884), rat_i(0), rat(1, 2)]);
    }

    #[test]
    fn polynomial_reduction_rejects_foreign_series() {
        let j = crate::forms::jfunction(30);
        let d = delta(30, DeltaMethod::Eta24);
        // Δ is not a polynomial in j of degree 1
        assert!(matches!(
            laurent_to_polynomial(&d.series, &j.series, 1),
            Err(Error::InternalInconsistency(_))
        ));
        assert!(matches!(
            laurent_to_polynomial(&j.series, &d.series, 1),
            Err(Error::BadInput(_))
        ));
    }

    #[test]
    fn euler_factors_match_the_classical_shapes() {
        let (c0, c1, c2) = euler_factor(&rat_i(-24), 2, 12, 1, KroneckerLabel(0)).unwrap();
        assert_eq!((c0, c1, c2), (Rational::one(), rat_i(24), rat_i(2048)));
        // at a prime dividing the level the quadratic term vanishes
        let (_, c1, c2) = euler_factor(&rat_i(1), 11, 2, 11, KroneckerLabel(0)).unwrap();
        assert_eq!((c1, c2), (rat_i(-1), Rational::zero()));
        // the sigma Eisenstein pattern: a_p = 1 + p^{k−1}
        let (_, c1, c2) = euler_factor(&rat_i(28), 3, 4, 1, KroneckerLabel(0)).unwrap();
        assert_eq!((c1, c2), (rat_i(-28), rat_i(27)));
        assert!(matches!(
            euler_factor(&rat_i(0), 6, 12, 1, KroneckerLabel(0)),
            Err(Error::BadInput(_))
        ));
    }

    #[test]
    fn euler_product_rebuilds_tau() {
        let tab = tau_table(100, TauMethod::Hybrid);
        let aps: Vec<(u64, Rational)> = (2..=100)
            .filter(|&p| is_prime(p))
            .map(|p| (p, Rational::from(tab.tau(p).clone())))
            .collect();
        let a = coefficients_from_euler(&aps, 12, 1, KroneckerLabel(0), 100).unwrap();
        assert_eq!(a[3], rat_i(-1472)); // τ(4)
        assert_eq!(a[5], rat_i(-6048)); // τ(6)
        let d = delta(100, DeltaMethod::Eta24);
        for n in 1..=100u64 {
            assert_eq!(a[n as usize - 1], d.series.coeff_int(n as i64).unwrap(), "τ({n})");
        }
        let short: Vec<(u64, Rational)> =
            aps.iter().filter(|(p, _)| *p != 7).cloned().collect();
        assert_eq!(
            coefficients_from_euler(&short, 12, 1, KroneckerLabel(0), 100),
            Err(Error::MissingPrime(7))
        );
    }

    #[test]
    fn level_structure_respects_coprimality() {
        let f = level11_form(140);
        let away = hecke_action(&f.series, 2, 3, 11).unwrap();
        let level1 = hecke_action(&f.series, 2, 3, 1).unwrap();
        assert_eq!(away, level1);
        // at p = 11 the level drops the d = 11 divisor: the two actions
        // differ at q^{11} by 11^{k−1}·a(1) = 11
        let at_p = hecke_action(&f.series, 2, 11, 11).unwrap();
        let naive = hecke_action(&f.series, 2, 11, 1).unwrap();
        assert_eq!(
            naive.coeff_int(11).unwrap() - at_p.coeff_int(11).unwrap(),
            rat_i(11)
        );
    }

    #[test]
    fn fricke_signs_of_the_classical_forms() {
        let d = delta(60, DeltaMethod::Eta24);
        assert_eq!(fricke_sign(&d, 30).unwrap(), 1);
        assert_eq!(fricke_sign(&level11_form(140), 30).unwrap(), -1);
        // a sum of different weights is no eigenvector: the test must refuse
        let e4 = eisenstein_e(4, 60).unwrap();
        let mixed = NamedForm::new(
            "Delta plus E4",
            FormDesc::level1(24, false),
            d.series.add(&e4.series),
        );
        assert_eq!(fricke_sign(&mixed, 30), Err(Error::Inconclusive));
    }

    #[test]
    fn moebius_combinations_are_fricke_eigenvectors() {
        let ctx = EvalContext::default();
        let e4 = eisenstein_e(4, 220).unwrap();
        assert!(fricke_eta_identity_check(6, 4, &e4, &ctx).unwrap());
        let d = delta(220, DeltaMethod::Eta24);
        assert!(fricke_eta_identity_check(2, 12, &d, &ctx).unwrap());
        // the E₂ anomaly cancels across the Möbius combination
        let e2 = eisenstein_e2(220);
        assert!(fricke_eta_identity_check(6, 2, &e2, &ctx).unwrap());
        assert_eq!(fricke_eta_identity_check(12, 4, &e4, &ctx), Err(Error::BadN(12)));
    }
}
