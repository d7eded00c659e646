//! Sparse multivariate polynomials over complex coefficients.
//!
//! Terms are stored in a map keyed by exponent vectors under graded
//! lexicographic order, which fixes the serialization order and makes
//! equality canonical. Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::PolyError;
use crate::uni::UniPoly;

/// Exponent vector of a single term. Ordered graded-lex: total degree
/// first, then lexicographic on entries.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExpVec(pub Vec<u32>);

impl ExpVec {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Line a + x*b with real offset `a` and strictly positive direction `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineLine {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl AffineLine {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self, PolyError> {
        if a.len() != b.len() {
            return Err(PolyError::LineDimMismatch(a.len(), b.len()));
        }
        for &bi in &b {
            if !(bi > 0.0) {
                return Err(PolyError::NonPositiveScale(bi));
            }
        }
        Ok(AffineLine { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }
}

/// Sparse multivariate polynomial with complex coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<ExpVec, Complex64>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Complex64::new(1.0, 0.0))
    }

    /// The monomial x_i (0-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exp = vec![0; nvars];
        exp[i] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.add_term(exp, Complex64::new(1.0, 0.0));
        p
    }

    pub fn monomial(nvars: usize, exp: Vec<u32>, c: Complex64) -> Self {
        assert_eq!(exp.len(), nvars);
        let mut p = MultiPoly::zero(nvars);
        p.add_term(exp, c);
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Complex64)>,
    ) -> Result<Self, PolyError> {
        let mut p = MultiPoly::zero(nvars);
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(PolyError::NvarsMismatch(exp.len(), nvars));
            }
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(PolyError::NonFiniteCoefficient);
            }
            p.add_term(exp, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exp: Vec<u32>, c: Complex64) {
        debug_assert_eq!(exp.len(), self.nvars);
        let key = ExpVec(exp);
        let entry = self.terms.entry(key.clone()).or_insert(Complex64::ZERO);
        *entry += c;
        // drop exact cancellations to keep the form canonical
        if entry.re == 0.0 && entry.im == 0.0 {
            self.terms.remove(&key);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Complex64 {
        self.terms
            .get(&ExpVec(exp.to_vec()))
            .copied()
            .unwrap_or(Complex64::ZERO)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e.0[i]).max().unwrap_or(0)
    }

    /// Largest coefficient magnitude; 0 for the zero polynomial.
    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// True when every coefficient is real up to `tol` relative to the
    /// largest coefficient magnitude.
    pub fn is_real(&self, tol: f64) -> bool {
        let scale = self.max_coeff_norm().max(1e-300);
        self.terms.values().all(|c| c.im.abs() <= tol * scale)
    }

    pub fn max_imag_part(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn add(&self, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if self.nvars != g.nvars {
            return Err(PolyError::NvarsMismatch(self.nvars, g.nvars));
        }
        let mut out = self.clone();
        for (e, c) in &g.terms {
            out.add_term(e.0.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.add(&g.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, c: Complex64) -> MultiPoly {
        if c.re == 0.0 && c.im == 0.0 {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
        if self.nvars != g.nvars {
            return Err(PolyError::NvarsMismatch(self.nvars, g.nvars));
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (ef, cf) in &self.terms {
            for (eg, cg) in &g.terms {
                let exp: Vec<u32> = ef.0.iter().zip(&eg.0).map(|(a, b)| a + b).collect();
                out.add_term(exp, cf * cg);
            }
        }
        Ok(out)
    }

    pub fn partial_derivative(&self, i: usize) -> Result<MultiPoly, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[i];
            if k == 0 {
                continue;
            }
            let mut exp = e.0.clone();
            exp[i] = k - 1;
            out.add_term(exp, c * Complex64::new(k as f64, 0.0));
        }
        Ok(out)
    }

    /// Substitute x_i := s*x_i + t (s, t complex) by Horner on the slices
    /// in x_i. Building block for `substitute_affine`.
    pub fn subst_var_linear(&self, i: usize, s: Complex64, t: Complex64) -> Result<MultiPoly, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let n = self.degree_in(i);
        // slices f_k with the x_i exponent zeroed, kept in the same ambient space
        let mut slices: Vec<MultiPoly> = (0..=n).map(|_| MultiPoly::zero(self.nvars)).collect();
        for (e, c) in &self.terms {
            let k = e.0[i] as usize;
            let mut exp = e.0.clone();
            exp[i] = 0;
            slices[k].add_term(exp, *c);
        }
        let lin = MultiPoly::var(self.nvars, i)
            .scale(s)
            .add(&MultiPoly::constant(self.nvars, t))?;
        let mut acc = slices[n as usize].clone();
        for k in (0..n).rev() {
            acc = acc.mul(&lin)?.add(&slices[k as usize])?;
        }
        Ok(acc)
    }

    /// f(scale_1*x_1 + shift_1, ..., scale_d*x_d + shift_d).
    ///
    /// Scales must be strictly positive reals; shifts may be complex with
    /// non-negative imaginary part.
    pub fn substitute_affine(
        &self,
        shifts: &[Complex64],
        scales: &[f64],
    ) -> Result<MultiPoly, PolyError> {
        if shifts.len() != self.nvars {
            return Err(PolyError::NvarsMismatch(shifts.len(), self.nvars));
        }
        if scales.len() != self.nvars {
            return Err(PolyError::NvarsMismatch(scales.len(), self.nvars));
        }
        for &s in scales {
            if !(s > 0.0) {
                return Err(PolyError::NonPositiveScale(s));
            }
        }
        for &t in shifts {
            if t.im < 0.0 {
                return Err(PolyError::NegativeImagShift(t.im));
            }
        }
        let mut out = self.clone();
        for i in 0..self.nvars {
            out = out.subst_var_linear(i, Complex64::new(scales[i], 0.0), shifts[i])?;
        }
        Ok(out)
    }

    /// Fix x_i := c and drop the variable; result has nvars - 1 variables.
    pub fn specialize(&self, i: usize, c: Complex64) -> Result<MultiPoly, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = MultiPoly::zero(self.nvars - 1);
        for (e, v) in &self.terms {
            let k = e.0[i];
            let mut exp = e.0.clone();
            exp.remove(i);
            out.add_term(exp, v * c.powu(k));
        }
        Ok(out)
    }

    /// Substitute x_j := x_i and drop variable j.
    pub fn merge_variables(&self, i: usize, j: usize) -> Result<MultiPoly, PolyError> {
        if i == j {
            return Err(PolyError::SameVariable(i));
        }
        for &idx in &[i, j] {
            if idx >= self.nvars {
                return Err(PolyError::IndexOutOfRange {
                    index: idx,
                    nvars: self.nvars,
                });
            }
        }
        let keep_i = if i > j { i - 1 } else { i };
        let mut out = MultiPoly::zero(self.nvars - 1);
        for (e, v) in &self.terms {
            let mut exp = e.0.clone();
            let ej = exp[j];
            exp.remove(j);
            exp[keep_i] += ej;
            out.add_term(exp, *v);
        }
        Ok(out)
    }

    /// The univariate polynomial x |-> f(a + x*b).
    pub fn restrict_line(&self, line: &AffineLine) -> Result<UniPoly, PolyError> {
        if line.dim() != self.nvars {
            return Err(PolyError::LineDimMismatch(line.dim(), self.nvars));
        }
        // per-variable powers of (a_i + b_i x), reused across terms
        let mut pows: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let deg = self.degree_in(i) as usize;
            let mut table = Vec::with_capacity(deg + 1);
            table.push(vec![Complex64::new(1.0, 0.0)]);
            let lin = [
                Complex64::new(line.a[i], 0.0),
                Complex64::new(line.b[i], 0.0),
            ];
            for k in 1..=deg {
                let prev = &table[k - 1];
                let mut next = vec![Complex64::ZERO; prev.len() + 1];
                for (p, &cp) in prev.iter().enumerate() {
                    next[p] += cp * lin[0];
                    next[p + 1] += cp * lin[1];
                }
                table.push(next);
            }
            pows.push(table);
        }
        let mut coeffs = vec![Complex64::ZERO; self.total_degree() as usize + 1];
        for (e, c) in &self.terms {
            let mut acc = vec![*c];
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                acc = conv(&acc, &pows[i][k as usize]);
            }
            for (p, v) in acc.into_iter().enumerate() {
                coeffs[p] += v;
            }
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Reverse in variable x_i: f = sum f_k x_i^k maps to
    /// sum f_k (-x_i)^(n-k) where n is the degree in x_i.
    pub fn reverse_var(&self, i: usize) -> Result<MultiPoly, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let n = self.degree_in(i);
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[i];
            let mut exp = e.0.clone();
            exp[i] = n - k;
            let sign = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
            out.add_term(exp, c * Complex64::new(sign, 0.0));
        }
        Ok(out)
    }

    /// Reverse every variable without a sign change: exponent vector i
    /// maps to e - i, where e_k is the degree in x_k. Requires real
    /// coefficients.
    pub fn full_reverse(&self) -> Result<MultiPoly, PolyError> {
        if !self.is_real(1e-12) {
            return Err(PolyError::NonRealCoefficients(self.max_imag_part()));
        }
        let degs: Vec<u32> = (0..self.nvars).map(|i| self.degree_in(i)).collect();
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let exp: Vec<u32> = e.0.iter().zip(&degs).map(|(k, d)| d - k).collect();
            out.add_term(exp, *c);
        }
        Ok(out)
    }

    /// Sum of the terms of highest total degree.
    pub fn top_form(&self) -> Result<MultiPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let n = self.total_degree();
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.total_degree() == n {
                out.add_term(e.0.clone(), *c);
            }
        }
        Ok(out)
    }

    /// Coefficient of x_i^k as a polynomial in the remaining variables.
    pub fn coefficient_slice(&self, i: usize, k: u32) -> Result<MultiPoly, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let degree = self.degree_in(i);
        if k > degree {
            return Err(PolyError::SliceOutOfRange { k, degree });
        }
        let mut out = MultiPoly::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            if e.0[i] != k {
                continue;
            }
            let mut exp = e.0.clone();
            exp.remove(i);
            out.add_term(exp, *c);
        }
        Ok(out)
    }

    /// Append `extra` fresh variables (exponent 0 everywhere), at the end.
    pub fn extend_vars(&self, extra: usize) -> MultiPoly {
        let nvars = self.nvars + extra;
        MultiPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut exp = e.0.clone();
                    exp.extend(std::iter::repeat(0).take(extra));
                    (ExpVec(exp), *c)
                })
                .collect(),
        }
    }

    /// Embed into a larger variable set, placing variable k at offset + k.
    pub fn embed(&self, total: usize, offset: usize) -> MultiPoly {
        assert!(offset + self.nvars <= total);
        MultiPoly {
            nvars: total,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut exp = vec![0u32; total];
                    exp[offset..offset + self.nvars].copy_from_slice(&e.0);
                    (ExpVec(exp), *c)
                })
                .collect(),
        }
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Complex64::ZERO;
        for (e, c) in &self.terms {
            let mut term = *c;
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    term *= point[i].powu(k);
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_real(&self, point: &[f64]) -> Complex64 {
        let pt: Vec<Complex64> = point.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.eval(&pt)
    }

    /// View a univariate polynomial (nvars == 1) as a UniPoly.
    pub fn to_uni(&self) -> Result<UniPoly, PolyError> {
        if self.nvars != 1 {
            return Err(PolyError::NvarsMismatch(self.nvars, 1));
        }
        let mut coeffs = vec![Complex64::ZERO; self.total_degree() as usize + 1];
        for (e, c) in &self.terms {
            coeffs[e.0[0] as usize] = *c;
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn from_uni(p: &UniPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(1);
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.re != 0.0 || c.im != 0.0 {
                out.add_term(vec![k as u32], *c);
            }
        }
        out
    }
}

fn conv(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// JSON format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    nvars: usize,
    terms: Vec<TermJson>,
}

impl MultiPoly {
    /// Serialize to the polynomial JSON format; terms in graded-lex order.
    pub fn to_json(&self) -> String {
        let doc = PolyJson {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: e.0.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("polynomial JSON serialization")
    }

    pub fn from_json(s: &str) -> Result<MultiPoly, PolyError> {
        let doc: PolyJson =
            serde_json::from_str(s).map_err(|e| PolyError::BadJson(e.to_string()))?;
        let mut seen = std::collections::HashSet::new();
        let mut p = MultiPoly::zero(doc.nvars);
        for t in &doc.terms {
            if t.exp.len() != doc.nvars {
                return Err(PolyError::BadJson(format!(
                    "exponent vector length {} != nvars {}",
                    t.exp.len(),
                    doc.nvars
                )));
            }
            if !seen.insert(t.exp.clone()) {
                return Err(PolyError::BadJson(format!(
                    "duplicate exponent vector {:?}",
                    t.exp
                )));
            }
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(PolyError::BadJson("non-finite coefficient".into()));
            }
            if t.re.abs() < 1e-300 && t.im.abs() < 1e-300 {
                return Err(PolyError::BadJson(format!(
                    "denormal coefficient ({}, {}) at {:?}",
                    t.re, t.im, t.exp
                )));
            }
            p.add_term(t.exp.clone(), Complex64::new(t.re, t.im));
        }
        Ok(p)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            for (i, &k) in e.0.iter().enumerate() {
                if k == 1 {
                    write!(f, "*x{}", i + 1)?;
                } else if k > 1 {
                    write!(f, "*x{}^{}", i + 1, k)?;
                }
            }
        }
        Ok(())
    }
}
