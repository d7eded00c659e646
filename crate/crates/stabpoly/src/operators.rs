//! Stability-preserving linear operators.
//!
//! Operators are represented by finite polynomial symbols f(x, v) in 2d
//! variables acting as T(g) = f(x, -d/dx) g: for each symbol term
//! c * x^alpha v^beta, the contribution is c * x^alpha * (-d)^beta g.
//! The symbol is stable in 2d variables exactly when T preserves
//! stability, which `preserver_test` probes with the sampled tester.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::StabError;
use crate::poly::MultiPoly;
use crate::stability::{test_stable, SampleConfig, Verdict, VerdictTag};

/// Polynomial symbol in 2d variables: the x-block occupies variables
/// 0..d, the v-block d..2d.
#[derive(Clone, Debug)]
pub struct DiffOperatorSymbol {
    symbol: MultiPoly,
    block: usize,
}

impl DiffOperatorSymbol {
    pub fn new(symbol: MultiPoly) -> Result<Self, StabError> {
        if symbol.nvars() % 2 != 0 {
            return Err(StabError::OddSymbol(symbol.nvars()));
        }
        let block = symbol.nvars() / 2;
        Ok(DiffOperatorSymbol { symbol, block })
    }

    pub fn block(&self) -> usize {
        self.block
    }

    /// The generating-function symbol f(x, v) of the operator.
    pub fn symbol_of(&self) -> &MultiPoly {
        &self.symbol
    }

    pub fn to_json(&self) -> String {
        let doc = SymbolJson {
            block_split: self.block,
            poly: serde_json::from_str(&self.symbol.to_json()).expect("valid poly JSON"),
        };
        serde_json::to_string(&doc).expect("symbol JSON")
    }

    pub fn from_json(s: &str) -> Result<Self, StabError> {
        let doc: SymbolJson = serde_json::from_str(s)
            .map_err(|e| StabError::Poly(crate::error::PolyError::BadJson(e.to_string())))?;
        let poly = MultiPoly::from_json(&serde_json::to_string(&doc.poly).unwrap())?;
        let sym = DiffOperatorSymbol::new(poly)?;
        if sym.block != doc.block_split {
            return Err(StabError::BlockMismatch(doc.block_split, sym.symbol.nvars()));
        }
        Ok(sym)
    }
}

#[derive(Serialize, Deserialize)]
struct SymbolJson {
    block_split: usize,
    #[serde(flatten)]
    poly: serde_json::Value,
}

/// Apply (-d)^exp termwise.
fn neg_partial_power(g: &MultiPoly, exp: &[u32]) -> Result<MultiPoly, StabError> {
    let mut out = g.clone();
    let mut sign = 1.0;
    for (i, &k) in exp.iter().enumerate() {
        for _ in 0..k {
            out = out.partial_derivative(i)?;
            sign = -sign;
        }
    }
    Ok(out.scale(Complex64::new(sign, 0.0)))
}

/// f(-d/dx) g: sum over terms c x^j of f of c (-d)^j g.
pub fn apply_neg_partial(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly, StabError> {
    if f.nvars() != g.nvars() {
        return Err(StabError::Poly(crate::error::PolyError::NvarsMismatch(
            f.nvars(),
            g.nvars(),
        )));
    }
    let mut out = MultiPoly::zero(g.nvars());
    for (e, c) in f.terms() {
        let contrib = neg_partial_power(g, &e.0)?;
        out = out.add(&contrib.scale(*c))?;
    }
    Ok(out)
}

/// exp(-dx . dy) f on paired variable blocks: the series
/// sum_k (-1)^k / k! (sum_i d_{x_i} d_{y_i})^k f, which terminates on
/// polynomials.
pub fn exp_neg_mixed(f: &MultiPoly) -> Result<MultiPoly, StabError> {
    if f.nvars() % 2 != 0 {
        return Err(StabError::OddSymbol(f.nvars()));
    }
    let d = f.nvars() / 2;
    let mixed = |p: &MultiPoly| -> Result<MultiPoly, StabError> {
        let mut acc = MultiPoly::zero(p.nvars());
        for i in 0..d {
            acc = acc.add(&p.partial_derivative(i)?.partial_derivative(d + i)?)?;
        }
        Ok(acc)
    };
    let mut acc = f.clone();
    let mut term = f.clone();
    let mut factor = 1.0f64;
    let mut k = 1u32;
    loop {
        term = mixed(&term)?;
        if term.is_zero() {
            break;
        }
        factor *= -1.0 / k as f64;
        acc = acc.add(&term.scale(Complex64::new(factor, 0.0)))?;
        k += 1;
    }
    Ok(acc)
}

/// T(g) for a symbol f(x, v): each term c x^alpha v^beta contributes
/// c * x^alpha * (-d)^beta g.
pub fn apply_operator(sym: &DiffOperatorSymbol, g: &MultiPoly) -> Result<MultiPoly, StabError> {
    let d = sym.block;
    if g.nvars() != d {
        return Err(StabError::BlockMismatch(d, g.nvars()));
    }
    let mut out = MultiPoly::zero(d);
    for (e, c) in sym.symbol.terms() {
        let (alpha, beta) = e.0.split_at(d);
        let diff = neg_partial_power(g, beta)?;
        if diff.is_zero() {
            continue;
        }
        let mono = MultiPoly::monomial(d, alpha.to_vec(), *c);
        out = out.add(&mono.mul(&diff)?)?;
    }
    Ok(out)
}

/// Result of probing whether a symbol's operator preserves stability.
#[derive(Clone, Debug)]
pub struct PreserverReport {
    pub verdict: Verdict,
    /// for an unstable symbol: a stable corpus member whose image is
    /// certified unstable, when the search finds one
    pub counterexample: Option<(MultiPoly, MultiPoly)>,
}

/// Test the symbol for stability in 2d variables. When a witness is
/// found, also search `corpus` (stable polynomials in d variables) for
/// a member mapped to a certified-unstable image.
pub fn preserver_test(
    sym: &DiffOperatorSymbol,
    cfg: &SampleConfig,
    corpus: &[MultiPoly],
) -> Result<PreserverReport, StabError> {
    let verdict = test_stable(&sym.symbol, cfg);
    let mut counterexample = None;
    if verdict.tag == VerdictTag::UnstableWitness {
        for g in corpus {
            if g.nvars() != sym.block {
                continue;
            }
            let image = apply_operator(sym, g)?;
            if image.is_zero() {
                continue;
            }
            if test_stable(&image, cfg).is_witness() {
                counterexample = Some((g.clone(), image));
                break;
            }
        }
    }
    Ok(PreserverReport {
        verdict,
        counterexample,
    })
}

/// Diagonal operator on a dense 2D grid: x^i y^j -> a_{ij} x^i y^j.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagonalOperator {
    pub dims: Vec<usize>,
    pub grid: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DiagonalFactorResult {
    /// a_{ij} = row_i * col_j with row_i = a_{i0}, col_j = a_{0j}/a_{00}
    Factors { row: Vec<f64>, col: Vec<f64> },
    /// a violated multiplicativity cell a_{ij} a_{i+1,j+1} != a_{i,j+1} a_{i+1,j}
    Violation { cell: (usize, usize), lhs: f64, rhs: f64 },
    /// a_{00} vanishes so the normalization is undefined
    ZeroBase,
}

/// Factor a diagonal operator into one-variable diagonal operators by
/// checking the 2x2 multiplicativity identity on every adjacent cell.
pub fn diagonal_factor(op: &DiagonalOperator) -> Result<DiagonalFactorResult, StabError> {
    let rows = op.grid.len();
    if rows == 0 || op.grid[0].is_empty() {
        return Err(StabError::EmptyGrid);
    }
    let cols = op.grid[0].len();
    let scale = op
        .grid
        .iter()
        .flatten()
        .map(|x| x.abs())
        .fold(0.0, f64::max)
        .max(1e-300);
    for i in 0..rows.saturating_sub(1) {
        for j in 0..cols.saturating_sub(1) {
            let lhs = op.grid[i][j] * op.grid[i + 1][j + 1];
            let rhs = op.grid[i][j + 1] * op.grid[i + 1][j];
            if (lhs - rhs).abs() > 1e-10 * scale * scale {
                return Ok(DiagonalFactorResult::Violation { cell: (i, j), lhs, rhs });
            }
        }
    }
    let a00 = op.grid[0][0];
    if a00 == 0.0 {
        return Ok(DiagonalFactorResult::ZeroBase);
    }
    let row: Vec<f64> = (0..rows).map(|i| op.grid[i][0]).collect();
    let col: Vec<f64> = (0..cols).map(|j| op.grid[0][j] / a00).collect();
    Ok(DiagonalFactorResult::Factors { row, col })
}

/// Physicists' Hermite polynomials H_0 = 1, H_1 = 2x,
/// H_{n+1} = 2x H_n - 2n H_{n-1}, as coefficient rows (lowest first).
fn hermite_table(max_degree: usize) -> Vec<Vec<f64>> {
    let mut table: Vec<Vec<f64>> = vec![vec![1.0], vec![0.0, 2.0]];
    for n in 1..max_degree.max(1) {
        let mut next = vec![0.0; n + 2];
        for (k, &c) in table[n].iter().enumerate() {
            next[k + 1] += 2.0 * c;
        }
        for (k, &c) in table[n - 1].iter().enumerate() {
            next[k] -= 2.0 * n as f64 * c;
        }
        table.push(next);
    }
    table.truncate(max_degree + 1);
    table
}

/// The Hermite map x^i -> prod_k H_{i_k}(x_k), extended linearly.
pub fn hermite_map(g: &MultiPoly) -> Result<MultiPoly, StabError> {
    let d = g.nvars();
    let max_deg = (0..d).map(|i| g.degree_in(i)).max().unwrap_or(0) as usize;
    let table = hermite_table(max_deg);
    let mut out = MultiPoly::zero(d);
    for (e, c) in g.terms() {
        let mut term = MultiPoly::constant(d, *c);
        for (i, &k) in e.0.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let h = MultiPoly::from_terms(
                d,
                table[k as usize].iter().enumerate().filter(|(_, &x)| x != 0.0).map(
                    |(p, &x)| {
                        let mut exp = vec![0u32; d];
                        exp[i] = p as u32;
                        (exp, Complex64::new(x, 0.0))
                    },
                ),
            )?;
            term = term.mul(&h)?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}
