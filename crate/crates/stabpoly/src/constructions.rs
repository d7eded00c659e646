//! Certified-stable constructions: determinantal pencils, mixed
//! determinant sums over set partitions, and orthogonal-style
//! recurrence chains.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::StabError;
use crate::poly::MultiPoly;

pub const MAX_PENCIL_SIZE: usize = 8;
pub const MAX_PENCIL_VARS: usize = 6;

/// Matrix data for |S + i*E + sum x_k D_k| with S symmetric, E positive
/// semi-definite (possibly zero), and each D_k positive definite.
#[derive(Clone, Debug)]
pub struct MatrixPencil {
    pub n: usize,
    pub s: DMatrix<f64>,
    pub e: DMatrix<f64>,
    pub ds: Vec<DMatrix<f64>>,
}

impl MatrixPencil {
    pub fn new(
        s: DMatrix<f64>,
        e: DMatrix<f64>,
        ds: Vec<DMatrix<f64>>,
    ) -> Result<Self, StabError> {
        let n = s.nrows();
        for (name, m) in std::iter::once(("S", &s))
            .chain(std::iter::once(("E", &e)))
            .chain(ds.iter().map(|d| ("D", d)))
        {
            if m.nrows() != n || m.ncols() != n {
                return Err(StabError::BadPencil(format!("{name} is not {n}x{n}")));
            }
            let scale = m.amax().max(1.0);
            if (m - m.transpose()).amax() > 1e-12 * scale {
                return Err(StabError::BadPencil(format!("{name} is not symmetric")));
            }
        }
        if n > MAX_PENCIL_SIZE {
            return Err(StabError::BadPencil(format!(
                "size {n} exceeds maximum {MAX_PENCIL_SIZE}"
            )));
        }
        if ds.len() > MAX_PENCIL_VARS {
            return Err(StabError::BadPencil(format!(
                "{} variables exceed maximum {MAX_PENCIL_VARS}",
                ds.len()
            )));
        }
        let min_eig = |m: &DMatrix<f64>| {
            m.clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min)
        };
        if !e.iter().all(|x| *x == 0.0) && min_eig(&e) < -1e-10 {
            return Err(StabError::BadPencil("E is not positive semi-definite".into()));
        }
        for d in &ds {
            if min_eig(d) < 1e-10 {
                return Err(StabError::BadPencil("a D_k is not positive definite".into()));
            }
        }
        Ok(MatrixPencil { n, s, e, ds })
    }

    pub fn nvars(&self) -> usize {
        self.ds.len()
    }

    pub fn has_e(&self) -> bool {
        self.e.iter().any(|x| *x != 0.0)
    }
}

/// Symbolic determinant of a matrix of polynomials via expansion along
/// rows with memoization on the surviving column set (2^n minors
/// instead of n! cofactor paths).
pub fn det_poly_matrix(m: &[Vec<MultiPoly>]) -> Result<MultiPoly, StabError> {
    let n = m.len();
    if n == 0 {
        return Ok(MultiPoly::one(0));
    }
    let nvars = m[0][0].nvars();
    let mut memo: std::collections::HashMap<Vec<usize>, MultiPoly> =
        std::collections::HashMap::new();
    fn rec(
        m: &[Vec<MultiPoly>],
        cols: &[usize],
        nvars: usize,
        memo: &mut std::collections::HashMap<Vec<usize>, MultiPoly>,
    ) -> Result<MultiPoly, StabError> {
        let n = m.len();
        let row = n - cols.len();
        if cols.is_empty() {
            return Ok(MultiPoly::one(nvars));
        }
        if let Some(hit) = memo.get(cols) {
            return Ok(hit.clone());
        }
        let mut acc = MultiPoly::zero(nvars);
        for (pos, &col) in cols.iter().enumerate() {
            if m[row][col].is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols
                .iter()
                .cloned()
                .filter(|&c| c != col)
                .collect();
            let minor = rec(m, &rest, nvars, memo)?;
            let signed = if pos % 2 == 0 {
                m[row][col].mul(&minor)?
            } else {
                m[row][col].mul(&minor)?.neg()
            };
            acc = acc.add(&signed)?;
        }
        memo.insert(cols.to_vec(), acc.clone());
        Ok(acc)
    }
    let cols: Vec<usize> = (0..n).collect();
    rec(m, &cols, nvars, &mut memo)
}

/// Build the n x n matrix of degree-1 polynomials S + i*E + sum x_k D_k
/// in `nvars` ambient variables, placing x_k at `var_offset + k`.
fn pencil_entries(p: &MatrixPencil, nvars: usize, var_offset: usize) -> Vec<Vec<MultiPoly>> {
    let d = p.nvars();
    (0..p.n)
        .map(|i| {
            (0..p.n)
                .map(|j| {
                    let mut terms: Vec<(Vec<u32>, Complex64)> = Vec::new();
                    let c0 = Complex64::new(p.s[(i, j)], p.e[(i, j)]);
                    if c0.re != 0.0 || c0.im != 0.0 {
                        terms.push((vec![0; nvars], c0));
                    }
                    for k in 0..d {
                        let v = p.ds[k][(i, j)];
                        if v != 0.0 {
                            let mut exp = vec![0u32; nvars];
                            exp[var_offset + k] = 1;
                            terms.push((exp, Complex64::new(v, 0.0)));
                        }
                    }
                    MultiPoly::from_terms(nvars, terms).expect("pencil entry")
                })
                .collect()
        })
        .collect()
}

/// The exact determinant polynomial |S + i*E + sum x_k D_k|. Real
/// coefficients when E = 0.
pub fn det_pencil_poly(p: &MatrixPencil) -> Result<MultiPoly, StabError> {
    let entries = pencil_entries(p, p.nvars(), 0);
    det_poly_matrix(&entries)
}

/// One summand pencil L_k = sum x_i D_ik + A_k of a mixed determinant.
#[derive(Clone, Debug)]
pub struct JohnsonPencil {
    pub a: DMatrix<f64>,
    pub ds: Vec<DMatrix<f64>>,
}

impl JohnsonPencil {
    fn entries(&self, nvars: usize) -> Vec<Vec<MultiPoly>> {
        let pencil = MatrixPencil {
            n: self.a.nrows(),
            s: self.a.clone(),
            e: DMatrix::zeros(self.a.nrows(), self.a.ncols()),
            ds: self.ds.clone(),
        };
        pencil_entries(&pencil, nvars, 0)
    }
}

/// Mixed determinant sum over ordered partitions S_1 u ... u S_m of
/// {1..n}: sum of |L_1[S_1]| ... |L_m[S_m]| with |L[empty]| = 1.
pub fn johnson_sum(ls: &[JohnsonPencil], n: usize) -> Result<MultiPoly, StabError> {
    let m = ls.len();
    if m == 0 {
        return Err(StabError::BadPencil("empty pencil list".into()));
    }
    let d = ls[0].ds.len();
    for l in ls {
        if l.a.nrows() != n || l.ds.len() != d {
            return Err(StabError::BadPencil("johnson pencil shape mismatch".into()));
        }
    }
    let entries: Vec<Vec<Vec<MultiPoly>>> = ls.iter().map(|l| l.entries(d)).collect();
    // principal minor determinants, memoized per (pencil, subset)
    let mut minors: std::collections::HashMap<(usize, Vec<usize>), MultiPoly> =
        std::collections::HashMap::new();
    let mut minor = |k: usize, subset: &[usize], memo_entries: &Vec<Vec<MultiPoly>>| -> Result<MultiPoly, StabError> {
        if let Some(hit) = minors.get(&(k, subset.to_vec())) {
            return Ok(hit.clone());
        }
        let sub: Vec<Vec<MultiPoly>> = subset
            .iter()
            .map(|&i| subset.iter().map(|&j| memo_entries[i][j].clone()).collect())
            .collect();
        let det = if subset.is_empty() {
            MultiPoly::one(d)
        } else {
            det_poly_matrix(&sub)?
        };
        minors.insert((k, subset.to_vec()), det.clone());
        Ok(det)
    };

    let mut acc = MultiPoly::zero(d);
    let mut assignment = vec![0usize; n];
    loop {
        // product over blocks of this ordered partition
        let mut prod = MultiPoly::one(d);
        for k in 0..m {
            let subset: Vec<usize> = (0..n).filter(|&i| assignment[i] == k).collect();
            prod = prod.mul(&minor(k, &subset, &entries[k])?)?;
        }
        acc = acc.add(&prod)?;
        // next assignment in base m
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(acc);
            }
            assignment[pos] += 1;
            if assignment[pos] < m {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// Cross-check route: the coefficient of w_1...w_n in prod_k |I - W L_k|
/// equals (-1)^n times the partition sum.
pub fn johnson_via_generating(ls: &[JohnsonPencil], n: usize) -> Result<MultiPoly, StabError> {
    let d = ls[0].ds.len();
    let total = n + d; // w variables first, x variables after
    let mut prod = MultiPoly::one(total);
    for l in ls {
        // entries of I - W L: delta_ij - w_i * L_ij
        let base = l.entries(d);
        let entries: Vec<Vec<MultiPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let lij = base[i][j].embed(total, n);
                        let wi = MultiPoly::var(total, i);
                        let mut acc = wi.mul(&lij).expect("same ambient").neg();
                        if i == j {
                            acc = acc.add(&MultiPoly::one(total)).expect("same ambient");
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        prod = prod.mul(&det_poly_matrix(&entries)?)?;
    }
    // extract the coefficient of w_1 ... w_n
    let mut coef = prod;
    for _ in 0..n {
        if coef.degree_in(0) < 1 {
            return Ok(MultiPoly::zero(d));
        }
        coef = coef.coefficient_slice(0, 1)?;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(coef.scale(Complex64::new(sign, 0.0)))
}

/// One step of an orthogonal-style recurrence: p_{next} =
/// (sum a_k x_k + b) p - c p_{prev} with all a_k > 0 and c > 0.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecurrenceStep {
    pub a: Vec<f64>,
    pub b: f64,
    pub c: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecurrenceSpec {
    pub d: usize,
    pub steps: Vec<RecurrenceStep>,
}

impl RecurrenceSpec {
    pub fn validate(&self) -> Result<(), StabError> {
        if self.steps.is_empty() {
            return Err(StabError::BadRecurrence("no steps".into()));
        }
        for (i, s) in self.steps.iter().enumerate() {
            if s.a.len() != self.d {
                return Err(StabError::BadRecurrence(format!(
                    "step {i}: {} coefficients for {} variables",
                    s.a.len(),
                    self.d
                )));
            }
            if !s.a.iter().all(|&x| x > 0.0) {
                return Err(StabError::BadRecurrence(format!("step {i}: a must be > 0")));
            }
            if !(s.c > 0.0) {
                return Err(StabError::BadRecurrence(format!("step {i}: c must be > 0")));
            }
        }
        Ok(())
    }

    pub fn unit(d: usize, steps: usize) -> Self {
        RecurrenceSpec {
            d,
            steps: (0..steps)
                .map(|_| RecurrenceStep {
                    a: vec![1.0; d],
                    b: 0.0,
                    c: 1.0,
                })
                .collect(),
        }
    }

    pub fn random(d: usize, steps: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        RecurrenceSpec {
            d,
            steps: (0..steps)
                .map(|_| RecurrenceStep {
                    a: (0..d).map(|_| rng.random_range(0.2..2.0)).collect(),
                    b: rng.random_range(-1.0..1.0),
                    c: rng.random_range(0.2..2.0),
                })
                .collect(),
        }
    }
}

fn linear_form(d: usize, a: &[f64], b: f64) -> MultiPoly {
    let mut terms: Vec<(Vec<u32>, Complex64)> = Vec::new();
    if b != 0.0 {
        terms.push((vec![0; d], Complex64::new(b, 0.0)));
    }
    for (k, &ak) in a.iter().enumerate() {
        let mut exp = vec![0u32; d];
        exp[k] = 1;
        terms.push((exp, Complex64::new(ak, 0.0)));
    }
    MultiPoly::from_terms(d, terms).expect("linear form")
}

/// The full chain p_0 = 1, p_1 = first linear form, p_{k+1} =
/// (sum a_k x + b) p_k - c p_{k-1}. Consecutive entries interlace.
pub fn recurrence_chain(spec: &RecurrenceSpec) -> Result<Vec<MultiPoly>, StabError> {
    spec.validate()?;
    let d = spec.d;
    let mut chain = vec![MultiPoly::one(d)];
    let first = &spec.steps[0];
    chain.push(linear_form(d, &first.a, first.b));
    for step in &spec.steps[1..] {
        let lin = linear_form(d, &step.a, step.b);
        let prev = &chain[chain.len() - 1];
        let prev2 = &chain[chain.len() - 2];
        let next = lin
            .mul(prev)?
            .sub(&prev2.scale(Complex64::new(step.c, 0.0)))?;
        chain.push(next);
    }
    Ok(chain)
}

/// Deterministic random pencil: S = M + M^T, each D_k = G G^T + 0.1 I,
/// E = H H^T when requested.
pub fn random_pencil(n: usize, d: usize, seed: u64, with_e: bool) -> MatrixPencil {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mat = |r: &mut ChaCha8Rng| {
        DMatrix::from_fn(n, n, |_, _| r.random_range(-1.0..1.0))
    };
    let m = mat(&mut rng);
    let s = &m + m.transpose();
    let ds: Vec<DMatrix<f64>> = (0..d)
        .map(|_| {
            let g = mat(&mut rng);
            &g * g.transpose() + DMatrix::identity(n, n) * 0.1
        })
        .collect();
    let e = if with_e {
        let h = mat(&mut rng);
        &h * h.transpose()
    } else {
        DMatrix::zeros(n, n)
    };
    MatrixPencil::new(s, e, ds).expect("random pencil satisfies the invariants by construction")
}

/// Rank-1 factorization of the coefficient matrix of a bivariate real
/// polynomial: f = g(x) h(y) when the matrix has numerical rank 1.
pub fn separability_check(f: &MultiPoly) -> Result<Option<(MultiPoly, MultiPoly)>, StabError> {
    if f.nvars() != 2 {
        return Err(StabError::NotBivariate(f.nvars()));
    }
    if f.is_zero() {
        return Ok(None);
    }
    let degx = f.degree_in(0) as usize;
    let degy = f.degree_in(1) as usize;
    let mut a = DMatrix::zeros(degx + 1, degy + 1);
    for (e, c) in f.terms() {
        a[(e.0[0] as usize, e.0[1] as usize)] = c.re;
    }
    let svd = a.clone().svd(true, true);
    let sigma = &svd.singular_values;
    if sigma.len() > 1 && sigma[1] > 1e-10 * sigma[0] {
        return Ok(None);
    }
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let gcoef: Vec<f64> = (0..=degx).map(|i| sigma[0] * u[(i, 0)]).collect();
    let hcoef: Vec<f64> = (0..=degy).map(|j| vt[(0, j)]).collect();
    let g = MultiPoly::from_terms(
        1,
        gcoef
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, &c)| (vec![i as u32], Complex64::new(c, 0.0))),
    )?;
    let h = MultiPoly::from_terms(
        1,
        hcoef
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(j, &c)| (vec![j as u32], Complex64::new(c, 0.0))),
    )?;
    // confirm the reconstruction before reporting factors
    let gx = g.embed(2, 0);
    let hy = h.embed(2, 1);
    let rebuilt = gx.mul(&hy)?;
    if rebuilt.sub(f)?.l1_norm() > 1e-10 * f.l1_norm() {
        return Ok(None);
    }
    Ok(Some((g, h)))
}

// ---------------------------------------------------------------------------
// Matrix JSON format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PencilJson {
    n: usize,
    #[serde(rename = "S")]
    s: Vec<Vec<f64>>,
    #[serde(rename = "E", skip_serializing_if = "Option::is_none")]
    e: Option<Vec<Vec<f64>>>,
    #[serde(rename = "Ds")]
    ds: Vec<Vec<Vec<f64>>>,
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn from_rows(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    let cols = rows.first().map(|r| r.len()).unwrap_or(0);
    DMatrix::from_fn(n, cols, |i, j| rows[i][j])
}

impl MatrixPencil {
    pub fn to_json(&self) -> String {
        let doc = PencilJson {
            n: self.n,
            s: to_rows(&self.s),
            e: if self.has_e() { Some(to_rows(&self.e)) } else { None },
            ds: self.ds.iter().map(to_rows).collect(),
        };
        serde_json::to_string(&doc).expect("pencil JSON")
    }

    pub fn from_json(s: &str) -> Result<Self, StabError> {
        let doc: PencilJson = serde_json::from_str(s)
            .map_err(|e| StabError::BadPencil(format!("bad JSON: {e}")))?;
        let e = doc
            .e
            .map(|rows| from_rows(&rows))
            .unwrap_or_else(|| DMatrix::zeros(doc.n, doc.n));
        MatrixPencil::new(from_rows(&doc.s), e, doc.ds.iter().map(|d| from_rows(d)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::{test_stable, SampleConfig, VerdictTag};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn det_pencil_scalar_case() {
        // n = 1: d1*x + s
        let p = MatrixPencil::new(
            DMatrix::from_element(1, 1, 2.5),
            DMatrix::zeros(1, 1),
            vec![DMatrix::from_element(1, 1, 3.0)],
        )
        .unwrap();
        let f = det_pencil_poly(&p).unwrap();
        assert_eq!(f.coefficient(&[1]), c(3.0));
        assert_eq!(f.coefficient(&[0]), c(2.5));
    }

    #[test]
    fn det_pencil_2x2_real() {
        // S = 0, D1 = I, D2 = [[2,1],[1,1]]: (x+2y)(x+y) - y^2 = x^2 + 3xy + y^2
        let p = MatrixPencil::new(
            DMatrix::zeros(2, 2),
            DMatrix::zeros(2, 2),
            vec![
                DMatrix::identity(2, 2),
                DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 1.0]),
            ],
        )
        .unwrap();
        let f = det_pencil_poly(&p).unwrap();
        assert_eq!(f.coefficient(&[2, 0]), c(1.0));
        assert_eq!(f.coefficient(&[1, 1]), c(3.0));
        assert_eq!(f.coefficient(&[0, 2]), c(1.0));
        assert_eq!(f.num_terms(), 3);
    }

    #[test]
    fn det_pencil_with_e_complex() {
        // n = 2, d = 1, S = 0, E = I, D = I: (x+i)^2 = x^2 + 2ix - 1
        let p = MatrixPencil::new(
            DMatrix::zeros(2, 2),
            DMatrix::identity(2, 2),
            vec![DMatrix::identity(2, 2)],
        )
        .unwrap();
        let f = det_pencil_poly(&p).unwrap();
        assert_eq!(f.coefficient(&[2]), c(1.0));
        assert_eq!(f.coefficient(&[1]), Complex64::new(0.0, 2.0));
        assert_eq!(f.coefficient(&[0]), c(-1.0));
    }

    #[test]
    fn pencil_invariants_enforced() {
        let asym = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(MatrixPencil::new(asym, DMatrix::zeros(2, 2), vec![DMatrix::identity(2, 2)]).is_err());
        // D not positive definite
        let neg = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        assert!(MatrixPencil::new(DMatrix::zeros(2, 2), DMatrix::zeros(2, 2), vec![neg]).is_err());
    }

    #[test]
    fn johnson_scalar_sum() {
        // n = 1, m = 2: the sum collapses to L1 + L2
        let l1 = JohnsonPencil {
            a: DMatrix::from_element(1, 1, 0.5),
            ds: vec![DMatrix::from_element(1, 1, 2.0)],
        };
        let l2 = JohnsonPencil {
            a: DMatrix::from_element(1, 1, 1.5),
            ds: vec![DMatrix::from_element(1, 1, 3.0)],
        };
        let f = johnson_sum(&[l1.clone(), l2.clone()], 1).unwrap();
        assert_eq!(f.coefficient(&[1]), c(5.0));
        assert_eq!(f.coefficient(&[0]), c(2.0));
        let g = johnson_via_generating(&[l1, l2], 1).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn johnson_single_block_is_determinant() {
        let l = JohnsonPencil {
            a: DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 2.0]),
            ds: vec![DMatrix::identity(2, 2)],
        };
        let f = johnson_sum(std::slice::from_ref(&l), 2).unwrap();
        let p = MatrixPencil::new(l.a.clone(), DMatrix::zeros(2, 2), l.ds.clone()).unwrap();
        assert_eq!(f, det_pencil_poly(&p).unwrap());
    }

    #[test]
    fn johnson_identity_pencils() {
        // n = 2, m = 2, L1 = L2 = xI: enumeration gives 4x^2
        let l = JohnsonPencil {
            a: DMatrix::zeros(2, 2),
            ds: vec![DMatrix::identity(2, 2)],
        };
        let f = johnson_sum(&[l.clone(), l.clone()], 2).unwrap();
        assert_eq!(f, MultiPoly::monomial(1, vec![2], c(4.0)));
        let g = johnson_via_generating(&[l.clone(), l], 2).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn recurrence_chebyshev_like() {
        let spec = RecurrenceSpec::unit(1, 3);
        let chain = recurrence_chain(&spec).unwrap();
        assert_eq!(chain.len(), 4);
        // p2 = x^2 - 1
        assert_eq!(chain[2].coefficient(&[2]), c(1.0));
        assert_eq!(chain[2].coefficient(&[0]), c(-1.0));
        // p3 = x^3 - 2x
        assert_eq!(chain[3].coefficient(&[3]), c(1.0));
        assert_eq!(chain[3].coefficient(&[1]), c(-2.0));
    }

    #[test]
    fn recurrence_bivariate_and_degenerate() {
        let spec = RecurrenceSpec::unit(2, 2);
        let chain = recurrence_chain(&spec).unwrap();
        // p2 = (x1+x2)^2 - 1
        assert_eq!(chain[2].coefficient(&[1, 1]), c(2.0));
        assert_eq!(chain[2].coefficient(&[0, 0]), c(-1.0));

        let single = RecurrenceSpec {
            d: 1,
            steps: vec![RecurrenceStep { a: vec![1.0], b: 0.5, c: 1.0 }],
        };
        let chain = recurrence_chain(&single).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain[1].coefficient(&[0]), c(0.5));

        let bad = RecurrenceSpec {
            d: 1,
            steps: vec![RecurrenceStep { a: vec![-1.0], b: 0.0, c: 1.0 }],
        };
        assert!(recurrence_chain(&bad).is_err());
    }

    #[test]
    fn random_pencils_are_valid_and_stable() {
        let cfg = SampleConfig::default().with_lines(100);
        for seed in 0..3 {
            let p = random_pencil(2, 2, seed, seed % 2 == 1);
            let f = det_pencil_poly(&p).unwrap();
            assert_eq!(test_stable(&f, &cfg).tag, VerdictTag::StableLikely);
            if seed % 2 == 0 {
                assert!(f.is_real(1e-12));
            }
        }
    }

    #[test]
    fn separability_cases() {
        // (x^2 - 1)(y^2 - 4)
        let g = MultiPoly::from_terms(1, vec![(vec![2], c(1.0)), (vec![0], c(-1.0))]).unwrap();
        let h = MultiPoly::from_terms(1, vec![(vec![2], c(1.0)), (vec![0], c(-4.0))]).unwrap();
        let f = g.embed(2, 0).mul(&h.embed(2, 1)).unwrap();
        let (gf, hf) = separability_check(&f).unwrap().unwrap();
        let rebuilt = gf.embed(2, 0).mul(&hf.embed(2, 1)).unwrap();
        assert!(rebuilt.sub(&f).unwrap().l1_norm() <= 1e-10 * f.l1_norm());

        // x^2 + y^2 has rank 2
        let f = MultiPoly::from_terms(2, vec![(vec![2, 0], c(1.0)), (vec![0, 2], c(1.0))]).unwrap();
        assert!(separability_check(&f).unwrap().is_none());

        // x^2 y^2 + 1 has rank 2
        let f = MultiPoly::from_terms(2, vec![(vec![2, 2], c(1.0)), (vec![0, 0], c(1.0))]).unwrap();
        assert!(separability_check(&f).unwrap().is_none());

        assert!(separability_check(&MultiPoly::one(3)).is_err());
    }

    #[test]
    fn pencil_json_round_trip() {
        let p = random_pencil(2, 2, 9, true);
        let s = p.to_json();
        let q = MatrixPencil::from_json(&s).unwrap();
        assert_eq!(det_pencil_poly(&p).unwrap(), det_pencil_poly(&q).unwrap());
    }
}
