//! Multivariate stability and interlacing tests via randomized line
//! restriction, plus the exact and sampled coefficient criteria.
//!
//! Line restriction characterizes membership: a polynomial is stable
//! iff every restriction f(a + x*b) with real a and positive b has no
//! roots in the open upper half plane. The quantifier is over all
//! lines; we sample. An `UnstableWitness` is therefore a certificate,
//! while `StableLikely` is evidence only.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::StabError;
use crate::poly::{AffineLine, MultiPoly};
use crate::uni::{self, U1Verdict, UniPoly};

/// Sampling configuration shared by all probabilistic tests.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleConfig {
    pub num_lines: u32,
    pub seed: u64,
    pub tol: f64,
    /// range of the sampled offset entries: uniform in [-shift_scale, shift_scale]
    pub shift_scale: f64,
    /// sampled direction entries are log-uniform in this range
    pub dilation_range: (f64, f64),
}

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            num_lines: 500,
            seed: DEFAULT_SEED,
            tol: 1e-8,
            shift_scale: 10.0,
            dilation_range: (0.1, 10.0),
        }
    }
}

impl SampleConfig {
    pub fn with_lines(mut self, n: u32) -> Self {
        self.num_lines = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictTag {
    UnstableWitness,
    StableLikely,
    ZeroPolynomial,
}

impl VerdictTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictTag::UnstableWitness => "UnstableWitness",
            VerdictTag::StableLikely => "StableLikely",
            VerdictTag::ZeroPolynomial => "ZeroPolynomial",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub line: AffineLine,
    pub root: Complex64,
}

/// Outcome of a stability or interlacing test.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub witness: Option<Witness>,
    pub lines_checked: u32,
    /// most-positive normalized Im over all restricted roots seen;
    /// -1.0 when no roots were observed
    pub min_margin: f64,
    /// lines whose verdict could not be certified (unreliable roots or
    /// boundary-band results); they never produce a witness
    pub inconclusive_lines: u32,
}

impl Verdict {
    pub fn is_witness(&self) -> bool {
        self.tag == VerdictTag::UnstableWitness
    }

    pub fn to_json(&self) -> String {
        let mut doc = json!({
            "tag": self.tag.as_str(),
            "lines_checked": self.lines_checked,
            "min_margin": self.min_margin,
            "inconclusive_lines": self.inconclusive_lines,
        });
        if let Some(w) = &self.witness {
            doc["witness"] = json!({
                "a": w.line.a,
                "b": w.line.b,
                "root": {"re": w.root.re, "im": w.root.im},
            });
        }
        serde_json::to_string(&doc).expect("verdict JSON")
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Per-line seed: the base seed XORed with the hashed line index, so
/// parallel and serial evaluation of the line set agree.
pub fn line_seed(seed: u64, line_idx: u32) -> u64 {
    splitmix64(seed ^ splitmix64(line_idx as u64 + 1))
}

fn sample_line(cfg: &SampleConfig, nvars: usize, line_idx: u32) -> AffineLine {
    let mut rng = ChaCha8Rng::seed_from_u64(line_seed(cfg.seed, line_idx));
    let a: Vec<f64> = (0..nvars)
        .map(|_| rng.random_range(-cfg.shift_scale..cfg.shift_scale))
        .collect();
    let (lo, hi) = cfg.dilation_range;
    let b: Vec<f64> = (0..nvars)
        .map(|_| (rng.random_range(lo.ln()..hi.ln())).exp())
        .collect();
    AffineLine::new(a, b).expect("sampled line is valid")
}

/// Newton refinement of a reported root on the restricted polynomial,
/// iterated to convergence. Solver output can carry a spurious
/// imaginary part near clustered real roots, so a candidate witness is
/// only trusted after it survives a full polish; steps that increase
/// the residual stop the iteration.
fn polish(p: &UniPoly, root: Complex64) -> Complex64 {
    let dp = p.derivative();
    let mut cur = root;
    let mut cur_val = p.eval(cur).norm();
    for _ in 0..60 {
        let dv = dp.eval(cur);
        if dv.norm() == 0.0 {
            break;
        }
        let step = p.eval(cur) / dv;
        let next = cur - step;
        if !next.is_finite() {
            break;
        }
        let next_val = p.eval(next).norm();
        if next_val > cur_val {
            break;
        }
        cur = next;
        cur_val = next_val;
        if step.norm() <= 1e-15 * (1.0 + cur.norm()) {
            break;
        }
    }
    cur
}

/// Cancellation envelope of a line restriction: restricting |f| along
/// (|a|, b) has only positive contributions, so its coefficients bound
/// the absolute-value mass that each restricted coefficient was
/// accumulated from. The rounding error of each computed coefficient
/// is at most a small multiple of machine epsilon times this envelope.
fn restriction_envelope(f: &MultiPoly, line: &AffineLine) -> Option<UniPoly> {
    let abs_terms: Vec<(Vec<u32>, Complex64)> = f
        .terms()
        .map(|(e, c)| (e.0.clone(), Complex64::new(c.norm(), 0.0)))
        .collect();
    let f_abs = MultiPoly::from_terms(f.nvars(), abs_terms).ok()?;
    let abs_line =
        AffineLine::new(line.a.iter().map(|x| x.abs().max(1e-300)).collect(), line.b.clone())
            .ok()?;
    f_abs.restrict_line(&abs_line).ok()
}

/// Radius within which a root of a slightly perturbed polynomial must
/// lie: min over k of (k! * eta * S(|r|) / |p^(k)(r)|)^(1/k) with
/// S(t) = sum env_j t^j over the restriction's cancellation envelope
/// and eta a multiple of machine epsilon scaled by the degree. Near
/// clustered real roots this blows up, which is exactly when a
/// computed complex root cannot be trusted as an instability witness.
fn root_uncertainty(p: &UniPoly, env: Option<&UniPoly>, r: Complex64) -> f64 {
    let eta = 16.0 * f64::EPSILON * (p.degree() as f64 + 1.0);
    let t = r.norm();
    let mut s = 0.0;
    let mut tp = 1.0;
    let coeffs = env.unwrap_or(p).coeffs();
    for c in coeffs {
        s += c.norm() * tp;
        tp *= t;
    }
    let mut best = f64::INFINITY;
    let mut dk = p.clone();
    let mut kfact = 1.0;
    for k in 1..=p.degree() {
        dk = dk.derivative();
        kfact *= k as f64;
        let dv = dk.eval(r).norm();
        if dv > 0.0 {
            best = best.min((kfact * eta * s / dv).powf(1.0 / k as f64));
        }
    }
    best
}

/// Sampled membership test for the upper-stability class.
pub fn test_stable(f: &MultiPoly, cfg: &SampleConfig) -> Verdict {
    if f.is_zero() {
        return Verdict {
            tag: VerdictTag::ZeroPolynomial,
            witness: None,
            lines_checked: 0,
            min_margin: -1.0,
            inconclusive_lines: 0,
        };
    }
    if f.nvars() == 0 || f.total_degree() == 0 {
        // nonzero constants vanish nowhere
        return Verdict {
            tag: VerdictTag::StableLikely,
            witness: None,
            lines_checked: cfg.num_lines,
            min_margin: -1.0,
            inconclusive_lines: 0,
        };
    }
    let mut margin = f64::NEG_INFINITY;
    let mut inconclusive = 0u32;
    let mut saw_root = false;
    for idx in 0..cfg.num_lines {
        let line = sample_line(cfg, f.nvars(), idx);
        let restricted = match f.restrict_line(&line) {
            Ok(p) => p,
            Err(_) => {
                inconclusive += 1;
                continue;
            }
        };
        if restricted.is_zero() {
            // f vanishes on the whole line, hence at a + i*b which has
            // every coordinate in the open upper half plane
            return Verdict {
                tag: VerdictTag::UnstableWitness,
                witness: Some(Witness {
                    line,
                    root: Complex64::new(0.0, 1.0),
                }),
                lines_checked: idx + 1,
                min_margin: if saw_root { margin } else { 1.0 },
                inconclusive_lines: inconclusive,
            };
        }
        if restricted.degree() == 0 {
            continue;
        }
        let report = match uni::all_roots(&restricted) {
            Ok(r) => r,
            Err(_) => {
                inconclusive += 1;
                continue;
            }
        };
        if !report.reliable {
            inconclusive += 1;
            continue;
        }
        let scale = 1.0 + report.roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        match uni::classify_report(&report, cfg.tol) {
            U1Verdict::Member => {
                saw_root = true;
                margin = margin.max(report.max_uhp_margin / scale);
            }
            U1Verdict::Boundary => {
                inconclusive += 1;
            }
            U1Verdict::NonMemberWitness(root) => {
                let refined = polish(&restricted, root);
                let rscale = 1.0 + refined.norm();
                let env = restriction_envelope(f, &line);
                if refined.im > 10.0 * cfg.tol * rscale
                    && refined.im > 4.0 * root_uncertainty(&restricted, env.as_ref(), refined)
                {
                    margin = margin.max(refined.im / rscale);
                    return Verdict {
                        tag: VerdictTag::UnstableWitness,
                        witness: Some(Witness { line, root: refined }),
                        lines_checked: idx + 1,
                        min_margin: margin,
                        inconclusive_lines: inconclusive,
                    };
                }
                inconclusive += 1;
            }
        }
    }
    Verdict {
        tag: VerdictTag::StableLikely,
        witness: None,
        lines_checked: cfg.num_lines,
        min_margin: if saw_root { margin } else { -1.0 },
        inconclusive_lines: inconclusive,
    }
}

/// Sampled test for f <- g: forms f + y*g with the auxiliary variable
/// appended last and delegates to `test_stable`.
pub fn test_interlace(f: &MultiPoly, g: &MultiPoly, cfg: &SampleConfig) -> Result<Verdict, StabError> {
    if f.nvars() != g.nvars() {
        return Err(StabError::Poly(crate::error::PolyError::NvarsMismatch(
            f.nvars(),
            g.nvars(),
        )));
    }
    if f.is_zero() && g.is_zero() {
        return Ok(Verdict {
            tag: VerdictTag::ZeroPolynomial,
            witness: None,
            lines_checked: 0,
            min_margin: -1.0,
            inconclusive_lines: 0,
        });
    }
    let d = f.nvars();
    let fe = f.extend_vars(1);
    let ge = g.extend_vars(1);
    let y = MultiPoly::var(d + 1, d);
    let h = fe.add(&y.mul(&ge)?)?;
    Ok(test_stable(&h, cfg))
}

/// Hermite-Biehler cross-check: the direct verdict on f and the
/// verdict on the split g <- h must agree.
#[derive(Clone, Debug)]
pub struct HbReport {
    pub direct: Verdict,
    pub split: Verdict,
    pub g: MultiPoly,
    pub h: MultiPoly,
}

impl HbReport {
    pub fn agree(&self) -> bool {
        self.direct.tag == self.split.tag
    }
}

/// Split f = g + i*h by coefficient parts and test interlacing of the
/// split against direct stability of f.
pub fn hb_test(f: &MultiPoly, cfg: &SampleConfig) -> Result<HbReport, StabError> {
    if f.is_zero() {
        return Err(StabError::Poly(crate::error::PolyError::ZeroPolynomial));
    }
    let mut g = MultiPoly::zero(f.nvars());
    let mut h = MultiPoly::zero(f.nvars());
    for (e, c) in f.terms() {
        if c.re != 0.0 {
            g = g.add(&MultiPoly::monomial(f.nvars(), e.0.clone(), Complex64::new(c.re, 0.0)))?;
        }
        if c.im != 0.0 {
            h = h.add(&MultiPoly::monomial(f.nvars(), e.0.clone(), Complex64::new(c.im, 0.0)))?;
        }
    }
    let direct = test_stable(f, cfg);
    let split = if h.is_zero() {
        test_stable(&g, cfg)
    } else {
        test_interlace(&g, &h, cfg)?
    };
    Ok(HbReport { direct, split, g, h })
}

/// Exact verdict for bilinear a + bx + cy + dxy with real coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BilinearVerdict {
    Stable,
    Unstable,
    /// bc - ad = 0: f factors as (a + bx)(1 + t*y), a product case
    DegenerateProduct,
}

pub fn bilinear_exact(f: &MultiPoly) -> Result<BilinearVerdict, StabError> {
    if f.nvars() != 2 || f.degree_in(0) > 1 || f.degree_in(1) > 1 {
        return Err(StabError::NotBilinear);
    }
    if !f.is_real(1e-12) {
        return Err(StabError::NotBilinear);
    }
    let a = f.coefficient(&[0, 0]).re;
    let b = f.coefficient(&[1, 0]).re;
    let c = f.coefficient(&[0, 1]).re;
    let d = f.coefficient(&[1, 1]).re;
    let det = b * c - a * d;
    if det > 0.0 {
        Ok(BilinearVerdict::Stable)
    } else if det == 0.0 {
        Ok(BilinearVerdict::DegenerateProduct)
    } else {
        Ok(BilinearVerdict::Unstable)
    }
}

/// Default evaluation grid for the Rayleigh criterion: seeded
/// log-uniform points in [0, 10]^d plus the origin and points on each
/// coordinate axis.
pub fn rayleigh_default_points(d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 0x5261796C65696768));
    let mut pts = Vec::with_capacity(200 + 1 + 3 * d);
    for _ in 0..200 {
        pts.push(
            (0..d)
                .map(|_| (rng.random_range((0.01f64).ln()..(10f64).ln())).exp())
                .collect(),
        );
    }
    pts.push(vec![0.0; d]);
    for i in 0..d {
        for t in [0.1, 1.0, 10.0] {
            let mut p = vec![0.0; d];
            p[i] = t;
            pts.push(p);
        }
    }
    pts
}

/// Evaluate the Rayleigh difference D_ij = d_i f * d_j f - f * d_i d_j f
/// at the supplied non-negative points. A negative minimum certifies
/// that f is not real stable; a non-negative minimum is evidence only.
pub fn rayleigh_check(
    f: &MultiPoly,
    i: usize,
    j: usize,
    points: &[Vec<f64>],
) -> Result<(f64, Vec<f64>), StabError> {
    for v in 0..f.nvars() {
        let deg = f.degree_in(v);
        if deg > 1 {
            return Err(StabError::NotMultiaffine(v, deg));
        }
    }
    if !f.is_real(1e-12) {
        return Err(StabError::Poly(crate::error::PolyError::NonRealCoefficients(
            f.max_imag_part(),
        )));
    }
    let fi = f.partial_derivative(i)?;
    let fj = f.partial_derivative(j)?;
    let fij = fi.partial_derivative(j)?;
    let delta = fi.mul(&fj)?.sub(&f.mul(&fij)?)?;
    let mut best = f64::INFINITY;
    let mut argmin = vec![0.0; f.nvars()];
    for p in points {
        let v = delta.eval_real(p).re;
        if v < best {
            best = v;
            argmin = p.clone();
        }
    }
    Ok((best, argmin))
}

/// Maximum of f * d_i g - g * d_i f over the supplied real points; a
/// positive value beyond tolerance refutes f <- g.
pub fn wronskian_check(
    f: &MultiPoly,
    g: &MultiPoly,
    i: usize,
    points: &[Vec<f64>],
) -> Result<f64, StabError> {
    let w = f.mul(&g.partial_derivative(i)?)?.sub(&g.mul(&f.partial_derivative(i)?)?)?;
    Ok(points
        .iter()
        .map(|p| w.eval_real(p).re)
        .fold(f64::NEG_INFINITY, f64::max))
}

pub fn wronskian_default_points(d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 0x57726F6E736B6961));
    (0..200)
        .map(|_| (0..d).map(|_| rng.random_range(-10.0..10.0)).collect())
        .collect()
}

/// Result of one necessary-condition check in `coeff_necessary`.
#[derive(Clone, Debug)]
pub struct CheckItem {
    pub id: String,
    pub pass: bool,
    pub value: f64,
}

/// Report of the coefficient necessary conditions: adjacent slice
/// interlacing, the two-variable grid inequality, and phase alignment
/// of the top form.
#[derive(Clone, Debug)]
pub struct CoeffReport {
    pub adjacent_interlace: Vec<CheckItem>,
    pub grid_inequality: Vec<CheckItem>,
    pub top_phase: CheckItem,
}

impl CoeffReport {
    pub fn pass(&self) -> bool {
        self.adjacent_interlace.iter().all(|c| c.pass)
            && self.grid_inequality.iter().all(|c| c.pass)
            && self.top_phase.pass
    }

    pub fn failures(&self) -> Vec<&CheckItem> {
        self.adjacent_interlace
            .iter()
            .chain(self.grid_inequality.iter())
            .chain(std::iter::once(&self.top_phase))
            .filter(|c| !c.pass)
            .collect()
    }
}

/// The grid inequality uses the sign a_{r,s} a_{r+1,s+1} <= a_{r+1,s} a_{r,s+1}
/// (the form consistent with the bilinear determinant criterion; the
/// transposed display fails already on (x+y)^2).
fn grid_checks(
    f: &MultiPoly,
    i: usize,
    j: usize,
    label: &str,
    tol: f64,
    out: &mut Vec<CheckItem>,
) {
    let degx = f.degree_in(i);
    let degy = f.degree_in(j);
    // coefficient grid a_{r,s} of x_i^r x_j^s (f must be bivariate here)
    let mut a = vec![vec![0.0f64; degy as usize + 2]; degx as usize + 2];
    let mut amax = 0.0f64;
    for (e, c) in f.terms() {
        a[e.0[i] as usize][e.0[j] as usize] = c.re;
        amax = amax.max(c.norm());
    }
    let scale = amax * amax;
    for r in 0..=degx as usize {
        for s in 0..=degy as usize {
            let v = a[r][s] * a[r + 1][s + 1] - a[r + 1][s] * a[r][s + 1];
            out.push(CheckItem {
                id: format!("grid[{label}](r={r},s={s})"),
                pass: v <= tol * scale,
                value: v,
            });
        }
    }
}

/// Necessary conditions on the coefficient array of f. Failures are
/// findings, not errors.
pub fn coeff_necessary(f: &MultiPoly, cfg: &SampleConfig) -> Result<CoeffReport, StabError> {
    if f.is_zero() {
        return Err(StabError::Poly(crate::error::PolyError::ZeroPolynomial));
    }
    let d = f.nvars();
    let mut adjacent = Vec::new();
    for i in 0..d {
        let deg = f.degree_in(i);
        let slices: Vec<MultiPoly> = (0..=deg)
            .map(|k| f.coefficient_slice(i, k))
            .collect::<Result<_, _>>()?;
        for k in 0..deg as usize {
            let (fk, fk1) = (&slices[k], &slices[k + 1]);
            if fk.is_zero() && fk1.is_zero() {
                continue;
            }
            let verdict = test_interlace(fk, fk1, cfg)?;
            adjacent.push(CheckItem {
                id: format!("adjacent(var={i},k={k})"),
                pass: verdict.tag != VerdictTag::UnstableWitness,
                value: verdict.min_margin,
            });
        }
    }

    let mut grid = Vec::new();
    if d >= 2 && f.is_real(1e-12) {
        if d == 2 {
            grid_checks(f, 0, 1, "0,1", cfg.tol, &mut grid);
        } else {
            // fundamentally a two-variable condition: fix the remaining
            // variables at seeded positive reals and check each grid
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(cfg.seed ^ 0x67726964));
            for i in 0..d {
                for j in 0..d {
                    if i == j {
                        continue;
                    }
                    for fix in 0..5u32 {
                        let mut g = f.clone();
                        // specialize all variables other than i, j
                        let mut vars: Vec<usize> = (0..d).filter(|&v| v != i && v != j).collect();
                        vars.sort_unstable_by(|a, b| b.cmp(a));
                        let mut ii = i;
                        let mut jj = j;
                        for v in vars {
                            let val: f64 = (rng.random_range((0.1f64).ln()..(5f64).ln())).exp();
                            g = g.specialize(v, Complex64::new(val, 0.0))?;
                            if v < ii {
                                ii -= 1;
                            }
                            if v < jj {
                                jj -= 1;
                            }
                        }
                        grid_checks(&g, ii, jj, &format!("{i},{j};fix{fix}"), cfg.tol, &mut grid);
                    }
                }
            }
        }
    }

    let top = f.top_form()?;
    let mut worst_phase = 0.0f64;
    let mut reference = None;
    for (_, c) in top.terms() {
        match reference {
            None => reference = Some(*c),
            Some(r) => {
                let phase = (c / r).arg().abs();
                worst_phase = worst_phase.max(phase);
            }
        }
    }
    let top_phase = CheckItem {
        id: "top_phase".into(),
        pass: worst_phase <= 1e-8,
        value: worst_phase,
    };

    Ok(CoeffReport {
        adjacent_interlace: adjacent,
        grid_inequality: grid,
        top_phase,
    })
}

/// Obreschkoff-style closure test: every combination alpha*f + beta*g on
/// the real unit circle must be stable or zero, cross-validated against
/// one of the two interlacing directions holding.
pub fn linear_combo_test(f: &MultiPoly, g: &MultiPoly, cfg: &SampleConfig) -> Result<bool, StabError> {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(cfg.seed ^ 0x636F6D626F));
    for _ in 0..50 {
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let combo = f
            .scale(Complex64::new(theta.cos(), 0.0))
            .add(&g.scale(Complex64::new(theta.sin(), 0.0)))?;
        if combo.is_zero() {
            continue;
        }
        if test_stable(&combo, cfg).is_witness() {
            return Ok(false);
        }
    }
    let fg = test_interlace(f, g, cfg)?;
    let gf = test_interlace(g, f, cfg)?;
    Ok(!fg.is_witness() || !gf.is_witness())
}

/// Detect f = c*g up to l1-relative tolerance; the constant is taken at
/// g's largest-magnitude term.
pub fn proportionality(f: &MultiPoly, g: &MultiPoly, tol: f64) -> Option<Complex64> {
    if f.is_zero() || g.is_zero() || f.nvars() != g.nvars() {
        return None;
    }
    let (exp, gc) = g
        .terms()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())?;
    let fc = f.coefficient(&exp.0);
    if fc.norm() == 0.0 {
        return None;
    }
    let c = fc / gc;
    let diff = f.sub(&g.scale(c)).ok()?;
    if diff.l1_norm() <= tol * f.l1_norm() {
        Some(c)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ci(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> SampleConfig {
        SampleConfig::default().with_lines(200)
    }

    fn xy_minus_1() -> MultiPoly {
        MultiPoly::from_terms(2, vec![(vec![1, 1], c(1.0)), (vec![0, 0], c(-1.0))]).unwrap()
    }

    fn one_plus_xy() -> MultiPoly {
        MultiPoly::from_terms(2, vec![(vec![1, 1], c(1.0)), (vec![0, 0], c(1.0))]).unwrap()
    }

    #[test]
    fn stable_hand_examples() {
        let sum = MultiPoly::var(2, 0).add(&MultiPoly::var(2, 1)).unwrap();
        assert_eq!(test_stable(&sum, &cfg()).tag, VerdictTag::StableLikely);
        assert_eq!(test_stable(&xy_minus_1(), &cfg()).tag, VerdictTag::StableLikely);
        assert_eq!(
            test_stable(&MultiPoly::zero(2), &cfg()).tag,
            VerdictTag::ZeroPolynomial
        );
    }

    #[test]
    fn unstable_witnesses() {
        let v = test_stable(&one_plus_xy(), &cfg());
        assert_eq!(v.tag, VerdictTag::UnstableWitness);
        let w = v.witness.unwrap();
        // the witness root genuinely sits in the upper half plane of the line
        assert!(w.root.im > 1e-7);
        // and re-evaluating the restriction there gives a small residual
        let restricted = one_plus_xy().restrict_line(&w.line).unwrap();
        assert!(restricted.eval(w.root).norm() < 1e-6 * restricted.l1_norm());

        // x - i
        let f = MultiPoly::from_terms(1, vec![(vec![1], c(1.0)), (vec![0], ci(0.0, -1.0))]).unwrap();
        let v = test_stable(&f, &cfg());
        assert_eq!(v.tag, VerdictTag::UnstableWitness);
        assert!(v.witness.unwrap().root.im > 1e-2);
    }

    #[test]
    fn verdicts_deterministic() {
        let f = one_plus_xy();
        let a = test_stable(&f, &cfg()).to_json();
        let b = test_stable(&f, &cfg()).to_json();
        assert_eq!(a, b);
        let other = test_stable(&f, &cfg().with_seed(7)).to_json();
        // a different seed may find a different witness line
        let _ = other;
    }

    #[test]
    fn interlace_examples() {
        // f = x + y, g = 1: x + y + w is stable
        let f = MultiPoly::var(2, 0).add(&MultiPoly::var(2, 1)).unwrap();
        let g = MultiPoly::one(2);
        assert_eq!(
            test_interlace(&f, &g, &cfg()).unwrap().tag,
            VerdictTag::StableLikely
        );
        // f = x^2 - 1, g = x
        let f = MultiPoly::from_terms(1, vec![(vec![2], c(1.0)), (vec![0], c(-1.0))]).unwrap();
        let g = MultiPoly::var(1, 0);
        assert_eq!(
            test_interlace(&f, &g, &cfg()).unwrap().tag,
            VerdictTag::StableLikely
        );
        // x1 and x2 do not interlace
        let f = MultiPoly::var(2, 0);
        let g = MultiPoly::var(2, 1);
        assert_eq!(
            test_interlace(&f, &g, &cfg()).unwrap().tag,
            VerdictTag::UnstableWitness
        );
        // both zero
        assert_eq!(
            test_interlace(&MultiPoly::zero(1), &MultiPoly::zero(1), &cfg())
                .unwrap()
                .tag,
            VerdictTag::ZeroPolynomial
        );
    }

    #[test]
    fn hb_cases() {
        // (x + y) + i
        let f = MultiPoly::from_terms(
            2,
            vec![(vec![1, 0], c(1.0)), (vec![0, 1], c(1.0)), (vec![0, 0], ci(0.0, 1.0))],
        )
        .unwrap();
        let rep = hb_test(&f, &cfg()).unwrap();
        assert!(rep.agree());
        assert_eq!(rep.direct.tag, VerdictTag::StableLikely);
        assert_eq!(rep.h, MultiPoly::one(2));

        // x + i*y is unstable
        let f = MultiPoly::from_terms(2, vec![(vec![1, 0], c(1.0)), (vec![0, 1], ci(0.0, 1.0))]).unwrap();
        let rep = hb_test(&f, &cfg()).unwrap();
        assert!(rep.agree());
        assert_eq!(rep.direct.tag, VerdictTag::UnstableWitness);

        // h = 0 case
        let f = MultiPoly::from_terms(1, vec![(vec![2], c(1.0)), (vec![0], c(-1.0))]).unwrap();
        let rep = hb_test(&f, &cfg()).unwrap();
        assert!(rep.agree());
        assert!(rep.h.is_zero());
        assert_eq!(rep.direct.tag, VerdictTag::StableLikely);
    }

    #[test]
    fn bilinear_cases() {
        assert_eq!(bilinear_exact(&xy_minus_1()).unwrap(), BilinearVerdict::Stable);
        assert_eq!(bilinear_exact(&one_plus_xy()).unwrap(), BilinearVerdict::Unstable);
        // (1+x)(1+y)
        let f = MultiPoly::from_terms(
            2,
            vec![
                (vec![0, 0], c(1.0)),
                (vec![1, 0], c(1.0)),
                (vec![0, 1], c(1.0)),
                (vec![1, 1], c(1.0)),
            ],
        )
        .unwrap();
        assert_eq!(bilinear_exact(&f).unwrap(), BilinearVerdict::DegenerateProduct);
        // wrong shape
        let g = MultiPoly::monomial(2, vec![2, 0], c(1.0));
        assert!(bilinear_exact(&g).is_err());
    }

    #[test]
    fn rayleigh_cases() {
        let pts = rayleigh_default_points(2, DEFAULT_SEED);
        // (1+x)(1+y): Delta == 0
        let f = MultiPoly::from_terms(
            2,
            vec![
                (vec![0, 0], c(1.0)),
                (vec![1, 0], c(1.0)),
                (vec![0, 1], c(1.0)),
                (vec![1, 1], c(1.0)),
            ],
        )
        .unwrap();
        let (min, _) = rayleigh_check(&f, 0, 1, &pts).unwrap();
        assert_eq!(min, 0.0);
        // 1 + xy: Delta == -1 everywhere
        let (min, _) = rayleigh_check(&one_plus_xy(), 0, 1, &pts).unwrap();
        assert_eq!(min, -1.0);
        // xy - 1: Delta == 1
        let (min, _) = rayleigh_check(&xy_minus_1(), 0, 1, &pts).unwrap();
        assert_eq!(min, 1.0);
        // non-multiaffine rejected
        let g = MultiPoly::monomial(2, vec![2, 0], c(1.0));
        assert!(rayleigh_check(&g, 0, 1, &pts).is_err());
    }

    #[test]
    fn wronskian_cases() {
        let pts = wronskian_default_points(2, DEFAULT_SEED);
        // f = x + y, g = 1: value is -1 everywhere
        let f = MultiPoly::var(2, 0).add(&MultiPoly::var(2, 1)).unwrap();
        let g = MultiPoly::one(2);
        let max = wronskian_check(&f, &g, 0, &pts).unwrap();
        assert_eq!(max, -1.0);
        // f = (x+y)^2, g = x + y: -(x+y)^2 <= 0
        let f2 = f.mul(&f).unwrap();
        let max = wronskian_check(&f2, &f, 0, &pts).unwrap();
        assert!(max <= 1e-9);
        // reversed order is refuted: f = 1, g = x
        let max = wronskian_check(&MultiPoly::one(2), &MultiPoly::var(2, 0), 0, &pts).unwrap();
        assert_eq!(max, 1.0);
    }

    #[test]
    fn coeff_necessary_cases() {
        let small = cfg().with_lines(60);
        // (x+y)^2 passes everything
        let s = MultiPoly::var(2, 0).add(&MultiPoly::var(2, 1)).unwrap();
        let f = s.mul(&s).unwrap();
        let rep = coeff_necessary(&f, &small).unwrap();
        assert!(rep.pass(), "failures: {:?}", rep.failures());
        // 1 + xy fails the (0,0) grid cell with value exactly +1
        let rep = coeff_necessary(&one_plus_xy(), &small).unwrap();
        let cell = rep
            .grid_inequality
            .iter()
            .find(|c| c.id.contains("r=0,s=0"))
            .unwrap();
        assert!(!cell.pass);
        assert_eq!(cell.value, 1.0);
        // xy - 1 passes the grid and the top phase
        let rep = coeff_necessary(&xy_minus_1(), &small).unwrap();
        assert!(rep.grid_inequality.iter().all(|c| c.pass));
        assert!(rep.top_phase.pass);
    }

    #[test]
    fn linear_combo_cases() {
        let small = cfg().with_lines(80);
        let f = MultiPoly::from_terms(
            2,
            vec![(vec![1, 0], c(1.0)), (vec![0, 1], c(1.0)), (vec![0, 0], c(1.0))],
        )
        .unwrap();
        assert!(linear_combo_test(&f, &MultiPoly::one(2), &small).unwrap());
        let f = MultiPoly::from_terms(1, vec![(vec![2], c(1.0)), (vec![0], c(-1.0))]).unwrap();
        assert!(linear_combo_test(&f, &MultiPoly::var(1, 0), &small).unwrap());
        // x1 vs x2: caught by the interlacing cross-validation
        assert!(!linear_combo_test(&MultiPoly::var(2, 0), &MultiPoly::var(2, 1), &small).unwrap());
    }

    #[test]
    fn proportionality_cases() {
        let f = MultiPoly::from_terms(1, vec![(vec![1], c(2.0)), (vec![0], c(2.0))]).unwrap();
        let g = MultiPoly::from_terms(1, vec![(vec![1], c(1.0)), (vec![0], c(1.0))]).unwrap();
        assert_eq!(proportionality(&f, &g, 1e-10), Some(c(2.0)));
        assert_eq!(proportionality(&MultiPoly::var(2, 0), &MultiPoly::var(2, 1), 1e-10), None);
        let s = MultiPoly::var(2, 0).add(&MultiPoly::var(2, 1)).unwrap();
        let s3 = s.scale(c(3.0));
        let prop = proportionality(&s, &s3, 1e-10).unwrap();
        assert!((prop - c(1.0 / 3.0)).norm() < 1e-12);
    }
}
