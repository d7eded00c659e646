//! Univariate complex polynomials: root finding and the root-location
//! predicates every multivariate test reduces to.
//!
//! The root finder is Aberth-Ehrlich simultaneous iteration with closed
//! forms for degrees 1 and 2. Correctness is certified only through the
//! residuals in [`RootReport`]; a report whose worst residual exceeds
//! 1e-8 is flagged unreliable and callers must treat dependent verdicts
//! as inconclusive.

use num_complex::Complex64;

use crate::error::UniError;

pub const MAX_DEGREE: usize = 64;
pub const RESIDUAL_LIMIT: f64 = 1e-8;
pub const DEFAULT_TOL: f64 = 1e-8;

/// Univariate polynomial, coefficients lowest degree first, leading
/// coefficient nonzero (exact zeros trimmed).
#[derive(Clone, PartialEq, Debug)]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while let Some(last) = coeffs.last() {
            if last.re == 0.0 && last.im == 0.0 {
                coeffs.pop();
            } else {
                break;
            }
        }
        UniPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::ZERO; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        UniPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::new(vec![]);
        }
        UniPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * Complex64::new((i + 1) as f64, 0.0))
                .collect(),
        )
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn max_imag_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// True when all coefficients are real up to 1e-12 relative.
    pub fn is_real(&self) -> bool {
        let scale = self
            .coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            .max(1e-300);
        self.coeffs.iter().all(|c| c.im.abs() <= 1e-12 * scale)
    }

    /// Real parts and imaginary parts of the coefficients: p = g + i*h.
    pub fn split_real_imag(&self) -> (UniPoly, UniPoly) {
        let g = UniPoly::new(
            self.coeffs
                .iter()
                .map(|c| Complex64::new(c.re, 0.0))
                .collect(),
        );
        let h = UniPoly::new(
            self.coeffs
                .iter()
                .map(|c| Complex64::new(c.im, 0.0))
                .collect(),
        );
        (g, h)
    }

    pub fn scale(&self, c: Complex64) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|&x| x * c).collect())
    }
}

/// All roots of a polynomial plus residual certificates.
#[derive(Clone, Debug)]
pub struct RootReport {
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    /// max over roots of Im(root)
    pub max_uhp_margin: f64,
    pub reliable: bool,
}

/// Outcome of the upper-half-plane membership test in one variable.
#[derive(Clone, Debug, PartialEq)]
pub enum U1Verdict {
    Member,
    NonMemberWitness(Complex64),
    /// The verdict hinges on roots inside the tolerance band; callers
    /// treat this as "member within tolerance".
    Boundary,
}

/// Classification of a real-rooted pair per the alternating-roots table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InterlaceRelation {
    FArrowG,
    FArrowNegG,
    Proportional,
    None,
}

/// Compute all roots with residual certificates. Deterministic for a
/// fixed input. Degree must be in 1..=64.
pub fn all_roots(p: &UniPoly) -> Result<RootReport, UniError> {
    if p.is_zero() || p.degree() == 0 {
        return Err(UniError::DegreeTooLow);
    }
    if p.degree() > MAX_DEGREE {
        return Err(UniError::DegreeTooHigh(p.degree()));
    }
    // factor out exact roots at the origin first
    let zeros_at_origin = p
        .coeffs
        .iter()
        .take_while(|c| c.re == 0.0 && c.im == 0.0)
        .count();
    let reduced = UniPoly::new(p.coeffs[zeros_at_origin..].to_vec());
    let mut roots = vec![Complex64::ZERO; zeros_at_origin];
    if reduced.degree() >= 1 {
        roots.extend(solve(&reduced));
    }
    // total_cmp keeps the order deterministic even for non-finite
    // iterates; those are flagged unreliable by the residual check
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let norm = p.l1_norm();
    let deg = p.degree() as i32;
    let residuals: Vec<f64> = roots
        .iter()
        .map(|&r| p.eval(r).norm() / (norm * (1.0 + r.norm()).powi(deg)))
        .collect();
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    let max_uhp_margin = roots.iter().map(|r| r.im).fold(f64::NEG_INFINITY, f64::max);
    Ok(RootReport {
        roots,
        residuals,
        max_uhp_margin,
        reliable: worst <= RESIDUAL_LIMIT,
    })
}

fn solve(p: &UniPoly) -> Vec<Complex64> {
    match p.degree() {
        1 => vec![-p.coeffs[0] / p.coeffs[1]],
        2 => solve_quadratic(p.coeffs[0], p.coeffs[1], p.coeffs[2]),
        _ => aberth(p),
    }
}

// c + b z + a z^2, numerically stable form
fn solve_quadratic(c: Complex64, b: Complex64, a: Complex64) -> Vec<Complex64> {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids cancellation in -b -/+ disc
    let q = if (b + disc).norm() >= (b - disc).norm() {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    if q.norm() == 0.0 {
        return vec![Complex64::ZERO, -b / a];
    }
    vec![q / a, c / q]
}

fn aberth(p: &UniPoly) -> Vec<Complex64> {
    let n = p.degree();
    let dp = p.derivative();
    let an = p.coeffs[n];
    // Cauchy bound on root magnitudes
    let radius = 1.0
        + p.coeffs[..n]
            .iter()
            .map(|c| (c / an).norm())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / (n as f64) + 0.41;
            Complex64::new(radius * theta.cos(), radius * theta.sin())
        })
        .collect();

    for _iter in 0..400 {
        let mut max_step = 0.0f64;
        for j in 0..n {
            let pv = p.eval(z[j]);
            if pv.norm() == 0.0 {
                continue;
            }
            let mut dv = dp.eval(z[j]);
            if dv.norm() == 0.0 {
                dv = Complex64::new(1e-30, 0.0);
            }
            let ratio = pv / dv;
            let mut sum = Complex64::ZERO;
            for k in 0..n {
                if k != j {
                    let diff = z[j] - z[k];
                    if diff.norm() > 0.0 {
                        sum += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * sum;
            let step = if denom.norm() > 0.0 { ratio / denom } else { ratio };
            z[j] -= step;
            let rel = step.norm() / (1.0 + z[j].norm());
            max_step = max_step.max(rel);
        }
        if max_step < 1e-14 {
            break;
        }
    }
    z
}

/// Membership of p in the closed upper-stability class: all roots real
/// or in the lower half plane, within tolerance.
pub fn in_u1(p: &UniPoly, tol: f64) -> Result<U1Verdict, UniError> {
    let report = all_roots(p)?;
    if !report.reliable {
        let worst = report.residuals.iter().cloned().fold(0.0, f64::max);
        return Err(UniError::Unreliable(worst));
    }
    Ok(classify_report(&report, tol))
}

/// Classification used by `in_u1`, exposed for callers that already
/// hold a report.
pub fn classify_report(report: &RootReport, tol: f64) -> U1Verdict {
    let scale = 1.0
        + report
            .roots
            .iter()
            .map(|r| r.norm())
            .fold(0.0, f64::max);
    let max_im = report.max_uhp_margin;
    if max_im > 2.0 * tol * scale {
        let witness = report
            .roots
            .iter()
            .cloned()
            .max_by(|a, b| a.im.partial_cmp(&b.im).unwrap())
            .unwrap();
        U1Verdict::NonMemberWitness(witness)
    } else if max_im > tol * scale {
        // a perturbation of the roots by the tolerance flips the verdict
        U1Verdict::Boundary
    } else {
        U1Verdict::Member
    }
}

/// True iff every root is real within tolerance. Requires real
/// coefficients (1e-12 relative).
pub fn is_real_rooted(p: &UniPoly, tol: f64) -> Result<bool, UniError> {
    if !p.is_real() {
        return Err(UniError::NonReal(p.max_imag_coeff()));
    }
    if p.degree() == 0 {
        return Ok(true);
    }
    let report = all_roots(p)?;
    if !report.reliable {
        let worst = report.residuals.iter().cloned().fold(0.0, f64::max);
        return Err(UniError::Unreliable(worst));
    }
    let scale = 1.0 + report.roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    Ok(report.roots.iter().all(|r| r.im.abs() <= tol * scale))
}

/// Detect f = c*g within tol (l1-relative). Constant taken from the
/// leading coefficients.
pub fn proportional(f: &UniPoly, g: &UniPoly, tol: f64) -> Option<Complex64> {
    if f.is_zero() || g.is_zero() || f.degree() != g.degree() {
        return None;
    }
    let c = f.coeffs[f.degree()] / g.coeffs[g.degree()];
    let diff: f64 = f
        .coeffs
        .iter()
        .zip(g.coeffs.iter())
        .map(|(a, b)| (a - c * b).norm())
        .sum();
    if diff <= tol * f.l1_norm() {
        Some(c)
    } else {
        None
    }
}

/// Classify a pair of real-rooted polynomials per the alternating-roots
/// table: distinct alternating roots with the largest belonging to f,
/// deg g in {deg f, deg f - 1}. Shared roots between f and g yield
/// `None` (the table assumes the roots of fg are distinct).
pub fn interlace_classify(
    f: &UniPoly,
    g: &UniPoly,
    tol: f64,
) -> Result<InterlaceRelation, UniError> {
    if f.is_zero() || g.is_zero() {
        return Ok(InterlaceRelation::None);
    }
    if !f.is_real() || !g.is_real() {
        return Err(UniError::NonReal(f.max_imag_coeff().max(g.max_imag_coeff())));
    }
    // proportionality first: the table assumes distinct roots
    if proportional(f, g, tol).is_some() {
        return Ok(InterlaceRelation::Proportional);
    }
    if !is_real_rooted(f, tol)? || !is_real_rooted(g, tol)? {
        return Err(UniError::NotRealRooted);
    }
    let n = f.degree();
    let m = g.degree();
    if n == 0 || (m != n && m + 1 != n) {
        return Ok(InterlaceRelation::None);
    }
    // normalize f to positive leading coefficient; flipping the sign of f
    // flips both f <- g and f <- -g, so the tag is unchanged.
    let f_lead = f.coeffs[n].re;
    let g_lead_positive = if f_lead >= 0.0 {
        g.coeffs[m].re > 0.0
    } else {
        g.coeffs[m].re < 0.0
    };

    let rf: Vec<f64> = all_roots(f)?.roots.iter().map(|r| r.re).collect();
    let rg: Vec<f64> = all_roots(g)?.roots.iter().map(|r| r.re).collect();
    let span = rf
        .iter()
        .chain(rg.iter())
        .map(|r| r.abs())
        .fold(0.0, f64::max);
    let gap = tol.sqrt() * (1.0 + span);

    // all roots pairwise distinct
    let mut tagged: Vec<(f64, u8)> = rf.iter().map(|&r| (r, 0u8)).collect();
    tagged.extend(rg.iter().map(|&r| (r, 1u8)));
    tagged.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for w in tagged.windows(2) {
        if (w[1].0 - w[0].0).abs() <= gap {
            return Ok(InterlaceRelation::None);
        }
    }
    // alternation with the largest root belonging to f
    if tagged.last().map(|t| t.1) != Some(0) {
        return Ok(InterlaceRelation::None);
    }
    for w in tagged.windows(2) {
        if w[0].1 == w[1].1 {
            return Ok(InterlaceRelation::None);
        }
    }
    if g_lead_positive {
        Ok(InterlaceRelation::FArrowG)
    } else {
        Ok(InterlaceRelation::FArrowNegG)
    }
}

/// Split p = g + i*h into real coefficient parts and report whether the
/// pair interlaces, i.e. whether p is in the upper-stability class.
/// With h = 0 this degenerates to membership of g alone.
pub fn hb_split(p: &UniPoly) -> (UniPoly, UniPoly, bool) {
    let (g, h) = p.split_real_imag();
    let interlaces = if p.degree() == 0 {
        !p.is_zero()
    } else {
        matches!(
            in_u1(p, DEFAULT_TOL),
            Ok(U1Verdict::Member) | Ok(U1Verdict::Boundary)
        )
    };
    (g, h, interlaces)
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

    #[test]
    fn roots_of_simple_quadratics() {
        // x^2 - 1 -> {-1, 1}, margin 0
        let p = UniPoly::from_real(&[-1.0, 0.0, 1.0]);
        let rep = all_roots(&p).unwrap();
        assert!(rep.reliable);
        assert!((rep.roots[0] - c(-1.0)).norm() < 1e-12);
        assert!((rep.roots[1] - c(1.0)).norm() < 1e-12);
        assert!(rep.max_uhp_margin.abs() < 1e-12);

        // x^2 + 1 -> {i, -i}, margin 1
        let p = UniPoly::from_real(&[1.0, 0.0, 1.0]);
        let rep = all_roots(&p).unwrap();
        assert!((rep.max_uhp_margin - 1.0).abs() < 1e-12);

        // x + i -> {-i}, margin -1
        let p = UniPoly::new(vec![ci(0.0, 1.0), c(1.0)]);
        let rep = all_roots(&p).unwrap();
        assert!((rep.roots[0] - ci(0.0, -1.0)).norm() < 1e-12);
        assert!((rep.max_uhp_margin + 1.0).abs() < 1e-12);
    }

    #[test]
    fn roots_reject_degenerate_inputs() {
        assert!(all_roots(&UniPoly::from_real(&[1.0])).is_err());
        assert!(all_roots(&UniPoly::new(vec![])).is_err());
        let mut coeffs = vec![0.0; 66];
        coeffs[0] = 1.0;
        coeffs[65] = 1.0;
        assert!(all_roots(&UniPoly::from_real(&coeffs)).is_err());
    }

    #[test]
    fn aberth_recovers_well_separated_roots() {
        let roots: Vec<Complex64> = (0..10).map(|k| c(k as f64 * 1.5 - 7.0)).collect();
        let p = UniPoly::from_roots(&roots);
        let rep = all_roots(&p).unwrap();
        assert!(rep.reliable);
        let maxr = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        for (found, expect) in rep.roots.iter().zip(roots.iter()) {
            assert!(
                (found - expect).norm() <= 1e-6 * (1.0 + maxr),
                "root {found} vs {expect}"
            );
        }
    }

    #[test]
    fn aberth_handles_origin_and_complex_roots() {
        // z^3 * (z - i) * (z + 2)
        let roots = vec![
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
            ci(0.0, 1.0),
            c(-2.0),
        ];
        let p = UniPoly::from_roots(&roots);
        let rep = all_roots(&p).unwrap();
        assert!(rep.reliable);
        assert_eq!(rep.roots.len(), 5);
        assert!((rep.max_uhp_margin - 1.0).abs() < 1e-9);
    }

    #[test]
    fn in_u1_cases() {
        let tol = DEFAULT_TOL;
        assert_eq!(
            in_u1(&UniPoly::from_real(&[-1.0, 0.0, 1.0]), tol).unwrap(),
            U1Verdict::Member
        );
        // x - i has its root at i
        match in_u1(&UniPoly::new(vec![ci(0.0, -1.0), c(1.0)]), tol).unwrap() {
            U1Verdict::NonMemberWitness(w) => assert!((w - ci(0.0, 1.0)).norm() < 1e-12),
            v => panic!("expected witness, got {v:?}"),
        }
        // x^2 + x - 1: roots (-1 +- sqrt5)/2 are real
        assert_eq!(
            in_u1(&UniPoly::from_real(&[-1.0, 1.0, 1.0]), tol).unwrap(),
            U1Verdict::Member
        );
    }

    #[test]
    fn in_u1_multiplicative_on_random_pairs() {
        // Fact at d=1: membership of a product iff membership of factors
        let member = UniPoly::from_roots(&[c(-1.0), c(0.5), ci(1.0, -2.0)]);
        let non_member = UniPoly::from_roots(&[ci(0.0, 1.5), c(2.0)]);
        let tol = DEFAULT_TOL;
        let prod_mm = mul(&member, &member);
        assert_eq!(in_u1(&prod_mm, tol).unwrap(), U1Verdict::Member);
        let prod_mn = mul(&member, &non_member);
        assert!(matches!(
            in_u1(&prod_mn, tol).unwrap(),
            U1Verdict::NonMemberWitness(_)
        ));
    }

    fn mul(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let mut out = vec![Complex64::ZERO; a.degree() + b.degree() + 1];
        for (i, &x) in a.coeffs().iter().enumerate() {
            for (j, &y) in b.coeffs().iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        UniPoly::new(out)
    }

    #[test]
    fn real_rooted_cases() {
        let tol = DEFAULT_TOL;
        assert!(is_real_rooted(&UniPoly::from_real(&[2.0, 3.0, 1.0]), tol).unwrap());
        assert!(!is_real_rooted(&UniPoly::from_real(&[1.0, 0.0, 1.0]), tol).unwrap());
        assert!(is_real_rooted(&UniPoly::from_real(&[-1.0, 1.0, 1.0]), tol).unwrap());
        assert!(is_real_rooted(&UniPoly::new(vec![ci(0.0, 1.0), c(1.0)]), tol).is_err());
    }

    #[test]
    fn interlace_table_rows() {
        let tol = DEFAULT_TOL;
        let f = UniPoly::from_real(&[-1.0, 0.0, 1.0]); // x^2 - 1
        let g = UniPoly::from_real(&[0.0, 1.0]); // x
        assert_eq!(interlace_classify(&f, &g, tol).unwrap(), InterlaceRelation::FArrowG);
        let neg = UniPoly::from_real(&[0.0, -1.0]);
        assert_eq!(
            interlace_classify(&f, &neg, tol).unwrap(),
            InterlaceRelation::FArrowNegG
        );
        let f2 = UniPoly::from_real(&[2.0, 2.0]);
        let g2 = UniPoly::from_real(&[1.0, 1.0]);
        assert_eq!(
            interlace_classify(&f2, &g2, tol).unwrap(),
            InterlaceRelation::Proportional
        );
        // shared roots -> None
        let h = UniPoly::from_real(&[-1.0, 1.0]); // x - 1 shares a root with x^2-1
        assert_eq!(interlace_classify(&f, &h, tol).unwrap(), InterlaceRelation::None);
        // derivative interlaces
        let p = UniPoly::from_roots(&[c(-2.0), c(0.0), c(3.0)]);
        let dp = p.derivative();
        assert_eq!(interlace_classify(&p, &dp, tol).unwrap(), InterlaceRelation::FArrowG);
    }

    #[test]
    fn hb_split_cases() {
        // x + i
        let p = UniPoly::new(vec![ci(0.0, 1.0), c(1.0)]);
        let (g, h, ok) = hb_split(&p);
        assert_eq!(g, UniPoly::from_real(&[0.0, 1.0]));
        assert_eq!(h, UniPoly::from_real(&[1.0]));
        assert!(ok);
        // x - i is not in U1
        let p = UniPoly::new(vec![ci(0.0, -1.0), c(1.0)]);
        let (_, h, ok) = hb_split(&p);
        assert_eq!(h, UniPoly::from_real(&[-1.0]));
        assert!(!ok);
        // h = 0 degenerates to membership of g
        let p = UniPoly::from_real(&[-1.0, 0.0, 1.0]);
        let (g, h, ok) = hb_split(&p);
        assert_eq!(g, p);
        assert!(h.is_zero());
        assert!(ok);
    }

    #[test]
    fn hb_split_round_trip() {
        let p = UniPoly::new(vec![ci(1.0, -2.0), ci(0.0, 3.0), ci(2.0, 0.5)]);
        let (g, h, _) = hb_split(&p);
        let rebuilt: Vec<Complex64> = (0..=p.degree())
            .map(|k| {
                let gr = g.coeffs().get(k).copied().unwrap_or(Complex64::ZERO);
                let hr = h.coeffs().get(k).copied().unwrap_or(Complex64::ZERO);
                gr + Complex64::new(0.0, 1.0) * hr
            })
            .collect();
        assert_eq!(UniPoly::new(rebuilt), p);
    }
}
