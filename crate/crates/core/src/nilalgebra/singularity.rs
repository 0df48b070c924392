//! Singularity classification of `Z -> j_Z`.
//!
//! The ladder runs from cheap exact certificates to probing:
//! odd `dim v`, the H-type identity, `Pf(j_Z) == 0`, exact zeros at probe
//! points, a factorization of `det(j_Z)` into positive definite quadrics, a
//! positive sum of even monomials, and finally Sturm root counts on lines.

use super::NilAlgebra;
use crate::exactmath::pfaffian::pfaffian_poly;
use crate::exactmath::poly::MultiPoly;
use crate::exactmath::rational::{int, one, random_small, random_small_nonzero, zero, Rational};
use crate::exactmath::upoly::{count_real_roots, isolate_real_roots, Interval, RootInterval, UniPoly};
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_PROBE_SLICES: usize = 64;

/// Random evaluation points tried after the basis-derived probes.
const RANDOM_PROBES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SingularWitness {
    /// `j_Z` has the nonzero kernel vector `kernel` at the rational point `z`.
    Point { z: Vec<Rational>, kernel: Vec<Rational> },
    /// `t -> Pf(j_{base + t dir})` equals `slice` and has exactly one root in
    /// `root`.
    Slice {
        base: Vec<Rational>,
        direction: Vec<Rational>,
        slice: UniPoly,
        root: RootInterval,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularReason {
    OddDimension,
    PfaffianVanishes,
}

/// `|Z|^2 + c z_t^2`, or `|Z|^2` alone when `coordinate` is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticFactor {
    pub coordinate: Option<usize>,
    pub c: Rational,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonSingularCertificate {
    HTypeIdentity,
    /// `det(j_Z) = scale * prod q_i(Z)^{e_i}` with every `q_i` positive definite.
    DetFactorization { scale: Rational, factors: Vec<QuadraticFactor> },
    /// `Pf(j_Z)` is a combination of even monomials whose coefficients all
    /// share one strict sign, and every pure power `z_t^d` occurs.
    PositiveSquares { pfaffian: MultiPoly },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SingularityVerdict {
    Singular { reason: SingularReason, witness: SingularWitness },
    AlmostNonSingular { singular: SingularWitness, nonsingular: Vec<Rational> },
    NonSingular(NonSingularCertificate),
    HeuristicallyNonSingular { slices: usize },
}

impl SingularityVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            SingularityVerdict::Singular { .. } => "Singular",
            SingularityVerdict::AlmostNonSingular { .. } => "AlmostNonSingular",
            SingularityVerdict::NonSingular(_) => "NonSingular",
            SingularityVerdict::HeuristicallyNonSingular { .. } => "HeuristicallyNonSingular",
        }
    }

    /// Re-checks every witness and certificate with exact arithmetic.
    pub fn verify(&self, a: &NilAlgebra) -> bool {
        match self {
            SingularityVerdict::Singular { reason, witness } => {
                let reason_ok = match reason {
                    SingularReason::OddDimension => a.dim_v() % 2 == 1,
                    SingularReason::PfaffianVanishes => pfaffian_of(a).is_none_or(|p| p.is_zero()),
                };
                reason_ok && witness.verify(a)
            }
            SingularityVerdict::AlmostNonSingular { singular, nonsingular } => {
                singular.verify(a)
                    && a.j_operator(nonsingular)
                        .map(|j| !j.determinant().is_zero())
                        .unwrap_or(false)
            }
            SingularityVerdict::NonSingular(cert) => cert.verify(a),
            SingularityVerdict::HeuristicallyNonSingular { .. } => a.dim_v().is_multiple_of(2),
        }
    }
}

impl SingularWitness {
    pub fn verify(&self, a: &NilAlgebra) -> bool {
        match self {
            SingularWitness::Point { z, kernel } => {
                let Ok(j) = a.j_operator(z) else { return false };
                z.iter().any(|x| !x.is_zero())
                    && kernel.len() == a.dim_v()
                    && kernel.iter().any(|x| !x.is_zero())
                    && j.mul_vec(kernel).iter().all(Zero::is_zero)
            }
            SingularWitness::Slice {
                base,
                direction,
                slice,
                root,
            } => {
                let Some(pf) = pfaffian_of(a) else { return false };
                if base.len() != a.dim_z() || direction.len() != a.dim_z() {
                    return false;
                }
                if &pf.restrict_to_line(base, direction) != slice || slice.is_zero() {
                    return false;
                }
                if root.is_exact() {
                    slice.eval(&root.lo).is_zero()
                } else {
                    count_real_roots(slice, &Interval::left_open(root.lo.clone(), root.hi.clone())) == Ok(1)
                }
            }
        }
    }
}

impl QuadraticFactor {
    pub fn polynomial(&self, vars: &crate::exactmath::poly::VarNames) -> MultiPoly {
        let m = vars.len();
        let mut q = MultiPoly::zero(vars);
        for t in 0..m {
            let mut c = one();
            if self.coordinate == Some(t) {
                c += &self.c;
            }
            let mut e = vec![0; m];
            e[t] = 2;
            q = &q + &MultiPoly::from_terms(vars, [(e, c)]);
        }
        q
    }

    pub fn is_positive_definite(&self) -> bool {
        self.coordinate.is_none() || (one() + &self.c).is_positive()
    }
}

impl NonSingularCertificate {
    pub fn verify(&self, a: &NilAlgebra) -> bool {
        match self {
            NonSingularCertificate::HTypeIdentity => a.is_htype(),
            NonSingularCertificate::DetFactorization { scale, factors } => {
                let Some(pf) = pfaffian_of(a) else { return false };
                if scale.is_zero() || !factors.iter().all(QuadraticFactor::is_positive_definite) {
                    return false;
                }
                let vars = pf.vars().clone();
                let mut rhs = MultiPoly::constant(&vars, scale.clone());
                for f in factors {
                    rhs = &rhs * &f.polynomial(&vars).pow(f.exponent);
                }
                &pf * &pf == rhs
            }
            NonSingularCertificate::PositiveSquares { pfaffian } => {
                pfaffian_of(a).as_ref() == Some(pfaffian) && positive_squares(pfaffian)
            }
        }
    }
}

/// Symbolic `Pf(j_Z)`, or `None` in odd dimension.
pub fn pfaffian_of(a: &NilAlgebra) -> Option<MultiPoly> {
    if a.dim_v() % 2 == 1 {
        return None;
    }
    let (vars, rows) = a.j_symbolic();
    Some(pfaffian_poly(&rows, &vars).expect("j_Z is skew of even order"))
}

fn unit(m: usize, t: usize) -> Vec<Rational> {
    (0..m).map(|s| if s == t { one() } else { zero() }).collect()
}

fn kernel_vector(a: &NilAlgebra, z: &[Rational]) -> Option<Vec<Rational>> {
    a.j_operator(z).ok()?.nullspace().into_iter().next()
}

fn point_witness(a: &NilAlgebra, z: Vec<Rational>) -> SingularWitness {
    let kernel = kernel_vector(a, &z).expect("singular point has a kernel");
    SingularWitness::Point { z, kernel }
}

/// Basis vectors, then `Z_s + Z_t` and `Z_s - Z_t`, then random points.
fn probe_points(m: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = (0..m).map(|t| unit(m, t)).collect();
    for s in 0..m {
        for t in s + 1..m {
            for sign in [1, -1] {
                let mut p = unit(m, s);
                p[t] = int(sign);
                out.push(p);
            }
        }
    }
    for _ in 0..RANDOM_PROBES {
        out.push(random_nonzero_point(m, rng));
    }
    out
}

fn random_nonzero_point(m: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    loop {
        let p: Vec<Rational> = (0..m).map(|_| random_small(rng)).collect();
        if p.iter().any(|x| !x.is_zero()) {
            return p;
        }
    }
}

/// All monomials even, one strict sign, and each `z_t^d` present.
fn positive_squares(p: &MultiPoly) -> bool {
    let Some(d) = p.total_degree() else { return false };
    if !p.is_even_in_each_variable() || !p.is_homogeneous(d) {
        return false;
    }
    let mut signs = p.terms().map(|(_, c)| c.is_positive());
    let Some(first) = signs.next() else { return false };
    if !signs.all(|s| s == first) {
        return false;
    }
    let m = p.nvars();
    (0..m).all(|t| {
        let mut e = vec![0; m];
        e[t] = d;
        !p.coeff(&e).is_zero()
    })
}

/// Tries `target = s * |Z|^{2a} * (|Z|^2 + c z_t^2)^{2b}`-style matches with
/// `a + b = k`, where `target` is homogeneous of degree `2k`.
fn match_quadric_product(target: &MultiPoly, k: u32) -> Option<(Rational, Vec<QuadraticFactor>)> {
    let vars = target.vars().clone();
    let m = vars.len();
    let pure = |t: usize| {
        let mut e = vec![0; m];
        e[t] = 2 * k;
        target.coeff(&e)
    };
    let check = |scale: &Rational, factors: &[QuadraticFactor]| {
        let mut rhs = MultiPoly::constant(&vars, scale.clone());
        for f in factors {
            rhs = &rhs * &f.polynomial(&vars).pow(f.exponent);
        }
        &rhs == target
    };
    // b = 0: a pure power of the norm
    let s = pure(0);
    if !s.is_zero() {
        let factors = vec![QuadraticFactor {
            coordinate: None,
            c: zero(),
            exponent: k,
        }];
        if check(&s, &factors) {
            return Some((s, factors));
        }
    }
    if m < 2 {
        return None;
    }
    for t in 0..m {
        let other = if t == 0 { 1 } else { 0 };
        let s = pure(other);
        if s.is_zero() {
            continue;
        }
        // coefficient of z_t^2 z_other^{2k-2} is s (k + b c)
        let mut e = vec![0; m];
        e[t] = 2;
        e[other] = 2 * k - 2;
        let mixed = &target.coeff(&e) / &s;
        for b in 1..=k {
            let c = (&mixed - int(k as i64)) / int(b as i64);
            if c.is_zero() || !(one() + &c).is_positive() {
                continue;
            }
            let mut factors = Vec::new();
            if k > b {
                factors.push(QuadraticFactor {
                    coordinate: None,
                    c: zero(),
                    exponent: k - b,
                });
            }
            factors.push(QuadraticFactor {
                coordinate: Some(t),
                c,
                exponent: b,
            });
            if check(&s, &factors) {
                return Some((s, factors));
            }
        }
    }
    None
}

/// Factorization certificate for `det(j_Z) = Pf^2`. When `dim v = 4k` the
/// match is done on the Pfaffian and the exponents doubled.
fn det_factorization(pf: &MultiPoly, n: usize) -> Option<NonSingularCertificate> {
    let (scale, factors) = if n.is_multiple_of(4) {
        let (s, fs) = match_quadric_product(pf, (n / 4) as u32)?;
        let fs = fs
            .into_iter()
            .map(|f| QuadraticFactor {
                exponent: 2 * f.exponent,
                ..f
            })
            .collect();
        (&s * &s, fs)
    } else {
        match_quadric_product(&(pf * pf), (n / 2) as u32)?
    };
    if !factors.iter().all(QuadraticFactor::is_positive_definite) {
        return None;
    }
    Some(NonSingularCertificate::DetFactorization { scale, factors })
}

fn slice_witness(pf: &MultiPoly, base: &[Rational], dir: &[Rational], a: &NilAlgebra) -> Option<SingularWitness> {
    let slice = pf.restrict_to_line(base, dir);
    if slice.is_zero() {
        return Some(point_witness(a, base.to_vec()));
    }
    let roots = isolate_real_roots(&slice, &Interval::real_line()).ok()?;
    let root = roots.into_iter().next()?;
    if root.is_exact() {
        let z: Vec<Rational> = base.iter().zip(dir).map(|(b, d)| b + &root.lo * d).collect();
        if z.iter().any(|x| !x.is_zero()) {
            return Some(point_witness(a, z));
        }
    }
    Some(SingularWitness::Slice {
        base: base.to_vec(),
        direction: dir.to_vec(),
        slice,
        root,
    })
}

/// Decides whether `j_Z` is invertible for all, some or no nonzero `Z`.
pub fn classify_singularity(a: &NilAlgebra, probe_slices: usize, seed: u64) -> SingularityVerdict {
    let (n, m) = (a.dim_v(), a.dim_z());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if n % 2 == 1 {
        return SingularityVerdict::Singular {
            reason: SingularReason::OddDimension,
            witness: point_witness(a, unit(m, 0)),
        };
    }
    if a.is_htype() {
        return SingularityVerdict::NonSingular(NonSingularCertificate::HTypeIdentity);
    }
    let pf = pfaffian_of(a).expect("even dimension");
    if pf.is_zero() {
        let z = random_nonzero_point(m, &mut rng);
        return SingularityVerdict::Singular {
            reason: SingularReason::PfaffianVanishes,
            witness: point_witness(a, z),
        };
    }

    let probes = probe_points(m, &mut rng);
    let dir: Vec<Rational> = (0..m).map(|_| random_small_nonzero(&mut rng)).collect();
    let mut best_zero: Option<(usize, &Vec<Rational>)> = None;
    let mut nonzero: Option<&Vec<Rational>> = None;
    for p in &probes {
        if pf.eval(p).is_zero() {
            let order = pf.restrict_to_line(p, &dir).order_at_zero().unwrap_or(usize::MAX);
            if best_zero.is_none_or(|(o, _)| order > o) {
                best_zero = Some((order, p));
            }
        } else if nonzero.is_none() {
            nonzero = Some(p);
        }
    }
    let nonzero = match nonzero {
        Some(p) => p.clone(),
        None => loop {
            let p = random_nonzero_point(m, &mut rng);
            if !pf.eval(&p).is_zero() {
                break p;
            }
        },
    };
    if let Some((_, z)) = best_zero {
        return SingularityVerdict::AlmostNonSingular {
            singular: point_witness(a, z.clone()),
            nonsingular: nonzero,
        };
    }

    if let Some(cert) = det_factorization(&pf, n) {
        return SingularityVerdict::NonSingular(cert);
    }
    if positive_squares(&pf) {
        return SingularityVerdict::NonSingular(NonSingularCertificate::PositiveSquares { pfaffian: pf });
    }

    let mut lines = Vec::new();
    for s in 0..m {
        for t in 0..m {
            if s != t {
                lines.push((unit(m, s), unit(m, t)));
            }
        }
    }
    for _ in 0..probe_slices {
        let base = random_nonzero_point(m, &mut rng);
        let dir = random_nonzero_point(m, &mut rng);
        lines.push((base, dir));
    }
    for (base, dir) in &lines {
        if let Some(w) = slice_witness(&pf, base, dir, a) {
            return SingularityVerdict::AlmostNonSingular {
                singular: w,
                nonsingular: nonzero,
            };
        }
    }
    SingularityVerdict::HeuristicallyNonSingular { slices: lines.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;

    fn e(m: usize, t: usize) -> Vec<Rational> {
        unit(m, t)
    }

    fn graph43() -> NilAlgebra {
        NilAlgebra::from_brackets("graph43", 4, 3, [((0, 1), e(3, 0)), ((1, 2), e(3, 1)), ((2, 3), e(3, 2))]).unwrap()
    }

    #[test]
    fn heisenberg_is_htype() {
        let h3 = NilAlgebra::from_brackets("h3", 2, 1, [((0, 1), vec![int(1)])]).unwrap();
        let v = classify_singularity(&h3, 4, 0);
        assert_eq!(v, SingularityVerdict::NonSingular(NonSingularCertificate::HTypeIdentity));
        assert!(v.verify(&h3));
    }

    #[test]
    fn graph43_witness_is_z2() {
        let g = graph43();
        let v = classify_singularity(&g, 4, 0);
        match &v {
            SingularityVerdict::AlmostNonSingular {
                singular: SingularWitness::Point { z, .. },
                ..
            } => assert_eq!(z, &e(3, 1)),
            other => panic!("unexpected verdict {other:?}"),
        }
        assert!(v.verify(&g));
    }

    #[test]
    fn odd_dimension_is_singular() {
        let a = NilAlgebra::from_brackets("s", 3, 1, [((0, 1), vec![int(1)]), ((1, 2), vec![int(1)])]).unwrap();
        let v = classify_singularity(&a, 4, 0);
        assert!(matches!(
            v,
            SingularityVerdict::Singular {
                reason: SingularReason::OddDimension,
                ..
            }
        ));
        assert!(v.verify(&a));
    }

    #[test]
    fn factorization_found_for_scaled_heisenberg() {
        // [V1,V2] = Z1, [V3,V4] = 2 Z1: Pf = 2 z^2, not H-type
        let a = NilAlgebra::from_brackets("h5'", 4, 1, [((0, 1), vec![int(1)]), ((2, 3), vec![int(2)])]).unwrap();
        let v = classify_singularity(&a, 4, 0);
        assert!(matches!(v, SingularityVerdict::NonSingular(NonSingularCertificate::DetFactorization { .. })));
        assert!(v.verify(&a));
    }

    #[test]
    fn slice_finds_irrational_zero() {
        // Pf = z1^2 - 2 z2^2 vanishes only at irrational points
        let a = NilAlgebra::from_brackets(
            "irr",
            4,
            2,
            [
                ((0, 1), vec![int(1), int(0)]),
                ((2, 3), vec![int(1), int(0)]),
                ((0, 2), vec![int(0), int(1)]),
                ((1, 3), vec![int(0), int(2)]),
            ],
        )
        .unwrap();
        let pf = pfaffian_of(&a).unwrap();
        assert!(pf.eval(&[int(1), int(0)]) != zero());
        let v = classify_singularity(&a, 8, 3);
        assert!(v.verify(&a), "{v:?}");
        assert_eq!(v.kind(), "AlmostNonSingular");
        assert!(pf.eval(&[rat(1, 3), int(1)]) != zero());
    }
}
