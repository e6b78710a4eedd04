//! Continued fractions outside the kappa family: the `(d, e, t, h, mu)`
//! specs, the `(i, j, mu)` generator, ratio identities, published catalogs
//! and the limits that do not involve `G`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::cf_engine::{CFSpec, Numerator, PolyInt};
use crate::discovery::{discover, Discovery, DiscoveryConfig};
use crate::error::{Error, Result};
use crate::kappa_forms::catalan_number;
use crate::lattice::GLimit;
use crate::numerics::Rational;

/// `a(n) = 3n^2 + delta n + epsilon`, `b(n) = -2n(n+tau)(n+eta)(n+mu)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilySpec {
    pub delta: i64,
    pub epsilon: i64,
    pub tau: i64,
    pub eta: i64,
    pub mu: i64,
}

impl FamilySpec {
    pub const fn new(delta: i64, epsilon: i64, tau: i64, eta: i64, mu: i64) -> Self {
        FamilySpec {
            delta,
            epsilon,
            tau,
            eta,
            mu,
        }
    }

    pub fn with_mu(self, mu: i64) -> Self {
        FamilySpec { mu, ..self }
    }

    /// `b` is symmetric in `tau` and `eta`; this is the order-free key.
    pub fn offsets(&self) -> [i64; 2] {
        [self.tau.min(self.eta), self.tau.max(self.eta)]
    }

    /// Same continued fraction, ignoring the order of `tau` and `eta`.
    pub fn equivalent(&self, other: &FamilySpec) -> bool {
        self.delta == other.delta
            && self.epsilon == other.epsilon
            && self.mu == other.mu
            && self.offsets() == other.offsets()
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {})",
            self.delta, self.epsilon, self.tau, self.eta, self.mu
        )
    }
}

pub fn family_cf(spec: &FamilySpec) -> CFSpec {
    CFSpec::new(
        PolyInt::from_i64(&[spec.epsilon, spec.delta, 3]),
        Numerator::product(
            -2,
            vec![
                PolyInt::linear(1, 0),
                PolyInt::linear(1, spec.tau),
                PolyInt::linear(1, spec.eta),
                PolyInt::linear(1, spec.mu),
            ],
        ),
    )
}

/// `a(n) = j(2i-j+2) + (4i+3)n + 3n^2`,
/// `b(n) = -2n(n+j-1)(n+2i-j+1)(n+mu)`.
pub fn ij_family(i: i64, j: i64, mu: i64) -> Result<CFSpec> {
    if i < 0 || j < 0 || j > i / 2 + 1 {
        return Err(Error::invalid(format!("need i >= 0 and 0 <= j <= i/2 + 1, got ({i}, {j})")));
    }
    Ok(ij_family_twice(2 * i, j, mu))
}

/// The generator at `i = twice_i / 2`, allowing half-integer steps.
pub fn ij_family_twice(twice_i: i64, j: i64, mu: i64) -> CFSpec {
    CFSpec::new(
        PolyInt::from_i64(&[j * (twice_i - j + 2), 2 * twice_i + 3, 3]),
        Numerator::product(
            -2,
            vec![
                PolyInt::linear(1, 0),
                PolyInt::linear(1, j - 1),
                PolyInt::linear(1, twice_i - j + 1),
                PolyInt::linear(1, mu),
            ],
        ),
    )
}

#[derive(Clone, Debug)]
pub struct GeneratorEntry {
    /// `i` as a rational (integer unless half steps were requested).
    pub i: Rational,
    pub j: i64,
    pub cf: CFSpec,
}

/// All `(i, j)` with `3 <= i <= l_bound`, `0 <= j <= floor(i/2) + 1`,
/// stepping `i` by 1 or by 1/2.
pub fn enumerate_generator(l_bound: i64, mu: i64, half_steps: bool) -> Result<Vec<GeneratorEntry>> {
    if l_bound < 3 {
        return Err(Error::invalid("generator bound must be >= 3"));
    }
    let step = if half_steps { 1 } else { 2 };
    let mut out = Vec::new();
    for twice_i in (6..=2 * l_bound).step_by(step) {
        for j in 0..=twice_i / 4 + 1 {
            out.push(GeneratorEntry {
                i: Rational::new(twice_i.into(), 2.into()),
                j,
                cf: ij_family_twice(twice_i, j, mu),
            });
        }
    }
    Ok(out)
}

/// A parametric row `delta = 4i + delta0`, `eta` fixed,
/// `tau = tau_slope i + tau0`, `epsilon = (eta+1)(tau+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyRow {
    pub delta0: i64,
    pub eta: i64,
    pub tau_slope: i64,
    pub tau0: i64,
    /// `(slope, offset)` of `tau` as originally listed, when it differs.
    pub printed_tau: Option<(i64, i64)>,
}

impl FamilyRow {
    pub fn instantiate(&self, i: i64, mu: i64) -> FamilySpec {
        let tau = self.tau_slope * i + self.tau0;
        FamilySpec::new(4 * i + self.delta0, (self.eta + 1) * (tau + 1), tau, self.eta, mu)
    }
}

/// Parametric families with running `mu`.
pub fn family_catalog() -> Vec<FamilyRow> {
    let row = |delta0, eta, tau_slope, tau0, printed_tau| FamilyRow {
        delta0,
        eta,
        tau_slope,
        tau0,
        printed_tau,
    };
    vec![
        row(7, 0, 2, 2, None),
        row(11, 2, 2, 2, None),
        // listed as 4i + 4, which only agrees at i = 0 and breaks delta = 3 + 2(tau + eta)
        row(19, 4, 2, 4, Some((4, 4))),
        row(27, 6, 2, 6, None),
        row(35, 8, 2, 8, None),
    ]
}

/// One column of limits over running `mu = 0..=6`.
#[derive(Clone, Debug)]
pub struct Subtable {
    pub label: char,
    pub spec: FamilySpec,
    pub rows: Vec<[i64; 3]>,
}

/// The nine published columns; `spec.mu` is a placeholder.
pub fn subtables() -> Vec<Subtable> {
    let t = |label, d, e, tau, eta, rows: [[i64; 3]; 7]| Subtable {
        label,
        spec: FamilySpec::new(d, e, tau, eta, 0),
        rows: rows.to_vec(),
    };
    vec![
        t('a', 3, 1, 0, 0, [
            [1, 0, 2], [2, -1, 2], [24, -11, 18], [720, -299, 450],
            [40320, -15371, 22050], [403200, -142819, 198450], [53222400, -17684299, 24012450],
        ]),
        t('b', 7, 3, 0, 2, [
            [2, -1, 2], [4, 1, 2], [16, -1, 6], [288, -31, 90],
            [11520, -1373, 3150], [89600, -10891, 22050], [9676800, -1167809, 2182950],
        ]),
        t('c', 11, 5, 0, 4, [
            [24, -11, 18], [16, -1, 6], [64, 13, 18], [384, 1, 90],
            [3072, -121, 630], [51200, -2839, 9450], [4300800, -269803, 727650],
        ]),
        t('d', 11, 9, 2, 2, [
            [4, -5, 6], [8, 3, -2], [32, 5, 2], [192, 13, 18],
            [4608, 133, 450], [230400, 1909, 22050], [2150400, -8419, 198450],
        ]),
        t('e', 15, 7, 0, 6, [
            [720, -299, 450], [288, -31, 90], [384, 1, 90], [2304, 389, 450],
            [18432, 419, 3150], [61440, -791, 9450], [737280, -20989, 103950],
        ]),
        t('f', 15, 15, 4, 2, [
            [48, -79, 90], [32, 19, -18], [128, 17, -6], [768, 77, 18],
            [2048, 129, 90], [61440, 2467, 3150], [1228800, 31327, 66150],
        ]),
        t('g', 19, 21, 2, 6, [
            [1440, -2813, 3150], [576, 443, -450], [768, 127, -90], [4608, 383, -90],
            [36864, 2693, 450], [122880, 6563, 3150], [294912, 11497, 9450],
        ]),
        t('h', 19, 25, 4, 4, [
            [192, -569, 630], [128, 253, -270], [512, -25, 54], [3072, 179, -18],
            [8192, 487, 54], [81920, 3983, 1350], [327680, 12583, 7350],
        ]),
        t('i', 23, 35, 4, 6, [
            [1920, -8599, 9450], [768, 2909, -3150], [1024, -379, 450], [2048, 43, 30],
            [49152, 1919, -90], [163840, 6789, 450], [393216, 14755, 3150],
        ]),
    ]
}

#[derive(Clone, Debug)]
pub struct SporadicEntry {
    pub spec: FamilySpec,
    /// `None` for entries whose limit is a discovery target.
    pub printed: Option<[i64; 3]>,
}

/// Sporadic cases: seven with known limits followed by fifteen targets.
pub fn sporadic_catalog() -> Vec<SporadicEntry> {
    let known: [(i64, i64, i64, i64, i64, [i64; 3]); 7] = [
        (9, 7, 1, 1, 1, [1, 2, -2]),
        (13, 13, 1, 1, 3, [6, 17, -18]),
        (15, 19, 2, 2, 2, [8, -49, 54]),
        (17, 19, 1, 1, 5, [120, 419, -450]),
        (17, 23, 1, 3, 3, [12, 83, -90]),
        (19, 29, 2, 2, 4, [32, -411, 450]),
        (21, 33, 1, 3, 5, [240, 2893, -3150]),
    ];
    let targets: [(i64, i64, i64, i64, i64); 15] = [
        (23, 39, 2, 2, 6),
        (23, 43, 2, 4, 4),
        (25, 31, 1, 1, 9),
        (25, 43, 1, 3, 7),
        (25, 47, 1, 5, 5),
        (25, 51, 3, 3, 5),
        (21, 25, 1, 1, 7),
        (21, 37, 3, 3, 3),
        (27, 57, 2, 4, 6),
        (27, 61, 4, 4, 4),
        (29, 37, 1, 1, 11),
        (29, 53, 1, 3, 9),
        (31, 59, 2, 2, 10),
        (33, 43, 1, 1, 13),
        (37, 49, 1, 1, 15),
    ];
    let mut out: Vec<SporadicEntry> = known
        .iter()
        .map(|&(d, e, t, h, m, triple)| SporadicEntry {
            spec: FamilySpec::new(d, e, t, h, m),
            printed: Some(triple),
        })
        .collect();
    out.extend(targets.iter().map(|&(d, e, t, h, m)| SporadicEntry {
        spec: FamilySpec::new(d, e, t, h, m),
        printed: None,
    }));
    out
}

/// Published `(i, j, alpha, beta, gamma)` rows of the generator at `mu = 3`.
///
/// These rows list the limit of the negated fraction, so `alpha` has the
/// opposite sign to the value of `ij_family(i, j, 3)`.
pub const IJ_TABLE: &[(i64, i64, i64, i64, i64)] = &[
    (0, 1, -720, -299, 450),
    (1, 1, 288, 31, -90),
    (2, 1, -384, 1, 90),
    (2, 2, -6, 1, 0),
    (3, 1, -2304, 389, 450),
    (3, 2, -6, 1, 0),
    (4, 1, 18432, -419, -3150),
    (4, 2, 210, -19, 0),
    (4, 3, -4608, 383, -90),
    (5, 1, 61440, 791, -9450),
    (5, 2, 630, -41, 0),
    (5, 3, -12288, 1145, -630),
    (6, 1, 737280, 20989, -103950),
    (6, 2, 1386, -71, 0),
    (6, 3, 122880, -13079, 9450),
    (6, 4, 378, -11, 0),
    (7, 1, -72253440, -2647279, 9459450),
    (7, 2, -2574, 109, 0),
    (7, 3, 7372800, -884203, 727650),
    (7, 4, 297, -7, 0),
    (8, 1, 231211008, 9547469, -28378350),
    (8, 2, -858, 31, 0),
    (8, 3, 80281600, -10675439, 9459450),
    (8, 4, 858, -17, 0),
    (8, 5, -9830400, -1833409, 2182950),
    (9, 1, -45779779584, -2016587711, 5306751450),
    (9, 2, -6630, 209, 0),
    (9, 3, 2312110080, -336233167, 312161850),
    (9, 4, -117, 2, 0),
    (9, 5, -963379200, -272007887, 312161850),
    (10, 1, 11902742691840, 543876944201, -1310767608150),
    (10, 2, 9690, -271, 0),
    (10, 3, 457797795840, -71995419827, 68987768850),
    (10, 4, 1530, -23, 0),
    (10, 5, -9248440320, -3600327811, 4058104050),
    (10, 6, 90, -1, 0),
    (11, 1, 12469539962880, 581663428937, -1310767608150),
    (11, 2, -13566, 341, 0),
    (11, 3, -7935161794560, 1337393123657, -1310767608150),
    (11, 4, 969, -13, 0),
    (11, 5, -122079412224, -61822135475, 68987768850),
    (11, 6, -102, 1, 0),
    (12, 1, -5087572304855040, -239899940677247, 512510134786650),
    (12, 2, 18354, -419, 0),
    (12, 3, 124695399628800, -22357818254809, 22283049338550),
    (12, 4, 2394, -29, 0),
    (12, 5, 31740647178240, 20090629170649, -22283049338550),
    (12, 6, -114, 1, 0),
    (12, 7, -732476473344, 5376960927599, -5863960352250),
    (13, 1, 502652143719677952, 23808008825309473, -48688462804731750),
    (13, 2, -4830, 101, 0),
    (13, 3, 50875723048550400, -9645671177722733, 9737692560946350),
    (13, 4, -1449, 16, 0),
    (13, 5, -498781598515200, -383233413631771, 423377937432450),
    (13, 6, 126, -1, 0),
    (13, 7, -38088776613888, 388070083677979, -423377937432450),
];

/// True if `limit` equals `printed` or the limit of the negated fraction,
/// each up to overall sign.
pub fn matches_up_to_negation(limit: &GLimit, printed: &[BigInt; 3]) -> bool {
    let flipped = [-&printed[0], printed[1].clone(), printed[2].clone()];
    limit.same_up_to_sign(printed) || limit.same_up_to_sign(&flipped)
}

/// `2^(2c+pow) (2c-3)^{lhs} gamma = k alpha prod(2c - o) C_{c-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioIdentity {
    pub delta: i64,
    pub epsilon: i64,
    pub eta: i64,
    pub tau: i64,
    pub pow_offset: i64,
    /// Odd offsets `o` of the `(2c - o)` factors next to `gamma`.
    pub lhs_factors: Vec<i64>,
    pub coeff: i64,
    /// Odd offsets `o` of the `(2c - o)` factors next to `alpha`.
    pub rhs_factors: Vec<i64>,
}

impl RatioIdentity {
    pub fn family(&self, mu: i64) -> FamilySpec {
        FamilySpec::new(self.delta, self.epsilon, self.tau, self.eta, mu)
    }
}

impl fmt::Display for RatioIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^(2c+{})", self.pow_offset)?;
        for o in &self.lhs_factors {
            write!(f, "(2c-{o})")?;
        }
        write!(f, " gamma = {} alpha", self.coeff)?;
        for o in &self.rhs_factors {
            write!(f, "(2c-{o})")?;
        }
        write!(f, " C(c-1)")
    }
}

pub fn ratio_identities() -> Vec<RatioIdentity> {
    let row = |delta, epsilon, eta, tau, pow_offset, lhs: &[i64], coeff, rhs: &[i64]| RatioIdentity {
        delta,
        epsilon,
        eta,
        tau,
        pow_offset,
        lhs_factors: lhs.to_vec(),
        coeff,
        rhs_factors: rhs.to_vec(),
    };
    vec![
        row(15, 15, 2, 4, 2, &[], 3, &[5]),
        row(19, 21, 2, 6, 3, &[], 5, &[7]),
        row(19, 25, 4, 4, 4, &[3], 9, &[7, 5]),
        row(23, 35, 4, 6, 5, &[3], 15, &[7, 9]),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityOutcome {
    Holds,
    HoldsUpToSign,
    Fails,
}

impl IdentityOutcome {
    pub fn holds(self) -> bool {
        self != IdentityOutcome::Fails
    }
}

pub fn check_ratio_identity(row: &RatioIdentity, c: i64, triple: &GLimit) -> Result<IdentityOutcome> {
    if c < 1 {
        return Err(Error::invalid("running index must be >= 1"));
    }
    let odd = |o: &i64| BigInt::from(2 * c - o);
    let lhs_f: Vec<BigInt> = row.lhs_factors.iter().map(odd).collect();
    let rhs_f: Vec<BigInt> = row.rhs_factors.iter().map(odd).collect();
    if lhs_f.iter().chain(&rhs_f).any(Zero::is_zero) {
        return Err(Error::DegenerateIdentity(c));
    }
    let shift = 2 * c + row.pow_offset;
    if shift < 0 {
        return Err(Error::DegenerateIdentity(c));
    }
    let lhs = lhs_f.iter().fold(triple.gamma() << shift as usize, |acc, f| acc * f);
    let rhs = rhs_f
        .iter()
        .fold(triple.alpha() * BigInt::from(row.coeff) * catalan_number(c - 1)?, |acc, f| acc * f);
    Ok(if lhs == rhs {
        IdentityOutcome::Holds
    } else if lhs == -rhs {
        IdentityOutcome::HoldsUpToSign
    } else {
        IdentityOutcome::Fails
    })
}

/// `phi(n)` choices for `b(n) = -2n(n+4)phi(n)` with `a(n) = 3n^2+15n+15`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoGVariant {
    /// `(n-1)(n+i)`
    V1,
    /// `(n-2)(n+i)`
    V2,
    /// `(n-3)(n+2i+1)`
    V3,
    /// `(n-3)(n+2i)`
    V4,
    /// `(1+n/2)(2n+2j-1)`
    V5,
}

impl NoGVariant {
    pub const ALL: [NoGVariant; 5] = [Self::V1, Self::V2, Self::V3, Self::V4, Self::V5];

    pub fn from_index(k: u32) -> Result<Self> {
        Self::ALL
            .get((k as usize).wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::invalid(format!("unknown variant {k}; expected 1..=5")))
    }
}

pub fn no_g_cf(variant: NoGVariant, i: i64) -> CFSpec {
    let n = PolyInt::linear(1, 0);
    let n4 = PolyInt::linear(1, 4);
    let (scale, rest) = match variant {
        NoGVariant::V1 => (-2, vec![PolyInt::linear(1, -1), PolyInt::linear(1, i)]),
        NoGVariant::V2 => (-2, vec![PolyInt::linear(1, -2), PolyInt::linear(1, i)]),
        NoGVariant::V3 => (-2, vec![PolyInt::linear(1, -3), PolyInt::linear(1, 2 * i + 1)]),
        NoGVariant::V4 => (-2, vec![PolyInt::linear(1, -3), PolyInt::linear(1, 2 * i)]),
        // -2 (1 + n/2) = -(n + 2)
        NoGVariant::V5 => (-1, vec![PolyInt::linear(1, 2), PolyInt::linear(2, 2 * i - 1)]),
    };
    let mut factors = vec![n, n4];
    factors.extend(rest);
    CFSpec::new(PolyInt::from_i64(&[15, 15, 3]), Numerator::product(scale, factors))
}

/// The listed value of the variant; `i` plays the role of `j` for `V5`.
pub fn no_g_limit(variant: NoGVariant, i: i64) -> Result<Rational> {
    let r = |p: i64, q: i64| Rational::new(p.into(), q.into());
    Ok(match variant {
        NoGVariant::V1 => r(15, 1),
        NoGVariant::V2 => r(10 * i + 505, 33),
        NoGVariant::V3 => r(25 * (421 + 40 * i), 651 + 16 * i),
        NoGVariant::V4 => r(25 * (401 + 40 * i), 643 + 16 * i),
        NoGVariant::V5 => match i {
            2 => r(12, 1),
            3 => r(10, 1),
            j if j >= 4 => r(0, 1),
            j => return Err(Error::invalid(format!("no listed value for j = {j}"))),
        },
    })
}

/// Discovers the limits of `template.with_mu(mu)` for each `mu`; failures
/// are kept per entry.
pub fn discover_family_column(
    template: &FamilySpec,
    mus: impl IntoIterator<Item = i64>,
    config: &DiscoveryConfig,
) -> Vec<(i64, Result<Discovery>)> {
    let mus: Vec<i64> = mus.into_iter().collect();
    mus.par_iter()
        .map(|&mu| (mu, discover(&family_cf(&template.with_mu(mu)), config)))
        .collect()
}

/// True if `limit` equals `printed` up to overall sign.
pub fn same_as_printed(limit: &GLimit, printed: &[i64; 3]) -> bool {
    limit.same_up_to_sign(&printed.map(BigInt::from))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf_engine::{convergent_exact, eval_backward};
    use crate::lattice::normalize;
    use crate::numerics::HPReal;

    fn glimit(t: [i64; 3]) -> GLimit {
        normalize(&t.map(BigInt::from)).unwrap()
    }

    #[test]
    fn family_polynomials() {
        let cf = family_cf(&FamilySpec::new(3, 1, 0, 0, 0));
        assert_eq!(cf.a(), &PolyInt::from_i64(&[1, 3, 3]));
        assert_eq!(cf.b().expand(), PolyInt::from_i64(&[0, 0, 0, 0, -2]));
        assert_eq!(cf.a0(), &BigInt::from(1));
    }

    #[test]
    fn ij_polynomials() {
        let cf = ij_family(2, 2, 3).unwrap();
        assert_eq!(cf.a(), &PolyInt::from_i64(&[8, 11, 3]));
        assert_eq!(cf.b_at(1), BigInt::from(-2 * 2 * 4 * 4));
        assert!(ij_family(2, 3, 3).is_err());
        // i = 0, j = 1 coincides with the kappa = 0 fraction at c = 3
        assert_eq!(
            ij_family(0, 1, 3).unwrap().b().expand(),
            crate::cf_engine::kappa_cf(0, 3).b().expand()
        );
    }

    #[test]
    fn generator_ranges() {
        let e = enumerate_generator(3, 3, false).unwrap();
        let pairs: Vec<_> = e.iter().map(|g| (g.i.to_integer(), g.j)).collect();
        assert_eq!(pairs, vec![(3.into(), 0), (3.into(), 1), (3.into(), 2)]);
        assert_eq!(enumerate_generator(4, 3, false).unwrap().len(), 3 + 4);
        let half = enumerate_generator(4, 3, true).unwrap();
        assert_eq!(half.len(), 3 + 3 + 4);
        assert!(enumerate_generator(2, 3, false).is_err());
    }

    #[test]
    fn catalog_rows() {
        let rows = family_catalog();
        assert_eq!(rows[0].instantiate(0, 5), FamilySpec::new(7, 3, 2, 0, 5));
        assert_eq!(rows[1].instantiate(0, 0), FamilySpec::new(11, 9, 2, 2, 0));
        assert_eq!(rows[2].instantiate(0, 0), FamilySpec::new(19, 25, 4, 4, 0));
        assert!(rows[2].instantiate(1, 0).equivalent(&FamilySpec::new(23, 35, 4, 6, 0)));
        for row in &rows {
            for i in 0..4 {
                let s = row.instantiate(i, 0);
                assert_eq!(s.delta, 3 + 2 * (s.tau + s.eta));
            }
        }
        assert_eq!(subtables().iter().map(|t| t.rows.len()).sum::<usize>(), 63);
        let sp = sporadic_catalog();
        assert_eq!(sp.len(), 22);
        assert_eq!(sp.iter().filter(|s| s.printed.is_some()).count(), 7);
    }

    #[test]
    fn ratio_identity_examples() {
        let rows = ratio_identities();
        let out = check_ratio_identity(&rows[0], 3, &glimit([768, 77, 18])).unwrap();
        assert_eq!(out, IdentityOutcome::Holds);
        // 2^15 * 9450 = 5 * 294912 * 5 * 42
        let out = check_ratio_identity(&rows[1], 6, &glimit([294912, 11497, 9450])).unwrap();
        assert_eq!(out, IdentityOutcome::Holds);
        let out = check_ratio_identity(&rows[0], 3, &glimit([768, 77, 19])).unwrap();
        assert_eq!(out, IdentityOutcome::Fails);
        assert!(check_ratio_identity(&rows[0], 0, &glimit([1, 0, 2])).is_err());
    }

    #[test]
    fn negation_matching() {
        let l = glimit([720, -299, 450]);
        let printed = [(-720).into(), (-299).into(), 450.into()];
        assert!(matches_up_to_negation(&l, &printed));
        assert!(!l.same_up_to_sign(&printed));
        assert!(!matches_up_to_negation(&l, &[720.into(), 299.into(), 450.into()]));
    }

    #[test]
    fn no_g_values() {
        let r = |p: i64, q: i64| Rational::new(p.into(), q.into());
        assert_eq!(no_g_limit(NoGVariant::V2, 0).unwrap(), r(505, 33));
        assert_eq!(no_g_limit(NoGVariant::V1, 7).unwrap(), r(15, 1));
        assert_eq!(no_g_limit(NoGVariant::V5, 4).unwrap(), r(0, 1));
        assert!(no_g_limit(NoGVariant::V5, 1).is_err());
        assert!(NoGVariant::from_index(6).is_err());
        // the first two variants terminate, so their convergents are exact
        for i in 0..4 {
            assert_eq!(convergent_exact(&no_g_cf(NoGVariant::V1, i), 5).unwrap(), r(15, 1));
            assert_eq!(
                convergent_exact(&no_g_cf(NoGVariant::V2, i), 5).unwrap(),
                no_g_limit(NoGVariant::V2, i).unwrap()
            );
        }
    }

    #[test]
    fn no_g_numeric() {
        for v in [NoGVariant::V3, NoGVariant::V4] {
            for i in 0..2 {
                let x = eval_backward(&no_g_cf(v, i), 2000, 60).unwrap();
                let want = HPReal::from_rational(&no_g_limit(v, i).unwrap(), 60);
                assert!(crate::numerics::digits_agree(&x, &want) >= 30);
            }
        }
    }
}
