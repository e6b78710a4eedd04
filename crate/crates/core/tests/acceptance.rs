//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use catalan_cf::cf_engine::{eval_backward, kappa_cf, CFSpec, Numerator, PolyInt};
use catalan_cf::challenge::{
    factorize, factorize_with_budget, fit_building_blocks, guess_p_recurrence, parse_data,
    render_data, DataFormat, DataRecord, SearchSpace,
};
use catalan_cf::discovery::{discover, discover_escalating, DiscoveryConfig};
use catalan_cf::families::{family_cf, ij_family, FamilySpec};
use catalan_cf::kappa_forms::{
    delta, delta0_compact, generic_recursion, kappa_params, q_closed, rho, KappaParams,
};
use catalan_cf::lattice::{lll, normalize, GLimit, LatticeBasis};
use catalan_cf::numerics::{catalan, digits_agree, HPReal};
use catalan_cf::Rational;

const DIGITS: u32 = 250;
const DEPTH: u64 = 12_000;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn big3(t: [i64; 3]) -> [BigInt; 3] {
    t.map(BigInt::from)
}

/// Equal as limits, up to overall sign of the triple.
fn same(limit: &GLimit, printed: [i64; 3]) -> bool {
    normalize(&big3(printed)).is_ok_and(|p| &p == limit)
}

fn config() -> DiscoveryConfig {
    DiscoveryConfig {
        digits: DIGITS,
        depth: DEPTH,
        ..DiscoveryConfig::default()
    }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Verdict {
    let table: [(i64, u32, [i64; 3]); 11] = [
        (0, 0, [1, 0, 2]),
        (0, 1, [2, -1, 2]),
        (0, 2, [24, -11, 18]),
        (1, 0, [2, -1, 2]),
        (1, 1, [4, 1, 2]),
        (1, 2, [16, -1, 6]),
        (2, 0, [24, -11, 18]),
        (2, 1, [16, -1, 6]),
        (2, 2, [64, 13, 18]),
        (3, 0, [720, -299, 450]),
        (3, 1, [288, -31, 90]),
    ];
    let start = Instant::now();
    let cfg = config();
    let mut bad = Vec::new();
    for (c, k, t) in table {
        match discover(&kappa_cf(k, c), &cfg) {
            Ok(d) if same(&d.limit, t) => {}
            Ok(d) => bad.push(format!("Q({c},{k}) -> {}", d.limit)),
            Err(e) => bad.push(format!("Q({c},{k}): {e}")),
        }
    }
    // the unlisted entry, cross-checked against its closed form
    let extra = discover(&kappa_cf(2, 3), &cfg)
        .ok()
        .filter(|d| q_closed(2, 3).is_ok_and(|q| q.limit == d.limit));
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(120) && extra.is_some();
    verdict(
        ok,
        format!(
            "11/11 listed limits{}; Q(3,2) = {} ; {}",
            if bad.is_empty() { String::new() } else { format!(", mismatches {bad:?}") },
            extra.map(|d| d.limit.to_string()).unwrap_or_else(|| "not found".into()),
            secs(elapsed)
        ),
    )
}

fn closed_form_digits(k: u32, c: i64, g: &HPReal) -> u32 {
    let q = eval_backward(&kappa_cf(k, c), DEPTH, DIGITS).expect("evaluation");
    let closed = q_closed(k, c).expect("closed form").limit.value(g).expect("value");
    digits_agree(&q, &closed)
}

fn criterion_2() -> Verdict {
    let g = catalan(DIGITS).expect("G");
    let cells: Vec<(u32, i64)> = (0..=6).flat_map(|k| (1..=20).map(move |c| (k, c))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
    let start = Instant::now();
    let agreed: Vec<u32> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(k, c)| closed_form_digits(k, c, &g))
            .collect()
    });
    let parallel = start.elapsed();
    let start = Instant::now();
    for &(k, c) in cells.iter().step_by(7) {
        closed_form_digits(k, c, &g);
    }
    // every seventh cell, scaled up to the full grid
    let sequential = start.elapsed() * 7;
    let worst = cells
        .iter()
        .zip(&agreed)
        .min_by_key(|(_, d)| **d)
        .map(|(cell, d)| (*cell, *d))
        .unwrap();
    let ok = worst.1 >= 150
        && parallel < Duration::from_secs(240)
        && sequential < Duration::from_secs(900);
    verdict(
        ok,
        format!(
            "140 cells, min agreement {} digits at (kappa, c) = {:?}; parallel(8) {}, sequential est. {}",
            worst.1,
            worst.0,
            secs(parallel),
            secs(sequential)
        ),
    )
}

fn criterion_3() -> Verdict {
    let bad: Vec<i64> = (0..=100)
        .filter(|&c| delta(0, c).unwrap() != Rational::from_integer(delta0_compact(c).unwrap()))
        .collect();
    verdict(bad.is_empty(), format!("c = 0..100, mismatches {bad:?}"))
}

fn criterion_4() -> Verdict {
    // each per-kappa recursion transcribed factor by factor
    let c = |s: i64, o: i64| PolyInt::linear(s, o);
    let listed: [(Vec<i64>, Vec<PolyInt>); 7] = [
        (vec![1, 2, 8], vec![c(-2, 0), c(2, -1).pow(3)]),
        (vec![-1, -6, 8], vec![c(-2, 0), c(2, -1), c(2, -3).pow(2)]),
        (vec![-3, -14, 8], vec![c(-2, 0), c(2, -5).pow(2), c(2, -1)]),
        (vec![-5, -22, 8], vec![c(-2, 0), c(2, -1), c(2, -7).pow(2)]),
        (vec![-7, -30, 8], vec![c(-2, 0), c(2, -1), c(2, -9).pow(2)]),
        (vec![-9, -38, 8], vec![c(-2, 0), c(2, -1), c(2, -11).pow(2)]),
        (vec![-11, -46, 8], vec![c(-2, 0), c(2, -1), c(2, -13).pow(2)]),
    ];
    let mut matched = 0;
    let mut bad = Vec::new();
    for (k, (p1, p2)) in listed.iter().enumerate() {
        let (g1, g2) = generic_recursion(k as u32);
        if g1 == PolyInt::from_i64(p1) && g2 == PolyInt::product(p2) {
            matched += 1;
        } else {
            bad.push(k);
        }
    }
    verdict(matched == 7, format!("{matched}/7 coefficient-exact matches, mismatched kappa {bad:?}"))
}

fn criterion_5() -> Verdict {
    let listed = [(1, 1), (4, 3), (8, 5), (64, 35), (128, 63), (512, 231), (1024, 429)];
    let mut bad = Vec::new();
    for (k, (p, q)) in (1u32..).zip(listed) {
        let want = Rational::new(p.into(), q.into());
        let params = kappa_params(k).unwrap();
        if rho(k).unwrap() != want || params.sigma_ratio() != want {
            bad.push(k);
        }
    }
    verdict(bad.is_empty(), format!("kappa 1..7, mismatches {bad:?}"))
}

fn criterion_6() -> Verdict {
    type Column = ((i64, i64, i64, i64), [[i64; 3]; 7]);
    let columns: [Column; 9] = [
        ((3, 1, 0, 0), [[1, 0, 2], [2, -1, 2], [24, -11, 18], [720, -299, 450], [40320, -15371, 22050], [403200, -142819, 198450], [53222400, -17684299, 24012450]]),
        ((7, 3, 0, 2), [[2, -1, 2], [4, 1, 2], [16, -1, 6], [288, -31, 90], [11520, -1373, 3150], [89600, -10891, 22050], [9676800, -1167809, 2182950]]),
        ((11, 5, 0, 4), [[24, -11, 18], [16, -1, 6], [64, 13, 18], [384, 1, 90], [3072, -121, 630], [51200, -2839, 9450], [4300800, -269803, 727650]]),
        ((11, 9, 2, 2), [[4, -5, 6], [8, 3, -2], [32, 5, 2], [192, 13, 18], [4608, 133, 450], [230400, 1909, 22050], [2150400, -8419, 198450]]),
        ((15, 7, 0, 6), [[720, -299, 450], [288, -31, 90], [384, 1, 90], [2304, 389, 450], [18432, 419, 3150], [61440, -791, 9450], [737280, -20989, 103950]]),
        ((15, 15, 4, 2), [[48, -79, 90], [32, 19, -18], [128, 17, -6], [768, 77, 18], [2048, 129, 90], [61440, 2467, 3150], [1228800, 31327, 66150]]),
        ((19, 21, 2, 6), [[1440, -2813, 3150], [576, 443, -450], [768, 127, -90], [4608, 383, -90], [36864, 2693, 450], [122880, 6563, 3150], [294912, 11497, 9450]]),
        ((19, 25, 4, 4), [[192, -569, 630], [128, 253, -270], [512, -25, 54], [3072, 179, -18], [8192, 487, 54], [81920, 3983, 1350], [327680, 12583, 7350]]),
        ((23, 35, 4, 6), [[1920, -8599, 9450], [768, 2909, -3150], [1024, -379, 450], [2048, 43, 30], [49152, 1919, -90], [163840, 6789, 450], [393216, 14755, 3150]]),
    ];
    let sporadic: [((i64, i64, i64, i64, i64), [i64; 3]); 7] = [
        ((9, 7, 1, 1, 1), [1, 2, -2]),
        ((13, 13, 1, 1, 3), [6, 17, -18]),
        ((15, 19, 2, 2, 2), [8, -49, 54]),
        ((17, 19, 1, 1, 5), [120, 419, -450]),
        ((17, 23, 1, 3, 3), [12, 83, -90]),
        ((19, 29, 2, 2, 4), [32, -411, 450]),
        ((21, 33, 1, 3, 5), [240, 2893, -3150]),
    ];
    let mut jobs: Vec<(FamilySpec, [i64; 3])> = Vec::new();
    for ((d, e, t, h), rows) in columns {
        for (mu, row) in rows.into_iter().enumerate() {
            jobs.push((FamilySpec::new(d, e, t, h, mu as i64), row));
        }
    }
    for ((d, e, t, h, m), row) in sporadic {
        jobs.push((FamilySpec::new(d, e, t, h, m), row));
    }
    let cfg = config();
    let bad: Vec<String> = jobs
        .par_iter()
        .filter_map(|(spec, row)| match discover(&family_cf(spec), &cfg) {
            Ok(d) if same(&d.limit, *row) => None,
            Ok(d) => Some(format!("{spec} -> {}", d.limit)),
            Err(e) => Some(format!("{spec}: {e}")),
        })
        .collect();
    verdict(
        bad.is_empty(),
        format!("{}/70 (63 subtable + 7 sporadic) reproduced{}", 70 - bad.len(), if bad.is_empty() { String::new() } else { format!("; failures {bad:?}") }),
    )
}

fn criterion_7() -> Verdict {
    let rows: [(i64, i64, [i64; 3]); 25] = [
        (0, 1, [-720, -299, 450]),
        (1, 1, [288, 31, -90]),
        (2, 1, [-384, 1, 90]),
        (2, 2, [-6, 1, 0]),
        (3, 1, [-2304, 389, 450]),
        (3, 2, [-6, 1, 0]),
        (4, 1, [18432, -419, -3150]),
        (4, 2, [210, -19, 0]),
        (4, 3, [-4608, 383, -90]),
        (5, 1, [61440, 791, -9450]),
        (5, 2, [630, -41, 0]),
        (5, 3, [-12288, 1145, -630]),
        (6, 1, [737280, 20989, -103950]),
        (6, 2, [1386, -71, 0]),
        (6, 3, [122880, -13079, 9450]),
        (6, 4, [378, -11, 0]),
        (7, 1, [-72253440, -2647279, 9459450]),
        (7, 2, [-2574, 109, 0]),
        (7, 3, [7372800, -884203, 727650]),
        (7, 4, [297, -7, 0]),
        (8, 1, [231211008, 9547469, -28378350]),
        (8, 2, [-858, 31, 0]),
        (8, 3, [80281600, -10675439, 9459450]),
        (8, 4, [858, -17, 0]),
        (8, 5, [-9830400, -1833409, 2182950]),
    ];
    let cfg = DiscoveryConfig {
        min_verified: 50,
        ..config()
    };
    let results: Vec<(i64, i64, [i64; 3], Result<catalan_cf::discovery::Discovery, String>)> = rows
        .par_iter()
        .map(|&(i, j, t)| {
            let r = ij_family(i, j, 3)
                .and_then(|cf| discover_escalating(&cf, &cfg))
                .map_err(|e| e.to_string());
            (i, j, t, r)
        })
        .collect();
    let mut direct = 0;
    let mut negated = 0;
    let mut bad = Vec::new();
    let mut max_digits = 0;
    for (i, j, t, r) in results {
        match r {
            Ok(d) if d.verified_digits >= 50 => {
                max_digits = max_digits.max(d.digits);
                let neg = [-t[0], t[1], t[2]];
                if same(&d.limit, t) {
                    direct += 1;
                } else if same(&d.limit, neg) {
                    negated += 1;
                } else {
                    bad.push(format!("({i},{j}) -> {}", d.limit));
                }
            }
            Ok(d) => bad.push(format!("({i},{j}) only {} digits", d.verified_digits)),
            Err(e) => bad.push(format!("({i},{j}): {e}")),
        }
    }
    // j = 0 always gives the zero limit
    let zero_ok = (3..=8).all(|i| {
        ij_family(i, 0, 3)
            .and_then(|cf| discover(&cf, &cfg))
            .is_ok_and(|d| d.limit == GLimit::zero_limit())
    });
    verdict(
        bad.is_empty() && zero_ok,
        format!(
            "{}/25 rows with i <= 8 ({direct} as listed, {negated} as the limit of the negated fraction), \
             j = 0 rows zero: {zero_ok}, max precision used {max_digits}{}",
            direct + negated,
            if bad.is_empty() { String::new() } else { format!("; failures {bad:?}") }
        ),
    )
}

/// `2^(2c+p) prod(2c-l) gamma` against `k alpha prod(2c-r) C_{c-1}`.
fn identity_sides(
    c: i64,
    p: i64,
    lhs: &[i64],
    k: i64,
    rhs: &[i64],
    limit: &GLimit,
) -> (BigInt, BigInt) {
    let cat = {
        let n = c - 1;
        let mut b = BigInt::one();
        for i in 0..n {
            b = b * BigInt::from(2 * n - i) / BigInt::from(i + 1);
        }
        b / BigInt::from(n + 1)
    };
    let l = lhs
        .iter()
        .fold(limit.gamma() << (2 * c + p) as usize, |a, o| a * BigInt::from(2 * c - o));
    let r = rhs
        .iter()
        .fold(limit.alpha() * BigInt::from(k) * cat, |a, o| a * BigInt::from(2 * c - o));
    (l, r)
}

fn criterion_8() -> Verdict {
    // (delta, epsilon, eta, tau, pow, lhs odd offsets, k, rhs odd offsets)
    type Row = (i64, i64, i64, i64, i64, &'static [i64], i64, &'static [i64]);
    let rows: [Row; 4] = [
        (15, 15, 2, 4, 2, &[], 3, &[5]),
        (19, 21, 2, 6, 3, &[], 5, &[7]),
        (19, 25, 4, 4, 4, &[3], 9, &[7, 5]),
        (23, 35, 4, 6, 5, &[3], 15, &[7, 9]),
    ];
    let cfg = config();
    let jobs: Vec<(Row, i64)> = rows.iter().flat_map(|r| (2..=10).map(move |c| (*r, c))).collect();
    let results: Vec<String> = jobs
        .par_iter()
        .filter_map(|&((d, e, eta, tau, p, lhs, k, rhs), c)| {
            let spec = FamilySpec::new(d, e, tau, eta, c);
            let limit = match discover(&family_cf(&spec), &cfg) {
                Ok(found) => found.limit,
                Err(err) => return Some(format!("{spec}: {err}")),
            };
            let (l, r) = identity_sides(c, p, lhs, k, rhs, &limit);
            let early = c <= 3;
            if l == r || (early && l == -r) {
                None
            } else {
                Some(format!("{spec} with {limit}"))
            }
        })
        .collect();
    verdict(
        results.is_empty(),
        format!(
            "{}/36 (4 rows x c = 2..10; sign-free at c <= 3){}",
            36 - results.len(),
            if results.is_empty() { String::new() } else { format!("; failures {results:?}") }
        ),
    )
}

fn criterion_9() -> Verdict {
    let g = catalan(DIGITS).unwrap();
    let bootstrap = |k: u32| -> KappaParams {
        let q1 = eval_backward(&kappa_cf(k, 1), DEPTH, DIGITS).unwrap();
        let q2 = eval_backward(&kappa_cf(k, 2), DEPTH, DIGITS).unwrap();
        catalan_cf::kappa_forms::bootstrap(k, &q1, &q2, &g).unwrap()
    };
    let f = |n: i64| -> i64 { (1..=n).product() };
    // (sigma_num, sigma_den, A, B) as listed; kappa = 4 uses B = 1373 (see below)
    let listed: [(u32, i64, i64, i64, i64); 6] = [
        (1, 2, 2, -2, 1),
        (2, 8, 6, 12, 1),
        (3, 432, 270, 22, -31),
        (4, f(5) * f(6), 14 * 15 * 15 * 15, -10448, 1373),
        (5, 2 * 140 * 140 * f(5), 2 * 105 * 105 * 105, 150002, -10891),
        (6, 12 * 105 * f(10), 2 * 105 * 945 * 10395, -23021852, 1167809),
    ];
    let mut bad = Vec::new();
    for (k, sn, sd, a, b) in listed {
        let p = bootstrap(k);
        let got = (p.sigma_num.clone(), p.sigma_den.clone(), p.seed_a.clone(), p.seed_b.clone());
        let want = (
            BigInt::from(sn),
            BigInt::from(sd),
            Rational::from_integer(a.into()),
            Rational::from_integer(b.into()),
        );
        if got != want {
            bad.push(format!("kappa {k}: {p}"));
        }
    }
    // kappa = 7: same ratio and the listed rational seed up to the common scale
    let p7 = bootstrap(7);
    let s11: BigInt = BigInt::from(10395);
    let sq = &s11 * &s11;
    let a7 = Rational::new(2258335679i64.into(), BigInt::from(35) * &sq);
    let b7 = Rational::new((-176673487i64).into(), BigInt::from(70) * &sq);
    let scale = Rational::new(p7.sigma_num.clone(), 1024.into());
    let k7 = p7.sigma_ratio() == Rational::new(1024.into(), 429.into())
        && p7.seed_a == &a7 * &scale
        && p7.seed_b == &b7 * &scale;
    if !k7 {
        bad.push(format!("kappa 7: {p7}"));
    }
    // the value printed for kappa = 4, B = 1327, does not reproduce Q(1,4)
    let q14 = eval_backward(&kappa_cf(4, 1), DEPTH, DIGITS).unwrap();
    let mut printed = kappa_params(4).unwrap();
    printed.seed_b = Rational::from_integer(1327.into());
    let mut seq = catalan_cf::kappa_forms::DeltaSeq::new(printed);
    let printed_q14 = catalan_cf::kappa_forms::q_closed_with(&mut seq, 1)
        .unwrap()
        .limit
        .value(&g)
        .unwrap();
    let printed_digits = digits_agree(&q14, &printed_q14);
    verdict(
        bad.is_empty(),
        format!(
            "kappa 1..6 exact, kappa 7 ratio 1024/429 and seed proportional: {}; \
             kappa = 4 compared with B = 1373 (listed 1327 agrees with Q(1,4) on only {printed_digits} digit(s)){}",
            k7,
            if bad.is_empty() { String::new() } else { format!("; failures {bad:?}") }
        ),
    )
}

fn criterion_10() -> Verdict {
    let space0 = SearchSpace::for_kappa(0);
    let space1 = SearchSpace::for_kappa(1);
    let alpha0: Vec<_> = (1..=10)
        .map(|c| (c, factorize(&q_closed(0, c).unwrap().raw[0], 10_000).unwrap()))
        .collect();
    let gamma1: Vec<_> = (1..=10)
        .map(|c| (c, factorize(&q_closed(1, c).unwrap().raw[2], 10_000).unwrap()))
        .collect();
    let fa = fit_building_blocks(&alpha0, &space0, 3).unwrap();
    let fg = fit_building_blocks(&gamma1, &space1, 3).unwrap();
    let fa_ok = fa.iter().any(|c| c.to_string() == "(2c)!");
    let fg_ok = fg.iter().any(|c| c.to_string() == "2*((2c-1)!!)^2");

    let mut rec_ok = 0;
    let mut bad = Vec::new();
    for k in 0..=6u32 {
        let kk = k as i64;
        let values: Vec<Rational> = (0..20).map(|c| delta(k, c).unwrap()).collect();
        // v_c - p1(c) v_{c-1} - p2(c) v_{c-2} = 0 with the listed polynomials
        let p1 = PolyInt::from_i64(&[1 - 2 * kk, 2 - 8 * kk, 8]);
        let p2 = PolyInt::product(&[
            PolyInt::linear(-2, 0),
            PolyInt::linear(2, -1),
            PolyInt::linear(2, -2 * kk - 1).pow(2),
        ]);
        let neg = BigInt::from(-1);
        match guess_p_recurrence(&values, 2, 4) {
            Ok(g) if g.proportional_to(&[PolyInt::one(), p1.scale(&neg), p2.scale(&neg)]) => {
                rec_ok += 1
            }
            Ok(g) => bad.push(format!("kappa {k}: {g}")),
            Err(e) => bad.push(format!("kappa {k}: {e}")),
        }
    }
    let show = |v: &[catalan_cf::challenge::Candidate]| {
        v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" | ")
    };
    verdict(
        fa_ok && fg_ok && rec_ok == 7,
        format!(
            "alpha(c,0) -> {}; gamma(c,1) -> {}; recurrences recovered {rec_ok}/7{}",
            show(&fa),
            show(&fg),
            if bad.is_empty() { String::new() } else { format!("; failures {bad:?}") }
        ),
    )
}

// --- property suites -------------------------------------------------------

fn gram_schmidt(rows: &[Vec<BigInt>]) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let n = rows.len();
    let rr: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let dot = |a: &[Rational], b: &[Rational]| -> Rational {
        a.iter().zip(b).map(|(x, y)| x * y).fold(Rational::zero(), |s, t| s + t)
    };
    let mut star: Vec<Vec<Rational>> = Vec::new();
    let mut mu = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        let mut v = rr[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&rr[i], &star[j]) / dot(&star[j], &star[j]);
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * y;
            }
        }
        star.push(v);
    }
    (star, mu)
}

fn gram_det(rows: &[Vec<BigInt>]) -> Rational {
    let (star, _) = gram_schmidt(rows);
    star.iter()
        .map(|v| v.iter().map(|x| x * x).fold(Rational::zero(), |s, t| s + t))
        .fold(Rational::one(), |p, t| p * t)
}

/// Solves `x B = row` and reports whether `x` is integral.
fn in_lattice(basis: &[Vec<BigInt>], row: &[BigInt]) -> bool {
    let n = basis.len();
    let m = row.len();
    // augmented system B^T x = row, m equations in n unknowns
    let mut a: Vec<Vec<Rational>> = (0..m)
        .map(|r| {
            let mut v: Vec<Rational> = (0..n).map(|i| Rational::from_integer(basis[i][r].clone())).collect();
            v.push(Rational::from_integer(row[r].clone()));
            v
        })
        .collect();
    let mut pr = 0;
    let mut piv = Vec::new();
    for col in 0..n {
        let Some(p) = (pr..m).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(pr, p);
        let inv = a[pr][col].recip();
        for x in a[pr].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m {
            if r != pr && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for cc in 0..=n {
                    let d = &f * &a[pr][cc];
                    a[r][cc] -= d;
                }
            }
        }
        piv.push(col);
        pr += 1;
    }
    (pr..m).all(|r| a[r][n].is_zero()) && (0..pr).all(|r| a[r][n].is_integer())
}

fn criterion_11() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let delta = Rational::new(99.into(), 100.into());

    // LLL on 200 random bases
    let mut lll_ok = 0;
    while lll_ok < 200 {
        let n = rng.gen_range(2..=4);
        let m = rng.gen_range(n..=n + 1);
        let rows: Vec<Vec<BigInt>> = (0..n)
            .map(|_| (0..m).map(|_| BigInt::from(rng.gen_range(-60i64..=60))).collect())
            .collect();
        if gram_det(&rows).is_zero() {
            continue;
        }
        let out = lll(&LatticeBasis::new(rows.clone()).unwrap(), &delta).unwrap();
        let out = out.rows().to_vec();
        let (star, mu) = gram_schmidt(&out);
        let half = Rational::new(1.into(), 2.into());
        let norm = |v: &Vec<Rational>| v.iter().map(|x| x * x).fold(Rational::zero(), |s, t| s + t);
        let size_reduced = (0..n).all(|i| (0..i).all(|j| mu[i][j].abs() <= half));
        let lovasz = (1..n).all(|k| {
            norm(&star[k]) >= (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * norm(&star[k - 1])
        });
        let same_lattice = gram_det(&out) == gram_det(&rows)
            && out.iter().all(|r| in_lattice(&rows, r));
        if !(size_reduced && lovasz && same_lattice) {
            return verdict(false, format!("LLL property failed on {rows:?}"));
        }
        lll_ok += 1;
    }

    // normalize scale invariance on 10^4 random triples
    for _ in 0..10_000 {
        let t: [BigInt; 3] = [0; 3].map(|_| BigInt::from(rng.gen_range(-10_000i64..=10_000)));
        if t.iter().all(Zero::is_zero) {
            continue;
        }
        let mut k = rng.gen_range(-50i64..=50);
        if k == 0 {
            k = 7;
        }
        let base = match normalize(&t) {
            Ok(b) => b,
            // beta = gamma = 0 is not a limit
            Err(_) if t[1].is_zero() && t[2].is_zero() => continue,
            Err(e) => return verdict(false, format!("normalize({t:?}) failed: {e}")),
        };
        let scaled = normalize(&t.clone().map(|x| x * k)).unwrap();
        let idem = normalize(&base.triple()).unwrap();
        let g = base.triple().iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if scaled != base || idem != base || !g.is_one() || base.rho() != normalize(&t).unwrap().rho() {
            return verdict(false, format!("normalize not scale invariant on {t:?} x {k}"));
        }
        let first = base.triple().iter().rev().find(|x| !x.is_zero()).cloned().unwrap();
        if first.is_negative() {
            return verdict(false, format!("sign rule broken on {t:?}"));
        }
    }

    // data-file round trip in all formats
    for _ in 0..50 {
        let mut records: Vec<DataRecord> = (0..rng.gen_range(0..12))
            .map(|_| {
                let mut g = BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000));
                if g.is_zero() {
                    g = BigInt::one();
                }
                DataRecord::new(
                    rng.gen_range(1..=40),
                    rng.gen_range(0..=15),
                    BigInt::from(rng.gen_range(-10_000_000i64..=10_000_000)),
                    g,
                )
                .unwrap()
            })
            .collect();
        records.sort();
        for fmt in [DataFormat::Brace, DataFormat::Csv, DataFormat::Factored] {
            let text = render_data(&records, fmt);
            let back = parse_data(&text, fmt, std::path::Path::new("mem")).unwrap();
            if back != records || render_data(&back, fmt) != text {
                return verdict(false, format!("round trip failed in {fmt}"));
            }
        }
    }

    // factorize / reconstruct on 10^5 integers below 10^40
    let bound: BigInt = BigInt::from(10).pow(40);
    let inputs: Vec<BigInt> = (0..100_000)
        .map(|_| {
            let limbs: [u64; 3] = [rng.gen(), rng.gen(), rng.gen()];
            let mut n = limbs
                .iter()
                .fold(BigInt::zero(), |acc, &l| (acc << 64) + BigInt::from(l))
                % &bound;
            let digits = rng.gen_range(1..=40);
            n %= BigInt::from(10).pow(digits);
            if n.is_zero() {
                n = BigInt::one();
            }
            if rng.gen_bool(0.5) {
                -n
            } else {
                n
            }
        })
        .collect();
    let failures = inputs
        .par_iter()
        .filter(|n| factorize_with_budget(n, 10_000, 300).map(|f| f.reconstruct() != **n).unwrap_or(true))
        .count();
    verdict(
        failures == 0,
        format!("LLL 200/200, normalize 10^4, data files 50x3, factorize 10^5 ({failures} failures)"),
    )
}

fn criterion_12() -> Verdict {
    let n = PolyInt::linear(1, 0);
    let n4 = PolyInt::linear(1, 4);
    let cf = |extra: Vec<PolyInt>| {
        let mut f = vec![n.clone(), n4.clone()];
        f.extend(extra);
        CFSpec::new(PolyInt::from_i64(&[15, 15, 3]), Numerator::product(-2, f))
    };
    let r = |p: i64, q: i64| Rational::new(p.into(), q.into());
    let mut worst = u32::MAX;
    let mut bad = Vec::new();
    for i in 0..=3i64 {
        let cases = [
            ("(n-1)(n+i)", cf(vec![PolyInt::linear(1, -1), PolyInt::linear(1, i)]), r(15, 1)),
            ("(n-2)(n+i)", cf(vec![PolyInt::linear(1, -2), PolyInt::linear(1, i)]), r(10 * i + 505, 33)),
            (
                "(n-3)(n+2i+1)",
                cf(vec![PolyInt::linear(1, -3), PolyInt::linear(1, 2 * i + 1)]),
                r(25 * (421 + 40 * i), 651 + 16 * i),
            ),
            (
                "(n-3)(n+2i)",
                cf(vec![PolyInt::linear(1, -3), PolyInt::linear(1, 2 * i)]),
                r(25 * (401 + 40 * i), 643 + 16 * i),
            ),
        ];
        for (name, spec, want) in cases {
            let x = eval_backward(&spec, DEPTH, DIGITS).unwrap();
            let d = digits_agree(&x, &HPReal::from_rational(&want, DIGITS));
            worst = worst.min(d);
            if d < 30 {
                bad.push(format!("{name} i={i}: {d} digits"));
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!("16 cases (epsilon = 15), min agreement {worst} digits{}", if bad.is_empty() { String::new() } else { format!("; failures {bad:?}") }),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("initial table limits", criterion_1),
        ("closed forms vs evaluation", criterion_2),
        ("compact delta", criterion_3),
        ("generic recursion", criterion_4),
        ("sigma ratio conjecture", criterion_5),
        ("subtables and sporadic cases", criterion_6),
        ("(i, j) generator table", criterion_7),
        ("ratio identities", criterion_8),
        ("bootstrap", criterion_9),
        ("building blocks and recurrences", criterion_10),
        ("property suites", criterion_11),
        ("limits without G", criterion_12),
    ];
    let filter: Option<usize> = std::env::args().nth(1).and_then(|a| a.parse().ok());
    let mut failed = 0;
    let mut summary = BTreeMap::new();
    for (idx, (name, run)) in criteria.iter().enumerate() {
        let n = idx + 1;
        if filter.is_some_and(|f| f != n) {
            continue;
        }
        let start = Instant::now();
        let v = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        println!(
            "criterion {n:>2} [{}] {name}: {} ({})",
            if v.passed { "PASS" } else { "FAIL" },
            v.detail,
            secs(start.elapsed())
        );
        if !v.passed {
            failed += 1;
        }
        summary.insert(n, v.passed);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        summary.values().filter(|p| **p).count()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
