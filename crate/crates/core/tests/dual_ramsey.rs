use std::collections::BTreeMap;

use umflow::cantor::{OrderedPartition, Permutation, PrefixCode};
use umflow::chains::ChainApprox;
use umflow::dual_ramsey::{
    check_dr_certificate, dr_number, extract_table, factor_coloring, find_monochromatic, refine_sorted,
    search_bad_coloring, verify_dr, DrCertificate, DrNumber, DrQuery, SearchConfig, SearchOutcome, Verdict,
};
use umflow::partitions::{enumerate_partitions, Coloring, SetPartition};
use umflow::symbolic::{tilde, Sign, SymbolConfig, Table};

fn q(n: usize, k: usize, m: usize, r: u32) -> DrQuery {
    DrQuery::new(n, k, m, r).unwrap()
}

fn op(s: &str) -> OrderedPartition {
    s.parse().unwrap()
}

fn holds(v: &Verdict) -> bool {
    matches!(v, Verdict::Holds { .. })
}

#[test]
fn monochromatic_search() {
    let constant = Coloring::constant(3, 2, 0);
    let (eta, color) = find_monochromatic(&constant, 3).unwrap().unwrap();
    assert_eq!(eta, SetPartition::from_rgs("012").unwrap());
    assert_eq!(color, 0);

    let odd = SetPartition::from_rgs("011").unwrap();
    let col = Coloring::from_fn(3, 2, |p| if *p == odd { 0 } else { 1 });
    assert_eq!(find_monochromatic(&col, 3).unwrap(), None);

    let col = Coloring::from_fn(4, 2, |p| p.to_rgs().bytes().filter(|&b| b == b'1').count() as u32 % 2);
    let (eta, color) = find_monochromatic(&col, 2).unwrap().unwrap();
    assert_eq!(eta, enumerate_partitions(4, 2, true).next().unwrap());
    assert_eq!(col.color_of(&eta).unwrap(), color);
}

#[test]
fn trivial_verdicts() {
    let cfg = SearchConfig::default();
    for r in 1..=3 {
        for m in 1..=4 {
            assert!(holds(&verify_dr(&q(m, m, m, r), &cfg).unwrap()));
            assert!(matches!(search_bad_coloring(&q(m, m, m, r), &cfg).unwrap(), SearchOutcome::NoneExists { .. }));
            for n in 1..=6 {
                assert_eq!(holds(&verify_dr(&q(n, 1, m, r), &cfg).unwrap()), n >= m, "N={n} m={m} r={r}");
            }
        }
    }
}

#[test]
fn three_points_two_colours() {
    let v = verify_dr(&q(3, 2, 3, 2), &SearchConfig::default()).unwrap();
    let Verdict::Fails { certificate } = v else { panic!("a bad colouring exists: {v:?}") };
    let col = certificate.coloring().unwrap().unwrap();
    assert_eq!(find_monochromatic(&col, 3).unwrap(), None);
    check_dr_certificate(&certificate).unwrap();
}

#[test]
fn two_three_two_sequence() {
    let cfg = SearchConfig::default();
    let mut last_bad = None;
    for n in 3..=7 {
        match search_bad_coloring(&q(n, 2, 3, 2), &cfg).unwrap() {
            SearchOutcome::Bad(_) => last_bad = Some(n),
            SearchOutcome::NoneExists { .. } => {}
            SearchOutcome::Unknown => panic!("budget exhausted at N = {n}"),
        }
    }
    let DrNumber::Exact { value, lower, upper } = dr_number(2, 3, 2, 8, &cfg).unwrap() else {
        panic!("expected an exact value");
    };
    assert_eq!(Some(value - 1), last_bad);
    check_dr_certificate(&lower).unwrap();
    check_dr_certificate(&upper.unwrap()).unwrap();
}

#[test]
fn trivial_numbers() {
    let cfg = SearchConfig::default();
    for r in 1..=4 {
        for m in 1..=5 {
            assert!(matches!(dr_number(1, m, r, m, &cfg).unwrap(), DrNumber::Exact { value, .. } if value == m));
            assert!(matches!(dr_number(m, m, r, m, &cfg).unwrap(), DrNumber::Exact { value, .. } if value == m));
        }
    }
}

#[test]
fn budget_gives_unknown() {
    let cfg = SearchConfig { budget: 3, ..SearchConfig::default() };
    assert_eq!(verify_dr(&q(6, 2, 3, 2), &cfg).unwrap(), Verdict::Unknown);
    let DrNumber::Unknown { at, exceeds, certificate } = dr_number(2, 3, 2, 8, &cfg).unwrap() else {
        panic!("expected unknown");
    };
    assert!(at > exceeds);
    check_dr_certificate(&certificate).unwrap();
}

#[test]
fn answers_do_not_depend_on_thread_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            (3..=6)
                .map(|n| serde_json::to_string(&verify_dr(&q(n, 2, 3, 2), &SearchConfig { shard_depth: 3, ..SearchConfig::default() }).unwrap()).unwrap())
                .collect::<Vec<_>>()
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn certificate_mutations() {
    let Verdict::Fails { certificate } = verify_dr(&q(5, 2, 3, 2), &SearchConfig::default()).unwrap() else {
        panic!("DR(2,3,2) exceeds 5");
    };
    check_dr_certificate(&certificate).unwrap();
    let DrCertificate::LowerBound { query, coloring } = &certificate else { unreachable!() };
    let mut caught = 0;
    for key in coloring.keys() {
        let mut c = coloring.clone();
        *c.get_mut(key).unwrap() ^= 1;
        caught += check_dr_certificate(&DrCertificate::LowerBound { query: *query, coloring: c }).is_err() as usize;
    }
    assert!(caught > 0);
    let empty = DrCertificate::LowerBound { query: *query, coloring: BTreeMap::new() };
    assert!(check_dr_certificate(&empty).unwrap_err().to_string().contains("empty"));
}

#[test]
fn factor_colourings() {
    let c0: ChainApprox = "10,00,11,01".parse().unwrap();
    for t in Table::all(2) {
        let omega = SymbolConfig::phi_t(t.clone(), c0.clone());
        for n in 2..=4 {
            let beta = refine_sorted(&c0, &op("0|1"), n).unwrap();
            let tc = factor_coloring(&omega, &c0, &beta).unwrap();
            assert_eq!(tc.palette, vec![t.clone()]);
            assert!(tc.coloring.colors().iter().all(|&c| c == 0));
        }
    }

    // k = N: one cell, coloured by the table at β itself.
    let omega = SymbolConfig::phi_t("12:-1,21:+1".parse().unwrap(), "11,00,10,01".parse().unwrap());
    let beta = refine_sorted(&c0, &op("0|1"), 2).unwrap();
    let tc = factor_coloring(&omega, &c0, &beta).unwrap();
    assert_eq!(tc.coloring.colors(), &[0]);
    assert_eq!(tc.palette, vec![tilde(&omega, &c0).table(&beta.unordered()).unwrap()]);

    // Configurations agreeing on every β-measurable partition colour alike.
    let beta = refine_sorted(&c0, &op("0|1"), 4).unwrap();
    let mut values = BTreeMap::new();
    for gamma in enumerate_partitions(4, 2, true) {
        let b = beta.amalgamate(&gamma).unwrap();
        for s in Permutation::all(2) {
            let p = b.permute(&s).unwrap();
            values.insert(p.clone(), omega.eval(&p).unwrap());
        }
    }
    let copy = SymbolConfig::explicit(2, values, Sign::Minus);
    assert_eq!(factor_coloring(&omega, &c0, &beta).unwrap(), factor_coloring(&copy, &c0, &beta).unwrap());
}

#[test]
fn extraction_round_trip() {
    let c0 = ChainApprox::lex(&PrefixCode::uniform(3));
    for t in Table::all(2) {
        let omega = SymbolConfig::phi_t(t.clone(), c0.clone());
        for alpha in ["0|1", "1|00|01", "10|0|11"] {
            let alpha = op(alpha);
            let got = extract_table(&omega, &c0, &alpha, alpha.len()).unwrap().unwrap();
            assert_eq!(got.table, t);
            let sorted = umflow::chains::t_star(&c0, &alpha);
            assert_eq!(sorted.apply(&got.g.inverse()), got.beta.amalgamate(&got.eta).unwrap());
        }
    }
    let plus = Table::constant(3, Sign::Plus);
    let omega = SymbolConfig::phi_t(plus.clone(), c0.clone());
    let alpha = op("0|10|11");
    assert_eq!(extract_table(&omega, &c0, &alpha, 3).unwrap().unwrap().table, plus);
}

#[test]
fn adversarial_configuration_is_not_factored() {
    let c0 = ChainApprox::lex(&PrefixCode::uniform(2));
    let alpha = op("00|01|1");
    let omega = umflow::suites::adversarial_config(&c0, &alpha, 2).unwrap();
    assert_eq!(extract_table(&omega, &c0, &alpha, 3).unwrap(), None);
}
