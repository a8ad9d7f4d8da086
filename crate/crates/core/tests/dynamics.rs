use umflow::cantor::{ClopenSet, OrderedPartition, PrefixCode, PrefixMap, Word};
use umflow::chains::{act_chain, in_neighborhood, induced_order, ChainApprox};
use umflow::dynamics::{
    certify, check_witness, extreme_proximality_witness, incomparability_witness, phi_minimality_witness,
    point_cover_witness, proximality_witness, WitnessInputs,
};

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn set(s: &str) -> ClopenSet {
    s.parse().unwrap()
}

fn op(s: &str) -> OrderedPartition {
    s.parse().unwrap()
}

fn chain(s: &str) -> ChainApprox {
    s.parse().unwrap()
}

fn map(s: &str) -> PrefixMap {
    s.parse().unwrap()
}

fn lex2() -> ChainApprox {
    ChainApprox::lex(&PrefixCode::uniform(2))
}

#[test]
fn point_covers() {
    assert!(point_cover_witness(&w("01"), &set("0")).unwrap().is_identity());
    assert!(point_cover_witness(&w("1101"), &ClopenSet::full()).unwrap().is_identity());
    let g = point_cover_witness(&w("1111"), &set("0")).unwrap();
    assert!(g.apply_clopen(&set("0")).contains_cylinder(&w("11")));
    // The sample map from the description passes the same check.
    assert!(map("0→1,10→00,11→01").apply_clopen(&set("0")).contains_cylinder(&w("11")));
}

#[test]
fn extreme_proximality() {
    let g = extreme_proximality_witness(&set("0"), &set("11")).unwrap();
    assert_eq!(g, map("0→110,10→111,110→0,111→10"));
    assert_eq!(g.apply_clopen(&set("0")), set("110"));
    assert!(extreme_proximality_witness(&set("01"), &set("0")).unwrap().is_identity());
    let g = extreme_proximality_witness(&set("0,10"), &set("01")).unwrap();
    assert!(g.apply_clopen(&set("0,10")).is_subset(&set("01")));
}

#[test]
fn phi_minimality() {
    let alpha = op("0|1");
    let g = phi_minimality_witness(&lex2(), &alpha).unwrap();
    assert!(in_neighborhood(&act_chain(&g, &lex2()), &alpha));
    let c = chain("10,00,11,01");
    let g = phi_minimality_witness(&c, &alpha).unwrap();
    assert_eq!(g.apply_clopen(&set("1")), set("0"));
    assert_eq!(g.apply_clopen(&set("0")), set("1"));
    assert!(in_neighborhood(&act_chain(&g, &c), &alpha));
    assert!(phi_minimality_witness(&c, &OrderedPartition::trivial()).unwrap().is_identity());
}

#[test]
fn proximality() {
    let alpha = op("0|1");
    let c = chain("10,00,11,01");
    assert_eq!(proximality_witness(&c, &c, &alpha).unwrap(), phi_minimality_witness(&c, &alpha).unwrap());
    let rev = chain("11,10,01,00");
    let g = proximality_witness(&lex2(), &rev, &alpha).unwrap();
    assert_eq!(g, map("00→00,11→01,01→10,10→11"));
    for c in [lex2(), rev] {
        let moved = act_chain(&g, &c);
        assert_eq!(induced_order(&moved, &alpha.unordered()), alpha);
    }
}

#[test]
fn incomparability() {
    let (g, a, b) = incomparability_witness(&lex2(), &set("0")).unwrap();
    assert_eq!(g, map("00→00,01→1,1→01"));
    assert_eq!((a, b), (w("01"), w("1")));
    assert!(g.fixes_pointwise(&w("00")));
    assert!(incomparability_witness(&lex2(), &ClopenSet::full()).is_err());
    assert!(incomparability_witness(&lex2(), &set("00")).is_err());
    assert!(incomparability_witness(&lex2(), &set("01")).is_err());
}

#[test]
fn root_leaf_is_fixed() {
    for code in PrefixCode::all_with_leaves(5) {
        for c in ChainApprox::all_on(&code) {
            for j in 2..c.len() {
                let (g, _, _) = incomparability_witness(&c, &c.element(j - 1)).unwrap();
                assert!(g.fixes_pointwise(&c.root()), "{c}");
            }
        }
    }
}

#[test]
fn checker_accepts_and_rejects() {
    let cert = certify(WitnessInputs::ExtremeProximality { closed: set("0"), open: set("11") }).unwrap();
    check_witness(&cert).unwrap();

    let mut tampered = cert.clone();
    tampered.witness = map("0→10,10→111,110→0,111→110");
    assert!(check_witness(&tampered).is_err());

    let mut mismatched = cert.clone();
    mismatched.inputs = WitnessInputs::Minimality { point: w("1"), open: set("0") };
    let err = check_witness(&mismatched).unwrap_err();
    assert!(err.to_string().contains("kind"), "{err}");

    let json = serde_json::to_string(&cert).unwrap();
    assert_eq!(serde_json::from_str::<umflow::dynamics::WitnessCertificate>(&json).unwrap(), cert);
}
