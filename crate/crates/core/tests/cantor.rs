use umflow::cantor::{
    apply_partition, canonicalize, homogeneity_witness, join, stabilizes, ClopenSet, OrderedPartition, PrefixMap,
    Word,
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

fn map(s: &str) -> PrefixMap {
    s.parse().unwrap()
}

#[test]
fn canonical_forms() {
    assert_eq!(canonicalize([w("00"), w("01")]), set("0"));
    assert_eq!(canonicalize([w("0"), w("01")]), set("0"));
    let full = canonicalize(["00", "01", "10", "11"].map(w));
    assert_eq!(full.cylinders(), &[Word::EMPTY]);
    assert!(full.is_full());
}

#[test]
fn boolean_operations() {
    assert_eq!(set("0").complement(), set("1"));
    assert_eq!(set("0").intersection(&set("00,11")), set("00"));
    assert!(set("0").union(&set("1")).is_full());
    assert!(ClopenSet::empty().complement().is_full());
}

#[test]
fn group_laws() {
    let f = map("0→00,10→01,11→1");
    assert!(f.compose(&f.inverse()).is_identity());
    let g = map("0→11,10→0,11→10");
    assert_eq!(PrefixMap::identity().compose(&g), g);
    // The point 0111… read through truncations.
    for len in 3..12 {
        let x = Word::from_bits(&std::iter::once(0).chain(std::iter::repeat_n(1, len)).collect::<Vec<_>>());
        let there = f.apply_word(&x).unwrap();
        let back = f.inverse().apply_word(&there).unwrap();
        assert_eq!(back, x);
    }
}

#[test]
fn transport_of_sets_and_partitions() {
    let g = map("0→00,10→01,11→1");
    assert_eq!(PrefixMap::identity().apply_clopen(&set("01,1")), set("01,1"));
    assert_eq!(g.apply_clopen(&set("0")), set("00"));
    assert_eq!(apply_partition(&g, &op("0|1")), op("00|01,1"));
}

#[test]
fn joins() {
    let a = op("00|01,1");
    assert_eq!(join(&a, &a), a);
    assert_eq!(join(&op("0|1"), &op("00,10|01,11")), op("00|01|10|11"));
    assert_eq!(join(&op("0|1"), &op("1|0")), op("0|1"));
}

#[test]
fn homogeneity() {
    let a = op("0|1");
    let g = homogeneity_witness(&a, &a).unwrap();
    assert!(stabilizes(&g, &a));

    let g = homogeneity_witness(&op("0|1"), &op("00|01,1")).unwrap();
    assert_eq!(g, map("0→00,10→01,11→1"));

    let (alpha, beta) = (op("00|01|1"), op("1|01|00"));
    let g = homogeneity_witness(&alpha, &beta).unwrap();
    for (x, y) in alpha.parts().iter().zip(beta.parts()) {
        assert_eq!(g.apply_clopen(x), *y);
    }
    assert!(homogeneity_witness(&op("0|1"), &op("0|10|11")).is_err());
}

#[test]
fn stabilizers() {
    assert!(stabilizes(&PrefixMap::identity(), &op("00|01,1")));
    assert!(!stabilizes(&map("0→1,1→0"), &op("0|1")));
    assert!(stabilizes(&map("00→01,01→00,1→1"), &op("0|1")));
}

#[test]
fn json_forms() {
    assert_eq!(serde_json::to_string(&set("10,0")).unwrap(), r#"["0","10"]"#);
    assert_eq!(serde_json::to_string(&map("0→1,1→0")).unwrap(), r#"["0→1","1→0"]"#);
    assert_eq!(serde_json::to_string(&op("1|0")).unwrap(), r#"[["1"],["0"]]"#);
    let back: PrefixMap = serde_json::from_str(r#"["0→00","10→01","11→1"]"#).unwrap();
    assert_eq!(back, map("0→00,10→01,11→1"));
}
