use std::collections::BTreeSet;

use proptest::prelude::*;
use systolic_cas::{oracle_cas, Alphabet, CasInstance, Motif, SearchConfig, Sequence};

fn make(strings: &[String], m: usize, d: usize) -> CasInstance {
    let alphabet = Alphabet::dna();
    let seqs = strings
        .iter()
        .enumerate()
        .map(|(i, s)| Sequence::new(format!("s{}", i + 1), s, &alphabet).unwrap())
        .collect();
    CasInstance::new(seqs, SearchConfig::new(m, d, strings.len()).unwrap()).unwrap()
}

/// Every sigma^m motif that is within d of a window of every string,
/// the database string included.
fn unrestricted(strings: &[String], m: usize, d: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for x in 0..4usize.pow(m as u32) {
        let motif: Vec<u8> = (0..m).map(|i| b"ACGT"[(x >> (2 * i)) & 3]).collect();
        let hit = |s: &String| {
            s.as_bytes()
                .windows(m)
                .any(|w| w.iter().zip(&motif).filter(|(a, b)| a != b).count() <= d)
        };
        if strings.iter().all(hit) {
            out.insert(String::from_utf8(motif).unwrap());
        }
    }
    out
}

fn as_strings(motifs: Vec<Motif>) -> BTreeSet<String> {
    motifs.into_iter().map(|m| m.to_string()).collect()
}

fn instance(max_m: usize) -> impl Strategy<Value = (Vec<String>, usize, usize)> {
    (1usize..=max_m, 0usize..=2, 1usize..=5).prop_flat_map(|(m, d, n)| {
        let s = prop::string::string_regex(&format!("[ACGT]{{{m},16}}")).unwrap();
        (prop::collection::vec(s, n), Just(m), Just(d.min(m)))
    })
}

proptest! {
    #[test]
    fn restriction_is_sound((strings, m, d) in instance(4)) {
        let got = as_strings(oracle_cas(&make(&strings, m, d), &Alphabet::dna()));
        prop_assert_eq!(got, unrestricted(&strings, m, d));
    }

    #[test]
    fn monotone_in_d((strings, m, d) in instance(6)) {
        prop_assume!(d < m);
        let a = as_strings(oracle_cas(&make(&strings, m, d), &Alphabet::dna()));
        let b = as_strings(oracle_cas(&make(&strings, m, d + 1), &Alphabet::dna()));
        prop_assert!(a.is_subset(&b));
    }

    #[test]
    fn extra_string_never_grows_result((strings, m, d) in instance(6), extra in "[ACGT]{6,16}") {
        let before = as_strings(oracle_cas(&make(&strings, m, d), &Alphabet::dna()));
        let mut more = strings.clone();
        more.push(extra);
        let after = as_strings(oracle_cas(&make(&more, m, d), &Alphabet::dna()));
        prop_assert!(after.is_subset(&before));
    }
}

#[test]
fn full_radius_returns_whole_union() {
    let strings = vec!["ACGTA".to_owned(), "TTTTT".to_owned()];
    let got = as_strings(oracle_cas(&make(&strings, 3, 3), &Alphabet::dna()));
    assert_eq!(got.len(), 64);
}
