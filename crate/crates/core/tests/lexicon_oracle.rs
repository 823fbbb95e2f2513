mod oracles;

use capline::{
    build_prefix_lexicon, load_lexicon, parse_frequency_list, AuthorPrefixIndex, LexiconSet,
    PrefixCandidate,
};
use proptest::prelude::*;

fn word() -> impl Strategy<Value = String> {
    "[abcd]{1,6}"
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn builder_matches_brute_force(
        candidates in prop::collection::vec((word(), 0u64..50), 0..=100),
        names in prop::collection::vec(word(), 0..=100),
        top_k in 0usize..30,
    ) {
        let index = AuthorPrefixIndex::new(&names);
        let input: Vec<PrefixCandidate> =
            candidates.iter().map(|(w, f)| PrefixCandidate::new(w.clone(), *f)).collect();
        let built: Vec<(String, u64)> = build_prefix_lexicon(&input, &index, top_k)
            .into_iter()
            .map(|e| (e.prefix, e.frequency))
            .collect();
        prop_assert_eq!(&built, &oracles::brute_force_prefixes(&candidates, &names, top_k));

        for (prefix, _) in &built {
            prop_assert!(!names.iter().any(|n| n.starts_with(prefix.as_str())));
            let shorter: String = prefix.chars().take(prefix.chars().count() - 1).collect();
            prop_assert!(shorter.is_empty() || names.iter().any(|n| n.starts_with(&shorter)));
        }
    }
}

#[test]
fn bundled_prefixes_are_the_builder_output() {
    let names = load_lexicon(include_str!("../data/source/names.txt")).unwrap();
    let freqs = parse_frequency_list(include_str!("../data/source/title_words.tsv")).unwrap();
    let index = AuthorPrefixIndex::new(&names);
    let built: Vec<String> = build_prefix_lexicon(&freqs, &index, 450)
        .into_iter()
        .map(|e| e.prefix)
        .collect();
    let bundled = load_lexicon(LexiconSet::bundled_prefix_source()).unwrap();
    assert_eq!(bundled, built);
    LexiconSet::bundled().verify_against(&index).unwrap();
}

#[test]
fn worked_builder_examples() {
    let index = AuthorPrefixIndex::new(["newton"]);
    let built = build_prefix_lexicon(&[PrefixCandidate::new("nonlinear", 10)], &index, 50);
    assert_eq!(built[0].prefix, "no");
    assert!(build_prefix_lexicon(&[], &index, 50).is_empty());
    let tie = [
        PrefixCandidate::new("zeta", 5),
        PrefixCandidate::new("alpha", 5),
    ];
    let built = build_prefix_lexicon(&tie, &AuthorPrefixIndex::new(Vec::<String>::new()), 1);
    assert_eq!(built[0].prefix, "a");
}
