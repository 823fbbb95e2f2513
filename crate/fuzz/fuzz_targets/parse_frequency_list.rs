#![no_main]

use capline::{build_prefix_lexicon, parse_frequency_list, AuthorPrefixIndex};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(candidates) = parse_frequency_list(text) {
        let names = AuthorPrefixIndex::new(["newton", "smith"]);
        let entries = build_prefix_lexicon(&candidates, &names, 50);
        assert!(entries.len() <= 50);
        assert!(entries.windows(2).all(|w| w[0].frequency >= w[1].frequency));
    }
});
