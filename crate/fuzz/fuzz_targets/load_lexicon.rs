#![no_main]

use capline::{load_lexicon, LexiconSet};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(words) = load_lexicon(text) {
        let set = LexiconSet::default().with_prefix_list(words.clone());
        for word in &words {
            assert!(set.has_prefix_of(word));
        }
    }
});
