#![no_main]

use capline::{extract, ExtractConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let result = extract(text, &ExtractConfig::default());
    for author in &result.authors {
        assert_eq!(&text[author.span.range()], author.raw);
        assert!(!author.surname.is_empty());
    }
});
