#![no_main]

use capline::templates::Pattern;
use capline::CodeString;
use libfuzzer_sys::fuzz_target;

// First line: pattern source. Remainder: code symbols to search.
fuzz_target!(|input: &str| {
    let (source, subject) = input.split_once('\n').unwrap_or((input, "LnnL"));
    let Ok(pattern) = Pattern::new(source) else {
        return;
    };
    let symbols: String = subject
        .chars()
        .filter(|c| "NnIwp,;:&Lao".contains(*c))
        .collect();
    let code = CodeString::from_symbols(&symbols).expect("filtered to the alphabet");
    for m in pattern.find_iter(code.codes()) {
        assert!(m.start <= m.end && m.end <= code.len());
    }
});
