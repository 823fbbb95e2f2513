#![no_main]

use capline::{encode, Code, EncoderConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let config = EncoderConfig::default();
    let code = encode(text, &config);
    assert_eq!(code.codes().len(), code.spans().len());
    assert_eq!(code.codes().first(), Some(&Code::Line));
    assert_eq!(code.codes().last(), Some(&Code::Line));
    let mut last = 0;
    for span in code.spans() {
        assert!(last <= span.start && span.start <= span.end && span.end <= text.len());
        last = span.end;
    }
});
