#![no_main]

use libfuzzer_sys::fuzz_target;
use uglov::canonical::CanonicalElement;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(element) = CanonicalElement::from_json(text) {
        let again = CanonicalElement::from_json(&element.to_json()).expect("own output parses");
        assert_eq!(again, element);
        let _ = element.to_string();
    }
});
