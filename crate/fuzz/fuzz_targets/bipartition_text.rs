#![no_main]

use libfuzzer_sys::fuzz_target;
use uglov::Bipartition;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(lambda) = text.parse::<Bipartition>() {
        let again: Bipartition = lambda.to_string().parse().expect("display output parses");
        assert_eq!(again, lambda);
    }
});
