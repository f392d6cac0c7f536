#![no_main]

use libfuzzer_sys::fuzz_target;
use uglov::symbol::{from_symbol, tau, theta, to_symbol, Symbol};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(symbol) = Symbol::from_json(text) else {
        return;
    };
    // a validated symbol always decodes, and encodes back to itself
    let lambda = from_symbol(&symbol).expect("validated symbols decode");
    let again = to_symbol(&lambda, symbol.charge(), Some(symbol.m())).expect("re-encoding succeeds");
    assert_eq!(again, symbol);
    let _ = theta(&symbol);
    let _ = tau(&symbol);
});
