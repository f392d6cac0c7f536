#![no_main]

use libfuzzer_sys::fuzz_target;
use uglov::bijection::ChargeTarget;
use uglov::{Charge, Modulus, NodeOrder};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(charge) = text.parse::<Charge>() {
        assert_eq!(charge.to_string().parse::<Charge>().unwrap(), charge);
    }
    if let Ok(order) = text.parse::<NodeOrder>() {
        assert_eq!(order.to_string().parse::<NodeOrder>().unwrap(), order);
    }
    if let Ok(target) = text.parse::<ChargeTarget>() {
        assert_eq!(target.to_string().parse::<ChargeTarget>().unwrap(), target);
    }
    if let Ok(e) = text.parse::<Modulus>() {
        assert_eq!(e.to_string().parse::<Modulus>().unwrap(), e);
    }
});
