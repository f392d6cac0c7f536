#![no_main]

use libfuzzer_sys::fuzz_target;
use uglov::bijection::PsiPlan;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(plan) = PsiPlan::from_json(text) {
        plan.charges().expect("validated plans replay");
        assert_eq!(PsiPlan::from_json(&plan.to_json()).expect("own output parses"), plan);
    }
});
