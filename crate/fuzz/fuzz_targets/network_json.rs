#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        // Must reject or accept without panicking; a parsed network
        // must survive its own derived computations.
        if let Ok(net) = geoplan::network::Network::from_json(text) {
            let _ = net.is_metric();
            let _ = net.reduce_multihop();
            let profile = net.lambda_profile();
            for k in 1..=net.len().min(4) {
                let _ = profile.avg_latency_lower_bound(k);
            }
        }
    }
});
