#![no_main]

use libfuzzer_sys::fuzz_target;

use geoplan::eval::evaluate;
use geoplan::network::Network;
use geoplan::rational::rat;
use geoplan::scheme::SchemeKind;

fn fixed_network() -> Network {
    let names = ["a", "b", "c", "d"].map(String::from).to_vec();
    let rows = [
        [0, 1, 2, 1],
        [1, 0, 1, 2],
        [2, 1, 0, 1],
        [1, 2, 1, 0],
    ];
    let rtt = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
    Network::new(names, rtt).unwrap()
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let net = fixed_network();
    // Parsing must not panic, and any scheme it accepts must be safe
    // to evaluate (evaluation may still return an error).
    if let Ok(scheme) = SchemeKind::from_json(text, &net) {
        let _ = evaluate(&net, &scheme);
    }
});
