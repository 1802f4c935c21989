#![no_main]

use antichain::cert::{parse_certificates, verify_certificate, write_certificates};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|bytes: &[u8]| {
    let Ok(text) = std::str::from_utf8(bytes) else {
        return;
    };
    if let Ok(certs) = parse_certificates(text) {
        let mut out = Vec::new();
        write_certificates(&certs, &mut out).unwrap();
        let again = parse_certificates(std::str::from_utf8(&out).unwrap()).unwrap();
        assert_eq!(certs, again);
        for c in &certs {
            let report = verify_certificate(c);
            assert_eq!(report.num_levels, c.levels.len());
        }
    }
});
