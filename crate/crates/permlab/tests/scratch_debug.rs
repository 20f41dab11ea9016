use permlab::search::{search, SamplerConfig};

#[test]
fn probe_ratio_stability() {
    let cfg = SamplerConfig::random(3, 3, false);
    let a = search("chollet", cfg.clone(), 5, 1).unwrap();
    let b = search("chollet", cfg.clone(), 5, 40).unwrap();
    let ra = a.best.iter().find(|c| c.iteration == 0).unwrap().ratio;
    let rb = b.best.iter().find(|c| c.iteration == 0).unwrap().ratio;
    eprintln!("budget1 {:016x}  budget40 {:016x}", ra.to_bits(), rb.to_bits());

    let x: f64 = 0.24154164865708977;
    let s = serde_json::to_string(&x).unwrap();
    let y: f64 = serde_json::from_str(&s).unwrap();
    eprintln!("json roundtrip {} -> {} -> {:016x} vs {:016x}", x, s, y.to_bits(), x.to_bits());

    assert_eq!(ra.to_bits(), rb.to_bits(), "in-process history dependence");
}
