//! One line per acceptance criterion, then a non-zero exit if any failed.

mod common;

use std::sync::Arc;
use std::time::Instant;

use common::{brute_force_counts, fixture, random_instance, synthetic_bitext, write_bitext};
use gecsynth::errortypes::type_distribution;
use gecsynth::m2::{apply_edits, extract_edits, f_beta, sentence_counts, ExtractOptions};
use gecsynth::noise::{apply_token_noise, expected_mask_fraction, NoiseConfig, NoiseOp};
use gecsynth::pair::{ErroneousPair, Provenance};
use gecsynth::pipeline::{generate_dataset, rule_pairs, BitextCorpus, GenerateSettings, PipelineConfig};
use gecsynth::postedit::PostEditConfig;
use gecsynth::predict::{EchoBackend, LexiconBackend, PredictorBackend, RemoteBackend, SamplingConfig, StubServer};
use gecsynth::rng::{derive_record_rng, stage, RngStream};
use gecsynth::rulegen::RuleConfig;
use gecsynth::text::{tokenize, LangProfile};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn f_beta_regression() -> Outcome {
    // (P, R, F0.5) rows from the paper's result tables
    const ROWS: [(f64, f64, f64); 6] = [
        (44.27, 26.76, 39.15),
        (41.66, 25.81, 37.10),
        (45.95, 27.94, 40.70),
        (73.86, 60.74, 70.80),
        (57.96, 23.51, 44.82),
        (61.40, 27.47, 49.24),
    ];
    let start = Instant::now();
    let mut bad = Vec::new();
    for (p, r, f) in ROWS {
        let got = (f_beta(p / 100.0, r / 100.0, 0.5) * 10000.0).round() / 100.0;
        if (got - f).abs() > 0.01 + 1e-9 {
            bad.push(format!("({p},{r}) -> {got:.2}, expected {f:.2}"));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(
        bad.is_empty() && elapsed < 1.0,
        format!("{}/6 rows within ±0.01 in {elapsed:.4}s {}", 6 - bad.len(), bad.join("; ")),
    )
}

fn m2_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = RngStream::from_state(0xACCE);
    let mut mismatches = 0;
    let mut with_tp = 0;
    for _ in 0..200 {
        let (src, hyp, gold) = random_instance(&mut rng, 6, 5);
        let c = sentence_counts(&src, &hyp, &gold, 2);
        let expected = brute_force_counts(&src, &hyp, &gold, 2);
        if (c.tp, c.fp, c.fn_) != expected {
            mismatches += 1;
        }
        with_tp += usize::from(expected.0 > 0);
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(
        mismatches == 0 && elapsed < 60.0,
        format!("200 instances, {mismatches} mismatches, {with_tp} with true positives, {elapsed:.2}s"),
    )
}

fn replay_fuzz() -> Outcome {
    let mut rng = RngStream::from_state(0x5EED);
    let vocab = ["a", "b", "c", "d", "e", "f"];
    let mut failures = 0;
    for _ in 0..10_000 {
        let mut sent = |max: usize| -> Vec<String> {
            let n = rng.below(max + 1);
            (0..n).map(|_| vocab[rng.below(vocab.len())].to_owned()).collect()
        };
        let src = sent(12);
        let hyp = sent(12);
        let edits = extract_edits(&src, &hyp, &[], ExtractOptions::default());
        if apply_edits(&src, &edits) != hyp {
            failures += 1;
        }
    }
    check(failures == 0, format!("10000 random pairs, {failures} replay failures"))
}

fn within(observed: f64, expected: f64, n: usize) -> (bool, f64) {
    let se = (expected * (1.0 - expected) / n as f64).sqrt();
    let z = (observed - expected) / se;
    (z.abs() <= 3.0, z)
}

fn noiser_calibration() -> Outcome {
    let cfg = NoiseConfig::german();
    let profile = LangProfile::whitespace();
    let (mut tokens, mut considered, mut selected, mut masks) = (0usize, 0usize, 0usize, 0usize);
    let mut ops = [0usize; 4];
    let corpus = synthetic_bitext(40_000, 17);
    for (id, (_, de)) in corpus.iter().enumerate() {
        if tokens >= 200_000 {
            break;
        }
        let seq = tokenize(de, &profile).unwrap();
        tokens += seq.len();
        let out = apply_token_noise(&seq, &cfg, &mut derive_record_rng(42, id as u64, stage::NOISER)).unwrap();
        considered += out.positions_considered;
        selected += out.ops_applied.len();
        masks += out.mask_positions.len();
        for r in &out.ops_applied {
            ops[NoiseOp::ALL.iter().position(|o| *o == r.op).unwrap()] += 1;
        }
    }
    let mut parts = Vec::new();
    let mut ok = tokens >= 200_000;
    let (pass, z) = within(selected as f64 / considered as f64, cfg.p_noise, considered);
    ok &= pass;
    parts.push(format!("select z={z:+.2}"));
    let probs = [cfg.p_mask, cfg.p_insert, cfg.p_delete, cfg.p_swap];
    for (k, op) in NoiseOp::ALL.iter().enumerate() {
        let (pass, z) = within(ops[k] as f64 / selected as f64, probs[k], selected);
        ok &= pass;
        parts.push(format!("{op:?} z={z:+.2}").to_lowercase());
    }
    let expected = expected_mask_fraction(&cfg);
    ok &= (expected - 0.24).abs() < 1e-12;
    let (pass, z) = within(masks as f64 / considered as f64, expected, considered);
    ok &= pass;
    parts.push(format!("mask fraction {:.4} vs {expected:.2} z={z:+.2}", masks as f64 / considered as f64));
    check(ok, format!("{tokens} tokens; {}", parts.join(", ")))
}

fn end_to_end_determinism() -> Outcome {
    let golden = std::fs::read(fixture("golden_e2e_seed42.tsv")).map_err(|e| e.to_string())?;
    let cfg = PipelineConfig::load(&fixture("e2e.toml")).map_err(|e| e.to_string())?;
    let server = StubServer::spawn(Arc::new(LexiconBackend::load(&fixture("lexicon.tsv")).unwrap()), "127.0.0.1:0")
        .map_err(|e| e.to_string())?;
    let corpus = BitextCorpus::Tsv(fixture("bitext_1k.tsv"));
    let mut results = Vec::new();
    for workers in [1, 4, 8] {
        let remote = RemoteBackend::new(server.url()).with_batch_size(cfg.batch_size);
        let settings = GenerateSettings {
            seed: 42,
            workers,
            ..GenerateSettings::from_config(&cfg)
        };
        let mut out = Vec::new();
        generate_dataset(&corpus, &settings, &remote, &mut out).map_err(|e| e.to_string())?;
        results.push((workers, out == golden, out.len()));
    }
    server.shutdown();
    let ok = results.iter().all(|r| r.1);
    let detail: Vec<String> = results
        .iter()
        .map(|(w, same, len)| format!("workers={w} {} ({len} bytes)", if *same { "identical" } else { "DIFFERS" }))
        .collect();
    check(ok, format!("seed 42 over the stub server vs golden: {}", detail.join(", ")))
}

fn parse_output(bytes: &[u8], prov: Provenance) -> Vec<ErroneousPair> {
    String::from_utf8_lossy(bytes)
        .lines()
        .enumerate()
        .map(|(i, l)| {
            let f: Vec<&str> = l.split('\t').collect();
            ErroneousPair {
                source: f[0].to_owned(),
                target: f[1].to_owned(),
                record_id: i,
                provenance: prov.clone(),
            }
        })
        .collect()
}

fn identity_paths() -> Outcome {
    let corpus = BitextCorpus::Tsv(fixture("bitext_1k.tsv"));
    let lexicon = LexiconBackend::load(&fixture("lexicon.tsv")).unwrap();
    let quiet = GenerateSettings {
        noise: NoiseConfig::disabled(),
        postedit: PostEditConfig::disabled(),
        workers: 4,
        ..Default::default()
    };
    let mut out = Vec::new();
    generate_dataset(&corpus, &quiet, &lexicon, &mut out).map_err(|e| e.to_string())?;
    let a = parse_output(&out, Provenance::Nat);
    let a_ok = a.len() == 1000 && a.iter().all(|p| p.source == p.target);

    let text = std::fs::read_to_string(fixture("bitext_1k.tsv")).unwrap();
    let mut echo = EchoBackend::new();
    for (id, line) in text.lines().enumerate() {
        echo.insert(id.to_string(), line.split('\t').nth(1).unwrap().split_whitespace().enumerate());
    }
    let mask_only = GenerateSettings {
        noise: NoiseConfig::new(0.5, 1.0, 0.0, 0.0, 0.0),
        sampling: SamplingConfig::argmax(),
        postedit: PostEditConfig::disabled(),
        workers: 4,
        ..Default::default()
    };
    let mut out = Vec::new();
    let stats = generate_dataset(&corpus, &mask_only, &echo, &mut out).map_err(|e| e.to_string())?;
    let b = parse_output(&out, Provenance::Nat);
    let b_ok = b.len() == 1000 && b.iter().all(|p| p.source == p.target) && stats.masks_filled > 0;
    check(
        a_ok && b_ok,
        format!(
            "p_noise=0: {}/{} identical; echo+mask-only+T=0: {}/{} identical ({} masks filled)",
            a.iter().filter(|p| p.source == p.target).count(),
            a.len(),
            b.iter().filter(|p| p.source == p.target).count(),
            b.len(),
            stats.masks_filled
        ),
    )
}

fn distribution_contrast() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let rows = synthetic_bitext(10_000, 99);
    let path = dir.path().join("bitext_10k.tsv");
    write_bitext(&path, &rows);
    let targets: Vec<&str> = rows.iter().map(|(_, de)| de.as_str()).collect();
    let lexicon = LexiconBackend::from_tokens(rows.iter().map(|(_, de)| tokenize(de, &LangProfile::whitespace()).unwrap().into_tokens()).collect::<Vec<_>>().iter().map(Vec::as_slice))
        .map_err(|e| e.to_string())?;
    let settings = GenerateSettings {
        seed: 7,
        workers: 4,
        ..Default::default()
    };
    let mut out = Vec::new();
    generate_dataset(&BitextCorpus::Tsv(path), &settings, &lexicon, &mut out).map_err(|e| e.to_string())?;
    let nat: Vec<ErroneousPair> = parse_output(&out, Provenance::Nat).into_iter().filter(|p| p.source != p.target).collect();
    let rule: Vec<ErroneousPair> = rule_pairs(&targets, &RuleConfig::default(), None, &LangProfile::whitespace(), 7)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|p| p.source != p.target)
        .collect();
    let profile = LangProfile::whitespace();
    let hn = type_distribution(&nat, &profile).map_err(|e| e.to_string())?;
    let hr = type_distribution(&rule, &profile).map_err(|e| e.to_string())?;
    let fmt = |h: &gecsynth::errortypes::TypeHistogram| {
        h.ranked()
            .iter()
            .take(5)
            .map(|(t, r)| format!("{} {r:.3}", t.as_str()))
            .collect::<Vec<_>>()
            .join(", ")
    };
    check(
        hn.modal() != hr.modal(),
        format!("NAT [{}] vs rule [{}]", fmt(&hn), fmt(&hr)),
    )
}

fn throughput() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let rows = synthetic_bitext(20_000, 5);
    let path = dir.path().join("bitext_20k.tsv");
    write_bitext(&path, &rows);
    let corpus = BitextCorpus::Tsv(path);
    let lexicon = Arc::new(LexiconBackend::load(&fixture("lexicon.tsv")).unwrap());
    let settings = GenerateSettings {
        seed: 1,
        workers: 4,
        ..Default::default()
    };

    let rate = |backend: &dyn PredictorBackend| -> Result<f64, String> {
        let start = Instant::now();
        let mut out = Vec::with_capacity(2 << 20);
        let stats = generate_dataset(&corpus, &settings, backend, &mut out).map_err(|e| e.to_string())?;
        Ok(stats.emitted as f64 / start.elapsed().as_secs_f64() * 60.0)
    };
    let server = StubServer::spawn(lexicon.clone(), "127.0.0.1:0").map_err(|e| e.to_string())?;
    let remote = RemoteBackend::new(server.url());
    let over_http = rate(&remote)?;
    server.shutdown();
    let in_process = rate(lexicon.as_ref())?;
    check(
        over_http >= 20_000.0 && in_process >= 20_000.0,
        format!("{over_http:.0} pairs/min via stub server, {in_process:.0} pairs/min in process (4 workers)"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("f_beta regression", f_beta_regression),
        ("max-match oracle equivalence", m2_oracle_equivalence),
        ("replay invariant fuzz", replay_fuzz),
        ("noiser statistical calibration", noiser_calibration),
        ("end-to-end determinism", end_to_end_determinism),
        ("identity paths", identity_paths),
        ("distribution contrast", distribution_contrast),
        ("throughput", throughput),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

