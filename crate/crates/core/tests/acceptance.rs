// Acceptance suite: one line per criterion, exit status 1 if any fails.
// Run with `cargo test -p trs-lab --test acceptance`.

use std::time::Instant;
use trs_lab::char_sums::{conic_count, gauss_sum, kloosterman, quad_complete_sum};
use trs_lab::report::{run_with_workers, Report, RowStatus, RunConfig};
use trs_lab::verify::{verify, EtaChoice, Mode, Status, VerifyParams, VerifyReport};
use trs_lab::Field;

type Outcome = Result<String, String>;

fn params(q: u64, eta: EtaChoice) -> VerifyParams {
    VerifyParams { eta, ..VerifyParams::new(q) }
}

fn run(id: &str, p: &VerifyParams) -> Result<VerifyReport, String> {
    verify(id, p).map_err(|e| format!("{id} q={}: {e}", p.q))
}

fn expect(id: &str, p: &VerifyParams, ok: &[Status]) -> Result<VerifyReport, String> {
    let r = run(id, p)?;
    if !ok.contains(&r.status) {
        return Err(format!("{id} q={} status {} counterexamples {:?}", p.q, r.status, r.counterexamples));
    }
    Ok(r)
}

fn count(r: &VerifyReport, key: &str) -> u64 {
    r.counts.get(key).copied().unwrap_or(0)
}

fn covering_radius() -> Outcome {
    let mut codes = 0;
    for q in [4, 5, 7, 8, 9] {
        let r = expect("thm3.1", &params(q, EtaChoice::All), &[Status::Pass])?;
        codes += count(&r, "codes");
    }
    Ok(format!("{codes} codes, radius n−k everywhere"))
}

fn mds_subcodes() -> Outcome {
    let mut words = 0;
    for q in [7, 8, 9] {
        let r = expect("thm3.2", &params(q, EtaChoice::Pair), &[Status::Pass])?;
        if count(&r, "subcodes") != 20 {
            return Err(format!("q={q}: {} subcodes", count(&r, "subcodes")));
        }
        words += count(&r, "words");
    }
    Ok(format!("60 subcodes, {words} words at distance n−k"))
}

fn oracle_config() -> RunConfig {
    RunConfig {
        theorems: vec!["thm3.4".into()],
        q: vec![5, 7, 8, 9],
        eta: EtaChoice::Pair,
        budget: 1_000_000_000,
        seed: 11,
        ..RunConfig::default()
    }
}

fn criterion_oracle(rep: &Report) -> Outcome {
    let mut syndromes = 0;
    for row in &rep.rows {
        if row.status != RowStatus::Pass {
            return Err(format!("q={} status {} {:?}", row.params.q, row.status.as_str(), row.error));
        }
        syndromes += row.counts["syndromes"];
    }
    Ok(format!("{syndromes} syndromes, verdicts agree"))
}

fn reconstruction() -> Outcome {
    let mut n = 0;
    for q in [5, 7, 8, 9, 11, 13, 16] {
        let p = VerifyParams { samples: 10_000, seed: q, ..params(q, EtaChoice::All) };
        let r = expect("lem3.7", &p, &[Status::Pass])?;
        n += count(&r, "instances");
    }
    Ok(format!("{n} instances, H·u = a"))
}

fn families() -> Outcome {
    let mut words = 0;
    for q in [5, 7, 8, 9] {
        let p = VerifyParams { budget: 1_000_000_000, ..params(q, EtaChoice::Pair) };
        words += count(&expect("cor3.8", &p, &[Status::Pass])?, "words");
    }
    let mut excluded = 0;
    for q in [5, 7, 8, 9, 11] {
        let p = VerifyParams { budget: 1_000_000_000, ..params(q, EtaChoice::Pair) };
        excluded += count(&expect("cor3.9", &p, &[Status::Pass])?, "excluded_values");
    }
    Ok(format!("{words} family words deep by both tests, {excluded} excluded values within C(n,k+1)"))
}

fn split_identities() -> Outcome {
    let mut points = 0;
    for q in [7, 8, 9] {
        for id in ["eq3.6", "eq4.6"] {
            points += count(&expect(id, &params(q, EtaChoice::All), &[Status::Pass])?, "points");
        }
    }
    Ok(format!("{points} grid points"))
}

fn even_small_k() -> Outcome {
    let r = expect("k-small-even", &params(16, EtaChoice::Pair), &[Status::Pass])?;
    Ok(format!("{} syndromes over k ∈ {{12,13,14}}, {} deep", count(&r, "syndromes"), count(&r, "deep")))
}

fn char_sums() -> Outcome {
    let mut n = 0u64;
    for q in [5u64, 7, 9, 11, 13, 25, 27] {
        let f = Field::with_order(q).unwrap();
        let psi = f.quadratic_index().unwrap();
        for a in f.nonzero() {
            let g = gauss_sum(&f, psi, a);
            let abs = g.exact().and_then(|z| z.abs_square().exact);
            if abs != Some(q as i128) {
                return Err(format!("Gauss q={q} a={}: |G|² = {abs:?}", f.packed(a)));
            }
            n += 1;
        }
    }
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        let f = Field::with_order(q).unwrap();
        for b in f.nonzero() {
            for a2 in f.nonzero() {
                for a1 in f.elements() {
                    for a0 in f.elements() {
                        if !quad_complete_sum(&f, b, a2, a1, a0).unwrap().holds() {
                            return Err(format!("quadratic sum q={q}"));
                        }
                        n += 1;
                    }
                }
            }
        }
    }
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32] {
        let f = Field::with_order(q).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                if a.is_zero() && b.is_zero() {
                    continue;
                }
                let k = kloosterman(&f, a, b).unwrap();
                if k.bound.holds != Some(true) || k.bound.exact_abs_square.is_some_and(|v| v > 4 * q as i128) {
                    return Err(format!("Kloosterman q={q}"));
                }
                n += 1;
            }
        }
    }
    for q in [3u64, 5, 7, 9, 11, 13] {
        let f = Field::with_order(q).unwrap();
        for a1 in f.nonzero() {
            for a2 in f.nonzero() {
                for b in f.elements() {
                    if !conic_count(&f, a1, a2, b).unwrap().holds() {
                        return Err(format!("conic q={q}"));
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} sums and counts exact"))
}

fn witnesses() -> Outcome {
    let ids = ["lem4.7", "lem4.8-t4", "lem4.10", "lem4.11", "appC", "lem4.8-witness"];
    let mut found = 0;
    for q in [7, 9, 11, 13] {
        for id in ids {
            let ok = [Status::Pass, Status::SampledConsistent, Status::Vacuous];
            let r = expect(id, &params(q, EtaChoice::All), &ok)?;
            if count(&r, "exhausted") > 0 {
                return Err(format!("{id} q={q}: {} exhausted searches", count(&r, "exhausted")));
            }
            found += count(&r, "instances") + count(&r, "found");
        }
    }
    Ok(format!("{found} witnesses verified, no exhaustion"))
}

fn completeness() -> Outcome {
    let mut vac = 0;
    for q in [4, 8, 16] {
        let r = expect("even-main", &params(q, EtaChoice::Pair), &[Status::Vacuous])?;
        if r.notes.is_empty() {
            return Err(format!("even q={q}: no range arithmetic reported"));
        }
        vac += 1;
    }
    for q in [3, 5, 7, 9, 11, 13, 17, 19, 23, 25] {
        let r = expect("odd-main", &params(q, EtaChoice::Pair), &[Status::Vacuous])?;
        if r.notes.is_empty() {
            return Err(format!("odd q={q}: no range arithmetic reported"));
        }
        vac += 1;
    }
    let p = VerifyParams { mode: Mode::Sampled, samples: 10_000, seed: 2024, ..params(32, EtaChoice::Pair) };
    let r = expect("even-main", &p, &[Status::SampledConsistent])?;
    let checked = count(&r, "syndromes_checked");
    if checked < 30_000 {
        return Err(format!("only {checked} samples"));
    }
    Ok(format!("{vac} fields vacuous; q=32 k∈{{25,26,27}}: {checked} non-family samples rejected, seed 2024"))
}

fn determinism(first: &Report) -> Outcome {
    let cfg = oracle_config();
    let a = first.to_json();
    let b = run_with_workers(&cfg, 1).map_err(|e| e.to_string())?.to_json();
    let c = run_with_workers(&cfg, 8).map_err(|e| e.to_string())?.to_json();
    if a != b {
        return Err("two runs with 1 worker differ".into());
    }
    if a != c {
        return Err("1 and 8 workers differ".into());
    }
    Ok(format!("{} bytes identical across runs and worker counts", a.len()))
}

fn main() {
    let mut failed = 0;
    let mut line = |n: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(d) => println!("criterion {n:>2} PASS  {name}: {d} ({secs:.1}s)"),
            Err(e) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {e} ({secs:.1}s)");
            }
        }
    };
    line(1, "covering radius", &mut covering_radius);
    line(2, "MDS subcode deep holes", &mut mds_subcodes);
    let mut oracle: Option<Report> = None;
    line(3, "criterion vs coset oracle", &mut || {
        let rep = run_with_workers(&oracle_config(), 1).map_err(|e| e.to_string())?;
        let out = criterion_oracle(&rep);
        oracle = Some(rep);
        out
    });
    line(4, "reconstruction", &mut reconstruction);
    line(5, "deep-hole families", &mut families);
    line(6, "split identities", &mut split_identities);
    line(7, "even small-k classification", &mut even_small_k);
    line(8, "character sums", &mut char_sums);
    line(9, "existence witnesses", &mut witnesses);
    line(10, "completeness ranges", &mut completeness);
    line(11, "determinism", &mut || match &oracle {
        Some(rep) => determinism(rep),
        None => Err("criterion 3 produced no report".into()),
    });
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
