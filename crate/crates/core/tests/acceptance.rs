//! One PASS/FAIL line per acceptance criterion. Lines are written straight to
//! stdout so they show without `--nocapture`.

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use wavelab::analysis::{self, Spectrum};
use wavelab::bump::{build_p, make_smooth_step, Grade};
use wavelab::classical::{self, reference_filters, Reference};
use wavelab::cli;
use wavelab::config::{BankChoice, RunConfig};
use wavelab::gmra::{self, example_bank, journe_bank, journe_multiplicity, GeneralizedFilterBank};
use wavelab::report::VerificationReport;
use wavelab::support::{q, Which};
use wavelab::util::linspace;

const SEED: u64 = 7;

struct Outcome {
    pass: bool,
    detail: String,
}

fn emit(id: u32, title: &str, o: &Outcome, took: Duration) {
    let line = format!(
        "criterion {id:>2} {} {title}: {} [{:.1}s]\n",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail,
        took.as_secs_f64()
    );
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}

fn all_pass(rs: &[VerificationReport]) -> bool {
    rs.iter().all(|r| r.pass)
}

fn worst(rs: &[VerificationReport]) -> String {
    rs.iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} {:.3e} (tol {:.1e})", r.check, r.max_residual, r.tolerance))
        .collect::<Vec<_>>()
        .join("; ")
}

fn example(r: u32) -> Arc<GeneralizedFilterBank> {
    let p = build_p(r, make_smooth_step(Grade::Infinite).unwrap()).unwrap();
    Arc::new(example_bank(Arc::new(p)).unwrap())
}

fn sevenths(n: usize, lo: f64, hi: f64, seed: u64) -> Vec<f64> {
    analysis::jittered_points(lo, hi, n, seed, 56.0, 1e-9)
}

fn symmetric(lo: f64, hi: f64, n: usize, seed: u64) -> Vec<f64> {
    analysis::jittered_points(lo, hi, n / 2, seed, 1.0, 0.0).into_iter().flat_map(|x| [x, -x]).collect()
}

fn exact_journe() -> Outcome {
    let t = Instant::now();
    let bank = journe_bank();
    let xs = gmra::rational_midpoints(&q(-1, 1), &q(1, 1), 10_000);
    let mut rs = gmra::check_gen_filter_eqs_exact(&bank, &xs).expect("exact bank");
    let ws = gmra::rational_midpoints(&q(-3, 1), &q(3, 1), 10_000);
    rs.push(gmra::check_journe_wavelet_set(&bank, &ws).expect("exact bank"));
    let took = t.elapsed().as_secs_f64();
    let zero = rs.iter().all(|r| r.max_residual == 0.0);
    Outcome {
        pass: zero && all_pass(&rs) && took < 5.0,
        detail: format!("{} exact reports, max residual {}, {took:.2}s < 5s", rs.len(), rs.iter().map(|r| r.max_residual).fold(0.0, f64::max)),
    }
}

fn qmf_bump() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for r in 0..=2 {
        let t = Instant::now();
        let v = match build_p(r, make_smooth_step(Grade::Infinite).unwrap()) {
            Ok(p) => p.validation.clone().expect("validated"),
            Err(e) => {
                pass = false;
                parts.push(format!("r={r}: {e}"));
                continue;
            }
        };
        let took = t.elapsed().as_secs_f64();
        let ok = v.pass && v.qmf_residual < 1e-10 && v.flat_zone_max == 0.0 && v.derivative_max < 1.0 && took < 10.0;
        pass &= ok;
        parts.push(format!(
            "r={r}: qmf {:.1e}, flat {}, |p^({})| {:.3}, {took:.1}s",
            v.qmf_residual,
            v.flat_zone_max,
            r + 2,
            v.derivative_max
        ));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn partial_supports(bank: &GeneralizedFilterBank) -> Outcome {
    let t = Instant::now();
    let mut rs = Vec::new();
    for n in 1..=3u32 {
        let r = 8f64.powi(n as i32);
        let xs = analysis::jittered_points(-r, r, 100_000, SEED + n as u64, 28.0, 1e-9);
        rs.extend(analysis::check_partial_supports(bank, n, &xs, 1e-12, 1e-15).unwrap());
    }
    let took = t.elapsed().as_secs_f64();
    let max = rs.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    Outcome {
        pass: all_pass(&rs) && took < 60.0,
        detail: format!("{} reports over 3x10^5 points, max residual {max:.1e}, {took:.1}s < 60s {}", rs.len(), worst(&rs)),
    }
}

fn multiplicity_recovery(bank: &Arc<GeneralizedFilterBank>) -> Outcome {
    let t = Instant::now();
    let psi = analysis::psi_spectrum(bank);
    let xs = sevenths(1000, -0.5, 0.5, SEED + 5);
    let m = journe_multiplicity();
    let [d, _] = analysis::check_dimension_multiplicity(&psi, &m, &xs, 0.05, 1e-6);
    let took = t.elapsed().as_secs_f64();
    Outcome {
        pass: d.pass && took < 600.0,
        detail: format!(
            "max |D - m| {:.4} (tol 0.05) at x = {:.4}, {took:.1}s",
            d.max_residual,
            d.worst_points.first().map_or(f64::NAN, |p| p[0])
        ),
    }
}

fn parseval(journe: &Arc<GeneralizedFilterBank>, ex: &Arc<GeneralizedFilterBank>) -> Outcome {
    let t = Instant::now();
    let spectra: Vec<Spectrum> = vec![
        analysis::classical_psi_spectrum(&reference_filters(Reference::Haar), Reference::Haar),
        analysis::classical_psi_spectrum(&reference_filters(Reference::Shannon), Reference::Shannon),
        analysis::psi_spectrum(journe),
        analysis::psi_spectrum(ex),
    ];
    let mut rs = Vec::new();
    for psi in &spectra {
        let xs = analysis::jittered_points(-4.0, 4.0, 256, SEED, 448.0, 1e-3);
        rs.push(analysis::check_calderon(psi, &xs, 1e-6, 1e-9));
        let xs = analysis::jittered_points(-4.0, 4.0, 128, SEED + 1, 448.0, 1e-3);
        rs.push(analysis::check_shift(psi, &xs, &[-5, -3, -1, 1, 3, 5], 1e-6, 1e-9));
    }
    let took = t.elapsed().as_secs_f64();
    let max = rs.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    Outcome {
        pass: all_pass(&rs) && took < 300.0,
        detail: format!("Haar, Shannon, Journe, example: max residual {max:.2e} (tol 1e-6), {took:.1}s {}", worst(&rs)),
    }
}

fn decay() -> Outcome {
    let t = Instant::now();
    let mut pass = true;
    let mut slack: f64 = 0.0;
    let mut notes = Vec::new();
    for r in 0..=2 {
        let bank = example(r);
        for which in [Which::Phi1, Which::Phi2] {
            let mut prev = f64::INFINITY;
            for n in 1..=6 {
                let d = analysis::decay_profile(&bank, which, r, n, 64, SEED).unwrap();
                if d.measured > d.bound {
                    pass = false;
                    notes.push(format!("r={r} {which:?} n={n}: {:.3e} > {:.3e}", d.measured, d.bound));
                }
                if n >= 3 && !(d.measured < prev) {
                    pass = false;
                    notes.push(format!("r={r} {which:?} n={n}: not decreasing"));
                }
                slack = slack.max(d.measured / d.bound);
                prev = d.measured;
            }
        }
    }
    let took = t.elapsed().as_secs_f64();
    pass &= took < 300.0;
    Outcome { pass, detail: format!("largest measured/bound {slack:.2e}, {took:.1}s {}", notes.join("; ")) }
}

fn cohen() -> Outcome {
    let pair = reference_filters(Reference::Cohen);
    let max = linspace(-8.0, 8.0, 1024)
        .into_iter()
        .map(|x| (classical::cascade_scaling(&pair, x).unwrap() - classical::cohen_phi_closed(x)).norm())
        .fold(0.0, f64::max);
    Outcome { pass: max < 1e-8, detail: format!("max |cascade - closed form| {max:.2e} (tol 1e-8)") }
}

fn non_frame_translates(bank: &Arc<GeneralizedFilterBank>) -> Outcome {
    let psi = analysis::psi_spectrum(bank);
    let small = symmetric(4.0 / 7.0 + 1e-3, 6.0 / 7.0 - 1e-3, 200, SEED + 9);
    let a = analysis::check_per_small("per_psi_vanishes", &psi, &small, 1e-6, 1e-9);
    let big = symmetric(2.0 / 7.0 + 0.03, 4.0 / 7.0 - 0.03, 10, SEED + 10);
    let b = analysis::check_per_positive("per_psi_positive", &psi, &big, 1e-3, 1e-9);
    let mut rs = vec![a, b];
    for (i, w) in [Which::Phi1, Which::Phi2].into_iter().enumerate() {
        let f = analysis::phi_spectrum(bank, w);
        let set = bank.m.level_set(i as u32 + 1);
        let pts: Vec<f64> = linspace(-0.5, 0.5, 4001).into_iter().filter(|&x| set.contains(x)).collect();
        rs.push(analysis::check_per_dips(&format!("per_phi{}_dips", i + 1), &f, &pts, 1e-4, 1e-9));
    }
    Outcome {
        pass: all_pass(&rs),
        detail: rs
            .iter()
            .map(|r| format!("{} {} {:.2e}", r.check, if r.pass { "ok" } else { "fails" }, r.max_residual))
            .collect::<Vec<_>>()
            .join("; "),
    }
}

fn proof_identities(bank: &Arc<GeneralizedFilterBank>) -> Outcome {
    let xs = sevenths(1000, -4.0, 4.0, SEED + 11);
    let mut g = wavelab::util::rng(SEED + 12);
    let mut rs = Vec::new();
    for _ in 0..20 {
        let f1 = analysis::TrigPoly::random(8, &mut g);
        let f2 = analysis::TrigPoly::random(8, &mut g);
        rs.push(analysis::check_intertwining(bank, &f1, &f2, &xs, 1e-10));
    }
    let inter = rs.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let xs = sevenths(256, -4.0, 4.0, SEED + 13);
    let sg: Vec<VerificationReport> = [-3, 0, 1].into_iter().map(|k| analysis::check_sg_base(bank, k, &xs, 1e-12, false)).collect();
    let sgmax = sg.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    Outcome {
        pass: all_pass(&rs) && all_pass(&sg),
        detail: format!("intertwining {inter:.1e} (tol 1e-10), base case {sgmax:.1e} (tol 1e-12)"),
    }
}

fn realness(bank: &Arc<GeneralizedFilterBank>) -> Outcome {
    let psi = analysis::psi_spectrum(bank);
    let xs = analysis::jittered_points(-4.0, 4.0, 256, SEED + 2, 1.0, 0.0);
    let h = analysis::check_hermitian(&psi, &xs, 1e-12);
    let (cut, _) = analysis::required_cutoff(&psi.model, 1e-8).unwrap();
    let ts = linspace(-64.0, 64.0, 2049);
    let td = analysis::time_domain_samples(&psi, &ts, cut, 1e-8, 1.0 / 28.0).unwrap();
    Outcome {
        pass: h.pass && td.im_residual < 1e-6,
        detail: format!("hermitian {:.1e} (tol 1e-12), max |Im psi(t)| {:.1e} (tol 1e-6)", h.max_residual, td.im_residual),
    }
}

fn determinism() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let cfg = RunConfig { bank: BankChoice::Example, out: d.path().to_path_buf(), ..Default::default() };
        cli::cmd_verify(&cfg).unwrap();
    }
    let list = |p: &std::path::Path| {
        let mut v: Vec<_> = walk(p).into_iter().map(|f| f.strip_prefix(p).unwrap().to_path_buf()).collect();
        v.sort();
        v
    };
    let (a, b) = (list(dirs[0].path()), list(dirs[1].path()));
    let same_files = a == b;
    let differing: Vec<String> = a
        .iter()
        .filter(|f| std::fs::read(dirs[0].path().join(f)).ok() != std::fs::read(dirs[1].path().join(f)).ok())
        .map(|f| f.display().to_string())
        .collect();
    Outcome {
        pass: same_files && differing.is_empty() && !a.is_empty(),
        detail: format!("{} files compared, {} differ {}", a.len(), differing.len(), differing.join(", ")),
    }
}

fn walk(p: &std::path::Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(p).unwrap() {
        let path = e.unwrap().path();
        if path.is_dir() {
            out.extend(walk(&path));
        } else {
            out.push(path);
        }
    }
    out
}

#[test]
fn acceptance_criteria() {
    let journe = Arc::new(journe_bank());
    let ex = example(1);
    let criteria: Vec<(u32, &str, Box<dyn Fn() -> Outcome>)> = vec![
        (1, "exact Journe identities and wavelet set", Box::new(exact_journe)),
        (2, "QMF bump for r = 0, 1, 2", Box::new(qmf_bump)),
        (3, "partial-product supports n = 1..3", Box::new({
            let ex = ex.clone();
            move || partial_supports(&ex)
        })),
        (4, "dimension function recovers m", Box::new({
            let ex = ex.clone();
            move || multiplicity_recovery(&ex)
        })),
        (5, "Calderon and shift sums", Box::new({
            let (j, ex) = (journe.clone(), ex.clone());
            move || parseval(&j, &ex)
        })),
        (6, "decay against the generation bound", Box::new(decay)),
        (7, "Cohen cascade oracle", Box::new(cohen)),
        (8, "periodizations of psi and phi_i", Box::new({
            let ex = ex.clone();
            move || non_frame_translates(&ex)
        })),
        (9, "intertwining and base-case identities", Box::new({
            let ex = ex.clone();
            move || proof_identities(&ex)
        })),
        (10, "realness and symmetry", Box::new({
            let ex = ex.clone();
            move || realness(&ex)
        })),
        (11, "byte-identical verify runs", Box::new(determinism)),
    ];
    let mut failed = Vec::new();
    for (id, title, f) in &criteria {
        let t = Instant::now();
        let o = f();
        emit(*id, title, &o, t.elapsed());
        if !o.pass {
            failed.push(*id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
