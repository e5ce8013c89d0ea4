//! Acceptance suite. Prints one line per criterion and exits nonzero when any
//! of them fails.

use std::f64::consts::TAU;
use std::time::Instant;

use quadstab::sweep::{steady_sweep, three_mode_sweep};
use quadstab_core::dynamics::{occupation_series, propagate, uniform_times, GaussianState};
use quadstab_core::expm::expm;
use quadstab_core::normal_forms::{build_normal_form, geometric_split, JordanType, JordanTypeSpec};
use quadstab_core::optomech2::{
    build_two_mode, classify_two_mode, closed_form_diagonalization, stability_condition, two_mode_verdict, CaseLabel,
    TwoModeParams,
};
use quadstab_core::optomech3::{
    build_three_mode, cubic_classify, reduce_equal_detuning, Reduction, StabilityGrid, ThreeModeParams,
};
use quadstab_core::quadform::{build_symplectic_form, check_symplectic, congruence_transform};
use quadstab_core::spectral::{
    boundedness_oracle, classify_spectrum, is_dynamically_stable, max_real_part, min_distance_to_imaginary_axis,
    Boundedness, ModeKind,
};
use quadstab_core::{Complex64, Matrix, QuadraticModel, SymplecticMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const OMEGA: f64 = 1.0;
const BAND: f64 = 1e-6 * OMEGA;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()
}

// Critical couplings, written out independently of the library.
fn kr_ref(d: f64) -> f64 {
    (OMEGA * d.abs() / 4.0).sqrt()
}

fn kb_ref(d: f64) -> f64 {
    ((d * d - OMEGA * OMEGA).powi(2) / (16.0 * OMEGA * d.abs())).sqrt()
}

/// Expected table row for a point away from every boundary.
fn table_row(d: f64, k: f64) -> (char, [ModeKind; 2], bool) {
    use ModeKind::*;
    if d > 0.0 {
        if k < kr_ref(d) {
            ('a', [Circular, Circular], true)
        } else {
            ('c', [Circular, Hyperbolic], false)
        }
    } else if k < kb_ref(d) {
        ('e', [Circular, Circular], true)
    } else {
        ('g', [Hyperbolic, Hyperbolic], false)
    }
}

fn off_band(d: f64, k: f64) -> bool {
    if d.abs() <= BAND {
        return false;
    }
    let crit = if d > 0.0 { kr_ref(d) } else { kb_ref(d) };
    // decoupled oscillators at equal frequencies sit on the boundary of the strict inequalities
    (k - crit).abs() > BAND && !((d.abs() - OMEGA).abs() <= BAND && k <= BAND)
}

fn sorted(mut k: Vec<ModeKind>) -> Vec<ModeKind> {
    k.sort();
    k
}

fn two_mode_grid() -> (Outcome, Outcome) {
    let deltas = linspace(-3.0, 3.0, 301);
    let kappas = linspace(0.0, 2.0, 201);
    let start = Instant::now();
    let mut rows = Vec::with_capacity(deltas.len() * kappas.len());
    for &d in &deltas {
        for &k in &kappas {
            let p = TwoModeParams::new(d, OMEGA, Complex64::new(k, 0.0)).unwrap();
            let case = classify_two_mode(&p).unwrap();
            let verdict = two_mode_verdict(&p).unwrap();
            rows.push((d, k, case, verdict, stability_condition(&p)));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();

    let (mut checked, mut bad1, mut bad2) = (0usize, 0usize, 0usize);
    let mut first_bad = None;
    for (d, k, case, verdict, cond) in &rows {
        // internal consistency holds everywhere, bands included
        let internal = case.mode_kinds == case.label.mode_kinds() && case.stable == case.label.is_stable();
        if !internal {
            bad1 += 1;
            first_bad.get_or_insert((*d, *k));
            continue;
        }
        if !off_band(*d, *k) {
            continue;
        }
        checked += 1;
        let (label, kinds, stable) = table_row(*d, *k);
        let ok = case.label.as_char() == label
            && case.mode_kinds == kinds
            && case.stable == stable
            && verdict.stable == stable
            && sorted(verdict.mode_kinds.clone()) == sorted(kinds.to_vec());
        if !ok {
            bad1 += 1;
            first_bad.get_or_insert((*d, *k));
        }
        if *cond != verdict.stable {
            bad2 += 1;
        }
    }
    let c1 = outcome(
        bad1 == 0 && elapsed < 30.0,
        format!(
            "{} points ({} off-band), {} disagreements{}, {:.2} s single-threaded",
            rows.len(),
            checked,
            bad1,
            first_bad.map(|(d, k)| format!(" (first at delta={d}, kappa={k})")).unwrap_or_default(),
            elapsed
        ),
    );
    let c2 = outcome(bad2 == 0, format!("stability condition vs spectral verdict: {bad2} of {checked} off-band points differ"));
    (c1, c2)
}

fn fit_slope(ts: &[f64], ys: &[f64]) -> f64 {
    let n = ts.len() as f64;
    let mt = ts.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = ts.iter().zip(ys).map(|(t, y)| (t - mt) * (y - my)).sum();
    let sxx: f64 = ts.iter().map(|t| (t - mt) * (t - mt)).sum();
    sxy / sxx
}

fn trajectories() -> Outcome {
    let times = uniform_times(50.0, 5000);
    let vac = GaussianState::vacuum(2);

    let p = TwoModeParams::new(1.5, OMEGA, Complex64::new(0.9, 0.0)).unwrap();
    let m = build_two_mode(&p).unwrap();
    let rate = 2.0 * max_real_part(m.eom().unwrap().a()).unwrap();
    let series = occupation_series(&m, &times, &vac).unwrap();
    let window: Vec<usize> = (0..times.len()).filter(|&i| times[i] >= 25.0).collect();
    let ts: Vec<f64> = window.iter().map(|&i| times[i]).collect();
    let mut worst: f64 = 0.0;
    let mut fits = Vec::new();
    for j in 0..2 {
        let n = series.mode(j);
        let logs: Vec<f64> = window.iter().map(|&i| n[i].ln()).collect();
        let s = fit_slope(&ts, &logs);
        worst = worst.max((s / rate - 1.0).abs());
        fits.push(s);
    }

    let p = TwoModeParams::new(-1.5, OMEGA, Complex64::new(0.2, 0.0)).unwrap();
    let series = occupation_series(&build_two_mode(&p).unwrap(), &times, &vac).unwrap();
    let overall = series.max();
    let first_period = (0..times.len())
        .filter(|&i| times[i] <= TAU / OMEGA)
        .flat_map(|i| series.rows[i].iter().copied())
        .fold(0.0, f64::max);
    let ratio = overall / first_period;

    outcome(
        worst <= 0.05 && ratio < 10.0,
        format!(
            "red unstable: fitted rates {:.5}, {:.5} vs 2 max Re = {:.5} (worst rel. error {:.2e}); blue stable: max n / first-period max = {:.3}",
            fits[0], fits[1], rate, worst, ratio
        ),
    )
}

fn draw_two_mode(rng: &mut ChaCha8Rng, label: CaseLabel) -> TwoModeParams {
    let phase = rng.gen_range(0.0..TAU);
    let (d, k) = match label {
        CaseLabel::A => {
            let d = rng.gen_range(0.05..3.0);
            (d, kr_ref(d) * rng.gen_range(0.02..0.98))
        }
        CaseLabel::B => {
            let d = rng.gen_range(0.05..3.0);
            (d, kr_ref(d))
        }
        CaseLabel::C => {
            let d = rng.gen_range(0.05..3.0);
            (d, kr_ref(d) * rng.gen_range(1.02..2.5))
        }
        CaseLabel::D => (0.0, rng.gen_range(0.05..2.0)),
        _ => {
            let d = loop {
                let d = rng.gen_range(-3.0..-0.05);
                if (d + OMEGA).abs() > 0.05 {
                    break d;
                }
            };
            let kb = kb_ref(d);
            let k = match label {
                CaseLabel::E => kb * rng.gen_range(0.02..0.98),
                CaseLabel::F => kb,
                _ => kb * rng.gen_range(1.02..2.5),
            };
            (d, k)
        }
    };
    TwoModeParams::new(d, OMEGA, Complex64::from_polar(k, phase)).unwrap()
}

fn closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for label in CaseLabel::ALL {
        let (mut printed_fail, mut max_sym, mut max_form) = (0usize, 0.0f64, 0.0f64);
        let (mut worst_s, mut worst_w, mut worst_f) = (0.0f64, 0.0f64, 0.0f64);
        let mut wrong_label = 0;
        for _ in 0..50 {
            let p = draw_two_mode(&mut rng, label);
            let cf = closed_form_diagonalization(&p).unwrap();
            if cf.label != label {
                wrong_label += 1;
                continue;
            }
            if cf.discrepancy().is_some() {
                printed_fail += 1;
                max_sym = max_sym.max(cf.printed.symplectic_residual);
                max_form = max_form.max(cf.printed.form_residual);
            }
            let model = build_two_mode(&p).unwrap();
            worst_s = worst_s.max(check_symplectic(cf.s.matrix()).unwrap().residual);
            let w = congruence_transform(&model, &cf.s).unwrap();
            worst_w = worst_w.max((w.v() - &cf.target()).norm_fro() / model.v().norm_fro());
            let classes = classify_spectrum(&model.eom().unwrap()).unwrap();
            for z in &cf.frequencies {
                let folded = Complex64::new(z.re.abs(), z.im.abs());
                let d = classes.iter().map(|c| (c.value - folded).norm()).fold(f64::INFINITY, f64::min);
                worst_f = worst_f.max(d / folded.norm().max(OMEGA));
            }
        }
        if wrong_label > 0 || worst_s > 1e-8 || worst_w > 1e-7 || worst_f > 1e-9 {
            failures.push(format!(
                "({label}) labels off {wrong_label}, symplectic {worst_s:.1e}, form {worst_w:.1e}, freq {worst_f:.1e}"
            ));
        }
        if printed_fail > 0 {
            notes.push(format!(
                "({label}) printed S failed {printed_fail}/50 (max symplectic residual {max_sym:.2e}, form residual {max_form:.2e}), fallback used"
            ));
        }
    }
    let detail = if failures.is_empty() {
        format!("7 cases x 50 draws validated; {}", if notes.is_empty() { "no printed failures".into() } else { notes.join("; ") })
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn three_mode_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let (mut drawn, mut checked, mut bad) = (0, 0, 0);
    while drawn < 500 {
        let d = rng.gen_range(-3.0..3.0);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let k1 = Complex64::from_polar(rng.gen_range(0.0..1.5), rng.gen_range(0.0..TAU));
        let k2 = Complex64::from_polar(rng.gen_range(0.0..1.5), rng.gen_range(0.0..TAU));
        if sign < 0.0 && (k1.norm() - k2.norm()).abs() <= BAND {
            continue;
        }
        drawn += 1;
        let p = ThreeModeParams::new(d, sign * d, OMEGA, k1, k2).unwrap();
        let r = match reduce_equal_detuning(&p).unwrap() {
            Reduction::Reduced(r) => r,
            Reduction::Degenerate(_) => {
                bad += 1;
                continue;
            }
        };
        if !off_band(r.block.delta, r.kappa_s) || r.spectator_frequency.abs() <= BAND {
            continue;
        }
        checked += 1;
        let cubic = cubic_classify(&p).unwrap();
        let spectral = is_dynamically_stable(&build_three_mode(&p).unwrap().eom().unwrap()).unwrap().stable;
        if r.stable != cubic.stable || r.stable != spectral {
            bad += 1;
        }
    }

    let fig_a = ThreeModeParams::real(1.5, 1.5, OMEGA, 1.0, 0.6).unwrap();
    let fig_b = ThreeModeParams::real(1.5, -1.5, OMEGA, 0.15, 0.25).unwrap();
    let verdict = |p: &ThreeModeParams| match reduce_equal_detuning(p).unwrap() {
        Reduction::Reduced(r) => Some((r.stable, r.case.label.as_char())),
        Reduction::Degenerate(_) => None,
    };
    let a = verdict(&fig_a);
    let b = verdict(&fig_b);
    let spectral = |p: &ThreeModeParams| is_dynamically_stable(&build_three_mode(p).unwrap().eom().unwrap()).unwrap().stable;
    let figs = a == Some((false, 'c')) && b == Some((true, 'e')) && !spectral(&fig_a) && spectral(&fig_b);
    outcome(
        bad == 0 && figs,
        format!(
            "{bad} disagreements among {checked} off-band of {drawn} draws; equal detunings 1.5/1.5 -> {:?}, opposite 1.5/-1.5 -> {:?}",
            a, b
        ),
    )
}

fn cubic_roots() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let (mut worst, mut bad_count, mut bad_verdict) = (0.0f64, 0, 0);
    let mut cases = [0usize; 8];
    for _ in 0..500 {
        let p = ThreeModeParams::new(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            OMEGA,
            Complex64::from_polar(rng.gen_range(0.0..1.2), rng.gen_range(0.0..TAU)),
            Complex64::from_polar(rng.gen_range(0.0..1.2), rng.gen_range(0.0..TAU)),
        )
        .unwrap();
        let c = cubic_classify(&p).unwrap();
        worst = worst.max(c.eigen_mismatch);
        cases[usize::from(c.case_id) - 1] += 1;
        if c.hyperbolic_pairs() != c.spectral_unbounded {
            bad_count += 1;
        }
        if c.stable != c.spectral_stable {
            bad_verdict += 1;
        }
    }
    outcome(
        worst <= 1e-8 && bad_count == 0 && bad_verdict == 0,
        format!(
            "500 draws: worst root mismatch {worst:.2e}, {bad_count} case/hyperbolic-count mismatches, {bad_verdict} verdict mismatches, cases hit {cases:?}"
        ),
    )
}

/// Number of crossings along a ray from the origin, sampled finely.
fn radial_crossings(d1: f64, d2: f64, angle: f64) -> usize {
    let rs = linspace(0.0, std::f64::consts::SQRT_2, 600);
    let mut last = None;
    let mut changes = 0;
    for r in rs {
        let (k1, k2) = (r * angle.cos(), r * angle.sin());
        if k1 > 1.0 || k2 > 1.0 {
            break;
        }
        let p = ThreeModeParams::real(d1, d2, OMEGA, k1, k2).unwrap();
        let s = cubic_classify(&p).unwrap().stable;
        if last.is_some_and(|l| l != s) {
            changes += 1;
        }
        last = Some(s);
    }
    changes
}

fn stability_maps() -> Outcome {
    let axis = linspace(0.0, 1.0, 101);
    let configs = [("a", 1.5, 0.5), ("b", -1.5, -0.5), ("c", -1.5, 0.5)];
    let mut pass = true;
    let mut parts = Vec::new();
    let mut grids: Vec<StabilityGrid> = Vec::new();
    for (name, d1, d2) in configs {
        let grid = three_mode_sweep(d1, d2, OMEGA, &axis, &axis, 0).unwrap();
        let changes = grid.column_sign_changes();
        let multi: Vec<usize> = (0..changes.len()).filter(|&i| changes[i] >= 2).collect();
        let none = changes.iter().filter(|&&c| c == 0).count();
        let contains_origin = grid.stable_at(0, 0);
        let rays: Vec<usize> = linspace(0.01, std::f64::consts::FRAC_PI_2 - 0.01, 45)
            .into_iter()
            .map(|a| radial_crossings(d1, d2, a))
            .collect();
        let radial_simple = rays.iter().all(|&c| c <= 1);
        let ok = multi.is_empty() && contains_origin;
        pass &= ok;
        let span = match (multi.first(), multi.last()) {
            (Some(&a), Some(&b)) => format!(", multi-change columns at k1 in [{:.2}, {:.2}]", axis[a], axis[b]),
            _ => String::new(),
        };
        parts.push(format!(
            "({name}) {} stable points, {} component(s), {} columns with >=2 changes{span}, {} without an interface, rays with <=1 crossing: {}",
            grid.stable_count(),
            grid.stable_components(),
            multi.len(),
            none,
            if radial_simple { "all" } else { "not all" }
        ));
        grids.push(grid);
    }
    let c = &grids[2];
    // mode 1 is blue-detuned in (c)
    let blue_dominant = (0..c.k1.len())
        .flat_map(|i| (0..c.k2.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| c.stable_at(i, j) && c.k1[i] > c.k2[j])
        .count();
    pass &= blue_dominant > 0;
    parts.push(format!("(c) stable points with |kappa_blue| > |kappa_red|: {blue_dominant}"));
    outcome(pass, parts.join("; "))
}

fn symmetric(n: usize, rng: &mut ChaCha8Rng, scale: f64) -> Matrix {
    let m = 2 * n;
    let mut v = Matrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let x = rng.gen_range(-scale..scale);
            v[(i, j)] = x;
            v[(j, i)] = x;
        }
    }
    v
}

fn random_symplectic(n: usize, rng: &mut ChaCha8Rng) -> SymplecticMatrix {
    let j = build_symplectic_form(n).unwrap();
    let s = expm(&(&j * &symmetric(n, rng, 0.3))).unwrap();
    SymplecticMatrix::new(s).unwrap()
}

fn random_normal_form(rng: &mut ChaCha8Rng) -> QuadraticModel {
    let options: [(JordanType, usize); 11] = [
        (JordanType::I, 1),
        (JordanType::I, 2),
        (JordanType::I, 3),
        (JordanType::II, 1),
        (JordanType::III, 1),
        (JordanType::III, 3),
        (JordanType::IV, 2),
        (JordanType::V, 1),
        (JordanType::V, 3),
        (JordanType::VI, 2),
        (JordanType::VI, 4),
    ];
    let (t, d) = options[rng.gen_range(0..options.len())];
    let lambda = match t {
        JordanType::II => Complex64::new(rng.gen_range(0.2..1.5), rng.gen_range(0.2..1.5)),
        JordanType::V | JordanType::VI => Complex64::new(0.0, 0.0),
        _ => Complex64::new(rng.gen_range(0.2..1.5), 0.0),
    };
    let sigma = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    build_normal_form(&JordanTypeSpec::new(t, d, lambda, sigma).unwrap()).unwrap()
}

fn random_model(k: usize, rng: &mut ChaCha8Rng) -> QuadraticModel {
    let n = rng.gen_range(1..=3);
    match k % 4 {
        0 => QuadraticModel::new(n, symmetric(n, rng, 2.0)).unwrap(),
        1 => {
            let b = symmetric(n, rng, 1.0);
            QuadraticModel::new(n, (&(&b.transpose() * &b) + &Matrix::identity(2 * n).scale(0.05)).symmetrized()).unwrap()
        }
        2 => {
            let m = random_normal_form(rng);
            let s = random_symplectic(m.n_modes(), rng);
            congruence_transform(&m, &s).unwrap()
        }
        _ => {
            let mut diag = vec![0.0; 2 * n];
            for i in 0..n {
                let a = rng.gen_range(0.2..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                let b = rng.gen_range(0.2..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                // occasionally a free particle
                let a = if rng.gen_bool(0.15) { 0.0 } else { a };
                diag[i] = a;
                diag[n + i] = b;
            }
            let m = QuadraticModel::new(n, Matrix::from_diag(&diag)).unwrap();
            let s = random_symplectic(n, rng);
            congruence_transform(&m, &s).unwrap()
        }
    }
}

fn oracle_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let (mut stable, mut literal_bad, mut strict_bad, mut zero_modes) = (0, 0, 0, 0);
    let mut models = Vec::with_capacity(1000);
    for k in 0..1000 {
        let m = random_model(k, &mut rng);
        let eom = m.eom().unwrap();
        let a_norm = eom.a().norm_2();
        let verdict = is_dynamically_stable(&eom).unwrap();
        let report = boundedness_oracle(&eom, 1e7 / a_norm.max(1e-12), 64).unwrap();
        let bounded = report.verdict == Boundedness::Bounded;
        if verdict.stable {
            stable += 1;
        }
        if verdict.stable != bounded {
            strict_bad += 1;
            if verdict.mode_kinds.contains(&ModeKind::ZeroMode) {
                zero_modes += 1;
            }
            // same scale floor as the eigenvalue classifier, so A = 0 is not exempt by 0 < 0
            let dist = min_distance_to_imaginary_axis(eom.a()).unwrap();
            if dist >= 1e-7 * a_norm.max(1.0) {
                literal_bad += 1;
            }
        }
        models.push(m);
    }

    let mut worst: f64 = f64::INFINITY;
    for (idx, m) in models.iter().step_by(10).enumerate() {
        let eom = m.eom().unwrap();
        let n = m.n_modes();
        let s = random_symplectic(n, &mut rng);
        // squeezed states, pure for even idx and thermal otherwise, with a displaced mean
        let nu: Vec<f64> = (0..n).map(|_| if idx % 2 == 0 { 1.0 } else { rng.gen_range(1.0..3.0) }).collect();
        let mut d = vec![0.0; 2 * n];
        for i in 0..n {
            d[i] = nu[i] / 2.0;
            d[n + i] = nu[i] / 2.0;
        }
        let cov = (&(s.matrix() * &Matrix::from_diag(&d)) * &s.matrix().transpose()).symmetrized();
        let mean: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let state = GaussianState { mean, covariance: cov };
        worst = worst.min(state.uncertainty_min_eig());
        let t_max = 3.0 / eom.a().norm_2().max(1e-3);
        for t in linspace(0.0, t_max, 20) {
            let st = propagate(&state, &eom, t).unwrap();
            worst = worst.min(st.uncertainty_min_eig());
        }
    }
    outcome(
        literal_bad == 0 && worst >= -1e-9,
        format!(
            "1000 models ({stable} stable): {literal_bad} disagreements outside the exemption, {strict_bad} overall ({zero_modes} with a semisimple zero eigenvalue, counted unstable by convention); 100 trajectories min eig(sigma + iJ/2) = {worst:.3e}"
        ),
    )
}

fn normal_form_suite() -> Outcome {
    let mut failures = Vec::new();
    let (mut checked, mut stable_forms) = (0, Vec::new());
    for t in JordanType::ALL {
        for d in 1..=6 {
            if !t.accepts_chain(d) {
                continue;
            }
            let lambda = match t {
                JordanType::II => Complex64::new(0.6, 0.8),
                JordanType::V | JordanType::VI => Complex64::new(0.0, 0.0),
                _ => Complex64::new(0.7, 0.0),
            };
            let sigmas: &[f64] = if t.uses_sigma() { &[1.0, -1.0] } else { &[1.0] };
            for &sigma in sigmas {
                checked += 1;
                let spec = JordanTypeSpec::new(t, d, lambda, sigma).unwrap();
                match geometric_split(&spec) {
                    Ok(split) => {
                        let r = split.residuals;
                        if r.symplectic > 1e-8 || r.spectrum > 1e-9 {
                            failures.push(format!("{t} D={d}: {r:?}"));
                        }
                        let model = build_normal_form(&spec).unwrap();
                        let verdict = is_dynamically_stable(&model.eom().unwrap()).unwrap();
                        let geometric_stable = split.mode_kinds.iter().all(|k| *k == ModeKind::Circular);
                        if verdict.stable != geometric_stable {
                            failures.push(format!("{t} D={d}: spectral and geometric verdicts differ"));
                        }
                        if verdict.stable {
                            stable_forms.push(format!("{t} D={d} sigma={sigma}"));
                        }
                    }
                    Err(e) => failures.push(format!("{t} D={d}: {e}")),
                }
            }
        }
    }
    let unique = stable_forms.iter().all(|s| s.starts_with("III D=1 ")) && stable_forms.len() == 2;
    outcome(
        failures.is_empty() && unique,
        format!(
            "{checked} normal forms split; {} failures{}; stable: {}",
            failures.len(),
            failures.first().map(|f| format!(" ({f})")).unwrap_or_default(),
            stable_forms.join(", ")
        ),
    )
}

fn multistability() -> Outcome {
    let dps = linspace(-3.0, 3.0, 121);
    let gs = linspace(0.0, 1.5, 61);
    let rows = steady_sweep(&dps, &gs, OMEGA, 0).unwrap();
    let red = rows.iter().filter(|r| r.stable_red).count();
    let blue = rows.iter().filter(|r| r.stable_blue).count();
    let both = rows.iter().filter(|r| r.stable_red && r.stable_blue).count();
    let multi = rows.iter().filter(|r| r.stable_branches >= 2).count();
    outcome(
        red > 0 && blue > 0 && both > 0 && multi > 0,
        format!(
            "{} grid points: red-stable {red}, blue-stable {blue}, overlap {both}, points with >=2 stable branches {multi}",
            rows.len()
        ),
    )
}

fn main() {
    let (c1, c2) = two_mode_grid();
    let results = [
        c1,
        c2,
        trajectories(),
        closed_forms(),
        three_mode_reduction(),
        cubic_roots(),
        stability_maps(),
        oracle_agreement(),
        normal_form_suite(),
        multistability(),
    ];
    let mut failed = 0;
    for (i, r) in results.iter().enumerate() {
        println!("criterion {:>2} {}: {}", i + 1, if r.pass { "PASS" } else { "FAIL" }, r.detail);
        failed += usize::from(!r.pass);
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
