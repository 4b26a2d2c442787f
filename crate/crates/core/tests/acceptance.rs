//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.
#![allow(clippy::approx_constant)] // frozen reference values

use std::f64::consts::FRAC_1_SQRT_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use biqo_core::{
    accessible_info_oracle, binary_entropy, binomial_se, c1_closed, c_inf_closed, cloning_oracle,
    d_at_max_info, disturbance_curve, global_fidelity_closed, golden_section_max, helstrom_error,
    helstrom_error_closed, holevo_prior_oracle, local_fidelity_closed, make_ensemble, probe_oracle,
    quantumness_q, simulate_b92, CloneObjective, EavesdropConfig,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(id: usize, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let pass = out.pass && in_time;
    println!(
        "[{}] criterion {id}: {name} | {} | {:.3}s (budget {:.3}s)",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        budget.as_secs_f64(),
    );
    pass
}

fn criterion_1() -> Outcome {
    let q = quantumness_q(FRAC_1_SQRT_2);
    Outcome {
        pass: (0.2012..=0.2022).contains(&q),
        detail: format!("Q(1/sqrt2) = {q:.6}, want [0.2012, 0.2022]"),
    }
}

fn criterion_2() -> Outcome {
    let pe = helstrom_error(&make_ensemble(FRAC_1_SQRT_2).unwrap());
    let dmi = d_at_max_info(FRAC_1_SQRT_2);
    Outcome {
        pass: (pe - 0.146447).abs() <= 1e-5 && (dmi - 0.066987).abs() <= 1e-5,
        detail: format!("P_e = {pe:.6} (0.146447), D@MI = {dmi:.6} (0.066987), tol 1e-5"),
    }
}

fn criterion_3() -> Outcome {
    let search = |f: &dyn Fn(f64) -> f64| golden_section_max(f, 0.01, 0.99, 1e-7).unwrap().argmax;
    let q = search(&quantumness_q);
    let dmi = search(&d_at_max_info);
    let fg = search(&|x| 1.0 - global_fidelity_closed(x));
    let fl = search(&|x| 1.0 - local_fidelity_closed(x));
    let pass = (q - 0.70711).abs() <= 1e-3
        && (dmi - 0.70711).abs() <= 1e-3
        && (fg - 0.57735).abs() <= 2e-3
        && (fl - 0.5).abs() <= 2e-3;
    Outcome {
        pass,
        detail: format!("argmax Q = {q:.5}, D@MI = {dmi:.5}, 1-F_g = {fg:.5}, 1-F_l = {fl:.5}"),
    }
}

fn criterion_4() -> Outcome {
    const TOL: f64 = 1e-10;
    let mut worst = [0.0f64; 4];
    for k in 1..=999 {
        let x = k as f64 / 1000.0;
        let pe = helstrom_error_closed(x);
        let devs = [
            (c1_closed(x) - (1.0 - binary_entropy(pe).unwrap())).abs(),
            (c_inf_closed(x) - binary_entropy((1.0 + x) / 2.0).unwrap()).abs(),
            disturbance_curve(x, 0.5).unwrap().abs(),
            (disturbance_curve(x, pe).unwrap() - d_at_max_info(x)).abs(),
        ];
        for (w, d) in worst.iter_mut().zip(devs) {
            *w = w.max(d);
        }
    }
    let endpoints = [
        quantumness_q(0.0).abs(),
        quantumness_q(1.0).abs(),
        (global_fidelity_closed(0.0) - 1.0).abs(),
        (global_fidelity_closed(1.0) - 1.0).abs(),
        (local_fidelity_closed(0.0) - 1.0).abs(),
        (local_fidelity_closed(1.0) - 1.0).abs(),
    ];
    let end_worst = endpoints.iter().cloned().fold(0.0, f64::max);
    Outcome {
        pass: worst.iter().all(|&w| w <= TOL) && end_worst <= TOL,
        detail: format!(
            "max dev: C1/BSC {:.1e}, Cinf/h2 {:.1e}, D(x,1/2) {:.1e}, D(x,P_e)-D@MI {:.1e}, endpoints {:.1e}",
            worst[0], worst[1], worst[2], worst[3], end_worst
        ),
    }
}

fn criterion_5() -> Outcome {
    let xs = [0.1, 0.3, 0.5, 0.6, FRAC_1_SQRT_2, 0.9];
    let mut pass = true;
    let (mut worst_c1, mut worst_cinf, mut worst_arg) = (0.0f64, 0.0f64, 0.0f64);
    for x in xs {
        let a = accessible_info_oracle(x, 1000, 1000).unwrap();
        let (h, p) = holevo_prior_oracle(x, 1000).unwrap();
        let dc1 = (a - c1_closed(x)).abs();
        let dcinf = (h - c_inf_closed(x)).abs();
        let darg = (p - 0.5).abs();
        pass &= dc1 <= 1e-4 && dcinf <= 1e-6 && darg <= 1.0 / 1000.0;
        worst_c1 = worst_c1.max(dc1);
        worst_cinf = worst_cinf.max(dcinf);
        worst_arg = worst_arg.max(darg);
    }
    Outcome {
        pass,
        detail: format!(
            "max |oracle - C1| = {worst_c1:.1e} (1e-4), |oracle - Cinf| = {worst_cinf:.1e} (1e-6), |argmax p - 0.5| = {worst_arg:.1e}"
        ),
    }
}

fn criterion_6() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for x in [0.3, 0.5, FRAC_1_SQRT_2, 0.9] {
        let mut cfg = EavesdropConfig::at_max_info(x).unwrap();
        cfg.restarts = 20;
        cfg.seed = 2024;
        let r = probe_oracle(&cfg).unwrap();
        let closed = d_at_max_info(x);
        let ok = (r.d - closed).abs() <= 2e-3 && r.d >= closed - 2e-3 && r.converged;
        pass &= ok;
        parts.push(format!("x={x:.4}: D={:.5} vs {closed:.5}", r.d));
    }
    Outcome {
        pass,
        detail: parts.join(", "),
    }
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut worst_g = 0.0f64;
    let mut worst_l = 0.0f64;
    for x in [0.3, 0.5, 1.0 / 3f64.sqrt(), FRAC_1_SQRT_2] {
        let g = cloning_oracle(x, CloneObjective::Global, 40, 7).unwrap();
        let l = cloning_oracle(x, CloneObjective::Local, 40, 7).unwrap();
        let dg = (g.f_global - global_fidelity_closed(x)).abs();
        let dl = (l.f_local - local_fidelity_closed(x)).abs();
        pass &= g.feasible && l.feasible && dg <= 2e-3 && dl <= 2e-3;
        worst_g = worst_g.max(dg);
        worst_l = worst_l.max(dl);
    }
    let g = cloning_oracle(0.5, CloneObjective::Global, 40, 7).unwrap();
    let l = cloning_oracle(0.5, CloneObjective::Local, 40, 7).unwrap();
    let gap = l.f_local - g.f_local;
    pass &= gap > 1e-4;
    Outcome {
        pass,
        detail: format!(
            "max |F_g oracle - closed| = {worst_g:.1e}, max |F_l oracle - closed| = {worst_l:.1e}, local gap at x=0.5 = {gap:.2e} (> 1e-4)"
        ),
    }
}

fn criterion_8() -> Outcome {
    let mut cfg = EavesdropConfig::at_max_info(FRAC_1_SQRT_2).unwrap();
    cfg.restarts = 4;
    cfg.seed = 7;
    let eve = probe_oracle(&cfg).unwrap();
    let rounds = 100_000;
    let s = simulate_b92(FRAC_1_SQRT_2, rounds, Some(&eve), 7).unwrap();
    let again = simulate_b92(FRAC_1_SQRT_2, rounds, Some(&eve), 7).unwrap();
    let eve_rate = s.eve_error_rate.unwrap();
    let sig_e = binomial_se(0.1464, rounds);
    let sig_d = binomial_se(0.0670, rounds);
    let ok_e = (eve_rate - 0.1464).abs() <= 3.0 * sig_e;
    let ok_d = (s.disturbance_rate - 0.0670).abs() <= 3.0 * sig_d;
    Outcome {
        pass: ok_e && ok_d && s == again,
        detail: format!(
            "Eve error {eve_rate:.4} (0.1464 ± {:.4}), disturbance {:.4} (0.0670 ± {:.4}), deterministic {}",
            3.0 * sig_e,
            s.disturbance_rate,
            3.0 * sig_d,
            s == again
        ),
    }
}

fn main() -> ExitCode {
    let ms = Duration::from_millis;
    let results = [
        check(1, "Q at 45 degrees", ms(1), criterion_1),
        check(
            2,
            "Helstrom error and D@MI at 45 degrees",
            ms(1),
            criterion_2,
        ),
        check(
            3,
            "most-quantum overlaps by golden section",
            ms(1000),
            criterion_3,
        ),
        check(
            4,
            "closed-form identities on 999-point grid",
            ms(1000),
            criterion_4,
        ),
        check(
            5,
            "capacity oracles match closed forms",
            ms(30_000),
            criterion_5,
        ),
        check(6, "probe oracle reaches D@MI", ms(300_000), criterion_6),
        check(
            7,
            "cloning oracle matches F_g and F_l",
            ms(300_000),
            criterion_7,
        ),
        check(
            8,
            "B92 Monte Carlo at maximal information",
            ms(10_000),
            criterion_8,
        ),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
