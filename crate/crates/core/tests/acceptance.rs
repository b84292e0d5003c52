//! The twelve acceptance criteria at their pinned sizes and tolerances.
//! Each prints a single pass/fail line; the test fails if any criterion does.

use std::io::Write;
use std::time::Instant;

use ljmse_core::cps::TransKind;
use ljmse_core::spectrum::Calculus;
use ljmse_core::syntax::Level;
use ljmse_core::verify::{
    negative_family, suite_critical_peaks, suite_embeddings, suite_garbage, suite_interpretations,
    suite_negative_simple_cps, suite_random_peaks, suite_second_order, suite_sn, suite_strict_simulation,
    suite_subject_reduction, suite_translation_typing, suite_weak_simulation_cps, GenConfig, Report,
};

const SEED: u64 = 7;

fn corpus(count: usize) -> GenConfig {
    GenConfig {
        seed: SEED,
        max_size: 12,
        calculus: Calculus::Jmse,
        level: Level::Prop,
        count,
    }
}

struct Outcome {
    id: usize,
    name: &'static str,
    ok: bool,
    detail: String,
}

fn line(o: &Outcome) {
    let mut out = std::io::stdout().lock();
    let verdict = if o.ok { "PASS" } else { "FAIL" };
    writeln!(out, "criterion {:>2} {verdict} {}: {}", o.id, o.name, o.detail).unwrap();
}

fn base(rep: &Report) -> String {
    let mut s = format!(
        "{} cases, {} failures, {} inconclusive, {:.1}s",
        rep.cases,
        rep.failures.len(),
        rep.inconclusive,
        rep.wall.as_secs_f64()
    );
    if let Some(f) = rep.failures.first() {
        s.push_str(&format!("; first failure: {} / {} / {}", f.term, f.step, f.diagnostic));
    }
    s
}

fn strict_simulation() -> Outcome {
    let rep = suite_strict_simulation(&corpus(500), TransKind::Cgps);
    let rules = ["beta", "pi", "sigma", "mu", "eps"];
    let coverage = rules.iter().all(|r| rep.stat(r) >= 50);
    let counts: Vec<String> = rules.iter().map(|r| format!("{r}={}", rep.stat(r))).collect();
    Outcome {
        id: 1,
        name: "CGPS strict simulation",
        ok: rep.passed() && coverage && rep.wall.as_secs() < 300,
        detail: format!("{}; {}", base(&rep), counts.join(" ")),
    }
}

fn weak_simulation() -> Outcome {
    let rep = suite_weak_simulation_cps(&corpus(500));
    Outcome {
        id: 2,
        name: "CPS weak simulation",
        ok: rep.passed() && rep.stat("eps") > 0 && rep.stat("pi-root") > 0,
        detail: format!("{}; mu steps with no target step: {}", base(&rep), rep.stat("mu-zero")),
    }
}

fn negative() -> Outcome {
    let rep = suite_negative_simple_cps();
    let graphs: Vec<usize> = rep
        .stats
        .iter()
        .filter(|(k, _)| k.starts_with("graph:"))
        .map(|(_, v)| *v)
        .collect();
    let small = graphs.iter().all(|n| *n < 10_000);
    Outcome {
        id: 3,
        name: "simplified CPS loses simulation",
        ok: rep.passed() && negative_family().len() >= 5 && graphs.len() >= 5 && small,
        detail: format!("{}; graph sizes {graphs:?}", base(&rep)),
    }
}

fn type_soundness() -> Outcome {
    let rep = suite_translation_typing(&corpus(500));
    Outcome {
        id: 4,
        name: "translation type soundness",
        ok: rep.passed() && rep.stat("translation:cps") > 0 && rep.stat("translation:cgps") > 0,
        detail: base(&rep),
    }
}

fn subject_reduction() -> Outcome {
    let rep = suite_subject_reduction(&corpus(500));
    Outcome {
        id: 5,
        name: "subject reduction",
        ok: rep.passed(),
        detail: base(&rep),
    }
}

fn embeddings() -> Outcome {
    let rep = suite_embeddings(&corpus(300));
    let coherence = ["lj", "ljm", "ljms"].iter().all(|c| rep.stat(&format!("coherence:{c}")) == 300);
    Outcome {
        id: 6,
        name: "embeddings and coherence",
        ok: rep.passed() && coherence,
        detail: base(&rep),
    }
}

fn interpretations() -> Outcome {
    let rep = suite_interpretations(&corpus(300));
    Outcome {
        id: 7,
        name: "interpretation maps",
        ok: rep.passed() && rep.stat("sharp") == 300 && rep.stat("circ") == 300,
        detail: format!("{}; mu_nf steps {}", base(&rep), rep.stat("mu-nf")),
    }
}

fn critical_peaks() -> Outcome {
    let rep = suite_critical_peaks(&corpus(500));
    Outcome {
        id: 8,
        name: "critical peaks",
        ok: rep.passed() && rep.stats.len() >= 5,
        detail: format!("{}; families {:?}", base(&rep), rep.stats),
    }
}

fn random_peaks() -> Outcome {
    let rep = suite_random_peaks(&corpus(500), 200);
    Outcome {
        id: 9,
        name: "random peaks",
        ok: rep.passed() && rep.stat("random") == 200,
        detail: base(&rep),
    }
}

fn garbage() -> Outcome {
    let rep = suite_garbage(&corpus(100));
    Outcome {
        id: 10,
        name: "garbage arithmetic",
        ok: rep.passed() && rep.stat("succ-steps") == 2 && rep.cases == 101,
        detail: base(&rep),
    }
}

fn normalisation() -> Outcome {
    let rep = suite_sn(&corpus(500));
    Outcome {
        id: 11,
        name: "normalisation smoke",
        ok: rep.passed() && rep.cases == 500 * 6,
        detail: base(&rep),
    }
}

fn second_order() -> Outcome {
    let cfg = corpus(100).with_level(Level::Second);
    let rep = suite_second_order(&cfg, 500);
    Outcome {
        id: 12,
        name: "second order",
        ok: rep.passed() && rep.stat("beta2") > 0 && rep.stat("naturality") == 500,
        detail: format!("{}; beta2 steps {}", base(&rep), rep.stat("beta2")),
    }
}

#[test]
fn acceptance() {
    let start = Instant::now();
    writeln!(std::io::stdout().lock()).unwrap();
    let criteria: [fn() -> Outcome; 12] = [
        strict_simulation,
        weak_simulation,
        negative,
        type_soundness,
        subject_reduction,
        embeddings,
        interpretations,
        critical_peaks,
        random_peaks,
        garbage,
        normalisation,
        second_order,
    ];
    let outcomes: Vec<Outcome> = criteria
        .iter()
        .map(|c| {
            let o = c();
            line(&o);
            o
        })
        .collect();
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.ok).map(|o| o.id).collect();
    writeln!(
        std::io::stdout().lock(),
        "acceptance: {}/12 criteria pass in {:.1}s",
        12 - failed.len(),
        start.elapsed().as_secs_f64()
    )
    .unwrap();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
