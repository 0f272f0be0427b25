//! Acceptance criteria 1 to 12 on the three reference instances. Prints one
//! PASS/FAIL line per criterion; every check uses exact equality.

use std::io::Write as _;
use std::process::Command;
use std::time::{Duration, Instant};

use qtorus_cli::commands::{self, Format};
use qtorus_cli::InstanceConfig;
use qtorus_core::fmodule::Report;
use qtorus_core::suites::{enumerate_radical, run_suite, Suite};

const SAMPLES: usize = 200;
const SEED: u64 = 20240611;
const MODULES: [&str; 4] = ["natural", "sym:2", "ext:2", "trivial"];

struct Instance {
    name: &'static str,
    torus: &'static str,
}

const INSTANCES: [Instance; 3] = [
    Instance { name: "i", torus: r#"{"d": 2, "N": 2, "A": [[0, 1], [1, 0]]}"# },
    Instance { name: "ii", torus: r#"{"d": 2, "N": 3, "A": [[0, 1], [2, 0]]}"# },
    Instance { name: "iii", torus: r#"{"d": 3, "N": 4, "A": [[0, 1, 2], [3, 0, 0], [2, 0, 0]]}"# },
];

fn config_json(inst: &Instance, module: &str) -> String {
    let d = if inst.name == "iii" { 3 } else { 2 };
    let alpha: Vec<String> = (1..=d).map(|i| format!("\"{i}/3\"")).collect();
    let radius = vec!["3"; d].join(", ");
    format!(
        r#"{{"instance": "{}/{module}", "torus": {}, "module": {{"V": "{module}", "alpha": [{}], "flavor": "F"}},
            "box": [{radius}], "seed": {SEED}, "samples": {SAMPLES}}}"#,
        inst.name,
        inst.torus,
        alpha.join(", ")
    )
}

fn config(inst: &Instance, module: &str) -> InstanceConfig {
    InstanceConfig::from_json(&config_json(inst, module)).expect("reference config is valid")
}

/// Outcome of one criterion, with the reasons for any failure.
struct Criterion {
    number: usize,
    title: &'static str,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(number: usize, title: &'static str) -> Self {
        Criterion { number, title, failures: Vec::new(), notes: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn reports(&mut self, reports: &[Report]) {
        if reports.is_empty() {
            self.failures.push("no reports".into());
        }
        for r in reports {
            if !r.pass {
                self.failures.push(format!(
                    "{} on {}: defect {}, details {}",
                    r.check,
                    r.instance,
                    r.defect.normalized(),
                    serde_json::to_string(&r.details).unwrap()
                ));
            }
        }
    }

    fn timed<T>(&mut self, label: &str, limit: Option<Duration>, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        self.notes.push(format!("{label} {:.2}s", took.as_secs_f64()));
        if let Some(limit) = limit {
            self.expect(took < limit, || format!("{label} took {took:?}, limit {limit:?}"));
        }
        out
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        format!("criterion {:>2} {status}  {} [{}]", self.number, self.title, self.notes.join(", "))
    }
}

/// Written straight to stderr so the lines survive the test harness's capture.
fn emit(text: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{text}");
}

fn suite(c: &mut Criterion, cfg: &InstanceConfig, s: Suite, limit: Option<Duration>) {
    let sc = cfg.suite_config().unwrap();
    let label = format!("{}:{}", s, cfg.instance);
    let reports = c.timed(&label, limit, || run_suite(&sc, s).unwrap());
    c.reports(&reports);
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::new(1, "cocycle suite");
    for inst in &INSTANCES {
        suite(&mut c, &config(inst, "natural"), Suite::Cocycle, Some(Duration::from_secs(5)));
    }
    c
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::new(2, "algebra suite");
    for inst in &INSTANCES {
        suite(&mut c, &config(inst, "natural"), Suite::Algebra, None);
    }
    c
}

fn criterion_3() -> Criterion {
    let mut c = Criterion::new(3, "radical against enumeration");
    let expected_diag = [Some(vec![2, 2]), Some(vec![3, 3]), None];
    for (inst, diag) in INSTANCES.iter().zip(expected_diag) {
        let cfg = config(inst, "natural");
        suite(&mut c, &cfg, Suite::Radical, Some(Duration::from_secs(1)));
        let rad = cfg.spec().radical();
        let brute = enumerate_radical(cfg.spec());
        c.expect(rad.diagonal_orders == diag, || format!("{}: diagonal orders {:?}", inst.name, rad.diagonal_orders));
        c.expect(rad.axis_orders == brute.axis_orders && rad.index == brute.index, || {
            format!("{}: axis orders {:?} index {} vs enumerated {:?} {}", inst.name, rad.axis_orders, rad.index, brute.axis_orders, brute.index)
        });
    }
    c
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::new(4, "derivation suite");
    for inst in &INSTANCES {
        suite(&mut c, &config(inst, "natural"), Suite::Derivation, None);
    }
    c
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::new(5, "semidirect suite");
    for inst in &INSTANCES {
        let cfg = config(inst, "natural");
        let sc = cfg.suite_config().unwrap();
        let reports = c.timed(&format!("semidirect:{}", cfg.instance), None, || run_suite(&sc, Suite::Semidirect).unwrap());
        c.reports(&reports);
        let has_phi = reports.iter().any(|r| r.check == "semidirect/phi_homomorphism");
        let diagonal = cfg.spec().radical().is_diagonal();
        c.expect(has_phi == diagonal, || format!("{}: phi check presence {has_phi}, diagonal {diagonal}", inst.name));
        if let Some(r) = reports.iter().find(|r| r.check == "semidirect/phi_homomorphism") {
            c.expect(r.samples >= 100, || format!("{}: only {} phi pairs", inst.name, r.samples));
        }
    }
    c
}

fn criterion_6() -> Criterion {
    let mut c = Criterion::new(6, "gl-module suite");
    // instance (ii) covers rank 2, (iii) rank 3
    for inst in &INSTANCES[1..] {
        suite(&mut c, &config(inst, "natural"), Suite::Gl, None);
    }
    c
}

fn per_module(number: usize, title: &'static str, s: Suite, limit: Option<Duration>) -> Criterion {
    let mut c = Criterion::new(number, title);
    for inst in &INSTANCES {
        for m in MODULES {
            suite(&mut c, &config(inst, m), s, limit);
        }
    }
    c
}

fn criterion_9() -> Criterion {
    let mut c = per_module(9, "section-4 suite", Suite::Section4, None);
    // at least three nontrivial characters on (i) and (ii)
    for inst in &INSTANCES[..2] {
        let cfg = config(inst, "natural");
        let reports = run_suite(&cfg.suite_config().unwrap(), Suite::Section4).unwrap();
        let psi = reports.iter().find(|r| r.check == "section4/psi").expect("psi report");
        c.expect(psi.pass && psi.samples >= 3, || format!("{}: psi over {} characters", inst.name, psi.samples));
    }
    c
}

fn criterion_10() -> Criterion {
    let mut c = per_module(10, "irreducibility evidence", Suite::Irreducibility, None);
    c.notes.push("fixture natural+natural must fail".into());
    c
}

fn criterion_11() -> Criterion {
    let mut c = Criterion::new(11, "twist search");
    for inst in &INSTANCES {
        suite(&mut c, &config(inst, "natural"), Suite::Twist, None);
    }
    suite(&mut c, &config(&INSTANCES[0], "sym:2"), Suite::Twist, None);
    c
}

fn criterion_12() -> Criterion {
    let mut c = Criterion::new(12, "byte-identical verify reports");
    for inst in &INSTANCES {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(config_json(inst, "natural").as_bytes()).unwrap();
        let samples = if inst.name == "iii" { "40" } else { "200" };
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_qtorus"))
                .args(["verify", "--suite", "all", "--samples", samples, "--config"])
                .arg(f.path())
                .output()
                .unwrap()
        };
        let (a, b) = c.timed(&format!("verify x2:{}", inst.name), None, || (run(), run()));
        c.expect(a.status.code() == Some(0), || format!("{}: exit {:?}", inst.name, a.status.code()));
        c.expect(!a.stdout.is_empty() && a.stdout == b.stdout, || format!("{}: reports differ", inst.name));
    }
    c
}

#[test]
fn acceptance() {
    let runs: Vec<fn() -> Criterion> = vec![
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        || per_module(7, "module suite (flavor F)", Suite::Module, Some(Duration::from_secs(60))),
        || per_module(8, "section-3 suite", Suite::Section3, None),
        criterion_9,
        criterion_10,
        criterion_11,
        criterion_12,
    ];
    let mut failed = Vec::new();
    for run in runs {
        let c = run();
        emit(&c.line());
        for f in &c.failures {
            emit(&format!("    {f}"));
        }
        if !c.passed() {
            failed.push(c.number);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn text_report_for_reference_instance() {
    let cfg = config(&INSTANCES[0], "natural");
    let out = commands::verify(&cfg, &[Suite::Cocycle], Format::Text).unwrap();
    assert!(!out.failed);
    assert!(out.lines.last().unwrap().contains("checks passed"));
}
