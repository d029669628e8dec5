//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

mod common;

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use common::{algebra, random_module};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radhom_core::algebra::BoundQuiverAlgebra;
use radhom_core::dims::{dim_sum, Decision, Gorenstein};
use radhom_core::linalg::Field;
use radhom_core::rep::{Rep, Side};
use radhom_core::resolve::{DimValue, Homology, Limits};
use radhom_core::verify::{run_sweep, CheckName, CheckSummary, Family, GeneratorSpec, Subject, SweepConfig, SweepOutcome, Verdict};

const B: usize = 20;

type Outcome = Result<String, String>;

fn line(text: &str) {
    // written past the test harness capture so the lines show up in plain
    // `cargo test` output
    let _ = writeln!(std::io::stderr(), "{text}");
}

fn sweep(specs: Vec<GeneratorSpec>, checks: Vec<CheckName>, bound: usize) -> SweepOutcome {
    run_sweep(&SweepConfig { specs, checks, limits: Limits::with_bound(bound), seed: 2024, workers: 1 })
}

fn check(out: &SweepOutcome, name: CheckName) -> &CheckSummary {
    out.summary.checks.iter().find(|c| c.name == name.as_str()).expect("check ran")
}

fn counts(c: &CheckSummary) -> String {
    format!(
        "pass {}, pass_at_bound {}, inconclusive {}, fail {}, candidates {}, not_applicable {}",
        c.pass,
        c.pass_at_bound,
        c.inconclusive,
        c.fail,
        c.candidates.len(),
        c.not_applicable
    )
}

fn mixed_population() -> Vec<GeneratorSpec> {
    [(Family::Nakayama, 60), (Family::Monomial, 70), (Family::Truncated, 60), (Family::Local, 60)]
        .iter()
        .enumerate()
        .map(|(i, &(f, n))| GeneratorSpec::new(f, n, 500 + i as u64))
        .collect()
}

fn population_ok(out: &SweepOutcome, specs: &[GeneratorSpec]) -> Result<(), String> {
    if out.summary.algebras < 200 {
        return Err(format!("only {} algebras generated", out.summary.algebras));
    }
    let too_big = specs.iter().flat_map(|s| s.generate()).filter(|a| a.dim() > 60).count();
    if too_big > 0 {
        return Err(format!("{too_big} algebras of dimension > 60"));
    }
    Ok(())
}

fn prop22(out: &SweepOutcome, specs: &[GeneratorSpec]) -> Outcome {
    population_ok(out, specs)?;
    let c = check(out, CheckName::Prop22);
    let msg = format!("{} algebras: {}", out.summary.algebras, counts(c));
    if c.fail == 0 && c.candidates.is_empty() {
        Ok(msg)
    } else {
        Err(format!("{msg}; violations on {:?}", c.failures))
    }
}

fn injdim_radical(out: &SweepOutcome) -> Outcome {
    let c = check(out, CheckName::ThmInjdimRadical);
    let at_bound: Vec<&str> = out
        .reports
        .iter()
        .filter(|r| r.check == CheckName::ThmInjdimRadical && r.verdict == Verdict::PassAtBound)
        .map(|r| &r.fingerprint[..12])
        .collect();
    // both sides certified infinite, logged rather than counted as passes
    let msg = format!("{}; {} equal only as infinite values (first: {:?})", counts(c), at_bound.len(), &at_bound[..at_bound.len().min(4)]);
    if c.fail == 0 && at_bound.len() == c.pass_at_bound {
        Ok(msg)
    } else {
        Err(format!("{msg}; failures on {:?}", c.failures))
    }
}

fn question_syzygy() -> Outcome {
    let specs: Vec<GeneratorSpec> = [(Family::Nakayama, 1200), (Family::Monomial, 1700), (Family::Truncated, 500), (Family::Local, 300)]
        .iter()
        .enumerate()
        .map(|(i, &(f, n))| GeneratorSpec::new(f, n, 900 + i as u64))
        .collect();
    let start = Instant::now();
    let out = sweep(specs, vec![CheckName::QuestionSyzygy], B);
    let c = check(&out, CheckName::QuestionSyzygy);
    let msg = format!("{} distinct algebras in {:.0}s: {}", out.summary.algebras, start.elapsed().as_secs_f64(), counts(c));
    if out.summary.algebras < 3000 {
        return Err(format!("{msg}; fewer than 3000 algebras"));
    }
    if c.candidates.is_empty() && c.fail == 0 {
        Ok(msg)
    } else {
        Err(format!("{msg}; candidates {:?}, failures {:?}", c.candidates, c.failures))
    }
}

fn gorenstein_symmetry(out: &SweepOutcome) -> Outcome {
    let c = check(out, CheckName::GorensteinGpd);
    let msg = counts(c);
    if c.fail == 0 && c.candidates.is_empty() && c.pass > 0 {
        Ok(msg)
    } else {
        Err(format!("{msg}; failures on {:?}", c.failures))
    }
}

fn auslander() -> Outcome {
    let a = algebra("FIELD 7\nNILBOUND 3\nVERTICES 2\nARROW a 1 2\nARROW b 2 1\nREL 1*b*a\n");
    let subject = Subject::new(a.clone(), Limits::with_bound(B));
    let h = subject.homology();
    let gl = h.gl_dim();
    let dom = h.dom_dim();
    let inj = h.self_injective_dim(Side::Left);
    let two = DimValue::Exact(2);
    if (gl, dom, inj) != (two, two, two) {
        return Err(format!("gl {gl}, dom {dom}, inj {inj}"));
    }
    if h.detect_minimal_ag(h.detect_gorenstein()) != Decision::Yes {
        return Err("not detected as minimal Auslander-Gorenstein".into());
    }
    let mut equalities = 0;
    for side in [Side::Left, Side::Right] {
        for m in h.sample_family(side) {
            if h.is_projective_injective(&m) || h.proj_dim(&m).is_finite() != Some(true) {
                continue;
            }
            let lhs = dim_sum(h.proj_dim(&m), h.dominant_dimension(&m));
            let rhs = dim_sum(h.inj_dim(&m), h.codominant_dimension(&m));
            if lhs != two || rhs != two {
                return Err(format!("{}: pd + dom = {lhs}, inj + codom = {rhs}", m.to_literal()));
            }
            equalities += 2;
        }
        let top = h.semisimple_top(side);
        for n in 0..=B {
            let z = h.syzygy(&top, n).map_err(|e| format!("syzygy {n}: {e:?}"))?;
            if z.is_zero() {
                break;
            }
            if h.inj_dim(&z) != two {
                return Err(format!("inj dim of syzygy {n} of A_0 ({side}) is {}", h.inj_dim(&z)));
            }
        }
    }
    let r = subject.run(CheckName::DomdimSuite);
    if r.verdict != Verdict::Pass {
        return Err(format!("domdim_suite {}: {}", r.verdict, r.detail));
    }
    Ok(format!("gl = dom = inj = 2, {equalities} equalities on sampled modules, domdim_suite {}", r.detail))
}

fn koszul() -> Outcome {
    let mut applicable = 0;
    let mut conclusive = 0;
    for a in GeneratorSpec::new(Family::Local, 300, 77).generate() {
        if !a.is_commutative() {
            continue;
        }
        let a = Arc::new(a);
        let s = Subject::new(a.clone(), Limits::with_bound(B));
        let k = s.homology().koszul_gorenstein_test();
        if !k.top_homology_nonzero {
            return Err(format!("H_n(K ⊗ E) = 0 for\n{}", a.to_text()));
        }
        let r = s.run(CheckName::KoszulGorenstein);
        match r.verdict {
            Verdict::Pass => conclusive += 1,
            Verdict::Inconclusive => {}
            v => return Err(format!("{v}: {} for\n{}", r.detail, a.to_text())),
        }
        let g = s.gorenstein();
        if let (Some(x), true) = (k.finite_pd, g != Gorenstein::Inconclusive) {
            if x != matches!(g, Gorenstein::Yes(_)) {
                return Err(format!("finite pd {x} vs {g}"));
            }
        }
        applicable += 1;
    }
    let msg = format!("{applicable} commutative local samples, {conclusive} conclusive and in agreement");
    if applicable >= 50 {
        Ok(msg)
    } else {
        Err(format!("{msg}; fewer than 50 samples"))
    }
}

fn engine_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut modules = 0;
    let mut drawn = 0;
    let mut homs = 0;
    let algebras: Vec<Arc<BoundQuiverAlgebra>> = [Family::Nakayama, Family::Monomial, Family::Truncated, Family::Local]
        .iter()
        .flat_map(|&f| {
            let mut s = GeneratorSpec::new(f, 10, 3100);
            s.max_dim = 24;
            s.vertices = s.vertices.min(5);
            s.generate()
        })
        .map(Arc::new)
        .collect();
    while modules < 100 {
        let a = &algebras[drawn % algebras.len()];
        drawn += 1;
        let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
        let h = Homology::new(a.clone(), Limits::with_bound(B));
        let m = random_module(&mut rng, a, side, 16);
        for v in 0..a.vertex_count() {
            let p = Rep::projective(a.clone(), v, side);
            if p.hom_space(&m).unwrap().len() != m.dims()[v] {
                return Err(format!("dim Hom(P_{v}, M) != d_{v}(M) for {}", m.to_literal()));
            }
            homs += 1;
        }
        // Ext^B needs P_{B+1}; modules whose resolution outgrows the size
        // cap before that are drawn again
        if h.resolution(&m, B + 1).is_err() {
            continue;
        }
        for i in 0..=B {
            let betti = h.betti(&m, i).map_err(|_| format!("Betti {i} unavailable"))?;
            for j in 0..a.vertex_count() {
                let e = h.ext_dim(&m, &h.simple(j, side), i).map_err(|_| format!("Ext^{i} unavailable"))?;
                if e != betti[j] {
                    return Err(format!("Betti {i},{j} = {} but Ext = {e} for {}", betti[j], m.to_literal()));
                }
            }
        }
        modules += 1;
    }
    let mut matrices = 0;
    for field in [Field::prime(2).unwrap(), Field::prime(1009).unwrap(), Field::Rational] {
        for _ in 0..1000 {
            let (r, c) = (rng.gen_range(1..9), rng.gen_range(1..9));
            let m = common::random_mat(&mut rng, field, r, c);
            let k = m.kernel_basis();
            if m.rank() + k.cols() != c || !m.mul(&k).is_zero() || m.rank() != m.transpose().rank() {
                return Err(format!("rank-nullity fails over {field} on {m:?}"));
            }
            matrices += 1;
        }
    }
    Ok(format!(
        "{modules} modules to depth {B} ({} redrawn past the size cap), {homs} Hom spaces, {matrices} matrices over 3 fields",
        drawn - modules
    ))
}

fn determinism() -> Outcome {
    let specs: Vec<GeneratorSpec> = [(Family::Nakayama, 40), (Family::Monomial, 40), (Family::Truncated, 20), (Family::Local, 20)]
        .iter()
        .enumerate()
        .map(|(i, &(f, n))| GeneratorSpec::new(f, n, 42 + i as u64))
        .collect();
    let a = sweep(specs.clone(), CheckName::ALL.to_vec(), 8).summary.to_json(false);
    let b = sweep(specs, CheckName::ALL.to_vec(), 8).summary.to_json(false);
    if a.as_bytes() == b.as_bytes() {
        Ok(format!("{} bytes identical", a.len()))
    } else {
        Err("summaries differ".into())
    }
}

#[test]
fn acceptance() {
    let specs = mixed_population();
    let start = Instant::now();
    let population = sweep(specs.clone(), vec![CheckName::Prop22, CheckName::ThmInjdimRadical, CheckName::GorensteinGpd], B);
    line(&format!("mixed population: {} algebras at B = {B} in {:.0}s", population.summary.algebras, start.elapsed().as_secs_f64()));

    let results: Vec<(&str, Outcome)> = vec![
        ("1 prop22 equivalences", prop22(&population, &specs)),
        ("2 inj dim J = gl dim", injdim_radical(&population)),
        ("3 question on syzygies", question_syzygy()),
        ("4 Gorenstein symmetry", gorenstein_symmetry(&population)),
        ("5 Auslander algebra of k[x]/(x^2)", auslander()),
        ("6 Koszul test", koszul()),
        ("7 engine oracles", engine_oracles()),
        ("8 determinism", determinism()),
    ];
    let mut failed = Vec::new();
    for (name, r) in &results {
        match r {
            Ok(msg) => line(&format!("PASS criterion {name}: {msg}")),
            Err(msg) => {
                line(&format!("FAIL criterion {name}: {msg}"));
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
