//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hecke_cli::{parse_command, parse_program, print_program, run_program, Session};
use hecke_core::catalog::{bs_pair, dihedral_pair, free2_pair, lamplighter_pair, translation_pair};
use hecke_core::completion::{
    approximate, chain_invert, chain_multiply, chain_multiply_to, chain_of, chain_of_int, exists_discrete_kernel_factorization,
    exists_factorization, exists_injective_factorization, left_right_exchange, residue_chain, FilterSpec, ZBasis,
};
use hecke_core::hecke::{check_hecke_axioms, commensuration_index, left_index, Status};
use hecke_core::hnn::{check_hnn_compatible, hnn, Embedding, HnnElement};
use hecke_core::rank::tower::TowerSeed;
use hecke_core::rank::{build_gn_tower, check_certificate, Ordinal};
use hecke_core::scale::{scale_estimate, GrowthStatus};
use hecke_core::schreier::u_orbit;
use hecke_core::wreath::{iterated_wreath, wreath};
use hecke_core::{Caps, GroupWord, Letter, PermutationHeckePair, Point, Space};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SAMPLES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/samples");
const SEED: u64 = 0x48_45_43_4b_45;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn within(start: Instant, limit: Duration, what: &str) -> Outcome {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("{what} took {spent:?}, limit {limit:?}"))
}

fn random_word(rng: &mut ChaCha8Rng, ngens: usize, max_len: usize) -> GroupWord {
    let len = rng.gen_range(0..=max_len);
    GroupWord::from_letters((0..len).map(|_| Letter { gen: rng.gen_range(0..ngens), inv: rng.gen_bool(0.5) }))
}

fn catalog() -> Result<Vec<PermutationHeckePair>, String> {
    let pairs = [bs_pair(2), bs_pair(3), lamplighter_pair(2), dihedral_pair(), translation_pair()];
    pairs.into_iter().map(|p| ok(p, "catalog")).collect()
}

/// Cosets of ⟨a⟩ in BS(1,p) as residues: a^j t^n lands in class j mod p^n.
fn bs_oracle_orbit_size(p: i128, n: u32) -> u64 {
    let pk = p.pow(n);
    (0..3 * pk).map(|j| j.rem_euclid(pk)).collect::<BTreeSet<_>>().len() as u64
}

/// Lamplighter cosets as lamp configurations supported below n.
fn lamplighter_oracle_orbit_size(q: u32, n: i64) -> u64 {
    let width = (n + 2) as u32;
    let mut seen = BTreeSet::new();
    for code in 0..q.pow(width) {
        let mut c = code;
        let mut lamps = Vec::new();
        for pos in 0..i64::from(width) {
            let v = c % q;
            c /= q;
            if v != 0 && pos < n {
                lamps.push((pos, v));
            }
        }
        seen.insert(lamps);
    }
    seen.len() as u64
}

fn hecke_axioms() -> Outcome {
    let start = Instant::now();
    for pair in catalog()? {
        let report = ok(check_hecke_axioms(&pair, 4, 32), &pair.name())?;
        ensure(report.status == Status::Pass, || format!("{} reported {}", pair.name(), report.status))?;
    }
    let f2 = ok(free2_pair(), "free2")?.with_caps(Caps { coset: 100_000, orbit: 2_000 });
    let report = ok(check_hecke_axioms(&f2, 4, 32), "free2")?;
    ensure(report.status == Status::Fail, || format!("free2 reported {}", report.status))?;
    let b = report.commensuration.iter().find(|e| e.element == "b").ok_or("free2 has no entry for b")?;
    ensure(b.status == Status::Fail && b.idx_left.is_none(), || format!("free2 entry for b: {b:?}"))?;
    within(start, Duration::from_secs(10), "axiom checks")
}

fn index_exactness() -> Outcome {
    let start = Instant::now();
    let bs = ok(bs_pair(2), "bs(2)")?;
    let lamp = ok(lamplighter_pair(2), "lamplighter(2)")?;
    for n in 0..=6u32 {
        let expected = 1u64 << n;
        let t = ok(bs.parse_word("t"), "t")?.pow(i64::from(n));
        let got = ok(left_index(&bs, &t), "bs index")?;
        ensure(got == expected && bs_oracle_orbit_size(2, n) == expected, || format!("bs(2) t^{n}: {got}"))?;
        let t = ok(lamp.parse_word("t"), "t")?.pow(i64::from(n));
        let got = ok(left_index(&lamp, &t), "lamplighter index")?;
        ensure(got == expected && lamplighter_oracle_orbit_size(2, i64::from(n)) == expected, || format!("lamplighter(2) t^{n}: {got}"))?;
    }
    within(start, Duration::from_secs(5), "index checks")
}

fn scale_estimates() -> Outcome {
    let bs = ok(bs_pair(2), "bs(2)")?;
    for (text, expected) in [("t", 2), ("t^-1", 1)] {
        let est = ok(scale_estimate(&bs, &ok(bs.parse_word(text), text)?, 8), text)?;
        ensure(est.estimate == Some(expected) && est.status == GrowthStatus::Stable, || format!("{text}: {est:?}"))?;
    }
    let est = ok(scale_estimate(&bs, &GroupWord::identity(), 8), "identity")?;
    ensure(est.estimate == Some(1), || format!("identity: {est:?}"))
}

fn completion_homomorphisms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let depth = 4;
    for pair in catalog()? {
        let ngens = pair.generators().len();
        for _ in 0..200 {
            let (w, v) = (random_word(&mut rng, ngens, 4), random_word(&mut rng, ngens, 4));
            let (w_text, v_text) = (pair.show(&w), pair.show(&v));
            let deep = depth + w.len();
            let cw = ok(chain_of(&pair, &w, deep), "chain")?;
            let cv = ok(chain_of(&pair, &v, deep), "chain")?;
            let product = ok(chain_multiply_to(&cw, &cv, depth), "multiply")?;
            let direct = ok(chain_of(&pair, &w.mul(&v), depth), "chain")?;
            ensure(product == direct, || format!("{}: product of {w_text} and {v_text}", pair.name()))?;
            let inv = ok(chain_invert(&cw), "invert")?;
            let direct = ok(chain_of(&pair, &w.inverse(), depth), "chain")?;
            ensure(inv.depth() >= depth && inv.truncate(depth) == direct, || format!("{}: inverse of {w_text}", pair.name()))?;

            let principal = ok(chain_of(&pair, &w, depth), "chain")?;
            let left = ok(left_right_exchange(Some(&pair), &principal), "exchange")?;
            let expected = ok(chain_invert(&principal), "invert")?;
            ensure(left.chain == expected, || format!("{}: exchange of {w_text}", pair.name()))?;

            let mut coarse = ok(approximate(&pair, &w, 0), "approximant")?;
            for level in 1..=depth {
                let fine = ok(approximate(&pair, &w, level), "approximant")?;
                ensure(fine.agrees_with(&coarse), || format!("{}: approximants of {w_text} at level {level}", pair.name()))?;
                coarse = fine;
            }
        }
    }
    Ok(())
}

fn two_adic_shadow() -> Outcome {
    let two = ZBasis::Powers { base: 2, scale: 1 };
    let minus_one = ok(residue_chain(&two, (0..=16).map(|n| (1i128 << n) - 1).collect()), "residues")?;
    let one = ok(chain_of_int(&two, 1, 16), "chain of 1")?;
    let product = ok(chain_multiply(&minus_one, &one), "multiply")?;
    ensure(product.depth() == 16, || format!("product depth {}", product.depth()))?;
    for n in 0..=16 {
        ensure(product.truncate(n).is_identity(), || format!("level {n} is {:?}", product.describe_level(n)))?;
    }
    Ok(())
}

fn predicate_truth_table() -> Outcome {
    let start = Instant::now();
    let powers = |base, scale| FilterSpec::declared(ZBasis::Powers { base, scale });
    let (six, two) = (powers(6, 1), powers(2, 1));
    let table = [
        ("factorization 6 -> 2", ok(exists_factorization(&six, &two), "factorization")?.result, true),
        ("factorization 2 -> 6", ok(exists_factorization(&two, &six), "factorization")?.result, false),
        ("injective 6 -> 2", ok(exists_injective_factorization(&six, &two), "injective")?.result, false),
        ("discrete kernel 3*2 -> 2", ok(exists_discrete_kernel_factorization(&powers(2, 3), &two), "discrete kernel")?.result, true),
    ];
    for (what, got, expected) in table {
        ensure(got == expected, || format!("{what}: {got}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let basis = |rng: &mut ChaCha8Rng| match rng.gen_range(0..3) {
        0 => ZBasis::Powers { base: rng.gen_range(1..13), scale: rng.gen_range(1..40) },
        1 => ZBasis::All,
        _ => ZBasis::Moduli { moduli: (0..rng.gen_range(1..4)).map(|_| rng.gen_range(1..200)).collect() },
    };
    for _ in 0..50 {
        let (a, b) = (FilterSpec::declared(basis(&mut rng)), FilterSpec::declared(basis(&mut rng)));
        let inj = ok(exists_injective_factorization(&a, &b), "injective")?.result;
        let dk = ok(exists_discrete_kernel_factorization(&a, &b), "discrete kernel")?.result;
        let fact = ok(exists_factorization(&a, &b), "factorization")?.result;
        ensure((!inj || dk) && (!dk || fact), || format!("ladder broken for {a} -> {b}: {inj} {dk} {fact}"))?;
    }
    within(start, Duration::from_secs(5), "predicate checks")
}

fn wreath_index_transfer() -> Outcome {
    let (d, bs) = (ok(dihedral_pair(), "dihedral")?, ok(bs_pair(2), "bs(2)")?);
    let w = ok(wreath(&d, &bs), "wreath")?;
    let top = ok(commensuration_index(&w, &ok(w.parse_word("t"), "t")?, 4), "wreath index")?;
    let own = ok(commensuration_index(&bs, &ok(bs.parse_word("t"), "t")?, 4), "bs index")?;
    ensure((top.idx_left, top.idx_right) == (2, 1), || format!("top t: {top:?}"))?;
    ensure((top.idx_left, top.idx_right) == (own.idx_left, own.idx_right), || format!("bs(2) t: {own:?}"))?;

    let cap = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let base = w.base(Space::Domain);
    let ngens = w.generators().len();
    for _ in 0..100 {
        let g = random_word(&mut rng, ngens, 6);
        let p = ok(w.act_point(Space::Domain, &g, &base), "action")?;
        let Point::Tuple(coords) = &p else { return Err(format!("{p} is not a product point")) };
        let [x, y] = coords.as_slice() else { return Err(format!("{p} has {} coordinates", coords.len())) };
        let whole = ok(u_orbit(&w, Space::Domain, &p, cap), "wreath orbit")?.len();
        let tx = ok(u_orbit(&bs, Space::Domain, x, cap), "top orbit")?.len();
        let by = ok(u_orbit(&d, Space::Domain, y, cap), "bottom orbit")?.len();
        ensure(whole <= tx * by, || format!("orbit of {p} has {whole} points, bound {tx} * {by}"))?;
    }
    Ok(())
}

fn hnn_contraction() -> Outcome {
    let d = ok(dihedral_pair(), "dihedral")?;
    for k in 0..=3u32 {
        let report = ok(check_hnn_compatible(&d, &Embedding::Contraction(Point::Int(1)), None, k), "compatibility")?;
        ensure(report.status == Status::Pass, || format!("depth {k}: {}", report.status))?;
        let j = ok(iterated_wreath(&d, k), "iterated wreath")?;
        let pair = ok(hnn(&d, Point::Int(1), k), "hnn")?;
        let r = ok(pair.t_commensuration(), "t index")?;
        ensure((r.idx_left, r.idx_right) == (2, 1), || format!("{}: {r:?}", pair.name()))?;
        ensure(j.metadata.finitely_generated.is_true(), || format!("iterwreath depth {k} not finitely generated"))?;
    }

    let pair = ok(hnn(&d, Point::Int(1), 1), "hnn")?;
    let ext = &pair.ext;
    let ngens = pair.generators().len();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let raise = |e: HnnElement, n: u32| -> Result<HnnElement, String> {
        let mut base = e.base.clone();
        for _ in 0..n {
            base = ok(ext.psi_tilde(&base), "contraction")?;
        }
        Ok(HnnElement { level: e.level + n, base, shift: e.shift })
    };
    for _ in 0..500 {
        let (a, b) = (random_word(&mut rng, ngens, 8), random_word(&mut rng, ngens, 8));
        let ra = raise(ok(pair.element(&a), "element")?, rng.gen_range(0..3))?;
        let rb = raise(ok(pair.element(&b), "element")?, rng.gen_range(0..3))?;
        let direct = ok(ext.normalize(&ok(ext.mul_raw(&ra, &rb), "product")?), "normal form")?;
        let (na, nb) = (ok(ext.normalize(&ra), "normal form")?, ok(ext.normalize(&rb), "normal form")?);
        let staged = ok(ext.normalize(&ok(ext.mul_raw(&na, &nb), "product")?), "normal form")?;
        let same = ok(ext.key(&direct), "key")? == ok(ext.key(&staged), "key")? && direct.level == staged.level;
        ensure(same, || format!("normal forms of {} * {} disagree", a.display(pair.generators()), b.display(pair.generators())))?;
    }
    Ok(())
}

/// ω²·a + ω·b + c as a triple, added by case analysis on the right summand.
type Triple = (u64, u64, u64);

fn oracle_add(x: Triple, y: Triple) -> Triple {
    match y {
        (d, e, f) if d > 0 => (x.0 + d, e, f),
        (_, e, f) if e > 0 => (x.0, x.1 + e, f),
        (_, _, f) => (x.0, x.1, x.2 + f),
    }
}

fn to_ordinal(t: Triple) -> Ordinal {
    Ordinal::from_terms(&[(2, t.0), (1, t.1), (0, t.2)])
}

fn ordinal_oracle() -> Outcome {
    let all: Vec<Triple> = (0..=5).flat_map(|a| (0..=5).flat_map(move |b| (0..=5).map(move |c| (a, b, c)))).collect();
    let ordinals: Vec<Ordinal> = all.iter().map(|&t| to_ordinal(t)).collect();
    for (i, &x) in all.iter().enumerate() {
        for (j, &y) in all.iter().enumerate() {
            ensure(ordinals[i].add(&ordinals[j]) == to_ordinal(oracle_add(x, y)), || format!("{x:?} + {y:?}"))?;
            ensure(ordinals[i].cmp(&ordinals[j]) == x.cmp(&y), || format!("{x:?} vs {y:?}"))?;
        }
    }
    let parse = |s: &str| s.parse::<Ordinal>().map_err(|e| format!("{s}: {e}"));
    for n in 0..=5u64 {
        let lhs = Ordinal::omega().mul_nat(n).add(&Ordinal::nat(2)).add(&parse("w + 2")?);
        let rhs = Ordinal::omega().mul_nat(n + 1).add(&Ordinal::nat(2));
        ensure(lhs == rhs, || format!("n = {n}: {lhs} vs {rhs}"))?;
    }
    for xi in ["w", "w + 3", "w*4 + 1", "w^2", "w^2*2 + w + 7"] {
        let xi = parse(xi)?;
        ensure(Ordinal::nat(2).add(&xi) == xi, || format!("2 + {xi}"))?;
    }
    Ok(())
}

fn tower_certificates() -> Outcome {
    let start = Instant::now();
    let seed = TowerSeed::declared("seed", "1");
    for n in 1..=5u32 {
        let tower = ok(build_gn_tower(n, &seed), "tower")?;
        let expected = Ordinal::omega().mul_nat(u64::from(n)).add(&Ordinal::nat(2));
        ensure(tower.bound == expected, || format!("n = {n}: bound {}", tower.bound))?;
        ok(check_certificate(&tower.certificate), "certificate check")?;
    }
    within(start, Duration::from_secs(1), "tower construction")
}

fn sample_programs() -> Result<Vec<PathBuf>, String> {
    let mut out: Vec<PathBuf> = ok(std::fs::read_dir(SAMPLES), "samples")?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("pairs"))
        .collect();
    out.sort();
    ensure(!out.is_empty(), || "no sample programs".into())?;
    Ok(out)
}

fn run_once(path: &Path) -> Result<String, String> {
    let source = ok(std::fs::read_to_string(path), "read")?;
    let program = ok(parse_program(&source), "parse")?;
    let mut session = ok(Session::new(SAMPLES), "session")?;
    let r = run_program(&mut session, &program, &source);
    ensure(r.error.is_none() && r.exit_code == 0, || format!("{}: {:?}", path.display(), r.error))?;
    Ok(r.output)
}

fn cli_round_trip() -> Outcome {
    for path in sample_programs()? {
        let source = ok(std::fs::read_to_string(&path), "read")?;
        let program = ok(parse_program(&source), "parse")?;
        let printed = print_program(&program);
        let reparsed = ok(parse_program(&printed), "reparse")?;
        ensure(reparsed.without_spans() == program.without_spans(), || format!("{} does not round-trip", path.display()))?;
        ensure(print_program(&reparsed) == printed, || format!("{} printing is not stable", path.display()))?;
        ensure(run_once(&path)? == run_once(&path)?, || format!("{} output differs across runs", path.display()))?;
    }
    let session = ok(Session::new(SAMPLES), "session")?;
    for line in [
        "verify bs(2) --depth 3 --format json",
        "complete lamplighter(2) t*a --depth 3 --format json",
        "tower --n 3 --format json",
        "ball wreath(dihedral(), bs(2)) --radius 2 --format dot",
        "ball bs(2) --radius 3 --format dot",
    ] {
        let cmd = ok(parse_command(line), line)?;
        let (_, first) = ok(session.execute(&cmd), line)?;
        let (_, second) = ok(session.execute(&cmd), line)?;
        ensure(!first.is_empty() && first == second, || format!("`{line}` is not deterministic"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Hecke axioms on the catalog", hecke_axioms),
        ("index exactness against brute-force oracles", index_exactness),
        ("scale estimates on bs(2)", scale_estimates),
        ("completion homomorphism suite", completion_homomorphisms),
        ("2-adic arithmetic shadow", two_adic_shadow),
        ("filter predicate truth table and ladder", predicate_truth_table),
        ("wreath index transfer and orbit bound", wreath_index_transfer),
        ("HNN contraction and normal-form confluence", hnn_contraction),
        ("ordinal arithmetic oracle", ordinal_oracle),
        ("tower certificates", tower_certificates),
        ("CLI round trip and determinism", cli_round_trip),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let ms = start.elapsed().as_millis();
        match result {
            Ok(()) => println!("criterion {:>2} {name} ... PASS ({ms} ms)", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {:>2} {name} ... FAIL ({ms} ms): {e}", i + 1);
            }
        }
    }
    println!("{} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
