//! Acceptance suite: reduction laws, calculus separation, the golden
//! derivation, branch-rule elimination under associativity, differential
//! testing against the sequent oracle, the algebra property suite,
//! hierarchy monotonicity, count-filter soundness, and determinism.
//!
//! Each test prints one pass line; run with `--nocapture` to see them.

use std::time::Instant;

use lke::category::{parse_category, Atom, Category};
use lke::label::{
    compose, left_residual, leq, normalize, right_residual, CalculusSpec, Token,
};
use lke::oracle::{categories_up_to, oracle_prove, Verdict};
use lke::sequent::Sequent;
use lke::tableau::{count_filter, prove, ExpandOpts, ProofResult};

const ORACLE_DEPTH: u32 = 3;
const LEQ_BUDGET: u32 = 64;

fn cat(s: &str) -> Category {
    parse_category(s).unwrap()
}

fn cats(ss: &[&str]) -> Vec<Category> {
    ss.iter().map(|s| cat(s)).collect()
}

fn run(ant: &[&str], succ: &str, spec: &CalculusSpec) -> ProofResult {
    run_opts(ant, succ, spec, &ExpandOpts::default())
}

fn run_opts(ant: &[&str], succ: &str, spec: &CalculusSpec, opts: &ExpandOpts) -> ProofResult {
    prove(&cats(ant), &cat(succ), spec, opts, None).expect("within resource limits")
}

/// The twelve reduction-law sequents: application, composition,
/// rebracketing, lifting and the two division laws, both directions each.
fn reduction_laws() -> Vec<(Vec<&'static str>, &'static str)> {
    vec![
        (vec!["X/Y", "Y"], "X"),
        (vec!["Y", r"Y\X"], "X"),
        (vec!["X/Y", "Y/Z"], "X/Z"),
        (vec![r"Z\Y", r"Y\X"], r"Z\X"),
        (vec![r"(Z\X)/Y"], r"Z\(X/Y)"),
        (vec![r"Z\(X/Y)"], r"(Z\X)/Y"),
        (vec!["X"], r"Y/(X\Y)"),
        (vec!["X"], r"(Y/X)\Y"),
        (vec!["X/Y"], "(X/Z)/(Y/Z)"),
        (vec![r"Y\X"], r"(Z\Y)\(Z\X)"),
        (vec!["X/Y"], r"(Z/X)\(Z/Y)"),
        (vec![r"Y\X"], r"(Y\Z)/(X\Z)"),
    ]
}

#[test]
fn criterion_1_reduction_laws_in_l() {
    let started = Instant::now();
    for (ant, succ) in reduction_laws() {
        let r = run(&ant, succ, &CalculusSpec::L);
        assert!(r.theorem, "{ant:?} => {succ} should prove in L");
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "reduction-law suite took {elapsed:?}, expected < 1 s"
    );
    println!("criterion 1 (reduction laws R1-R6 in L, {elapsed:?}): PASS");
}

fn check_with_oracle(ant: &[&str], succ: &str, spec: &CalculusSpec, expect: bool) {
    let r = run(ant, succ, spec);
    assert_eq!(
        r.theorem, expect,
        "{ant:?} => {succ} in {spec}: expected theorem={expect}"
    );
    let seq = Sequent::new(cats(ant), cat(succ));
    let verdict = oracle_prove(&seq, spec, ORACLE_DEPTH);
    match verdict {
        Verdict::Proved => assert!(r.theorem, "oracle proves, tableau refutes: {seq} in {spec}"),
        Verdict::Refuted => assert!(!r.theorem, "oracle refutes, tableau proves: {seq} in {spec}"),
        Verdict::Unknown => {}
    }
}

#[test]
fn criterion_2_calculus_separation() {
    // rebracketing and subfunctor division need associativity
    check_with_oracle(&[r"(Z\X)/Y"], r"Z\(X/Y)", &CalculusSpec::NL, false);
    check_with_oracle(&[r"Z\(X/Y)"], r"(Z\X)/Y", &CalculusSpec::NL, false);
    check_with_oracle(&["X/Y"], r"(Z/X)\(Z/Y)", &CalculusSpec::NL, false);
    check_with_oracle(&[r"Y\X"], r"(Y\Z)/(X\Z)", &CalculusSpec::NL, false);
    // application does not
    check_with_oracle(&["X/Y", "Y"], "X", &CalculusSpec::NL, true);
    // permutation separates L from LP
    check_with_oracle(&["Y", "X/Y"], "X", &CalculusSpec::L, false);
    check_with_oracle(&["Y", "X/Y"], "X", &CalculusSpec::LP, true);
    // identity everywhere
    for (_, spec) in CalculusSpec::PRESETS {
        check_with_oracle(&["X"], "X", &spec, true);
    }
    println!("criterion 2 (calculus separation, oracle-checked): PASS");
}

#[test]
fn criterion_3_golden_derivation() {
    let r = run(&["NP", r"(NP\S)/NP"], "S/NP", &CalculusSpec::L);
    assert!(r.theorem);
    let expected = "\
1- F NP*((NP\\S)/NP) |- S/NP   [L]
2- T NP*((NP\\S)/NP) : m   [sequent 1]
3- F S/NP : m   [sequent 1]
4- T NP : a   [alpha(iii) 2]
5- T (NP\\S)/NP : m<|a   [alpha(iii) 2]
6- T NP : b   [alpha(ii) 3]
7- F S : m.b   [alpha(ii) 3]
8- T NP\\S : (m<|a).b   [sigma(iv) 5,6]
9- T S : a.((m<|a).b)   [sigma(i) 4,8]
closed: 9 <= 7
    a.((m<|a).b) <= (a.(m<|a)).b   by associativity
    <= m.b   by property (1)
";
    assert_eq!(r.render(), expected);
    println!("criterion 3 (golden derivation): PASS");
}

#[test]
fn criterion_4_branch_rule_elimination() {
    // every associative-preset theorem of criteria 1-3 also proves with
    // the branching rule disabled
    let no_beta = ExpandOpts {
        beta_enabled: false,
        ..ExpandOpts::default()
    };
    let mut checked = 0;
    for (ant, succ) in reduction_laws() {
        for spec in [CalculusSpec::L, CalculusSpec::LP, CalculusSpec::LPCE] {
            if run(&ant, succ, &spec).theorem {
                let r = run_opts(&ant, succ, &spec, &no_beta);
                assert!(
                    r.theorem,
                    "{ant:?} => {succ} in {spec} lost under --no-beta"
                );
                checked += 1;
            }
        }
    }
    for (ant, succ, spec) in [
        (vec!["Y", "X/Y"], "X", CalculusSpec::LP),
        (vec!["NP", r"(NP\S)/NP"], "S/NP", CalculusSpec::L),
        (vec!["X"], "X", CalculusSpec::L),
    ] {
        assert!(run(&ant, succ, &spec).theorem);
        assert!(run_opts(&ant, succ, &spec, &no_beta).theorem);
        checked += 1;
    }
    println!("criterion 4 (branch-rule elimination on {checked} associative theorems): PASS");
}

/// All sequents over `atoms` with at most `total_connectives` connectives
/// across the whole sequent and at most `max_antecedents` antecedents.
fn total_bounded_sequents(
    atoms: &[Atom],
    total_connectives: usize,
    max_antecedents: usize,
) -> Vec<Sequent> {
    let cats = categories_up_to(atoms, total_connectives);
    let mut out = Vec::new();
    fn rec(
        cats: &[Category],
        budget: usize,
        slots_left: usize,
        acc: &mut Vec<Category>,
        out: &mut Vec<Sequent>,
    ) {
        if !acc.is_empty() {
            for succ in cats {
                if succ.connectives() <= budget {
                    out.push(Sequent::new(acc.clone(), succ.clone()));
                }
            }
        }
        if slots_left == 0 {
            return;
        }
        for c in cats {
            let cost = c.connectives();
            if cost > budget {
                continue;
            }
            acc.push(c.clone());
            rec(cats, budget - cost, slots_left - 1, acc, out);
            acc.pop();
        }
    }
    rec(&cats, total_connectives, max_antecedents, &mut Vec::new(), &mut out);
    out
}

struct DifferentialOutcome {
    sequents: usize,
    tableau: Vec<Vec<bool>>,
}

/// Run tableau and oracle over the sequent set for the given presets,
/// asserting the agreement discipline per preset kind.
fn differential(
    sequents: &[Sequent],
    presets: &[CalculusSpec],
    filtered: bool,
) -> DifferentialOutcome {
    let opts = ExpandOpts::default();
    let mut tableau = vec![Vec::with_capacity(sequents.len()); presets.len()];
    for seq in sequents {
        for (i, spec) in presets.iter().enumerate() {
            if filtered
                && !spec.contractive
                && !spec.expansive
                && !count_filter(&seq.antecedent, &seq.succedent)
            {
                tableau[i].push(false);
                continue;
            }
            let r = prove(&seq.antecedent, &seq.succedent, spec, &opts, None)
                .unwrap_or_else(|e| panic!("{seq} in {spec}: {e}"));
            let verdict = oracle_prove(seq, spec, ORACLE_DEPTH);
            match verdict {
                Verdict::Proved => assert!(
                    r.theorem,
                    "oracle proves, tableau refutes: {seq} in {spec}"
                ),
                Verdict::Refuted => assert!(
                    !r.theorem,
                    "oracle refutes, tableau proves: {seq} in {spec}"
                ),
                Verdict::Unknown => {}
            }
            tableau[i].push(r.theorem);
        }
    }
    DifferentialOutcome {
        sequents: sequents.len(),
        tableau,
    }
}

#[test]
fn criterion_5_oracle_equivalence() {
    let started = Instant::now();
    let atoms = vec![Atom::new("NP").unwrap(), Atom::new("S").unwrap()];

    // full preset matrix on the small exhaustive space
    let small = total_bounded_sequents(&atoms, 2, 2);
    let presets: Vec<CalculusSpec> = CalculusSpec::PRESETS.iter().map(|(_, s)| *s).collect();
    let small_out = differential(&small, &presets, false);

    // deeper space for the decidable presets, count-filter applied the way
    // the enumeration contract states
    let deep = total_bounded_sequents(&atoms, 3, 3);
    let decidable = [CalculusSpec::NL, CalculusSpec::L, CalculusSpec::LP];
    let mut deep_checked = 0;
    let opts = ExpandOpts::default();
    for seq in &deep {
        if !count_filter(&seq.antecedent, &seq.succedent) {
            continue;
        }
        deep_checked += 1;
        for spec in &decidable {
            let r = prove(&seq.antecedent, &seq.succedent, spec, &opts, None)
                .unwrap_or_else(|e| panic!("{seq} in {spec}: {e}"));
            match oracle_prove(seq, spec, ORACLE_DEPTH) {
                Verdict::Proved => {
                    assert!(r.theorem, "oracle proves, tableau refutes: {seq} in {spec}")
                }
                Verdict::Refuted => {
                    assert!(!r.theorem, "oracle refutes, tableau proves: {seq} in {spec}")
                }
                Verdict::Unknown => panic!("oracle undecided on {seq} in {spec}"),
            }
        }
    }

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 300.0,
        "differential suite took {elapsed:?}, expected < 5 min"
    );
    println!(
        "criterion 5 (oracle equivalence: {} sequents x 6 presets, {} filtered sequents x 3 presets, {elapsed:?}): PASS",
        small_out.sequents, deep_checked
    );
}

/// Deterministic xorshift generator for the property samples.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    fn token(&mut self, depth: u32) -> Token {
        if depth == 0 {
            match self.next() % 5 {
                0 => Token::ground("a"),
                1 => Token::ground("b"),
                2 => Token::ground("c"),
                3 => Token::ground("m"),
                _ => Token::Identity,
            }
        } else {
            match self.next() % 4 {
                0 => compose(self.token(depth - 1), self.token(depth - 1)),
                1 => right_residual(self.token(depth - 1), self.token(depth - 1)),
                2 => left_residual(self.token(depth - 1), self.token(depth - 1)),
                _ => self.token(0),
            }
        }
    }
}

#[test]
fn criterion_6_algebra_properties() {
    let presets: Vec<CalculusSpec> = CalculusSpec::PRESETS.iter().map(|(_, s)| *s).collect();
    for spec in &presets {
        let mut rng = Rng(0x5eed_0001);
        for i in 0..1000 {
            let x = rng.token(2);
            let y = rng.token(2);
            let z = rng.token(1);

            // properties (1)-(4) and reflexivity
            assert!(
                leq(&compose(y.clone(), right_residual(x.clone(), y.clone())), &x, spec, LEQ_BUDGET),
                "(1) failed on {y}.({x}<|{y}) in {spec}"
            );
            assert!(
                leq(&compose(left_residual(x.clone(), y.clone()), y.clone()), &x, spec, LEQ_BUDGET),
                "(1L) failed in {spec}"
            );
            assert!(
                leq(&Token::Identity, &right_residual(x.clone(), x.clone()), spec, LEQ_BUDGET),
                "(2) failed on 1 <= {x}<|{x} in {spec}"
            );
            assert!(
                leq(
                    &compose(right_residual(x.clone(), y.clone()), z.clone()),
                    &right_residual(compose(x.clone(), z.clone()), y.clone()),
                    spec,
                    LEQ_BUDGET
                ),
                "(3) failed in {spec} on x={x} y={y} z={z}"
            );
            assert!(
                leq(
                    &right_residual(right_residual(x.clone(), y.clone()), z.clone()),
                    &right_residual(x.clone(), compose(y.clone(), z.clone())),
                    spec,
                    LEQ_BUDGET
                ),
                "(4) failed in {spec} on x={x} y={y} z={z}"
            );
            assert!(leq(&x, &x, spec, LEQ_BUDGET), "reflexivity failed on {x}");

            // normalize idempotence
            let n1 = normalize(&x, spec).unwrap();
            assert_eq!(normalize(&n1, spec).unwrap(), n1, "idempotence on {x} in {spec}");

            // transitivity on a constructed descending/ascending triple:
            // d.(y<|d) <= y <= y.(w<|w)
            let d = Token::ground("d");
            let w = Token::ground("w");
            let below = compose(d.clone(), right_residual(y.clone(), d.clone()));
            let above = compose(y.clone(), right_residual(w.clone(), w.clone()));
            assert!(leq(&below, &y, spec, LEQ_BUDGET));
            assert!(leq(&y, &above, spec, LEQ_BUDGET));
            assert!(
                leq(&below, &above, spec, LEQ_BUDGET),
                "transitivity failed in {spec} on {below} <= {above}"
            );

            // preset-specific inequations on ground tokens, where truth
            // depends exactly on the frame property
            let g1 = Token::ground("p");
            let g2 = Token::ground("q");
            let gg = compose(g1.clone(), g1.clone());
            assert_eq!(
                leq(&gg, &g1, spec, LEQ_BUDGET),
                spec.contractive,
                "contraction inequation mismatch in {spec}"
            );
            assert_eq!(
                leq(&g1, &gg, spec, LEQ_BUDGET),
                spec.expansive,
                "expansion inequation mismatch in {spec}"
            );
            assert_eq!(
                leq(
                    &compose(g1.clone(), g2.clone()),
                    &compose(g2.clone(), g1.clone()),
                    spec,
                    LEQ_BUDGET
                ),
                spec.commutative,
                "operand swap mismatch in {spec}"
            );

            // keep the loop honest about sample count
            let _ = i;
        }
    }
    println!("criterion 6 (algebra property suite, 1000 samples x 6 presets): PASS");
}

#[test]
fn criterion_7_hierarchy_monotonicity() {
    let atoms = vec![Atom::new("NP").unwrap(), Atom::new("S").unwrap()];
    let sequents = total_bounded_sequents(&atoms, 2, 2);
    let presets: Vec<CalculusSpec> = CalculusSpec::PRESETS.iter().map(|(_, s)| *s).collect();
    let opts = ExpandOpts::default();
    let mut results = vec![Vec::with_capacity(sequents.len()); presets.len()];
    for seq in &sequents {
        for (i, spec) in presets.iter().enumerate() {
            let r = prove(&seq.antecedent, &seq.succedent, spec, &opts, None)
                .unwrap_or_else(|e| panic!("{seq} in {spec}: {e}"));
            results[i].push(r.theorem);
        }
    }
    // NL -> L -> LP -> LPC -> LPCE and LP -> LPE -> LPCE
    let edges = [(0usize, 1usize), (1, 2), (2, 3), (2, 4), (3, 5), (4, 5)];
    for (weak, strong) in edges {
        for (k, seq) in sequents.iter().enumerate() {
            assert!(
                !results[weak][k] || results[strong][k],
                "monotonicity violated on {seq}: {} proves, {} refutes",
                presets[weak].name(),
                presets[strong].name()
            );
        }
    }
    println!(
        "criterion 7 (hierarchy monotonicity over {} sequents): PASS",
        sequents.len()
    );
}

#[test]
fn criterion_8_count_filter_soundness() {
    let atoms = vec![Atom::new("NP").unwrap(), Atom::new("S").unwrap()];
    let sequents = total_bounded_sequents(&atoms, 3, 3);
    let mut rejected = 0;
    for seq in &sequents {
        if count_filter(&seq.antecedent, &seq.succedent) {
            continue;
        }
        rejected += 1;
        // LP is the strongest of the filtered calculi; if it cannot prove
        // the sequent, neither can L or NL
        let verdict = oracle_prove(seq, &CalculusSpec::LP, ORACLE_DEPTH);
        assert_ne!(
            verdict,
            Verdict::Proved,
            "count filter rejected the provable sequent {seq}"
        );
    }
    println!("criterion 8 (count filter sound on {rejected} rejected sequents): PASS");
}

#[test]
fn criterion_9_determinism_and_termination() {
    let mut transcripts = Vec::new();
    for round in 0..2 {
        let mut out = String::new();
        for (ant, succ) in reduction_laws() {
            for spec in [CalculusSpec::NL, CalculusSpec::L, CalculusSpec::LP] {
                let r = run(&ant, succ, &spec); // panics on resource limit
                out.push_str(&r.render());
                out.push_str(&r.stats.record());
                out.push('\n');
            }
        }
        let golden = run(&["NP", r"(NP\S)/NP"], "S/NP", &CalculusSpec::L);
        out.push_str(&golden.render());
        let heavy = run(
            &["NP", r"((NP\S)/PP)/NP", "PP", "NP"],
            "S",
            &CalculusSpec::LP,
        );
        out.push_str(&heavy.render());
        transcripts.push(out);
        let _ = round;
    }
    assert_eq!(
        transcripts[0], transcripts[1],
        "two runs differ byte-for-byte"
    );
    println!(
        "criterion 9 (determinism: {} bytes reproduced; all runs within limits): PASS",
        transcripts[0].len()
    );
}
