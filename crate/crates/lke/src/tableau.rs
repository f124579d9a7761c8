//! The labelled tableau engine: expansion rules, linear completion,
//! bounded backtracking over sigma choices, branching on subformulae, and
//! label closure.
//!
//! A sequent `A1, ..., An => B` is refuted-tested by asserting
//! `T A1*(...*An) : m` and denying `F B : m`. Non-branching rules are
//! exhausted first; sigma applications with several candidate partners
//! leave the alternatives on a choice stack that is unwound before the
//! branching rule is tried. A branch closes when it carries `T X : x` and
//! `F X : y` with `x ⊑ y` in the frame, variables instantiated from the
//! tokens of the derivation. One variable is shared by the two children
//! of a split, so instantiations must agree across them.

use std::collections::BTreeSet;
use std::fmt;

use crate::category::{Atom, Category, Polarity};
use crate::label::{
    compose, instantiations, left_residual, leq_ctx, leq_witness, normalize, right_residual,
    CalculusSpec, LeqChain, LeqCtx, NormalizeError, Substitution, Token,
};
use crate::sequent::Structure;

/// Sign of a labelled formula: asserted or denied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    T,
    F,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::T => f.write_str("T"),
            Sign::F => f.write_str("F"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AlphaRule {
    I,
    II,
    III,
}

impl fmt::Display for AlphaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaRule::I => f.write_str("alpha(i)"),
            AlphaRule::II => f.write_str("alpha(ii)"),
            AlphaRule::III => f.write_str("alpha(iii)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SigmaRule {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl fmt::Display for SigmaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SigmaRule::I => "sigma(i)",
            SigmaRule::II => "sigma(ii)",
            SigmaRule::III => "sigma(iii)",
            SigmaRule::IV => "sigma(iv)",
            SigmaRule::V => "sigma(v)",
            SigmaRule::VI => "sigma(vi)",
        };
        f.write_str(s)
    }
}

/// How a line entered the derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// One of the two initial formulae encoding the sequent (line 1).
    Sequent,
    Alpha(AlphaRule, u32),
    Sigma(SigmaRule, u32, u32),
    Beta,
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Sequent => f.write_str("sequent 1"),
            Justification::Alpha(r, p) => write!(f, "{r} {p}"),
            Justification::Sigma(r, a, b) => {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                write!(f, "{r} {lo},{hi}")
            }
            Justification::Beta => f.write_str("beta"),
        }
    }
}

/// A signed labelled formula.
#[derive(Clone, Debug)]
pub struct Slf {
    pub sign: Sign,
    pub cat: Category,
    pub label: Token,
    pub line: u32,
    pub just: Justification,
}

impl fmt::Display for Slf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}- {} {} : {}   [{}]",
            self.line, self.sign, self.cat, self.label, self.just
        )
    }
}

/// Fresh-name source for ground tokens and branch variables.
#[derive(Clone, Debug, Default)]
pub struct NameSource {
    grounds: usize,
    vars: usize,
}

// the root token is conventionally `m`; `v` prefixes variables
const GROUND_LETTERS: [char; 24] = [
    'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'n', 'o', 'p', 'q', 'r', 's', 't',
    'u', 'w', 'x', 'y', 'z',
];

impl NameSource {
    pub fn new() -> NameSource {
        NameSource::default()
    }

    pub fn fresh_ground(&mut self) -> String {
        let i = self.grounds;
        self.grounds += 1;
        let letter = GROUND_LETTERS[i % GROUND_LETTERS.len()];
        let cycle = i / GROUND_LETTERS.len();
        if cycle == 0 {
            letter.to_string()
        } else {
            format!("{letter}{cycle}")
        }
    }

    pub fn fresh_var(&mut self) -> String {
        self.vars += 1;
        format!("v{}", self.vars)
    }
}

/// Error when a non-alpha formula is fed to the alpha rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotAlphaFormula;

impl fmt::Display for NotAlphaFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("formula does not match an alpha pattern")
    }
}

impl std::error::Error for NotAlphaFormula {}

/// Error when no eligible subformula remains for branching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaExhausted;

impl fmt::Display for BetaExhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("no unexpanded subformula left for branching")
    }
}

impl std::error::Error for BetaExhausted {}

/// Engine failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    /// The derivation hit the appended-formula bound.
    ResourceLimit { appended: usize, limit: usize },
    /// Token normalization did not converge.
    Normalize(NormalizeError),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::ResourceLimit { appended, limit } => {
                write!(f, "resource limit exceeded: {appended} formulae (limit {limit})")
            }
            EngineError::Normalize(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EngineError {}

impl From<NormalizeError> for EngineError {
    fn from(e: NormalizeError) -> EngineError {
        EngineError::Normalize(e)
    }
}

/// Apply the matching alpha rule to a formula, drawing one fresh ground
/// name. Patterns: `F A\B : x`, `F A/B : x`, `T A*B : x`.
pub fn apply_alpha(
    node: &Slf,
    fresh: &mut NameSource,
) -> Result<((Sign, Category, Token), (Sign, Category, Token)), NotAlphaFormula> {
    let (rule, a, b) = alpha_shape(node).ok_or(NotAlphaFormula)?;
    let g = Token::ground(&fresh.fresh_ground());
    let x = node.label.clone();
    Ok(match rule {
        // F A\B : x  =>  T A : a, F B : a.x
        AlphaRule::I => (
            (Sign::T, a, g.clone()),
            (Sign::F, b, compose(g, x)),
        ),
        // F A/B : x  =>  T B : a, F A : x.a
        AlphaRule::II => (
            (Sign::T, b, g.clone()),
            (Sign::F, a, compose(x, g)),
        ),
        // T A*B : x  =>  T A : a, T B : x<|a
        AlphaRule::III => (
            (Sign::T, a, g.clone()),
            (Sign::T, b, right_residual(x, g)),
        ),
    })
}

fn alpha_shape(node: &Slf) -> Option<(AlphaRule, Category, Category)> {
    match (&node.sign, &node.cat) {
        (Sign::F, Category::Under(a, b)) => {
            Some((AlphaRule::I, (**a).clone(), (**b).clone()))
        }
        (Sign::F, Category::Over(a, b)) => Some((AlphaRule::II, (**a).clone(), (**b).clone())),
        (Sign::T, Category::Product(a, b)) => {
            Some((AlphaRule::III, (**a).clone(), (**b).clone()))
        }
        _ => None,
    }
}

/// Apply a sigma rule to a (major, minor) premise pair, if one matches.
/// For sigma(ii)/(iii) the minor's label is decomposed syntactically on
/// its normal form (operand swap is also tried in commutative frames); the
/// first decomposition is returned.
pub fn apply_sigma(
    major: &Slf,
    minor: &Slf,
    spec: &CalculusSpec,
) -> Result<Option<(Sign, Category, Token)>, NormalizeError> {
    for rule in sigma_rules_for(major) {
        let mut out = Vec::new();
        sigma_conclusions(major, minor, *rule, spec, &mut out)?;
        if let Some(p) = out.into_iter().next() {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

fn sigma_rules_for(major: &Slf) -> &'static [SigmaRule] {
    match (&major.sign, &major.cat) {
        (Sign::T, Category::Under(..)) => &[SigmaRule::I, SigmaRule::II],
        (Sign::T, Category::Over(..)) => &[SigmaRule::III, SigmaRule::IV],
        (Sign::F, Category::Product(..)) => &[SigmaRule::V, SigmaRule::VI],
        _ => &[],
    }
}

/// Conclusions of one sigma rule for a fixed premise pair (several are
/// possible when the minor's label decomposes in more than one way).
fn sigma_conclusions(
    major: &Slf,
    minor: &Slf,
    rule: SigmaRule,
    spec: &CalculusSpec,
    out: &mut Vec<(Sign, Category, Token)>,
) -> Result<(), NormalizeError> {
    match rule {
        // T A\B : x  +  T A : y   =>  T B : y.x
        SigmaRule::I => {
            if let (Sign::T, Category::Under(a, b)) = (&major.sign, &major.cat) {
                if minor.sign == Sign::T && minor.cat == **a {
                    out.push((
                        Sign::T,
                        (**b).clone(),
                        compose(minor.label.clone(), major.label.clone()),
                    ));
                }
            }
        }
        // T A\B : x  +  F B : y.x  =>  F A : y
        SigmaRule::II => {
            if let (Sign::T, Category::Under(a, b)) = (&major.sign, &major.cat) {
                if minor.sign == Sign::F && minor.cat == **b {
                    for y in decompose(&minor.label, &major.label, Side::Right, spec)? {
                        out.push((Sign::F, (**a).clone(), y));
                    }
                }
            }
        }
        // T A/B : x  +  F A : x.y  =>  F B : y
        SigmaRule::III => {
            if let (Sign::T, Category::Over(a, b)) = (&major.sign, &major.cat) {
                if minor.sign == Sign::F && minor.cat == **a {
                    for y in decompose(&minor.label, &major.label, Side::Left, spec)? {
                        out.push((Sign::F, (**b).clone(), y));
                    }
                }
            }
        }
        // T A/B : x  +  T B : y   =>  T A : x.y
        SigmaRule::IV => {
            if let (Sign::T, Category::Over(a, b)) = (&major.sign, &major.cat) {
                if minor.sign == Sign::T && minor.cat == **b {
                    out.push((
                        Sign::T,
                        (**a).clone(),
                        compose(major.label.clone(), minor.label.clone()),
                    ));
                }
            }
        }
        // F A*B : x  +  T A : y   =>  F B : x<|y
        SigmaRule::V => {
            if let (Sign::F, Category::Product(a, b)) = (&major.sign, &major.cat) {
                if minor.sign == Sign::T && minor.cat == **a {
                    out.push((
                        Sign::F,
                        (**b).clone(),
                        right_residual(major.label.clone(), minor.label.clone()),
                    ));
                }
            }
        }
        // F A*B : x  +  T B : y   =>  F A : x|>y
        SigmaRule::VI => {
            if let (Sign::F, Category::Product(a, b)) = (&major.sign, &major.cat) {
                if minor.sign == Sign::T && minor.cat == **b {
                    out.push((
                        Sign::F,
                        (**a).clone(),
                        left_residual(major.label.clone(), minor.label.clone()),
                    ));
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    /// the major's label is the left factor: z = x.y
    Left,
    /// the major's label is the right factor: z = y.x
    Right,
}

/// Ways to strip the factor `x` from `z`, writing `z = y.x` (Right) or
/// `z = x.y` (Left). Includes the trivial factor `y = 1` when `z = x`.
fn decompose(
    z: &Token,
    x: &Token,
    side: Side,
    spec: &CalculusSpec,
) -> Result<Vec<Token>, NormalizeError> {
    let zn = normalize(z, spec)?;
    let xn = normalize(x, spec)?;
    let mut out: Vec<Token> = Vec::new();
    let mut push = |t: Token| {
        if !out.contains(&t) {
            out.push(t);
        }
    };

    if spec.associative {
        let zc = super_chain(&zn);
        let xc = super_chain(&xn);
        if zc.len() > xc.len() {
            if spec.commutative {
                // multiset removal
                let mut rest = zc.clone();
                let mut ok = true;
                for e in &xc {
                    match rest.iter().position(|r| r == e) {
                        Some(i) => {
                            rest.remove(i);
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    push(rebuild_chain(&rest));
                }
            } else {
                match side {
                    Side::Right => {
                        if zc[zc.len() - xc.len()..] == xc[..] {
                            push(rebuild_chain(&zc[..zc.len() - xc.len()]));
                        }
                    }
                    Side::Left => {
                        if zc[..xc.len()] == xc[..] {
                            push(rebuild_chain(&zc[xc.len()..]));
                        }
                    }
                }
            }
        }
    } else {
        if let Token::Comp(z1, z2) = &zn {
            match side {
                Side::Right => {
                    if **z2 == xn {
                        push((**z1).clone());
                    }
                    if spec.commutative && **z1 == xn {
                        push((**z2).clone());
                    }
                }
                Side::Left => {
                    if **z1 == xn {
                        push((**z2).clone());
                    }
                    if spec.commutative && **z2 == xn {
                        push((**z1).clone());
                    }
                }
            }
        }
    }

    // z = x composed with the unit
    if zn == xn {
        push(Token::Identity);
    }
    Ok(out)
}

fn super_chain(t: &Token) -> Vec<Token> {
    match t {
        Token::Comp(a, b) => {
            let mut out = super_chain(a);
            out.extend(super_chain(b));
            out
        }
        _ => vec![t.clone()],
    }
}

fn rebuild_chain(elements: &[Token]) -> Token {
    match elements.len() {
        0 => Token::Identity,
        _ => {
            let mut it = elements.iter().rev();
            let mut acc = it.next().unwrap().clone();
            for e in it {
                acc = Token::Comp(Box::new(e.clone()), Box::new(acc));
            }
            acc
        }
    }
}

/// Search effort counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub rules: u64,
    pub beta: u64,
    pub backtracks: u64,
    pub leq_steps: u64,
}

impl Stats {
    pub fn record(&self) -> String {
        format!(
            "rules={} beta={} backtracks={} leq_steps={}",
            self.rules, self.beta, self.backtracks, self.leq_steps
        )
    }
}

/// Expansion options.
#[derive(Clone, Debug)]
pub struct ExpandOpts {
    pub beta_enabled: bool,
    /// Maximum nesting of branch splits; defaults to the number of
    /// distinct subformulae of the goal.
    pub beta_depth: Option<u32>,
    /// Bound on appended formulae across the whole search.
    pub slf_limit: usize,
    /// Rewrite budget per ordering query.
    pub leq_budget: u32,
}

impl Default for ExpandOpts {
    fn default() -> ExpandOpts {
        ExpandOpts {
            beta_enabled: true,
            beta_depth: None,
            slf_limit: 10_000,
            leq_budget: 64,
        }
    }
}

/// Branch status after expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Open,
    Closed,
    Exhausted,
}

/// One displayed derivation line.
#[derive(Clone, Debug)]
pub struct LineInfo {
    pub line: u32,
    pub sign: Sign,
    pub cat: String,
    pub label: String,
    pub just: String,
}

impl LineInfo {
    fn of(slf: &Slf) -> LineInfo {
        LineInfo {
            line: slf.line,
            sign: slf.sign,
            cat: slf.cat.to_string(),
            label: slf.label.to_string(),
            just: slf.just.to_string(),
        }
    }

    pub fn rule_name(&self) -> &str {
        self.just.split_whitespace().next().unwrap_or("")
    }

    pub fn premises(&self) -> Vec<u32> {
        self.just
            .split_whitespace()
            .nth(1)
            .map(|s| s.split(',').filter_map(|p| p.parse().ok()).collect())
            .unwrap_or_default()
    }
}

/// A closed branch: its lines plus the closure evidence.
#[derive(Clone, Debug)]
pub struct BranchReport {
    pub lines: Vec<LineInfo>,
    pub t_line: u32,
    pub f_line: u32,
    pub substitution: Substitution,
    pub chain: LeqChain,
    pub chain_start: Token,
}

/// Outcome of a proof search.
#[derive(Clone, Debug)]
pub struct ProofResult {
    pub theorem: bool,
    pub calculus: String,
    pub status: Status,
    pub stats: Stats,
    header: String,
    pub branches: Vec<BranchReport>,
}

impl ProofResult {
    /// Full text of the derivation (or the failure notice).
    pub fn render(&self) -> String {
        let mut out = String::new();
        if !self.theorem {
            out.push_str("NOT A THEOREM\n");
            out.push_str("searched: ");
            out.push_str(&self.stats.record());
            out.push('\n');
            return out;
        }
        out.push_str(&self.header);
        out.push('\n');
        let many = self.branches.len() > 1;
        for (i, b) in self.branches.iter().enumerate() {
            if many {
                out.push_str(&format!("-- branch {} --\n", i + 1));
            }
            for l in &b.lines {
                out.push_str(&format!(
                    "{}- {} {} : {}   [{}]\n",
                    l.line, l.sign, l.cat, l.label, l.just
                ));
            }
            out.push_str(&format!("closed: {} <= {}", b.t_line, b.f_line));
            if !b.substitution.is_empty() {
                let subs: Vec<String> = b
                    .substitution
                    .iter()
                    .map(|(v, t)| format!("{v} := {t}"))
                    .collect();
                out.push_str(&format!(" with {}", subs.join(", ")));
            }
            out.push('\n');
            for (lhs, rhs) in &b.chain.unfoldings {
                out.push_str(&format!("    residuation: {lhs} <= {rhs}\n"));
            }
            if b.chain.steps.is_empty() {
                out.push_str("    by reflexivity\n");
            } else {
                for (i, s) in b.chain.steps.iter().enumerate() {
                    if i == 0 {
                        out.push_str(&format!(
                            "    {} <= {}   by {}\n",
                            b.chain_start, s.token, s.label
                        ));
                    } else {
                        out.push_str(&format!("    <= {}   by {}\n", s.token, s.label));
                    }
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct Choice {
    trunc_len: usize,
    alpha_cursor: usize,
    fired: BTreeSet<(u32, SigmaRule)>,
    names: NameSource,
    major: u32,
    rule: SigmaRule,
    tried: usize,
}

#[derive(Clone)]
struct Candidate {
    sub: Substitution,
    reports: Vec<BranchReport>,
}

/// The derivation tree under construction. Exploration is depth-first:
/// the struct holds the current branch; splits are explored by appending
/// a child formula, recursing and truncating back.
pub struct Tableau {
    spec: CalculusSpec,
    header: String,
    lines: Vec<Slf>,
    alpha_cursor: usize,
    fired: BTreeSet<(u32, SigmaRule)>,
    choices: Vec<Choice>,
    names: NameSource,
    beta_done: Vec<Category>,
    universe: Vec<Category>,
    appended: usize,
    opts: ExpandOpts,
    stats: Stats,
    leq: LeqCtx,
    pub status: Status,
}

impl Tableau {
    /// Tableau for `antecedents => succedent`. The antecedent becomes one
    /// product formula sharing the root token `m` with the denied
    /// succedent; bracketing defaults to right-nested.
    pub fn for_sequent(
        antecedents: &[Category],
        succedent: &Category,
        spec: &CalculusSpec,
        bracketing: Option<&Structure>,
    ) -> Tableau {
        assert!(!antecedents.is_empty(), "antecedent must be nonempty");
        let product = match bracketing {
            Some(st) => {
                assert_eq!(
                    st.leaves().len(),
                    antecedents.len(),
                    "bracketing arity mismatch"
                );
                st.product()
            }
            None => Structure::right_nested(antecedents).product(),
        };
        let header = format!("1- F {product} |- {succedent}   [{}]", spec.name());
        let m = Token::ground("m");
        Tableau::with_initial(
            header,
            vec![
                (Sign::T, product, m.clone()),
                (Sign::F, succedent.clone(), m),
            ],
            spec,
        )
    }

    /// Tableau from explicit initial formulae (they are numbered from 2;
    /// line 1 is the statement being refuted).
    pub fn with_initial(
        header: String,
        initial: Vec<(Sign, Category, Token)>,
        spec: &CalculusSpec,
    ) -> Tableau {
        let mut universe = Vec::new();
        for (_, c, _) in &initial {
            for s in c.subformulae() {
                if !universe.contains(&s) {
                    universe.push(s);
                }
            }
        }
        let mut t = Tableau {
            spec: *spec,
            header,
            lines: Vec::new(),
            alpha_cursor: 0,
            fired: BTreeSet::new(),
            choices: Vec::new(),
            names: NameSource::new(),
            beta_done: Vec::new(),
            universe,
            appended: 0,
            opts: ExpandOpts::default(),
            stats: Stats::default(),
            leq: LeqCtx::new(),
            status: Status::Open,
        };
        for (sign, cat, label) in initial {
            t.push_line(sign, cat, label, Justification::Sequent)
                .expect("initial formulae exceed the resource limit");
        }
        t
    }

    pub fn lines(&self) -> &[Slf] {
        &self.lines
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    pub fn spec(&self) -> &CalculusSpec {
        &self.spec
    }

    fn push_line(
        &mut self,
        sign: Sign,
        cat: Category,
        label: Token,
        just: Justification,
    ) -> Result<u32, EngineError> {
        self.appended += 1;
        if self.appended > self.opts.slf_limit {
            return Err(EngineError::ResourceLimit {
                appended: self.appended,
                limit: self.opts.slf_limit,
            });
        }
        debug_assert!(
            self.universe.contains(&cat),
            "subformula property violated: {cat}"
        );
        let line = self.lines.len() as u32 + 2;
        self.lines.push(Slf {
            sign,
            cat,
            label,
            line,
            just,
        });
        Ok(line)
    }

    fn contains(&self, sign: Sign, cat: &Category, label: &Token) -> bool {
        self.lines
            .iter()
            .any(|l| l.sign == sign && l.cat == *cat && l.label == *label)
    }

    /// Exhaust alpha rules from the cursor onward. Returns a closure
    /// candidate as soon as a freshly added line closes against the
    /// branch, variable-free labels only.
    fn alpha_complete(&mut self) -> Result<Option<Candidate>, EngineError> {
        while self.alpha_cursor < self.lines.len() {
            let idx = self.alpha_cursor;
            self.alpha_cursor += 1;
            if alpha_shape(&self.lines[idx]).is_none() {
                continue;
            }
            let premise = self.lines[idx].line;
            let node = self.lines[idx].clone();
            let (p1, p2) = apply_alpha(&node, &mut self.names).expect("checked alpha shape");
            let rule = match alpha_shape(&node).unwrap().0 {
                r => r,
            };
            self.stats.rules += 1;
            for (sign, cat, label) in [p1, p2] {
                let line = self.push_line(sign, cat, label, Justification::Alpha(rule, premise))?;
                if let Some(c) = self.eager_closure(line)? {
                    return Ok(Some(c));
                }
            }
        }
        Ok(None)
    }

    /// Ground closure test for one new line against all earlier lines.
    fn eager_closure(&mut self, new_line: u32) -> Result<Option<Candidate>, EngineError> {
        let idx = (new_line - 2) as usize;
        let new = self.lines[idx].clone();
        if new.label.has_vars() {
            return Ok(None);
        }
        for j in 0..idx {
            let old = &self.lines[j];
            if old.cat != new.cat || old.sign == new.sign || old.label.has_vars() {
                continue;
            }
            let (t, f) = match new.sign {
                Sign::T => (&new, old),
                Sign::F => (old, &new),
            };
            let budget = self.opts.leq_budget;
            if leq_ctx(&mut self.leq, &t.label, &f.label, &self.spec, budget) {
                let report = self.report(t.line, f.line, &Substitution::new());
                return Ok(Some(Candidate {
                    sub: Substitution::new(),
                    reports: vec![report],
                }));
            }
        }
        Ok(None)
    }

    fn report(&mut self, t_line: u32, f_line: u32, sub: &Substitution) -> BranchReport {
        let t = &self.lines[(t_line - 2) as usize];
        let f = &self.lines[(f_line - 2) as usize];
        let x = t.label.substitute(sub);
        let y = f.label.substitute(sub);
        let chain = leq_witness(&x, &y, &self.spec, self.opts.leq_budget).unwrap_or_default();
        BranchReport {
            lines: self.lines.iter().map(LineInfo::of).collect(),
            t_line,
            f_line,
            substitution: sub.clone(),
            chain,
            chain_start: x,
        }
    }

    /// Fire the first unfired sigma application in (line, rule) order,
    /// stacking untried alternatives. `Ok(None)` means quiescence.
    fn sigma_step(&mut self) -> Result<Option<Option<Candidate>>, EngineError> {
        for idx in 0..self.lines.len() {
            let major = self.lines[idx].clone();
            for &rule in sigma_rules_for(&major) {
                let key = (major.line, rule);
                if self.fired.contains(&key) {
                    continue;
                }
                let options = self.sigma_options(&major, rule)?;
                if options.is_empty() {
                    continue;
                }
                let choice = Choice {
                    trunc_len: self.lines.len(),
                    alpha_cursor: self.alpha_cursor,
                    fired: self.fired.clone(),
                    names: self.names.clone(),
                    major: major.line,
                    rule,
                    tried: 1,
                };
                self.fired.insert(key);
                self.choices.push(choice);
                let closed = self.fire(&options[0], rule, major.line)?;
                return Ok(Some(closed));
            }
        }
        Ok(None)
    }

    fn fire(
        &mut self,
        option: &(u32, (Sign, Category, Token)),
        rule: SigmaRule,
        major_line: u32,
    ) -> Result<Option<Candidate>, EngineError> {
        let (minor_line, (sign, cat, label)) = option.clone();
        self.stats.rules += 1;
        let line = self.push_line(
            sign,
            cat,
            label,
            Justification::Sigma(rule, major_line, minor_line),
        )?;
        self.eager_closure(line)
    }

    /// Candidate (minor, conclusion) pairs for a sigma rule, minors in
    /// line order, conclusions already on the branch skipped.
    fn sigma_options(
        &self,
        major: &Slf,
        rule: SigmaRule,
    ) -> Result<Vec<(u32, (Sign, Category, Token))>, EngineError> {
        let mut out = Vec::new();
        for minor in &self.lines {
            if minor.line == major.line {
                continue;
            }
            let mut protos = Vec::new();
            sigma_conclusions(major, minor, rule, &self.spec, &mut protos)?;
            for p in protos {
                if !self.contains(p.0, &p.1, &p.2) {
                    out.push((minor.line, p));
                }
            }
        }
        Ok(out)
    }

    /// Variable-free subterm pool of the branch, plus the unit.
    fn token_pool(&self) -> Vec<Token> {
        let mut pool = vec![Token::Identity];
        for l in &self.lines {
            for t in l.label.subterms() {
                if !t.has_vars() && !pool.contains(&t) {
                    pool.push(t);
                }
            }
        }
        pool
    }

    /// Full closure scan at quiescence: every T/F pair of the same
    /// category, variables instantiated from the derivation pool.
    fn closure_candidates(&mut self) -> Vec<Candidate> {
        const CAP: usize = 32;
        let pairs: Vec<(u32, u32)> = {
            let mut v = Vec::new();
            for t in &self.lines {
                if t.sign != Sign::T {
                    continue;
                }
                for f in &self.lines {
                    if f.sign == Sign::F && f.cat == t.cat {
                        v.push((t.line, f.line));
                    }
                }
            }
            v.sort_unstable();
            v
        };
        let pool = self.token_pool();
        let mut out: Vec<Candidate> = Vec::new();
        for (t_line, f_line) in pairs {
            let t = self.lines[(t_line - 2) as usize].label.clone();
            let f = self.lines[(f_line - 2) as usize].label.clone();
            if !t.has_vars() && !f.has_vars() {
                if leq_ctx(&mut self.leq, &t, &f, &self.spec, self.opts.leq_budget) {
                    let report = self.report(t_line, f_line, &Substitution::new());
                    // an unconditional closure subsumes every candidate
                    return vec![Candidate {
                        sub: Substitution::new(),
                        reports: vec![report],
                    }];
                }
                continue;
            }
            let mut subs = Vec::new();
            instantiations(
                &mut self.leq,
                (&t, &f),
                &self.spec,
                &pool,
                self.opts.leq_budget,
                CAP,
                &mut subs,
            );
            for sub in subs {
                if out.len() >= CAP {
                    break;
                }
                if out.iter().any(|c| c.sub == sub) {
                    continue;
                }
                let report = self.report(t_line, f_line, &sub);
                out.push(Candidate {
                    sub,
                    reports: vec![report],
                });
            }
        }
        out
    }

    /// Subformulae of the branch not yet split on, smallest first.
    pub fn beta_candidates(&self) -> Vec<Category> {
        let mut pool = Vec::new();
        for l in &self.lines {
            for s in l.cat.subformulae() {
                if !pool.contains(&s) {
                    pool.push(s);
                }
            }
        }
        pool.retain(|c| !self.beta_done.contains(c));
        pool.sort_by(|a, b| {
            a.size()
                .cmp(&b.size())
                .then_with(|| a.to_string().cmp(&b.to_string()))
        });
        pool
    }

    /// Split the branch on a subformula, returning the two child
    /// formulae, which share one fresh variable.
    pub fn apply_beta(
        &mut self,
        sub: &Category,
    ) -> Result<((Sign, Category, Token), (Sign, Category, Token)), BetaExhausted> {
        if !self.beta_candidates().contains(sub) {
            return Err(BetaExhausted);
        }
        let v = Token::var(&self.names.fresh_var());
        self.beta_done.push(sub.clone());
        self.stats.beta += 1;
        Ok((
            (Sign::T, sub.clone(), v.clone()),
            (Sign::F, sub.clone(), v),
        ))
    }

    /// Run alpha and sigma expansion on the current branch until it is
    /// linearly complete or a ground closure is found.
    pub fn linear_completion(&mut self) -> Result<(), EngineError> {
        loop {
            if self.alpha_complete()?.is_some() {
                self.status = Status::Closed;
                return Ok(());
            }
            match self.sigma_step()? {
                Some(Some(_)) => {
                    self.status = Status::Closed;
                    return Ok(());
                }
                Some(None) => continue,
                None => return Ok(()),
            }
        }
    }

    /// Full expansion: linear completion, closure with instantiation,
    /// bounded sigma backtracking, then branching.
    pub fn expand(&mut self, opts: &ExpandOpts) -> Result<ProofResult, EngineError> {
        self.opts = opts.clone();
        let depth = opts
            .beta_depth
            .unwrap_or(self.universe.len() as u32);
        let candidates = self.search_branch(depth)?;
        let theorem = !candidates.is_empty();
        self.status = if theorem {
            Status::Closed
        } else {
            Status::Exhausted
        };
        self.stats.leq_steps = self.leq.steps_spent;
        Ok(ProofResult {
            theorem,
            calculus: self.spec.name(),
            status: self.status,
            stats: self.stats,
            header: self.header.clone(),
            branches: candidates
                .into_iter()
                .next()
                .map(|c| c.reports)
                .unwrap_or_default(),
        })
    }

    fn search_branch(&mut self, beta_depth: u32) -> Result<Vec<Candidate>, EngineError> {
        let choices_floor = self.choices.len();
        loop {
            if let Some(c) = self.alpha_complete()? {
                self.choices.truncate(choices_floor);
                return Ok(vec![c]);
            }
            match self.sigma_step()? {
                Some(Some(c)) => {
                    self.choices.truncate(choices_floor);
                    return Ok(vec![c]);
                }
                Some(None) => continue,
                None => {
                    let cands = self.closure_candidates();
                    if !cands.is_empty() {
                        self.choices.truncate(choices_floor);
                        return Ok(cands);
                    }
                    // quiescent but open: unwind sigma choices
                    match self.backtrack_sigma_above(choices_floor)? {
                        Some(Some(c)) => {
                            self.choices.truncate(choices_floor);
                            return Ok(vec![c]);
                        }
                        Some(None) => continue,
                        None => break,
                    }
                }
            }
        }
        // sigma choices exhausted on this branch: branch on a subformula
        let result = if self.opts.beta_enabled && beta_depth > 0 {
            self.beta_stage(beta_depth)?
        } else {
            Vec::new()
        };
        self.choices.truncate(choices_floor);
        Ok(result)
    }

    /// Unwind the sigma choice stack down to `floor`: truncate to the most
    /// recent choice point that still has an untried alternative and fire
    /// it.
    fn backtrack_sigma_above(
        &mut self,
        floor: usize,
    ) -> Result<Option<Option<Candidate>>, EngineError> {
        while self.choices.len() > floor {
            let mut choice = self.choices.pop().unwrap();
            self.lines.truncate(choice.trunc_len);
            self.alpha_cursor = choice.alpha_cursor;
            self.fired = choice.fired.clone();
            self.names = choice.names.clone();
            let major = self
                .lines
                .iter()
                .find(|l| l.line == choice.major)
                .expect("choice major on branch")
                .clone();
            let options = self.sigma_options(&major, choice.rule)?;
            if choice.tried < options.len() {
                let opt = options[choice.tried].clone();
                choice.tried += 1;
                let rule = choice.rule;
                self.fired.insert((choice.major, rule));
                self.choices.push(choice);
                self.stats.backtracks += 1;
                let closed = self.fire(&opt, rule, major.line)?;
                return Ok(Some(closed));
            }
        }
        Ok(None)
    }

    fn beta_stage(&mut self, beta_depth: u32) -> Result<Vec<Candidate>, EngineError> {
        // smallest unexpanded subformula; further splits happen nested in
        // the children, next-smallest first
        let Some(cand) = self.beta_candidates().into_iter().next() else {
            return Ok(Vec::new());
        };
        let frame_lines = self.lines.len();
        let frame_cursor = self.alpha_cursor;
        let frame_fired = self.fired.clone();
        let var = Token::var(&self.names.fresh_var());
        self.beta_done.push(cand.clone());
        self.stats.beta += 1;

        let side = |tab: &mut Tableau, sign: Sign| -> Result<Vec<Candidate>, EngineError> {
            tab.push_line(sign, cand.clone(), var.clone(), Justification::Beta)?;
            // children restart combination bookkeeping; duplicates are
            // suppressed at append time
            tab.fired = BTreeSet::new();
            let out = tab.search_branch(beta_depth - 1);
            tab.lines.truncate(frame_lines);
            tab.alpha_cursor = frame_cursor;
            tab.fired = frame_fired.clone();
            out
        };

        let t_cands = side(self, Sign::T)?;
        let joined = if t_cands.is_empty() {
            Vec::new()
        } else {
            let f_cands = side(self, Sign::F)?;
            join(&t_cands, &f_cands)
        };
        self.beta_done.pop();
        Ok(joined)
    }
}

fn join(a: &[Candidate], b: &[Candidate]) -> Vec<Candidate> {
    const CAP: usize = 32;
    let mut out: Vec<Candidate> = Vec::new();
    for ca in a {
        for cb in b {
            if out.len() >= CAP {
                return out;
            }
            if let Some(sub) = merge(&ca.sub, &cb.sub) {
                if out.iter().any(|c| c.sub == sub) {
                    continue;
                }
                let mut reports = ca.reports.clone();
                reports.extend(cb.reports.clone());
                out.push(Candidate { sub, reports });
            }
        }
    }
    out
}

fn merge(a: &Substitution, b: &Substitution) -> Option<Substitution> {
    let mut out = a.clone();
    for (k, v) in b {
        match out.get(k) {
            Some(existing) if existing != v => return None,
            _ => {
                out.insert(k.clone(), v.clone());
            }
        }
    }
    Some(out)
}

/// Prove `antecedents => succedent` in the given calculus.
pub fn prove(
    antecedents: &[Category],
    succedent: &Category,
    spec: &CalculusSpec,
    opts: &ExpandOpts,
    bracketing: Option<&Structure>,
) -> Result<ProofResult, EngineError> {
    let mut tab = Tableau::for_sequent(antecedents, succedent, spec, bracketing);
    tab.expand(opts)
}

/// Sound non-theoremhood filter for the calculi without contraction or
/// expansion: every atom's net signed count over the sequent must vanish.
pub fn count_filter(antecedents: &[Category], succedent: &Category) -> bool {
    let mut atoms: BTreeSet<Atom> = BTreeSet::new();
    for c in antecedents.iter().chain(std::iter::once(succedent)) {
        atoms.extend(c.atoms());
    }
    for atom in atoms {
        let ant: i64 = antecedents
            .iter()
            .map(|c| c.atom_count(&atom, Polarity::Positive))
            .sum();
        let net = ant - succedent.atom_count(&atom, Polarity::Positive);
        if net != 0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::parse_category;

    fn cat(s: &str) -> Category {
        parse_category(s).unwrap()
    }

    fn cats(ss: &[&str]) -> Vec<Category> {
        ss.iter().map(|s| cat(s)).collect()
    }

    fn run(ant: &[&str], succ: &str, spec: &CalculusSpec) -> ProofResult {
        prove(&cats(ant), &cat(succ), spec, &ExpandOpts::default(), None).unwrap()
    }

    #[test]
    fn alpha_rules_match_their_patterns() {
        let mut names = NameSource::new();
        // T NP*((NP\S)/NP) : m  =>  T NP : a, T (NP\S)/NP : m<|a
        let node = Slf {
            sign: Sign::T,
            cat: cat(r"NP*((NP\S)/NP)"),
            label: Token::ground("m"),
            line: 2,
            just: Justification::Sequent,
        };
        let (p1, p2) = apply_alpha(&node, &mut names).unwrap();
        assert_eq!(p1, (Sign::T, cat("NP"), Token::ground("a")));
        assert_eq!(
            p2,
            (
                Sign::T,
                cat(r"(NP\S)/NP"),
                right_residual(Token::ground("m"), Token::ground("a"))
            )
        );
        // F NP\S : x  =>  T NP : b, F S : b.x
        let node = Slf {
            sign: Sign::F,
            cat: cat(r"NP\S"),
            label: Token::ground("x"),
            line: 3,
            just: Justification::Sequent,
        };
        let (p1, p2) = apply_alpha(&node, &mut names).unwrap();
        assert_eq!(p1, (Sign::T, cat("NP"), Token::ground("b")));
        assert_eq!(
            p2,
            (
                Sign::F,
                cat("S"),
                compose(Token::ground("b"), Token::ground("x"))
            )
        );
        // F S/NP : m  =>  T NP : c, F S : m.c
        let node = Slf {
            sign: Sign::F,
            cat: cat("S/NP"),
            label: Token::ground("m"),
            line: 3,
            just: Justification::Sequent,
        };
        let (p1, p2) = apply_alpha(&node, &mut names).unwrap();
        assert_eq!(p1, (Sign::T, cat("NP"), Token::ground("c")));
        assert_eq!(
            p2,
            (
                Sign::F,
                cat("S"),
                compose(Token::ground("m"), Token::ground("c"))
            )
        );
        // atoms do not match
        let node = Slf {
            sign: Sign::T,
            cat: cat("S"),
            label: Token::ground("m"),
            line: 2,
            just: Justification::Sequent,
        };
        assert!(apply_alpha(&node, &mut names).is_err());
    }

    fn slf(sign: Sign, c: &str, label: Token, line: u32) -> Slf {
        Slf {
            sign,
            cat: cat(c),
            label,
            line,
            just: Justification::Sequent,
        }
    }

    #[test]
    fn sigma_rules_match_their_patterns() {
        let spec = CalculusSpec::L;
        let m_a = right_residual(Token::ground("m"), Token::ground("a"));
        // sigma(iv): T (NP\S)/NP : m<|a + T NP : b => T NP\S : (m<|a).b
        let major = slf(Sign::T, r"(NP\S)/NP", m_a.clone(), 5);
        let minor = slf(Sign::T, "NP", Token::ground("b"), 6);
        let got = apply_sigma(&major, &minor, &spec).unwrap().unwrap();
        assert_eq!(
            got,
            (
                Sign::T,
                cat(r"NP\S"),
                compose(m_a.clone(), Token::ground("b"))
            )
        );
        // sigma(i): T NP\S : (m<|a).b + T NP : a => T S : a.((m<|a).b)
        let label = compose(m_a.clone(), Token::ground("b"));
        let major = slf(Sign::T, r"NP\S", label.clone(), 8);
        let minor = slf(Sign::T, "NP", Token::ground("a"), 4);
        let got = apply_sigma(&major, &minor, &spec).unwrap().unwrap();
        assert_eq!(
            got,
            (Sign::T, cat("S"), compose(Token::ground("a"), label))
        );
        // sigma(iv) proving function application: T X/Y : n + T Y : m<|n
        let major = slf(Sign::T, "X/Y", Token::ground("n"), 4);
        let minor = slf(
            Sign::T,
            "Y",
            right_residual(Token::ground("m"), Token::ground("n")),
            5,
        );
        let got = apply_sigma(&major, &minor, &spec).unwrap().unwrap();
        assert_eq!(
            got,
            (
                Sign::T,
                cat("X"),
                compose(
                    Token::ground("n"),
                    right_residual(Token::ground("m"), Token::ground("n"))
                )
            )
        );
        // non-matching pair
        let major = slf(Sign::T, "X/Y", Token::ground("n"), 4);
        let minor = slf(Sign::T, "Z", Token::ground("k"), 5);
        assert_eq!(apply_sigma(&major, &minor, &spec).unwrap(), None);
    }

    #[test]
    fn beta_splits_and_exhausts() {
        let mut tab = Tableau::for_sequent(
            &cats(&["NP", r"NP\S"]),
            &cat("S"),
            &CalculusSpec::NL,
            None,
        );
        let pool = tab.beta_candidates();
        assert_eq!(pool[0], cat("NP")); // smallest first, render order
        let ((s1, c1, v1), (s2, c2, v2)) = tab.apply_beta(&cat("NP")).unwrap();
        assert_eq!((s1, s2), (Sign::T, Sign::F));
        assert_eq!(c1, c2);
        assert_eq!(v1, v2); // one shared variable
        assert_eq!(v1, Token::var("v1"));
        // the same subformula cannot be split twice on a branch
        assert!(tab.apply_beta(&cat("NP")).is_err());
        // next-smallest is chosen next
        assert_eq!(tab.beta_candidates()[0], cat("S"));
    }

    #[test]
    fn linear_completion_reproduces_left_composition() {
        // Z\Y, Y\X => Z\X runs lines 2..9 and closes on (9, 7)
        let mut tab = Tableau::for_sequent(
            &cats(&[r"Z\Y", r"Y\X"]),
            &cat(r"Z\X"),
            &CalculusSpec::L,
            None,
        );
        tab.linear_completion().unwrap();
        let lines = tab.lines();
        let rendered: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
        assert_eq!(
            rendered,
            vec![
                r"2- T (Z\Y)*(Y\X) : m   [sequent 1]",
                r"3- F Z\X : m   [sequent 1]",
                r"4- T Z\Y : a   [alpha(iii) 2]",
                r"5- T Y\X : m<|a   [alpha(iii) 2]",
                r"6- T Z : b   [alpha(i) 3]",
                r"7- F X : b.m   [alpha(i) 3]",
                r"8- T Y : b.a   [sigma(i) 4,6]",
                r"9- T X : (b.a).(m<|a)   [sigma(i) 5,8]",
            ]
        );
        assert_eq!(tab.status, Status::Closed);
    }

    #[test]
    fn linear_completion_leaves_atoms_alone() {
        let mut tab = Tableau::for_sequent(&cats(&["S"]), &cat("NP"), &CalculusSpec::L, None);
        tab.linear_completion().unwrap();
        assert_eq!(tab.lines().len(), 2);
    }

    #[test]
    fn application_closes_without_branching() {
        for spec in [CalculusSpec::NL, CalculusSpec::L, CalculusSpec::LPCE] {
            let r = run(&["X/Y", "Y"], "X", &spec);
            assert!(r.theorem, "{spec}");
            assert_eq!(r.stats.beta, 0, "{spec}");
        }
    }

    #[test]
    fn left_composition_closes_without_branching() {
        let r = run(&[r"Z\Y", r"Y\X"], r"Z\X", &CalculusSpec::L);
        assert!(r.theorem);
        assert_eq!(r.stats.beta, 0);
    }

    #[test]
    fn identity_closes_in_every_preset() {
        for (_, spec) in CalculusSpec::PRESETS {
            let r = run(&["X"], "X", &spec);
            assert!(r.theorem, "{spec}");
        }
    }

    #[test]
    fn worked_derivation_matches_the_text() {
        let r = run(&["NP", r"(NP\S)/NP"], "S/NP", &CalculusSpec::L);
        assert!(r.theorem);
        assert_eq!(r.branches.len(), 1);
        let b = &r.branches[0];
        let rules: Vec<&str> = b.lines.iter().map(|l| l.rule_name()).collect();
        assert_eq!(
            rules,
            vec![
                "sequent",
                "sequent",
                "alpha(iii)",
                "alpha(iii)",
                "alpha(ii)",
                "alpha(ii)",
                "sigma(iv)",
                "sigma(i)"
            ]
        );
        let labels: Vec<&str> = b.lines.iter().map(|l| l.label.as_str()).collect();
        assert_eq!(
            labels,
            vec![
                "m",
                "m",
                "a",
                "m<|a",
                "b",
                "m.b",
                "(m<|a).b",
                "a.((m<|a).b)"
            ]
        );
        assert_eq!(b.lines[6].premises(), vec![5, 6]);
        assert_eq!(b.lines[7].premises(), vec![4, 8]);
        assert_eq!((b.t_line, b.f_line), (9, 7));
        // closure runs by associativity then property (1)
        let step_labels: Vec<String> =
            b.chain.steps.iter().map(|s| s.label.to_string()).collect();
        assert_eq!(step_labels, vec!["associativity", "property (1)"]);
        assert_eq!(b.chain.steps[0].token.to_string(), "(a.(m<|a)).b");
        assert_eq!(b.chain.steps[1].token.to_string(), "m.b");
    }

    #[test]
    fn permutation_separates_l_from_lp() {
        assert!(!run(&["Y", "X/Y"], "X", &CalculusSpec::L).theorem);
        assert!(!run(&["Y", "X/Y"], "X", &CalculusSpec::NL).theorem);
        assert!(run(&["Y", "X/Y"], "X", &CalculusSpec::LP).theorem);
    }

    #[test]
    fn rebracketing_separates_nl_from_l() {
        assert!(run(&[r"(Z\X)/Y"], r"Z\(X/Y)", &CalculusSpec::L).theorem);
        assert!(!run(&[r"(Z\X)/Y"], r"Z\(X/Y)", &CalculusSpec::NL).theorem);
    }

    #[test]
    fn contraction_separates_lp_from_lpc() {
        assert!(run(&["X"], "X*X", &CalculusSpec::LPC).theorem);
        assert!(!run(&["X"], "X*X", &CalculusSpec::LP).theorem);
        assert!(!run(&["X"], "X*X", &CalculusSpec::LPE).theorem);
        assert!(run(&["X"], "X*X", &CalculusSpec::LPCE).theorem);
    }

    #[test]
    fn lifting_closes_in_nl() {
        assert!(run(&["X"], r"Y/(X\Y)", &CalculusSpec::NL).theorem);
        assert!(run(&["X"], r"(Y/X)\Y", &CalculusSpec::NL).theorem);
    }

    #[test]
    fn explicit_bracketing_matters_in_nl() {
        let ant = cats(&["X", r"X\Y", r"Y\Z"]);
        let succ = cat("Z");
        // ((X X\Y) Y\Z) derives Z; the right-nested default does not
        let good = crate::sequent::parse_bracketing("(( .. .. ) .. )", &ant).unwrap();
        let r = prove(
            &ant,
            &succ,
            &CalculusSpec::NL,
            &ExpandOpts::default(),
            Some(&good),
        )
        .unwrap();
        assert!(r.theorem);
        let r = prove(&ant, &succ, &CalculusSpec::NL, &ExpandOpts::default(), None).unwrap();
        assert!(!r.theorem);
    }

    #[test]
    fn count_filter_examples() {
        assert!(count_filter(&cats(&["NP", r"(NP\S)/NP"]), &cat("S/NP")));
        assert!(!count_filter(&cats(&["NP"]), &cat("S")));
        assert!(!count_filter(&cats(&["X"]), &cat("X*X")));
    }

    #[test]
    fn resource_limit_is_reported() {
        let opts = ExpandOpts {
            slf_limit: 2,
            ..ExpandOpts::default()
        };
        let err = prove(
            &cats(&["NP", r"(NP\S)/NP"]),
            &cat("S/NP"),
            &CalculusSpec::L,
            &opts,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, EngineError::ResourceLimit { .. }));
    }

    #[test]
    fn deterministic_output() {
        let a = run(&["NP", r"(NP\S)/NP"], "S/NP", &CalculusSpec::L);
        let b = run(&["NP", r"(NP\S)/NP"], "S/NP", &CalculusSpec::L);
        assert_eq!(a.render(), b.render());
        assert_eq!(a.stats, b.stats);
    }
}
