//! Information-token expressions and the labelling algebra.
//!
//! Tokens label formulae in a derivation. Composition `x.y` tracks how
//! resources combine; the residuals `x<|y` (right) and `x|>y` (left) are
//! the greatest tokens whose composition with `y` on the stated side stays
//! below `x`. The ordering `x ⊑ y` ("y is at least as informative as x")
//! is decided by a bounded rewrite search whose step rules depend on the
//! calculus: associativity, commutativity, contraction and expansion are
//! properties of the frame, not of the proof rules.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

/// An information-token expression.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    /// The unit `1`.
    Identity,
    /// A ground token introduced by an alpha rule (or the sequent root).
    Ground(String),
    /// A universally quantified variable introduced by the beta rule.
    Var(String),
    /// Composition `x.y`.
    Comp(Box<Token>, Box<Token>),
    /// Right residual `x<|y`: greatest `z` with `y.z ⊑ x`.
    RightRes(Box<Token>, Box<Token>),
    /// Left residual `x|>y`: greatest `z` with `z.y ⊑ x`.
    LeftRes(Box<Token>, Box<Token>),
}

impl Token {
    pub fn ground(name: &str) -> Token {
        Token::Ground(name.to_string())
    }

    pub fn var(name: &str) -> Token {
        Token::Var(name.to_string())
    }

    /// Stable textual key; also the rendering.
    pub fn key(&self) -> String {
        self.to_string()
    }

    pub fn has_vars(&self) -> bool {
        match self {
            Token::Identity | Token::Ground(_) => false,
            Token::Var(_) => true,
            Token::Comp(a, b) | Token::RightRes(a, b) | Token::LeftRes(a, b) => {
                a.has_vars() || b.has_vars()
            }
        }
    }

    /// Variable names occurring in `self`, sorted.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn walk(t: &Token, out: &mut BTreeSet<String>) {
            match t {
                Token::Var(n) => {
                    out.insert(n.clone());
                }
                Token::Comp(a, b) | Token::RightRes(a, b) | Token::LeftRes(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                _ => {}
            }
        }
        walk(self, &mut out);
        out
    }

    /// All subterms, self included, pre-order.
    pub fn subterms(&self) -> Vec<Token> {
        let mut out = Vec::new();
        fn walk(t: &Token, out: &mut Vec<Token>) {
            if !out.contains(t) {
                out.push(t.clone());
            }
            match t {
                Token::Comp(a, b) | Token::RightRes(a, b) | Token::LeftRes(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                _ => {}
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn substitute(&self, sub: &Substitution) -> Token {
        match self {
            Token::Var(n) => sub.get(n).cloned().unwrap_or_else(|| self.clone()),
            Token::Comp(a, b) => compose(a.substitute(sub), b.substitute(sub)),
            Token::RightRes(a, b) => {
                Token::RightRes(Box::new(a.substitute(sub)), Box::new(b.substitute(sub)))
            }
            Token::LeftRes(a, b) => {
                Token::LeftRes(Box::new(a.substitute(sub)), Box::new(b.substitute(sub)))
            }
            _ => self.clone(),
        }
    }

    fn is_compound(&self) -> bool {
        matches!(
            self,
            Token::Comp(..) | Token::RightRes(..) | Token::LeftRes(..)
        )
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(t: &Token, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if t.is_compound() {
                write!(f, "(")?;
                go(t, f)?;
                write!(f, ")")
            } else {
                go(t, f)
            }
        }
        fn go(t: &Token, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Token::Identity => write!(f, "1"),
                Token::Ground(n) | Token::Var(n) => f.write_str(n),
                Token::Comp(a, b) => {
                    operand(a, f)?;
                    write!(f, ".")?;
                    operand(b, f)
                }
                Token::RightRes(a, b) => {
                    operand(a, f)?;
                    write!(f, "<|")?;
                    operand(b, f)
                }
                Token::LeftRes(a, b) => {
                    operand(a, f)?;
                    write!(f, "|>")?;
                    operand(b, f)
                }
            }
        }
        go(self, f)
    }
}

/// Frame properties selecting the calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CalculusSpec {
    pub associative: bool,
    pub commutative: bool,
    pub contractive: bool,
    pub expansive: bool,
    pub monotonic: bool,
}

impl CalculusSpec {
    pub const NL: CalculusSpec = CalculusSpec::new(false, false, false, false, false);
    pub const L: CalculusSpec = CalculusSpec::new(true, false, false, false, false);
    pub const LP: CalculusSpec = CalculusSpec::new(true, true, false, false, false);
    pub const LPC: CalculusSpec = CalculusSpec::new(true, true, true, false, false);
    pub const LPE: CalculusSpec = CalculusSpec::new(true, true, false, true, false);
    pub const LPCE: CalculusSpec = CalculusSpec::new(true, true, true, true, false);

    pub const PRESETS: [(&'static str, CalculusSpec); 6] = [
        ("NL", CalculusSpec::NL),
        ("L", CalculusSpec::L),
        ("LP", CalculusSpec::LP),
        ("LPC", CalculusSpec::LPC),
        ("LPE", CalculusSpec::LPE),
        ("LPCE", CalculusSpec::LPCE),
    ];

    pub const fn new(
        associative: bool,
        commutative: bool,
        contractive: bool,
        expansive: bool,
        monotonic: bool,
    ) -> CalculusSpec {
        CalculusSpec {
            associative,
            commutative,
            contractive,
            expansive,
            monotonic,
        }
    }

    pub fn preset(name: &str) -> Option<CalculusSpec> {
        Self::PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, s)| *s)
    }

    pub fn name(&self) -> String {
        for (n, s) in Self::PRESETS {
            if s == *self {
                return n.to_string();
            }
        }
        format!(
            "custom(assoc={},comm={},contr={},exp={},mono={})",
            self.associative, self.commutative, self.contractive, self.expansive, self.monotonic
        )
    }
}

impl fmt::Display for CalculusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A mapping from variable names to variable-free tokens.
pub type Substitution = BTreeMap<String, Token>;

/// Compose two tokens. Unit laws are applied at construction; nothing else.
pub fn compose(x: Token, y: Token) -> Token {
    match (x, y) {
        (Token::Identity, y) => y,
        (x, Token::Identity) => x,
        (x, y) => Token::Comp(Box::new(x), Box::new(y)),
    }
}

/// `x <| y`: the greatest `z` with `y.z ⊑ x`.
pub fn right_residual(x: Token, y: Token) -> Token {
    Token::RightRes(Box::new(x), Box::new(y))
}

/// `x |> y`: the greatest `z` with `z.y ⊑ x`.
pub fn left_residual(x: Token, y: Token) -> Token {
    Token::LeftRes(Box::new(x), Box::new(y))
}

// ---------------------------------------------------------------------------
// Canonical forms
// ---------------------------------------------------------------------------

/// Flatten a composition spine into its element list.
fn chain(t: &Token) -> Vec<Token> {
    match t {
        Token::Comp(a, b) => {
            let mut out = chain(a);
            out.extend(chain(b));
            out
        }
        _ => vec![t.clone()],
    }
}

/// Rebuild a right-nested composition from elements.
fn rebuild(elements: &[Token]) -> Token {
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

/// Equality-preserving canonical form: unit laws, right-nested flattening
/// of composition chains under associativity, operand sorting under
/// commutativity. Residual-by-unit collapses (`x<|1 = x`).
fn canon(t: &Token, spec: &CalculusSpec) -> Token {
    match t {
        Token::Identity | Token::Ground(_) | Token::Var(_) => t.clone(),
        Token::RightRes(a, b) => {
            let a = canon(a, spec);
            let b = canon(b, spec);
            if b == Token::Identity {
                a
            } else {
                Token::RightRes(Box::new(a), Box::new(b))
            }
        }
        Token::LeftRes(a, b) => {
            let a = canon(a, spec);
            let b = canon(b, spec);
            if b == Token::Identity {
                a
            } else {
                Token::LeftRes(Box::new(a), Box::new(b))
            }
        }
        Token::Comp(a, b) => {
            let a = canon(a, spec);
            let b = canon(b, spec);
            if a == Token::Identity {
                return b;
            }
            if b == Token::Identity {
                return a;
            }
            if spec.associative {
                let mut elements = chain(&a);
                elements.extend(chain(&b));
                if spec.commutative {
                    elements.sort_by_key(|e| e.key());
                }
                rebuild(&elements)
            } else if spec.commutative {
                if a.key() <= b.key() {
                    Token::Comp(Box::new(a), Box::new(b))
                } else {
                    Token::Comp(Box::new(b), Box::new(a))
                }
            } else {
                Token::Comp(Box::new(a), Box::new(b))
            }
        }
    }
}

/// Signed ground-name profile. Invariant under the unit laws, properties
/// (1)-(4), associativity and commutativity, so a mismatch refutes `x ⊑ y`
/// outright in the presets without contraction/expansion/monotonicity.
fn ground_profile(t: &Token, sign: i64, out: &mut BTreeMap<String, i64>) {
    match t {
        Token::Identity => {}
        Token::Ground(n) | Token::Var(n) => {
            *out.entry(n.clone()).or_insert(0) += sign;
        }
        Token::Comp(a, b) => {
            ground_profile(a, sign, out);
            ground_profile(b, sign, out);
        }
        Token::RightRes(a, b) | Token::LeftRes(a, b) => {
            ground_profile(a, sign, out);
            ground_profile(b, -sign, out);
        }
    }
}

fn profiles_match(x: &Token, y: &Token) -> bool {
    let mut px = BTreeMap::new();
    let mut py = BTreeMap::new();
    ground_profile(x, 1, &mut px);
    ground_profile(y, 1, &mut py);
    px.retain(|_, v| *v != 0);
    py.retain(|_, v| *v != 0);
    px == py
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

/// Error from `normalize`: the rewrite did not reach a fixed point within
/// the pass limit. Signals a pathological token; surfaced by proof search
/// as a resource failure, never silently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizeError {
    pub passes: u32,
}

impl fmt::Display for NormalizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "normalization exceeded {} rewrite passes", self.passes)
    }
}

impl std::error::Error for NormalizeError {}

const NORMALIZE_PASS_LIMIT: u32 = 32;

/// One reduction sweep: contract property-(1) redexes at positive
/// positions. Returns the reduct if anything fired.
fn reduce_once(t: &Token, spec: &CalculusSpec) -> Option<Token> {
    // chain-level reduction under associativity
    if spec.associative {
        if let Token::Comp(..) = t {
            let elements = chain(t);
            if let Some(next) = reduce_elements(&elements, spec) {
                return Some(rebuild(&next));
            }
        }
    }
    match t {
        Token::Comp(a, b) => {
            // binary property (1) redexes
            if let Token::RightRes(x, y) = &**b {
                if y.as_ref() == a.as_ref() {
                    return Some((**x).clone());
                }
            }
            if let Token::LeftRes(x, y) = &**a {
                if y.as_ref() == b.as_ref() {
                    return Some((**x).clone());
                }
            }
            if let Some(a2) = reduce_once(a, spec) {
                return Some(Token::Comp(Box::new(a2), b.clone()));
            }
            if let Some(b2) = reduce_once(b, spec) {
                return Some(Token::Comp(a.clone(), Box::new(b2)));
            }
            None
        }
        // numerators are positive positions; denominators are not reduced
        Token::RightRes(a, b) => reduce_once(a, spec)
            .map(|a2| Token::RightRes(Box::new(a2), b.clone())),
        Token::LeftRes(a, b) => reduce_once(a, spec)
            .map(|a2| Token::LeftRes(Box::new(a2), b.clone())),
        _ => None,
    }
}

/// Property-(1) reduction over a flattened chain: a residual element
/// consumes its denominator when the denominator's elements sit directly
/// to the expected side (any position under commutativity).
fn reduce_elements(elements: &[Token], spec: &CalculusSpec) -> Option<Vec<Token>> {
    for (j, e) in elements.iter().enumerate() {
        match e {
            Token::RightRes(x, d) => {
                let den = chain(d);
                if !spec.commutative {
                    if j >= den.len() && elements[j - den.len()..j] == den[..] {
                        let mut out = elements[..j - den.len()].to_vec();
                        out.push((**x).clone());
                        out.extend_from_slice(&elements[j + 1..]);
                        return Some(out);
                    }
                } else if let Some(out) = consume_multiset(elements, j, &den, x) {
                    return Some(out);
                }
            }
            Token::LeftRes(x, d) => {
                let den = chain(d);
                if !spec.commutative {
                    if j + den.len() < elements.len()
                        && elements[j + 1..j + 1 + den.len()] == den[..]
                    {
                        let mut out = elements[..j].to_vec();
                        out.push((**x).clone());
                        out.extend_from_slice(&elements[j + 1 + den.len()..]);
                        return Some(out);
                    }
                } else if let Some(out) = consume_multiset(elements, j, &den, x) {
                    return Some(out);
                }
            }
            _ => {}
        }
    }
    None
}

/// Commutative-mode property-(1): remove one copy of every denominator
/// element from the rest of the chain and replace the residual by its
/// numerator.
fn consume_multiset(
    elements: &[Token],
    j: usize,
    den: &[Token],
    num: &Token,
) -> Option<Vec<Token>> {
    let mut rest: Vec<(usize, &Token)> = elements
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != j)
        .collect();
    let mut used = Vec::new();
    for d in den {
        let pos = rest.iter().position(|(_, e)| *e == d)?;
        used.push(rest.remove(pos).0);
        let _ = used.last();
    }
    let mut out: Vec<Token> = Vec::with_capacity(elements.len() - den.len());
    for (i, e) in elements.iter().enumerate() {
        if i == j {
            out.push(num.clone());
        } else if !used.contains(&i) {
            out.push(e.clone());
        }
    }
    Some(out)
}

/// Canonical representative of `t` for the given calculus: unit laws,
/// chain flattening/sorting as licensed, and property-(1) reductions run
/// to a fixed point.
pub fn normalize(t: &Token, spec: &CalculusSpec) -> Result<Token, NormalizeError> {
    let mut cur = canon(t, spec);
    for _ in 0..NORMALIZE_PASS_LIMIT {
        match reduce_once(&cur, spec) {
            Some(next) => cur = canon(&next, spec),
            None => return Ok(cur),
        }
    }
    Err(NormalizeError {
        passes: NORMALIZE_PASS_LIMIT,
    })
}

// ---------------------------------------------------------------------------
// The ordering decision
// ---------------------------------------------------------------------------

/// Name of the fact justifying a rewrite step, for proof display.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepLabel {
    Unit,
    Associativity,
    Commutativity,
    Property1,
    Property2,
    Property3,
    Property4,
    Contraction,
    Expansion,
    Monotonicity,
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StepLabel::Unit => "unit",
            StepLabel::Associativity => "associativity",
            StepLabel::Commutativity => "commutativity",
            StepLabel::Property1 => "property (1)",
            StepLabel::Property2 => "property (2)",
            StepLabel::Property3 => "property (3)",
            StepLabel::Property4 => "property (4)",
            StepLabel::Contraction => "contraction",
            StepLabel::Expansion => "expansion",
            StepLabel::Monotonicity => "monotonicity",
        };
        f.write_str(s)
    }
}

/// One displayed link of a `⊑` witness chain.
#[derive(Clone, Debug)]
pub struct LeqStep {
    pub label: StepLabel,
    pub token: Token,
}

/// A witness for `x ⊑ y`.
#[derive(Clone, Debug, Default)]
pub struct LeqChain {
    /// Residuation unfoldings applied to the goal before the chain:
    /// `x ⊑ n<|d` was replaced by `d.x ⊑ n` (left residuals analogously).
    pub unfoldings: Vec<(Token, Token)>,
    /// The chain itself, starting from the (canonicalized) left side.
    pub steps: Vec<LeqStep>,
}

pub(crate) struct LeqCtx {
    memo: HashMap<(String, String), bool>,
    pub steps_spent: u64,
}

impl LeqCtx {
    pub fn new() -> LeqCtx {
        LeqCtx {
            memo: HashMap::new(),
            steps_spent: 0,
        }
    }
}

struct Edge {
    token: Token,
    steps: Vec<LeqStep>,
}

/// Decide `x ⊑ y` with at most `budget` search expansions. Both tokens
/// must be variable-free. A `false` return means "not derivable within
/// budget": sound for theoremhood, incomplete for non-derivability.
pub fn leq(x: &Token, y: &Token, spec: &CalculusSpec, budget: u32) -> bool {
    let mut ctx = LeqCtx::new();
    leq_ctx(&mut ctx, x, y, spec, budget)
}

pub(crate) fn leq_ctx(
    ctx: &mut LeqCtx,
    x: &Token,
    y: &Token,
    spec: &CalculusSpec,
    budget: u32,
) -> bool {
    debug_assert!(!x.has_vars() && !y.has_vars());
    let key = (x.key(), y.key());
    if let Some(v) = ctx.memo.get(&key) {
        return *v;
    }
    let res = search(ctx, x, y, spec, budget).is_some();
    ctx.memo.insert(key, res);
    res
}

/// As `leq`, but returns the witness chain on success.
pub fn leq_witness(x: &Token, y: &Token, spec: &CalculusSpec, budget: u32) -> Option<LeqChain> {
    let mut ctx = LeqCtx::new();
    search(&mut ctx, x, y, spec, budget)
}

/// Unfold residuals on the right of the goal:
/// `x ⊑ n<|d  iff  d.x ⊑ n` and `x ⊑ n|>d  iff  x.d ⊑ n`.
fn unfold_goal(x: &Token, y: &Token, spec: &CalculusSpec) -> (Token, Token, Vec<(Token, Token)>) {
    let mut lhs = canon(x, spec);
    let mut rhs = canon(y, spec);
    let mut trail = Vec::new();
    loop {
        match rhs.clone() {
            Token::RightRes(n, d) => {
                lhs = canon(&compose((*d).clone(), lhs), spec);
                rhs = canon(&n, spec);
                trail.push((lhs.clone(), rhs.clone()));
            }
            Token::LeftRes(n, d) => {
                lhs = canon(&compose(lhs, (*d).clone()), spec);
                rhs = canon(&n, spec);
                trail.push((lhs.clone(), rhs.clone()));
            }
            _ => break,
        }
    }
    (lhs, rhs, trail)
}

fn search(
    ctx: &mut LeqCtx,
    x: &Token,
    y: &Token,
    spec: &CalculusSpec,
    budget: u32,
) -> Option<LeqChain> {
    let x0 = canon(x, spec);
    let y0 = canon(y, spec);

    if x0 == y0 {
        let steps = if x.key() != x0.key() {
            vec![LeqStep {
                label: StepLabel::Associativity,
                token: x0,
            }]
        } else {
            Vec::new()
        };
        return Some(LeqChain {
            unfoldings: Vec::new(),
            steps,
        });
    }

    // For a residual-rooted goal, try a short chain before unfolding
    // rewrites it: one step up from the left side, one step down from the
    // right, or both. This covers the root-level uses of properties (3)
    // and (4), which are pinned to the root in non-associative frames and
    // would be lost under unfolding.
    if matches!(y0, Token::RightRes(..) | Token::LeftRes(..)) {
        let pool = step_pool(&x0, &y0);
        let ups = neighbours(&x0, spec, &pool, Direction::Up);
        let downs = neighbours(&y0, spec, &pool, Direction::Down);
        let hop = |e: &Edge| LeqStep {
            label: e.steps.first().map(|s| s.label).unwrap_or(StepLabel::Unit),
            token: y0.clone(),
        };
        for d in &downs {
            if d.token == x0 {
                return Some(LeqChain {
                    unfoldings: Vec::new(),
                    steps: vec![hop(d)],
                });
            }
        }
        for u in &ups {
            if u.token == y0 {
                return Some(LeqChain {
                    unfoldings: Vec::new(),
                    steps: u.steps.clone(),
                });
            }
        }
        for u in &ups {
            for d in &downs {
                if u.token == d.token {
                    let mut steps = u.steps.clone();
                    steps.push(hop(d));
                    return Some(LeqChain {
                        unfoldings: Vec::new(),
                        steps,
                    });
                }
            }
        }
    }

    let (start, target, unfoldings) = unfold_goal(x, y, spec);

    // conservative profile check: sound refuter for the structural-rule-free
    // presets
    if !spec.contractive && !spec.expansive && !spec.monotonic && !profiles_match(&start, &target)
    {
        return None;
    }

    let mut prefix = Vec::new();
    if unfoldings.is_empty() && x.key() != start.key() {
        // canonicalization changed the left side's shape: flattening is
        // reassociation, element reordering is commutation
        let flat_unsorted = canon(x, &CalculusSpec::new(spec.associative, false, false, false, false));
        if flat_unsorted.key() != x.key() {
            prefix.push(LeqStep {
                label: StepLabel::Associativity,
                token: flat_unsorted.clone(),
            });
        }
        if flat_unsorted.key() != start.key() {
            prefix.push(LeqStep {
                label: StepLabel::Commutativity,
                token: start.clone(),
            });
        }
    }

    if start == target {
        return Some(LeqChain {
            unfoldings,
            steps: prefix,
        });
    }

    let pool = step_pool(&start, &target);

    // accepting set: the target plus a one-step downward neighbourhood;
    // reaching a token u with u ⊑ target closes the chain with one final hop
    let mut accept: HashMap<String, Vec<LeqStep>> = HashMap::new();
    accept.insert(target.key(), Vec::new());
    for edge in neighbours(&target, spec, &pool, Direction::Down) {
        let k = edge.token.key();
        if k == target.key() {
            continue;
        }
        let label = edge.steps.first().map(|s| s.label).unwrap_or(StepLabel::Unit);
        accept.entry(k).or_insert_with(|| {
            vec![LeqStep {
                label,
                token: target.clone(),
            }]
        });
    }

    // breadth-first search upward from the start; a path ending exactly at
    // the target is preferred over one ending a single hop below it
    let mut queue = VecDeque::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut states: Vec<(Token, Option<(usize, Vec<LeqStep>)>)> = Vec::new();
    seen.insert(start.key(), 0);
    states.push((start.clone(), None));
    queue.push_back(0usize);

    let reconstruct = |states: &[(Token, Option<(usize, Vec<LeqStep>)>)],
                       id: usize,
                       tail: &[LeqStep]|
     -> LeqChain {
        let mut rev: Vec<Vec<LeqStep>> = Vec::new();
        let mut cursor = id;
        while let Some((parent, s)) = states[cursor].1.clone() {
            rev.push(s);
            cursor = parent;
        }
        let mut steps = prefix.clone();
        for s in rev.into_iter().rev() {
            steps.extend(s);
        }
        steps.extend(tail.to_vec());
        LeqChain {
            unfoldings: unfoldings.clone(),
            steps,
        }
    };

    let mut fallback: Option<LeqChain> = None;
    if let Some(tail) = accept.get(&start.key()) {
        fallback = Some(reconstruct(&states, 0, tail));
    }

    let mut expansions = 0u32;
    while let Some(idx) = queue.pop_front() {
        if expansions >= budget {
            break;
        }
        expansions += 1;
        ctx.steps_spent += 1;
        let cur = states[idx].0.clone();
        for edge in neighbours(&cur, spec, &pool, Direction::Up) {
            let k = edge.token.key();
            if seen.contains_key(&k) {
                continue;
            }
            let id = states.len();
            seen.insert(k.clone(), id);
            states.push((edge.token.clone(), Some((idx, edge.steps.clone()))));
            if k == target.key() {
                return Some(reconstruct(&states, id, &[]));
            }
            if fallback.is_none() {
                if let Some(tail) = accept.get(&k) {
                    fallback = Some(reconstruct(&states, id, tail));
                }
            }
            queue.push_back(id);
        }
    }
    fallback
}

/// Candidate tokens for rule parameters (property-(2) introductions and
/// inverse steps): subterms of the goal pair plus the unit.
fn step_pool(x: &Token, y: &Token) -> Vec<Token> {
    let mut pool = vec![Token::Identity];
    for t in x.subterms().into_iter().chain(y.subterms()) {
        if !pool.contains(&t) {
            pool.push(t);
        }
    }
    pool
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Up,
    Down,
}

impl Direction {
    fn flip(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }
}

/// A local rewrite presented for display: intermediate tokens (regrouping
/// steps) followed by the result, each tagged with its justification.
type StepSeq = Vec<(StepLabel, Token)>;

/// Enumerate one-step neighbours of `t` in the given direction: tokens
/// `u` with `t ⊑ u` (up) or `u ⊑ t` (down), by one rule application at a
/// congruence position. Denominator positions flip the direction; the
/// associativity-dependent properties (3) and (4) apply only at the root
/// unless the frame is associative.
fn neighbours(t: &Token, spec: &CalculusSpec, pool: &[Token], dir: Direction) -> Vec<Edge> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    collect(t, spec, pool, dir, true, &mut |seq: StepSeq| {
        let (_, raw) = seq.last().expect("nonempty step sequence");
        let c = canon(raw, spec);
        if c == *t {
            return;
        }
        if seen.insert(c.key()) {
            out.push(Edge {
                steps: seq
                    .iter()
                    .map(|(label, token)| LeqStep {
                        label: *label,
                        token: token.clone(),
                    })
                    .collect(),
                token: c,
            });
        }
    });
    out
}

/// Walk all positions of `t`, invoking local rules; `emit` receives whole
/// rewritten tokens (display sequence, result last).
fn collect(
    t: &Token,
    spec: &CalculusSpec,
    pool: &[Token],
    dir: Direction,
    at_root: bool,
    emit: &mut dyn FnMut(StepSeq),
) {
    let p34_ok = spec.associative || at_root;
    match dir {
        Direction::Up => up_rules(t, spec, pool, p34_ok, emit),
        Direction::Down => down_rules(t, spec, pool, p34_ok, emit),
    }
    let wrap = |seq: StepSeq, f: &dyn Fn(Token) -> Token| -> StepSeq {
        seq.into_iter().map(|(l, tok)| (l, f(tok))).collect()
    };
    match t {
        Token::Comp(a, b) => {
            collect(a, spec, pool, dir, false, &mut |seq| {
                let b = b.clone();
                emit(wrap(seq, &move |na| Token::Comp(Box::new(na), b.clone())))
            });
            collect(b, spec, pool, dir, false, &mut |seq| {
                let a = a.clone();
                emit(wrap(seq, &move |nb| Token::Comp(a.clone(), Box::new(nb))))
            });
        }
        Token::RightRes(a, b) => {
            collect(a, spec, pool, dir, false, &mut |seq| {
                let b = b.clone();
                emit(wrap(seq, &move |na| {
                    Token::RightRes(Box::new(na), b.clone())
                }))
            });
            // denominators are antitone
            collect(b, spec, pool, dir.flip(), false, &mut |seq| {
                let a = a.clone();
                emit(wrap(seq, &move |nb| {
                    Token::RightRes(a.clone(), Box::new(nb))
                }))
            });
        }
        Token::LeftRes(a, b) => {
            collect(a, spec, pool, dir, false, &mut |seq| {
                let b = b.clone();
                emit(wrap(seq, &move |na| Token::LeftRes(Box::new(na), b.clone())))
            });
            collect(b, spec, pool, dir.flip(), false, &mut |seq| {
                let a = a.clone();
                emit(wrap(seq, &move |nb| Token::LeftRes(a.clone(), Box::new(nb))))
            });
        }
        _ => {}
    }
}

fn up_rules(
    t: &Token,
    spec: &CalculusSpec,
    pool: &[Token],
    p34_ok: bool,
    emit: &mut dyn FnMut(StepSeq),
) {
    let one = |label: StepLabel, tok: Token| vec![(label, tok)];

    // property (2) at the unit: 1 ⊑ w<|w and 1 ⊑ w|>w
    if *t == Token::Identity {
        for w in pool {
            if *w == Token::Identity {
                continue;
            }
            emit(one(
                StepLabel::Property2,
                right_residual(w.clone(), w.clone()),
            ));
            emit(one(
                StepLabel::Property2,
                left_residual(w.clone(), w.clone()),
            ));
        }
    }

    // unit introductions composed with property (2): u ⊑ u.(w<|w) etc.
    for w in pool {
        if *w == Token::Identity {
            continue;
        }
        for res in [
            right_residual(w.clone(), w.clone()),
            left_residual(w.clone(), w.clone()),
        ] {
            emit(one(
                StepLabel::Property2,
                Token::Comp(Box::new(t.clone()), Box::new(res.clone())),
            ));
            emit(one(
                StepLabel::Property2,
                Token::Comp(Box::new(res), Box::new(t.clone())),
            ));
        }
    }

    if spec.expansive {
        emit(one(
            StepLabel::Expansion,
            Token::Comp(Box::new(t.clone()), Box::new(t.clone())),
        ));
    }
    if spec.monotonic {
        for w in pool {
            if *w == Token::Identity {
                continue;
            }
            emit(one(
                StepLabel::Monotonicity,
                Token::Comp(Box::new(t.clone()), Box::new(w.clone())),
            ));
        }
    }

    match t {
        Token::Comp(a, b) => {
            // property (1), binary forms
            if let Token::RightRes(x, y) = &**b {
                if y.as_ref() == a.as_ref() {
                    emit(one(StepLabel::Property1, (**x).clone()));
                }
            }
            if let Token::LeftRes(x, y) = &**a {
                if y.as_ref() == b.as_ref() {
                    emit(one(StepLabel::Property1, (**x).clone()));
                }
            }
            if !spec.associative {
                if spec.contractive && a == b {
                    emit(one(StepLabel::Contraction, (**a).clone()));
                }
                if p34_ok {
                    if let Token::RightRes(x, y) = &**a {
                        // (x<|y).z ⊑ (x.z)<|y
                        emit(one(
                            StepLabel::Property3,
                            right_residual(compose((**x).clone(), (**b).clone()), (**y).clone()),
                        ));
                    }
                    if let Token::LeftRes(x, y) = &**b {
                        // z.(x|>y) ⊑ (z.x)|>y
                        emit(one(
                            StepLabel::Property3,
                            left_residual(compose((**a).clone(), (**x).clone()), (**y).clone()),
                        ));
                    }
                }
            } else {
                chain_up_rules(t, spec, emit);
            }
        }
        Token::RightRes(a, z) if p34_ok => {
            if let Token::RightRes(x, y) = &**a {
                // (x<|y)<|z ⊑ x<|(y.z)
                emit(one(
                    StepLabel::Property4,
                    right_residual((**x).clone(), compose((**y).clone(), (**z).clone())),
                ));
            }
        }
        Token::LeftRes(a, z) if p34_ok => {
            if let Token::LeftRes(x, y) = &**a {
                // (x|>y)|>z ⊑ x|>(z.y)
                emit(one(
                    StepLabel::Property4,
                    left_residual((**x).clone(), compose((**z).clone(), (**y).clone())),
                ));
            }
        }
        _ => {}
    }
}

/// Upward rules over a flattened chain (associative frames).
fn chain_up_rules(t: &Token, spec: &CalculusSpec, emit: &mut dyn FnMut(StepSeq)) {
    let elements = chain(t);
    let n = elements.len();
    let one = |label: StepLabel, tok: Token| vec![(label, tok)];

    // property (1) on segments / multisets, displayed the way a proof
    // would write it: reorder, regroup, reduce
    if let Some(seq) = p1_display(&elements, spec) {
        emit(seq);
    }

    // contraction: merge two equal elements
    if spec.contractive {
        for i in 0..n {
            let adjacent_ok = i + 1 < n && elements[i] == elements[i + 1];
            if adjacent_ok {
                let mut next = elements.clone();
                next.remove(i + 1);
                emit(one(StepLabel::Contraction, rebuild(&next)));
            } else if spec.commutative {
                for j in i + 1..n {
                    if elements[i] == elements[j] {
                        let mut next = elements.clone();
                        next.remove(j);
                        emit(one(StepLabel::Contraction, rebuild(&next)));
                        break;
                    }
                }
            }
        }
    }

    // expansion: duplicate an element
    if spec.expansive {
        for i in 0..n {
            let mut next = elements.clone();
            next.insert(i, elements[i].clone());
            emit(one(StepLabel::Expansion, rebuild(&next)));
        }
    }

    // properties (3)/(3L): fold a residual with a neighbour
    for i in 0..n {
        match &elements[i] {
            Token::RightRes(x, y) => {
                let partners: Vec<usize> = if spec.commutative {
                    (0..n).filter(|j| *j != i).collect()
                } else if i + 1 < n {
                    vec![i + 1]
                } else {
                    vec![]
                };
                for j in partners {
                    let folded =
                        right_residual(compose((**x).clone(), elements[j].clone()), (**y).clone());
                    let mut next = Vec::new();
                    for (k, e) in elements.iter().enumerate() {
                        if k == i {
                            next.push(folded.clone());
                        } else if k != j {
                            next.push(e.clone());
                        }
                    }
                    emit(one(StepLabel::Property3, rebuild(&next)));
                }
            }
            Token::LeftRes(x, y) => {
                let partners: Vec<usize> = if spec.commutative {
                    (0..n).filter(|j| *j != i).collect()
                } else if i > 0 {
                    vec![i - 1]
                } else {
                    vec![]
                };
                for j in partners {
                    let folded =
                        left_residual(compose(elements[j].clone(), (**x).clone()), (**y).clone());
                    let mut next = Vec::new();
                    for (k, e) in elements.iter().enumerate() {
                        if k == i {
                            next.push(folded.clone());
                        } else if k != j {
                            next.push(e.clone());
                        }
                    }
                    emit(one(StepLabel::Property3, rebuild(&next)));
                }
            }
            _ => {}
        }
    }
}

/// Display sequence for the first property-(1) chain reduction: an
/// optional commutativity shuffle, an optional associativity regrouping
/// making the redex a syntactic subterm, then the reduction itself.
fn p1_display(elements: &[Token], spec: &CalculusSpec) -> Option<StepSeq> {
    for (j, e) in elements.iter().enumerate() {
        let (num, den, left_res) = match e {
            Token::RightRes(x, d) => ((**x).clone(), chain(d), false),
            Token::LeftRes(x, d) => ((**x).clone(), chain(d), true),
            _ => continue,
        };
        // locate the denominator elements
        let used: Option<Vec<usize>> = if !spec.commutative {
            if !left_res {
                if j >= den.len() && elements[j - den.len()..j] == den[..] {
                    Some((j - den.len()..j).collect())
                } else {
                    None
                }
            } else if j + den.len() < elements.len()
                && elements[j + 1..j + 1 + den.len()] == den[..]
            {
                Some((j + 1..j + 1 + den.len()).collect())
            } else {
                None
            }
        } else {
            let mut rest: Vec<usize> = (0..elements.len()).filter(|i| *i != j).collect();
            let mut used = Vec::new();
            let mut ok = true;
            for d in &den {
                match rest.iter().position(|i| elements[*i] == *d) {
                    Some(p) => used.push(rest.remove(p)),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                Some(used)
            } else {
                None
            }
        };
        let Some(used) = used else { continue };

        // rebuild around the redex: untouched elements keep their places,
        // the denominator elements move next to the residual (a shuffle
        // only commutativity can license)
        let mut group_parts = Vec::new();
        if left_res {
            group_parts.push(e.clone());
            group_parts.extend(den.iter().cloned());
        } else {
            group_parts.extend(den.iter().cloned());
            group_parts.push(e.clone());
        }
        let mut flat = Vec::new();
        let mut grouped = Vec::new();
        let mut reduced = Vec::new();
        for (i, el) in elements.iter().enumerate() {
            if i == j {
                flat.extend(group_parts.clone());
                grouped.push(rebuild(&group_parts));
                reduced.push(num.clone());
            } else if !used.contains(&i) {
                flat.push(el.clone());
                grouped.push(el.clone());
                reduced.push(el.clone());
            }
        }

        let mut seq = StepSeq::new();
        let here = rebuild(elements);
        let flat_tok = rebuild(&flat);
        if flat_tok != here {
            seq.push((StepLabel::Commutativity, flat_tok.clone()));
        }
        let grouped_tok = rebuild(&grouped);
        if grouped_tok != flat_tok {
            seq.push((StepLabel::Associativity, grouped_tok));
        }
        seq.push((StepLabel::Property1, rebuild(&reduced)));
        return Some(seq);
    }
    None
}

fn down_rules(
    t: &Token,
    spec: &CalculusSpec,
    pool: &[Token],
    p34_ok: bool,
    emit: &mut dyn FnMut(StepSeq),
) {
    let one = |label: StepLabel, tok: Token| vec![(label, tok)];

    // inverse property (1): y.(t<|y) ⊑ t and (t|>y).y ⊑ t
    for y in pool {
        if *y == Token::Identity {
            continue;
        }
        emit(one(
            StepLabel::Property1,
            compose(y.clone(), right_residual(t.clone(), y.clone())),
        ));
        emit(one(
            StepLabel::Property1,
            compose(left_residual(t.clone(), y.clone()), y.clone()),
        ));
    }

    if spec.contractive {
        // t.t ⊑ t
        emit(one(
            StepLabel::Contraction,
            Token::Comp(Box::new(t.clone()), Box::new(t.clone())),
        ));
    }

    match t {
        Token::RightRes(a, b) => {
            // property (2) inverse at w<|w
            if a == b {
                emit(one(StepLabel::Property2, Token::Identity));
            }
            if p34_ok {
                // (x.z)<|y ⊒ (x<|y).z : split the numerator chain
                let num = chain(a);
                for k in 1..num.len() {
                    let x = rebuild(&num[..k]);
                    let z = rebuild(&num[k..]);
                    emit(one(
                        StepLabel::Property3,
                        compose(right_residual(x, (**b).clone()), z),
                    ));
                }
                // x<|(y.z) ⊒ (x<|y)<|z : split the denominator chain
                let den = chain(b);
                for k in 1..den.len() {
                    let y = rebuild(&den[..k]);
                    let z = rebuild(&den[k..]);
                    emit(one(
                        StepLabel::Property4,
                        right_residual(right_residual((**a).clone(), y), z),
                    ));
                }
            }
        }
        Token::LeftRes(a, b) => {
            if a == b {
                emit(one(StepLabel::Property2, Token::Identity));
            }
            if p34_ok {
                // (z.x)|>y ⊒ z.(x|>y)
                let num = chain(a);
                for k in 1..num.len() {
                    let z = rebuild(&num[..k]);
                    let x = rebuild(&num[k..]);
                    emit(one(
                        StepLabel::Property3,
                        compose(z, left_residual(x, (**b).clone())),
                    ));
                }
                // x|>(z.y) ⊒ (x|>y)|>z
                let den = chain(b);
                for k in 1..den.len() {
                    let z = rebuild(&den[..k]);
                    let y = rebuild(&den[k..]);
                    emit(one(
                        StepLabel::Property4,
                        left_residual(left_residual((**a).clone(), y), z),
                    ));
                }
            }
        }
        Token::Comp(a, b) => {
            if spec.expansive && a == b {
                emit(one(StepLabel::Expansion, (**a).clone()));
            }
            if spec.monotonic {
                emit(one(StepLabel::Monotonicity, (**a).clone()));
                if spec.commutative {
                    emit(one(StepLabel::Monotonicity, (**b).clone()));
                }
            }
            if spec.associative {
                let elements = chain(t);
                let n = elements.len();
                if spec.expansive {
                    for i in 0..n {
                        for j in 0..n {
                            if i != j
                                && elements[i] == elements[j]
                                && (spec.commutative || j == i + 1)
                            {
                                let mut next = elements.clone();
                                next.remove(j.max(i));
                                emit(one(StepLabel::Expansion, rebuild(&next)));
                            }
                        }
                    }
                }
                if spec.monotonic {
                    for i in 0..n {
                        let mut next = elements.clone();
                        next.remove(i);
                        emit(one(StepLabel::Monotonicity, rebuild(&next)));
                    }
                }
            }
        }
        _ => {}
    }
}

// ---------------------------------------------------------------------------
// Variable instantiation
// ---------------------------------------------------------------------------

/// Search substitutions over `pool` (depth-first, pool in order) for one
/// making `leq` hold on the goal pair; first found wins.
pub fn instantiate(
    goal: (&Token, &Token),
    spec: &CalculusSpec,
    pool: &[Token],
    budget: u32,
) -> Option<Substitution> {
    let mut ctx = LeqCtx::new();
    let mut out = Vec::new();
    instantiations(&mut ctx, goal, spec, pool, budget, 1, &mut out);
    out.into_iter().next()
}

/// All pool substitutions (up to `cap`) closing the goal pair.
pub(crate) fn instantiations(
    ctx: &mut LeqCtx,
    goal: (&Token, &Token),
    spec: &CalculusSpec,
    pool: &[Token],
    budget: u32,
    cap: usize,
    out: &mut Vec<Substitution>,
) {
    let mut vars: Vec<String> = goal.0.vars().into_iter().collect();
    for v in goal.1.vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    fn rec(
        ctx: &mut LeqCtx,
        goal: (&Token, &Token),
        spec: &CalculusSpec,
        pool: &[Token],
        budget: u32,
        cap: usize,
        vars: &[String],
        sub: &mut Substitution,
        out: &mut Vec<Substitution>,
    ) {
        if out.len() >= cap {
            return;
        }
        match vars.first() {
            None => {
                let l = goal.0.substitute(sub);
                let r = goal.1.substitute(sub);
                if leq_ctx(ctx, &l, &r, spec, budget) {
                    out.push(sub.clone());
                }
            }
            Some(v) => {
                for t in pool {
                    if t.has_vars() {
                        continue;
                    }
                    sub.insert(v.clone(), t.clone());
                    rec(ctx, goal, spec, pool, budget, cap, &vars[1..], sub, out);
                    sub.remove(v);
                    if out.len() >= cap {
                        return;
                    }
                }
            }
        }
    }
    let mut sub = Substitution::new();
    rec(ctx, goal, spec, pool, budget, cap, &vars, &mut sub, out);
}
