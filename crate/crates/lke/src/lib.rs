//! A theorem prover for the Lambek calculus family (NL, L, LP, LPC, LPE,
//! LPCE) based on labelled analytic tableaux.
//!
//! Sequents are decided by refutation: the antecedent product is asserted
//! (`T`), the succedent denied (`F`), and the tree is expanded by analytic
//! rules. Formulae carry information tokens; the calculus in force is
//! selected purely by the properties granted to the token algebra
//! (associativity, commutativity, contraction, expansion), so one engine
//! covers the whole family. A brute-force cut-free sequent prover is
//! included as an independent cross-check oracle.

pub mod category;
pub mod label;
pub mod oracle;
pub mod sequent;
pub mod tableau;

pub use category::{parse_category, Atom, Category, Polarity};
pub use label::{
    compose, left_residual, leq, normalize, right_residual, CalculusSpec, Substitution, Token,
};
pub use oracle::{enumerate_sequents, oracle_prove, Verdict};
pub use sequent::{parse_bracketing, parse_sequent, Sequent, Structure};
pub use tableau::{count_filter, prove, ExpandOpts, ProofResult, Sign, Slf, Tableau};
