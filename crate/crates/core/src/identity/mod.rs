//! Term identities over the quasigroup operations `*`, `\` and `/`, checked
//! exhaustively on finite quasigroups, and the translation-operator form of
//! the identity `((xy)z)y = x(y(zy))`.

mod catalog;
mod parse;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quasigroup::{Element, FiniteQuasigroup};

pub use catalog::{builtin, builtin_identities, n1, BUILTINS};
pub use parse::{parse_identity, parse_term};

/// Default bound on the number of variables for exhaustive checks.
pub const DEFAULT_VARIABLE_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("syntax error at position {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("identity has an empty side")]
    EmptySide,
    #[error("identity has {found} variables, cap is {cap}")]
    VariableLimitExceeded { found: usize, cap: usize },
    #[error("no built-in identity named {0:?}")]
    NotFound(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Variable(String),
    Multiply(Box<Term>, Box<Term>),
    /// `l \ r`: the unique `z` with `l * z = r`.
    LeftDivide(Box<Term>, Box<Term>),
    /// `l / r`: the unique `z` with `z * r = l`.
    RightDivide(Box<Term>, Box<Term>),
}

impl Term {
    pub fn depth(&self) -> usize {
        match self {
            Term::Variable(_) => 0,
            Term::Multiply(l, r) | Term::LeftDivide(l, r) | Term::RightDivide(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    fn collect_variables(&self, out: &mut Vec<String>) {
        match self {
            Term::Variable(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Multiply(l, r) | Term::LeftDivide(l, r) | Term::RightDivide(l, r) => {
                l.collect_variables(out);
                r.collect_variables(out);
            }
        }
    }

    /// Evaluates the term by direct recursion.
    pub fn eval(&self, q: &FiniteQuasigroup, lookup: &dyn Fn(&str) -> Element) -> Element {
        match self {
            Term::Variable(v) => lookup(v),
            Term::Multiply(l, r) => q.multiply(l.eval(q, lookup), r.eval(q, lookup)),
            Term::LeftDivide(l, r) => q.left_divide(l.eval(q, lookup), r.eval(q, lookup)),
            Term::RightDivide(l, r) => q.right_divide(r.eval(q, lookup), l.eval(q, lookup)),
        }
    }

    fn compile(&self, vars: &[String], code: &mut Vec<Op>) {
        match self {
            Term::Variable(v) => {
                let idx = vars
                    .iter()
                    .position(|x| x == v)
                    .expect("variable registered");
                code.push(Op::Var(idx));
            }
            Term::Multiply(l, r) | Term::LeftDivide(l, r) | Term::RightDivide(l, r) => {
                l.compile(vars, code);
                r.compile(vars, code);
                code.push(match self {
                    Term::Multiply(..) => Op::Mul,
                    Term::LeftDivide(..) => Op::LeftDiv,
                    _ => Op::RightDiv,
                });
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Variable(v) => f.write_str(v),
            Term::Multiply(l, r) => write!(f, "({l} * {r})"),
            Term::LeftDivide(l, r) => write!(f, "({l} \\ {r})"),
            Term::RightDivide(l, r) => write!(f, "({l} / {r})"),
        }
    }
}

/// An equation `lhs = rhs` between two terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    lhs: Term,
    rhs: Term,
    variables: Vec<String>,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        let mut variables = Vec::new();
        lhs.collect_variables(&mut variables);
        rhs.collect_variables(&mut variables);
        Identity {
            lhs,
            rhs,
            variables,
        }
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    /// Variables in order of first appearance, left side first.
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn compile(&self) -> CompiledIdentity {
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        self.lhs.compile(&self.variables, &mut lhs);
        self.rhs.compile(&self.variables, &mut rhs);
        CompiledIdentity {
            lhs,
            rhs,
            variables: self.variables.clone(),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Var(usize),
    Mul,
    LeftDiv,
    RightDiv,
}

/// Postfix form of an identity, for tight exhaustive loops.
#[derive(Debug, Clone)]
pub struct CompiledIdentity {
    lhs: Vec<Op>,
    rhs: Vec<Op>,
    variables: Vec<String>,
}

fn run(code: &[Op], q: &FiniteQuasigroup, env: &[Element], stack: &mut Vec<Element>) -> Element {
    stack.clear();
    for op in code {
        let v = match *op {
            Op::Var(i) => env[i],
            _ => {
                let r = stack.pop().expect("balanced term");
                let l = stack.pop().expect("balanced term");
                match op {
                    Op::Mul => q.multiply(l, r),
                    Op::LeftDiv => q.left_divide(l, r),
                    _ => q.right_divide(r, l),
                }
            }
        };
        stack.push(v);
    }
    stack[0]
}

impl CompiledIdentity {
    pub fn arity(&self) -> usize {
        self.variables.len()
    }

    /// Evaluates both sides under `env` (indexed like the variable list).
    pub fn eval(&self, q: &FiniteQuasigroup, env: &[Element]) -> (Element, Element) {
        let mut stack = Vec::with_capacity(8);
        let l = run(&self.lhs, q, env, &mut stack);
        let r = run(&self.rhs, q, env, &mut stack);
        (l, r)
    }

    /// First failing assignment in lexicographic order (last variable
    /// varies fastest), with the two side values.
    pub fn first_failure(&self, q: &FiniteQuasigroup) -> Option<(Vec<Element>, Element, Element)> {
        let n = q.order();
        let k = self.arity();
        let mut env = vec![0; k];
        let mut stack = Vec::with_capacity(8);
        loop {
            let l = run(&self.lhs, q, &env, &mut stack);
            let r = run(&self.rhs, q, &env, &mut stack);
            if l != r {
                return Some((env, l, r));
            }
            // odometer increment
            let mut i = k;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                env[i] += 1;
                if env[i] < n {
                    break;
                }
                env[i] = 0;
            }
        }
    }

    pub fn holds(&self, q: &FiniteQuasigroup) -> bool {
        self.first_failure(q).is_none()
    }
}

/// A failing assignment together with the values of both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// `(variable, element)` pairs in variable order.
    pub assignment: Vec<(String, Element)>,
    pub lhs: Element,
    pub rhs: Element,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

/// Exhaustively checks `id` on `q` with the default variable cap.
pub fn check_identity(q: &FiniteQuasigroup, id: &Identity) -> Result<CheckResult, IdentityError> {
    check_identity_with_cap(q, id, DEFAULT_VARIABLE_CAP)
}

pub fn check_identity_with_cap(
    q: &FiniteQuasigroup,
    id: &Identity,
    cap: usize,
) -> Result<CheckResult, IdentityError> {
    if id.variables().len() > cap {
        return Err(IdentityError::VariableLimitExceeded {
            found: id.variables().len(),
            cap,
        });
    }
    let compiled = id.compile();
    Ok(match compiled.first_failure(q) {
        None => CheckResult {
            holds: true,
            counterexample: None,
        },
        Some((env, lhs, rhs)) => CheckResult {
            holds: false,
            counterexample: Some(Counterexample {
                assignment: id.variables().iter().cloned().zip(env).collect(),
                lhs,
                rhs,
            }),
        },
    })
}

/// Whether `R_y ∘ L_{xy} = L_x ∘ L_y ∘ R_y` as permutations.
pub fn check_operator_n1(q: &FiniteQuasigroup, x: Element, y: Element) -> bool {
    let ry = q.right_translation(y);
    let lhs = ry.compose(&q.left_translation(q.multiply(x, y)));
    let rhs = q
        .left_translation(x)
        .compose(&q.left_translation(y))
        .compose(&ry);
    lhs == rhs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct N1Report {
    /// The identity checked by term evaluation.
    pub pointwise: bool,
    /// The operator equation checked by permutation composition.
    pub operator: bool,
    pub agree: bool,
}

pub fn n1_equivalence_report(q: &FiniteQuasigroup) -> N1Report {
    let pointwise = check_identity(q, &n1())
        .expect("N1 has three variables")
        .holds;
    let n = q.order();
    let operator = (0..n).all(|x| (0..n).all(|y| check_operator_n1(q, x, y)));
    N1Report {
        pointwise,
        operator,
        agree: pointwise == operator,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sub3() -> FiniteQuasigroup {
        FiniteQuasigroup::subtraction(3)
    }

    #[test]
    fn associativity_fails_on_subtraction() {
        let id = builtin("associativity").unwrap();
        let r = check_identity(&sub3(), &id).unwrap();
        assert!(!r.holds);
        let c = r.counterexample.unwrap();
        assert_eq!(
            c.assignment,
            vec![("x".into(), 0), ("y".into(), 0), ("z".into(), 1)]
        );
        // (0 − 0) − 1 = 2 and 0 − (0 − 1) = 1
        assert_eq!((c.lhs, c.rhs), (2, 1));
    }

    #[test]
    fn n1_on_small_examples() {
        assert!(
            check_identity(&FiniteQuasigroup::cyclic(3), &n1())
                .unwrap()
                .holds
        );
        let r = check_identity(&sub3(), &n1()).unwrap();
        let c = r.counterexample.unwrap();
        assert_eq!(
            c.assignment,
            vec![("x".into(), 0), ("y".into(), 0), ("z".into(), 1)]
        );
        assert_eq!((c.lhs, c.rhs), (2, 1));
    }

    #[test]
    fn reflexive_identity_holds() {
        let id = parse_identity("x = x").unwrap();
        assert!(check_identity(&sub3(), &id).unwrap().holds);
    }

    #[test]
    fn variable_cap() {
        let id = parse_identity("((a*b)*(c*d)) = ((a*b)*(c*e))").unwrap();
        assert_eq!(
            check_identity(&sub3(), &id),
            Err(IdentityError::VariableLimitExceeded { found: 5, cap: 4 })
        );
        assert!(!check_identity_with_cap(&sub3(), &id, 5).unwrap().holds);
    }

    #[test]
    fn division_identities() {
        // x * (x \ y) = y and (y / x) * x = y hold in every quasigroup.
        let left = parse_identity("(x*(x\\y)) = y").unwrap();
        let right = parse_identity("((y/x)*x) = y").unwrap();
        for q in [
            sub3(),
            FiniteQuasigroup::subtraction(5),
            FiniteQuasigroup::cyclic(4),
        ] {
            assert!(check_identity(&q, &left).unwrap().holds);
            assert!(check_identity(&q, &right).unwrap().holds);
        }
    }

    #[test]
    fn operator_form() {
        let z3 = FiniteQuasigroup::cyclic(3);
        for x in 0..3 {
            for y in 0..3 {
                assert!(check_operator_n1(&z3, x, y));
            }
        }
        assert!(!check_operator_n1(&sub3(), 0, 0));
        let trivial = FiniteQuasigroup::cyclic(1);
        assert!(check_operator_n1(&trivial, 0, 0));
    }

    #[test]
    fn reports() {
        let r = n1_equivalence_report(&FiniteQuasigroup::cyclic(4));
        assert_eq!(
            r,
            N1Report {
                pointwise: true,
                operator: true,
                agree: true
            }
        );
        let r = n1_equivalence_report(&sub3());
        assert_eq!(
            r,
            N1Report {
                pointwise: false,
                operator: false,
                agree: true
            }
        );
    }

    #[test]
    fn compiled_matches_recursive_eval() {
        let id = builtin("moufang_left").unwrap();
        let c = id.compile();
        let q = FiniteQuasigroup::subtraction(5);
        for env in [[0, 1, 2], [4, 4, 1], [3, 0, 2]] {
            let lookup = |v: &str| env[id.variables().iter().position(|x| x == v).unwrap()];
            assert_eq!(
                c.eval(&q, &env),
                (id.lhs().eval(&q, &lookup), id.rhs().eval(&q, &lookup))
            );
        }
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = "[a-z][a-z0-9_]{0,3}".prop_map(Term::Variable);
        leaf.prop_recursive(5, 32, 2, |inner| {
            (inner.clone(), inner, 0..3u8).prop_map(|(l, r, op)| {
                let (l, r) = (Box::new(l), Box::new(r));
                match op {
                    0 => Term::Multiply(l, r),
                    1 => Term::LeftDivide(l, r),
                    _ => Term::RightDivide(l, r),
                }
            })
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(lhs in arb_term(), rhs in arb_term()) {
            let id = Identity::new(lhs, rhs);
            let printed = id.to_string();
            let reparsed = parse_identity(&printed).unwrap();
            prop_assert_eq!(&reparsed, &id);
            prop_assert_eq!(reparsed.to_string(), printed);
        }
    }
}
