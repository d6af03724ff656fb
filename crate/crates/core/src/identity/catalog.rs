use super::{parse_identity, Identity, IdentityError};

/// Names and source text of the built-in identities.
pub const BUILTINS: &[(&str, &str)] = &[
    ("N1", "(((x*y)*z)*y) = (x*(y*(z*y)))"),
    ("moufang_left", "(z*(x*(z*y))) = (((z*x)*z)*y)"),
    ("associativity", "((x*y)*z) = (x*(y*z))"),
    ("commutativity", "(x*y) = (y*x)"),
];

/// All built-in identities, parsed, in catalog order.
pub fn builtin_identities() -> Vec<(&'static str, Identity)> {
    BUILTINS
        .iter()
        .map(|&(name, src)| (name, parse_identity(src).expect("builtin identity parses")))
        .collect()
}

pub fn builtin(name: &str) -> Result<Identity, IdentityError> {
    BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| parse_identity(src).expect("builtin identity parses"))
        .ok_or_else(|| IdentityError::NotFound(name.to_string()))
}

/// The identity `((xy)z)y = x(y(zy))`.
pub fn n1() -> Identity {
    builtin("N1").unwrap()
}
