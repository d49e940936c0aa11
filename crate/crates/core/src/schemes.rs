//! The four inspection schedules used for the reference critical-value
//! tables.

use crate::scheme::CensoringScheme;

pub const T1: [f64; 6] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];
pub const T2: [f64; 6] = [0.0, 0.05, 0.1, 0.2, 0.45, 0.5];
pub const P1: [f64; 5] = [0.25, 0.25, 0.5, 0.5, 1.0];
pub const P2: [f64; 5] = [0.5, 0.5, 0.25, 0.25, 1.0];

/// Names of the bundled schemes, in table order.
pub const BUILTIN_NAMES: [&str; 4] = ["t1p1", "t1p2", "t2p1", "t2p2"];

/// Looks up `t1p1`, `t1p2`, `t2p1` or `t2p2`.
pub fn builtin_scheme(name: &str) -> Option<CensoringScheme> {
    let (times, percentages) = match name {
        "t1p1" => (T1, P1),
        "t1p2" => (T1, P2),
        "t2p1" => (T2, P1),
        "t2p2" => (T2, P2),
        _ => return None,
    };
    Some(
        CensoringScheme::new(times.to_vec(), percentages.to_vec())
            .expect("bundled schemes are valid"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_resolve() {
        for name in BUILTIN_NAMES {
            let scheme = builtin_scheme(name).unwrap();
            assert_eq!(scheme.inspections(), 5);
            assert!(scheme.terminal_time() < 1.0);
        }
        assert!(builtin_scheme("t3p1").is_none());
    }
}
