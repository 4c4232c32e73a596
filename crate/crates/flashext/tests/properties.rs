mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn milnor_primitives_square_to_zero((spec, m) in monomial()) {
        q_squares_vanish(spec, &m)?;
    }

    #[test]
    fn milnor_primitives_commute((spec, m) in monomial()) {
        q_commute(spec, &m)?;
    }

    #[test]
    fn q_action_preserves_weight((spec, m) in monomial()) {
        q_weight(spec, &m)?;
    }

    #[test]
    fn margolis_kunneth(a in small_module(), b in small_module()) {
        kunneth(&a, &b)?;
    }

    #[test]
    fn emitted_charts_respect_action_degrees((case, w) in chart_case()) {
        action_degrees(&case, &w)?;
    }
}
