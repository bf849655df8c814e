mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn global_phase_does_not_move_estimates((seed, angle, snr, frac) in scenario()) {
        check_phase_invariance(seed, angle, snr, frac)?;
    }

    #[test]
    fn positive_scale_does_not_move_estimates((seed, angle, snr, frac) in scenario()) {
        check_scale_invariance(seed, angle, snr, frac)?;
    }

    #[test]
    fn qi_vertex_stays_in_bracket((t, p) in concave_triple()) {
        check_qi_bracket(t, p)?;
    }

    #[test]
    fn root_music_roots_pair_up((seed, q, l) in covariance_case()) {
        check_root_pairs(seed, q, l)?;
    }

    #[test]
    fn alias_family_is_closed((angle, m, d) in alias_case()) {
        check_alias_closure(angle, m, d)?;
    }

    #[test]
    fn evd_reconstructs_with_orthonormal_vectors((seed, n) in hermitian_case()) {
        check_evd(seed, n)?;
    }

    #[test]
    fn polynomial_roots_round_trip(spec in root_case()) {
        check_root_round_trip(spec)?;
    }

    #[test]
    fn sample_covariance_is_psd((seed, q, l) in covariance_case()) {
        check_covariance_psd(seed, q, l)?;
    }
}
