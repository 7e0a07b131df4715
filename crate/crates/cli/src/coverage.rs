//! Which subcommand exposes each library operation.

pub const COVERAGE: &[(&str, &str)] = &[
    ("binomial", "bernoulli"),
    ("binomial_poly", "bernoulli"),
    ("bernoulli", "bernoulli"),
    ("bernoulli_polynomial", "bernoulli"),
    ("rising_factorial", "bernoulli"),
    ("zeta_neg", "zeta-neg"),
    ("zeta_one_minus", "zeta-neg"),
    ("padic_of_rational", "padic"),
    ("padic_norm", "padic"),
    ("digits", "padic"),
    ("ideal_shadow", "padic"),
    ("teichmuller", "teichmuller"),
    ("crt_pair", "teichmuller"),
    ("double_teichmuller", "teichmuller"),
    ("angle_bracket", "teichmuller"),
    ("mahler_coefficients", "mahler-coeffs"),
    ("binomial_inversion", "mahler-coeffs"),
    ("difference_operator", "mahler-coeffs"),
    ("characteristic_mahler", "mahler-coeffs"),
    ("evaluate_mahler", "mahler-eval"),
    ("verify_decay", "decay-check"),
    ("morita_gamma", "gamma-p"),
    ("gamma_functional_step", "gamma-p"),
    ("gamma_continuity_check", "gamma-continuity"),
    ("inverse_of_half_pr_plus_one", "spq-sweep"),
    ("inverse_general", "spq-sweep"),
    ("s_pq_membership", "spq-sweep"),
    ("verify_triviality_theorem", "spq-sweep"),
    ("kl_branch_eval", "kl-branch"),
    ("double_value", "double-branch"),
    ("double_branch_eval", "double-branch"),
    ("kl_value", "kummer"),
    ("kummer_check", "kummer"),
    ("extended_kummer_check", "kummer"),
    ("xi", "moments"),
    ("xi_sum_zero", "moments"),
    ("psi_r_series", "moments"),
    ("moment", "moments"),
    ("double_moment", "moments"),
    ("restricted_moment", "moments"),
    ("delta_operator", "moments"),
    ("measure_on_open_set", "open-set-measure"),
    ("universal_power", "universal-power"),
    ("pq_hurwitz", "pq-hurwitz"),
    ("kernel_padic_beta", "chain-propagate"),
    ("kernel_q_beta", "chain-propagate"),
    ("kernel_real_beta", "chain-propagate"),
    ("kernel_q_gamma", "chain-propagate"),
    ("kernel_basic", "chain-propagate"),
    ("kernel_u_gamma", "chain-propagate"),
    ("propagate", "chain-propagate"),
    ("real_beta_layer_closed_form", "chain-propagate"),
    ("limit_check", "chain-limits"),
    ("heisenberg_check", "heisenberg"),
    ("hahn_basis", "hahn-basis"),
    ("q_integer", "q-zeta"),
    ("q_zeta", "q-zeta"),
    ("theta", "theta-check"),
    ("completed_zeta", "lambda-check"),
    ("euler_product_check", "lambda-check"),
    ("weil_finite", "weil"),
];

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::COVERAGE;
    use crate::commands::registry;

    /// Operation names of the library surface, listed independently of the table.
    const OPERATIONS: &str = "binomial binomial_poly bernoulli bernoulli_polynomial zeta_neg zeta_one_minus \
        rising_factorial padic_of_rational padic_norm digits teichmuller crt_pair double_teichmuller \
        angle_bracket ideal_shadow mahler_coefficients binomial_inversion difference_operator verify_decay \
        evaluate_mahler characteristic_mahler morita_gamma gamma_functional_step gamma_continuity_check \
        inverse_of_half_pr_plus_one inverse_general s_pq_membership verify_triviality_theorem kl_value \
        kummer_check kl_branch_eval double_value extended_kummer_check double_branch_eval universal_power \
        pq_hurwitz xi xi_sum_zero psi_r_series moment double_moment restricted_moment measure_on_open_set \
        delta_operator kernel_padic_beta kernel_q_beta kernel_real_beta kernel_q_gamma kernel_basic \
        kernel_u_gamma propagate real_beta_layer_closed_form limit_check heisenberg_check hahn_basis \
        q_integer q_zeta theta completed_zeta euler_product_check weil_finite";

    #[test]
    fn every_operation_has_exactly_one_subcommand() {
        let ops: Vec<&str> = COVERAGE.iter().map(|(op, _)| *op).collect();
        let unique: BTreeSet<&str> = ops.iter().copied().collect();
        assert_eq!(unique.len(), ops.len(), "an operation is listed twice");
        let expected: BTreeSet<&str> = OPERATIONS.split_whitespace().collect();
        assert_eq!(unique, expected);
    }

    #[test]
    fn table_and_registry_name_the_same_subcommands() {
        let reg = registry();
        let registered: BTreeSet<&str> = reg.iter().map(|c| c.name()).collect();
        let covered: BTreeSet<&str> = COVERAGE.iter().map(|(_, c)| *c).collect();
        assert_eq!(registered, covered);
        assert_eq!(registered.len(), 25);
    }

    #[test]
    fn clap_definition_is_consistent() {
        registry().clap().debug_assert();
    }
}
