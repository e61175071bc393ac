#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace rrdps {

struct CheckResult {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

void to_json(nlohmann::json& j, const CheckResult& c);

/// Closed forms under test. Tests swap in perturbed versions as negative controls.
struct OmegaFunctions {
    std::function<double(int, int, double)> minus;
    std::function<double(int, int, double)> plus;

    static OmegaFunctions closed_form();
    double omega(int L, int nu, double lambda) const;
};

/// Closed-form determinant vs elimination over all (d, m) with d <= max_d.
/// The deviation is |closed - brute| / max(|brute|, 1e-3), so the 1e-9
/// tolerance is relative for O(1) determinants and 1e-12 absolute near zero.
CheckResult check_determinant_formula(int draws, std::uint64_t seed, int max_d = 8);

/// Dense max eigenvalues of the lambda-minus / lambda-plus blocks vs the
/// closed forms, for L in [l_min, l_max] and every valid nu.
CheckResult check_lambda_closure(int l_min, int l_max, const std::vector<double>& lambdas,
                                 const OmegaFunctions& fns);

/// Strict growth of Omega(nu, lambda) in nu.
CheckResult check_omega_monotone(int l_min, int l_max, const std::vector<double>& lambdas,
                                 const OmegaFunctions& fns);

/// Detection-operator sum and ordered/unordered pair equivalence on system B.
CheckResult check_povm_identities(int L);

/// F(nu, e): bounded by nu/(L-1), nondecreasing in e and nu, saturated beyond e*.
CheckResult check_bound_shape(int L);

struct DecompositionReport {
    int L = 0;
    int nu = 0;
    std::vector<CheckResult> checks;
    bool pass() const;
};

/// Rebuilds the joint-space operators at small L and checks the sector
/// decomposition of P(e_ph - lambda e)P against the closed forms.
DecompositionReport verify_sector_decomposition(int L, int nu, const std::vector<double>& lambda_grid,
                                                  const OmegaFunctions& fns = OmegaFunctions::closed_form());

enum class VerifyLevel { fast, full };

struct VerifyReport {
    VerifyLevel level = VerifyLevel::fast;
    std::vector<CheckResult> checks;
    bool pass() const;
    nlohmann::json to_json() const;
};

VerifyReport run_verification(VerifyLevel level, const OmegaFunctions& fns = OmegaFunctions::closed_form());

}  // namespace rrdps
