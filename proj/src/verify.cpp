#include "rrdps/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "rrdps/bounds.hpp"
#include "rrdps/spectral.hpp"

namespace rrdps {

void to_json(nlohmann::json& j, const CheckResult& c)
{
    j = nlohmann::json{{"check_name", c.name},
                       {"max_deviation", c.max_deviation},
                       {"tolerance", c.tolerance},
                       {"pass", c.pass}};
}

OmegaFunctions OmegaFunctions::closed_form()
{
    return {omega_minus, omega_plus};
}

double OmegaFunctions::omega(int L, int nu, double lambda) const
{
    return std::max(minus(L, nu, lambda), plus(L, nu, lambda));
}

namespace {

CheckResult finish(std::string name, double dev, double tol)
{
    return {std::move(name), dev, tol, dev <= tol};
}

}  // namespace

CheckResult check_determinant_formula(int draws, std::uint64_t seed, int max_d)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double alpha = coef(rng);
        const double beta = coef(rng);
        const double gamma = coef(rng);
        for (int d = 1; d <= max_d; ++d) {
            const SymMatrix m1 = build_m1(d);
            const SymMatrix id = SymMatrix::identity(d);
            for (int m = 0; m <= d; ++m) {
                const SymMatrix a = m1 * alpha + build_m2(d, m) * beta + id * gamma;
                const double brute = det_bruteforce(a);
                const double closed = det_closed_form(alpha, beta, gamma, d, m);
                worst = std::max(worst, std::abs(closed - brute) / std::max(std::abs(brute), 1e-3));
            }
        }
    }
    return finish("determinant_closed_form", worst, 1e-9);
}

CheckResult check_lambda_closure(int l_min, int l_max, const std::vector<double>& lambdas,
                                 const OmegaFunctions& fns)
{
    double worst = 0.0;
    for (int L = l_min; L <= l_max; ++L)
        for (int nu = 1; nu <= L - 2; ++nu)
            for (double lambda : lambdas) {
                const double em = max_eigenvalue(build_lambda_minus(L, nu - 1, lambda));
                const double ep = max_eigenvalue(build_lambda_plus(L, nu + 1, lambda));
                worst = std::max(worst, std::abs(em - fns.minus(L, nu, lambda)));
                worst = std::max(worst, std::abs(ep - fns.plus(L, nu, lambda)));
            }
    return finish("lambda_eigenvalue_closure", worst, 1e-9);
}

CheckResult check_omega_monotone(int l_min, int l_max, const std::vector<double>& lambdas,
                                 const OmegaFunctions& fns)
{
    // Deviation is the worst omega(nu) - omega(nu+1); strict growth needs it < 0.
    double worst = -std::numeric_limits<double>::infinity();
    for (int L = l_min; L <= l_max; ++L)
        for (int nu = 1; nu + 1 <= L - 2; ++nu)
            for (double lambda : lambdas)
                worst = std::max(worst, fns.omega(L, nu, lambda) - fns.omega(L, nu + 1, lambda));
    CheckResult c{"omega_increasing_in_nu", std::max(worst, 0.0), 0.0, worst < 0.0};
    return c;
}

CheckResult check_povm_identities(int L)
{
    double worst = 0.0;
    SymMatrix total(L);
    for (int k = 0; k < L; ++k)
        for (int l = k + 1; l < L; ++l) {
            const SymMatrix d0 = detection_element(L, k, l, 0);
            const SymMatrix d1 = detection_element(L, k, l, 1);
            total = total + d0 + d1;
            // P_{{k,l},s} = 2 P'_{{k,l},s}
            const SymMatrix unordered = (d0 + d1) * 2.0;
            const SymMatrix ordered = ordered_pair_element(L, k, l) + ordered_pair_element(L, l, k);
            worst = std::max(worst, max_abs_diff(unordered, ordered));
        }
    worst = std::max(worst, max_abs_diff(total, SymMatrix::identity(L) * 0.5));
    return finish("povm_identities_L" + std::to_string(L), worst, 1e-12);
}

CheckResult check_bound_shape(int L)
{
    constexpr int n_e = 51;
    double worst = 0.0;
    std::vector<double> prev_row;
    for (int nu = 1; nu <= L - 2; ++nu) {
        std::vector<double> row;
        const double cap = nu / (L - 1.0);
        const double es = e_star(L, nu);
        for (int i = 0; i < n_e; ++i) {
            const double e = 0.5 * i / (n_e - 1);
            const double f = phase_error_bound({L, nu, e}).f_value;
            worst = std::max(worst, f - cap);
            worst = std::max(worst, -f);
            if (e >= es)
                worst = std::max(worst, std::abs(f - cap));
            if (!row.empty())
                worst = std::max(worst, row.back() - f);
            if (!prev_row.empty())
                worst = std::max(worst, prev_row[i] - f);
            row.push_back(f);
        }
        prev_row = std::move(row);
    }
    return finish("bound_shape_L" + std::to_string(L), worst, 1e-9);
}

bool DecompositionReport::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

DecompositionReport verify_sector_decomposition(int L, int nu, const std::vector<double>& lambda_grid,
                                                  const OmegaFunctions& fns)
{
    check_block(L, nu);
    const JointOperatorSet ops = build_joint_operators(L);
    const std::size_t dim = ops.dim;
    const unsigned n_a = 1U << L;
    const double Lm1 = L - 1.0;
    auto idx = [L](unsigned x, int k) { return static_cast<std::size_t>(x) * L + k; };

    DecompositionReport rep;
    rep.L = L;
    rep.nu = nu;
    const std::string tag = "_L" + std::to_string(L) + "_nu" + std::to_string(nu);

    // H^{(x)L} (x) 1_B; symmetric and orthogonal. Columns are X-basis states.
    Matrix h(dim);
    for (unsigned x = 0; x < n_a; ++x)
        for (unsigned a = 0; a < n_a; ++a)
            for (int k = 0; k < L; ++k)
                h(idx(x, k), idx(a, k)) = hadamard_amplitude(L, a, x);
    auto from_x_basis = [&](const Matrix& d) { return h * d * h; };

    {
        double dev = max_abs_diff(ops.u.transpose() * ops.u, Matrix::identity(dim));
        for (const SymMatrix& p : ops.p_nu)
            dev = std::max(dev, max_abs_diff(p.matrix() * p.matrix(), p.matrix()));
        // The sectors are nested (P^(nu) P^(nu+2) = P^(nu)); the two top ones
        // split every X-basis label by parity.
        for (int nu = 0; nu + 2 <= L; ++nu) {
            const Matrix& lo = ops.p_nu[nu].matrix();
            dev = std::max(dev, max_abs_diff(lo * ops.p_nu[nu + 2].matrix(), lo));
        }
        dev = std::max(dev, max_abs_diff(ops.p_nu[L - 1].matrix() + ops.p_nu[L].matrix(),
                                         Matrix::identity(dim)));
        dev = std::max(dev, max_abs_diff(ops.u * ops.u, Matrix::identity(dim)));
        rep.checks.push_back(finish("joint_operator_invariants" + tag, dev, 1e-12));
    }

    const Matrix& p = ops.p_nu[nu].matrix();
    const Matrix ut = ops.u.transpose();

    {
        Matrix expected(dim);
        for (unsigned a = 0; a < n_a; ++a) {
            const int w = std::popcount(a);
            for (int k = 0; k < L; ++k) {
                const bool low = w <= nu - 1 && (nu - 1 - w) % 2 == 0;
                const bool high = w == nu + 1 && ((a >> k) & 1U);
                if (low || high)
                    expected(idx(a, k), idx(a, k)) = 1.0;
            }
        }
        const double dev = max_abs_diff(ut * p * ops.u, from_x_basis(expected));
        rep.checks.push_back(finish("u_conjugated_projector" + tag, dev, 1e-12));
    }

    {
        // 1_A (x) sum_{k<l} P((|k> - |l>)/sqrt 2)/(L-1)
        Matrix expected(dim);
        for (unsigned x = 0; x < n_a; ++x)
            for (int k = 0; k < L; ++k)
                for (int l = k + 1; l < L; ++l) {
                    expected(idx(x, k), idx(x, k)) += 0.5 / Lm1;
                    expected(idx(x, l), idx(x, l)) += 0.5 / Lm1;
                    expected(idx(x, k), idx(x, l)) -= 0.5 / Lm1;
                    expected(idx(x, l), idx(x, k)) -= 0.5 / Lm1;
                }
        const double dev = max_abs_diff(ut * ops.e_bit.matrix() * ops.u, expected);
        rep.checks.push_back(finish("u_conjugated_bit_error" + tag, dev, 1e-12));
    }

    {
        Matrix diag(dim);
        for (unsigned a = 0; a < n_a; ++a) {
            const int w = std::popcount(a);
            for (int k = 0; k < L; ++k)
                diag(idx(a, k), idx(a, k)) = (((a >> k) & 1U) ? w - 1.0 : double(w)) / Lm1;
        }
        const Matrix& eph = ops.e_ph.matrix();
        double dev = max_abs_diff(ut * eph * ops.u, eph);
        dev = std::max(dev, max_abs_diff(eph, from_x_basis(diag)));
        rep.checks.push_back(finish("u_conjugated_phase_error" + tag, dev, 1e-12));
    }

    double eig_dev = 0.0;
    double block_dev = 0.0;
    for (double lambda : lambda_grid) {
        const Matrix op = p * (ops.e_ph.matrix() - ops.e_bit.matrix() * lambda) * p;
        const double top = symmetric_eigenvalues(SymMatrix::from_matrix(op)).back();
        eig_dev = std::max(eig_dev, std::abs(top - fns.omega(L, nu, lambda)));

        // Sector blocks in the X (x) position basis after conjugation by U.
        const Matrix w = h * (ut * op * ops.u) * h;
        for (unsigned a = 0; a < n_a; ++a)
            for (unsigned b = 0; b < n_a; ++b) {
                const int wa = std::popcount(a);
                const bool low = wa <= nu - 1 && (nu - 1 - wa) % 2 == 0;
                const bool high = wa == nu + 1;
                if (a != b || (!low && !high)) {
                    for (int k = 0; k < L; ++k)
                        for (int l = 0; l < L; ++l)
                            block_dev = std::max(block_dev, std::abs(w(idx(a, k), idx(b, l))));
                    continue;
                }
                // Reorder positions so those with a_k = 1 come first.
                std::vector<int> order;
                for (int k = 0; k < L; ++k)
                    if ((a >> k) & 1U)
                        order.push_back(k);
                for (int k = 0; k < L; ++k)
                    if (!((a >> k) & 1U))
                        order.push_back(k);
                if (low) {
                    const SymMatrix ref = build_lambda_minus(L, wa, lambda);
                    for (int i = 0; i < L; ++i)
                        for (int j = 0; j < L; ++j)
                            block_dev = std::max(block_dev,
                                                 std::abs(w(idx(a, order[i]), idx(a, order[j])) - ref(i, j)));
                } else {
                    const SymMatrix ref = build_lambda_plus(L, wa, lambda);
                    for (int i = 0; i < L; ++i)
                        for (int j = 0; j < L; ++j) {
                            const double expect = (i < wa && j < wa) ? ref(i, j) : 0.0;
                            block_dev = std::max(block_dev,
                                                 std::abs(w(idx(a, order[i]), idx(a, order[j])) - expect));
                        }
                }
            }
    }
    rep.checks.push_back(finish("joint_max_eigenvalue" + tag, eig_dev, 1e-9));
    rep.checks.push_back(finish("direct_sum_blocks" + tag, block_dev, 1e-12));
    return rep;
}

bool VerifyReport::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

nlohmann::json VerifyReport::to_json() const
{
    nlohmann::json j;
    j["level"] = level == VerifyLevel::fast ? "fast" : "full";
    j["checks"] = checks;
    j["pass"] = pass();
    return j;
}

VerifyReport run_verification(VerifyLevel level, const OmegaFunctions& fns)
{
    VerifyReport rep;
    rep.level = level;
    const std::vector<double> lambdas{0.0, 0.1, 1.0, 10.0};

    rep.checks.push_back(check_determinant_formula(level == VerifyLevel::full ? 1000 : 100, 1234567));
    rep.checks.push_back(check_lambda_closure(3, 12, lambdas, fns));
    rep.checks.push_back(check_omega_monotone(3, 12, lambdas, fns));
    for (int L = 3; L <= 8; ++L)
        rep.checks.push_back(check_povm_identities(L));
    rep.checks.push_back(check_bound_shape(6));
    if (level == VerifyLevel::full)
        rep.checks.push_back(check_bound_shape(64));

    const int joint_max = level == VerifyLevel::full ? 5 : 3;
    const std::vector<double> joint_lambdas{0.0, 0.5, 2.0, 10.0};
    for (int L = 3; L <= joint_max; ++L)
        for (int nu = 1; nu <= L - 2; ++nu) {
            DecompositionReport d = verify_sector_decomposition(L, nu, joint_lambdas, fns);
            for (auto& c : d.checks)
                rep.checks.push_back(std::move(c));
        }
    return rep;
}

}  // namespace rrdps
