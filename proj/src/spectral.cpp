#include "rrdps/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace rrdps {

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transpose() const
{
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const
{
    if (rhs.n_ != n_)
        throw std::invalid_argument("matrix dimension mismatch");
    Matrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0)
                continue;
            for (std::size_t j = 0; j < n_; ++j)
                out(i, j) += a * rhs(k, j);
        }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const
{
    if (rhs.n_ != n_)
        throw std::invalid_argument("matrix dimension mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i)
        out.data_[i] += rhs.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const
{
    return *this + rhs * -1.0;
}

Matrix Matrix::operator*(double s) const
{
    Matrix out = *this;
    for (double& v : out.data_)
        v *= s;
    return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b)
{
    if (a.dim() != b.dim())
        throw std::invalid_argument("matrix dimension mismatch");
    double m = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i)
        m = std::max(m, std::abs(da[i] - db[i]));
    return m;
}

SymMatrix SymMatrix::identity(std::size_t n)
{
    SymMatrix s;
    s.m_ = Matrix::identity(n);
    return s;
}

SymMatrix SymMatrix::from_matrix(const Matrix& m, double tol)
{
    const std::size_t n = m.dim();
    SymMatrix s(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > tol)
                throw std::domain_error("matrix is not symmetric");
            s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
        }
    return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v)
{
    m_(i, j) = v;
    m_(j, i) = v;
}

void SymMatrix::add(std::size_t i, std::size_t j, double v)
{
    m_(i, j) += v;
    if (i != j)
        m_(j, i) += v;
}

SymMatrix SymMatrix::operator+(const SymMatrix& rhs) const
{
    SymMatrix s;
    s.m_ = m_ + rhs.m_;
    return s;
}

SymMatrix SymMatrix::operator-(const SymMatrix& rhs) const
{
    SymMatrix s;
    s.m_ = m_ - rhs.m_;
    return s;
}

SymMatrix SymMatrix::operator*(double k) const
{
    SymMatrix s;
    s.m_ = m_ * k;
    return s;
}

double max_abs_diff(const SymMatrix& a, const SymMatrix& b)
{
    return max_abs_diff(a.matrix(), b.matrix());
}

SymMatrix build_m1(int d)
{
    if (d < 1)
        throw std::domain_error("build_m1: d must be >= 1");
    SymMatrix m(d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            m.set(i, j, 1.0);
    return m;
}

SymMatrix build_m2(int d, int m)
{
    if (d < 1 || m < 0 || m > d)
        throw std::domain_error("build_m2: need d >= 1 and 0 <= m <= d");
    SymMatrix out(d);
    for (int i = 0; i < m; ++i)
        out.set(i, i, 1.0);
    return out;
}

double det_closed_form(double alpha, double beta, double gamma, int d, int m)
{
    if (d < 1 || m < 0 || m > d)
        throw std::domain_error("det_closed_form: need d >= 1 and 0 <= m <= d");
    // At m = 0 and m = d one factor carries exponent -1; it cancels against
    // the quadratic, so use the cancelled form to stay finite when that base is zero.
    if (m == 0)
        return std::pow(gamma, d - 1) * (gamma + d * alpha);
    if (m == d)
        return std::pow(gamma + beta, d - 1) * (gamma + beta + d * alpha);
    return std::pow(gamma, d - m - 1) * std::pow(gamma + beta, m - 1) *
           (gamma * gamma + (beta + d * alpha) * gamma + (d - m) * alpha * beta);
}

double det_bruteforce(const SymMatrix& a)
{
    const std::size_t n = a.dim();
    if (n > 12)
        throw std::length_error("det_bruteforce: dimension above 12");
    Matrix w = a.matrix();
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(w(r, c)) > std::abs(w(piv, c)))
                piv = r;
        if (w(piv, c) == 0.0)
            return 0.0;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(w(c, j), w(piv, j));
            det = -det;
        }
        det *= w(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = w(r, c) / w(c, c);
            for (std::size_t j = c; j < n; ++j)
                w(r, j) -= f * w(c, j);
        }
    }
    return det;
}

std::vector<double> symmetric_eigenvalues(const SymMatrix& a, double off_tol, int max_sweeps)
{
    const std::size_t n = a.dim();
    Matrix w = a.matrix();
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                s += 2.0 * w(i, j) * w(i, j);
        return std::sqrt(s);
    };

    bool converged = off_norm() <= off_tol;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (apq == 0.0)
                    continue;
                const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double wkp = w(k, p);
                    const double wkq = w(k, q);
                    w(k, p) = c * wkp - s * wkq;
                    w(k, q) = s * wkp + c * wkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double wpk = w(p, k);
                    const double wqk = w(q, k);
                    w(p, k) = c * wpk - s * wqk;
                    w(q, k) = s * wpk + c * wqk;
                }
                w(p, q) = 0.0;
                w(q, p) = 0.0;
            }
        converged = off_norm() <= off_tol;
    }
    if (!converged)
        throw std::runtime_error("Jacobi eigensolver did not converge");

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i)
        ev[i] = w(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

double max_eigenvalue(const SymMatrix& a)
{
    if (a.dim() == 0)
        throw std::domain_error("max_eigenvalue: empty matrix");
    if (a.dim() > 128)
        throw std::length_error("max_eigenvalue: dimension above 128");
    return symmetric_eigenvalues(a).back();
}

SymMatrix build_lambda_minus(int L, int a_weight, double lambda)
{
    if (L < 2 || a_weight < 0 || a_weight > L)
        throw std::domain_error("build_lambda_minus: need 0 <= a_weight <= L");
    const double Lm1 = L - 1.0;
    return build_m1(L) * (lambda / (2.0 * Lm1)) - build_m2(L, a_weight) * (1.0 / Lm1) +
           SymMatrix::identity(L) * ((2.0 * a_weight - L * lambda) / (2.0 * Lm1));
}

SymMatrix build_lambda_plus(int L, int a_weight, double lambda)
{
    if (L < 2 || a_weight < 1 || a_weight > L)
        throw std::domain_error("build_lambda_plus: need 1 <= a_weight <= L");
    const double Lm1 = L - 1.0;
    return build_m1(a_weight) * (lambda / (2.0 * Lm1)) +
           SymMatrix::identity(a_weight) * ((2.0 * (a_weight - 1) - lambda * L) / (2.0 * Lm1));
}

double hadamard_amplitude(int L, unsigned a, unsigned x)
{
    const double norm = std::pow(2.0, -0.5 * L);
    return (std::popcount(a & x) % 2 == 0) ? norm : -norm;
}

namespace {

bool bit(unsigned x, int k) { return (x >> k) & 1U; }

void check_positions(int L, int k, int l)
{
    if (L < 2 || k < 0 || l < 0 || k >= L || l >= L || k == l)
        throw std::domain_error("pulse indices must be distinct and in [0, L)");
}

}  // namespace

SymMatrix detection_element(int L, int k, int l, int s_b)
{
    check_positions(L, k, l);
    const double sign = s_b == 0 ? 1.0 : -1.0;
    const double w = 1.0 / (2.0 * (L - 1.0));
    SymMatrix p(L);
    // (1/(2(L-1))) |phi><phi|, phi = (|k> + sign |l>)/sqrt(2)
    p.add(k, k, 0.5 * w);
    p.add(l, l, 0.5 * w);
    p.add(k, l, 0.5 * sign * w);
    return p;
}

SymMatrix ordered_pair_element(int L, int k, int l)
{
    check_positions(L, k, l);
    SymMatrix p(L);
    p.set(k, k, 1.0 / (L - 1.0));
    return p;
}

JointOperatorSet build_joint_operators(int L)
{
    if (L < 3 || L > 5)
        throw std::length_error("build_joint_operators: L must lie in [3, 5]");
    const unsigned n_a = 1U << L;
    const std::size_t dim = static_cast<std::size_t>(n_a) * L;
    const double Lm1 = L - 1.0;
    auto idx = [L](unsigned x, int k) { return static_cast<std::size_t>(x) * L + k; };

    JointOperatorSet ops;
    ops.L = L;
    ops.dim = dim;

    // Bit error: Z-basis parity s_k xor s_l = s_B xor 1 on A, times P_{{k,l},s_B} on B.
    ops.e_bit = SymMatrix(dim);
    for (int k = 0; k < L; ++k)
        for (int l = k + 1; l < L; ++l)
            for (int s_b = 0; s_b < 2; ++s_b) {
                const double sign = s_b == 0 ? 1.0 : -1.0;
                for (unsigned x = 0; x < n_a; ++x) {
                    if ((bit(x, k) ^ bit(x, l)) != static_cast<bool>(s_b ^ 1))
                        continue;
                    // P_{{k,l},s_B} = (1/(L-1)) |phi><phi|
                    ops.e_bit.add(idx(x, k), idx(x, k), 0.5 / Lm1);
                    ops.e_bit.add(idx(x, l), idx(x, l), 0.5 / Lm1);
                    ops.e_bit.add(idx(x, k), idx(x, l), 0.5 * sign / Lm1);
                }
            }

    // Phase error: sum over ordered (k,l) of P(|->_l) (x) P(|k>)/(L-1).
    // P(|->_l) = (1 - X_l)/2 in the computational basis.
    ops.e_ph = SymMatrix(dim);
    for (int k = 0; k < L; ++k)
        for (int l = 0; l < L; ++l) {
            if (l == k)
                continue;
            for (unsigned x = 0; x < n_a; ++x) {
                const unsigned y = x ^ (1U << l);
                ops.e_ph.add(idx(x, k), idx(x, k), 0.5 / Lm1);
                if (x < y)
                    ops.e_ph.add(idx(x, k), idx(y, k), -0.5 / Lm1);
            }
        }

    // P^(nu): X-basis labels a with |a| <= nu and |a| = nu mod 2, tensored with 1_B.
    ops.p_nu.reserve(L + 1);
    for (int nu = 0; nu <= L; ++nu) {
        Matrix pa(n_a);
        for (unsigned a = 0; a < n_a; ++a) {
            const int w = std::popcount(a);
            if (w > nu || (nu - w) % 2 != 0)
                continue;
            for (unsigned x = 0; x < n_a; ++x)
                for (unsigned y = 0; y < n_a; ++y)
                    pa(x, y) += hadamard_amplitude(L, a, x) * hadamard_amplitude(L, a, y);
        }
        SymMatrix p(dim);
        for (unsigned x = 0; x < n_a; ++x)
            for (unsigned y = x; y < n_a; ++y)
                for (int k = 0; k < L; ++k)
                    p.set(idx(x, k), idx(y, k), 0.5 * (pa(x, y) + pa(y, x)));
        ops.p_nu.push_back(std::move(p));
    }

    // U H|a>|k> = H|a xor e_k>|k>, assembled from the X-basis vectors.
    ops.u = Matrix(dim);
    for (int k = 0; k < L; ++k)
        for (unsigned a = 0; a < n_a; ++a) {
            const unsigned a2 = a ^ (1U << k);
            for (unsigned x = 0; x < n_a; ++x)
                for (unsigned y = 0; y < n_a; ++y)
                    ops.u(idx(x, k), idx(y, k)) +=
                        hadamard_amplitude(L, a2, x) * hadamard_amplitude(L, a, y);
        }
    return ops;
}

}  // namespace rrdps
