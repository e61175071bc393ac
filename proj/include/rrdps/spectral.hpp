#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rrdps {

/// Dense square matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    static Matrix identity(std::size_t n);

    std::size_t dim() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    std::span<const double> data() const { return data_; }

    Matrix transpose() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix operator*(double s) const;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

double max_abs_diff(const Matrix& a, const Matrix& b);

/// Dense real symmetric matrix. Writes go through set()/add(), which keep
/// both triangles identical.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t n) : m_(n) {}

    static SymMatrix identity(std::size_t n);
    /// Symmetrizes a square matrix; throws if it is asymmetric beyond tol.
    static SymMatrix from_matrix(const Matrix& m, double tol = 1e-12);

    std::size_t dim() const { return m_.dim(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    void set(std::size_t i, std::size_t j, double v);
    void add(std::size_t i, std::size_t j, double v);
    const Matrix& matrix() const { return m_; }

    SymMatrix operator+(const SymMatrix& rhs) const;
    SymMatrix operator-(const SymMatrix& rhs) const;
    SymMatrix operator*(double s) const;

private:
    Matrix m_;
};

double max_abs_diff(const SymMatrix& a, const SymMatrix& b);

/// All-ones d x d matrix.
SymMatrix build_m1(int d);

/// Diagonal d x d matrix with the first m diagonal entries equal to one.
SymMatrix build_m2(int d, int m);

/// Closed form of det(alpha*M1 + beta*M2 + gamma*I) for d x d matrices with
/// m leading diagonal ones in M2.
double det_closed_form(double alpha, double beta, double gamma, int d, int m);

/// Determinant by Gaussian elimination with partial pivoting (dim <= 12).
double det_bruteforce(const SymMatrix& a);

/// Eigenvalues in ascending order, by cyclic Jacobi rotation.
std::vector<double> symmetric_eigenvalues(const SymMatrix& a, double off_tol = 1e-12,
                                          int max_sweeps = 100);

/// Largest eigenvalue (dim <= 128).
double max_eigenvalue(const SymMatrix& a);

/// Block of the transformed operator for an X-basis label of weight
/// a_weight <= nu-1 with the ones ordered first.
SymMatrix build_lambda_minus(int L, int a_weight, double lambda);

/// Nonzero block for a_weight = nu+1, restricted to the positions where a_k = 1.
SymMatrix build_lambda_plus(int L, int a_weight, double lambda);

/// Operators on L Alice qubits (system A) tensored with the single-photon
/// position space of L pulses (system B). Basis index is x * L + k where x
/// is the computational-basis bitmask of A (bit j <-> qubit j) and k the
/// photon position.
struct JointOperatorSet {
    int L = 0;
    std::size_t dim = 0;
    SymMatrix e_bit;              ///< bit-error POVM element
    SymMatrix e_ph;               ///< phase-error POVM element
    std::vector<SymMatrix> p_nu;  ///< photon-number projectors, nu = 0..L
    Matrix u;                     ///< conditional X-basis flip, real orthogonal
};

JointOperatorSet build_joint_operators(int L);

/// Amplitude <x|H^{(x)L}|a> of an X-basis state in the computational basis.
double hadamard_amplitude(int L, unsigned a, unsigned x);

/// Single-photon POVM elements on system B.
SymMatrix detection_element(int L, int k, int l, int s_b);      ///< P'_{{k,l},s_B}
SymMatrix ordered_pair_element(int L, int k, int l);            ///< P_(k,l)

}  // namespace rrdps
