// discrete_oracle.hpp — brute-force verification backend: exact normal modes
// of the (N+1)-mode quadratic boson Hamiltonian, with and without the
// rotating-wave approximation and the counter-term. Validates every
// continuum formula against finite-bath linear algebra.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "fanodho/classical_bath.hpp"
#include "fanodho/params.hpp"

namespace fanodho {

// H/hbar = sum M_mn a_m^+ a_n + (1/2) sum Q_mn (a_m^+ a_n^+ + a_m a_n),
// mode 0 = system, modes 1..N = bath. The rwa flag forces Q = 0.
struct QuadraticForm {
    Eigen::MatrixXd M;
    Eigen::MatrixXd Q;
    bool rwa = false;
    bool counter_term = false;

    Eigen::Index dimension() const { return M.rows(); }
};

QuadraticForm build_quadratic_form(const DiscreteBath& bath, const ModelParams& p, bool rwa,
                                   bool counter_term);

// Normal modes A_k = sum_m (U_km a_m + V_km a_m^+) with positive
// eigenfrequencies; the transform preserves the canonical commutators.
struct NormalModes {
    Eigen::VectorXd frequencies;
    Eigen::MatrixXd U, V;
    bool rwa = false;

    // max |U U^T - V V^T - 1| and |U V^T - V U^T| entries
    double paraunitarity_residual() const;
};

// RWA reduces to a real symmetric eigenproblem; the full case factors the
// quadrature form: with A = M + Q, B = M - Q, the symmetric eigenproblem of
// B^(1/2) A B^(1/2) yields the squared frequencies, which must be positive.
// Throws StabilityError otherwise, naming the violated inequality.
NormalModes symplectic_diagonalize(const QuadraticForm& form);

struct DiscreteEvolution {
    double t = 0.0;
    std::complex<double> c_a{1.0, 0.0};
    std::complex<double> c_adag{0.0, 0.0};
    std::vector<std::complex<double>> c_b, c_bdag;

    // |c_a|^2 - |c_adag|^2 + sum_j (|c_b_j|^2 - |c_bdag_j|^2); exactly 1
    double sum_rule() const;
};

// Exact Heisenberg coefficients of a(t) via eigenphase rotation.
DiscreteEvolution discrete_evolve_a(const NormalModes& modes, double t);

} // namespace fanodho
