#include "fanodho/discrete_oracle.hpp"

#include <cmath>
#include <sstream>

#include "fanodho/errors.hpp"

namespace fanodho {

QuadraticForm build_quadratic_form(const DiscreteBath& bath, const ModelParams& p, bool rwa,
                                   bool counter_term) {
    const Eigen::Index n = static_cast<Eigen::Index>(bath.size()) + 1;
    QuadraticForm form;
    form.rwa = rwa;
    form.counter_term = counter_term;
    form.M = Eigen::MatrixXd::Zero(n, n);
    form.Q = Eigen::MatrixXd::Zero(n, n);

    form.M(0, 0) = p.omega0;
    for (Eigen::Index j = 1; j < n; ++j) form.M(j, j) = bath.omega[j - 1];

    for (Eigen::Index j = 1; j < n; ++j) {
        const double Cj = bath.coupling[j - 1];
        const double mj = bath.mass[j - 1];
        const double wj = bath.omega[j - 1];
        const double kj = -0.5 * Cj / std::sqrt(p.mass * p.omega0 * mj * wj);
        form.M(0, j) = form.M(j, 0) = kj;
        if (!rwa) form.Q(0, j) = form.Q(j, 0) = kj;
    }
    if (counter_term) {
        // (dW^2/(4 w0)) (a + a^+)^2 with the discrete frequency shift
        const double dw2 = bath.counter_term_sum() / p.mass;
        form.M(0, 0) += dw2 / (2.0 * p.omega0);
        if (!rwa) form.Q(0, 0) = dw2 / (2.0 * p.omega0);
    }
    return form;
}

double NormalModes::paraunitarity_residual() const {
    const Eigen::Index n = U.rows();
    const Eigen::MatrixXd comm = U * U.transpose() - V * V.transpose() -
                                 Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd anom = U * V.transpose() - V * U.transpose();
    return std::max(comm.cwiseAbs().maxCoeff(), anom.cwiseAbs().maxCoeff());
}

NormalModes symplectic_diagonalize(const QuadraticForm& form) {
    const Eigen::Index n = form.dimension();
    NormalModes modes;
    modes.rwa = form.rwa;

    if (form.rwa) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(form.M);
        modes.frequencies = es.eigenvalues();
        modes.U = es.eigenvectors().transpose(); // A_k = sum_m S_mk a_m
        modes.V = Eigen::MatrixXd::Zero(n, n);
        return modes;
    }

    // quadrature representation: H = (1/2) x^T A x + (1/2) y^T B y with
    // A = M + Q, B = M - Q; B is diagonal positive for these models
    const Eigen::MatrixXd A = form.M + form.Q;
    const Eigen::MatrixXd B = form.M - form.Q;
    Eigen::VectorXd b_sqrt(n), b_isqrt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double bi = B(i, i);
        if (!(bi > 0.0))
            throw StabilityError("symplectic_diagonalize: the momentum-quadrature block must be "
                                 "positive (bare mode frequencies > 0)");
        b_sqrt(i) = std::sqrt(bi);
        b_isqrt(i) = 1.0 / b_sqrt(i);
    }
    const Eigen::MatrixXd W = b_sqrt.asDiagonal() * A * b_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
    const Eigen::VectorXd lam_sq = es.eigenvalues();
    if (lam_sq(0) <= 0.0) {
        std::ostringstream msg;
        msg << "symplectic_diagonalize: squared eigenfrequency " << lam_sq(0)
            << " <= 0; the stability condition omega0^2 > |Delta w^2| (discrete analog) is "
               "violated without the counter-term";
        throw StabilityError(msg.str());
    }
    const Eigen::MatrixXd& S = es.eigenvectors();

    modes.frequencies = lam_sq.cwiseSqrt();
    modes.U.resize(n, n);
    modes.V.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double rl = std::sqrt(modes.frequencies(k));
        for (Eigen::Index m = 0; m < n; ++m) {
            const double pos = rl * b_isqrt(m) * S(m, k);      // sqrt(l_k/b_m) S_mk
            const double mom = b_sqrt(m) / rl * S(m, k);       // sqrt(b_m/l_k) S_mk
            modes.U(k, m) = 0.5 * (pos + mom);
            modes.V(k, m) = 0.5 * (pos - mom);
        }
    }
    return modes;
}

DiscreteEvolution discrete_evolve_a(const NormalModes& modes, double t) {
    if (t < 0.0) throw std::invalid_argument("discrete_evolve_a: t must be >= 0");
    const Eigen::Index n = modes.U.rows();
    DiscreteEvolution ev;
    ev.t = t;
    ev.c_b.assign(static_cast<std::size_t>(n - 1), {0.0, 0.0});
    ev.c_bdag.assign(static_cast<std::size_t>(n - 1), {0.0, 0.0});

    // a(t) = [U^T e^{-iLt} U - V^T e^{+iLt} V] a + [U^T e^{-iLt} V - V^T e^{+iLt} U] a^+
    std::complex<double> ca{0.0, 0.0}, cad{0.0, 0.0};
    std::vector<std::complex<double>> cb(static_cast<std::size_t>(n), {0.0, 0.0});
    std::vector<std::complex<double>> cbd(static_cast<std::size_t>(n), {0.0, 0.0});
    for (Eigen::Index k = 0; k < n; ++k) {
        const std::complex<double> em = std::exp(std::complex<double>(0.0, -modes.frequencies(k) * t));
        const std::complex<double> ep = std::conj(em);
        const double u0 = modes.U(k, 0);
        const double v0 = modes.V(k, 0);
        for (Eigen::Index m = 0; m < n; ++m) {
            cb[static_cast<std::size_t>(m)] += u0 * em * modes.U(k, m) - v0 * ep * modes.V(k, m);
            cbd[static_cast<std::size_t>(m)] += u0 * em * modes.V(k, m) - v0 * ep * modes.U(k, m);
        }
    }
    ev.c_a = cb[0];
    ev.c_adag = cbd[0];
    for (Eigen::Index m = 1; m < n; ++m) {
        ev.c_b[static_cast<std::size_t>(m - 1)] = cb[static_cast<std::size_t>(m)];
        ev.c_bdag[static_cast<std::size_t>(m - 1)] = cbd[static_cast<std::size_t>(m)];
    }
    return ev;
}

double DiscreteEvolution::sum_rule() const {
    double s = std::norm(c_a) - std::norm(c_adag);
    for (std::size_t j = 0; j < c_b.size(); ++j) s += std::norm(c_b[j]) - std::norm(c_bdag[j]);
    return s;
}

} // namespace fanodho
