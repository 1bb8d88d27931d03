#include "dicke/model.hpp"

#include <cmath>
#include <string>

namespace dicke {

void validate(const ModelParams& params) {
    if (!(params.omega_c > 0.0))
        throw std::invalid_argument("omega_c must be positive");
    if (!(params.omega_s > 0.0))
        throw std::invalid_argument("omega_s must be positive");
    if (!(params.kappa >= 0.0))
        throw std::invalid_argument("kappa must be non-negative");
    if (!(params.lambda >= 0.0))
        throw std::invalid_argument("lambda must be non-negative");
    if (params.spin_count < 1)
        throw std::invalid_argument("spin_count must be at least 1");
    if (params.n_cutoff < 1)
        throw std::invalid_argument("n_cutoff must be at least 1");
}

HilbertBasis enumerate_basis(const ModelParams& params) {
    validate(params);
    HilbertBasis basis;
    basis.n_cutoff = params.n_cutoff;
    basis.spin_count = params.spin_count;
    basis.states.reserve(static_cast<std::size_t>(params.n_cutoff + 1) *
                         (params.spin_count + 1));
    for (int n = 0; n <= params.n_cutoff; ++n)
        for (int tm = -params.spin_count; tm <= params.spin_count; tm += 2)
            basis.states.push_back({n, tm});
    return basis;
}

SparseMatrixXcd op_cavity_annihilation(const HilbertBasis& basis) {
    const Eigen::Index dim = basis.dim();
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(dim));
    for (const HilbertState& state : basis.states) {
        if (state.n == 0) continue;
        // a |n, m> = sqrt(n) |n - 1, m>
        entries.emplace_back(basis.index(state.n - 1, state.twice_m),
                             basis.index(state.n, state.twice_m),
                             std::sqrt(static_cast<double>(state.n)));
    }
    SparseMatrixXcd op(dim, dim);
    op.setFromTriplets(entries.begin(), entries.end());
    return op;
}

SparseMatrixXcd op_number(const HilbertBasis& basis) {
    const Eigen::Index dim = basis.dim();
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
        const int n = basis.states[static_cast<std::size_t>(i)].n;
        if (n != 0) entries.emplace_back(i, i, static_cast<double>(n));
    }
    SparseMatrixXcd op(dim, dim);
    op.setFromTriplets(entries.begin(), entries.end());
    return op;
}

namespace {

// <j, m+1 | S^+ | j, m> with everything in doubled-integer units:
// sqrt(j(j+1) - m(m+1)) = (1/2) sqrt(s(s+2) - tm(tm+2)) for s = 2j, tm = 2m.
double raising_coefficient(int spin_count, int twice_m) {
    const double s = static_cast<double>(spin_count);
    const double tm = static_cast<double>(twice_m);
    return 0.5 * std::sqrt(s * (s + 2.0) - tm * (tm + 2.0));
}

}  // namespace

SparseMatrixXcd op_spin_raising(const HilbertBasis& basis) {
    const Eigen::Index dim = basis.dim();
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(dim));
    for (const HilbertState& state : basis.states) {
        if (state.twice_m == basis.spin_count) continue;
        entries.emplace_back(basis.index(state.n, state.twice_m + 2),
                             basis.index(state.n, state.twice_m),
                             raising_coefficient(basis.spin_count, state.twice_m));
    }
    SparseMatrixXcd op(dim, dim);
    op.setFromTriplets(entries.begin(), entries.end());
    return op;
}

SparseMatrixXcd op_spin_lowering(const HilbertBasis& basis) {
    const Eigen::Index dim = basis.dim();
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(dim));
    for (const HilbertState& state : basis.states) {
        if (state.twice_m == -basis.spin_count) continue;
        // <m-1|S^-|m> = <m|S^+|m-1>, reuse the raising coefficient so the
        // ladder pair stays bitwise symmetric.
        entries.emplace_back(basis.index(state.n, state.twice_m - 2),
                             basis.index(state.n, state.twice_m),
                             raising_coefficient(basis.spin_count, state.twice_m - 2));
    }
    SparseMatrixXcd op(dim, dim);
    op.setFromTriplets(entries.begin(), entries.end());
    return op;
}

SparseMatrixXcd op_spin(const HilbertBasis& basis, SpinAxis axis) {
    const Eigen::Index dim = basis.dim();
    if (axis == SpinAxis::z) {
        std::vector<Triplet> entries;
        entries.reserve(static_cast<std::size_t>(dim));
        for (Eigen::Index i = 0; i < dim; ++i) {
            const int tm = basis.states[static_cast<std::size_t>(i)].twice_m;
            if (tm != 0) entries.emplace_back(i, i, 0.5 * tm);
        }
        SparseMatrixXcd op(dim, dim);
        op.setFromTriplets(entries.begin(), entries.end());
        return op;
    }
    const SparseMatrixXcd raise = op_spin_raising(basis);
    const SparseMatrixXcd lower = op_spin_lowering(basis);
    if (axis == SpinAxis::x) return Complex(0.5) * (raise + lower);
    return Complex(0.0, -0.5) * (raise - lower);
}

SparseMatrixXcd build_hamiltonian(const HilbertBasis& basis,
                                  const ModelParams& params) {
    validate(params);
    const SparseMatrixXcd a = op_cavity_annihilation(basis);
    const SparseMatrixXcd cavity_x = a + SparseMatrixXcd(a.adjoint());
    const double coupling =
        2.0 * params.lambda / std::sqrt(static_cast<double>(params.spin_count));
    SparseMatrixXcd h = params.omega_c * op_number(basis) +
                        params.omega_s * op_spin(basis, SpinAxis::z);
    if (coupling != 0.0)
        h = h + coupling * SparseMatrixXcd(cavity_x * op_spin(basis, SpinAxis::x));
    h.makeCompressed();
    return h;
}

SparseMatrixXcd build_hamiltonian(const ModelParams& params) {
    return build_hamiltonian(enumerate_basis(params), params);
}

double critical_coupling(const ModelParams& params) {
    if (!(params.omega_c > 0.0))
        throw std::invalid_argument("omega_c must be positive");
    if (!(params.omega_s > 0.0))
        throw std::invalid_argument("omega_s must be positive");
    if (!(params.kappa >= 0.0))
        throw std::invalid_argument("kappa must be non-negative");
    return 0.5 * std::sqrt(params.omega_c * params.omega_s) *
           std::sqrt(1.0 + (params.kappa * params.kappa) /
                               (params.omega_c * params.omega_c));
}

Eigen::VectorXi parity_signs(const HilbertBasis& basis) {
    Eigen::VectorXi signs(basis.dim());
    for (Eigen::Index i = 0; i < basis.dim(); ++i) {
        const HilbertState& state = basis.states[static_cast<std::size_t>(i)];
        // n + m + j is integral; parity flips with every excitation quantum.
        const int quanta = state.n + (state.twice_m + basis.spin_count) / 2;
        signs[i] = (quanta % 2 == 0) ? 1 : -1;
    }
    return signs;
}

}  // namespace dicke
