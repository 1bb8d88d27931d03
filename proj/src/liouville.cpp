#include "dicke/liouville.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

namespace dicke {

const char* to_string(Sector sector) {
    switch (sector) {
        case Sector::full: return "full";
        case Sector::even: return "even";
        case Sector::odd: return "odd";
    }
    throw std::invalid_argument("unknown sector");
}

LiouvilleBasis enumerate_liouville_basis(const HilbertBasis& basis) {
    const Eigen::Index dim_h = basis.dim();
    const Eigen::VectorXi signs = parity_signs(basis);
    LiouvilleBasis lbasis;
    lbasis.states.reserve(static_cast<std::size_t>(dim_h * dim_h));
    lbasis.parities.reserve(static_cast<std::size_t>(dim_h * dim_h));
    for (Eigen::Index l = 0; l < dim_h; ++l) {
        const HilbertState& left = basis.states[static_cast<std::size_t>(l)];
        for (Eigen::Index r = 0; r < dim_h; ++r) {
            const HilbertState& right = basis.states[static_cast<std::size_t>(r)];
            lbasis.states.push_back(
                {left.n, left.twice_m, right.n, right.twice_m});
            lbasis.parities.push_back(
                static_cast<std::int8_t>(signs[l] * signs[r]));
        }
    }
    return lbasis;
}

LiouvillianMatrix assemble_liouvillian(const ModelParams& params,
                                       const AssemblyOptions& options) {
    validate(params);
    const HilbertBasis hbasis = enumerate_basis(params);
    const Eigen::Index dim_h = hbasis.dim();
    const Eigen::Index dim_l = dim_h * dim_h;
    if (!options.force && dim_l > 2 * options.dense_dimension_guard)
        throw DimensionGuardError(
            "Liouville dimension " + std::to_string(dim_l) +
            " exceeds twice the dense dimension guard " +
            std::to_string(options.dense_dimension_guard) +
            "; pass force to assemble anyway");

    const SparseMatrixXcd hamiltonian = build_hamiltonian(hbasis, params);
    const SparseMatrixXcd a = op_cavity_annihilation(hbasis);

    // a has at most one entry per column; flatten it for O(1) lookup.
    std::vector<Eigen::Index> a_row(static_cast<std::size_t>(dim_h), -1);
    std::vector<double> a_val(static_cast<std::size_t>(dim_h), 0.0);
    for (Eigen::Index col = 0; col < dim_h; ++col)
        for (SparseMatrixXcd::InnerIterator it(a, col); it; ++it) {
            a_row[static_cast<std::size_t>(col)] = it.row();
            a_val[static_cast<std::size_t>(col)] = it.value().real();
        }

    const double kappa = params.kappa;
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(dim_l) *
                    (2 * static_cast<std::size_t>(hamiltonian.nonZeros() / std::max<Eigen::Index>(dim_h, 1)) + 3));

    // Column (col_l, col_r) of L rho = -i H rho + i rho H + kappa (2 a rho a^dag
    // - a^dag a rho - rho a^dag a).  H is Hermitian, so the rho H term uses
    // conj(H[r, col_r]) read from column col_r.
    for (Eigen::Index col_l = 0; col_l < dim_h; ++col_l) {
        const Eigen::Index n_left = hbasis.states[static_cast<std::size_t>(col_l)].n;
        for (Eigen::Index col_r = 0; col_r < dim_h; ++col_r) {
            const Eigen::Index col = col_l * dim_h + col_r;
            for (SparseMatrixXcd::InnerIterator it(hamiltonian, col_l); it; ++it)
                entries.emplace_back(it.row() * dim_h + col_r, col,
                                     -imag_unit * it.value());
            for (SparseMatrixXcd::InnerIterator it(hamiltonian, col_r); it; ++it)
                entries.emplace_back(col_l * dim_h + it.row(), col,
                                     imag_unit * std::conj(it.value()));
            if (kappa != 0.0) {
                const Eigen::Index row_l = a_row[static_cast<std::size_t>(col_l)];
                const Eigen::Index row_r = a_row[static_cast<std::size_t>(col_r)];
                if (row_l >= 0 && row_r >= 0)
                    // The symmetric factor pair multiplies first so that the
                    // bra-ket swapped cell rounds to the identical value.
                    entries.emplace_back(
                        row_l * dim_h + row_r, col,
                        2.0 * kappa * (a_val[static_cast<std::size_t>(col_l)] *
                                       a_val[static_cast<std::size_t>(col_r)]));
                const Eigen::Index n_right =
                    hbasis.states[static_cast<std::size_t>(col_r)].n;
                if (n_left + n_right != 0)
                    entries.emplace_back(
                        col, col, -kappa * static_cast<double>(n_left + n_right));
            }
        }
    }

    LiouvillianMatrix result;
    result.matrix.resize(dim_l, dim_l);
    result.matrix.setFromTriplets(entries.begin(), entries.end());
    result.matrix.makeCompressed();
    result.params = params;
    result.sector = Sector::full;
    result.basis = enumerate_liouville_basis(hbasis);
    return result;
}

LiouvillianMatrix project_sector(const LiouvillianMatrix& full, Sector sector) {
    if (full.sector != Sector::full)
        throw std::invalid_argument(
            "project_sector requires a full-sector Liouvillian");
    if (sector == Sector::full) return full;

    const std::int8_t wanted = (sector == Sector::even) ? 1 : -1;
    const Eigen::Index dim = full.dim();
    std::vector<Eigen::Index> block_index(static_cast<std::size_t>(dim), -1);
    LiouvilleBasis block_basis;
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (full.basis.parities[static_cast<std::size_t>(i)] != wanted) continue;
        block_index[static_cast<std::size_t>(i)] = block_basis.dim();
        block_basis.states.push_back(full.basis.states[static_cast<std::size_t>(i)]);
        block_basis.parities.push_back(wanted);
    }

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(full.matrix.nonZeros() / 2 + 1));
    for (Eigen::Index col = 0; col < dim; ++col) {
        const Eigen::Index block_col = block_index[static_cast<std::size_t>(col)];
        if (block_col < 0) continue;
        for (SparseMatrixXcd::InnerIterator it(full.matrix, col); it; ++it) {
            const Eigen::Index block_row =
                block_index[static_cast<std::size_t>(it.row())];
            if (block_row >= 0)
                entries.emplace_back(block_row, block_col, it.value());
        }
    }

    LiouvillianMatrix result;
    result.matrix.resize(block_basis.dim(), block_basis.dim());
    result.matrix.setFromTriplets(entries.begin(), entries.end());
    result.matrix.makeCompressed();
    result.params = full.params;
    result.sector = sector;
    result.basis = std::move(block_basis);
    return result;
}

SparseMatrixXd conjugation_real_form(const LiouvillianMatrix& block) {
    const Eigen::Index dim = block.dim();
    const auto& states = block.basis.states;
    if (static_cast<Eigen::Index>(states.size()) != dim)
        throw std::invalid_argument(
            "conjugation_real_form: basis does not span the matrix");

    // sigma swaps the bra and ket of |n_l, m_l><n_r, m_r|.  Key every state
    // by its position in the full left-major grid to find swap partners.
    const int levels = block.params.spin_count + 1;
    const std::int64_t dim_h =
        static_cast<std::int64_t>(block.params.n_cutoff + 1) * levels;
    const auto half_index = [&](int n, int twice_m) {
        return static_cast<std::int64_t>(n) * levels +
               (twice_m + block.params.spin_count) / 2;
    };
    std::unordered_map<std::int64_t, Eigen::Index> by_key;
    by_key.reserve(static_cast<std::size_t>(2 * dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
        const LiouvilleState& s = states[static_cast<std::size_t>(i)];
        by_key.emplace(half_index(s.n_l, s.twice_m_l) * dim_h +
                           half_index(s.n_r, s.twice_m_r),
                       i);
    }
    std::vector<Eigen::Index> sigma(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
        const LiouvilleState& s = states[static_cast<std::size_t>(i)];
        const auto partner = by_key.find(half_index(s.n_r, s.twice_m_r) * dim_h +
                                         half_index(s.n_l, s.twice_m_l));
        if (partner == by_key.end())
            throw std::invalid_argument(
                "conjugation_real_form: basis is not closed under bra-ket swap");
        sigma[static_cast<std::size_t>(i)] = partner->second;
    }

    // Real coordinates: self-conjugate states keep one index; each swap pair
    // (i, sigma i) with i canonical gets a consecutive (u, v) pair, u for the
    // Hermitian combination e_i + e_si and v for i(e_i - e_si).
    std::vector<Eigen::Index> u_index(static_cast<std::size_t>(dim), -1);
    std::vector<Eigen::Index> v_index(static_cast<std::size_t>(dim), -1);
    Eigen::Index next = 0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Eigen::Index j = sigma[static_cast<std::size_t>(i)];
        if (j < i) continue;
        u_index[static_cast<std::size_t>(i)] = next;
        u_index[static_cast<std::size_t>(j)] = next;
        if (j == i) {
            next += 1;
        } else {
            v_index[static_cast<std::size_t>(i)] = next + 1;
            v_index[static_cast<std::size_t>(j)] = next + 1;
            next += 2;
        }
    }

    const auto column_entries = [&](Eigen::Index col) {
        std::unordered_map<Eigen::Index, Complex> entries;
        for (SparseMatrixXcd::InnerIterator it(block.matrix, col); it; ++it)
            entries.emplace(it.row(), it.value());
        return entries;
    };
    const auto lookup = [](const std::unordered_map<Eigen::Index, Complex>& map,
                           Eigen::Index row) {
        const auto found = map.find(row);
        return found == map.end() ? Complex(0.0, 0.0) : found->second;
    };
    const auto conj_mismatch = [](const Complex& a, const Complex& b) {
        return a.real() != b.real() || a.imag() != -b.imag();
    };

    std::vector<TripletD> real_entries;
    real_entries.reserve(static_cast<std::size_t>(block.matrix.nonZeros()) * 2);
    const auto push = [&](Eigen::Index row, Eigen::Index col, double value) {
        if (value != 0.0) real_entries.emplace_back(row, col, value);
    };

    for (Eigen::Index p = 0; p < dim; ++p) {
        const Eigen::Index sp = sigma[static_cast<std::size_t>(p)];
        if (sp < p) continue;
        const auto col_p = column_entries(p);

        if (sp == p) {
            // Entry (q, p) and its partner (sigma q, p) live in this one
            // column and must be exact conjugates.
            for (const auto& [q, c] : col_p) {
                const Eigen::Index sq = sigma[static_cast<std::size_t>(q)];
                if (conj_mismatch(lookup(col_p, sq), c))
                    throw std::logic_error(
                        "conjugation_real_form: stored entries are not "
                        "bitwise conjugate under bra-ket swap");
                if (sq < q) continue;
                if (sq == q) {
                    push(u_index[static_cast<std::size_t>(q)],
                         u_index[static_cast<std::size_t>(p)], c.real());
                } else {
                    push(u_index[static_cast<std::size_t>(q)],
                         u_index[static_cast<std::size_t>(p)], c.real());
                    push(v_index[static_cast<std::size_t>(q)],
                         u_index[static_cast<std::size_t>(p)], c.imag());
                }
            }
            continue;
        }

        const auto col_sp = column_entries(sp);
        // Partner of (q, p) is (sigma q, sigma p): verify both directions.
        for (const auto& [q, c] : col_p)
            if (conj_mismatch(
                    lookup(col_sp, sigma[static_cast<std::size_t>(q)]), c))
                throw std::logic_error(
                    "conjugation_real_form: stored entries are not bitwise "
                    "conjugate under bra-ket swap");
        for (const auto& [q, c] : col_sp)
            if (conj_mismatch(lookup(col_p, sigma[static_cast<std::size_t>(q)]),
                              c))
                throw std::logic_error(
                    "conjugation_real_form: stored entries are not bitwise "
                    "conjugate under bra-ket swap");

        for (const auto& [q, c1] : col_p) {
            const Eigen::Index sq = sigma[static_cast<std::size_t>(q)];
            if (sq < q) continue;
            const Complex c2 = lookup(col_sp, q);
            const Eigen::Index uq = u_index[static_cast<std::size_t>(q)];
            const Eigen::Index up = u_index[static_cast<std::size_t>(p)];
            const Eigen::Index vp = v_index[static_cast<std::size_t>(p)];
            if (sq == q) {
                push(uq, up, 2.0 * c1.real());
                push(uq, vp, -2.0 * c1.imag());
            } else {
                const Complex a = c1 + c2;
                const Complex b = c1 - c2;
                push(uq, up, a.real());
                push(v_index[static_cast<std::size_t>(q)], up, a.imag());
                push(uq, vp, -b.imag());
                push(v_index[static_cast<std::size_t>(q)], vp, b.real());
            }
        }
        // Rows present only in the partner column still project onto this
        // column pair through c2; c1 is zero there.
        for (const auto& [q, c2] : col_sp) {
            const Eigen::Index sq = sigma[static_cast<std::size_t>(q)];
            if (sq < q) continue;
            if (col_p.count(q)) continue;
            const Eigen::Index uq = u_index[static_cast<std::size_t>(q)];
            const Eigen::Index up = u_index[static_cast<std::size_t>(p)];
            const Eigen::Index vp = v_index[static_cast<std::size_t>(p)];
            if (sq == q) continue;  // self rows need c1 = conj(c2 partner) = 0
            // With c1 = 0: A = c2 and B = -c2.
            push(uq, up, c2.real());
            push(v_index[static_cast<std::size_t>(q)], up, c2.imag());
            push(uq, vp, c2.imag());
            push(v_index[static_cast<std::size_t>(q)], vp, -c2.real());
        }
    }

    SparseMatrixXd result(dim, dim);
    result.setFromTriplets(real_entries.begin(), real_entries.end());
    result.makeCompressed();
    return result;
}

double verify_weak_symmetry(const LiouvillianMatrix& liouvillian) {
    if (liouvillian.sector != Sector::full)
        throw std::invalid_argument(
            "verify_weak_symmetry requires a full-sector Liouvillian");
    double worst = 0.0;
    for (Eigen::Index col = 0; col < liouvillian.dim(); ++col) {
        const std::int8_t col_parity =
            liouvillian.basis.parities[static_cast<std::size_t>(col)];
        for (SparseMatrixXcd::InnerIterator it(liouvillian.matrix, col); it; ++it)
            if (liouvillian.basis.parities[static_cast<std::size_t>(it.row())] !=
                col_parity)
                worst = std::max(worst, std::abs(it.value()));
    }
    return worst;
}

double trace_preservation_defect(const LiouvillianMatrix& liouvillian) {
    // tr(L rho) = 0 for every rho means each column sums to zero over the
    // diagonal states |n,m><n,m|.
    const Eigen::Index dim = liouvillian.dim();
    std::vector<bool> is_diagonal(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
        const LiouvilleState& s = liouvillian.basis.states[static_cast<std::size_t>(i)];
        is_diagonal[static_cast<std::size_t>(i)] =
            (s.n_l == s.n_r && s.twice_m_l == s.twice_m_r);
    }
    double worst = 0.0;
    for (Eigen::Index col = 0; col < dim; ++col) {
        Complex sum = 0.0;
        for (SparseMatrixXcd::InnerIterator it(liouvillian.matrix, col); it; ++it)
            if (is_diagonal[static_cast<std::size_t>(it.row())]) sum += it.value();
        worst = std::max(worst, std::abs(sum));
    }
    return worst;
}

Eigen::MatrixXcd to_dense(const LiouvillianMatrix& liouvillian,
                          const AssemblyOptions& options) {
    if (!options.force && liouvillian.dim() > options.dense_dimension_guard)
        throw DimensionGuardError(
            "dense dimension " + std::to_string(liouvillian.dim()) +
            " exceeds the dense dimension guard " +
            std::to_string(options.dense_dimension_guard) +
            "; pass force to densify anyway");
    return Eigen::MatrixXcd(liouvillian.matrix);
}

Eigen::MatrixXd to_dense(const SparseMatrixXd& matrix,
                         const AssemblyOptions& options) {
    if (!options.force && matrix.rows() > options.dense_dimension_guard)
        throw DimensionGuardError(
            "dense dimension " + std::to_string(matrix.rows()) +
            " exceeds the dense dimension guard " +
            std::to_string(options.dense_dimension_guard) +
            "; pass force to densify anyway");
    return Eigen::MatrixXd(matrix);
}

void write_sparse_matrix(std::ostream& out, const SparseMatrixXcd& matrix) {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("write_sparse_matrix expects a square matrix");
    out << matrix.rows() << ' ' << matrix.nonZeros() << '\n';
    char line[128];
    for (Eigen::Index col = 0; col < matrix.outerSize(); ++col)
        for (SparseMatrixXcd::InnerIterator it(matrix, col); it; ++it) {
            std::snprintf(line, sizeof line, "%lld %lld %.17g %.17g\n",
                          static_cast<long long>(it.row()),
                          static_cast<long long>(it.col()),
                          it.value().real(), it.value().imag());
            out << line;
        }
}

}  // namespace dicke
