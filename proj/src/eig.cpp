#include "dicke/eig.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "dicke/prng.hpp"

#ifdef DICKE_HAVE_LAPACKE
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#else
#include <Eigen/Eigenvalues>
#endif

namespace dicke {

void sort_canonical(Eigen::VectorXcd& values) {
    std::sort(values.data(), values.data() + values.size(),
              [](const Complex& a, const Complex& b) {
                  if (a.real() != b.real()) return a.real() < b.real();
                  return a.imag() < b.imag();
              });
}

namespace {

// Worst relative residual over a deterministic sample of eigenpairs.
double sample_residuals(const Eigen::MatrixXcd& matrix,
                        const Eigen::VectorXcd& values,
                        const Eigen::MatrixXcd& vectors) {
    const Eigen::Index n = values.size();
    const Eigen::Index samples = std::min<Eigen::Index>(n, 32);
    // Fixed seed: the spot-check must not perturb reproducibility.
    Philox4x32 rng(0x9d1cee5e51ceULL);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < samples; ++k) {
        const Eigen::Index i =
            (n <= 32) ? k
                      : static_cast<Eigen::Index>(rng.next_u64() %
                                                  static_cast<std::uint64_t>(n));
        const auto v = vectors.col(i);
        const double scale = v.norm();
        if (scale == 0.0) continue;
        worst = std::max(worst, (matrix * v - values[i] * v).norm() / scale);
    }
    return worst;
}

}  // namespace

Spectrum eigenvalues(const Eigen::MatrixXcd& matrix, bool with_residuals) {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("eigenvalues: matrix must be square");
    if (!matrix.allFinite())
        throw std::invalid_argument("eigenvalues: matrix has non-finite entries");

    const Eigen::Index n = matrix.rows();
    Spectrum result;
    if (n == 0) {
        result.eigenvalues.resize(0);
        return result;
    }

    Eigen::VectorXcd values(n);
    Eigen::MatrixXcd vectors;

#ifdef DICKE_HAVE_LAPACKE
    Eigen::MatrixXcd work = matrix;  // zgeev destroys its input
    if (with_residuals) vectors.resize(n, n);
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', with_residuals ? 'V' : 'N',
        static_cast<lapack_int>(n), work.data(), static_cast<lapack_int>(n),
        values.data(), nullptr, 1, with_residuals ? vectors.data() : nullptr,
        with_residuals ? static_cast<lapack_int>(n) : 1);
    if (info < 0)
        throw std::invalid_argument("zgeev: illegal argument " +
                                    std::to_string(-info));
    if (info > 0)
        throw EigensolverError(
            "zgeev failed to converge; " + std::to_string(n - info) +
                " of " + std::to_string(n) + " eigenvalues converged",
            n - static_cast<Eigen::Index>(info));
#else
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, with_residuals);
    if (solver.info() != Eigen::Success)
        throw EigensolverError("complex Schur iteration failed to converge", 0);
    values = solver.eigenvalues();
    if (with_residuals) vectors = solver.eigenvectors();
#endif

    if (with_residuals)
        result.residual_max = sample_residuals(matrix, values, vectors);

    sort_canonical(values);
    result.eigenvalues = std::move(values);
    return result;
}

Spectrum eigenvalues(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("eigenvalues: matrix must be square");
    if (!matrix.allFinite())
        throw std::invalid_argument("eigenvalues: matrix has non-finite entries");

    const Eigen::Index n = matrix.rows();
    Spectrum result;
    if (n == 0) {
        result.eigenvalues.resize(0);
        return result;
    }

    Eigen::VectorXcd values(n);

#ifdef DICKE_HAVE_LAPACKE
    Eigen::MatrixXd work = matrix;  // dgeev destroys its input
    Eigen::VectorXd real_parts(n);
    Eigen::VectorXd imag_parts(n);
    const lapack_int info = LAPACKE_dgeev(
        LAPACK_COL_MAJOR, 'N', 'N', static_cast<lapack_int>(n), work.data(),
        static_cast<lapack_int>(n), real_parts.data(), imag_parts.data(),
        nullptr, 1, nullptr, 1);
    if (info < 0)
        throw std::invalid_argument("dgeev: illegal argument " +
                                    std::to_string(-info));
    if (info > 0)
        throw EigensolverError(
            "dgeev failed to converge; " + std::to_string(n - info) +
                " of " + std::to_string(n) + " eigenvalues converged",
            n - static_cast<Eigen::Index>(info));
    for (Eigen::Index i = 0; i < n; ++i)
        values[i] = Complex(real_parts[i], imag_parts[i]);
#else
    Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, false);
    if (solver.info() != Eigen::Success)
        throw EigensolverError("real Schur iteration failed to converge", 0);
    values = solver.eigenvalues();
#endif

    sort_canonical(values);
    result.eigenvalues = std::move(values);
    return result;
}

Spectrum window_filter(const Spectrum& spectrum, const ModelParams& params,
                       double alpha) {
    validate(params);
    if (!(alpha >= 0.0))
        throw std::invalid_argument("window_filter: alpha must be non-negative");
    const double re_min = -alpha * params.kappa * params.n_cutoff;
    const double re_max = 0.0;

    Spectrum result;
    result.metadata = spectrum.metadata;
    result.residual_max = spectrum.residual_max;
    result.window = {re_min, re_max};

    std::vector<Complex> kept;
    kept.reserve(static_cast<std::size_t>(spectrum.size()));
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
        const Complex e = spectrum.eigenvalues[i];
        if (e.real() >= re_min && e.real() <= re_max) kept.push_back(e);
    }
    result.eigenvalues =
        Eigen::Map<const Eigen::VectorXcd>(kept.data(),
                                           static_cast<Eigen::Index>(kept.size()));
    return result;
}

void write_spectrum(std::ostream& out, const Spectrum& spectrum) {
    char line[128];
    for (const auto& [key, value] : spectrum.metadata)
        out << "# " << key << " = " << value << '\n';
    if (spectrum.window) {
        std::snprintf(line, sizeof line, "# window_re_min = %.17g\n",
                      spectrum.window->first);
        out << line;
        std::snprintf(line, sizeof line, "# window_re_max = %.17g\n",
                      spectrum.window->second);
        out << line;
    }
    if (spectrum.residual_max) {
        std::snprintf(line, sizeof line, "# residual_max = %.17g\n",
                      *spectrum.residual_max);
        out << line;
    }
    out << "# count = " << spectrum.size() << '\n';
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g %.17g\n",
                      spectrum.eigenvalues[i].real(),
                      spectrum.eigenvalues[i].imag());
        out << line;
    }
}

Spectrum read_spectrum(std::istream& in) {
    Spectrum result;
    std::vector<Complex> values;
    std::string text;
    while (std::getline(in, text)) {
        if (text.empty()) continue;
        if (text.front() == '#') {
            const auto eq = text.find('=');
            if (eq == std::string::npos) continue;
            std::string key = text.substr(1, eq - 1);
            std::string value = text.substr(eq + 1);
            const auto trim = [](std::string& s) {
                const auto begin = s.find_first_not_of(" \t");
                const auto end = s.find_last_not_of(" \t");
                s = (begin == std::string::npos)
                        ? std::string()
                        : s.substr(begin, end - begin + 1);
            };
            trim(key);
            trim(value);
            if (key == "count") continue;
            if (key == "residual_max") {
                result.residual_max = std::stod(value);
            } else if (key == "window_re_min") {
                result.window = {std::stod(value),
                                 result.window ? result.window->second : 0.0};
            } else if (key == "window_re_max") {
                result.window = {result.window ? result.window->first : 0.0,
                                 std::stod(value)};
            } else {
                result.metadata.emplace_back(key, value);
            }
            continue;
        }
        std::istringstream fields(text);
        double re = 0.0, im = 0.0;
        if (!(fields >> re >> im))
            throw std::invalid_argument("read_spectrum: malformed line: " + text);
        values.emplace_back(re, im);
    }
    result.eigenvalues = Eigen::Map<const Eigen::VectorXcd>(
        values.data(), static_cast<Eigen::Index>(values.size()));
    return result;
}

}  // namespace dicke
