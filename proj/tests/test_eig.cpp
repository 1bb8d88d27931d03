#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dicke/eig.hpp"
#include "dicke/prng.hpp"

using namespace dicke;

TEST_CASE("canonical sort orders by real part then imaginary part") {
    Eigen::VectorXcd values(4);
    values << Complex(1.0, 2.0), Complex(0.0, 5.0), Complex(1.0, -1.0),
        Complex(-3.0, 0.0);
    sort_canonical(values);
    CHECK(values[0] == Complex(-3.0, 0.0));
    CHECK(values[1] == Complex(0.0, 5.0));
    CHECK(values[2] == Complex(1.0, -1.0));
    CHECK(values[3] == Complex(1.0, 2.0));
}

TEST_CASE("eigenvalues of small known matrices") {
    Eigen::MatrixXcd rotation(2, 2);
    rotation << Complex(0.0), Complex(1.0), Complex(-1.0), Complex(0.0);
    const Spectrum spectrum = eigenvalues(rotation);
    REQUIRE(spectrum.size() == 2);
    // Real parts of +-i come back as distinct rounding-level values, so the
    // canonical order of the pair is not stable; match as a multiset.
    for (const Complex expected : {Complex(0.0, -1.0), Complex(0.0, 1.0)}) {
        const double nearest =
            std::min(std::abs(spectrum.eigenvalues[0] - expected),
                     std::abs(spectrum.eigenvalues[1] - expected));
        CHECK(nearest < 1e-14);
    }

    Eigen::MatrixXcd diagonal = Eigen::MatrixXcd::Zero(3, 3);
    diagonal(0, 0) = Complex(2.0, 1.0);
    diagonal(1, 1) = Complex(-1.0, 0.5);
    diagonal(2, 2) = Complex(2.0, -3.0);
    const Spectrum sorted = eigenvalues(diagonal);
    CHECK(std::abs(sorted.eigenvalues[0] - Complex(-1.0, 0.5)) < 1e-14);
    CHECK(std::abs(sorted.eigenvalues[1] - Complex(2.0, -3.0)) < 1e-14);
    CHECK(std::abs(sorted.eigenvalues[2] - Complex(2.0, 1.0)) < 1e-14);
}

TEST_CASE("real matrices give exactly conjugate eigenvalue pairs") {
    Eigen::MatrixXd matrix(3, 3);
    matrix << 2.0, 0.0, 0.0,
              0.0, 0.3, 1.7,
              0.0, -1.7, 0.3;
    const Spectrum spectrum = eigenvalues(matrix);
    REQUIRE(spectrum.size() == 3);
    // The complex pair must come back bitwise conjugate, not merely close.
    CHECK(spectrum.eigenvalues[0].real() == spectrum.eigenvalues[1].real());
    CHECK(spectrum.eigenvalues[0].imag() == -spectrum.eigenvalues[1].imag());
    CHECK(std::abs(spectrum.eigenvalues[0] - Complex(0.3, -1.7)) < 1e-14);
    CHECK(std::abs(spectrum.eigenvalues[2] - Complex(2.0, 0.0)) < 1e-14);

    const Eigen::MatrixXd rectangular = Eigen::MatrixXd::Zero(2, 3);
    CHECK_THROWS_AS(eigenvalues(rectangular), std::invalid_argument);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
    bad(0, 1) = std::nan("");
    CHECK_THROWS_AS(eigenvalues(bad), std::invalid_argument);
    CHECK(eigenvalues(Eigen::MatrixXd()).size() == 0);
}

TEST_CASE("eigenvalues validates its input") {
    const Eigen::MatrixXcd rectangular = Eigen::MatrixXcd::Zero(2, 3);
    CHECK_THROWS_AS(eigenvalues(rectangular), std::invalid_argument);
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
    bad(0, 1) = Complex(std::nan(""), 0.0);
    CHECK_THROWS_AS(eigenvalues(bad), std::invalid_argument);
}

TEST_CASE("sampled residuals are small for a random matrix") {
    Philox4x32 rng(7);
    Eigen::MatrixXcd matrix(50, 50);
    for (Eigen::Index i = 0; i < 50; ++i)
        for (Eigen::Index j = 0; j < 50; ++j)
            matrix(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
    const Spectrum spectrum = eigenvalues(matrix, true);
    REQUIRE(spectrum.residual_max.has_value());
    CHECK(*spectrum.residual_max < 1e-10 * matrix.norm());
    CHECK(spectrum.size() == 50);
}

TEST_CASE("window filter keeps the closed band and records it") {
    Spectrum spectrum;
    spectrum.eigenvalues.resize(5);
    spectrum.eigenvalues << Complex(-2.0000001, 1.0), Complex(-2.0, -3.0),
        Complex(-1.0, 0.0), Complex(0.0, 2.0), Complex(0.1, 0.0);
    spectrum.metadata = {{"tag", "windowing"}};

    ModelParams params;
    params.kappa = 1.0;
    params.n_cutoff = 3;
    const Spectrum windowed = window_filter(spectrum, params, 2.0 / 3.0);
    REQUIRE(windowed.window.has_value());
    CHECK(windowed.window->first == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(windowed.window->second == 0.0);
    REQUIRE(windowed.size() == 3);  // both edges inclusive, outsiders dropped
    CHECK(windowed.eigenvalues[0] == Complex(-2.0, -3.0));
    CHECK(windowed.eigenvalues[2] == Complex(0.0, 2.0));
    REQUIRE(windowed.metadata.size() == 1);
    CHECK(windowed.metadata[0].second == "windowing");

    CHECK_THROWS_AS(window_filter(spectrum, params, -0.1),
                    std::invalid_argument);

    // A window that catches nothing is legal.
    ModelParams narrow = params;
    narrow.kappa = 0.0;
    const Spectrum empty = window_filter(spectrum, narrow, 2.0 / 3.0);
    CHECK(empty.size() == 1);  // only Re E = 0 survives kappa = 0
}

TEST_CASE("spectrum text round-trips exactly") {
    Spectrum spectrum;
    spectrum.eigenvalues.resize(3);
    spectrum.eigenvalues << Complex(-1.0 / 3.0, 2.0 / 7.0),
        Complex(0.1234567890123456789, -5.0e-13), Complex(0.0, 1.0);
    spectrum.metadata = {{"lambda", "0.5"}, {"sector", "even"}};
    spectrum.window = {{-10.5, 0.0}};
    spectrum.residual_max = 3.25e-13;

    std::ostringstream out;
    write_spectrum(out, spectrum);
    std::istringstream in(out.str());
    const Spectrum recovered = read_spectrum(in);

    REQUIRE(recovered.size() == 3);
    for (Eigen::Index i = 0; i < 3; ++i)
        CHECK(recovered.eigenvalues[i] == spectrum.eigenvalues[i]);
    REQUIRE(recovered.window.has_value());
    CHECK(recovered.window->first == -10.5);
    CHECK(recovered.window->second == 0.0);
    REQUIRE(recovered.residual_max.has_value());
    CHECK(*recovered.residual_max == 3.25e-13);
    REQUIRE(recovered.metadata.size() == 2);
    CHECK(recovered.metadata[0].first == "lambda");
    CHECK(recovered.metadata[0].second == "0.5");
    CHECK(recovered.metadata[1].second == "even");
}

TEST_CASE("empty matrix gives an empty spectrum") {
    const Spectrum spectrum = eigenvalues(Eigen::MatrixXcd());
    CHECK(spectrum.size() == 0);
}
