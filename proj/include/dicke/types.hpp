#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace dicke {

using Complex = std::complex<double>;
using SparseMatrixXcd = Eigen::SparseMatrix<Complex>;
using SparseMatrixXd = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<Complex>;
using TripletD = Eigen::Triplet<double>;

inline constexpr Complex imag_unit{0.0, 1.0};

}  // namespace dicke
