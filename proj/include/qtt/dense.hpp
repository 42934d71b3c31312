#pragma once

#include <functional>

#include "qtt/grid.hpp"
#include "qtt/hdaf.hpp"
#include "qtt/loader.hpp"

namespace qtt {

/// Plain 2^n amplitude vector on a grid; the reference representation the
/// train results are validated against.
struct DenseState {
  Grid grid;
  Vec amp;
};

DenseState dense_from_function(const std::function<cd(double)>& f, const Grid& g);
DenseState analytic_solution_dense(const QuenchParams& p, double t, const Grid& g);

Eigen::VectorXd sample_potential(const QuenchParams& p, const Grid& g);

/// One Strang step: half potential phase, kinetic phase exp(-i dt k^2 / 2)
/// in Fourier space, half potential phase. Norm preserving.
void fft_split_step(DenseState& s, const Eigen::VectorXd& potential, double dt);

/// Circulant band matrix assembled from a kernel table, same orientation
/// convention as the operator factory.
Mat dense_kernel_matrix(const KernelTable& table, const Grid& g);

double dense_epsilon(const Vec& a, const Vec& b, double dx);

/// Small-matrix exponential.
Mat expm(const Mat& m);

}  // namespace qtt
