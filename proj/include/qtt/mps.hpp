#pragma once

#include <optional>
#include <vector>

#include "qtt/common.hpp"
#include "qtt/grid.hpp"

namespace qtt {

namespace detail {

/// One train site with physical dimension P; blocks[p] is (dl x dr).
struct TrainSite {
  std::vector<Mat> blocks;
  Index dl() const { return blocks.front().rows(); }
  Index dr() const { return blocks.front().cols(); }
  int phys() const { return static_cast<int>(blocks.size()); }
};

using Train = std::vector<TrainSite>;

Mat stack_left(const TrainSite& t);    // (P dl) x dr, row blocks by p
Mat stack_right(const TrainSite& t);   // dl x (P dr), col blocks by p
TrainSite split_left(const Mat& m, int phys);
TrainSite split_right(const Mat& m, int phys);

// QR/LQ with the factor diagonal made real and non-negative, so that
// already-canonical tensors pass through unchanged.
void thin_qr(const Mat& m, Mat& q, Mat& r);
void thin_lq(const Mat& m, Mat& l, Mat& q);

void canonicalize_train(Train& t, int center);

/// Kept rank for a non-increasing singular value list: drops the smallest
/// values whose squared sum stays within the budget, then applies max_bond.
Index pick_rank(const Eigen::VectorXd& s, double budget_sq, Index max_bond,
                double* discarded);

/// Right-to-left truncation sweep. Expects mixed-canonical form with the
/// center on the last site; leaves the center on site 0. Returns the
/// discarded squared weight (absolute).
double truncate_train(Train& t, double budget_sq_abs, Index max_bond);

double train_norm(const Train& t);
cd train_inner(const Train& a, const Train& b);
Vec train_dense(const Train& t);
std::vector<Index> train_bond_dims(const Train& t);
double site_norm_sq(const TrainSite& t);

}  // namespace detail

/// Wavefunction on a qubit grid as a tensor train. dense() equals
/// scale times the contraction of the train; scale absorbs the overall
/// magnitude so the tensors stay O(1).
struct MpsState {
  Grid grid;
  detail::Train train;
  std::optional<int> center;
  cd scale = 1.0;

  int n_sites() const { return static_cast<int>(train.size()); }
  std::vector<Index> bond_dims() const { return detail::train_bond_dims(train); }
  Index max_bond() const;
};

struct TruncationReport {
  double discarded_weight = 0.0;  // relative squared norm
};

MpsState product_state(const Grid& g, std::int64_t basis_index);
MpsState mps_from_dense(const Grid& g, const Vec& amplitudes, const Tolerances& tol);
MpsState random_state(const Grid& g, Index bond, unsigned seed);

MpsState canonicalize(MpsState state, int center);
MpsState truncate(MpsState state, const Tolerances& tol, TruncationReport* report = nullptr);
MpsState add(const MpsState& a, const MpsState& b, cd wa, cd wb, const Tolerances& tol);
MpsState add_many(const std::vector<const MpsState*>& states, const std::vector<cd>& weights,
                  const Tolerances& tol);
cd inner(const MpsState& a, const MpsState& b);
double norm2(const MpsState& s);    // Euclidean norm of the amplitude vector
double norm_l2(const MpsState& s);  // function norm, sqrt(dx) * norm2
Vec dense(const MpsState& s);

}  // namespace qtt
