#pragma once

#include "qtt/mps.hpp"

namespace qtt {

/// Operator as a train of four-index tensors. The physical pair
/// (s_out, s_in) is flattened into the block index mu = 2 s_out + s_in.
struct Mpo {
  detail::Train train;

  int n_sites() const { return static_cast<int>(train.size()); }
  const Mat& w(int site, int s_out, int s_in) const {
    return train[site].blocks[2 * s_out + s_in];
  }
  Mat& w(int site, int s_out, int s_in) {
    return train[site].blocks[2 * s_out + s_in];
  }
  std::vector<Index> bond_dims() const { return detail::train_bond_dims(train); }
  Index max_bond() const;
};

Mpo identity_mpo(int n_sites);
Mpo mpo_scale(Mpo op, cd factor);
Mpo mpo_compress(Mpo op, double rel_budget_sq, Index max_bond = 0);
Mpo mpo_add(const Mpo& a, const Mpo& b, cd wa, cd wb, const Tolerances& tol);
Mpo mpo_add_many(const std::vector<const Mpo*>& ops, const std::vector<cd>& weights,
                 const Tolerances& tol);

/// Composition with dense semantics dense(result) = dense(a) * dense(b).
Mpo mpo_compose(const Mpo& a, const Mpo& b, const Tolerances& tol);

/// Zip-up contraction of op onto state followed by a truncation sweep.
MpsState apply_mpo(const Mpo& op, const MpsState& state, const Tolerances& tol);

/// Full 2^n x 2^n materialization; intended for oracle checks at small n.
Mat mpo_dense(const Mpo& op);

}  // namespace qtt
