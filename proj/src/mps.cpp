#include "qtt/mps.hpp"

#include <random>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace qtt {
namespace detail {

Index pick_rank(const Eigen::VectorXd& s, double budget_sq, Index max_bond,
                double* discarded) {
  Index r = s.size();
  double acc = 0.0;
  while (r > 1) {
    const double next = acc + s(r - 1) * s(r - 1);
    if (next > budget_sq) break;
    acc = next;
    --r;
  }
  if (max_bond > 0 && r > max_bond) {
    for (Index i = max_bond; i < r; ++i) acc += s(i) * s(i);
    r = max_bond;
  }
  if (discarded) *discarded += acc;
  return r;
}

Mat stack_left(const TrainSite& t) {
  const Index dl = t.dl(), dr = t.dr();
  Mat m(t.phys() * dl, dr);
  for (int p = 0; p < t.phys(); ++p) m.middleRows(p * dl, dl) = t.blocks[p];
  return m;
}

Mat stack_right(const TrainSite& t) {
  const Index dl = t.dl(), dr = t.dr();
  Mat m(dl, t.phys() * dr);
  for (int p = 0; p < t.phys(); ++p) m.middleCols(p * dr, dr) = t.blocks[p];
  return m;
}

TrainSite split_left(const Mat& m, int phys) {
  const Index dl = m.rows() / phys;
  TrainSite t;
  t.blocks.reserve(phys);
  for (int p = 0; p < phys; ++p) t.blocks.push_back(m.middleRows(p * dl, dl));
  return t;
}

TrainSite split_right(const Mat& m, int phys) {
  const Index dr = m.cols() / phys;
  TrainSite t;
  t.blocks.reserve(phys);
  for (int p = 0; p < phys; ++p) t.blocks.push_back(m.middleCols(p * dr, dr));
  return t;
}

void thin_qr(const Mat& m, Mat& q, Mat& r) {
  const Index k = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<Mat> qr(m);
  q = qr.householderQ() * Mat::Identity(m.rows(), k);
  r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Index i = 0; i < k; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0) {
      const cd phase = r(i, i) / a;
      q.col(i) *= phase;
      r.row(i) *= std::conj(phase);
    }
  }
}

void thin_lq(const Mat& m, Mat& l, Mat& q) {
  Mat q2, r2;
  thin_qr(m.adjoint(), q2, r2);
  l = r2.adjoint();
  q = q2.adjoint();
}

void canonicalize_train(Train& t, int center) {
  const int n = static_cast<int>(t.size());
  const int phys = t.front().phys();
  for (int k = 0; k < center; ++k) {
    Mat q, r;
    thin_qr(stack_left(t[k]), q, r);
    t[k] = split_left(q, phys);
    for (auto& b : t[k + 1].blocks) b = r * b;
  }
  for (int k = n - 1; k > center; --k) {
    Mat l, q;
    thin_lq(stack_right(t[k]), l, q);
    t[k] = split_right(q, phys);
    for (auto& b : t[k - 1].blocks) b = b * l;
  }
}

double truncate_train(Train& t, double budget_sq_abs, Index max_bond) {
  const int n = static_cast<int>(t.size());
  const int phys = t.front().phys();
  const double bond_budget = std::max(0.0, budget_sq_abs) / std::max(1, n - 1);
  double discarded = 0.0;
  for (int k = n - 1; k >= 1; --k) {
    Mat b = stack_right(t[k]);
    Eigen::BDCSVD<Mat> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Index r = pick_rank(svd.singularValues(), bond_budget, max_bond, &discarded);
    t[k] = split_right(svd.matrixV().leftCols(r).adjoint(), phys);
    Mat carry = svd.matrixU().leftCols(r) *
                svd.singularValues().head(r).cast<cd>().asDiagonal();
    for (auto& blk : t[k - 1].blocks) blk = blk * carry;
  }
  return discarded;
}

double site_norm_sq(const TrainSite& t) {
  double s = 0.0;
  for (const auto& b : t.blocks) s += b.squaredNorm();
  return s;
}

double train_norm(const Train& t) {
  return std::sqrt(std::abs(train_inner(t, t)));
}

cd train_inner(const Train& a, const Train& b) {
  Mat e = Mat::Ones(1, 1);
  for (std::size_t k = 0; k < a.size(); ++k) {
    Mat next = Mat::Zero(a[k].dr(), b[k].dr());
    for (int p = 0; p < a[k].phys(); ++p)
      next.noalias() += a[k].blocks[p].adjoint() * e * b[k].blocks[p];
    e.swap(next);
  }
  return e(0, 0);
}

Vec train_dense(const Train& t) {
  const int phys = t.front().phys();
  Mat m = Mat::Ones(1, 1);
  for (const auto& site : t) {
    Mat next(m.rows() * phys, site.dr());
    for (int p = 0; p < phys; ++p) {
      Mat part = m * site.blocks[p];
      for (Index i = 0; i < m.rows(); ++i) next.row(i * phys + p) = part.row(i);
    }
    m.swap(next);
  }
  return m.col(0);
}

std::vector<Index> train_bond_dims(const Train& t) {
  std::vector<Index> dims;
  dims.reserve(t.size() + 1);
  dims.push_back(t.front().dl());
  for (const auto& site : t) dims.push_back(site.dr());
  return dims;
}

}  // namespace detail

using detail::Train;
using detail::TrainSite;

Index MpsState::max_bond() const {
  Index m = 1;
  for (const auto& d : bond_dims()) m = std::max(m, d);
  return m;
}

MpsState product_state(const Grid& g, std::int64_t basis_index) {
  if (basis_index < 0 || basis_index >= g.points())
    throw Error(ErrorCode::invalid_argument, "basis index out of range");
  MpsState s;
  s.grid = g;
  s.train.resize(g.n_qubits);
  for (int k = 0; k < g.n_qubits; ++k) {
    const int bit = static_cast<int>((basis_index >> (g.n_qubits - 1 - k)) & 1);
    TrainSite site;
    site.blocks = {Mat::Zero(1, 1), Mat::Zero(1, 1)};
    site.blocks[bit](0, 0) = 1.0;
    s.train[k] = std::move(site);
  }
  s.center = 0;
  return s;
}

namespace {

// The row-major reshape used by the tensor-train sweep orders rows as
// (bond * phys + digit); pull the digit out into the block index.
detail::TrainSite split_left_interleaved(const Mat& m, int phys) {
  const Index dl = m.rows() / phys;
  detail::TrainSite t;
  t.blocks.assign(phys, Mat(dl, m.cols()));
  for (Index i = 0; i < dl; ++i)
    for (int p = 0; p < phys; ++p) t.blocks[p].row(i) = m.row(i * phys + p);
  return t;
}

}  // namespace

MpsState mps_from_dense(const Grid& g, const Vec& v, const Tolerances& tol) {
  using RowMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const int n = g.n_qubits;
  if (v.size() != g.points())
    throw Error(ErrorCode::invalid_argument, "amplitude count does not match grid");

  const double norm_sq = v.squaredNorm();
  const double bond_budget = tol.svd_tol * norm_sq / std::max(1, n - 1);

  MpsState s;
  s.grid = g;
  s.train.resize(n);
  RowMat c = Eigen::Map<const RowMat>(v.data(), 2, v.size() / 2);
  for (int k = 0; k < n - 1; ++k) {
    const Index cols = c.cols();
    // factor the small dimension: QR of the adjoint, then SVD of the core
    Mat q, r;
    detail::thin_qr(Mat(c.adjoint()), q, r);
    Eigen::BDCSVD<Mat> svd(Mat(r.adjoint()), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Index rk = detail::pick_rank(svd.singularValues(), bond_budget, tol.max_bond, nullptr);
    s.train[k] = split_left_interleaved(svd.matrixU().leftCols(rk), 2);
    RowMat carry = svd.singularValues().head(rk).cast<cd>().asDiagonal() *
                   svd.matrixV().leftCols(rk).adjoint() * q.adjoint();
    // (rk x cols) reinterpreted as (2 rk x cols/2) exposes the next digit
    c = Eigen::Map<const RowMat>(carry.data(), 2 * rk, cols / 2);
  }
  s.train[n - 1] = split_left_interleaved(Mat(c), 2);
  s.center = n - 1;
  return s;
}

MpsState random_state(const Grid& g, Index bond, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  const int n = g.n_qubits;
  std::vector<Index> dims(n + 1, 1);
  for (int k = 1; k < n; ++k) {
    const Index envelope =
        static_cast<Index>(std::min<std::int64_t>(std::int64_t{1} << k,
                                                  std::int64_t{1} << (n - k)));
    dims[k] = std::min(bond, envelope);
  }
  MpsState s;
  s.grid = g;
  s.train.resize(n);
  for (int k = 0; k < n; ++k) {
    TrainSite site;
    site.blocks.resize(2);
    for (int p = 0; p < 2; ++p) {
      Mat b(dims[k], dims[k + 1]);
      for (Index i = 0; i < b.rows(); ++i)
        for (Index j = 0; j < b.cols(); ++j) b(i, j) = cd(dist(rng), dist(rng));
      site.blocks[p] = std::move(b);
    }
    s.train[k] = std::move(site);
  }
  return s;
}

MpsState canonicalize(MpsState state, int center) {
  if (center < 0 || center >= state.n_sites())
    throw Error(ErrorCode::invalid_argument, "canonical center out of range");
  detail::canonicalize_train(state.train, center);
  state.center = center;
  return state;
}

MpsState truncate(MpsState state, const Tolerances& tol, TruncationReport* report) {
  const int n = state.n_sites();
  if (!state.center || *state.center != n - 1)
    detail::canonicalize_train(state.train, n - 1);
  const double norm_sq = detail::site_norm_sq(state.train[n - 1]);
  const double discarded =
      detail::truncate_train(state.train, tol.svd_tol * norm_sq, tol.max_bond);
  const double cn = std::sqrt(detail::site_norm_sq(state.train[0]));
  if (cn > 0) {
    for (auto& b : state.train[0].blocks) b /= cn;
    state.scale *= cn;
  }
  state.center = 0;
  if (report) report->discarded_weight = norm_sq > 0 ? discarded / norm_sq : 0.0;
  return state;
}

MpsState add(const MpsState& a, const MpsState& b, cd wa, cd wb, const Tolerances& tol) {
  return add_many({&a, &b}, {wa, wb}, tol);
}

MpsState add_many(const std::vector<const MpsState*>& states,
                  const std::vector<cd>& weights, const Tolerances& tol) {
  if (states.empty() || states.size() != weights.size())
    throw Error(ErrorCode::invalid_argument, "add_many needs matching states and weights");
  const MpsState& first = *states.front();
  for (const auto* s : states)
    if (!(s->grid == first.grid))
      throw Error(ErrorCode::grid_mismatch, "cannot add states on different grids");

  const int n = first.n_sites();
  MpsState out;
  out.grid = first.grid;
  out.train.resize(n);
  for (int k = 0; k < n; ++k) {
    Index dl = 0, dr = 0;
    for (const auto* s : states) {
      dl += s->train[k].dl();
      dr += s->train[k].dr();
    }
    if (k == 0) dl = 1;
    if (k == n - 1) dr = 1;
    TrainSite site;
    site.blocks = {Mat::Zero(dl, dr), Mat::Zero(dl, dr)};
    Index ro = 0, co = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const TrainSite& src = states[i]->train[k];
      const cd w = (k == 0) ? weights[i] * states[i]->scale : cd(1.0);
      for (int p = 0; p < 2; ++p) {
        site.blocks[p].block(k == 0 ? 0 : ro, k == n - 1 ? 0 : co, src.dl(), src.dr()) =
            w * src.blocks[p];
      }
      ro += src.dl();
      co += src.dr();
    }
    out.train[k] = std::move(site);
  }
  out.scale = 1.0;
  out.center.reset();
  return truncate(std::move(out), tol);
}

cd inner(const MpsState& a, const MpsState& b) {
  if (!(a.grid == b.grid))
    throw Error(ErrorCode::grid_mismatch, "inner product needs a common grid");
  return std::conj(a.scale) * b.scale * detail::train_inner(a.train, b.train);
}

double norm2(const MpsState& s) {
  return std::abs(s.scale) * detail::train_norm(s.train);
}

double norm_l2(const MpsState& s) { return std::sqrt(s.grid.dx()) * norm2(s); }

Vec dense(const MpsState& s) { return s.scale * detail::train_dense(s.train); }

}  // namespace qtt
