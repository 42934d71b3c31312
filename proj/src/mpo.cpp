#include "qtt/mpo.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace qtt {

using detail::Train;
using detail::TrainSite;

Index Mpo::max_bond() const {
  Index m = 1;
  for (const auto& d : bond_dims()) m = std::max(m, d);
  return m;
}

Mpo identity_mpo(int n_sites) {
  Mpo op;
  op.train.resize(n_sites);
  for (auto& site : op.train) {
    site.blocks.assign(4, Mat::Zero(1, 1));
    site.blocks[0](0, 0) = 1.0;  // (0,0)
    site.blocks[3](0, 0) = 1.0;  // (1,1)
  }
  return op;
}

Mpo mpo_scale(Mpo op, cd factor) {
  for (auto& b : op.train[0].blocks) b *= factor;
  return op;
}

Mpo mpo_compress(Mpo op, double rel_budget_sq, Index max_bond) {
  const int n = op.n_sites();
  detail::canonicalize_train(op.train, n - 1);
  const double norm_sq = detail::site_norm_sq(op.train[n - 1]);
  detail::truncate_train(op.train, rel_budget_sq * norm_sq, max_bond);
  return op;
}

Mpo mpo_add(const Mpo& a, const Mpo& b, cd wa, cd wb, const Tolerances& tol) {
  return mpo_add_many({&a, &b}, {wa, wb}, tol);
}

Mpo mpo_add_many(const std::vector<const Mpo*>& ops, const std::vector<cd>& weights,
                 const Tolerances& tol) {
  if (ops.empty() || ops.size() != weights.size())
    throw Error(ErrorCode::invalid_argument, "mpo_add_many needs matching ops and weights");
  const int n = ops.front()->n_sites();
  for (const auto* o : ops)
    if (o->n_sites() != n)
      throw Error(ErrorCode::site_mismatch, "cannot add operators with different site counts");

  Mpo out;
  out.train.resize(n);
  for (int k = 0; k < n; ++k) {
    Index dl = 0, dr = 0;
    for (const auto* o : ops) {
      dl += o->train[k].dl();
      dr += o->train[k].dr();
    }
    if (k == 0) dl = 1;
    if (k == n - 1) dr = 1;
    TrainSite site;
    site.blocks.assign(4, Mat::Zero(dl, dr));
    Index ro = 0, co = 0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const TrainSite& src = ops[i]->train[k];
      const cd w = (k == 0) ? weights[i] : cd(1.0);
      for (int mu = 0; mu < 4; ++mu)
        site.blocks[mu].block(k == 0 ? 0 : ro, k == n - 1 ? 0 : co, src.dl(), src.dr()) =
            w * src.blocks[mu];
      ro += src.dl();
      co += src.dr();
    }
    out.train[k] = std::move(site);
  }
  return mpo_compress(std::move(out), tol.simplify_tol, tol.max_bond);
}

Mpo mpo_compose(const Mpo& a, const Mpo& b, const Tolerances& tol) {
  const int n = a.n_sites();
  if (b.n_sites() != n)
    throw Error(ErrorCode::site_mismatch, "cannot compose operators with different site counts");
  Mpo out;
  out.train.resize(n);
  for (int k = 0; k < n; ++k) {
    const Index ra = a.train[k].dl(), ca = a.train[k].dr();
    const Index rb = b.train[k].dl(), cb = b.train[k].dr();
    TrainSite site;
    site.blocks.assign(4, Mat::Zero(ra * rb, ca * cb));
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t) {
        Mat& dst = site.blocks[2 * s + t];
        for (int u = 0; u < 2; ++u) {
          const Mat& wa = a.w(k, s, u);
          const Mat& wb = b.w(k, u, t);
          for (Index i = 0; i < ra; ++i)
            for (Index j = 0; j < ca; ++j) {
              if (wa(i, j) == cd(0.0)) continue;
              dst.block(i * rb, j * cb, rb, cb) += wa(i, j) * wb;
            }
        }
      }
    out.train[k] = std::move(site);
  }
  return mpo_compress(std::move(out), tol.simplify_tol, tol.max_bond);
}

MpsState apply_mpo(const Mpo& op, const MpsState& state, const Tolerances& tol) {
  const int n = state.n_sites();
  if (op.n_sites() != n)
    throw Error(ErrorCode::site_mismatch, "operator and state site counts differ");

  const double zip_budget = 0.5 * tol.svd_tol / std::max(1, n - 1);

  MpsState out;
  out.grid = state.grid;
  out.train.resize(n);
  out.scale = state.scale;

  Mat c = Mat::Ones(1, 1);  // rows: new bond, cols: pair (w, m), w-major
  Index wl = 1, ml = 1;
  for (int k = 0; k < n; ++k) {
    const TrainSite& wsite = op.train[k];
    const TrainSite& msite = state.train[k];
    const Index wr = wsite.dr(), mr = msite.dr();
    const Index p = c.rows();

    // Y[(w,t), (i + m' p)] = sum_m C[i, w ml + m] * M_t(m, m')
    Mat y(wl * 2, p * mr);
    for (Index w = 0; w < wl; ++w)
      for (int t = 0; t < 2; ++t) {
        Mat yb = c.middleCols(w * ml, ml) * msite.blocks[t];
        y.row(w * 2 + t) = Eigen::Map<const Vec>(yb.data(), p * mr).transpose();
      }
    // Wmat[(w,t), (s wr + w')] = W_{s,t}(w, w')
    Mat wm(wl * 2, 2 * wr);
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t) {
        const Mat& blk = wsite.blocks[2 * s + t];
        for (Index w = 0; w < wl; ++w)
          wm.block(w * 2 + t, s * wr, 1, wr) = blk.row(w);
      }
    Mat d = y.transpose() * wm;  // ((i + m' p), (s wr + w'))
    // reorder into Z[(s p + i), (w' mr + m')]
    Mat z(2 * p, wr * mr);
    for (int s = 0; s < 2; ++s)
      for (Index mp = 0; mp < mr; ++mp)
        for (Index wp = 0; wp < wr; ++wp)
          z.col(wp * mr + mp).segment(s * p, p) = d.col(s * wr + wp).segment(mp * p, p);

    if (k == n - 1) {
      out.train[k] = detail::split_left(z, 2);
      break;
    }
    const Index rows = z.rows(), cols = z.cols();
    Index rank;
    if (cols > rows) {
      Mat q, r;
      detail::thin_qr(Mat(z.adjoint()), q, r);
      Eigen::BDCSVD<Mat> svd(Mat(r.adjoint()), Eigen::ComputeThinU | Eigen::ComputeThinV);
      const double total = svd.singularValues().squaredNorm();
      rank = detail::pick_rank(svd.singularValues(), zip_budget * total, tol.max_bond, nullptr);
      out.train[k] = detail::split_left(svd.matrixU().leftCols(rank), 2);
      c = svd.singularValues().head(rank).cast<cd>().asDiagonal() *
          svd.matrixV().leftCols(rank).adjoint() * q.adjoint();
    } else {
      Eigen::BDCSVD<Mat> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const double total = svd.singularValues().squaredNorm();
      rank = detail::pick_rank(svd.singularValues(), zip_budget * total, tol.max_bond, nullptr);
      out.train[k] = detail::split_left(svd.matrixU().leftCols(rank), 2);
      c = svd.singularValues().head(rank).cast<cd>().asDiagonal() *
          svd.matrixV().leftCols(rank).adjoint();
    }
    wl = wr;
    ml = mr;
  }

  // the zip leaves left isometries; finish with a right-to-left sweep
  out.center = n - 1;
  const double norm_sq = detail::site_norm_sq(out.train[n - 1]);
  detail::truncate_train(out.train, 0.5 * tol.svd_tol * norm_sq, tol.max_bond);
  const double cn = std::sqrt(detail::site_norm_sq(out.train[0]));
  if (cn > 0) {
    for (auto& b : out.train[0].blocks) b /= cn;
    out.scale *= cn;
  }
  out.center = 0;
  return out;
}

Mat mpo_dense(const Mpo& op) {
  const int n = op.n_sites();
  if (n > 13)
    throw Error(ErrorCode::invalid_argument, "dense materialization limited to 13 qubits");
  const std::int64_t dim = std::int64_t{1} << n;
  // T[(io 2^k + ii), b] built site by site
  Mat t = Mat::Ones(1, 1);
  std::int64_t half = 1;
  for (int k = 0; k < n; ++k) {
    const Index dr = op.train[k].dr();
    Mat tn = Mat::Zero(4 * t.rows(), dr);
    for (int s = 0; s < 2; ++s)
      for (int u = 0; u < 2; ++u) {
        Mat part = t * op.train[k].blocks[2 * s + u];
        for (std::int64_t io = 0; io < half; ++io)
          for (std::int64_t ii = 0; ii < half; ++ii)
            tn.row((io * 2 + s) * 2 * half + ii * 2 + u) = part.row(io * half + ii);
      }
    t.swap(tn);
    half *= 2;
  }
  Mat dense(dim, dim);
  for (std::int64_t i = 0; i < dim; ++i)
    for (std::int64_t j = 0; j < dim; ++j) dense(i, j) = t(i * dim + j, 0);
  return dense;
}

}  // namespace qtt
