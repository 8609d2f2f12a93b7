#include "impact/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace impact::kernels {

namespace {

std::atomic<Exec> g_default_exec{
#ifdef _OPENMP
    Exec::Parallel
#else
    Exec::Serial
#endif
};

void check_batch_inputs(const ImpactModel& m, const Matrix& x) {
  if (x.cols() != m.dim())
    throw Error("impact_model.DimensionMismatch",
                "matrix has " + std::to_string(x.cols()) + " columns, model expects " +
                    std::to_string(m.dim()));
  if (std::abs(m.denominator()) <= ImpactModel::kPoleEpsilon)
    throw Error("impact_model.PoleViolation", "|r - w_y*k| <= 1e-12");
}

// Row score and the weighted polynomial sum S_r it was built from.
inline double row_sum(const ImpactModel& m, const Matrix& x, std::size_t r) {
  const double* p = x.data().data() + r * x.cols();
  double s = 0.0;
  for (std::size_t i = 0; i < x.cols(); ++i) s += m.w[i] * ipow(p[i], m.degree);
  return s;
}

}  // namespace

Exec default_exec() { return g_default_exec.load(); }
void set_default_exec(Exec exec) { g_default_exec.store(exec); }

void set_thread_count(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

std::vector<double> predict_batch(const ImpactModel& m, const Matrix& x, Exec exec) {
  check_batch_inputs(m, x);
  const double scale = m.k / m.denominator();
  const auto n = static_cast<std::ptrdiff_t>(x.rows());
  std::vector<double> out(x.rows());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < n; ++r)
      out[r] = scale * row_sum(m, x, static_cast<std::size_t>(r)) + m.b;
  } else {
    for (std::ptrdiff_t r = 0; r < n; ++r)
      out[r] = scale * row_sum(m, x, static_cast<std::size_t>(r)) + m.b;
  }
  return out;
}

std::vector<double> predict_batch(const ImpactModel& m, const Matrix& x) {
  return predict_batch(m, x, default_exec());
}

double mse_loss(const ImpactModel& m, const Matrix& x, const std::vector<double>& y,
                double l2, Exec exec) {
  if (y.size() != x.rows())
    throw Error("trainer.LengthMismatch", "target length does not match row count");
  auto pred = predict_batch(m, x, exec);
  // Fixed-order reduction keeps the loss identical for any thread count.
  double sq = 0.0;
  for (std::size_t r = 0; r < y.size(); ++r) {
    double e = pred[r] - y[r];
    sq += e * e;
  }
  double loss = sq / static_cast<double>(y.size());
  if (l2 > 0.0) {
    double reg = m.w_y * m.w_y;
    for (double wi : m.w) reg += wi * wi;
    loss += l2 * reg;
  }
  return loss;
}

double mse_loss(const ImpactModel& m, const Matrix& x, const std::vector<double>& y,
                double l2) {
  return mse_loss(m, x, y, l2, default_exec());
}

GradientBundle mse_gradient(const ImpactModel& m, const Matrix& x,
                            const std::vector<double>& y, double l2, bool with_r,
                            Exec exec) {
  check_batch_inputs(m, x);
  if (y.size() != x.rows())
    throw Error("trainer.LengthMismatch", "target length does not match row count");
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const double denom = m.denominator();
  const double scale = m.k / denom;
  const double inv_n2 = 2.0 / static_cast<double>(n);

  // Pass 1: per-row weighted sums and residuals. Rows are independent.
  std::vector<double> sums(n), resid(n);
  const auto nn = static_cast<std::ptrdiff_t>(n);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < nn; ++r) {
      double s = row_sum(m, x, static_cast<std::size_t>(r));
      sums[r] = s;
      resid[r] = scale * s + m.b - y[r];
    }
  } else {
    for (std::ptrdiff_t r = 0; r < nn; ++r) {
      double s = row_sum(m, x, static_cast<std::size_t>(r));
      sums[r] = s;
      resid[r] = scale * s + m.b - y[r];
    }
  }

  GradientBundle g;
  g.dw.resize(d);

  // Pass 2: each feature's accumulation walks the rows in index order, so
  // the per-feature sums match the serial reference bit for bit.
  const auto dd = static_cast<std::ptrdiff_t>(d);
  const double* xd = x.data().data();
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < dd; ++i) {
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r)
        acc += resid[r] * ipow(xd[r * d + i], m.degree);
      g.dw[i] = inv_n2 * scale * acc + 2.0 * l2 * m.w[i];
    }
  } else {
    for (std::ptrdiff_t i = 0; i < dd; ++i) {
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r)
        acc += resid[r] * ipow(xd[r * d + i], m.degree);
      g.dw[i] = inv_n2 * scale * acc + 2.0 * l2 * m.w[i];
    }
  }

  // Scalar reductions are O(N); run them in fixed row order.
  double es_sum = 0.0, e_sum = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    es_sum += resid[r] * sums[r];
    e_sum += resid[r];
  }
  const double d2 = denom * denom;
  g.dw_y = inv_n2 * (m.k * m.k / d2) * es_sum + 2.0 * l2 * m.w_y;
  g.db = inv_n2 * e_sum;
  g.dr = with_r ? -inv_n2 * (m.k / d2) * es_sum : 0.0;
  return g;
}

GradientBundle mse_gradient(const ImpactModel& m, const Matrix& x,
                            const std::vector<double>& y, double l2, bool with_r) {
  return mse_gradient(m, x, y, l2, with_r, default_exec());
}

namespace {

double knn_score_one(const Matrix& train, const std::vector<double>& labels, int k,
                     const double* q, std::vector<std::pair<double, std::size_t>>& scratch) {
  const std::size_t n = train.rows();
  const std::size_t d = train.cols();
  scratch.clear();
  scratch.reserve(n);
  const double* td = train.data().data();
  for (std::size_t r = 0; r < n; ++r) {
    double dist = 0.0;
    const double* row = td + r * d;
    for (std::size_t c = 0; c < d; ++c) {
      double dv = row[c] - q[c];
      dist += dv * dv;
    }
    scratch.emplace_back(dist, r);
  }
  // (distance, index) ordering: equal distances resolve to the lower row.
  std::partial_sort(scratch.begin(), scratch.begin() + k, scratch.end());
  int positives = 0;
  for (int i = 0; i < k; ++i)
    if (labels[scratch[i].second] == 1.0) ++positives;
  return static_cast<double>(positives) / static_cast<double>(k);
}

}  // namespace

std::vector<double> knn_positive_fraction(const Matrix& train,
                                          const std::vector<double>& labels, int k,
                                          const Matrix& queries, Exec exec) {
  if (train.cols() != queries.cols())
    throw Error("baselines.DimensionMismatch",
                "query has " + std::to_string(queries.cols()) + " columns, training data has " +
                    std::to_string(train.cols()));
  if (k < 1 || static_cast<std::size_t>(k) > train.rows())
    throw Error("baselines.InvalidHyperparameter",
                "k = " + std::to_string(k) + " must lie in [1, N=" +
                    std::to_string(train.rows()) + "]");
  const auto nq = static_cast<std::ptrdiff_t>(queries.rows());
  std::vector<double> out(queries.rows());
  const double* qd = queries.data().data();
  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      std::vector<std::pair<double, std::size_t>> scratch;
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = 0; i < nq; ++i)
        out[i] = knn_score_one(train, labels, k, qd + i * queries.cols(), scratch);
    }
  } else {
    std::vector<std::pair<double, std::size_t>> scratch;
    for (std::ptrdiff_t i = 0; i < nq; ++i)
      out[i] = knn_score_one(train, labels, k, qd + i * queries.cols(), scratch);
  }
  return out;
}

std::vector<double> knn_positive_fraction(const Matrix& train,
                                          const std::vector<double>& labels, int k,
                                          const Matrix& queries) {
  return knn_positive_fraction(train, labels, k, queries, default_exec());
}

}  // namespace impact::kernels
