#pragma once

#include <cstdint>
#include <vector>

#include "impact/impact_model.hpp"
#include "impact/matrix.hpp"

namespace impact::kernels {

// Every kernel has a serial reference and an OpenMP variant. The parallel
// variants only distribute independent work items (rows, feature columns,
// queries); every floating-point accumulation runs in the same fixed order
// as the serial reference, so the two produce bit-identical results and the
// tests assert exactly that.
enum class Exec { Serial, Parallel };

// Process-wide default used by the higher-level modules. Parallel when the
// build has OpenMP, serial otherwise.
Exec default_exec();
void set_default_exec(Exec exec);

// Caps the OpenMP team size; 0 restores the implementation default.
void set_thread_count(int n);

// Scores for every row of X under the model.
std::vector<double> predict_batch(const ImpactModel& m, const Matrix& x, Exec exec);
std::vector<double> predict_batch(const ImpactModel& m, const Matrix& x);

// MSE + ridge loss over (x, y):
//   (1/N) sum_r (pred_r - y_r)^2 + l2 * (|w|^2 + w_y^2)
double mse_loss(const ImpactModel& m, const Matrix& x, const std::vector<double>& y,
                double l2, Exec exec);
double mse_loss(const ImpactModel& m, const Matrix& x, const std::vector<double>& y,
                double l2);

struct GradientBundle {
  std::vector<double> dw;
  double dw_y = 0.0;
  double db = 0.0;
  double dr = 0.0;  // populated only when with_r was requested
};

// Analytic gradient of mse_loss through the rational form. With
// D = r - w_y*k and S_r = sum_i w_i * x_ri^j:
//   d(pred)/dw_i = k * x_ri^j / D
//   d(pred)/dw_y = k^2 * S_r / D^2
//   d(pred)/db   = 1
//   d(pred)/dr   = -k * S_r / D^2
GradientBundle mse_gradient(const ImpactModel& m, const Matrix& x,
                            const std::vector<double>& y, double l2, bool with_r,
                            Exec exec);
GradientBundle mse_gradient(const ImpactModel& m, const Matrix& x,
                            const std::vector<double>& y, double l2, bool with_r);

// For each query row: fraction of positive labels among the k nearest
// training rows by euclidean distance, distance ties broken by the lower
// training-row index.
std::vector<double> knn_positive_fraction(const Matrix& train,
                                          const std::vector<double>& labels, int k,
                                          const Matrix& queries, Exec exec);
std::vector<double> knn_positive_fraction(const Matrix& train,
                                          const std::vector<double>& labels, int k,
                                          const Matrix& queries);

}  // namespace impact::kernels
