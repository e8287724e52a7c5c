// Copyright 2026 qpubench contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpubench/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace qpubench {

namespace {

struct FitData {
  std::vector<double> d, y, w;  // weights 1/sigma^2, or 1 when unweighted
};

FitData prepare(const std::vector<DecayPoint>& points) {
  FitData f;
  std::set<double> depths;
  for (auto& p : points) {
    if (!std::isfinite(p.depth) || !std::isfinite(p.mean) || !std::isfinite(p.stderr_))
      throw InvalidArgument("fit_exponential_decay: non-finite input");
    depths.insert(p.depth);
    f.d.push_back(p.depth);
    f.y.push_back(p.mean);
    f.w.push_back(p.stderr_ > 0 ? 1.0 / (p.stderr_ * p.stderr_) : 1.0);
  }
  if (depths.size() < 3) throw InvalidArgument("fit_exponential_decay: need >= 3 distinct depths");
  return f;
}

/// Log-linearized starting point for (A, p) at a fixed floor B.
void initial_guess(const FitData& f, double b0, double& a0, double& p0) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < f.d.size(); ++i) {
    double v = f.y[i] - b0;
    if (v <= 1e-12) continue;
    double ly = std::log(v);
    sx += f.d[i];
    sy += ly;
    sxx += f.d[i] * f.d[i];
    sxy += f.d[i] * ly;
    ++count;
  }
  if (count >= 2 && sxx * count - sx * sx > 1e-12) {
    double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    double intercept = (sy - slope * sx) / count;
    p0 = std::clamp(std::exp(slope), 1e-6, 1.5);
    a0 = std::clamp(std::exp(intercept), 1e-9, 10.0);
  } else {
    p0 = 0.9;
    a0 = std::max(1e-9, f.y.front() - b0);
  }
}

}  // namespace

DecayFit fit_exponential_decay(const std::vector<DecayPoint>& points,
                               std::optional<double> fix_B) {
  FitData f = prepare(points);
  const std::size_t n = f.d.size();
  const bool free_b = !fix_B.has_value();

  double b = fix_B.value_or(*std::min_element(f.y.begin(), f.y.end()) - 1e-6);
  double a, p;
  initial_guess(f, b, a, p);

  const int n_par = free_b ? 3 : 2;
  double mu = 1e-3;
  double prev_chi2 = std::numeric_limits<double>::infinity();
  bool converged = false;

  auto chi2_of = [&](double aa, double pp, double bb) {
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = f.y[i] - (aa * std::pow(pp, f.d[i]) + bb);
      acc += f.w[i] * r * r;
    }
    return acc;
  };

  Eigen::MatrixXd jtj(n_par, n_par);
  Eigen::VectorXd jtr(n_par);
  for (int iter = 0; iter < 200; ++iter) {
    jtj.setZero();
    jtr.setZero();
    double chi2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double pd = std::pow(p, f.d[i]);
      double model = a * pd + b;
      double r = f.y[i] - model;
      chi2 += f.w[i] * r * r;
      Eigen::VectorXd grad(n_par);
      grad(0) = pd;                                             // dA
      grad(1) = f.d[i] > 0 ? a * f.d[i] * std::pow(p, f.d[i] - 1) : 0.0;  // dp
      if (free_b) grad(2) = 1.0;                                // dB
      jtj += f.w[i] * grad * grad.transpose();
      jtr += f.w[i] * r * grad;
    }
    if (std::abs(prev_chi2 - chi2) <= 1e-14 * (1.0 + chi2)) {
      converged = true;
      break;
    }
    prev_chi2 = chi2;

    bool stepped = false;
    for (int attempt = 0; attempt < 30 && !stepped; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      for (int k = 0; k < n_par; ++k) damped(k, k) += mu * std::max(jtj(k, k), 1e-12);
      Eigen::VectorXd delta = damped.ldlt().solve(jtr);
      double a2 = a + delta(0);
      double p2 = std::clamp(p + delta(1), 1e-9, 2.0);
      double b2 = free_b ? b + delta(2) : b;
      if (chi2_of(a2, p2, b2) <= chi2) {
        a = a2;
        p = p2;
        b = b2;
        mu = std::max(mu * 0.3, 1e-12);
        stepped = true;
      } else {
        mu *= 3.0;
      }
    }
    if (!stepped) {
      converged = true;  // stuck at a (local) minimum
      break;
    }
  }

  DecayFit fit;
  fit.p_raw = p;
  fit.A = a;
  fit.B = b;

  // covariance from the final Jacobian, scaled by reduced chi^2
  jtj.setZero();
  double chi2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double pd = std::pow(p, f.d[i]);
    double r = f.y[i] - (a * pd + b);
    chi2 += f.w[i] * r * r;
    Eigen::VectorXd grad(n_par);
    grad(0) = pd;
    grad(1) = f.d[i] > 0 ? a * f.d[i] * std::pow(p, f.d[i] - 1) : 0.0;
    if (free_b) grad(2) = 1.0;
    jtj += f.w[i] * grad * grad.transpose();
  }
  double dof = static_cast<double>(n) - n_par;
  double scale = dof > 0 ? std::max(chi2 / dof, 1e-30) : 1.0;
  Eigen::MatrixXd cov = jtj.completeOrthogonalDecomposition().pseudoInverse() * scale;
  fit.stderr_A = std::sqrt(std::max(0.0, cov(0, 0)));
  fit.stderr_p = std::sqrt(std::max(0.0, cov(1, 1)));
  fit.stderr_B = free_b ? std::sqrt(std::max(0.0, cov(2, 2))) : 0.0;

  // weighted r^2
  double wsum = std::accumulate(f.w.begin(), f.w.end(), 0.0);
  double ybar = 0;
  for (std::size_t i = 0; i < n; ++i) ybar += f.w[i] * f.y[i];
  ybar /= wsum;
  double sstot = 0;
  for (std::size_t i = 0; i < n; ++i) sstot += f.w[i] * (f.y[i] - ybar) * (f.y[i] - ybar);
  fit.r_squared = sstot > 0 ? std::clamp(1.0 - chi2 / sstot, 0.0, 1.0) : 1.0;

  fit.converged = converged && p > 0;
  fit.unphysical = fit.p_raw > 1.0 + 3.0 * fit.stderr_p + 1e-12;
  fit.p = std::clamp(p, 1e-12, 1.0);
  return fit;
}

ErrorEstimate decay_to_errors(const DecayFit& fit, int n_qubits, ErrorMode mode,
                              const ErrorExtras& extras) {
  if (n_qubits < 1) throw InvalidArgument("decay_to_errors: n_qubits must be >= 1");
  const double dim = std::pow(2.0, n_qubits);
  ErrorEstimate est;
  switch (mode) {
    case ErrorMode::Rb: {
      if (fit.p <= 0 || fit.p > 1) throw InvalidArgument("decay_to_errors: p outside (0, 1]");
      est.r = (1.0 - fit.p) * (dim - 1.0) / dim;
      if (extras.native_gates_per_clifford) {
        double gbar = *extras.native_gates_per_clifford;
        if (gbar <= 0) throw InvalidArgument("gbar must be positive");
        est.r_native = 1.0 - std::pow(1.0 - est.r, 1.0 / gbar);
      }
      break;
    }
    case ErrorMode::Irb: {
      if (!extras.p_reference) throw InvalidArgument("IRB needs a reference decay");
      double ratio = fit.p / *extras.p_reference;
      est.r = (dim - 1.0) / dim * (1.0 - ratio);
      if (ratio > 1.0) {
        est.warning = true;
        est.note = "interleaved decay exceeds reference; negative estimate";
      }
      break;
    }
    case ErrorMode::PerLayerPerQubit: {
      double r_omega;
      if (extras.r_omega) {
        r_omega = *extras.r_omega;
      } else {
        // process-polarization conversion for the Hamming polarization decay
        double dim2 = std::pow(4.0, n_qubits);
        r_omega = (1.0 - fit.p) * (dim2 - 1.0) / dim2;
      }
      est.r = 1.0 - std::pow(1.0 - r_omega, 1.0 / n_qubits);
      break;
    }
  }
  return est;
}

double polarization_from_counts(const Counts& counts, const std::string& target, int n) {
  if (counts.empty()) throw InvalidArgument("polarization_from_counts: empty counts");
  if (static_cast<int>(target.size()) != n)
    throw InvalidArgument("polarization_from_counts: target length mismatch");
  std::uint64_t total = 0;
  std::vector<std::uint64_t> at_distance(n + 1, 0);
  for (auto& [bits, c] : counts) {
    if (bits.size() != target.size())
      throw InvalidArgument("polarization_from_counts: bitstring length mismatch");
    int k = 0;
    for (int i = 0; i < n; ++i)
      if (bits[i] != target[i]) ++k;
    at_distance[k] += c;
    total += c;
  }
  double acc = 0;
  double sign_pow = 1.0;
  for (int k = 0; k <= n; ++k) {
    acc += sign_pow * static_cast<double>(at_distance[k]) / static_cast<double>(total);
    sign_pow *= -0.5;
  }
  double fourn = std::pow(4.0, n);
  return fourn / (fourn - 1.0) * (acc - 1.0 / fourn);
}

HeavyOutputResult heavy_output_test(const std::vector<double>& hops, double threshold) {
  if (hops.size() < 2) throw InvalidArgument("heavy_output_test: need >= 2 circuits");
  for (double h : hops)
    if (h < 0.0 || h > 1.0) throw InvalidArgument("heavy_output_test: HOP outside [0,1]");
  HeavyOutputResult res;
  res.mean = std::accumulate(hops.begin(), hops.end(), 0.0) / hops.size();
  res.sigma = std::sqrt(std::max(0.0, res.mean * (1.0 - res.mean) / hops.size()));
  res.pass = res.mean - 2.0 * res.sigma > threshold;
  return res;
}

void ConfusionModel::validate() const {
  for (auto& q : m) {
    for (double v : q)
      if (v < 0.0 || v > 1.0) throw InvalidArgument("confusion entries must be in [0,1]");
    if (std::abs(q[0] + q[2] - 1.0) > 1e-9 || std::abs(q[1] + q[3] - 1.0) > 1e-9)
      throw InvalidArgument("confusion columns must sum to 1");
  }
}

ConfusionModel ConfusionModel::identity(int n) {
  ConfusionModel c;
  c.m.assign(n, {1.0, 0.0, 0.0, 1.0});
  return c;
}

ConfusionModel ConfusionModel::symmetric(int n, double eps) {
  ConfusionModel c;
  c.m.assign(n, {1.0 - eps, eps, eps, 1.0 - eps});
  return c;
}

ConfusionModel confusion_from_calibration(const Counts& all0, const Counts& all1, int n) {
  auto marginals = [n](const Counts& counts, int prepared) {
    std::vector<double> flip(n, 0.0);
    std::uint64_t total = 0;
    for (auto& [bits, c] : counts) {
      if (static_cast<int>(bits.size()) != n)
        throw InvalidArgument("calibration bitstring length mismatch");
      total += c;
      for (int q = 0; q < n; ++q)
        if (bits[q] - '0' != prepared) flip[q] += static_cast<double>(c);
    }
    if (total == 0) throw InvalidArgument("empty calibration counts");
    for (auto& v : flip) v /= static_cast<double>(total);
    return flip;
  };
  std::vector<double> eps01 = marginals(all0, 0);
  std::vector<double> eps10 = marginals(all1, 1);
  ConfusionModel model;
  model.m.resize(n);
  for (int q = 0; q < n; ++q)
    model.m[q] = {1.0 - eps01[q], eps10[q], eps01[q], 1.0 - eps10[q]};
  return model;
}

RemResult rem_apply(const ConfusionModel& model, const Counts& raw, std::size_t dense_limit) {
  model.validate();
  RemResult out;
  const std::size_t dim = raw.size();
  if (dim == 0) throw InvalidArgument("rem_apply: empty counts");

  std::vector<std::string> keys;
  keys.reserve(dim);
  std::uint64_t total = 0;
  for (auto& [k, v] : raw) {
    keys.push_back(k);
    total += v;
  }
  const int n = static_cast<int>(keys.front().size());
  if (static_cast<int>(model.m.size()) != n)
    throw InvalidArgument("rem_apply: model size does not match bitstrings");

  Eigen::VectorXd p(dim);
  for (std::size_t i = 0; i < dim; ++i)
    p(i) = static_cast<double>(raw.at(keys[i])) / static_cast<double>(total);

  auto entry = [&](std::size_t read, std::size_t prep) {
    double v = 1.0;
    for (int q = 0; q < n; ++q)
      v *= model.p(q, keys[read][q] - '0', keys[prep][q] - '0');
    return v;
  };

  Eigen::VectorXd x;
  if (dim <= dense_limit) {
    Eigen::MatrixXd a(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) a(i, j) = entry(i, j);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) {
      out.mitigated = false;
      out.warning = "restricted confusion matrix is singular; returning raw distribution";
      for (std::size_t i = 0; i < dim; ++i) out.dist[keys[i]] = p(i);
      return out;
    }
    x = lu.solve(p);
  } else {
    // A is diagonally dominant for small readout errors; fixed-point
    // iteration x <- p + (I - A)x computed with on-the-fly rows.
    x = p;
    Eigen::VectorXd ax(dim);
    for (int iter = 0; iter < 200; ++iter) {
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = 0;
        for (std::size_t j = 0; j < dim; ++j) acc += entry(i, j) * x(j);
        ax(i) = acc;
      }
      Eigen::VectorXd next = x + (p - ax);
      double delta = (next - x).cwiseAbs().maxCoeff();
      x = next;
      if (delta < 1e-12) break;
    }
  }

  double sum = x.sum();
  if (std::abs(sum) < 1e-12) {
    out.mitigated = false;
    out.warning = "mitigated distribution sums to zero; returning raw distribution";
    for (std::size_t i = 0; i < dim; ++i) out.dist[keys[i]] = p(i);
    return out;
  }
  for (std::size_t i = 0; i < dim; ++i) out.dist[keys[i]] = x(i) / sum;
  out.mitigated = true;
  return out;
}

double quasi_expectation(const QuasiDistribution& dist,
                         const std::function<double(const std::string&)>& f) {
  double acc = 0;
  for (auto& [k, q] : dist) acc += q * f(k);
  return acc;
}

std::pair<Circuit, Circuit> rem_calibration_circuits(int num_qubits,
                                                     const std::vector<int>& qubits) {
  Circuit all0(num_qubits, "rem-cal-0");
  Circuit all1(num_qubits, "rem-cal-1");
  for (int q : qubits) {
    all0.measure(q);
    all1.prx(q, M_PI, 0.0);
    all1.measure(q);
  }
  return {all0, all1};
}

Ci95 bootstrap_ci(const std::vector<double>& samples,
                  const std::function<double(const std::vector<double>&)>& statistic,
                  int resamples, std::uint64_t seed) {
  if (samples.empty()) throw InvalidArgument("bootstrap_ci: empty samples");
  Rng rng = make_rng(derive_seed(seed, "bootstrap"));
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  std::vector<double> stats(resamples);
  std::vector<double> resample(samples.size());
  for (int r = 0; r < resamples; ++r) {
    for (auto& v : resample) v = samples[pick(rng)];
    stats[r] = statistic(resample);
  }
  std::sort(stats.begin(), stats.end());
  auto at = [&](double q) {
    double idx = q * (stats.size() - 1);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, stats.size() - 1);
    double frac = idx - lo;
    return stats[lo] * (1 - frac) + stats[hi] * frac;
  };
  return {at(0.025), at(0.975)};
}

}  // namespace qpubench
