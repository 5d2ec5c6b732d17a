#include "gcv/simgen.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace gcv {
namespace {

constexpr double kMinSep = 1.0;
constexpr double kTargetAccept = 0.5;
constexpr int kCenterRedrawLimit = 10000;
constexpr int kCalibrationDraws = 2000;

std::vector<int> alternating_sizes(int k, int large, int small) {
  std::vector<int> sizes(k);
  for (int g = 0; g < k; ++g) sizes[g] = (g % 2 == 0) ? large : small;
  return sizes;
}

Matrix draw_centers_once(int k, int dims, double tau, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(tau));
  Matrix centers(k, dims);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < dims; ++j) centers(i, j) = gauss(rng);
  return centers;
}

bool well_separated(const Matrix& centers, double min_sep) {
  return centers.rows() < 2 || min_pairwise_distance(centers) >= min_sep;
}

Matrix compound_symmetric(int p, double rho) {
  Matrix sigma = Matrix::Constant(p, p, rho);
  sigma.diagonal().setOnes();
  return sigma;
}

}  // namespace

std::string setting_name(Setting s) {
  switch (s) {
    case Setting::correlated: return "correlated";
    case Setting::noise_dims: return "noise_dims";
    case Setting::high_dim: return "high_dim";
    case Setting::var_hetero: return "var_hetero";
    case Setting::heavy_tail: return "heavy_tail";
    case Setting::custom: return "custom";
  }
  throw std::logic_error("unknown setting");
}

Setting setting_from_name(const std::string& name) {
  for (Setting s : {Setting::correlated, Setting::noise_dims, Setting::high_dim,
                    Setting::var_hetero, Setting::heavy_tail, Setting::custom})
    if (setting_name(s) == name) return s;
  throw std::invalid_argument("unknown setting name: " + name);
}

double SimSpec::primary_param() const {
  switch (setting) {
    case Setting::correlated: return rho;
    case Setting::noise_dims: return double(noise_cols);
    case Setting::high_dim: return double(dims);
    case Setting::var_hetero: return var_ratio;
    case Setting::heavy_tail: return t_dof;
    case Setting::custom: return 0.0;
  }
  return 0.0;
}

void SimSpec::validate() const {
  if (k_true < 1) throw std::invalid_argument("SimSpec: k_true must be >= 1");
  if (dims < 1) throw std::invalid_argument("SimSpec: dims must be >= 1");
  if (static_cast<int>(cluster_sizes.size()) != k_true)
    throw std::invalid_argument("SimSpec: cluster_sizes must have k_true entries");
  for (int size : cluster_sizes)
    if (size < 1) throw std::invalid_argument("SimSpec: cluster sizes must be >= 1");
  if (std::abs(rho) >= 1.0) throw std::invalid_argument("SimSpec: need |rho| < 1");
  if (noise_cols < 0) throw std::invalid_argument("SimSpec: noise_cols must be >= 0");
  if (var_ratio < 1.0) throw std::invalid_argument("SimSpec: need var_ratio >= 1");
  if (t_dof < 2.0) throw std::invalid_argument("SimSpec: need t_dof >= 2");
  if (tau && !(*tau > 0.0)) throw std::invalid_argument("SimSpec: tau must be positive");
}

SimSpec make_setting_spec(Setting s, double param, std::uint64_t seed) {
  SimSpec spec;
  spec.setting = s;
  spec.seed = seed;
  switch (s) {
    case Setting::correlated:
      spec.k_true = 6;
      spec.dims = 10;
      spec.cluster_sizes = alternating_sizes(6, 100, 50);
      spec.rho = param;
      break;
    case Setting::noise_dims:
      spec.k_true = 3;
      spec.dims = 6;
      spec.cluster_sizes = alternating_sizes(3, 1000, 500);
      spec.noise_cols = static_cast<int>(param);
      break;
    case Setting::high_dim:
      spec.k_true = 8;
      spec.dims = static_cast<int>(param);
      spec.cluster_sizes = alternating_sizes(8, 100, 50);
      break;
    case Setting::var_hetero:
      spec.k_true = 3;
      spec.dims = 20;
      spec.cluster_sizes = std::vector<int>(3, 60);
      spec.var_ratio = param;
      break;
    case Setting::heavy_tail:
      spec.k_true = 5;
      spec.dims = 15;
      spec.cluster_sizes = std::vector<int>(5, 80);
      spec.t_dof = param;
      break;
    case Setting::custom:
      throw std::invalid_argument("make_setting_spec: custom specs are built by hand");
  }
  spec.validate();
  return spec;
}

Matrix sample_separated_centers(int k, int dims, double tau, double min_sep, Rng& rng) {
  if (k < 1) throw std::invalid_argument("sample_separated_centers: k must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("sample_separated_centers: tau must be > 0");
  if (min_sep < 0.0)
    throw std::invalid_argument("sample_separated_centers: min_sep must be >= 0");

  for (int attempt = 0; attempt < kCenterRedrawLimit; ++attempt) {
    Matrix centers = draw_centers_once(k, dims, tau, rng);
    if (well_separated(centers, min_sep)) return centers;
  }
  throw std::runtime_error(
      "sample_separated_centers: redraw limit exceeded (infeasible configuration)");
}

namespace {

double acceptance_estimate(int k, int dims, double tau, double min_sep, Rng& rng) {
  int accepted = 0;
  for (int t = 0; t < kCalibrationDraws; ++t)
    if (well_separated(draw_centers_once(k, dims, tau, rng), min_sep)) accepted++;
  return double(accepted) / double(kCalibrationDraws);
}

}  // namespace

double calibrate_tau(int k, int dims, double min_sep, double target_accept, Rng& rng) {
  if (!(target_accept > 0.0 && target_accept < 1.0))
    throw std::invalid_argument("calibrate_tau: target_accept must be in (0, 1)");

  const double tol = 0.03;
  double lo = 1e-3, hi = 1e3;
  const std::uint64_t base = rng();

  Rng probe_rng = derive_rng(base, 0);
  const double at_lo = acceptance_estimate(k, dims, lo, min_sep, probe_rng);
  if (at_lo >= target_accept - tol) return lo;  // k = 1 lands here: everything accepted
  probe_rng = derive_rng(base, 1);
  const double at_hi = acceptance_estimate(k, dims, hi, min_sep, probe_rng);
  if (at_hi <= target_accept - tol)
    throw std::runtime_error("calibrate_tau: bracket failure (acceptance stays low)");

  for (int iter = 0; iter < 60; ++iter) {
    const double mid = std::sqrt(lo * hi);  // acceptance varies on the log scale
    probe_rng = derive_rng(base, 2 + iter);
    const double est = acceptance_estimate(k, dims, mid, min_sep, probe_rng);
    if (std::abs(est - target_accept) <= tol) return mid;
    (est < target_accept ? lo : hi) = mid;
  }
  throw std::runtime_error("calibrate_tau: bisection failed to meet tolerance");
}

double calibrated_tau_cached(int k, int dims) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, double> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({k, dims});
  if (it != cache.end()) return it->second;
  // Stream depends only on (k, dims): the cache never changes a result.
  Rng rng = derive_rng(0x7461752dull, k, dims);
  const double tau = calibrate_tau(k, dims, kMinSep, kTargetAccept, rng);
  cache[{k, dims}] = tau;
  return tau;
}

std::pair<DataMatrix, IntVector> generate_setting(const SimSpec& spec) {
  spec.validate();
  const int k = spec.k_true;
  Index n = 0;
  for (int size : spec.cluster_sizes) n += size;

  Rng rng = derive_rng(spec.seed, 0x73696d2dull);
  const double tau = spec.tau ? *spec.tau : calibrated_tau_cached(k, spec.dims);
  Matrix centers = sample_separated_centers(k, spec.dims, tau, kMinSep, rng);

  // Per-cluster noise scale (Setting 4's 1 : (1+R)/2 : R variance ladder).
  Vector noise_sd = Vector::Ones(k);
  if (spec.setting == Setting::var_hetero) {
    if (k != 3)
      throw std::invalid_argument("var_hetero uses exactly three clusters");
    noise_sd << 1.0, std::sqrt((1.0 + spec.var_ratio) / 2.0), std::sqrt(spec.var_ratio);
  }

  // Cholesky factor of the common noise covariance (identity unless correlated).
  Matrix chol = Matrix::Identity(spec.dims, spec.dims);
  if (spec.setting == Setting::correlated && spec.rho != 0.0) {
    Eigen::LLT<Matrix> llt(compound_symmetric(spec.dims, spec.rho));
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument(
          "generate_setting: compound-symmetric covariance is not positive definite");
    chol = llt.matrixL();
  }

  const Index total_cols = spec.dims + (spec.setting == Setting::noise_dims ? spec.noise_cols : 0);
  Matrix values(n, total_cols);
  IntVector labels(n);

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::student_t_distribution<double> student(spec.t_dof);
  Index row = 0;
  for (int g = 0; g < k; ++g) {
    for (int rep = 0; rep < spec.cluster_sizes[g]; ++rep, ++row) {
      labels[row] = g;
      Vector z(spec.dims);
      if (spec.setting == Setting::heavy_tail)
        for (Index j = 0; j < spec.dims; ++j) z[j] = student(rng);
      else
        for (Index j = 0; j < spec.dims; ++j) z[j] = gauss(rng);

      if (spec.setting == Setting::correlated)
        values.row(row).head(spec.dims) = centers.row(g) + (chol * z).transpose();
      else
        values.row(row).head(spec.dims) =
            centers.row(g) + noise_sd[g] * z.transpose();
    }
  }

  if (spec.setting == Setting::noise_dims && spec.noise_cols > 0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < spec.noise_cols; ++j)
        values(i, spec.dims + j) = unit(rng);
  }

  return {DataMatrix(std::move(values)), std::move(labels)};
}

Matrix bivariate_gaussian(Index n, double rho, Rng& rng) {
  if (std::abs(rho) > 1.0)
    throw std::invalid_argument("bivariate_gaussian: need |rho| <= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double slope = rho;
  const double resid = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  Matrix values(n, 2);
  for (Index i = 0; i < n; ++i) {
    const double x = gauss(rng);
    values(i, 0) = x;
    values(i, 1) = slope * x + resid * gauss(rng);
  }
  return values;
}

Matrix two_cluster_mixture(Index n, double mu_x, double mu_y, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution flip(0.5);
  Matrix values(n, 2);
  for (Index i = 0; i < n; ++i) {
    const double sign = flip(rng) ? 1.0 : -1.0;
    values(i, 0) = sign * mu_x + gauss(rng);
    values(i, 1) = sign * mu_y + gauss(rng);
  }
  return values;
}

}  // namespace gcv
