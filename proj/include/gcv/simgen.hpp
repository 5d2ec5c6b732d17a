#ifndef GCV_SIMGEN_HPP
#define GCV_SIMGEN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcv/data_matrix.hpp"
#include "gcv/dense.hpp"
#include "gcv/rng.hpp"

namespace gcv {

enum class Setting { correlated, noise_dims, high_dim, var_hetero, heavy_tail, custom };

std::string setting_name(Setting s);
Setting setting_from_name(const std::string& name);

/// Declarative description of one simulated dataset. The factory functions
/// below fill in the standard shapes; `custom` takes the fields as given and
/// draws spherical unit Gaussian noise.
struct SimSpec {
  Setting setting = Setting::custom;
  int k_true = 1;
  int dims = 1;                    // signal dimensions (noise columns excluded)
  std::vector<int> cluster_sizes;  // one entry per cluster
  double rho = 0.0;                // correlated: common off-diagonal correlation
  int noise_cols = 0;              // noise_dims: appended uniform[0,1] columns
  double var_ratio = 1.0;          // var_hetero: largest-to-smallest variance ratio R
  double t_dof = 3.0;              // heavy_tail: degrees of freedom
  std::optional<double> tau;       // center scale; calibrated when absent
  std::uint64_t seed = 0;

  /// Setting-specific parameter (rho, r, P, R or nu) for reporting.
  double primary_param() const;
  void validate() const;
};

/// Standard shapes: 6 clusters in 10-d (correlated), 3 in 6-d + r noise
/// columns (noise_dims), 8 in P-d (high_dim), 3 in 20-d at 60 per cluster
/// (var_hetero), 5 in 15-d at 80 per cluster (heavy_tail). Cluster sizes
/// alternate large/small (100/50 or 1000/500) starting large.
SimSpec make_setting_spec(Setting s, double param, std::uint64_t seed);

/// Centers i.i.d. N(0, tau*I), redrawn as a whole set until every pairwise
/// distance is at least min_sep; gives up after 10000 redraws.
Matrix sample_separated_centers(int k, int dims, double tau, double min_sep, Rng& rng);

/// Bisection on tau in [1e-3, 1e3] against Monte-Carlo estimates (2000 first
/// draws per probe) of the acceptance probability, stopping within +-0.03 of
/// target_accept. Returns the lower bracket when even the smallest tau
/// already meets the target (k = 1 accepts everything).
double calibrate_tau(int k, int dims, double min_sep, double target_accept, Rng& rng);

/// As calibrate_tau but derives its Monte-Carlo stream from (k, dims) and
/// memoizes, so generators stay deterministic regardless of call order.
double calibrated_tau_cached(int k, int dims);

/// Draws the dataset described by the spec; returns the data and the true
/// cluster label of each row.
std::pair<DataMatrix, IntVector> generate_setting(const SimSpec& spec);

/// n draws from a mean-zero bivariate normal with unit marginal variances
/// and correlation rho (the single-cluster sweep input).
Matrix bivariate_gaussian(Index n, double rho, Rng& rng);

/// n draws from an equiprobable mixture of N(+(mu_x, mu_y), I) and
/// N(-(mu_x, mu_y), I) (the two-cluster sweep input).
Matrix two_cluster_mixture(Index n, double mu_x, double mu_y, Rng& rng);

}  // namespace gcv

#endif  // GCV_SIMGEN_HPP
