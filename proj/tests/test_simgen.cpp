#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gcv/covariance.hpp"
#include "gcv/simgen.hpp"

using namespace gcv;

namespace {

double sample_correlation(const Vector& a, const Vector& b) {
  const double ma = a.mean(), mb = b.mean();
  const double cov = ((a.array() - ma) * (b.array() - mb)).sum();
  const double va = (a.array() - ma).square().sum();
  const double vb = (b.array() - mb).square().sum();
  return cov / std::sqrt(va * vb);
}

double excess_kurtosis(const Vector& x) {
  const double m = x.mean();
  const double v = (x.array() - m).square().mean();
  const double k4 = (x.array() - m).pow(4).mean();
  return k4 / (v * v) - 3.0;
}

}  // namespace

TEST_CASE("sample_separated_centers: trivial acceptance cases") {
  Rng rng = make_rng(1);
  Matrix one = sample_separated_centers(1, 5, 2.0, 1.0, rng);
  CHECK(one.rows() == 1);

  // min_sep = 0: the first draw is always accepted, so the stream advances
  // by exactly k * dims normals.
  Rng a = make_rng(2), b = make_rng(2);
  Matrix c0 = sample_separated_centers(3, 2, 1.0, 0.0, a);
  Matrix c1 = sample_separated_centers(3, 2, 1.0, 0.0, b);
  CHECK(c0 == c1);

  Matrix many = sample_separated_centers(4, 3, 5.0, 1.0, rng);
  CHECK(min_pairwise_distance(many) >= 1.0);

  CHECK_THROWS_AS(sample_separated_centers(0, 2, 1.0, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_separated_centers(2, 2, 0.0, 1.0, rng), std::invalid_argument);
  // Impossibly tight: two centers at distance >= 40 from N(0, 1e-6) draws.
  CHECK_THROWS_AS(sample_separated_centers(2, 1, 1e-6, 40.0, rng), std::runtime_error);
}

TEST_CASE("calibrate_tau: closed-form pair case and k = 1") {
  Rng rng = make_rng(3);
  // k=2, dims=1: accept = 2(1 - Phi(1/sqrt(2 tau))) = 0.5 at tau ~ 1.099.
  const double tau = calibrate_tau(2, 1, 1.0, 0.5, rng);
  CHECK(tau == doctest::Approx(1.099).epsilon(0.2));

  Rng rng1 = make_rng(4);
  CHECK(calibrate_tau(1, 3, 1.0, 0.5, rng1) == doctest::Approx(1e-3));  // lower bracket
}

TEST_CASE("calibrate_tau: acceptance is monotone in tau") {
  auto accept_rate = [](double tau, int trials, Rng& rng) {
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
      Matrix c = sample_separated_centers(3, 4, tau, 0.0, rng);
      if (min_pairwise_distance(c) >= 1.0) ok++;
    }
    return double(ok) / trials;
  };
  Rng rng = make_rng(5);
  double prev = -1.0;
  for (double tau : {0.01, 0.1, 1.0, 10.0}) {
    const double rate = accept_rate(tau, 800, rng);
    CHECK(rate >= prev - 0.05);  // monotone up to Monte-Carlo noise
    prev = rate;
  }
}

TEST_CASE("sample_separated_centers: calibrated tau accepts ~50% of first draws") {
  const double tau = calibrated_tau_cached(6, 10);
  Rng rng = make_rng(6);
  int ok = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    Matrix c = sample_separated_centers(6, 10, tau, 0.0, rng);  // raw draw
    if (min_pairwise_distance(c) >= 1.0) ok++;
  }
  CHECK(std::abs(ok / double(trials) - 0.5) <= 0.05);
}

TEST_CASE("generate_setting: determinism and declared label blocks") {
  SimSpec spec = make_setting_spec(Setting::correlated, 0.4, 42);
  auto [d1, l1] = generate_setting(spec);
  auto [d2, l2] = generate_setting(spec);
  CHECK(d1.values == d2.values);
  CHECK(l1 == l2);

  CHECK(spec.cluster_sizes == std::vector<int>{100, 50, 100, 50, 100, 50});
  CHECK(d1.rows() == 450);
  CHECK(d1.cols() == 10);
  Index at = 0;
  for (int g = 0; g < 6; ++g)
    for (int rep = 0; rep < spec.cluster_sizes[g]; ++rep, ++at) CHECK(l1[at] == g);
}

TEST_CASE("setting 1: compound-symmetric noise hits the requested correlation") {
  for (double rho : {0.0, 0.8}) {
    SimSpec spec = make_setting_spec(Setting::correlated, rho, 7);
    auto [data, labels] = generate_setting(spec);
    Matrix sigma = pooled_noise_covariance(data, labels, spec.k_true);
    // diagonal near 1, off-diagonal near rho
    for (Index j = 0; j < sigma.rows(); ++j)
      CHECK(sigma(j, j) == doctest::Approx(1.0).epsilon(0.25));
    double off_mean = 0.0;
    int count = 0;
    for (Index a = 0; a < sigma.rows(); ++a)
      for (Index b = a + 1; b < sigma.cols(); ++b) {
        off_mean += sigma(a, b);
        count++;
      }
    off_mean /= count;
    CHECK(off_mean == doctest::Approx(rho).epsilon(0.05).scale(1.0));
  }
}

TEST_CASE("setting 2: appended noise columns are uniform in [0,1]") {
  SimSpec spec = make_setting_spec(Setting::noise_dims, 12, 8);
  auto [data, labels] = generate_setting(spec);
  CHECK(data.cols() == 6 + 12);
  CHECK(data.rows() == 1000 + 500 + 1000);
  Matrix noise = data.values.rightCols(12);
  CHECK(noise.minCoeff() >= 0.0);
  CHECK(noise.maxCoeff() <= 1.0);
  CHECK(noise.mean() == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("setting 4: variance ladder 1 : (1+R)/2 : R") {
  SimSpec spec = make_setting_spec(Setting::var_hetero, 25.0, 9);
  auto [data, labels] = generate_setting(spec);
  CHECK(data.rows() == 180);
  CHECK(data.cols() == 20);

  Vector var = Vector::Zero(3);
  for (int g = 0; g < 3; ++g) {
    Matrix rows = data.values.middleRows(60 * g, 60);
    Matrix centered = rows.rowwise() - rows.colwise().mean();
    var[g] = centered.squaredNorm() / double(centered.size() - 20);
  }
  CHECK(var[0] == doctest::Approx(1.0).epsilon(0.15));
  CHECK(var[1] == doctest::Approx(13.0).epsilon(0.15));
  CHECK(var[2] == doctest::Approx(25.0).epsilon(0.15));

  SimSpec flat = make_setting_spec(Setting::var_hetero, 1.0, 10);
  auto [fdata, flabels] = generate_setting(flat);
  Matrix sigma = pooled_noise_covariance(fdata, flabels, 3);
  CHECK(sigma.diagonal().maxCoeff() == doctest::Approx(1.0).epsilon(0.3));
  CHECK(sigma.diagonal().minCoeff() == doctest::Approx(1.0).epsilon(0.3));
}

TEST_CASE("setting 5: heavier tails at lower degrees of freedom") {
  // Pool the per-dimension noise of one cluster; nu = 2 should dwarf nu = 11.
  auto noise_kurtosis = [](double nu, std::uint64_t seed) {
    SimSpec spec = make_setting_spec(Setting::heavy_tail, nu, seed);
    spec.cluster_sizes = std::vector<int>(5, 1000);  // n = 5000 per cluster
    auto [data, labels] = generate_setting(spec);
    Matrix rows = data.values.topRows(1000);
    double worst = 0.0;
    for (Index j = 0; j < rows.cols(); ++j) {
      Vector col = rows.col(j);
      worst = std::max(worst, excess_kurtosis(col));
    }
    return worst;
  };
  const double heavy = noise_kurtosis(2.0, 11);
  const double light = noise_kurtosis(11.0, 12);
  CHECK(heavy > 3.0 * std::max(0.1, light));
}

TEST_CASE("empirical cluster means converge like 1/sqrt(n)") {
  // The gap between two disjoint half-sample means of one cluster scales
  // like the mean's own error; 64x the sample should shrink it ~8x.
  auto half_gap = [](int per_cluster, std::uint64_t seed) {
    SimSpec spec;
    spec.setting = Setting::custom;
    spec.k_true = 2;
    spec.dims = 3;
    spec.cluster_sizes = {per_cluster, per_cluster};
    spec.tau = 4.0;
    spec.seed = seed;
    auto [data, labels] = generate_setting(spec);
    Matrix rows = data.values.topRows(per_cluster);
    const Index half = per_cluster / 2;
    Vector mean_a = rows.topRows(half).colwise().mean();
    Vector mean_b = rows.bottomRows(half).colwise().mean();
    return (mean_a - mean_b).norm();
  };
  const double coarse = half_gap(100, 13);
  const double fine = half_gap(6400, 13);
  CHECK(fine < coarse / 3.0);
}

TEST_CASE("spec validation rejects bad parameters") {
  SimSpec spec;
  spec.setting = Setting::custom;
  spec.k_true = 2;
  spec.dims = 2;
  spec.cluster_sizes = {5};  // wrong length
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.cluster_sizes = {5, 5};
  CHECK_NOTHROW(spec.validate());
  spec.rho = 1.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.rho = 0.0;
  spec.var_ratio = 0.5;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.var_ratio = 1.0;
  spec.t_dof = 1.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("bivariate_gaussian and two_cluster_mixture moments") {
  Rng rng = make_rng(14);
  Matrix xy = bivariate_gaussian(20000, 0.6, rng);
  CHECK(sample_correlation(xy.col(0), xy.col(1)) == doctest::Approx(0.6).epsilon(0.05));
  CHECK(xy.col(0).mean() == doctest::Approx(0.0).scale(1.0).epsilon(0.05));

  Rng rng2 = make_rng(15);
  Matrix mix = two_cluster_mixture(20000, 2.0, 1.0, rng2);
  // split by sign of the first coordinate: means near +-(2, 1)
  Vector pos = Vector::Zero(2), neg = Vector::Zero(2);
  int npos = 0, nneg = 0;
  for (Index i = 0; i < mix.rows(); ++i) {
    if (mix(i, 0) > 0) {
      pos += mix.row(i).transpose();
      npos++;
    } else {
      neg += mix.row(i).transpose();
      nneg++;
    }
  }
  pos /= npos;
  neg /= nneg;
  CHECK(pos[0] == doctest::Approx(2.0).epsilon(0.1));
  CHECK(neg[0] == doctest::Approx(-2.0).epsilon(0.1));
}
