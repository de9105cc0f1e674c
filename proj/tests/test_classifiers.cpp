#include <algorithm>
#include <cmath>
#include <numeric>

#include "fpbench/classifiers.hpp"
#include "fpbench/persistence.hpp"
#include "fpbench/rng.hpp"
#include "test_util.hpp"

using namespace fpbench;
using fpbench::testing::error_code_of;

namespace {

double accuracy(const Labels& a, const Labels& b) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < a.size(); ++i) hit += a[i] == b[i];
  return double(hit) / double(a.size());
}

double sqdist(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

void blobs(Rng& rng, std::size_t per_class, int classes, double spread, Samples& X, Labels& y) {
  for (int c = 0; c < classes; ++c)
    for (std::size_t i = 0; i < per_class; ++i) {
      X.push_back({4.0 * std::cos(c * 1.7) + rng.normal(0, spread), 4.0 * std::sin(c * 1.7) + rng.normal(0, spread)});
      y.push_back(c);
    }
}

Samples probe_grid(double lo, double hi, int n) {
  Samples grid;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) grid.push_back({lo + (hi - lo) * i / (n - 1), lo + (hi - lo) * j / (n - 1)});
  return grid;
}

// Gaussian elimination with partial pivoting; false when singular.
bool solve_linear(std::vector<std::vector<double>> A, std::vector<double> b, std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    if (std::abs(A[piv][c]) < 1e-12) return false;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= A[r][k] * x[k];
    x[r] = s / A[r][r];
  }
  return true;
}

struct QpSolution {
  std::vector<double> alpha;
  // every bias in [b_lo, b_hi] satisfies the optimality conditions
  double b_lo = 0.0, b_hi = 0.0;
  double objective = 1e300;
};

// Exhaustive active-set search over {0, free, C} for the binary soft-margin dual.
QpSolution qp_oracle(const Samples& X, const std::vector<int>& s, double gamma, double C) {
  const std::size_t n = X.size();
  std::vector<std::vector<double>> Q(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) Q[i][j] = s[i] * s[j] * std::exp(-gamma * sqdist(X[i], X[j]));
  QpSolution best;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < n; ++i) combos *= 3;
  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<int> state(n);
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i, c /= 3) state[i] = static_cast<int>(c % 3);  // 0 lower, 1 free, 2 upper
    std::vector<std::size_t> F;
    for (std::size_t i = 0; i < n; ++i)
      if (state[i] == 1) F.push_back(i);
    std::vector<double> alpha(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (state[i] == 2) alpha[i] = C;
    const std::size_t m = F.size();
    double eq = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (state[j] == 2) eq -= s[j] * C;
    if (m == 0) {
      if (std::abs(eq) > 1e-12) continue;
    } else {
      std::vector<std::vector<double>> A(m + 1, std::vector<double>(m + 1, 0.0));
      std::vector<double> rhs(m + 1, 0.0);
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) A[a][b] = Q[F[a]][F[b]];
        A[a][m] = s[F[a]];
        A[m][a] = s[F[a]];
        double r = 1.0;
        for (std::size_t j = 0; j < n; ++j)
          if (state[j] == 2) r -= Q[F[a]][j] * C;
        rhs[a] = r;
      }
      rhs[m] = eq;
      std::vector<double> sol;
      if (!solve_linear(A, rhs, sol)) continue;
      bool in_box = true;
      for (std::size_t a = 0; a < m; ++a) {
        if (sol[a] < -1e-9 || sol[a] > C + 1e-9) in_box = false;
        alpha[F[a]] = sol[a];
      }
      if (!in_box) continue;
    }
    // s_i (g_i + b) >= 1 at the lower bound, <= 1 at the upper bound, = 1 when free
    double lo = -1e300, hi = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
      double g = 0.0;
      for (std::size_t j = 0; j < n; ++j) g += Q[i][j] * alpha[j];
      const double edge = s[i] * (1.0 - g);  // the bias putting point i exactly on the margin
      if (state[i] == 1) {
        lo = std::max(lo, edge - 1e-9);
        hi = std::min(hi, edge + 1e-9);
      } else if ((state[i] == 0) == (s[i] > 0)) {
        lo = std::max(lo, edge);
      } else {
        hi = std::min(hi, edge);
      }
    }
    if (lo > hi + 1e-9) continue;
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      obj -= alpha[i];
      for (std::size_t j = 0; j < n; ++j) obj += 0.5 * alpha[i] * alpha[j] * Q[i][j];
    }
    // patterns that tie at the optimum describe the same alphas; their bias ranges join up
    if (obj < best.objective - 1e-9) {
      best = {alpha, lo, hi, obj};
    } else if (obj <= best.objective + 1e-9) {
      best.b_lo = std::min(best.b_lo, lo);
      best.b_hi = std::max(best.b_hi, hi);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("logreg: separable 1-D data and no-signal input") {
  Samples X;
  Labels y;
  for (int i = 0; i < 20; ++i) {
    X.push_back({-1.0});
    y.push_back(0);
    X.push_back({1.0});
    y.push_back(1);
  }
  const TrainedClassifier m = logreg_fit(X, y);
  CHECK(accuracy(predict(m, X).labels, y) == 1.0);
  CHECK(m.kind == ClassifierKind::LogReg);
  CHECK(m.classes == Labels{0, 1});
  CHECK_FALSE(m.loss_curve.empty());

  const Samples same(9, Vector{0.5, 0.5});
  const Labels yy = {2, 2, 2, 2, 2, 1, 1, 3, 3};
  const TrainedClassifier flat = logreg_fit(same, yy);
  for (int label : predict(flat, {{0.5, 0.5}, {9.0, -3.0}}).labels) CHECK(label == 2);
}

TEST_CASE("logreg: duplicating every sample leaves the decision function unchanged") {
  Rng rng(3);
  Samples X;
  Labels y;
  blobs(rng, 15, 3, 1.5, X, y);
  Samples X2 = X;
  Labels y2 = y;
  X2.insert(X2.end(), X.begin(), X.end());
  y2.insert(y2.end(), y.begin(), y.end());
  const auto grid = probe_grid(-6, 6, 9);
  CHECK(predict(logreg_fit(X, y), grid).labels == predict(logreg_fit(X2, y2), grid).labels);
}

TEST_CASE("knn basics") {
  const TrainedClassifier one = knn_fit({{1.0, 2.0}}, {3}, {1});
  for (int label : predict(one, probe_grid(-5, 5, 4)).labels) CHECK(label == 3);
  CHECK(error_code_of([] { knn_fit({}, {}, {1}); }) == ErrorCode::EmptyTrainingSet);

  Rng rng(4);
  Samples X;
  Labels y;
  for (int i = 0; i < 60; ++i) {
    X.push_back({rng.normal(), rng.normal(), rng.normal()});
    y.push_back(static_cast<int>(rng.index(4)));
  }
  CHECK(predict(knn_fit(X, y, {1}), X).labels == y);
}

TEST_CASE("knn k=3 matches an exhaustive-distance oracle") {
  const Samples X = {{0, 0}, {1, 0}, {0, 1}, {3, 3}, {4, 3}, {3, 4}};
  const Labels y = {0, 0, 1, 1, 1, 0};
  const TrainedClassifier m = knn_fit(X, y, {3});
  const Samples grid = probe_grid(-1, 5, 5);
  const Labels got = predict(m, grid).labels;
  for (std::size_t q = 0; q < grid.size(); ++q) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t i = 0; i < X.size(); ++i) d.emplace_back(sqdist(X[i], grid[q]), i);
    std::stable_sort(d.begin(), d.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::array<int, 4> votes{};
    for (int i = 0; i < 3; ++i) ++votes[y[d[i].second]];
    const int expected = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    CAPTURE(q);
    CHECK(got[q] == expected);
  }
}

TEST_CASE("knn tie rules") {
  // equidistant neighbours: insertion order decides which enter the vote
  const TrainedClassifier m = knn_fit({{1.0}, {-1.0}, {5.0}}, {2, 1, 0}, {1});
  CHECK(predict(m, {{0.0}}).labels[0] == 2);
  // 1-1 vote goes to the smaller class
  const TrainedClassifier m2 = knn_fit({{1.0}, {-1.0}}, {3, 1}, {2});
  CHECK(predict(m2, {{0.0}}).labels[0] == 1);
}

TEST_CASE("mlp: XOR capacity, parameter count, determinism") {
  const Samples X = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const Labels y = {0, 1, 1, 0};
  int solved = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    MlpConfig cfg;
    cfg.seed = seed;
    cfg.learning_rate = 0.01;
    solved += accuracy(predict(mlp_fit(X, y, cfg), X).labels, y) == 1.0;
  }
  CHECK(solved >= 4);

  Rng rng(5);
  Samples Xd;
  Labels yd;
  for (int i = 0; i < 40; ++i) {
    Vector x(7);
    for (double& v : x) v = rng.normal();
    Xd.push_back(x);
    yd.push_back(i % 4);
  }
  MlpConfig cfg;
  cfg.max_iter = 20;
  cfg.seed = 9;
  const TrainedClassifier a = mlp_fit(Xd, yd, cfg), b = mlp_fit(Xd, yd, cfg);
  CHECK(parameter_count(a) == 7 * 100 + 100 + 100 * 4 + 4);
  const auto& pa = std::get<MlpParams>(a.params);
  const auto& pb = std::get<MlpParams>(b.params);
  CHECK(pa.w1 == pb.w1);
  CHECK(pa.w2 == pb.w2);
  CHECK(a.loss_curve == b.loss_curve);
  cfg.seed = 10;
  CHECK(std::get<MlpParams>(mlp_fit(Xd, yd, cfg).params).w1 != pa.w1);
}

TEST_CASE("svm: separable blobs, box and equality constraints") {
  Rng rng(6);
  Samples X;
  Labels y;
  blobs(rng, 20, 2, 0.5, X, y);
  const TrainedClassifier m = svm_fit(X, y);
  CHECK(accuracy(predict(m, X).labels, y) == 1.0);
  const auto& p = std::get<SvmParams>(m.params);
  CHECK(p.gamma == doctest::Approx(auto_gamma(X)));
  for (const auto& machine : p.machines) {
    double eq = 0.0;
    for (std::size_t i = 0; i < machine.alpha.size(); ++i) {
      CHECK(machine.alpha[i] > 0.0);
      CHECK(machine.alpha[i] <= p.C + 1e-12);
      eq += machine.alpha[i] * machine.sign[i];
    }
    CHECK(std::abs(eq) < 1e-6);
  }
}

TEST_CASE("svm: overlapping four-class data keeps dual feasibility") {
  Rng rng(7);
  Samples X;
  Labels y;
  blobs(rng, 25, 4, 2.5, X, y);
  SvmConfig cfg;
  cfg.C = 0.5;
  const TrainedClassifier m = svm_fit(X, y, cfg);
  const auto& p = std::get<SvmParams>(m.params);
  REQUIRE(p.machines.size() == 4);
  bool some_at_bound = false;
  for (const auto& machine : p.machines) {
    double eq = 0.0;
    for (std::size_t i = 0; i < machine.alpha.size(); ++i) {
      CHECK(machine.alpha[i] <= cfg.C + 1e-12);
      some_at_bound |= machine.alpha[i] >= cfg.C - 1e-12;
      eq += machine.alpha[i] * machine.sign[i];
    }
    CHECK(std::abs(eq) < 1e-6);
  }
  CHECK(some_at_bound);
}

TEST_CASE("svm: decision values match an exhaustive QP oracle on 8 points") {
  const Samples X = {{0.0, 0.0}, {1.0, 0.2}, {0.3, 1.1}, {1.2, 1.0}, {2.0, 2.1}, {2.6, 1.4}, {1.1, 2.4}, {0.9, 0.8}};
  const Labels y = {0, 0, 0, 1, 1, 1, 1, 0};
  for (double C : {1.0, 0.3, 10.0}) {
    SvmConfig cfg;
    cfg.C = C;
    cfg.gamma = 0.7;
    cfg.tol = 1e-8;
    const TrainedClassifier m = svm_fit(X, y, cfg);
    const auto& p = std::get<SvmParams>(m.params);
    for (std::size_t machine = 0; machine < 2; ++machine) {
      std::vector<int> s(X.size());
      for (std::size_t i = 0; i < X.size(); ++i) s[i] = y[i] == m.classes[machine] ? 1 : -1;
      const QpSolution oracle = qp_oracle(X, s, 0.7, C);
      REQUIRE(oracle.objective < 1e299);
      CAPTURE(C);
      // the fitted bias must lie in the oracle's optimal interval; kernel parts must agree
      const double bias = -p.machines[machine].rho;
      CHECK(bias >= oracle.b_lo - 1e-4);
      CHECK(bias <= oracle.b_hi + 1e-4);
      for (const Vector& q : probe_grid(-0.5, 3.0, 6)) {
        double f = 0.0;
        for (std::size_t j = 0; j < X.size(); ++j) f += oracle.alpha[j] * s[j] * std::exp(-0.7 * sqdist(X[j], q));
        CHECK(std::abs(svm_decision(p, machine, q) - bias - f) < 1e-3);
      }
    }
  }
}

TEST_CASE("svm gamma fallback for zero-variance features") {
  CHECK(auto_gamma({{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}}) == doctest::Approx(1.0 / 3.0));
  CHECK(auto_gamma({{0.0, 0.0}, {2.0, 0.0}}) == doctest::Approx(1.0 / (2.0 * 0.5)));
  CHECK(error_code_of([] { svm_fit({{1.0}, {2.0}}, {1, 1}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("predict contract") {
  Rng rng(8);
  Samples X;
  Labels y;
  blobs(rng, 10, 3, 1.0, X, y);
  for (const TrainedClassifier& m : {logreg_fit(X, y), knn_fit(X, y), mlp_fit(X, y, {16, 50}), svm_fit(X, y)}) {
    CAPTURE(to_string(m.kind));
    CHECK(predict(m, {}).labels.empty());
    CHECK(error_code_of([&] { predict(m, {{1.0, 2.0, 3.0}}); }) == ErrorCode::DimensionMismatch);
    const Prediction p = predict(m, X);
    CHECK(p.labels.size() == X.size());
    CHECK(p.scores.size() == X.size());
    const TrainedClassifier back = classifier_from_json(Json::parse(dump_json(to_json(m))));
    const Prediction q = predict(back, X);
    CHECK(q.labels == p.labels);
    CHECK(q.scores == p.scores);
    CHECK(parameter_count(back) == parameter_count(m));
  }
}

TEST_CASE("fits are invariant to training-sample order") {
  Rng rng(9);
  Samples X;
  Labels y;
  blobs(rng, 12, 4, 1.8, X, y);
  std::vector<std::size_t> perm(X.size());
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  Samples Xp;
  Labels yp;
  for (std::size_t i : perm) {
    Xp.push_back(X[i]);
    yp.push_back(y[i]);
  }
  const Samples grid = probe_grid(-7, 7, 7);
  MlpConfig mlp;
  mlp.hidden = 12;
  mlp.max_iter = 40;
  mlp.seed = 4;
  CHECK(predict(logreg_fit(X, y), grid).scores == predict(logreg_fit(Xp, yp), grid).scores);
  CHECK(predict(mlp_fit(X, y, mlp), grid).scores == predict(mlp_fit(Xp, yp, mlp), grid).scores);
  CHECK(predict(svm_fit(X, y), grid).scores == predict(svm_fit(Xp, yp), grid).scores);
}
