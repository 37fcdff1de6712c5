#include "wristmood/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parallel.hpp"
#include "smo.hpp"
#include "wristmood/random.hpp"

namespace wristmood::svm {

Scaler Scaler::fit(const Matrix& train) {
  if (train.empty()) fail(ErrorCode::kInvalidArgument, "cannot fit a scaler on no data");
  Scaler s;
  s.min.assign(train.row(0).begin(), train.row(0).end());
  s.max = s.min;
  for (std::size_t r = 1; r < train.rows(); ++r) {
    auto row = train.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      s.min[c] = std::min(s.min[c], row[c]);
      s.max[c] = std::max(s.max[c], row[c]);
    }
  }
  return s;
}

std::vector<double> Scaler::apply(std::span<const double> x) const {
  if (x.size() != dim())
    fail(ErrorCode::kDimensionMismatch, "scaler expects " + std::to_string(dim()) +
                                            " features, got " + std::to_string(x.size()));
  std::vector<double> y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double range = max[j] - min[j];
    y[j] = range > 0.0 ? 2.0 * (x[j] - min[j]) / range - 1.0 : 0.0;
  }
  return y;
}

Matrix Scaler::apply(const Matrix& x) const {
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto y = apply(x.row(r));
    std::copy(y.begin(), y.end(), out.row(r).begin());
  }
  return out;
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::exp(-gamma * s);
}

double BinarySvm::decision(std::span<const double> x) const {
  if (x.size() != support_vectors.cols())
    fail(ErrorCode::kDimensionMismatch, "input dimension does not match support vectors");
  double f = 0.0;
  for (std::size_t i = 0; i < support_vectors.rows(); ++i)
    f += coef[i] * rbf_kernel(support_vectors.row(i), x, gamma);
  return f - rho;
}

namespace {

void check_finite(const Matrix& x) {
  for (double v : x.data())
    if (!std::isfinite(v)) fail(ErrorCode::kNonFiniteFeature, "non-finite feature value");
}

void check_hyper(double C, double gamma) {
  if (!(C > 0.0)) fail(ErrorCode::kInvalidArgument, "C must be positive");
  if (!(gamma > 0.0)) fail(ErrorCode::kInvalidArgument, "gamma must be positive");
}

std::vector<std::size_t> iota_index(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Keeps the support vectors (alpha > 0) of a pool-level solution.
BinarySvm to_binary(const Matrix& pool, std::span<const std::size_t> index, std::span<const int> y,
                    const detail::DualSolution& sol, double C, double gamma) {
  BinarySvm m;
  m.C = C;
  m.gamma = gamma;
  m.rho = sol.rho;
  m.iterations = sol.iterations;
  m.converged = sol.converged;
  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < index.size(); ++t)
    if (sol.alpha[t] > 0.0) {
      keep.push_back(index[t]);
      m.coef.push_back(sol.alpha[t] * y[t]);
    }
  m.support_vectors = pool.select(keep);
  return m;
}

}  // namespace

BinarySvm train_binary(const Matrix& x, std::span<const int> y, double C, double gamma,
                       const SolverOptions& options) {
  check_hyper(C, gamma);
  if (x.rows() != y.size()) fail(ErrorCode::kDimensionMismatch, "labels and rows differ");
  check_finite(x);
  bool pos = false, neg = false;
  for (int v : y) {
    if (v == 1) pos = true;
    else if (v == -1) neg = true;
    else fail(ErrorCode::kInvalidArgument, "binary labels must be +1 or -1");
  }
  if (!pos || !neg) fail(ErrorCode::kSingleClass, "binary training needs both labels");
  const auto gram = detail::rbf_gram(detail::squared_distances(x), gamma);
  const detail::KernelView kv{gram.data(), x.rows()};
  const auto index = iota_index(x.rows());
  const auto sol = detail::solve_dual(kv, index, y, C, options);
  return to_binary(x, index, y, sol, C, gamma);
}

int vote(std::span<const int> classes, std::span<const double> pair_decisions) {
  const std::size_t k = classes.size();
  std::vector<int> count(k, 0);
  std::size_t p = 0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b, ++p) ++count[pair_decisions[p] > 0.0 ? a : b];
  std::size_t best = 0;
  for (std::size_t c = 1; c < k; ++c)
    if (count[c] > count[best]) best = c;
  return classes[best];
}

std::vector<int> SvmModel::votes(std::span<const double> raw) const {
  const auto x = scaler.apply(raw);
  std::vector<int> count(classes.size(), 0);
  std::size_t p = 0;
  for (std::size_t a = 0; a < classes.size(); ++a)
    for (std::size_t b = a + 1; b < classes.size(); ++b, ++p)
      ++count[pairs[p].decision(x) > 0.0 ? a : b];
  return count;
}

int SvmModel::predict(std::span<const double> raw) const {
  if (classes.size() == 1) return classes.front();
  const auto x = scaler.apply(raw);
  std::vector<double> dec(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) dec[p] = pairs[p].decision(x);
  return vote(classes, dec);
}

namespace {

std::vector<int> sorted_classes(std::span<const int> labels) {
  std::vector<int> c(labels.begin(), labels.end());
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

// One-vs-one over a pool kernel; returns per-pair solutions and members.
struct PairFit {
  std::vector<std::size_t> index;  // pool indices
  std::vector<int> y;
  detail::DualSolution sol;
};

std::vector<PairFit> fit_pairs(const detail::KernelView& kv, std::span<const std::size_t> members,
                               std::span<const int> labels, std::span<const int> classes, double C,
                               const SolverOptions& options) {
  std::vector<PairFit> out;
  for (std::size_t a = 0; a < classes.size(); ++a)
    for (std::size_t b = a + 1; b < classes.size(); ++b) {
      PairFit pf;
      for (std::size_t m : members) {
        if (labels[m] == classes[a]) {
          pf.index.push_back(m);
          pf.y.push_back(1);
        } else if (labels[m] == classes[b]) {
          pf.index.push_back(m);
          pf.y.push_back(-1);
        }
      }
      pf.sol = detail::solve_dual(kv, pf.index, pf.y, C, options);
      out.push_back(std::move(pf));
    }
  return out;
}

}  // namespace

SvmModel train_model(const Matrix& raw, std::span<const int> labels, double C, double gamma,
                     const SolverOptions& options) {
  check_hyper(C, gamma);
  if (raw.rows() != labels.size()) fail(ErrorCode::kDimensionMismatch, "labels and rows differ");
  if (raw.empty()) fail(ErrorCode::kInvalidArgument, "no training data");
  check_finite(raw);
  SvmModel model;
  model.scaler = Scaler::fit(raw);
  model.classes = sorted_classes(labels);
  model.C = C;
  model.gamma = gamma;
  const Matrix x = model.scaler.apply(raw);
  const auto gram = detail::rbf_gram(detail::squared_distances(x), gamma);
  const detail::KernelView kv{gram.data(), x.rows()};
  const auto members = iota_index(x.rows());
  auto fits = fit_pairs(kv, members, labels, model.classes, C, options);
  std::size_t p = 0;
  for (std::size_t a = 0; a < model.classes.size(); ++a)
    for (std::size_t b = a + 1; b < model.classes.size(); ++b, ++p) {
      auto m = to_binary(x, fits[p].index, fits[p].y, fits[p].sol, C, gamma);
      m.positive_label = model.classes[a];
      m.negative_label = model.classes[b];
      model.pairs.push_back(std::move(m));
    }
  return model;
}

FoldAssignment stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed) {
  if (folds < 2) fail(ErrorCode::kInvalidArgument, "need at least 2 folds");
  FoldAssignment fa;
  fa.fold.assign(labels.size(), 0);
  auto rng = make_rng(seed, 0x5f0d);
  std::size_t offset = 0;
  for (int c : sorted_classes(labels)) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == c) members.push_back(i);
    if (members.size() < static_cast<std::size_t>(folds)) fa.degraded = true;
    std::shuffle(members.begin(), members.end(), rng);
    // Continue the round-robin across classes so small classes do not all
    // land in fold 0.
    for (std::size_t r = 0; r < members.size(); ++r)
      fa.fold[members[r]] = static_cast<int>((offset + r) % static_cast<std::size_t>(folds));
    offset += members.size();
  }
  return fa;
}

GridResult grid_search(const Matrix& scaled, std::span<const int> labels,
                       const GridOptions& options) {
  const std::size_t n = scaled.rows();
  if (n != labels.size()) fail(ErrorCode::kDimensionMismatch, "labels and rows differ");
  if (n < static_cast<std::size_t>(options.folds))
    fail(ErrorCode::kInvalidArgument, "fewer examples than folds");
  const auto classes = sorted_classes(labels);
  if (classes.size() < 2) fail(ErrorCode::kSingleClass, "grid search needs at least 2 classes");
  if (options.c_exponents.empty() || options.gamma_exponents.empty())
    fail(ErrorCode::kInvalidArgument, "empty hyperparameter grid");
  check_finite(scaled);

  GridResult result;
  result.folds = stratified_folds(labels, options.folds, options.seed);
  if (result.folds.degraded)
    result.notes.push_back("a class has fewer members than folds; stratification is best effort");

  std::vector<std::vector<std::size_t>> train_of(static_cast<std::size_t>(options.folds));
  std::vector<std::vector<std::size_t>> test_of(train_of.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t f = 0; f < train_of.size(); ++f)
      (result.folds.fold[i] == static_cast<int>(f) ? test_of[f] : train_of[f]).push_back(i);
  std::vector<std::vector<int>> fold_classes;
  for (const auto& tr : train_of) {
    std::vector<int> l;
    for (auto i : tr) l.push_back(labels[i]);
    fold_classes.push_back(sorted_classes(l));
  }

  const auto d2 = detail::squared_distances(scaled);
  const std::size_t nc = options.c_exponents.size(), ng = options.gamma_exponents.size();
  result.table.resize(nc * ng);
  std::vector<std::size_t> unconverged(nc * ng, 0);
  for (std::size_t g = 0; g < ng; ++g) {
    const double gamma = std::ldexp(1.0, options.gamma_exponents[g]);
    const auto gram = detail::rbf_gram(d2, gamma);
    const detail::KernelView kv{gram.data(), n};
    wristmood::detail::parallel_for(nc, [&](std::size_t c) {
      const double C = std::ldexp(1.0, options.c_exponents[c]);
      std::size_t correct = 0;
      for (std::size_t f = 0; f < train_of.size(); ++f) {
        const auto& cls = fold_classes[f];
        if (cls.size() < 2) {
          for (auto e : test_of[f]) correct += labels[e] == cls.front();
          continue;
        }
        const auto fits = fit_pairs(kv, train_of[f], labels, cls, C, options.solver);
        for (const auto& pf : fits) unconverged[c * ng + g] += !pf.sol.converged;
        std::vector<double> dec(fits.size());
        for (auto e : test_of[f]) {
          for (std::size_t p = 0; p < fits.size(); ++p) {
            const auto& pf = fits[p];
            double v = -pf.sol.rho;
            const double* row = gram.data() + e * n;
            for (std::size_t t = 0; t < pf.index.size(); ++t)
              if (pf.sol.alpha[t] > 0.0) v += pf.sol.alpha[t] * pf.y[t] * row[pf.index[t]];
            dec[p] = v;
          }
          correct += vote(cls, dec) == labels[e];
        }
      }
      result.table[c * ng + g] = GridPoint{C, gamma, correct};
    });
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.table.size(); ++i)
    if (result.table[i].correct > result.table[best].correct) best = i;
  result.C = result.table[best].C;
  result.gamma = result.table[best].gamma;
  result.cv_accuracy = static_cast<double>(result.table[best].correct) / static_cast<double>(n);
  const std::size_t bad = std::accumulate(unconverged.begin(), unconverged.end(), std::size_t{0});
  if (bad > 0)
    result.notes.push_back(std::to_string(bad) +
                           " pairwise fits hit the iteration limit during grid search");
  return result;
}

SvmModel fit_with_grid_search(const Matrix& raw, std::span<const int> labels,
                              const GridOptions& options, std::vector<std::string>* notes) {
  if (raw.rows() != labels.size()) fail(ErrorCode::kDimensionMismatch, "labels and rows differ");
  if (raw.empty()) fail(ErrorCode::kInvalidArgument, "no training data");
  const Scaler scaler = Scaler::fit(raw);
  const Matrix x = scaler.apply(raw);
  const auto grid = grid_search(x, labels, options);
  if (notes) notes->insert(notes->end(), grid.notes.begin(), grid.notes.end());
  SvmModel model = train_model(raw, labels, grid.C, grid.gamma, options.solver);
  model.seed = options.seed;
  model.cv_accuracy = grid.cv_accuracy;
  return model;
}

}  // namespace wristmood::svm
