#include "strav/problems.hpp"

#include <cmath>
#include <charconv>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "strav/rng.hpp"

namespace strav {

double QuadraticSystem::function_value(std::size_t i, const Vector& x) const {
  Vector gx = curvature[i].multiply(x);
  return dot(gx, gx) + dot(linear[i], x) + offset[i];
}

Vector QuadraticSystem::subgradient(std::size_t i, const Vector& x) const {
  // Gradient of the differentiable quadratic: 2 G^T G x + c.
  Vector gx = curvature[i].multiply(x);
  Vector grad = curvature[i].multiply_transpose(gx);
  for (std::size_t j = 0; j < grad.size(); ++j) {
    grad[j] = 2.0 * grad[j] + linear[i][j];
  }
  return grad;
}

double QuadraticSystem::max_violation(const Vector& x) const {
  double v = 0.0;
  for (std::size_t i = 0; i < count(); ++i) {
    v = std::max(v, function_value(i, x));
  }
  return v;
}

double LinearFeasibility::max_violation(const Vector& x) const {
  return norm_inf(subtract(coeffs.multiply(x), rhs));
}

std::vector<std::pair<std::size_t, std::size_t>>
partition_rows(std::size_t m, std::size_t p) {
  if (p == 0 || p > m) {
    throw std::invalid_argument("partition_rows: p outside [1, m]");
  }
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  blocks.reserve(p);
  const std::size_t base = m / p;
  const std::size_t extra = m % p;
  std::size_t begin = 0;
  for (std::size_t t = 0; t < p; ++t) {
    const std::size_t len = base + (t < extra ? 1 : 0);
    blocks.emplace_back(begin, begin + len);
    begin += len;
  }
  return blocks;
}

QuadraticSystem gen_quadratic(std::uint64_t seed, std::size_t n,
                              std::size_t count, double margin) {
  if (n == 0 || count == 0) {
    throw std::invalid_argument("gen_quadratic: empty shape");
  }
  if (margin < 0.0) {
    throw std::invalid_argument("gen_quadratic: negative margin");
  }
  SplitMix64 rng(seed);
  QuadraticSystem q;
  q.dim = n;
  q.seed = seed;
  q.margin = margin;
  const Vector y(n, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> entries(n * n);
    for (double& e : entries) e = rng.uniform(-1.0, 1.0);
    Matrix g(n, n, std::move(entries));
    Vector c(n);
    for (double& e : c) e = rng.uniform(-1.0, 1.0);
    Vector gy = g.multiply(y);
    const double d = -(dot(gy, gy) + dot(c, y)) - margin;
    q.curvature.push_back(std::move(g));
    q.linear.push_back(std::move(c));
    q.offset.push_back(d);
  }
  return q;
}

Vector gen_start(std::uint64_t seed, std::size_t n) {
  if (n == 0) throw std::invalid_argument("gen_start: empty shape");
  SplitMix64 rng(seed);
  Vector x(n);
  for (double& e : x) e = rng.uniform(-10.0, 10.0);
  return x;
}

LinearFeasibility gen_consistent_linear(std::uint64_t seed, std::size_t m,
                                        std::size_t n, std::size_t p,
                                        LinearFeasibility::WeightMode mode) {
  if (m == 0 || n == 0) {
    throw std::invalid_argument("gen_consistent_linear: empty shape");
  }
  SplitMix64 rng(seed);
  std::vector<double> entries(m * n);
  for (double& e : entries) e = rng.uniform(-1.0, 1.0);
  LinearFeasibility l;
  l.coeffs = Matrix(m, n, std::move(entries));
  l.certificate.resize(n);
  for (double& e : l.certificate) e = rng.uniform(-1.0, 1.0);
  l.rhs = l.coeffs.multiply(l.certificate);
  l.blocks = partition_rows(m, p);
  l.weight_mode = mode;
  l.seed = seed;
  return l;
}

std::vector<RelaxedCutter>
build_operators(std::shared_ptr<const QuadraticSystem> system,
                std::span<const double> alphas) {
  if (!system) {
    throw std::invalid_argument("build_operators: null system");
  }
  if (alphas.size() != system->count()) {
    throw std::invalid_argument(
        "build_operators: one alpha per function required");
  }
  std::vector<RelaxedCutter> ops;
  ops.reserve(system->count());
  for (std::size_t i = 0; i < system->count(); ++i) {
    ConvexFunctionHandle fn;
    fn.dim = system->dim;
    fn.eval = [system, i](const Vector& x) {
      return system->function_value(i, x);
    };
    fn.subgrad = [system, i](const Vector& x) {
      return system->subgradient(i, x);
    };
    ops.push_back(make_subgradient(std::move(fn), alphas[i]));
  }
  return ops;
}

std::vector<RelaxedCutter> build_operators(const LinearFeasibility& problem,
                                           std::span<const double> alphas) {
  if (alphas.size() != problem.blocks.size()) {
    throw std::invalid_argument(
        "build_operators: one alpha per block required");
  }
  std::vector<RelaxedCutter> ops;
  ops.reserve(problem.blocks.size());
  const std::size_t n = problem.coeffs.cols();
  for (std::size_t t = 0; t < problem.blocks.size(); ++t) {
    const auto [begin, end] = problem.blocks[t];
    const std::size_t rows = end - begin;
    Matrix a(rows, n);
    Vector b(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) = problem.coeffs(begin + i, j);
      }
      b[i] = problem.rhs[begin + i];
    }
    Matrix w = Matrix::identity(rows);
    if (problem.weight_mode == LinearFeasibility::WeightMode::RowInverseNormSq) {
      for (std::size_t i = 0; i < rows; ++i) {
        double rn2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) rn2 += a(i, j) * a(i, j);
        if (rn2 == 0.0) {
          throw std::invalid_argument("build_operators: all-zero row");
        }
        w(i, i) = 1.0 / rn2;
      }
    }
    ops.push_back(
        make_block_linear(std::move(a), std::move(w), std::move(b), alphas[t]));
  }
  return ops;
}

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, ptr - buf);
}

void put_row(std::ostream& out, const double* row, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0) out.put(' ');
    put(out, row[j]);
  }
  out.put('\n');
}

double read_value(std::istream& in, const char* what) {
  double v = 0.0;
  if (!(in >> v)) {
    throw std::invalid_argument(std::string("instance parse: missing ") +
                                what);
  }
  return v;
}

std::uint64_t read_u64(std::istream& in, const char* what) {
  std::uint64_t v = 0;
  if (!(in >> v)) {
    throw std::invalid_argument(std::string("instance parse: missing ") +
                                what);
  }
  return v;
}

void expect_token(std::istream& in, const std::string& expected) {
  std::string tok;
  if (!(in >> tok) || tok != expected) {
    throw std::invalid_argument("instance parse: expected '" + expected + "'");
  }
}

} // namespace

std::string to_text(const QuadraticSystem& q) {
  std::ostringstream out;
  out << "strav-instance quadratic 1\n";
  out << "n " << q.dim << "\ncount " << q.count() << "\nseed " << q.seed
      << "\nmargin ";
  put(out, q.margin);
  out.put('\n');
  for (std::size_t i = 0; i < q.count(); ++i) {
    for (std::size_t r = 0; r < q.dim; ++r) {
      put_row(out, q.curvature[i].entries().data() + r * q.dim, q.dim);
    }
    put_row(out, q.linear[i].data(), q.dim);
    put(out, q.offset[i]);
    out.put('\n');
  }
  return std::move(out).str();
}

std::string to_text(const LinearFeasibility& l) {
  std::ostringstream out;
  const std::size_t m = l.coeffs.rows();
  const std::size_t n = l.coeffs.cols();
  out << "strav-instance linear 1\n";
  out << "m " << m << "\nn " << n << "\nseed " << l.seed << "\nblocks "
      << l.blocks.size() << "\nweights "
      << (l.weight_mode == LinearFeasibility::WeightMode::Identity
              ? "identity"
              : "row-inverse-normsq")
      << "\n";
  for (std::size_t i = 0; i < m; ++i) {
    put_row(out, l.coeffs.entries().data() + i * n, n);
  }
  put_row(out, l.rhs.data(), m);
  put_row(out, l.certificate.data(), n);
  return std::move(out).str();
}

QuadraticSystem quadratic_from_text(std::istream& in) {
  expect_token(in, "strav-instance");
  expect_token(in, "quadratic");
  expect_token(in, "1");
  expect_token(in, "n");
  const auto n = static_cast<std::size_t>(read_u64(in, "n"));
  expect_token(in, "count");
  const auto count = static_cast<std::size_t>(read_u64(in, "count"));
  expect_token(in, "seed");
  const std::uint64_t seed = read_u64(in, "seed");
  expect_token(in, "margin");
  const double margin = read_value(in, "margin");

  QuadraticSystem q;
  q.dim = n;
  q.seed = seed;
  q.margin = margin;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> entries(n * n);
    for (double& e : entries) e = read_value(in, "curvature entry");
    q.curvature.emplace_back(n, n, std::move(entries));
    Vector c(n);
    for (double& e : c) e = read_value(in, "linear entry");
    q.linear.push_back(std::move(c));
    q.offset.push_back(read_value(in, "offset"));
  }
  return q;
}

LinearFeasibility linear_from_text(std::istream& in) {
  expect_token(in, "strav-instance");
  expect_token(in, "linear");
  expect_token(in, "1");
  expect_token(in, "m");
  const auto m = static_cast<std::size_t>(read_u64(in, "m"));
  expect_token(in, "n");
  const auto n = static_cast<std::size_t>(read_u64(in, "n"));
  expect_token(in, "seed");
  const std::uint64_t seed = read_u64(in, "seed");
  expect_token(in, "blocks");
  const auto p = static_cast<std::size_t>(read_u64(in, "blocks"));
  expect_token(in, "weights");
  std::string mode;
  if (!(in >> mode) || (mode != "identity" && mode != "row-inverse-normsq")) {
    throw std::invalid_argument("instance parse: bad weight mode");
  }

  LinearFeasibility l;
  std::vector<double> entries(m * n);
  for (double& e : entries) e = read_value(in, "matrix entry");
  l.coeffs = Matrix(m, n, std::move(entries));
  l.rhs.resize(m);
  for (double& e : l.rhs) e = read_value(in, "rhs entry");
  l.certificate.resize(n);
  for (double& e : l.certificate) e = read_value(in, "certificate entry");
  l.blocks = partition_rows(m, p);
  l.weight_mode = mode == "identity"
                      ? LinearFeasibility::WeightMode::Identity
                      : LinearFeasibility::WeightMode::RowInverseNormSq;
  l.seed = seed;
  return l;
}

} // namespace strav
