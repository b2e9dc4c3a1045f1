#include "lexdiar/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "lexdiar/errors.hpp"

namespace lexdiar {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxInverseIterations = 8;

std::string diagnostics(const Eigen::MatrixXd& m, const std::string& stage) {
  std::ostringstream out;
  out << "symmetric eigendecomposition failed in " << stage << " on " << m.rows() << "x" << m.cols()
      << " matrix: trace=" << m.trace() << " max|a|=" << (m.size() ? m.cwiseAbs().maxCoeff() : 0.0)
      << " finite=" << (m.allFinite() ? "yes" : "no");
  return out.str();
}

void check_input(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidInput("eigensolver needs a square matrix");
  if (!m.allFinite()) throw NumericalError(diagnostics(m, "input validation"));
}

// Unreduced block [begin, end) of a symmetric tridiagonal matrix.
struct Block {
  Eigen::Index begin;
  Eigen::Index end;
};

// LU factorisation with partial pivoting of (T - shift I) for one block,
// used to solve the inverse-iteration systems.
class ShiftedTridiagonalLu {
 public:
  ShiftedTridiagonalLu(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, Block b, double shift,
                       double tiny)
      : n_(b.end - b.begin), u0_(n_), u1_(n_), u2_(n_), mult_(n_), swapped_(static_cast<std::size_t>(n_)) {
    const auto d = [&](Eigen::Index i) { return diag(b.begin + i) - shift; };
    const auto e = [&](Eigen::Index i) { return off(b.begin + i); };
    const auto guard = [tiny](double p) { return p == 0.0 ? tiny : p; };

    // Working pivot row holds columns i and i+1.
    double row_d = d(0);
    double row_s = n_ > 1 ? e(0) : 0.0;
    for (Eigen::Index i = 0; i + 1 < n_; ++i) {
      const double sub = e(i);
      const double next_d = d(i + 1);
      const double next_s = i + 2 < n_ ? e(i + 1) : 0.0;
      if (std::abs(row_d) >= std::abs(sub)) {
        row_d = guard(row_d);
        swapped_[static_cast<std::size_t>(i)] = false;
        mult_(i) = sub / row_d;
        u0_(i) = row_d;
        u1_(i) = row_s;
        u2_(i) = 0.0;
        row_d = next_d - mult_(i) * row_s;
        row_s = next_s;
      } else {
        swapped_[static_cast<std::size_t>(i)] = true;
        mult_(i) = row_d / sub;
        u0_(i) = sub;
        u1_(i) = next_d;
        u2_(i) = next_s;
        row_d = row_s - mult_(i) * next_d;
        row_s = -mult_(i) * next_s;
      }
    }
    u0_(n_ - 1) = guard(row_d);
  }

  void solve_in_place(Eigen::VectorXd& x) const {
    for (Eigen::Index i = 0; i + 1 < n_; ++i) {
      if (swapped_[static_cast<std::size_t>(i)]) std::swap(x(i), x(i + 1));
      x(i + 1) -= mult_(i) * x(i);
    }
    for (Eigen::Index i = n_ - 1; i >= 0; --i) {
      double v = x(i);
      if (i + 1 < n_) v -= u1_(i) * x(i + 1);
      if (i + 2 < n_) v -= u2_(i) * x(i + 2);
      x(i) = v / u0_(i);
    }
  }

 private:
  Eigen::Index n_;
  Eigen::VectorXd u0_, u1_, u2_, mult_;
  std::vector<bool> swapped_;
};

double tridiagonal_residual(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, Block b, double lambda,
                            const Eigen::VectorXd& v) {
  const Eigen::Index n = b.end - b.begin;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double r = (diag(b.begin + i) - lambda) * v(i);
    if (i > 0) r += off(b.begin + i - 1) * v(i - 1);
    if (i + 1 < n) r += off(b.begin + i) * v(i + 1);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

struct BlockEigenvalue {
  double value;
  std::size_t block;
};

}  // namespace

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  check_input(m);
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError(diagnostics(m, "QL iteration"));
  const Eigen::VectorXd& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

// Householder tridiagonalisation, eigenvalues of each unreduced tridiagonal
// block, inverse iteration for the wanted eigenvectors (re-orthogonalised
// inside clusters of close eigenvalues) and back-transformation.
EigenPairs smallest_eigenpairs(const Eigen::MatrixXd& m, std::size_t count) {
  check_input(m);
  const Eigen::Index n = m.rows();
  if (count == 0 || count > static_cast<std::size_t>(n)) {
    throw InvalidInput("requested " + std::to_string(count) + " eigenpairs of a " + std::to_string(n) + "x" +
                       std::to_string(n) + " matrix");
  }

  const Eigen::Tridiagonalization<Eigen::MatrixXd> tri(m);
  const Eigen::VectorXd diag = tri.diagonal();
  const Eigen::VectorXd off = tri.subDiagonal();

  double norm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = std::abs(diag(i));
    if (i > 0) row += std::abs(off(i - 1));
    if (i + 1 < n) row += std::abs(off(i));
    norm = std::max(norm, row);
  }
  const double scale = std::max(norm, std::numeric_limits<double>::min());

  std::vector<Block> blocks;
  Eigen::Index begin = 0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (std::abs(off(i)) <= kEps * (std::abs(diag(i)) + std::abs(diag(i + 1)))) {
      blocks.push_back({begin, i + 1});
      begin = i + 1;
    }
  }
  blocks.push_back({begin, n});

  std::vector<BlockEigenvalue> spectrum;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Eigen::Index len = blocks[b].end - blocks[b].begin;
    if (len == 1) {
      spectrum.push_back({diag(blocks[b].begin), b});
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> block_solver;
    block_solver.computeFromTridiagonal(diag.segment(blocks[b].begin, len), off.segment(blocks[b].begin, len - 1),
                                        Eigen::EigenvaluesOnly);
    if (block_solver.info() != Eigen::Success) throw NumericalError(diagnostics(m, "tridiagonal QL"));
    for (Eigen::Index j = 0; j < len; ++j) spectrum.push_back({block_solver.eigenvalues()(j), b});
  }
  std::stable_sort(spectrum.begin(), spectrum.end(),
                   [](const BlockEigenvalue& a, const BlockEigenvalue& b) { return a.value < b.value; });
  spectrum.resize(count);

  const double cluster_gap = 1e-3 * scale;
  const double shift_step = 10.0 * kEps * scale;
  const double target = 100.0 * static_cast<double>(n) * kEps * scale;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> start(-1.0, 1.0);

  Eigen::MatrixXd tri_vectors = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(count));
  EigenPairs pairs;
  pairs.values.resize(static_cast<Eigen::Index>(count));

  std::vector<std::vector<std::size_t>> done_in_block(blocks.size());
  std::vector<double> last_shift(blocks.size(), -std::numeric_limits<double>::infinity());
  std::vector<double> last_value(blocks.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < count; ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    const std::size_t b = spectrum[j].block;
    const Block& block = blocks[b];
    const Eigen::Index len = block.end - block.begin;
    const double lambda = spectrum[j].value;
    pairs.values(col) = lambda;

    if (len == 1) {
      tri_vectors(block.begin, col) = 1.0;
      done_in_block[b].push_back(j);
      continue;
    }

    // Members of a cluster share an invariant subspace; keep shifts apart
    // and orthogonalise against the earlier members.
    auto& cluster = done_in_block[b];
    if (lambda - last_value[b] > cluster_gap) cluster.clear();
    double shift = lambda;
    if (!cluster.empty()) shift = std::max(shift, last_shift[b] + shift_step);
    last_shift[b] = shift;
    last_value[b] = lambda;

    const ShiftedTridiagonalLu lu(diag, off, block, shift, kEps * scale);
    Eigen::VectorXd v(len);
    for (Eigen::Index i = 0; i < len; ++i) v(i) = start(rng);
    v.normalize();
    bool converged = false;
    for (int iter = 0; iter < kMaxInverseIterations; ++iter) {
      lu.solve_in_place(v);
      for (const std::size_t prev : cluster) {
        const auto p = tri_vectors.col(static_cast<Eigen::Index>(prev)).segment(block.begin, len);
        v -= p.dot(v) * p;
      }
      const double length = v.norm();
      if (!(length > 0.0) || !std::isfinite(length)) throw NumericalError(diagnostics(m, "inverse iteration"));
      v /= length;
      if (converged) break;
      converged = tridiagonal_residual(diag, off, block, lambda, v) <= target;
    }
    if (!converged) throw NumericalError(diagnostics(m, "inverse iteration convergence"));
    tri_vectors.col(col).segment(block.begin, len) = v;
    cluster.push_back(j);
  }

  pairs.vectors = tri.matrixQ() * tri_vectors;
  return pairs;
}

}  // namespace lexdiar
