#include "specround/instance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specround/error.hpp"

namespace specround {

namespace {

void validate_rows(const std::optional<LinearRows>& rows, Eigen::Index m, const char* name) {
  if (!rows) return;
  if (rows->rows.size() != rows->rhs.size()) {
    throw Error(ErrorKind::InvalidArgument, std::string(name) + " row count does not match rhs length");
  }
  for (const auto& row : rows->rows) {
    if (static_cast<Eigen::Index>(row.size()) != m) {
      throw Error(ErrorKind::InvalidArgument, std::string(name) + " row length must equal m");
    }
    for (double a : row) {
      if (!std::isfinite(a) || a < 0.0) {
        throw Error(ErrorKind::InvalidArgument, std::string(name) + " rows must be finite and nonnegative");
      }
    }
  }
  for (double b : rows->rhs) {
    if (!std::isfinite(b) || b < 0.0) {
      throw Error(ErrorKind::InvalidArgument, std::string(name) + " rhs must be finite and nonnegative");
    }
  }
}

}  // namespace

void VectorInstance::validate() const {
  if (static_cast<Eigen::Index>(x.size()) != m() || static_cast<Eigen::Index>(c.size()) != m()) {
    throw Error(ErrorKind::InvalidArgument, "x and c must have one entry per vector");
  }
  if (!vectors.allFinite()) throw Error(ErrorKind::InvalidArgument, "vectors must be finite");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "x[" + std::to_string(i) + "] outside [0,1]");
    }
    if (!std::isfinite(c[i]) || c[i] < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "c[" + std::to_string(i) + "] must be finite and nonnegative");
    }
  }
  validate_rows(packing, m(), "packing");
  validate_rows(covering, m(), "covering");
}

linalg::SymMatrix VectorInstance::moment() const { return linalg::SymMatrix::weighted_gram(vectors, x); }

linalg::SymMatrix VectorInstance::selection_moment(const std::vector<int>& selected) const {
  linalg::Matrix acc = linalg::Matrix::Zero(n(), n());
  for (int i : selected) acc.noalias() += vectors.col(i) * vectors.col(i).transpose();
  return linalg::SymMatrix(acc);
}

double VectorInstance::isotropy_error() const {
  return linalg::op_norm(moment() - linalg::SymMatrix::identity(n()));
}

double VectorInstance::fractional_cost() const {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += c[i] * x[i];
  return s;
}

double VectorInstance::selection_cost(const std::vector<int>& selected) const {
  double s = 0.0;
  for (int i : selected) s += c[static_cast<std::size_t>(i)];
  return s;
}

double VectorInstance::max_cost() const {
  return c.empty() ? 0.0 : *std::max_element(c.begin(), c.end());
}

VectorInstance VectorInstance::restrict_to(const std::vector<int>& indices) const {
  VectorInstance out;
  out.vectors.resize(n(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto i = static_cast<std::size_t>(indices[k]);
    out.vectors.col(static_cast<Eigen::Index>(k)) = vectors.col(indices[k]);
    out.x.push_back(x[i]);
    out.c.push_back(c[i]);
  }
  auto restrict_rows = [&](const std::optional<LinearRows>& rows) -> std::optional<LinearRows> {
    if (!rows) return std::nullopt;
    LinearRows r;
    r.rhs = rows->rhs;
    for (const auto& row : rows->rows) {
      std::vector<double> sub;
      sub.reserve(indices.size());
      for (int i : indices) sub.push_back(row[static_cast<std::size_t>(i)]);
      r.rows.push_back(std::move(sub));
    }
    return r;
  };
  out.packing = restrict_rows(packing);
  out.covering = restrict_rows(covering);
  return out;
}

std::vector<int> indicator(const std::vector<int>& selected, Eigen::Index m) {
  std::vector<int> z(static_cast<std::size_t>(m), 0);
  for (int i : selected) z[static_cast<std::size_t>(i)] = 1;
  return z;
}

}  // namespace specround
