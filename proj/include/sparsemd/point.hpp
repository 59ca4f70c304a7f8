#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>

namespace sparsemd {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericError : std::runtime_error {
  NumericError(const std::string& what, double residual_, long iterations_)
      : std::runtime_error(what), residual(residual_), iterations(iterations_) {}
  double residual = 0.0;
  long iterations = 0;
};

/// A point of the ambient space: either a vector of dimension n or a dense
/// p-by-q matrix (p >= q). The shape is fixed at construction; all binary
/// operations require matching shapes.
class Point {
 public:
  Point() = default;

  static Point vector(Eigen::VectorXd v) { return Point(std::move(v), false); }
  static Point matrix(Eigen::MatrixXd m) { return Point(std::move(m), true); }
  static Point zeros_like(const Point& p) {
    return Point(Eigen::MatrixXd::Zero(p.rows(), p.cols()), p.is_matrix());
  }

  bool is_matrix() const { return matrix_; }
  Eigen::Index rows() const { return data_.rows(); }
  Eigen::Index cols() const { return data_.cols(); }
  Eigen::Index size() const { return data_.size(); }

  Eigen::MatrixXd& mat() { return data_; }
  const Eigen::MatrixXd& mat() const { return data_; }

  // Flattened (column-major) view of the coordinates.
  Eigen::Map<Eigen::VectorXd> flat() {
    return {data_.data(), data_.size()};
  }
  Eigen::Map<const Eigen::VectorXd> flat() const {
    return {data_.data(), data_.size()};
  }

  bool same_shape(const Point& o) const {
    return matrix_ == o.matrix_ && rows() == o.rows() && cols() == o.cols();
  }
  void require_same_shape(const Point& o) const {
    if (!same_shape(o)) throw DimensionError("point shapes do not match");
  }
  bool all_finite() const { return data_.allFinite(); }

  double dot(const Point& o) const {
    require_same_shape(o);
    return flat().dot(o.flat());
  }
  double l2() const { return data_.norm(); }

  Point& operator+=(const Point& o) {
    require_same_shape(o);
    data_ += o.data_;
    return *this;
  }
  Point& operator-=(const Point& o) {
    require_same_shape(o);
    data_ -= o.data_;
    return *this;
  }
  Point& operator*=(double s) {
    data_ *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) { a += b; return a; }
  friend Point operator-(Point a, const Point& b) { a -= b; return a; }
  friend Point operator*(double s, Point p) { p *= s; return p; }
  friend Point operator*(Point p, double s) { p *= s; return p; }

 private:
  Point(Eigen::MatrixXd d, bool m) : data_(std::move(d)), matrix_(m) {}
  Eigen::MatrixXd data_;
  bool matrix_ = false;
};

}  // namespace sparsemd
