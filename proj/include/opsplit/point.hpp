#pragma once

#include <Eigen/Dense>
#include <initializer_list>

#include "opsplit/errors.hpp"

namespace opsplit {

/// An element of the finite-dimensional real Hilbert space H = R^d.
///
/// Thin value wrapper around Eigen::VectorXd that enforces two invariants:
/// every entry is finite on construction, and binary operations reject
/// mismatched dimensions. Immutable after construction.
class Point {
public:
    Point() = default;

    explicit Point(Eigen::VectorXd v) : v_(std::move(v)) { check_finite(v_); }

    Point(std::initializer_list<double> coords)
        : v_(Eigen::Map<const Eigen::VectorXd>(coords.begin(),
                                               static_cast<Eigen::Index>(coords.size()))) {
        check_finite(v_);
    }

    static Point zeros(Eigen::Index d) { return Point(Eigen::VectorXd::Zero(d)); }
    static Point ones(Eigen::Index d) { return Point(Eigen::VectorXd::Ones(d)); }

    Eigen::Index dim() const { return v_.size(); }
    double operator[](Eigen::Index i) const { return v_(i); }
    const Eigen::VectorXd& vec() const { return v_; }

    double norm() const { return v_.norm(); }
    double squared_norm() const { return v_.squaredNorm(); }

    double dot(const Point& o) const {
        require_same_dim(o);
        return v_.dot(o.v_);
    }

    Point operator+(const Point& o) const {
        require_same_dim(o);
        return Point(v_ + o.v_);
    }
    Point operator-(const Point& o) const {
        require_same_dim(o);
        return Point(v_ - o.v_);
    }
    Point operator-() const { return Point(-v_); }

    friend Point operator*(double s, const Point& p) { return Point(s * p.v_); }
    friend Point operator*(const Point& p, double s) { return Point(s * p.v_); }

    bool operator==(const Point& o) const { return v_.size() == o.v_.size() && v_ == o.v_; }

    static void check_finite(const Eigen::VectorXd& v) {
        if (!v.allFinite()) throw NonFiniteValue("point has NaN or Inf entries");
    }

private:
    void require_same_dim(const Point& o) const {
        if (v_.size() != o.v_.size())
            throw DimensionMismatch("point dimensions differ: " + std::to_string(v_.size()) +
                                    " vs " + std::to_string(o.v_.size()));
    }

    Eigen::VectorXd v_;
};

}  // namespace opsplit
