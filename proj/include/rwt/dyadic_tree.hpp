#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace rwt {

using BigInt = boost::multiprecision::cpp_int;

/// Exact point m / 2^l of [0, 1].
///
/// Always held in canonical form: the numerator is odd, or the point is one
/// of the endpoints 0 = 0/2^0 and 1 = 1/2^0. Two points are equal iff their
/// (numerator, exponent) pairs are equal.
class DyadicPoint {
 public:
  DyadicPoint() = default;
  /// Builds m / 2^l and reduces it; throws std::invalid_argument unless 0 <= m <= 2^l.
  DyadicPoint(BigInt numerator, std::uint64_t exponent);

  static DyadicPoint zero() { return {}; }
  static DyadicPoint one() { return DyadicPoint(1, 0); }
  /// 2^{-l}
  static DyadicPoint pow2_inverse(std::uint64_t l) { return DyadicPoint(1, l); }

  const BigInt& numerator() const { return numerator_; }
  std::uint64_t exponent() const { return exponent_; }

  bool is_zero() const { return numerator_.is_zero(); }
  bool is_one() const { return exponent_ == 0 && numerator_ == 1; }

  /// Nearest-ish double; exact while the exponent is at most 52.
  double to_double() const;
  std::string to_string() const;

  friend bool operator==(const DyadicPoint&, const DyadicPoint&) = default;
  friend std::strong_ordering operator<=>(const DyadicPoint& a, const DyadicPoint& b);

  /// a - b for a >= b; throws std::domain_error otherwise.
  friend DyadicPoint operator-(const DyadicPoint& a, const DyadicPoint& b);

 private:
  void canonicalize();

  BigInt numerator_ = 0;
  std::uint64_t exponent_ = 0;
};

std::ostream& operator<<(std::ostream& os, const DyadicPoint& p);

/// Node N_{k,l} of the infinite dyadic interval tree: the interval
/// [(k-1)/2^l, k/2^l]. The root is (0, 1).
class NodeId {
 public:
  NodeId() = default;
  /// Throws std::invalid_argument unless 1 <= index <= 2^depth.
  NodeId(std::uint64_t depth, BigInt index);

  static NodeId root() { return {}; }

  std::uint64_t depth() const { return depth_; }
  const BigInt& index() const { return index_; }
  bool is_root() const { return depth_ == 0; }

  std::string to_string() const;

  friend bool operator==(const NodeId&, const NodeId&) = default;

 private:
  std::uint64_t depth_ = 0;
  BigInt index_ = 1;
};

std::ostream& operator<<(std::ostream& os, const NodeId& n);

struct Interval {
  DyadicPoint left;
  DyadicPoint mid;
  DyadicPoint right;
};

Interval interval(const NodeId& node);
NodeId left_child(const NodeId& node);
NodeId right_child(const NodeId& node);
/// The parent of the root is the root.
NodeId parent(const NodeId& node);

bool contains(const NodeId& node, double x);

/// max over the node's interval of |x - xstar|, attained at an endpoint.
double max_distance_to(const NodeId& node, double xstar);
double max_distance_to(const NodeId& node, const DyadicPoint& xstar);

}  // namespace rwt
