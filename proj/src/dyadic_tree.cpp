#include "rwt/dyadic_tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rwt {
namespace {

BigInt pow2(std::uint64_t l) {
  BigInt r = 1;
  r <<= l;
  return r;
}

// Aligns a and b to the common exponent max(la, lb).
std::pair<BigInt, BigInt> aligned(const DyadicPoint& a, const DyadicPoint& b) {
  const auto l = std::max(a.exponent(), b.exponent());
  return {a.numerator() << (l - a.exponent()), b.numerator() << (l - b.exponent())};
}

}  // namespace

DyadicPoint::DyadicPoint(BigInt numerator, std::uint64_t exponent)
    : numerator_(std::move(numerator)), exponent_(exponent) {
  if (numerator_ < 0 || numerator_ > pow2(exponent_)) {
    throw std::invalid_argument("dyadic point outside [0, 1]");
  }
  canonicalize();
}

void DyadicPoint::canonicalize() {
  if (numerator_.is_zero()) {
    exponent_ = 0;
    return;
  }
  const auto trailing = static_cast<std::uint64_t>(boost::multiprecision::lsb(numerator_));
  const auto shift = std::min(trailing, exponent_);
  numerator_ >>= shift;
  exponent_ -= shift;
}

double DyadicPoint::to_double() const {
  if (numerator_.is_zero()) return 0.0;
  const auto msb = static_cast<std::int64_t>(boost::multiprecision::msb(numerator_));
  if (msb <= 62) {
    return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(numerator_)),
                      -static_cast<int>(std::min<std::uint64_t>(exponent_, 1 << 20)));
  }
  // Keep the 63 leading bits; the dropped tail is below double resolution.
  const auto shift = msb - 62;
  const BigInt head = numerator_ >> shift;
  const auto e = shift - static_cast<std::int64_t>(exponent_);
  return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(head)),
                    static_cast<int>(std::max<std::int64_t>(e, -(1 << 20))));
}

std::string DyadicPoint::to_string() const {
  std::ostringstream os;
  os << numerator_ << "/2^" << exponent_;
  return os.str();
}

std::strong_ordering operator<=>(const DyadicPoint& a, const DyadicPoint& b) {
  const auto [x, y] = aligned(a, b);
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

DyadicPoint operator-(const DyadicPoint& a, const DyadicPoint& b) {
  auto [x, y] = aligned(a, b);
  if (x < y) throw std::domain_error("negative dyadic difference");
  return DyadicPoint(x - y, std::max(a.exponent(), b.exponent()));
}

std::ostream& operator<<(std::ostream& os, const DyadicPoint& p) { return os << p.to_string(); }

NodeId::NodeId(std::uint64_t depth, BigInt index) : depth_(depth), index_(std::move(index)) {
  if (index_ < 1 || index_ > pow2(depth_)) {
    throw std::invalid_argument("node index outside [1, 2^depth]");
  }
}

std::string NodeId::to_string() const {
  std::ostringstream os;
  os << "(" << depth_ << "," << index_ << ")";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const NodeId& n) { return os << n.to_string(); }

Interval interval(const NodeId& node) {
  const auto l = node.depth();
  const BigInt& k = node.index();
  return {DyadicPoint(k - 1, l), DyadicPoint(2 * k - 1, l + 1), DyadicPoint(k, l)};
}

NodeId left_child(const NodeId& node) { return NodeId(node.depth() + 1, 2 * node.index() - 1); }

NodeId right_child(const NodeId& node) { return NodeId(node.depth() + 1, 2 * node.index()); }

NodeId parent(const NodeId& node) {
  if (node.is_root()) return node;
  return NodeId(node.depth() - 1, (node.index() + 1) / 2);
}

bool contains(const NodeId& node, double x) {
  const auto iv = interval(node);
  return iv.left.to_double() <= x && x <= iv.right.to_double();
}

double max_distance_to(const NodeId& node, double xstar) {
  const auto iv = interval(node);
  return std::max(std::abs(iv.left.to_double() - xstar), std::abs(iv.right.to_double() - xstar));
}

double max_distance_to(const NodeId& node, const DyadicPoint& xstar) {
  const auto iv = interval(node);
  const auto dist = [&](const DyadicPoint& p) { return p < xstar ? xstar - p : p - xstar; };
  return std::max(dist(iv.left), dist(iv.right)).to_double();
}

}  // namespace rwt
