#pragma once

#include <compare>
#include <optional>
#include <string>

namespace kodaira {

// An element of Z ∪ {-∞}. Dimensions of empty objects and Kodaira-type
// dimensions of systems without sections are -∞; it is never encoded as -1.
class ExtInt {
 public:
  constexpr ExtInt(int v) : value_(v) {}  // NOLINT: implicit by intent
  static constexpr ExtInt neg_inf() { return ExtInt(); }

  constexpr bool is_finite() const { return finite_; }
  constexpr bool is_neg_inf() const { return !finite_; }
  // Only meaningful when finite.
  constexpr int value() const { return value_; }
  std::optional<int> as_optional() const {
    return finite_ ? std::optional<int>(value_) : std::nullopt;
  }

  friend constexpr bool operator==(ExtInt a, ExtInt b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(ExtInt a, ExtInt b) {
    if (!a.finite_ || !b.finite_) return a.finite_ <=> b.finite_;
    return a.value_ <=> b.value_;
  }
  // -∞ is absorbing.
  friend constexpr ExtInt operator+(ExtInt a, ExtInt b) {
    if (!a.finite_ || !b.finite_) return neg_inf();
    return ExtInt(a.value_ + b.value_);
  }

  std::string str() const { return finite_ ? std::to_string(value_) : "-inf"; }

 private:
  constexpr ExtInt() : finite_(false), value_(0) {}
  bool finite_ = true;
  int value_ = 0;
};

constexpr ExtInt max(ExtInt a, ExtInt b) { return a < b ? b : a; }
constexpr ExtInt min(ExtInt a, ExtInt b) { return a < b ? a : b; }

}  // namespace kodaira
