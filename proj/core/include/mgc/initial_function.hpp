#pragma once

#include <limits>
#include <string_view>

namespace mgc {

/// History x(t) for t <= 0, drawn from a small closed-form family:
///   constant     a
///   affine       a + b t
///   sinusoid     a + b sin(c t + d)
///   exponential  a + b e^(c t) + d t
/// The fourth coefficient d is a phase for sinusoids and a linear drift for
/// exponentials; it defaults to 0.
class InitialFunction {
 public:
  enum class Family { Constant, Affine, Sinusoid, Exponential };

  static InitialFunction constant(double a);
  static InitialFunction affine(double a, double b);
  static InitialFunction sinusoid(double a, double b, double c, double phase = 0.0);
  static InitialFunction exponential(double a, double b, double c, double drift = 0.0);

  [[nodiscard]] double value(double t) const;
  [[nodiscard]] double derivative(double t) const;
  [[nodiscard]] double operator()(double t) const { return value(t); }

  [[nodiscard]] Family family() const { return family_; }
  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] double b() const { return b_; }
  [[nodiscard]] double c() const { return c_; }
  [[nodiscard]] double d() const { return d_; }

  /// Earliest time the history is defined at. The closed forms are defined
  /// everywhere; a restricted copy models a history that only covers part of
  /// the past.
  [[nodiscard]] double lower_bound() const { return lower_; }
  [[nodiscard]] InitialFunction restricted_to(double lower) const;

  /// Sampled check of phi >= 0 on [-span, 0] at `samples` points.
  [[nodiscard]] bool nonnegative_on(double span, int samples = 1000) const;

  friend bool operator==(const InitialFunction&, const InitialFunction&) = default;

 private:
  InitialFunction(Family family, double a, double b, double c, double d)
      : family_(family), a_(a), b_(b), c_(c), d_(d) {}

  Family family_;
  double a_ = 0.0;
  double b_ = 0.0;
  double c_ = 0.0;
  double d_ = 0.0;
  double lower_ = -std::numeric_limits<double>::infinity();
};

[[nodiscard]] std::string_view to_string(InitialFunction::Family family);
/// Throws ConfigError on an unknown family name.
[[nodiscard]] InitialFunction::Family parse_family(std::string_view name);

}  // namespace mgc
