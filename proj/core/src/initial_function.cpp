#include "mgc/initial_function.hpp"

#include <cmath>
#include <string>

#include "mgc/error.hpp"

namespace mgc {

InitialFunction InitialFunction::constant(double a) {
  return {Family::Constant, a, 0.0, 0.0, 0.0};
}

InitialFunction InitialFunction::affine(double a, double b) {
  return {Family::Affine, a, b, 0.0, 0.0};
}

InitialFunction InitialFunction::sinusoid(double a, double b, double c, double phase) {
  return {Family::Sinusoid, a, b, c, phase};
}

InitialFunction InitialFunction::exponential(double a, double b, double c, double drift) {
  return {Family::Exponential, a, b, c, drift};
}

double InitialFunction::value(double t) const {
  switch (family_) {
    case Family::Constant: return a_;
    case Family::Affine: return a_ + b_ * t;
    case Family::Sinusoid: return a_ + b_ * std::sin(c_ * t + d_);
    case Family::Exponential: return a_ + b_ * std::exp(c_ * t) + d_ * t;
  }
  return a_;
}

double InitialFunction::derivative(double t) const {
  switch (family_) {
    case Family::Constant: return 0.0;
    case Family::Affine: return b_;
    case Family::Sinusoid: return b_ * c_ * std::cos(c_ * t + d_);
    case Family::Exponential: return b_ * c_ * std::exp(c_ * t) + d_;
  }
  return 0.0;
}

InitialFunction InitialFunction::restricted_to(double lower) const {
  InitialFunction copy = *this;
  copy.lower_ = lower;
  return copy;
}

bool InitialFunction::nonnegative_on(double span, int samples) const {
  for (int i = 0; i < samples; ++i) {
    const double t = -span * static_cast<double>(i) / static_cast<double>(samples - 1);
    if (value(t) < 0.0) return false;
  }
  return true;
}

std::string_view to_string(InitialFunction::Family family) {
  switch (family) {
    case InitialFunction::Family::Constant: return "constant";
    case InitialFunction::Family::Affine: return "affine";
    case InitialFunction::Family::Sinusoid: return "sinusoid";
    case InitialFunction::Family::Exponential: return "exponential";
  }
  return "constant";
}

InitialFunction::Family parse_family(std::string_view name) {
  if (name == "constant") return InitialFunction::Family::Constant;
  if (name == "affine") return InitialFunction::Family::Affine;
  if (name == "sinusoid") return InitialFunction::Family::Sinusoid;
  if (name == "exponential") return InitialFunction::Family::Exponential;
  throw ConfigError("unknown initial-function family '" + std::string(name) + "'");
}

}  // namespace mgc
