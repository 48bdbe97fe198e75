#pragma once

// The helical turbulence function alpha(r) on [0,1]: constant, polynomial
// (degree <= 32), or the Stefani-Gerbeth profile
//   alpha(r) = C (-21.46 + 426.41 r^2 - 806.73 r^3 + 392.28 r^4),  C >= 0.
// Every representation expands to polynomial coefficients, so evaluation is
// Horner and the derivative is exact.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace dynspec {

struct ProfileNorms {
  double alpha_norm;        // max |alpha| on [0,1]
  double alpha_prime_norm;  // max |alpha'| on [0,1]
};

enum class ProfileKind { Constant, Polynomial, Stefani };

class AlphaProfile {
 public:
  static AlphaProfile constant(double a0) {
    return AlphaProfile(ProfileKind::Constant, {a0}, a0);
  }

  static AlphaProfile polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    if (coeffs.size() > 33)
      throw std::invalid_argument("AlphaProfile: polynomial degree must be <= 32");
    return AlphaProfile(ProfileKind::Polynomial, std::move(coeffs), 0.0);
  }

  static AlphaProfile stefani(double C) {
    if (!(C >= 0.0))
      throw std::invalid_argument("AlphaProfile: Stefani C must be >= 0");
    return AlphaProfile(ProfileKind::Stefani,
                        {C * -21.46, 0.0, C * 426.41, C * -806.73, C * 392.28},
                        C);
  }

  ProfileKind kind() const { return kind_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  double parameter() const { return param_; }

  double operator()(double r) const {
    check_domain(r);
    return horner(coeffs_, r);
  }

  double derivative(double r) const {
    check_domain(r);
    return horner(derivative_coefficients(), r);
  }

  std::vector<double> derivative_coefficients() const {
    std::vector<double> d;
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
      d.push_back(static_cast<double>(i) * coeffs_[i]);
    if (d.empty()) d.push_back(0.0);
    return d;
  }

  ProfileNorms norms() const {
    return {sup_norm(coeffs_), sup_norm(derivative_coefficients())};
  }

  AlphaProfile scaled(double c) const {
    switch (kind_) {
      case ProfileKind::Constant:
        return constant(c * param_);
      case ProfileKind::Stefani:
        if (c >= 0.0) return stefani(c * param_);
        break;
      case ProfileKind::Polynomial:
        break;
    }
    std::vector<double> sc = coeffs_;
    for (double& x : sc) x *= c;
    return polynomial(std::move(sc));
  }

  std::string describe() const;

 private:
  AlphaProfile(ProfileKind kind, std::vector<double> coeffs, double param)
      : kind_(kind), coeffs_(std::move(coeffs)), param_(param) {}

  static void check_domain(double r) {
    if (!(r >= 0.0 && r <= 1.0))
      throw std::domain_error("AlphaProfile: r must lie in [0, 1]");
  }

  static double horner(const std::vector<double>& c, double r) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * r + c[i];
    return v;
  }

  // max |p| on [0,1]: sample on a fine uniform mesh, then refine each local
  // maximum with golden-section search to bracket width 1e-12.
  static double sup_norm(const std::vector<double>& c) {
    constexpr int kSamples = 20001;
    auto absval = [&](double r) { return std::abs(horner(c, r)); };
    double best = 0.0;
    double prev2 = absval(0.0), prev1 = absval(1.0 / (kSamples - 1));
    best = std::max(prev2, prev1);
    for (int i = 2; i < kSamples; ++i) {
      const double r = static_cast<double>(i) / (kSamples - 1);
      const double v = absval(r);
      best = std::max(best, v);
      if (prev1 >= prev2 && prev1 >= v) {
        const double lo = static_cast<double>(i - 2) / (kSamples - 1);
        best = std::max(best, golden_max(absval, lo, r));
      }
      prev2 = prev1;
      prev1 = v;
    }
    // Maxima hugging an endpoint are not flagged by the interior test.
    const double h = 1.0 / (kSamples - 1);
    best = std::max(best, golden_max(absval, 0.0, 2.0 * h));
    best = std::max(best, golden_max(absval, 1.0 - 2.0 * h, 1.0));
    return best;
  }

  template <class F>
  static double golden_max(F&& f, double lo, double hi) {
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > 1e-12) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = f(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = f(x1);
      }
    }
    return std::max(f1, f2);
  }

  ProfileKind kind_;
  std::vector<double> coeffs_;
  double param_;
};

inline std::string AlphaProfile::describe() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind_) {
    case ProfileKind::Constant:
      os << "const:" << param_;
      break;
    case ProfileKind::Stefani:
      os << "stefani:" << param_;
      break;
    case ProfileKind::Polynomial: {
      os << "poly:";
      for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) os << ",";
        os << coeffs_[i];
      }
      break;
    }
  }
  return os.str();
}

// Profile document: {"kind": "const"|"poly"|"stefani", "value"|"coeffs"|"C": ...}
inline AlphaProfile profile_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "const") return AlphaProfile::constant(j.at("value").get<double>());
  if (kind == "poly")
    return AlphaProfile::polynomial(j.at("coeffs").get<std::vector<double>>());
  if (kind == "stefani") return AlphaProfile::stefani(j.at("C").get<double>());
  throw std::invalid_argument("profile document: unknown kind '" + kind + "'");
}

inline AlphaProfile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open profile file: " + path);
  nlohmann::json j;
  in >> j;
  return profile_from_json(j);
}

// Grammar: const:V | poly:c0,c1,... | stefani:C | @file
inline AlphaProfile parse_profile_spec(const std::string& spec) {
  if (!spec.empty() && spec[0] == '@') return load_profile_file(spec.substr(1));
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("profile spec must look like kind:args, got '" +
                                spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  auto to_double = [](const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size())
      throw std::invalid_argument("bad number in profile spec: '" + s + "'");
    return v;
  };
  if (kind == "const") return AlphaProfile::constant(to_double(args));
  if (kind == "stefani") return AlphaProfile::stefani(to_double(args));
  if (kind == "poly") {
    std::vector<double> coeffs;
    std::stringstream ss(args);
    std::string tok;
    while (std::getline(ss, tok, ',')) coeffs.push_back(to_double(tok));
    return AlphaProfile::polynomial(std::move(coeffs));
  }
  throw std::invalid_argument("unknown profile kind '" + kind + "'");
}

}  // namespace dynspec
