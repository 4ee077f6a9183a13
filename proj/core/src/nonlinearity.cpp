#include "nlspike/nonlinearity.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "nlspike/hermite.hpp"

namespace nlspike {

namespace {

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// d^k/dx^k tanh(x) = P_k(tanh x) with P_0(t) = t and P_{k+1} = P_k' (1 - t^2).
const std::vector<std::vector<double>>& tanh_derivative_polynomials() {
  static const auto table = [] {
    std::vector<std::vector<double>> p(kMaxDerivativeOrder + 1);
    p[0] = {0.0, 1.0};
    for (int k = 0; k < kMaxDerivativeOrder; ++k) {
      const auto& a = p[k];
      std::vector<double> da(a.size() > 1 ? a.size() - 1 : 1, 0.0);
      for (std::size_t j = 1; j < a.size(); ++j) da[j - 1] = j * a[j];
      std::vector<double> b(da.size() + 2, 0.0);
      for (std::size_t j = 0; j < da.size(); ++j) {
        b[j] += da[j];
        b[j + 2] -= da[j];
      }
      p[k + 1] = std::move(b);
    }
    return p;
  }();
  return table;
}

double horner(const std::vector<double>& c, double x) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

double polynomial_derivative(const std::vector<double>& c, int k, double x) {
  if (static_cast<std::size_t>(k) >= c.size()) return 0.0;
  double r = 0.0;
  for (std::size_t j = c.size(); j-- > static_cast<std::size_t>(k);) {
    double falling = 1.0;
    for (int m = 0; m < k; ++m) falling *= static_cast<double>(j - m);
    r = r * x + c[j] * falling;
  }
  return r;
}

}  // namespace

Nonlinearity Nonlinearity::identity() {
  Nonlinearity f;
  f.kind_ = NonlinearityKind::identity;
  return f;
}

Nonlinearity Nonlinearity::abs() {
  Nonlinearity f;
  f.kind_ = NonlinearityKind::abs;
  return f;
}

Nonlinearity Nonlinearity::sign() {
  Nonlinearity f;
  f.kind_ = NonlinearityKind::sign;
  return f;
}

Nonlinearity Nonlinearity::relu() {
  Nonlinearity f;
  f.kind_ = NonlinearityKind::relu;
  return f;
}

Nonlinearity Nonlinearity::tanh() {
  Nonlinearity f;
  f.kind_ = NonlinearityKind::tanh;
  return f;
}

Nonlinearity Nonlinearity::hermite(int k) {
  if (k < 0 || k > kMaxHermiteOrder) throw std::domain_error("Hermite order out of range");
  Nonlinearity f;
  f.kind_ = NonlinearityKind::hermite;
  f.order_ = k;
  return f;
}

Nonlinearity Nonlinearity::polynomial(std::vector<double> coefficients) {
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw std::invalid_argument("polynomial coefficients must be finite");
  }
  while (coefficients.size() > 1 && coefficients.back() == 0.0) coefficients.pop_back();
  if (coefficients.empty()) coefficients.push_back(0.0);
  if (coefficients.size() > static_cast<std::size_t>(kMaxDerivativeOrder) + 1) {
    throw std::invalid_argument("polynomial degree above 30 is not supported");
  }
  Nonlinearity f;
  f.kind_ = NonlinearityKind::polynomial;
  f.coefficients_ = std::move(coefficients);
  return f;
}

Nonlinearity Nonlinearity::shifted(const Nonlinearity& inner, double shift) {
  if (!std::isfinite(shift)) throw std::invalid_argument("shift must be finite");
  Nonlinearity f;
  f.kind_ = NonlinearityKind::shifted_composite;
  f.shift_ = shift;
  f.inner_ = std::make_shared<const Nonlinearity>(inner);
  return f;
}

Nonlinearity Nonlinearity::parse(std::string_view name) {
  if (name == "identity" || name == "linear") return identity();
  if (name == "abs") return abs();
  if (name == "sign") return sign();
  if (name == "relu") return relu();
  if (name == "tanh") return tanh();
  if (name.starts_with("hermite:")) return hermite(static_cast<int>(parse_number(name.substr(8))));
  if (name.starts_with("he") && name.size() > 2) {
    return hermite(static_cast<int>(parse_number(name.substr(2))));
  }
  if (name.starts_with("poly:")) {
    std::vector<double> c;
    std::string_view rest = name.substr(5);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      c.push_back(parse_number(rest.substr(0, comma)));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    return polynomial(std::move(c));
  }
  if (name.starts_with("shift:")) {
    const std::string_view rest = name.substr(6);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      throw std::invalid_argument("expected shift:<value>:<inner>");
    }
    return shifted(parse(rest.substr(colon + 1)), parse_number(rest.substr(0, colon)));
  }
  throw std::invalid_argument("unknown non-linearity '" + std::string(name) + "'");
}

std::string Nonlinearity::name() const {
  switch (kind_) {
    case NonlinearityKind::identity: return "identity";
    case NonlinearityKind::abs: return "abs";
    case NonlinearityKind::sign: return "sign";
    case NonlinearityKind::relu: return "relu";
    case NonlinearityKind::tanh: return "tanh";
    case NonlinearityKind::hermite: return "he" + std::to_string(order_);
    case NonlinearityKind::polynomial: {
      std::string out = "poly:";
      for (std::size_t j = 0; j < coefficients_.size(); ++j) {
        if (j) out += ',';
        out += format_number(coefficients_[j]);
      }
      return out;
    }
    case NonlinearityKind::shifted_composite:
      return "shift:" + format_number(shift_) + ":" + inner_->name();
  }
  return "?";
}

double Nonlinearity::operator()(double x) const {
  switch (kind_) {
    case NonlinearityKind::identity: return x;
    case NonlinearityKind::abs: return std::abs(x);
    case NonlinearityKind::sign: return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    case NonlinearityKind::relu: return x > 0.0 ? x : 0.0;
    case NonlinearityKind::tanh: return std::tanh(x);
    case NonlinearityKind::hermite: return hermite_polynomial(order_, x);
    case NonlinearityKind::polynomial: return horner(coefficients_, x);
    case NonlinearityKind::shifted_composite: return (*inner_)(x + shift_);
  }
  return 0.0;
}

int Nonlinearity::derivative_order_available() const {
  switch (kind_) {
    case NonlinearityKind::abs:
    case NonlinearityKind::sign:
    case NonlinearityKind::relu: return 0;
    case NonlinearityKind::shifted_composite: return inner_->derivative_order_available();
    default: return kMaxDerivativeOrder;
  }
}

double Nonlinearity::derivative(int k, double x) const {
  if (k < 0 || k > derivative_order_available()) {
    throw std::domain_error("derivative of order " + std::to_string(k) + " unavailable for " + name());
  }
  if (k == 0) return (*this)(x);
  switch (kind_) {
    case NonlinearityKind::identity: return k == 1 ? 1.0 : 0.0;
    case NonlinearityKind::tanh: return horner(tanh_derivative_polynomials()[k], std::tanh(x));
    case NonlinearityKind::hermite: {
      // He_n^{(k)} = n!/(n-k)! He_{n-k}.
      if (k > order_) return 0.0;
      double falling = 1.0;
      for (int m = 0; m < k; ++m) falling *= order_ - m;
      return falling * hermite_polynomial(order_ - k, x);
    }
    case NonlinearityKind::polynomial: return polynomial_derivative(coefficients_, k, x);
    case NonlinearityKind::shifted_composite: return inner_->derivative(k, x + shift_);
    default: break;
  }
  throw std::domain_error("derivative unavailable for " + name());
}

std::vector<double> Nonlinearity::breakpoints() const {
  switch (kind_) {
    case NonlinearityKind::abs:
    case NonlinearityKind::sign:
    case NonlinearityKind::relu: return {0.0};
    case NonlinearityKind::shifted_composite: {
      auto points = inner_->breakpoints();
      for (double& p : points) p -= shift_;
      return points;
    }
    default: return {};
  }
}

}  // namespace nlspike
