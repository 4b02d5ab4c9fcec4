#include "wgb/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "wgb/errors.hpp"

namespace wgb {

Modulus Modulus::power(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("power modulus needs p in (0, 1]");
  Modulus g;
  g.kind_ = Kind::power;
  g.p_ = p;
  return g;
}

Modulus Modulus::table(std::vector<double> knots, std::vector<double> values) {
  if (knots.empty() || knots.size() != values.size())
    throw DomainError("modulus table needs matching, nonempty knots and values");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!(knots[i] > 0.0)) throw DomainError("modulus table knots must be > 0");
    if (i > 0 && !(knots[i] > knots[i - 1]))
      throw DomainError("modulus table knots must increase");
    if (!(values[i] >= 0.0)) throw DomainError("modulus table values must be >= 0");
  }
  Modulus g;
  g.kind_ = Kind::table;
  g.knots_ = std::move(knots);
  g.values_ = std::move(values);
  g.validate();
  return g;
}

Modulus Modulus::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("bad modulus spec '" + spec + "'");
  const std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
  if (kind == "power") {
    double p = 0.0;
    try {
      std::size_t used = 0;
      p = std::stod(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
    } catch (const std::exception&) {
      throw ConfigError("bad modulus exponent '" + arg + "'");
    }
    try {
      return power(p);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (kind == "table") {
    std::ifstream in(arg);
    if (!in) throw IoError("cannot open modulus table '" + arg + "'");
    std::vector<double> t, v;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      double a = 0.0, b = 0.0;
      std::string extra;
      if (!(ls >> a >> b) || (ls >> extra))
        throw IoError("modulus table line " + std::to_string(lineno) + " is malformed");
      t.push_back(a);
      v.push_back(b);
    }
    try {
      return table(std::move(t), std::move(v));
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("unknown modulus kind '" + kind + "'");
}

double Modulus::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  if (kind_ == Kind::power) return p_ == 1.0 ? t : std::pow(t, p_);
  if (t >= knots_.back()) return values_.back();
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  const std::size_t i = it - knots_.begin();
  const double t0 = i == 0 ? 0.0 : knots_[i - 1];
  const double v0 = i == 0 ? 0.0 : values_[i - 1];
  return v0 + (values_[i] - v0) * (t - t0) / (knots_[i] - t0);
}

double Modulus::slope_at_zero() const {
  if (kind_ == Kind::power)
    return p_ == 1.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return values_[0] / knots_[0];
}

bool Modulus::is_zero() const {
  if (kind_ == Kind::power) return false;
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

std::string Modulus::label() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == Kind::power)
    os << "power:" << p_;
  else
    os << "table:" << knots_.size();
  return os.str();
}

void Modulus::validate() const {
  const double top = kind_ == Kind::table ? 2.0 * knots_.back() : 10.0;
  double prev = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double v = (*this)(top * i / 1000.0);
    if (v < prev - 1e-12) throw DomainError("modulus is not nondecreasing");
    prev = v;
  }
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(0.0, top);
  for (int i = 0; i < 1000; ++i) {
    const double s = u(rng), t = u(rng);
    if ((*this)(s + t) > (*this)(s) + (*this)(t) + 1e-12)
      throw DomainError("modulus is not subadditive");
  }
}

}  // namespace wgb
