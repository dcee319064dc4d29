#include "phasegeo/potential.hpp"

#include <algorithm>
#include <cmath>

#include "phasegeo/errors.hpp"

namespace phasegeo {

using nlohmann::json;

namespace {

json state_to_json(const State& s) {
  json a = json::array();
  for (Eigen::Index i = 0; i < s.size(); ++i) a.push_back(s(i));
  return a;
}

State state_from_json(const json& j) {
  if (!j.is_array() || j.empty() || j.size() > kMaxStateDim) {
    throw ConfigError("expected a numeric array of length 1.." + std::to_string(kMaxStateDim));
  }
  State s(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) s(i) = j[i].get<double>();
  return s;
}

Point point_from_json(const json& j) {
  if (!j.is_array() || j.empty() || j.size() > kMaxSpaceDim) {
    throw ConfigError("expected a domain point of length 1 or 2");
  }
  Point s(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) s(i) = j[i].get<double>();
  return s;
}

double get_or(const json& j, const char* key, double fallback) {
  if (j.is_object() && j.contains(key) && !j.at(key).is_null()) return j.at(key).get<double>();
  return fallback;
}

std::optional<double> get_opt(const json& j, const char* key) {
  if (j.is_object() && j.contains(key) && !j.at(key).is_null()) return j.at(key).get<double>();
  return std::nullopt;
}

Box domain_from(const json& options, Box fallback) {
  if (!options.is_object() || !options.contains("domain")) return fallback;
  const auto& d = options.at("domain");
  return Box(point_from_json(d.at("lo")), point_from_json(d.at("hi")));
}

// Quintic smoothstep: C^2, 0 for s <= 0, 1 for s >= 1.
double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (s * (6.0 * s - 15.0) + 10.0);
}

double smoothstep_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return 30.0 * s * s * (s - 1.0) * (s - 1.0);
}

// W0(u) = c (u - a)^2 (u - b)^2 and its derivative.
struct QuarticWell {
  double a = -1.0, b = 1.0, c = 1.0;
  double value(double u) const {
    const double d = (u - a) * (u - b);
    return c * d * d;
  }
  double derivative(double u) const {
    return 2.0 * c * (u - a) * (u - b) * (2.0 * u - a - b);
  }
  double alpha() const { return c * (b - a) * (b - a); }
};

QuarticWell quartic_from(const json& params) {
  QuarticWell q;
  q.a = get_or(params, "a", -1.0);
  q.b = get_or(params, "b", 1.0);
  q.c = get_or(params, "c", 1.0);
  if (!(q.a < q.b) || !(q.c > 0.0)) throw ParameterError("double well: need a < b and c > 0");
  return q;
}

const json& params_of(const json& options) {
  static const json empty = json::object();
  if (options.is_object() && options.contains("params")) return options.at("params");
  return empty;
}

const json& constants_of(const json& options) {
  static const json empty = json::object();
  if (options.is_object() && options.contains("constants")) return options.at("constants");
  return empty;
}

std::vector<WellMap> wells_from(const json& options, std::vector<WellMap> fallback) {
  if (!options.is_object() || !options.contains("wells")) return fallback;
  std::vector<WellMap> out;
  for (const auto& w : options.at("wells")) out.push_back(WellMap::from_json(w));
  return out;
}

// --------------------------------------------------------------------------

class ScalarDoubleWell final : public MultiWellPotential {
 public:
  ScalarDoubleWell(Box domain, QuarticWell w, const json& constants)
      : MultiWellPotential("scalar-double-well", std::move(domain),
                           {WellMap::constant(make_state({w.a})),
                            WellMap::constant(make_state({w.b}))}),
        w_(w) {
    constants_.alpha = {w.alpha(), w.alpha()};
    constants_.r = get_or(constants, "r", 0.25 * (w.b - w.a));
    constants_.S = get_or(constants, "S", w.c);
    constants_.R = get_or(constants, "R", 2.0 * std::max({1.0, std::abs(w.a), std::abs(w.b)}));
    constants_.eta = get_or(constants, "eta", std::numeric_limits<double>::quiet_NaN());
    settle_separation(get_opt(constants, "delta"));
  }

  double alpha(int, const Point&) const override { return w_.alpha(); }
  double value(const Point&, const State& p) const override { return w_.value(p(0)); }
  State gradient(const Point&, const State& p) const override {
    return make_state({w_.derivative(p(0))});
  }

 protected:
  json params() const override { return {{"a", w_.a}, {"b", w_.b}, {"c", w_.c}}; }

 private:
  QuarticWell w_;
};

class ModulatedDoubleWell final : public MultiWellPotential {
 public:
  ModulatedDoubleWell(Box domain, QuarticWell w, double h0, double h2, const json& constants)
      : MultiWellPotential("modulated", std::move(domain),
                           {WellMap::constant(make_state({w.a})),
                            WellMap::constant(make_state({w.b}))}),
        w_(w),
        h0_(h0),
        h2_(h2) {
    if (!(h0 > 0.0) || h2 < 0.0) throw ParameterError("modulated: need h0 > 0 and h2 >= 0");
    const Point c = domain_.center();
    constants_.alpha = {alpha(0, c), alpha(1, c)};
    constants_.r = get_or(constants, "r", 0.25 * (w.b - w.a));
    constants_.S = get_or(constants, "S", w.c * h0);
    constants_.R = get_or(constants, "R", 2.0 * std::max({1.0, std::abs(w.a), std::abs(w.b)}));
    constants_.eta = get_or(constants, "eta", std::numeric_limits<double>::quiet_NaN());
    settle_separation(get_opt(constants, "delta"));
  }

  double modulation(const Point& x) const { return h0_ + h2_ * x.squaredNorm(); }
  double alpha(int, const Point& x) const override { return modulation(x) * w_.alpha(); }
  double value(const Point& x, const State& p) const override {
    return modulation(x) * w_.value(p(0));
  }
  State gradient(const Point& x, const State& p) const override {
    return make_state({modulation(x) * w_.derivative(p(0))});
  }

 protected:
  json params() const override {
    return {{"a", w_.a}, {"b", w_.b}, {"c", w_.c}, {"h0", h0_}, {"h2", h2_}};
  }

 private:
  QuarticWell w_;
  double h0_, h2_;
};

class ProductDistance final : public MultiWellPotential {
 public:
  ProductDistance(Box domain, std::vector<WellMap> wells, double c, const json& constants)
      : MultiWellPotential("product-distance", std::move(domain), std::move(wells)), c_(c) {
    if (num_wells() != 2) throw ParameterError("product-distance: exactly two wells required");
    if (!(c > 0.0)) throw ParameterError("product-distance: need c > 0");
    const Point x = domain_.center();
    constants_.alpha = {alpha(0, x), alpha(1, x)};
    constants_.r = get_or(constants, "r", 0.0);
    constants_.S = get_or(constants, "S", c);
    double reach = 0.0;
    for (const auto& y : domain_.sample_grid(9)) {
      for (int i = 0; i < 2; ++i) reach = std::max(reach, well(i, y).norm());
    }
    constants_.R = get_or(constants, "R", 2.0 * std::max(1.0, reach + 1.0));
    constants_.eta = get_or(constants, "eta", std::numeric_limits<double>::quiet_NaN());
    settle_separation(get_opt(constants, "delta"));
  }

  double alpha(int, const Point& x) const override {
    return c_ * (well(0, x) - well(1, x)).squaredNorm();
  }
  double value(const Point& x, const State& p) const override {
    return c_ * (p - well(0, x)).squaredNorm() * (p - well(1, x)).squaredNorm();
  }
  State gradient(const Point& x, const State& p) const override {
    const State d1 = p - well(0, x), d2 = p - well(1, x);
    return 2.0 * c_ * (d1 * d2.squaredNorm() + d2 * d1.squaredNorm());
  }

 protected:
  json params() const override { return {{"c", c_}}; }

 private:
  double c_;
};

// alpha_i |p - z_i|^2 inside radius r, blended on r <= d <= 2r into the
// floor G(p) = floor * sqrt(1 + |p|^2), which grows linearly at infinity.
class BlendedQuadratic final : public MultiWellPotential {
 public:
  BlendedQuadratic(Box domain, std::vector<WellMap> wells, std::vector<double> alphas,
                   double r, std::optional<double> floor, const json& constants)
      : MultiWellPotential("blended-quadratic", std::move(domain), std::move(wells)),
        alphas_(std::move(alphas)),
        r_(r) {
    if (alphas_.size() == 1 && num_wells() > 1) alphas_.assign(num_wells(), alphas_.front());
    if (static_cast<int>(alphas_.size()) != num_wells()) {
      throw ParameterError("blended-quadratic: one alpha per well required");
    }
    for (double a : alphas_) {
      if (!(a > 0.0)) throw ParameterError("blended-quadratic: alpha must be positive");
    }
    if (!(r > 0.0)) throw ParameterError("blended-quadratic: r must be positive");
    const double amax = *std::max_element(alphas_.begin(), alphas_.end());
    floor_ = floor.value_or(amax * r * r);
    if (!(floor_ > 0.0)) throw ParameterError("blended-quadratic: floor must be positive");
    exact_h3_ = true;
    constants_.alpha = alphas_;
    constants_.r = r;
    double reach = 0.0;
    for (const auto& y : domain_.sample_grid(17)) {
      for (int i = 0; i < num_wells(); ++i) reach = std::max(reach, well(i, y).norm());
    }
    constants_.S = get_or(constants, "S", floor_);
    constants_.R = get_or(constants, "R", reach + 2.0 * r + 1.0);
    constants_.eta = get_or(constants, "eta", std::numeric_limits<double>::quiet_NaN());
    settle_separation(get_opt(constants, "delta"));
    if (num_wells() > 1 && !(constants_.delta > 4.0 * r)) {
      throw ParameterError("blended-quadratic: wells must be farther apart than 4r");
    }
  }

  double alpha(int i, const Point&) const override { return alphas_.at(i); }

  double value(const Point& x, const State& p) const override {
    const auto [j, d, z] = nearest(x, p);
    if (d >= 2.0 * r_) return floor_value(p);
    const double phi = smoothstep((d - r_) / r_);
    return (1.0 - phi) * alphas_[j] * d * d + phi * floor_value(p);
  }

  State gradient(const Point& x, const State& p) const override {
    const auto [j, d, z] = nearest(x, p);
    const State grad_floor = floor_ * p / std::sqrt(1.0 + p.squaredNorm());
    if (d >= 2.0 * r_) return grad_floor;
    const double s = (d - r_) / r_;
    const double phi = smoothstep(s);
    const State diff = p - z;
    State g = (1.0 - phi) * 2.0 * alphas_[j] * diff + phi * grad_floor;
    if (s > 0.0 && s < 1.0) {
      const double dphi = smoothstep_derivative(s) / r_;
      g += dphi * (floor_value(p) - alphas_[j] * d * d) * diff / d;
    }
    return g;
  }

 protected:
  json params() const override { return {{"floor", floor_}}; }

 private:
  double floor_value(const State& p) const { return floor_ * std::sqrt(1.0 + p.squaredNorm()); }

  struct Nearest {
    int index;
    double distance;
    State z;
  };
  Nearest nearest(const Point& x, const State& p) const {
    Nearest best{0, std::numeric_limits<double>::infinity(), State()};
    for (int i = 0; i < num_wells(); ++i) {
      State z = well(i, x);
      const double d = (p - z).norm();
      if (d < best.distance) best = {i, d, std::move(z)};
    }
    return best;
  }

  std::vector<double> alphas_;
  double r_;
  double floor_ = 0.0;
};

}  // namespace

// --------------------------------------------------------------------------
// WellMap

WellMap WellMap::constant(State value) {
  WellMap w;
  w.kind_ = Kind::constant;
  w.offset_ = std::move(value);
  return w;
}

WellMap WellMap::affine(State offset, Eigen::MatrixXd slope) {
  if (slope.rows() != offset.size()) throw ParameterError("affine well: slope rows must equal M");
  WellMap w;
  w.kind_ = Kind::affine;
  w.offset_ = std::move(offset);
  w.slope_ = std::move(slope);
  return w;
}

WellMap WellMap::parabola(double curvature) {
  WellMap w;
  w.kind_ = Kind::parabola;
  w.offset_ = State::Zero(2);
  w.curvature_ = curvature;
  return w;
}

State WellMap::operator()(const Point& x) const {
  switch (kind_) {
    case Kind::constant:
      return offset_;
    case Kind::affine: {
      if (slope_.cols() != x.size()) throw DomainError("affine well: dimension mismatch");
      State z = offset_;
      for (Eigen::Index r = 0; r < slope_.rows(); ++r) {
        for (Eigen::Index c = 0; c < slope_.cols(); ++c) z(r) += slope_(r, c) * x(c);
      }
      return z;
    }
    case Kind::parabola: {
      const double x1 = x(0);
      return make_state({x1, x1 >= 0.0 ? curvature_ * x1 * x1 : 0.0});
    }
  }
  return offset_;
}

double WellMap::lipschitz(const Box& domain) const {
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::affine: {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(slope_);
      return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    }
    case Kind::parabola: {
      const double top = std::max(0.0, std::max(std::abs(domain.hi(0)), std::abs(domain.lo(0))));
      const double slope = 2.0 * std::abs(curvature_) * top;
      return std::sqrt(1.0 + slope * slope);
    }
  }
  return 0.0;
}

int WellMap::state_dim() const { return static_cast<int>(offset_.size()); }

bool WellMap::is_constant() const {
  return kind_ == Kind::constant || (kind_ == Kind::affine && slope_.isZero(0.0));
}

json WellMap::to_json() const {
  switch (kind_) {
    case Kind::constant:
      return {{"type", "constant"}, {"value", state_to_json(offset_)}};
    case Kind::affine: {
      json rows = json::array();
      for (Eigen::Index r = 0; r < slope_.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < slope_.cols(); ++c) row.push_back(slope_(r, c));
        rows.push_back(row);
      }
      return {{"type", "affine"}, {"offset", state_to_json(offset_)}, {"slope", rows}};
    }
    case Kind::parabola:
      return {{"type", "parabola"}, {"curvature", curvature_}};
  }
  return {};
}

WellMap WellMap::from_json(const json& j) {
  if (j.is_array()) return constant(state_from_json(j));
  const std::string type = j.value("type", "constant");
  if (type == "constant") return constant(state_from_json(j.at("value")));
  if (type == "affine") {
    State offset = state_from_json(j.at("offset"));
    const auto& rows = j.at("slope");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(offset.size())) {
      throw ConfigError("affine well: slope must have one row per state component");
    }
    const std::size_t cols = rows.at(0).size();
    Eigen::MatrixXd slope(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw ConfigError("affine well: ragged slope matrix");
      for (std::size_t c = 0; c < cols; ++c) slope(r, c) = rows[r][c].get<double>();
    }
    return affine(std::move(offset), std::move(slope));
  }
  if (type == "parabola") return parabola(j.value("curvature", 1.0));
  throw ConfigError("unknown well map type: " + type);
}

// --------------------------------------------------------------------------
// MultiWellPotential

MultiWellPotential::MultiWellPotential(std::string name, Box domain, std::vector<WellMap> wells)
    : name_(std::move(name)), domain_(std::move(domain)), wells_(std::move(wells)) {
  if (wells_.empty()) throw ParameterError("potential needs at least one well");
  state_dim_ = wells_.front().state_dim();
  for (const auto& w : wells_) {
    if (w.state_dim() != state_dim_) throw ParameterError("wells must share the state dimension");
  }
  const Point probe = domain_.center();
  for (const auto& w : wells_) {
    if (w.kind() == WellMap::Kind::affine) (void)w(probe);  // dimension check
  }
}

void MultiWellPotential::settle_separation(std::optional<double> declared_delta) {
  double sep = std::numeric_limits<double>::infinity();
  if (num_wells() > 1) {
    for (const auto& x : domain_.sample_grid(domain_.dim() == 1 ? 257 : 33)) {
      for (int i = 0; i < num_wells(); ++i) {
        for (int j = i + 1; j < num_wells(); ++j) sep = std::min(sep, (well(i, x) - well(j, x)).norm());
      }
    }
  }
  if (declared_delta) {
    if (*declared_delta > sep * (1.0 + 1e-9)) {
      throw ParameterError("declared delta exceeds the sampled well separation");
    }
    constants_.delta = *declared_delta;
  } else {
    constants_.delta = std::isfinite(sep) ? sep : 0.0;
  }
  separated_ = num_wells() == 1 || sep > 0.0;
}

double MultiWellPotential::evaluate(const Point& x, const State& p) const {
  if (!domain_.contains(x)) throw DomainError("evaluate: x outside the closed domain");
  if (p.size() != state_dim_) throw ParameterError("evaluate: state dimension mismatch");
  return value(x, p);
}

State MultiWellPotential::grad_p(const Point& x, const State& p) const {
  if (!domain_.contains(x)) throw DomainError("grad_p: x outside the closed domain");
  if (p.size() != state_dim_) throw ParameterError("grad_p: state dimension mismatch");
  return gradient(x, p);
}

json MultiWellPotential::descriptor() const {
  json wells = json::array();
  for (const auto& w : wells_) wells.push_back(w.to_json());
  json lo = json::array(), hi = json::array();
  for (Eigen::Index a = 0; a < domain_.lo.size(); ++a) {
    lo.push_back(domain_.lo(a));
    hi.push_back(domain_.hi(a));
  }
  json constants = {{"alpha", constants_.alpha}, {"r", constants_.r},
                    {"delta", constants_.delta}, {"S", constants_.S},
                    {"R", constants_.R}};
  constants["eta"] = std::isnan(constants_.eta) ? json(nullptr) : json(constants_.eta);
  return {{"name", name_},   {"k", num_wells()},        {"domain", {{"lo", lo}, {"hi", hi}}},
          {"wells", wells},  {"constants", constants}, {"params", params()}};
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"scalar-double-well", "product-distance",
                                                 "blended-quadratic", "modulated"};
  return names;
}

PotentialPtr make_builtin(const std::string& name, const json& options) {
  const json& params = params_of(options);
  const json& constants = constants_of(options);
  if (name == "scalar-double-well") {
    return std::make_shared<ScalarDoubleWell>(domain_from(options, Box::interval(-1, 1)),
                                              quartic_from(params), constants);
  }
  if (name == "modulated") {
    return std::make_shared<ModulatedDoubleWell>(domain_from(options, Box::interval(-1, 1)),
                                                 quartic_from(params), get_or(params, "h0", 1.0),
                                                 get_or(params, "h2", 1.0), constants);
  }
  if (name == "product-distance") {
    Eigen::MatrixXd slope = Eigen::MatrixXd::Zero(2, 2);
    slope(0, 0) = 1.0;
    std::vector<WellMap> fallback = {WellMap::affine(State::Zero(2), slope), WellMap::parabola()};
    return std::make_shared<ProductDistance>(domain_from(options, Box::rectangle(-1, 1, -1, 1)),
                                             wells_from(options, fallback),
                                             get_or(params, "c", 1.0), constants);
  }
  if (name == "blended-quadratic") {
    std::vector<WellMap> fallback = {WellMap::constant(make_state({-1.0, 0.0})),
                                     WellMap::constant(make_state({1.0, 0.0}))};
    std::vector<double> alphas = {1.0};
    if (constants.contains("alpha")) {
      const auto& a = constants.at("alpha");
      alphas = a.is_array() ? a.get<std::vector<double>>() : std::vector<double>{a.get<double>()};
    }
    return std::make_shared<BlendedQuadratic>(domain_from(options, Box::interval(-1, 1)),
                                              wells_from(options, fallback), alphas,
                                              get_or(constants, "r", 0.3),
                                              get_opt(params, "floor"), constants);
  }
  throw ParameterError("unknown potential: " + name);
}

PotentialPtr potential_from_json(const json& descriptor) {
  if (!descriptor.is_object() || !descriptor.contains("name")) {
    throw ConfigError("potential descriptor must be an object with a name");
  }
  return make_builtin(descriptor.at("name").get<std::string>(), descriptor);
}

}  // namespace phasegeo
