#include "bootlik/blik.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace bootlik {

namespace detail {

std::vector<BootLikCurve> assemble_curves(
    const std::vector<std::string>& param_names,
    const std::vector<std::vector<CurvePoint>>& points_per_component, int usable_replicates,
    int dropped_estimation, const std::vector<std::string>& failure_causes, int k, int l,
    const CurveOptions& opt) {
  std::vector<BootLikCurve> curves;
  curves.reserve(param_names.size());

  for (std::size_t c = 0; c < param_names.size(); ++c) {
    BootLikCurve curve;
    curve.parameter = param_names[c];
    curve.first_level = k;
    curve.second_level = l;
    curve.span = opt.span;
    curve.degree = opt.degree;
    curve.dropped_estimation = dropped_estimation;

    for (const auto& pt : points_per_component[c]) {
      curve.dropped_zero_spread += pt.drop_zero_spread;
      curve.dropped_zero_density += pt.drop_zero_density;
      if (pt.loglik) {
        curve.theta_points.push_back(pt.theta);
        curve.loglik_points.push_back(*pt.loglik);
      }
    }

    const std::size_t need = static_cast<std::size_t>(opt.degree) + 2;
    if (curve.theta_points.size() < need) {
      std::ostringstream msg;
      msg << "build_curve: parameter '" << curve.parameter << "' has "
          << curve.theta_points.size() << " usable points, need " << need
          << " (replicates: " << usable_replicates << " usable, " << dropped_estimation
          << " estimation failures; " << curve.dropped_zero_spread << " zero-spread, "
          << curve.dropped_zero_density << " zero-density drops";
      for (const auto& cause : failure_causes) msg << "; cause: " << cause;
      msg << ")";
      throw std::runtime_error(msg.str());
    }

    curve.fit = smooth_fit(curve.theta_points, curve.loglik_points, opt.span, opt.degree);
    curve.support_lo = curve.fit.min_x();
    curve.support_hi = curve.fit.max_x();
    if (!(curve.support_hi > curve.support_lo)) {
      throw std::runtime_error("build_curve: degenerate support for parameter '" +
                               curve.parameter + "'");
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace detail

std::optional<double> log_bl(const BootLikCurve& curve, double theta) {
  if (theta < curve.support_lo || theta > curve.support_hi) return std::nullopt;
  return curve.fit.eval(theta);
}

double curve_argmax(const BootLikCurve& curve) {
  const int grid = 1024;
  double best_x = curve.support_lo;
  double best_v = -std::numeric_limits<double>::infinity();
  const double step = (curve.support_hi - curve.support_lo) / (grid - 1);
  for (int g = 0; g < grid; ++g) {
    const double x = curve.support_lo + step * g;
    const double v = curve.fit.eval(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  // golden refinement in the bracketing cell
  const double lo = std::max(curve.support_lo, best_x - step);
  const double hi = std::min(curve.support_hi, best_x + step);
  double a = lo, b = hi;
  const double gr = 0.6180339887498949;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = curve.fit.eval(x1), f2 = curve.fit.eval(x2);
  for (int it = 0; it < 80 && b - a > 1e-12 * (1.0 + std::fabs(a)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = curve.fit.eval(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = curve.fit.eval(x1);
    }
  }
  return 0.5 * (a + b);
}

void save_curves_json(const std::vector<BootLikCurve>& curves, const std::string& path) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& c : curves) {
    nlohmann::json j;
    j["parameter"] = c.parameter;
    j["theta"] = c.theta_points;
    j["loglik"] = c.loglik_points;
    j["support"] = {c.support_lo, c.support_hi};
    j["first_level"] = c.first_level;
    j["second_level"] = c.second_level;
    j["span"] = c.span;
    j["degree"] = c.degree;
    j["bandwidth_policy"] = c.bandwidth_policy;
    j["dropped"] = {{"estimation", c.dropped_estimation},
                    {"zero_spread", c.dropped_zero_spread},
                    {"zero_density", c.dropped_zero_density}};
    doc.push_back(std::move(j));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_curves_json: cannot open " + path);
  out << doc.dump(2) << '\n';
}

std::vector<BootLikCurve> load_curves_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_curves_json: cannot open " + path);
  nlohmann::json doc;
  in >> doc;
  std::vector<BootLikCurve> curves;
  for (const auto& j : doc) {
    BootLikCurve c;
    c.parameter = j.at("parameter").get<std::string>();
    c.theta_points = j.at("theta").get<std::vector<double>>();
    c.loglik_points = j.at("loglik").get<std::vector<double>>();
    c.support_lo = j.at("support").at(0).get<double>();
    c.support_hi = j.at("support").at(1).get<double>();
    c.first_level = j.at("first_level").get<int>();
    c.second_level = j.at("second_level").get<int>();
    c.span = j.at("span").get<double>();
    c.degree = j.at("degree").get<int>();
    c.bandwidth_policy = j.at("bandwidth_policy").get<std::string>();
    c.dropped_estimation = j.at("dropped").at("estimation").get<int>();
    c.dropped_zero_spread = j.at("dropped").at("zero_spread").get<int>();
    c.dropped_zero_density = j.at("dropped").at("zero_density").get<int>();
    c.fit = smooth_fit(c.theta_points, c.loglik_points, c.span, c.degree);
    curves.push_back(std::move(c));
  }
  return curves;
}

}  // namespace bootlik
