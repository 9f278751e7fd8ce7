#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "instance_io.hpp"

namespace mpsanneal {

// Instantaneous weights of H_tot = A H_start + B H_target.
struct SchedulePoint {
  double a = 0.0;
  double b = 0.0;
};

struct ScheduleKnot {
  double t = 0.0;
  double a = 0.0;
  double b = 0.0;

  friend bool operator==(const ScheduleKnot&, const ScheduleKnot&) = default;
};

// Piecewise-linear driving functions A(t), B(t) on [0, T].
class AnnealSchedule {
 public:
  // `min_dominance` enforces A(0) >= r B(0) and B(T) >= r A(T); pass 0 to skip it.
  static AnnealSchedule from_knots(std::vector<ScheduleKnot> knots, double min_dominance = 10.0) {
    if (knots.size() < 2) throw ArgumentError("schedule needs at least two knots");
    if (knots.front().t != 0.0) throw ArgumentError("schedule must start at t = 0");
    for (std::size_t k = 0; k < knots.size(); ++k) {
      const auto& p = knots[k];
      if (!std::isfinite(p.t) || !std::isfinite(p.a) || !std::isfinite(p.b))
        throw ArgumentError("schedule knots must be finite");
      if (p.a < 0.0 || p.b < 0.0) throw ArgumentError("schedule weights must be non-negative");
      if (k > 0 && !(p.t > knots[k - 1].t)) throw ArgumentError("schedule times must increase strictly");
    }
    const auto& first = knots.front();
    const auto& last = knots.back();
    if (min_dominance > 0.0) {
      if (first.a < min_dominance * first.b)
        throw ArgumentError("schedule start must be dominated by A (A(0) >= r B(0))");
      if (last.b < min_dominance * last.a)
        throw ArgumentError("schedule end must be dominated by B (B(T) >= r A(T))");
    }
    AnnealSchedule s;
    s.knots_ = std::move(knots);
    return s;
  }

  double total_time() const noexcept { return knots_.back().t; }
  const std::vector<ScheduleKnot>& knots() const noexcept { return knots_; }

  SchedulePoint at(double t) const {
    if (t <= 0.0) return {knots_.front().a, knots_.front().b};
    if (t >= total_time()) return {knots_.back().a, knots_.back().b};
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                               [](double v, const ScheduleKnot& k) { return v < k.t; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    return {lo.a + w * (hi.a - lo.a), lo.b + w * (hi.b - lo.b)};
  }

  // Same shape stretched to a new sweep time.
  AnnealSchedule rescaled(double total) const {
    if (!(total > 0.0)) throw ArgumentError("sweep time must be positive");
    AnnealSchedule s = *this;
    const double f = total / total_time();
    for (auto& k : s.knots_) k.t *= f;
    s.knots_.back().t = total;
    return s;
  }

 private:
  std::vector<ScheduleKnot> knots_;
};

// A(t) = 1 - t/T, B(t) = t/T.
inline AnnealSchedule default_schedule(double total_time) {
  if (!(total_time > 0.0) || !std::isfinite(total_time))
    throw ArgumentError("sweep time must be positive");
  return AnnealSchedule::from_knots({{0.0, 1.0, 0.0}, {total_time, 0.0, 1.0}});
}

// Schedule table: one `t A B` triple per line; '#' comments allowed.
inline AnnealSchedule parse_schedule(std::string_view text, double min_dominance = 10.0) {
  std::vector<ScheduleKnot> knots;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto tok = detail::split_ws(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (tok.empty() || tok[0].front() == '#') continue;
    if (tok.size() != 3) throw ParseError(line_no, "expected 't A B'");
    auto t = parse_double(tok[0]);
    auto a = parse_double(tok[1]);
    auto b = parse_double(tok[2]);
    if (!t || !a || !b) throw ParseError(line_no, "schedule values must be numbers");
    knots.push_back({*t, *a, *b});
  }
  return AnnealSchedule::from_knots(std::move(knots), min_dominance);
}

inline AnnealSchedule load_schedule(const std::string& path, double min_dominance = 10.0) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open schedule file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_schedule(ss.str(), min_dominance);
}

inline std::string serialize(const AnnealSchedule& schedule) {
  std::string out;
  for (const auto& k : schedule.knots())
    out += format_double(k.t) + " " + format_double(k.a) + " " + format_double(k.b) + "\n";
  return out;
}

}  // namespace mpsanneal
