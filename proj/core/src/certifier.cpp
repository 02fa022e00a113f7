#include "fixkit/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fixkit/error.hpp"

namespace fixkit {

MapSpec MapSpec::single(std::vector<PointId> images) {
  std::vector<PointSet> sets;
  sets.reserve(images.size());
  for (PointId p : images) sets.push_back(PointSet{p});
  return MapSpec(MapKind::kSingle, std::move(sets));
}

MapSpec MapSpec::multi(std::vector<PointSet> images) {
  return MapSpec(MapKind::kMulti, std::move(images));
}

MapSpec MapSpec::snapped(const LineSpace& line,
                         const std::function<double(double)>& f) {
  std::vector<PointId> images(line.size());
  for (PointId p = 0; p < line.size(); ++p) images[p] = line.snap(f(line.value(p)));
  return single(std::move(images));
}

MapSpec MapSpec::snapped_multi(
    const LineSpace& line,
    const std::vector<std::function<double(double)>>& branches) {
  if (branches.empty()) throw MapSpecError("multi map needs at least one branch");
  std::vector<PointSet> images;
  images.reserve(line.size());
  for (PointId p = 0; p < line.size(); ++p) {
    std::vector<PointId> members;
    for (const auto& f : branches) members.push_back(line.snap(f(line.value(p))));
    images.emplace_back(std::move(members));
  }
  return multi(std::move(images));
}

MapSpec MapSpec::as_multi() const { return MapSpec(MapKind::kMulti, images_); }

PointId MapSpec::at(PointId x) const {
  if (kind_ != MapKind::kSingle) {
    throw MapSpecError("point image requested from a multi-valued map");
  }
  return *images_.at(x).begin();
}

void MapSpec::validate(const FiniteMetricSpace& space) const {
  if (images_.size() != space.size()) {
    throw MapSpecError("map defines " + std::to_string(images_.size()) +
                       " images for a space of " +
                       std::to_string(space.size()) + " points");
  }
  for (PointId x = 0; x < images_.size(); ++x) {
    if (kind_ == MapKind::kSingle && images_[x].size() != 1) {
      throw MapSpecError("single-valued map has a set image at point " +
                         std::to_string(x));
    }
    for (PointId y : images_[x]) {
      if (!space.contains(y)) {
        throw MapSpecError("image of point " + std::to_string(x) +
                           " leaves the space");
      }
    }
  }
}

PairPotential scaled_distance_potential(double factor) {
  std::ostringstream label;
  label << factor << "*d";
  return {label.str(),
          [factor](const FiniteMetricSpace& s, PointId x, PointId y) {
            return factor * s.distance(x, y);
          }};
}

namespace {

double image_distance(const FiniteMetricSpace& space, const MapSpec& map,
                      PointId x, PointId y) {
  if (map.kind() == MapKind::kSingle) {
    return space.distance(map.at(x), map.at(y));
  }
  return hausdorff_distance(space, map.image(x), map.image(y));
}

void require_gauge(const CheckReport& r, const std::string& condition) {
  if (!r.passed) {
    throw GaugeRejected(condition + " gauge precondition: " + r.detail,
                        r.failed_at.value_or(0.0));
  }
}

// Tracks the first violation in scan order and the largest lhs - rhs seen.
struct ExcessTracker {
  Certificate& cert;
  Slack slack;

  void observe(PointId x, PointId y, std::optional<PointId> z, double lhs,
               double rhs) {
    ++cert.checked;
    cert.constant = std::max(cert.constant, lhs - rhs);
    if (cert.passed && !slack.holds(lhs, rhs)) {
      cert.passed = false;
      cert.witness = Witness{x, y, z, lhs, rhs};
    }
  }
};

Certificate start(std::string condition) {
  Certificate c;
  c.condition = std::move(condition);
  c.constant = -std::numeric_limits<double>::infinity();
  c.constant_name = "max_excess";
  return c;
}

void finish(Certificate& c) {
  if (c.checked == 0) c.constant = 0.0;
}

Certificate lipschitz_ratio(const FiniteMetricSpace& space, const MapSpec& map,
                            std::string condition, bool strict,
                            const Slack& slack) {
  map.validate(space);
  Certificate c;
  c.condition = std::move(condition);
  c.constant_name = "alpha_star";
  c.constant = 0.0;
  std::optional<Witness> argmax;
  for (PointId x = 0; x < space.size(); ++x) {
    for (PointId y = 0; y < space.size(); ++y) {
      if (x == y) continue;
      ++c.checked;
      const double lhs = image_distance(space, map, x, y);
      const double rhs = space.distance(x, y);
      const double ratio = lhs / rhs;
      if (!argmax || ratio > c.constant) {
        c.constant = ratio;
        argmax = Witness{x, y, std::nullopt, lhs, rhs};
      }
    }
  }
  c.passed = strict ? c.constant < 1.0 : slack.holds(c.constant, 1.0);
  if (!c.passed) c.witness = argmax;
  return c;
}

}  // namespace

Certificate certify_banach(const FiniteMetricSpace& space, const MapSpec& map,
                           const CertifyOptions& options) {
  return lipschitz_ratio(space, map, "banach", true, options.slack);
}

Certificate certify_nonexpansive(const FiniteMetricSpace& space,
                                 const MapSpec& map,
                                 const CertifyOptions& options) {
  return lipschitz_ratio(space, map, "nonexpansive", false, options.slack);
}

namespace {

Certificate gauge_scan(const FiniteMetricSpace& space, const MapSpec& map,
                       const Gauge& eta, std::string condition,
                       const CertifyOptions& options) {
  map.validate(space);
  require_gauge(check_below_identity(eta, options.grid), condition);
  require_gauge(
      check_ratio_monotone(eta, options.grid, Monotone::kNondecreasing),
      condition);
  Certificate c = start(std::move(condition));
  ExcessTracker track{c, options.slack};
  for (PointId x = 0; x < space.size(); ++x) {
    for (PointId y = 0; y < space.size(); ++y) {
      if (x == y) continue;
      track.observe(x, y, std::nullopt, image_distance(space, map, x, y),
                    eta(space.distance(x, y)));
    }
  }
  finish(c);
  return c;
}

}  // namespace

Certificate certify_gauge_contraction(const FiniteMetricSpace& space,
                                      const MapSpec& map, const Gauge& eta,
                                      const CertifyOptions& options) {
  if (map.kind() != MapKind::kSingle) {
    throw MapSpecError("gauge contraction certifies single-valued maps");
  }
  return gauge_scan(space, map, eta, "gauge_contraction", options);
}

Certificate certify_multivalued_gauge(const FiniteMetricSpace& space,
                                      const MapSpec& map, const Gauge& eta,
                                      const CertifyOptions& options) {
  return gauge_scan(space, map.as_multi(), eta, "multivalued_gauge", options);
}

Certificate certify_mizoguchi_takahashi(const FiniteMetricSpace& space,
                                        const MapSpec& map, const Gauge& eta,
                                        const CertifyOptions& options) {
  const Gauge theta = product_gauge(eta, options.grid);
  Certificate c = certify_multivalued_gauge(space, map, theta, options);
  c.condition = "mizoguchi_takahashi";
  c.reduction = "multivalued_gauge with " + theta.label() +
                " (theta(t) = eta(t) * t)";
  return c;
}

Certificate certify_weak_contraction(const FiniteMetricSpace& space,
                                     const MapSpec& map, const Gauge& theta,
                                     const CertifyOptions& options) {
  const Gauge eta = complement_gauge(theta, options.grid);
  Certificate c = certify_multivalued_gauge(space, map, eta, options);
  c.condition = "weak_contraction";
  c.reduction = "multivalued_gauge with " + eta.label() +
                " (eta(t) = t - theta(t))";
  return c;
}

Certificate certify_caristi(const FiniteMetricSpace& space, const MapSpec& map,
                            const PointPotential& phi,
                            const CertifyOptions& options) {
  map.validate(space);
  if (map.kind() != MapKind::kSingle) {
    throw MapSpecError("caristi condition certifies single-valued maps");
  }
  if (phi.size() != space.size()) {
    throw PreconditionError("potential must have one value per point");
  }
  for (double v : phi) {
    if (!std::isfinite(v)) throw PreconditionError("potential must be finite");
  }
  Certificate c = start("caristi");
  ExcessTracker track{c, options.slack};
  for (PointId x = 0; x < space.size(); ++x) {
    const PointId tx = map.at(x);
    track.observe(x, tx, std::nullopt, space.distance(x, tx),
                  phi[x] - phi[tx]);
  }
  finish(c);
  return c;
}

Certificate certify_pair_potential(const FiniteMetricSpace& space,
                                   const MapSpec& map,
                                   const PairPotential& potential,
                                   const CertifyOptions& options) {
  map.validate(space);
  if (map.kind() != MapKind::kSingle) {
    throw MapSpecError("pair potential condition certifies single-valued maps");
  }
  Certificate c = start("pair_potential");
  ExcessTracker track{c, options.slack};
  for (PointId x = 0; x < space.size(); ++x) {
    for (PointId y = 0; y < space.size(); ++y) {
      const double rhs = potential(space, x, y) -
                         potential(space, map.at(x), map.at(y));
      if (!std::isfinite(rhs)) throw PreconditionError("potential must be finite");
      track.observe(x, y, std::nullopt, space.distance(x, y), rhs);
    }
  }
  finish(c);
  return c;
}

Certificate certify_multi_pair_potential(const FiniteMetricSpace& space,
                                         const MapSpec& map,
                                         const PairPotential& potential,
                                         const CertifyOptions& options) {
  map.validate(space);
  Certificate c = start("multi_pair_potential");
  ExcessTracker track{c, options.slack};
  for (PointId x = 0; x < space.size(); ++x) {
    for (PointId y : map.image(x)) {
      // Best z maximizes the right-hand side, i.e. minimizes Phi(y, z).
      std::optional<PointId> best;
      double best_value = 0.0;
      for (PointId z : map.image(y)) {
        const double v = potential(space, y, z);
        if (!best || v < best_value) {
          best = z;
          best_value = v;
        }
      }
      const double lhs = space.distance(x, y);
      const double rhs = potential(space, x, y) - best_value;
      if (!std::isfinite(rhs)) throw PreconditionError("potential must be finite");
      c.selections.push_back({x, y, *best, lhs, rhs});
      track.observe(x, y, best, lhs, rhs);
    }
  }
  finish(c);
  return c;
}

}  // namespace fixkit
