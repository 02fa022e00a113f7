#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fixkit/gauge.hpp"
#include "fixkit/hausdorff.hpp"
#include "fixkit/metric.hpp"
#include "fixkit/report.hpp"

namespace fixkit {

enum class MapKind { kSingle, kMulti };

// A self map of a finite space: one image point per point (single) or a
// nonempty image set per point (multi). Single maps are stored as singleton
// image sets so Hausdorff-based code applies to both.
class MapSpec {
 public:
  static MapSpec single(std::vector<PointId> images);
  static MapSpec multi(std::vector<PointSet> images);

  // Restriction of real maps to a line space by nearest-point snapping.
  static MapSpec snapped(const LineSpace& line,
                         const std::function<double(double)>& f);
  static MapSpec snapped_multi(
      const LineSpace& line,
      const std::vector<std::function<double(double)>>& branches);

  // Single map viewed as a multi map with singleton images.
  MapSpec as_multi() const;

  MapKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return images_.size(); }
  const PointSet& image(PointId x) const { return images_.at(x); }
  // Image point of a single map; throws MapSpecError for multi maps.
  PointId at(PointId x) const;

  // Total on the space, images nonempty and inside the space.
  void validate(const FiniteMetricSpace& space) const;

 private:
  MapSpec(MapKind kind, std::vector<PointSet> images)
      : kind_(kind), images_(std::move(images)) {}

  MapKind kind_;
  std::vector<PointSet> images_;
};

// Potential on points, one finite value per point.
using PointPotential = std::vector<double>;

// Potential on ordered point pairs.
struct PairPotential {
  std::string label;
  std::function<double(const FiniteMetricSpace&, PointId, PointId)> eval;

  double operator()(const FiniteMetricSpace& space, PointId x,
                    PointId y) const {
    return eval(space, x, y);
  }
};

// c * d(x, y).
PairPotential scaled_distance_potential(double factor);

struct Witness {
  PointId x = 0;
  PointId y = 0;
  std::optional<PointId> z;
  double lhs = 0.0;
  double rhs = 0.0;
};

// For multi potentials: the z chosen in T(y) for each (x, y in T(x)).
struct Selection {
  PointId x = 0;
  PointId y = 0;
  PointId z = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct Certificate {
  std::string condition;
  bool passed = true;
  // Extremal observed quantity; see constant_name.
  double constant = 0.0;
  std::string constant_name;
  std::optional<Witness> witness;
  std::string reduction;
  std::vector<Selection> selections;
  std::size_t checked = 0;
};

struct CertifyOptions {
  Slack slack;
  CheckGrid grid;
};

// alpha* = max over distinct pairs of d(Tx,Ty)/d(x,y) (H(Tx,Ty)/d(x,y) for
// multi maps); passes iff alpha* < 1.
Certificate certify_banach(const FiniteMetricSpace& space, const MapSpec& map,
                           const CertifyOptions& options = {});

// Same ratio, passes iff alpha* <= 1 (within slack).
Certificate certify_nonexpansive(const FiniteMetricSpace& space,
                                 const MapSpec& map,
                                 const CertifyOptions& options = {});

// d(Tx,Ty) <= eta(d(x,y)) on distinct pairs. eta must pass the below
// identity and ratio-nondecreasing checks (GaugeRejected otherwise).
Certificate certify_gauge_contraction(const FiniteMetricSpace& space,
                                      const MapSpec& map, const Gauge& eta,
                                      const CertifyOptions& options = {});

// H(Tx,Ty) <= eta(d(x,y)) on distinct pairs, same gauge gate.
Certificate certify_multivalued_gauge(const FiniteMetricSpace& space,
                                      const MapSpec& map, const Gauge& eta,
                                      const CertifyOptions& options = {});

// H(Tx,Ty) <= eta(d(x,y)) d(x,y), eta nondecreasing into [0,1); reduced to
// certify_multivalued_gauge with product_gauge(eta).
Certificate certify_mizoguchi_takahashi(const FiniteMetricSpace& space,
                                        const MapSpec& map, const Gauge& eta,
                                        const CertifyOptions& options = {});

// H(Tx,Ty) <= d(x,y) - theta(d(x,y)); reduced to certify_multivalued_gauge
// with complement_gauge(theta).
Certificate certify_weak_contraction(const FiniteMetricSpace& space,
                                     const MapSpec& map, const Gauge& theta,
                                     const CertifyOptions& options = {});

// d(x,Tx) <= phi(x) - phi(Tx) at every point.
Certificate certify_caristi(const FiniteMetricSpace& space, const MapSpec& map,
                            const PointPotential& phi,
                            const CertifyOptions& options = {});

// d(x,y) <= Phi(x,y) - Phi(Tx,Ty) for every ordered pair, x = y included.
Certificate certify_pair_potential(const FiniteMetricSpace& space,
                                   const MapSpec& map,
                                   const PairPotential& potential,
                                   const CertifyOptions& options = {});

// For every x and y in Tx some z in Ty has d(x,y) <= Phi(x,y) - Phi(y,z).
// The selected z minimizes Phi(y, .) with index tie-breaking.
Certificate certify_multi_pair_potential(const FiniteMetricSpace& space,
                                         const MapSpec& map,
                                         const PairPotential& potential,
                                         const CertifyOptions& options = {});

}  // namespace fixkit
