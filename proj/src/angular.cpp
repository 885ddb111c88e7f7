#include "romslab/angular.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "romslab/error.hpp"
#include "romslab/gauss_legendre.hpp"
#include "romslab/rng.hpp"

namespace romslab {

double VelocityPartition::max_alpha() const { return *std::max_element(alpha.begin(), alpha.end()); }

VelocityPartition build_partition(std::size_t n, double delta, PartitionLayout layout, double alpha_cap) {
  if (n == 0 || n % 2 != 0) {
    throw Error(ErrorCode::OddN, "partition size n = " + std::to_string(n) + " must be even and positive");
  }
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw Error(ErrorCode::DeltaOutOfRange, "truncation delta must satisfy 0 < delta < 1");
  }
  if (!(layout.ratio > 0.0) || !std::isfinite(layout.ratio)) {
    throw Error(ErrorCode::InvalidArgument, "graded layout ratio must be positive");
  }

  const std::size_t m = n / 2;
  const double span = 1.0 - delta;

  // Widths of the positive half, ordered from delta outwards.
  std::vector<double> widths(m);
  if (layout.is_uniform()) {
    std::fill(widths.begin(), widths.end(), span / static_cast<double>(m));
  } else {
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      widths[k] = std::pow(layout.ratio, static_cast<double>(k));
      total += widths[k];
    }
    for (double& w : widths) w *= span / total;
  }

  VelocityPartition p;
  p.delta = delta;
  p.n = n;
  p.cells.resize(n);
  double lo = delta;
  for (std::size_t k = 0; k < m; ++k) {
    const double hi = (k + 1 == m) ? 1.0 : lo + widths[k];
    p.cells[m + k] = {lo, hi};
    p.cells[m - 1 - k] = {-hi, -lo};
    lo = hi;
  }

  const double measure = 2.0 * span;
  p.weights.resize(n);
  p.alpha.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.weights[i] = p.cells[i].width() / measure;
    p.alpha[i] = static_cast<double>(n) * p.weights[i];
  }
  if (layout.is_uniform()) {
    std::fill(p.weights.begin(), p.weights.end(), 1.0 / static_cast<double>(n));
    std::fill(p.alpha.begin(), p.alpha.end(), 1.0);
  }
  if (p.max_alpha() > alpha_cap) {
    throw Error(ErrorCode::AlphaUnbounded, "graded ratio gives max alpha = " + std::to_string(p.max_alpha()) +
                                               " above the cap " + std::to_string(alpha_cap));
  }
  return p;
}

std::string Provenance::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case QuadratureKind::DomMidpoint: os << "dom-midpoint"; break;
    case QuadratureKind::DomGauss: os << "dom-gauss(" << order << ")"; break;
    case QuadratureKind::Rom: os << "rom(" << master_seed << "," << sample_index << ")"; break;
    case QuadratureKind::ReferenceGauss: os << "reference-gauss(" << order << ")"; break;
  }
  return os.str();
}

QuadratureSet composite_gauss(double delta, std::size_t k) {
  if (!(delta >= 0.0) || !(delta < 1.0)) {
    throw Error(ErrorCode::DeltaOutOfRange, "truncation delta must satisfy 0 <= delta < 1");
  }
  const GaussRule g = gauss_legendre(k);
  const double half = 0.5 * (1.0 - delta);
  const double center = 0.5 * (1.0 + delta);
  QuadratureSet q;
  q.delta = delta;
  q.ordinates.resize(2 * k);
  q.weights.resize(2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    const double mu = center + half * g.nodes[i];
    // Each half carries total weight 1/2; Gauss weights sum to 2 per half.
    q.ordinates[k + i] = mu;
    q.ordinates[k - 1 - i] = -mu;
    q.weights[k + i] = 0.25 * g.weights[i];
    q.weights[k - 1 - i] = 0.25 * g.weights[i];
  }
  q.provenance = {QuadratureKind::DomGauss, k, 0, 0};
  return q;
}

QuadratureSet reference_gauss(double delta, std::size_t n_per_half) {
  QuadratureSet q = composite_gauss(delta, n_per_half);
  q.provenance.kind = QuadratureKind::ReferenceGauss;
  return q;
}

QuadratureSet dom_quadrature(const VelocityPartition& partition, DomRule rule) {
  if (rule.kind == DomRule::Kind::Gauss) {
    if (rule.order == 0) throw Error(ErrorCode::InvalidRule, "gauss(k) needs k >= 1");
    return composite_gauss(partition.delta, rule.order);
  }
  QuadratureSet q;
  q.delta = partition.delta;
  q.ordinates.resize(partition.n);
  for (std::size_t i = 0; i < partition.n; ++i) q.ordinates[i] = partition.cells[i].midpoint();
  // Exact mirror symmetry regardless of rounding in the midpoint sums.
  for (std::size_t i = 0; i < partition.half(); ++i) q.ordinates[i] = -q.ordinates[partition.mirror(i)];
  q.weights = partition.weights;
  q.provenance = {QuadratureKind::DomMidpoint, 0, 0, 0};
  return q;
}

std::vector<SampleImage> SampleImage::group(std::size_t shifts) {
  if (shifts == 0) throw Error(ErrorCode::InvalidArgument, "image group needs at least one shift");
  std::vector<SampleImage> out;
  out.reserve(2 * shifts);
  for (std::size_t k = 0; k < shifts; ++k) {
    out.push_back({k, shifts, false});
    out.push_back({k, shifts, true});
  }
  return out;
}

namespace {

QuadratureSet draw(const VelocityPartition& partition, std::uint64_t master_seed, std::uint64_t sample_index,
                   SampleImage image) {
  QuadratureSet q;
  q.delta = partition.delta;
  q.ordinates.resize(partition.n);
  q.weights = partition.weights;
  for (std::size_t i = partition.half(); i < partition.n; ++i) {
    CounterRng rng(stream_key(master_seed, sample_index, i));
    double u = rng.next_open01();
    if (image.shift != 0) {
      u += static_cast<double>(image.shift) / static_cast<double>(image.shifts);
      if (u >= 1.0) u -= 1.0;
    }
    if (image.reflect) u = 1.0 - u;
    const VelocityCell& c = partition.cells[i];
    double mu = c.lo + u * c.width();
    // Keep the draw inside the open cell despite rounding.
    mu = std::clamp(mu, std::nextafter(c.lo, c.hi), c.hi);
    q.ordinates[i] = mu;
    q.ordinates[partition.mirror(i)] = -mu;
  }
  q.provenance = {QuadratureKind::Rom, 0, master_seed, sample_index};
  return q;
}

}  // namespace

QuadratureSet rom_sample(const VelocityPartition& partition, std::uint64_t master_seed, std::uint64_t sample_index) {
  return draw(partition, master_seed, sample_index, SampleImage{});
}

QuadratureSet rom_sample(const VelocityPartition& partition, std::uint64_t master_seed, std::uint64_t sample_index,
                         SampleImage image) {
  if (image.shifts == 0 || image.shift >= image.shifts) {
    throw Error(ErrorCode::InvalidArgument, "sample image shift must lie in [0, shifts)");
  }
  return draw(partition, master_seed, sample_index, image);
}

}  // namespace romslab
