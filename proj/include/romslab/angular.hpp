#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace romslab {

inline constexpr double kDefaultAlphaCap = 4.0;

struct VelocityCell {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
};

/// Geometric width ratio between neighbouring cells of one half; 1 is uniform.
struct PartitionLayout {
  double ratio = 1.0;

  static PartitionLayout uniform() { return {1.0}; }
  static PartitionLayout graded(double ratio) { return {ratio}; }
  bool is_uniform() const noexcept { return ratio == 1.0; }
};

/// Partition of S^delta = [-1,-delta) U (delta,1] into n cells, ordered by
/// increasing mu. Cell i and cell n-1-i are mirror images.
struct VelocityPartition {
  double delta = 0.0;
  std::size_t n = 0;
  std::vector<VelocityCell> cells;
  std::vector<double> weights;  // omega_l = |S_l| / |S^delta|
  std::vector<double> alpha;    // n * omega_l

  std::size_t half() const noexcept { return n / 2; }
  std::size_t mirror(std::size_t i) const noexcept { return n - 1 - i; }
  double max_alpha() const;
};

VelocityPartition build_partition(std::size_t n, double delta,
                                  PartitionLayout layout = PartitionLayout::uniform(),
                                  double alpha_cap = kDefaultAlphaCap);

enum class QuadratureKind { DomMidpoint, DomGauss, Rom, ReferenceGauss };

struct Provenance {
  QuadratureKind kind = QuadratureKind::DomMidpoint;
  std::size_t order = 0;  // Gauss points per half
  std::uint64_t master_seed = 0;
  std::uint64_t sample_index = 0;

  std::string to_string() const;
};

struct QuadratureSet {
  std::vector<double> ordinates;
  std::vector<double> weights;  // sum to 1
  double delta = 0.0;
  Provenance provenance;

  std::size_t size() const noexcept { return ordinates.size(); }
};

struct DomRule {
  enum class Kind { Midpoint, Gauss } kind = Kind::Midpoint;
  std::size_t order = 0;  // Gauss points per half

  static DomRule midpoint() { return {Kind::Midpoint, 0}; }
  static DomRule gauss(std::size_t k) { return {Kind::Gauss, k}; }
};

/// Composite Gauss rule with k nodes on each of [-1,-delta] and [delta,1],
/// weights normalized to sum 1. delta = 0 is accepted here.
QuadratureSet composite_gauss(double delta, std::size_t k);

/// High-order stand-in for the exact velocity average over S^delta.
QuadratureSet reference_gauss(double delta, std::size_t n_per_half);

/// Midpoint: cell midpoints with partition weights. Gauss(k): composite rule
/// on the two half intervals, ignoring the cell structure.
QuadratureSet dom_quadrature(const VelocityPartition& partition, DomRule rule);

/// One random-ordinates draw: a uniform point in each positive cell from the
/// counter-based stream (master_seed, sample_index, cell), mirrored onto the
/// negative half.
QuadratureSet rom_sample(const VelocityPartition& partition, std::uint64_t master_seed,
                         std::uint64_t sample_index);

/// Image of one ROM draw under a measure-preserving map of the in-cell
/// uniform coordinate, applied to every cell at once:
/// u -> frac(u + shift/shifts), then u -> 1 - u when `reflect` is set.
/// Each image is itself a valid ROM sample (same joint distribution), so an
/// average over images is still an unbiased estimate of E phi.
struct SampleImage {
  std::size_t shift = 0;
  std::size_t shifts = 1;
  bool reflect = false;

  /// The 2 * shifts images of the group generated by the shift lattice and reflection.
  static std::vector<SampleImage> group(std::size_t shifts);
};

QuadratureSet rom_sample(const VelocityPartition& partition, std::uint64_t master_seed, std::uint64_t sample_index,
                         SampleImage image);

}  // namespace romslab
