#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weil/enumeration.hpp"

namespace weil {

enum class LatticeKind { Lambda, LambdaPrime, LambdaDoublePrime };

std::string_view to_string(LatticeKind kind);
/// Accepts "lambda", "lambda-prime", "lambda-double-prime".
LatticeKind parse_kind(std::string_view text);

/// coef * q^(half_exp / 2) with coef > 0; compared exactly.
struct QMonomial {
  Rational coef = 1;
  int half_exp = 0;

  double value(std::int64_t q) const;
  /// Exact comparison at the given q.
  static int compare(const QMonomial& a, const QMonomial& b, std::int64_t q);
  bool equals(const QMonomial& other, std::int64_t q) const { return compare(*this, other, q) == 0; }
};

/// Shifted rectilinear lattice in b-coordinates (b_i = a_i q^(-i/2)): the points
/// a ≡ m (mod F^2) with the kind's divisibility on a_g (none, p | a_g, s | a_g).
struct LatticeSpec {
  LatticeKind kind = LatticeKind::Lambda;
  FieldParams field;
  int g = 1;
  std::int64_t F = 1;
  std::vector<std::int64_t> shift;  // m, entries in [0, F^2)
  Rational G;                       // g(g+1)/4
  std::int64_t last_divisor = 1;    // 1, p or s
  std::vector<QMonomial> edges;     // fundamental-domain edge lengths
  QMonomial covolume;               // F^(2g) {1, p, s} q^(-G)
  QMonomial mesh;                   // longest edge
  QMonomial table_mesh;             // F^2 q^(-1/2), F^2 for (g, q) = (2, p) in Lambda', F^2 for Lambda''
  bool table_mesh_is_bound = false; // Lambda'': the table only bounds the mesh

  static LatticeSpec make(LatticeKind kind, std::int64_t q, int g, std::int64_t F = 1,
                          std::vector<std::int64_t> shift = {});
};

/// Exact number of lattice points in V_g. Throws CapExceeded for oversized boxes.
std::int64_t count_points(const LatticeSpec& spec, int workers = 1);

struct VolumeEstimate {
  int g = 0;
  double value = 0;
  double std_error = 0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  bool exact = false;
};

/// g = 1: exactly 4. g >= 2: Monte Carlo over the coefficient box with exact
/// membership of rational sample points; block-seeded so results do not
/// depend on `workers`.
VolumeEstimate volume_Vg(int g, std::int64_t samples, std::uint64_t seed = 1, int workers = 1);

/// Exact volume used in predictions: 4, 32/3, 1024/45.
VolumeEstimate reference_volume(int g, std::uint64_t seed = 1, int workers = 1);

struct LatticeCountReport {
  std::int64_t q = 0;
  LatticeKind kind = LatticeKind::Lambda;
  std::int64_t count = 0;
  double prediction = 0;      // vol(V_g) / covolume
  double residual = 0;        // |count - prediction|
  double d_over_covolume = 0; // mesh / covolume
  double normalized = 0;      // residual * covolume / mesh
  double c_empirical = 0;
  double bound = 0;           // c_empirical * d / covolume
  bool pass = false;
};

struct LatticeVerification {
  std::vector<LatticeCountReport> reports;
  double c_empirical = 0;
  std::int64_t q_min = 0, q_max = 0;
};

/// Counts every q; c is the maximum normalized residual over the range unless
/// one is supplied, in which case each row is checked against it.
LatticeVerification verify_prop_lattice(LatticeKind kind, const std::vector<std::int64_t>& qs, int g,
                                        std::int64_t F, const std::vector<std::int64_t>& shift,
                                        double volume, std::optional<double> c = std::nullopt,
                                        int workers = 1);

std::string lattice_csv(const std::vector<LatticeCountReport>& reports);

struct Envelope {
  double L = 0;  // already divided by F^(2g)
  double R = 0;
  bool pre_asymptotic = false;  // L < 0
  bool contains(double x) const { return L <= x && x <= R; }
  double ratio() const { return L / R; }
};

Envelope im_envelope(std::int64_t q, int g, std::int64_t F, double volume, double c);

/// Ordinary classes with a ≡ m (mod F^2): count(Lambda_m) - count(Lambda'_m).
std::int64_t ordinary_count(std::int64_t q, int g, std::int64_t F, const std::vector<std::int64_t>& shift,
                            int workers = 1);

/// Smallest q in the ascending ladder from which every later count lies in
/// its envelope; nullopt when the last q fails.
std::optional<std::int64_t> measure_q0(const std::vector<std::int64_t>& ladder,
                                       const std::vector<std::int64_t>& counts, int g, std::int64_t F,
                                       double volume, double c);

}  // namespace weil
