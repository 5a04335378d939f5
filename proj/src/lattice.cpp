#include "weil/lattice.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace weil {

std::string_view to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Lambda:
      return "lambda";
    case LatticeKind::LambdaPrime:
      return "lambda-prime";
    default:
      return "lambda-double-prime";
  }
}

LatticeKind parse_kind(std::string_view text) {
  if (text == "lambda") return LatticeKind::Lambda;
  if (text == "lambda-prime") return LatticeKind::LambdaPrime;
  if (text == "lambda-double-prime") return LatticeKind::LambdaDoublePrime;
  throw std::invalid_argument("unknown lattice kind '" + std::string(text) + "'");
}

double QMonomial::value(std::int64_t q) const {
  return coef.get_d() * std::pow(static_cast<double>(q), half_exp / 2.0);
}

int QMonomial::compare(const QMonomial& a, const QMonomial& b, std::int64_t q) {
  // compare squares: coef^2 q^half_exp, shifted to non-negative exponents
  const int base = std::min(a.half_exp, b.half_exp);
  BigInt qa, qb;
  mpz_pow_ui(qa.get_mpz_t(), BigInt(q).get_mpz_t(), static_cast<unsigned long>(a.half_exp - base));
  mpz_pow_ui(qb.get_mpz_t(), BigInt(q).get_mpz_t(), static_cast<unsigned long>(b.half_exp - base));
  const Rational lhs = a.coef * a.coef * Rational(qa);
  const Rational rhs = b.coef * b.coef * Rational(qb);
  return cmp(lhs, rhs) < 0 ? -1 : (cmp(lhs, rhs) > 0 ? 1 : 0);
}

LatticeSpec LatticeSpec::make(LatticeKind kind, std::int64_t q, int g, std::int64_t F,
                              std::vector<std::int64_t> shift) {
  require_supported_dimension(g);
  if (F < 1) throw std::invalid_argument("F must be >= 1");
  LatticeSpec s;
  s.kind = kind;
  s.field = FieldParams::from_q(q);
  s.g = g;
  s.F = F;
  const std::int64_t F2 = checked_mul(F, F);
  if (shift.empty()) shift.assign(g, 0);
  if (static_cast<int>(shift.size()) != g) throw std::invalid_argument("shift must have length g");
  for (auto& m : shift) m = mod(m, F2);
  s.shift = std::move(shift);
  s.G = Rational(g * (g + 1), 4);
  s.G.canonicalize();
  s.last_divisor = kind == LatticeKind::Lambda ? 1 : (kind == LatticeKind::LambdaPrime ? s.field.p : s.field.s);

  for (int i = 1; i <= g; ++i) {
    const std::int64_t k = i == g ? s.last_divisor : 1;
    s.edges.push_back({Rational(F2 * k), -i});
  }
  BigInt vol = 1;
  for (int i = 0; i < g; ++i) vol *= BigInt(F2);
  s.covolume = {Rational(vol * BigInt(s.last_divisor)), -g * (g + 1) / 2};
  s.mesh = s.edges.front();
  for (const auto& e : s.edges)
    if (QMonomial::compare(e, s.mesh, q) > 0) s.mesh = e;

  switch (kind) {
    case LatticeKind::Lambda:
      s.table_mesh = {Rational(F2), -1};
      break;
    case LatticeKind::LambdaPrime:
      s.table_mesh = (g == 2 && q == s.field.p) ? QMonomial{Rational(F2), 0} : QMonomial{Rational(F2), -1};
      break;
    case LatticeKind::LambdaDoublePrime:
      s.table_mesh = {Rational(F2), 0};
      s.table_mesh_is_bound = true;
      break;
  }
  return s;
}

std::int64_t count_points(const LatticeSpec& spec, int workers) {
  const std::int64_t q = spec.field.q;
  const int g = spec.g;
  require_within_cap(q, g);
  const std::int64_t D = spec.F * spec.F;
  const std::int64_t k = spec.last_divisor;
  // a_g ≡ m_g (mod D) and a_g ≡ 0 (mod k): one class mod lcm(D, k), or none
  const std::int64_t lcm = D / gcd(D, k) * k;
  std::optional<std::int64_t> last_class;
  for (std::int64_t x = spec.shift[g - 1]; x < lcm; x += D)
    if (x % k == 0) {
      last_class = x;
      break;
    }
  if (!last_class) return 0;

  auto count_last = [&](const std::optional<IntRange>& r) -> std::int64_t {
    return r ? count_in_class(r->lo, r->hi, *last_class, lcm) : 0;
  };
  if (g == 1) return count_last(last_coefficient_range(spec.field, 1, {}));

  const auto box = coefficient_box(q, g);
  const auto parts = a1_partitions(q, g, std::max(1, workers) * 4);
  std::vector<std::int64_t> partial(parts.size(), 0);
  run_partitioned(parts, workers, [&](std::size_t idx, IntRange r) {
    std::int64_t local = 0;
    std::int64_t prefix[2] = {0, 0};
    const std::int64_t a1_start = r.lo + mod(spec.shift[0] - r.lo, D);
    for (std::int64_t a1 = a1_start; a1 <= r.hi; a1 += D) {
      prefix[0] = a1;
      if (g == 2) {
        local += count_last(last_coefficient_range(spec.field, 2, std::span(prefix, 1)));
        continue;
      }
      const std::int64_t a2_start = box[1].lo + mod(spec.shift[1] - box[1].lo, D);
      for (std::int64_t a2 = a2_start; a2 <= box[1].hi; a2 += D) {
        prefix[1] = a2;
        local += count_last(last_coefficient_range(spec.field, 3, std::span(prefix, 2)));
      }
    }
    partial[idx] = local;
  });
  std::int64_t total = 0;
  for (auto c : partial) total += c;
  return total;
}

VolumeEstimate volume_Vg(int g, std::int64_t samples, std::uint64_t seed, int workers) {
  require_supported_dimension(g);
  VolumeEstimate est;
  est.g = g;
  est.seed = seed;
  if (g == 1) {
    est.value = 4;
    est.exact = true;
    return est;
  }
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  // b_i = a_i / D^i is in V_g iff a is a Weil vector for q = D^2
  const int log_d = g == 2 ? 16 : 12;
  const std::int64_t D = std::int64_t{1} << log_d;
  const FieldParams field = FieldParams::from_q(D * D);
  std::vector<std::int64_t> half(g);
  double box_volume = 1;
  for (int i = 1; i <= g; ++i) {
    half[i - 1] = binomial(2 * g, i) * checked_pow(D, i);
    box_volume *= 2.0 * binomial(2 * g, i);
  }
  constexpr std::int64_t kBlock = 1 << 14;
  const std::int64_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<IntRange> parts;
  for (std::int64_t b = 0; b < blocks; ++b) parts.push_back({b, b});
  std::vector<std::int64_t> hits(blocks, 0);
  run_partitioned(parts, workers, [&](std::size_t idx, IntRange) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(idx)};
    std::mt19937_64 rng(seq);
    const std::int64_t n = std::min(kBlock, samples - static_cast<std::int64_t>(idx) * kBlock);
    WeilCoefficients c(field, std::vector<std::int64_t>(g, 0));
    std::int64_t local = 0;
    for (std::int64_t s = 0; s < n; ++s) {
      for (int i = 0; i < g; ++i) c.a[i] = std::uniform_int_distribution<std::int64_t>(-half[i], half[i])(rng);
      local += is_weil_fast(c);
    }
    hits[idx] = local;
  });
  std::int64_t total_hits = 0;
  for (auto h : hits) total_hits += h;
  const double p = static_cast<double>(total_hits) / static_cast<double>(samples);
  est.samples = samples;
  est.value = box_volume * p;
  est.std_error = box_volume * std::sqrt(p * (1 - p) / static_cast<double>(samples));
  return est;
}

VolumeEstimate reference_volume(int g, std::uint64_t seed, int) {
  require_supported_dimension(g);
  // (1/g!) * integral of |Vandermonde| over [-2,2]^g
  static constexpr double kExact[] = {0, 4.0, 32.0 / 3.0, 1024.0 / 45.0};
  VolumeEstimate est;
  est.g = g;
  est.value = kExact[g];
  est.exact = true;
  est.seed = seed;
  return est;
}

LatticeVerification verify_prop_lattice(LatticeKind kind, const std::vector<std::int64_t>& qs, int g,
                                        std::int64_t F, const std::vector<std::int64_t>& shift,
                                        double volume, std::optional<double> c, int workers) {
  LatticeVerification out;
  if (qs.empty()) return out;
  out.q_min = *std::min_element(qs.begin(), qs.end());
  out.q_max = *std::max_element(qs.begin(), qs.end());
  double c_max = 0;
  for (auto q : qs) {
    const auto spec = LatticeSpec::make(kind, q, g, F, shift);
    LatticeCountReport r;
    r.q = q;
    r.kind = kind;
    r.count = count_points(spec, workers);
    const double covolume = spec.covolume.value(q);
    r.prediction = volume / covolume;
    r.residual = std::abs(static_cast<double>(r.count) - r.prediction);
    r.d_over_covolume = spec.mesh.value(q) / covolume;
    r.normalized = r.residual / r.d_over_covolume;
    c_max = std::max(c_max, r.normalized);
    out.reports.push_back(r);
  }
  out.c_empirical = c.value_or(c_max);
  for (auto& r : out.reports) {
    r.c_empirical = out.c_empirical;
    r.bound = out.c_empirical * r.d_over_covolume;
    r.pass = r.residual <= r.bound * (1 + 1e-12);
  }
  return out;
}

std::string lattice_csv(const std::vector<LatticeCountReport>& reports) {
  std::ostringstream os;
  os << "q,kind,count,prediction,residual,c_empirical,pass\n";
  os << std::fixed << std::setprecision(6);
  for (const auto& r : reports)
    os << r.q << "," << to_string(r.kind) << "," << r.count << "," << r.prediction << "," << r.residual << ","
       << r.c_empirical << "," << (r.pass ? "true" : "false") << "\n";
  return os.str();
}

Envelope im_envelope(std::int64_t q, int g, std::int64_t F, double volume, double c) {
  const FieldParams field = FieldParams::from_q(q);
  const double r = 1.0 - 1.0 / static_cast<double>(field.p);
  const double G = g * (g + 1) / 4.0;
  const double qG = std::pow(static_cast<double>(q), G);
  const double qG_half = std::pow(static_cast<double>(q), G - 0.5);
  const double F2 = static_cast<double>(F) * static_cast<double>(F);
  const double scale = std::pow(F2, -g);
  Envelope e;
  e.L = (volume * r * qG - 2 * F2 * c * qG_half) * scale;
  e.R = (volume * r * qG + (volume + 3 * F2 * c) * qG_half) * scale;
  e.pre_asymptotic = e.L < 0;
  return e;
}

std::int64_t ordinary_count(std::int64_t q, int g, std::int64_t F, const std::vector<std::int64_t>& shift,
                            int workers) {
  return count_points(LatticeSpec::make(LatticeKind::Lambda, q, g, F, shift), workers) -
         count_points(LatticeSpec::make(LatticeKind::LambdaPrime, q, g, F, shift), workers);
}

std::optional<std::int64_t> measure_q0(const std::vector<std::int64_t>& ladder,
                                       const std::vector<std::int64_t>& counts, int g, std::int64_t F,
                                       double volume, double c) {
  if (ladder.size() != counts.size()) throw std::invalid_argument("ladder and counts differ in length");
  std::optional<std::int64_t> q0;
  for (std::size_t i = ladder.size(); i-- > 0;) {
    if (!im_envelope(ladder[i], g, F, volume, c).contains(static_cast<double>(counts[i]))) break;
    q0 = ladder[i];
  }
  return q0;
}

}  // namespace weil
