#include "weil/enumeration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <zlib.h>

namespace weil {

std::string_view to_string(EnumerationMode mode) {
  return mode == EnumerationMode::OrdinaryOnly ? "ordinary-only" : "with-candidates";
}

EnumerationMode parse_mode(std::string_view text) {
  if (text == "ordinary-only") return EnumerationMode::OrdinaryOnly;
  if (text == "with-candidates") return EnumerationMode::WithCandidates;
  throw std::invalid_argument("unknown enumeration mode '" + std::string(text) + "'");
}

std::vector<IntRange> coefficient_box(std::int64_t q, int g) {
  if (g < 1) throw std::invalid_argument("g must be >= 1");
  std::vector<IntRange> box;
  for (int i = 1; i <= g; ++i) {
    // floor(C q^(i/2)) = floor(sqrt(C^2 q^i))
    BigInt c = BigInt(binomial(2 * g, i));
    BigInt qi;
    mpz_pow_ui(qi.get_mpz_t(), BigInt(q).get_mpz_t(), static_cast<unsigned long>(i));
    BigInt v = c * c * qi;
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), v.get_mpz_t());
    if (!root.fits_slong_p()) throw OverflowError("coefficient box exceeds int64");
    std::int64_t b = root.get_si();
    box.push_back({-b, b});
  }
  return box;
}

void require_supported_dimension(int g) {
  if (g < 1 || g > kMaxDimension)
    throw UnsupportedDimension("dimension g = " + std::to_string(g) +
                               " is not supported (enumeration handles 1 <= g <= 3)");
}

void require_within_cap(std::int64_t q, int g) {
  require_supported_dimension(g);
  auto box = coefficient_box(q, g);
  long double prefixes = 1;
  for (int i = 0; i + 1 < g; ++i) prefixes *= static_cast<long double>(box[i].size());
  // generous upper bounds on vol(V_g) for g = 1, 2, 3
  constexpr long double volume_bound[] = {0, 4.0L, 11.0L, 128.0L};
  long double records = volume_bound[g] * std::pow(static_cast<long double>(q), g * (g + 1) / 4.0L);
  if (prefixes > kMaxPrefixes || records > kMaxRecords) {
    std::ostringstream msg;
    msg << "enumeration of q=" << q << " g=" << g << " exceeds the work cap (~" << std::setprecision(3)
        << static_cast<double>(records) << " records, " << static_cast<double>(prefixes)
        << " prefixes)";
    throw CapExceeded(msg.str());
  }
}

namespace {

std::optional<IntRange> range_g1(const FieldParams& f) {
  std::int64_t b = isqrt(4 * f.q);
  return IntRange{-b, b};
}

std::optional<IntRange> range_g2(const FieldParams& f, std::int64_t a1) {
  const std::int64_t q = f.q;
  if (static_cast<i128>(a1) * a1 > static_cast<i128>(16) * q) return std::nullopt;
  // P(s) = s^2 + a1 s + (a2 - 2q): real roots iff 4 a2 <= a1^2 + 8q, and both
  // roots in [-2√q, 2√q] iff additionally a2 + 2q >= 2|a1|√q.
  std::int64_t hi = floor_div(a1 * a1 + 8 * q, 4);
  std::int64_t lo = ceil_sqrt(checked_mul(checked_mul(4 * a1, a1), q)) - 2 * q;
  if (lo > hi) return std::nullopt;
  return IntRange{lo, hi};
}

std::optional<IntRange> range_g3(const FieldParams& f, std::int64_t a1, std::int64_t a2) {
  const std::int64_t q = f.q;
  WeilCoefficients c(f, {a1, a2, 0});
  auto valid = [&](std::int64_t x) {
    c.a[2] = x;
    return is_weil_fast(c);
  };
  // Critical points of Q(s) = s^3 + a1 s^2 + (a2 - 3q) s; P = Q + (a3 - 2 q a1).
  const i128 disc = static_cast<i128>(4) * a1 * a1 - static_cast<i128>(12) * (a2 - 3 * q);
  if (disc < 0) return std::nullopt;
  using LD = long double;
  const LD B = 2 * std::sqrt(static_cast<LD>(q));
  const LD root = std::sqrt(static_cast<LD>(disc));
  const LD s1 = (-2 * static_cast<LD>(a1) - root) / 6;
  const LD s2 = (-2 * static_cast<LD>(a1) + root) / 6;
  if (s1 < -B * (1 + 1e-9L) - 1e-9L || s2 > B * (1 + 1e-9L) + 1e-9L) return std::nullopt;
  auto Q = [&](LD s) { return ((s + a1) * s + static_cast<LD>(a2 - 3 * q)) * s; };
  const LD shift = 2 * static_cast<LD>(q) * a1;
  const LD lo_f = std::max(-Q(s1), -Q(B)) + shift;
  const LD hi_f = std::min(-Q(s2), -Q(-B)) + shift;
  if (hi_f < lo_f - 1) return std::nullopt;

  auto scan = [&](std::int64_t from, std::int64_t to) -> std::optional<IntRange> {
    std::optional<IntRange> out;
    for (std::int64_t x = from; x <= to; ++x) {
      if (!valid(x)) continue;
      if (!out) out = IntRange{x, x};
      out->hi = x;
    }
    return out;
  };
  const auto from = static_cast<std::int64_t>(std::floor(lo_f)) - 2;
  const auto to = static_cast<std::int64_t>(std::ceil(hi_f)) + 2;
  if (hi_f - lo_f < 8) return scan(from, to);

  const auto mid = static_cast<std::int64_t>(std::llround((lo_f + hi_f) / 2));
  if (!valid(mid)) return scan(from, to);
  // valid set is an interval containing mid: bisect each edge exactly
  std::int64_t lo = from, hi = mid;  // lo invalid or unknown, hi valid
  auto guess = static_cast<std::int64_t>(std::ceil(lo_f));
  if (valid(guess) && !valid(guess - 1)) {
    lo = guess;
  } else {
    if (valid(lo)) lo = -coefficient_box(q, 3)[2].hi - 1;
    while (hi - lo > 1) {
      std::int64_t m = lo + (hi - lo) / 2;
      (valid(m) ? hi : lo) = m;
    }
    lo = hi;
  }
  std::int64_t up_lo = mid, up_hi = to;  // up_lo valid, up_hi invalid or unknown
  guess = static_cast<std::int64_t>(std::floor(hi_f));
  if (valid(guess) && !valid(guess + 1)) {
    up_lo = guess;
  } else {
    if (valid(up_hi)) up_hi = coefficient_box(q, 3)[2].hi + 1;
    while (up_hi - up_lo > 1) {
      std::int64_t m = up_lo + (up_hi - up_lo) / 2;
      (valid(m) ? up_lo : up_hi) = m;
    }
  }
  return IntRange{lo, up_lo};
}

}  // namespace

std::optional<IntRange> last_coefficient_range(const FieldParams& field, int g,
                                               std::span<const std::int64_t> prefix) {
  require_supported_dimension(g);
  if (static_cast<int>(prefix.size()) != g - 1)
    throw std::invalid_argument("prefix must have length g - 1");
  switch (g) {
    case 1:
      return range_g1(field);
    case 2:
      return range_g2(field, prefix[0]);
    default:
      return range_g3(field, prefix[0], prefix[1]);
  }
}

void enumerate_range(std::int64_t q, int g, EnumerationMode mode, IntRange a1_range,
                     const RecordSink& sink) {
  require_supported_dimension(g);
  const FieldParams field = FieldParams::from_q(q);
  const auto box = coefficient_box(q, g);
  const std::int64_t p = field.p;
  const std::int64_t s = field.s;

  IsogenyClassRecord rec;
  rec.coeffs = WeilCoefficients(field, std::vector<std::int64_t>(g, 0));
  auto& a = rec.coeffs.a;

  // f(1) and f'(1) are affine in a_g with slopes 1 and g.
  auto emit_last = [&](IntRange last) {
    a[g - 1] = 0;
    const std::int64_t f1_base = f_at_one_i64(rec.coeffs);
    const std::int64_t fp1_base = fprime_at_one_i64(rec.coeffs);
    a[g - 1] = last.hi;
    f_at_one_i64(rec.coeffs);  // range check at both ends
    a[g - 1] = last.lo;
    f_at_one_i64(rec.coeffs);
    for (std::int64_t x = last.lo; x <= last.hi; ++x) {
      const bool ordinary = x % p != 0;
      if (!ordinary && (mode == EnumerationMode::OrdinaryOnly || x % s != 0)) continue;
      a[g - 1] = x;
      rec.f1 = f1_base + x;
      rec.fp1 = fp1_base + static_cast<std::int64_t>(g) * x;
      rec.ordinary = ordinary;
      rec.candidate_only = !ordinary;
      sink(rec);
    }
  };

  if (g == 1) {
    auto r = *last_coefficient_range(field, 1, {});
    r.lo = std::max(r.lo, a1_range.lo);
    r.hi = std::min(r.hi, a1_range.hi);
    if (!r.empty()) emit_last(r);
    return;
  }
  const std::int64_t a1_lo = std::max(a1_range.lo, box[0].lo);
  const std::int64_t a1_hi = std::min(a1_range.hi, box[0].hi);
  for (std::int64_t a1 = a1_lo; a1 <= a1_hi; ++a1) {
    a[0] = a1;
    if (g == 2) {
      if (auto r = last_coefficient_range(field, 2, std::span(a.data(), 1))) emit_last(*r);
      continue;
    }
    for (std::int64_t a2 = box[1].lo; a2 <= box[1].hi; ++a2) {
      a[1] = a2;
      if (auto r = last_coefficient_range(field, 3, std::span(a.data(), 2))) emit_last(*r);
    }
  }
}

void for_each_record(std::int64_t q, int g, EnumerationMode mode, const RecordSink& sink) {
  require_within_cap(q, g);
  enumerate_range(q, g, mode, coefficient_box(q, g)[0], sink);
}

std::vector<IntRange> a1_partitions(std::int64_t q, int g, int parts) {
  const IntRange full = coefficient_box(q, g)[0];
  parts = std::max<std::int64_t>(1, std::min<std::int64_t>(parts, full.size()));
  std::vector<IntRange> out;
  const std::int64_t n = full.size();
  for (int i = 0; i < parts; ++i) {
    std::int64_t lo = full.lo + n * i / parts;
    std::int64_t hi = full.lo + n * (i + 1) / parts - 1;
    out.push_back({lo, hi});
  }
  return out;
}

void run_partitioned(const std::vector<IntRange>& parts, int workers,
                     const std::function<void(std::size_t, IntRange)>& work) {
  workers = std::max(1, workers);
  if (workers == 1 || parts.size() <= 1) {
    for (std::size_t i = 0; i < parts.size(); ++i) work(i, parts[i]);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(parts.size());
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < parts.size(); i = next++) {
        try {
          work(i, parts[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<IsogenyClassRecord> enumerate_records(std::int64_t q, int g, EnumerationMode mode,
                                                  int workers) {
  require_within_cap(q, g);
  const auto parts = a1_partitions(q, g, std::max(1, workers) * 4);
  std::vector<std::vector<IsogenyClassRecord>> chunks(parts.size());
  run_partitioned(parts, workers, [&](std::size_t i, IntRange r) {
    enumerate_range(q, g, mode, r, [&](const IsogenyClassRecord& rec) { chunks[i].push_back(rec); });
  });
  std::vector<IsogenyClassRecord> out;
  for (auto& c : chunks) out.insert(out.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
  return out;
}

std::string hex32(std::uint32_t value) {
  std::ostringstream os;
  os << std::hex << std::setw(8) << std::setfill('0') << value;
  return os.str();
}

std::string cache_header(std::int64_t q, int g, EnumerationMode mode) {
  return "weil-census v1 q=" + std::to_string(q) + " g=" + std::to_string(g) +
         " mode=" + std::string(to_string(mode)) + "\n";
}

std::string cache_row(const IsogenyClassRecord& rec) {
  std::string row;
  for (auto x : rec.coeffs.a) row += std::to_string(x) + ",";
  row += std::to_string(rec.f1) + "," + std::to_string(rec.fp1) + ",";
  row += rec.ordinary ? "1," : "0,";
  row += rec.candidate_only ? "1\n" : "0\n";
  return row;
}

namespace {

std::uint32_t crc_update(std::uint32_t crc, const std::string& bytes) {
  return static_cast<std::uint32_t>(
      ::crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

}  // namespace

EnumerationManifest build_manifest(std::int64_t q, int g, EnumerationMode mode,
                                   const std::vector<IsogenyClassRecord>& records) {
  EnumerationManifest m;
  m.q = q;
  m.g = g;
  m.mode = mode;
  m.total = static_cast<std::int64_t>(records.size());
  std::uint32_t crc = crc_update(0, cache_header(q, g, mode));
  for (const auto& rec : records) {
    crc = crc_update(crc, cache_row(rec));
    const std::int64_t a1 = rec.coeffs.a[0];
    if (m.partitions.empty() || m.partitions.back().a1 != a1) m.partitions.push_back({a1, 0});
    ++m.partitions.back().count;
  }
  m.checksum = crc;
  return m;
}

EnumerationManifest persist(const std::filesystem::path& path, std::int64_t q, int g,
                            EnumerationMode mode, const std::vector<IsogenyClassRecord>& records) {
  auto manifest = build_manifest(q, g, mode, records);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp);
    out << cache_header(q, g, mode);
    for (const auto& rec : records) out << cache_row(rec);
    out << "count=" << manifest.total << " crc32=" << hex32(manifest.checksum) << "\n";
    if (!out) throw std::runtime_error("failed writing cache file " + tmp);
  }
  std::filesystem::rename(tmp, path);
  return manifest;
}

namespace {

std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw CacheCorrupt("bad integer field '" + s + "'");
  }
  if (used != s.size()) throw CacheCorrupt("bad integer field '" + s + "'");
  return v;
}

std::string after_prefix(const std::string& token, const std::string& prefix) {
  if (token.rfind(prefix, 0) != 0) throw CacheCorrupt("expected '" + prefix + "' in '" + token + "'");
  return token.substr(prefix.size());
}

}  // namespace

Census load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open cache file " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  if (lines.size() < 2) throw CacheCorrupt("cache file truncated");

  // trailer first: damage anywhere must surface as a checksum failure
  std::istringstream trailer(lines.back());
  std::string count_tok, crc_tok;
  trailer >> count_tok >> crc_tok;
  const std::int64_t count = parse_int(after_prefix(count_tok, "count="));
  const std::string crc_hex = after_prefix(crc_tok, "crc32=");
  std::uint32_t crc = 0;
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) crc = crc_update(crc, lines[i] + "\n");
  if (hex32(crc) != crc_hex) throw CacheCorrupt("checksum mismatch: file says " + crc_hex + ", content is " + hex32(crc));

  std::istringstream header(lines.front());
  std::string magic, version, q_tok, g_tok, mode_tok;
  header >> magic >> version >> q_tok >> g_tok >> mode_tok;
  if (magic != "weil-census" || version != "v1") throw CacheCorrupt("not a weil-census v1 file");
  const std::int64_t q = parse_int(after_prefix(q_tok, "q="));
  const int g = static_cast<int>(parse_int(after_prefix(g_tok, "g=")));
  EnumerationMode mode;
  try {
    mode = parse_mode(after_prefix(mode_tok, "mode="));
  } catch (const std::invalid_argument& e) {
    throw CacheCorrupt(e.what());
  }
  const FieldParams field = FieldParams::from_q(q);

  Census census;
  census.records.reserve(lines.size() - 2);
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    std::vector<std::string> fields;
    std::istringstream row(lines[i]);
    for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
    if (static_cast<int>(fields.size()) != g + 4) throw CacheCorrupt("bad row " + std::to_string(i));
    IsogenyClassRecord rec;
    std::vector<std::int64_t> a;
    for (int k = 0; k < g; ++k) a.push_back(parse_int(fields[k]));
    rec.coeffs = WeilCoefficients(field, std::move(a));
    rec.f1 = parse_int(fields[g]);
    rec.fp1 = parse_int(fields[g + 1]);
    rec.ordinary = parse_int(fields[g + 2]) != 0;
    rec.candidate_only = parse_int(fields[g + 3]) != 0;
    census.records.push_back(std::move(rec));
  }
  if (static_cast<std::int64_t>(census.records.size()) != count) throw CacheCorrupt("record count mismatch");
  census.manifest = build_manifest(q, g, mode, census.records);
  return census;
}

}  // namespace weil
