#include "topo/seq.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace topo {

namespace {

long mod_pos(long v, long m) {
  long r = v % m;
  return r < 0 ? r + m : r;
}

long mod_mul(long a, long b, long m) {
  return (long)((__int128)a * b % m);
}

long mod_inv(long a, long m) {
  long r0 = m, r1 = mod_pos(a, m), s0 = 0, s1 = 1;
  while (r1 != 0) {
    long q = r0 / r1;
    std::swap(r0 -= q * r1, r1);
    std::swap(s0 -= q * s1, s1);
  }
  if (r0 != 1) throw std::logic_error("mod_inv of a non-unit");
  return mod_pos(s0, m);
}

int val_p(long v, long p) {
  int k = 0;
  while (v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

long pow_long(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::vector<std::pair<long, int>> factorize(long m) {
  std::vector<std::pair<long, int>> out;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

}  // namespace

std::vector<long> reduce_mod(const std::vector<BigInt>& values, long m) {
  if (m < 2) throw std::invalid_argument("modulus must be >= 2");
  std::vector<long> out;
  out.reserve(values.size());
  for (const BigInt& v : values) {
    BigInt r = v % m;
    if (r < 0) r += m;
    out.push_back(r.get_si());
  }
  return out;
}

std::optional<PeriodReport> detect_eventual_period(
    const std::vector<long>& residues, long m) {
  const int len = (int)residues.size();
  for (int p = 1; 3 * p <= len; ++p) {
    // Smallest preperiod consistent with the whole prefix for this period.
    int q = 0;
    for (int i = 0; i + p < len; ++i)
      if (residues[i] != residues[i + p]) q = i + 1;
    double confidence = (double)(len - q) / p;
    if (confidence >= 3.0)
      return PeriodReport{(int)m, q, p, confidence};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Shift-register synthesis over Z_{p^e}
// ---------------------------------------------------------------------------

// Textbook Berlekamp-Massey over GF(p). Returns the minimal register; the
// connection polynomial keeps constant term 1 throughout.
LfsrSynthesis berlekamp_massey(const std::vector<long>& seq, long p) {
  const int n_terms = (int)seq.size();
  std::vector<long> current{1}, previous{1};
  int length = 0, last_fail = -1;
  long last_disc = 1;

  for (int n = 0; n < n_terms; ++n) {
    __int128 acc = 0;
    for (int i = 0; i < (int)current.size() && i <= n; ++i)
      acc += (__int128)current[i] * mod_pos(seq[n - i], p);
    long d = mod_pos((long)(acc % p), p);
    if (d == 0) continue;
    long ratio = mod_mul(d, mod_inv(last_disc, p), p);
    int shift = n - last_fail;
    std::vector<long> repaired = current;
    if ((int)repaired.size() < shift + (int)previous.size())
      repaired.resize(shift + previous.size(), 0);
    for (int i = 0; i < (int)previous.size(); ++i)
      repaired[shift + i] =
          mod_pos(repaired[shift + i] - mod_mul(ratio, previous[i], p), p);
    if (2 * length <= n) {
      previous = current;
      last_fail = n;
      last_disc = d;
      length = n + 1 - length;
    }
    current = std::move(repaired);
  }

  LfsrSynthesis out;
  out.length = length;
  out.connection = current;
  out.connection.resize(length + 1, 0);
  return out;
}

namespace {

// Solution of A x ≡ b (mod p): particular solution and a nullspace basis.
struct GfSolution {
  std::vector<long> particular;
  std::vector<std::vector<long>> nullspace;  // basis vectors, length = cols
};

std::optional<GfSolution> solve_gf(std::vector<std::vector<long>> rows,
                                   std::vector<long> rhs, long p) {
  const int n_rows = (int)rows.size();
  const int cols = n_rows == 0 ? 0 : (int)rows[0].size();
  for (auto& row : rows)
    for (auto& v : row) v = mod_pos(v, p);
  for (auto& v : rhs) v = mod_pos(v, p);

  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < cols && rank < n_rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < n_rows; ++r)
      if (rows[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    std::swap(rhs[rank], rhs[pivot]);
    long inv = mod_inv(rows[rank][col], p);
    for (int c = col; c < cols; ++c)
      rows[rank][c] = mod_mul(rows[rank][c], inv, p);
    rhs[rank] = mod_mul(rhs[rank], inv, p);
    for (int r = 0; r < n_rows; ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      long factor = rows[r][col];
      for (int c = col; c < cols; ++c)
        rows[r][c] = mod_pos(rows[r][c] - mod_mul(factor, rows[rank][c], p), p);
      rhs[r] = mod_pos(rhs[r] - mod_mul(factor, rhs[rank], p), p);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (int r = rank; r < n_rows; ++r)
    if (rhs[r] != 0) return std::nullopt;

  GfSolution out;
  out.particular.assign(cols, 0);
  for (int r = 0; r < rank; ++r) out.particular[pivot_col[r]] = rhs[r];
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  for (int free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<long> basis(cols, 0);
    basis[free_col] = 1;
    for (int r = 0; r < rank; ++r)
      basis[pivot_col[r]] = mod_pos(-rows[r][free_col], p);
    out.nullspace.push_back(std::move(basis));
  }
  return out;
}

}  // namespace

// Hensel-style lifting for linear systems: solve mod p, write
// x = x0 + N t + p y, and push the whole solution space into the next layer
// as the system [ (A N)/p | A ] (t; y) ≡ (b - A x0)/p (mod p^{e-1}).
std::optional<std::vector<long>> solve_linear_mod_prime_power(
    std::vector<std::vector<long>> a, std::vector<long> b, long p, int e) {
  const long m = pow_long(p, e);
  const int n_rows = (int)a.size();
  const int cols = n_rows == 0 ? 0 : (int)a[0].size();
  if (n_rows == 0) return std::vector<long>(cols, 0);

  auto base = solve_gf(a, b, p);
  if (!base) return std::nullopt;
  if (e == 1) return base->particular;

  const int k = (int)base->nullspace.size();
  std::vector<std::vector<long>> lifted(n_rows,
                                        std::vector<long>(k + cols, 0));
  std::vector<long> rhs(n_rows, 0);
  const long next_mod = m / p;
  for (int r = 0; r < n_rows; ++r) {
    __int128 row_dot_x0 = 0;
    for (int c = 0; c < cols; ++c)
      row_dot_x0 += (__int128)a[r][c] * base->particular[c];
    __int128 rem = (__int128)mod_pos(b[r], m) - row_dot_x0;
    // (b - A x0) is divisible by p modulo p^e.
    long reduced = (long)(((rem % m) + m) % m);
    rhs[r] = (reduced / p) % next_mod;
    for (int j = 0; j < k; ++j) {
      __int128 dot = 0;
      for (int c = 0; c < cols; ++c)
        dot += (__int128)a[r][c] * base->nullspace[j][c];
      long v = (long)(((dot % m) + m) % m);
      lifted[r][j] = (v / p) % next_mod;
    }
    for (int c = 0; c < cols; ++c)
      lifted[r][k + c] = mod_pos(a[r][c], next_mod);
  }
  auto tail = solve_linear_mod_prime_power(std::move(lifted), std::move(rhs),
                                           p, e - 1);
  if (!tail) return std::nullopt;

  std::vector<long> solution(cols);
  for (int c = 0; c < cols; ++c) {
    __int128 v = base->particular[c];
    for (int j = 0; j < k; ++j)
      v += (__int128)(*tail)[j] * base->nullspace[j][c];
    v += (__int128)p * (*tail)[k + c];
    solution[c] = (long)(((v % m) + m) % m);
  }
  return solution;
}

std::optional<std::vector<long>> minimal_recurrence_prime_power(
    const std::vector<long>& seq, long p, int e, int max_order) {
  const long m = pow_long(p, e);
  const int len = (int)seq.size();

  bool all_zero = true;
  for (long v : seq)
    if (mod_pos(v, m) != 0) all_zero = false;
  if (all_zero) return max_order >= 1 ? std::optional<std::vector<long>>{{0}}
                                      : std::nullopt;

  if (e == 1) {
    LfsrSynthesis syn = berlekamp_massey(seq, p);
    if (syn.length > max_order || syn.length == 0) {
      if (syn.length == 0) return std::vector<long>{0};
      return std::nullopt;
    }
    std::vector<long> coeffs(syn.length);
    for (int j = 1; j <= syn.length; ++j)
      coeffs[j - 1] = mod_pos(-syn.connection[j], p);
    return coeffs;
  }

  for (int d = 1; d <= max_order; ++d) {
    if (len <= d) break;
    std::vector<std::vector<long>> rows;
    std::vector<long> rhs;
    for (int n = 0; n + d < len; ++n) {
      std::vector<long> row(d);
      for (int i = 0; i < d; ++i) row[i] = mod_pos(seq[n + d - 1 - i], m);
      rows.push_back(std::move(row));
      rhs.push_back(mod_pos(seq[n + d], m));
    }
    auto solution = solve_linear_mod_prime_power(rows, rhs, p, e);
    if (solution) return solution;  // c_1..c_d for s(n) = sum c_j s(n-j)
  }
  return std::nullopt;
}

namespace {

// Replay s(n+p) ≡ sum c_i s(n+i) (mod m) over the whole prefix from offset q.
bool replays(const std::vector<long>& residues, long m,
             const ModularRecurrence& rec) {
  for (int n = rec.offset; n + rec.order < (int)residues.size(); ++n) {
    __int128 acc = 0;
    for (int i = 0; i < rec.order; ++i)
      acc += (__int128)rec.coeffs[i] * residues[n + i];
    if (mod_pos((long)(acc % m), m) != mod_pos(residues[n + rec.order], m))
      return false;
  }
  return true;
}

}  // namespace

std::optional<ModularRecurrence> find_modular_recurrence(
    const std::vector<long>& residues, long m, int max_order) {
  if (m < 2) throw std::invalid_argument("modulus must be >= 2");
  const int len = (int)residues.size();
  if (len < 2 * max_order + 4)
    throw std::invalid_argument("prefix too short: need at least " +
                                std::to_string(2 * max_order + 4) + " terms");
  const auto factors = factorize(m);

  struct Candidate {
    int order;
    int offset;
    std::vector<std::vector<long>> factor_coeffs;  // c_1..c_d per factor
  };
  std::optional<Candidate> best;

  for (int q = 0; q <= len / 4; ++q) {
    std::vector<long> suffix(residues.begin() + q, residues.end());
    int order = 0;
    std::vector<std::vector<long>> factor_coeffs;
    bool ok = true;
    for (auto [p, e] : factors) {
      long pe = pow_long(p, e);
      std::vector<long> reduced;
      reduced.reserve(suffix.size());
      for (long v : suffix) reduced.push_back(mod_pos(v, pe));
      auto coeffs = minimal_recurrence_prime_power(reduced, p, e, max_order);
      if (!coeffs) {
        ok = false;
        break;
      }
      order = std::max(order, (int)coeffs->size());
      factor_coeffs.push_back(*std::move(coeffs));
    }
    if (!ok) continue;
    if (!best || order < best->order)
      best = Candidate{order, q, std::move(factor_coeffs)};
    if (best && best->order == 1 && best->offset == 0) break;
  }
  if (!best) return std::nullopt;

  // CRT-combine the per-factor coefficients of s(n-j) into residues mod m.
  ModularRecurrence rec;
  rec.modulus = (int)m;
  rec.order = best->order;
  rec.offset = best->offset;
  rec.coeffs.assign(best->order, 0);
  for (int j = 1; j <= best->order; ++j) {
    long combined = 0, modulus_so_far = 1;
    for (size_t f = 0; f < factors.size(); ++f) {
      long pe = pow_long(factors[f].first, factors[f].second);
      const auto& coeffs = best->factor_coeffs[f];
      long want = j <= (int)coeffs.size() ? mod_pos(coeffs[j - 1], pe) : 0;
      long inv = mod_inv(modulus_so_far % pe, pe);
      long diff = mod_pos(want - combined % pe, pe);
      combined = combined + modulus_so_far * mod_mul(diff, inv, pe);
      modulus_so_far *= pe;
    }
    rec.coeffs[best->order - j] = mod_pos(combined, m);
  }

  if (!replays(residues, m, rec))
    throw std::logic_error("modular recurrence failed its replay check");
  return rec;
}

// ---------------------------------------------------------------------------
// Integer recurrences over exact rationals
// ---------------------------------------------------------------------------

namespace {

// Gaussian elimination; returns a particular solution (free variables 0) or
// nullopt when inconsistent. Rows are augmented with the right-hand side.
std::optional<std::vector<mpq_class>> solve_rational(
    std::vector<std::vector<mpq_class>> rows, int cols) {
  const int n_rows = (int)rows.size();
  std::vector<int> pivot_col_of_row;
  int row = 0;
  for (int col = 0; col < cols && row < n_rows; ++col) {
    int pivot = -1;
    for (int r = row; r < n_rows; ++r)
      if (rows[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[row], rows[pivot]);
    mpq_class inv = rows[row][col];
    for (int c = col; c <= cols; ++c) rows[row][c] /= inv;
    for (int r = 0; r < n_rows; ++r) {
      if (r == row || rows[r][col] == 0) continue;
      mpq_class factor = rows[r][col];
      for (int c = col; c <= cols; ++c) rows[r][c] -= factor * rows[row][c];
    }
    pivot_col_of_row.push_back(col);
    ++row;
  }
  for (int r = row; r < n_rows; ++r)
    if (rows[r][cols] != 0) return std::nullopt;
  std::vector<mpq_class> solution(cols, mpq_class(0));
  for (int r = 0; r < row; ++r)
    solution[pivot_col_of_row[r]] = rows[r][cols];
  return solution;
}

int rational_rank(std::vector<std::vector<mpq_class>> rows, int cols) {
  const int n_rows = (int)rows.size();
  int rank = 0;
  for (int col = 0; col < cols && rank < n_rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < n_rows; ++r)
      if (rows[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = rank + 1; r < n_rows; ++r) {
      if (rows[r][col] == 0) continue;
      mpq_class factor = rows[r][col] / rows[rank][col];
      for (int c = col; c < cols; ++c) rows[r][c] -= factor * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

bool replays_exact(const std::vector<BigInt>& values, const Recurrence& rec) {
  for (int n = rec.offset; n + rec.order < (int)values.size(); ++n) {
    mpq_class acc = 0;
    for (int i = 0; i < rec.order; ++i)
      acc += rec.coeffs[i] * mpq_class(values[n + i]);
    if (acc != mpq_class(values[n + rec.order])) return false;
  }
  return true;
}

}  // namespace

IntegerRecurrenceResult find_integer_recurrence(
    const std::vector<BigInt>& values, int max_order) {
  const int len = (int)values.size();
  if (len < 2 * max_order + 2)
    throw std::invalid_argument("prefix too short: need at least " +
                                std::to_string(2 * max_order + 2) + " terms");
  IntegerRecurrenceResult result;

  for (int p = 1; p <= max_order; ++p) {
    // Rank of the order-p system at offset 0, kept as evidence.
    std::vector<std::vector<mpq_class>> coeff_rows;
    for (int n = 0; n + p < len; ++n) {
      std::vector<mpq_class> r;
      for (int i = 0; i < p; ++i) r.emplace_back(values[n + i]);
      coeff_rows.push_back(std::move(r));
    }
    result.rank_profile.push_back(rational_rank(coeff_rows, p));

    for (int q = 0; q <= len / 4; ++q) {
      const int equations = len - p - q;
      if (equations < p + 1) break;  // too little evidence at this offset
      std::vector<std::vector<mpq_class>> rows;
      for (int n = q; n + p < len; ++n) {
        std::vector<mpq_class> r;
        for (int i = 0; i < p; ++i) r.emplace_back(values[n + i]);
        r.emplace_back(values[n + p]);
        rows.push_back(std::move(r));
      }
      auto solution = solve_rational(std::move(rows), p);
      if (!solution) continue;
      Recurrence rec{p, q, *std::move(solution)};
      if (!replays_exact(values, rec))
        throw std::logic_error("integer recurrence failed its replay check");
      result.recurrence = std::move(rec);
      return result;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Chunk statistics and the MC-finiteness report
// ---------------------------------------------------------------------------

ChunkFrequencyReport chunk_frequencies(const std::vector<long>& residues,
                                       int base, int length) {
  if (base < 2) throw std::invalid_argument("base must be >= 2");
  if (length < 1) throw std::invalid_argument("chunk length must be >= 1");
  if ((int)residues.size() < length)
    throw std::invalid_argument("prefix shorter than one chunk");
  for (long v : residues)
    if (v < 0 || v >= base)
      throw std::invalid_argument("residue out of range for base " +
                                  std::to_string(base));

  ChunkFrequencyReport report;
  report.base = base;
  report.length = length;
  report.chunks = (long)residues.size() / length;

  std::map<std::string, long> counts;
  for (long c = 0; c < report.chunks; ++c) {
    std::string chunk;
    for (int i = 0; i < length; ++i) {
      long digit = residues[c * length + i];
      chunk += std::to_string(digit);
      if (i + 1 < length) chunk += ',';
    }
    ++counts[chunk];
  }

  const double uniform = std::pow((double)base, -length);
  double max_dev = 0.0;
  for (const auto& [chunk, count] : counts) {
    double freq = (double)count / report.chunks;
    report.frequencies[chunk] = freq;
    max_dev = std::max(max_dev, std::abs(freq - uniform));
  }
  double total_chunks = std::pow((double)base, length);
  if ((double)counts.size() < total_chunks)
    max_dev = std::max(max_dev, uniform);  // some chunk never occurs
  report.max_deviation = max_dev;
  return report;
}

std::string to_string(McVerdict v) {
  switch (v) {
    case McVerdict::consistent_with_mc_finite: return "consistent-with-MC-finite";
    case McVerdict::inconsistent_on_prefix: return "inconsistent-on-prefix";
    case McVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

McReport mc_report(const SequenceRecord& record,
                   const std::vector<long>& moduli, int max_order) {
  McReport report;
  report.label = record.label;
  const int len = (int)record.values.size();

  for (long m : moduli) {
    McModulusReport mr;
    mr.modulus = m;
    std::vector<long> residues = reduce_mod(record.values, m);
    mr.period = detect_eventual_period(residues, m);
    try {
      mr.recurrence = find_modular_recurrence(residues, m, max_order);
    } catch (const std::invalid_argument&) {
      // prefix too short for synthesis at this order
    }
    if (mr.period)
      mr.verdict = McVerdict::consistent_with_mc_finite;
    else if (len < 24)
      mr.verdict = McVerdict::inconclusive;
    else
      mr.verdict = McVerdict::inconsistent_on_prefix;
    report.per_modulus.push_back(std::move(mr));
  }

  if (len >= 2 * max_order + 2) {
    report.integer = find_integer_recurrence(record.values, max_order);
  } else {
    int reduced = (len - 2) / 2;
    if (reduced >= 1)
      report.integer = find_integer_recurrence(record.values, reduced);
  }
  return report;
}

}  // namespace topo
