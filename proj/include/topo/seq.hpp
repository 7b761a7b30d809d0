#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topo/counting.hpp"

namespace topo {

// s(n+p) = sum_i c_i * s(n+i) for all n >= q, exact rational coefficients.
struct Recurrence {
  int order = 1;   // p
  int offset = 0;  // q
  std::vector<mpq_class> coeffs;  // c_0..c_{p-1}
};

// s(n+p) ≡ sum_i c_i * s(n+i) (mod m) for all n >= q.
struct ModularRecurrence {
  int modulus = 2;
  int order = 1;   // p_m
  int offset = 0;  // q_m
  std::vector<long> coeffs;  // residues mod m
};

struct PeriodReport {
  int modulus = 2;
  int preperiod = 0;   // q
  int period = 1;      // p
  double confidence = 0.0;  // (prefix length - q) / p, full periods covered
};

std::vector<long> reduce_mod(const std::vector<BigInt>& values, long m);

// Minimal (period, then preperiod) with s(i+p) = s(i) for all q <= i <=
// L-1-p, reported only when the prefix covers at least three full periods
// past the preperiod. Evidence, never proof.
std::optional<PeriodReport> detect_eventual_period(
    const std::vector<long>& residues, long m);

// Minimal-order recurrence mod m valid on the whole prefix from some offset
// q <= L/4 (order minimal first, then offset). Shift-register synthesis:
// Berlekamp-Massey over prime fields, the Reeds-Sloane extension for prime
// powers, CRT combination for composite m. Throws std::invalid_argument when
// the prefix is shorter than 2*max_order + 4 or m < 2.
std::optional<ModularRecurrence> find_modular_recurrence(
    const std::vector<long>& residues, long m, int max_order);

struct IntegerRecurrenceResult {
  std::optional<Recurrence> recurrence;
  // Rank of the order-d coefficient system for d = 1..max_order; attached as
  // evidence when no recurrence is found.
  std::vector<int> rank_profile;
};

// Smallest order p <= max_order (then smallest offset q <= L/4) whose linear
// system has an exact rational solution valid on the entire prefix from q;
// at least p+1 witness equations are required. Prefix must have at least
// 2*max_order + 2 terms.
IntegerRecurrenceResult find_integer_recurrence(
    const std::vector<BigInt>& values, int max_order);

struct ChunkFrequencyReport {
  int base = 2;
  int length = 1;
  long chunks = 0;  // floor(prefix / length) non-overlapping chunks
  std::map<std::string, double> frequencies;  // observed chunks only
  double max_deviation = 0.0;  // over all base^length chunks vs uniform
};

ChunkFrequencyReport chunk_frequencies(const std::vector<long>& residues,
                                       int base, int length);

enum class McVerdict { consistent_with_mc_finite, inconsistent_on_prefix, inconclusive };

std::string to_string(McVerdict v);

struct McModulusReport {
  long modulus = 2;
  std::optional<PeriodReport> period;
  std::optional<ModularRecurrence> recurrence;
  McVerdict verdict = McVerdict::inconclusive;
};

struct McReport {
  std::string label;
  std::vector<McModulusReport> per_modulus;
  IntegerRecurrenceResult integer;
};

// Per-modulus periodicity and recurrence evidence plus the integer-recurrence
// result. Verdicts are evidence on the prefix: consistent when a period with
// three covered repetitions exists, inconclusive when the prefix is too short
// to ask for one (under 24 terms), inconsistent-on-prefix otherwise.
McReport mc_report(const SequenceRecord& record,
                   const std::vector<long>& moduli, int max_order);

// Berlekamp-Massey over GF(p): the shortest register generating the whole
// sequence, as the connection polynomial a_0 = 1, a_1..a_L with
// sum_i a_i s(n-i) ≡ 0 (mod p) for n >= L.
struct LfsrSynthesis {
  int length = 0;
  std::vector<long> connection;
};

LfsrSynthesis berlekamp_massey(const std::vector<long>& seq, long p);

// Minimal-order recurrence for the whole sequence over Z_{p^e}:
// Berlekamp-Massey for e = 1, exact linear solving by p-adic lifting
// searched in increasing order otherwise. Returns coefficients c_1..c_d of
// s(n) = sum_j c_j s(n-j), or nullopt when no order <= max_order works.
std::optional<std::vector<long>> minimal_recurrence_prime_power(
    const std::vector<long>& seq, long p, int e, int max_order);

// A particular solution of A x ≡ b (mod p^e), or nullopt when none exists.
// Complete: carries the full mod-p solution space through each lifting layer.
std::optional<std::vector<long>> solve_linear_mod_prime_power(
    std::vector<std::vector<long>> a, std::vector<long> b, long p, int e);

}  // namespace topo
