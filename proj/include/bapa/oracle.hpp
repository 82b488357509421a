#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bapa/formula.hpp"

namespace bapa {

enum class IntBackend { PaExact, Bounded };

struct OracleOptions {
  IntBackend backend = IntBackend::PaExact;
  // Bounded backend range [-B, B]; default 2u + 10 + largest constant in f.
  std::optional<BigInt> bound;
  bool parallel = true;
};

// Explicit finite model over the universe {0..u-1}. Set values are bitmasks.
struct FiniteModel {
  unsigned u = 0;
  std::map<std::string, std::uint64_t> sets;
  std::map<std::string, BigInt> ints;
  std::map<std::string, bool> props;
};

inline constexpr unsigned kOracleMaxUniverse = 6;
inline constexpr std::uint64_t kOracleMaxCost = std::uint64_t{1} << 24;

// Enumeration cost 2^(u * set variables); throws ResourceError above kOracleMaxCost.
std::uint64_t oracle_cost(const Formula& f, unsigned u);

// Truth of f in m (u <= 63); every free variable of f must be bound by m.
bool evaluate(const Formula& f, const FiniteModel& m, const OracleOptions& opt = {});

// Truth of a sentence in the universe of size u. The parallel and serial variants
// return the same value; the serial one is the reference implementation.
bool oracle(const Formula& f, unsigned u, const OracleOptions& opt = {});
bool oracle_serial(const Formula& f, unsigned u, const OracleOptions& opt = {});

std::vector<std::pair<unsigned, bool>> oracle_sweep(const Formula& f, unsigned u_max,
                                                    const OracleOptions& opt = {});

BigInt default_bound(const Formula& f, unsigned u);

}  // namespace bapa
