// One line per acceptance criterion. Exit status is nonzero when any criterion fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bapa/alpha.hpp"
#include "bapa/ba_eliminator.hpp"
#include "bapa/normalizer.hpp"
#include "bapa/oracle.hpp"
#include "bapa/presburger.hpp"
#include "bapa/schema.hpp"
#include "bapa/text_format.hpp"
#include "../support/corpus.hpp"
#include "../support/pa_fuzz.hpp"

using namespace bapa;
using bapa::testing::CorpusGenerator;
using bapa::testing::CorpusOptions;

namespace {

// Pinned thresholds.
constexpr std::size_t kCorpusSize = 500;
constexpr unsigned kCorpusSeed = 20050601;
constexpr unsigned kMaxU = 4;
constexpr double kSizeConstant = 2.0;  // size(alpha(f)) <= C * n * S * 2^S, S' = max(S, 1)

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(BAPA_FIXTURE_DIR) + "/" + name);
  if (!in) throw Error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<int, std::pair<bool, std::string>> results;

void report(int n, bool ok, const std::string& detail) {
  results[n] = {ok, detail};
  std::fprintf(stderr, "[done] criterion %d\n", n);
}

template <class F>
void guarded(int n, F body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(n, false, std::string("exception: ") + e.what());
  }
}

bool same_structure(const Formula& a, const Formula& b) {
  return equal(canonical_rename(to_nnf(a)), canonical_rename(to_nnf(b)));
}

// ---------------------------------------------------------------------------

void criterion1() {
  auto t0 = Clock::now();
  Schema s = parse_schema(read_fixture("insert.schema"));
  Formula vc = correctness_vc(s, "insert");
  Formula vc_golden = parse_formula(read_fixture("insert_vc.bapa"));
  bool vc_ok = alpha_equivalent(vc, vc_golden);
  Formula image = alpha_translate(vc_golden);
  Formula image_golden = parse_formula(read_fixture("insert_vc.pa"));
  bool tr_ok = same_structure(image, image_golden);
  bool valid = decide(vc_golden) == Verdict::Valid;
  double secs = seconds_since(t0);
  std::ostringstream d;
  d << "vcgen~golden_vc=" << vc_ok << " translate~golden_image=" << tr_ok << " decide=" << (valid ? "valid" : "invalid")
    << " time=" << secs << "s (<1s)";
  report(1, vc_ok && tr_ok && valid && secs < 1.0, d.str());
}

struct CorpusRow {
  Formula f;
  Formula image;
  std::vector<bool> oracle_at;  // u = 0..kMaxU
};

std::vector<CorpusRow> corpus_rows;

void criteria_2_4_5() {
  auto t0 = Clock::now();
  CorpusGenerator gen(kCorpusSeed);
  std::size_t agree = 0, total = 0, alt_ok = 0;
  double worst_ratio = 0;
  std::string first_bad;
  for (const Formula& f : gen.batch(kCorpusSize)) {
    CorpusRow row{f, alpha_translate(f), {}};
    bool all = true;
    for (unsigned u = 0; u <= kMaxU; ++u) {
      bool o = oracle(f, u);
      bool p = pa_decide(instantiate_universe(row.image, u)) == Verdict::Valid;
      row.oracle_at.push_back(o);
      ++total;
      if (o == p) ++agree;
      else all = false;
    }
    if (!all && first_bad.empty()) first_bad = to_text(f);
    Metrics in = measure(f), out = measure(row.image);
    if (in.alternations == out.alternations) ++alt_ok;
    double S = std::max<double>(1, static_cast<double>(in.set_vars));
    double ratio = static_cast<double>(out.size) /
                   (static_cast<double>(in.size) * S * std::pow(2.0, static_cast<double>(in.set_vars)));
    worst_ratio = std::max(worst_ratio, ratio);
    corpus_rows.push_back(std::move(row));
  }
  double secs = seconds_since(t0);
  std::ostringstream d2;
  d2 << agree << "/" << total << " (sentence, u) pairs agree over " << kCorpusSize
     << " sentences, time=" << secs << "s (<600s)";
  if (!first_bad.empty()) d2 << " first disagreement: " << first_bad;
  report(2, agree == total && secs < 600, d2.str());

  std::ostringstream d4;
  d4 << alt_ok << "/" << corpus_rows.size() << " sentences keep their alternation count";
  report(4, alt_ok == corpus_rows.size(), d4.str());

  std::ostringstream d5;
  d5 << "max size(alpha f)/(n S 2^S) = " << worst_ratio << " <= C = " << kSizeConstant;
  report(5, worst_ratio <= kSizeConstant, d5.str());
}

// Elimination rule check: exists y with |b_i & y| ~ k_i and |b_i & ~y| ~ l_i for disjoint b_i, against
// |b_i| ~ k_i + l_i and against the eliminator's output.
void criterion3() {
  auto t0 = Clock::now();
  std::size_t instances = 0, ok = 0;
  std::string first_bad;
  for (int n = 1; n <= 2; ++n) {
    int shapes = 1 << (2 * n);  // per block: exact or at-least for the y and the ~y part
    int kls = 1;
    for (int i = 0; i < 2 * n; ++i) kls *= 5;
    for (int shape = 0; shape < shapes; ++shape) {
      for (int kl = 0; kl < kls; ++kl) {
        std::vector<int> k(n), l(n);
        std::vector<bool> k_exact(n), l_exact(n);
        int code = kl;
        for (int i = 0; i < n; ++i) {
          k[i] = code % 5, code /= 5;
          l[i] = code % 5, code /= 5;
          k_exact[i] = ((shape >> (2 * i)) & 1) == 0;
          l_exact[i] = ((shape >> (2 * i + 1)) & 1) == 0;
        }
        std::vector<Formula> lits;
        for (int i = 0; i < n; ++i) {
          SetTerm b = set_var("b" + std::to_string(i + 1));
          IntTerm in = card(set_inter(b, set_var("y")));
          IntTerm out = card(set_inter(b, set_compl(set_var("y"))));
          lits.push_back(k_exact[i] ? int_eq(in, int_const(k[i])) : int_ge(in, int_const(k[i])));
          lits.push_back(l_exact[i] ? int_eq(out, int_const(l[i])) : int_ge(out, int_const(l[i])));
        }
        Formula elim = ba_eliminate_innermost(lits, "y");
        int sizes = n == 1 ? 5 : 25;
        for (int sz = 0; sz < sizes; ++sz) {
          std::vector<int> size(n);
          size[0] = sz % 5;
          if (n == 2) size[1] = sz / 5;
          unsigned u = 0;
          std::vector<std::uint64_t> block(n);
          for (int i = 0; i < n; ++i) {
            block[i] = ((std::uint64_t{1} << size[i]) - 1) << u;
            u += static_cast<unsigned>(size[i]);
          }
          bool one = false;
          for (std::uint64_t y = 0; y < (std::uint64_t{1} << u) && !one; ++y) {
            bool sat = true;
            for (int i = 0; i < n && sat; ++i) {
              int in = std::popcount(block[i] & y), out = std::popcount(block[i] & ~y);
              sat = (k_exact[i] ? in == k[i] : in >= k[i]) && (l_exact[i] ? out == l[i] : out >= l[i]);
            }
            one = sat;
          }
          bool two = true;
          for (int i = 0; i < n; ++i) {
            bool exact = k_exact[i] && l_exact[i];
            two = two && (exact ? size[i] == k[i] + l[i] : size[i] >= k[i] + l[i]);
          }
          FiniteModel m;
          m.u = u;
          for (int i = 0; i < n; ++i) m.sets["b" + std::to_string(i + 1)] = block[i];
          bool three = evaluate(elim, m, {IntBackend::PaExact, std::nullopt, false});
          ++instances;
          if (one == two && two == three) ++ok;
          else if (first_bad.empty()) first_bad = to_text(conj(lits));
        }
      }
    }
  }
  double secs = seconds_since(t0);
  std::ostringstream d;
  d << ok << "/" << instances << " instances (n<=2, |b|<=4, k,l<=4, four rule shapes), time=" << secs
    << "s (<60s)";
  if (!first_bad.empty()) d << " first failure: " << first_bad;
  report(3, ok == instances && secs < 60, d.str());
}

// Every assignment of the free set variables over a universe of size u.
bool equivalent_on_models(const Formula& a, const Formula& b, unsigned u) {
  std::vector<std::string> names;
  for (const auto& [n, s] : free_vars(a)) names.push_back(n);
  std::uint64_t full = (std::uint64_t{1} << u) - 1;
  std::size_t combos = std::size_t{1} << (u * names.size());
  for (std::size_t c = 0; c < combos; ++c) {
    FiniteModel m;
    m.u = u;
    for (std::size_t i = 0; i < names.size(); ++i) m.sets[names[i]] = (c >> (i * u)) & full;
    OracleOptions o;
    o.parallel = false;
    if (evaluate(a, m, o) != evaluate(b, m, o)) return false;
  }
  return true;
}

void criterion6() {
  auto t0 = Clock::now();
  std::size_t ok = 0, n = 0;
  std::string first_bad;
  for (int free = 0; free <= 2; ++free) {
    CorpusOptions opt;
    opt.pure_ba = true;
    opt.max_const = 2;
    opt.free_sets = free;
    opt.max_depth = 4;
    opt.use_maxc = false;
    CorpusGenerator gen(kCorpusSeed + 17 + static_cast<unsigned>(free), opt);
    for (int i = 0; i < 80; ++i) {
      Formula f = gen.next();
      Formula q = ba_eliminate(f);
      bool good = quantifier_free(q);
      for (unsigned u = 0; u <= kMaxU && good; ++u) good = equivalent_on_models(f, q, u);
      ++n;
      if (good) ++ok;
      else if (first_bad.empty()) first_bad = to_text(f);
    }
  }
  double secs = seconds_since(t0);
  std::ostringstream d;
  d << ok << "/" << n << " pure-BA formulas quantifier-free and equivalent for u<=4, time=" << secs
    << "s (<300s)";
  if (!first_bad.empty()) d << " first failure: " << first_bad;
  report(6, ok == n && n >= 200 && secs < 300, d.str());
}

void criterion7() {
  bapa::testing::PaFuzzer fuzz(kCorpusSeed + 7);
  std::size_t ok = 0, n = 0;
  std::string first_bad;
  for (int i = 0; i < 250; ++i) {
    bapa::testing::PaCase c = fuzz.next();
    bool good = true;
    Formula q = pa_qe(c.formula);
    good = quantifier_free(q);
    if (c.free.empty()) {
      bapa::testing::IntEnv env;
      good = good && (pa_decide(c.formula) == Verdict::Valid) == bapa::testing::brute_eval(c.formula, env, c.bound);
    }
    std::vector<long> sample = {-7, -3, -1, 0, 1, 2, 5};
    std::size_t points = 1;
    for (std::size_t v = 0; v < c.free.size(); ++v) points *= sample.size();
    for (std::size_t p = 0; p < points && good; ++p) {
      bapa::testing::IntEnv env;
      Env benv;
      std::size_t code = p;
      for (const auto& name : c.free) {
        long v = sample[code % sample.size()];
        code /= sample.size();
        env[name] = v;
        benv[name] = v;
      }
      good = pa_eval(q, benv) == bapa::testing::brute_eval(c.formula, env, c.bound);
    }
    ++n;
    if (good) ++ok;
    else if (first_bad.empty()) first_bad = to_text(c.formula);
  }

  // The positive-literal rewrites on sampled integers.
  std::size_t id_ok = 0, id_n = 0;
  Formula eq = int_eq(int_var("s"), int_var("t"));
  Formula nlt = neg(int_lt(int_var("s"), int_var("t")));
  for (long s = -12; s <= 12; ++s)
    for (long t = -12; t <= 12; ++t) {
      Env env{{"s", s}, {"t", t}};
      Formula eq_rw = normalize_atoms(eq, true);
      Formula nlt_rw = normalize_atoms(nlt, true);
      id_ok += (pa_eval(eq_rw, env) == (s == t)) ? 1 : 0;
      id_ok += (pa_eval(nlt_rw, env) == !(s < t)) ? 1 : 0;
      id_n += 2;
    }
  for (long c = 1; c <= 6; ++c) {
    Formula ndvd = neg(dvd(c, int_var("t")));
    Formula rw = normalize_atoms(ndvd, true);
    for (long t = -20; t <= 20; ++t) {
      id_ok += (pa_eval(rw, {{"t", t}}) == (bapa::testing::floor_mod(t, c) != 0)) ? 1 : 0;
      ++id_n;
    }
  }
  std::ostringstream d;
  d << ok << "/" << n << " fuzzed PA formulas agree with enumeration (guards |x|<=4, free vars sampled in [-7,5]); "
    << id_ok << "/" << id_n << " rewrite identity points";
  if (!first_bad.empty()) d << " first failure: " << first_bad;
  report(7, ok == n && n >= 200 && id_ok == id_n, d.str());
}

Formula bounded_family(int s) {
  // all x1. ex x2. all x3 ... : the sets meet or the last one is empty.
  std::vector<std::string> names;
  for (int i = 1; i <= s; ++i) names.push_back("x" + std::to_string(i));
  SetTerm all = set_var(names[0]);
  for (int i = 1; i < s; ++i) all = set_inter(all, set_var(names[static_cast<std::size_t>(i)]));
  Formula f = disj2(neg(set_eq(all, set_empty())), set_eq(set_var(names.back()), set_empty()));
  for (int i = s - 1; i >= 0; --i)
    f = quantify(i % 2 == 0 ? FKind::Forall : FKind::Exists, names[static_cast<std::size_t>(i)], Sort::Set, f);
  return f;
}

void criterion8() {
  CorpusOptions opt;
  opt.pure_ba = true;
  opt.cardinality_free = true;
  opt.use_maxc = false;
  CorpusGenerator gen(kCorpusSeed + 8, opt);
  std::size_t ok = 0, n = 0;
  std::string first_bad;
  for (int i = 0; i < 200; ++i) {
    Formula f = gen.next();
    Formula g = alpha_translate(f);
    for (unsigned u = 0; u <= kMaxU; ++u) {
      bool b = pa_eval_bounded(g, u);
      bool p = pa_decide(instantiate_universe(g, u)) == Verdict::Valid;
      ++n;
      if (b == p) ++ok;
      else if (first_bad.empty()) first_bad = to_text(f);
    }
  }
  // Peak stats on the family: constant in u once u >= 2^S, growing with S.
  bool flat = true, grows = true;
  std::size_t prev = 0;
  std::ostringstream fam;
  for (int s = 1; s <= 4; ++s) {
    Formula g = alpha_translate(bounded_family(s));
    std::size_t first = 0;
    std::vector<BigInt> us = {BigInt(1) << s, BigInt(1000), BigInt(1000000), BigInt("1000000000000")};
    for (std::size_t j = 0; j < us.size(); ++j) {
      BoundedEvalStats st;
      pa_eval_bounded(g, us[j], &st);
      std::size_t mem = st.peak_frames * st.peak_values;
      if (j == 0) first = mem;
      else flat = flat && mem == first;
    }
    grows = grows && first > prev;
    prev = first;
    fam << " S=" << s << ":" << first;
  }
  std::ostringstream d;
  d << ok << "/" << n << " bounded vs exact on pure-BA images; peak frames*values per S (u from 2^S to 1e12):"
    << fam.str() << (flat ? " flat in u" : " NOT flat in u") << (grows ? ", grows with S" : ", does not grow with S");
  if (!first_bad.empty()) d << " first failure: " << first_bad;
  report(8, ok == n && flat && grows, d.str());
}

void criterion9() {
  struct Fixture {
    const char* text;
    ModelClass mode;
    Verdict expected;
  };
  std::vector<Fixture> fixtures = {
      {"fin(univ)", ModelClass::InfiniteUniverse, Verdict::Invalid},
      {"~fin(univ) => card(univ) = 0", ModelClass::InfiniteUniverse, Verdict::Valid},
      {"ex set y. ~fin(y)", ModelClass::AllModels, Verdict::Invalid},
      {"fin(univ)", ModelClass::FiniteUniverse, Verdict::Valid},
      {"ex set y. ~fin(y)", ModelClass::InfiniteUniverse, Verdict::Valid},
      {"all set y. fin(y) | fin(compl(y))", ModelClass::AllModels, Verdict::Invalid},
  };
  std::size_t fix_ok = 0;
  for (const auto& fx : fixtures) {
    AlphaOptions o;
    o.mode = fx.mode;
    if (decide(parse_formula(fx.text), o) == fx.expected) ++fix_ok;
  }
  // Finite mode on the plain corpus: with fin(univ) conjoined, the image decides the
  // same truth value as plain enumeration at every universe size.
  std::size_t ok = 0;
  for (const auto& row : corpus_rows) {
    Formula g = alpha_translate(conj2(fin_u(), row.f));
    bool consistent = true;
    for (unsigned u = 0; u <= kMaxU && consistent; ++u)
      consistent = (pa_decide(instantiate_universe(g, u)) == Verdict::Valid) == row.oracle_at[u];
    if (consistent) ++ok;
  }
  std::ostringstream d;
  d << fix_ok << "/" << fixtures.size() << " model-class fixtures; " << ok << "/" << corpus_rows.size()
    << " corpus sentences agree with plain enumeration in finite mode, u <= " << kMaxU;
  report(9, fix_ok == fixtures.size() && ok == corpus_rows.size() && !corpus_rows.empty(), d.str());
}

void criterion10() {
  CorpusOptions opt;
  opt.max_sets = 2;
  CorpusGenerator gen(kCorpusSeed + 10, opt);
  std::size_t ok = 0, n = 0;
  std::string first_bad;
  AlphaOptions inter;
  inter.strategy = Strategy::Interleaved;
  for (int i = 0; i < 100; ++i) {
    Formula f = gen.next();
    ++n;
    if (decide(f) == decide(f, inter)) ++ok;
    else if (first_bad.empty()) first_bad = to_text(f);
  }
  std::ostringstream d;
  d << ok << "/" << n << " verdicts identical (alpha vs interleaved, <=2 set variables)";
  if (!first_bad.empty()) d << " first failure: " << first_bad;
  report(10, ok == n, d.str());
}

}  // namespace

int main() {
  guarded(1, criterion1);
  guarded(2, criteria_2_4_5);
  guarded(3, criterion3);
  guarded(6, criterion6);
  guarded(7, criterion7);
  guarded(8, criterion8);
  guarded(9, criterion9);
  guarded(10, criterion10);
  int failures = 0;
  for (const auto& [n, r] : results) {
    std::printf("criterion %2d: %s  %s\n", n, r.first ? "PASS" : "FAIL", r.second.c_str());
    if (!r.first) ++failures;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
